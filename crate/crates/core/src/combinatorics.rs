//! The cyclotomic constants C(a_1..a_r), their symmetrization SymC, the bracket
//! combination C[a_0..a_r], and executable checks of the identities they satisfy.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, CycScalar, Rat};
use crate::rootsys::RootData;
use crate::series::YPoly;

/// Outcome of an exact identity check.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub claim: String,
    pub lhs: Value,
    pub rhs: Value,
    pub pass: bool,
}

fn scalar_json(c: &CycScalar) -> Value {
    serde_json::to_value(c).expect("scalar serializes")
}

fn ypoly_json(p: &YPoly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_json).collect())
}

/// Remainder of `b` modulo `h` in `0..h`.
pub fn mod_residue(b: i64, h: u32) -> u32 {
    b.rem_euclid(h as i64) as u32
}

fn check_entries(rd: &RootData, a: &[u32], max: u32) -> Result<()> {
    if let Some(&bad) = a.iter().find(|&&x| x == 0 || x > max) {
        return Err(Error::IndexOutOfRange(format!("entry {bad} not in 1..={max} (h = {})", rd.h())));
    }
    Ok(())
}

fn check_sorted(a: &[u32]) -> Result<()> {
    if a.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(format!("tuple {a:?} is not weakly increasing")));
    }
    Ok(())
}

/// `sum_{j_1 < ... < j_r} prod_s eta^{-j_s a_s} / (1 - eta^{j_s})` over `j` in `1..h-1`.
pub fn c_const(rd: &RootData, a: &[u32]) -> Result<CycScalar> {
    check_entries(rd, a, rd.n())?;
    let ctx = rd.ctx();
    let h = rd.h();
    if a.is_empty() {
        return Ok(CycScalar::one(ctx));
    }
    if a.len() as u32 > h - 1 {
        return Ok(CycScalar::zero(ctx));
    }
    // acc[j] = sum over increasing chains ending exactly at j.
    let mut acc: Vec<CycScalar> = (1..h).map(|j| rd.c_factor(j, a[0]).clone()).collect();
    for &ai in &a[1..] {
        let mut next = vec![CycScalar::zero(ctx); (h - 1) as usize];
        let mut prefix = CycScalar::zero(ctx);
        for j in 1..h {
            let idx = (j - 1) as usize;
            if !prefix.is_zero() {
                next[idx] = &prefix * rd.c_factor(j, ai);
            }
            prefix.add_assign_ref(&acc[idx]);
        }
        acc = next;
    }
    Ok(acc.iter().fold(CycScalar::zero(ctx), |s, x| &s + x))
}

/// Sum of `C` over the distinct orderings of a multiset.
///
/// Computed as the coefficient of `prod z_v^{m_v}` in `prod_j (1 + sum_v f_j(v) z_v)`,
/// which is the same sum organised by the increasing index chain.
pub fn sym_c(rd: &RootData, multiset: &[u32]) -> Result<CycScalar> {
    check_entries(rd, multiset, rd.n())?;
    let ctx = rd.ctx();
    let h = rd.h();
    if multiset.len() as u32 > h - 1 {
        return Ok(CycScalar::zero(ctx));
    }
    let mut sorted = multiset.to_vec();
    sorted.sort_unstable();
    let mut values: Vec<u32> = Vec::new();
    let mut mults: Vec<usize> = Vec::new();
    for &v in &sorted {
        if values.last() == Some(&v) {
            *mults.last_mut().unwrap() += 1;
        } else {
            values.push(v);
            mults.push(1);
        }
    }
    let mut strides = vec![1usize; values.len()];
    for k in 1..values.len() {
        strides[k] = strides[k - 1] * (mults[k - 1] + 1);
    }
    let states = strides.last().map_or(1, |s| s * (mults.last().unwrap() + 1));
    let digit = |state: usize, k: usize| (state / strides[k]) % (mults[k] + 1);

    let mut dp = vec![CycScalar::zero(ctx); states];
    dp[0] = CycScalar::one(ctx);
    for j in 1..h {
        let mut next = dp.clone();
        for (state, val) in dp.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            for k in 0..values.len() {
                if digit(state, k) < mults[k] {
                    let term = val * rd.c_factor(j, values[k]);
                    next[state + strides[k]].add_assign_ref(&term);
                }
            }
        }
        dp = next;
    }
    Ok(dp.pop().expect("at least one state"))
}

/// `SymC` by literally summing `C` over the distinct permutations.
pub fn sym_c_by_permutations(rd: &RootData, multiset: &[u32]) -> Result<CycScalar> {
    let mut perm = multiset.to_vec();
    perm.sort_unstable();
    let mut acc = CycScalar::zero(rd.ctx());
    loop {
        acc.add_assign_ref(&c_const(rd, &perm)?);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(acc)
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `C[a_0..a_r] = sum_i (1/m_i) SymC(a without a_i)`, with `C[a_0] = 1` and zero beyond length h.
pub fn c_bracket(rd: &RootData, tuple: &[u32]) -> Result<CycScalar> {
    check_entries(rd, tuple, rd.n())?;
    check_sorted(tuple)?;
    let ctx = rd.ctx();
    match tuple.len() {
        0 => return Err(Error::InvalidArgument("C[] needs at least one entry".into())),
        1 => return Ok(CycScalar::one(ctx)),
        len if len as u32 > rd.h() => return Ok(CycScalar::zero(ctx)),
        _ => {}
    }
    // The m_i copies of a value each contribute SymC(rest)/m_i.
    let mut acc = CycScalar::zero(ctx);
    for (i, &v) in tuple.iter().enumerate() {
        if i > 0 && tuple[i - 1] == v {
            continue;
        }
        let mut rest = tuple.to_vec();
        rest.remove(i);
        acc.add_assign_ref(&sym_c(rd, &rest)?);
    }
    Ok(acc)
}

fn with_tail(b: &[u32], value: u32, m: usize) -> Vec<u32> {
    let mut t = b.to_vec();
    t.extend(std::iter::repeat_n(value, m));
    t
}

/// `C[b, N^m] = (-1)^m binom([sum b]_h, m) C[b]`.
pub fn verify_remove_n(rd: &RootData, b: &[u32], m: usize) -> Result<VerifyReport> {
    if b.is_empty() {
        return Err(Error::InvalidArgument("b must be non-empty".into()));
    }
    check_entries(rd, b, rd.n() - 1)?;
    check_sorted(b)?;
    let n = rd.n();
    let lhs = c_bracket(rd, &with_tail(b, n, m))?;
    let s = mod_residue(b.iter().map(|&x| x as i64).sum(), rd.h());
    let mut factor = binomial(s as u64, m as u64);
    if m % 2 == 1 {
        factor = -factor;
    }
    let rhs = c_bracket(rd, b)?.scale(&factor);
    Ok(VerifyReport {
        claim: format!("C[{b:?} + {m} x {n}] = (-1)^{m} binom({s}, {m}) C[{b:?}] at h = {}", rd.h()),
        pass: lhs == rhs,
        lhs: scalar_json(&lhs),
        rhs: scalar_json(&rhs),
    })
}

/// Default truncation degree for the Y-series in [`verify_symc_generating`].
pub fn default_ycap(rd: &RootData, a: &[u32]) -> usize {
    a.len() + rd.h() as usize + 2
}

/// Ordered sequences of pairwise distinct numbers in `1..=n` of length `r`.
fn distinct_sequences(n: u32, r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(n: u32, r: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in 1..=n {
            if !cur.contains(&i) {
                cur.push(i);
                rec(n, r, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, r, &mut cur, &mut out);
    out
}

/// `prod_v (multiplicity of v in a)!`.
fn automorphisms(a: &[u32]) -> Rat {
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    let mut out = 1i64;
    let mut run = 0i64;
    for (k, v) in sorted.iter().enumerate() {
        run = if k > 0 && sorted[k - 1] == *v { run + 1 } else { 1 };
        out *= run;
    }
    Rat::from_int(out)
}

/// Generating function of `SymC` with trailing `N`s, compared up to `Y^ycap`. The left
/// side carries the factor `|Aut(a)|`, the count of orderings of `a` that the sum over
/// distinct label sequences on the right tells apart.
pub fn verify_symc_generating(rd: &RootData, a: &[u32], ycap: Option<usize>) -> Result<VerifyReport> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("a must be non-empty".into()));
    }
    check_entries(rd, a, rd.n() - 1)?;
    let mut a = a.to_vec();
    a.sort_unstable();
    let ctx = rd.ctx();
    let h = rd.h() as usize;
    let n = rd.n();

    // The right side runs over sequences of distinct labels, which counts each
    // ordering of repeated entries of `a` separately.
    let aut = automorphisms(&a);
    let mut lhs = YPoly::zero(ctx);
    for m in 0..h.saturating_sub(a.len()) {
        let s = sym_c(rd, &with_tail(&a, n, m))?.scale(&aut);
        lhs = lhs.add(&YPoly::one_minus_y_pow(ctx, m).scale(&s));
    }
    let ycap = ycap.unwrap_or_else(|| default_ycap(rd, &a));
    if lhs.degree().is_some_and(|d| d > ycap) {
        return Err(Error::InvalidArgument(format!("ycap {ycap} below the LHS degree")));
    }

    let geometric = |z: &CycScalar| {
        let mut coeffs = Vec::with_capacity(ycap + 1);
        let mut p = CycScalar::one(ctx);
        for _ in 0..=ycap {
            coeffs.push(p.clone());
            p = &p * z;
        }
        YPoly::from_coeffs(ctx, coeffs)
    };
    let mut sum = YPoly::zero(ctx);
    for seq in distinct_sequences(n, a.len()) {
        let mut term = YPoly::constant(CycScalar::one(ctx));
        for (&i, &aj) in seq.iter().zip(&a) {
            let g = geometric(&rd.eta(i as i64)).scale(&rd.eta(-((i * aj) as i64)));
            term = term.mul_truncated(&g, ycap);
        }
        sum = sum.add(&term);
    }
    let prefactor = geometric(&CycScalar::one(ctx)).truncate(h - 1).scale_rat(&Rat::new(1, h as i64));
    let rhs = prefactor.mul_truncated(&sum, ycap);

    Ok(VerifyReport {
        claim: format!(
            "sum_m {aut} SymC[{a:?} + m x {n}] (1-Y)^m matches its generating series to Y^{ycap} at h = {h}"
        ),
        pass: lhs == rhs,
        lhs: ypoly_json(&lhs),
        rhs: ypoly_json(&rhs),
    })
}

/// `sum_m C[a, N^m] (1-Y)^m = Y^{[sum a]_h} C[a]`.
pub fn verify_cbracket_generating(rd: &RootData, a: &[u32]) -> Result<VerifyReport> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("a must be non-empty".into()));
    }
    // Entries equal to N are accepted; the identity is then checked as literally stated.
    check_entries(rd, a, rd.n())?;
    let mut a = a.to_vec();
    a.sort_unstable();
    let ctx = rd.ctx();
    let h = rd.h() as usize;
    let n = rd.n();

    let mut lhs = YPoly::zero(ctx);
    for m in 0..=h.saturating_sub(a.len()) {
        let c = c_bracket(rd, &with_tail(&a, n, m))?;
        lhs = lhs.add(&YPoly::one_minus_y_pow(ctx, m).scale(&c));
    }
    let s = mod_residue(a.iter().map(|&x| x as i64).sum(), rd.h()) as usize;
    let rhs = YPoly::monomial(c_bracket(rd, &a)?, s);

    Ok(VerifyReport {
        claim: format!("sum_m C[{a:?} + m x {n}] (1-Y)^m = Y^{s} C[{a:?}] at h = {h}"),
        pass: lhs == rhs,
        lhs: ypoly_json(&lhs),
        rhs: ypoly_json(&rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    fn as_rat(c: CycScalar) -> Rat {
        c.to_rational().unwrap()
    }

    #[test]
    fn a3_constants() {
        let rd = RootData::new(3).unwrap();
        assert_eq!(as_rat(c_const(&rd, &[1, 2]).unwrap()), r(1, 2));
        assert_eq!(as_rat(c_const(&rd, &[2, 1]).unwrap()), r(1, 2));
        assert!(c_const(&rd, &[1, 1]).unwrap().is_zero());
        assert!(c_const(&rd, &[2, 2]).unwrap().is_zero());
        assert_eq!(as_rat(c_const(&rd, &[1, 1, 1]).unwrap()), r(-1, 4));
        let eta = rd.eta(1);
        let half = r(1, 2);
        let want13 = (&eta - &CycScalar::one(rd.ctx())).scale(&half);
        let want31 = (&(-eta) - &CycScalar::one(rd.ctx())).scale(&half);
        assert_eq!(c_const(&rd, &[1, 3]).unwrap(), want13);
        assert_eq!(c_const(&rd, &[3, 1]).unwrap(), want31);
        assert!(c_const(&rd, &[]).unwrap().is_one());
        assert!(c_const(&rd, &[1, 1, 1, 1]).unwrap().is_zero());
        assert!(c_const(&rd, &[4]).is_err());
    }

    #[test]
    fn symmetrized_constants() {
        let rd = RootData::new(3).unwrap();
        assert!(sym_c(&rd, &[1, 2]).unwrap().is_one());
        assert!(sym_c(&rd, &[1, 1]).unwrap().is_zero());
        assert_eq!(sym_c(&rd, &[3]).unwrap(), c_const(&rd, &[3]).unwrap());
        assert!(sym_c(&rd, &[]).unwrap().is_one());
        for n in 2..=5 {
            let rd = RootData::new(n).unwrap();
            for len in 1..=3 {
                for t in crate::rootsys::weakly_increasing(len, n) {
                    assert_eq!(sym_c(&rd, &t).unwrap(), sym_c_by_permutations(&rd, &t).unwrap(), "{t:?}");
                }
            }
        }
    }

    #[test]
    fn symc_matches_aut_normalized_full_sum() {
        let rd = RootData::new(4).unwrap();
        let t = [1u32, 1, 3];
        let mut full = CycScalar::zero(rd.ctx());
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let perm: Vec<u32> = p.iter().map(|&i| t[i]).collect();
            full.add_assign_ref(&c_const(&rd, &perm).unwrap());
        }
        assert_eq!(full.scale(&r(1, 2)), sym_c(&rd, &t).unwrap());
    }

    #[test]
    fn bracket_examples() {
        let rd = RootData::new(1).unwrap();
        assert_eq!(as_rat(c_bracket(&rd, &[1, 1]).unwrap()), r(-1, 2));
        let rd = RootData::new(3).unwrap();
        assert!(c_bracket(&rd, &[2]).unwrap().is_one());
        let want = &c_const(&rd, &[3]).unwrap() + &c_const(&rd, &[1]).unwrap();
        assert_eq!(c_bracket(&rd, &[1, 3]).unwrap(), want);
        assert!(c_bracket(&rd, &[1, 1, 1, 1, 1]).unwrap().is_zero());
        assert!(c_bracket(&rd, &[3, 1]).is_err());
    }

    #[test]
    fn remove_n_examples() {
        let rd = RootData::new(3).unwrap();
        let rep = verify_remove_n(&rd, &[1, 1], 2).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(verify_remove_n(&rd, &[1], 0).unwrap().pass);
        // [1+2]_4 = 3, so m = 4 must vanish
        let rep = verify_remove_n(&rd, &[1, 2], 4).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs, scalar_json(&CycScalar::zero(rd.ctx())));
    }

    #[test]
    fn symc_generating_h3() {
        let rd = RootData::new(2).unwrap();
        let rep = verify_symc_generating(&rd, &[1], Some(6)).unwrap();
        assert!(rep.pass, "{rep:?}");
        let third = CycScalar::from_rat(rd.ctx(), r(1, 3));
        assert_eq!(rep.lhs, Value::Array(vec![scalar_json(&-third.clone()), scalar_json(&third)]));
    }

    #[test]
    fn cbracket_generating_h4() {
        let rd = RootData::new(3).unwrap();
        assert!(verify_cbracket_generating(&rd, &[1, 2]).unwrap().pass);
        assert!(verify_cbracket_generating(&rd, &[2, 2]).unwrap().pass);
        assert!(verify_cbracket_generating(&rd, &[1, 3]).unwrap().pass);
        assert!(verify_cbracket_generating(&rd, &[4]).is_err());
    }
}
