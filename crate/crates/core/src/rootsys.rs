//! A_N root-system data at the origin: the chi/gamma bases of the Cartan
//! subalgebra, its pairing, and polynomial states in Sym(h).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::exactnum::{CycContext, CycScalar, Rat};

/// Rank `n`, Coxeter number `h = n + 1`, and tables shared by everything built on top.
#[derive(Debug)]
pub struct RootData {
    n: u32,
    h: u32,
    ctx: Arc<CycContext>,
    gram: Vec<Vec<CycScalar>>,
    /// `c_factor[j-1][a-1] = eta^{-ja} / (1 - eta^j)` for j, a in 1..h-1.
    c_factor: Vec<Vec<CycScalar>>,
}

impl RootData {
    pub fn new(n: u32) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        let h = n + 1;
        let ctx = CycContext::get(h);
        let eta = |k: i64| CycScalar::eta_pow(&ctx, k);

        // chi_i = sum_a eta^{-ia} gamma_a inverts to gamma_a = (1/h) sum_i eta^{ia} chi_i.
        let hinv = Rat::new(1, h as i64);
        let chi_pair = |i: u32, j: u32| {
            let base = Rat::new(-1, h as i64);
            if i == j {
                base + Rat::one()
            } else {
                base
            }
        };
        let mut gram = vec![vec![CycScalar::zero(&ctx); n as usize]; n as usize];
        for a in 1..=n {
            for b in 1..=n {
                let mut acc = CycScalar::zero(&ctx);
                for i in 1..=h {
                    for j in 1..=h {
                        let w = eta((i * a + j * b) as i64).scale(&chi_pair(i, j));
                        acc.add_assign_ref(&w);
                    }
                }
                gram[(a - 1) as usize][(b - 1) as usize] = acc.scale(&(&hinv * &hinv));
            }
        }

        let mut c_factor = Vec::with_capacity(n as usize);
        for j in 1..h {
            let den = (&CycScalar::one(&ctx) - &eta(j as i64)).inv()?;
            c_factor.push((1..h).map(|a| &eta(-((j * a) as i64)) * &den).collect());
        }

        Ok(Arc::new(RootData { n, h, ctx, gram, c_factor }))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn ctx(&self) -> &Arc<CycContext> {
        &self.ctx
    }

    pub fn eta(&self, k: i64) -> CycScalar {
        CycScalar::eta_pow(&self.ctx, k)
    }

    pub fn gram(&self) -> &[Vec<CycScalar>] {
        &self.gram
    }

    pub(crate) fn c_factor(&self, j: u32, a: u32) -> &CycScalar {
        &self.c_factor[(j - 1) as usize][(a - 1) as usize]
    }

    pub fn zero_vector(&self) -> HVector {
        HVector { coeffs: vec![CycScalar::zero(&self.ctx); self.n as usize] }
    }

    pub fn gamma(&self, a: u32) -> Result<HVector> {
        self.check_label(a, self.n, "gamma")?;
        let mut v = self.zero_vector();
        v.coeffs[(a - 1) as usize] = CycScalar::one(&self.ctx);
        Ok(v)
    }

    /// `chi_i = sum_a eta^{-ia} gamma_a`.
    pub fn chi(&self, i: u32) -> Result<HVector> {
        self.check_label(i, self.h, "chi")?;
        Ok(HVector { coeffs: (1..=self.n).map(|a| self.eta(-((i * a) as i64))).collect() })
    }

    pub fn pairing(&self, u: &HVector, v: &HVector) -> CycScalar {
        let mut acc = CycScalar::zero(&self.ctx);
        for (a, ua) in u.coeffs.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.coeffs.iter().enumerate() {
                let g = &self.gram[a][b];
                if !g.is_zero() && !vb.is_zero() {
                    acc.add_assign_ref(&(&(ua * g) * vb));
                }
            }
        }
        acc
    }

    fn check_label(&self, i: u32, max: u32, what: &str) -> Result<()> {
        if i == 0 || i > max {
            return Err(Error::IndexOutOfRange(format!("{what} index {i} not in 1..={max}")));
        }
        Ok(())
    }
}

/// A vector in the gamma basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HVector {
    coeffs: Vec<CycScalar>,
}

impl HVector {
    pub fn coeffs(&self) -> &[CycScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, a: u32) -> &CycScalar {
        &self.coeffs[(a - 1) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CycScalar::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        HVector { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HVector { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        HVector { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
}

/// A polynomial in the gamma basis; keys are sorted gamma-index multisets.
#[derive(Clone, Debug, PartialEq)]
pub struct SymState {
    ctx: Arc<CycContext>,
    terms: BTreeMap<Vec<u32>, CycScalar>,
}

impl SymState {
    pub fn zero(ctx: &Arc<CycContext>) -> Self {
        SymState { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<CycContext>) -> Self {
        let mut s = Self::zero(ctx);
        s.add_term(Vec::new(), CycScalar::one(ctx));
        s
    }

    pub fn h(&self) -> u32 {
        self.ctx.h()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &CycScalar)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, gammas: &[u32]) -> CycScalar {
        let mut key = gammas.to_vec();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(|| CycScalar::zero(&self.ctx))
    }

    pub fn add_term(&mut self, mut gammas: Vec<u32>, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        gammas.sort_unstable();
        let slot = self.terms.entry(gammas.clone()).or_insert_with(|| CycScalar::zero(&self.ctx));
        slot.add_assign_ref(&c);
        if slot.is_zero() {
            self.terms.remove(&gammas);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Multiplies by a linear form.
    pub fn mul_vector(&self, v: &HVector) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (k, c) in &self.terms {
            for (a, va) in v.coeffs.iter().enumerate() {
                if va.is_zero() {
                    continue;
                }
                let mut key = k.clone();
                key.push(a as u32 + 1);
                out.add_term(key, c * va);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct StateTermJson {
    gammas: Vec<u32>,
    coeff: CycScalar,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    h: u32,
    terms: Vec<StateTermJson>,
}

impl Serialize for SymState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson {
            h: self.h(),
            terms: self.terms.iter().map(|(k, v)| StateTermJson { gammas: k.clone(), coeff: v.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = StateJson::deserialize(d)?;
        let ctx = CycContext::get(raw.h);
        let mut out = SymState::zero(&ctx);
        for t in raw.terms {
            if t.coeff.h() != raw.h {
                return Err(D::Error::custom("coefficient h differs from state h"));
            }
            if t.gammas.iter().any(|&a| a == 0 || a >= raw.h) {
                return Err(D::Error::custom("gamma index out of range"));
            }
            out.add_term(t.gammas, t.coeff);
        }
        Ok(out)
    }
}

/// `e_r(chi_1, ..., chi_h)` expanded in the gamma basis.
pub fn elem_sym_state(rd: &RootData, r: u32) -> Result<SymState> {
    if r == 0 || r > rd.h {
        return Err(Error::IndexOutOfRange(format!("degree {r} not in 1..={}", rd.h)));
    }
    // e_k of the first i chis, updated as e_k += e_{k-1} * chi_i.
    let mut e: Vec<SymState> = (0..=r).map(|_| SymState::zero(&rd.ctx)).collect();
    e[0] = SymState::one(&rd.ctx);
    for i in 1..=rd.h {
        let chi = rd.chi(i)?;
        for k in (1..=r as usize).rev() {
            let next = e[k - 1].mul_vector(&chi);
            e[k] = e[k].add(&next);
        }
    }
    Ok(e.swap_remove(r as usize))
}

/// `h * sum' C[b_1, ..., b_r] gamma_{b_1} ... gamma_{b_r}` over weakly increasing
/// tuples with `sum b = 0 mod h`.
pub fn cbracket_state(rd: &RootData, r: u32) -> Result<SymState> {
    if r < 2 || r > rd.h {
        return Err(Error::IndexOutOfRange(format!("degree {r} not in 2..={}", rd.h)));
    }
    let mut out = SymState::zero(&rd.ctx);
    let scale = Rat::from_int(rd.h as i64);
    for tuple in weakly_increasing(r as usize, rd.n) {
        if tuple.iter().sum::<u32>() % rd.h != 0 {
            continue;
        }
        let c = combinatorics::c_bracket(rd, &tuple)?;
        out.add_term(tuple, c.scale(&scale));
    }
    Ok(out)
}

/// `sum_s eta^{i_s (r-1)} / prod_{t != s} (eta^{i_s} - eta^{i_t})`.
pub fn vandermonde_coeff(rd: &RootData, indices: &[u32]) -> Result<CycScalar> {
    if indices.is_empty() {
        return Err(Error::InvalidArgument("empty index tuple".into()));
    }
    for &i in indices {
        rd.check_label(i, rd.h, "vandermonde")?;
    }
    let r = indices.len() as i64;
    let mut acc = CycScalar::zero(&rd.ctx);
    for (s, &is) in indices.iter().enumerate() {
        let mut den = CycScalar::one(&rd.ctx);
        for (t, &it) in indices.iter().enumerate() {
            if t != s {
                den = &den * &(&rd.eta(is as i64) - &rd.eta(it as i64));
            }
        }
        let den = den.inv().map_err(|_| Error::InvalidArgument(format!("repeated index in {indices:?}")))?;
        acc.add_assign_ref(&(&rd.eta(is as i64 * (r - 1)) * &den));
    }
    Ok(acc)
}

/// All weakly increasing tuples of length `len` with entries in `1..=max`.
pub fn weakly_increasing(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, lo: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            rec(len, v, max, cur, out);
            cur.pop();
        }
    }
    rec(len, 1, max, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn gram_is_antidiagonal() {
        for n in 1..=6 {
            let rd = RootData::new(n).unwrap();
            for a in 1..=n {
                for b in 1..=n {
                    let want = if a + b == n + 1 { rat(1, n as i64 + 1) } else { Rat::zero() };
                    assert_eq!(rd.gram()[(a - 1) as usize][(b - 1) as usize].to_rational().unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn chi_examples() {
        let rd = RootData::new(1).unwrap();
        assert_eq!(rd.chi(1).unwrap().coeff(1).to_rational().unwrap(), Rat::from_int(-1));
        assert_eq!(rd.chi(2).unwrap().coeff(1).to_rational().unwrap(), Rat::one());
        let rd = RootData::new(3).unwrap();
        assert!(rd.chi(4).unwrap().coeffs().iter().all(CycScalar::is_one));
        assert!(rd.chi(0).is_err());
        assert!(rd.chi(5).is_err());
    }

    #[test]
    fn pairing_examples() {
        let rd = RootData::new(3).unwrap();
        let c1 = rd.chi(1).unwrap();
        let c2 = rd.chi(2).unwrap();
        assert_eq!(rd.pairing(&c1, &c1).to_rational().unwrap(), rat(3, 4));
        let root = c1.sub(&c2);
        assert_eq!(rd.pairing(&root, &root).to_rational().unwrap(), Rat::from_int(2));
        let rd = RootData::new(1).unwrap();
        let p = rd.pairing(&rd.chi(1).unwrap(), &rd.chi(2).unwrap());
        assert_eq!(p.to_rational().unwrap(), rat(-1, 2));
    }

    #[test]
    fn small_sym_states() {
        let rd = RootData::new(1).unwrap();
        let e2 = elem_sym_state(&rd, 2).unwrap();
        assert_eq!(e2.terms().count(), 1);
        assert_eq!(e2.coeff(&[1, 1]).to_rational().unwrap(), Rat::from_int(-1));
        assert_eq!(cbracket_state(&rd, 2).unwrap(), e2);
        assert!(elem_sym_state(&RootData::new(4).unwrap(), 1).unwrap().is_zero());
        assert!(elem_sym_state(&rd, 3).is_err());
        assert!(cbracket_state(&rd, 1).is_err());
    }

    #[test]
    fn e2_h3_brute_force() {
        let rd = RootData::new(2).unwrap();
        let e2 = elem_sym_state(&rd, 2).unwrap();
        let mut want = CycScalar::zero(rd.ctx());
        for i in 1..=3i64 {
            for j in (i + 1)..=3 {
                want.add_assign_ref(&(&rd.eta(-i) * &rd.eta(-2 * j)));
                want.add_assign_ref(&(&rd.eta(-2 * i) * &rd.eta(-j)));
            }
        }
        assert_eq!(e2.coeff(&[1, 2]), want);
    }

    #[test]
    fn vandermonde_examples() {
        let rd = RootData::new(3).unwrap();
        assert!(vandermonde_coeff(&rd, &[2]).unwrap().is_one());
        assert!(vandermonde_coeff(&rd, &[1, 2]).unwrap().is_one());
        let rd = RootData::new(5).unwrap();
        assert!(vandermonde_coeff(&rd, &[1, 3, 5]).unwrap().is_one());
        assert!(vandermonde_coeff(&rd, &[1, 1]).is_err());
    }

    #[test]
    fn state_json_round_trip() {
        let rd = RootData::new(3).unwrap();
        let e = elem_sym_state(&rd, 3).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.starts_with("{\"h\":4,\"terms\":[{\"gammas\":["));
        let back: SymState = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
