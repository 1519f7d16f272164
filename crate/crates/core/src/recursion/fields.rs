//! The operator fields X_j, the propagators, and the Wick expansion of
//! normal-ordered products.

use crate::error::{Error, Result};
use crate::exactnum::CycScalar;
use crate::rootsys::RootData;
use crate::series::{LambdaSeries, SparsePoly, VarId};

/// Twice the hbar-power carried by a multiplication part.
pub const MULT_HALF_GRADE: i32 = -1;
/// Twice the hbar-power carried by a derivative part.
pub const DERIV_HALF_GRADE: i32 = 1;

/// One term `coeff * lambda^{slot/h}` of a field, either multiplying by `var` or
/// differentiating with respect to it.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTerm {
    pub slot: i64,
    pub var: VarId,
    pub coeff: CycScalar,
}

/// `X_j = sum_a eta^{-ja} lambda^{-a/h} Phi_a`, split into multiplication and derivative
/// parts, with levels up to `max_level`.
#[derive(Clone, Debug)]
pub struct FieldSymbol {
    pub j: u32,
    pub mult: Vec<FieldTerm>,
    pub deriv: Vec<FieldTerm>,
}

impl FieldSymbol {
    pub fn mult_series(&self) -> LambdaSeries<CycScalar> {
        let h = self.mult.first().map_or(1, |t| t.coeff.h());
        let mut out = LambdaSeries::zero(h);
        for t in &self.mult {
            out.add_at(t.slot, &SparsePoly::var(t.var, t.coeff.clone()));
        }
        out
    }
}

/// `lambda`-slot and coefficient of the derivative part of `X_j` along `x_{m,b}`.
pub fn deriv_term(rd: &RootData, j: u32, v: VarId) -> Option<(i64, CycScalar)> {
    let h = rd.h();
    if v.a == 0 || v.a >= h {
        return None;
    }
    let a = h - v.a;
    let slot = -(v.m as i64 + 1) * h as i64 - a as i64;
    let coeff = rd.eta(-((j * a) as i64)).scale(&crate::exactnum::Rat::from_int(a as i64 + v.m as i64 * h as i64));
    Some((slot, coeff))
}

/// `lambda`-slot and coefficient of `x_{m,a}` in the multiplication part of `X_j`.
pub fn mult_term(rd: &RootData, j: u32, v: VarId) -> (i64, CycScalar) {
    let h = rd.h() as i64;
    (v.m as i64 * h - v.a as i64, rd.eta(-((j * v.a) as i64)))
}

pub fn x_field(rd: &RootData, j: u32, max_level: u32) -> Result<FieldSymbol> {
    if j == 0 || j > rd.h() {
        return Err(Error::IndexOutOfRange(format!("field label {j} not in 1..={}", rd.h())));
    }
    let mut mult = Vec::new();
    let mut deriv = Vec::new();
    for m in 0..=max_level {
        for a in 1..=rd.n() {
            let v = VarId::new(m, a);
            let (slot, coeff) = mult_term(rd, j, v);
            mult.push(FieldTerm { slot, var: v, coeff });
            let target = VarId::new(m, rd.h() - a);
            let (slot, coeff) = deriv_term(rd, j, target).expect("label in range");
            deriv.push(FieldTerm { slot, var: target, coeff });
        }
    }
    Ok(FieldSymbol { j, mult, deriv })
}

/// Coefficient of `lambda^{-2}` in `P_ij = eta^{i+j} / (eta^i - eta^j)^2 lambda^{-2}`.
pub fn propagator(rd: &RootData, i: u32, j: u32) -> Result<CycScalar> {
    if i == j {
        return Err(Error::InvalidArgument(format!("propagator needs distinct labels, got ({i}, {j})")));
    }
    for l in [i, j] {
        if l == 0 || l > rd.h() {
            return Err(Error::IndexOutOfRange(format!("label {l} not in 1..={}", rd.h())));
        }
    }
    let diff = &rd.eta(i as i64) - &rd.eta(j as i64);
    Ok(&rd.eta((i + j) as i64) * &(&diff * &diff).inv()?)
}

/// `lambda`-slot of every propagator, in units of 1/h.
pub fn propagator_slot(h: u32) -> i64 {
    -2 * h as i64
}

/// One summand of the Wick expansion: a product of propagators times the normal-ordered
/// product of the unpaired fields.
#[derive(Clone, Debug, PartialEq)]
pub struct WickTerm {
    pub pairs: Vec<(u32, u32)>,
    pub unpaired: Vec<u32>,
    /// Product of the propagator coefficients; the term sits `pairs.len()` propagator slots lower.
    pub coeff: CycScalar,
}

#[derive(Clone, Debug)]
pub struct WickOperator {
    pub labels: Vec<u32>,
    pub terms: Vec<WickTerm>,
}

/// Expansion over all sets of disjoint pairs of `labels`.
pub fn wick_operator(rd: &RootData, labels: &[u32]) -> Result<WickOperator> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(format!("repeated label in {labels:?}")));
    }
    if let Some(&bad) = sorted.iter().find(|&&l| l == 0 || l > rd.h()) {
        return Err(Error::IndexOutOfRange(format!("label {bad} not in 1..={}", rd.h())));
    }
    let mut terms = Vec::new();
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    expand(rd, &sorted, &mut pairs, &mut unpaired, CycScalar::one(rd.ctx()), &mut terms)?;
    Ok(WickOperator { labels: sorted, terms })
}

fn expand(
    rd: &RootData,
    rest: &[u32],
    pairs: &mut Vec<(u32, u32)>,
    unpaired: &mut Vec<u32>,
    coeff: CycScalar,
    out: &mut Vec<WickTerm>,
) -> Result<()> {
    let Some((&first, tail)) = rest.split_first() else {
        out.push(WickTerm { pairs: pairs.clone(), unpaired: unpaired.clone(), coeff });
        return Ok(());
    };
    unpaired.push(first);
    expand(rd, tail, pairs, unpaired, coeff.clone(), out)?;
    unpaired.pop();
    for (idx, &partner) in tail.iter().enumerate() {
        let mut remaining = tail.to_vec();
        remaining.remove(idx);
        pairs.push((first, partner));
        let c = &coeff * &propagator(rd, first, partner)?;
        expand(rd, &remaining, pairs, unpaired, c, out)?;
        pairs.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rat;

    #[test]
    fn fields_h2() {
        let rd = RootData::new(1).unwrap();
        let x1 = x_field(&rd, 1, 0).unwrap();
        let x2 = x_field(&rd, 2, 0).unwrap();
        assert_eq!(x1.mult[0].slot, -1);
        assert_eq!(x1.mult[0].coeff.to_rational().unwrap(), Rat::from_int(-1));
        assert_eq!(x2.mult[0].coeff.to_rational().unwrap(), Rat::one());
        // derivative part: (a + m h) lambda^{-m-1-a/h} d/dx_{m,h-a}
        assert_eq!(x2.deriv[0].slot, -3);
        assert_eq!(x2.deriv[0].var, VarId::new(0, 1));
        assert!(x_field(&rd, 3, 0).is_err());
    }

    #[test]
    fn fields_sum_to_zero() {
        let rd = RootData::new(3).unwrap();
        let mut total = LambdaSeries::zero(4);
        for j in 1..=4 {
            total.add_assign(&x_field(&rd, j, 1).unwrap().mult_series());
        }
        assert!(total.is_zero());
        assert!(x_field(&rd, 4, 0).unwrap().mult.iter().all(|t| t.coeff.is_one()));
    }

    #[test]
    fn propagators() {
        let rd = RootData::new(1).unwrap();
        assert_eq!(propagator(&rd, 1, 2).unwrap().to_rational().unwrap(), Rat::new(-1, 4));
        let rd = RootData::new(3).unwrap();
        assert_eq!(propagator(&rd, 1, 3).unwrap().to_rational().unwrap(), Rat::new(-1, 4));
        for i in 1..=4 {
            for j in 1..=4 {
                if i != j {
                    assert_eq!(propagator(&rd, i, j).unwrap(), propagator(&rd, j, i).unwrap());
                }
            }
        }
        assert!(propagator(&rd, 2, 2).is_err());
    }

    #[test]
    fn wick_term_counts() {
        // number of partial matchings on r points: 1, 1, 2, 4, 10, 26
        let rd = RootData::new(5).unwrap();
        let want = [1usize, 2, 4, 10, 26];
        for r in 1..=5u32 {
            let labels: Vec<u32> = (1..=r).collect();
            assert_eq!(wick_operator(&rd, &labels).unwrap().terms.len(), want[(r - 1) as usize]);
        }
        let w = wick_operator(&rd, &[2, 5]).unwrap();
        assert_eq!(w.terms[1].pairs, vec![(2, 5)]);
        assert!(wick_operator(&rd, &[1, 1]).is_err());
    }
}
