//! Univariate polynomials in an auxiliary variable Y over Q(eta).

use std::sync::Arc;

use crate::exactnum::{CycContext, CycScalar, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct YPoly {
    ctx: Arc<CycContext>,
    coeffs: Vec<CycScalar>,
}

impl YPoly {
    pub fn zero(ctx: &Arc<CycContext>) -> Self {
        YPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: CycScalar) -> Self {
        let ctx = c.context().clone();
        Self::from_coeffs(&ctx, vec![c])
    }

    pub fn from_coeffs(ctx: &Arc<CycContext>, coeffs: Vec<CycScalar>) -> Self {
        let mut p = YPoly { ctx: ctx.clone(), coeffs };
        p.trim();
        p
    }

    /// c * Y^k
    pub fn monomial(c: CycScalar, k: usize) -> Self {
        let ctx = c.context().clone();
        let mut coeffs = vec![CycScalar::zero(&ctx); k];
        coeffs.push(c);
        Self::from_coeffs(&ctx, coeffs)
    }

    /// (1 - Y)^m
    pub fn one_minus_y_pow(ctx: &Arc<CycContext>, m: usize) -> Self {
        let base = Self::from_coeffs(ctx, vec![CycScalar::one(ctx), CycScalar::from_int(ctx, -1)]);
        (0..m).fold(Self::constant(CycScalar::one(ctx)), |acc, _| acc.mul(&base))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> CycScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| CycScalar::zero(&self.ctx))
    }

    pub fn coeffs(&self) -> &[CycScalar] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        Self::from_coeffs(&self.ctx, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut coeffs = vec![CycScalar::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j].add_assign_ref(&(a * b));
            }
        }
        Self::from_coeffs(&self.ctx, coeffs)
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        Self::from_coeffs(&self.ctx, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        Self::from_coeffs(&self.ctx, self.coeffs.iter().map(|x| x.scale(r)).collect())
    }

    /// Drops all coefficients of Y^k with k > max_degree.
    pub fn truncate(&self, max_degree: usize) -> Self {
        Self::from_coeffs(&self.ctx, self.coeffs.iter().take(max_degree + 1).cloned().collect())
    }

    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        self.truncate(max_degree).mul(&other.truncate(max_degree)).truncate(max_degree)
    }

    pub fn eval_at_one(&self) -> CycScalar {
        self.coeffs.iter().fold(CycScalar::zero(&self.ctx), |acc, c| &acc + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let ctx = CycContext::get(4);
        let sq = YPoly::one_minus_y_pow(&ctx, 2);
        let ints: Vec<_> = sq.coeffs().iter().map(|c| c.to_rational().unwrap()).collect();
        assert_eq!(ints, vec![Rat::from_int(1), Rat::from_int(-2), Rat::from_int(1)]);
        assert!(YPoly::monomial(CycScalar::one(&ctx), 7).eval_at_one().is_one());
        // 1 + Y + Y^2 + Y^3
        let geo = (0..4).fold(YPoly::zero(&ctx), |acc, k| acc.add(&YPoly::monomial(CycScalar::one(&ctx), k)));
        assert!(geo.coeff(2).is_one());
        assert!(geo.coeff(4).is_zero());
        assert_eq!(geo.mul(&YPoly::one_minus_y_pow(&ctx, 1)).degree(), Some(4));
    }
}
