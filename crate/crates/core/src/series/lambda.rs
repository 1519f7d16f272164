//! Finite Laurent objects in lambda^{1/h} with polynomial coefficients.

use std::collections::BTreeMap;

use super::poly::{Scalar, SparsePoly};
use crate::error::{Error, Result};

/// `sum_q c_q * lambda^{q/h}`; exponents are stored as integers in units of 1/h.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSeries<S: Scalar> {
    h: u32,
    terms: BTreeMap<i64, SparsePoly<S>>,
}

impl<S: Scalar> LambdaSeries<S> {
    pub fn zero(h: u32) -> Self {
        LambdaSeries { h, terms: BTreeMap::new() }
    }

    /// `p * lambda^{q/h}`.
    pub fn monomial(h: u32, q: i64, p: SparsePoly<S>) -> Self {
        let mut s = Self::zero(h);
        s.add_at(q, &p);
        s
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &SparsePoly<S>)> {
        self.terms.iter().map(|(q, p)| (*q, p))
    }

    /// Coefficient of lambda^{q/h}.
    pub fn coeff(&self, q: i64) -> SparsePoly<S> {
        self.terms.get(&q).cloned().unwrap_or_default()
    }

    /// Coefficient of lambda^{-1}. Fractional powers carry no residue.
    pub fn residue(&self) -> SparsePoly<S> {
        self.coeff(-(self.h as i64))
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn add_at(&mut self, q: i64, p: &SparsePoly<S>) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(q).or_default();
        slot.add_assign(p);
        if slot.is_zero() {
            self.terms.remove(&q);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.h != other.h {
            return Err(Error::ContextMismatch { left: self.h, right: other.h });
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.h, other.h, "lambda-series h mismatch");
        for (q, p) in &other.terms {
            self.add_at(*q, p);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    /// Multiplies by lambda^{q/h}.
    pub fn shift(&self, q: i64) -> Self {
        LambdaSeries { h: self.h, terms: self.terms.iter().map(|(k, p)| (k + q, p.clone())).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.h);
        for (q, p) in &self.terms {
            out.add_at(*q, &p.scale(c));
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_truncated(other, u32::MAX))
    }

    /// Convolution in lambda, keeping polynomial terms of degree at most `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        self.mul_filtered(other, max_degree, |_| true)
    }

    /// As [`Self::mul_truncated`], but only output exponents accepted by `keep` are formed.
    pub fn mul_filtered(&self, other: &Self, max_degree: u32, keep: impl Fn(i64) -> bool) -> Self {
        assert_eq!(self.h, other.h, "lambda-series h mismatch");
        let mut out = Self::zero(self.h);
        for (q1, p1) in &self.terms {
            for (q2, p2) in &other.terms {
                if !keep(q1 + q2) {
                    continue;
                }
                out.add_at(q1 + q2, &p1.mul_truncated(p2, max_degree));
            }
        }
        out
    }

    pub fn map_polys<T: Scalar>(&self, f: impl Fn(&SparsePoly<S>) -> SparsePoly<T>) -> LambdaSeries<T> {
        let mut out = LambdaSeries::zero(self.h);
        for (q, p) in &self.terms {
            out.add_at(*q, &f(p));
        }
        out
    }

    pub fn try_map_polys<T: Scalar>(
        &self,
        f: impl Fn(&SparsePoly<S>) -> Result<SparsePoly<T>>,
    ) -> Result<LambdaSeries<T>> {
        let mut out = LambdaSeries::zero(self.h);
        for (q, p) in &self.terms {
            out.add_at(*q, &f(p)?);
        }
        Ok(out)
    }

    pub fn truncate_degree(&self, max_degree: u32) -> Self {
        self.map_polys(|p| p.truncate_degree(max_degree))
    }
}
