//! Sparse multivariate polynomials in the descendant variables x_{m,a}.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{CycScalar, Rat};

/// Coefficient domain of a [`SparsePoly`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale_rat(&self, r: &Rat) -> Self;
    /// `r` embedded in the same domain (same cyclotomic context) as `self`.
    fn rat_like(&self, r: Rat) -> Self;
    /// Cyclotomic order of the domain, `None` for plain rationals.
    fn domain(&self) -> Option<u32>;
}

impl Scalar for Rat {
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        self * r
    }
    fn rat_like(&self, r: Rat) -> Self {
        r
    }
    fn domain(&self) -> Option<u32> {
        None
    }
}

impl Scalar for CycScalar {
    fn is_zero(&self) -> bool {
        CycScalar::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn add_assign_ref(&mut self, other: &Self) {
        CycScalar::add_assign_ref(self, other);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn rat_like(&self, r: Rat) -> Self {
        CycScalar::from_rat(self.context(), r)
    }
    fn domain(&self) -> Option<u32> {
        Some(self.h())
    }
}

/// The variable x_{m,a}: descendant level `m`, flat index `a` in 1..=N. Ordered by (m, a).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId {
    pub m: u32,
    pub a: u32,
}

impl VarId {
    pub const fn new(m: u32, a: u32) -> Self {
        VarId { m, a }
    }

    /// The flat (primary) coordinate t_a = x_{0,a}.
    pub const fn flat(a: u32) -> Self {
        VarId { m: 0, a }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}_{}", self.m, self.a)
    }
}

/// A monomial as a sorted list of (variable, positive exponent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
    degree: u32,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)], degree: 1 }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs, merging repeats.
    pub fn from_pairs(pairs: &[(VarId, u32)]) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for &(v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        let exps: Vec<_> = map.into_iter().filter(|&(_, e)| e > 0).collect();
        let degree = exps.iter().map(|&(_, e)| e).sum();
        Monomial { exps, degree }
    }

    pub fn exps(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.exps.binary_search_by(|(w, _)| w.cmp(&v)).map(|i| self.exps[i].1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    exps.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    exps.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    exps.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial { exps, degree: self.degree + other.degree }
    }

    /// Lowers the exponent of `v` by one; `None` if `v` does not occur. Returns the old exponent.
    pub fn divide_var(&self, v: VarId) -> Option<(Monomial, u32)> {
        let idx = self.exps.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let mut exps = self.exps.clone();
        let e = exps[idx].1;
        if e == 1 {
            exps.remove(idx);
        } else {
            exps[idx].1 -= 1;
        }
        Some((Monomial { exps, degree: self.degree - 1 }, e))
    }

    pub fn max_level(&self) -> u32 {
        self.exps.iter().map(|(v, _)| v.m).max().unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.exps.iter().map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial with sparse exact coefficients. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<S: Scalar> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for SparsePoly<S> {
    fn default() -> Self {
        SparsePoly { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> SparsePoly<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: S) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// The polynomial `c * v`.
    pub fn var(v: VarId, c: S) -> Self {
        Self::term(Monomial::var(v), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&S> {
        self.terms.get(m)
    }

    /// Any coefficient, used to recover the scalar domain of a nonzero polynomial.
    pub fn sample(&self) -> Option<&S> {
        self.terms.values().next()
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if let (Some(a), Some(b)) = (self.sample(), other.sample()) {
            if a.domain() != b.domain() {
                return Err(Error::ContextMismatch { left: a.domain().unwrap_or(0), right: b.domain().unwrap_or(0) });
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("scalar domain mismatch")
    }

    pub fn neg(&self) -> Self {
        SparsePoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        Ok(self.mul_truncated(other, u32::MAX))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("scalar domain mismatch")
    }

    /// Product keeping only monomials of total degree at most `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            if m1.degree > max_degree {
                continue;
            }
            for (m2, c2) in &other.terms {
                if m1.degree.saturating_add(m2.degree) > max_degree {
                    continue;
                }
                out.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        out
    }

    /// Degree-`d` part of the product, without forming other degrees.
    pub fn mul_homogeneous(&self, other: &Self, d: u32) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            if m1.degree > d {
                continue;
            }
            for (m2, c2) in &other.terms {
                if m1.degree + m2.degree == d {
                    out.add_term(m1.mul(m2), c1.mul_ref(c2));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.mul_ref(c));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        SparsePoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale_rat(r))).collect() }
    }

    /// Exact partial derivative.
    pub fn diff(&self, v: VarId) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((q, e)) = m.divide_var(v) {
                out.add_term(q, c.scale_rat(&Rat::from_int(e as i64)));
            }
        }
        out
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree).min()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter(|m| m.degree == d)
    }

    pub fn truncate_degree(&self, max_degree: u32) -> Self {
        self.filter(|m| m.degree <= max_degree)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        SparsePoly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Drops every term whose weighted degree exceeds `cap`.
    pub fn truncate_weighted(&self, weight: impl Fn(VarId) -> Rat, cap: &Rat) -> Self {
        self.filter(|m| {
            let w = m.exps.iter().fold(Rat::zero(), |acc, (v, e)| acc + weight(*v) * Rat::from_int(*e as i64));
            &w <= cap
        })
    }

    /// Substitutes `v := replacement` everywhere.
    pub fn substitute(&self, v: VarId, replacement: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let rest =
                Monomial { exps: m.exps.iter().copied().filter(|(w, _)| *w != v).collect(), degree: m.degree - e };
            let mut acc = Self::term(rest, c.clone());
            for _ in 0..e {
                acc = acc.mul(replacement);
            }
            out.add_assign(&acc);
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparsePoly<T> {
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<SparsePoly<T>> {
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// All variables occurring, sorted.
    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(|m| m.vars()).collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

impl SparsePoly<CycScalar> {
    /// Checked demotion of every coefficient to Q.
    pub fn to_rational(&self) -> Result<SparsePoly<Rat>> {
        self.try_map_coeffs(|c| c.to_rational())
    }
}

impl SparsePoly<Rat> {
    pub fn to_cyclotomic(&self, ctx: &std::sync::Arc<crate::exactnum::CycContext>) -> SparsePoly<CycScalar> {
        self.map_coeffs(|c| CycScalar::from_rat(ctx, c.clone()))
    }
}

impl<S: Scalar> fmt::Display for SparsePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson<S> {
    exps: Vec<(usize, u32)>,
    coeff: S,
}

#[derive(Serialize, Deserialize)]
struct PolyJson<S> {
    vars: Vec<(u32, u32)>,
    terms: Vec<TermJson<S>>,
}

impl<S: Scalar + Serialize> Serialize for SparsePoly<S> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let vars = self.variables();
        let index = |v: VarId| vars.binary_search(&v).expect("variable listed");
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| TermJson { exps: m.exps.iter().map(|&(v, e)| (index(v), e)).collect(), coeff: c.clone() })
            .collect();
        PolyJson { vars: vars.iter().map(|v| (v.m, v.a)).collect(), terms }.serialize(s)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for SparsePoly<S> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::<S>::deserialize(d)?;
        let mut out = SparsePoly::zero();
        for t in j.terms {
            let mut pairs = Vec::with_capacity(t.exps.len());
            for (i, e) in t.exps {
                let &(m, a) = j.vars.get(i).ok_or_else(|| serde::de::Error::custom("variable index out of range"))?;
                pairs.push((VarId::new(m, a), e));
            }
            out.add_term(Monomial::from_pairs(&pairs), t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(m: u32, a: u32) -> SparsePoly<Rat> {
        SparsePoly::var(VarId::new(m, a), Rat::one())
    }

    fn c(n: i64, d: i64) -> SparsePoly<Rat> {
        SparsePoly::constant(Rat::new(n, d))
    }

    #[test]
    fn products() {
        let x01 = x(0, 1);
        assert_eq!(x01.mul(&x01), SparsePoly::term(Monomial::from_pairs(&[(VarId::new(0, 1), 2)]), Rat::one()));
        assert!(x01.mul(&SparsePoly::zero()).is_zero());
        let (t1, t2) = (x(0, 1), x(0, 2));
        let lhs = t1.add(&t2).mul(&t1.sub(&t2));
        assert_eq!(lhs, t1.mul(&t1).sub(&t2.mul(&t2)));
    }

    #[test]
    fn derivatives() {
        let v = VarId::new(0, 1);
        let cube = x(0, 1).mul(&x(0, 1)).mul(&x(0, 1));
        assert_eq!(cube.diff(v), x(0, 1).mul(&x(0, 1)).scale_rat(&Rat::from_int(3)));
        assert!(x(0, 2).diff(v).is_zero());
        assert_eq!(x(0, 1).mul(&x(1, 2)).diff(VarId::new(1, 2)), x(0, 1));
    }

    #[test]
    fn truncation() {
        let t = x(0, 1);
        let t3 = t.mul(&t).mul(&t);
        let p = t3.add(&t3.mul(&t));
        assert_eq!(p.truncate_weighted(|_| Rat::one(), &Rat::from_int(3)), t3);
        assert!(SparsePoly::<Rat>::zero().truncate_weighted(|_| Rat::one(), &Rat::one()).is_zero());
        // A_3 Euler weights (a+1)/4
        let q = x(0, 1).mul(&x(0, 3)).mul(&x(0, 3));
        let w = |v: VarId| Rat::new(v.a as i64 + 1, 4);
        assert_eq!(q.truncate_weighted(w, &Rat::new(5, 2)), q);
        assert!(q.truncate_weighted(w, &Rat::new(9, 4)).is_zero());
    }

    #[test]
    fn substitution() {
        let v = VarId::new(1, 2);
        let p = x(1, 2).mul(&x(1, 2)).add(&x(0, 1));
        let shifted = p.substitute(v, &x(1, 2).add(&c(1, 1)));
        let back = shifted.substitute(v, &x(1, 2).sub(&c(1, 1)));
        assert_eq!(back, p);
    }

    #[test]
    fn json_schema() {
        let p = x(0, 1).mul(&x(1, 2)).scale_rat(&Rat::new(1, 2)).add(&c(-3, 1));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"vars":[[0,1],[1,2]],"terms":[{"exps":[],"coeff":"-3"},{"exps":[[0,1],[1,1]],"coeff":"1/2"}]}"#
        );
        let back: SparsePoly<Rat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn domain_mismatch() {
        use crate::exactnum::CycContext;
        let a = SparsePoly::constant(CycScalar::one(&CycContext::get(3)));
        let b = SparsePoly::constant(CycScalar::one(&CycContext::get(4)));
        assert!(matches!(a.try_mul(&b), Err(Error::ContextMismatch { .. })));
    }
}
