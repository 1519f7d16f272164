//! The cyclotomic field Q(eta), eta = exp(2 pi i / h), realised as Q[x]/Phi_h(x).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::rat::Rat;
use crate::error::{Error, Result};

/// Integer polynomial, coefficients from low to high degree.
pub type IntPoly = Vec<i64>;

fn int_poly_trim(p: &mut IntPoly) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn int_poly_mul(a: &[i64], b: &[i64]) -> IntPoly {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    int_poly_trim(&mut out);
    out
}

/// Exact division of integer polynomials by a monic divisor; `None` if the remainder is nonzero.
fn int_poly_div_exact(num: &[i64], den: &[i64]) -> Option<IntPoly> {
    assert_eq!(*den.last().unwrap(), 1, "divisor must be monic");
    let mut rem: IntPoly = num.to_vec();
    if rem.len() < den.len() {
        return if rem.iter().all(|&c| c == 0) { Some(vec![0]) } else { None };
    }
    let dq = rem.len() - den.len();
    let mut quot = vec![0i64; dq + 1];
    for k in (0..=dq).rev() {
        let c = rem[k + den.len() - 1];
        quot[k] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return None;
    }
    int_poly_trim(&mut quot);
    Some(quot)
}

/// The h-th cyclotomic polynomial, by dividing x^h - 1 by Phi_d for every proper divisor d.
pub fn cyclotomic_poly(h: u32) -> IntPoly {
    assert!(h >= 1, "cyclotomic_poly needs h >= 1");
    let mut num = vec![0i64; h as usize + 1];
    num[0] = -1;
    num[h as usize] = 1;
    let mut den: IntPoly = vec![1];
    for d in 1..h {
        if h.is_multiple_of(d) {
            den = int_poly_mul(&den, &cyclotomic_poly(d));
        }
    }
    int_poly_div_exact(&num, &den).expect("x^h - 1 is divisible by the product of Phi_d")
}

/// Euler totient.
pub fn totient(h: u32) -> u32 {
    (1..=h).filter(|k| num_integer::gcd(*k, h) == 1).count() as u32
}

/// Immutable per-h data: Phi_h and the reduction of x^k for k < 2*deg(Phi_h) and k < h.
#[derive(Debug)]
pub struct CycContext {
    h: u32,
    phi: IntPoly,
    degree: usize,
    /// `reduce[k]` = x^k mod Phi_h for k in 0..max(2*degree - 1, h).
    reduce: Vec<IntPoly>,
}

impl PartialEq for CycContext {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
    }
}

impl CycContext {
    fn build(h: u32) -> Self {
        let phi = cyclotomic_poly(h);
        let degree = phi.len() - 1;
        let n = (2 * degree).max(h as usize + 1);
        let mut reduce: Vec<IntPoly> = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = vec![0i64; degree];
            if k < degree {
                v[k] = 1;
            } else {
                // x^k = x * x^{k-1}; fold the overflowing top coefficient with Phi_h
                let prev = &reduce[k - 1];
                let top = prev[degree - 1];
                for i in (1..degree).rev() {
                    v[i] = prev[i - 1];
                }
                v[0] = 0;
                for i in 0..degree {
                    v[i] -= top * phi[i];
                }
            }
            reduce.push(v);
        }
        CycContext { h, phi, degree, reduce }
    }

    /// Shared context for `h`; contexts are built once and cached.
    pub fn get(h: u32) -> Arc<CycContext> {
        assert!(h >= 1, "h must be >= 1");
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("context cache poisoned");
        guard.entry(h).or_insert_with(|| Arc::new(CycContext::build(h))).clone()
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn phi(&self) -> &IntPoly {
        &self.phi
    }

    /// phi(h), the dimension of Q(eta) over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// An element of Q(eta) in the power basis 1, eta, ..., eta^{deg-1}.
#[derive(Clone)]
pub struct CycScalar {
    ctx: Arc<CycContext>,
    coeffs: Vec<Rat>,
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.h == other.ctx.h && self.coeffs == other.coeffs
    }
}

impl Eq for CycScalar {}

impl CycScalar {
    pub fn zero(ctx: &Arc<CycContext>) -> Self {
        CycScalar { ctx: ctx.clone(), coeffs: vec![Rat::zero(); ctx.degree] }
    }

    pub fn one(ctx: &Arc<CycContext>) -> Self {
        Self::from_rat(ctx, Rat::one())
    }

    pub fn from_rat(ctx: &Arc<CycContext>, r: Rat) -> Self {
        let mut s = Self::zero(ctx);
        s.coeffs[0] = r;
        s
    }

    pub fn from_int(ctx: &Arc<CycContext>, n: i64) -> Self {
        Self::from_rat(ctx, Rat::from_int(n))
    }

    /// Builds a scalar from power-basis coefficients of any length, reducing modulo Phi_h.
    pub fn from_coeffs(ctx: &Arc<CycContext>, coeffs: &[Rat]) -> Self {
        let mut out = vec![Rat::zero(); ctx.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < ctx.degree {
                out[k] += c;
            } else {
                for (i, r) in ctx_reduce_row(ctx, k).iter().enumerate() {
                    if *r != 0 {
                        out[i] += &(c * &Rat::from_int(*r));
                    }
                }
            }
        }
        CycScalar { ctx: ctx.clone(), coeffs: out }
    }

    /// eta^k with k taken modulo h.
    pub fn eta_pow(ctx: &Arc<CycContext>, k: i64) -> Self {
        let e = k.rem_euclid(ctx.h as i64) as usize;
        let row = &ctx.reduce[e];
        CycScalar { ctx: ctx.clone(), coeffs: row.iter().map(|&c| Rat::from_int(c)).collect() }
    }

    pub fn context(&self) -> &Arc<CycContext> {
        &self.ctx
    }

    pub fn h(&self) -> u32 {
        self.ctx.h
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rat::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.h != other.ctx.h {
            return Err(Error::ContextMismatch { left: self.ctx.h, right: other.ctx.h });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycScalar {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycScalar {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.ctx.degree;
        if self.is_rational() {
            return Ok(other.scale(&self.coeffs[0]));
        }
        if other.is_rational() {
            return Ok(self.scale(&other.coeffs[0]));
        }
        let mut prod = vec![Rat::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += &(a * b);
                }
            }
        }
        Ok(Self::from_coeffs(&self.ctx, &prod))
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        assert_eq!(self.ctx.h, other.ctx.h, "cyclotomic context mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycScalar { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Rat::is_zero)
    }

    /// The rational value, or an error carrying the scalar when an eta-component survives.
    pub fn to_rational(&self) -> Result<Rat> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational(self.to_string()))
        }
    }

    /// Multiplicative inverse via extended Euclid against Phi_h.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rat(&self.ctx, self.coeffs[0].inv()?));
        }
        let phi: Vec<Rat> = self.ctx.phi.iter().map(|&c| Rat::from_int(c)).collect();
        let a = qpoly_trim(self.coeffs.clone());
        // invariant: s * a == r0 (mod phi)
        let (mut r0, mut r1) = (a, qpoly_trim(phi));
        let (mut s0, mut s1) = (vec![Rat::one()], vec![Rat::zero()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Phi_h is irreducible
        if r0.len() != 1 {
            return Err(Error::Consistency("gcd with Phi_h is not a unit".into()));
        }
        let c = r0[0].inv()?;
        let s: Vec<Rat> = s0.iter().map(|x| x * &c).collect();
        Ok(Self::from_coeffs(&self.ctx, &s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complex value at eta = exp(2 pi i/h) in double precision.
    pub fn approx(&self) -> (f64, f64) {
        let h = self.ctx.h as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64();
            let ang = 2.0 * std::f64::consts::PI * k as f64 / h;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

fn ctx_reduce_row(ctx: &CycContext, k: usize) -> std::borrow::Cow<'_, IntPoly> {
    if k < ctx.reduce.len() {
        std::borrow::Cow::Borrowed(&ctx.reduce[k])
    } else {
        // eta^h = 1
        ctx_reduce_row(ctx, k % ctx.h as usize)
    }
}

fn qpoly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    if p.is_empty() {
        p.push(Rat::zero());
    }
    p
}

fn qpoly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    qpoly_trim(out)
}

fn qpoly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect();
    qpoly_trim(out)
}

fn qpoly_divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero divisor");
    if rem.len() <= db {
        return (vec![Rat::zero()], qpoly_trim(rem));
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &(&c * bj);
            }
        }
        quot[k] = c;
    }
    rem.truncate(db.max(1));
    (qpoly_trim(quot), qpoly_trim(rem))
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*eta")?,
                _ => write!(f, "({c})*eta^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[h={}] {}", self.ctx.h, self)
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &'a CycScalar) -> CycScalar {
        self.try_add(rhs).expect("cyclotomic context mismatch")
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &'a CycScalar) -> CycScalar {
        self.try_sub(rhs).expect("cyclotomic context mismatch")
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &'a CycScalar) -> CycScalar {
        self.try_mul(rhs).expect("cyclotomic context mismatch")
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct CycScalarJson {
    h: u32,
    coeffs: Vec<Rat>,
}

impl Serialize for CycScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycScalarJson { h: self.ctx.h, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycScalarJson::deserialize(d)?;
        if j.h < 1 {
            return Err(serde::de::Error::custom("h must be >= 1"));
        }
        let ctx = CycContext::get(j.h);
        if j.coeffs.len() != ctx.degree {
            return Err(serde::de::Error::custom(format!(
                "expected {} coefficients for h={}, got {}",
                ctx.degree,
                j.h,
                j.coeffs.len()
            )));
        }
        Ok(CycScalar { ctx, coeffs: j.coeffs })
    }
}
