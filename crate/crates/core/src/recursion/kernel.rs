//! Kernels of the one-point recursion written as `coeff * h^e * lambda^{slot/h}`,
//! in the period normalization and in the normalization used by the solver.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::exactnum::{CycScalar, Rat};
use crate::rootsys::RootData;

#[derive(Clone, Debug, PartialEq)]
pub struct KernelMonomial {
    pub coeff: CycScalar,
    pub h_exponent: Rat,
    pub lambda_slot: i64,
}

impl KernelMonomial {
    pub fn inv(&self) -> Result<Self> {
        Ok(KernelMonomial {
            coeff: self.coeff.inv()?,
            h_exponent: -self.h_exponent.clone(),
            lambda_slot: -self.lambda_slot,
        })
    }
}

impl Mul for &KernelMonomial {
    type Output = KernelMonomial;

    fn mul(self, other: &KernelMonomial) -> KernelMonomial {
        KernelMonomial {
            coeff: &self.coeff * &other.coeff,
            h_exponent: &self.h_exponent + &other.h_exponent,
            lambda_slot: self.lambda_slot + other.lambda_slot,
        }
    }
}

fn descendant_product(h: u32, m: u32, a: u32) -> Rat {
    (1..=m as i64 + 1).fold(Rat::one(), |acc, k| acc * Rat::from_int(-(a as i64) + k * h as i64))
}

fn check(rd: &RootData, a: u32, i: u32, others: &[u32]) -> Result<()> {
    if a == 0 || a > rd.n() {
        return Err(Error::IndexOutOfRange(format!("a = {a} not in 1..={}", rd.n())));
    }
    if others.contains(&i) {
        return Err(Error::InvalidArgument(format!("label {i} repeated among {others:?}")));
    }
    if let Some(bad) = std::iter::once(&i).chain(others).find(|&&l| l == 0 || l > rd.h()) {
        return Err(Error::IndexOutOfRange(format!("label {bad} not in 1..={}", rd.h())));
    }
    Ok(())
}

/// Numerator `(h lambda)^{m+1-a/h} / prod_{k=1}^{m+1}(-a + kh)` and the unit
/// `(h lambda)^{1/h}` that accompanies each difference `eta^i - eta^j`.
pub fn kernel_monomials(rd: &RootData, m: u32, a: u32) -> Result<(KernelMonomial, KernelMonomial)> {
    check(rd, a, 1, &[])?;
    let h = rd.h();
    let num = KernelMonomial {
        coeff: CycScalar::from_rat(rd.ctx(), descendant_product(h, m, a).inv()?),
        h_exponent: Rat::from_int(m as i64 + 1) - Rat::new(a as i64, h as i64),
        lambda_slot: (m as i64 + 1) * h as i64 - a as i64,
    };
    let unit = KernelMonomial { coeff: CycScalar::one(rd.ctx()), h_exponent: Rat::new(1, h as i64), lambda_slot: 1 };
    Ok((num, unit))
}

fn differences(rd: &RootData, i: u32, others: &[u32]) -> CycScalar {
    others.iter().fold(CycScalar::one(rd.ctx()), |acc, &j| &acc * &(&rd.eta(i as i64) - &rd.eta(j as i64)))
}

/// `eta^{-ia} num / prod_j [(eta^i - eta^j)(h lambda)^{1/h}]`.
pub fn period_kernel(rd: &RootData, m: u32, a: u32, i: u32, others: &[u32]) -> Result<KernelMonomial> {
    check(rd, a, i, others)?;
    let (num, unit) = kernel_monomials(rd, m, a)?;
    let mut den = KernelMonomial { coeff: differences(rd, i, others), h_exponent: Rat::zero(), lambda_slot: 0 };
    for _ in others {
        den = &den * &unit;
    }
    let eta = KernelMonomial { coeff: rd.eta(-((i * a) as i64)), h_exponent: Rat::zero(), lambda_slot: 0 };
    Ok(&(&eta * &num) * &den.inv()?)
}

/// `(1/h) eta^{-ia} lambda^{m+1-(a+r)/h} / (prod_k(-a + kh) prod_j(eta^i - eta^j))`,
/// `r = others.len()`, as used by the solver.
pub fn solver_kernel(rd: &RootData, m: u32, a: u32, i: u32, others: &[u32]) -> Result<KernelMonomial> {
    check(rd, a, i, others)?;
    let h = rd.h();
    let scalar = (descendant_product(h, m, a) * Rat::from_int(h as i64)).inv()?;
    let coeff = &rd.eta(-((i * a) as i64)) * &differences(rd, i, others).inv()?;
    Ok(KernelMonomial {
        coeff: coeff.scale(&scalar),
        h_exponent: Rat::zero(),
        lambda_slot: (m as i64 + 1) * h as i64 - a as i64 - others.len() as i64,
    })
}

/// The expected quotient `h * h^{m+1-(a+r)/h}` of the two normalizations.
pub fn kernel_ratio(rd: &RootData, m: u32, a: u32, r: u32) -> KernelMonomial {
    let h = rd.h() as i64;
    KernelMonomial {
        coeff: CycScalar::from_int(rd.ctx(), h),
        h_exponent: Rat::from_int(m as i64 + 1) - Rat::new(a as i64 + r as i64, h),
        lambda_slot: 0,
    }
}
