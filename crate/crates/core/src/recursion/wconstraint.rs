//! Residues of `lambda^m X(e_r)` acting on the dilaton-shifted total descendant potential.

use serde::Serialize;
use serde_json::{json, Value};

use super::omega::{label_sets, MultShift, OmegaEngine};
use super::solver::PotentialTable;
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::rootsys::RootData;
use crate::series::{SparsePoly, VarId};

/// `t_{level,N} = q_{level,N} + 1`, i.e. `x_{level,N} = q + 1/prod_{k=1}^{level}(-N + kh)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DilatonShift {
    pub n: u32,
    pub level: u32,
}

impl DilatonShift {
    /// The weight-zero shift along `x_{1,N}`.
    pub fn standard(n: u32) -> Self {
        DilatonShift { n, level: 1 }
    }

    /// The shift along `x_{0,N}`, kept as a control: it breaks the grading.
    pub fn as_printed(n: u32) -> Self {
        DilatonShift { n, level: 0 }
    }

    pub fn var(&self) -> VarId {
        VarId::new(self.level, self.n)
    }

    /// Value of `x_{level,N}` at `q = 0`.
    pub fn x_offset(&self) -> Rat {
        let h = self.n as i64 + 1;
        let den = (1..=self.level as i64).fold(1i64, |acc, k| acc * (-(self.n as i64) + k * h));
        Rat::new(1, den)
    }

    /// Rewrites a polynomial in `x` as one in the shifted variable `q`.
    pub fn apply(&self, f: &SparsePoly<Rat>) -> SparsePoly<Rat> {
        self.substitute(f, self.x_offset())
    }

    /// Inverse of [`DilatonShift::apply`].
    pub fn unapply(&self, f: &SparsePoly<Rat>) -> SparsePoly<Rat> {
        self.substitute(f, -self.x_offset())
    }

    fn substitute(&self, f: &SparsePoly<Rat>, c: Rat) -> SparsePoly<Rat> {
        let v = self.var();
        let replacement = SparsePoly::var(v, Rat::one()).add(&SparsePoly::constant(c));
        f.substitute(v, &replacement)
    }

    pub(crate) fn mult_shift(&self) -> MultShift {
        MultShift { var: self.var(), value: self.x_offset() }
    }
}

/// Genus-by-genus residuals of one constraint.
#[derive(Clone, Debug)]
pub struct WCheckReport {
    pub n: u32,
    pub a: u32,
    pub m: u32,
    pub cap: u32,
    pub shift: DilatonShift,
    /// `residuals[g]` is the hbar^{g - r/2} coefficient, written in the unshifted variables.
    pub residuals: Vec<SparsePoly<Rat>>,
}

impl WCheckReport {
    pub fn pass(&self) -> bool {
        self.residuals.iter().all(SparsePoly::is_zero)
    }

    pub fn residual_terms(&self) -> usize {
        self.residuals.iter().map(|p| p.terms().count()).sum()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .residuals
            .iter()
            .enumerate()
            .flat_map(|(g, p)| {
                p.terms().map(move |(mono, c)| json!({ "g": g, "monomial": mono.to_string(), "coeff": c }))
            })
            .collect();
        json!({
            "N": self.n,
            "a": self.a,
            "m": self.m,
            "cap": self.cap,
            "shift_level": self.shift.level,
            "residual_terms": terms,
            "pass": self.pass(),
        })
    }
}

/// Depth each genus of the table needs so that `r`-fold derivatives are exact to `cap`.
pub fn required_caps(max_genus: u32, r: u32, cap: u32) -> Vec<u32> {
    (0..=max_genus).map(|g| cap + r.min(max_genus - g + 1)).collect()
}

/// Residue of `lambda^m X(e_r) D(q)` at `r = h + 1 - a`, divided by `D(q)`, for every genus
/// in the table. Monomials are truncated at degree `cap` and at the table's level.
pub fn w_residual(
    rd: &RootData,
    table: &PotentialTable,
    shift: &DilatonShift,
    a: u32,
    m: u32,
    cap: u32,
) -> Result<WCheckReport> {
    let h = rd.h();
    if table.n() != rd.n() || shift.n != rd.n() {
        return Err(Error::InvalidArgument("table, shift and root data must share N".into()));
    }
    if a == 0 || a > rd.n() {
        return Err(Error::IndexOutOfRange(format!("a = {a} not in 1..={}", rd.n())));
    }
    let r = h + 1 - a;
    let need = required_caps(table.max_genus(), r, cap);
    for (g, &want) in need.iter().enumerate() {
        if table.cap(g as u32) < want {
            return Err(Error::InvalidArgument(format!(
                "genus {g} is known to degree {}, the check at cap {cap} needs {want}",
                table.cap(g as u32)
            )));
        }
    }
    let level = table.max_level();
    // Derivatives in q and in x agree, so the potentials stay in x and only the
    // multiplication parts pick up the constant.
    let mult_shift = shift.mult_shift();
    let mut engine = OmegaEngine::new(rd, table.potentials(), level, cap, Some(&mult_shift));
    let slot = -(m as i64 + 1) * h as i64;
    let sets = label_sets(h, r);
    let mut residuals = Vec::new();
    for g in 0..=table.max_genus() {
        let mut acc = SparsePoly::zero();
        for labels in &sets {
            acc.add_assign(&engine.omega(labels, g)?.value.coeff(slot));
        }
        let acc =
            acc.to_rational().map_err(|e| Error::Consistency(format!("genus {g} residual is not rational: {e}")))?;
        residuals.push(acc.filter(|mono| mono.max_level() <= level));
    }
    Ok(WCheckReport { n: rd.n(), a, m, cap, shift: *shift, residuals })
}
