//! Conjugation of normal-ordered field products by the total descendant potential.
//!
//! Every unpaired field contributes either its multiplication part or its derivative
//! part; derivative parts are grouped into clusters, each cluster acting on a single
//! `F^{(g')}`. A cluster of size `k` on `F^{(g')}` carries genus `k + g' - 1`, a lone
//! multiplication part carries genus 0 and a propagator pair carries genus 1.

use std::collections::HashMap;

use super::fields::{deriv_term, propagator_slot, wick_operator, DERIV_HALF_GRADE, MULT_HALF_GRADE};
use crate::error::{Error, Result};
use crate::exactnum::{CycScalar, Rat};
use crate::rootsys::RootData;
use crate::series::{LambdaSeries, SparsePoly, VarId};

type Series = LambdaSeries<CycScalar>;

/// A constant added to the multiplication part of every field: `x_{level,N} -> x_{level,N} - value`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultShift {
    pub var: VarId,
    pub value: Rat,
}

/// `Omega^{(g)}_J` together with its labels.
#[derive(Clone, Debug)]
pub struct OmegaValue {
    pub genus: u32,
    pub labels: Vec<u32>,
    pub value: LambdaSeries<CycScalar>,
}

impl OmegaValue {
    /// Twice the hbar-power `g - r/2` attached to this value.
    pub fn half_grade(&self) -> i64 {
        2 * self.genus as i64 - self.labels.len() as i64
    }

    pub fn to_rational(&self) -> Result<LambdaSeries<Rat>> {
        self.value.try_map_polys(|p| p.to_rational())
    }
}

pub(crate) fn label_mask(labels: &[u32]) -> u32 {
    labels.iter().fold(0, |m, &l| m | (1 << (l - 1)))
}

fn mask_labels(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// Evaluates `Omega` for many label sets against a fixed table of potentials, caching
/// the cluster products by label set.
pub struct OmegaEngine<'a> {
    rd: &'a RootData,
    potentials: Vec<SparsePoly<CycScalar>>,
    cap: u32,
    mult: Vec<Series>,
    deriv_cache: HashMap<(u32, u32), Series>,
    cluster_cache: HashMap<(u32, u32), Series>,
}

impl<'a> OmegaEngine<'a> {
    /// `potentials[g]` is `F^{(g)}`; multiplication parts run over levels `0..=max_level`;
    /// everything is truncated at polynomial degree `cap`.
    pub fn new(
        rd: &'a RootData,
        potentials: &[SparsePoly<Rat>],
        max_level: u32,
        cap: u32,
        shift: Option<&MultShift>,
    ) -> Self {
        let ctx = rd.ctx();
        let potentials = potentials.iter().map(|f| f.to_cyclotomic(ctx)).collect();
        let mult = (1..=rd.h())
            .map(|j| {
                let mut s = Series::zero(rd.h());
                for m in 0..=max_level {
                    for a in 1..=rd.n() {
                        let v = VarId::new(m, a);
                        let (slot, coeff) = super::fields::mult_term(rd, j, v);
                        s.add_at(slot, &SparsePoly::var(v, coeff));
                    }
                }
                if let Some(sh) = shift {
                    let (slot, coeff) = super::fields::mult_term(rd, j, sh.var);
                    s.add_at(slot, &SparsePoly::constant(coeff.scale(&-sh.value.clone())));
                }
                s
            })
            .collect();
        OmegaEngine { rd, potentials, cap, mult, deriv_cache: HashMap::new(), cluster_cache: HashMap::new() }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn apply_deriv(&self, j: u32, s: &Series) -> Series {
        let mut out = Series::zero(self.rd.h());
        for (q, poly) in s.terms() {
            for v in poly.variables() {
                if let Some((slot, coeff)) = deriv_term(self.rd, j, v) {
                    let d = poly.diff(v);
                    if !d.is_zero() {
                        out.add_at(q + slot, &d.scale(&coeff));
                    }
                }
            }
        }
        out
    }

    /// `D_B F^{(g)}`: the derivative parts of the fields in `mask` applied to one potential.
    /// Potentials are cut at `cap + h` up front, so every cached block is exact to `cap`
    /// whichever larger block it later feeds.
    fn deriv_block(&mut self, mask: u32, genus: u32) -> Series {
        if let Some(s) = self.deriv_cache.get(&(mask, genus)) {
            return s.clone();
        }
        let top = 31 - mask.leading_zeros();
        let rest = mask & !(1 << top);
        let inner = if rest == 0 {
            match self.potentials.get(genus as usize) {
                Some(f) => LambdaSeries::monomial(self.rd.h(), 0, f.truncate_degree(self.cap + self.rd.h())),
                None => Series::zero(self.rd.h()),
            }
        } else {
            self.deriv_block(rest, genus)
        };
        let out = self.apply_deriv(top + 1, &inner);
        self.deriv_cache.insert((mask, genus), out.clone());
        out
    }

    /// Value of one cluster `B` carrying genus `gamma`.
    fn cluster(&mut self, mask: u32, gamma: u32) -> Series {
        let size = mask.count_ones();
        if size == 1 {
            let j = mask.trailing_zeros() + 1;
            let mut out = self.deriv_block(mask, gamma).truncate_degree(self.cap);
            if gamma == 0 {
                out.add_assign(&self.mult[(j - 1) as usize].truncate_degree(self.cap));
            }
            debug_assert_eq!(DERIV_HALF_GRADE + 2 * (gamma as i32 - 1), 2 * gamma as i32 - 1);
            debug_assert_eq!(MULT_HALF_GRADE, -1);
            return out;
        }
        if gamma + 1 < size {
            return Series::zero(self.rd.h());
        }
        let g = gamma + 1 - size;
        // hbar-power check: size derivative halves plus (g - 1) from the potential.
        debug_assert_eq!(size as i32 * DERIV_HALF_GRADE + 2 * (g as i32 - 1), 2 * gamma as i32 - size as i32);
        self.deriv_block(mask, g).truncate_degree(self.cap)
    }

    /// Sum over set partitions of `mask` into clusters whose genera add up to `gamma`.
    fn clusters(&mut self, mask: u32, gamma: u32) -> Series {
        if mask == 0 {
            let h = self.rd.h();
            return if gamma == 0 {
                LambdaSeries::monomial(h, 0, SparsePoly::constant(CycScalar::one(self.rd.ctx())))
            } else {
                Series::zero(h)
            };
        }
        if let Some(s) = self.cluster_cache.get(&(mask, gamma)) {
            return s.clone();
        }
        let low = mask & mask.wrapping_neg();
        let others = mask & !low;
        let mut out = Series::zero(self.rd.h());
        // Every subset of the other labels joins the lowest label in its cluster.
        let mut sub = others;
        loop {
            let block = sub | low;
            for gb in 0..=gamma {
                let y = self.cluster(block, gb);
                if y.is_zero() {
                    continue;
                }
                let w = self.clusters(mask & !block, gamma - gb);
                if !w.is_zero() {
                    out.add_assign(&y.mul_truncated(&w, self.cap));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        self.cluster_cache.insert((mask, gamma), out.clone());
        out
    }

    /// `Omega^{(g)}_J` truncated at the engine's degree cap.
    pub fn omega(&mut self, labels: &[u32], genus: u32) -> Result<OmegaValue> {
        let op = wick_operator(self.rd, labels)?;
        let h = self.rd.h();
        let mut value = Series::zero(h);
        for term in &op.terms {
            let pairs = term.pairs.len() as u32;
            if pairs > genus {
                continue;
            }
            let w = self.clusters(label_mask(&term.unpaired), genus - pairs);
            if w.is_zero() {
                continue;
            }
            value.add_assign(&w.scale(&term.coeff).shift(propagator_slot(h) * pairs as i64));
        }
        Ok(OmegaValue { genus, labels: op.labels, value })
    }
}

/// `Omega^{(g)}_J` for a single label set.
pub fn omega(
    rd: &RootData,
    potentials: &[SparsePoly<Rat>],
    max_level: u32,
    labels: &[u32],
    genus: u32,
    cap: u32,
) -> Result<OmegaValue> {
    if labels.is_empty() {
        return Err(Error::InvalidArgument("omega needs at least one label".into()));
    }
    OmegaEngine::new(rd, potentials, max_level, cap, None).omega(labels, genus)
}

/// All label sets `K` of `1..=h` of the given size, as sorted vectors.
pub fn label_sets(h: u32, size: u32) -> Vec<Vec<u32>> {
    (0u32..(1 << h)).filter(|m| m.count_ones() == size).map(mask_labels).collect()
}
