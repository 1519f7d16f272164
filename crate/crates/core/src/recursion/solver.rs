//! Genus-by-genus solution of the residue recursion for `F^{(g)}`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::omega::{label_sets, OmegaEngine};
use crate::error::{Error, Result};
use crate::exactnum::{CycScalar, Rat};
use crate::genus0::{self, level_bound, level_factor, InputProfile};
use crate::rootsys::RootData;
use crate::series::{SparsePoly, VarId};

/// Truncated potentials `F^{(0)}, ..., F^{(G)}`; `F^{(g)}` holds every monomial of degree
/// `1..=caps[g]` (degree 0 is not determined by the recursion and stored as zero).
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTable {
    n: u32,
    caps: Vec<u32>,
    max_level: u32,
    potentials: Vec<SparsePoly<Rat>>,
}

impl PotentialTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn h(&self) -> u32 {
        self.n + 1
    }

    pub fn max_genus(&self) -> u32 {
        self.potentials.len() as u32 - 1
    }

    pub fn cap(&self, genus: u32) -> u32 {
        self.caps[genus as usize]
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// Highest descendant level that can occur in any stored monomial.
    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn potential(&self, genus: u32) -> &SparsePoly<Rat> {
        &self.potentials[genus as usize]
    }

    pub fn potentials(&self) -> &[SparsePoly<Rat>] {
        &self.potentials
    }

    /// Replaces one potential, e.g. to build a perturbed control table.
    pub fn with_potential(&self, genus: u32, f: SparsePoly<Rat>) -> Self {
        let mut out = self.clone();
        out.potentials[genus as usize] = f;
        out
    }

    pub fn to_json(&self) -> Value {
        let genus: Vec<Value> = self
            .potentials
            .iter()
            .enumerate()
            .map(|(g, f)| {
                json!({
                    "g": g,
                    "cap": self.caps[g],
                    "F": f,
                    "constant_term": if g == 0 { "0" } else { "undetermined" },
                })
            })
            .collect();
        json!({ "N": self.n, "max_level": self.max_level, "genus": genus })
    }
}

/// Degree caps `D - 2g`.
pub fn default_caps(max_genus: u32, degree_cap: u32) -> Vec<u32> {
    (0..=max_genus).map(|g| degree_cap.saturating_sub(2 * g)).collect()
}

/// `sum_{i in K} eta^{-ia} / prod_{j in K, j != i} (eta^i - eta^j)`.
pub fn kernel_coefficient(rd: &RootData, labels: &[u32], a: u32) -> Result<CycScalar> {
    let mut acc = CycScalar::zero(rd.ctx());
    for &i in labels {
        let mut den = CycScalar::one(rd.ctx());
        for &j in labels {
            if j != i {
                den = &den * &(&rd.eta(i as i64) - &rd.eta(j as i64));
            }
        }
        acc.add_assign_ref(&(&rd.eta(-((i * a) as i64)) * &den.inv()?));
    }
    Ok(acc)
}

fn targets(rd: &RootData, genus: u32, degree: u32) -> Vec<VarId> {
    match level_bound(rd.h(), genus, degree) {
        Some(l) => (0..=l).flat_map(|m| (1..=rd.n()).map(move |a| VarId::new(m, a))).collect(),
        None => Vec::new(),
    }
}

/// Degree-`d` part of `dF^{(g)}/dx_{m,a}` for every target, from the current potentials.
fn gradients(
    rd: &RootData,
    potentials: &[SparsePoly<Rat>],
    max_level: u32,
    kernels: &BTreeMap<(Vec<u32>, u32), CycScalar>,
    genus: u32,
    d: u32,
    targets: &[VarId],
) -> Result<BTreeMap<VarId, SparsePoly<Rat>>> {
    let h = rd.h() as i64;
    let mut engine = OmegaEngine::new(rd, potentials, max_level, d, None);
    let mut acc: BTreeMap<VarId, SparsePoly<CycScalar>> = targets.iter().map(|&v| (v, SparsePoly::zero())).collect();
    for size in 2..=rd.h() {
        for labels in label_sets(rd.h(), size) {
            let om = engine.omega(&labels, genus)?;
            if om.value.is_zero() {
                continue;
            }
            for &t in targets {
                let kc = &kernels[&(labels.clone(), t.a)];
                if kc.is_zero() {
                    continue;
                }
                let slot = -(t.m as i64 + 2) * h + t.a as i64 + size as i64 - 1;
                let part = om.value.coeff(slot).homogeneous_part(d);
                if !part.is_zero() {
                    acc.get_mut(&t).expect("target registered").add_assign(&part.scale(kc));
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (v, p) in acc {
        let scale = Rat::new(-1, h * level_factor(rd.h(), v));
        let r = p.to_rational().map_err(|e| {
            Error::Consistency(format!("genus {genus} degree {d} gradient along {v} is not rational: {e}"))
        })?;
        out.insert(v, r.scale_rat(&scale));
    }
    Ok(out)
}

/// Solves for `F^{(0)}..F^{(G)}` with caps `D - 2g`.
pub fn solve_theorem1(rd: &RootData, max_genus: u32, degree_cap: u32) -> Result<PotentialTable> {
    solve_theorem1_with_caps(rd, &default_caps(max_genus, degree_cap))
}

/// Solves with explicit per-genus degree caps. A genus-`g` slice of degree `n` needs
/// genus `g' < g` complete to degree `n + (g - g')`, so caps must satisfy
/// `caps[g'] >= caps[g] + (g - g')`.
pub fn solve_theorem1_with_caps(rd: &RootData, caps: &[u32]) -> Result<PotentialTable> {
    if caps.is_empty() {
        return Err(Error::InvalidArgument("at least one genus is required".into()));
    }
    for g in 0..caps.len() {
        for gp in 0..g {
            if caps[g] > 0 && caps[gp] < caps[g] + (g - gp) as u32 {
                return Err(Error::InvalidArgument(format!(
                    "cap {} for genus {gp} is too small to support cap {} at genus {g}",
                    caps[gp], caps[g]
                )));
            }
        }
    }
    let h = rd.h();
    let max_level = caps.iter().enumerate().filter_map(|(g, &c)| level_bound(h, g as u32, c)).max().unwrap_or(0);

    let mut kernels = BTreeMap::new();
    for size in 2..=h {
        for labels in label_sets(h, size) {
            for a in 1..=rd.n() {
                kernels.insert((labels.clone(), a), kernel_coefficient(rd, &labels, a)?);
            }
        }
    }

    let mut potentials: Vec<SparsePoly<Rat>> = Vec::new();
    for (g, &cap) in caps.iter().enumerate() {
        let g = g as u32;
        potentials.push(SparsePoly::zero());
        for d in 0..cap {
            let tg = targets(rd, g, d + 1);
            if tg.is_empty() {
                continue;
            }
            let grads = gradients(rd, &potentials, max_level, &kernels, g, d, &tg)?;

            // Euler integration of the degree-(d+1) slice.
            let mut slice = SparsePoly::zero();
            for (v, p) in &grads {
                slice.add_assign(&p.mul(&SparsePoly::var(*v, Rat::one())));
            }
            let slice = slice.scale_rat(&Rat::new(1, d as i64 + 1));
            for (v, p) in &grads {
                if &slice.diff(*v) != p {
                    return Err(Error::Integrability(format!(
                        "genus {g}, degree {}: d/d{v} does not integrate",
                        d + 1
                    )));
                }
            }
            potentials[g as usize].add_assign(&slice);

            let again = gradients(rd, &potentials, max_level, &kernels, g, d, &tg)?;
            if again != grads {
                return Err(Error::WellFoundedness(format!(
                    "genus {g} degree {d} gradients depend on the slice they determine"
                )));
            }
        }
        let report = genus0::grading_check(&potentials[g as usize], rd.n(), g);
        if !report.pass {
            return Err(Error::Consistency(format!("genus {g} potential is not homogeneous: {:?}", report.failures)));
        }
    }

    if caps[0] >= 3 {
        let level0 = level_bound(h, 0, caps[0]).unwrap_or(0);
        let g0 = genus0::solve(rd, &InputProfile::descendant(rd.n(), caps[0], level0))?;
        if g0.f != potentials[0] {
            return Err(Error::Consistency("genus-0 potential differs from the one-point recursion".into()));
        }
    }

    Ok(PotentialTable { n: rd.n(), caps: caps.to_vec(), max_level, potentials })
}
