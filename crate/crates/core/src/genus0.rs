//! Genus-zero residue recursion for the one-point functions `p_{m,a}` and the
//! genus-zero potential, plus associativity and homogeneity checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::sym_c;
use crate::error::{Error, Result};
use crate::exactnum::{CycScalar, Rat};
use crate::rootsys::RootData;
use crate::series::{LambdaSeries, Monomial, SparsePoly, VarId};

/// Which variables are switched on and how far the potential is expanded.
///
/// Every `x_{m,a}` with `m <= max_level` is an independent variable; all higher
/// levels are set to zero. `max_level = 0` is the primary potential with `t_a = x_{0,a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputProfile {
    #[serde(rename = "N")]
    pub n: u32,
    pub degree_cap: u32,
    pub max_level: u32,
}

impl InputProfile {
    pub fn primary(n: u32, degree_cap: u32) -> Self {
        InputProfile { n, degree_cap, max_level: 0 }
    }

    pub fn descendant(n: u32, degree_cap: u32, max_level: u32) -> Self {
        InputProfile { n, degree_cap, max_level }
    }

    pub fn is_primary(&self) -> bool {
        self.max_level == 0
    }

    pub fn variables(&self) -> Vec<VarId> {
        (0..=self.max_level).flat_map(|m| (1..=self.n).map(move |a| VarId::new(m, a))).collect()
    }
}

/// `p_{m,a}` indexed by `VarId(m, a)`.
pub type PTable = BTreeMap<VarId, SparsePoly<Rat>>;

/// `-a + (m+1) h`, the factor relating `p_{m,a}` to the derivative of the potential.
pub fn level_factor(h: u32, v: VarId) -> i64 {
    -(v.a as i64) + (v.m as i64 + 1) * h as i64
}

/// `Phi_a = sum_m x_{m,a} lambda^m + sum_m p_{m,h-a} lambda^{-m-1}`, with exponents in units of 1/h.
pub fn phi0(rd: &RootData, profile: &InputProfile, ptable: &PTable, a: u32) -> Result<LambdaSeries<Rat>> {
    if a == 0 || a > rd.n() {
        return Err(Error::IndexOutOfRange(format!("field label {a} not in 1..={}", rd.n())));
    }
    let h = rd.h();
    let mut out = LambdaSeries::zero(h);
    for m in 0..=profile.max_level {
        out.add_at(h as i64 * m as i64, &SparsePoly::var(VarId::new(m, a), Rat::one()));
    }
    for (v, p) in ptable.range(VarId::new(0, h - a)..) {
        if v.a == h - a {
            out.add_at(-(h as i64) * (v.m as i64 + 1), p);
        }
    }
    Ok(out)
}

/// The unique `(n, a0)` with `-(a + r + sum a_i) = n h + a0` and `0 <= a0 < h`.
pub fn split_n_a0(h: u32, a: u32, tuple: &[u32]) -> (i64, u32) {
    let s = a as i64 + tuple.len() as i64 + tuple.iter().map(|&x| x as i64).sum::<i64>();
    let h = h as i64;
    ((-s).div_euclid(h), (-s).rem_euclid(h) as u32)
}

/// Highest level needed at degree `d` so that levels up to `max_level` come out exact at
/// every degree below `degree_cap`.
fn level_reach(profile: &InputProfile, h: u32, d: u32) -> u32 {
    let reach = profile.degree_cap.saturating_sub(d) * profile.max_level;
    level_bound(h, 0, d + 1).map_or(0, |l| reach.min(l))
}

/// Highest level a variable can have in a degree-`degree` monomial of a genus-`genus`
/// potential, `floor((2 + 2/h)(g - 1) + degree)`; `None` when no monomial fits.
pub fn level_bound(h: u32, genus: u32, degree: u32) -> Option<u32> {
    let kappa = Rat::new(2 * h as i64 + 2, h as i64);
    let bound = (kappa * Rat::from_int(genus as i64 - 1) + Rat::from_int(degree as i64)).floor_i64();
    u32::try_from(bound).ok()
}

/// Evaluates the degree-`d` part of the right-hand side for several targets at once,
/// sharing the products of fields across targets.
struct RhsEngine<'a> {
    rd: &'a RootData,
    d: u32,
    /// `fields[a-1]` is `Phi_a` truncated at degree `d-1`.
    fields: Vec<LambdaSeries<Rat>>,
}

impl<'a> RhsEngine<'a> {
    fn new(rd: &'a RootData, profile: &InputProfile, ptable: &PTable, d: u32) -> Result<Self> {
        let fields = (1..rd.h())
            .map(|a| Ok(phi0(rd, profile, ptable, a)?.truncate_degree(d.saturating_sub(1))))
            .collect::<Result<_>>()?;
        Ok(RhsEngine { rd, d, fields })
    }

    /// Returns `-Res` of the summed products for every target, before demotion.
    fn run(&self, targets: &[VarId]) -> Result<BTreeMap<VarId, SparsePoly<CycScalar>>> {
        let mut acc: BTreeMap<VarId, SparsePoly<CycScalar>> =
            targets.iter().map(|&v| (v, SparsePoly::zero())).collect();
        let one = LambdaSeries::monomial(self.rd.h(), 0, SparsePoly::constant(Rat::one()));
        let mut multiset = Vec::new();
        self.visit(1, &mut multiset, &one, targets, &mut acc)?;
        for p in acc.values_mut() {
            *p = p.neg();
        }
        Ok(acc)
    }

    fn visit(
        &self,
        start: u32,
        multiset: &mut Vec<u32>,
        product: &LambdaSeries<Rat>,
        targets: &[VarId],
        acc: &mut BTreeMap<VarId, SparsePoly<CycScalar>>,
    ) -> Result<()> {
        let h = self.rd.h();
        if !multiset.is_empty() {
            let c = sym_c(self.rd, multiset)?;
            if !c.is_zero() {
                for &t in targets {
                    let (n, a0) = split_n_a0(h, t.a, multiset);
                    if a0 == 0 {
                        continue;
                    }
                    let want = -(h as i64) * (t.m as i64 + n + 2);
                    let mut res = SparsePoly::<Rat>::zero();
                    for (q, p) in self.fields[(a0 - 1) as usize].terms() {
                        let other = product.coeff(want - q);
                        if !other.is_zero() {
                            res.add_assign(&p.mul_homogeneous(&other, self.d));
                        }
                    }
                    if !res.is_zero() {
                        let slot = acc.get_mut(&t).expect("target registered");
                        slot.add_assign(&res.map_coeffs(|x| c.scale(x)));
                    }
                }
            }
        }
        if multiset.len() as u32 >= h - 1 {
            return Ok(());
        }
        for v in start..h {
            let next = product.mul_truncated(&self.fields[(v - 1) as usize], self.d - 1);
            if next.is_zero() {
                continue;
            }
            multiset.push(v);
            self.visit(v, multiset, &next, targets, acc)?;
            multiset.pop();
        }
        Ok(())
    }
}

fn demote(v: VarId, p: &SparsePoly<CycScalar>) -> Result<SparsePoly<Rat>> {
    p.to_rational().map_err(|e| Error::Consistency(format!("residue for p_{{{},{}}} is not rational: {e}", v.m, v.a)))
}

/// Degree-`d` slice of `p_{m,a}` computed from the slices of lower degree stored in `ptable`.
pub fn rhs_residue(
    rd: &RootData,
    profile: &InputProfile,
    ptable: &PTable,
    m: u32,
    a: u32,
    d: u32,
) -> Result<SparsePoly<Rat>> {
    if d < 2 {
        return Ok(SparsePoly::zero());
    }
    let v = VarId::new(m, a);
    let out = RhsEngine::new(rd, profile, ptable, d)?.run(&[v])?;
    demote(v, &out[&v])
}

/// Result of a structural check on a polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub claim: String,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// The genus-zero potential together with the one-point functions it integrates.
#[derive(Clone, Debug)]
pub struct PotentialG0 {
    pub profile: InputProfile,
    pub f: SparsePoly<Rat>,
    pub ptable: PTable,
}

#[derive(Serialize)]
struct PEntryJson<'a> {
    m: u32,
    a: u32,
    poly: &'a SparsePoly<Rat>,
}

impl PotentialG0 {
    /// JSON form; `checks` are attached verbatim when supplied.
    pub fn to_json(&self, checks: &[(&str, &CheckReport)]) -> serde_json::Value {
        let p: Vec<PEntryJson> = self.ptable.iter().map(|(v, poly)| PEntryJson { m: v.m, a: v.a, poly }).collect();
        let mut obj = serde_json::json!({
            "profile": self.profile,
            "F": self.f,
            "p": p,
        });
        if !checks.is_empty() {
            let c: serde_json::Map<String, serde_json::Value> = checks
                .iter()
                .map(|(k, r)| (k.to_string(), serde_json::to_value(r).expect("report serializes")))
                .collect();
            obj["checks"] = serde_json::Value::Object(c);
        }
        obj
    }
}

/// Runs the recursion degree by degree and integrates the potential.
pub fn solve(rd: &RootData, profile: &InputProfile) -> Result<PotentialG0> {
    if profile.n != rd.n() {
        return Err(Error::InvalidArgument(format!(
            "profile rank {} differs from root data rank {}",
            profile.n,
            rd.n()
        )));
    }
    let h = rd.h();
    let cap = profile.degree_cap;
    let outputs = profile.variables();
    let mut ptable = PTable::new();
    let mut f = SparsePoly::<Rat>::zero();

    for d in 2..cap {
        let reach = level_reach(profile, h, d);
        let targets: Vec<VarId> = (0..=reach).flat_map(|m| (1..=rd.n()).map(move |a| VarId::new(m, a))).collect();
        let raw = RhsEngine::new(rd, profile, &ptable, d)?.run(&targets)?;
        let mut slices = BTreeMap::new();
        for (v, p) in &raw {
            slices.insert(*v, demote(*v, p)?);
        }

        let mut with_new = ptable.clone();
        for (v, s) in &slices {
            with_new.entry(*v).or_default().add_assign(s);
        }
        // Same-degree unknowns must not feed back into their own slice.
        let again = RhsEngine::new(rd, profile, &with_new, d)?.run(&targets)?;
        for (v, p) in &again {
            if demote(*v, p)? != slices[v] {
                return Err(Error::WellFoundedness(format!(
                    "degree {d} slice of p_{{{},{}}} depends on itself",
                    v.m, v.a
                )));
            }
        }
        ptable = with_new;

        // Euler integration: (d+1) F_{d+1} = sum_v x_v dF/dx_v.
        let grads: Vec<(VarId, SparsePoly<Rat>)> = outputs
            .iter()
            .filter_map(|&v| slices.get(&v).map(|s| (v, s.scale_rat(&Rat::new(1, level_factor(h, v))))))
            .collect();
        let mut next = SparsePoly::zero();
        for (v, g) in &grads {
            next.add_assign(&g.mul(&SparsePoly::var(*v, Rat::one())));
        }
        let next = next.scale_rat(&Rat::new(1, d as i64 + 1));
        for (v, g) in &grads {
            if &next.diff(*v) != g {
                return Err(Error::Integrability(format!("degree {} part of dF/d{v} does not integrate", d)));
            }
        }
        f.add_assign(&next);
    }

    let ptable = ptable
        .into_iter()
        .filter(|(v, _)| v.m <= profile.max_level)
        .map(|(v, p)| (v, p.truncate_degree(cap.saturating_sub(1))))
        .collect();
    Ok(PotentialG0 { profile: profile.clone(), f, ptable })
}

/// Third derivative `F_{abc}` in the flat coordinates.
fn third(f: &SparsePoly<Rat>, a: u32, b: u32, c: u32) -> SparsePoly<Rat> {
    f.diff(VarId::flat(a)).diff(VarId::flat(b)).diff(VarId::flat(c))
}

/// Associativity of `F_{abe} g^{ef} F_{fcd}` with `g_{ab} = delta_{a+b,h}`, compared up to
/// degree `degree_cap - 3`.
pub fn wdvv_check(f: &SparsePoly<Rat>, n: u32, degree_cap: u32) -> CheckReport {
    let h = n + 1;
    let primary = f.filter(|m| m.max_level() == 0);
    let claim = format!("WDVV for N = {n} up to degree {}", degree_cap.saturating_sub(3));
    if degree_cap < 3 {
        return CheckReport { claim, pass: true, failures: Vec::new() };
    }
    let keep = degree_cap - 3;
    let mut f3 = BTreeMap::new();
    for a in 1..=n {
        for b in a..=n {
            for c in b..=n {
                f3.insert((a, b, c), third(&primary, a, b, c).truncate_degree(keep));
            }
        }
    }
    let get = |a: u32, b: u32, c: u32| {
        let mut k = [a, b, c];
        k.sort_unstable();
        &f3[&(k[0], k[1], k[2])]
    };
    let contract = |a: u32, b: u32, c: u32, d: u32| {
        let mut acc = SparsePoly::zero();
        for e in 1..=n {
            acc.add_assign(&get(a, b, e).mul_truncated(get(h - e, c, d), keep));
        }
        acc
    };
    let mut failures = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            for c in (b + 1)..=n {
                for d in 1..=n {
                    let lhs = contract(a, b, c, d);
                    let rhs = contract(a, c, b, d);
                    if lhs != rhs {
                        failures.push(format!("(a,b,c,d) = ({a},{b},{c},{d}): {} != {}", lhs, rhs));
                    }
                }
            }
        }
    }
    CheckReport { claim, pass: failures.is_empty(), failures }
}

/// Weight of `x_{k,a}` in the grading that makes every genus-g potential homogeneous.
pub fn variable_weight(h: u32, v: VarId) -> Rat {
    Rat::new(v.a as i64 + 1, h as i64) - Rat::from_int(v.m as i64)
}

fn monomial_weight(h: u32, m: &Monomial) -> Rat {
    m.exps().iter().fold(Rat::zero(), |acc, (v, e)| acc + variable_weight(h, *v) * Rat::from_int(*e as i64))
}

/// Every monomial of a genus-`g` potential must have weight `(2 + 2/h)(1 - g)`.
pub fn grading_check(f: &SparsePoly<Rat>, n: u32, genus: u32) -> CheckReport {
    let h = n + 1;
    let total = Rat::new(2 * h as i64 + 2, h as i64) * Rat::from_int(1 - genus as i64);
    let failures: Vec<String> = f
        .terms()
        .filter(|(m, _)| monomial_weight(h, m) != total)
        .map(|(m, c)| format!("{c} * {m} has weight {}", monomial_weight(h, m)))
        .collect();
    CheckReport {
        claim: format!("weighted homogeneity of total weight {total} for N = {n}"),
        pass: failures.is_empty(),
        failures,
    }
}

/// Euler homogeneity with weights `(i+1)/h` and total weight `2 + 2/h`.
pub fn euler_check(f: &SparsePoly<Rat>, n: u32) -> CheckReport {
    grading_check(f, n, 0)
}
