//! All-genus potentials from the residue recursion, and the constraints they satisfy.

mod fields;
mod kernel;
mod omega;
mod solver;
mod wconstraint;

pub use fields::{
    deriv_term, mult_term, propagator, propagator_slot, wick_operator, x_field, FieldSymbol, FieldTerm, WickOperator,
    WickTerm,
};
pub use kernel::{kernel_monomials, kernel_ratio, period_kernel, solver_kernel, KernelMonomial};
pub use omega::{label_sets, omega, MultShift, OmegaEngine, OmegaValue};
pub use solver::{default_caps, kernel_coefficient, solve_theorem1, solve_theorem1_with_caps, PotentialTable};
pub use wconstraint::{required_caps, w_residual, DilatonShift, WCheckReport};

use crate::exactnum::Rat;
use crate::series::{SparsePoly, VarId};

/// Rewrites a polynomial in `x_{k,a}` in the variables `t_{k,a} = x_{k,a} prod_{i=1}^k(-a + ih)`.
pub fn rescale_to_t(f: &SparsePoly<Rat>, h: u32) -> SparsePoly<Rat> {
    let mut out = f.clone();
    for v in f.variables() {
        let factor = (1..=v.m as i64).fold(Rat::one(), |acc, i| acc * Rat::from_int(-(v.a as i64) + i * h as i64));
        let inv = factor.inv().expect("nonzero for 1 <= a < h");
        out = out.substitute(v, &SparsePoly::var(VarId::new(v.m, v.a), inv));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootData;

    #[test]
    fn a1_low_orders() {
        let rd = RootData::new(1).unwrap();
        let table = solve_theorem1(&rd, 1, 5).unwrap();
        let x0 = VarId::new(0, 1);
        let x1 = VarId::new(1, 1);
        let f0 = table.potential(0);
        assert_eq!(
            f0.homogeneous_part(3),
            SparsePoly::var(x0, Rat::one())
                .mul(&SparsePoly::var(x0, Rat::new(1, 6)))
                .mul(&SparsePoly::var(x0, Rat::one()))
        );
        assert_eq!(table.potential(1).diff(x1).homogeneous_part(0), SparsePoly::constant(Rat::new(1, 24)));
    }

    #[test]
    fn dilaton_shift_round_trip() {
        let s = DilatonShift::standard(2);
        assert_eq!(s.x_offset(), Rat::new(1, 1));
        let f = SparsePoly::var(s.var(), Rat::new(3, 1)).mul(&SparsePoly::var(VarId::new(0, 1), Rat::one()));
        assert_eq!(s.unapply(&s.apply(&f)), f);
        assert_eq!(DilatonShift::as_printed(2).x_offset(), Rat::one());
    }
}
