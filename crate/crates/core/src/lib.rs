//! Generalized conjugate duality on finite sets.
//!
//! Everything computes over [`ExtReal`], the extended reals with Moreau
//! lower and upper additions. A [`Coupling`] `c : X x Y -> [-inf, +inf]`
//! induces the Fenchel-Moreau conjugacies in [`conjugacy`]; [`duality`] turns
//! Rockafellians `R : U x X` into Lagrangians `L : U x Y` and back; [`couple`]
//! decides whether a pair `(L, R)` is a Lagrangian-Rockafellian couple through
//! five independently implemented characterizations.
//!
//! ```
//! use lagroc_core::{lagrangian_of, perturbation_function, Coupling, ExtReal, FiniteSet, Rockafellian};
//!
//! let x = FiniteSet::new(["x0", "x1"]).unwrap();
//! let y = FiniteSet::new(["y0", "y1"]).unwrap();
//! let u = FiniteSet::new(["u0", "u1"]).unwrap();
//! let e = ExtReal::finite;
//! let c = Coupling::new(x.clone(), y, vec![vec![e(0.0), e(0.0)], vec![e(1.0), e(2.0)]]).unwrap();
//! let r = Rockafellian::new(u, x, vec![vec![e(5.0), e(3.0)], vec![e(0.0), ExtReal::PosInf]]).unwrap();
//!
//! let l = lagrangian_of(&r, &c).unwrap();
//! assert_eq!(l.to_rows(), vec![vec![e(2.0), e(1.0)], vec![e(0.0), e(0.0)]]);
//! assert_eq!(perturbation_function(&r).values(), [e(0.0), e(3.0)]);
//! ```

pub mod conjugacy;
pub mod couple;
pub mod duality;
pub mod error;
pub mod extreal;
pub mod fuzz;
pub mod problem;
pub mod spaces;

pub use conjugacy::{
    biconjugate, conjugate, is_c_convex, is_cprime_convex, reverse_biconjugate, reverse_conjugate, young_check,
};
pub use couple::{
    audit, check_item_ii, check_item_iii, check_item_iv, check_item_v, inequality_holds, make_couple, minimality_probe,
    CoupleAudit, ProbeConfig, Witness,
};
pub use duality::{
    dual_function, lagrangian_of, perturbation_function, rockafellian_of, weak_duality_report, WeakDualityReport,
};
pub use error::{Error, Result};
pub use extreal::{approx_eq, inf_over, low_add, neg, sup_over, upp_add, ExtReal, DEFAULT_TOL};
pub use problem::{Problem, ProblemFile};
pub use spaces::{
    partial_lagrangian, partial_rockafellian, reverse_coupling, Coupling, Decision, Dual, DualFunction, FiniteSet,
    Function, Lagrangian, Primal, PrimalFunction, ReverseCoupling, Rockafellian, Role, Table,
};
