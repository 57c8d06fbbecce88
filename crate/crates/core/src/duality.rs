//! The two transforms between Rockafellians and Lagrangians, the perturbation
//! and dual functions, and weak-duality reporting.
//!
//! ```text
//! L(u,y) = inf_x [ R(u,x) (+upp) (-c(x,y)) ]      -L_u = (R_u)^c
//! R(u,x) = sup_y [ L(u,y) (+low)   c(x,y)  ]       R_u = (-L_u)^c'
//! phi(x) = inf_u R(u,x)        psi(y) = inf_u L(u,y)
//! ```

use serde::Serialize;

use crate::conjugacy::{conjugate, reverse_conjugate};
use crate::error::Result;
use crate::extreal::{sup_over, ExtReal};
use crate::spaces::{
    check_same, Coupling, DualFunction, Function, Lagrangian, PrimalFunction, Rockafellian, Role, Table,
};

/// Lagrangian built from a Rockafellian through the inf / upper-addition formula.
pub fn lagrangian_of(r: &Rockafellian, c: &Coupling) -> Result<Lagrangian> {
    check_same(r.cols(), c.primal(), "Rockafellian X vs coupling X")?;
    let (nu, nx, ny) = (r.rows().len(), c.primal().len(), c.dual().len());
    let mut rows = Vec::with_capacity(nu);
    for u in 0..nu {
        // accumulate over x so the coupling is read row-major
        let mut row = vec![ExtReal::PosInf; ny];
        for x in 0..nx {
            let a = r.get(u, x);
            for (y, acc) in row.iter_mut().enumerate() {
                *acc = (*acc).min(a.upp_add(-c.get(x, y)));
            }
        }
        rows.push(row);
    }
    Lagrangian::new(r.rows().clone(), c.dual().clone(), rows)
}

/// The same Lagrangian computed row by row as `-(R_u)^c`.
pub fn lagrangian_via_conjugates(r: &Rockafellian, c: &Coupling) -> Result<Lagrangian> {
    check_same(r.cols(), c.primal(), "Rockafellian X vs coupling X")?;
    let rows = (0..r.rows().len())
        .map(|u| conjugate(&r.row(u), c).map(|f| f.neg()))
        .collect::<Result<Vec<_>>>()?;
    Table::from_row_functions(r.rows().clone(), rows)
}

/// Rockafellian built from a Lagrangian through the sup / lower-addition formula.
pub fn rockafellian_of(l: &Lagrangian, c: &Coupling) -> Result<Rockafellian> {
    check_same(l.cols(), c.dual(), "Lagrangian Y vs coupling Y")?;
    let (nu, nx, ny) = (l.rows().len(), c.primal().len(), c.dual().len());
    let mut rows = Vec::with_capacity(nu);
    for u in 0..nu {
        let mut row = Vec::with_capacity(nx);
        for x in 0..nx {
            row.push(sup_over((0..ny).map(|y| l.get(u, y).low_add(c.get(x, y))))?);
        }
        rows.push(row);
    }
    Rockafellian::new(l.rows().clone(), c.primal().clone(), rows)
}

/// The same Rockafellian computed row by row as `(-L_u)^c'`.
pub fn rockafellian_via_conjugates(l: &Lagrangian, c: &Coupling) -> Result<Rockafellian> {
    check_same(l.cols(), c.dual(), "Lagrangian Y vs coupling Y")?;
    let rows = (0..l.rows().len())
        .map(|u| reverse_conjugate(&l.row(u).neg(), c))
        .collect::<Result<Vec<_>>>()?;
    Table::from_row_functions(l.rows().clone(), rows)
}

fn column_infima<C: Role>(t: &Table<crate::spaces::Decision, C>) -> Function<C> {
    Function::from_fn(t.cols().clone(), |j| {
        (0..t.rows().len())
            .map(|i| t.get(i, j))
            .min()
            .expect("decision set is nonempty")
    })
}

/// `phi(x) = inf_u R(u,x)`.
pub fn perturbation_function(r: &Rockafellian) -> PrimalFunction {
    column_infima(r)
}

/// `psi(y) = inf_u L(u,y)`.
pub fn dual_function(l: &Lagrangian) -> DualFunction {
    column_infima(l)
}

/// Primal value `phi(x)` against dual value `sup_y [ c(x,y) (+low) psi(y) ]` at one base point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakDualityReport {
    pub base_point: String,
    pub primal_value: ExtReal,
    pub dual_value: ExtReal,
    pub tight: bool,
    /// `primal_value - dual_value`, present only when both are finite.
    pub gap: Option<f64>,
}

pub fn weak_duality_report(r: &Rockafellian, c: &Coupling, base_point: &str) -> Result<WeakDualityReport> {
    weak_duality_report_with_tol(r, c, base_point, crate::DEFAULT_TOL)
}

pub fn weak_duality_report_with_tol(
    r: &Rockafellian,
    c: &Coupling,
    base_point: &str,
    tol: f64,
) -> Result<WeakDualityReport> {
    check_same(r.cols(), c.primal(), "Rockafellian X vs coupling X")?;
    let xbar = c.primal().require(base_point, "X")?;
    let phi = perturbation_function(r);
    let psi = dual_function(&lagrangian_of(r, c)?);
    let primal_value = phi.get(xbar);
    let dual_value = sup_over(
        c.row_values(xbar)
            .iter()
            .zip(psi.values())
            .map(|(&cxy, &py)| cxy.low_add(py)),
    )?;
    debug_assert!(dual_value.approx_le(primal_value, tol), "weak duality violated");
    let gap = match (primal_value, dual_value) {
        (ExtReal::Finite(p), ExtReal::Finite(d)) => Some(p - d),
        _ => None,
    };
    Ok(WeakDualityReport {
        base_point: base_point.to_string(),
        primal_value,
        dual_value,
        tight: primal_value.approx_eq(dual_value, tol),
        gap,
    })
}
