//! Lagrangian-Rockafellian couples.
//!
//! A pair `(L, R)` is a couple when `(-L, R)` is minimal in
//!
//! ```text
//! (-L(u,y)) (+upp) R(u,x) >= c(x,y)     for all (u, x, y).
//! ```
//!
//! Four further characterizations are checked independently: the inf/sup
//! transform equalities (item ii), row-wise conjugate duality (item iii),
//! conjugate duality plus c-convexity of the Rockafellian rows (item iv), and
//! conjugate duality plus c'-convexity of the negated Lagrangian rows (item v).
//! These four must always agree. Minimality itself ranges over an infinite
//! ordered space, so item (i) is reported as the inequality plus a finite
//! falsification probe.

use serde::Serialize;

use crate::conjugacy::{biconjugate, conjugate, reverse_biconjugate, reverse_conjugate};
use crate::duality::{lagrangian_of, rockafellian_of};
use crate::error::Result;
use crate::extreal::ExtReal;
use crate::spaces::{check_same, Coupling, Lagrangian, Rockafellian};

/// Location and explanation of a failed check. `x`/`y` are absent when the
/// check is not indexed by that set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub item: &'static str,
    pub u: String,
    pub x: Option<String>,
    pub y: Option<String>,
    pub description: String,
}

/// Verdicts for every characterization, with a witness per false verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoupleAudit {
    pub item_i_inequality: bool,
    pub item_i_minimality_probe: bool,
    pub item_ii: bool,
    pub item_iii: bool,
    pub item_iv: bool,
    pub item_v: bool,
    /// Items (ii)-(v) disagree. Never set on a correct implementation.
    pub consistency_alarm: bool,
    pub witnesses: Vec<Witness>,
}

impl CoupleAudit {
    pub fn is_couple(&self) -> bool {
        self.item_ii && self.item_iii && self.item_iv && self.item_v
    }

    pub fn all_true(&self) -> bool {
        self.is_couple() && self.item_i_inequality && self.item_i_minimality_probe
    }
}

/// Settings for the minimality probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Positive step sizes tried on every finite entry.
    pub deltas: Vec<f64>,
    pub tol: f64,
    /// Infinite entries are replaced by `max(large_factor * m, large_floor)`,
    /// with `m` the largest finite magnitude in `(L, R, c)`.
    pub large_factor: f64,
    pub large_floor: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            deltas: vec![1e-3, 1.0],
            tol: crate::DEFAULT_TOL,
            large_factor: 10.0,
            large_floor: 1e6,
        }
    }
}

impl ProbeConfig {
    pub fn with_tol(tol: f64) -> Self {
        ProbeConfig { tol, ..Self::default() }
    }
}

fn check_domains(l: &Lagrangian, r: &Rockafellian, c: &Coupling) -> Result<()> {
    check_same(l.rows(), r.rows(), "Lagrangian U vs Rockafellian U")?;
    check_same(r.cols(), c.primal(), "Rockafellian X vs coupling X")?;
    check_same(l.cols(), c.dual(), "Lagrangian Y vs coupling Y")
}

fn triple_holds(l_uy: ExtReal, r_ux: ExtReal, c_xy: ExtReal, tol: f64) -> bool {
    (-l_uy).upp_add(r_ux).approx_ge(c_xy, tol)
}

/// First violating `(u, x, y)` of the Fenchel-Young type inequality, if any.
pub fn inequality_violation(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<Option<Witness>> {
    check_domains(l, r, c)?;
    for u in 0..r.rows().len() {
        for x in 0..c.primal().len() {
            for y in 0..c.dual().len() {
                let (luy, rux, cxy) = (l.get(u, y), r.get(u, x), c.get(x, y));
                if !triple_holds(luy, rux, cxy, tol) {
                    return Ok(Some(Witness {
                        item: "i-inequality",
                        u: r.rows().label(u).to_string(),
                        x: Some(c.primal().label(x).to_string()),
                        y: Some(c.dual().label(y).to_string()),
                        description: format!(
                            "(-L) (+upp) R = {} (+upp) {} = {} < c = {}",
                            -luy,
                            rux,
                            (-luy).upp_add(rux),
                            cxy
                        ),
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn inequality_holds(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<bool> {
    Ok(inequality_violation(l, r, c, tol)?.is_none())
}

fn item_ii_witness(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<Option<Witness>> {
    check_domains(l, r, c)?;
    let l_from_r = lagrangian_of(r, c)?;
    if let Some((u, y)) = l.first_mismatch(&l_from_r, tol) {
        return Ok(Some(Witness {
            item: "ii",
            u: l.rows().label(u).to_string(),
            x: None,
            y: Some(l.cols().label(y).to_string()),
            description: format!("L = {} but inf_x [R (+upp) (-c)] = {}", l.get(u, y), l_from_r.get(u, y)),
        }));
    }
    let r_from_l = rockafellian_of(l, c)?;
    if let Some((u, x)) = r.first_mismatch(&r_from_l, tol) {
        return Ok(Some(Witness {
            item: "ii",
            u: r.rows().label(u).to_string(),
            x: Some(r.cols().label(x).to_string()),
            y: None,
            description: format!("R = {} but sup_y [L (+low) c] = {}", r.get(u, x), r_from_l.get(u, x)),
        }));
    }
    Ok(None)
}

/// Both transform equalities hold.
pub fn check_item_ii(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<bool> {
    Ok(item_ii_witness(l, r, c, tol)?.is_none())
}

#[derive(Clone, Copy)]
enum RowCheck {
    /// `-L_u = (R_u)^c`
    NegLagrangianIsConjugate,
    /// `R_u = (-L_u)^c'`
    RockafellianIsReverseConjugate,
    /// `(R_u)^{cc'} = R_u`
    RockafellianConvex,
    /// `(-L_u)^{c'c} = -L_u`
    NegLagrangianConvex,
}

fn row_check(
    item: &'static str,
    check: RowCheck,
    u: usize,
    l: &Lagrangian,
    r: &Rockafellian,
    c: &Coupling,
    tol: f64,
) -> Result<Option<Witness>> {
    let u_label = r.rows().label(u).to_string();
    let neg_l = l.row(u).neg();
    let r_u = r.row(u);
    let on_y = |lhs: &str, rhs: &str, a: &crate::DualFunction, b: &crate::DualFunction| {
        a.first_mismatch(b, tol).map(|j| Witness {
            item,
            u: u_label.clone(),
            x: None,
            y: Some(a.domain().label(j).to_string()),
            description: format!("{lhs} = {} but {rhs} = {}", a.get(j), b.get(j)),
        })
    };
    let on_x = |lhs: &str, rhs: &str, a: &crate::PrimalFunction, b: &crate::PrimalFunction| {
        a.first_mismatch(b, tol).map(|j| Witness {
            item,
            u: u_label.clone(),
            x: Some(a.domain().label(j).to_string()),
            y: None,
            description: format!("{lhs} = {} but {rhs} = {}", a.get(j), b.get(j)),
        })
    };
    Ok(match check {
        RowCheck::NegLagrangianIsConjugate => on_y("-L_u", "(R_u)^c", &neg_l, &conjugate(&r_u, c)?),
        RowCheck::RockafellianIsReverseConjugate => on_x("R_u", "(-L_u)^c'", &r_u, &reverse_conjugate(&neg_l, c)?),
        RowCheck::RockafellianConvex => on_x("R_u", "(R_u)^cc'", &r_u, &biconjugate(&r_u, c)?),
        RowCheck::NegLagrangianConvex => on_y("-L_u", "(-L_u)^c'c", &neg_l, &reverse_biconjugate(&neg_l, c)?),
    })
}

fn rows_witness(
    item: &'static str,
    checks: [RowCheck; 2],
    l: &Lagrangian,
    r: &Rockafellian,
    c: &Coupling,
    tol: f64,
) -> Result<Option<Witness>> {
    check_domains(l, r, c)?;
    for u in 0..r.rows().len() {
        for check in checks {
            if let Some(w) = row_check(item, check, u, l, r, c, tol)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn item_iii_witness(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<Option<Witness>> {
    rows_witness(
        "iii",
        [
            RowCheck::NegLagrangianIsConjugate,
            RowCheck::RockafellianIsReverseConjugate,
        ],
        l,
        r,
        c,
        tol,
    )
}

fn item_iv_witness(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<Option<Witness>> {
    rows_witness(
        "iv",
        [RowCheck::NegLagrangianIsConjugate, RowCheck::RockafellianConvex],
        l,
        r,
        c,
        tol,
    )
}

fn item_v_witness(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<Option<Witness>> {
    rows_witness(
        "v",
        [RowCheck::RockafellianIsReverseConjugate, RowCheck::NegLagrangianConvex],
        l,
        r,
        c,
        tol,
    )
}

/// `-L` and `R` are row-wise conjugate dual functions.
pub fn check_item_iii(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<bool> {
    Ok(item_iii_witness(l, r, c, tol)?.is_none())
}

/// `-L_u = (R_u)^c` and every `R_u` is c-convex.
pub fn check_item_iv(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<bool> {
    Ok(item_iv_witness(l, r, c, tol)?.is_none())
}

/// `R_u = (-L_u)^c'` and every `-L_u` is c'-convex.
pub fn check_item_v(l: &Lagrangian, r: &Rockafellian, c: &Coupling, tol: f64) -> Result<bool> {
    Ok(item_v_witness(l, r, c, tol)?.is_none())
}

fn largest_finite_magnitude(l: &Lagrangian, r: &Rockafellian, c: &Coupling) -> f64 {
    l.values()
        .iter()
        .chain(r.values())
        .chain(c.values())
        .filter_map(|v| v.as_finite())
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Candidate strict decreases of an entry of `R`, in probe order.
fn decreases(v: ExtReal, deltas: &[f64], large: f64) -> Vec<ExtReal> {
    match v {
        ExtReal::NegInf => Vec::new(),
        ExtReal::Finite(a) => deltas
            .iter()
            .map(|d| ExtReal::finite(a - d))
            .chain(std::iter::once(ExtReal::NegInf))
            .collect(),
        ExtReal::PosInf => vec![ExtReal::finite(large), ExtReal::finite(-large)],
    }
}

fn minimality_witness(l: &Lagrangian, r: &Rockafellian, c: &Coupling, config: &ProbeConfig) -> Result<Option<Witness>> {
    if let Some(mut w) = inequality_violation(l, r, c, config.tol)? {
        w.item = "i-minimality";
        w.description = format!("inequality already fails: {}", w.description);
        return Ok(Some(w));
    }
    let large = (config.large_factor * largest_finite_magnitude(l, r, c)).max(config.large_floor);
    let (nu, nx, ny) = (r.rows().len(), c.primal().len(), c.dual().len());

    // Only triples touching the perturbed entry can change verdict.
    for u in 0..nu {
        for x in 0..nx {
            let old = r.get(u, x);
            for new in decreases(old, &config.deltas, large) {
                if (0..ny).all(|y| triple_holds(l.get(u, y), new, c.get(x, y), config.tol)) {
                    return Ok(Some(Witness {
                        item: "i-minimality",
                        u: r.rows().label(u).to_string(),
                        x: Some(c.primal().label(x).to_string()),
                        y: None,
                        description: format!("R lowered from {old} to {new} keeps the inequality"),
                    }));
                }
            }
        }
        for y in 0..ny {
            let old = l.get(u, y);
            // raising L is lowering -L
            for neg_new in decreases(-old, &config.deltas, large) {
                let new = -neg_new;
                if (0..nx).all(|x| triple_holds(new, r.get(u, x), c.get(x, y), config.tol)) {
                    return Ok(Some(Witness {
                        item: "i-minimality",
                        u: l.rows().label(u).to_string(),
                        x: None,
                        y: Some(c.dual().label(y).to_string()),
                        description: format!("L raised from {old} to {new} keeps the inequality"),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Finite falsification test of minimality: every single-entry decrease of
/// `R` and every single-entry increase of `L` must break the inequality.
/// Returns false immediately when the inequality does not hold.
pub fn minimality_probe(l: &Lagrangian, r: &Rockafellian, c: &Coupling, config: &ProbeConfig) -> Result<bool> {
    Ok(minimality_witness(l, r, c, config)?.is_none())
}

/// Runs every check and collects the first witness of each failing one.
pub fn audit(l: &Lagrangian, r: &Rockafellian, c: &Coupling, config: &ProbeConfig) -> Result<CoupleAudit> {
    check_domains(l, r, c)?;
    let tol = config.tol;
    let ineq = inequality_violation(l, r, c, tol)?;
    let probe = minimality_witness(l, r, c, config)?;
    let ii = item_ii_witness(l, r, c, tol)?;
    let iii = item_iii_witness(l, r, c, tol)?;
    let iv = item_iv_witness(l, r, c, tol)?;
    let v = item_v_witness(l, r, c, tol)?;

    let verdicts = [ii.is_none(), iii.is_none(), iv.is_none(), v.is_none()];
    let consistency_alarm = verdicts.iter().any(|&b| b != verdicts[0]);
    let audit = CoupleAudit {
        item_i_inequality: ineq.is_none(),
        item_i_minimality_probe: probe.is_none(),
        item_ii: verdicts[0],
        item_iii: verdicts[1],
        item_iv: verdicts[2],
        item_v: verdicts[3],
        consistency_alarm,
        witnesses: [ineq, probe, ii, iii, iv, v].into_iter().flatten().collect(),
    };
    Ok(audit)
}

/// The canonical couple generated by `R`: `(L, R')` with `L` the Lagrangian of
/// `R` and `R'` the Rockafellian of `L`.
pub fn make_couple(r: &Rockafellian, c: &Coupling) -> Result<(Lagrangian, Rockafellian)> {
    let l = lagrangian_of(r, c)?;
    let r2 = rockafellian_of(&l, c)?;
    Ok((l, r2))
}
