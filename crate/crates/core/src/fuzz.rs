//! Randomized invariant harness.
//!
//! Each instance draws sets of size `1..=max_set_size`, a coupling, a
//! Rockafellian, a Lagrangian and a few univariate functions with entries from
//! an integer grid plus both infinities, then runs every conjugacy law,
//! transform identity, weak-duality bound and couple characterization on it.
//! Integer entries keep all finite arithmetic exact, so any failure is a bug.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjugacy::{self, is_c_convex, is_cprime_convex, pointwise_inf, pointwise_sup};
use crate::couple::{audit, make_couple, ProbeConfig};
use crate::duality::{
    dual_function, lagrangian_of, lagrangian_via_conjugates, perturbation_function, rockafellian_of,
    rockafellian_via_conjugates, weak_duality_report_with_tol,
};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::problem::ProblemFile;
use crate::spaces::{
    reverse_coupling, Coupling, DualFunction, FiniteSet, Function, Lagrangian, PrimalFunction, Rockafellian, Role,
    Table,
};

/// Distribution of random table entries: an integer uniform in `[min, max]`,
/// except `-inf` / `+inf` with the given probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueGrid {
    pub min: i32,
    pub max: i32,
    pub p_neg_inf: f64,
    pub p_pos_inf: f64,
}

impl Default for ValueGrid {
    fn default() -> Self {
        ValueGrid {
            min: -10,
            max: 10,
            p_neg_inf: 0.1,
            p_pos_inf: 0.1,
        }
    }
}

impl ValueGrid {
    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> ExtReal {
        let p: f64 = rng.gen();
        if p < self.p_neg_inf {
            ExtReal::NegInf
        } else if p < self.p_neg_inf + self.p_pos_inf {
            ExtReal::PosInf
        } else {
            ExtReal::from(rng.gen_range(self.min..=self.max))
        }
    }
}

/// `MIN..MAX` or `MIN..MAX,P` (P = probability of each infinity), e.g. `-10..10,0.1`.
impl FromStr for ValueGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidToken(s.to_string());
        let (range, p) = match s.split_once(',') {
            Some((r, p)) => (r, Some(p)),
            None => (s, None),
        };
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let min: i32 = lo.trim().parse().map_err(|_| bad())?;
        let max: i32 = hi.trim().parse().map_err(|_| bad())?;
        let p_inf = match p {
            Some(p) => p.trim().parse::<f64>().map_err(|_| bad())?,
            None => 0.1,
        };
        if min > max || !(0.0..=0.5).contains(&p_inf) {
            return Err(bad());
        }
        Ok(ValueGrid {
            min,
            max,
            p_neg_inf: p_inf,
            p_pos_inf: p_inf,
        })
    }
}

impl fmt::Display for ValueGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{},{}", self.min, self.max, self.p_neg_inf)
    }
}

/// Deliberate defects used to check that the harness notices broken code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Conjugates computed with `c (+low) f` instead of `c (+low) (-f)`.
    SignFlip,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sign-flip" => Ok(Fault::SignFlip),
            other => Err(Error::InvalidToken(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub count: usize,
    pub max_set_size: usize,
    pub seed: u64,
    pub grid: ValueGrid,
    pub tol: f64,
    pub fault: Option<Fault>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            count: 1000,
            max_set_size: 5,
            seed: 42,
            grid: ValueGrid::default(),
            tol: crate::DEFAULT_TOL,
            fault: None,
        }
    }
}

/// One random instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub coupling: Coupling,
    pub rockafellian: Rockafellian,
    pub lagrangian: Lagrangian,
    pub f: PrimalFunction,
    /// Pointwise `>= f`.
    pub f_above: PrimalFunction,
    pub g: DualFunction,
}

impl Instance {
    pub fn generate(rng: &mut impl Rng, max_set_size: usize, grid: &ValueGrid) -> Self {
        let u = FiniteSet::indexed("u", rng.gen_range(1..=max_set_size)).expect("size >= 1");
        let x = FiniteSet::indexed("x", rng.gen_range(1..=max_set_size)).expect("size >= 1");
        let y = FiniteSet::indexed("y", rng.gen_range(1..=max_set_size)).expect("size >= 1");
        let coupling = random_table(rng, &x, &y, grid);
        let rockafellian = random_table(rng, &u, &x, grid);
        let lagrangian = random_table(rng, &u, &y, grid);
        let f = random_function(rng, &x, grid);
        let f_above = Function::from_fn(x.clone(), |i| f.get(i).max(grid.sample(rng)));
        let g = random_function(rng, &y, grid);
        Instance {
            coupling,
            rockafellian,
            lagrangian,
            f,
            f_above,
            g,
        }
    }

    pub fn to_problem_file(&self) -> ProblemFile {
        ProblemFile::from_tables(
            &self.coupling,
            self.rockafellian.rows(),
            Some(&self.rockafellian),
            Some(&self.lagrangian),
            Some(self.coupling.primal().label(0)),
        )
    }
}

fn random_table<R: Role, C: Role>(
    rng: &mut impl Rng,
    rows: &FiniteSet,
    cols: &FiniteSet,
    grid: &ValueGrid,
) -> Table<R, C> {
    Table::from_fn(rows.clone(), cols.clone(), |_, _| grid.sample(rng))
}

fn random_function<R: Role>(rng: &mut impl Rng, domain: &FiniteSet, grid: &ValueGrid) -> Function<R> {
    Function::from_fn(domain.clone(), |_| grid.sample(rng))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzFailure {
    pub index: usize,
    pub instance_seed: u64,
    pub check: &'static str,
    pub detail: String,
    #[serde(skip)]
    pub reproduction: ProblemFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub instances: usize,
    pub checks: BTreeMap<&'static str, Tally>,
    /// Instances where the Rockafellian-from-Lagrangian inequality is strict somewhere.
    pub strict_inequality_instances: usize,
    /// Perturbed couples whose items (ii)-(v) all stayed true.
    pub perturbations_still_couples: usize,
    /// Perturbed pairs where items (ii)-(v) all became false.
    pub perturbations_broken: usize,
    pub first_failure: Option<FuzzFailure>,
}

impl FuzzReport {
    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|t| t.failed == 0)
    }

    pub fn total_failed(&self) -> usize {
        self.checks.values().map(|t| t.failed).sum()
    }
}

type Conj = fn(&PrimalFunction, &Coupling) -> Result<DualFunction>;
type RevConj = fn(&DualFunction, &Coupling) -> Result<PrimalFunction>;

/// The conjugate pair the conjugacy-law checks go through.
#[derive(Clone, Copy)]
struct Kernel {
    conj: Conj,
    rconj: RevConj,
}

impl Kernel {
    fn for_fault(fault: Option<Fault>) -> Self {
        match fault {
            None => Kernel {
                conj: conjugacy::conjugate::<crate::spaces::Primal, crate::spaces::Dual>,
                rconj: conjugacy::reverse_conjugate,
            },
            Some(Fault::SignFlip) => Kernel {
                conj: flipped_conjugate,
                rconj: flipped_reverse_conjugate,
            },
        }
    }

    fn bi(&self, f: &PrimalFunction, c: &Coupling) -> Result<PrimalFunction> {
        (self.rconj)(&(self.conj)(f, c)?, c)
    }

    fn rbi(&self, g: &DualFunction, c: &Coupling) -> Result<DualFunction> {
        (self.conj)(&(self.rconj)(g, c)?, c)
    }
}

fn flipped_conjugate(f: &PrimalFunction, c: &Coupling) -> Result<DualFunction> {
    conjugacy::conjugate(&f.neg(), c)
}

fn flipped_reverse_conjugate(g: &DualFunction, c: &Coupling) -> Result<PrimalFunction> {
    conjugacy::reverse_conjugate(&g.neg(), c)
}

struct Checker<'a> {
    checks: &'a mut BTreeMap<&'static str, Tally>,
    failure: Option<(&'static str, String)>,
}

impl Checker<'_> {
    fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.checks.entry(name).or_default();
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if self.failure.is_none() {
                self.failure = Some((name, detail()));
            }
        }
    }
}

/// Outcome flags of a single instance, beyond pass/fail tallies.
#[derive(Debug, Default)]
struct Observations {
    strict_inequality: bool,
    perturbation_still_couple: bool,
    perturbation_broken: bool,
}

fn check_instance(
    inst: &Instance,
    kernel: Kernel,
    tol: f64,
    grid: &ValueGrid,
    rng: &mut impl Rng,
    ck: &mut Checker<'_>,
) -> Result<Observations> {
    let c = &inst.coupling;
    let mut obs = Observations::default();

    // conjugacy laws
    let fc = (kernel.conj)(&inst.f, c)?;
    let young =
        (0..c.primal().len()).all(|i| (0..c.dual().len()).all(|j| inst.f.get(i).upp_add(fc.get(j)) >= c.get(i, j)));
    ck.record("conjugacy/fenchel-young", young, || {
        format!("f = {:?}, f^c = {fc:?}", inst.f)
    });

    let fc_above = (kernel.conj)(&inst.f_above, c)?;
    ck.record("conjugacy/antitone", fc_above.le(&fc, tol), || {
        format!("f <= h but h^c = {fc_above:?} not <= f^c = {fc:?}")
    });

    let fcc = kernel.bi(&inst.f, c)?;
    ck.record("conjugacy/biconjugate-below", fcc.le(&inst.f, tol), || {
        format!("f^cc' = {fcc:?}, f = {:?}", inst.f)
    });
    let gcc = kernel.rbi(&inst.g, c)?;
    ck.record("conjugacy/reverse-biconjugate-below", gcc.le(&inst.g, tol), || {
        format!("g^c'c = {gcc:?}, g = {:?}", inst.g)
    });

    let fccc = (kernel.conj)(&fcc, c)?;
    ck.record("conjugacy/triple-conjugate", fccc.approx_eq(&fc, tol), || {
        format!("f^cc'c = {fccc:?}, f^c = {fc:?}")
    });
    let gc = (kernel.rconj)(&inst.g, c)?;
    let gccc = (kernel.rconj)(&gcc, c)?;
    ck.record("conjugacy/reverse-triple-conjugate", gccc.approx_eq(&gc, tol), || {
        format!("g^c'cc' = {gccc:?}, g^c' = {gc:?}")
    });

    let fcccc = kernel.bi(&fcc, c)?;
    ck.record("conjugacy/biconjugate-idempotent", fcccc.approx_eq(&fcc, tol), || {
        format!("(f^cc')^cc' = {fcccc:?}, f^cc' = {fcc:?}")
    });

    let rows: Vec<PrimalFunction> = (0..inst.rockafellian.rows().len())
        .map(|u| inst.rockafellian.row(u))
        .collect();
    let inf_conj = (kernel.conj)(&pointwise_inf(&rows)?, c)?;
    let sup_conj = pointwise_sup(&rows.iter().map(|r| (kernel.conj)(r, c)).collect::<Result<Vec<_>>>()?)?;
    ck.record("conjugacy/inf-to-sup", inf_conj.approx_eq(&sup_conj, tol), || {
        format!("(inf_u R_u)^c = {inf_conj:?}, sup_u (R_u)^c = {sup_conj:?}")
    });

    let via_reverse: PrimalFunction = conjugacy::conjugate(&inst.g, &reverse_coupling(c))?;
    ck.record("conjugacy/reverse-symmetry", via_reverse.approx_eq(&gc, tol), || {
        format!("g^c' = {gc:?} vs conjugate through c' = {via_reverse:?}")
    });

    // transforms
    let r = &inst.rockafellian;
    let l_of_r = lagrangian_of(r, c)?;
    let l_alt = lagrangian_via_conjugates(r, c)?;
    ck.record("duality/lagrangian-two-routes", l_of_r.approx_eq(&l_alt, tol), || {
        format!("inf formula {:?} vs conjugates {:?}", l_of_r.to_rows(), l_alt.to_rows())
    });
    let l = &inst.lagrangian;
    let r_of_l = rockafellian_of(l, c)?;
    let r_alt = rockafellian_via_conjugates(l, c)?;
    ck.record("duality/rockafellian-two-routes", r_of_l.approx_eq(&r_alt, tol), || {
        format!("sup formula {:?} vs conjugates {:?}", r_of_l.to_rows(), r_alt.to_rows())
    });

    let phi = perturbation_function(r);
    let neg_psi = dual_function(&l_of_r).neg();
    let phi_c = conjugacy::conjugate(&phi, c)?;
    ck.record(
        "duality/neg-psi-is-phi-conjugate",
        neg_psi.approx_eq(&phi_c, tol),
        || format!("-psi = {neg_psi:?}, phi^c = {phi_c:?}"),
    );

    let phi_l = perturbation_function(&r_of_l);
    let bound = conjugacy::reverse_conjugate(&dual_function(l).neg(), c)?;
    ck.record("duality/phi-above-reverse-conjugate", bound.le(&phi_l, tol), || {
        format!("phi = {phi_l:?}, (-psi)^c' = {bound:?}")
    });
    obs.strict_inequality = phi_l.values().iter().zip(bound.values()).any(|(p, b)| p > b);

    let mut rows_ok = true;
    for u in 0..r.rows().len() {
        rows_ok &= is_c_convex(&r_of_l.row(u), c, tol)?;
        rows_ok &= is_cprime_convex(&l_of_r.row(u).neg(), c, tol)?;
    }
    ck.record("duality/transform-rows-convex", rows_ok, || {
        "a transformed row is not generalized-convex".into()
    });

    let r_round = rockafellian_of(&l_of_r, c)?;
    let all_rows_convex = (0..r.rows().len())
        .map(|u| is_c_convex(&r.row(u), c, tol))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let contraction = r_round.le(r, tol) && (r_round.approx_eq(r, tol) == all_rows_convex);
    ck.record("duality/round-trip-contraction", contraction, || {
        format!("R = {:?}, R(L(R)) = {:?}", r.to_rows(), r_round.to_rows())
    });
    let l_round = lagrangian_of(&r_round, c)?;
    ck.record("duality/round-trip-stable", l_round.approx_eq(&l_of_r, tol), || {
        format!("L(R(L)) = {:?}, L = {:?}", l_round.to_rows(), l_of_r.to_rows())
    });

    let mut weak_ok = true;
    for x in c.primal().labels() {
        let rep = weak_duality_report_with_tol(r, c, x, tol)?;
        weak_ok &= rep.dual_value.approx_le(rep.primal_value, tol);
        weak_ok &= rep.gap.is_none_or(|g| g >= -tol);
    }
    ck.record("duality/weak-duality", weak_ok, || {
        "dual value above primal value".into()
    });

    // couples
    let probe = ProbeConfig::with_tol(tol);
    let (cl, cr) = make_couple(r, c)?;
    let a = audit(&cl, &cr, c, &probe)?;
    ck.record(
        "couple/make-couple-audits-true",
        a.all_true() && !a.consistency_alarm,
        || format!("audit of make_couple output: {a:?}"),
    );
    let mut consequence = true;
    for u in 0..cr.rows().len() {
        consequence &= is_c_convex(&cr.row(u), c, tol)?;
        consequence &= is_cprime_convex(&cl.row(u).neg(), c, tol)?;
    }
    ck.record("couple/rows-convex", consequence, || {
        "couple rows not generalized-convex".into()
    });
    let (cl2, cr2) = make_couple(&cr, c)?;
    ck.record(
        "couple/make-couple-idempotent",
        cl2.approx_eq(&cl, tol) && cr2.approx_eq(&cr, tol),
        || "make_couple(R') differs from (L, R')".into(),
    );

    let (mut pl, mut pr) = (cl.clone(), cr.clone());
    perturb_one(rng, &mut pl, &mut pr, grid);
    let pa = audit(&pl, &pr, c, &probe)?;
    ck.record("couple/items-ii-v-agree", !pa.consistency_alarm, || {
        format!(
            "items disagree on L = {:?}, R = {:?}: {pa:?}",
            pl.to_rows(),
            pr.to_rows()
        )
    });
    let definition_ok = if pa.item_iii {
        pa.item_i_inequality && pa.item_i_minimality_probe
    } else {
        !(pa.item_i_inequality && pa.item_i_minimality_probe)
    };
    ck.record("couple/definition-consistent", definition_ok, || {
        format!("perturbed audit {pa:?}")
    });
    obs.perturbation_still_couple = pa.is_couple();
    obs.perturbation_broken = !pa.item_ii && !pa.item_iii && !pa.item_iv && !pa.item_v;

    let ra = audit(l, r, c, &probe)?;
    ck.record("couple/random-pair-items-agree", !ra.consistency_alarm, || {
        format!("random pair audit {ra:?}")
    });

    Ok(obs)
}

/// Replaces one entry of `L` or `R` by a different grid value.
fn perturb_one(rng: &mut impl Rng, l: &mut Lagrangian, r: &mut Rockafellian, grid: &ValueGrid) {
    let new_value = |rng: &mut dyn RngCore, old: ExtReal| loop {
        let v = grid.sample(rng);
        if v != old {
            break v;
        }
    };
    let u = rng.gen_range(0..r.rows().len());
    if rng.gen_bool(0.5) {
        let x = rng.gen_range(0..r.cols().len());
        let v = new_value(rng, r.get(u, x));
        r.set(u, x, v);
    } else {
        let y = rng.gen_range(0..l.cols().len());
        let v = new_value(rng, l.get(u, y));
        l.set(u, y, v);
    }
}

/// Runs the full suite on `config.count` instances.
pub fn run(config: &FuzzConfig) -> Result<FuzzReport> {
    if config.count == 0 {
        return Err(Error::Problem("fuzz count must be at least 1".into()));
    }
    if config.max_set_size == 0 {
        return Err(Error::Problem("max set size must be at least 1".into()));
    }
    let kernel = Kernel::for_fault(config.fault);
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = FuzzReport {
        seed: config.seed,
        instances: config.count,
        checks: BTreeMap::new(),
        strict_inequality_instances: 0,
        perturbations_still_couples: 0,
        perturbations_broken: 0,
        first_failure: None,
    };
    for index in 0..config.count {
        let instance_seed = master.next_u64();
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
        let inst = Instance::generate(&mut rng, config.max_set_size, &config.grid);
        let mut ck = Checker {
            checks: &mut report.checks,
            failure: None,
        };
        let obs = check_instance(&inst, kernel, config.tol, &config.grid, &mut rng, &mut ck)?;
        let failure = ck.failure.take();
        report.strict_inequality_instances += usize::from(obs.strict_inequality);
        report.perturbations_still_couples += usize::from(obs.perturbation_still_couple);
        report.perturbations_broken += usize::from(obs.perturbation_broken);
        if let (None, Some((check, detail))) = (&report.first_failure, failure) {
            report.first_failure = Some(FuzzFailure {
                index,
                instance_seed,
                check,
                detail,
                reproduction: inst.to_problem_file(),
            });
        }
    }
    Ok(report)
}

/// Regenerates instance number `index` of a run with `config`.
pub fn instance_at(config: &FuzzConfig, index: usize) -> Instance {
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seed = master.next_u64();
    for _ in 0..index {
        seed = master.next_u64();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Instance::generate(&mut rng, config.max_set_size, &config.grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: ValueGrid = "-3..4,0.2".parse().unwrap();
        assert_eq!((g.min, g.max, g.p_neg_inf, g.p_pos_inf), (-3, 4, 0.2, 0.2));
        let d: ValueGrid = "-10..10".parse().unwrap();
        assert_eq!(d, ValueGrid::default());
        assert_eq!(d.to_string().parse::<ValueGrid>().unwrap(), d);
        for bad in ["", "1..0", "a..b", "0..1,0.9", "0;1"] {
            assert!(bad.parse::<ValueGrid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let cfg = FuzzConfig {
            count: 50,
            ..FuzzConfig::default()
        };
        let a = run(&cfg).unwrap();
        assert!(a.all_passed(), "{:?}", a.first_failure);
        let b = run(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn sign_flip_is_caught() {
        let cfg = FuzzConfig {
            count: 50,
            fault: Some(Fault::SignFlip),
            ..FuzzConfig::default()
        };
        let rep = run(&cfg).unwrap();
        assert!(!rep.all_passed());
        let f = rep.first_failure.unwrap();
        assert!(f.check.starts_with("conjugacy/"));
        let again = instance_at(&cfg, f.index).to_problem_file();
        assert_eq!(again, f.reproduction);
    }

    #[test]
    fn argument_validation() {
        let zero = FuzzConfig {
            count: 0,
            ..FuzzConfig::default()
        };
        assert!(run(&zero).is_err());
        let tiny = FuzzConfig {
            max_set_size: 0,
            ..FuzzConfig::default()
        };
        assert!(run(&tiny).is_err());
    }

    #[test]
    fn singleton_sets_only() {
        let cfg = FuzzConfig {
            count: 30,
            max_set_size: 1,
            ..FuzzConfig::default()
        };
        assert!(run(&cfg).unwrap().all_passed());
    }
}
