//! Fenchel-Moreau conjugacies induced by a coupling, and the generalized
//! convexity tests built on them.
//!
//! All suprema are taken by direct enumeration over the (nonempty) finite
//! sets, with the Moreau lower addition inside:
//!
//! ```text
//! f^c(y)  = sup_x [ c(x,y) (+low) (-f(x)) ]
//! g^c'(x) = sup_y [ c(x,y) (+low) (-g(y)) ]
//! ```

use crate::error::Result;
use crate::extreal::{sup_over, ExtReal};
use crate::spaces::{check_same, Coupling, DualFunction, Function, PrimalFunction, Role, Table};

/// Conjugate of `f` through any table whose rows share `f`'s domain.
///
/// With a [`Coupling`] this is `f^c`; with a
/// [`ReverseCoupling`](crate::spaces::ReverseCoupling) it is `g^c'`.
pub fn conjugate<A: Role, B: Role>(f: &Function<A>, c: &Table<A, B>) -> Result<Function<B>> {
    check_same(f.domain(), c.rows(), "function domain vs coupling rows")?;
    let mut out = Vec::with_capacity(c.cols().len());
    for j in 0..c.cols().len() {
        let v = sup_over((0..c.rows().len()).map(|i| c.get(i, j).low_add(-f.get(i))))?;
        out.push(v);
    }
    Function::new(c.cols().clone(), out)
}

/// `g^c'(x) = sup_y [ c(x,y) (+low) (-g(y)) ]`, read straight off `c`.
pub fn reverse_conjugate(g: &DualFunction, c: &Coupling) -> Result<PrimalFunction> {
    check_same(g.domain(), c.dual(), "dual function domain vs coupling dual set")?;
    let mut out = Vec::with_capacity(c.primal().len());
    for i in 0..c.primal().len() {
        let v = sup_over(
            c.row_values(i)
                .iter()
                .zip(g.values())
                .map(|(&cxy, &gy)| cxy.low_add(-gy)),
        )?;
        out.push(v);
    }
    PrimalFunction::new(c.primal().clone(), out)
}

/// `f^{cc'}`, the largest c-convex minorant of `f`.
pub fn biconjugate(f: &PrimalFunction, c: &Coupling) -> Result<PrimalFunction> {
    reverse_conjugate(&conjugate(f, c)?, c)
}

/// `g^{c'c}`.
pub fn reverse_biconjugate(g: &DualFunction, c: &Coupling) -> Result<DualFunction> {
    conjugate(&reverse_conjugate(g, c)?, c)
}

/// `f` equals its biconjugate (infinities exact, finite values within `tol`).
pub fn is_c_convex(f: &PrimalFunction, c: &Coupling, tol: f64) -> Result<bool> {
    Ok(biconjugate(f, c)?.approx_eq(f, tol))
}

/// `g` equals its reverse biconjugate.
pub fn is_cprime_convex(g: &DualFunction, c: &Coupling, tol: f64) -> Result<bool> {
    Ok(reverse_biconjugate(g, c)?.approx_eq(g, tol))
}

/// Generalized Fenchel-Young inequality `f(x) (+upp) f^c(y) >= c(x,y)` for all
/// pairs. Holds on every input; exposed as a self-test of the arithmetic.
pub fn young_check(f: &PrimalFunction, c: &Coupling) -> Result<bool> {
    let fc = conjugate(f, c)?;
    Ok((0..c.primal().len()).all(|i| (0..c.dual().len()).all(|j| f.get(i).upp_add(fc.get(j)) >= c.get(i, j))))
}

/// Pointwise infimum of a nonempty family of functions on one domain.
pub fn pointwise_inf<R: Role>(family: &[Function<R>]) -> Result<Function<R>> {
    let first = family.first().ok_or(crate::Error::EmptySequence)?;
    for f in family {
        check_same(f.domain(), first.domain(), "family domains")?;
    }
    Ok(Function::from_fn(first.domain().clone(), |i| {
        family.iter().map(|f| f.get(i)).min().unwrap_or(ExtReal::PosInf)
    }))
}

/// Pointwise supremum of a nonempty family of functions on one domain.
pub fn pointwise_sup<R: Role>(family: &[Function<R>]) -> Result<Function<R>> {
    let first = family.first().ok_or(crate::Error::EmptySequence)?;
    for f in family {
        check_same(f.domain(), first.domain(), "family domains")?;
    }
    Ok(Function::from_fn(first.domain().clone(), |i| {
        family.iter().map(|f| f.get(i)).max().unwrap_or(ExtReal::NegInf)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::ExtReal::{NegInf, PosInf};
    use crate::spaces::{reverse_coupling, FiniteSet};
    use crate::Error;

    fn e(v: f64) -> ExtReal {
        ExtReal::finite(v)
    }

    fn grid(points: &[f64]) -> Vec<Vec<f64>> {
        points.iter().map(|&p| vec![p]).collect()
    }

    fn e1_coupling() -> Coupling {
        Coupling::new(
            FiniteSet::indexed("x", 2).unwrap(),
            FiniteSet::indexed("y", 2).unwrap(),
            vec![vec![e(0.0), e(0.0)], vec![e(1.0), e(2.0)]],
        )
        .unwrap()
    }

    // Independent brute force: f^c(y) = max_x (x*y - f(x)) on a finite real grid.
    fn grid_conjugate(xs: &[f64], ys: &[f64], f: &[f64]) -> Vec<f64> {
        ys.iter()
            .map(|y| {
                xs.iter()
                    .zip(f)
                    .map(|(x, fx)| x * y - fx)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    #[test]
    fn conjugate_of_plus_infinity_is_minus_infinity() {
        let c = e1_coupling();
        let f = PrimalFunction::constant(c.primal().clone(), PosInf);
        assert!(conjugate(&f, &c).unwrap().values().iter().all(|&v| v == NegInf));
        let g = DualFunction::constant(c.dual().clone(), PosInf);
        assert!(reverse_conjugate(&g, &c).unwrap().values().iter().all(|&v| v == NegInf));
    }

    #[test]
    fn bilinear_grid_conjugates() {
        let pts = [-1.0, 0.0, 1.0];
        let c = Coupling::bilinear(&grid(&pts), &grid(&pts)).unwrap();

        let zero = PrimalFunction::constant(c.primal().clone(), e(0.0));
        let expected = grid_conjugate(&pts, &pts, &[0.0, 0.0, 0.0]);
        assert_eq!(expected, [1.0, 0.0, 1.0]);
        let got: Vec<f64> = conjugate(&zero, &c)
            .unwrap()
            .values()
            .iter()
            .map(|v| v.to_f64())
            .collect();
        assert_eq!(got, expected);

        let sq = PrimalFunction::from_fn(c.primal().clone(), |i| e(pts[i] * pts[i]));
        let expected = grid_conjugate(&pts, &pts, &[1.0, 0.0, 1.0]);
        assert_eq!(expected, [0.0, 0.0, 0.0]);
        assert!(conjugate(&sq, &c).unwrap().values().iter().all(|&v| v == e(0.0)));
    }

    #[test]
    fn e1_row_conjugates() {
        let c = e1_coupling();
        let f = PrimalFunction::new(c.primal().clone(), vec![e(5.0), e(3.0)]).unwrap();
        let fc = conjugate(&f, &c).unwrap();
        assert_eq!(fc.values(), [e(-2.0), e(-1.0)]);
        let g = DualFunction::new(c.dual().clone(), vec![e(-2.0), e(-1.0)]).unwrap();
        assert_eq!(reverse_conjugate(&g, &c).unwrap().values(), [e(2.0), e(3.0)]);
        assert_eq!(biconjugate(&f, &c).unwrap().values(), [e(2.0), e(3.0)]);
        assert!(young_check(&f, &c).unwrap());
    }

    #[test]
    fn reverse_conjugate_matches_conjugate_through_reversed_coupling() {
        let c = e1_coupling();
        let g = DualFunction::new(c.dual().clone(), vec![e(-2.0), NegInf]).unwrap();
        let direct = reverse_conjugate(&g, &c).unwrap();
        let via: PrimalFunction = conjugate(&g, &reverse_coupling(&c)).unwrap();
        assert_eq!(direct, via);
    }

    #[test]
    fn spike_is_convexified() {
        let c = Coupling::bilinear(&grid(&[0.0, 1.0, 2.0]), &grid(&[-1.0, 0.0, 1.0])).unwrap();
        let spike = PrimalFunction::new(c.primal().clone(), vec![e(0.0), e(10.0), e(0.0)]).unwrap();
        let fcc = biconjugate(&spike, &c).unwrap();
        let fc = grid_conjugate(&[0.0, 1.0, 2.0], &[-1.0, 0.0, 1.0], &[0.0, 10.0, 0.0]);
        let oracle = grid_conjugate(&[-1.0, 0.0, 1.0], &[0.0, 1.0, 2.0], &fc);
        assert_eq!(oracle, [0.0, 0.0, 0.0]);
        assert_eq!(fcc.values(), [e(0.0), e(0.0), e(0.0)]);
        assert!(!is_c_convex(&spike, &c, 1e-9).unwrap());
    }

    #[test]
    fn minus_infinity_is_fixed() {
        let c = e1_coupling();
        let f = PrimalFunction::constant(c.primal().clone(), NegInf);
        assert!(biconjugate(&f, &c).unwrap().values().iter().all(|&v| v == NegInf));
        assert!(is_c_convex(&f, &c, 1e-9).unwrap());
        let g = DualFunction::constant(c.dual().clone(), NegInf);
        assert!(reverse_biconjugate(&g, &c)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == NegInf));
        assert!(is_cprime_convex(&g, &c, 1e-9).unwrap());
        assert!(young_check(&f, &c).unwrap());
        assert!(young_check(&PrimalFunction::constant(c.primal().clone(), PosInf), &c).unwrap());
    }

    #[test]
    fn reverse_biconjugate_examples() {
        let c = e1_coupling();
        let zero = DualFunction::constant(c.dual().clone(), e(0.0));
        assert_eq!(reverse_biconjugate(&zero, &c).unwrap(), zero);

        let f = PrimalFunction::new(c.primal().clone(), vec![e(5.0), e(3.0)]).unwrap();
        let g = conjugate(&f, &c).unwrap();
        assert_eq!(reverse_biconjugate(&g, &c).unwrap(), g);
        assert!(is_cprime_convex(&g, &c, 1e-9).unwrap());
    }

    #[test]
    fn plus_infinity_is_cprime_convex_for_finite_coupling() {
        // g^c' = -inf everywhere, and (-inf)^c = +inf again.
        let c = e1_coupling();
        let g = DualFunction::constant(c.dual().clone(), PosInf);
        assert_eq!(reverse_biconjugate(&g, &c).unwrap(), g);
        assert!(is_cprime_convex(&g, &c, 1e-9).unwrap());
    }

    #[test]
    fn reverse_conjugates_are_c_convex() {
        let c = e1_coupling();
        let g = DualFunction::new(c.dual().clone(), vec![e(3.0), NegInf]).unwrap();
        let f = reverse_conjugate(&g, &c).unwrap();
        assert!(is_c_convex(&f, &c, 1e-9).unwrap());
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let c = e1_coupling();
        let f = PrimalFunction::constant(FiniteSet::new(["a", "b"]).unwrap(), e(0.0));
        assert!(matches!(conjugate(&f, &c), Err(Error::DomainMismatch { .. })));
        let g = DualFunction::constant(FiniteSet::indexed("y", 3).unwrap(), e(0.0));
        assert!(matches!(reverse_conjugate(&g, &c), Err(Error::DomainMismatch { .. })));
    }
}
