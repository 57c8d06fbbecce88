//! Finite index sets, univariate functions over them, and bivariate tables
//! (couplings, Rockafellians, Lagrangians).
//!
//! Which set a function or table lives on is tracked at the type level with
//! the zero-sized role markers [`Decision`], [`Primal`] and [`Dual`], so a
//! primal function cannot be fed where a dual one is expected. Labels are
//! still compared at run time: two sets are compatible only when their label
//! sequences are identical.

use std::collections::HashMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extreal::ExtReal;

/// Marker for a set role.
pub trait Role: 'static {
    const NAME: &'static str;
}

/// The decision set `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {}
/// The primal (perturbation) set `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primal {}
/// The dual (sensitivity) set `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dual {}

impl Role for Decision {
    const NAME: &'static str = "U";
}
impl Role for Primal {
    const NAME: &'static str = "X";
}
impl Role for Dual {
    const NAME: &'static str = "Y";
}

#[derive(Debug)]
struct SetInner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// Nonempty ordered set of distinct string labels. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteSet(Arc<SetInner>);

impl FiniteSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(FiniteSet(Arc::new(SetInner { labels, index })))
    }

    /// `prefix0, prefix1, ...` with `n >= 1` labels.
    pub fn indexed(prefix: &str, n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    /// Always false; sets are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    pub(crate) fn require(&self, label: &str, role: &str) -> Result<usize> {
        self.position(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
            set: role.to_string(),
        })
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for FiniteSet {}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels()).finish()
    }
}

pub(crate) fn check_same(a: &FiniteSet, b: &FiniteSet, context: &str) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::mismatch(format!(
            "{context}: {:?} vs {:?}",
            a.labels(),
            b.labels()
        )))
    }
}

/// A total map from a finite set to the extended reals.
pub struct Function<R: Role> {
    domain: FiniteSet,
    values: Vec<ExtReal>,
    _role: PhantomData<R>,
}

/// Function `X -> [-inf, +inf]` (also the perturbation function).
pub type PrimalFunction = Function<Primal>;
/// Function `Y -> [-inf, +inf]` (also the dual function).
pub type DualFunction = Function<Dual>;

impl<R: Role> Function<R> {
    pub fn new(domain: FiniteSet, values: Vec<ExtReal>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::Shape(format!(
                "function on {} needs {} values, got {}",
                R::NAME,
                domain.len(),
                values.len()
            )));
        }
        Ok(Self::from_parts(domain, values))
    }

    pub(crate) fn from_parts(domain: FiniteSet, values: Vec<ExtReal>) -> Self {
        debug_assert_eq!(domain.len(), values.len());
        Function {
            domain,
            values,
            _role: PhantomData,
        }
    }

    pub fn from_fn(domain: FiniteSet, f: impl FnMut(usize) -> ExtReal) -> Self {
        let values = (0..domain.len()).map(f).collect();
        Self::from_parts(domain, values)
    }

    pub fn constant(domain: FiniteSet, value: ExtReal) -> Self {
        let values = vec![value; domain.len()];
        Self::from_parts(domain, values)
    }

    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn get(&self, i: usize) -> ExtReal {
        self.values[i]
    }

    pub fn value(&self, label: &str) -> Result<ExtReal> {
        Ok(self.values[self.domain.require(label, R::NAME)?])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ExtReal)> + '_ {
        self.domain
            .labels()
            .iter()
            .map(String::as_str)
            .zip(self.values.iter().copied())
    }

    /// Pointwise negation.
    pub fn neg(&self) -> Self {
        Self::from_parts(self.domain.clone(), self.values.iter().map(|&v| -v).collect())
    }

    /// Same domain, and every value matches under [`ExtReal::approx_eq`].
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.domain == other.domain && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(*b, tol))
    }

    /// Same domain and `self <= other` everywhere (finite slack `tol`).
    pub fn le(&self, other: &Self, tol: f64) -> bool {
        self.domain == other.domain && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_le(*b, tol))
    }

    /// Index of the first entry where the two functions differ beyond `tol`.
    pub fn first_mismatch(&self, other: &Self, tol: f64) -> Option<usize> {
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| !a.approx_eq(*b, tol))
    }
}

impl<R: Role> Clone for Function<R> {
    fn clone(&self) -> Self {
        Self::from_parts(self.domain.clone(), self.values.clone())
    }
}

impl<R: Role> PartialEq for Function<R> {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.values == other.values
    }
}

impl<R: Role> fmt::Debug for Function<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

/// A total table `rows x cols -> [-inf, +inf]`, stored row-major.
pub struct Table<R: Role, C: Role> {
    rows: FiniteSet,
    cols: FiniteSet,
    values: Vec<ExtReal>,
    _roles: PhantomData<(R, C)>,
}

/// The coupling `c : X x Y -> [-inf, +inf]`.
pub type Coupling = Table<Primal, Dual>;
/// The reverse coupling `c'(y, x) = c(x, y)`.
pub type ReverseCoupling = Table<Dual, Primal>;
/// A Rockafellian `R : U x X -> [-inf, +inf]`.
pub type Rockafellian = Table<Decision, Primal>;
/// A Lagrangian `L : U x Y -> [-inf, +inf]`.
pub type Lagrangian = Table<Decision, Dual>;

impl<R: Role, C: Role> Table<R, C> {
    /// Builds a table from row vectors; every row must have `cols.len()` entries.
    pub fn new(rows: FiniteSet, cols: FiniteSet, table: Vec<Vec<ExtReal>>) -> Result<Self> {
        if table.len() != rows.len() {
            return Err(Error::Shape(format!(
                "table over {}x{} needs {} rows, got {}",
                R::NAME,
                C::NAME,
                rows.len(),
                table.len()
            )));
        }
        let mut values = Vec::with_capacity(rows.len() * cols.len());
        for (i, row) in table.into_iter().enumerate() {
            if row.len() != cols.len() {
                return Err(Error::Shape(format!(
                    "row {:?} of table over {}x{} needs {} entries, got {}",
                    rows.label(i),
                    R::NAME,
                    C::NAME,
                    cols.len(),
                    row.len()
                )));
            }
            values.extend(row);
        }
        Ok(Self::from_parts(rows, cols, values))
    }

    fn from_parts(rows: FiniteSet, cols: FiniteSet, values: Vec<ExtReal>) -> Self {
        debug_assert_eq!(values.len(), rows.len() * cols.len());
        Table {
            rows,
            cols,
            values,
            _roles: PhantomData,
        }
    }

    pub fn from_fn(rows: FiniteSet, cols: FiniteSet, mut f: impl FnMut(usize, usize) -> ExtReal) -> Self {
        let (m, n) = (rows.len(), cols.len());
        let mut values = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        Self::from_parts(rows, cols, values)
    }

    pub fn constant(rows: FiniteSet, cols: FiniteSet, value: ExtReal) -> Self {
        Self::from_fn(rows, cols, |_, _| value)
    }

    /// Stacks row functions that all share one domain.
    pub fn from_row_functions(rows: FiniteSet, row_fns: Vec<Function<C>>) -> Result<Self> {
        if row_fns.len() != rows.len() {
            return Err(Error::Shape(format!(
                "{} row functions for {} rows",
                row_fns.len(),
                rows.len()
            )));
        }
        let cols = row_fns[0].domain().clone();
        let mut values = Vec::with_capacity(rows.len() * cols.len());
        for f in &row_fns {
            check_same(f.domain(), &cols, "row function domains")?;
            values.extend_from_slice(f.values());
        }
        Ok(Self::from_parts(rows, cols, values))
    }

    pub fn rows(&self) -> &FiniteSet {
        &self.rows
    }

    pub fn cols(&self) -> &FiniteSet {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> ExtReal {
        self.values[i * self.cols.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ExtReal) {
        let n = self.cols.len();
        self.values[i * n + j] = value;
    }

    pub fn value(&self, row: &str, col: &str) -> Result<ExtReal> {
        let i = self.rows.require(row, R::NAME)?;
        let j = self.cols.require(col, C::NAME)?;
        Ok(self.get(i, j))
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn row_values(&self, i: usize) -> &[ExtReal] {
        let n = self.cols.len();
        &self.values[i * n..(i + 1) * n]
    }

    /// The partial function obtained by freezing row `i`.
    pub fn row(&self, i: usize) -> Function<C> {
        Function::from_parts(self.cols.clone(), self.row_values(i).to_vec())
    }

    /// The partial function obtained by freezing the row labelled `label`.
    pub fn partial(&self, label: &str) -> Result<Function<C>> {
        Ok(self.row(self.rows.require(label, R::NAME)?))
    }

    pub fn to_rows(&self) -> Vec<Vec<ExtReal>> {
        (0..self.rows.len()).map(|i| self.row_values(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Table<C, R> {
        Table::from_fn(self.cols.clone(), self.rows.clone(), |j, i| self.get(i, j))
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(
            self.rows.clone(),
            self.cols.clone(),
            self.values.iter().map(|&v| -v).collect(),
        )
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(*b, tol))
    }

    /// Same sets and `self <= other` everywhere (finite slack `tol`).
    pub fn le(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_le(*b, tol))
    }

    /// `(row, col)` of the first entry differing beyond `tol`, in row-major order.
    pub fn first_mismatch(&self, other: &Self, tol: f64) -> Option<(usize, usize)> {
        let n = self.cols.len();
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| !a.approx_eq(*b, tol))
            .map(|k| (k / n, k % n))
    }
}

impl<R: Role, C: Role> Clone for Table<R, C> {
    fn clone(&self) -> Self {
        Self::from_parts(self.rows.clone(), self.cols.clone(), self.values.clone())
    }
}

impl<R: Role, C: Role> PartialEq for Table<R, C> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.values == other.values
    }
}

impl<R: Role, C: Role> fmt::Debug for Table<R, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Table")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("values", &self.to_rows())
            .finish()
    }
}

impl Coupling {
    /// Bilinear pairing `c(x, y) = <x, y>` on embedded points, with labels
    /// generated from the coordinates (`"-1"` in one dimension, `"(1,2)"` otherwise).
    pub fn bilinear(primal_points: &[Vec<f64>], dual_points: &[Vec<f64>]) -> Result<Self> {
        let primal = FiniteSet::new(primal_points.iter().map(|p| coordinate_label(p)))?;
        let dual = FiniteSet::new(dual_points.iter().map(|p| coordinate_label(p)))?;
        Self::bilinear_labeled(primal, dual, primal_points, dual_points)
    }

    /// Bilinear pairing on explicitly labelled points.
    pub fn bilinear_labeled(
        primal: FiniteSet,
        dual: FiniteSet,
        primal_points: &[Vec<f64>],
        dual_points: &[Vec<f64>],
    ) -> Result<Self> {
        if primal_points.len() != primal.len() || dual_points.len() != dual.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} primal / {} dual points for sets of size {} / {}",
                primal_points.len(),
                dual_points.len(),
                primal.len(),
                dual.len()
            )));
        }
        let dim = primal_points[0].len();
        for p in primal_points.iter().chain(dual_points) {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "point {p:?} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::DimensionMismatch(format!(
                    "point {p:?} has a non-finite coordinate"
                )));
            }
        }
        Ok(Table::from_fn(primal, dual, |i, j| {
            let dot: f64 = primal_points[i].iter().zip(&dual_points[j]).map(|(a, b)| a * b).sum();
            ExtReal::finite(dot)
        }))
    }

    pub fn primal(&self) -> &FiniteSet {
        self.rows()
    }

    pub fn dual(&self) -> &FiniteSet {
        self.cols()
    }
}

fn coordinate_label(p: &[f64]) -> String {
    if p.len() == 1 {
        format!("{}", p[0])
    } else {
        let parts: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// `c'(y, x) = c(x, y)`.
pub fn reverse_coupling(c: &Coupling) -> ReverseCoupling {
    c.transpose()
}

/// `x -> R(u, x)`.
pub fn partial_rockafellian(r: &Rockafellian, u: &str) -> Result<PrimalFunction> {
    r.partial(u)
}

/// `y -> L(u, y)`.
pub fn partial_lagrangian(l: &Lagrangian, u: &str) -> Result<DualFunction> {
    l.partial(u)
}
