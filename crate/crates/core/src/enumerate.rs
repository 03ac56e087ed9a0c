//! Complete enumeration of lattice classes with a prescribed square and
//! pairing constraints.
//!
//! For a hyperbolic lattice and an anchor `K` with `K² > 0`, the form
//!
//! ```text
//! Q(x) = 2 (x·K)² − K² · x²
//! ```
//!
//! is positive definite: writing `x = tK + y` with `y ⊥ K` gives
//! `Q(x) = K²·(t²K² − y²)` and `K^⊥` is negative definite. Fixing `x² = a`
//! and bounding `|x·K| ≤ c` confines every solution to the ellipsoid
//! `Q(x) ≤ 2c² − K²a`, which is searched depth-first with exact rational
//! bounds from an LDLᵀ factorization of `Q`.

use std::cmp::Ordering;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::json_int::{to_json_vec, JsonInt};
use crate::lattice::{DivisorClass, IntLattice, LatticeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("solution set is not provably finite: the query needs `x·K = c` or a bounded range of `x·K` for some K with K² > 0")]
    FinitenessNotCertified,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("lattice is not hyperbolic: non-positive pivot {pivot} in the majorant form")]
    NotHyperbolic { pivot: usize },
    #[error("anchor is not in the positive cone: {0}")]
    AnchorNotPositive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    Eq(BigInt),
    Le(BigInt),
    Ge(BigInt),
    Range(BigInt, BigInt),
}

impl Relation {
    pub fn holds(&self, v: &BigInt) -> bool {
        match self {
            Relation::Eq(c) => v == c,
            Relation::Le(c) => v <= c,
            Relation::Ge(c) => v >= c,
            Relation::Range(lo, hi) => lo <= v && v <= hi,
        }
    }

    fn bounds(&self) -> (Option<BigInt>, Option<BigInt>) {
        match self {
            Relation::Eq(c) => (Some(c.clone()), Some(c.clone())),
            Relation::Le(c) => (None, Some(c.clone())),
            Relation::Ge(c) => (Some(c.clone()), None),
            Relation::Range(lo, hi) => (Some(lo.clone()), Some(hi.clone())),
        }
    }

    fn finite_range(&self) -> Option<(BigInt, BigInt)> {
        match self.bounds() {
            (Some(lo), Some(hi)) => Some((lo, hi)),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Eq(c) => write!(f, "= {c}"),
            Relation::Le(c) => write!(f, "≤ {c}"),
            Relation::Ge(c) => write!(f, "≥ {c}"),
            Relation::Range(lo, hi) => write!(f, "∈ [{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingConstraint {
    pub anchor: DivisorClass,
    pub relation: Relation,
}

/// `{x : x² = self_intersection, x·Wᵢ ⋈ cᵢ}`, optionally restricted to
/// primitive classes and with some classes excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassQuery {
    pub self_intersection: BigInt,
    pub pairings: Vec<PairingConstraint>,
    pub primitive_only: bool,
    pub exclude: Vec<DivisorClass>,
}

impl ClassQuery {
    pub fn new(self_intersection: impl Into<BigInt>) -> Self {
        ClassQuery {
            self_intersection: self_intersection.into(),
            pairings: Vec::new(),
            primitive_only: false,
            exclude: Vec::new(),
        }
    }

    pub fn with(mut self, anchor: &DivisorClass, relation: Relation) -> Self {
        self.pairings.push(PairingConstraint { anchor: anchor.clone(), relation });
        self
    }

    pub fn eq(self, anchor: &DivisorClass, value: impl Into<BigInt>) -> Self {
        self.with(anchor, Relation::Eq(value.into()))
    }

    pub fn le(self, anchor: &DivisorClass, value: impl Into<BigInt>) -> Self {
        self.with(anchor, Relation::Le(value.into()))
    }

    pub fn ge(self, anchor: &DivisorClass, value: impl Into<BigInt>) -> Self {
        self.with(anchor, Relation::Ge(value.into()))
    }

    pub fn range(self, anchor: &DivisorClass, lo: impl Into<BigInt>, hi: impl Into<BigInt>) -> Self {
        self.with(anchor, Relation::Range(lo.into(), hi.into()))
    }

    pub fn primitive(mut self) -> Self {
        self.primitive_only = true;
        self
    }

    pub fn excluding(mut self, c: &DivisorClass) -> Self {
        self.exclude.push(c.clone());
        self
    }

    fn check_dims(&self, lattice: &IntLattice) -> Result<(), LatticeError> {
        for c in &self.pairings {
            lattice.check_dim(&c.anchor)?;
        }
        for e in &self.exclude {
            lattice.check_dim(e)?;
        }
        Ok(())
    }

    /// Exact membership test by Gram arithmetic.
    pub fn matches(&self, lattice: &IntLattice, x: &DivisorClass) -> Result<bool, LatticeError> {
        if lattice.square(x)? != self.self_intersection {
            return Ok(false);
        }
        for c in &self.pairings {
            if !c.relation.holds(&lattice.pair(x, &c.anchor)?) {
                return Ok(false);
            }
        }
        if self.primitive_only && !x.is_primitive() {
            return Ok(false);
        }
        Ok(!self.exclude.contains(x))
    }

    pub fn describe(&self, lattice: &IntLattice) -> String {
        let mut parts = vec![format!("x² = {}", self.self_intersection)];
        for c in &self.pairings {
            let name = lattice.format_class(&c.anchor);
            let name = if name.contains(' ') { format!("({name})") } else { name };
            parts.push(format!("x·{name} {}", c.relation));
        }
        if self.primitive_only {
            parts.push("x primitive".into());
        }
        for e in &self.exclude {
            parts.push(format!("x ≠ {}", lattice.format_class(e)));
        }
        parts.join(", ")
    }
}

/// Region shown to contain every solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompletenessBound {
    /// `2(x·K)² − K²·x² ≤ radius`, implying `|xᵢ| ≤ coord_bounds[i]`.
    Ellipsoid {
        anchor: Vec<JsonInt>,
        anchor_square: JsonInt,
        pairing_range: [JsonInt; 2],
        radius: JsonInt,
        coord_bounds: Vec<JsonInt>,
    },
    /// Brute-force cube `|xᵢ| ≤ half_width`.
    Box { half_width: JsonInt },
    /// Effective roots `C` with `C·Δ < 0` satisfy
    /// `(C·Δ)² · D₀² < numerator`; one ellipsoid per admissible value.
    RootSlices {
        numerator: JsonInt,
        ample_square: JsonInt,
        max_violation: JsonInt,
        slices: Vec<CompletenessBound>,
    },
    /// No pairing value is admissible.
    EmptyRange,
    Union { parts: Vec<CompletenessBound> },
}

impl CompletenessBound {
    /// Per-coordinate box containing every solution, where one is known.
    pub fn coordinate_box(&self) -> Option<Vec<BigInt>> {
        match self {
            CompletenessBound::Ellipsoid { coord_bounds, .. } => Some(coord_bounds.iter().map(|v| v.0.clone()).collect()),
            CompletenessBound::Box { .. } | CompletenessBound::EmptyRange => None,
            CompletenessBound::RootSlices { slices, .. } => merge_boxes(slices),
            CompletenessBound::Union { parts } => merge_boxes(parts),
        }
    }

    /// Largest coordinate bound, or `None` if the bound is not a finite box.
    pub fn max_coordinate(&self) -> Option<BigInt> {
        match self {
            CompletenessBound::Box { half_width } => Some(half_width.0.clone()),
            CompletenessBound::EmptyRange => Some(BigInt::zero()),
            _ => self.coordinate_box().map(|b| b.into_iter().max().unwrap_or_default()),
        }
    }
}

fn merge_boxes(parts: &[CompletenessBound]) -> Option<Vec<BigInt>> {
    let mut acc: Option<Vec<BigInt>> = None;
    for p in parts {
        if matches!(p, CompletenessBound::EmptyRange) {
            continue;
        }
        let b = p.coordinate_box()?;
        acc = Some(match acc {
            None => b,
            Some(a) => a.into_iter().zip(b).map(|(x, y)| x.max(y)).collect(),
        });
    }
    Some(acc.unwrap_or_default())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct EnumerationResult {
    /// Sorted lexicographically by coordinates, without duplicates.
    pub solutions: Vec<DivisorClass>,
    pub bound: CompletenessBound,
    pub stats: EnumerationStats,
}

impl EnumerationResult {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// `floor(sqrt(t))` for a non-negative rational.
fn floor_sqrt(t: &BigRational) -> BigInt {
    if !t.is_positive() {
        return BigInt::zero();
    }
    (t.numer() * t.denom()).sqrt() / t.denom()
}

/// Rational LDLᵀ of a symmetric matrix; fails at the first non-positive pivot.
fn ldl_positive(m: &[Vec<BigInt>]) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>), usize> {
    let n = m.len();
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut d = vec![BigRational::zero(); n];
    for j in 0..n {
        let mut dj = rat(&m[j][j]);
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return Err(j);
        }
        l[j][j] = BigRational::one();
        for i in (j + 1)..n {
            let mut v = rat(&m[i][j]);
            for k in 0..j {
                v -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = v / &dj;
        }
        d[j] = dj;
    }
    Ok((l, d))
}

/// Diagonal of the inverse of a positive definite integer matrix.
fn inverse_diagonal(m: &[Vec<BigInt>]) -> Vec<BigRational> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(rat).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("positive definite matrix is invertible");
        a.swap(c, p);
        let piv = a[c][c].clone();
        for v in a[c].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let v = &f * &a[c][k];
                    a[r][k] -= v;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n + i].clone()).collect()
}

struct LinearBound {
    form: Vec<BigInt>,
    lo: Option<BigInt>,
    hi: Option<BigInt>,
}

struct Search {
    l: Vec<Vec<BigRational>>,
    d: Vec<BigRational>,
    linear: Vec<LinearBound>,
    x: Vec<BigInt>,
    nodes: u64,
    leaves: Vec<Vec<BigInt>>,
}

impl Search {
    fn descend(&mut self, level: usize, budget: &BigRational) {
        let n = self.x.len();
        let mut center = BigRational::zero();
        for j in (level + 1)..n {
            center += &self.l[j][level] * rat(&self.x[j]);
        }
        let t = budget / &self.d[level];
        let r = floor_sqrt(&t);
        let neg_center = -&center;
        let mut lo = neg_center.floor().to_integer() - &r - 1;
        let mut hi = neg_center.ceil().to_integer() + &r + 1;
        if level == 0 {
            if !self.clamp_last(&mut lo, &mut hi) {
                return;
            }
        }
        let mut v = lo;
        while v <= hi {
            let y = rat(&v) + &center;
            let term = &self.d[level] * &y * &y;
            if &term <= budget {
                self.nodes += 1;
                self.x[level] = v.clone();
                if level == 0 {
                    self.leaves.push(self.x.clone());
                } else {
                    let rest = budget - &term;
                    self.descend(level - 1, &rest);
                }
            }
            v += 1;
        }
    }

    /// Narrows the range of the last free coordinate using the linear
    /// constraints; returns false when it becomes empty.
    fn clamp_last(&self, lo: &mut BigInt, hi: &mut BigInt) -> bool {
        for b in &self.linear {
            let w0 = &b.form[0];
            if w0.is_zero() {
                continue;
            }
            let rest: BigInt = b.form.iter().zip(&self.x).skip(1).map(|(w, x)| w * x).sum();
            // lo_b ≤ w0·v + rest ≤ hi_b
            let (vlo, vhi) = if w0.is_positive() {
                (
                    b.lo.as_ref().map(|c| (c - &rest).div_ceil(w0)),
                    b.hi.as_ref().map(|c| (c - &rest).div_floor(w0)),
                )
            } else {
                (
                    b.hi.as_ref().map(|c| (c - &rest).div_ceil(w0)),
                    b.lo.as_ref().map(|c| (c - &rest).div_floor(w0)),
                )
            };
            if let Some(v) = vlo {
                if v > *lo {
                    *lo = v;
                }
            }
            if let Some(v) = vhi {
                if v < *hi {
                    *hi = v;
                }
            }
        }
        lo <= hi
    }
}

/// Enumerates every class satisfying `q`.
///
/// The lattice must be hyperbolic and `q` must fix or bound the pairing with
/// some class of positive square; otherwise `FinitenessNotCertified` is
/// returned.
pub fn enumerate_classes(lattice: &IntLattice, q: &ClassQuery) -> Result<EnumerationResult, EnumerationError> {
    let start = Instant::now();
    q.check_dims(lattice)?;
    let a = &q.self_intersection;

    // pick the anchor with the smallest normalized radius
    let mut best: Option<(usize, BigInt, BigInt, BigInt, BigRational)> = None;
    for (idx, c) in q.pairings.iter().enumerate() {
        let Some((lo, hi)) = c.relation.finite_range() else { continue };
        let ksq = lattice.square(&c.anchor)?;
        if !ksq.is_positive() {
            continue;
        }
        let cmax = lo.abs().max(hi.abs());
        let radius = BigRational::new(BigInt::from(2) * &cmax * &cmax - &ksq * a, ksq.clone());
        let better = match &best {
            None => true,
            Some((_, _, _, _, r)) => radius.cmp(r) == Ordering::Less,
        };
        if better {
            best = Some((idx, ksq, lo, hi, radius));
        }
    }
    let Some((idx, ksq, lo, hi, _)) = best else {
        return Err(EnumerationError::FinitenessNotCertified);
    };
    let anchor = &q.pairings[idx].anchor;
    let n = lattice.rank();

    let finish = |solutions: Vec<DivisorClass>, bound: CompletenessBound, nodes: u64| EnumerationResult {
        solutions,
        bound,
        stats: EnumerationStats { nodes, elapsed: start.elapsed() },
    };

    if lo > hi {
        return Ok(finish(Vec::new(), CompletenessBound::EmptyRange, 0));
    }

    let w = lattice.dual_row(anchor)?;
    let two = BigInt::from(2);
    let majorant: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| &two * &w[i] * &w[j] - &ksq * &lattice.gram()[i][j]).collect())
        .collect();
    let (l, d) = ldl_positive(&majorant).map_err(|pivot| EnumerationError::NotHyperbolic { pivot })?;

    let cmax = lo.abs().max(hi.abs());
    let radius = &two * &cmax * &cmax - &ksq * a;
    let coord_bounds: Vec<BigInt> = if radius.is_negative() {
        vec![BigInt::zero(); n]
    } else {
        inverse_diagonal(&majorant).iter().map(|v| floor_sqrt(&(v * rat(&radius)))).collect()
    };
    let bound = CompletenessBound::Ellipsoid {
        anchor: to_json_vec(anchor.coords()),
        anchor_square: JsonInt::from(&ksq),
        pairing_range: [JsonInt::from(&lo), JsonInt::from(&hi)],
        radius: JsonInt::from(&radius),
        coord_bounds: to_json_vec(&coord_bounds),
    };
    if radius.is_negative() {
        return Ok(finish(Vec::new(), bound, 0));
    }

    let mut linear = Vec::new();
    for c in &q.pairings {
        let (blo, bhi) = c.relation.bounds();
        linear.push(LinearBound { form: lattice.dual_row(&c.anchor)?, lo: blo, hi: bhi });
    }
    let mut search = Search {
        l,
        d,
        linear,
        x: vec![BigInt::zero(); n],
        nodes: 0,
        leaves: Vec::new(),
    };
    search.descend(n - 1, &rat(&radius));

    let mut solutions = Vec::new();
    for leaf in search.leaves {
        let x = DivisorClass::new(leaf);
        if q.matches(lattice, &x)? {
            solutions.push(x);
        }
    }
    solutions.sort();
    solutions.dedup();
    Ok(finish(solutions, bound, search.nodes))
}

/// Brute-force scan of the cube `|xᵢ| ≤ half_width`. Independent of the
/// ellipsoid search; used to cross-check it.
pub fn oracle_enumerate(lattice: &IntLattice, q: &ClassQuery, half_width: u32) -> Result<EnumerationResult, EnumerationError> {
    let start = Instant::now();
    q.check_dims(lattice)?;
    let n = lattice.rank();
    let b = i64::from(half_width);
    let mut x = vec![-b; n];
    let mut solutions = Vec::new();
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        let c = DivisorClass::from_i64s(&x);
        if q.matches(lattice, &c)? {
            solutions.push(c);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                solutions.sort();
                return Ok(EnumerationResult {
                    solutions,
                    bound: CompletenessBound::Box { half_width: JsonInt::from(b) },
                    stats: EnumerationStats { nodes, elapsed: start.elapsed() },
                });
            }
            if x[i] < b {
                x[i] += 1;
                break;
            }
            x[i] = -b;
            i += 1;
        }
    }
}

/// Largest `m ≥ 0` with `m² · ample_square < numerator`.
fn max_violation(numerator: &BigInt, ample_square: &BigInt) -> BigInt {
    if !numerator.is_positive() {
        return BigInt::zero();
    }
    // m² < numerator / ample_square
    let mut m: BigInt = (numerator / ample_square).sqrt() + 1;
    while &m * &m * ample_square >= *numerator && m.is_positive() {
        m -= 1;
    }
    m
}

/// All effective roots `C` (`C² = −2`, `C·D₀ > 0`) with `C·Δ < 0`.
///
/// For such a root the Gram matrix of `(D₀, Δ, C)` has non-negative
/// determinant, which forces `(C·Δ)²·D₀² < 2((Δ·D₀)² − Δ²·D₀²)`. Each
/// admissible value of `C·Δ` is then a finite query anchored at `Δ`.
pub fn roots_violating_nef(
    lattice: &IntLattice,
    ample: &DivisorClass,
    delta: &DivisorClass,
) -> Result<EnumerationResult, EnumerationError> {
    let start = Instant::now();
    let dsq = lattice.square(delta)?;
    let asq = lattice.square(ample)?;
    let da = lattice.pair(delta, ample)?;
    if !dsq.is_positive() {
        return Err(EnumerationError::AnchorNotPositive(format!("Δ² = {dsq} ≤ 0")));
    }
    if !da.is_positive() {
        return Err(EnumerationError::AnchorNotPositive(format!("Δ·D₀ = {da} ≤ 0")));
    }
    if !asq.is_positive() {
        return Err(EnumerationError::AnchorNotPositive(format!("D₀² = {asq} ≤ 0")));
    }
    let numerator = BigInt::from(2) * (&da * &da - &dsq * &asq);
    let m_max = max_violation(&numerator, &asq);

    let mut solutions = Vec::new();
    let mut slices = Vec::new();
    let mut nodes = 0;
    let mut m = BigInt::one();
    while m <= m_max {
        let q = ClassQuery::new(-2).eq(delta, -&m).ge(ample, 1);
        let r = enumerate_classes(lattice, &q)?;
        nodes += r.stats.nodes;
        solutions.extend(r.solutions);
        slices.push(r.bound);
        m += 1;
    }
    solutions.sort();
    Ok(EnumerationResult {
        solutions,
        bound: CompletenessBound::RootSlices {
            numerator: JsonInt::from(&numerator),
            ample_square: JsonInt::from(&asq),
            max_violation: JsonInt::from(&m_max),
            slices,
        },
        stats: EnumerationStats { nodes, elapsed: start.elapsed() },
    })
}

/// The `|C·Δ|` bound used by [`roots_violating_nef`], exposed for checking.
pub fn nef_violation_bound(lattice: &IntLattice, ample: &DivisorClass, delta: &DivisorClass) -> Result<BigInt, LatticeError> {
    let dsq = lattice.square(delta)?;
    let asq = lattice.square(ample)?;
    let da = lattice.pair(delta, ample)?;
    Ok(max_violation(&(BigInt::from(2) * (&da * &da - &dsq * &asq)), &asq))
}
