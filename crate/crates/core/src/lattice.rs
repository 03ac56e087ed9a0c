//! Even nondegenerate integral lattices given by a Gram matrix, and divisor
//! classes expressed in their basis.
//!
//! All arithmetic is exact: determinants use fraction-free elimination and
//! the signature falls back to rational congruence diagonalization whenever
//! a leading principal minor vanishes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice must have positive rank")]
    Empty,
    #[error("gram matrix is not square (row {row} has {len} entries, expected {rank})")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("diagonal entry {0} is odd; the lattice must be even")]
    OddDiagonal(usize),
    #[error("gram matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("expected {expected} basis labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("class tuple must be nonempty")]
    EmptyTuple,
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
}

/// Integer coordinate vector on the basis of a lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    coords: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        DivisorClass { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        DivisorClass {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass {
            coords: vec![BigInt::zero(); rank],
        }
    }

    /// The `index`-th basis vector.
    pub fn basis(rank: usize, index: usize) -> Self {
        let mut c = Self::zero(rank);
        c.coords[index] = BigInt::one();
        c
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Greatest common divisor of the coordinates (0 for the zero class).
    pub fn content(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Exact division of every coordinate, if possible.
    pub fn checked_div(&self, d: &BigInt) -> Option<DivisorClass> {
        if d.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(DivisorClass { coords: out })
    }

    pub fn scaled(&self, factor: &BigInt) -> DivisorClass {
        DivisorClass {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn zip_with(a: &DivisorClass, b: &DivisorClass, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> DivisorClass {
    assert_eq!(a.len(), b.len(), "divisor classes of different rank");
    DivisorClass {
        coords: a.coords.iter().zip(&b.coords).map(|(x, y)| op(x, y)).collect(),
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scaled(&BigInt::from(self))
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.scaled(&BigInt::from(self))
    }
}

/// Outcome of the index argument for a prescribed Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Obstruction {
    RuledOut(ObstructionReason),
    NotRuledOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionReason {
    /// disc(L) does not divide the prescribed determinant.
    NotDivisible,
    /// The quotient is negative, so it cannot be a squared index.
    SignMismatch,
    /// The quotient is positive but not a perfect square.
    IndexNotSquare,
}

impl Obstruction {
    pub fn is_ruled_out(self) -> bool {
        matches!(self, Obstruction::RuledOut(_))
    }
}

impl fmt::Display for ObstructionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ObstructionReason::NotDivisible => "lattice discriminant does not divide the tuple discriminant",
            ObstructionReason::SignMismatch => "quotient of discriminants is negative",
            ObstructionReason::IndexNotSquare => "quotient of discriminants is not a perfect square",
        };
        f.write_str(s)
    }
}

/// An even, nondegenerate integral lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    labels: Vec<String>,
    gram: Vec<Vec<BigInt>>,
    disc: BigInt,
}

impl IntLattice {
    pub fn new(labels: Vec<String>, gram: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        if rank == 0 {
            return Err(LatticeError::Empty);
        }
        for (row, r) in gram.iter().enumerate() {
            if r.len() != rank {
                return Err(LatticeError::NotSquare { row, len: r.len(), rank });
            }
        }
        if labels.len() != rank {
            return Err(LatticeError::LabelCount { expected: rank, got: labels.len() });
        }
        for i in 0..rank {
            for j in (i + 1)..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
            if gram[i][i].is_odd() {
                return Err(LatticeError::OddDiagonal(i));
            }
        }
        let disc = determinant(&gram);
        if disc.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(IntLattice { labels, gram, disc })
    }

    /// Convenience constructor from small entries with default labels
    /// `e0, e1, ...`.
    pub fn from_i64s(gram: &[&[i64]]) -> Result<Self, LatticeError> {
        let labels = (0..gram.len()).map(|i| format!("e{i}")).collect();
        Self::with_labels_i64(labels, gram)
    }

    pub fn with_labels_i64(labels: Vec<String>, gram: &[&[i64]]) -> Result<Self, LatticeError> {
        let g = gram
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::new(labels, g)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_class(&self, index: usize) -> DivisorClass {
        DivisorClass::basis(self.rank(), index)
    }

    pub fn class_by_label(&self, label: &str) -> Result<DivisorClass, LatticeError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.basis_class(i))
            .ok_or_else(|| LatticeError::UnknownLabel(label.to_string()))
    }

    pub fn check_dim(&self, c: &DivisorClass) -> Result<(), LatticeError> {
        if c.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: c.len() });
        }
        Ok(())
    }

    /// `gram · c`, the linear form `x ↦ x·c` in coordinates.
    pub fn dual_row(&self, c: &DivisorClass) -> Result<Vec<BigInt>, LatticeError> {
        self.check_dim(c)?;
        Ok(self
            .gram
            .iter()
            .map(|row| row.iter().zip(c.coords()).map(|(g, x)| g * x).sum())
            .collect())
    }

    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<BigInt, LatticeError> {
        self.check_dim(a)?;
        let gb = self.dual_row(b)?;
        Ok(a.coords().iter().zip(&gb).map(|(x, y)| x * y).sum())
    }

    pub fn square(&self, a: &DivisorClass) -> Result<BigInt, LatticeError> {
        self.pair(a, a)
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// Leading principal minors `m_1, ..., m_n`.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        (1..=self.rank())
            .map(|k| {
                let sub: Vec<Vec<BigInt>> = self.gram[..k].iter().map(|r| r[..k].to_vec()).collect();
                determinant(&sub)
            })
            .collect()
    }

    /// `(positive, negative)` inertia of the Gram matrix.
    pub fn signature(&self) -> (usize, usize) {
        let (p, q, z) = inertia(&self.gram);
        debug_assert_eq!(z, 0, "nondegenerate lattice has no null directions");
        (p, q)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.signature() == (1, self.rank() - 1)
    }

    /// Gram matrix of a tuple of classes.
    pub fn gram_of(&self, vs: &[DivisorClass]) -> Result<Vec<Vec<BigInt>>, LatticeError> {
        if vs.is_empty() {
            return Err(LatticeError::EmptyTuple);
        }
        let mut out = vec![vec![BigInt::zero(); vs.len()]; vs.len()];
        for i in 0..vs.len() {
            for j in i..vs.len() {
                let p = self.pair(&vs[i], &vs[j])?;
                out[j][i] = p.clone();
                out[i][j] = p;
            }
        }
        Ok(out)
    }

    pub fn sublattice_discriminant(&self, vs: &[DivisorClass]) -> Result<BigInt, LatticeError> {
        Ok(determinant(&self.gram_of(vs)?))
    }

    /// Decides whether a prescribed Gram matrix can be ruled out as the Gram
    /// matrix of a full-rank tuple of classes: such a tuple spans a sublattice
    /// of index `m` and its determinant equals `m² · disc`.
    ///
    /// Only the contrapositive is asserted; `NotRuledOut` is inconclusive.
    pub fn divisibility_obstruction(&self, prescribed: &[Vec<BigInt>]) -> Result<Obstruction, LatticeError> {
        let n = prescribed.len();
        if n != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: n });
        }
        for (row, r) in prescribed.iter().enumerate() {
            if r.len() != n {
                return Err(LatticeError::NotSquare { row, len: r.len(), rank: n });
            }
        }
        let tuple_disc = determinant(prescribed);
        Ok(index_obstruction(&self.disc, &tuple_disc))
    }

    /// Human-readable form such as `2D - L + R`.
    pub fn format_class(&self, c: &DivisorClass) -> String {
        if c.len() != self.rank() {
            return c.to_string();
        }
        let mut out = String::new();
        for (coef, label) in c.coords().iter().zip(&self.labels) {
            if coef.is_zero() {
                continue;
            }
            let neg = coef.is_negative();
            let mag = coef.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(label);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Index test on a pair of determinants, shared by the lattice method and
/// the certificate layer.
pub fn index_obstruction(lattice_disc: &BigInt, tuple_disc: &BigInt) -> Obstruction {
    if tuple_disc.is_zero() {
        // dependent tuples carry no index information
        return Obstruction::NotRuledOut;
    }
    if !tuple_disc.is_multiple_of(lattice_disc) {
        return Obstruction::RuledOut(ObstructionReason::NotDivisible);
    }
    let q = tuple_disc / lattice_disc;
    if q.is_negative() {
        return Obstruction::RuledOut(ObstructionReason::SignMismatch);
    }
    let r = q.sqrt();
    if &r * &r != q {
        return Obstruction::RuledOut(ObstructionReason::IndexNotSquare);
    }
    Obstruction::NotRuledOut
}

/// Exact determinant by Bareiss fraction-free elimination with row pivoting.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `(positive, negative, zero)` inertia of a symmetric integer matrix.
///
/// Uses the sign pattern of the leading principal minors when none of them
/// vanishes, and exact congruence diagonalization over the rationals
/// otherwise.
pub fn inertia(m: &[Vec<BigInt>]) -> (usize, usize, usize) {
    let n = m.len();
    let minors: Vec<BigInt> = (1..=n)
        .map(|k| {
            let sub: Vec<Vec<BigInt>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect();
    if minors.iter().all(|d| !d.is_zero()) {
        // each sign change in 1, m_1, ..., m_n is one negative eigenvalue
        let mut negatives = 0;
        let mut prev_positive = true;
        for d in &minors {
            let pos = d.is_positive();
            if pos != prev_positive {
                negatives += 1;
            }
            prev_positive = pos;
        }
        return (n - negatives, negatives, 0);
    }
    let pivots = congruence_diagonal(m);
    let p = pivots.iter().filter(|v| v.is_positive()).count();
    let q = pivots.iter().filter(|v| v.is_negative()).count();
    (p, q, n - p - q)
}

/// Diagonal entries of a matrix congruent to `m` over Q.
fn congruence_diagonal(m: &[Vec<BigInt>]) -> Vec<BigRational> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let mut diag = Vec::with_capacity(n);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // all remaining diagonal entries vanish; e_i + e_j has
                // square 2·a_ij, nonzero whenever a_ij is
                let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| i != j && !a[i][j].is_zero());
                match pair {
                    Some((i, j)) => {
                        for c in 0..n {
                            let v = a[j][c].clone();
                            a[i][c] += v;
                        }
                        for r in 0..n {
                            let v = a[r][j].clone();
                            a[r][i] += v;
                        }
                        i
                    }
                    None => {
                        diag.extend(std::iter::repeat(BigRational::zero()).take(active.len()));
                        break;
                    }
                }
            }
        };
        let piv = a[p][p].clone();
        for &i in &active {
            if i == p {
                continue;
            }
            let f = &a[i][p] / &piv;
            for &c in &active {
                let v = &f * &a[p][c];
                a[i][c] -= v;
            }
            for &r in &active {
                let v = &f * &a[r][p];
                a[r][i] -= v;
            }
        }
        diag.push(piv);
        active.retain(|&i| i != p);
    }
    diag
}
