//! Family construction with the orthogonal-root check, replay of the case
//! analysis behind each family, and the decomposition table.

mod claims;
mod table;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::certificate::{Certificate, Status, Step};
use crate::enumerate::{enumerate_classes, ClassQuery, EnumerationError};
use crate::family::{LatticeFamilyParams, Shape};
use crate::geometry::{GeometryError, PolarizedLattice};
use crate::lattice::{determinant, LatticeError, Obstruction};

pub use claims::{claim_shape, verify_claim, ClaimId};
pub use table::{table_rows, verify_table, Report, RowSpec, Summary, TableRow};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{0} is outside the admissible parameter ranges (use exploration mode to override)")]
    OutOfRange(LatticeFamilyParams),
    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),
    #[error("claim {claim} does not cover {params}")]
    ClaimParams { claim: String, params: LatticeFamilyParams },
    #[error("{params} is not polarized by D: root {root} is orthogonal to D")]
    NotPolarized { params: LatticeFamilyParams, root: String },
    #[error("orthogonal-root check for {0} did not verify")]
    ReplayFailed(LatticeFamilyParams),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A family lattice polarized by `D`, with the certificate of the
/// orthogonal-root check.
#[derive(Debug, Clone)]
pub struct BuiltFamily {
    pub params: LatticeFamilyParams,
    pub polarized: PolarizedLattice,
    pub certificate: Certificate,
}

/// Builds `Γ_{jkh}` polarized by `D`. Outside the admissible ranges this
/// requires `explore`.
pub fn build_family(params: LatticeFamilyParams, explore: bool) -> Result<BuiltFamily, VerifyError> {
    let (polarized, certificate) = check_family(params, explore)?;
    match polarized {
        Some(polarized) if certificate.status() != Status::Failed => Ok(BuiltFamily { params, polarized, certificate }),
        Some(_) => Err(VerifyError::ReplayFailed(params)),
        None => {
            let root = certificate
                .steps()
                .iter()
                .find_map(|s| match s {
                    Step::EnumerationFound { solutions, .. } => solutions.first().cloned(),
                    _ => None,
                })
                .unwrap_or_default();
            Err(VerifyError::NotPolarized { params, root })
        }
    }
}

/// Runs the root enumeration and the arithmetic replay side by side and
/// records whether they agree. Returns the polarized lattice when no
/// orthogonal root exists.
pub(crate) fn check_family(
    params: LatticeFamilyParams,
    explore: bool,
) -> Result<(Option<PolarizedLattice>, Certificate), VerifyError> {
    if !explore && !params.in_range() {
        return Err(VerifyError::OutOfRange(params));
    }
    let lattice = params.lattice()?;
    let mut cert = Certificate::new(ClaimId::OrthogonalRoots.to_string(), format!("{params}: no root orthogonal to D"))
        .with_params(params);
    let r = params.rank();
    cert.note(format!("disc = {}", lattice.discriminant()));
    let sig = lattice.signature();
    if !cert.verdict("signature", format!("(1, {})", r - 1), format!("({}, {})", sig.0, sig.1)) {
        return Ok((None, cert));
    }

    let d = lattice.class_by_label("D")?;
    let q = ClassQuery::new(-2).eq(&d, 0);
    let (found, (replay_steps, ruled_out)) =
        rayon::join(|| enumerate_classes(&lattice, &q), || orthogonal_root_replay(params, &lattice));
    let found = found?;
    cert.enumeration(&lattice, "roots d with d·D = 0", &q, &found);
    for s in replay_steps {
        cert.push(s);
    }
    match (found.is_empty(), ruled_out) {
        (true, true) => {
            cert.check("enumeration and arithmetic replay agree", true);
        }
        (false, true) => cert.fail("enumeration and arithmetic replay agree", "replay excludes a root the enumeration found"),
        (true, false) if params.in_range() => {
            cert.fail("arithmetic replay", "inconclusive for parameters inside the admissible ranges")
        }
        (true, false) => cert.note("arithmetic replay inconclusive; enumeration alone decides"),
        (false, false) => {
            let roots: Vec<String> = found.solutions.iter().map(|c| lattice.format_class(c)).collect();
            cert.fail("no root orthogonal to D", format!("found {}", roots.join(", ")));
        }
    }
    if !found.is_empty() {
        return Ok((None, cert));
    }
    let polarized = PolarizedLattice::new(lattice, d)?;
    Ok((Some(polarized), cert))
}

/// Arithmetic exclusion of a root `d` with `d·D = 0`. Steps never fail; the
/// flag reports whether the argument was conclusive.
fn orthogonal_root_replay(params: LatticeFamilyParams, lattice: &crate::lattice::IntLattice) -> (Vec<Step>, bool) {
    let LatticeFamilyParams { j, k, h, .. } = params;
    match params.shape {
        Shape::Rank2 => {
            // Gram matrix of (D, d)
            let prescribed = gram(&[&[2 * h, 0], &[0, -2]]);
            let dividend = determinant(&prescribed);
            let what = "disc of (D, d) with d² = -2, d·D = 0".to_string();
            let step = match index_of(lattice, &prescribed) {
                Obstruction::RuledOut(reason) => (
                    Step::DivisibilityRuledOut {
                        what,
                        divisor: lattice.discriminant().into(),
                        dividend: (&dividend).into(),
                        reason: reason.to_string(),
                    },
                    true,
                ),
                Obstruction::NotRuledOut => (
                    Step::Note { what: format!("{what}: {} is compatible with {dividend}", lattice.discriminant()) },
                    false,
                ),
            };
            (vec![step.0], step.1)
        }
        Shape::Rank3 => match quadratic_argument(j, k, h) {
            (step, true) => (vec![step], true),
            (Step::QuadraticArgument { what, worst_case, constant_is_square, .. }, false) => {
                let what = format!(
                    "{what}: α-discriminant bound {} with constant square {constant_is_square} is inconclusive",
                    worst_case.0
                );
                (vec![Step::Note { what }], false)
            }
            (step, false) => (vec![step], false),
        },
    }
}

fn index_of(lattice: &crate::lattice::IntLattice, prescribed: &[Vec<BigInt>]) -> Obstruction {
    crate::lattice::index_obstruction(lattice.discriminant(), &determinant(prescribed))
}

/// For `d = αD + βL + γR` with `d·D = 0` one has `γ = −hα − kβ/2` and
/// `−d² = 2h(h+1)α² + 2h(k+j)αβ + C β²`, `C = jk + k²/2 + 2 − 4j`. The
/// quarter discriminant in `α` of `−d² = 2` is `c_β β² + 4h(h+1)` with
/// `c_β = h²(k+j)² − h(h+1)(2jk + k² + 4 − 8j)`.
fn quadratic_argument(j: i64, k: i64, h: i64) -> (Step, bool) {
    let (bj, bk, bh) = (BigInt::from(j), BigInt::from(k), BigInt::from(h));
    let c_beta: BigInt = &bh * &bh * (&bk + &bj) * (&bk + &bj)
        - &bh * (&bh + 1) * (BigInt::from(2) * &bj * &bk + &bk * &bk + 4 - BigInt::from(8) * &bj);
    let c0: BigInt = BigInt::from(4) * &bh * (&bh + 1);
    let worst: BigInt = &c_beta + &c0;
    let root = c0.sqrt();
    let square = !c0.is_negative() && &root * &root == c0;
    let reduction = check_reduction(j, k, h);
    let holds = reduction && worst.is_negative() && !square;
    let step = Step::QuadraticArgument {
        what: "d = αD + βL + γR with d·D = 0, d² = -2".into(),
        beta_coefficient: (&c_beta).into(),
        constant: (&c0).into(),
        worst_case: (&worst).into(),
        constant_is_square: square,
        reduction_checked: reduction,
        holds,
    };
    (step, holds)
}

/// Checks the reduced quadratic form against the Gram matrix on a grid,
/// using `2d` so that `γ` stays integral.
fn check_reduction(j: i64, k: i64, h: i64) -> bool {
    let g = LatticeFamilyParams::rank3(j, k, h).gram_i64();
    let c4 = 4 * j * k + 2 * k * k + 8 - 16 * j;
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            let v = [2 * a, 2 * b, -2 * h * a - k * b];
            let dot0: i64 = (0..3).map(|i| g[0][i] * v[i]).sum();
            let sq: i64 = (0..3).map(|r| (0..3).map(|c| v[r] * g[r][c] * v[c]).sum::<i64>()).sum();
            let q4 = 8 * h * (h + 1) * a * a + 8 * h * (k + j) * a * b + c4 * b * b;
            if dot0 != 0 || sq != -q4 {
                return false;
            }
        }
    }
    true
}

pub(crate) fn gram(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}
