//! Replayable evidence trees.
//!
//! A certificate is an ordered list of steps; its status is derived from the
//! steps. Any failed check fails the certificate, and any external
//! assumption downgrades `Verified` to `VerifiedWithAssumptions`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::enumerate::{ClassQuery, EnumerationResult};
use crate::family::LatticeFamilyParams;
use crate::json_int::JsonInt;
use crate::lattice::{index_obstruction, determinant, DivisorClass, IntLattice, Obstruction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    Verified,
    VerifiedWithAssumptions,
    Failed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Verified => "Verified",
            Status::VerifiedWithAssumptions => "VerifiedWithAssumptions",
            Status::Failed => "Failed",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cmp {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
}

impl Cmp {
    pub fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    EnumerationEmpty {
        what: String,
        query: String,
        bound: crate::enumerate::CompletenessBound,
        nodes: u64,
    },
    EnumerationFound {
        what: String,
        query: String,
        bound: crate::enumerate::CompletenessBound,
        solutions: Vec<String>,
    },
    /// `divisor ∤ dividend` (or a related index obstruction).
    DivisibilityRuledOut {
        what: String,
        divisor: JsonInt,
        dividend: JsonInt,
        reason: String,
    },
    /// Integer solutions of `A α² + B α + C(β) = 0` excluded through the
    /// α-discriminant `c_β β² + c_0`.
    QuadraticArgument {
        what: String,
        beta_coefficient: JsonInt,
        constant: JsonInt,
        worst_case: JsonInt,
        constant_is_square: bool,
        reduction_checked: bool,
        holds: bool,
    },
    InequalityChecked {
        what: String,
        lhs: JsonInt,
        relation: Cmp,
        rhs: JsonInt,
        holds: bool,
    },
    ValueChecked {
        what: String,
        computed: JsonInt,
        expected: JsonInt,
        holds: bool,
    },
    Verdict {
        what: String,
        expected: String,
        actual: String,
        holds: bool,
    },
    /// `Σ coefficients[i] · t^i > 0` for every integer `t ≥ from`.
    SymbolicBound {
        what: String,
        parameter: String,
        from: JsonInt,
        coefficients: Vec<JsonInt>,
        holds: bool,
    },
    TheoremApplied {
        what: String,
        theorem: String,
    },
    ExternalAssumption {
        what: String,
        justification: String,
    },
    Note {
        what: String,
    },
    Failure {
        what: String,
        reason: String,
    },
    SubCertificate {
        certificate: Certificate,
    },
}

impl Step {
    pub fn status(&self) -> Status {
        let ok = |holds: bool| if holds { Status::Verified } else { Status::Failed };
        match self {
            Step::QuadraticArgument { holds, .. }
            | Step::InequalityChecked { holds, .. }
            | Step::ValueChecked { holds, .. }
            | Step::Verdict { holds, .. }
            | Step::SymbolicBound { holds, .. } => ok(*holds),
            Step::Failure { .. } => Status::Failed,
            Step::ExternalAssumption { .. } => Status::VerifiedWithAssumptions,
            Step::SubCertificate { certificate } => certificate.status(),
            _ => Status::Verified,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    claim_id: String,
    subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<LatticeFamilyParams>,
    status: Status,
    steps: Vec<Step>,
}

impl Certificate {
    pub fn new(claim_id: impl Into<String>, subject: impl Into<String>) -> Self {
        Certificate {
            claim_id: claim_id.into(),
            subject: subject.into(),
            params: None,
            status: Status::Verified,
            steps: Vec::new(),
        }
    }

    pub fn with_params(mut self, params: LatticeFamilyParams) -> Self {
        self.params = Some(params);
        self
    }

    pub fn claim_id(&self) -> &str {
        &self.claim_id
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn params(&self) -> Option<&LatticeFamilyParams> {
        self.params.as_ref()
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn push(&mut self, step: Step) -> Status {
        let s = step.status();
        self.status = self.status.max(s);
        self.steps.push(step);
        s
    }

    pub fn sub(&mut self, certificate: Certificate) -> Status {
        self.push(Step::SubCertificate { certificate })
    }

    /// All steps, depth first, including those of nested certificates.
    pub fn walk(&self) -> Vec<&Step> {
        let mut out = Vec::new();
        for s in &self.steps {
            out.push(s);
            if let Step::SubCertificate { certificate } = s {
                out.extend(certificate.walk());
            }
        }
        out
    }

    pub fn note(&mut self, what: impl Into<String>) {
        self.push(Step::Note { what: what.into() });
    }

    pub fn fail(&mut self, what: impl Into<String>, reason: impl Into<String>) {
        self.push(Step::Failure { what: what.into(), reason: reason.into() });
    }

    pub fn assume(&mut self, what: impl Into<String>, justification: impl Into<String>) {
        self.push(Step::ExternalAssumption { what: what.into(), justification: justification.into() });
    }

    pub fn theorem(&mut self, what: impl Into<String>, theorem: impl Into<String>) {
        self.push(Step::TheoremApplied { what: what.into(), theorem: theorem.into() });
    }

    pub fn inequality(&mut self, what: impl Into<String>, lhs: &BigInt, relation: Cmp, rhs: &BigInt) -> bool {
        let holds = relation.holds(lhs, rhs);
        self.push(Step::InequalityChecked {
            what: what.into(),
            lhs: lhs.into(),
            relation,
            rhs: rhs.into(),
            holds,
        });
        holds
    }

    pub fn value(&mut self, what: impl Into<String>, computed: &BigInt, expected: &BigInt) -> bool {
        let holds = computed == expected;
        self.push(Step::ValueChecked {
            what: what.into(),
            computed: computed.into(),
            expected: expected.into(),
            holds,
        });
        holds
    }

    pub fn verdict(&mut self, what: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) -> bool {
        let expected = expected.into();
        let actual = actual.into();
        let holds = expected == actual;
        self.push(Step::Verdict { what: what.into(), expected, actual, holds });
        holds
    }

    pub fn check(&mut self, what: impl Into<String>, holds: bool) -> bool {
        let (expected, actual) = ("true".to_string(), holds.to_string());
        self.push(Step::Verdict { what: what.into(), expected, actual, holds });
        holds
    }

    /// Records `divisor ∤ dividend`, failing the certificate if it divides.
    pub fn not_divisible(&mut self, what: impl Into<String>, divisor: &BigInt, dividend: &BigInt) -> bool {
        let what = what.into();
        use num_integer::Integer;
        use num_traits::Zero;
        if !divisor.is_zero() && !dividend.is_multiple_of(divisor) {
            self.push(Step::DivisibilityRuledOut {
                what,
                divisor: divisor.into(),
                dividend: dividend.into(),
                reason: "not divisible".into(),
            });
            true
        } else {
            self.fail(what, format!("{divisor} divides {dividend}"));
            false
        }
    }

    /// Index argument for a prescribed Gram matrix of a hypothetical full
    /// rank tuple. Returns whether the tuple was ruled out; a failure step
    /// is recorded otherwise.
    pub fn index_argument(&mut self, lattice: &IntLattice, what: impl Into<String>, prescribed: &[Vec<BigInt>]) -> bool {
        let what = what.into();
        if prescribed.len() != lattice.rank() {
            self.fail(what, "prescribed Gram matrix has the wrong size");
            return false;
        }
        let tuple_disc = determinant(prescribed);
        match index_obstruction(lattice.discriminant(), &tuple_disc) {
            Obstruction::RuledOut(reason) => {
                self.push(Step::DivisibilityRuledOut {
                    what,
                    divisor: lattice.discriminant().into(),
                    dividend: (&tuple_disc).into(),
                    reason: reason.to_string(),
                });
                true
            }
            Obstruction::NotRuledOut => {
                self.fail(
                    what,
                    format!("disc {} is compatible with tuple discriminant {tuple_disc}", lattice.discriminant()),
                );
                false
            }
        }
    }

    /// Records an enumeration that is expected to come back empty.
    pub fn expect_empty(&mut self, lattice: &IntLattice, what: impl Into<String>, q: &ClassQuery, r: &EnumerationResult) -> bool {
        let what = what.into();
        if r.is_empty() {
            self.push(Step::EnumerationEmpty {
                what,
                query: q.describe(lattice),
                bound: r.bound.clone(),
                nodes: r.stats.nodes,
            });
            true
        } else {
            let sols = r.solutions.iter().map(|c| lattice.format_class(c)).collect::<Vec<_>>().join(", ");
            self.push(Step::EnumerationFound {
                what: what.clone(),
                query: q.describe(lattice),
                bound: r.bound.clone(),
                solutions: r.solutions.iter().map(|c| lattice.format_class(c)).collect(),
            });
            self.fail(what, format!("unexpected solutions: {sols}"));
            false
        }
    }

    /// Records an enumeration result without judging it.
    pub fn enumeration(&mut self, lattice: &IntLattice, what: impl Into<String>, q: &ClassQuery, r: &EnumerationResult) {
        let what = what.into();
        if r.is_empty() {
            self.push(Step::EnumerationEmpty {
                what,
                query: q.describe(lattice),
                bound: r.bound.clone(),
                nodes: r.stats.nodes,
            });
        } else {
            self.push(Step::EnumerationFound {
                what,
                query: q.describe(lattice),
                bound: r.bound.clone(),
                solutions: r.solutions.iter().map(|c| lattice.format_class(c)).collect(),
            });
        }
    }

    /// `p(t) > 0` for all integers `t ≥ from`, checked by expanding `p`
    /// around `from`: non-negative shifted coefficients with a positive
    /// constant term suffice.
    pub fn symbolic_positive(&mut self, what: impl Into<String>, parameter: &str, from: i64, coefficients: &[i64]) -> bool {
        let holds = positive_from(coefficients, from);
        self.push(Step::SymbolicBound {
            what: what.into(),
            parameter: parameter.to_string(),
            from: from.into(),
            coefficients: coefficients.iter().map(|&c| JsonInt::from(c)).collect(),
            holds,
        });
        holds
    }

    pub fn has_assumptions(&self) -> bool {
        self.walk().iter().any(|s| matches!(s, Step::ExternalAssumption { .. }))
    }
}

/// Taylor shift `p(from + s)` and sign check of its coefficients.
pub fn positive_from(coefficients: &[i64], from: i64) -> bool {
    let mut c: Vec<BigInt> = coefficients.iter().map(|&v| BigInt::from(v)).collect();
    let a = BigInt::from(from);
    let n = c.len();
    // repeated synthetic division by (s - from)
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let v = &c[j + 1] * &a;
            c[j] += v;
        }
    }
    use num_traits::{Signed, Zero};
    !c.is_empty() && c[0].is_positive() && c.iter().all(|v| !v.is_negative() || v.is_zero())
}

/// Short text for a class in a lattice, used in step descriptions.
pub fn name(lattice: &IntLattice, c: &DivisorClass) -> String {
    lattice.format_class(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_propagates() {
        let mut c = Certificate::new("t", "s");
        assert_eq!(c.status(), Status::Verified);
        c.inequality("x", &BigInt::from(14), Cmp::Ge, &BigInt::from(9));
        assert_eq!(c.status(), Status::Verified);
        c.assume("y", "z");
        assert_eq!(c.status(), Status::VerifiedWithAssumptions);
        let mut outer = Certificate::new("o", "s");
        outer.sub(c.clone());
        assert_eq!(outer.status(), Status::VerifiedWithAssumptions);
        assert!(outer.has_assumptions());
        c.value("v", &BigInt::from(1), &BigInt::from(2));
        assert_eq!(c.status(), Status::Failed);
        outer.sub(c);
        assert_eq!(outer.status(), Status::Failed);
    }

    #[test]
    fn verified_never_contains_assumptions() {
        let mut c = Certificate::new("t", "s");
        c.note("n");
        c.theorem("a", "b");
        assert_eq!(c.status(), Status::Verified);
        assert!(!c.has_assumptions());
    }

    #[test]
    fn shifted_positivity() {
        // 4h - 3 > 0 for h ≥ 3
        assert!(positive_from(&[-3, 4], 3));
        // -h is not positive
        assert!(!positive_from(&[0, -1], 1));
        // s² + 2(j+4)s + j² + 3 style: k² - 21 > 0 for k ≥ 5
        assert!(positive_from(&[-21, 0, 1], 5));
        assert!(!positive_from(&[-21, 0, 1], 4));
        // constant
        assert!(positive_from(&[4], 0));
        assert!(!positive_from(&[0], 0));
    }

    #[test]
    fn divisibility_steps() {
        let mut c = Certificate::new("t", "s");
        assert!(c.not_divisible("5 ∤ 2", &BigInt::from(5), &BigInt::from(2)));
        assert_eq!(c.status(), Status::Verified);
        assert!(!c.not_divisible("2 | 4", &BigInt::from(2), &BigInt::from(4)));
        assert_eq!(c.status(), Status::Failed);
    }

    #[test]
    fn serializes_with_kinds() {
        let mut c = Certificate::new("Claim3.10", "demo");
        c.inequality("2(D + L)·L ≥ 9", &BigInt::from(14), Cmp::Ge, &BigInt::from(9));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["status"], "Verified");
        assert_eq!(v["steps"][0]["kind"], "inequality_checked");
        assert_eq!(v["steps"][0]["lhs"], 14);
        assert_eq!(v["steps"][0]["relation"], ">=");
    }
}
