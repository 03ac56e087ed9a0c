use k3picard::certificate::{Status, Step};
use k3picard::family::LatticeFamilyParams;
use k3picard::verify::{build_family, verify_table, VerifyError};
use proptest::prelude::*;

#[test]
fn table_has_no_failures_and_is_deterministic() {
    let a = verify_table(10, 12);
    assert!(a.all_passed());
    assert_eq!(a.summary.failed, 0);
    let b = verify_table(10, 12);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn both_methods_agree_on_every_family() {
    for j in -1..=2 {
        for k in 1..=20 {
            for h in 1..=20 {
                let Some(p) = LatticeFamilyParams::admissible(j, k, h) else { continue };
                let c = build_family(p, false).unwrap().certificate;
                assert_eq!(c.status(), Status::Verified, "{p}");
                let steps = c.steps();
                assert!(steps.iter().any(|s| matches!(s, Step::EnumerationEmpty { .. })), "{p}");
                let replay = steps.iter().any(|s| match (p.rank(), s) {
                    (2, Step::DivisibilityRuledOut { .. }) => true,
                    (3, Step::QuadraticArgument { holds, .. }) => *holds,
                    _ => false,
                });
                assert!(replay, "{p}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Outside the admissible ranges the enumeration alone decides, and a
    /// failure is always an explicit orthogonal root.
    #[test]
    fn exploration_never_contradicts(j in -3i64..=3, k in 0i64..=9, h in 1i64..=8, rank3 in any::<bool>()) {
        let p = if rank3 { LatticeFamilyParams::rank3(j, k, h) } else { LatticeFamilyParams::rank2(j, k, h) };
        let Ok(lattice) = p.lattice() else { return Ok(()) };
        prop_assume!(lattice.is_hyperbolic());
        match build_family(p, true) {
            Ok(f) => prop_assert!(f.certificate.status() != Status::Failed),
            Err(VerifyError::NotPolarized { root, .. }) => prop_assert!(!root.is_empty()),
            Err(e) => prop_assert!(false, "{p}: {e}"),
        }
    }
}
