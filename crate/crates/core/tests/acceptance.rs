mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use k3picard::certificate::{Certificate, Status, Step};
use k3picard::enumerate::{enumerate_classes, nef_violation_bound, oracle_enumerate, ClassQuery};
use k3picard::family::LatticeFamilyParams;
use k3picard::geometry::{PolarizedLattice, Verdict};
use k3picard::lattice::DivisorClass;
use k3picard::verify::{build_family, table_rows, verify_claim, verify_table, ClaimId};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn table_values() -> Outcome {
    let start = Instant::now();
    let report = verify_table(10, 12);
    let elapsed = start.elapsed();
    for r in &report.rows {
        if r.disc != r.disc_formula || r.genus != r.genus_formula {
            return Err(format!("row {} ({}, {}, {}): disc {} g {}", r.row, r.j, r.k, r.h, r.disc.0, r.genus.0));
        }
    }
    if elapsed.as_secs_f64() >= 10.0 {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} rows, disc and g exact, {:.2} s", report.rows.len(), elapsed.as_secs_f64()))
}

fn in_range_families() -> Vec<LatticeFamilyParams> {
    let mut out = Vec::new();
    for j in -1..=2 {
        for k in 1..=40 {
            for h in 1..=40 {
                if let Some(p) = LatticeFamilyParams::admissible(j, k, h) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn orthogonal_roots() -> Outcome {
    let families = in_range_families();
    for p in &families {
        let f = build_family(*p, false).map_err(|e| format!("{p}: {e}"))?;
        let steps = f.certificate.steps();
        let empty = steps.iter().any(|s| matches!(s, Step::EnumerationEmpty { .. }));
        let ruled_out = steps.iter().any(|s| {
            matches!(s, Step::DivisibilityRuledOut { .. } | Step::QuadraticArgument { holds: true, .. })
        });
        if !empty || !ruled_out || f.certificate.status() != Status::Verified {
            return Err(format!("{p}: enumeration empty {empty}, replay ruled out {ruled_out}"));
        }
    }
    Ok(format!("{} families: no orthogonal root, every replay rules it out", families.len()))
}

fn inequality_values(c: &Certificate) -> BTreeSet<i64> {
    c.walk()
        .iter()
        .filter_map(|s| match s {
            Step::InequalityChecked { lhs, .. } => Some(i64::try_from(&lhs.0).unwrap()),
            _ => None,
        })
        .collect()
}

fn claim_values() -> Outcome {
    let mut checked = 0;
    for spec in table_rows() {
        for p in spec.instances(10, 12) {
            let c = verify_claim(&spec.claim.to_string(), p, false).map_err(|e| format!("{p}: {e}"))?;
            if c.status() == Status::Failed {
                return Err(format!("{} failed at {p}", spec.claim));
            }
            let got = inequality_values(&c);
            let (j, k, h) = (p.j, p.k, p.h);
            let (allowed, required): (Vec<i64>, Vec<i64>) = match spec.claim {
                ClaimId::Claim6 => (vec![14], if h == 3 { vec![14] } else { vec![] }),
                ClaimId::Claim7 => (vec![4, 12], vec![4]),
                ClaimId::Claim8 | ClaimId::Claim9 => (vec![4], vec![4]),
                ClaimId::Claim10 => (vec![14], vec![14]),
                ClaimId::Claim11 => (vec![12], vec![12]),
                ClaimId::Claim12 => {
                    let mut req = Vec::new();
                    if spec.row == 1 {
                        req.push(2 * k + 2 * j);
                    } else {
                        req.push(k + 4 * j);
                    }
                    (vec![2 * k + 2 * j, k + 4 * j], req)
                }
                ClaimId::OrthogonalRoots => unreachable!(),
            };
            if !got.iter().all(|v| allowed.contains(v)) || !required.iter().all(|v| got.contains(v)) {
                return Err(format!("{} at {p}: inequality values {got:?}, expected within {allowed:?}", spec.claim));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} claim instances, none failed, inequality values exact"))
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut compared, mut skipped) = (0, 0);
    while compared < 1000 {
        let rank = if compared % 2 == 0 { 2 } else { 3 };
        let width = if rank == 2 { 30 } else { 10 };
        let lattice = common::hyperbolic(&mut rng, rank);
        let Some(q) = common::anchored_query(&mut rng, &lattice) else { continue };
        let fast = enumerate_classes(&lattice, &q).map_err(|e| e.to_string())?;
        match fast.bound.max_coordinate() {
            Some(m) if m <= BigInt::from(width) => {}
            _ => {
                skipped += 1;
                continue;
            }
        }
        let slow = oracle_enumerate(&lattice, &q, width).map_err(|e| e.to_string())?;
        if fast.solutions != slow.solutions {
            return Err(format!("{:?} with {}", lattice.gram(), q.describe(&lattice)));
        }
        compared += 1;
    }
    Ok(format!("{compared} random lattices agree with the box scan ({skipped} bounds exceeded the box)"))
}

fn nef_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbead);
    let mut roots = 0;
    let mut n = 0;
    while n < 200 {
        let rank = if n % 2 == 0 { 2 } else { 3 };
        let width = if rank == 2 { 30 } else { 10 };
        let lattice = common::hyperbolic_with_root(&mut rng, rank);
        let Some((p, delta)) = common::nef_pair(&mut rng, &lattice) else { continue };
        n += 1;
        let bound = nef_violation_bound(&lattice, &p, &delta).map_err(|e| e.to_string())?;
        let q = ClassQuery::new(-2).ge(&p, 1).le(&delta, -1);
        for c in oracle_enumerate(&lattice, &q, width).map_err(|e| e.to_string())?.solutions {
            roots += 1;
            let v = lattice.pair(&c, &delta).unwrap();
            if v.abs() > bound {
                return Err(format!("{:?}: root {c:?} has C·Δ = {v}, bound {bound}", lattice.gram()));
            }
        }
    }
    Ok(format!("200 random (P, Δ), {roots} violating roots, all within the bound"))
}

fn verdict(p: LatticeFamilyParams, coords: &[i64]) -> Result<(Verdict, Vec<DivisorClass>), String> {
    let lattice = p.lattice().map_err(|e| e.to_string())?;
    let d = lattice.class_by_label("D").map_err(|e| e.to_string())?;
    let pl = PolarizedLattice::new(lattice, d).map_err(|e| e.to_string())?;
    let prof = pl.classify_linear_system(&DivisorClass::from_i64s(coords), None).map_err(|e| format!("{p}: {e}"))?;
    Ok((prof.verdict, prof.contracted))
}

fn classifier_goldens() -> Outcome {
    let expect = |p: LatticeFamilyParams, coords: &[i64], want: Verdict| -> Result<(), String> {
        let (got, _) = verdict(p, coords)?;
        if got == want {
            Ok(())
        } else {
            Err(format!("{coords:?} in {p}: {got}, expected {want}"))
        }
    };
    expect(LatticeFamilyParams::rank2(-1, 1, 3), &[1, -1], Verdict::DoubleCoverP2)?;
    for h in 4..=10 {
        expect(LatticeFamilyParams::rank2(-1, 1, h), &[1, -1], Verdict::VeryAmple)?;
    }
    for h in 1..=10 {
        let p = LatticeFamilyParams::rank2(-1, 2, h);
        let (got, contracted) = verdict(p, &[1, 1])?;
        if got != Verdict::BirationalContracting || contracted != vec![DivisorClass::from_i64s(&[0, 1])] {
            return Err(format!("D+L in {p}: {got}, contracted {contracted:?}"));
        }
        expect(LatticeFamilyParams::rank3(0, 2, h), &[2, 1, 1], Verdict::VeryAmple)?;
    }
    expect(LatticeFamilyParams::rank3(1, 4, 1), &[1, 1, 0], Verdict::VeryAmple)?;
    Ok("D−L, D+L, 2D+L+R and D+L verdicts as expected".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("table values", table_values),
        ("no orthogonal roots", orthogonal_roots),
        ("claim replays", claim_values),
        ("enumeration matches oracle", oracle_agreement),
        ("nef violation bound", nef_bound),
        ("classifier goldens", classifier_goldens),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
