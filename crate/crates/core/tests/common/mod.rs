#![allow(dead_code)]

use k3picard::enumerate::{enumerate_classes, ClassQuery};
use k3picard::lattice::{DivisorClass, IntLattice};
use rand::Rng;

/// Random even hyperbolic lattice of the given rank with Gram entries in
/// `[-10, 10]`.
pub fn hyperbolic<R: Rng>(rng: &mut R, rank: usize) -> IntLattice {
    loop {
        if let Some(l) = attempt(rng, rank, false) {
            return l;
        }
    }
}

/// Like [`hyperbolic`], with the first basis vector a root.
pub fn hyperbolic_with_root<R: Rng>(rng: &mut R, rank: usize) -> IntLattice {
    loop {
        if let Some(l) = attempt(rng, rank, true) {
            return l;
        }
    }
}

fn attempt<R: Rng>(rng: &mut R, rank: usize, root: bool) -> Option<IntLattice> {
    let mut g = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        g[i][i] = 2 * rng.gen_range(-5i64..=5);
        for j in i + 1..rank {
            let v = rng.gen_range(-10i64..=10);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    if root {
        g[0][0] = -2;
    }
    let rows: Vec<&[i64]> = g.iter().map(|r| r.as_slice()).collect();
    IntLattice::from_i64s(&rows).ok().filter(|l| l.is_hyperbolic())
}

/// Random class with small coordinates and positive square, if one turns up.
pub fn positive_class<R: Rng>(rng: &mut R, lattice: &IntLattice) -> Option<DivisorClass> {
    (0..500).find_map(|_| {
        let c: Vec<i64> = (0..lattice.rank()).map(|_| rng.gen_range(-4i64..=4)).collect();
        let c = DivisorClass::from_i64s(&c);
        (lattice.square(&c).unwrap() > 0.into()).then_some(c)
    })
}

/// Query `x² = s, x·K = m` anchored at a random positive class `K`.
pub fn anchored_query<R: Rng>(rng: &mut R, lattice: &IntLattice) -> Option<ClassQuery> {
    let k = positive_class(rng, lattice)?;
    let s = 2 * rng.gen_range(-2i64..=2);
    let m = rng.gen_range(-4i64..=4);
    let q = ClassQuery::new(s).eq(&k, m);
    Some(if rng.gen_bool(0.25) { q.primitive() } else { q })
}

pub fn pairing(lattice: &IntLattice, a: &DivisorClass, b: &DivisorClass) -> i64 {
    i64::try_from(lattice.pair(a, b).unwrap()).unwrap()
}

/// Positive classes `(P, Δ)` in the same cone component. When a root `C`
/// with small `C·P > 0` exists, `Δ = P + tC` with `2t > C·P`, so `C·Δ < 0`.
pub fn nef_pair<R: Rng>(rng: &mut R, lattice: &IntLattice) -> Option<(DivisorClass, DivisorClass)> {
    let p = positive_class(rng, lattice)?;
    let mut roots = enumerate_classes(lattice, &ClassQuery::new(-2).range(&p, 1, 12)).ok()?.solutions;
    let e0 = lattice.basis_class(0);
    if lattice.square(&e0).unwrap() == (-2).into() && pairing(lattice, &p, &e0) != 0 {
        roots.push(if pairing(lattice, &p, &e0) > 0 { e0 } else { e0.scaled(&(-1).into()) });
    }
    if !roots.is_empty() && rng.gen_bool(0.8) {
        let c = &roots[rng.gen_range(0..roots.len())];
        let pc = pairing(lattice, &p, c);
        let t = pc / 2 + 1 + rng.gen_range(0..=1i64);
        let d = &p + &c.scaled(&t.into());
        if lattice.square(&d).unwrap() > 0.into() && pairing(lattice, &p, &d) > 0 {
            return Some((p, d));
        }
    }
    let d = positive_class(rng, lattice)?;
    let d = if pairing(lattice, &p, &d) > 0 { d } else { d.scaled(&(-1).into()) };
    Some((p, d))
}
