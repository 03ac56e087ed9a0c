//! The parametrized Picard lattices `Γ_{jkh}` with basis `(D, L)` or
//! `(D, L, R)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::{IntLattice, LatticeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Rank2,
    Rank3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeFamilyParams {
    pub shape: Shape,
    pub j: i64,
    pub k: i64,
    pub h: i64,
}

impl LatticeFamilyParams {
    pub fn rank2(j: i64, k: i64, h: i64) -> Self {
        LatticeFamilyParams { shape: Shape::Rank2, j, k, h }
    }

    pub fn rank3(j: i64, k: i64, h: i64) -> Self {
        LatticeFamilyParams { shape: Shape::Rank3, j, k, h }
    }

    /// The family with these parameters, if `(j, k, h)` lies in one of the
    /// admissible ranges. The ranges do not overlap, so the shape is
    /// determined by the parameters.
    pub fn admissible(j: i64, k: i64, h: i64) -> Option<Self> {
        [Self::rank2(j, k, h), Self::rank3(j, k, h)].into_iter().find(|p| p.in_range())
    }

    /// Whether the parameters lie in one of the admissible ranges:
    ///
    /// - rank 2: `j ∈ {1, 2}, k ≥ j + 4, h = 2`; `j = −1, k ∈ {1, 2}, h ≥ 5 − 2k`;
    ///   `(j, k, h) = (1, 5, 3)`
    /// - rank 3: `j = 0, k ∈ {1, 2}, h ≥ 5 − 2k`; `(j, k, h) = (1, 4, 1)`
    pub fn in_range(&self) -> bool {
        let LatticeFamilyParams { shape, j, k, h } = *self;
        match shape {
            Shape::Rank2 => {
                ((j == 1 || j == 2) && k >= j + 4 && h == 2)
                    || (j == -1 && (k == 1 || k == 2) && h >= 5 - 2 * k)
                    || (j, k, h) == (1, 5, 3)
            }
            Shape::Rank3 => (j == 0 && (k == 1 || k == 2) && h >= 5 - 2 * k) || (j, k, h) == (1, 4, 1),
        }
    }

    pub fn rank(&self) -> usize {
        match self.shape {
            Shape::Rank2 => 2,
            Shape::Rank3 => 3,
        }
    }

    pub fn labels(&self) -> Vec<String> {
        let all = ["D", "L", "R"];
        all[..self.rank()].iter().map(|s| s.to_string()).collect()
    }

    pub fn gram_i64(&self) -> Vec<Vec<i64>> {
        let LatticeFamilyParams { j, k, h, .. } = *self;
        match self.shape {
            Shape::Rank2 => vec![vec![2 * h, k], vec![k, 2 * j]],
            Shape::Rank3 => vec![vec![2 * h, k, 2], vec![k, 4 * j - 2, j], vec![2, j, -2]],
        }
    }

    pub fn lattice(&self) -> Result<IntLattice, LatticeError> {
        let g = self.gram_i64();
        let rows: Vec<&[i64]> = g.iter().map(|r| r.as_slice()).collect();
        IntLattice::with_labels_i64(self.labels(), &rows)
    }
}

impl fmt::Display for LatticeFamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rank = self.rank();
        write!(f, "Γ_{{{},{},{}}} (rank {rank})", self.j, self.k, self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert!(LatticeFamilyParams::rank2(1, 5, 2).in_range());
        assert!(LatticeFamilyParams::rank2(2, 6, 2).in_range());
        assert!(!LatticeFamilyParams::rank2(2, 5, 2).in_range());
        assert!(LatticeFamilyParams::rank2(-1, 1, 3).in_range());
        assert!(!LatticeFamilyParams::rank2(-1, 1, 2).in_range());
        assert!(LatticeFamilyParams::rank2(-1, 2, 1).in_range());
        assert!(LatticeFamilyParams::rank2(1, 5, 3).in_range());
        assert!(!LatticeFamilyParams::rank2(1, 6, 3).in_range());
        assert!(LatticeFamilyParams::rank3(0, 1, 3).in_range());
        assert!(LatticeFamilyParams::rank3(0, 2, 1).in_range());
        assert!(LatticeFamilyParams::rank3(1, 4, 1).in_range());
        assert!(!LatticeFamilyParams::rank3(1, 4, 2).in_range());
    }

    #[test]
    fn shape_is_determined_by_parameters() {
        assert_eq!(LatticeFamilyParams::admissible(1, 4, 1).unwrap().shape, Shape::Rank3);
        assert_eq!(LatticeFamilyParams::admissible(1, 5, 2).unwrap().shape, Shape::Rank2);
        assert_eq!(LatticeFamilyParams::admissible(0, 2, 7).unwrap().shape, Shape::Rank3);
        assert!(LatticeFamilyParams::admissible(3, 9, 2).is_none());
    }

    #[test]
    fn builds_lattices() {
        let g = LatticeFamilyParams::rank2(-1, 2, 1).lattice().unwrap();
        assert_eq!(g.discriminant(), &num_bigint::BigInt::from(-8));
        assert_eq!(g.labels(), ["D", "L"]);
        let g = LatticeFamilyParams::rank3(1, 4, 1).lattice().unwrap();
        assert_eq!(g.discriminant(), &num_bigint::BigInt::from(30));
    }
}
