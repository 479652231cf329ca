//! Shared hand-built datasets for unit tests. Weights and fibers are frozen
//! from direct chart computations; the toric generator must reproduce them.

use crate::character::FiniteCharacter;
use crate::fixed_point::{FixedPointDataset, FixedPointRecord};
use crate::lattice::Weight;
use num_bigint::BigInt;

fn w(coords: &[i64]) -> Weight {
    Weight(coords.to_vec())
}

fn fiber(coords: &[i64]) -> FiniteCharacter {
    FiniteCharacter::monomial(w(coords), BigInt::from(1))
}

/// The projective plane twisted by degree c, one fixed point per chart.
/// Chamber (1,2) is generic; (1,1) lies on the wall of the weight (1,-1).
pub(crate) fn p2_dataset(c: i64) -> FixedPointDataset {
    FixedPointDataset {
        rank: 2,
        ambient_dim: 2,
        compact: true,
        points: vec![
            FixedPointRecord {
                id: "p0".into(),
                weights: vec![w(&[-1, 0]), w(&[0, -1])],
                fiber: fiber(&[0, 0]),
            },
            FixedPointRecord {
                id: "p1".into(),
                weights: vec![w(&[1, 0]), w(&[1, -1])],
                fiber: fiber(&[c, 0]),
            },
            FixedPointRecord {
                id: "p2".into(),
                weights: vec![w(&[0, 1]), w(&[-1, 1])],
                fiber: fiber(&[0, c]),
            },
        ],
        edges: Some(vec![
            ("p2".into(), "p1".into()),
            ("p2".into(), "p0".into()),
            ("p1".into(), "p0".into()),
        ]),
    }
}

/// The projective line with a degree-1 twist: fiber weights 0 and -1.
pub(crate) fn p1_o1_dataset() -> FixedPointDataset {
    FixedPointDataset {
        rank: 1,
        ambient_dim: 1,
        compact: true,
        points: vec![
            FixedPointRecord {
                id: "p0".into(),
                weights: vec![w(&[1])],
                fiber: fiber(&[0]),
            },
            FixedPointRecord {
                id: "pinf".into(),
                weights: vec![w(&[-1])],
                fiber: fiber(&[-1]),
            },
        ],
        edges: Some(vec![("p0".into(), "pinf".into())]),
    }
}

/// The affine line with its scaling action: one fixed point, non-compact.
pub(crate) fn affine_line_dataset() -> FixedPointDataset {
    FixedPointDataset {
        rank: 1,
        ambient_dim: 1,
        compact: false,
        points: vec![FixedPointRecord {
            id: "0".into(),
            weights: vec![w(&[1])],
            fiber: fiber(&[0]),
        }],
        edges: None,
    }
}
