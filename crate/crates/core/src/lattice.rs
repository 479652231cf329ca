//! Weight-lattice primitives: integer weights, pairings against chamber
//! vectors, and the coordinate boxes used to truncate formal series.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A lattice weight in a fixed basis of the character lattice.
///
/// Coordinates are machine integers; every lattice in this crate has rank at
/// most a handful and all coordinate arithmetic stays tiny. Ordering is
/// lexicographic, which is also the canonical serialization order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Pairing with a vector of the dual lattice.
    pub fn dot(&self, v: &[i64]) -> i64 {
        debug_assert_eq!(self.0.len(), v.len());
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Inclusive per-axis bounds; the truncation window for infinite series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl CoordinateBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::BadBox {
                detail: format!("lo has length {}, hi has length {}", lo.len(), hi.len()),
            });
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::BadBox {
                detail: "lo exceeds hi on some axis".into(),
            });
        }
        Ok(CoordinateBox { lo, hi })
    }

    /// Smallest box containing all given weights, grown by `margin` per axis.
    /// With no weights, the box is [-margin, margin]^rank.
    pub fn hull(rank: usize, weights: impl IntoIterator<Item = Weight>, margin: i64) -> Self {
        let mut lo = vec![i64::MAX; rank];
        let mut hi = vec![i64::MIN; rank];
        let mut seen = false;
        for w in weights {
            seen = true;
            for (i, c) in w.0.iter().enumerate() {
                lo[i] = lo[i].min(*c);
                hi[i] = hi[i].max(*c);
            }
        }
        if !seen {
            lo = vec![0; rank];
            hi = vec![0; rank];
        }
        for i in 0..rank {
            lo[i] -= margin;
            hi[i] += margin;
        }
        CoordinateBox { lo, hi }
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        w.0.len() == self.lo.len()
            && w.0
                .iter()
                .enumerate()
                .all(|(i, &c)| self.lo[i] <= c && c <= self.hi[i])
    }

    /// All 2^rank corner weights.
    pub fn corners(&self) -> Vec<Weight> {
        let r = self.rank();
        (0..1usize << r)
            .map(|mask| {
                Weight(
                    (0..r)
                        .map(|i| if mask >> i & 1 == 0 { self.lo[i] } else { self.hi[i] })
                        .collect(),
                )
            })
            .collect()
    }

    /// Iterate every lattice point, last axis fastest.
    pub fn iter(&self) -> BoxIter {
        BoxIter {
            bx: self.clone(),
            cur: self.lo.clone(),
            done: self.lo.iter().zip(&self.hi).any(|(l, h)| l > h),
        }
    }

    pub fn point_count(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as usize)
            .product()
    }
}

pub struct BoxIter {
    bx: CoordinateBox,
    cur: Vec<i64>,
    done: bool,
}

impl Iterator for BoxIter {
    type Item = Weight;

    fn next(&mut self) -> Option<Weight> {
        if self.done {
            return None;
        }
        let out = Weight(self.cur.clone());
        // odometer increment
        let mut axis = self.bx.rank();
        loop {
            if axis == 0 {
                self.done = true;
                break;
            }
            axis -= 1;
            if self.cur[axis] < self.bx.hi[axis] {
                self.cur[axis] += 1;
                break;
            }
            self.cur[axis] = self.bx.lo[axis];
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_iteration_covers_all_points() {
        let bx = CoordinateBox::new(vec![-1, 0], vec![1, 1]).unwrap();
        let pts: Vec<Weight> = bx.iter().collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(bx.point_count(), 6);
        assert_eq!(pts[0], Weight(vec![-1, 0]));
        assert_eq!(pts[5], Weight(vec![1, 1]));
    }

    #[test]
    fn hull_inflates_by_margin() {
        let bx = CoordinateBox::hull(2, [Weight(vec![0, 0]), Weight(vec![3, -2])], 10);
        assert_eq!(bx.lo, vec![-10, -12]);
        assert_eq!(bx.hi, vec![13, 10]);
    }

    #[test]
    fn degenerate_box_is_rejected() {
        assert!(CoordinateBox::new(vec![1], vec![0]).is_err());
        assert!(CoordinateBox::new(vec![0, 0], vec![1]).is_err());
    }

    #[test]
    fn corners_of_rank_two_box() {
        let bx = CoordinateBox::new(vec![0, 0], vec![2, 3]).unwrap();
        let corners = bx.corners();
        assert_eq!(corners.len(), 4);
        assert!(corners.contains(&Weight(vec![2, 3])));
        assert!(corners.contains(&Weight(vec![0, 3])));
    }
}
