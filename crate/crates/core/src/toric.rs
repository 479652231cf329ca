//! Smooth toric inputs. A fan plus an invariant divisor generates the
//! fixed-point dataset, the gradient flow digraph of a chamber vector,
//! one-parameter limit cones, chart section counts, and a direct polytope
//! count for cross-checking indices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::character::FiniteCharacter;
use crate::error::Error;
use crate::fixed_point::{validate_chamber, ChamberVector, FixedPointDataset, FixedPointRecord};
use crate::flow::FlowDigraph;
use crate::lattice::{CoordinateBox, Weight};
use crate::linalg;
use crate::Result;

/// A rational fan given by primitive ray generators and maximal cones listed
/// as sorted ray-index sets. Every maximal cone must be unimodular, so the
/// variety is smooth and every fixed point carries exactly `rank` weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// Invariant divisor, one coefficient per ray of the fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisor {
    pub coeffs: Vec<i64>,
}

pub fn point_id(ci: usize) -> String {
    format!("p{ci}")
}

impl Fan {
    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::BadFan {
                detail: "rank must be at least 1".into(),
            });
        }
        let mut seen_rays = BTreeSet::new();
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.len() != self.rank {
                return Err(Error::RankMismatch {
                    expected: self.rank,
                    found: ray.len(),
                });
            }
            let g = ray.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g == 0 {
                return Err(Error::BadFan {
                    detail: format!("ray {i} is zero"),
                });
            }
            if g != 1 {
                return Err(Error::BadFan {
                    detail: format!("ray {i} = {ray:?} is not primitive"),
                });
            }
            if !seen_rays.insert(ray.clone()) {
                return Err(Error::BadFan {
                    detail: format!("duplicate ray {ray:?}"),
                });
            }
        }
        if self.max_cones.is_empty() {
            return Err(Error::BadFan {
                detail: "no maximal cones".into(),
            });
        }
        let mut seen_cones = BTreeSet::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            if cone.len() != self.rank {
                return Err(Error::BadFan {
                    detail: format!("maximal cone {ci} must have exactly {} rays", self.rank),
                });
            }
            let in_range = cone.iter().all(|&r| r < self.rays.len());
            let increasing = cone.windows(2).all(|w| w[0] < w[1]);
            if !in_range || !increasing {
                return Err(Error::BadFan {
                    detail: format!("cone {ci} ray indices must be sorted, distinct, and in range"),
                });
            }
            if !seen_cones.insert(cone.clone()) {
                return Err(Error::BadFan {
                    detail: format!("duplicate maximal cone {cone:?}"),
                });
            }
            let det = self.cone_det(ci);
            if det.abs() != 1 {
                return Err(Error::NonSmoothCone { cone: ci, det });
            }
        }
        Ok(())
    }

    // columns are the cone's rays, in cone order
    fn ray_matrix(&self, ci: usize) -> Vec<Vec<i64>> {
        let cone = &self.max_cones[ci];
        (0..self.rank)
            .map(|r| cone.iter().map(|&k| self.rays[k][r]).collect())
            .collect()
    }

    fn cone_det(&self, ci: usize) -> i64 {
        let d = linalg::det(&linalg::mat_from_i64(&self.ray_matrix(ci)));
        i64::try_from(&d).expect("cone determinant fits i64")
    }

    /// Complete fans are exactly those where every facet of a maximal cone
    /// is an interior wall shared by two cones. More than two sharing cones
    /// is rejected outright.
    pub fn is_complete(&self) -> Result<bool> {
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cone in &self.max_cones {
            for k in 0..cone.len() {
                let mut facet = cone.clone();
                facet.remove(k);
                *counts.entry(facet).or_default() += 1;
            }
        }
        for (wall, &count) in &counts {
            if count > 2 {
                return Err(Error::WallCount {
                    wall: wall.clone(),
                    count,
                });
            }
        }
        Ok(counts.values().all(|&c| c == 2))
    }

    /// Isotropy weights of the fixed point of maximal cone `ci`, ordered
    /// parallel to the cone's ray list: weight k is minus the dual basis
    /// vector of ray k.
    pub fn isotropy_weights(&self, ci: usize) -> Result<Vec<Weight>> {
        let m = self.ray_matrix(ci);
        let inv = linalg::inverse_unimodular(&m).ok_or_else(|| Error::NonSmoothCone {
            cone: ci,
            det: self.cone_det(ci),
        })?;
        Ok(inv
            .into_iter()
            .map(|row| Weight(row.into_iter().map(|x| -x).collect()))
            .collect())
    }

    /// Weight of the divisor's fiber line at the fixed point of cone `ci`.
    pub fn fiber_weight(&self, ci: usize, divisor: &Divisor) -> Result<Weight> {
        let weights = self.isotropy_weights(ci)?;
        let cone = &self.max_cones[ci];
        let mut acc = Weight::zero(self.rank);
        for (k, w) in weights.iter().enumerate() {
            acc = acc.add(&w.scale(divisor.coeffs[cone[k]]));
        }
        Ok(acc)
    }
}

pub(crate) fn check_divisor(fan: &Fan, divisor: &Divisor) -> Result<()> {
    if divisor.coeffs.len() != fan.rays.len() {
        return Err(Error::BadInput(format!(
            "divisor has {} coefficients, fan has {} rays",
            divisor.coeffs.len(),
            fan.rays.len()
        )));
    }
    Ok(())
}

/// Fixed-point dataset of the fan twisted by the divisor: point `p{i}` for
/// maximal cone i, fiber the divisor's local weight.
pub fn dataset_from_fan(fan: &Fan, divisor: &Divisor) -> Result<FixedPointDataset> {
    fan.validate()?;
    check_divisor(fan, divisor)?;
    let compact = fan.is_complete()?;
    let points = (0..fan.max_cones.len())
        .map(|ci| {
            Ok(FixedPointRecord {
                id: point_id(ci),
                weights: fan.isotropy_weights(ci)?,
                fiber: FiniteCharacter::monomial(fan.fiber_weight(ci, divisor)?, 1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ds = FixedPointDataset {
        rank: fan.rank,
        ambient_dim: fan.rank,
        compact,
        points,
        edges: None,
    };
    ds.validate()?;
    Ok(ds)
}

/// Index of the maximal cone whose fixed point is the limit of the orbit
/// stratum of `face` under the flow of `v`: the unique cone containing
/// `face` whose isotropy weights dual to the off-face rays all pair
/// positively with `v`.
pub fn bb_limit_cone(fan: &Fan, face: &[usize], v: &ChamberVector) -> Result<usize> {
    let mut parent = false;
    let mut winners = Vec::new();
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        if !face.iter().all(|r| cone.contains(r)) {
            continue;
        }
        parent = true;
        let weights = fan.isotropy_weights(ci)?;
        let descending = cone
            .iter()
            .zip(&weights)
            .filter(|(r, _)| !face.contains(r))
            .all(|(_, w)| {
                let pairing = v.pair(w);
                debug_assert_ne!(pairing, 0, "validated chamber lies in no wall");
                pairing > 0
            });
        if descending {
            winners.push(ci);
        }
    }
    if !parent {
        return Err(Error::BadInput(format!(
            "{face:?} is not a face of any maximal cone"
        )));
    }
    match winners.as_slice() {
        [ci] => Ok(*ci),
        [] => Err(Error::NoLimit {
            face: face.to_vec(),
        }),
        _ => Err(Error::AmbiguousLimit {
            face: face.to_vec(),
        }),
    }
}

/// Gradient flow digraph of the chamber vector: one edge per interior wall,
/// directed out of the cone whose off-wall weight pairs positively with `v`.
/// The two candidate weights of a wall are opposite, so the direction is
/// well defined once `v` avoids every wall.
pub fn flow_digraph_from_fan(fan: &Fan, v: &[i64]) -> Result<FlowDigraph> {
    let zero = Divisor {
        coeffs: vec![0; fan.rays.len()],
    };
    let ds = dataset_from_fan(fan, &zero)?;
    let chamber = validate_chamber(&ds, v)?;
    let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        for k in 0..cone.len() {
            let mut facet = cone.clone();
            facet.remove(k);
            walls.entry(facet).or_default().push(ci);
        }
    }
    let mut edges = Vec::new();
    for (wall, cones) in &walls {
        match cones.as_slice() {
            [_] => {} // boundary facet; the fan is not complete there
            [a, b] => {
                let wa = off_wall_weight(fan, *a, wall)?;
                let wb = off_wall_weight(fan, *b, wall)?;
                debug_assert_eq!(wa, wb.neg(), "wall weights at the two ends are opposite");
                let (src, dst) = if chamber.pair(&wa) > 0 { (*a, *b) } else { (*b, *a) };
                edges.push((point_id(src), point_id(dst)));
            }
            _ => {
                return Err(Error::WallCount {
                    wall: wall.clone(),
                    count: cones.len(),
                })
            }
        }
    }
    FlowDigraph::new((0..fan.max_cones.len()).map(point_id).collect(), edges)
}

// isotropy weight of cone ci dual to its single ray outside the wall
fn off_wall_weight(fan: &Fan, ci: usize, wall: &[usize]) -> Result<Weight> {
    let cone = &fan.max_cones[ci];
    let weights = fan.isotropy_weights(ci)?;
    let k = cone
        .iter()
        .position(|r| !wall.contains(r))
        .expect("wall is a strict facet");
    Ok(weights[k].clone())
}

/// Ray-index set of the common face of the listed maximal cones; its span
/// is the chart on which the corresponding opens intersect.
pub fn chart_ray_set(fan: &Fan, charts: &[usize]) -> Result<Vec<usize>> {
    if charts.is_empty() {
        return Err(Error::BadInput("need at least one chart index".into()));
    }
    let mut set: Option<BTreeSet<usize>> = None;
    for &ci in charts {
        let cone = self_cone(fan, ci)?;
        let rays: BTreeSet<usize> = cone.iter().copied().collect();
        set = Some(match set {
            None => rays,
            Some(s) => s.intersection(&rays).copied().collect(),
        });
    }
    Ok(set.expect("charts nonempty").into_iter().collect())
}

fn self_cone(fan: &Fan, ci: usize) -> Result<&Vec<usize>> {
    fan.max_cones.get(ci).ok_or_else(|| {
        Error::BadInput(format!(
            "chart index {ci} out of range, fan has {} maximal cones",
            fan.max_cones.len()
        ))
    })
}

/// Whether the weight satisfies every inequality <m, ray> >= -a of the
/// listed rays.
pub fn region_contains(fan: &Fan, divisor: &Divisor, rays: &[usize], m: &Weight) -> bool {
    rays.iter()
        .all(|&r| m.dot(&fan.rays[r]) >= -divisor.coeffs[r])
}

/// Character of the box lattice points lying in the common chart region of
/// the listed maximal cones.
pub fn chart_sections_in_box(
    fan: &Fan,
    divisor: &Divisor,
    charts: &[usize],
    bx: &CoordinateBox,
) -> Result<FiniteCharacter> {
    fan.validate()?;
    check_divisor(fan, divisor)?;
    if bx.rank() != fan.rank {
        return Err(Error::RankMismatch {
            expected: fan.rank,
            found: bx.rank(),
        });
    }
    let rays = chart_ray_set(fan, charts)?;
    let mut ch = FiniteCharacter::zero();
    for m in bx.iter() {
        if region_contains(fan, divisor, &rays, &m) {
            ch.add_term(m, BigInt::from(1));
        }
    }
    Ok(ch)
}

/// Section character of a divisor on a complete fan, counted directly from
/// the polytope inequalities. A lattice point on the box boundary aborts
/// the count: the box cannot certify that it saw the whole polytope.
pub fn polytope_character_oracle(
    fan: &Fan,
    divisor: &Divisor,
    bx: &CoordinateBox,
) -> Result<FiniteCharacter> {
    fan.validate()?;
    check_divisor(fan, divisor)?;
    if bx.rank() != fan.rank {
        return Err(Error::RankMismatch {
            expected: fan.rank,
            found: bx.rank(),
        });
    }
    if !fan.is_complete()? {
        return Err(Error::BadFan {
            detail: "section polytope needs a complete fan".into(),
        });
    }
    let all: Vec<usize> = (0..fan.rays.len()).collect();
    let mut ch = FiniteCharacter::zero();
    for m in bx.iter() {
        if region_contains(fan, divisor, &all, &m) {
            let boundary = m
                .0
                .iter()
                .zip(bx.lo.iter().zip(&bx.hi))
                .any(|(x, (lo, hi))| x == lo || x == hi);
            if boundary {
                return Err(Error::PolytopeUnbounded);
            }
            ch.add_term(m, BigInt::from(1));
        }
    }
    Ok(ch)
}

/// A divisor is nef exactly when every fixed-point fiber weight satisfies
/// all the polytope inequalities.
pub fn is_nef(fan: &Fan, divisor: &Divisor) -> Result<bool> {
    fan.validate()?;
    check_divisor(fan, divisor)?;
    let all: Vec<usize> = (0..fan.rays.len()).collect();
    for ci in 0..fan.max_cones.len() {
        let u = fan.fiber_weight(ci, divisor)?;
        if !region_contains(fan, divisor, &all, &u) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn p2_fan() -> Fan {
        Fan {
            rank: 2,
            rays: vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            max_cones: vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        }
    }

    fn p1_fan() -> Fan {
        Fan {
            rank: 1,
            rays: vec![vec![1], vec![-1]],
            max_cones: vec![vec![0], vec![1]],
        }
    }

    fn affine_line_fan() -> Fan {
        Fan {
            rank: 1,
            rays: vec![vec![1]],
            max_cones: vec![vec![0]],
        }
    }

    fn chamber(fan: &Fan, v: &[i64]) -> ChamberVector {
        let zero = Divisor {
            coeffs: vec![0; fan.rays.len()],
        };
        validate_chamber(&dataset_from_fan(fan, &zero).unwrap(), v).unwrap()
    }

    #[test]
    fn plane_dataset_matches_hand_charts() {
        let fan = p2_fan();
        let ds = dataset_from_fan(&fan, &Divisor { coeffs: vec![0, 0, 3] }).unwrap();
        let expected = fixtures::p2_dataset(3);
        assert_eq!(ds.rank, 2);
        assert_eq!(ds.ambient_dim, 2);
        assert!(ds.compact);
        assert_eq!(ds.edges, None);
        for (got, want) in ds.points.iter().zip(&expected.points) {
            assert_eq!(got.id, want.id);
            assert_eq!(got.fiber, want.fiber);
            let mut gw = got.weights.clone();
            let mut ww = want.weights.clone();
            gw.sort();
            ww.sort();
            assert_eq!(gw, ww, "weights at {}", got.id);
        }
    }

    #[test]
    fn fan_validation_rejects_bad_input() {
        let mut nonprimitive = p2_fan();
        nonprimitive.rays[0] = vec![2, 0];
        assert!(matches!(
            nonprimitive.validate(),
            Err(Error::BadFan { .. })
        ));

        let nonsmooth = Fan {
            rank: 2,
            rays: vec![vec![1, 0], vec![1, 2]],
            max_cones: vec![vec![0, 1]],
        };
        assert_eq!(
            nonsmooth.validate(),
            Err(Error::NonSmoothCone { cone: 0, det: 2 })
        );

        let mut short_cone = p2_fan();
        short_cone.max_cones[1] = vec![1];
        assert!(matches!(short_cone.validate(), Err(Error::BadFan { .. })));
    }

    #[test]
    fn completeness_by_wall_counting() {
        assert!(p2_fan().is_complete().unwrap());
        assert!(p1_fan().is_complete().unwrap());
        assert!(!affine_line_fan().is_complete().unwrap());
        // three smooth cones around the ray e2
        let overfull = Fan {
            rank: 2,
            rays: vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![1, 1]],
            max_cones: vec![vec![0, 1], vec![1, 2], vec![1, 3]],
        };
        assert_eq!(
            overfull.is_complete(),
            Err(Error::WallCount {
                wall: vec![1],
                count: 3
            })
        );
    }

    #[test]
    fn limit_cones_on_the_line() {
        // flowing along v = -1 the generic orbit falls into the origin of
        // the chart of cone(+1), whose weight pairs positively with v
        let fan = p1_fan();
        assert_eq!(bb_limit_cone(&fan, &[], &chamber(&fan, &[-1])).unwrap(), 0);
        assert_eq!(bb_limit_cone(&fan, &[], &chamber(&fan, &[1])).unwrap(), 1);
    }

    #[test]
    fn limit_cones_on_the_plane() {
        let fan = p2_fan();
        let v = chamber(&fan, &[1, 2]);
        assert_eq!(bb_limit_cone(&fan, &[], &v).unwrap(), 2);
        assert_eq!(bb_limit_cone(&fan, &[0], &v).unwrap(), 2);
        assert_eq!(bb_limit_cone(&fan, &[1], &v).unwrap(), 1);
        assert_eq!(bb_limit_cone(&fan, &[2], &v).unwrap(), 2);
        for (face, ci) in [(vec![0, 1], 0), (vec![1, 2], 1), (vec![0, 2], 2)] {
            assert_eq!(bb_limit_cone(&fan, &face, &v).unwrap(), ci);
        }
        assert!(matches!(
            bb_limit_cone(&fan, &[0, 1, 2], &v),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn open_chart_has_no_limit_flowing_out() {
        let fan = affine_line_fan();
        // weight at the origin is -1: v = -1 flows in, v = +1 flows out
        assert_eq!(bb_limit_cone(&fan, &[], &chamber(&fan, &[-1])).unwrap(), 0);
        assert_eq!(
            bb_limit_cone(&fan, &[], &chamber(&fan, &[1])),
            Err(Error::NoLimit { face: vec![] })
        );
    }

    #[test]
    fn plane_flow_digraph() {
        let g = flow_digraph_from_fan(&p2_fan(), &[1, 2]).unwrap();
        assert_eq!(g.vertices, vec!["p0", "p1", "p2"]);
        let edges: BTreeSet<_> = g.edges.iter().cloned().collect();
        let want: BTreeSet<_> = [("p2", "p1"), ("p2", "p0"), ("p1", "p0")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(edges, want);
    }

    #[test]
    fn wall_vector_is_rejected() {
        // (1,1) pairs to zero with the weight (1,-1) at p1
        assert!(matches!(
            flow_digraph_from_fan(&p2_fan(), &[1, 1]),
            Err(Error::WallChamber { .. })
        ));
    }

    #[test]
    fn chart_sections_count_lattice_points() {
        let fan = p2_fan();
        let d = Divisor { coeffs: vec![0, 0, 2] };
        let bx = CoordinateBox::new(vec![-1, -1], vec![1, 1]).unwrap();
        let quadrant = chart_sections_in_box(&fan, &d, &[0], &bx).unwrap();
        assert_eq!(quadrant.total(), BigInt::from(4));
        let half = chart_sections_in_box(&fan, &d, &[0, 1], &bx).unwrap();
        assert_eq!(half.total(), BigInt::from(6));
        let everything = chart_sections_in_box(&fan, &d, &[0, 1, 2], &bx).unwrap();
        assert_eq!(everything.total(), BigInt::from(9));
    }

    #[test]
    fn polytope_count_on_the_plane() {
        let fan = p2_fan();
        let d = Divisor { coeffs: vec![0, 0, 2] };
        let bx = CoordinateBox::new(vec![-2, -2], vec![4, 4]).unwrap();
        let ch = polytope_character_oracle(&fan, &d, &bx).unwrap();
        assert_eq!(ch.total(), BigInt::from(6));
        assert_eq!(ch.coeff(&Weight(vec![1, 1])), BigInt::from(1));
        assert_eq!(ch.coeff(&Weight(vec![2, 1])), BigInt::from(0));
        // a box whose boundary touches the polytope cannot certify it
        let tight = CoordinateBox::new(vec![0, 0], vec![2, 2]).unwrap();
        assert_eq!(
            polytope_character_oracle(&fan, &d, &tight),
            Err(Error::PolytopeUnbounded)
        );
        let empty = polytope_character_oracle(
            &fan,
            &Divisor { coeffs: vec![0, 0, -1] },
            &bx,
        )
        .unwrap();
        assert!(empty.is_zero());
    }

    #[test]
    fn nef_cone_of_the_plane() {
        let fan = p2_fan();
        assert!(is_nef(&fan, &Divisor { coeffs: vec![0, 0, 2] }).unwrap());
        assert!(is_nef(&fan, &Divisor { coeffs: vec![0, 0, 0] }).unwrap());
        assert!(!is_nef(&fan, &Divisor { coeffs: vec![0, 0, -1] }).unwrap());
    }
}
