//! Cech complexes of the maximal-cone cover, one finite complex per torus
//! weight, their cohomology, and the spectral sequence induced by the
//! downward-flow filtration of the cover.
//!
//! The filtration level of an intersection U_I is m minus the deepest flow
//! layer reached by the limits of the faces of its common cone. Enlarging I
//! shrinks the common cone and so never lowers the level; the differential
//! therefore preserves the filtration, which is what makes the r = 0 page
//! of the recurrence below well defined.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::character::FiniteCharacter;
use crate::error::Error;
use crate::fixed_point::{validate_chamber, ChamberVector};
use crate::flow::{build_filtration, Filtration};
use crate::lattice::{CoordinateBox, Weight};
use crate::linalg::{self, Mat, Subspace};
use crate::toric::{
    bb_limit_cone, chart_ray_set, check_divisor, dataset_from_fan, flow_digraph_from_fan,
    point_id, region_contains, Divisor, Fan,
};
use crate::Result;

// all (n+1)-fold intersections of the cover with their common ray sets,
// lex sorted within each degree
struct Cover {
    c: usize,
    degrees: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
}

fn build_cover(fan: &Fan) -> Result<Cover> {
    let c = fan.max_cones.len();
    let mut degrees = Vec::with_capacity(c);
    for n in 0..c {
        let mut level = Vec::new();
        for subset in (0..c).combinations(n + 1) {
            let rays = chart_ray_set(fan, &subset)?;
            level.push((subset, rays));
        }
        degrees.push(level);
    }
    Ok(Cover { c, degrees })
}

// indices into cover.degrees[n] of the intersections whose region contains
// the weight; upward closed, because larger subsets impose fewer inequalities
fn bases_for(cover: &Cover, fan: &Fan, divisor: &Divisor, weight: &Weight) -> Vec<Vec<usize>> {
    cover
        .degrees
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .filter(|(_, (_, rays))| region_contains(fan, divisor, rays, weight))
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

// alternating-sum differential from the degree-n basis to the degree-(n+1)
// basis, rows indexed by the domain
fn cech_matrix(cover: &Cover, n: usize, domain: &[usize], codomain: &[usize]) -> Mat {
    let level = &cover.degrees[n];
    let next = cover.degrees.get(n + 1);
    let mut mat = vec![vec![BigInt::zero(); codomain.len()]; domain.len()];
    let Some(next) = next else {
        return mat;
    };
    for (row, &di) in domain.iter().enumerate() {
        let sub = &level[di].0;
        for extra in 0..cover.c {
            if sub.contains(&extra) {
                continue;
            }
            let pos = sub.partition_point(|&x| x < extra);
            let mut sup = sub.clone();
            sup.insert(pos, extra);
            let Ok(col) = codomain.binary_search_by(|&ci| next[ci].0.cmp(&sup)) else {
                continue;
            };
            mat[row][col] = if pos % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
        }
    }
    mat
}

fn guard(fan: &Fan, divisor: &Divisor, rank_of_input: usize) -> Result<()> {
    fan.validate()?;
    check_divisor(fan, divisor)?;
    if rank_of_input != fan.rank {
        return Err(Error::RankMismatch {
            expected: fan.rank,
            found: rank_of_input,
        });
    }
    Ok(())
}

fn dims_from_cover(cover: &Cover, fan: &Fan, divisor: &Divisor, weight: &Weight) -> Vec<usize> {
    let bases = bases_for(cover, fan, divisor, weight);
    let mut dims = Vec::with_capacity(cover.c);
    let mut prev_rank = 0;
    for n in 0..cover.c {
        let codomain: &[usize] = bases.get(n + 1).map_or(&[], Vec::as_slice);
        let rank = linalg::rank_of(cech_matrix(cover, n, &bases[n], codomain));
        dims.push(bases[n].len() - rank - prev_rank);
        prev_rank = rank;
    }
    dims
}

/// Cohomology dimensions of the divisor's sheaf in one weight, per Cech
/// degree 0..#charts-1.
pub fn cohomology_dims(fan: &Fan, divisor: &Divisor, weight: &Weight) -> Result<Vec<usize>> {
    guard(fan, divisor, weight.rank())?;
    let cover = build_cover(fan)?;
    Ok(dims_from_cover(&cover, fan, divisor, weight))
}

/// The coboundary matrices of one weight's complex, degree n mapping the
/// degree-n basis to the degree-(n+1) basis. Exposed so consumers can
/// check structural identities (d following d vanishes) directly.
pub fn cech_matrices(fan: &Fan, divisor: &Divisor, weight: &Weight) -> Result<Vec<Mat>> {
    guard(fan, divisor, weight.rank())?;
    let cover = build_cover(fan)?;
    let bases = bases_for(&cover, fan, divisor, weight);
    Ok((0..cover.c.saturating_sub(1))
        .map(|n| {
            let codomain: &[usize] = bases.get(n + 1).map_or(&[], Vec::as_slice);
            cech_matrix(&cover, n, &bases[n], codomain)
        })
        .collect())
}

/// Cohomology characters over every weight of the box, one finite character
/// per Cech degree. Weights outside the box are not examined, so the box
/// must be chosen to contain every support the caller cares about.
pub fn full_cohomology_character(
    fan: &Fan,
    divisor: &Divisor,
    bx: &CoordinateBox,
) -> Result<Vec<FiniteCharacter>> {
    guard(fan, divisor, bx.rank())?;
    let cover = build_cover(fan)?;
    let weights: Vec<Weight> = bx.iter().collect();
    let per_weight: Vec<Vec<usize>> = weights
        .par_iter()
        .map(|w| dims_from_cover(&cover, fan, divisor, w))
        .collect();
    let mut groups = vec![FiniteCharacter::zero(); cover.c];
    for (w, dims) in weights.iter().zip(per_weight) {
        for (q, d) in dims.into_iter().enumerate() {
            if d > 0 {
                groups[q].add_term(w.clone(), BigInt::from(d));
            }
        }
    }
    Ok(groups)
}

// filtration level of the intersection with the given common ray set: m
// minus the deepest layer among the limits of all faces
fn subset_level(
    fan: &Fan,
    rays: &[usize],
    chamber: &ChamberVector,
    filt: &Filtration,
    memo: &mut BTreeMap<Vec<usize>, usize>,
) -> Result<i64> {
    let m = filt.top();
    let mut deepest = 0usize;
    for k in 0..=rays.len() {
        for face in rays.iter().copied().combinations(k) {
            let layer = match memo.get(&face) {
                Some(&l) => l,
                None => {
                    let ci = bb_limit_cone(fan, &face, chamber)?;
                    let l = filt.layer_of(&point_id(ci)).ok_or_else(|| {
                        Error::FiltrationMismatch {
                            detail: format!("limit point p{ci} missing from the filtration"),
                        }
                    })?;
                    memo.insert(face.clone(), l);
                    l
                }
            };
            deepest = deepest.max(layer);
        }
    }
    Ok((m - deepest) as i64)
}

/// One page of the flow spectral sequence in a fixed weight: nonzero term
/// dimensions and the nonzero ranks of the differentials leaving each
/// position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    r: usize,
    dims: BTreeMap<(i64, i64), usize>,
    ranks: BTreeMap<(i64, i64), usize>,
}

impl SpectralPage {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim_at(&self, p: i64, q: i64) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn rank_at(&self, p: i64, q: i64) -> usize {
        self.ranks.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), usize> {
        &self.dims
    }

    pub fn differentials(&self) -> &BTreeMap<(i64, i64), usize> {
        &self.ranks
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&(p, q), &d)| if (p + q).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

impl Serialize for SpectralPage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            p: i64,
            q: i64,
            dim: usize,
        }
        #[derive(Serialize)]
        struct Diff {
            p: i64,
            q: i64,
            rank: usize,
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("r", &self.r)?;
        let entries: Vec<Entry> = self
            .dims
            .iter()
            .map(|(&(p, q), &dim)| Entry { p, q, dim })
            .collect();
        map.serialize_entry("entries", &entries)?;
        let diffs: Vec<Diff> = self
            .ranks
            .iter()
            .map(|(&(p, q), &rank)| Diff { p, q, rank })
            .collect();
        map.serialize_entry("differentials", &diffs)?;
        map.end()
    }
}

/// Pages E_0 .. E_{m+1} of the spectral sequence of the flow filtration in
/// one weight, where m is the top filtration layer. The chamber vector is
/// part of the input because it both orients the flow digraph and selects
/// the limit cones that grade the cover; the filtration itself is derived.
/// Differentials vanish for r > m, so the last page returned is stable.
pub fn spectral_pages(
    fan: &Fan,
    divisor: &Divisor,
    v: &[i64],
    weight: &Weight,
) -> Result<Vec<SpectralPage>> {
    guard(fan, divisor, weight.rank())?;
    let ds = dataset_from_fan(fan, divisor)?;
    let chamber = validate_chamber(&ds, v)?;
    let filt = build_filtration(&flow_digraph_from_fan(fan, v)?)?;
    let m = filt.top() as i64;
    let cover = build_cover(fan)?;
    let c = cover.c;
    let bases = bases_for(&cover, fan, divisor, weight);

    let mut memo = BTreeMap::new();
    let mut levels: Vec<Vec<i64>> = Vec::with_capacity(c);
    for (n, basis) in bases.iter().enumerate() {
        let mut lv = Vec::with_capacity(basis.len());
        for &i in basis {
            lv.push(subset_level(
                fan,
                &cover.degrees[n][i].1,
                &chamber,
                &filt,
                &mut memo,
            )?);
        }
        levels.push(lv);
    }

    let empty_mat: Mat = Vec::new();
    let dmats: Vec<Mat> = (0..c)
        .map(|n| {
            let codomain: &[usize] = bases.get(n + 1).map_or(&[], Vec::as_slice);
            cech_matrix(&cover, n, &bases[n], codomain)
        })
        .collect();

    let cdim = |n: i64| -> usize {
        if n < 0 || n >= c as i64 {
            0
        } else {
            bases[n as usize].len()
        }
    };
    let dmat = |n: i64| -> &Mat {
        if n < 0 || n >= c as i64 {
            &empty_mat
        } else {
            &dmats[n as usize]
        }
    };
    let filt_space = |p: i64, n: i64| -> Subspace {
        let dim = cdim(n);
        if dim == 0 {
            return Subspace::zero(0);
        }
        let rows: Mat = levels[n as usize]
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l >= p)
            .map(|(i, _)| {
                let mut row = vec![BigInt::zero(); dim];
                row[i] = BigInt::one();
                row
            })
            .collect();
        Subspace::from_rows(dim, rows)
    };
    // Z_r^{pq} = F^p C^n meet d^{-1} F^{p+r} C^{n+1}, with Z_{-1} read as Z_0
    let z = |r: i64, p: i64, q: i64| -> Subspace {
        let n = p + q;
        if cdim(n) == 0 {
            return Subspace::zero(0);
        }
        let rr = r.max(0);
        filt_space(p, n).intersect(&filt_space(p + rr, n + 1).preimage(dmat(n)))
    };
    let e_dim = |r: i64, p: i64, q: i64| -> usize {
        let zr = z(r, p, q);
        if zr.dim() == 0 {
            return 0;
        }
        let n = p + q;
        let den = z(r - 1, p + 1, q - 1)
            .sum(&z(r - 1, p - r + 1, q + r - 2).apply(dmat(n - 1), cdim(n)));
        debug_assert_eq!(den.sum(&zr).dim(), zr.dim(), "denominator sits inside Z_r");
        zr.dim() - den.dim()
    };
    let d_rank = |r: i64, p: i64, q: i64| -> usize {
        let zr = z(r, p, q);
        if zr.dim() == 0 {
            return 0;
        }
        let n = p + q;
        let dz = zr.apply(dmat(n), cdim(n + 1));
        let target_den = z(r - 1, p + r + 1, q - r)
            .sum(&z(r - 1, p + 1, q - 1).apply(dmat(n), cdim(n + 1)));
        dz.sum(&target_den).dim() - target_den.dim()
    };

    let mut pages = Vec::new();
    for r in 0..=(m + 1) {
        let mut dims = BTreeMap::new();
        let mut ranks = BTreeMap::new();
        for p in 0..=m {
            for n in 0..c as i64 {
                let q = n - p;
                let dim = e_dim(r, p, q);
                if dim > 0 {
                    dims.insert((p, q), dim);
                }
                let rank = d_rank(r, p, q);
                if rank > 0 {
                    ranks.insert((p, q), rank);
                }
            }
        }
        pages.push(SpectralPage {
            r: r as usize,
            dims,
            ranks,
        });
    }
    Ok(pages)
}
