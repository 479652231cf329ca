//! Exact integer linear algebra for the small matrices that show up in
//! per-weight Cech complexes: fraction-free reduced echelon form, ranks,
//! kernels, and the subspace lattice (sum, intersection, image, preimage).
//! Rows are primitive integer vectors; a subspace is identified with the
//! rational span of its rows, so the echelon form is canonical.

// elimination updates two rows at once; indexed loops are the clear form
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Row = Vec<BigInt>;
pub type Mat = Vec<Row>;

pub fn mat_from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose(mat: &Mat) -> Mat {
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| (0..rows).map(|r| mat[r][c].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|c| (0..inner).map(|k| &row[k] * &b[k][c]).sum())
                .collect()
        })
        .collect()
}

// divide out the row gcd and make the leading entry positive
fn normalize_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return;
    }
    if row
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false)
    {
        g = -g;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// In-place reduced echelon form over Q with primitive integer rows; zero
/// rows are dropped. Returns the rank. The result is the canonical basis of
/// the row space.
pub fn rref(mat: &mut Mat) -> usize {
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pr);
        normalize_row(&mut mat[rank]);
        let pivot = mat[rank][col].clone();
        for r in 0..rows {
            if r == rank || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in 0..cols {
                let v = &mat[r][c] * &pivot - &factor * &mat[rank][c];
                mat[r][c] = v;
            }
            normalize_row(&mut mat[r]);
        }
        rank += 1;
    }
    mat.retain(|r| r.iter().any(|x| !x.is_zero()));
    debug_assert_eq!(mat.len(), rank);
    rank
}

pub fn rank_of(mut mat: Mat) -> usize {
    rref(&mut mat)
}

/// Null space {x : M x = 0}, returned as canonical basis rows of length
/// `cols`. The column count is explicit so that matrices with no rows keep
/// their domain.
pub fn nullspace(mat: &Mat, cols: usize) -> Mat {
    debug_assert!(mat.iter().all(|r| r.len() == cols));
    let mut m = mat.clone();
    rref(&mut m);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut pivots = Vec::new();
    for (r, row) in m.iter().enumerate() {
        let p = row.iter().position(|x| !x.is_zero()).expect("no zero rows");
        pivot_of_col[p] = Some(r);
        pivots.push(p);
    }
    let lcm = m
        .iter()
        .zip(&pivots)
        .fold(BigInt::one(), |acc, (row, &p)| acc.lcm(&row[p]));
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_of_col[f].is_some() {
            continue;
        }
        let mut x = vec![BigInt::zero(); cols];
        x[f] = lcm.clone();
        for (r, row) in m.iter().enumerate() {
            let p = pivots[r];
            if !row[f].is_zero() {
                x[p] = -(&lcm / &row[p]) * &row[f];
            }
        }
        normalize_row(&mut x);
        basis.push(x);
    }
    rref(&mut basis);
    basis
}

/// Left kernel {u : u M = 0}, as basis rows of length #rows.
pub fn left_kernel(mat: &Mat) -> Mat {
    nullspace(&transpose(mat), mat.len())
}

/// Fraction-free determinant (Bareiss).
pub fn det(mat: &Mat) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(mat.iter().all(|r| r.len() == n));
    let mut m = mat.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(sw) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Inverse of an integer matrix with determinant +-1, via the adjugate.
pub fn inverse_unimodular(mat: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = mat.len();
    let m = mat_from_i64(mat);
    let d = det(&m);
    if !d.magnitude().is_one() {
        return None;
    }
    let minor = |skip_r: usize, skip_c: usize| -> BigInt {
        let sub: Mat = (0..n)
            .filter(|&r| r != skip_r)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != skip_c)
                    .map(|c| m[r][c].clone())
                    .collect()
            })
            .collect();
        det(&sub)
    };
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            // adj[j][i] = (-1)^{i+j} minor(i,j); divide by det = +-1
            let mut cof = minor(i, j);
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            let entry = &cof * &d; // dividing by +-1 equals multiplying
            inv[j][i] = i64::try_from(&entry).expect("unimodular inverse entry fits i64");
        }
    }
    Some(inv)
}

/// A rational subspace of Z^ambient tensor Q, in canonical echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: identity(ambient),
        }
    }

    pub fn from_rows(ambient: usize, mut rows: Mat) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        rref(&mut rows);
        Subspace {
            ambient,
            basis: rows,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        debug_assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_rows(self.ambient, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        debug_assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        // (u,v) with u*A + v*B = 0 <=> u*A = -v*B lies in both spans
        let mut stacked = self.basis.clone();
        stacked.extend(other.basis.iter().cloned());
        let kernel = left_kernel(&stacked);
        let rows: Mat = kernel
            .iter()
            .map(|uv| {
                (0..self.ambient)
                    .map(|c| {
                        (0..self.dim())
                            .map(|k| &uv[k] * &self.basis[k][c])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Subspace::from_rows(self.ambient, rows)
    }

    /// Image under the linear map x -> x * d into Q^target (rows of d are
    /// images of basis vectors of the domain). The target dimension is
    /// explicit so the zero domain keeps its codomain.
    pub fn apply(&self, d: &Mat, target: usize) -> Subspace {
        debug_assert_eq!(d.len(), self.ambient);
        debug_assert!(d.iter().all(|r| r.len() == target));
        if self.ambient == 0 {
            return Subspace::zero(target);
        }
        Subspace::from_rows(target, mat_mul(&self.basis, d))
    }

    /// Preimage {x : x * d lies in self} of this subspace under x -> x * d.
    pub fn preimage(&self, d: &Mat) -> Subspace {
        let domain = d.len();
        debug_assert!(d.iter().all(|r| r.len() == self.ambient));
        // (x, y) with x*d + y*basis = 0 projects onto the preimage
        let mut stacked = d.clone();
        stacked.extend(self.basis.iter().cloned());
        let kernel = left_kernel(&stacked);
        let rows: Mat = kernel.iter().map(|xy| xy[..domain].to_vec()).collect();
        Subspace::from_rows(domain, rows)
    }

    pub fn contains(&self, vec: &Row) -> bool {
        debug_assert_eq!(vec.len(), self.ambient);
        let mut rows = self.basis.clone();
        rows.push(vec.clone());
        rank_of(rows) == self.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> Mat {
        mat_from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    // independent oracle: plain Gaussian elimination over BigRational
    fn rational_rank(mat: &Mat) -> usize {
        let mut a: Vec<Vec<BigRational>> = mat
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
            .collect();
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let inv = a[rank][col].recip();
            for c in 0..cols {
                let v = &a[rank][c] * &inv;
                a[rank][c] = v;
            }
            for r in 0..rows {
                if r != rank && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..cols {
                        let v = &a[r][c] - &f * &a[rank][c];
                        a[r][c] = v;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    fn random_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
        (0..rows)
            .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect())
            .collect()
    }

    #[test]
    fn rref_canonical_form() {
        let mut a = m(&[&[2, 4, 0], &[1, 2, 1], &[3, 6, 1]]);
        let rank = rref(&mut a);
        assert_eq!(rank, 2);
        assert_eq!(a, m(&[&[1, 2, 0], &[0, 0, 1]]));
    }

    #[test]
    fn rank_matches_rational_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let a = random_mat(&mut rng, 5, 7);
            assert_eq!(rank_of(a.clone()), rational_rank(&a));
        }
    }

    #[test]
    fn nullspace_annihilates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let a = random_mat(&mut rng, 4, 6);
            let ns = nullspace(&a, 6);
            assert_eq!(ns.len(), 6 - rank_of(a.clone()));
            for x in &ns {
                for row in &a {
                    let dot: BigInt = row.iter().zip(x).map(|(p, q)| p * q).sum();
                    assert!(dot.is_zero());
                }
            }
        }
    }

    #[test]
    fn left_kernel_annihilates() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let lk = left_kernel(&a);
        assert_eq!(lk.len(), 1);
        for u in &lk {
            let prod: Vec<BigInt> = (0..2)
                .map(|c| (0..3).map(|r| &u[r] * &a[r][c]).sum())
                .collect();
            assert!(prod.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn modular_law_for_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let a = Subspace::from_rows(5, random_mat(&mut rng, 3, 5));
            let b = Subspace::from_rows(5, random_mat(&mut rng, 3, 5));
            let sum = a.sum(&b);
            let cap = a.intersect(&b);
            assert_eq!(sum.dim() + cap.dim(), a.dim() + b.dim());
            for row in cap.basis() {
                assert!(a.contains(row) && b.contains(row));
            }
        }
    }

    #[test]
    fn preimage_and_image_are_adjoint_on_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let d = random_mat(&mut rng, 4, 3);
            let s = Subspace::from_rows(3, random_mat(&mut rng, 2, 3));
            let pre = s.preimage(&d);
            // every preimage vector really maps into s
            for x in pre.basis() {
                let img: Vec<BigInt> = (0..3)
                    .map(|c| (0..4).map(|k| &x[k] * &d[k][c]).sum())
                    .collect();
                assert!(s.contains(&img));
            }
            // rank-nullity: dim pre = dim ker d + dim (im d cap s)
            let ker = Subspace::from_rows(4, left_kernel(&d));
            let im = Subspace::full(4).apply(&d, 3);
            assert_eq!(pre.dim(), ker.dim() + im.intersect(&s).dim());
        }
    }

    #[test]
    fn degenerate_dimensions_are_preserved() {
        // maps in and out of the zero space keep their nonzero side
        let d: Mat = vec![vec![], vec![], vec![]];
        assert_eq!(left_kernel(&d).len(), 3);
        assert_eq!(nullspace(&Vec::new(), 4).len(), 4);
        let pre = Subspace::zero(0).preimage(&d);
        assert_eq!(pre.dim(), 3);
        let img = Subspace::zero(0).apply(&Vec::new(), 2);
        assert_eq!((img.ambient(), img.dim()), (2, 0));
    }

    #[test]
    fn determinant_values() {
        assert_eq!(det(&m(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            det(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])),
            BigInt::from(0)
        );
        assert_eq!(
            det(&m(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]])),
            BigInt::from(-90)
        );
    }

    #[test]
    fn unimodular_inverse_round_trip() {
        let a = vec![vec![0i64, -1], vec![1, -1]];
        let inv = inverse_unimodular(&a).unwrap();
        assert_eq!(inv, vec![vec![-1, 1], vec![-1, 0]]);
        assert!(inverse_unimodular(&[vec![2, 0], vec![0, 1]]).is_none());
        let id = mat_mul(&mat_from_i64(&a), &mat_from_i64(&inv));
        assert_eq!(id, identity(2));
    }
}
