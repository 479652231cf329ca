//! Finite root systems of types A1..A4, B2, G2 and their flag manifolds:
//! Weyl groups with Bruhat covers, the torus fixed-point dataset of G/B
//! twisted by a line bundle, Verma-type characters, Freudenthal weight
//! multiplicities, and the cohomology of the line bundle.
//!
//! Weights live in fundamental-weight coordinates throughout; simple root
//! j is column j of the Cartan matrix. Roots additionally carry their
//! simple-root coordinates, in which positivity and inner products against
//! weights are plain integer arithmetic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::character::FiniteCharacter;
use crate::error::Error;
use crate::fixed_point::{FixedPointDataset, FixedPointRecord};
use crate::lattice::Weight;
use crate::linalg;
use crate::rational::{PolarizedRational, Sign};
use crate::Result;

/// A positive root in both coordinate systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub fw: Weight,
    pub rc: Vec<i64>,
}

/// A Weyl group element: a shortest word, its readable id ("e", "s1s2",
/// ...), the matrix acting on fundamental-weight coordinates, and the
/// Coxeter length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub id: String,
    pub word: Vec<usize>,
    pub mat: Vec<Vec<i64>>,
    pub length: usize,
}

#[derive(Debug)]
pub struct RootSystem {
    kind: char,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    sym: Vec<i64>,
    positive: Vec<Root>,
    weyl: Vec<WeylElement>,
    index: BTreeMap<Vec<Vec<i64>>, usize>,
    covers: Vec<(usize, usize)>,
    longest: usize,
    gram: Vec<Vec<BigRational>>,
    chamber: Vec<i64>,
}

fn mat_mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn mat_vec(m: &[Vec<i64>], w: &Weight) -> Weight {
    Weight(
        m.iter()
            .map(|row| row.iter().zip(&w.0).map(|(a, x)| a * x).sum())
            .collect(),
    )
}

fn word_id(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

// s_i: column i of the identity becomes e_i - col_i(A)
fn simple_matrix(cartan: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let rank = cartan.len();
    (0..rank)
        .map(|j| {
            (0..rank)
                .map(|k| {
                    let mut v = i64::from(j == k);
                    if k == i {
                        v -= cartan[j][i];
                    }
                    v
                })
                .collect()
        })
        .collect()
}

impl RootSystem {
    pub fn new(kind: char, rank: usize) -> Result<Self> {
        let (cartan, sym): (Vec<Vec<i64>>, Vec<i64>) = match (kind, rank) {
            ('A', 1..=4) => {
                let a = (0..rank)
                    .map(|i| {
                        (0..rank)
                            .map(|j| match i.abs_diff(j) {
                                0 => 2,
                                1 => -1,
                                _ => 0,
                            })
                            .collect()
                    })
                    .collect();
                (a, vec![1; rank])
            }
            ('B', 2) => (vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
            ('G', 2) => (vec![vec![2, -1], vec![-3, 2]], vec![3, 1]),
            _ => return Err(Error::UnsupportedRootSystem { kind, rank }),
        };

        let s_mats: Vec<Vec<Vec<i64>>> = (0..rank).map(|i| simple_matrix(&cartan, i)).collect();

        // positive roots: close the simples under the reflections, keeping
        // everything with nonnegative simple-root coordinates
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        let mut queue: VecDeque<Root> = VecDeque::new();
        let mut positive: Vec<Root> = Vec::new();
        for i in 0..rank {
            let fw = Weight((0..rank).map(|j| cartan[j][i]).collect());
            let mut rc = vec![0i64; rank];
            rc[i] = 1;
            seen.insert(fw.clone());
            queue.push_back(Root { fw: fw.clone(), rc: rc.clone() });
            positive.push(Root { fw, rc });
        }
        while let Some(root) = queue.pop_front() {
            for (i, s_mat) in s_mats.iter().enumerate() {
                let fw = mat_vec(s_mat, &root.fw);
                let mut rc = root.rc.clone();
                rc[i] -= root.fw.0[i];
                if rc.iter().all(|&c| c >= 0) && seen.insert(fw.clone()) {
                    queue.push_back(Root { fw: fw.clone(), rc: rc.clone() });
                    positive.push(Root { fw, rc });
                }
            }
        }
        positive.sort_by_key(|r| (r.rc.iter().sum::<i64>(), r.rc.clone()));
        let positive_fw: BTreeSet<Weight> = positive.iter().map(|r| r.fw.clone()).collect();

        // Weyl group by breadth-first closure under right multiplication
        let eye: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut weyl = vec![WeylElement {
            id: "e".to_string(),
            word: Vec::new(),
            mat: eye.clone(),
            length: 0,
        }];
        let mut by_mat: BTreeMap<Vec<Vec<i64>>, usize> = BTreeMap::new();
        by_mat.insert(eye, 0);
        let mut bfs: VecDeque<usize> = VecDeque::from([0]);
        while let Some(wi) = bfs.pop_front() {
            for (i, s_mat) in s_mats.iter().enumerate() {
                let mat = mat_mul_i64(&weyl[wi].mat, s_mat);
                if by_mat.contains_key(&mat) {
                    continue;
                }
                let mut word = weyl[wi].word.clone();
                word.push(i);
                by_mat.insert(mat.clone(), weyl.len());
                bfs.push_back(weyl.len());
                weyl.push(WeylElement {
                    id: word_id(&word),
                    length: word.len(),
                    word,
                    mat,
                });
            }
        }
        for w in &weyl {
            let inversions = positive
                .iter()
                .filter(|a| {
                    let img = mat_vec(&w.mat, &a.fw);
                    debug_assert!(
                        positive_fw.contains(&img) || positive_fw.contains(&img.neg()),
                        "Weyl images of roots are roots"
                    );
                    !positive_fw.contains(&img)
                })
                .count();
            debug_assert_eq!(inversions, w.length, "word length equals inversion count");
        }
        let longest = (0..weyl.len()).max_by_key(|&i| weyl[i].length).unwrap();
        debug_assert_eq!(weyl[longest].length, positive.len());

        // reflections, then Bruhat covers: w is covered by w*t one length up
        let mut reflections: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        for w in &weyl {
            let inv = linalg::inverse_unimodular(&w.mat).expect("Weyl matrices are unimodular");
            for s in &s_mats {
                reflections.insert(mat_mul_i64(&mat_mul_i64(&w.mat, s), &inv));
            }
        }
        debug_assert_eq!(reflections.len(), positive.len());
        let mut covers = Vec::new();
        for (wi, w) in weyl.iter().enumerate() {
            for t in &reflections {
                let target = mat_mul_i64(&w.mat, t);
                let wj = by_mat[&target];
                if weyl[wj].length == w.length + 1 {
                    covers.push((wi, wj));
                }
            }
        }
        covers.sort_unstable();

        // Gram matrix of the fundamental weights and the dominant vector
        let det = linalg::det(&linalg::mat_from_i64(&cartan));
        let inv_a: Vec<Vec<BigRational>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let minor: Vec<Vec<BigInt>> = (0..rank)
                            .filter(|&r| r != j)
                            .map(|r| {
                                (0..rank)
                                    .filter(|&c| c != i)
                                    .map(|c| BigInt::from(cartan[r][c]))
                                    .collect()
                            })
                            .collect();
                        let mut cof = linalg::det(&minor);
                        if (i + j) % 2 == 1 {
                            cof = -cof;
                        }
                        BigRational::new(cof, det.clone())
                    })
                    .collect()
            })
            .collect();
        let gram: Vec<Vec<BigRational>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| &inv_a[j][i] * BigRational::from(BigInt::from(sym[j])))
                    .collect()
            })
            .collect();
        for (i, row) in gram.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                debug_assert_eq!(*entry, gram[j][i], "symmetrized form is symmetric");
            }
        }

        // v with <alpha_j, v> = 1 for every simple root, cleared to integers
        let mut chamber: Vec<i64> = (0..rank)
            .map(|j| {
                let replaced: Vec<Vec<BigInt>> = (0..rank)
                    .map(|r| {
                        (0..rank)
                            .map(|c| {
                                if c == j {
                                    BigInt::one()
                                } else {
                                    BigInt::from(cartan[c][r])
                                }
                            })
                            .collect()
                    })
                    .collect();
                i64::try_from(&linalg::det(&replaced)).expect("chamber entry fits i64")
            })
            .collect();
        if det.is_negative() {
            for x in &mut chamber {
                *x = -*x;
            }
        }
        let g = chamber.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        for x in &mut chamber {
            *x /= g;
        }
        for root in &positive {
            debug_assert!(root.fw.dot(&chamber) > 0, "chamber is dominant");
        }

        Ok(RootSystem {
            kind,
            rank,
            cartan,
            sym,
            positive,
            weyl,
            index: by_mat,
            covers,
            longest,
            gram,
            chamber,
        })
    }

    pub fn kind(&self) -> char {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn weyl(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn element(&self, id: &str) -> Option<&WeylElement> {
        self.weyl.iter().find(|w| w.id == id)
    }

    pub fn longest(&self) -> &WeylElement {
        &self.weyl[self.longest]
    }

    /// Bruhat cover pairs (shorter, longer) as indices into `weyl`. With
    /// the dominant chamber these are exactly the flow edges of G/B.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Integer vector pairing to 1 with every simple root, hence strictly
    /// positively with every positive root.
    pub fn dominant_chamber(&self) -> Vec<i64> {
        self.chamber.clone()
    }

    pub fn act(&self, w: &WeylElement, lam: &Weight) -> Weight {
        mat_vec(&w.mat, lam)
    }

    pub fn simple_reflection(&self, lam: &Weight, i: usize) -> Weight {
        Weight(
            (0..self.rank)
                .map(|j| lam.0[j] - lam.0[i] * self.cartan[j][i])
                .collect(),
        )
    }

    /// Inner product of two weights in fundamental-weight coordinates,
    /// normalized so short roots of G2 have square length 2.
    pub fn inner(&self, x: &Weight, y: &Weight) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += &self.gram[i][j] * BigRational::from(BigInt::from(x.0[i] * y.0[j]));
            }
        }
        acc
    }

    /// (x, alpha) as an integer; zero exactly when the coroot pairing is
    /// zero, positive exactly when it is positive.
    pub fn pairing(&self, x: &Weight, alpha: &Root) -> i64 {
        alpha
            .rc
            .iter()
            .zip(&self.sym)
            .zip(&x.0)
            .map(|((c, d), v)| c * d * v)
            .sum()
    }

    /// Simple-root coordinates of a weight in the root lattice.
    fn rc_coords(&self, fw: &Weight) -> Vec<i64> {
        // solve A rc = fw by Cramer; entries must come out integral
        let det = linalg::det(&linalg::mat_from_i64(&self.cartan));
        (0..self.rank)
            .map(|j| {
                let replaced: Vec<Vec<BigInt>> = (0..self.rank)
                    .map(|r| {
                        (0..self.rank)
                            .map(|c| {
                                if c == j {
                                    BigInt::from(fw.0[r])
                                } else {
                                    BigInt::from(self.cartan[r][c])
                                }
                            })
                            .collect()
                    })
                    .collect();
                let num = linalg::det(&replaced);
                let (q, r) = num.div_rem(&det);
                debug_assert!(r.is_zero(), "weight lies in the root lattice");
                i64::try_from(&q).expect("root coordinate fits i64")
            })
            .collect()
    }

    /// Walk a weight into the dominant chamber by reflecting negative
    /// coordinates; the step count is the number of inverted positive
    /// roots, and a zero coordinate at the end means the weight is
    /// singular (some coroot pairing vanishes on the whole orbit). The
    /// recorded generators multiply to the walking Weyl element.
    fn orbit_rep(&self, nu: &Weight) -> (Weight, Vec<usize>, bool) {
        let inversions = self
            .positive
            .iter()
            .filter(|a| self.pairing(nu, a) < 0)
            .count();
        let mut cur = nu.clone();
        let mut gens = Vec::new();
        while let Some(i) = (0..self.rank).find(|&i| cur.0[i] < 0) {
            cur = self.simple_reflection(&cur, i);
            gens.push(i);
            assert!(gens.len() <= self.positive.len(), "dominant walk terminates");
        }
        debug_assert_eq!(gens.len(), inversions);
        let singular = cur.0.contains(&0);
        (cur, gens, singular)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantRep {
    /// Id of the walking element w with w(lambda+rho) dominant.
    pub word: String,
    /// w(lambda+rho) - rho; the highest weight surviving in cohomology.
    pub dominant: Weight,
    /// l(w); the degree the surviving irreducible lands in.
    pub length: usize,
    pub singular: bool,
}

/// The rho-shifted dominant representative of lambda: the Weyl element w
/// with w(lambda+rho) dominant, the weight w(lambda+rho)-rho, and l(w).
/// Singular means lambda+rho is fixed by a reflection, killing all
/// cohomology of the lambda line bundle.
pub fn dominant_rep(sys: &RootSystem, lambda: &Weight) -> Result<DominantRep> {
    check_rank(sys, lambda)?;
    let shifted = lambda.add(&sys.rho());
    let (dom, gens, singular) = sys.orbit_rep(&shifted);
    // gens applied left to right: w = s_{g_k} ... s_{g_1}
    let mut mat: Vec<Vec<i64>> = (0..sys.rank)
        .map(|i| (0..sys.rank).map(|j| i64::from(i == j)).collect())
        .collect();
    for &i in gens.iter().rev() {
        mat = mat_mul_i64(&mat, &simple_matrix(&sys.cartan, i));
    }
    let w = &sys.weyl[sys.index[&mat]];
    debug_assert!(singular || w.length == gens.len());
    Ok(DominantRep {
        word: w.id.clone(),
        dominant: dom.sub(&sys.rho()),
        length: w.length,
        singular,
    })
}

fn check_rank(sys: &RootSystem, lam: &Weight) -> Result<()> {
    if lam.rank() != sys.rank() {
        return Err(Error::RankMismatch {
            expected: sys.rank(),
            found: lam.rank(),
        });
    }
    Ok(())
}

/// Fixed points of the torus on G/B twisted by the weight-lambda line: one
/// point per Weyl element, isotropy weights w(Delta+), fiber w(lambda),
/// edges the Bruhat covers. The cover edges are the gradient flow of the
/// dominant chamber, under which the identity is the open repelling cell.
pub fn flag_dataset(sys: &RootSystem, lambda: &Weight) -> Result<FixedPointDataset> {
    check_rank(sys, lambda)?;
    let points = sys
        .weyl()
        .iter()
        .map(|w| FixedPointRecord {
            id: w.id.clone(),
            weights: sys.positive_roots().iter().map(|a| sys.act(w, &a.fw)).collect(),
            fiber: FiniteCharacter::monomial(sys.act(w, lambda), 1),
        })
        .collect();
    let edges = sys
        .covers()
        .iter()
        .map(|&(a, b)| (sys.weyl()[a].id.clone(), sys.weyl()[b].id.clone()))
        .collect();
    let ds = FixedPointDataset {
        rank: sys.rank(),
        ambient_dim: sys.positive_roots().len(),
        compact: true,
        points,
        edges: Some(edges),
    };
    ds.validate()?;
    Ok(ds)
}

fn lowering_denominators(sys: &RootSystem) -> Vec<Weight> {
    sys.positive_roots().iter().map(|a| a.fw.neg()).collect()
}

/// Character of the Verma module with highest weight lambda, polarized
/// against the dominant chamber: e^lambda over the product of
/// (1 - e^{-alpha}) for positive alpha.
pub fn verma_character(sys: &RootSystem, lambda: &Weight) -> Result<PolarizedRational> {
    check_rank(sys, lambda)?;
    PolarizedRational::try_new(
        FiniteCharacter::monomial(lambda.clone(), 1),
        lowering_denominators(sys),
        Sign::Minus,
        sys.dominant_chamber(),
    )
}

/// Character of the local cohomology of the lambda line along the cell of
/// w: the Verma-type series with highest term w(lambda+rho)-rho.
pub fn local_cohomology_character(
    sys: &RootSystem,
    lambda: &Weight,
    word: &str,
) -> Result<PolarizedRational> {
    check_rank(sys, lambda)?;
    let w = sys
        .element(word)
        .ok_or_else(|| Error::BadInput(format!("unknown Weyl element {word:?}")))?;
    let rho = sys.rho();
    let top = sys.act(w, &lambda.add(&rho)).sub(&rho);
    PolarizedRational::try_new(
        FiniteCharacter::monomial(top, 1),
        lowering_denominators(sys),
        Sign::Minus,
        sys.dominant_chamber(),
    )
}

/// The alternating sum of the local cohomology characters, one polarized
/// term per Weyl element: term w carries coefficient (-1)^{l(w)}.
pub fn euler_terms(sys: &RootSystem, lambda: &Weight) -> Result<Vec<PolarizedRational>> {
    check_rank(sys, lambda)?;
    let rho = sys.rho();
    let shifted = lambda.add(&rho);
    sys.weyl()
        .iter()
        .map(|w| {
            let top = sys.act(w, &shifted).sub(&rho);
            let coeff = if w.length % 2 == 0 { 1 } else { -1 };
            PolarizedRational::try_new(
                FiniteCharacter::monomial(top, coeff),
                lowering_denominators(sys),
                Sign::Minus,
                sys.dominant_chamber(),
            )
        })
        .collect()
}

/// Weight multiplicities of the irreducible representation with highest
/// weight lambda, by the Freudenthal recursion evaluated over dominant
/// weights and spread along Weyl orbits.
pub fn freudenthal_character(sys: &RootSystem, lambda: &Weight) -> Result<FiniteCharacter> {
    check_rank(sys, lambda)?;
    if lambda.0.iter().any(|&c| c < 0) {
        return Err(Error::NonDominant {
            weight: lambda.clone(),
        });
    }
    let rho = sys.rho();
    let lam_rho = lambda.add(&rho);
    let norm_top = sys.inner(&lam_rho, &lam_rho);

    // every weight of the representation is lambda minus a box-bounded
    // nonnegative root combination; the box comes from the lowest weight
    let lowest = sys.act(sys.longest(), lambda);
    let span = sys.rc_coords(&lambda.sub(&lowest));
    debug_assert!(span.iter().all(|&k| k >= 0));

    // dominant candidates ordered by depth below lambda
    let mut dominants: Vec<(i64, Vec<i64>, Weight)> = Vec::new();
    let mut c = vec![0i64; sys.rank()];
    loop {
        let drop = Weight(
            (0..sys.rank())
                .map(|j| (0..sys.rank()).map(|k| sys.cartan[j][k] * c[k]).sum())
                .collect(),
        );
        let nu = lambda.sub(&drop);
        if nu.0.iter().all(|&x| x >= 0) {
            dominants.push((c.iter().sum(), c.clone(), nu));
        }
        // odometer over the box
        let mut pos = 0;
        loop {
            if pos == sys.rank() {
                break;
            }
            c[pos] += 1;
            if c[pos] <= span[pos] {
                break;
            }
            c[pos] = 0;
            pos += 1;
        }
        if pos == sys.rank() {
            break;
        }
    }
    dominants.sort_by(|a, b| (a.0, &a.2).cmp(&(b.0, &b.2)));

    let mut table: BTreeMap<Weight, BigRational> = BTreeMap::new();
    for (depth, c, nu) in &dominants {
        if *depth == 0 {
            table.insert(nu.clone(), BigRational::one());
            continue;
        }
        let nu_rho = nu.add(&rho);
        let denom = &norm_top - sys.inner(&nu_rho, &nu_rho);
        debug_assert!(denom.is_positive(), "strictly below the highest weight");
        let mut acc = BigRational::zero();
        for alpha in sys.positive_roots() {
            let kmax = alpha
                .rc
                .iter()
                .zip(c)
                .filter(|(a, _)| **a > 0)
                .map(|(a, cj)| cj / a)
                .min()
                .unwrap_or(0);
            for k in 1..=kmax {
                let shifted = nu.add(&alpha.fw.scale(k));
                let (dom, _, _) = sys.orbit_rep(&shifted);
                let Some(m) = table.get(&dom) else {
                    continue;
                };
                acc += m * BigRational::from(BigInt::from(sys.pairing(&shifted, alpha)));
            }
        }
        let m = acc * BigRational::from(BigInt::from(2)) / denom;
        debug_assert!(m.is_integer());
        table.insert(nu.clone(), m);
    }

    let mut out = FiniteCharacter::zero();
    for (nu, m) in &table {
        if m.is_zero() {
            continue;
        }
        assert!(m.is_integer(), "Freudenthal multiplicities are integers");
        let mult = m.to_integer();
        let orbit: BTreeSet<Weight> = sys.weyl().iter().map(|w| sys.act(w, nu)).collect();
        for w in orbit {
            out.add_term(w, mult.clone());
        }
    }
    Ok(out)
}

/// Dimension of the irreducible with highest weight lambda by the Weyl
/// product formula; serves as an independent check on `freudenthal`.
pub fn weyl_dim(sys: &RootSystem, lambda: &Weight) -> Result<BigInt> {
    check_rank(sys, lambda)?;
    if lambda.0.iter().any(|&c| c < 0) {
        return Err(Error::NonDominant {
            weight: lambda.clone(),
        });
    }
    let rho = sys.rho();
    let lam_rho = lambda.add(&rho);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for alpha in sys.positive_roots() {
        num *= BigInt::from(sys.pairing(&lam_rho, alpha));
        den *= BigInt::from(sys.pairing(&rho, alpha));
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Both sides of the resolution identity, for inspection on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BggIdentity {
    pub holds: bool,
    /// Alternating sum of e^{w(lambda+rho)-rho} over the Weyl group.
    pub alternating_sum: FiniteCharacter,
    /// Irreducible character times the product of (1 - e^{-alpha}).
    pub resolved_product: FiniteCharacter,
}

/// Check of the Weyl-module resolution at the character level: the
/// alternating sum of e^{w(lambda+rho)-rho} equals the irreducible
/// character times the product of (1 - e^{-alpha}).
pub fn bgg_alternating_identity(sys: &RootSystem, lambda: &Weight) -> Result<BggIdentity> {
    let ch = freudenthal_character(sys, lambda)?;
    let rho = sys.rho();
    let shifted = lambda.add(&rho);
    let mut lhs = FiniteCharacter::zero();
    for w in sys.weyl() {
        let mu = sys.act(w, &shifted).sub(&rho);
        lhs.add_term(mu, BigInt::from(if w.length % 2 == 0 { 1 } else { -1 }));
    }
    let mut rhs = ch;
    for alpha in sys.positive_roots() {
        rhs = rhs.mul(&FiniteCharacter::one_minus_exp(&alpha.fw.neg()))?;
    }
    Ok(BggIdentity {
        holds: lhs == rhs,
        alternating_sum: lhs,
        resolved_product: rhs,
    })
}

/// Cohomology of the lambda line bundle on G/B, one character per degree
/// 0..dim G/B: zero everywhere when lambda+rho is singular, otherwise a
/// single irreducible placed in the degree walked by lambda+rho.
pub fn bott_cohomology(sys: &RootSystem, lambda: &Weight) -> Result<Vec<FiniteCharacter>> {
    let n = sys.positive_roots().len();
    let mut groups = vec![FiniteCharacter::zero(); n + 1];
    let rep = dominant_rep(sys, lambda)?;
    if !rep.singular {
        groups[rep.length] = freudenthal_character(sys, &rep.dominant)?;
    }
    Ok(groups)
}

/// The Bruhat covers as a flow digraph on the Weyl element ids, oriented
/// from shorter to longer words; its layering recovers l(w).
pub fn bruhat_cover_digraph(sys: &RootSystem) -> crate::flow::FlowDigraph {
    let vertices = sys.weyl().iter().map(|w| w.id.clone()).collect();
    let edges = sys
        .covers()
        .iter()
        .map(|&(a, b)| (sys.weyl()[a].id.clone(), sys.weyl()[b].id.clone()))
        .collect();
    crate::flow::FlowDigraph::new(vertices, edges).expect("cover ids are the vertex set")
}
