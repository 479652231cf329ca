//! Discrete fixed-point formulas. Every fixed point contributes one polarized
//! series: the product of its fiber character with one geometric factor per
//! isotropy weight, all expanded toward the same side of the chamber. The
//! t-degree records the polarizing index; setting t = -1 collapses the graded
//! series to the index character.

use crate::character::FiniteCharacter;
use crate::fixed_point::{
    polarize_record, ChamberVector, FixedPointDataset, FixedPointRecord,
};
use crate::flow::{Filtration, FlowDigraph};
use crate::graded::{divide_by_one_plus_t, GradedCharacter};
use crate::lattice::{CoordinateBox, Weight};
use crate::rational::{PolarizedRational, Sign};
use crate::{Error, Result};
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    CompactSupport,
    Ordinary,
}

/// Per-point factor of the compact-support formula: numerator
/// fiber * e^{sum of plus-side weights}, one denominator per weight, all on
/// the plus side; contributes at t-degree nu_C.
fn cs_factor(
    ds: &FixedPointDataset,
    r: &FixedPointRecord,
    v: &ChamberVector,
) -> Result<(usize, PolarizedRational)> {
    let pol = polarize_record(r, v);
    let mut shift = Weight::zero(ds.rank);
    for w in &pol.weights_c {
        shift = shift.add(w);
    }
    let num = r.fiber.mul(&FiniteCharacter::monomial(shift, 1))?;
    let mut dens = pol.weights_c.clone();
    dens.extend(pol.weights_minus_c.iter().map(Weight::neg));
    let term = PolarizedRational::try_new(num, dens, Sign::Plus, v.coords().to_vec())?;
    Ok((pol.nu_c, term))
}

/// Ordinary-cohomology factor: numerator fiber * e^{sum of minus-side
/// weights}, denominators on the minus side; contributes at t-degree n - nu_C.
fn ordinary_factor(
    ds: &FixedPointDataset,
    r: &FixedPointRecord,
    v: &ChamberVector,
) -> Result<(usize, PolarizedRational)> {
    let pol = polarize_record(r, v);
    let mut shift = Weight::zero(ds.rank);
    for w in &pol.weights_minus_c {
        shift = shift.add(w);
    }
    let num = r.fiber.mul(&FiniteCharacter::monomial(shift, 1))?;
    let mut dens = pol.weights_minus_c.clone();
    dens.extend(pol.weights_c.iter().map(Weight::neg));
    let term = PolarizedRational::try_new(num, dens, Sign::Minus, v.coords().to_vec())?;
    Ok((ds.ambient_dim - pol.nu_c, term))
}

fn factor(
    ds: &FixedPointDataset,
    r: &FixedPointRecord,
    v: &ChamberVector,
    variant: Variant,
) -> Result<(usize, PolarizedRational)> {
    match variant {
        Variant::CompactSupport => cs_factor(ds, r, v),
        Variant::Ordinary => ordinary_factor(ds, r, v),
    }
}

fn series(ds: &FixedPointDataset, v: &ChamberVector, variant: Variant) -> Result<GradedCharacter> {
    let mut g = GradedCharacter::new();
    for r in &ds.points {
        let (deg, term) = factor(ds, r, v, variant)?;
        g.add_at(deg as i64, term)?;
    }
    Ok(g)
}

pub fn morse_series_cs(ds: &FixedPointDataset, v: &ChamberVector) -> Result<GradedCharacter> {
    series(ds, v, Variant::CompactSupport)
}

pub fn morse_series(ds: &FixedPointDataset, v: &ChamberVector) -> Result<GradedCharacter> {
    series(ds, v, Variant::Ordinary)
}

fn index_terms(
    ds: &FixedPointDataset,
    v: &ChamberVector,
    variant: Variant,
) -> Result<Vec<PolarizedRational>> {
    let mut terms = Vec::with_capacity(ds.points.len());
    for r in &ds.points {
        let (deg, term) = factor(ds, r, v, variant)?;
        terms.push(if deg % 2 == 0 { term } else { term.negate() });
    }
    Ok(terms)
}

/// Alternating sum of compact-support factors, kept as unsimplified terms.
pub fn index_cs(ds: &FixedPointDataset, v: &ChamberVector) -> Result<Vec<PolarizedRational>> {
    index_terms(ds, v, Variant::CompactSupport)
}

/// Alternating sum of ordinary factors.
pub fn index(ds: &FixedPointDataset, v: &ChamberVector) -> Result<Vec<PolarizedRational>> {
    index_terms(ds, v, Variant::Ordinary)
}

#[derive(Clone, Debug, PartialEq)]
pub struct E1Page {
    pub variant: Variant,
    pub degenerate: bool,
    entries: BTreeMap<(i64, i64), PolarizedRational>,
}

impl E1Page {
    pub fn entries(&self) -> &BTreeMap<(i64, i64), PolarizedRational> {
        &self.entries
    }

    pub fn at(&self, p: i64, q: i64) -> Option<&PolarizedRational> {
        self.entries.get(&(p, q))
    }

    pub fn expand_in_box(&self, bx: &CoordinateBox) -> Result<BTreeMap<(i64, i64), FiniteCharacter>> {
        let mut out = BTreeMap::new();
        for (&pq, v) in &self.entries {
            let ch = v.expand_in_box(bx)?;
            if !ch.is_zero() {
                out.insert(pq, ch);
            }
        }
        Ok(out)
    }
}

impl Serialize for E1Page {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            p: i64,
            q: i64,
            value: &'a PolarizedRational,
        }
        struct Entries<'a>(&'a E1Page);
        impl<'a> Serialize for Entries<'a> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.entries.len()))?;
                for (&(p, q), value) in &self.0.entries {
                    seq.serialize_element(&Entry { p, q, value })?;
                }
                seq.end()
            }
        }
        let mut st = s.serialize_struct("E1Page", 3)?;
        st.serialize_field("variant", &self.variant)?;
        st.serialize_field("degenerate", &self.degenerate)?;
        st.serialize_field("entries", &Entries(self))?;
        st.end()
    }
}

/// Place each fixed point on the first page of the filtration spectral
/// sequence. Compact support positions x at p = m - layer(x); the ordinary
/// variant at p = layer(x). In both cases p+q is the point's contributing
/// degree, so q measures the failure of the layer to equal that degree.
pub fn e1_page(
    ds: &FixedPointDataset,
    v: &ChamberVector,
    filt: &Filtration,
    variant: Variant,
) -> Result<E1Page> {
    let g = FlowDigraph::from_dataset(ds);
    filt.validate_against(&g)?;
    let m = filt.top() as i64;
    let mut entries: BTreeMap<(i64, i64), PolarizedRational> = BTreeMap::new();
    for r in &ds.points {
        let layer = filt
            .layer_of(&r.id)
            .expect("filtration validated against dataset") as i64;
        let (deg, term) = factor(ds, r, v, variant)?;
        let p = match variant {
            Variant::CompactSupport => m - layer,
            Variant::Ordinary => layer,
        };
        let q = deg as i64 - p;
        match entries.remove(&(p, q)) {
            None => {
                entries.insert((p, q), term);
            }
            Some(prev) => {
                let merged =
                    crate::rational::sum_over_common_denominator(&[prev, term])?;
                if !merged.is_zero() {
                    entries.insert((p, q), merged);
                }
            }
        }
    }
    let degenerate = entries.keys().all(|&(_, q)| q == 0);
    Ok(E1Page {
        variant,
        degenerate,
        entries,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MorseReport {
    pub lhs: GradedCharacter,
    pub rhs: GradedCharacter,
    #[serde(rename = "Q")]
    pub q: GradedCharacter,
    pub divisible: bool,
    pub nonneg: bool,
}

/// Box-certified Morse inequality check: (series - candidate) must factor as
/// (1+t) * Q with Q >= 0 coefficientwise within the box. The certificate is
/// relative to the box; nothing is claimed about weights outside it.
pub fn verify_morse(
    ds: &FixedPointDataset,
    v: &ChamberVector,
    candidate: &BTreeMap<i64, FiniteCharacter>,
    variant: Variant,
    bx: &CoordinateBox,
) -> Result<MorseReport> {
    let lhs = series(ds, v, variant)?.expand_in_box(bx)?;
    let rhs = GradedCharacter::from_finite_entries(
        candidate
            .iter()
            .map(|(&d, ch)| (d, ch.restrict_to_box(bx))),
    );
    let diff = lhs.sub_finite(&rhs)?;
    match divide_by_one_plus_t(&diff, bx) {
        Ok(q) => {
            let nonneg = q.is_nonnegative()?;
            Ok(MorseReport {
                lhs,
                rhs,
                q,
                divisible: true,
                nonneg,
            })
        }
        Err(Error::NonzeroRemainder { .. }) => Ok(MorseReport {
            lhs,
            rhs,
            q: GradedCharacter::new(),
            divisible: false,
            nonneg: false,
        }),
        Err(e) => Err(e),
    }
}

/// One non-isolated fixed component, entered through its own cohomology
/// series: n_alpha is the component dimension, nu_c its polarizing index,
/// and series the user-computed q -> character table.
#[derive(Clone, Debug, Deserialize)]
pub struct ComponentSeries {
    pub n_alpha: usize,
    pub nu_c: usize,
    pub series: BTreeMap<i64, FiniteCharacter>,
}

/// Ordinary-variant bookkeeping for component data: each component series is
/// shifted by t^{n - n_alpha - nu_c} and the results are summed.
pub fn assemble_component_series(
    components: &[ComponentSeries],
    n: usize,
) -> Result<GradedCharacter> {
    let mut g = GradedCharacter::new();
    for (i, c) in components.iter().enumerate() {
        if c.n_alpha > n || c.nu_c > n - c.n_alpha {
            return Err(Error::DegreeBounds {
                detail: format!(
                    "component {i}: need nu_c <= n - n_alpha, got nu_c={}, n_alpha={}, n={n}",
                    c.nu_c, c.n_alpha
                ),
            });
        }
        let shift = (n - c.n_alpha - c.nu_c) as i64;
        for (&q, ch) in &c.series {
            if !ch.is_zero() {
                g.add_at(shift + q, PolarizedRational::finite(ch.clone()))?;
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::validate_chamber;
    use crate::fixtures::{affine_line_dataset, p1_o1_dataset, p2_dataset};
    use crate::flow::build_filtration;
    use crate::rational::rational_equal;
    use num_bigint::BigInt;

    fn w(coords: &[i64]) -> Weight {
        Weight(coords.to_vec())
    }

    fn ch(terms: &[(&[i64], i64)]) -> FiniteCharacter {
        FiniteCharacter::from_terms(terms.iter().map(|(c, n)| (w(c), BigInt::from(*n))))
    }

    #[test]
    fn p1_compact_support_series() {
        let ds = p1_o1_dataset();
        let v = validate_chamber(&ds, &[1]).unwrap();
        let g = morse_series_cs(&ds, &v).unwrap();
        let t0 = g.at(0).unwrap();
        assert_eq!(t0.numerator(), &ch(&[(&[-1], 1)]));
        assert_eq!(t0.denominators(), &[w(&[1])]);
        assert_eq!(t0.sign(), Sign::Plus);
        let t1 = g.at(1).unwrap();
        assert_eq!(t1.numerator(), &ch(&[(&[1], 1)]));
        assert_eq!(t1.denominators(), &[w(&[1])]);
    }

    #[test]
    fn p1_ordinary_series() {
        let ds = p1_o1_dataset();
        let v = validate_chamber(&ds, &[1]).unwrap();
        let g = morse_series(&ds, &v).unwrap();
        let t0 = g.at(0).unwrap();
        assert_eq!(t0.numerator(), &ch(&[(&[0], 1)]));
        assert_eq!(t0.denominators(), &[w(&[-1])]);
        assert_eq!(t0.sign(), Sign::Minus);
        let t1 = g.at(1).unwrap();
        assert_eq!(t1.numerator(), &ch(&[(&[-2], 1)]));
        assert_eq!(t1.denominators(), &[w(&[-1])]);
    }

    #[test]
    fn point_dataset_is_finite() {
        let ds = FixedPointDataset {
            rank: 1,
            ambient_dim: 0,
            compact: true,
            points: vec![crate::fixed_point::FixedPointRecord {
                id: "pt".into(),
                weights: vec![],
                fiber: ch(&[(&[0], 1)]),
            }],
            edges: None,
        };
        let v = validate_chamber(&ds, &[1]).unwrap();
        let g = morse_series_cs(&ds, &v).unwrap();
        assert_eq!(g.at(0).unwrap().numerator(), &ch(&[(&[0], 1)]));
        assert!(g.at(0).unwrap().denominators().is_empty());
        assert!(g.at(1).is_none());
    }

    #[test]
    fn p1_index_is_sections_character() {
        let ds = p1_o1_dataset();
        let v = validate_chamber(&ds, &[1]).unwrap();
        let h0 = PolarizedRational::finite(ch(&[(&[0], 1), (&[-1], 1)]));
        let ind = index(&ds, &v).unwrap();
        assert!(rational_equal(&ind, std::slice::from_ref(&h0)).unwrap());
        // compact manifold: compact-support index agrees
        let ind_cs = index_cs(&ds, &v).unwrap();
        assert!(rational_equal(&ind_cs, std::slice::from_ref(&h0)).unwrap());
        assert!(rational_equal(&ind_cs, &ind).unwrap());
    }

    #[test]
    fn affine_line_supports() {
        let ds = affine_line_dataset();
        let v = validate_chamber(&ds, &[1]).unwrap();
        // ordinary: all of -N
        let ind = index(&ds, &v).unwrap();
        assert_eq!(ind.len(), 1);
        let bx = CoordinateBox::new(vec![-3], vec![3]).unwrap();
        assert_eq!(
            ind[0].expand_in_box(&bx).unwrap(),
            ch(&[(&[0], 1), (&[-1], 1), (&[-2], 1), (&[-3], 1)])
        );
        // compact support: minus the strictly positive cone
        let ind_cs = index_cs(&ds, &v).unwrap();
        assert_eq!(
            ind_cs[0].expand_in_box(&bx).unwrap(),
            ch(&[(&[1], -1), (&[2], -1), (&[3], -1)])
        );
    }

    #[test]
    fn series_at_minus_one_is_index() {
        let ds = p2_dataset(1);
        let v = validate_chamber(&ds, &[1, 2]).unwrap();
        for variant in [Variant::CompactSupport, Variant::Ordinary] {
            let s = series(&ds, &v, variant).unwrap();
            let ind = index_terms(&ds, &v, variant).unwrap();
            assert!(rational_equal(&s.minus_one_terms(), &ind).unwrap());
        }
    }

    #[test]
    fn p2_e1_placements() {
        let ds = p2_dataset(1);
        let v = validate_chamber(&ds, &[1, 2]).unwrap();
        let filt = build_filtration(&FlowDigraph::from_dataset(&ds)).unwrap();
        let cs = e1_page(&ds, &v, &filt, Variant::CompactSupport).unwrap();
        assert!(cs.degenerate);
        assert_eq!(
            cs.entries().keys().copied().collect::<Vec<_>>(),
            vec![(0, 0), (1, 0), (2, 0)]
        );
        // p0 sits at (0,0) and its series covers the first quadrant
        let p0 = cs.at(0, 0).unwrap();
        assert_eq!(p0.numerator(), &ch(&[(&[0, 0], 1)]));
        assert_eq!(p0.denominators(), &[w(&[0, 1]), w(&[1, 0])]);
        let bx = CoordinateBox::new(vec![-2, -2], vec![2, 2]).unwrap();
        let quadrant = p0.expand_in_box(&bx).unwrap();
        assert_eq!(quadrant.len(), 9);
        assert!(quadrant.support().all(|m| m.0[0] >= 0 && m.0[1] >= 0));

        let ord = e1_page(&ds, &v, &filt, Variant::Ordinary).unwrap();
        assert!(ord.degenerate);
        assert_eq!(
            ord.entries().keys().copied().collect::<Vec<_>>(),
            vec![(0, 0), (1, 0), (2, 0)]
        );
        // ordinary places p2 at p=0 with its untouched fiber weight (0,c)
        assert_eq!(ord.at(0, 0).unwrap().numerator(), &ch(&[(&[0, 1], 1)]));
        assert_eq!(
            ord.at(0, 0).unwrap().denominators(),
            &[w(&[0, -1]), w(&[1, -1])]
        );
    }

    #[test]
    fn e1_rejects_foreign_filtration() {
        let ds = p2_dataset(0);
        let v = validate_chamber(&ds, &[1, 2]).unwrap();
        let bad = Filtration {
            layers: vec![vec!["p0".into(), "p1".into(), "p2".into()]],
        };
        assert!(matches!(
            e1_page(&ds, &v, &bad, Variant::Ordinary),
            Err(Error::FiltrationMismatch { .. })
        ));
    }

    #[test]
    fn verify_accepts_true_cohomology() {
        let ds = p1_o1_dataset();
        let v = validate_chamber(&ds, &[1]).unwrap();
        let bx = CoordinateBox::new(vec![-6], vec![6]).unwrap();
        let mut candidate = BTreeMap::new();
        candidate.insert(0, ch(&[(&[0], 1), (&[-1], 1)]));
        let report = verify_morse(&ds, &v, &candidate, Variant::Ordinary, &bx).unwrap();
        assert!(report.divisible);
        assert!(report.nonneg);
        // Q(t) = e^{-2} + e^{-3} + ... at degree 0
        let q0 = report.q.at(0).unwrap().numerator().clone();
        assert_eq!(
            q0,
            ch(&[(&[-2], 1), (&[-3], 1), (&[-4], 1), (&[-5], 1), (&[-6], 1)])
        );
        assert!(report.q.at(1).is_none());

        let cs_report = verify_morse(&ds, &v, &candidate, Variant::CompactSupport, &bx).unwrap();
        assert!(cs_report.divisible && cs_report.nonneg);
        assert_eq!(
            cs_report.q.at(0).unwrap().numerator().clone(),
            ch(&[(&[1], 1), (&[2], 1), (&[3], 1), (&[4], 1), (&[5], 1), (&[6], 1)])
        );
    }

    #[test]
    fn verify_rejects_wrong_euler_character() {
        let ds = p1_o1_dataset();
        let v = validate_chamber(&ds, &[1]).unwrap();
        let bx = CoordinateBox::new(vec![-6], vec![6]).unwrap();
        let mut candidate = BTreeMap::new();
        candidate.insert(0, ch(&[(&[0], 1)]));
        let report = verify_morse(&ds, &v, &candidate, Variant::Ordinary, &bx).unwrap();
        assert!(!report.divisible);
        assert!(!report.nonneg);
    }

    #[test]
    fn component_assembly_shifts_degrees() {
        // whole-space component: identity
        let series: BTreeMap<i64, FiniteCharacter> =
            [(0, ch(&[(&[0], 1)])), (2, ch(&[(&[1], 1)]))].into();
        let whole = ComponentSeries {
            n_alpha: 3,
            nu_c: 0,
            series: series.clone(),
        };
        let g = assemble_component_series(&[whole], 3).unwrap();
        assert_eq!(g, GradedCharacter::from_finite_entries(series.clone()));

        // an isolated point matches its boxed ordinary morse factor
        let ds = affine_line_dataset();
        let v = validate_chamber(&ds, &[1]).unwrap();
        let bx = CoordinateBox::new(vec![-3], vec![0]).unwrap();
        let boxed = morse_series(&ds, &v).unwrap().expand_in_box(&bx).unwrap();
        let comp = ComponentSeries {
            n_alpha: 0,
            nu_c: 1,
            series: [(0, boxed.at(0).unwrap().numerator().clone())].into(),
        };
        assert_eq!(assemble_component_series(&[comp], 1).unwrap(), boxed);

        // two disjoint components add
        let a = ComponentSeries {
            n_alpha: 0,
            nu_c: 0,
            series: [(0, ch(&[(&[5], 1)]))].into(),
        };
        let b = ComponentSeries {
            n_alpha: 0,
            nu_c: 1,
            series: [(0, ch(&[(&[7], 1)]))].into(),
        };
        let g = assemble_component_series(&[a, b], 1).unwrap();
        assert_eq!(g.at(1).unwrap().numerator(), &ch(&[(&[5], 1)]));
        assert_eq!(g.at(0).unwrap().numerator(), &ch(&[(&[7], 1)]));
    }

    #[test]
    fn component_bounds_enforced() {
        let c = ComponentSeries {
            n_alpha: 1,
            nu_c: 2,
            series: BTreeMap::new(),
        };
        assert!(matches!(
            assemble_component_series(&[c], 2),
            Err(Error::DegreeBounds { .. })
        ));
    }
}
