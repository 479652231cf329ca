//! Characters graded by an integer t-degree. Each degree holds one polarized
//! series; merging respects the common expansion chamber. Division by (1+t)
//! is the exactness certificate extractor: the graded difference between a
//! fixed-point series and a candidate cohomology must factor as (1+t)Q with
//! Q >= 0 coefficientwise.

use crate::character::FiniteCharacter;
use crate::lattice::{CoordinateBox, Weight};
use crate::rational::{sum_over_common_denominator, PolarizedRational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct GradedCharacter {
    entries: BTreeMap<i64, PolarizedRational>,
}

impl GradedCharacter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_finite_entries<I: IntoIterator<Item = (i64, FiniteCharacter)>>(it: I) -> Self {
        let mut g = Self::new();
        for (d, ch) in it {
            if !ch.is_zero() {
                g.entries.insert(d, PolarizedRational::finite(ch));
            }
        }
        g
    }

    /// Merge `value` into the slot at `degree` over a common denominator.
    pub fn add_at(&mut self, degree: i64, value: PolarizedRational) -> Result<()> {
        if value.is_zero() {
            return Ok(());
        }
        match self.entries.remove(&degree) {
            None => {
                self.entries.insert(degree, value);
            }
            Some(prev) => {
                let merged = sum_over_common_denominator(&[prev, value])?;
                if !merged.is_zero() {
                    self.entries.insert(degree, merged);
                }
            }
        }
        Ok(())
    }

    pub fn at(&self, degree: i64) -> Option<&PolarizedRational> {
        self.entries.get(&degree)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &PolarizedRational)> {
        self.entries.iter().map(|(d, v)| (*d, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every entry truncated to finite coefficients on the box.
    pub fn expand_in_box(&self, bx: &CoordinateBox) -> Result<GradedCharacter> {
        let mut out = GradedCharacter::new();
        for (&d, v) in &self.entries {
            let ch = v.expand_in_box(bx)?;
            if !ch.is_zero() {
                out.entries.insert(d, PolarizedRational::finite(ch));
            }
        }
        Ok(out)
    }

    /// The terms of the evaluation at t = -1, left unsummed so that callers
    /// can compare them through cross-multiplication.
    pub fn minus_one_terms(&self) -> Vec<PolarizedRational> {
        self.entries
            .iter()
            .map(|(d, v)| if d.rem_euclid(2) == 0 { v.clone() } else { v.negate() })
            .collect()
    }

    /// Defined for boxed (denominator-free) graded characters only.
    pub fn is_nonnegative(&self) -> Result<bool> {
        for v in self.entries.values() {
            if !v.denominators().is_empty() {
                return Err(Error::BadInput(
                    "nonnegativity certificate requires a boxed graded character".into(),
                ));
            }
        }
        Ok(self
            .entries
            .values()
            .all(|v| v.numerator().is_nonnegative()))
    }

    /// Per-degree difference of boxed graded characters.
    pub fn sub_finite(&self, other: &GradedCharacter) -> Result<GradedCharacter> {
        let mut out = self.clone();
        for (d, v) in &other.entries {
            out.add_at(*d, v.negate())?;
        }
        Ok(out)
    }

    fn weight_slices(&self) -> Result<BTreeMap<Weight, BTreeMap<i64, BigInt>>> {
        let mut per_weight: BTreeMap<Weight, BTreeMap<i64, BigInt>> = BTreeMap::new();
        for (&d, v) in &self.entries {
            if !v.denominators().is_empty() {
                return Err(Error::BadInput(
                    "polynomial division requires a boxed graded character".into(),
                ));
            }
            for (w, c) in v.numerator().iter() {
                per_weight.entry(w.clone()).or_default().insert(d, c.clone());
            }
        }
        Ok(per_weight)
    }
}

impl Serialize for GradedCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            degree: i64,
            value: &'a PolarizedRational,
        }
        struct Entries<'a>(&'a GradedCharacter);
        impl<'a> Serialize for Entries<'a> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.entries.len()))?;
                for (&degree, value) in &self.0.entries {
                    seq.serialize_element(&Entry { degree, value })?;
                }
                seq.end()
            }
        }
        let mut st = s.serialize_struct("GradedCharacter", 1)?;
        st.serialize_field("entries", &Entries(self))?;
        st.end()
    }
}

/// Exact division of a boxed graded character by (1+t), weight by weight.
///
/// With c_d the coefficients of one weight, the quotient is forced from the
/// top down by q_{d-1} = c_d - q_d; the leftover at the bottom is the
/// remainder, which is the t = -1 evaluation up to sign and must vanish.
pub fn divide_by_one_plus_t(g: &GradedCharacter, bx: &CoordinateBox) -> Result<GradedCharacter> {
    let boxed = g.expand_in_box(bx)?;
    let mut quotient: BTreeMap<i64, FiniteCharacter> = BTreeMap::new();
    for (weight, coeffs) in boxed.weight_slices()? {
        let (&dmin, _) = coeffs.first_key_value().expect("nonempty slice");
        let (&dmax, _) = coeffs.last_key_value().expect("nonempty slice");
        let mut q = BigInt::zero();
        for d in (dmin..=dmax).rev() {
            let c = coeffs.get(&d).cloned().unwrap_or_else(BigInt::zero);
            q = c - q;
            if d > dmin && !q.is_zero() {
                quotient
                    .entry(d - 1)
                    .or_insert_with(FiniteCharacter::zero)
                    .add_term(weight.clone(), q.clone());
            }
        }
        if !q.is_zero() {
            return Err(Error::NonzeroRemainder { weight });
        }
    }
    Ok(GradedCharacter::from_finite_entries(quotient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Sign;

    fn w(coords: &[i64]) -> Weight {
        Weight(coords.to_vec())
    }

    fn ch(terms: &[(&[i64], i64)]) -> FiniteCharacter {
        FiniteCharacter::from_terms(terms.iter().map(|(c, n)| (w(c), BigInt::from(*n))))
    }

    fn poly(coeffs: &[(i64, i64)]) -> GradedCharacter {
        // one weight (0), coefficient c at degree d
        GradedCharacter::from_finite_entries(
            coeffs
                .iter()
                .filter(|(_, c)| *c != 0)
                .map(|&(d, c)| (d, ch(&[(&[0], c)]))),
        )
    }

    fn bx() -> CoordinateBox {
        CoordinateBox::new(vec![-5], vec![5]).unwrap()
    }

    #[test]
    fn division_of_square() {
        // 1 + 2t + t^2 = (1+t)^2
        let g = poly(&[(0, 1), (1, 2), (2, 1)]);
        let q = divide_by_one_plus_t(&g, &bx()).unwrap();
        assert_eq!(q, poly(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn division_with_degree_gap() {
        let g = poly(&[(1, 1), (2, 1)]);
        let q = divide_by_one_plus_t(&g, &bx()).unwrap();
        assert_eq!(q, poly(&[(1, 1)]));
    }

    #[test]
    fn division_remainder_detected() {
        // 1 + t^2 evaluates to 2 at t=-1
        let g = poly(&[(0, 1), (2, 1)]);
        assert!(matches!(
            divide_by_one_plus_t(&g, &bx()),
            Err(Error::NonzeroRemainder { .. })
        ));
    }

    #[test]
    fn division_recombines() {
        // random-ish multi-weight certificate: (1+t)*Q recovers the input
        let g = GradedCharacter::from_finite_entries([
            (0, ch(&[(&[0], 2), (&[3], 1)])),
            (1, ch(&[(&[0], 5), (&[3], 1), (&[-2], 4)])),
            (2, ch(&[(&[0], 3), (&[-2], 4)])),
        ]);
        let q = divide_by_one_plus_t(&g, &bx()).unwrap();
        let mut recombined = GradedCharacter::new();
        for (d, v) in q.iter() {
            recombined.add_at(d, v.clone()).unwrap();
            recombined.add_at(d + 1, v.clone()).unwrap();
        }
        assert_eq!(recombined, g);
        assert!(q.is_nonnegative().unwrap());
    }

    #[test]
    fn merge_at_same_degree_uses_common_denominator() {
        let v = vec![1i64];
        let a = PolarizedRational::try_new(ch(&[(&[0], 1)]), vec![w(&[-1])], Sign::Minus, v.clone())
            .unwrap();
        let b = PolarizedRational::try_new(ch(&[(&[-1], 1)]), vec![w(&[-2])], Sign::Minus, v)
            .unwrap();
        let mut g = GradedCharacter::new();
        g.add_at(0, a.clone()).unwrap();
        g.add_at(0, b.clone()).unwrap();
        let merged = g.at(0).unwrap();
        assert_eq!(merged.denominators(), &[w(&[-2]), w(&[-1])]);
        let box1 = CoordinateBox::new(vec![-6], vec![0]).unwrap();
        let want = a
            .expand_in_box(&box1)
            .unwrap()
            .add(&b.expand_in_box(&box1).unwrap());
        assert_eq!(merged.expand_in_box(&box1).unwrap(), want);
    }

    #[test]
    fn minus_one_alternates_signs() {
        let g = poly(&[(0, 1), (1, 1), (2, 1)]);
        let terms = g.minus_one_terms();
        let total = terms
            .iter()
            .fold(FiniteCharacter::zero(), |acc, t| acc.add(t.numerator()));
        assert_eq!(total, ch(&[(&[0], 1)]));
    }

    #[test]
    fn canonical_json_form() {
        let g = poly(&[(0, 1), (2, 3)]);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"entries":[{"degree":0,"value":{"num":[{"w":[0],"c":1}],"dens":[],"sign":"+"}},{"degree":2,"value":{"num":[{"w":[0],"c":3}],"dens":[],"sign":"+"}}]}"#
        );
    }
}
