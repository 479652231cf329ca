//! The formal character ring: finitely supported integer-coefficient
//! functions on the weight lattice, with exact ring arithmetic.

use crate::lattice::{CoordinateBox, Weight};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// An element of the group ring Z[weight lattice].
///
/// Invariant: no zero coefficient is ever stored, so `terms.is_empty()` is
/// the zero test and equality is plain map equality. Coefficients are
/// arbitrary precision; cross-multiplication products can grow.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FiniteCharacter {
    terms: BTreeMap<Weight, BigInt>,
}

impl FiniteCharacter {
    pub fn zero() -> Self {
        FiniteCharacter::default()
    }

    /// The multiplicative unit e^0.
    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank), BigInt::one())
    }

    pub fn monomial(w: Weight, c: impl Into<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        let c = c.into();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        FiniteCharacter { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Weight, BigInt)>) -> Self {
        let mut out = FiniteCharacter::zero();
        for (w, c) in it {
            out.add_term(w, c);
        }
        out
    }

    /// 1 - e^mu, the cross-multiplication factor for a denominator weight.
    pub fn one_minus_exp(mu: &Weight) -> Self {
        let mut out = Self::one(mu.rank());
        out.add_term(mu.clone(), BigInt::from(-1));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Weight) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.terms.keys()
    }

    /// Rank of the underlying lattice, if the character is nonzero.
    pub fn rank(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| w.rank())
    }

    pub fn add_term(&mut self, w: Weight, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &FiniteCharacter) -> FiniteCharacter {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FiniteCharacter) -> FiniteCharacter {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> FiniteCharacter {
        FiniteCharacter {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> FiniteCharacter {
        if k.is_zero() {
            return FiniteCharacter::zero();
        }
        FiniteCharacter {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    /// Convolution product. Errors on mixed lattice ranks.
    pub fn mul(&self, other: &FiniteCharacter) -> Result<FiniteCharacter> {
        if let (Some(a), Some(b)) = (self.rank(), other.rank()) {
            if a != b {
                return Err(Error::RankMismatch { expected: a, found: b });
            }
        }
        let mut out = FiniteCharacter::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.add(wb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Translate every weight by `shift`.
    pub fn translate(&self, shift: &Weight) -> FiniteCharacter {
        FiniteCharacter {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.add(shift), c.clone()))
                .collect(),
        }
    }

    pub fn restrict_to_box(&self, bx: &CoordinateBox) -> FiniteCharacter {
        FiniteCharacter {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| bx.contains(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonnegativity in the character-ring order: every coefficient >= 0.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| c.sign() != num_bigint::Sign::Minus)
    }

    /// Total of all coefficients; the dimension when the character is a
    /// genuine module character.
    pub fn total(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl fmt::Debug for FiniteCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", w, c)?;
        }
        write!(f, "}}")
    }
}

// Canonical JSON form: sorted list of {"w":[...],"c":n}. The BTreeMap makes
// the sort order automatic; coefficients go through serde_json's arbitrary
// precision numbers so BigInt round-trips exactly.
impl Serialize for FiniteCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            seq.serialize_element(&TermRef { w, c })?;
        }
        seq.end()
    }
}

struct TermRef<'a> {
    w: &'a Weight,
    c: &'a BigInt,
}

impl Serialize for TermRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = serde_json::Number::from_str(&self.c.to_string())
            .map_err(serde::ser::Error::custom)?;
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("w", self.w)?;
        m.serialize_entry("c", &n)?;
        m.end()
    }
}

#[derive(Deserialize)]
struct TermOwned {
    w: Weight,
    c: serde_json::Number,
}

impl<'de> Deserialize<'de> for FiniteCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = FiniteCharacter;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of {\"w\":[...],\"c\":int} terms")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<FiniteCharacter, A::Error> {
                let mut out = FiniteCharacter::zero();
                while let Some(t) = seq.next_element::<TermOwned>()? {
                    let c = BigInt::from_str(&t.c.to_string()).map_err(|_| {
                        de::Error::custom(format!("coefficient {} is not an integer", t.c))
                    })?;
                    out.add_term(t.w, c);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(terms: &[(&[i64], i64)]) -> FiniteCharacter {
        FiniteCharacter::from_terms(
            terms
                .iter()
                .map(|(w, c)| (Weight(w.to_vec()), BigInt::from(*c))),
        )
    }

    #[test]
    fn unit_is_multiplicative_identity() {
        let xi = ch(&[(&[3, -1], 1)]);
        assert_eq!(FiniteCharacter::one(2).mul(&xi).unwrap(), xi);
    }

    #[test]
    fn hand_convolution_rank_one() {
        // {2:1,0:1,-2:1} * {1:1,-1:1} worked out by hand:
        // 2+1, 2-1, 0+1, 0-1, -2+1, -2-1 -> {3:1,1:2,-1:2,-3:1}
        let a = ch(&[(&[2], 1), (&[0], 1), (&[-2], 1)]);
        let b = ch(&[(&[1], 1), (&[-1], 1)]);
        let expect = ch(&[(&[3], 1), (&[1], 2), (&[-1], 2), (&[-3], 1)]);
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn cancellation_purges_zeros() {
        let a = ch(&[(&[5, 5], 1)]);
        let b = ch(&[(&[5, 5], -1)]);
        let sum = a.add(&b);
        assert!(sum.is_zero());
        assert_eq!(sum.len(), 0);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = ch(&[(&[1], 1)]);
        let b = ch(&[(&[1, 0], 1)]);
        assert!(matches!(a.mul(&b), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn nonnegativity() {
        assert!(ch(&[(&[0, 0], 1), (&[1, 0], 2)]).is_nonnegative());
        assert!(!ch(&[(&[0, 0], 1), (&[1, 0], -1)]).is_nonnegative());
        assert!(FiniteCharacter::zero().is_nonnegative());
    }

    #[test]
    fn canonical_json_is_sorted_and_stable() {
        let a = ch(&[(&[1, 0], 2), (&[-1, 3], 1)]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"[{"w":[-1,3],"c":1},{"w":[1,0],"c":2}]"#);
        let back: FiniteCharacter = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn big_coefficients_round_trip() {
        let big: BigInt = BigInt::from(u64::MAX) * BigInt::from(u64::MAX);
        let a = FiniteCharacter::monomial(Weight(vec![0]), big.clone());
        let json = serde_json::to_string(&a).unwrap();
        let back: FiniteCharacter = serde_json::from_str(&json).unwrap();
        assert_eq!(back.coeff(&Weight(vec![0])), big);
    }
}
