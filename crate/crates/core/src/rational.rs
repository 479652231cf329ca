//! Polarized geometric series: a finite numerator character over a multiset
//! of denominator weights, each denominator weight mu standing for the series
//! sum_{k>=0} e^{k mu}. The expansion direction is part of the data: writing
//! the same rational function with the opposite denominators gives a
//! different formal series, related by cross-multiplication equality only.

use crate::character::FiniteCharacter;
use crate::lattice::{CoordinateBox, Weight};
use crate::{Error, Result};
use num_bigint::BigInt;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;

/// Which side of the chamber hyperplane the denominators pair into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// numerator / prod_mu (1 - e^mu), expanded so that every denominator weight
/// pairs strictly with `sign * chamber`.
///
/// The chamber vector is carried along because finite truncation needs a
/// direction in which all denominators strictly increase; it is construction
/// metadata and stays out of the canonical JSON form. `flip_polarization`
/// deliberately produces transitional values whose denominators straddle the
/// chamber; those values cross-multiply fine but refuse to expand until the
/// remaining factors are flipped too.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedRational {
    num: FiniteCharacter,
    dens: Vec<Weight>,
    sign: Sign,
    chamber: Vec<i64>,
}

impl PolarizedRational {
    /// Strict constructor: every denominator must pair with sign*chamber > 0.
    pub fn try_new(
        num: FiniteCharacter,
        mut dens: Vec<Weight>,
        sign: Sign,
        chamber: Vec<i64>,
    ) -> Result<Self> {
        for mu in &dens {
            if mu.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let pairing = sign.as_i64() * mu.dot(&chamber);
            if pairing <= 0 {
                return Err(Error::MixedPolarization {
                    weight: mu.clone(),
                    pairing: mu.dot(&chamber),
                });
            }
        }
        dens.sort();
        Ok(PolarizedRational { num, dens, sign, chamber })
    }

    /// Constructor that flips wrong-side factors instead of rejecting them,
    /// using 1/(1-e^mu) = -e^{-mu}/(1-e^{-mu}).
    pub fn polarize(
        num: FiniteCharacter,
        dens: Vec<Weight>,
        sign: Sign,
        chamber: Vec<i64>,
    ) -> Result<Self> {
        let mut num = num;
        let mut fixed = Vec::with_capacity(dens.len());
        for mu in dens {
            if mu.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let pairing = sign.as_i64() * mu.dot(&chamber);
            if pairing > 0 {
                fixed.push(mu);
            } else if pairing < 0 {
                num = num.mul(&FiniteCharacter::monomial(mu.neg(), BigInt::from(-1)))?;
                fixed.push(mu.neg());
            } else {
                return Err(Error::MixedPolarization { weight: mu.clone(), pairing: 0 });
            }
        }
        Self::try_new(num, fixed, sign, chamber)
    }

    /// A finite character viewed as a rational with no denominators.
    pub fn finite(num: FiniteCharacter) -> Self {
        PolarizedRational {
            num,
            dens: Vec::new(),
            sign: Sign::Plus,
            chamber: Vec::new(),
        }
    }

    pub fn numerator(&self) -> &FiniteCharacter {
        &self.num
    }

    pub fn denominators(&self) -> &[Weight] {
        &self.dens
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn chamber(&self) -> &[i64] {
        &self.chamber
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn negate(&self) -> Self {
        PolarizedRational {
            num: self.num.neg(),
            ..self.clone()
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        PolarizedRational {
            num: self.num.scale(k),
            ..self.clone()
        }
    }

    /// True when every denominator pairs strictly positively with
    /// sign * chamber. Freshly constructed values always are; values in the
    /// middle of a factor-by-factor flip are not.
    pub fn is_polarized(&self) -> bool {
        if self.dens.is_empty() {
            return true;
        }
        if self.chamber.is_empty() {
            return false;
        }
        self.dens
            .iter()
            .all(|mu| !mu.is_zero() && self.sign.as_i64() * mu.dot(&self.chamber) > 0)
    }

    /// Apply 1/(1-e^mu) = -e^{-mu}/(1-e^{-mu}) to the denominator at `which`.
    ///
    /// The stored sign toggles. Flipping one factor of a multi-factor series
    /// generally leaves a mixed multiset; such a value still compares under
    /// `rational_equal` but `expand_in_box` rejects it.
    pub fn flip_polarization(&self, which: usize) -> Result<Self> {
        let mu = self.dens.get(which).ok_or(Error::DenominatorIndex {
            index: which,
            len: self.dens.len(),
        })?;
        let num = self
            .num
            .mul(&FiniteCharacter::monomial(mu.neg(), BigInt::from(-1)))?;
        let mut dens = self.dens.clone();
        dens[which] = mu.neg();
        dens.sort();
        Ok(PolarizedRational {
            num,
            dens,
            sign: self.sign.flip(),
            chamber: self.chamber.clone(),
        })
    }

    /// Exact coefficients of the defining series on the box.
    ///
    /// Termination argument: let w = sign*chamber. Every denominator pairs
    /// at least 1 with w, so along any branch of the exponent enumeration
    /// the pairing of the partial sum with w strictly increases; once it
    /// exceeds the maximum pairing over the box corners no completion can
    /// re-enter the box.
    pub fn expand_in_box(&self, bx: &CoordinateBox) -> Result<FiniteCharacter> {
        if self.num.is_zero() {
            return Ok(FiniteCharacter::zero());
        }
        if self.dens.is_empty() {
            return Ok(self.num.restrict_to_box(bx));
        }
        if self.chamber.is_empty() {
            return Err(Error::MissingChamber);
        }
        if !self.is_polarized() {
            let bad = self
                .dens
                .iter()
                .find(|mu| mu.is_zero() || self.sign.as_i64() * mu.dot(&self.chamber) <= 0)
                .unwrap();
            if bad.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            return Err(Error::MixedPolarization {
                weight: bad.clone(),
                pairing: bad.dot(&self.chamber),
            });
        }
        let w: Vec<i64> = self
            .chamber
            .iter()
            .map(|c| c * self.sign.as_i64())
            .collect();
        let bound = bx
            .corners()
            .into_iter()
            .map(|c| c.dot(&w))
            .max()
            .expect("box has corners");
        let mut out = FiniteCharacter::zero();
        for (eta, coeff) in self.num.iter() {
            descend(eta.clone(), coeff, &self.dens, &w, bound, bx, &mut out);
        }
        Ok(out)
    }
}

fn descend(
    partial: Weight,
    coeff: &BigInt,
    dens: &[Weight],
    w: &[i64],
    bound: i64,
    bx: &CoordinateBox,
    out: &mut FiniteCharacter,
) {
    if partial.dot(w) > bound {
        return;
    }
    match dens.split_first() {
        None => {
            if bx.contains(&partial) {
                out.add_term(partial, coeff.clone());
            }
        }
        Some((mu, rest)) => {
            let mut cur = partial;
            loop {
                if cur.dot(w) > bound {
                    break;
                }
                descend(cur.clone(), coeff, rest, w, bound, bx, out);
                cur = cur.add(mu);
            }
        }
    }
}

// Canonical JSON form: {"num":character,"dens":[[...]],"sign":"+"|"-"}.
impl Serialize for PolarizedRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PolarizedRational", 3)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("dens", &self.dens)?;
        st.serialize_field("sign", &self.sign)?;
        st.end()
    }
}

fn den_multiset(dens: &[Weight]) -> BTreeMap<Weight, usize> {
    let mut m = BTreeMap::new();
    for d in dens {
        *m.entry(d.clone()).or_insert(0) += 1;
    }
    m
}

/// Clear all denominators of `terms` against the common multiset `lcm` and
/// sum. `lcm` must dominate every term's denominator multiset.
fn cross_multiplied(terms: &[PolarizedRational], lcm: &BTreeMap<Weight, usize>) -> Result<FiniteCharacter> {
    let mut total = FiniteCharacter::zero();
    for t in terms {
        let own = den_multiset(&t.dens);
        let mut prod = t.num.clone();
        for (mu, &want) in lcm {
            let have = own.get(mu).copied().unwrap_or(0);
            debug_assert!(have <= want);
            for _ in have..want {
                prod = prod.mul(&FiniteCharacter::one_minus_exp(mu))?;
            }
        }
        total = total.add(&prod);
    }
    Ok(total)
}

/// Equality as rational characters: cross-multiply both sides by every
/// (1 - e^mu) factor and compare the finite results exactly. This is coarser
/// than equality of formal series; a series and its polarization flip are
/// rational-equal but expand differently.
pub fn rational_equal(a: &[PolarizedRational], b: &[PolarizedRational]) -> Result<bool> {
    let mut lcm: BTreeMap<Weight, usize> = BTreeMap::new();
    for t in a.iter().chain(b) {
        for (mu, count) in den_multiset(&t.dens) {
            let e = lcm.entry(mu).or_insert(0);
            *e = (*e).max(count);
        }
    }
    Ok(cross_multiplied(a, &lcm)? == cross_multiplied(b, &lcm)?)
}

/// Sum of polarized series over a common denominator. All inputs must be
/// polarized with the same sign against the same chamber; finite terms are
/// absorbed as-is.
pub fn sum_over_common_denominator(terms: &[PolarizedRational]) -> Result<PolarizedRational> {
    let mut sign = None;
    let mut chamber: Vec<i64> = Vec::new();
    for t in terms {
        if t.dens.is_empty() {
            continue;
        }
        if !t.is_polarized() {
            return Err(Error::MixedPolarization {
                weight: t.dens[0].clone(),
                pairing: t.dens[0].dot(&t.chamber),
            });
        }
        match sign {
            None => {
                sign = Some(t.sign);
                chamber = t.chamber.clone();
            }
            Some(s) => {
                if s != t.sign || chamber != t.chamber {
                    return Err(Error::BadInput(
                        "cannot merge series polarized against different chambers".into(),
                    ));
                }
            }
        }
    }
    let mut lcm: BTreeMap<Weight, usize> = BTreeMap::new();
    for t in terms {
        for (mu, count) in den_multiset(&t.dens) {
            let e = lcm.entry(mu).or_insert(0);
            *e = (*e).max(count);
        }
    }
    let num = cross_multiplied(terms, &lcm)?;
    let dens: Vec<Weight> = lcm
        .into_iter()
        .flat_map(|(mu, k)| std::iter::repeat_n(mu, k))
        .collect();
    match sign {
        Some(s) => PolarizedRational::try_new(num, dens, s, chamber),
        None => Ok(PolarizedRational::finite(num)),
    }
}
