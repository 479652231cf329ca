//! Torus actions with isolated fixed points: isotropy weights at each point,
//! an equivariant fiber character, and an optional flow relation. A chamber
//! vector splits every isotropy weight into a plus or minus side; everything
//! downstream (Morse series, E1 pages, indices) only reads those signs.

use crate::character::FiniteCharacter;
use crate::lattice::Weight;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub id: String,
    pub weights: Vec<Weight>,
    pub fiber: FiniteCharacter,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointDataset {
    pub rank: usize,
    pub ambient_dim: usize,
    pub compact: bool,
    pub points: Vec<FixedPointRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(String, String)>>,
}

impl FixedPointDataset {
    /// Structural checks; call after deserializing foreign data.
    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for p in &self.points {
            if !ids.insert(p.id.as_str()) {
                return Err(Error::BadInput(format!("duplicate point id {:?}", p.id)));
            }
            if p.weights.len() != self.ambient_dim {
                return Err(Error::BadInput(format!(
                    "point {:?} has {} isotropy weights, ambient dimension is {}",
                    p.id,
                    p.weights.len(),
                    self.ambient_dim
                )));
            }
            for w in &p.weights {
                if w.rank() != self.rank {
                    return Err(Error::RankMismatch {
                        expected: self.rank,
                        found: w.rank(),
                    });
                }
                if w.is_zero() {
                    return Err(Error::ZeroIsotropyWeight { point: p.id.clone() });
                }
            }
            if let Some(r) = p.fiber.rank() {
                if r != self.rank {
                    return Err(Error::RankMismatch {
                        expected: self.rank,
                        found: r,
                    });
                }
            }
        }
        if let Some(edges) = &self.edges {
            for (a, b) in edges {
                for v in [a, b] {
                    if !ids.contains(v.as_str()) {
                        return Err(Error::UnknownVertex { id: v.clone() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn point(&self, id: &str) -> Option<&FixedPointRecord> {
        self.points.iter().find(|p| p.id == id)
    }
}

/// An interior lattice vector of an action chamber, validated against one
/// dataset: no isotropy weight pairs to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberVector {
    v: Vec<i64>,
}

impl ChamberVector {
    pub fn coords(&self) -> &[i64] {
        &self.v
    }

    pub fn pair(&self, w: &Weight) -> i64 {
        w.dot(&self.v)
    }

    pub fn negate(&self) -> ChamberVector {
        ChamberVector {
            v: self.v.iter().map(|c| -c).collect(),
        }
    }
}

pub fn validate_chamber(ds: &FixedPointDataset, v: &[i64]) -> Result<ChamberVector> {
    if v.len() != ds.rank {
        return Err(Error::RankMismatch {
            expected: ds.rank,
            found: v.len(),
        });
    }
    for p in &ds.points {
        for w in &p.weights {
            if w.dot(v) == 0 {
                return Err(Error::WallChamber {
                    point: p.id.clone(),
                    weight: w.clone(),
                });
            }
        }
    }
    Ok(ChamberVector { v: v.to_vec() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarizedRecord {
    pub id: String,
    pub nu_c: usize,
    pub weights_c: Vec<Weight>,
    pub weights_minus_c: Vec<Weight>,
}

pub fn polarize_record(r: &FixedPointRecord, v: &ChamberVector) -> PolarizedRecord {
    let mut weights_c = Vec::new();
    let mut weights_minus_c = Vec::new();
    for w in &r.weights {
        if v.pair(w) > 0 {
            weights_c.push(w.clone());
        } else {
            weights_minus_c.push(w.clone());
        }
    }
    PolarizedRecord {
        id: r.id.clone(),
        nu_c: weights_c.len(),
        weights_c,
        weights_minus_c,
    }
}
