//! Crate-wide error type. Every variant names the offending datum so CLI
//! diagnostics can be copied straight into a bug report.

use crate::lattice::Weight;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("chamber vector lies on a wall: <{weight}, v> = 0 at point {point}")]
    WallChamber { point: String, weight: Weight },

    #[error("zero isotropy weight at point {point}")]
    ZeroIsotropyWeight { point: String },

    #[error("denominator index {index} out of range (have {len})")]
    DenominatorIndex { index: usize, len: usize },

    #[error("series is not polarized: denominator {weight} pairs with sign {pairing} against the declared side")]
    MixedPolarization { weight: Weight, pairing: i64 },

    #[error("unbounded enumeration: zero denominator weight")]
    ZeroDenominator,

    #[error("unbounded enumeration: no chamber vector attached to the series")]
    MissingChamber,

    #[error("coordinate box is malformed: {detail}")]
    BadBox { detail: String },

    #[error("polynomial in t has nonzero remainder mod (1+t) at weight {weight}")]
    NonzeroRemainder { weight: Weight },

    #[error("quasicycle detected: {}", cycle.join(" -> "))]
    Quasicycle { cycle: Vec<String> },

    #[error("unknown vertex id {id:?}")]
    UnknownVertex { id: String },

    #[error("filtration inconsistent with dataset: {detail}")]
    FiltrationMismatch { detail: String },

    #[error("component degree bounds violated: {detail}")]
    DegreeBounds { detail: String },

    #[error("maximal cone {cone} is not smooth (|det| = {det})")]
    NonSmoothCone { cone: usize, det: i64 },

    #[error("invalid fan: {detail}")]
    BadFan { detail: String },

    #[error("wall {wall:?} is shared by {count} maximal cones, expected 2")]
    WallCount { wall: Vec<usize>, count: usize },

    #[error("orbit of face {face:?} has no limit among the maximal cones (non-complete fan?)")]
    NoLimit { face: Vec<usize> },

    #[error("orbit of face {face:?} has more than one candidate limit cone")]
    AmbiguousLimit { face: Vec<usize> },

    #[error("polytope enumeration hit the box boundary; divisor may be non-nef or box too small")]
    PolytopeUnbounded,

    #[error("unsupported root system {kind}{rank}")]
    UnsupportedRootSystem { kind: char, rank: usize },

    #[error("weight {weight} is not dominant")]
    NonDominant { weight: Weight },

    #[error("invalid input: {0}")]
    BadInput(String),
}
