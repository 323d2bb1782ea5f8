//! The seven curve germs through a P3(c)-point, from closed forms and from a
//! Newton-continuation oracle on the projection family.

pub mod closed;
pub mod family;
pub mod newton;
pub mod reconcile;
pub mod trace;

use serde::Serialize;
use thiserror::Error;

use crate::germ::GermError;
use crate::jet::{Jet, JetError};
use crate::surface::GeometryError;

pub use closed::{closed_form_c, closed_form_normalized, difference_identities, IdentityCheck};
pub use family::{ModelFamily, ProjectionFamily, SurfaceDerivs};
pub use reconcile::{reconcile, reconcile_surface, ReconcileReport};
pub use trace::{trace_all, trace_locus, TraceOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LocusLabel {
    /// Δ, the parabolic curve.
    Parabolic,
    B2,
    S2,
    Flecnodal,
    /// `(A0S0)2`.
    A0S0Sq,
    A0S1,
    /// `A0S0|A1`.
    A0S0A1,
}

impl LocusLabel {
    pub const ALL: [LocusLabel; 7] = [
        LocusLabel::Parabolic,
        LocusLabel::B2,
        LocusLabel::S2,
        LocusLabel::Flecnodal,
        LocusLabel::A0S0Sq,
        LocusLabel::A0S1,
        LocusLabel::A0S0A1,
    ];

    pub fn is_bigerm(self) -> bool {
        matches!(self, LocusLabel::A0S0Sq | LocusLabel::A0S1 | LocusLabel::A0S0A1)
    }

    pub fn name(self) -> &'static str {
        match self {
            LocusLabel::Parabolic => "Delta",
            LocusLabel::B2 => "B2",
            LocusLabel::S2 => "S2",
            LocusLabel::Flecnodal => "flecnodal",
            LocusLabel::A0S0Sq => "(A0S0)2",
            LocusLabel::A0S1 => "A0S1",
            LocusLabel::A0S0A1 => "A0S0|A1",
        }
    }

    /// Short identifier used for `c_*` names: `P, B, S, F, s02, s1, s01`.
    pub fn short(self) -> &'static str {
        match self {
            LocusLabel::Parabolic => "P",
            LocusLabel::B2 => "B",
            LocusLabel::S2 => "S",
            LocusLabel::Flecnodal => "F",
            LocusLabel::A0S0Sq => "s02",
            LocusLabel::A0S1 => "s1",
            LocusLabel::A0S0A1 => "s01",
        }
    }
}

impl std::fmt::Display for LocusLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LocusLabel {
    type Err = LocusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let k = s.to_ascii_lowercase().replace(['(', ')', '_', '|', ' ', '-'], "");
        Ok(match k.as_str() {
            "delta" | "parabolic" | "p" => LocusLabel::Parabolic,
            "b2" | "b" => LocusLabel::B2,
            "s2" | "s" => LocusLabel::S2,
            "flecnodal" | "f" | "fl" => LocusLabel::Flecnodal,
            "a0s02" | "s02" => LocusLabel::A0S0Sq,
            "a0s1" | "s1" => LocusLabel::A0S1,
            "a0s0a1" | "s01" => LocusLabel::A0S0A1,
            _ => return Err(LocusError::UnknownLabel(s.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GermSource {
    ClosedForm,
    Oracle,
    SeriesInversion,
    Elimination,
}

/// A curve germ `x = c1 y + c2 y² + …` through the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct LocusGerm<T> {
    pub label: LocusLabel,
    pub c2: T,
    pub c1: T,
    /// Series `x(y)` when available (series inversion or elimination).
    pub series: Option<Jet<T>>,
    /// Traced `(y, x)` points on the surface.
    pub samples: Vec<(f64, f64)>,
    pub source: GermSource,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocusError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error("unknown locus label {0:?}")]
    UnknownLabel(String),
    #[error("non-generic configuration for {label}: {locus} vanishes")]
    NonGeneric { label: LocusLabel, locus: &'static str },
    #[error("not a P3(c) point: {0}")]
    NotP3c(String),
    #[error("non-versal surface: 5*a32*b33 - 6*b33^2 - 4*a44 = 0, the projection family is not a versal unfolding")]
    NonVersal,
    #[error("no genuine {label} branch found near the origin")]
    NoBranch { label: LocusLabel },
    #[error("continuation failed for {label} at y = {y:e}; last good point (y, x) = {last_good:?}")]
    ContinuationFailure { label: LocusLabel, y: f64, last_good: Option<(f64, f64)> },
}
