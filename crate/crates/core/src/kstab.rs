//! S- and β-invariants from volume functions, and the refined flag invariant.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::rational::{int, Rational};
use crate::exact::{ExactError, PiecewisePolynomial};
use crate::intersect::{sing_line_model, Chamber, IntersectError, SurfaceModel, ThreefoldModel};
use crate::zariski::{threefold_volume_certified, two_param_flag_volume, FlagVolume, VolumeFunction, ZariskiError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum KstabError {
    #[error("volume {0} must be positive")]
    NonpositiveVolume(String),
    #[error("volume function is negative at its right end ({0})")]
    NegativeTail(String),
    #[error("model has no test divisor {0:?}")]
    UnknownDivisor(String),
    #[error("model has no flag through surface {0:?}")]
    UnknownFlag(String),
    #[error(transparent)]
    Zariski(#[from] ZariskiError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Intersect(#[from] IntersectError),
}

/// `S = (1/V) ∫ vol`, with `vol ≡ 0` beyond the domain.
pub fn s_invariant(vol: &PiecewisePolynomial, v: &Rational) -> Result<Rational, KstabError> {
    if !v.is_positive() {
        return Err(KstabError::NonpositiveVolume(v.to_string()));
    }
    let (_, hi) = vol.domain();
    let tail = vol.eval(&hi)?;
    if tail.is_negative() {
        return Err(KstabError::NegativeTail(tail.to_string()));
    }
    Ok(vol.integrate_all() / v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    UnstableWitness,
    SemistableBoundary,
    Positive,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::UnstableWitness => "unstable-witness",
            Classification::SemistableBoundary => "semistable-boundary",
            Classification::Positive => "positive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorialVerdict {
    pub label: String,
    pub a: Rational,
    pub s: Rational,
    pub beta: Rational,
    pub classification: Classification,
}

pub fn beta(label: &str, a: &Rational, s: &Rational) -> DivisorialVerdict {
    let b = a - s;
    let classification = if b.is_negative() {
        Classification::UnstableWitness
    } else if b.is_zero() {
        Classification::SemistableBoundary
    } else {
        Classification::Positive
    };
    DivisorialVerdict {
        label: label.to_string(),
        a: a.clone(),
        s: s.clone(),
        beta: b,
        classification,
    }
}

/// Certified volume function and S-invariant of a declared test divisor.
pub fn divisor_s_invariant(m: &ThreefoldModel, label: &str) -> Result<(VolumeFunction, Rational), KstabError> {
    let d = m.divisor(label).ok_or_else(|| KstabError::UnknownDivisor(label.to_string()))?;
    let vol = threefold_volume_certified(m, &m.anticanonical, &d.class, &d.chambers, "t")?;
    let s = s_invariant(&vol.function, &m.anticanonical_volume())?;
    Ok((vol, s))
}

/// `1 + (g − 12 + k) / (4(g − 1))`.
pub fn sing_line_bound(g: i64, k: i64) -> Rational {
    int(1) + Rational::new((g - 12 + k).into(), (4 * (g - 1)).into())
}

/// The same bound assembled from the certified two-chamber volume function
/// of the singular-line model.
pub fn sing_line_bound_assembled(g: i64, k: i64) -> Result<Rational, KstabError> {
    let m = sing_line_model(g, k)?;
    Ok(divisor_s_invariant(&m, "E")?.1)
}

pub const FLAG_CONVENTION: &str =
    "prefactor n/V with n = 3; boundary correction term defaults to 0 when the curve is not in the negative part";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagReport {
    pub surface: String,
    pub curve: String,
    pub value: Rational,
    pub cells: FlagVolume,
    pub correction: Rational,
    pub convention: &'static str,
}

/// `(3/V) Σ ∫∫ vol(A(t) − sZ) ds dt + (3/V) ∫ correction`.
pub fn refined_s_flag(
    s: &SurfaceModel,
    family: &[Chamber],
    z: &[Rational],
    v: &Rational,
    correction: Option<&PiecewisePolynomial>,
) -> Result<FlagReport, KstabError> {
    if !v.is_positive() {
        return Err(KstabError::NonpositiveVolume(v.to_string()));
    }
    let cells = two_param_flag_volume(s, family, z, "t", "s")?;
    let correction = correction.map_or_else(Rational::zero, |c| c.integrate_all());
    let value = int(3) / v * (cells.integral() + &correction);
    Ok(FlagReport {
        surface: s.name.clone(),
        curve: s.format_class(z),
        value,
        cells,
        correction,
        convention: FLAG_CONVENTION,
    })
}

/// Refined invariant for a flag declared on a threefold model.
pub fn model_flag(m: &ThreefoldModel, surface: &SurfaceModel, z: &[Rational]) -> Result<FlagReport, KstabError> {
    let flag = m.flag(&surface.name).ok_or_else(|| KstabError::UnknownFlag(surface.name.clone()))?;
    refined_s_flag(surface, &flag.chambers, z, &m.anticanonical_volume(), None)
}
