//! Slope splitting and single-matrix distality deciders.
//!
//! A linear map is distal on `Q_p^n` exactly when no eigenvalue has nonzero
//! valuation; its sphere action is distal exactly when all eigenvalues share
//! one valuation, i.e. some `p^l T^m` is linearly distal.

mod approx;
mod poly;
mod split;

pub use approx::PadicApprox;
pub use poly::{slope_factor, Poly};
pub use split::{
    contraction_split, contraction_split_auto, slope_factors, span_residual, vanishes_mod, SpectralSplit,
    SplitDims, DEFAULT_PRECISION, MAX_PRECISION,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{minimal_isometry_power, IsometryPower, DEFAULT_CAP};
use crate::linalg::{eigenvalue_valuations, PadicMatrix, Slope, SlopeData};
use crate::padic::p_power;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// The given power of the (rescaled) matrix is an isometry.
    IsometryPower(u64),
    /// All relevant valuations are zero but the isometry power was not
    /// located within the lattice cap.
    FlatPolygon,
    /// Two eigenvalue valuations that differ (linear: one of them nonzero).
    SlopeWitness(#[serde(serialize_with = "ser_slope")] Slope, #[serde(serialize_with = "ser_slope")] Slope),
}

fn ser_slope<S: serde::Serializer>(s: &Slope, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&s.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistalityVerdict {
    pub distal: bool,
    pub certificate: Certificate,
    /// `(m, l)` with `p^l T^m` linearly distal; projective verdicts only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rescaling: Option<(u64, i64)>,
}

fn isometry_certificate(t: &PadicMatrix) -> Result<Certificate> {
    match minimal_isometry_power(t, DEFAULT_CAP) {
        Ok(IsometryPower::Power(m)) => Ok(Certificate::IsometryPower(m)),
        Ok(IsometryPower::NotDistal) => unreachable!("caller checked the slopes"),
        Err(Error::CapExceeded(_)) => Ok(Certificate::FlatPolygon),
        Err(e) => Err(e),
    }
}

fn slope_witness(s: &SlopeData) -> Certificate {
    Certificate::SlopeWitness(s.min(), s.max())
}

/// Linear distality on `Q_p^n`: every eigenvalue valuation is zero.
pub fn is_distal_linear(t: &PadicMatrix) -> Result<DistalityVerdict> {
    let slopes = eigenvalue_valuations(t)?;
    if !slopes.all_zero() {
        return Ok(DistalityVerdict { distal: false, certificate: slope_witness(&slopes), rescaling: None });
    }
    Ok(DistalityVerdict { distal: true, certificate: isometry_certificate(t)?, rescaling: None })
}

/// Distality of the sphere action `x -> ||Tx|| Tx`: a single eigenvalue
/// valuation `r = k/m` (lowest terms). The certificate is the isometry power
/// of `p^l T^m` with `l = -k`.
pub fn is_distal_projective(t: &PadicMatrix) -> Result<DistalityVerdict> {
    let slopes = eigenvalue_valuations(t)?;
    if slopes.distinct() != 1 {
        return Ok(DistalityVerdict { distal: false, certificate: slope_witness(&slopes), rescaling: None });
    }
    let r = slopes.min();
    let (k, m) = (*r.numer(), *r.denom());
    let l = -k;
    let rescaled = t.pow(m)?.scale(&p_power(t.prime(), l));
    Ok(DistalityVerdict {
        distal: true,
        certificate: isometry_certificate(&rescaled)?,
        rescaling: Some((m as u64, l)),
    })
}
