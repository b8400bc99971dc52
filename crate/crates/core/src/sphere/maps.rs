//! The normalized linear and affine actions on the unit sphere.

use serde::Serialize;

use super::SphereDynamics;
use crate::error::{Error, Result};
use crate::linalg::PadicMatrix;
use crate::padic::{NormExp, PadicVector, Prime};

fn check_point(t: &PadicMatrix, x: &PadicVector) -> Result<()> {
    if x.prime() != t.prime() {
        return Err(Error::PrimeMismatch { expected: t.prime().get(), found: x.prime().get() });
    }
    if x.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: x.dim() });
    }
    x.check_on_sphere()
}

/// `x -> ||Tx|| Tx` for a sphere vector `x`.
pub fn apply_bar(t: &PadicMatrix, x: &PadicVector) -> Result<PadicVector> {
    check_point(t, x)?;
    t.apply(x).normalize_to_sphere()
}

/// The sphere action of an invertible matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereMap {
    t: PadicMatrix,
}

impl SphereMap {
    pub fn new(t: PadicMatrix) -> Result<Self> {
        t.inverse()?;
        Ok(SphereMap { t })
    }

    pub fn matrix(&self) -> &PadicMatrix {
        &self.t
    }
}

impl SphereDynamics for SphereMap {
    fn prime(&self) -> Prime {
        self.t.prime()
    }

    fn dim(&self) -> usize {
        self.t.dim()
    }

    fn step(&self, x: &PadicVector) -> Result<PadicVector> {
        apply_bar(&self.t, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineMode {
    /// `||T^-1 a|| < 1`: a homeomorphism of the sphere.
    Homeomorphism,
    /// `||T^-1 a|| > 1`: well defined and injective, not onto.
    InjectiveOnly,
}

/// `x -> ||a + Tx|| (a + Tx)` on the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSphereMap {
    t: PadicMatrix,
    t_inv: PadicMatrix,
    a: PadicVector,
    t_inv_a: PadicVector,
    mode: AffineMode,
}

impl AffineSphereMap {
    /// Classifies the map by `||T^-1 a||`; the value 1 is rejected because
    /// then `a + Tx` vanishes at the sphere point `x = -T^-1 a`.
    pub fn new(t: PadicMatrix, a: PadicVector) -> Result<Self> {
        if a.dim() != t.dim() {
            return Err(Error::DimensionMismatch { expected: t.dim(), found: a.dim() });
        }
        if a.prime() != t.prime() {
            return Err(Error::PrimeMismatch { expected: t.prime().get(), found: a.prime().get() });
        }
        if a.is_zero() {
            return Err(Error::InvalidArgument("translation vector must be nonzero".into()));
        }
        let t_inv = t.inverse()?;
        let t_inv_a = t_inv.apply(&a);
        let mode = match t_inv_a.norm().cmp(&NormExp::ONE) {
            std::cmp::Ordering::Less => AffineMode::Homeomorphism,
            std::cmp::Ordering::Greater => AffineMode::InjectiveOnly,
            std::cmp::Ordering::Equal => return Err(Error::DegenerateTranslation),
        };
        Ok(AffineSphereMap { t, t_inv, a, t_inv_a, mode })
    }

    pub fn matrix(&self) -> &PadicMatrix {
        &self.t
    }

    pub fn inverse_matrix(&self) -> &PadicMatrix {
        &self.t_inv
    }

    pub fn translation(&self) -> &PadicVector {
        &self.a
    }

    pub fn mode(&self) -> AffineMode {
        self.mode
    }

    /// `x = ||z|| z - T^-1 a` with `z = T^-1 y`, without any mode check.
    pub fn inverse_formula(&self, y: &PadicVector) -> Result<PadicVector> {
        let z = self.t_inv.apply(y);
        Ok(z.normalize_to_sphere()?.sub(&self.t_inv_a))
    }
}

pub fn apply_bar_affine(map: &AffineSphereMap, x: &PadicVector) -> Result<PadicVector> {
    check_point(&map.t, x)?;
    map.a.add(&map.t.apply(x)).normalize_to_sphere()
}

/// Inverse of a homeomorphic affine sphere map.
pub fn inverse_bar_affine(map: &AffineSphereMap, y: &PadicVector) -> Result<PadicVector> {
    if map.mode != AffineMode::Homeomorphism {
        return Err(Error::NotHomeomorphism);
    }
    check_point(&map.t, y)?;
    map.inverse_formula(y)
}

impl SphereDynamics for AffineSphereMap {
    fn prime(&self) -> Prime {
        self.t.prime()
    }

    fn dim(&self) -> usize {
        self.t.dim()
    }

    fn step(&self, x: &PadicVector) -> Result<PadicVector> {
        apply_bar_affine(self, x)
    }
}
