//! Closed-form iterates of the affine sphere map for small translations.
//!
//! While every step satisfies `||a + TY|| = ||TY||` (guaranteed when
//! `||a|| ||T^-1|| < 1`), with `alpha_j = ||T Y_{j-1}||` and `beta_j = alpha_1 ... alpha_j`
//!
//! ```text
//! Y_j = beta_j T^j x + sum_{i=1..j} (beta_j / beta_{j-i}) T^{i-1} a.
//! ```
//!
//! Each `Y_j` here is rebuilt from this sum rather than from `Y_{j-1}`, so
//! agreement with direct iteration is a genuine check.

use serde::Serialize;

use super::AffineSphereMap;
use crate::error::{Error, Result};
use crate::padic::{NormExp, PadicVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitCoefficients {
    /// `alpha_j` for `j = 1..=J` (index 0 holds `alpha_1`).
    pub alpha: Vec<NormExp>,
    /// `beta_j` for `j = 0..=J`, `beta_0 = 1`.
    pub beta: Vec<NormExp>,
    /// `gamma_j = ||T^-j x||` for `j = 0..=J`.
    pub gamma: Vec<NormExp>,
}

/// Checks `||a|| < 1 / ||T^-1||`, the condition that makes the closed form
/// valid at every step for every start point.
pub fn check_small_translation(map: &AffineSphereMap) -> Result<()> {
    let a = map.translation().norm().exponent().unwrap_or(i64::MIN);
    let inv = map.inverse_matrix().op_norm().exponent().expect("invertible");
    if a + inv < 0 {
        Ok(())
    } else {
        Err(Error::OutsideSafeBall(format!(
            "||a|| = p^{a} is not below 1/||T^-1|| = p^{}",
            -inv
        )))
    }
}

/// Iterates `Y_0, ..., Y_steps` from the closed form.
///
/// Outside the uniform condition of [`check_small_translation`] the norm
/// identity is checked at each step and a violation is an error.
pub fn closed_form_trajectory(
    map: &AffineSphereMap,
    x: &PadicVector,
    steps: usize,
) -> Result<(Vec<PadicVector>, OrbitCoefficients)> {
    let uniform = check_small_translation(map);
    let t = map.matrix();
    let p = t.prime();
    // probe the input through the map so that sphere and shape errors surface
    super::apply_bar_affine(map, x)?;
    let mut tx = vec![x.clone()]; // T^j x
    let mut ta = vec![map.translation().clone()]; // T^j a
    let mut tinv_x = vec![x.clone()];
    for j in 1..=steps {
        tx.push(t.apply(&tx[j - 1]));
        ta.push(t.apply(&ta[j - 1]));
        tinv_x.push(map.inverse_matrix().apply(&tinv_x[j - 1]));
    }
    let mut coeffs = OrbitCoefficients {
        alpha: Vec::with_capacity(steps),
        beta: vec![NormExp::ONE],
        gamma: tinv_x.iter().map(PadicVector::norm).collect(),
    };
    let mut traj = vec![x.clone()];
    for j in 1..=steps {
        let ty = t.apply(&traj[j - 1]);
        let alpha = ty.norm();
        if let Err(e) = &uniform {
            if map.translation().add(&ty).norm() != alpha {
                return Err(Error::OutsideSafeBall(format!("{e}; ||a + T Y_{}|| < ||T Y_{}||", j - 1, j - 1)));
            }
        }
        coeffs.alpha.push(alpha);
        let beta_j = coeffs.beta[j - 1].mul(alpha);
        coeffs.beta.push(beta_j);
        let bj = beta_j.to_rational(p);
        let mut y = tx[j].scale(&bj);
        for i in 1..=j {
            let ratio = &bj / coeffs.beta[j - i].to_rational(p);
            y = y.add(&ta[i - 1].scale(&ratio));
        }
        traj.push(y);
    }
    Ok((traj, coeffs))
}

/// The `j`-th iterate of the affine sphere map from its closed form.
pub fn closed_form_orbit(map: &AffineSphereMap, x: &PadicVector, j: usize) -> Result<(PadicVector, OrbitCoefficients)> {
    let (mut traj, coeffs) = closed_form_trajectory(map, x, j)?;
    Ok((traj.pop().expect("nonempty trajectory"), coeffs))
}
