//! Dynamics on the unit sphere `S_n = {x : ||x||_p = 1}`: the normalized
//! linear action, affine perturbations, their closed-form orbits, and the
//! tools that demonstrate (non-)distality on concrete points.

mod closed_form;
mod maps;
mod sdform;
mod search;

pub use closed_form::{check_small_translation, closed_form_orbit, closed_form_trajectory, OrbitCoefficients};
pub use maps::{apply_bar, apply_bar_affine, inverse_bar_affine, AffineMode, AffineSphereMap, SphereMap};
pub use sdform::{safe_radius, verify_witness, witness_nondistal, NonDistalWitness, SDForm, SafeRadiusData};
pub use search::{
    pair_separation_series, proximal_pair_candidates, proximality_search, random_sphere_vector, PairSampler,
    ProximalHit, DEFAULT_SAMPLE_DIGITS,
};

use crate::error::Result;
use crate::padic::{PadicVector, Prime};

/// A self-map of the unit sphere that can be iterated exactly.
pub trait SphereDynamics: Sync {
    fn prime(&self) -> Prime;
    fn dim(&self) -> usize;
    fn step(&self, x: &PadicVector) -> Result<PadicVector>;
}
