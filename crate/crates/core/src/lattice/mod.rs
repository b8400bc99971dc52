//! Lattice classes and their orbits: the finiteness checks behind isometry
//! powers and group compactness.

mod canonical;
mod orbit;

pub use canonical::{canonicalize, LatticeClass, LatticeMode};
pub use orbit::{
    group_boundedness, is_unbounded_in, minimal_isometry_power, scan_for_witness,
    standard_lattice_period, verify_orbit_closed, word_product, Boundedness,
    BoundednessCertificate, ElementWitness, IsometryPower, DEFAULT_CAP, DEFAULT_SCAN_LENGTH,
};
