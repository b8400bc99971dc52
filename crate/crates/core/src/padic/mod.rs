//! Exact p-adic scalars and vectors over the rationals.

mod prime;
pub mod scalar;
mod vector;

pub use prime::Prime;
pub use scalar::{
    format_rational, int_valuation, mod_inverse, p_power, p_power_int, parse_rational, rat_norm,
    rat_valuation, residue_int, residue_mod, NormExp, PadicScalar, Valuation,
};
pub use vector::{distance, PadicVector};
