//! Canonical bases of `Z_p`-lattices in `Q_p^n`.
//!
//! A lattice is the `Z_p`-span of the columns of an invertible matrix. Its
//! canonical basis is the column Hermite form: upper triangular, diagonal
//! entries `p^k_i`, and each entry above the diagonal in row `r` reduced to
//! the fixed residue system modulo `p^k_r` (see [`residue_mod`]).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::PadicMatrix;
use crate::padic::{int_valuation, mod_inverse, p_power, p_power_int, rat_valuation, residue_int, Prime, Valuation};

/// Equality of lattices (`Gl`) or of homothety classes `{p^k L}` (`Pgl`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LatticeMode {
    Gl,
    Pgl,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    mode: LatticeMode,
    basis: PadicMatrix,
}

impl LatticeClass {
    /// The class of `Z_p^n`.
    pub fn standard(prime: Prime, n: usize, mode: LatticeMode) -> Self {
        LatticeClass { mode, basis: PadicMatrix::identity(prime, n) }
    }

    pub fn mode(&self) -> LatticeMode {
        self.mode
    }

    pub fn basis(&self) -> &PadicMatrix {
        &self.basis
    }

    /// Exponents `k_i` of the diagonal of the canonical basis.
    pub fn diagonal_exponents(&self) -> Vec<i64> {
        let n = self.basis.dim();
        let p = self.basis.prime();
        (0..n).map(|i| rat_valuation(self.basis.get(i, i), p).unwrap()).collect()
    }

    /// Canonical class of `T L`.
    pub fn apply(&self, t: &PadicMatrix) -> Result<LatticeClass> {
        let tv = rat_valuation(&t.det(), t.prime()).finite().ok_or(Error::Singular)?;
        let det_val = tv + self.diagonal_exponents().iter().sum::<i64>();
        canonicalize_with_det(&t.mul(&self.basis), self.mode, det_val)
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.mode, self.basis)
    }
}

pub fn canonicalize(basis: &PadicMatrix, mode: LatticeMode) -> Result<LatticeClass> {
    let det_val = rat_valuation(&basis.det(), basis.prime()).finite().ok_or(Error::Singular)?;
    canonicalize_with_det(basis, mode, det_val)
}

fn canonicalize_with_det(basis: &PadicMatrix, mode: LatticeMode, det_val: i64) -> Result<LatticeClass> {
    let p = basis.prime();
    let n = basis.dim();
    let cols: Vec<Vec<BigRational>> =
        (0..n).map(|j| (0..n).map(|i| basis.get(i, j).clone()).collect()).collect();
    let mut cols = hermite_mod(&cols, p, det_val)?;
    if mode == LatticeMode::Pgl {
        // dividing a canonical basis by p^c gives the canonical basis of p^-c L
        let content = cols
            .iter()
            .flatten()
            .map(|x| rat_valuation(x, p))
            .min()
            .and_then(Valuation::finite)
            .unwrap_or(0);
        if content != 0 {
            let s = p_power(p, -content);
            for x in cols.iter_mut().flatten() {
                *x = &*x * &s;
            }
        }
    }
    let mut m = PadicMatrix::zeros(p, n);
    for (j, c) in cols.into_iter().enumerate() {
        for (i, x) in c.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(LatticeClass { mode, basis: m })
}

/// Column Hermite form computed with integers modulo a fixed power of `p`.
///
/// With `lo` the least entry valuation and `D = v(det)`, Cramer's rule shows
/// `p^(D - (n-1) lo) Z_p^n` lies in the lattice, so after scaling by `p^-lo`
/// every column operation may be reduced modulo `p^N`, `N = D - n lo`. The
/// generators `p^N e_i` are kept implicit.
fn hermite_mod(cols: &[Vec<BigRational>], p: Prime, det_val: i64) -> Result<Vec<Vec<BigRational>>> {
    let n = cols.len();
    let lo = cols.iter().flatten().filter_map(|x| rat_valuation(x, p).finite()).min().ok_or(Error::Singular)?;
    let big_n = det_val - n as i64 * lo;
    if big_n < 0 {
        return Err(Error::Singular);
    }
    let modulus = p_power_int(p, big_n as u32);
    let shift = p_power(p, -lo);
    let mut gens: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|c| c.iter().map(|x| residue_int(&(x * &shift), &modulus)).collect())
        .collect();
    let val = |x: &BigInt| if x.is_zero() { big_n } else { int_valuation(x, p).min(big_n) };
    let mut pivots: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    let mut diag = vec![0i64; n];
    for i in (0..n).rev() {
        gens.retain(|g| g.iter().any(|x| !x.is_zero()));
        let best = gens.iter().enumerate().map(|(c, g)| (val(&g[i]), c)).min();
        match best {
            Some((pv, c)) if pv < big_n => {
                let mut piv = gens.swap_remove(c);
                let pk = p_power_int(p, pv as u32);
                let unit = &piv[i] / &pk;
                let inv = mod_inverse(&unit, &modulus).expect("unit modulo p^N");
                for x in piv.iter_mut() {
                    *x = (&*x * &inv).mod_floor(&modulus);
                }
                for g in gens.iter_mut() {
                    if g[i].is_zero() {
                        continue;
                    }
                    let f = &g[i] / &pk;
                    for r in 0..=i {
                        g[r] = (&g[r] - &f * &piv[r]).mod_floor(&modulus);
                    }
                }
                // p^N e_i - p^(N - pv) piv is a new generator with zero row i
                let f = p_power_int(p, (big_n - pv) as u32);
                let mut w: Vec<BigInt> = piv.iter().map(|x| (-(&f * x)).mod_floor(&modulus)).collect();
                w[i] = BigInt::zero();
                gens.push(w);
                diag[i] = pv;
                pivots[i] = piv;
            }
            _ => {
                // row i vanishes modulo p^N: the pivot is p^N e_i itself
                for g in gens.iter_mut() {
                    g[i] = BigInt::zero();
                }
                let mut e = vec![BigInt::zero(); n];
                e[i] = modulus.clone();
                diag[i] = big_n;
                pivots[i] = e;
            }
        }
    }
    for (i, piv) in pivots.iter_mut().enumerate() {
        piv[i] = p_power_int(p, diag[i] as u32);
    }
    // reduce row r of column j to [0, p^k_r), right to left
    for j in 1..n {
        for r in (0..j).rev() {
            let pk = p_power_int(p, diag[r] as u32);
            let (quot, rem) = pivots[j][r].div_mod_floor(&pk);
            if quot.is_zero() {
                continue;
            }
            let (left, right) = pivots.split_at_mut(j);
            let col_r = &left[r];
            let col_j = &mut right[0];
            for t in 0..r {
                col_j[t] = (&col_j[t] - &quot * &col_r[t]).mod_floor(&modulus);
            }
            col_j[r] = rem;
        }
    }
    let back = p_power(p, lo);
    Ok(pivots
        .into_iter()
        .map(|c| c.into_iter().map(|y| BigRational::from_integer(y) * &back).collect())
        .collect())
}
