//! The decomposition `Q_p^n = C(T) + M(T) + C(T^-1)` at tracked precision.
//!
//! The characteristic polynomial is split by slope sign with [`slope_factor`];
//! each subspace is the kernel of the corresponding factor evaluated at `T`.
//! Kernels are computed by Gaussian elimination with full pivoting on
//! entries known modulo `p^delta`: pivots of minimal valuation keep every
//! multiplier integral, so the absolute error never drops below `p^delta`
//! during elimination and grows by at most the largest pivot valuation during
//! back substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::approx::PadicApprox;
use super::poly::{reversed, slope_factor, Poly};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalue_valuations, PadicMatrix};
use crate::padic::{rat_valuation, residue_mod, Prime, Valuation};

pub const DEFAULT_PRECISION: u32 = 40;
pub const MAX_PRECISION: u32 = 640;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitDims {
    pub contracting: usize,
    pub neutral: usize,
    pub expanding: usize,
}

/// Bases of `C(T)`, `M(T)` and `C(T^-1)`, each vector on the unit sphere
/// with some coordinate exactly 1, known to absolute precision `precision`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralSplit {
    pub p: Prime,
    pub dims: SplitDims,
    pub precision: i64,
    pub contracting: Vec<Vec<PadicApprox>>,
    pub neutral: Vec<Vec<PadicApprox>>,
    pub expanding: Vec<Vec<PadicApprox>>,
}

impl SpectralSplit {
    /// Basis vectors truncated to rationals.
    pub fn rational_basis(basis: &[Vec<PadicApprox>]) -> Vec<Vec<BigRational>> {
        basis.iter().map(|v| v.iter().map(PadicApprox::to_rational).collect()).collect()
    }
}

/// Characteristic polynomial scaled to a primitive integer polynomial.
fn primitive_char_poly(t: &PadicMatrix) -> Poly {
    let c = t.char_poly();
    let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Slope factors `(f_-, f_0, f_+)` of the characteristic polynomial modulo
/// `p^k`, whose roots have positive, zero and negative valuation.
pub fn slope_factors(t: &PadicMatrix, k: u32) -> Result<(Poly, Poly, Poly)> {
    let slopes = eigenvalue_valuations(t)?;
    let (d_minus, _, d_plus) = slopes.sign_dims();
    let f = primitive_char_poly(t);
    let (g, f_minus) = slope_factor(&f, d_minus, t.prime(), k);
    let (g2, h2) = slope_factor(&reversed(&g), d_plus, t.prime(), k);
    Ok((f_minus, reversed(&g2), reversed(&h2)))
}

/// `f(T)` for an integer polynomial `f`, together with the absolute precision
/// `k + min(0, min_i v(T^i))` it inherits from coefficients known mod `p^k`.
fn eval_at(t: &PadicMatrix, f: &[BigInt], k: i64) -> (Vec<Vec<BigRational>>, i64) {
    let n = t.dim();
    let p = t.prime();
    let mut acc = PadicMatrix::zeros(p, n);
    let mut power = PadicMatrix::identity(p, n);
    let mut low = 0i64;
    for (i, c) in f.iter().enumerate() {
        if i > 0 {
            power = power.mul(t);
        }
        if let Valuation::Finite(v) = power.min_valuation() {
            low = low.min(v);
        }
        if !c.is_zero() {
            acc = acc.add(&power.scale(&BigRational::from_integer(c.clone())));
        }
    }
    (acc.rows(), k + low)
}

/// Kernel basis of an `n x n` matrix whose entries are known modulo
/// `p^delta`, given its exact rank. Returns the basis and its absolute
/// precision, or `None` if the entries do not determine the kernel.
pub(crate) fn approx_kernel(
    mut a: Vec<Vec<BigRational>>,
    p: Prime,
    delta: i64,
    rank: usize,
) -> Option<(Vec<Vec<BigRational>>, i64)> {
    let n = a.len();
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = residue_mod(x, p, delta);
        }
    }
    let mut cols: Vec<usize> = (0..n).collect();
    let mut max_pivot = 0i64;
    for k in 0..rank {
        let (pi, pj, pv) = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| rat_valuation(&a[i][cols[j]], p).finite().map(|v| (i, j, v)))
            .min_by_key(|&(i, j, v)| (v, i, j))?;
        if pv >= delta {
            return None;
        }
        max_pivot = max_pivot.max(pv);
        a.swap(k, pi);
        cols.swap(k, pj);
        let piv = a[k][cols[k]].clone();
        for i in k + 1..n {
            if a[i][cols[k]].is_zero() {
                continue;
            }
            let f = &a[i][cols[k]] / &piv;
            for j in k..n {
                let c = cols[j];
                let v = &a[i][c] - &f * &a[k][c];
                a[i][c] = residue_mod(&v, p, delta);
            }
        }
    }
    // the remaining block must vanish to the working precision
    for row in a.iter().skip(rank) {
        for &c in &cols[rank..] {
            if rat_valuation(&row[c], p) < Valuation::Finite(delta) {
                return None;
            }
        }
    }
    let prec = delta - max_pivot;
    let mut basis = Vec::with_capacity(n - rank);
    for free in rank..n {
        let mut x = vec![BigRational::zero(); n];
        x[cols[free]] = BigRational::one();
        for k in (0..rank).rev() {
            let mut s = BigRational::zero();
            for j in k + 1..n {
                let c = cols[j];
                if !x[c].is_zero() && !a[k][c].is_zero() {
                    s += &a[k][c] * &x[c];
                }
            }
            let v = -s / &a[k][cols[k]];
            x[cols[k]] = residue_mod(&v, p, prec);
        }
        basis.push(x);
    }
    Some((basis, prec))
}

/// Splits `Q_p^n` into contracting, neutral and expanding subspaces of `T`,
/// lifting the slope factorization modulo `p^precision`.
pub fn contraction_split(t: &PadicMatrix, precision: u32) -> Result<SpectralSplit> {
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be >= 1".into()));
    }
    let n = t.dim();
    let p = t.prime();
    let (d_minus, d_zero, d_plus) = eigenvalue_valuations(t)?.sign_dims();
    let (f_minus, f_zero, f_plus) = slope_factors(t, precision)?;
    let insufficient = || Error::Precision { given: precision, required: precision.saturating_mul(2) };
    let mut bases = Vec::with_capacity(3);
    let mut certified = i64::MAX;
    for (f, d) in [(&f_minus, d_minus), (&f_zero, d_zero), (&f_plus, d_plus)] {
        let (a, delta) = eval_at(t, f, precision as i64);
        let (basis, prec) = approx_kernel(a, p, delta, n - d).ok_or_else(insufficient)?;
        if d > 0 {
            certified = certified.min(prec);
        }
        bases.push(basis);
    }
    if certified < 1 {
        return Err(insufficient());
    }
    let to_approx = |b: &Vec<Vec<BigRational>>| -> Vec<Vec<PadicApprox>> {
        b.iter()
            .map(|v| v.iter().map(|x| PadicApprox::from_rational(x, p, certified)).collect())
            .collect()
    };
    Ok(SpectralSplit {
        p,
        dims: SplitDims { contracting: d_minus, neutral: d_zero, expanding: d_plus },
        precision: certified,
        contracting: to_approx(&bases[0]),
        neutral: to_approx(&bases[1]),
        expanding: to_approx(&bases[2]),
    })
}

/// [`contraction_split`] starting at `precision`, doubling on precision
/// errors up to [`MAX_PRECISION`].
pub fn contraction_split_auto(t: &PadicMatrix, precision: u32) -> Result<SpectralSplit> {
    let mut n = precision.max(1);
    loop {
        match contraction_split(t, n) {
            Err(Error::Precision { .. }) if n < MAX_PRECISION => n = (n * 2).min(MAX_PRECISION),
            r => return r,
        }
    }
}

/// Valuation of the part of `w` not explained by `basis`, after eliminating
/// with full pivoting, and the valuation below which that residual would be
/// significant given absolute errors of order `p^err` in all inputs.
pub fn span_residual(basis: &[Vec<BigRational>], w: &[BigRational], p: Prime, err: i64) -> (Valuation, i64) {
    let n = w.len();
    let mut b: Vec<Vec<BigRational>> = basis.to_vec();
    let mut w = w.to_vec();
    let mut used_rows = vec![false; n];
    let mut bound = err;
    for k in 0..b.len() {
        let (ci, ri, v) = match (k..b.len())
            .flat_map(|c| (0..n).filter(|&r| !used_rows[r]).map(move |r| (c, r)))
            .filter_map(|(c, r)| rat_valuation(&b[c][r], p).finite().map(|v| (c, r, v)))
            .min_by_key(|&(c, r, v)| (v, c, r))
        {
            Some(x) => x,
            None => break,
        };
        bound = bound.min(err - v);
        b.swap(k, ci);
        used_rows[ri] = true;
        let piv = b[k][ri].clone();
        let fw = &w[ri] / &piv;
        for r in 0..n {
            w[r] = &w[r] - &fw * &b[k][r];
        }
        for c in k + 1..b.len() {
            let f = &b[c][ri] / &piv;
            for r in 0..n {
                let v = &b[c][r] - &f * &b[k][r];
                b[c][r] = v;
            }
        }
    }
    let res = w.iter().map(|x| rat_valuation(x, p)).min().unwrap_or(Valuation::Infinite);
    (res, bound)
}

/// `true` if every entry has valuation at least `k`.
pub fn vanishes_mod(v: &[BigRational], p: Prime, k: i64) -> bool {
    v.iter().all(|x| rat_valuation(x, p) >= Valuation::Finite(k))
}
