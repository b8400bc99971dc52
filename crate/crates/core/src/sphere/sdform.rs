//! SD-forms `T^m = S D`, the safe translation radius, and the construction
//! of non-distal affine sphere maps.

use serde::Serialize;

use super::{apply_bar_affine, AffineSphereMap};
use crate::error::{Error, Result};
use crate::lattice::{minimal_isometry_power, IsometryPower, DEFAULT_CAP};
use crate::linalg::PadicMatrix;
use crate::padic::{distance, p_power, rat_valuation, NormExp, PadicVector};
use crate::spectral::is_distal_projective;

/// `T^m = S D` with `S` an isometry commuting with `T` and with the diagonal
/// `D = diag(p^l_1, ..., p^l_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SDForm {
    t: PadicMatrix,
    m: u64,
    s: PadicMatrix,
    d_exponents: Vec<i64>,
}

impl SDForm {
    /// Verifies every defining identity exactly.
    pub fn new(t: PadicMatrix, m: u64, s: PadicMatrix, d_exponents: Vec<i64>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidSdForm(msg.into()));
        if m == 0 {
            return bad("m must be >= 1");
        }
        t.check_compatible(&s)?;
        if d_exponents.len() != t.dim() {
            return Err(Error::DimensionMismatch { expected: t.dim(), found: d_exponents.len() });
        }
        let d = PadicMatrix::p_power_diagonal(t.prime(), &d_exponents);
        let tm = t.pow(m as i64)?;
        if tm != s.mul(&d) {
            return bad("T^m != S D");
        }
        if !s.commutes_with(&d) {
            return bad("S and D do not commute");
        }
        if !s.commutes_with(&t) {
            return bad("S and T do not commute");
        }
        if !s.is_isometry()? {
            return bad("S is not an isometry");
        }
        Ok(SDForm { t, m, s, d_exponents })
    }

    /// A diagonal `T = diag(u_i p^k_i)` with units `u_i`: `m = 1`,
    /// `S = diag(u_i)`, `D = diag(p^k_i)`.
    pub fn from_diagonal(t: PadicMatrix) -> Result<Self> {
        if !t.is_diagonal() {
            return Err(Error::InvalidSdForm("matrix is not diagonal".into()));
        }
        let p = t.prime();
        let n = t.dim();
        let mut exps = Vec::with_capacity(n);
        let mut units = Vec::with_capacity(n);
        for i in 0..n {
            let k = rat_valuation(t.get(i, i), p).finite().ok_or(Error::Singular)?;
            exps.push(k);
            units.push(t.get(i, i) * p_power(p, -k));
        }
        SDForm::new(t, 1, PadicMatrix::diagonal(p, units), exps)
    }

    /// For a projectively distal `T` with rescaling `p^l T^m` of isometry
    /// power `k`: `T^(mk) = S p^(-lk)` with `S = (p^l T^m)^k`.
    pub fn from_projectively_distal(t: PadicMatrix) -> Result<Self> {
        let verdict = is_distal_projective(&t)?;
        let (m, l) = match (verdict.distal, verdict.rescaling) {
            (true, Some(ml)) => ml,
            _ => return Err(Error::InvalidArgument("matrix is not projectively distal".into())),
        };
        let rescaled = t.pow(m as i64)?.scale(&p_power(t.prime(), l));
        let k = match minimal_isometry_power(&rescaled, DEFAULT_CAP)? {
            IsometryPower::Power(k) => k,
            IsometryPower::NotDistal => unreachable!("rescaled matrix has a flat polygon"),
        };
        let s = rescaled.pow(k as i64)?;
        let n = t.dim();
        SDForm::new(t, m * k, s, vec![-l * k as i64; n])
    }

    pub fn matrix(&self) -> &PadicMatrix {
        &self.t
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn s(&self) -> &PadicMatrix {
        &self.s
    }

    pub fn d_exponents(&self) -> &[i64] {
        &self.d_exponents
    }

    /// `l = min l_i`.
    pub fn l(&self) -> i64 {
        *self.d_exponents.iter().min().expect("n >= 1")
    }

    /// Distinct diagonal exponents in increasing order.
    pub fn levels(&self) -> Vec<i64> {
        let mut v = self.d_exponents.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Coordinates `i` with `l_i = level`.
    pub fn coordinates_at(&self, level: i64) -> Vec<usize> {
        (0..self.d_exponents.len()).filter(|&i| self.d_exponents[i] == level).collect()
    }

    /// `D = p^l Id`: the sphere action is projectively distal.
    pub fn is_scalar(&self) -> bool {
        self.levels().len() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SafeRadiusData {
    pub c0_exponent: i64,
    pub c1_exponent: i64,
    /// Translations of norm at most `p^radius_exponent` are safe.
    pub radius_exponent: i64,
}

impl SafeRadiusData {
    pub fn contains(&self, a: &PadicVector) -> bool {
        a.norm() <= NormExp::Exp(self.radius_exponent)
    }
}

/// `c_0 = min_j 1/||T^-j||`, `c_1 = max_j ||T^j||` over `1 <= j <= max(1, m-1)`;
/// the radius is the largest power of `p` strictly below
/// `min(1, c_0, c_0^2, c_0^2 / c_1^2)`.
///
/// For `m = 1` the range is taken as `j = 1`: an empty range would give the
/// radius `p^-1` even when `||T^-1|| > 1`, and then some `a` in the ball has
/// `||T^-1 a|| = 1`, where the affine sphere map is not defined.
pub fn safe_radius(f: &SDForm) -> Result<SafeRadiusData> {
    let t = &f.t;
    let t_inv = t.inverse()?;
    let top = (f.m.saturating_sub(1)).max(1);
    let mut c0 = i64::MAX;
    let mut c1 = i64::MIN;
    let (mut fw, mut bw) = (t.clone(), t_inv.clone());
    for j in 1..=top {
        if j > 1 {
            fw = fw.mul(t);
            bw = bw.mul(&t_inv);
        }
        c0 = c0.min(-bw.op_norm().exponent().expect("invertible"));
        c1 = c1.max(fw.op_norm().exponent().expect("invertible"));
    }
    let bound = 0.min(c0).min(2 * c0).min(2 * c0 - 2 * c1);
    Ok(SafeRadiusData { c0_exponent: c0, c1_exponent: c1, radius_exponent: bound - 1 })
}

/// Data of a non-distal affine sphere map and its contracting pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonDistalWitness {
    #[serde(serialize_with = "ser_vec")]
    pub a: PadicVector,
    #[serde(serialize_with = "ser_vec")]
    pub x: PadicVector,
    #[serde(serialize_with = "ser_vec")]
    pub z: PadicVector,
    #[serde(serialize_with = "ser_vec")]
    pub y: PadicVector,
    pub l: i64,
    pub l1: i64,
    /// `l1 - l`: the separation at step `km` is `p^(-k decay) ||z||`.
    pub decay: i64,
    pub m: u64,
}

fn ser_vec<S: serde::Serializer>(v: &PadicVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.dim()))?;
    for c in v.to_strings() {
        seq.serialize_element(&c)?;
    }
    seq.end()
}

/// Builds `a`, `x`, `z`, `y = x + z` whose affine orbits approach each other
/// geometrically. `l1` defaults to the smallest diagonal exponent above `l`.
pub fn witness_nondistal(f: &SDForm, l1: Option<i64>) -> Result<NonDistalWitness> {
    if f.is_scalar() {
        return Err(Error::NoWitness);
    }
    let p = f.t.prime();
    let n = f.t.dim();
    let l = f.l();
    let levels = f.levels();
    let l1 = match l1 {
        Some(v) if v > l && levels.contains(&v) => v,
        Some(v) => return Err(Error::InvalidArgument(format!("l1 = {v} is not a diagonal exponent above l = {l}"))),
        None => levels[1],
    };
    let hx = f.coordinates_at(l)[0];
    let hz = f.coordinates_at(l1)[0];
    let one = p_power(p, 0);
    let x = PadicVector::basis(p, n, hx, one.clone());
    let e1 = PadicVector::basis(p, n, hz, one);
    let powers: Vec<PadicMatrix> = (0..f.m).map(|j| f.t.pow(j as i64)).collect::<Result<_>>()?;
    let x_norms: Vec<i64> = powers.iter().map(|tj| tj.apply(&x).norm().exponent().unwrap()).collect();
    let e_norms: Vec<i64> = powers.iter().map(|tj| tj.apply(&e1).norm().exponent().unwrap()).collect();
    // ||T^j p^s e|| = p^-s ||T^j e||; smallest s beating every x norm
    let s = (0..f.m as usize).map(|j| e_norms[j] - x_norms[j] + 1).max().unwrap().max(0);
    let z = e1.scale(&p_power(p, s));
    let radius = safe_radius(f)?;
    let a = PadicVector::basis(p, n, hx, p_power(p, -radius.radius_exponent));
    let y = x.add(&z);
    Ok(NonDistalWitness { a, x, z, y, l, l1, decay: l1 - l, m: f.m })
}

/// Replays the affine orbits of `x` and `y` and checks the separation at
/// step `km` equals `p^(-k decay) ||z||` for `k = 1..=k_max`.
pub fn verify_witness(f: &SDForm, w: &NonDistalWitness, k_max: u64) -> Result<bool> {
    let map = AffineSphereMap::new(f.t.clone(), w.a.clone())?;
    let z_exp = w.z.norm().exponent().expect("nonzero z");
    let (mut x, mut y) = (w.x.clone(), w.y.clone());
    for k in 1..=k_max {
        for _ in 0..f.m {
            x = apply_bar_affine(&map, &x)?;
            y = apply_bar_affine(&map, &y)?;
        }
        if distance(&x, &y) != NormExp::Exp(z_exp - k as i64 * w.decay) {
            return Ok(false);
        }
    }
    Ok(true)
}
