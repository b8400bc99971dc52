use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::scalar::{format_rational, parse_rational, rat_norm, rat_valuation};
use crate::padic::{p_power, NormExp, PadicVector, Prime, Valuation};

/// A square matrix over `Q`, viewed in `M_n(Q_p)`. Entries are row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicMatrix {
    prime: Prime,
    n: usize,
    entries: Vec<BigRational>,
}

impl PadicMatrix {
    pub fn new(prime: Prime, n: usize, entries: Vec<BigRational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        Ok(PadicMatrix { prime, n, entries })
    }

    pub fn from_rows(prime: Prime, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            entries.extend(row);
        }
        Self::new(prime, n, entries)
    }

    /// Builds a matrix from rows of `num/den` strings.
    pub fn parse<S: AsRef<str>>(prime: Prime, rows: &[Vec<S>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(prime, rows)
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        Self::scalar(prime, n, BigRational::one())
    }

    pub fn scalar(prime: Prime, n: usize, c: BigRational) -> Self {
        let mut m = Self::zeros(prime, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn zeros(prime: Prime, n: usize) -> Self {
        PadicMatrix { prime, n, entries: vec![BigRational::zero(); n * n] }
    }

    pub fn diagonal(prime: Prime, diag: Vec<BigRational>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(prime, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    /// `diag(p^e_1, ..., p^e_n)`.
    pub fn p_power_diagonal(prime: Prime, exponents: &[i64]) -> Self {
        Self::diagonal(prime, exponents.iter().map(|&e| p_power(prime, e)).collect())
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> PadicVector {
        PadicVector::new(self.prime, (0..self.n).map(|i| self.get(i, j).clone()).collect())
            .expect("n >= 1")
    }

    pub fn from_columns(prime: Prime, cols: &[PadicVector]) -> Result<Self> {
        let n = cols.len();
        let mut m = Self::zeros(prime, n);
        for (j, c) in cols.iter().enumerate() {
            if c.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
            }
            for i in 0..n {
                m.set(i, j, c.components()[i].clone());
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn check_compatible(&self, other: &PadicMatrix) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch { expected: self.prime.get(), found: other.prime.get() });
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn mul(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.prime, other.prime, "mixed primes");
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        acc += a * b;
                    }
                }
                out.push(acc);
            }
        }
        PadicMatrix { prime: self.prime, n, entries: out }
    }

    pub fn add(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        PadicMatrix {
            prime: self.prime,
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        PadicMatrix {
            prime: self.prime,
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> PadicMatrix {
        PadicMatrix {
            prime: self.prime,
            n: self.n,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn apply(&self, v: &PadicVector) -> PadicVector {
        assert_eq!(v.dim(), self.n, "dimension mismatch");
        let comps = (0..self.n)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, x) in v.components().iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect();
        PadicVector::new(self.prime, comps).expect("n >= 1")
    }

    /// `T^k` for `k >= 0`; negative `k` goes through the inverse.
    pub fn pow(&self, k: i64) -> Result<PadicMatrix> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = PadicMatrix::identity(self.prime, self.n);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<PadicMatrix> {
        let n = self.n;
        let mut a = self.rows();
        let mut inv = PadicMatrix::identity(self.prime, n).rows();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let d = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &d;
                inv[col][j] = &inv[col][j] / &d;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
        PadicMatrix::from_rows(self.prime, inv)
    }

    /// Determinant by fraction-free Bareiss elimination on the cleared integer matrix.
    pub fn det(&self) -> BigRational {
        let (m, d) = self.integer_form();
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = m.chunks(n).map(|r| r.to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigRational::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det_m = sign * &a[n - 1][n - 1];
        BigRational::new(det_m, num_traits::pow(d, n))
    }

    /// Writes the matrix as `M / d` with `M` integral and `d > 0`.
    pub fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let d = self.entries.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let m = self.entries.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect();
        (m, d)
    }

    /// Smallest entry valuation.
    pub fn min_valuation(&self) -> Valuation {
        self.entries
            .iter()
            .map(|x| rat_valuation(x, self.prime))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Operator norm for the max-norm: the largest entry absolute value.
    pub fn op_norm(&self) -> NormExp {
        self.entries.iter().map(|x| rat_norm(x, self.prime)).max().unwrap_or(NormExp::Zero)
    }

    /// `||T|| = 1 = ||T^-1||`.
    pub fn is_isometry(&self) -> Result<bool> {
        if !self.op_norm().is_one() {
            // still reject singular input
            if self.det().is_zero() {
                return Err(Error::Singular);
            }
            return Ok(false);
        }
        Ok(self.inverse()?.op_norm().is_one())
    }

    pub fn commutes_with(&self, other: &PadicMatrix) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Characteristic polynomial `det(xI - T)`, coefficients in ascending degree.
    ///
    /// Computed division-free (Berkowitz) on the cleared integer matrix `M = dT`,
    /// then rescaled: `c_k(T) = c_k(M) d^(k-n)`.
    pub fn char_poly(&self) -> Vec<BigRational> {
        let (m, d) = self.integer_form();
        let n = self.n;
        let rows: Vec<Vec<BigInt>> = m.chunks(n).map(|r| r.to_vec()).collect();
        let desc = berkowitz(&rows);
        // desc is leading-first: desc[0] = 1 is the x^n coefficient
        (0..=n)
            .map(|k| {
                let a = &desc[n - k];
                let scale = num_traits::pow(d.clone(), n - k);
                BigRational::new(a.clone(), scale)
            })
            .collect()
    }
}

/// Berkowitz's division-free characteristic polynomial. Returns the
/// coefficients of `det(xI - A)` with the leading coefficient first.
fn berkowitz(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    // Grow from the bottom-right 1x1 block outwards.
    let mut poly = vec![BigInt::one(), -a[n - 1][n - 1].clone()];
    for s in (0..n - 1).rev() {
        // block A_s = a[s..][s..], partition with a11 = a[s][s]
        let size = n - s;
        let sub = size - 1;
        let r: Vec<&BigInt> = (s + 1..n).map(|j| &a[s][j]).collect();
        let c: Vec<BigInt> = (s + 1..n).map(|i| a[i][s].clone()).collect();
        // q = [1, -a11, -R C, -R A1 C, ..., -R A1^(sub-1) C]
        let mut q = Vec::with_capacity(size + 1);
        q.push(BigInt::one());
        q.push(-a[s][s].clone());
        let mut v = c;
        for k in 0..sub {
            let rv: BigInt = r.iter().zip(&v).map(|(x, y)| *x * y).sum();
            q.push(-rv);
            if k + 1 < sub {
                v = (0..sub)
                    .map(|i| (0..sub).map(|j| &a[s + 1 + i][s + 1 + j] * &v[j]).sum())
                    .collect();
            }
        }
        // Toeplitz product: new[i] = sum_j q[i-j] * poly[j]
        let new: Vec<BigInt> = (0..=size)
            .map(|i| (0..=sub).filter(|&j| j <= i).map(|j| &q[i - j] * &poly[j]).sum())
            .collect();
        poly = new;
    }
    poly
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|r| format!("[{}]", r.iter().map(format_rational).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
