//! Exact rationals viewed inside `Q_p`: valuations, norm exponents and
//! canonical residues.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Prime;
use crate::error::{Error, Result};

/// Exponent of `p` in a rational, with `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Panics on the zero valuation; callers check for zero first.
    pub fn unwrap(self) -> i64 {
        self.finite().expect("valuation of zero")
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// A p-adic absolute value or norm `p^e`, kept as the integer exponent.
/// `Zero` is the norm of the zero element and sorts below every power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormExp {
    Zero,
    Exp(i64),
}

impl NormExp {
    pub const ONE: NormExp = NormExp::Exp(0);

    pub fn from_valuation(v: Valuation) -> Self {
        match v {
            Valuation::Finite(v) => NormExp::Exp(-v),
            Valuation::Infinite => NormExp::Zero,
        }
    }

    pub fn exponent(self) -> Option<i64> {
        match self {
            NormExp::Exp(e) => Some(e),
            NormExp::Zero => None,
        }
    }

    pub fn is_one(self) -> bool {
        self == NormExp::ONE
    }

    /// Product of two norms.
    pub fn mul(self, other: NormExp) -> NormExp {
        match (self, other) {
            (NormExp::Exp(a), NormExp::Exp(b)) => NormExp::Exp(a + b),
            _ => NormExp::Zero,
        }
    }

    /// The real number `p^e` as an exact rational.
    pub fn to_rational(self, p: Prime) -> BigRational {
        match self {
            NormExp::Exp(e) => p_power(p, e),
            NormExp::Zero => BigRational::zero(),
        }
    }
}

/// Serialized as the exponent, `null` for the norm of zero.
impl serde::Serialize for NormExp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormExp::Exp(e) => s.serialize_i64(*e),
            NormExp::Zero => s.serialize_none(),
        }
    }
}

impl fmt::Display for NormExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormExp::Exp(e) => write!(f, "p^{e}"),
            NormExp::Zero => write!(f, "0"),
        }
    }
}

/// `p^e` as a rational, `e` of either sign.
pub fn p_power(p: Prime, e: i64) -> BigRational {
    let base = BigInt::from(p.get());
    let pow = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(pow)
    } else {
        BigRational::new_raw(BigInt::one(), pow)
    }
}

pub fn p_power_int(p: Prime, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p.get()), e as usize)
}

/// Valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: Prime) -> i64 {
    debug_assert!(!n.is_zero());
    let p = p.get();
    let mut mag: BigUint = n.magnitude().clone();
    if p == 2 {
        return mag.trailing_zeros().unwrap_or(0) as i64;
    }
    let mut v = 0i64;
    // strip a block of factors at a time while it divides
    let chunk = BigUint::from(p).pow(8);
    loop {
        let (q, r) = mag.div_rem(&chunk);
        if !r.is_zero() {
            break;
        }
        mag = q;
        v += 8;
    }
    let pb = BigUint::from(p);
    loop {
        let (q, r) = mag.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        mag = q;
        v += 1;
    }
    v
}

pub fn rat_valuation(q: &BigRational, p: Prime) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_valuation(q.numer(), p) - int_valuation(q.denom(), p))
}

pub fn rat_norm(q: &BigRational, p: Prime) -> NormExp {
    NormExp::from_valuation(rat_valuation(q, p))
}

/// Canonical representative of `q` modulo `p^k Z_p`.
///
/// The result has the form `y / p^e` with `e = max(0, -v(q))` and
/// `0 <= y < p^(k + e)`; it is zero when `q` already lies in `p^k Z_p`.
pub fn residue_mod(q: &BigRational, p: Prime, k: i64) -> BigRational {
    let v = match rat_valuation(q, p) {
        Valuation::Infinite => return BigRational::zero(),
        Valuation::Finite(v) => v,
    };
    if v >= k {
        return BigRational::zero();
    }
    let e = (-v).max(0);
    let shifted = q * p_power(p, e);
    let modulus = p_power_int(p, (k + e) as u32);
    let y = residue_int(&shifted, &modulus);
    BigRational::new(y, p_power_int(p, e as u32))
}

/// `a / b mod m` for a rational whose denominator is invertible mod `m`.
pub fn residue_int(q: &BigRational, modulus: &BigInt) -> BigInt {
    let num = q.numer().mod_floor(modulus);
    if q.denom().is_one() {
        return num;
    }
    let inv = mod_inverse(&q.denom().mod_floor(modulus), modulus)
        .expect("denominator must be a unit modulo p^k");
    (num * inv).mod_floor(modulus)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else if (-&g.gcd).is_one() {
        Some((-g.x).mod_floor(m))
    } else {
        None
    }
}

/// Formats a rational as `num/den`, dropping the denominator when it is 1.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// An element of `Q` inside `Q_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    prime: Prime,
    value: BigRational,
}

impl PadicScalar {
    pub fn new(prime: Prime, value: BigRational) -> Self {
        PadicScalar { prime, value }
    }

    pub fn from_int(prime: Prime, n: i64) -> Self {
        Self::new(prime, BigRational::from_integer(n.into()))
    }

    pub fn parse(prime: Prime, s: &str) -> Result<Self> {
        Ok(Self::new(prime, parse_rational(s)?))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn into_value(self) -> BigRational {
        self.value
    }

    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        rat_valuation(&self.value, self.prime)
    }

    /// `|s|_p` as a norm exponent.
    pub fn abs(&self) -> NormExp {
        NormExp::from_valuation(self.valuation())
    }

    /// `s / p^v(s)`, a p-adic unit (zero stays zero).
    pub fn unit_part(&self) -> BigRational {
        match self.valuation() {
            Valuation::Infinite => BigRational::zero(),
            Valuation::Finite(v) => &self.value * p_power(self.prime, -v),
        }
    }

    pub fn checked_div(&self, other: &PadicScalar) -> Result<PadicScalar> {
        if other.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        Ok(PadicScalar::new(self.prime, &self.value / &other.value))
    }

    pub fn neg(&self) -> PadicScalar {
        PadicScalar::new(self.prime, -&self.value)
    }

    pub fn sign(&self) -> Sign {
        if self.value.is_negative() {
            Sign::Minus
        } else if self.value.is_zero() {
            Sign::NoSign
        } else {
            Sign::Plus
        }
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl std::ops::$tr<&PadicScalar> for &PadicScalar {
            type Output = PadicScalar;
            fn $m(self, rhs: &PadicScalar) -> PadicScalar {
                assert_eq!(self.prime, rhs.prime, "mixed primes");
                PadicScalar::new(self.prime, &self.value $op &rhs.value)
            }
        }
    };
}
scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl PartialOrd for PadicScalar {
    /// Orders by p-adic absolute value only.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.prime != other.prime {
            return None;
        }
        let ord = self.abs().cmp(&other.abs());
        if ord == Ordering::Equal && self != other {
            None
        } else {
            Some(ord)
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}
