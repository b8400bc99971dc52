//! Elements of `Q_p` known modulo a power of `p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::padic::{p_power, p_power_int, rat_valuation, residue_int, Prime, Valuation};

/// `p^valuation * unit + O(p^precision)`.
///
/// `unit` is reduced modulo `p^(precision - valuation)` and is prime to `p`,
/// except for a value indistinguishable from zero, which is stored with
/// `valuation = precision` and `unit = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicApprox {
    prime: Prime,
    valuation: i64,
    unit: BigInt,
    precision: i64,
}

impl PadicApprox {
    /// Truncates an exact rational to absolute precision `precision`.
    pub fn from_rational(q: &BigRational, prime: Prime, precision: i64) -> Self {
        match rat_valuation(q, prime) {
            Valuation::Finite(v) if v < precision => {
                let unit = q * p_power(prime, -v);
                let modulus = p_power_int(prime, (precision - v) as u32);
                PadicApprox { prime, valuation: v, unit: residue_int(&unit, &modulus), precision }
            }
            _ => PadicApprox { prime, valuation: precision, unit: BigInt::zero(), precision },
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// The rational `p^valuation * unit` representing this class.
    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.unit.clone()) * p_power(self.prime, self.valuation)
    }

    /// Base-`p` digits of the unit, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigInt::from(self.prime.get());
        let mut u = self.unit.clone();
        let mut out = Vec::with_capacity((self.precision - self.valuation).max(0) as usize);
        for _ in self.valuation..self.precision {
            let (q, r) = u.div_mod_floor(&p);
            out.push(r.to_u64().expect("digit below p"));
            u = q;
        }
        out
    }

    /// Digit string `d_0 d_1 ... * p^v`, most significant digit last,
    /// with digits separated by `.` when `p > 10`.
    pub fn digit_string(&self) -> String {
        let sep = if self.prime.get() > 10 { "." } else { "" };
        let ds: Vec<String> = self.digits().iter().map(u64::to_string).collect();
        if self.is_zero() {
            return format!("O({}^{})", self.prime, self.precision);
        }
        format!("{}*{}^{} + O({}^{})", ds.join(sep), self.prime, self.valuation, self.prime, self.precision)
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digit_string())
    }
}

impl Serialize for PadicApprox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.digit_string())
    }
}
