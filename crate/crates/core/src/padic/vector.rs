use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::scalar::{format_rational, parse_rational, rat_norm, rat_valuation};
use super::{NormExp, PadicScalar, Prime, Valuation};
use crate::error::{Error, Result};

/// A vector in `Q_p^n` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicVector {
    prime: Prime,
    components: Vec<BigRational>,
}

impl PadicVector {
    pub fn new(prime: Prime, components: Vec<BigRational>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("vector must have length >= 1".into()));
        }
        Ok(PadicVector { prime, components })
    }

    pub fn from_ints(prime: Prime, xs: &[i64]) -> Self {
        Self::new(prime, xs.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .expect("nonempty")
    }

    pub fn parse(prime: Prime, xs: &[&str]) -> Result<Self> {
        Self::new(prime, xs.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)
    }

    pub fn zeros(prime: Prime, n: usize) -> Self {
        Self::new(prime, vec![BigRational::zero(); n]).expect("nonempty")
    }

    /// The `i`-th standard basis vector scaled by `c`.
    pub fn basis(prime: Prime, n: usize, i: usize, c: BigRational) -> Self {
        let mut v = Self::zeros(prime, n);
        v.components[i] = c;
        v
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[BigRational] {
        &self.components
    }

    pub fn into_components(self) -> Vec<BigRational> {
        self.components
    }

    pub fn get(&self, i: usize) -> PadicScalar {
        PadicScalar::new(self.prime, self.components[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }

    /// Max-norm `||v||_p`.
    pub fn norm(&self) -> NormExp {
        self.components
            .iter()
            .map(|c| rat_norm(c, self.prime))
            .max()
            .unwrap_or(NormExp::Zero)
    }

    /// Minimum coordinate valuation (the negated norm exponent).
    pub fn min_valuation(&self) -> Valuation {
        self.components
            .iter()
            .map(|c| rat_valuation(c, self.prime))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn is_on_sphere(&self) -> bool {
        self.norm().is_one()
    }

    pub fn check_on_sphere(&self) -> Result<()> {
        if self.is_on_sphere() {
            Ok(())
        } else {
            Err(Error::OffSphere(self.norm().to_string()))
        }
    }

    /// Multiplies by the rational number `||v||_p`, landing on the sphere.
    pub fn normalize_to_sphere(&self) -> Result<PadicVector> {
        let norm = self.norm();
        if norm == NormExp::Zero {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(&norm.to_rational(self.prime)))
    }

    pub fn scale(&self, c: &BigRational) -> PadicVector {
        PadicVector {
            prime: self.prime,
            components: self.components.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &PadicVector) -> PadicVector {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PadicVector) -> PadicVector {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &PadicVector,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> PadicVector {
        assert_eq!(self.prime, other.prime, "mixed primes");
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        PadicVector {
            prime: self.prime,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Coordinates as `num/den` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(format_rational).collect()
    }
}

/// `||x - y||_p`.
pub fn distance(x: &PadicVector, y: &PadicVector) -> NormExp {
    x.sub(y).norm()
}

impl fmt::Display for PadicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}
