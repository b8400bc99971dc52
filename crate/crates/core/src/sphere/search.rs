//! Separation series and the empirical search for proximal pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::SphereDynamics;
use crate::error::Result;
use crate::linalg::{eigenvalue_valuations, PadicMatrix};
use crate::padic::{distance, p_power, p_power_int, NormExp, PadicVector, Prime};
use crate::spectral::{contraction_split_auto, SpectralSplit, DEFAULT_PRECISION};

pub const DEFAULT_SAMPLE_DIGITS: u32 = 6;

/// `||f^j(x) - f^j(y)||` for `j = 0..=steps`.
pub fn pair_separation_series<M: SphereDynamics + ?Sized>(
    map: &M,
    x: &PadicVector,
    y: &PadicVector,
    steps: usize,
) -> Result<Vec<NormExp>> {
    let (mut a, mut b) = (x.clone(), y.clone());
    let mut out = Vec::with_capacity(steps + 1);
    out.push(distance(&a, &b));
    for _ in 0..steps {
        a = map.step(&a)?;
        b = map.step(&b)?;
        out.push(distance(&a, &b));
    }
    Ok(out)
}

/// Deterministic source of sphere pairs: explicit pairs first, then
/// uniform samples whose coordinates are drawn from `{0, ..., p^digits - 1}`
/// and rescaled to the sphere. Sample `i` depends only on `(seed, i)`.
#[derive(Debug, Clone)]
pub struct PairSampler {
    pub pairs: Vec<(PadicVector, PadicVector)>,
    pub seed: u64,
    pub digits: u32,
}

impl PairSampler {
    pub fn uniform(seed: u64) -> Self {
        PairSampler { pairs: Vec::new(), seed, digits: DEFAULT_SAMPLE_DIGITS }
    }

    pub fn with_pairs(pairs: Vec<(PadicVector, PadicVector)>, seed: u64) -> Self {
        PairSampler { pairs, seed, digits: DEFAULT_SAMPLE_DIGITS }
    }

    pub fn sample(&self, prime: Prime, n: usize, index: usize) -> (PadicVector, PadicVector) {
        if let Some(pair) = self.pairs.get(index) {
            return pair.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        loop {
            let x = random_sphere_vector(&mut rng, prime, n, self.digits);
            let y = random_sphere_vector(&mut rng, prime, n, self.digits);
            if x != y {
                return (x, y);
            }
        }
    }
}

/// Uniform coordinates in `{0, ..., p^digits - 1}`, rescaled to the sphere.
pub fn random_sphere_vector<R: Rng>(rng: &mut R, prime: Prime, n: usize, digits: u32) -> PadicVector {
    let bound = p_power_int(prime, digits);
    let bound = u64::try_from(bound).unwrap_or(u64::MAX);
    loop {
        let xs: Vec<i64> = (0..n).map(|_| rng.gen_range(0..bound) as i64).collect();
        if xs.iter().any(|&c| c != 0) {
            return PadicVector::from_ints(prime, &xs).normalize_to_sphere().expect("nonzero");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProximalHit {
    pub sample: usize,
    #[serde(serialize_with = "ser_vec")]
    pub x: PadicVector,
    #[serde(serialize_with = "ser_vec")]
    pub y: PadicVector,
    pub step: usize,
    pub separation: NormExp,
}

pub(crate) fn ser_vec<S: serde::Serializer>(v: &PadicVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.to_strings())
}

/// First sampled pair (by sample index) whose separation drops to at most
/// `p^threshold` within `steps` steps. Pairs that start that close are
/// skipped, so a hit always reflects contraction by the dynamics.
pub fn proximality_search<M: SphereDynamics + ?Sized>(
    map: &M,
    sampler: &PairSampler,
    samples: usize,
    steps: usize,
    threshold: i64,
) -> Result<Option<ProximalHit>> {
    if threshold >= 0 {
        return Err(crate::Error::InvalidArgument("threshold exponent must be negative".into()));
    }
    let limit = NormExp::Exp(threshold);
    let found = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<Option<ProximalHit>> {
            let (x, y) = sampler.sample(map.prime(), map.dim(), i);
            let (mut a, mut b) = (x.clone(), y.clone());
            if distance(&a, &b) <= limit {
                return Ok(None);
            }
            for step in 1..=steps {
                a = map.step(&a)?;
                b = map.step(&b)?;
                let sep = distance(&a, &b);
                if sep <= limit {
                    return Ok(Some(ProximalHit { sample: i, x, y, step, separation: sep }));
                }
            }
            Ok(None)
        })
        .find_first(|r| !matches!(r, Ok(None)));
    found.unwrap_or(Ok(None))
}

/// Pairs `(x, x + p z)` with `x` a standard basis vector and `z` a rational
/// truncation of a vector along which `T` contracts relative to its
/// dominant eigenvalues. Empty when all eigenvalues share one valuation.
pub fn proximal_pair_candidates(t: &PadicMatrix) -> Result<Vec<(PadicVector, PadicVector)>> {
    let slopes = eigenvalue_valuations(t)?;
    if slopes.distinct() < 2 {
        return Ok(Vec::new());
    }
    let p = t.prime();
    let n = t.dim();
    // p^-a T^b has valuations b (r - r_min) >= 0, vanishing on the dominant part
    let r = slopes.min();
    let (a, b) = (*r.numer(), *r.denom());
    let scaled = t.pow(b)?.scale(&p_power(p, -a));
    let split = contraction_split_auto(&scaled, DEFAULT_PRECISION)?;
    let zs = SpectralSplit::rational_basis(&split.contracting);
    let mut out = Vec::new();
    for z in zs {
        let z = PadicVector::new(p, z)?.scale(&p_power(p, 1));
        for i in 0..n {
            let x = PadicVector::basis(p, n, i, p_power(p, 0));
            out.push((x.clone(), x.add(&z)));
        }
    }
    Ok(out)
}
