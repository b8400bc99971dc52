//! Distality verdicts for finitely generated semigroups acting on the sphere.
//!
//! The semigroup acts distally exactly when the closure of the group it
//! generates is compact modulo scalars, so the analysis runs the lattice
//! orbit search on the generated group. With every generator of unit
//! determinant the search is done on lattices themselves, otherwise on
//! homothety classes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{
    group_boundedness, word_product, Boundedness, ElementWitness, LatticeClass, LatticeMode, DEFAULT_CAP,
    DEFAULT_SCAN_LENGTH,
};
use crate::linalg::PadicMatrix;
use crate::padic::{distance, rat_valuation, NormExp, PadicVector};
use crate::sphere::{proximal_pair_candidates, proximality_search, PairSampler, ProximalHit, SphereMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupSpec {
    generators: Vec<PadicMatrix>,
    all_unit_det: bool,
}

impl SemigroupSpec {
    pub fn new(generators: Vec<PadicMatrix>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidArgument("at least one generator is required".into()))?;
        for g in &generators {
            first.check_compatible(g)?;
            g.inverse()?;
        }
        let all_unit_det = generators
            .iter()
            .all(|g| rat_valuation(&g.det(), g.prime()).finite() == Some(0));
        Ok(SemigroupSpec { generators, all_unit_det })
    }

    pub fn generators(&self) -> &[PadicMatrix] {
        &self.generators
    }

    pub fn all_unit_det(&self) -> bool {
        self.all_unit_det
    }

    pub fn mode(&self) -> LatticeMode {
        if self.all_unit_det {
            LatticeMode::Gl
        } else {
            LatticeMode::Pgl
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemigroupOptions {
    pub cap: usize,
    pub scan_length: usize,
    pub seed: u64,
    /// Random generator words tried in the proximality stage.
    pub random_words: usize,
    pub samples: usize,
    pub steps: usize,
    pub threshold: i64,
}

impl Default for SemigroupOptions {
    fn default() -> Self {
        SemigroupOptions {
            cap: DEFAULT_CAP,
            scan_length: DEFAULT_SCAN_LENGTH,
            seed: 0,
            random_words: 32,
            samples: 64,
            steps: 50,
            threshold: -10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonDistalEvidence {
    /// A product of generators with two distinct eigenvalue valuations.
    Element(ElementWitness),
    /// A sphere pair brought within the threshold by iterating one word.
    ProximalPair { word: Vec<usize>, hit: ProximalHit },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    pub mode: LatticeMode,
    pub explored: usize,
    pub growth: Vec<usize>,
    pub scanned_length: usize,
    pub random_words: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemigroupVerdict {
    Distal { mode: LatticeMode, orbit: Vec<LatticeClass>, growth: Vec<usize> },
    NonDistal(NonDistalEvidence),
    Inconclusive(Diagnostics),
}

impl SemigroupVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            SemigroupVerdict::Distal { .. } => "distal",
            SemigroupVerdict::NonDistal(_) => "non_distal",
            SemigroupVerdict::Inconclusive(_) => "inconclusive",
        }
    }
}

pub fn semigroup_distality(spec: &SemigroupSpec, opts: &SemigroupOptions) -> Result<SemigroupVerdict> {
    let mode = spec.mode();
    let cert = group_boundedness(&spec.generators, opts.cap, mode, opts.scan_length)?;
    let (explored, growth) = match cert.verdict {
        Boundedness::Compact { orbit } => {
            return Ok(SemigroupVerdict::Distal { mode, orbit, growth: cert.growth });
        }
        Boundedness::CapExceeded { witness: Some(w), .. } => {
            return Ok(SemigroupVerdict::NonDistal(NonDistalEvidence::Element(w)));
        }
        Boundedness::CapExceeded { explored, witness: None } => (explored, cert.growth),
    };
    if let Some((word, hit)) = random_word_search(spec, opts)? {
        return Ok(SemigroupVerdict::NonDistal(NonDistalEvidence::ProximalPair { word, hit }));
    }
    Ok(SemigroupVerdict::Inconclusive(Diagnostics {
        mode,
        explored,
        growth,
        scanned_length: cert.scanned_length,
        random_words: opts.random_words,
    }))
}

/// Random words longer than the exhaustive scan, each searched for a
/// proximal pair of its sphere action. Deterministic in the seed.
fn random_word_search(spec: &SemigroupSpec, opts: &SemigroupOptions) -> Result<Option<(Vec<usize>, ProximalHit)>> {
    let k = spec.generators.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_words {
        let len = rng.gen_range(opts.scan_length + 1..=2 * opts.scan_length.max(1) + 1);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..k)).collect();
        let g = word_product(&spec.generators, &word);
        let sampler = PairSampler::with_pairs(proximal_pair_candidates(&g)?, rng.gen());
        let map = SphereMap::new(g)?;
        if let Some(hit) = proximality_search(&map, &sampler, opts.samples, opts.steps, opts.threshold)? {
            return Ok(Some((word, hit)));
        }
    }
    Ok(None)
}

/// `max_i log_p (||B_i|| ||B_i^-1||)` over the orbit bases. Every group
/// element is `p^c B_i U` with `U` in `GL_n(Z_p)`, so its sphere action
/// shrinks distances by at most this factor.
pub fn orbit_distortion(orbit: &[LatticeClass]) -> Result<i64> {
    let mut worst = 0;
    for l in orbit {
        let b = l.basis();
        let k = b.op_norm().exponent().expect("invertible") + b.inverse()?.op_norm().exponent().expect("invertible");
        worst = worst.max(k);
    }
    Ok(worst)
}

/// Checks `||w x - w y|| >= p^-distortion ||x - y||` for every word `w` of
/// length `1..=max_len` and every given pair.
pub fn verify_distal_separation(
    spec: &SemigroupSpec,
    orbit: &[LatticeClass],
    pairs: &[(PadicVector, PadicVector)],
    max_len: usize,
) -> Result<bool> {
    let k = orbit_distortion(orbit)?;
    let gens = &spec.generators;
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &words {
            for i in 0..gens.len() {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        for w in &next {
            let g = word_product(gens, w);
            for (x, y) in pairs {
                let d0 = distance(x, y).exponent().expect("distinct pair");
                let gx = crate::sphere::apply_bar(&g, x)?;
                let gy = crate::sphere::apply_bar(&g, y)?;
                if distance(&gx, &gy) < NormExp::Exp(d0 - k) {
                    return Ok(false);
                }
            }
        }
        words = next;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Slope, SlopeData};
    use crate::padic::{parse_rational, Prime};
    use crate::sphere::random_sphere_vector;

    fn m(pr: u64, rows: &[&[&str]]) -> PadicMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PadicMatrix::parse(Prime::new(pr).unwrap(), &rows).unwrap()
    }

    fn unipotent_pair() -> Vec<PadicMatrix> {
        vec![m(3, &[&["1", "1/3"], &["0", "1"]]), m(3, &[&["1", "0"], &["1", "1"]])]
    }

    #[test]
    fn examples() {
        let opts = SemigroupOptions::default();
        let spec = SemigroupSpec::new(vec![m(5, &[&["1", "1"], &["0", "1"]]), m(5, &[&["0", "1"], &["-1", "0"]])]).unwrap();
        assert!(spec.all_unit_det());
        match semigroup_distality(&spec, &opts).unwrap() {
            SemigroupVerdict::Distal { orbit, mode, .. } => {
                assert_eq!(orbit.len(), 1);
                assert_eq!(mode, LatticeMode::Gl);
            }
            v => panic!("{v:?}"),
        }

        let spec = SemigroupSpec::new(unipotent_pair()).unwrap();
        match semigroup_distality(&spec, &opts).unwrap() {
            SemigroupVerdict::NonDistal(NonDistalEvidence::Element(w)) => {
                assert_eq!(w.word, vec![0, 1]);
                let q = |s| parse_rational(s).unwrap();
                assert_eq!(w.char_poly, vec![q("1"), q("-7/3"), q("1")]);
                assert_eq!(
                    w.valuations,
                    SlopeData { entries: vec![(Slope::from_integer(-1), 1), (Slope::from_integer(1), 1)] }
                );
            }
            v => panic!("{v:?}"),
        }

        let spec = SemigroupSpec::new(vec![m(3, &[&["3", "0"], &["0", "3"]])]).unwrap();
        assert!(!spec.all_unit_det());
        assert!(matches!(semigroup_distality(&spec, &opts).unwrap(), SemigroupVerdict::Distal { .. }));
    }

    #[test]
    fn mismatched_generators_are_rejected() {
        let r = SemigroupSpec::new(vec![m(3, &[&["1", "0"], &["0", "1"]]), m(5, &[&["1", "0"], &["0", "1"]])]);
        assert!(matches!(r, Err(Error::PrimeMismatch { .. })));
        let r = SemigroupSpec::new(vec![m(3, &[&["1"]]), m(3, &[&["1", "0"], &["0", "1"]])]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        assert!(SemigroupSpec::new(vec![]).is_err());
    }

    #[test]
    fn verdict_is_invariant_under_scaling_and_squaring() {
        let opts = SemigroupOptions { cap: 2000, ..Default::default() };
        let sets = vec![
            vec![m(5, &[&["1", "1"], &["0", "1"]]), m(5, &[&["0", "1"], &["-1", "0"]])],
            unipotent_pair(),
            vec![m(2, &[&["0", "1/2"], &["2", "0"]]), m(2, &[&["1", "1"], &["0", "1"]])],
        ];
        for gens in sets {
            let base = semigroup_distality(&SemigroupSpec::new(gens.clone()).unwrap(), &opts).unwrap().label();
            let scaled: Vec<_> = gens
                .iter()
                .enumerate()
                .map(|(i, g)| g.scale(&parse_rational(["9", "1/4", "5/3"][i % 3]).unwrap()))
                .collect();
            let s = semigroup_distality(&SemigroupSpec::new(scaled).unwrap(), &opts).unwrap().label();
            assert_eq!(base, s);
            let mut words = gens.clone();
            for a in &gens {
                for b in &gens {
                    words.push(a.mul(b));
                }
            }
            let w = semigroup_distality(&SemigroupSpec::new(words).unwrap(), &opts).unwrap().label();
            assert_eq!(base, w);
        }
    }

    #[test]
    fn distal_certificate_bounds_separation() {
        let p2 = Prime::new(2).unwrap();
        let spec = SemigroupSpec::new(vec![
            m(2, &[&["0", "1/2"], &["2", "0"]]),
            m(2, &[&["1", "2"], &["0", "1"]]),
        ])
        .unwrap();
        let orbit = match semigroup_distality(&spec, &SemigroupOptions::default()).unwrap() {
            SemigroupVerdict::Distal { orbit, .. } => orbit,
            v => panic!("{v:?}"),
        };
        assert!(orbit.len() > 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pairs: Vec<_> = (0..20)
            .map(|_| loop {
                let x = random_sphere_vector(&mut rng, p2, 2, 6);
                let y = random_sphere_vector(&mut rng, p2, 2, 6);
                if x != y {
                    break (x, y);
                }
            })
            .collect();
        assert!(verify_distal_separation(&spec, &orbit, &pairs, 5).unwrap());
    }
}
