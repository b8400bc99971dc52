//! Orbits of lattice classes under matrices and finitely generated groups.

use std::collections::HashSet;

use num_rational::BigRational;
use rayon::prelude::*;

use super::{LatticeClass, LatticeMode};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalue_valuations, PadicMatrix, SlopeData};

pub const DEFAULT_CAP: usize = 10_000;
pub const DEFAULT_SCAN_LENGTH: usize = 8;

/// Outcome of the isometry-power search for a single matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryPower {
    Power(u64),
    NotDistal,
}

/// Least `k >= 1` with `T^k Z_p^n = Z_p^n`, found by walking the orbit of the
/// standard lattice. Returns `None` when the orbit does not close within `cap`
/// steps. Uses no spectral information.
pub fn standard_lattice_period(t: &PadicMatrix, cap: usize) -> Result<Option<u64>> {
    // T^k L has covolume |det T|^k, so the orbit cannot close unless det T
    // is a unit
    match crate::padic::rat_valuation(&t.det(), t.prime()).finite() {
        None => return Err(Error::Singular),
        Some(v) if v != 0 => return Ok(None),
        Some(_) => {}
    }
    let start = LatticeClass::standard(t.prime(), t.dim(), LatticeMode::Gl);
    let mut cur = start.clone();
    for k in 1..=cap {
        cur = cur.apply(t)?;
        // T is invertible, so the orbit is a cycle through the start
        if cur == start {
            return Ok(Some(k as u64));
        }
    }
    Ok(None)
}

/// Least `m >= 1` such that `T^m` is an isometry, or `NotDistal` when some
/// eigenvalue has nonzero valuation.
pub fn minimal_isometry_power(t: &PadicMatrix, cap: usize) -> Result<IsometryPower> {
    let slopes = eigenvalue_valuations(t)?;
    if !slopes.all_zero() {
        return Ok(IsometryPower::NotDistal);
    }
    match standard_lattice_period(t, cap)? {
        Some(m) => Ok(IsometryPower::Power(m)),
        None => Err(Error::CapExceeded(cap)),
    }
}

/// A product of generators whose eigenvalue valuations certify unboundedness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementWitness {
    /// Generator indices, multiplied left to right.
    pub word: Vec<usize>,
    pub element: PadicMatrix,
    pub char_poly: Vec<BigRational>,
    pub valuations: SlopeData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundedness {
    Compact { orbit: Vec<LatticeClass> },
    CapExceeded { explored: usize, witness: Option<ElementWitness> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundednessCertificate {
    pub mode: LatticeMode,
    pub verdict: Boundedness,
    /// Orbit size after each BFS layer.
    pub growth: Vec<usize>,
    /// Longest word length examined by the witness scan (0 if not run).
    pub scanned_length: usize,
}

impl BoundednessCertificate {
    pub fn is_compact(&self) -> bool {
        matches!(self.verdict, Boundedness::Compact { .. })
    }
}

fn check_generators(generators: &[PadicMatrix]) -> Result<()> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one generator is required".into()))?;
    for g in generators {
        first.check_compatible(g)?;
    }
    Ok(())
}

/// Breadth-first search of the standard lattice class under the group
/// generated by `generators`. A closed orbit within `cap` classes certifies
/// compactness; otherwise products of up to `scan_length` generators are
/// searched for an element whose valuations prove unboundedness in `mode`.
pub fn group_boundedness(
    generators: &[PadicMatrix],
    cap: usize,
    mode: LatticeMode,
    scan_length: usize,
) -> Result<BoundednessCertificate> {
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be >= 1".into()));
    }
    check_generators(generators)?;
    let mut moves = Vec::with_capacity(2 * generators.len());
    for g in generators {
        moves.push(g.clone());
        moves.push(g.inverse()?);
    }
    let start = LatticeClass::standard(generators[0].prime(), generators[0].dim(), mode);
    let mut visited: HashSet<LatticeClass> = HashSet::new();
    visited.insert(start.clone());
    let mut orbit = vec![start.clone()];
    let mut frontier = vec![start];
    let mut growth = vec![1];
    let mut exceeded = false;
    'bfs: while !frontier.is_empty() {
        let images: Vec<LatticeClass> = frontier
            .par_iter()
            .flat_map_iter(|l| moves.iter().map(move |g| l.apply(g)))
            .collect::<Result<Vec<_>>>()?;
        let mut next = Vec::new();
        for img in images {
            if visited.insert(img.clone()) {
                orbit.push(img.clone());
                next.push(img);
                if orbit.len() > cap {
                    exceeded = true;
                    growth.push(orbit.len());
                    break 'bfs;
                }
            }
        }
        if !next.is_empty() {
            growth.push(orbit.len());
        }
        frontier = next;
    }
    if !exceeded {
        return Ok(BoundednessCertificate {
            mode,
            verdict: Boundedness::Compact { orbit },
            growth,
            scanned_length: 0,
        });
    }
    let witness = scan_for_witness(generators, mode, scan_length)?;
    Ok(BoundednessCertificate {
        mode,
        verdict: Boundedness::CapExceeded { explored: orbit.len(), witness },
        growth,
        scanned_length: scan_length,
    })
}

/// `true` when the valuations prove the cyclic group unbounded in `mode`.
pub fn is_unbounded_in(valuations: &SlopeData, mode: LatticeMode) -> bool {
    match mode {
        LatticeMode::Gl => !valuations.all_zero(),
        LatticeMode::Pgl => valuations.distinct() >= 2,
    }
}

pub fn word_product(generators: &[PadicMatrix], word: &[usize]) -> PadicMatrix {
    let mut acc = generators[word[0]].clone();
    for &i in &word[1..] {
        acc = acc.mul(&generators[i]);
    }
    acc
}

/// Scans words by increasing length, lexicographically within a length,
/// returning the first witness.
pub fn scan_for_witness(
    generators: &[PadicMatrix],
    mode: LatticeMode,
    max_length: usize,
) -> Result<Option<ElementWitness>> {
    let k = generators.len();
    for len in 1..=max_length {
        let count = (k as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
        let count = usize::try_from(count).unwrap_or(usize::MAX);
        let found = (0..count)
            .into_par_iter()
            .map(|idx| {
                let word = decode_word(idx, k, len);
                let element = word_product(generators, &word);
                let valuations = eigenvalue_valuations(&element)?;
                if is_unbounded_in(&valuations, mode) {
                    let char_poly = element.char_poly();
                    Ok(Some(ElementWitness { word, element, char_poly, valuations }))
                } else {
                    Ok(None)
                }
            })
            .find_first(|r: &Result<Option<ElementWitness>>| !matches!(r, Ok(None)));
        match found {
            Some(Ok(w)) => return Ok(w),
            Some(Err(e)) => return Err(e),
            None => {}
        }
    }
    Ok(None)
}

fn decode_word(mut idx: usize, k: usize, len: usize) -> Vec<usize> {
    let mut word = vec![0; len];
    for slot in word.iter_mut().rev() {
        *slot = idx % k;
        idx /= k;
    }
    word
}

/// Checks that every generator and its inverse maps `orbit` into itself.
pub fn verify_orbit_closed(generators: &[PadicMatrix], orbit: &[LatticeClass]) -> Result<bool> {
    let set: HashSet<&LatticeClass> = orbit.iter().collect();
    for g in generators {
        let gi = g.inverse()?;
        for l in orbit {
            if !set.contains(&l.apply(g)?) || !set.contains(&l.apply(&gi)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
