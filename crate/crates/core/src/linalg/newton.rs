//! Newton polygons of characteristic polynomials and the eigenvalue
//! valuations they encode.
//!
//! Convention: points are `(i, v(c_i))` with `i` the power of `x`, ascending.
//! A hull segment of slope `s` and horizontal length `k` contributes `k`
//! roots of valuation `-s`.

use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use super::PadicMatrix;
use crate::error::{Error, Result};
use crate::padic::{rat_valuation, Prime};

pub type Slope = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub slope: Slope,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// `(i, v(c_i))` for the nonzero coefficients.
    pub points: Vec<(usize, i64)>,
    /// Lower hull, slopes strictly increasing.
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn degree(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn slope_data(&self) -> SlopeData {
        let mut entries: Vec<(Slope, usize)> =
            self.segments.iter().map(|s| (-s.slope, s.length)).collect();
        entries.sort();
        SlopeData { entries }
    }
}

/// Root valuations with multiplicities, ascending by valuation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlopeData {
    pub entries: Vec<(Slope, usize)>,
}

impl SlopeData {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Sum of valuations with multiplicity; equals `v(det T)`.
    pub fn weighted_sum(&self) -> Slope {
        self.entries
            .iter()
            .fold(Slope::zero(), |acc, (v, k)| acc + *v * Slope::from_integer(*k as i64))
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|(v, _)| v.is_zero())
    }

    pub fn min(&self) -> Slope {
        self.entries[0].0
    }

    pub fn max(&self) -> Slope {
        self.entries[self.entries.len() - 1].0
    }

    /// Multiplicities of valuations `> 0`, `= 0` and `< 0`.
    pub fn sign_dims(&self) -> (usize, usize, usize) {
        let mut d = (0, 0, 0);
        for (v, k) in &self.entries {
            if *v > Slope::zero() {
                d.0 += k;
            } else if v.is_zero() {
                d.1 += k;
            } else {
                d.2 += k;
            }
        }
        d
    }

    pub fn negated(&self) -> SlopeData {
        let mut entries: Vec<_> = self.entries.iter().map(|(v, k)| (-*v, *k)).collect();
        entries.sort();
        SlopeData { entries }
    }

    pub fn scaled(&self, k: i64) -> SlopeData {
        let mut entries: Vec<_> =
            self.entries.iter().map(|(v, m)| (*v * Slope::from_integer(k), *m)).collect();
        entries.sort();
        SlopeData { entries }
    }

    pub fn shifted(&self, by: Slope) -> SlopeData {
        SlopeData { entries: self.entries.iter().map(|(v, m)| (*v + by, *m)).collect() }
    }
}

/// Lower convex hull of `(i, v(c_i))` for a polynomial given by ascending
/// coefficients.
pub fn newton_polygon(coeffs: &[BigRational], p: Prime) -> Result<NewtonPolygon> {
    if coeffs.is_empty() || coeffs[0].is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let points: Vec<(usize, i64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, rat_valuation(c, p).unwrap()))
        .collect();
    // monotone chain, lower hull
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it turns strictly counter-clockwise
            let cross = (x2 as i64 - x1 as i64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as i64 - x1 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let dx = (w[1].0 - w[0].0) as i64;
            Segment { slope: Slope::new(w[1].1 - w[0].1, dx), length: dx as usize }
        })
        .collect();
    Ok(NewtonPolygon { points, segments })
}

/// Valuations of the eigenvalues of `T` over an algebraic closure of `Q_p`.
pub fn eigenvalue_valuations(t: &PadicMatrix) -> Result<SlopeData> {
    let cp = t.char_poly();
    if cp[0].is_zero() {
        return Err(Error::Singular);
    }
    Ok(newton_polygon(&cp, t.prime())?.slope_data())
}
