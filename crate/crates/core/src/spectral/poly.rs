//! Integer polynomials modulo `p^k` and slope factorization by quadratic
//! Hensel lifting.
//!
//! Polynomials are coefficient vectors in ascending order of degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::padic::{mod_inverse, p_power_int, Prime};

pub type Poly = Vec<BigInt>;

fn trim(mut a: Poly) -> Poly {
    while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    if a.is_empty() {
        a.push(BigInt::zero());
    }
    a
}

pub fn reduce(a: &[BigInt], m: &BigInt) -> Poly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

pub fn add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let out = (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect::<Vec<_>>();
    reduce(&out, m)
}

pub fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let out = (0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect::<Vec<_>>();
    reduce(&out, m)
}

pub fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

fn degree(a: &[BigInt]) -> usize {
    a.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// Division by a monic polynomial modulo `m`.
pub fn divmod_monic(a: &[BigInt], h: &[BigInt], m: &BigInt) -> (Poly, Poly) {
    let dh = degree(h);
    debug_assert!(h[dh].is_one());
    let mut r: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    if r.len() <= dh {
        return (vec![BigInt::zero()], trim(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - dh];
    for k in (dh..r.len()).rev() {
        let c = r[k].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (i, hc) in h[..=dh].iter().enumerate() {
            r[k - dh + i] = (&r[k - dh + i] - &c * hc).mod_floor(m);
        }
        q[k - dh] = c;
    }
    r.truncate(dh.max(1));
    if dh == 0 {
        r = vec![BigInt::zero()];
    }
    (trim(q), trim(r))
}

/// Coefficients in reverse order, `x^deg a(1/x)` for a vector of fixed length.
pub fn reversed(a: &[BigInt]) -> Poly {
    a.iter().rev().cloned().collect()
}

fn truncate_to(mut a: Poly, len: usize) -> Poly {
    a.resize(len, BigInt::zero());
    a
}

/// Factors `f` modulo `p^k` as `g * h` where `h` is monic of degree `d` with
/// `h = x^d mod p`, i.e. `h` collects the roots of positive valuation.
///
/// Requires `p | f_i` for `i < d` and `f_d` a unit, so that `d` is the first
/// vertex of minimal height on the Newton polygon of the primitive `f`.
/// Returns `(g, h)` with `g` of length `len(f) - d`.
pub fn slope_factor(f: &[BigInt], d: usize, p: Prime, k: u32) -> (Poly, Poly) {
    let n = f.len() - 1;
    let pb = BigInt::from(p.get());
    debug_assert!(f[..d].iter().all(|c| c.is_multiple_of(&pb)));
    debug_assert!(!f[d].is_multiple_of(&pb));
    let modulus = p_power_int(p, k);
    if d == 0 {
        return (truncate_to(reduce(f, &modulus), n + 1), vec![BigInt::one()]);
    }
    if d == n {
        let inv = mod_inverse(&f[n], &modulus).expect("leading coefficient is a unit");
        let h: Poly = f.iter().map(|c| (c * &inv).mod_floor(&modulus)).collect();
        return (vec![f[n].mod_floor(&modulus)], h);
    }
    let glen = n - d + 1;
    // initial factorization mod p: f = g0 * x^d
    let mut g: Poly = f[d..].iter().map(|c| c.mod_floor(&pb)).collect();
    let mut h: Poly = vec![BigInt::zero(); d + 1];
    h[d] = BigInt::one();
    // s = g^{-1} mod (p, x^d) as a power series; t = (1 - s g) / x^d
    let g0_inv = mod_inverse(&g[0], &pb).expect("unit constant term");
    let mut s = vec![BigInt::zero(); d];
    for i in 0..d {
        let mut acc = if i == 0 { BigInt::one() } else { BigInt::zero() };
        for j in 1..=i.min(glen - 1) {
            acc -= &g[j] * &s[i - j];
        }
        s[i] = (acc * &g0_inv).mod_floor(&pb);
    }
    let sg = sub(&[BigInt::one()], &mul(&s, &g, &pb), &pb);
    let mut t: Poly = truncate_to(sg.iter().skip(d).cloned().collect(), glen - 1);
    let mut m = pb.clone();
    let mut e_m = 1u32;
    while e_m < k {
        let m2 = &m * &m;
        let e = sub(f, &mul(&g, &h, &m2), &m2);
        let (q, r) = divmod_monic(&mul(&s, &e, &m2), &h, &m2);
        let g_new = truncate_to(add(&add(&g, &mul(&t, &e, &m2), &m2), &mul(&q, &g, &m2), &m2), glen);
        let h_new = truncate_to(add(&h, &r, &m2), d + 1);
        let b = sub(&add(&mul(&s, &g_new, &m2), &mul(&t, &h_new, &m2), &m2), &[BigInt::one()], &m2);
        let (c, dd) = divmod_monic(&mul(&s, &b, &m2), &h_new, &m2);
        s = truncate_to(sub(&s, &dd, &m2), d);
        t = truncate_to(
            sub(&sub(&t, &mul(&t, &b, &m2), &m2), &mul(&c, &g_new, &m2), &m2),
            glen - 1,
        );
        g = g_new;
        h = h_new;
        m = m2;
        e_m *= 2;
    }
    let g = truncate_to(reduce(&g, &modulus), glen);
    let h = truncate_to(reduce(&h, &modulus), d + 1);
    (g, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Poly {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_factor(f: &[i64], d: usize, p: u64, k: u32) {
        let pr = Prime::new(p).unwrap();
        let f = ints(f);
        let (g, h) = slope_factor(&f, d, pr, k);
        let m = p_power_int(pr, k);
        assert_eq!(h.len(), d + 1);
        assert!(h[d].is_one());
        assert_eq!(reduce(&mul(&g, &h, &m), &m), reduce(&f, &m), "f = g h mod p^{k}");
        let pb = BigInt::from(p);
        assert!(h[..d].iter().all(|c| c.is_multiple_of(&pb)));
    }

    #[test]
    fn divmod_examples() {
        let m = BigInt::from(1000);
        // (x^2 + 3x + 5) = (x + 1)(x + 2) + 3
        let (q, r) = divmod_monic(&ints(&[5, 3, 1]), &ints(&[1, 1]), &m);
        assert_eq!(q, ints(&[2, 1]));
        assert_eq!(r, ints(&[3]));
    }

    #[test]
    fn exact_factorizations_are_recovered() {
        // (x - 3)(x - 1) = x^2 - 4x + 3 at p = 3, d = 1
        check_factor(&[3, -4, 1], 1, 3, 20);
        // (x - 9)(x - 6)(x^2 + x + 1), p = 3, d = 2
        check_factor(&[54, 39, 40, -14, 1], 2, 3, 33);
        // non-unit leading coefficient: 3x^3 - 13x^2 + 13x - 3 = (3x - 1)(x - 1)(x - 3)
        check_factor(&[-3, 13, -13, 3], 1, 3, 40);
        // irreducible, both roots of valuation 1/2 at p = 2
        check_factor(&[2, -2, 1], 2, 2, 30);
        check_factor(&[5, 1, 1], 1, 5, 17);
    }

    #[test]
    fn lifted_factor_matches_known_root() {
        // x^2 - 10/3 x + 1 scaled: 3x^2 - 10x + 3 = (3x - 1)(x - 3)
        let pr = Prime::new(3).unwrap();
        let (_, h) = slope_factor(&ints(&[3, -10, 3]), 1, pr, 25);
        let m = p_power_int(pr, 25);
        assert_eq!(h, vec![BigInt::from(-3).mod_floor(&m), BigInt::one()]);
    }
}
