//! Acceptance suite: one PASS/FAIL line per criterion. Every check is exact;
//! the oracles below (valuations, integer matrix powers) are written out
//! here rather than taken from the library.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use padic_distal::lattice::{
    minimal_isometry_power, standard_lattice_period, verify_orbit_closed, IsometryPower, LatticeMode,
};
use padic_distal::linalg::{eigenvalue_valuations, PadicMatrix};
use padic_distal::padic::{distance, NormExp, PadicVector, Prime};
use padic_distal::semigroup::{semigroup_distality, NonDistalEvidence, SemigroupOptions, SemigroupSpec, SemigroupVerdict};
use padic_distal::sphere::{
    apply_bar, apply_bar_affine, closed_form_trajectory, inverse_bar_affine, proximal_pair_candidates,
    proximality_search, random_sphere_vector, safe_radius, verify_witness, witness_nondistal, AffineMode,
    AffineSphereMap, PairSampler, SDForm, SphereDynamics, SphereMap,
};
use padic_distal::spectral::{is_distal_linear, is_distal_projective, Certificate};

const PRIMES: [u64; 3] = [2, 3, 5];
const POOL_SIZE: usize = 520;
const LATTICE_CAP: usize = 1000;
const POWER_RANGE: i64 = 200;

type Check = Result<String, String>;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- oracles

/// Exponent of `p` in a nonzero integer, by repeated division.
fn oracle_int_val(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    v
}

fn oracle_val(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(oracle_int_val(x.numer(), p) - oracle_int_val(x.denom(), p))
    }
}

/// `e` with `||M|| = p^e` for a nonzero rational matrix given by rows.
fn oracle_norm_exp(rows: &[Vec<BigRational>], p: u64) -> i64 {
    -rows.iter().flatten().filter_map(|x| oracle_val(x, p)).min().expect("nonzero matrix")
}

fn int_mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

/// Norm exponents of `T^1, ..., T^k`, computed from `T = A / d` with `A`
/// integral so that only integer matrix products are involved. The p-power
/// content of `A^m` is divided out as it appears, which keeps the valuation
/// counts short.
fn oracle_power_norms(rows: &[Vec<BigRational>], p: u64, k: i64) -> Vec<i64> {
    let d = rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| (x * &d).to_integer()).collect()).collect();
    let vd = oracle_int_val(&d, p);
    let pb = BigInt::from(p);
    let mut acc = a.clone();
    let mut content = 0; // A^m = p^content * acc
    let mut out = Vec::with_capacity(k as usize);
    for m in 1..=k {
        let min = acc.iter().flatten().filter(|x| !x.is_zero()).map(|x| oracle_int_val(x, p)).min().unwrap();
        let scale = pb.pow(min as u32);
        for x in acc.iter_mut().flatten() {
            *x /= &scale;
        }
        content += min;
        out.push(m * vd - content);
        acc = int_mat_mul(&acc, &a);
    }
    out
}

// ------------------------------------------------------------ generators

fn rand_unit(rng: &mut ChaCha8Rng, p: u64) -> i64 {
    loop {
        let u = rng.gen_range(1..=(p * p) as i64);
        if u % p as i64 != 0 {
            return if rng.gen_bool(0.5) { u } else { -u };
        }
    }
}

fn rand_entry(rng: &mut ChaCha8Rng, p: u64, lo: i64, hi: i64, zero_prob: f64) -> BigRational {
    if rng.gen_bool(zero_prob) {
        return BigRational::zero();
    }
    let v = rng.gen_range(lo..=hi);
    let den = if rng.gen_bool(0.3) { rand_unit(rng, p).abs() } else { 1 };
    padic_distal::padic::p_power(prime(p), v) * BigRational::new(rand_unit(rng, p).into(), den.into())
}

fn rand_matrix(rng: &mut ChaCha8Rng, p: u64, n: usize, lo: i64, hi: i64) -> PadicMatrix {
    let rows = (0..n).map(|_| (0..n).map(|_| rand_entry(rng, p, lo, hi, 0.25)).collect()).collect();
    PadicMatrix::from_rows(prime(p), rows).unwrap()
}

/// Integer matrix invertible over `Z_p`.
fn rand_integral_unit(rng: &mut ChaCha8Rng, p: u64, n: usize) -> PadicMatrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-4..=4))).collect()).collect();
        let u = PadicMatrix::from_rows(prime(p), rows).unwrap();
        if let Some(0) = oracle_val(&u.det(), p) {
            return u;
        }
    }
}

fn entries_in_range(t: &PadicMatrix, p: u64) -> bool {
    t.entries().iter().filter_map(|x| oracle_val(x, p)).all(|v| (-2..=2).contains(&v))
}

/// Mixed families of invertible matrices with entry valuations in [-2, 2]:
/// unstructured entries, conjugates of integral units (bounded), their
/// p-power multiples (projectively but not linearly distal) and companions
/// of `x^n - c`.
fn matrix_pool() -> Vec<PadicMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut out = Vec::with_capacity(POOL_SIZE);
    while out.len() < POOL_SIZE {
        let p = PRIMES[rng.gen_range(0..3)];
        let n = rng.gen_range(2..=3);
        let t = match out.len() % 4 {
            0 => rand_matrix(&mut rng, p, n, -2, 2),
            1 | 2 => {
                let g = rand_matrix(&mut rng, p, n, -1, 1);
                let Ok(gi) = g.inverse() else { continue };
                let c = g.mul(&rand_integral_unit(&mut rng, p, n)).mul(&gi);
                if out.len() % 4 == 2 {
                    c.scale(&padic_distal::padic::p_power(prime(p), if rng.gen_bool(0.5) { 1 } else { -1 }))
                } else {
                    c
                }
            }
            _ => {
                let mut rows = vec![vec![q(0); n]; n];
                for i in 1..n {
                    rows[i][i - 1] = q(1);
                }
                rows[0][n - 1] = rand_entry(&mut rng, p, -2, 2, 0.0);
                PadicMatrix::from_rows(prime(p), rows).unwrap()
            }
        };
        if t.det().is_zero() || !entries_in_range(&t, p) {
            continue;
        }
        out.push(t);
    }
    out
}

// ---------------------------------------------------------------- criteria

struct Pool {
    matrices: Vec<PadicMatrix>,
    linear: Vec<bool>,
}

fn criterion_1(pool: &Pool) -> Check {
    let results: Vec<Result<(bool, bool, bool), String>> = pool
        .matrices
        .par_iter()
        .map(|t| {
            let p = t.prime().get();
            let n = t.dim() as i64;
            let polygon = eigenvalue_valuations(t).map_err(|e| e.to_string())?.all_zero();
            let lattice = standard_lattice_period(t, LATTICE_CAP).map_err(|e| e.to_string())?.is_some();
            // ||T^m|| >= spectral radius^m, so an unbounded T has some
            // |m| <= 200 with ||T^m|| >= p^(200/n); a bounded one stays small
            let inv = t.inverse().map_err(|e| e.to_string())?;
            let fwd = oracle_power_norms(&t.rows(), p, POWER_RANGE);
            let bwd = oracle_power_norms(&inv.rows(), p, POWER_RANGE);
            let max = fwd.iter().chain(bwd.iter()).copied().max().unwrap();
            let norms = max * n < POWER_RANGE;
            Ok((polygon, lattice, norms))
        })
        .collect();
    let mut distal = 0;
    for (t, r) in pool.matrices.iter().zip(results) {
        let (a, b, c) = r?;
        ensure(a == b && b == c, || format!("disagreement {a}/{b}/{c} on {t:?}"))?;
        distal += a as usize;
    }
    Ok(format!(
        "{} matrices, {} distal / {} non-distal; polygon, lattice cycle and power norms agree",
        pool.matrices.len(),
        distal,
        pool.matrices.len() - distal
    ))
}

fn criterion_2(pool: &Pool) -> Check {
    let mut checked = 0;
    for (t, &d) in pool.matrices.iter().zip(&pool.linear) {
        if !d {
            continue;
        }
        let IsometryPower::Power(m) = minimal_isometry_power(t, LATTICE_CAP).map_err(|e| e.to_string())? else {
            return Err(format!("distal matrix without isometry power: {t:?}"));
        };
        let p = t.prime().get();
        let fwd = oracle_power_norms(&t.rows(), p, m as i64);
        let bwd = oracle_power_norms(&t.inverse().unwrap().rows(), p, m as i64);
        let iso = |k: usize| fwd[k - 1] == 0 && bwd[k - 1] == 0;
        ensure(iso(m as usize), || format!("T^{m} is not an isometry: {t:?}"))?;
        ensure((1..m as usize).all(|k| !iso(k)), || format!("{m} is not minimal for {t:?}"))?;
        checked += 1;
    }
    let fixture = PadicMatrix::parse(prime(2), &[vec!["1", "1/2"], vec!["0", "1"]]).unwrap();
    let m = minimal_isometry_power(&fixture, LATTICE_CAP).map_err(|e| e.to_string())?;
    ensure(m == IsometryPower::Power(2), || format!("fixture [[1,1/2],[0,1]] gave {m:?}"))?;
    Ok(format!("{checked} distal cases exact and minimal; fixture m = 2"))
}

fn criterion_3(pool: &Pool) -> Check {
    let outcomes: Vec<Result<Option<bool>, String>> = pool
        .matrices
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let verdict = is_distal_projective(t).map_err(|e| e.to_string())?;
            let map = SphereMap::new(t.clone()).map_err(|e| e.to_string())?;
            if !verdict.distal {
                let cands = proximal_pair_candidates(t).map_err(|e| e.to_string())?;
                let samples = cands.len() + 100;
                let sampler = PairSampler::with_pairs(cands, i as u64);
                let hit = proximality_search(&map, &sampler, samples, 200, -10).map_err(|e| e.to_string())?;
                let hit = hit.ok_or_else(|| format!("no proximal pair for {t:?}"))?;
                ensure(hit.separation <= NormExp::Exp(-10), || "hit above threshold".into())?;
                return Ok(Some(false));
            }
            if oracle_val(&t.det(), t.prime().get()) != Some(0) {
                return Ok(None);
            }
            let (m, k) = match (verdict.rescaling, verdict.certificate) {
                (Some((m, _)), Certificate::IsometryPower(k)) => (m, k),
                other => return Err(format!("distal verdict without isometry certificate: {other:?}")),
            };
            let period = (m * k) as usize;
            let sampler = PairSampler::uniform(1000 + i as u64);
            for s in 0..100 {
                let (x, y) = sampler.sample(t.prime(), t.dim(), s);
                let seps = padic_distal::sphere::pair_separation_series(&map, &x, &y, 50).map_err(|e| e.to_string())?;
                ensure((0..seps.len().saturating_sub(period)).all(|j| seps[j + period] == seps[j]), || {
                    format!("separations not {period}-periodic for {t:?}")
                })?;
            }
            Ok(Some(true))
        })
        .collect();
    let (mut prox, mut periodic) = (0, 0);
    for o in outcomes {
        match o? {
            Some(true) => periodic += 1,
            Some(false) => prox += 1,
            None => {}
        }
    }
    Ok(format!(
        "{prox} non-distal verdicts reached p^-10; {periodic} unit-determinant distal verdicts periodic on 100 pairs x 50 steps"
    ))
}

/// Projectively distal matrices with an SD form, hand-picked ones first.
fn theorem6_fixtures(pool: &Pool) -> Vec<SDForm> {
    let p3 = prime(3);
    let hand = vec![
        PadicMatrix::parse(prime(2), &[vec!["1", "1/2"], vec!["0", "1"]]).unwrap(),
        PadicMatrix::p_power_diagonal(p3, &[1, 1]),
        PadicMatrix::parse(p3, &[vec!["0", "3"], vec!["1", "0"]]).unwrap(),
        PadicMatrix::parse(p3, &[vec!["0", "1", "0"], vec!["0", "0", "1"], vec!["1", "0", "0"]]).unwrap(),
        PadicMatrix::parse(prime(5), &[vec!["0", "-1"], vec!["1", "0"]]).unwrap(),
        PadicMatrix::parse(prime(2), &[vec!["0", "0", "2"], vec!["1", "0", "0"], vec!["0", "1", "0"]]).unwrap(),
    ];
    let mut out: Vec<SDForm> = hand.into_iter().map(|t| SDForm::from_projectively_distal(t).unwrap()).collect();
    for t in &pool.matrices {
        if out.len() == 20 {
            break;
        }
        if is_distal_projective(t).unwrap().distal {
            let f = SDForm::from_projectively_distal(t.clone()).unwrap();
            if f.m() <= 12 {
                out.push(f);
            }
        }
    }
    out
}

/// Nonzero translations in the safe ball of `f`.
fn safe_translations(f: &SDForm, count: usize, seed: u64) -> Vec<PadicVector> {
    let t = f.matrix();
    let (p, n) = (t.prime(), t.dim());
    let r = safe_radius(f).unwrap().radius_exponent;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v = random_sphere_vector(&mut rng, p, n, 3);
            let extra = rng.gen_range(0..3);
            v.scale(&padic_distal::padic::p_power(p, -r + extra))
        })
        .collect()
}

fn criterion_4(fixtures: &[SDForm]) -> Check {
    ensure(fixtures.len() == 20, || format!("only {} fixtures", fixtures.len()))?;
    let res: Vec<Result<(), String>> = fixtures
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let t = f.matrix();
            let (p, n, m) = (t.prime(), t.dim(), f.m() as usize);
            let mut rng = ChaCha8Rng::seed_from_u64(500 + i as u64);
            for a in safe_translations(f, 20, 100 + i as u64) {
                let map = AffineSphereMap::new(t.clone(), a).map_err(|e| e.to_string())?;
                ensure(map.mode() == AffineMode::Homeomorphism, || "not a homeomorphism".into())?;
                for _ in 0..20 {
                    let x = random_sphere_vector(&mut rng, p, n, 4);
                    let y = random_sphere_vector(&mut rng, p, n, 4);
                    let d0 = distance(&x, &y);
                    let (mut a1, mut b1) = (x, y);
                    for k in 1..=25 {
                        for _ in 0..m {
                            a1 = map.step(&a1).map_err(|e| e.to_string())?;
                            b1 = map.step(&b1).map_err(|e| e.to_string())?;
                        }
                        ensure(distance(&a1, &b1) == d0, || format!("fixture {i}: separation changed at k = {k}"))?;
                    }
                }
            }
            Ok(())
        })
        .collect();
    res.into_iter().collect::<Result<(), _>>()?;
    Ok("20 fixtures x 20 translations x 20 pairs: separations at multiples of m equal ||x - y|| for k = 1..25".into())
}

/// SD forms with non-scalar `D`: the two diagonal fixtures and two with m = 2.
fn nondistal_fixtures() -> Vec<SDForm> {
    let p3 = prime(3);
    let one = q(1);
    vec![
        SDForm::from_diagonal(PadicMatrix::p_power_diagonal(p3, &[0, 1])).unwrap(),
        SDForm::from_diagonal(PadicMatrix::p_power_diagonal(p3, &[0, 0, 2])).unwrap(),
        SDForm::new(
            PadicMatrix::parse(p3, &[vec!["0", "1", "0"], vec!["1", "0", "0"], vec!["0", "0", "3"]]).unwrap(),
            2,
            PadicMatrix::identity(p3, 3),
            vec![0, 0, 2],
        )
        .unwrap(),
        SDForm::new(
            PadicMatrix::parse(p3, &[vec!["0", "3", "0"], vec!["1", "0", "0"], vec!["0", "0", "1"]]).unwrap(),
            2,
            PadicMatrix::scalar(p3, 3, one),
            vec![1, 1, 0],
        )
        .unwrap(),
    ]
}

fn criterion_5() -> Check {
    let mut anchors = Vec::new();
    for (idx, f) in nondistal_fixtures().iter().enumerate() {
        let w = witness_nondistal(f, None).map_err(|e| e.to_string())?;
        ensure(verify_witness(f, &w, 10).map_err(|e| e.to_string())?, || format!("fixture {idx}: library replay failed"))?;
        let map = AffineSphereMap::new(f.matrix().clone(), w.a.clone()).map_err(|e| e.to_string())?;
        let z = oracle_val(&w.z.components().iter().filter(|c| !c.is_zero()).min_by_key(|c| oracle_val(c, 3)).unwrap().clone(), 3)
            .unwrap();
        ensure(w.l1 - w.l > 0, || "decay must be positive".into())?;
        let (mut x, mut y) = (w.x.clone(), w.y.clone());
        for k in 1..=10i64 {
            for _ in 0..w.m {
                x = map.step(&x).map_err(|e| e.to_string())?;
                y = map.step(&y).map_err(|e| e.to_string())?;
            }
            // ||.|| = p^-(val z + k (l1 - l))
            let want = NormExp::Exp(-(z + k * (w.l1 - w.l)));
            let got = distance(&x, &y);
            ensure(got == want, || format!("fixture {idx}, k = {k}: {got:?} != {want:?}"))?;
            if idx == 0 && k <= 2 {
                anchors.push(got);
            }
        }
    }
    ensure(anchors == vec![NormExp::Exp(-2), NormExp::Exp(-3)], || format!("diag(1,3) anchors {anchors:?}"))?;
    Ok("diag(1,3), diag(1,1,9) and two m = 2 forms decay exactly for k = 1..10; anchors 3^-2, 3^-3".into())
}

fn criterion_6(fixtures: &[SDForm]) -> Check {
    let mut maps: Vec<(AffineSphereMap, u64)> = Vec::new();
    for (i, f) in fixtures.iter().enumerate() {
        for a in safe_translations(f, 3, 900 + i as u64) {
            maps.push((AffineSphereMap::new(f.matrix().clone(), a).unwrap(), f.m()));
        }
    }
    for f in nondistal_fixtures() {
        let w = witness_nondistal(&f, None).unwrap();
        maps.push((AffineSphereMap::new(f.matrix().clone(), w.a).unwrap(), f.m()));
    }
    let mut beta_checks = 0;
    for (i, (map, m)) in maps.iter().enumerate() {
        let t = map.matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        for _ in 0..3 {
            let x = random_sphere_vector(&mut rng, t.prime(), t.dim(), 4);
            let (traj, coeffs) = closed_form_trajectory(map, &x, 50).map_err(|e| format!("map {i}: {e}"))?;
            let mut y = x.clone();
            for (j, cf) in traj.iter().enumerate() {
                ensure(*cf == y, || format!("map {i}: closed form differs at j = {j}"))?;
                y = apply_bar_affine(map, &y).map_err(|e| e.to_string())?;
            }
            let mut tx = x.clone();
            for j in 1..*m as usize {
                tx = t.apply(&tx);
                let want = NormExp::Exp(oracle_norm_exp(&[tx.components().to_vec()], t.prime().get()));
                ensure(coeffs.beta[j] == want, || format!("map {i}: beta_{j} != ||T^{j} x||"))?;
                beta_checks += 1;
            }
        }
    }
    Ok(format!(
        "closed form equals iteration for j <= 50 on {} maps; {beta_checks} beta_j = ||T^j x|| checks",
        maps.len()
    ))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut homeo = 0;
    let mut points = 0;
    while homeo < 10 {
        let p = PRIMES[homeo % 3];
        let n = 2 + homeo % 2;
        let t = rand_matrix(&mut rng, p, n, -1, 1);
        let Ok(ti) = t.inverse() else { continue };
        // ||a|| < 1/||T^-1|| keeps ||T^-1 a|| < 1
        let e = -oracle_norm_exp(&ti.rows(), p) - 1 - rng.gen_range(0..2);
        let a = random_sphere_vector(&mut rng, prime(p), n, 3).scale(&padic_distal::padic::p_power(prime(p), -e));
        let map = AffineSphereMap::new(t, a).map_err(|e| e.to_string())?;
        ensure(map.mode() == AffineMode::Homeomorphism, || "expected a homeomorphism".into())?;
        for _ in 0..10 {
            let x = random_sphere_vector(&mut rng, prime(p), n, 5);
            let back = inverse_bar_affine(&map, &apply_bar_affine(&map, &x).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            ensure(back == x, || "round trip failed".into())?;
            points += 1;
        }
        homeo += 1;
    }
    let mut bad = 0;
    while bad < 10 {
        let p = PRIMES[bad % 3];
        let n = 2 + bad % 2;
        let t = rand_matrix(&mut rng, p, n, -1, 1);
        if t.det().is_zero() {
            continue;
        }
        // a = T w with ||w|| > 1, so ||T^-1 a|| > 1
        let w = random_sphere_vector(&mut rng, prime(p), n, 3)
            .scale(&padic_distal::padic::p_power(prime(p), -rng.gen_range(1..=2)));
        let a = t.apply(&w);
        let map = AffineSphereMap::new(t, a.clone()).map_err(|e| e.to_string())?;
        ensure(map.mode() == AffineMode::InjectiveOnly, || "expected a non-surjective map".into())?;
        let y = a.normalize_to_sphere().map_err(|e| e.to_string())?;
        let x = map.inverse_formula(&y).map_err(|e| e.to_string())?;
        let nx = oracle_norm_exp(&[x.components().to_vec()], p);
        ensure(nx != 0, || "inverse formula landed on the sphere".into())?;
        bad += 1;
    }
    Ok(format!("{points} round trips over {homeo} homeomorphisms; inverse formula leaves the sphere on {bad} maps with ||T^-1 a|| > 1"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let p = PRIMES[i % 3];
        let c = rand_entry(&mut rng, p, -6, 6, 0.0);
        let t = PadicMatrix::from_rows(prime(p), vec![vec![c]]).unwrap();
        let v = is_distal_projective(&t).map_err(|e| e.to_string())?;
        ensure(v.distal, || format!("scalar {t:?} not projectively distal"))?;
        // and the sphere map on S_1 fixes a unit up to the isometry part
        let map = SphereMap::new(t.clone()).unwrap();
        let x = PadicVector::from_ints(prime(p), &[1]);
        ensure(map.step(&x).unwrap().is_on_sphere(), || "left S_1".into())?;
    }
    Ok("100 random scalars projectively distal".into())
}

fn rand_unimodular(rng: &mut ChaCha8Rng, p: u64, n: usize) -> PadicMatrix {
    let mut m = PadicMatrix::identity(prime(p), n);
    for _ in 0..rng.gen_range(1..=4) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let mut e = PadicMatrix::identity(prime(p), n);
        e.set(i, j, q(rng.gen_range(-3..=3)));
        m = m.mul(&e);
    }
    if rng.gen_bool(0.3) {
        let mut s = PadicMatrix::identity(prime(p), n);
        s.set(0, 0, q(-1));
        m = m.mul(&s);
    }
    m
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let opts = SemigroupOptions::default();
    let mut sets = 0;
    for i in 0..30 {
        let p = PRIMES[i % 3];
        let n = 2 + i % 2;
        let gens: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| rand_unimodular(&mut rng, p, n)).collect();
        let spec = SemigroupSpec::new(gens.clone()).map_err(|e| e.to_string())?;
        match semigroup_distality(&spec, &opts).map_err(|e| e.to_string())? {
            SemigroupVerdict::Distal { mode, orbit, .. } => {
                ensure(mode == LatticeMode::Gl, || "unit determinants should give GL mode".into())?;
                ensure(verify_orbit_closed(&gens, &orbit).map_err(|e| e.to_string())?, || "orbit not closed".into())?;
            }
            other => return Err(format!("integer generators {gens:?} gave {}", other.label())),
        }
        sets += 1;
    }
    let p3 = prime(3);
    let spec = SemigroupSpec::new(vec![
        PadicMatrix::parse(p3, &[vec!["1", "1/3"], vec!["0", "1"]]).unwrap(),
        PadicMatrix::parse(p3, &[vec!["1", "0"], vec!["1", "1"]]).unwrap(),
    ])
    .unwrap();
    match semigroup_distality(&spec, &opts).map_err(|e| e.to_string())? {
        SemigroupVerdict::NonDistal(NonDistalEvidence::Element(w)) => {
            // x^2 - (7/3) x + 1, ascending coefficients
            let want = vec![q(1), BigRational::new((-7).into(), 3.into()), q(1)];
            ensure(w.char_poly == want, || format!("char poly {:?}", w.char_poly))?;
        }
        other => return Err(format!("unipotent pair gave {}", other.label())),
    }
    Ok(format!("{sets} unimodular integer sets distal with closed orbits; unipotent pair non-distal via x^2 - 7/3x + 1"))
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checks = 0;
    // fixtures: exhaustive over small p-power diagonals and a few units
    for p in PRIMES {
        let pp = prime(p);
        let mats: Vec<PadicMatrix> = vec![
            PadicMatrix::identity(pp, 2),
            PadicMatrix::p_power_diagonal(pp, &[0, 1]),
            PadicMatrix::p_power_diagonal(pp, &[-1, 2]),
            PadicMatrix::parse(pp, &[vec!["1", "1"], vec!["0", "1"]]).unwrap(),
            PadicMatrix::parse(pp, &[vec!["0", "1"], vec!["1", "0"]]).unwrap(),
        ];
        let vecs: Vec<PadicVector> = [[1, 0], [0, 1], [1, 1], [1, p as i64], [p as i64, 1]]
            .iter()
            .map(|v| PadicVector::from_ints(pp, v))
            .collect();
        for t in &mats {
            for s in &mats {
                for x in &vecs {
                    let lhs = apply_bar(&t.mul(s), x).unwrap();
                    ensure(lhs == apply_bar(t, &apply_bar(s, x).unwrap()).unwrap(), || "homomorphism fixture".into())?;
                    for k in -2..=2 {
                        let scaled = t.scale(&padic_distal::padic::p_power(pp, k));
                        ensure(apply_bar(&scaled, x).unwrap() == apply_bar(t, x).unwrap(), || "scaling fixture".into())?;
                    }
                    checks += 6;
                }
            }
        }
    }
    for i in 0..1000 {
        let p = PRIMES[i % 3];
        let pp = prime(p);
        match i % 3 {
            0 => {
                // ultrametric equality for scalars and for vectors
                let x = rand_entry(&mut rng, p, -5, 5, 0.0);
                let y = rand_entry(&mut rng, p, -5, 5, 0.0);
                let (vx, vy) = (oracle_val(&x, p).unwrap(), oracle_val(&y, p).unwrap());
                if vx != vy {
                    ensure(oracle_val(&(&x + &y), p) == Some(vx.min(vy)), || "scalar ultrametric".into())?;
                    let lib = padic_distal::padic::rat_norm(&(&x + &y), pp);
                    ensure(lib == NormExp::Exp(-vx.min(vy)), || "library norm".into())?;
                }
                let u = random_sphere_vector(&mut rng, pp, 3, 4).scale(&x);
                let w = random_sphere_vector(&mut rng, pp, 3, 4).scale(&y);
                if u.norm() != w.norm() {
                    ensure(u.add(&w).norm() == u.norm().max(w.norm()), || "vector ultrametric".into())?;
                }
            }
            1 => {
                let n = 2 + i % 2;
                let (t, s) = (rand_matrix(&mut rng, p, n, -2, 2), rand_matrix(&mut rng, p, n, -2, 2));
                if t.det().is_zero() || s.det().is_zero() {
                    continue;
                }
                let x = random_sphere_vector(&mut rng, pp, n, 5);
                let lhs = apply_bar(&t.mul(&s), &x).unwrap();
                ensure(lhs == apply_bar(&t, &apply_bar(&s, &x).unwrap()).unwrap(), || "homomorphism".into())?;
            }
            _ => {
                let n = 2 + i % 2;
                let t = rand_matrix(&mut rng, p, n, -2, 2);
                if t.det().is_zero() {
                    continue;
                }
                let x = random_sphere_vector(&mut rng, pp, n, 5);
                let k = rng.gen_range(-6..=6);
                let scaled = t.scale(&padic_distal::padic::p_power(pp, k));
                ensure(apply_bar(&scaled, &x).unwrap() == apply_bar(&t, &x).unwrap(), || "scaling".into())?;
            }
        }
        checks += 1;
    }
    Ok(format!("{checks} exact checks (fixtures plus randomized)"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let matrices = matrix_pool();
    let linear = matrices.iter().map(|t| is_distal_linear(t).map(|v| v.distal).unwrap_or(false)).collect();
    let pool = Pool { matrices, linear };
    let fixtures = theorem6_fixtures(&pool);

    let criteria: Vec<(u32, Box<dyn Fn() -> Check + '_>)> = vec![
        (1, Box::new(|| criterion_1(&pool))),
        (2, Box::new(|| criterion_2(&pool))),
        (3, Box::new(|| criterion_3(&pool))),
        (4, Box::new(|| criterion_4(&fixtures))),
        (5, Box::new(criterion_5)),
        (6, Box::new(|| criterion_6(&fixtures))),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
    ];
    // ACCEPTANCE_ONLY=1,3 runs a subset
    let only: Option<Vec<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    let mut ran = 0;
    for (n, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        ran += 1;
        let t = Instant::now();
        match run() {
            Ok(msg) => println!("criterion {n:>2}: PASS  {msg} [{:.1}s]", t.elapsed().as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {msg} [{:.1}s]", t.elapsed().as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1}s", ran - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
