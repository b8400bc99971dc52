//! Command-line front end. All subcommands read JSON (a file path or `-`
//! for stdin) and write JSON to stdout.
//!
//! Exit codes: 0 distal / success, 3 non-distal, 4 inconclusive,
//! 2 usage or domain error, 1 failed `--verify` replay.

use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{verify_orbit_closed, word_product, is_unbounded_in};
use crate::linalg::{eigenvalue_valuations, PadicMatrix};
use crate::padic::{distance, parse_rational, PadicVector, Prime};
use crate::report::{self, parse_json, vector_json};
use crate::semigroup::{semigroup_distality, NonDistalEvidence, SemigroupOptions, SemigroupSpec, SemigroupVerdict};
use crate::sphere::{
    apply_bar, closed_form_trajectory, pair_separation_series, safe_radius, AffineSphereMap, SphereDynamics, SphereMap,
};
use crate::spectral::DEFAULT_PRECISION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_NON_DISTAL: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "padic-distal", version, about = "Exact distality analysis of p-adic linear and affine sphere maps")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Prime; must agree with the input's "p" field when both are present.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Maximum number of lattice classes explored.
    #[arg(long, global = true, default_value_t = crate::lattice::DEFAULT_CAP)]
    pub cap: usize,
    /// Iteration count for orbits and proximality searches.
    #[arg(long, global = true, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Starting p-adic precision (digits) for spectral splittings.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Replay the certificate behind the answer and fail if it does not hold.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linear and projective distality of one matrix.
    Analyze {
        input: String,
        /// Include the contracting / neutral / expanding splitting.
        #[arg(long)]
        split: bool,
        /// Include wall-clock timing in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Print an orbit on the sphere as JSON lines.
    Orbit {
        input: String,
        /// Start point, comma-separated rationals (overrides "x").
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        /// Second point whose separation from the first is tracked (overrides "y").
        #[arg(long, allow_hyphen_values = true)]
        second: Option<String>,
        /// Translation of an affine map (overrides "a").
        #[arg(long, allow_hyphen_values = true)]
        translation: Option<String>,
    },
    /// Explicit non-distal pair for an affine perturbation of an SD form.
    Witness {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        l1: Option<i64>,
    },
    /// Distality of the semigroup generated by several matrices.
    Semigroup {
        input: String,
        #[arg(long, default_value_t = crate::lattice::DEFAULT_SCAN_LENGTH)]
        scan_length: usize,
    },
    /// Radius of the ball of translations with guaranteed closed form.
    SafeRadius { input: String },
    /// Contracting / neutral / expanding splitting of one matrix.
    Split { input: String },
}

struct Outcome {
    code: i32,
    output: String,
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<Value> {
    let mut text = String::new();
    if path == "-" {
        stdin.read_to_string(&mut text).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    parse_json(&text)
}

fn parse_csv_vector(p: Prime, s: &str) -> Result<PadicVector> {
    let xs = s.split(',').map(|c| parse_rational(c.trim())).collect::<Result<Vec<_>>>()?;
    PadicVector::new(p, xs)
}

fn vector_arg(p: Prime, flag: &Option<String>, v: &Value, key: &str) -> Result<Option<PadicVector>> {
    match (flag, v.get(key)) {
        (Some(s), _) => parse_csv_vector(p, s).map(Some),
        (None, Some(j)) => report::parse_vector(p, j).map(Some),
        (None, None) => Ok(None),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn exit_for(distal: bool) -> i32 {
    if distal {
        EXIT_OK
    } else {
        EXIT_NON_DISTAL
    }
}

/// Runs the CLI on explicit arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_ERROR;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(&cli, stdin) {
        Ok(Outcome { code, output }) => {
            let _ = writeln!(stdout, "{output}");
            if code == EXIT_VERIFY_FAILED {
                let _ = writeln!(stderr, "error: certificate verification failed");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { input, split, timing } => {
            let t = report::parse_matrix(&read_input(input, stdin)?, g.p)?;
            let start = Instant::now();
            let mut r = report::analyze(&t, split.then_some(g.precision))?;
            if *timing {
                r.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let code = if g.verify && !report::verify_analysis(&t, &r)? {
                EXIT_VERIFY_FAILED
            } else {
                exit_for(r.projective.distal)
            };
            Ok(Outcome { code, output: pretty(&serde_json::to_value(&r).expect("report serializes")) })
        }
        Command::Orbit { input, start, second, translation } => orbit(g, &read_input(input, stdin)?, start, second, translation),
        Command::Witness { input, l1 } => {
            let f = report::parse_sdform(&read_input(input, stdin)?, g.p)?;
            let w = report::witness_json(&f, *l1, 10)?;
            let ok = w["verified"] == json!(true);
            Ok(Outcome { code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }, output: pretty(&w) })
        }
        Command::Semigroup { input, scan_length } => {
            let gens = report::parse_generators(&read_input(input, stdin)?, g.p)?;
            let spec = SemigroupSpec::new(gens)?;
            let opts = SemigroupOptions {
                cap: g.cap,
                scan_length: *scan_length,
                seed: g.seed,
                steps: g.steps,
                ..SemigroupOptions::default()
            };
            let verdict = semigroup_distality(&spec, &opts)?;
            let out = report::semigroup_json(&verdict)?;
            let code = if g.verify && !verify_semigroup(&spec, &verdict, &opts)? {
                EXIT_VERIFY_FAILED
            } else {
                match verdict {
                    SemigroupVerdict::Distal { .. } => EXIT_OK,
                    SemigroupVerdict::NonDistal(_) => EXIT_NON_DISTAL,
                    SemigroupVerdict::Inconclusive(_) => EXIT_INCONCLUSIVE,
                }
            };
            Ok(Outcome { code, output: pretty(&out) })
        }
        Command::SafeRadius { input } => {
            let f = report::parse_sdform(&read_input(input, stdin)?, g.p)?;
            let out = report::safe_radius_json(&f)?;
            let code = if g.verify && !verify_safe_radius(&f, g.steps)? { EXIT_VERIFY_FAILED } else { EXIT_OK };
            Ok(Outcome { code, output: pretty(&out) })
        }
        Command::Split { input } => {
            let t = report::parse_matrix(&read_input(input, stdin)?, g.p)?;
            let s = report::split_json(&t, g.precision)?;
            Ok(Outcome { code: EXIT_OK, output: pretty(&serde_json::to_value(&s).expect("split serializes")) })
        }
    }
}

fn orbit(
    g: &GlobalOpts,
    v: &Value,
    start: &Option<String>,
    second: &Option<String>,
    translation: &Option<String>,
) -> Result<Outcome> {
    let t = report::parse_matrix(v, g.p)?;
    let p = t.prime();
    let x = vector_arg(p, start, v, "x")?
        .ok_or_else(|| Error::InvalidArgument("a start point is required (--start or \"x\")".into()))?;
    let y = vector_arg(p, second, v, "y")?;
    let a = vector_arg(p, translation, v, "a")?;
    let map: Box<dyn SphereDynamics> = match &a {
        Some(a) => Box::new(AffineSphereMap::new(t.clone(), a.clone())?),
        None => Box::new(SphereMap::new(t.clone())?),
    };
    let mut traj = vec![x.clone()];
    for j in 0..g.steps {
        traj.push(map.step(&traj[j])?);
    }
    let seps = match &y {
        Some(y) => Some(pair_separation_series(map.as_ref(), &x, y, g.steps)?),
        None => None,
    };
    let lines: Vec<String> = traj
        .iter()
        .enumerate()
        .map(|(j, yj)| {
            let sep = seps.as_ref().map(|s| s[j].exponent()).unwrap_or(None);
            serde_json::to_string(&json!({"step": j, "vector": vector_json(yj), "separation_exponent": sep}))
                .expect("JSON values serialize")
        })
        .collect();
    let mut ok = true;
    if g.verify {
        ok = match &a {
            // Y_j from the closed form, which needs no iteration of the map
            Some(a) => {
                let affine = AffineSphereMap::new(t.clone(), a.clone())?;
                closed_form_trajectory(&affine, &x, g.steps)?.0 == traj
            }
            // Y_j is the normalization of T^j x
            None => (0..=g.steps).all(|j| apply_bar(&t.pow(j as i64).expect("invertible"), &x).ok().as_ref() == Some(&traj[j])),
        };
        if let (Some(y), Some(s)) = (&y, &seps) {
            let mut yj = y.clone();
            for (j, sep) in s.iter().enumerate() {
                ok &= distance(&traj[j], &yj) == *sep;
                yj = map.step(&yj)?;
            }
        }
    }
    Ok(Outcome { code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }, output: lines.join("\n") })
}

fn verify_semigroup(spec: &SemigroupSpec, verdict: &SemigroupVerdict, opts: &SemigroupOptions) -> Result<bool> {
    let gens = spec.generators();
    Ok(match verdict {
        SemigroupVerdict::Distal { orbit, .. } => verify_orbit_closed(gens, orbit)?,
        SemigroupVerdict::NonDistal(NonDistalEvidence::Element(w)) => {
            let e = word_product(gens, &w.word);
            e == w.element && is_unbounded_in(&eigenvalue_valuations(&e)?, spec.mode())
        }
        SemigroupVerdict::NonDistal(NonDistalEvidence::ProximalPair { word, hit }) => {
            let map = SphereMap::new(word_product(gens, word))?;
            let s = pair_separation_series(&map, &hit.x, &hit.y, hit.step)?;
            s[0] > crate::padic::NormExp::Exp(opts.threshold) && s[hit.step] == hit.separation
        }
        SemigroupVerdict::Inconclusive(_) => true,
    })
}

/// Every translation `p^r e_i` at the safe radius gives a homeomorphism
/// whose orbits of the basis vectors follow the closed form.
fn verify_safe_radius(f: &crate::sphere::SDForm, steps: usize) -> Result<bool> {
    let r = safe_radius(f)?;
    let t: &PadicMatrix = f.matrix();
    let p = t.prime();
    let n = t.dim();
    let steps = steps.min(20);
    for i in 0..n {
        let a = PadicVector::basis(p, n, i, crate::padic::p_power(p, -r.radius_exponent));
        if !r.contains(&a) {
            return Ok(false);
        }
        let map = AffineSphereMap::new(t.clone(), a)?;
        if map.mode() != crate::sphere::AffineMode::Homeomorphism {
            return Ok(false);
        }
        for k in 0..n {
            let x = PadicVector::basis(p, n, k, crate::padic::p_power(p, 0));
            let (cf, _) = closed_form_trajectory(&map, &x, steps)?;
            let mut y = x.clone();
            for yj in &cf {
                if *yj != y {
                    return Ok(false);
                }
                y = map.step(&y)?;
            }
        }
    }
    Ok(true)
}
