mod examples;
mod input;
mod svg;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::io::Write as _;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use toric_gcd::arith_heights::sweep::{excess_slope, sweep_inequality, Coefficients, SweepConfig};
use toric_gcd::arith_heights::{HeightError, LocalHeightConvention, Place};
use toric_gcd::blowup::{star_subdivision, BlowupError};
use toric_gcd::divisor::DivisorError;
use toric_gcd::fan::{standard_fan, FanError, StandardSurface};
use toric_gcd::gcd_bound::{bound_report, bound_report_assuming, AnticanonicalDecomposition, GcdBoundError};
use toric_gcd::polytope::PolytopeError;
use toric_gcd::rational::Rational;
use toric_gcd::volume_beta::{beta, pseudoeffective_threshold, BetaError};

use input::{load_decomposition, load_fan, parse_indices, parse_rational_arg, InputError, Setting};

#[derive(Parser)]
#[command(name = "toric-gcd", version, about = "Toric divisor volumes, blow-ups and gcd height bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and report its rays and cones.
    FanValidate {
        #[arg(long)]
        fan: String,
    },
    /// Polytope of a divisor: vertices, volume, lattice points.
    Polytope {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        blowup_center: Option<String>,
        #[arg(long)]
        divisor: String,
        /// Write a picture of a 2-d polytope to this file.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Star subdivision at a cone.
    Blowup {
        #[arg(long)]
        fan: String,
        /// Ray indices of the center, e.g. `1,3`.
        #[arg(long)]
        center: String,
    },
    /// Asymptotic volume constant beta(L, F).
    Beta {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        blowup_center: Option<String>,
        #[arg(long = "L")]
        l: String,
        #[arg(long = "F")]
        f: String,
    },
    /// Pseudoeffective threshold of L along F.
    GammaEff {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        blowup_center: Option<String>,
        #[arg(long = "L")]
        l: String,
        #[arg(long = "F")]
        f: String,
    },
    /// Coefficients of the gcd height inequality.
    GcdBound {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        blowup_center: String,
        /// `primes` or a JSON file `{"divisors": [{"coeffs": [...]}, ...]}`.
        #[arg(long, default_value = "primes")]
        decomposition: String,
        #[arg(long, default_value = "1/100")]
        epsilon: String,
        /// Report even when a pair of pulled-back members fails to
        /// intersect properly.
        #[arg(long)]
        assume_general: bool,
    },
    /// Sweep the gcd inequality on the blow-up of P1xP1 at a point.
    GcdCheck {
        #[arg(long, default_value_t = 200)]
        grid: u64,
        #[arg(long, default_value = "1/100")]
        epsilon: String,
        /// Comma-separated places in S, e.g. `inf,2,3`.
        #[arg(long, default_value = "inf")]
        places: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of extra random rational samples.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// `torus-invariant` or `infinity-only`.
        #[arg(long, default_value = "torus-invariant")]
        convention: String,
        /// Also fit the growth of the max excess over these grid sides.
        #[arg(long)]
        slope: Option<String>,
        /// Write per-sample rows to this CSV file.
        #[arg(long)]
        csv: Option<String>,
    },
    /// Reproduce a worked example.
    #[command(subcommand)]
    Examples(Example),
}

#[derive(Subcommand)]
enum Example {
    /// P2 blown up at a point, L = aD2, F = E.
    P2Point {
        #[arg(long, default_value = "1,2,3")]
        a: String,
    },
    /// P1xP1 blown up at a point, L = aD3 + bD4, F = E.
    P1xp1Point {
        #[arg(long, default_value_t = 1)]
        a: i64,
        #[arg(long, default_value_t = 1)]
        b: i64,
    },
    /// The anticanonical gcd bound on the blow-up of P1xP1.
    P1xp1Gcd,
}

fn s(r: &Rational) -> String {
    r.to_string()
}

fn run(command: Command) -> Result<Value> {
    match command {
        Command::FanValidate { fan } => {
            let fan = load_fan(&fan)?;
            Ok(json!({
                "valid": true,
                "smooth": fan.is_smooth(),
                "fan": fan.to_json(),
            }))
        }
        Command::Polytope { fan, blowup_center, divisor, svg } => {
            let setting = Setting::new(&fan, blowup_center.as_deref())?;
            let d = setting.divisor(&divisor)?;
            let p = d.polytope();
            let vertices = p.vertices()?;
            let points = p.lattice_points()?;
            if let Some(path) = svg {
                if p.dim() != 2 {
                    return Err(InputError::new("SvgNeedsDim2", "--svg needs a 2-d polytope").into());
                }
                std::fs::write(&path, svg::render(vertices, &points))?;
            }
            Ok(json!({
                "dim": p.dim(),
                "divisor": d.to_json(),
                "halfspaces": p.halfspaces(),
                "vertices": vertices.iter().map(|v| v.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "volume": s(&p.volume()?),
                "divisor_volume": s(&d.volume()?),
                "lattice_point_count": points.len(),
                "lattice_points": points,
            }))
        }
        Command::Blowup { fan, center } => {
            let fan = load_fan(&fan)?;
            let map = star_subdivision(&fan, &parse_indices(&center)?)?;
            let correspondence: Vec<Value> = map
                .ray_correspondence()
                .iter()
                .enumerate()
                .map(|(t, &src)| json!({ "target": t, "source": src }))
                .collect();
            Ok(json!({
                "source_fan": map.source_fan().to_json(),
                "center": map.center().rays(),
                "codim": map.codim(),
                "new_ray_index": map.new_ray_index(),
                "new_ray": map.source_fan().ray(map.new_ray_index()).coords(),
                "ray_correspondence": correspondence,
                "exceptional_divisor": map.exceptional_divisor().to_json(),
                "canonical_relation": map.canonical_relation_check(),
            }))
        }
        Command::Beta { fan, blowup_center, l, f } => {
            let setting = Setting::new(&fan, blowup_center.as_deref())?;
            let r = beta(&setting.divisor(&l)?, &setting.divisor(&f)?)?;
            let vf = serde_json::to_value(&r.volume_function)?;
            Ok(json!({
                "beta": s(&r.beta),
                "gamma_eff": s(&r.gamma_eff),
                "volume_L": s(&r.volume_l),
                "breakpoints": vf["breakpoints"],
                "pieces": vf["pieces"],
            }))
        }
        Command::GammaEff { fan, blowup_center, l, f } => {
            let setting = Setting::new(&fan, blowup_center.as_deref())?;
            let g = pseudoeffective_threshold(&setting.divisor(&l)?, &setting.divisor(&f)?)?;
            Ok(json!({ "gamma_eff": s(&g) }))
        }
        Command::GcdBound { fan, blowup_center, decomposition, epsilon, assume_general } => {
            let setting = Setting::new(&fan, Some(&blowup_center))?;
            let map = setting.map.as_ref().expect("center given");
            let decomp = if decomposition == "primes" {
                AnticanonicalDecomposition::primes(setting.base.clone())
            } else {
                AnticanonicalDecomposition::new(setting.base.clone(), load_decomposition(&setting.base, &decomposition)?)?
            };
            let epsilon = parse_rational_arg(&epsilon)?;
            let report = if assume_general {
                bound_report_assuming(map, &decomp, &epsilon)?
            } else {
                bound_report(map, &decomp, &epsilon)?
            };
            Ok(serde_json::to_value(report)?)
        }
        Command::GcdCheck { grid, epsilon, places, seed, random, convention, slope, csv } => {
            gcd_check(grid, &epsilon, &places, seed, random, &convention, slope.as_deref(), csv.as_deref())
        }
        Command::Examples(example) => match example {
            Example::P2Point { a } => {
                let values: Vec<i64> = parse_indices(&a)?.into_iter().map(|x| x as i64).collect();
                examples::p2_point(&values)
            }
            Example::P1xp1Point { a, b } => examples::p1xp1_point(a, b),
            Example::P1xp1Gcd => examples::p1xp1_gcd(),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn gcd_check(
    grid: u64,
    epsilon: &str,
    places: &str,
    seed: u64,
    random: usize,
    convention: &str,
    slope: Option<&str>,
    csv_path: Option<&str>,
) -> Result<Value> {
    let base = std::sync::Arc::new(standard_fan(StandardSurface::P1xP1));
    let map = star_subdivision(&base, &[1, 2])?;
    let report = bound_report(&map, &AnticanonicalDecomposition::primes(base), &parse_rational_arg(epsilon)?)?;
    let places: BTreeSet<Place> = places.split(',').map(|p| p.parse()).collect::<Result<_, HeightError>>()?;
    let convention: LocalHeightConvention =
        convention.parse().map_err(|m: String| InputError::new("InvalidConvention", m))?;
    let config = SweepConfig { grid, places, random_samples: random, seed, convention, ..SweepConfig::default() };
    let coefficients = Coefficients::from(&report);
    let sweep = sweep_inequality(&coefficients, &config)?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["alpha", "beta", "lhs", "rhs", "excess", "z_suspect"])?;
        for row in &sweep.rows {
            w.write_record([
                row.alpha.clone(),
                row.beta.clone(),
                row.lhs_float.to_string(),
                row.rhs_float.to_string(),
                row.excess_float.to_string(),
                row.z_suspect.to_string(),
            ])?;
        }
        w.flush()?;
    }
    let slope = match slope {
        Some(sides) => {
            let sides: Vec<u64> = parse_indices(sides)?.into_iter().map(|x| x as u64).collect();
            Some(excess_slope(&coefficients, &config, &sides)?)
        }
        None => None,
    };
    Ok(json!({
        "bound": {
            "delta": s(&report.delta),
            "epsilon": s(&report.epsilon),
            "coeff_height": s(&report.coeff_height),
            "coeff_weil": s(&report.coeff_weil),
        },
        "sweep": sweep,
        "slope": slope,
    }))
}

fn variant(e: &dyn Debug) -> String {
    let text = format!("{e:?}");
    text.split(|c: char| !(c.is_alphanumeric() || c == '_')).next().unwrap_or("Error").to_string()
}

fn fan_error(e: &FanError) -> Value {
    let mut v = json!({ "code": variant(e) });
    match e {
        FanError::NonPrimitiveRay { ray } | FanError::DuplicateRay { ray } => v["ray"] = json!(ray),
        FanError::NonSmoothCone { cone, det } => {
            v["cone"] = json!(cone);
            v["det"] = json!(det);
        }
        FanError::MalformedCone { cone, .. } => v["cone"] = json!(cone),
        _ => {}
    }
    v
}

fn divisor_error(e: &DivisorError) -> Value {
    match e {
        DivisorError::Polytope(p) => json!({ "code": variant(p) }),
        DivisorError::NotPrime { index } => json!({ "code": variant(e), "index": index }),
        _ => json!({ "code": variant(e) }),
    }
}

fn blowup_error(e: &BlowupError) -> Value {
    match e {
        BlowupError::InvalidSubdivision(f) => fan_error(f),
        BlowupError::NotACone { rays } => json!({ "code": variant(e), "rays": rays }),
        _ => json!({ "code": variant(e) }),
    }
}

fn beta_error(e: &BetaError) -> Value {
    match e {
        BetaError::Polytope(p) => json!({ "code": variant(p) }),
        BetaError::Divisor(d) => divisor_error(d),
        _ => json!({ "code": variant(e) }),
    }
}

fn gcd_error(e: &GcdBoundError) -> Value {
    match e {
        GcdBoundError::Beta(b) => beta_error(b),
        GcdBoundError::Blowup(b) => blowup_error(b),
        GcdBoundError::Divisor(d) => divisor_error(d),
        _ => json!({ "code": variant(e) }),
    }
}

/// Machine-readable form of a failure.
fn error_object(err: &anyhow::Error) -> Value {
    let mut v = if let Some(e) = err.downcast_ref::<FanError>() {
        fan_error(e)
    } else if let Some(e) = err.downcast_ref::<DivisorError>() {
        divisor_error(e)
    } else if let Some(e) = err.downcast_ref::<BlowupError>() {
        blowup_error(e)
    } else if let Some(e) = err.downcast_ref::<BetaError>() {
        beta_error(e)
    } else if let Some(e) = err.downcast_ref::<GcdBoundError>() {
        gcd_error(e)
    } else if let Some(e) = err.downcast_ref::<PolytopeError>() {
        json!({ "code": variant(e) })
    } else if let Some(e) = err.downcast_ref::<HeightError>() {
        json!({ "code": variant(e) })
    } else if let Some(e) = err.downcast_ref::<InputError>() {
        json!({ "code": e.code })
    } else if err.downcast_ref::<serde_json::Error>().is_some() {
        json!({ "code": "InvalidJson" })
    } else if err.downcast_ref::<std::io::Error>().is_some() || err.downcast_ref::<csv::Error>().is_some() {
        json!({ "code": "Io" })
    } else {
        json!({ "code": "Error" })
    };
    v["message"] = json!(format!("{err:#}"));
    v
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let _ = writeln!(std::io::stderr().lock(), "{}", error_object(&err));
            ExitCode::from(1)
        }
    }
}
