//! Empirical check of the gcd inequality on the blow-up of `P¹×P¹`.
//!
//! For each sample `(α, β)`:
//!
//! ```text
//! LHS = h_gcd(α, β)
//! RHS = coeff_height · h_{−π*K}(α, β) + coeff_weil · Σ_{v ∉ S} λ_{−π*K,v}(α, β)
//! ```
//!
//! with `h_{−π*K} = 2h(α) + 2h(β)` and the local heights chosen by
//! [`LocalHeightConvention`]. The bound only holds up to `O(1)` and off an
//! unknown exceptional set, so the sweep characterizes the excess
//! `LHS − RHS` rather than asserting its sign.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    anticanonical_height, h_gcd, height_p1, local_anticanonical, support_places, HeightError,
    LocalHeightConvention, LogCombination, Place,
};
use crate::gcd_bound::GcdBoundReport;
use crate::rational::{self as q, Rational};

/// Comparison tolerance for float sums of logarithms.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    /// Side of the integer grid `1..=grid` in each coordinate.
    pub grid: u64,
    /// The finite set `S`; its local terms are left out of the RHS.
    pub places: BTreeSet<Place>,
    /// Extra seeded samples with numerators and denominators in
    /// `1..=random_bound` and random signs.
    pub random_samples: usize,
    pub random_bound: u64,
    pub seed: u64,
    pub convention: LocalHeightConvention,
    pub histogram_bins: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid: 50,
            places: BTreeSet::from([Place::Infinite]),
            random_samples: 0,
            random_bound: 1000,
            seed: 0,
            convention: LocalHeightConvention::default(),
            histogram_bins: 20,
        }
    }
}

/// The two coefficients of the inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficients {
    pub height: Rational,
    pub weil: Rational,
}

impl From<&GcdBoundReport> for Coefficients {
    fn from(r: &GcdBoundReport) -> Self {
        Coefficients { height: r.coeff_height.clone(), weil: r.coeff_weil.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: String,
    pub beta: String,
    pub lhs_float: f64,
    pub rhs_float: f64,
    pub excess_float: f64,
    pub z_suspect: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo_float: f64,
    pub hi_float: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub samples: usize,
    pub grid: u64,
    pub places: Vec<Place>,
    pub convention: LocalHeightConvention,
    pub max_excess_float: f64,
    pub max_excess_at: Option<(String, String)>,
    pub violations: usize,
    pub z_suspects: usize,
    pub excess_histogram: Vec<HistogramBin>,
    pub assessment: &'static str,
    #[serde(skip)]
    pub rows: Vec<SweepRow>,
}

/// Evaluates one sample.
pub fn evaluate(
    coefficients: &Coefficients,
    places: &BTreeSet<Place>,
    convention: LocalHeightConvention,
    alpha: &Rational,
    beta: &Rational,
) -> Result<SweepRow, HeightError> {
    // adding 0.0 turns -0.0 into 0.0
    let lhs = h_gcd(alpha, beta)?.value() + 0.0;
    let global = anticanonical_height(alpha, beta)?.value();
    let mut outside = LogCombination::zero();
    for place in support_places(&[alpha, beta])? {
        if !places.contains(&place) {
            outside.add_assign(&local_anticanonical(convention, place, alpha, beta)?);
        }
    }
    let rhs = q::to_f64(&coefficients.height) * global + q::to_f64(&coefficients.weil) * outside.value();
    let rhs = rhs + 0.0;
    let excess = lhs - rhs + 0.0;
    // low-height multiplicative relations between α and β
    let ratio_height = height_p1(&(beta / alpha));
    Ok(SweepRow {
        alpha: alpha.to_string(),
        beta: beta.to_string(),
        lhs_float: lhs,
        rhs_float: rhs,
        excess_float: excess,
        z_suspect: ratio_height <= 2f64.ln() + TOLERANCE || excess > TOLERANCE,
    })
}

fn samples(config: &SweepConfig) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = (1..=config.grid as i64)
        .flat_map(|a| (1..=config.grid as i64).map(move |b| (q::int(a), q::int(b))))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bound = config.random_bound.max(1) as i64;
    let draw = |rng: &mut ChaCha8Rng| {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        Rational::new(BigInt::from(sign * rng.gen_range(1..=bound)), BigInt::from(rng.gen_range(1..=bound)))
    };
    for _ in 0..config.random_samples {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        out.push((a, b));
    }
    out
}

fn histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            lo_float: lo + width * k as f64,
            hi_float: lo + width * (k + 1) as f64,
            count,
        })
        .collect()
}

/// Runs the sweep over the grid and the seeded random samples.
pub fn sweep_inequality(coefficients: &Coefficients, config: &SweepConfig) -> Result<SweepReport, HeightError> {
    let pairs = samples(config);
    if pairs.is_empty() {
        return Err(HeightError::EmptyGrid);
    }
    let rows = pairs
        .par_iter()
        .map(|(a, b)| evaluate(coefficients, &config.places, config.convention, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let excesses: Vec<f64> = rows.iter().map(|r| r.excess_float).collect();
    let worst = rows
        .iter()
        .max_by(|x, y| x.excess_float.total_cmp(&y.excess_float))
        .expect("nonempty");
    Ok(SweepReport {
        samples: rows.len(),
        grid: config.grid,
        places: config.places.iter().copied().collect(),
        convention: config.convention,
        max_excess_float: worst.excess_float,
        max_excess_at: Some((worst.alpha.clone(), worst.beta.clone())),
        violations: excesses.iter().filter(|&&e| e > TOLERANCE).count(),
        z_suspects: rows.iter().filter(|r| r.z_suspect).count(),
        excess_histogram: histogram(&excesses, config.histogram_bins),
        assessment: "heuristic: the bound holds only up to O(1) and off an unknown exceptional set",
        rows,
    })
}

/// Same as [`sweep_inequality`] with the coefficients of a bound report.
pub fn sweep_report(report: &GcdBoundReport, config: &SweepConfig) -> Result<SweepReport, HeightError> {
    sweep_inequality(&Coefficients::from(report), config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeReport {
    pub sides: Vec<u64>,
    pub max_excess_float: Vec<f64>,
    /// Least-squares slope of max excess against `ln(side)`.
    pub slope_float: f64,
}

/// Max excess on nested grids and its growth rate in `ln(side)`.
pub fn excess_slope(
    coefficients: &Coefficients,
    base: &SweepConfig,
    sides: &[u64],
) -> Result<SlopeReport, HeightError> {
    if sides.len() < 2 {
        return Err(HeightError::EmptyGrid);
    }
    let max_excess = sides
        .iter()
        .map(|&grid| {
            let config = SweepConfig { grid, random_samples: 0, ..base.clone() };
            Ok(sweep_inequality(coefficients, &config)?.max_excess_float)
        })
        .collect::<Result<Vec<f64>, HeightError>>()?;
    let xs: Vec<f64> = sides.iter().map(|&s| (s as f64).ln()).collect();
    Ok(SlopeReport { sides: sides.to_vec(), slope_float: least_squares_slope(&xs, &max_excess), max_excess_float: max_excess })
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx.is_zero() {
        0.0
    } else {
        sxy / sxx
    }
}
