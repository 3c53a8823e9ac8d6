//! Pseudoeffective thresholds, the volume function `t ↦ Vol(P_{L − tF})`
//! as an exact piecewise polynomial, and the asymptotic volume constant
//!
//! ```text
//! β(L, F) = ∫₀^{γ_eff} Vol(P_{L − tF}) dt / Vol(P_L).
//! ```
//!
//! `F` enters only through the `t`-dependent offsets `−aᵢ + t·fᵢ`, so it may
//! be any torus-invariant divisor (a pulled-back prime, an exceptional
//! divisor, or a sum of them).

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::divisor::{DivisorError, ToricDivisor};
use crate::piecewise::{PiecewisePolynomial, Polynomial};
use crate::polytope::fourier_motzkin::{self, Inequality, Projection};
use crate::polytope::{linalg, HalfSpace, Polytope, PolytopeError};
use crate::rational::{self as q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BetaError {
    #[error("L is not big (its polytope has zero volume)")]
    NotBig,
    #[error("L is not effective: its polytope is empty")]
    EmptyPolytope,
    #[error("pseudoeffective threshold is infinite")]
    Unbounded,
    #[error("L and F live on different fans")]
    FanMismatch,
    #[error("volume on [{lo}, {hi}] is not a polynomial of degree <= {degree}")]
    InterpolationMismatch { lo: Box<Rational>, hi: Box<Rational>, degree: usize },
    #[error("volume function is discontinuous")]
    Discontinuous,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaResult {
    pub beta: Rational,
    pub gamma_eff: Rational,
    /// Euclidean volume of `P_L`.
    pub volume_l: Rational,
    /// `t ↦ Vol_{R^d}(P_{L − tF})` on `[0, γ_eff]`.
    pub volume_function: PiecewisePolynomial,
}

/// `P_{L − tF}`.
pub fn polytope_at(l: &ToricDivisor, f: &ToricDivisor, t: &Rational) -> Result<Polytope, BetaError> {
    check_same_fan(l, f)?;
    let fan = l.fan();
    let halfspaces = fan
        .rays()
        .iter()
        .zip(l.coeffs().iter().zip(f.coeffs()))
        .map(|(v, (a, b))| HalfSpace::new(v.coords().to_vec(), -a + b * t))
        .collect();
    Ok(Polytope::new(fan.dim(), halfspaces)?)
}

fn check_same_fan(l: &ToricDivisor, f: &ToricDivisor) -> Result<(), BetaError> {
    if l.same_fan(f) {
        Ok(())
    } else {
        Err(BetaError::FanMismatch)
    }
}

fn require_big(l: &ToricDivisor) -> Result<(), BetaError> {
    if l.polytope().volume()?.is_positive() {
        Ok(())
    } else {
        Err(BetaError::NotBig)
    }
}

/// Rows of the `(m, t)` system `⟨m, vᵢ⟩ − fᵢ t >= −aᵢ`.
fn lifted_system(l: &ToricDivisor, f: &ToricDivisor) -> Vec<Inequality> {
    l.fan()
        .rays()
        .iter()
        .zip(l.coeffs().iter().zip(f.coeffs()))
        .map(|(v, (a, b))| {
            let mut coeffs: Vec<Rational> = v.coords().iter().map(|&x| q::int(x)).collect();
            coeffs.push(-b.clone());
            Inequality::new(coeffs, -a.clone())
        })
        .collect()
}

/// `sup { t >= 0 : P_{L − tF} ≠ ∅ }` without the bigness check.
fn threshold(l: &ToricDivisor, f: &ToricDivisor) -> Result<Rational, BetaError> {
    check_same_fan(l, f)?;
    let d = l.fan().dim();
    let mut system = lifted_system(l, f);
    let mut t_nonneg = vec![Rational::zero(); d + 1];
    t_nonneg[d] = q::int(1);
    system.push(Inequality::new(t_nonneg, Rational::zero()));
    let vars: Vec<usize> = (0..d).collect();
    let rows = match fourier_motzkin::project_out(system, &vars) {
        Projection::Infeasible => return Err(BetaError::EmptyPolytope),
        Projection::System(rows) => rows,
    };
    let mut upper: Option<Rational> = None;
    let mut lower = Rational::zero();
    for row in rows {
        let c = &row.coeffs[d];
        let bound = &row.rhs / c;
        if c.is_negative() {
            upper = Some(match upper {
                Some(u) if u <= bound => u,
                _ => bound,
            });
        } else if bound > lower {
            lower = bound;
        }
    }
    let upper = upper.ok_or(BetaError::Unbounded)?;
    if upper < lower {
        return Err(BetaError::EmptyPolytope);
    }
    Ok(upper)
}

/// The pseudoeffective threshold `γ_eff(L, F)`.
pub fn pseudoeffective_threshold(l: &ToricDivisor, f: &ToricDivisor) -> Result<Rational, BetaError> {
    check_same_fan(l, f)?;
    require_big(l)?;
    threshold(l, f)
}

/// Values of `t` in `(0, γ)` where `d + 1` constraints of the `(m, t)`
/// system meet in a single point. The combinatorial type of `P_{L − tF}`
/// can only change there. Spurious candidates are harmless.
fn breakpoint_candidates(l: &ToricDivisor, f: &ToricDivisor, gamma: &Rational) -> Vec<Rational> {
    let d = l.fan().dim();
    let system = lifted_system(l, f);
    let mut out = vec![Rational::zero(), gamma.clone()];
    for subset in (0..system.len()).combinations(d + 1) {
        let a: linalg::Matrix = subset.iter().map(|&i| system[i].coeffs.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| system[i].rhs.clone()).collect();
        if let Some(sol) = linalg::solve(&a, &b) {
            let t = sol[d].clone();
            if t.is_positive() && &t < gamma {
                out.push(t);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn interval_piece(
    l: &ToricDivisor,
    f: &ToricDivisor,
    lo: &Rational,
    hi: &Rational,
) -> Result<Polynomial, BetaError> {
    let d = l.fan().dim();
    let width = hi - lo;
    let denom = q::int(d as i64 + 2);
    let nodes: Vec<Rational> = (1..=d as i64 + 1).map(|k| lo + &width * q::int(k) / &denom).collect();
    let values = nodes
        .iter()
        .map(|t| Ok(polytope_at(l, f, t)?.volume()?))
        .collect::<Result<Vec<_>, BetaError>>()?;
    let poly = Polynomial::interpolate(&nodes, &values);
    // one extra node guards against an underestimated degree
    let check = lo + &width / (&denom * q::int(2));
    if poly.eval(&check) != polytope_at(l, f, &check)?.volume()? {
        return Err(BetaError::InterpolationMismatch { lo: Box::new(lo.clone()), hi: Box::new(hi.clone()), degree: d });
    }
    Ok(poly)
}

/// `t ↦ Vol_{R^d}(P_{L − tF})` on `[0, γ_eff]`, merged.
///
/// Bigness is not required: when `γ_eff = 0` the result is a single
/// zero-width piece and integrates to zero.
pub fn volume_function(l: &ToricDivisor, f: &ToricDivisor) -> Result<PiecewisePolynomial, BetaError> {
    let gamma = threshold(l, f)?;
    if gamma.is_zero() {
        let v = l.polytope().volume()?;
        return Ok(PiecewisePolynomial::new(vec![gamma.clone(), gamma], vec![Polynomial::constant(v)]));
    }
    let breakpoints = breakpoint_candidates(l, f, &gamma);
    let pieces = breakpoints
        .par_windows(2)
        .map(|w| interval_piece(l, f, &w[0], &w[1]))
        .collect::<Result<Vec<_>, BetaError>>()?;
    let function = PiecewisePolynomial::new(breakpoints, pieces);
    if !function.is_continuous() {
        return Err(BetaError::Discontinuous);
    }
    Ok(function.merged())
}

/// `β(L, F)` with its threshold and volume function.
pub fn beta(l: &ToricDivisor, f: &ToricDivisor) -> Result<BetaResult, BetaError> {
    check_same_fan(l, f)?;
    let volume_l = l.polytope().volume()?;
    if !volume_l.is_positive() {
        return Err(BetaError::NotBig);
    }
    let volume_function = volume_function(l, f)?;
    let gamma_eff = volume_function.domain().1.clone();
    let beta = volume_function.integral() / &volume_l;
    Ok(BetaResult { beta, gamma_eff, volume_l, volume_function })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::star_subdivision;
    use crate::divisor::anticanonical_divisor;
    use crate::fan::{standard_fan, StandardSurface};
    use crate::rational::{int, rat};
    use std::sync::Arc;

    fn poly(c: &[Rational]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn anticanonical_along_d4() {
        let base = Arc::new(standard_fan(StandardSurface::P1xP1));
        let map = star_subdivision(&base, &[1, 2]).unwrap();
        let l = anticanonical_divisor(map.source_fan());
        let f = map.pullback(&ToricDivisor::prime(base, 3)).unwrap();
        assert_eq!(pseudoeffective_threshold(&l, &f).unwrap(), int(2));
        let vf = volume_function(&l, &f).unwrap();
        assert_eq!(vf.breakpoints(), &[int(0), int(1), int(2)]);
        assert_eq!(vf.pieces()[0], poly(&[rat(7, 2), int(-2)]));
        // ½(2−t)² + (2−t)
        assert_eq!(vf.pieces()[1], poly(&[int(4), int(-3), rat(1, 2)]));
        let r = beta(&l, &f).unwrap();
        assert_eq!(r.beta, rat(19, 21));
        assert_eq!(r.volume_l, rat(7, 2));
    }

    #[test]
    fn plane_point() {
        let base = Arc::new(standard_fan(StandardSurface::P2));
        let map = star_subdivision(&base, &[0, 2]).unwrap();
        let e = map.exceptional_divisor();
        for a in 1..=5 {
            let l = map.pullback(&ToricDivisor::prime(base.clone(), 1).scaled(&int(a))).unwrap();
            let r = beta(&l, &e).unwrap();
            assert_eq!(r.gamma_eff, int(a));
            assert_eq!(r.beta, rat(2 * a, 3));
            assert_eq!(r.volume_function.pieces(), &[poly(&[rat(a * a, 2), int(0), rat(-1, 2)])]);
        }
    }

    #[test]
    fn degenerate_and_error_cases() {
        let base = Arc::new(standard_fan(StandardSurface::P1xP1));
        let map = star_subdivision(&base, &[1, 2]).unwrap();
        let e = map.exceptional_divisor();
        // D₁' is not big: its polytope is a segment
        let l = ToricDivisor::prime(map.source_fan().clone(), 1);
        assert_eq!(beta(&l, &e).unwrap_err(), BetaError::NotBig);
        assert_eq!(pseudoeffective_threshold(&l, &e).unwrap_err(), BetaError::NotBig);
        let vf = volume_function(&l, &e).unwrap();
        assert_eq!(vf.integral(), int(0));
        let big = anticanonical_divisor(map.source_fan());
        let zero = ToricDivisor::zero(map.source_fan().clone());
        assert_eq!(pseudoeffective_threshold(&big, &zero).unwrap_err(), BetaError::Unbounded);
        let other = ToricDivisor::prime(base, 0);
        assert_eq!(beta(&big, &other).unwrap_err(), BetaError::FanMismatch);
    }
}
