//! Worked examples with the expected values attached for comparison.

use anyhow::Result;
use serde_json::{json, Value};
use toric_gcd::blowup::star_subdivision;
use toric_gcd::divisor::anticanonical_divisor;
use toric_gcd::fan::{standard_fan, StandardSurface};
use toric_gcd::gcd_bound::{bound_coefficients, gamma_delta, AnticanonicalDecomposition};
use toric_gcd::piecewise::{PiecewisePolynomial, Polynomial};
use toric_gcd::rational::{int, Rational};
use toric_gcd::volume_beta::beta;
use toric_gcd::ToricDivisor;

use crate::input::InputError;

fn s(r: &Rational) -> String {
    r.to_string()
}

fn coeffs(d: &ToricDivisor) -> Vec<String> {
    d.coeffs().iter().map(s).collect()
}

/// Point blow-up of `P²` at the fixed point of `cone(v₁, v₃)` with
/// `L = π*(aD₂)` and `F = E`.
pub fn p2_point(values: &[i64]) -> Result<Value> {
    let base = std::sync::Arc::new(standard_fan(StandardSurface::P2));
    let map = star_subdivision(&base, &[0, 2])?;
    let pullbacks: Vec<Value> = (0..3)
        .map(|i| Ok(json!({ "prime": i, "pullback": coeffs(&map.pullback(&ToricDivisor::prime(base.clone(), i))?) })))
        .collect::<Result<_>>()?;
    let mut cases = Vec::new();
    for &a in values {
        if a <= 0 {
            return Err(InputError::new("InvalidParameter", "a must be positive").into());
        }
        let l = map.pullback(&ToricDivisor::prime(base.clone(), 1).scaled(&int(a)))?;
        let r = beta(&l, &map.exceptional_divisor())?;
        let expected = int(2 * a) / int(3);
        cases.push(json!({
            "a": a,
            "polytope_area": s(&r.volume_l),
            "expected_polytope_area": s(&(int(a * a) / int(2))),
            "gamma_eff": s(&r.gamma_eff),
            "volume_function": r.volume_function,
            "beta": s(&r.beta),
            "expected_beta": s(&expected),
            "matches": r.beta == expected,
        }));
    }
    Ok(json!({
        "example": "p2-point",
        "new_ray": map.source_fan().ray(map.new_ray_index()).coords(),
        "ray_correspondence": map.ray_correspondence(),
        "pullbacks": pullbacks,
        "cases": cases,
    }))
}

/// The normalized volume `f(t) = Vol(π*L − tE)/Vol(L)` for
/// `L = aD₃ + bD₄`, in the three-case form.
fn expected_normalized(a: i64, b: i64) -> PiecewisePolynomial {
    let (lo, hi) = (a.min(b), a.max(b));
    let ab = int(a * b);
    let two_ab = &ab * int(2);
    let mut breakpoints = vec![int(0), int(lo)];
    let mut pieces = vec![Polynomial::new(vec![int(1), int(0), -two_ab.recip()])];
    if lo < hi {
        breakpoints.push(int(hi));
        pieces.push(Polynomial::new(vec![int(1) + int(lo) / (int(hi) * int(2)), -int(hi).recip()]));
    }
    let sum = int(a + b);
    breakpoints.push(sum.clone());
    pieces.push(Polynomial::new(vec![&sum * &sum / &two_ab, -&sum / &ab, two_ab.recip()]));
    PiecewisePolynomial::new(breakpoints, pieces)
}

/// Point blow-up of `P¹×P¹` at the fixed point of `cone(v₂, v₃)` with
/// `L = aπ*D₃ + bπ*D₄` and `F = E`.
pub fn p1xp1_point(a: i64, b: i64) -> Result<Value> {
    if a <= 0 || b <= 0 {
        return Err(InputError::new("InvalidParameter", "a and b must be positive").into());
    }
    let base = std::sync::Arc::new(standard_fan(StandardSurface::P1xP1));
    let map = star_subdivision(&base, &[1, 2])?;
    let l = &map.pullback(&ToricDivisor::prime(base.clone(), 2).scaled(&int(a)))?
        + &map.pullback(&ToricDivisor::prime(base.clone(), 3).scaled(&int(b)))?;
    let r = beta(&l, &map.exceptional_divisor())?;
    let normalized = r.volume_function.scaled(&r.volume_l.recip());
    let expected = expected_normalized(a, b);
    let expected_beta = int(a + b) / int(2);
    Ok(json!({
        "example": "p1xp1-point",
        "a": a,
        "b": b,
        "new_ray": map.source_fan().ray(map.new_ray_index()).coords(),
        "L": coeffs(&l),
        "polytope_area": s(&r.volume_l),
        "gamma_eff": s(&r.gamma_eff),
        "expected_gamma_eff": s(&int(a + b)),
        "volume_function": r.volume_function,
        "normalized_volume_function": normalized,
        "expected_normalized_volume_function": expected,
        "beta": s(&r.beta),
        "expected_beta": s(&expected_beta),
        "matches": r.beta == expected_beta && normalized == expected,
    }))
}

/// `−K` on the blow-up of `P¹×P¹`, the four `β(−K_{S′}, π*Dᵢ)`, and the
/// resulting `γ` and `δ`.
pub fn p1xp1_gcd() -> Result<Value> {
    let base = std::sync::Arc::new(standard_fan(StandardSurface::P1xP1));
    let map = star_subdivision(&base, &[1, 2])?;
    let l = anticanonical_divisor(map.source_fan());
    let area = l.polytope().volume()?;
    let volume = l.volume()?;
    let mut per_divisor = Vec::new();
    for i in 0..4 {
        let r = beta(&l, &map.pullback(&ToricDivisor::prime(base.clone(), i))?)?;
        per_divisor.push(json!({
            "divisor": format!("pi*D{}", i + 1),
            "volume_function": r.volume_function,
            "beta": s(&r.beta),
            "above_7/8": r.beta >= int(7) / int(8),
        }));
    }
    let gd = gamma_delta(&map, &AnticanonicalDecomposition::primes(base))?;
    let (coeff_height_at_zero, _) = bound_coefficients(&gd.delta, &int(0), 2)?;
    let expected_beta = int(19) / int(21);
    let matches = area == int(7) / int(2)
        && volume == int(7)
        && gd.betas.iter().all(|b| *b == expected_beta)
        && gd.gamma == int(21) / int(19)
        && gd.delta == int(2) / int(19)
        && coeff_height_at_zero == int(2) / int(21);
    Ok(json!({
        "example": "p1xp1-gcd",
        "polytope_area": s(&area),
        "expected_polytope_area": "7/2",
        "volume": s(&volume),
        "expected_volume": "7",
        "per_divisor": per_divisor,
        "expected_beta": s(&expected_beta),
        "gamma": s(&gd.gamma),
        "expected_gamma": "21/19",
        "delta": s(&gd.delta),
        "expected_delta": "2/19",
        "coeff_height_at_epsilon_0": s(&coeff_height_at_zero),
        "expected_coeff_height_at_epsilon_0": "2/21",
        "matches": matches,
    }))
}
