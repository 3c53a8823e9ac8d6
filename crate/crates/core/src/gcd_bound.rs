//! Coefficients of the generalized gcd height inequality attached to a
//! blow-up `π : X′ → X` and a decomposition `−K_X ~ D₁ + ⋯ + D_q`.
//!
//! With `βⱼ = β(−K_{X′}, π*Dⱼ)`, `γ = maxⱼ 1/βⱼ` and `δ = max(γ − 1, 0)`,
//! the inequality reads
//!
//! ```text
//! h_E(x′) <= ((δ+ε) h_{−π*K}(x′) + Σ_{v∉S} λ_{−π*K,v}(x′)) / ((1+δ+ε)(r−1)) + O(1)
//! ```
//!
//! off a proper Zariski closed subset. Neither the `O(1)` nor the exceptional
//! set is computable here; the report carries placeholders for both.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::blowup::{BlowupError, BlowupMap};
use crate::divisor::{anticanonical_divisor, intersect_properly, DivisorError, ToricDivisor};
use crate::fan::{standard_fan, Fan, StandardSurface};
use crate::rational::{self as q, Rational};
use crate::volume_beta::{self, BetaError};

/// Value reported for quantities the theory does not pin down.
pub const UNSPECIFIED: &str = "unspecified-by-theory";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcdBoundError {
    #[error("decomposition has no members")]
    EmptyDecomposition,
    #[error("member {index} is not effective")]
    NotEffective { index: usize },
    #[error("member {index} is zero")]
    ZeroMember { index: usize },
    #[error("member {index} lives on a different fan")]
    FanMismatch { index: usize },
    #[error("sum of the decomposition is not linearly equivalent to -K")]
    DecompositionMismatch,
    #[error("decomposition is not on the blow-up's target fan")]
    TargetMismatch,
    #[error("center has codimension {r}; need r >= 2")]
    CodimensionOne { r: usize },
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),
    #[error("hypotheses fail: {0}")]
    HypothesesFailed(String),
    #[error(transparent)]
    Beta(#[from] BetaError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

/// `−K_X ~ D₁ + ⋯ + D_q` with effective nonzero torus-invariant members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticanonicalDecomposition {
    fan: Arc<Fan>,
    divisors: Vec<ToricDivisor>,
}

impl AnticanonicalDecomposition {
    pub fn new(fan: Arc<Fan>, divisors: Vec<ToricDivisor>) -> Result<Self, GcdBoundError> {
        if divisors.is_empty() {
            return Err(GcdBoundError::EmptyDecomposition);
        }
        let mut sum = ToricDivisor::zero(fan.clone());
        for (index, d) in divisors.iter().enumerate() {
            if !(Arc::ptr_eq(d.fan(), &fan) || **d.fan() == *fan) {
                return Err(GcdBoundError::FanMismatch { index });
            }
            if d.is_zero() {
                return Err(GcdBoundError::ZeroMember { index });
            }
            if !d.is_effective() {
                return Err(GcdBoundError::NotEffective { index });
            }
            sum = &sum + d;
        }
        if !sum.is_linearly_equivalent(&anticanonical_divisor(&fan)) {
            return Err(GcdBoundError::DecompositionMismatch);
        }
        Ok(AnticanonicalDecomposition { fan, divisors })
    }

    /// `−K_X = D₁ + ⋯ + D_n`, one member per ray.
    pub fn primes(fan: Arc<Fan>) -> Self {
        let divisors = (0..fan.num_rays()).map(|i| ToricDivisor::prime(fan.clone(), i)).collect();
        AnticanonicalDecomposition { fan, divisors }
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn divisors(&self) -> &[ToricDivisor] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntersectionStatus {
    Proper,
    NotProper,
    /// Some pullback is not a prime torus-invariant divisor. Proper
    /// intersection is taken to hold for general members of the class.
    #[serde(rename = "Assumed (general members)")]
    AssumedGeneralMembers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairDiagnostic {
    pub i: usize,
    pub j: usize,
    pub status: IntersectionStatus,
    /// Rays shared by the supports of the torus-invariant pullbacks.
    pub shared_support: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub anticanonical_big: bool,
    #[serde(with = "crate::rational::serde_str")]
    pub anticanonical_volume: Rational,
    pub family_status: IntersectionStatus,
    pub pairs: Vec<PairDiagnostic>,
}

impl HypothesisReport {
    /// Bigness holds and no verdict is `NotProper`.
    pub fn holds(&self) -> bool {
        self.anticanonical_big
            && self.family_status != IntersectionStatus::NotProper
            && self.pairs.iter().all(|p| p.status != IntersectionStatus::NotProper)
    }
}

fn check_target(map: &BlowupMap, decomp: &AnticanonicalDecomposition) -> Result<(), GcdBoundError> {
    let target = map.target_fan();
    if Arc::ptr_eq(target, decomp.fan()) || **target == **decomp.fan() {
        Ok(())
    } else {
        Err(GcdBoundError::TargetMismatch)
    }
}

fn shared(a: &ToricDivisor, b: &ToricDivisor) -> Vec<usize> {
    let sb = b.support();
    a.support().into_iter().filter(|i| sb.contains(i)).collect()
}

fn status_of(pullbacks: &[&ToricDivisor]) -> Result<IntersectionStatus, GcdBoundError> {
    if pullbacks.iter().all(|d| d.as_prime().is_some()) {
        let owned: Vec<ToricDivisor> = pullbacks.iter().map(|d| (*d).clone()).collect();
        Ok(match intersect_properly(&owned) {
            Ok(true) => IntersectionStatus::Proper,
            Ok(false) | Err(DivisorError::RepeatedPrime { .. }) => IntersectionStatus::NotProper,
            Err(e) => return Err(e.into()),
        })
    } else {
        Ok(IntersectionStatus::AssumedGeneralMembers)
    }
}

/// Bigness of `−K_X` and proper intersection of the pulled-back members.
pub fn check_hypotheses(
    map: &BlowupMap,
    decomp: &AnticanonicalDecomposition,
) -> Result<HypothesisReport, GcdBoundError> {
    check_target(map, decomp)?;
    let anticanonical_volume = anticanonical_divisor(decomp.fan()).volume()?;
    let pullbacks = decomp
        .divisors()
        .iter()
        .map(|d| map.pullback(d))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pairs = Vec::new();
    for i in 0..pullbacks.len() {
        for j in i + 1..pullbacks.len() {
            pairs.push(PairDiagnostic {
                i,
                j,
                status: status_of(&[&pullbacks[i], &pullbacks[j]])?,
                shared_support: shared(&pullbacks[i], &pullbacks[j]),
            });
        }
    }
    let all: Vec<&ToricDivisor> = pullbacks.iter().collect();
    Ok(HypothesisReport {
        anticanonical_big: anticanonical_volume.is_positive(),
        anticanonical_volume,
        family_status: status_of(&all)?,
        pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaDelta {
    #[serde(with = "crate::rational::serde_str")]
    pub gamma: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub betas: Vec<Rational>,
}

/// Representative of `D`'s class vanishing on the first maximal cone, or `D`
/// itself when no integral character does that.
fn normal_form(d: &ToricDivisor) -> ToricDivisor {
    let cone = d.fan().max_cones()[0].rays().to_vec();
    d.normalized_on(&cone).unwrap_or_else(|_| d.clone())
}

/// `βⱼ = β(−K_{X′}, π*Dⱼ)` for each member.
pub fn per_divisor_betas(
    map: &BlowupMap,
    decomp: &AnticanonicalDecomposition,
) -> Result<Vec<Rational>, GcdBoundError> {
    check_target(map, decomp)?;
    let l = anticanonical_divisor(map.source_fan());
    decomp
        .divisors()
        .par_iter()
        .map(|d| {
            let f = map.pullback(&normal_form(d))?;
            Ok(volume_beta::beta(&l, &f)?.beta)
        })
        .collect()
}

/// `(γ, δ)` with `δ` minimal.
pub fn gamma_delta(map: &BlowupMap, decomp: &AnticanonicalDecomposition) -> Result<GammaDelta, GcdBoundError> {
    let betas = per_divisor_betas(map, decomp)?;
    let gamma = betas
        .iter()
        .map(|b| b.recip())
        .max()
        .expect("decomposition is nonempty");
    let delta = (&gamma - Rational::one()).max(Rational::zero());
    Ok(GammaDelta { gamma, delta, betas })
}

/// `((δ+ε)/((1+δ+ε)(r−1)), 1/((1+δ+ε)(r−1)))`. `ε = 0` is accepted here so
/// the formal limit can be evaluated.
pub fn bound_coefficients(
    delta: &Rational,
    epsilon: &Rational,
    r: usize,
) -> Result<(Rational, Rational), GcdBoundError> {
    if r < 2 {
        return Err(GcdBoundError::CodimensionOne { r });
    }
    if epsilon.is_negative() {
        return Err(GcdBoundError::NonPositiveEpsilon(epsilon.clone()));
    }
    let slack = delta + epsilon;
    let denom = (Rational::one() + &slack) * q::int(r as i64 - 1);
    let coeff_weil = denom.recip();
    Ok((slack * &coeff_weil, coeff_weil))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundCheck {
    #[serde(with = "crate::rational::serde_str")]
    pub bound: Rational,
    pub per_divisor: Vec<bool>,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdBoundReport {
    #[serde(with = "crate::rational::serde_str")]
    pub gamma: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    pub r: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub epsilon: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub coeff_height: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub coeff_weil: Rational,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub per_divisor_betas: Vec<Rational>,
    /// Present only for the point blow-up of `P¹×P¹`, where `7/8` is a known
    /// lower bound for each `βⱼ`.
    pub beta_lower_bound: Option<LowerBoundCheck>,
    pub hypotheses: HypothesisReport,
    pub constant_term: &'static str,
    pub exceptional_set: &'static str,
}

fn lower_bound_check(map: &BlowupMap, betas: &[Rational]) -> Option<LowerBoundCheck> {
    let p1xp1 = standard_fan(StandardSurface::P1xP1);
    if **map.target_fan() != p1xp1 || map.codim() != 2 {
        return None;
    }
    let bound = q::rat(7, 8);
    let per_divisor: Vec<bool> = betas.iter().map(|b| *b >= bound).collect();
    let all_hold = per_divisor.iter().all(|&x| x);
    Some(LowerBoundCheck { bound, per_divisor, all_hold })
}

fn build_report(
    map: &BlowupMap,
    decomp: &AnticanonicalDecomposition,
    epsilon: &Rational,
    require_hypotheses: bool,
) -> Result<GcdBoundReport, GcdBoundError> {
    let r = map.codim();
    if r < 2 {
        return Err(GcdBoundError::CodimensionOne { r });
    }
    if !epsilon.is_positive() {
        return Err(GcdBoundError::NonPositiveEpsilon(epsilon.clone()));
    }
    let hypotheses = check_hypotheses(map, decomp)?;
    if require_hypotheses && !hypotheses.holds() {
        let reason = if hypotheses.anticanonical_big {
            "pulled-back members do not intersect properly"
        } else {
            "-K is not big"
        };
        return Err(GcdBoundError::HypothesesFailed(reason.to_string()));
    }
    let GammaDelta { gamma, delta, betas } = gamma_delta(map, decomp)?;
    let (coeff_height, coeff_weil) = bound_coefficients(&delta, epsilon, r)?;
    Ok(GcdBoundReport {
        beta_lower_bound: lower_bound_check(map, &betas),
        gamma,
        delta,
        r,
        epsilon: epsilon.clone(),
        coeff_height,
        coeff_weil,
        per_divisor_betas: betas,
        hypotheses,
        constant_term: UNSPECIFIED,
        exceptional_set: UNSPECIFIED,
    })
}

/// Full report; fails if a hypothesis is definitely violated.
pub fn bound_report(
    map: &BlowupMap,
    decomp: &AnticanonicalDecomposition,
    epsilon: &Rational,
) -> Result<GcdBoundReport, GcdBoundError> {
    build_report(map, decomp, epsilon, true)
}

/// Full report with the hypothesis verdict recorded but not enforced.
pub fn bound_report_assuming(
    map: &BlowupMap,
    decomp: &AnticanonicalDecomposition,
    epsilon: &Rational,
) -> Result<GcdBoundReport, GcdBoundError> {
    build_report(map, decomp, epsilon, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::star_subdivision;
    use crate::fan::{make_fan, Cone, LatticeVector};
    use crate::rational::{int, rat};

    fn p1xp1_point() -> (Arc<Fan>, BlowupMap) {
        let base = Arc::new(standard_fan(StandardSurface::P1xP1));
        let map = star_subdivision(&base, &[1, 2]).unwrap();
        (base, map)
    }

    #[test]
    fn product_surface_constants() {
        let (base, map) = p1xp1_point();
        let decomp = AnticanonicalDecomposition::primes(base);
        let gd = gamma_delta(&map, &decomp).unwrap();
        assert_eq!(gd.betas, vec![rat(19, 21); 4]);
        assert_eq!(gd.gamma, rat(21, 19));
        assert_eq!(gd.delta, rat(2, 19));

        let report = bound_report_assuming(&map, &decomp, &rat(1, 100)).unwrap();
        let slack = rat(2, 19) + rat(1, 100);
        assert_eq!(report.coeff_height, &slack / (int(1) + &slack));
        assert!(report.beta_lower_bound.unwrap().all_hold);
        let (h0, _) = bound_coefficients(&gd.delta, &int(0), 2).unwrap();
        assert_eq!(h0, rat(2, 21));
    }

    #[test]
    fn hypotheses_on_product_surface() {
        let (base, map) = p1xp1_point();
        let decomp = AnticanonicalDecomposition::primes(base);
        let h = check_hypotheses(&map, &decomp).unwrap();
        assert!(h.anticanonical_big);
        assert_eq!(h.anticanonical_volume, int(8));
        assert_eq!(h.pairs.len(), 6);
        // π*D₂ = D₂′ + E and π*D₃ = D₃′ + E share E
        let p = h.pairs.iter().find(|p| p.i == 1 && p.j == 2).unwrap();
        assert_eq!(p.status, IntersectionStatus::AssumedGeneralMembers);
        assert_eq!(p.shared_support, vec![0]);
        let p = h.pairs.iter().find(|p| p.i == 0 && p.j == 3).unwrap();
        assert_eq!(p.status, IntersectionStatus::Proper);
        assert!(h.holds());
    }

    #[test]
    fn plane_with_non_prime_member() {
        let base = Arc::new(standard_fan(StandardSurface::P2));
        let map = star_subdivision(&base, &[0, 2]).unwrap();
        let members = vec![
            ToricDivisor::prime(base.clone(), 0).scaled(&int(2)),
            ToricDivisor::prime(base.clone(), 1),
        ];
        let decomp = AnticanonicalDecomposition::new(base.clone(), members).unwrap();
        let h = check_hypotheses(&map, &decomp).unwrap();
        assert!(h.anticanonical_big);
        assert_eq!(h.family_status, IntersectionStatus::AssumedGeneralMembers);

        let too_big = vec![
            ToricDivisor::prime(base.clone(), 0).scaled(&int(2)),
            ToricDivisor::prime(base.clone(), 1),
            ToricDivisor::prime(base.clone(), 2),
        ];
        assert_eq!(
            AnticanonicalDecomposition::new(base.clone(), too_big).unwrap_err(),
            GcdBoundError::DecompositionMismatch
        );
        let negative = vec![ToricDivisor::from_ints(base, &[4, 0, -1]).unwrap()];
        assert_eq!(
            AnticanonicalDecomposition::new(negative[0].fan().clone(), negative).unwrap_err(),
            GcdBoundError::NotEffective { index: 0 }
        );
    }

    #[test]
    fn delta_clamps_at_zero() {
        // β(−K_{S′}, E) on the P² point blow-up exceeds 1
        let base = Arc::new(standard_fan(StandardSurface::P2));
        let map = star_subdivision(&base, &[0, 2]).unwrap();
        let l = anticanonical_divisor(map.source_fan());
        let b = volume_beta::beta(&l, &map.exceptional_divisor()).unwrap().beta;
        assert!(b > int(1));
        let gd = gamma_delta(&map, &AnticanonicalDecomposition::primes(base)).unwrap();
        assert!(gd.gamma <= int(1) + &gd.delta);
        assert_eq!(gd.delta.is_zero(), gd.betas.iter().all(|b| *b >= int(1)));
    }

    #[test]
    fn codimension_halves_coefficients() {
        let (h2, w2) = bound_coefficients(&rat(1, 3), &rat(1, 10), 2).unwrap();
        let (h3, w3) = bound_coefficients(&rat(1, 3), &rat(1, 10), 3).unwrap();
        assert_eq!(h3 * int(2), h2);
        assert_eq!(w3 * int(2), w2);
        assert!(matches!(bound_coefficients(&int(0), &int(1), 1), Err(GcdBoundError::CodimensionOne { r: 1 })));

        let rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]];
        let fan = make_fan(
            3,
            rays.iter().map(|r| LatticeVector(r.to_vec())).collect(),
            [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]].iter().map(|c| Cone::new(c.to_vec())).collect(),
        )
        .unwrap();
        let fan = Arc::new(fan);
        let map = star_subdivision(&fan, &[0, 1, 2]).unwrap();
        let report = bound_report_assuming(&map, &AnticanonicalDecomposition::primes(fan), &rat(1, 100)).unwrap();
        assert_eq!(report.r, 3);
        assert_eq!(report.coeff_weil, (int(1) + &report.delta + rat(1, 100)).recip() / int(2));
        assert!(report.beta_lower_bound.is_none());
    }

    #[test]
    fn rejects_bad_epsilon_and_target() {
        let (base, map) = p1xp1_point();
        let decomp = AnticanonicalDecomposition::primes(base);
        assert!(matches!(bound_report(&map, &decomp, &int(0)), Err(GcdBoundError::NonPositiveEpsilon(_))));
        let other = AnticanonicalDecomposition::primes(Arc::new(standard_fan(StandardSurface::P2)));
        assert_eq!(gamma_delta(&map, &other).unwrap_err(), GcdBoundError::TargetMismatch);
    }
}
