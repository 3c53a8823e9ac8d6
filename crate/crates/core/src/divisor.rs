//! Torus-invariant divisors `D = Σ aᵢDᵢ` on a fan, their polytopes
//! `P_D = {m : ⟨m, vᵢ⟩ >= −aᵢ}`, volumes and Okounkov bodies.

use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::Fan;
use crate::polytope::{linalg, HalfSpace, Polytope, PolytopeError};
use crate::rational::{self as q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("character has length {got}, expected {expected}")]
    CharacterLength { expected: usize, got: usize },
    #[error("divisors live on different fans")]
    FanMismatch,
    #[error("divisor {index} is not a prime torus-invariant divisor")]
    NotPrime { index: usize },
    #[error("prime divisor {ray} listed twice")]
    RepeatedPrime { ray: usize },
    #[error("flag rays {rays:?} do not span a maximal cone")]
    InvalidFlag { rays: Vec<usize> },
    #[error("flag map is not invertible")]
    NonInvertibleFlagMap,
    #[error("no integral character trivializes the divisor on the flag cone")]
    NotNormalizable,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// `Σ aᵢ Dᵢ` with one rational coefficient per ray of the fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDivisor {
    fan: Arc<Fan>,
    coeffs: Vec<Rational>,
}

/// Wire form: `{"coeffs": ["1", "0", "-1/2", "0"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorJson {
    #[serde(with = "crate::rational::serde_str::vec")]
    pub coeffs: Vec<Rational>,
}

impl ToricDivisor {
    pub fn new(fan: Arc<Fan>, coeffs: Vec<Rational>) -> Result<Self, DivisorError> {
        if coeffs.len() != fan.num_rays() {
            return Err(DivisorError::LengthMismatch {
                expected: fan.num_rays(),
                got: coeffs.len(),
            });
        }
        Ok(ToricDivisor { fan, coeffs })
    }

    pub fn from_ints(fan: Arc<Fan>, coeffs: &[i64]) -> Result<Self, DivisorError> {
        Self::new(fan, coeffs.iter().map(|&a| q::int(a)).collect())
    }

    pub fn from_json(fan: Arc<Fan>, json: DivisorJson) -> Result<Self, DivisorError> {
        Self::new(fan, json.coeffs)
    }

    pub fn to_json(&self) -> DivisorJson {
        DivisorJson { coeffs: self.coeffs.clone() }
    }

    pub fn zero(fan: Arc<Fan>) -> Self {
        let n = fan.num_rays();
        ToricDivisor { fan, coeffs: vec![Rational::zero(); n] }
    }

    /// The prime divisor `Dᵢ` of ray `i`.
    pub fn prime(fan: Arc<Fan>, ray: usize) -> Self {
        let mut d = Self::zero(fan);
        d.coeffs[ray] = Rational::one();
        d
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, ray: usize) -> &Rational {
        &self.coeffs[ray]
    }

    pub fn same_fan(&self, other: &ToricDivisor) -> bool {
        Arc::ptr_eq(&self.fan, &other.fan) || *self.fan == *other.fan
    }

    pub fn scaled(&self, k: &Rational) -> ToricDivisor {
        ToricDivisor {
            fan: self.fan.clone(),
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &ToricDivisor, k: &Rational) -> Result<ToricDivisor, DivisorError> {
        if !self.same_fan(other) {
            return Err(DivisorError::FanMismatch);
        }
        Ok(ToricDivisor {
            fan: self.fan.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b * k).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|a| !a.is_negative())
    }

    /// Rays with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    /// The ray `i` if this is exactly `Dᵢ`.
    pub fn as_prime(&self) -> Option<usize> {
        match self.support().as_slice() {
            [i] if self.coeffs[*i].is_one() => Some(*i),
            _ => None,
        }
    }

    /// `P_D`: one half-space `⟨m, vᵢ⟩ >= −aᵢ` per ray.
    pub fn polytope(&self) -> Polytope {
        let halfspaces = self
            .fan
            .rays()
            .iter()
            .zip(&self.coeffs)
            .map(|(v, a)| HalfSpace::new(v.coords().to_vec(), -a.clone()))
            .collect();
        Polytope::new(self.fan.dim(), halfspaces).expect("fan rays are nonzero")
    }

    /// `D + div(χ^m)`: `aᵢ ↦ aᵢ + ⟨m, vᵢ⟩`. The polytope moves by `−m`
    /// under this convention, i.e. `P_{D + div χ^m} = P_D − m`.
    pub fn shift_by_character(&self, m: &[i64]) -> Result<ToricDivisor, DivisorError> {
        if m.len() != self.fan.dim() {
            return Err(DivisorError::CharacterLength {
                expected: self.fan.dim(),
                got: m.len(),
            });
        }
        Ok(ToricDivisor {
            fan: self.fan.clone(),
            coeffs: self
                .fan
                .rays()
                .iter()
                .zip(&self.coeffs)
                .map(|(v, a)| a + q::int(v.dot(m)))
                .collect(),
        })
    }

    /// `Vol_X(D) = d! · Vol(P_D)`.
    pub fn volume(&self) -> Result<Rational, DivisorError> {
        Ok(self.polytope().volume()? * q::factorial(self.fan.dim()))
    }

    /// The integral character `m` with `self − other = div(χ^m)`, if any.
    pub fn linear_equivalence_character(&self, other: &ToricDivisor) -> Option<Vec<i64>> {
        if !self.same_fan(other) {
            return None;
        }
        let diff: Vec<Rational> = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        let m = solve_character(&self.fan, self.fan.max_cones()[0].rays(), &diff)?;
        let ok = self
            .fan
            .rays()
            .iter()
            .zip(&diff)
            .all(|(v, c)| q::int(v.dot(&m)) == *c);
        ok.then_some(m)
    }

    pub fn is_linearly_equivalent(&self, other: &ToricDivisor) -> bool {
        self.linear_equivalence_character(other).is_some()
    }

    /// Shifts by the integral character that makes the coefficients on the
    /// given cone vanish.
    pub fn normalized_on(&self, cone_rays: &[usize]) -> Result<ToricDivisor, DivisorError> {
        let target: Vec<Rational> = cone_rays.iter().map(|&i| -self.coeffs[i].clone()).collect();
        let m = solve_character_on(&self.fan, cone_rays, &target).ok_or(DivisorError::NotNormalizable)?;
        self.shift_by_character(&m)
    }
}

/// Integral `m` with `⟨m, vᵢ⟩ = values[i]` for every ray `i` of the given
/// maximal cone (indices relative to the full ray list).
fn solve_character(fan: &Fan, cone_rays: &[usize], values: &[Rational]) -> Option<Vec<i64>> {
    let target: Vec<Rational> = cone_rays.iter().map(|&i| values[i].clone()).collect();
    solve_character_on(fan, cone_rays, &target)
}

fn solve_character_on(fan: &Fan, cone_rays: &[usize], target: &[Rational]) -> Option<Vec<i64>> {
    let rows = linalg::from_int_rows(&fan.generator_rows(cone_rays));
    let m = linalg::solve(&rows, target)?;
    m.iter().map(q::as_i64).collect()
}

impl Add for &ToricDivisor {
    type Output = ToricDivisor;

    fn add(self, rhs: &ToricDivisor) -> ToricDivisor {
        self.add_scaled(rhs, &Rational::one()).expect("divisors on the same fan")
    }
}

impl Sub for &ToricDivisor {
    type Output = ToricDivisor;

    fn sub(self, rhs: &ToricDivisor) -> ToricDivisor {
        self.add_scaled(rhs, &-Rational::one()).expect("divisors on the same fan")
    }
}

impl Neg for &ToricDivisor {
    type Output = ToricDivisor;

    fn neg(self) -> ToricDivisor {
        self.scaled(&-Rational::one())
    }
}

/// `K_X = −Σ Dᵢ`.
pub fn canonical_divisor(fan: &Arc<Fan>) -> ToricDivisor {
    let n = fan.num_rays();
    ToricDivisor { fan: fan.clone(), coeffs: vec![-Rational::one(); n] }
}

pub fn anticanonical_divisor(fan: &Arc<Fan>) -> ToricDivisor {
    -&canonical_divisor(fan)
}

pub fn polytope_of_divisor(d: &ToricDivisor) -> Polytope {
    d.polytope()
}

pub fn shift_by_character(d: &ToricDivisor, m: &[i64]) -> Result<ToricDivisor, DivisorError> {
    d.shift_by_character(m)
}

pub fn volume_of_divisor(d: &ToricDivisor) -> Result<Rational, DivisorError> {
    d.volume()
}

/// Proper intersection for distinct prime torus-invariant divisors.
///
/// On a smooth fan the local equations of `D_i, i ∈ I` at a point of
/// `⋂ Supp D_i` are distinct coordinates of the chart of a cone, hence a
/// regular sequence; the intersection is nonempty iff the rays span a cone.
/// So the check reduces to verifying that every subset whose rays lie in a
/// common cone spans that cone with independent generators.
pub fn intersect_properly(ds: &[ToricDivisor]) -> Result<bool, DivisorError> {
    let Some(first) = ds.first() else {
        return Ok(true);
    };
    let mut rays = Vec::with_capacity(ds.len());
    for (index, d) in ds.iter().enumerate() {
        if !d.same_fan(first) {
            return Err(DivisorError::FanMismatch);
        }
        let ray = d.as_prime().ok_or(DivisorError::NotPrime { index })?;
        if rays.contains(&ray) {
            return Err(DivisorError::RepeatedPrime { ray });
        }
        rays.push(ray);
    }
    let fan = first.fan();
    for cone in fan.max_cones() {
        let meeting: Vec<usize> = rays.iter().copied().filter(|&r| cone.contains_ray(r)).collect();
        // the rays meeting at this chart's fixed point must be independent
        let rows: Vec<Vec<Rational>> = linalg::from_int_rows(&fan.generator_rows(&meeting));
        if linalg::rank(&rows) != meeting.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An admissible torus-invariant flag `Yᵢ = D_{r₁} ∩ … ∩ D_{rᵢ}` given by an
/// ordering of the rays of a maximal cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusFlag {
    fan: Arc<Fan>,
    ray_order: Vec<usize>,
}

impl TorusFlag {
    pub fn new(fan: Arc<Fan>, ray_order: Vec<usize>) -> Result<Self, DivisorError> {
        let spans = ray_order.len() == fan.dim()
            && fan.is_cone(&ray_order)
            && fan.max_cones().iter().any(|c| {
                let mut sorted = ray_order.clone();
                sorted.sort_unstable();
                c.rays() == sorted.as_slice()
            });
        if !spans {
            return Err(DivisorError::InvalidFlag { rays: ray_order });
        }
        Ok(TorusFlag { fan, ray_order })
    }

    pub fn ray_order(&self) -> &[usize] {
        &self.ray_order
    }

    /// Rows `v_{r₁}, …, v_{r_d}`: the map `m ↦ (⟨m, v_{rᵢ}⟩)ᵢ`.
    pub fn map_rows(&self) -> Vec<Vec<i64>> {
        self.fan.generator_rows(&self.ray_order)
    }
}

/// `Δ(D) = φ(P_D)` with `φ(m) = (⟨m, v_{r₁}⟩, …, ⟨m, v_{r_d}⟩)`, after
/// shifting `D` so it is trivial on the flag cone.
pub fn okounkov_body(d: &ToricDivisor, flag: &TorusFlag) -> Result<Polytope, DivisorError> {
    if !(Arc::ptr_eq(d.fan(), &flag.fan) || **d.fan() == *flag.fan) {
        return Err(DivisorError::FanMismatch);
    }
    let normalized = d.normalized_on(flag.ray_order())?;
    let phi = linalg::from_int_rows(&flag.map_rows());
    // P_D = {m : ⟨m, vⱼ⟩ >= −aⱼ}; with u = Φ m, ⟨m, vⱼ⟩ = ⟨u, Φ⁻ᵀ vⱼ⟩.
    let phi_inv_t = linalg::transpose(&linalg::inverse(&phi).ok_or(DivisorError::NonInvertibleFlagMap)?);
    let fan = d.fan();
    let mut halfspaces = Vec::with_capacity(fan.num_rays());
    for (v, a) in fan.rays().iter().zip(normalized.coeffs()) {
        let vq: Vec<Rational> = v.coords().iter().map(|&x| q::int(x)).collect();
        let normal: Vec<Rational> = phi_inv_t.iter().map(|row| linalg::dot(row, &vq)).collect();
        let normal: Vec<i64> = normal
            .iter()
            .map(q::as_i64)
            .collect::<Option<_>>()
            .ok_or(DivisorError::NonInvertibleFlagMap)?;
        halfspaces.push(HalfSpace::new(normal, -a.clone()));
    }
    Ok(Polytope::new(fan.dim(), halfspaces)?)
}
