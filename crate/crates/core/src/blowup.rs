//! Star subdivisions (torus-invariant blow-ups along cones) and pullbacks.
//!
//! The new ray `v₀ = Σ_{i ∈ τ} vᵢ` is placed at index 0 of the source fan;
//! ray `i` of the target fan becomes ray `i + 1`. Chains of blow-ups keep
//! prepending, so the most recent exceptional ray is always ray 0.

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::divisor::{canonical_divisor, ToricDivisor};
use crate::fan::{make_fan, Cone, Fan, FanError, LatticeVector};
use crate::rational::{self as q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("rays {rays:?} do not span a cone of the fan")]
    NotACone { rays: Vec<usize> },
    #[error("center has a single ray; the blow-up would be the identity")]
    CodimensionOne,
    #[error("divisor does not live on the blow-up's target fan")]
    FanMismatch,
    #[error("map {index} does not start where the previous one ends")]
    ChainMismatch { index: usize },
    #[error("subdivided fan failed validation: {0}")]
    InvalidSubdivision(#[from] FanError),
}

/// `π : X(Σ′) → X(Σ)` for a star subdivision of `Σ` at `center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupMap {
    source: Arc<Fan>,
    target: Arc<Fan>,
    center: Cone,
    new_ray: usize,
    ray_correspondence: Vec<usize>,
}

impl BlowupMap {
    /// `Σ′`.
    pub fn source_fan(&self) -> &Arc<Fan> {
        &self.source
    }

    /// `Σ`.
    pub fn target_fan(&self) -> &Arc<Fan> {
        &self.target
    }

    pub fn center(&self) -> &Cone {
        &self.center
    }

    pub fn new_ray_index(&self) -> usize {
        self.new_ray
    }

    /// Target ray `i` is source ray `ray_correspondence()[i]`.
    pub fn ray_correspondence(&self) -> &[usize] {
        &self.ray_correspondence
    }

    /// Codimension `r` of the center.
    pub fn codim(&self) -> usize {
        self.center.len()
    }

    pub fn exceptional_divisor(&self) -> ToricDivisor {
        ToricDivisor::prime(self.source.clone(), self.new_ray)
    }

    /// `π*D`: old coefficients carried over, the new ray gets the sum of the
    /// center's coefficients (the support function of `D` evaluated at `v₀`,
    /// negated).
    pub fn pullback(&self, d: &ToricDivisor) -> Result<ToricDivisor, BlowupError> {
        if !(Arc::ptr_eq(d.fan(), &self.target) || **d.fan() == *self.target) {
            return Err(BlowupError::FanMismatch);
        }
        let mut coeffs = vec![Rational::zero(); self.source.num_rays()];
        for (i, a) in d.coeffs().iter().enumerate() {
            coeffs[self.ray_correspondence[i]] = a.clone();
        }
        coeffs[self.new_ray] = self
            .center
            .rays()
            .iter()
            .fold(Rational::zero(), |acc, &i| acc + d.coeff(i));
        Ok(ToricDivisor::new(self.source.clone(), coeffs).expect("length matches source fan"))
    }

    /// Checks `K_{X′} = π*K_X + (r − 1)E` coefficientwise.
    pub fn canonical_relation_check(&self) -> bool {
        let lhs = canonical_divisor(&self.source);
        let pulled = self
            .pullback(&canonical_divisor(&self.target))
            .expect("canonical divisor lives on the target");
        let r_minus_one = q::int(self.codim() as i64 - 1);
        let rhs = pulled
            .add_scaled(&self.exceptional_divisor(), &r_minus_one)
            .expect("same fan");
        lhs == rhs
    }
}

/// Star subdivision of `fan` at the cone spanned by `center`.
pub fn star_subdivision(fan: &Arc<Fan>, center: &[usize]) -> Result<BlowupMap, BlowupError> {
    let center_cone = Cone::new(center.to_vec());
    if !fan.is_cone(center) || center_cone.is_empty() {
        return Err(BlowupError::NotACone { rays: center.to_vec() });
    }
    if center_cone.len() < 2 {
        return Err(BlowupError::CodimensionOne);
    }
    let dim = fan.dim();
    let mut new_ray = vec![0i64; dim];
    for &i in center_cone.rays() {
        for (k, x) in fan.ray(i).coords().iter().enumerate() {
            new_ray[k] += x;
        }
    }
    let shift = |i: usize| i + 1;
    let mut rays = Vec::with_capacity(fan.num_rays() + 1);
    rays.push(LatticeVector::new(new_ray));
    rays.extend(fan.rays().iter().cloned());

    let mut cones = Vec::new();
    for cone in fan.max_cones() {
        if center_cone.is_face_of(cone) {
            for &replaced in center_cone.rays() {
                let rays: Vec<usize> = cone
                    .rays()
                    .iter()
                    .map(|&i| if i == replaced { 0 } else { shift(i) })
                    .collect();
                cones.push(Cone::new(rays));
            }
        } else {
            cones.push(Cone::new(cone.rays().iter().map(|&i| shift(i)).collect()));
        }
    }
    let source = make_fan(dim, rays, cones)?;
    Ok(BlowupMap {
        source: Arc::new(source),
        target: fan.clone(),
        center: center_cone,
        new_ray: 0,
        ray_correspondence: (0..fan.num_rays()).map(shift).collect(),
    })
}

pub fn exceptional_divisor(map: &BlowupMap) -> ToricDivisor {
    map.exceptional_divisor()
}

pub fn pullback(map: &BlowupMap, d: &ToricDivisor) -> Result<ToricDivisor, BlowupError> {
    map.pullback(d)
}

pub fn canonical_relation_check(map: &BlowupMap) -> bool {
    map.canonical_relation_check()
}

/// A finite sequence of blow-ups `X_k → … → X_1 → X_0`, listed from the
/// first (whose target is `X_0`) to the last.
#[derive(Debug, Clone, Default)]
pub struct BlowupChain {
    maps: Vec<BlowupMap>,
}

impl BlowupChain {
    pub fn maps(&self) -> &[BlowupMap] {
        &self.maps
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    /// Fan of the final model, if the chain is nonempty.
    pub fn final_fan(&self) -> Option<&Arc<Fan>> {
        self.maps.last().map(BlowupMap::source_fan)
    }

    pub fn base_fan(&self) -> Option<&Arc<Fan>> {
        self.maps.first().map(BlowupMap::target_fan)
    }

    /// Pulls a divisor on the base back to the final model. The empty chain
    /// is the identity.
    pub fn pullback(&self, d: &ToricDivisor) -> Result<ToricDivisor, BlowupError> {
        self.pullback_from(0, d)
    }

    /// Pulls a divisor living on the target of map `start` to the final model.
    pub fn pullback_from(&self, start: usize, d: &ToricDivisor) -> Result<ToricDivisor, BlowupError> {
        self.maps[start..]
            .iter()
            .try_fold(d.clone(), |acc, m| m.pullback(&acc))
    }

    /// Every exceptional divisor, pulled back to the final model, in chain
    /// order.
    pub fn exceptional_divisors(&self) -> Vec<ToricDivisor> {
        self.maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                self.pullback_from(i + 1, &m.exceptional_divisor())
                    .expect("consecutive maps share fans")
            })
            .collect()
    }
}

/// Validates that consecutive maps share fans.
pub fn compose(maps: Vec<BlowupMap>) -> Result<BlowupChain, BlowupError> {
    for index in 1..maps.len() {
        let prev = &maps[index - 1].source;
        let next = &maps[index].target;
        if !(Arc::ptr_eq(prev, next) || **prev == **next) {
            return Err(BlowupError::ChainMismatch { index });
        }
    }
    Ok(BlowupChain { maps })
}
