//! Lattice vectors, simplicial cones and complete smooth fans.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polytope::fourier_motzkin::{self, Inequality};
use crate::polytope::linalg;
use crate::rational::{self as q, gcd_all};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("fan has no rays")]
    NoRays,
    #[error("ray {index} has length {len}, expected {dim}")]
    RayDimensionMismatch { index: usize, len: usize, dim: usize },
    #[error("ray {ray:?} is not primitive")]
    NonPrimitiveRay { ray: Vec<i64> },
    #[error("ray {ray:?} appears more than once")]
    DuplicateRay { ray: Vec<i64> },
    #[error("cone {cone:?}: {reason}")]
    MalformedCone { cone: Vec<usize>, reason: String },
    #[error("cone {cone:?} is not smooth (determinant {det})")]
    NonSmoothCone { cone: Vec<usize>, det: i64 },
    #[error("incomplete fan: {reason}")]
    IncompleteFan { reason: String },
}

/// An integer vector of the lattice `N ≅ Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_primitive(&self) -> bool {
        gcd_all(&self.0) == 1
    }

    pub fn dot(&self, m: &[i64]) -> i64 {
        self.0.iter().zip(m).map(|(a, b)| a * b).sum()
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A simplicial cone, stored as sorted distinct indices into a fan's rays.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        Cone(rays)
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_ray(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|&i| other.contains_ray(i))
    }
}

impl From<Vec<usize>> for Cone {
    fn from(v: Vec<usize>) -> Self {
        Cone::new(v)
    }
}

/// Wire form: `{"dim": 2, "rays": [[1,0],…], "max_cones": [[0,1],…]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// A complete smooth fan. Ray order is the index space for divisor
/// coefficients and is preserved from the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanJson", into = "FanJson")]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
}

impl TryFrom<FanJson> for Fan {
    type Error = FanError;

    fn try_from(json: FanJson) -> Result<Self, FanError> {
        make_fan(
            json.dim,
            json.rays.into_iter().map(LatticeVector).collect(),
            json.max_cones.into_iter().map(Cone::new).collect(),
        )
    }
}

impl From<Fan> for FanJson {
    fn from(fan: Fan) -> Self {
        FanJson {
            dim: fan.dim,
            rays: fan.rays.into_iter().map(|r| r.0).collect(),
            max_cones: fan.max_cones.into_iter().map(|c| c.0).collect(),
        }
    }
}

/// Surfaces with a canonical fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardSurface {
    P2,
    P1xP1,
    /// The Hirzebruch surface `F_r`, `r >= 2`.
    Hirzebruch(u32),
}

impl Fan {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// True iff the given rays span a cone of the fan (a face of some
    /// maximal cone; all faces of simplicial cones are cones).
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        let c = Cone::new(rays.to_vec());
        c.0.windows(2).all(|w| w[0] != w[1])
            && c.0.iter().all(|&i| i < self.rays.len())
            && self.max_cones.iter().any(|m| c.is_face_of(m))
    }

    pub fn is_smooth(&self) -> bool {
        is_smooth(self.dim, &self.rays, &self.max_cones)
    }

    /// Generator matrix of the given rays, one ray per row.
    pub fn generator_rows(&self, rays: &[usize]) -> Vec<Vec<i64>> {
        rays.iter().map(|&i| self.rays[i].0.clone()).collect()
    }

    pub fn to_json(&self) -> FanJson {
        self.clone().into()
    }
}

/// Validates and builds a complete smooth fan.
pub fn make_fan(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Cone>) -> Result<Fan, FanError> {
    if dim == 0 {
        return Err(FanError::InvalidDimension);
    }
    if rays.is_empty() {
        return Err(FanError::NoRays);
    }
    let mut seen = BTreeSet::new();
    for (index, ray) in rays.iter().enumerate() {
        if ray.dim() != dim {
            return Err(FanError::RayDimensionMismatch { index, len: ray.dim(), dim });
        }
        if !ray.is_primitive() {
            return Err(FanError::NonPrimitiveRay { ray: ray.0.clone() });
        }
        if !seen.insert(ray.clone()) {
            return Err(FanError::DuplicateRay { ray: ray.0.clone() });
        }
    }
    let mut used = vec![false; rays.len()];
    for cone in &max_cones {
        let malformed = |reason: &str| FanError::MalformedCone {
            cone: cone.0.clone(),
            reason: reason.to_string(),
        };
        if cone.0.windows(2).any(|w| w[0] == w[1]) {
            return Err(malformed("repeated ray index"));
        }
        if cone.0.iter().any(|&i| i >= rays.len()) {
            return Err(malformed("ray index out of range"));
        }
        if cone.len() != dim {
            return Err(FanError::IncompleteFan {
                reason: format!("maximal cone {:?} has {} rays, expected {dim}", cone.0, cone.len()),
            });
        }
        let rows: Vec<Vec<i64>> = cone.0.iter().map(|&i| rays[i].0.clone()).collect();
        let det = linalg::int_determinant(&rows);
        if det == 0 {
            return Err(malformed("generators are linearly dependent"));
        }
        if det.abs() != 1 {
            return Err(FanError::NonSmoothCone { cone: cone.0.clone(), det });
        }
        for &i in &cone.0 {
            used[i] = true;
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(FanError::IncompleteFan {
            reason: format!("ray {i} lies in no maximal cone"),
        });
    }
    if max_cones.iter().collect::<BTreeSet<_>>().len() != max_cones.len() {
        return Err(FanError::IncompleteFan { reason: "repeated maximal cone".into() });
    }
    check_completeness(dim, &rays, &max_cones)?;
    Ok(Fan { dim, rays, max_cones })
}

/// Facet pairing plus pairwise disjointness of cone interiors.
fn check_completeness(dim: usize, rays: &[LatticeVector], cones: &[Cone]) -> Result<(), FanError> {
    let mut facets: HashMap<Vec<usize>, usize> = HashMap::new();
    for cone in cones {
        for skip in 0..cone.len() {
            let facet: Vec<usize> = cone
                .0
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, &i)| i)
                .collect();
            *facets.entry(facet).or_default() += 1;
        }
    }
    if let Some((facet, n)) = facets.iter().find(|(_, &n)| n != 2) {
        return Err(FanError::IncompleteFan {
            reason: format!("facet {facet:?} lies on {n} maximal cone(s), expected 2"),
        });
    }
    // y in the interior of σ iff σ⁻¹y > 0; homogeneity lets us ask for >= 1.
    let inverses: Vec<linalg::Matrix> = cones
        .iter()
        .map(|c| {
            let rows: Vec<Vec<i64>> = c.0.iter().map(|&i| rays[i].0.clone()).collect();
            // rows are generators; y = Σ λᵢ vᵢ = Vᵀλ, so λ = (Vᵀ)⁻¹ y
            let vt = linalg::transpose(&linalg::from_int_rows(&rows));
            linalg::inverse(&vt).expect("independent generators")
        })
        .collect();
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            let system: Vec<Inequality> = inverses[a]
                .iter()
                .chain(inverses[b].iter())
                .map(|row| Inequality::new(row.clone(), q::int(1)))
                .collect();
            if fourier_motzkin::is_feasible(system, dim) {
                return Err(FanError::IncompleteFan {
                    reason: format!("cones {:?} and {:?} overlap", cones[a].0, cones[b].0),
                });
            }
        }
    }
    Ok(())
}

/// True iff every listed maximal cone has a unimodular generator matrix.
/// Works on unvalidated data; cones of the wrong size are not smooth.
pub fn is_smooth(dim: usize, rays: &[LatticeVector], cones: &[Cone]) -> bool {
    cones.iter().all(|c| {
        c.len() == dim
            && c.0.iter().all(|&i| i < rays.len() && rays[i].dim() == dim)
            && linalg::int_determinant(&c.0.iter().map(|&i| rays[i].0.clone()).collect::<Vec<_>>())
                .abs()
                == 1
    })
}

pub fn standard_fan(name: StandardSurface) -> Fan {
    let (rays, cones): (Vec<Vec<i64>>, Vec<Vec<usize>>) = match name {
        StandardSurface::P2 => (
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        ),
        StandardSurface::P1xP1 => (
            vec![vec![-1, 0], vec![0, 1], vec![1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        ),
        StandardSurface::Hirzebruch(r) => {
            assert!(r >= 2, "Hirzebruch surfaces F_r need r >= 2");
            (
                vec![vec![1, 0], vec![0, 1], vec![-1, r as i64], vec![0, -1]],
                vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
            )
        }
    };
    make_fan(
        2,
        rays.into_iter().map(LatticeVector).collect(),
        cones.into_iter().map(Cone::new).collect(),
    )
    .expect("standard fans are complete and smooth")
}
