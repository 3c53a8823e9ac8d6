//! Exact rational convex polytopes in H-representation.
//!
//! A [`Polytope`] is the solution set of finitely many half-spaces
//! `⟨m, normal⟩ >= offset` with integer normals and rational offsets. Vertex
//! enumeration, volume, emptiness and lattice-point enumeration are all
//! computed with exact rational arithmetic.

pub mod fourier_motzkin;
pub mod linalg;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::rational::Rational;
use crate::rational::{self as q, ceil_to_i64, floor_to_i64};
use fourier_motzkin::Inequality;

pub type Point = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    #[error("half-space {index}: {reason}")]
    InvalidHalfSpace { index: usize, reason: String },
    #[error("lattice point scan exceeds i64 range")]
    CoordinateOverflow,
}

/// `{ m : ⟨m, normal⟩ >= offset }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    #[serde(with = "crate::rational::serde_str")]
    pub offset: Rational,
}

impl HalfSpace {
    pub fn new(normal: Vec<i64>, offset: Rational) -> Self {
        HalfSpace { normal, offset }
    }

    pub fn contains(&self, m: &[Rational]) -> bool {
        linalg::dot_int(&self.normal, m) >= self.offset
    }

    pub fn is_tight(&self, m: &[Rational]) -> bool {
        linalg::dot_int(&self.normal, m) == self.offset
    }

    fn to_inequality(&self) -> Inequality {
        Inequality::new(
            self.normal.iter().map(|&x| q::int(x)).collect(),
            self.offset.clone(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: OnceLock<Result<Vec<Point>, PolytopeError>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.halfspaces == other.halfspaces
    }
}

impl Polytope {
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self, PolytopeError> {
        for (index, h) in halfspaces.iter().enumerate() {
            if h.normal.len() != dim {
                return Err(PolytopeError::InvalidHalfSpace {
                    index,
                    reason: format!("normal has length {}, expected {dim}", h.normal.len()),
                });
            }
            if h.normal.iter().all(|&x| x == 0) {
                return Err(PolytopeError::InvalidHalfSpace {
                    index,
                    reason: "zero normal".into(),
                });
            }
        }
        Ok(Polytope {
            dim,
            halfspaces,
            vertices: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn contains(&self, m: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(m))
    }

    pub fn is_empty(&self) -> bool {
        is_empty(&self.halfspaces, self.dim)
    }

    /// True iff the recession cone `{y : ⟨y, nᵢ⟩ >= 0}` is `{0}`.
    pub fn is_bounded(&self) -> bool {
        for k in 0..self.dim {
            for sign in [1i64, -1] {
                let mut system: Vec<Inequality> = self
                    .halfspaces
                    .iter()
                    .map(|h| Inequality::new(h.normal.iter().map(|&x| q::int(x)).collect(), q::int(0)))
                    .collect();
                let mut unit = vec![q::int(0); self.dim];
                unit[k] = q::int(sign);
                system.push(Inequality::new(unit, q::int(1)));
                if fourier_motzkin::is_feasible(system, self.dim) {
                    return false;
                }
            }
        }
        true
    }

    /// All extreme points in lexicographic order.
    ///
    /// Every `d`-subset of constraints with independent normals is solved and
    /// the feasible solutions kept. An empty polytope has no vertices even
    /// when its recession cone is nontrivial.
    pub fn vertices(&self) -> Result<&[Point], PolytopeError> {
        self.vertices
            .get_or_init(|| self.enumerate_vertices())
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    fn enumerate_vertices(&self) -> Result<Vec<Point>, PolytopeError> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        if !self.is_bounded() {
            return Err(PolytopeError::UnboundedPolytope);
        }
        let mut found = BTreeSet::new();
        for subset in (0..self.halfspaces.len()).combinations(self.dim) {
            let rows: Vec<Vec<i64>> = subset.iter().map(|&i| self.halfspaces[i].normal.clone()).collect();
            let rhs: Vec<Rational> = subset.iter().map(|&i| self.halfspaces[i].offset.clone()).collect();
            if let Some(m) = linalg::solve(&linalg::from_int_rows(&rows), &rhs) {
                if self.contains(&m) {
                    found.insert(m);
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    /// Euclidean volume; zero for empty or lower-dimensional polytopes.
    pub fn volume(&self) -> Result<Rational, PolytopeError> {
        let simplices = self.triangulate()?;
        let verts = self.vertices()?;
        let total = simplices
            .iter()
            .map(|s| simplex_volume(&s.iter().map(|&i| verts[i].clone()).collect::<Vec<_>>()))
            .fold(Rational::zero(), |acc, v| acc + v);
        Ok(total)
    }

    /// Pulling triangulation: cone from the lexicographically smallest vertex
    /// of each face over the facets of that face that avoid it. Returns
    /// simplices as indices into [`Polytope::vertices`]; empty when the
    /// polytope is not full-dimensional.
    pub fn triangulate(&self) -> Result<Vec<Vec<usize>>, PolytopeError> {
        let verts = self.vertices()?;
        if linalg::affine_dimension(verts) != Some(self.dim) {
            return Ok(Vec::new());
        }
        let tight: Vec<Vec<bool>> = verts
            .iter()
            .map(|v| self.halfspaces.iter().map(|h| h.is_tight(v)).collect())
            .collect();
        let all: Vec<usize> = (0..verts.len()).collect();
        Ok(pulling_simplices(&all, self.dim, verts, &tight, self.halfspaces.len()))
    }

    /// Integer points in lexicographic order, by bounding-box scan.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>, PolytopeError> {
        let mut out = Vec::new();
        self.scan_lattice(|p| out.push(p.to_vec()))?;
        Ok(out)
    }

    pub fn count_lattice_points(&self) -> Result<u64, PolytopeError> {
        let mut n = 0u64;
        self.scan_lattice(|_| n += 1)?;
        Ok(n)
    }

    fn scan_lattice(&self, mut visit: impl FnMut(&[i64])) -> Result<(), PolytopeError> {
        let verts = self.vertices()?;
        if verts.is_empty() {
            return Ok(());
        }
        let d = self.dim;
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in verts {
            for k in 0..d {
                let c = ceil_to_i64(&v[k]).ok_or(PolytopeError::CoordinateOverflow)?;
                let f = floor_to_i64(&v[k]).ok_or(PolytopeError::CoordinateOverflow)?;
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(f);
            }
        }
        if (0..d).any(|k| lo[k] > hi[k]) {
            return Ok(());
        }
        // Integer points satisfy ⟨m, n⟩ >= offset iff ⟨m, n⟩ >= ceil(offset).
        let bounds: Vec<(Vec<i128>, i128)> = self
            .halfspaces
            .iter()
            .map(|h| {
                let b = ceil_to_i64(&h.offset).ok_or(PolytopeError::CoordinateOverflow)?;
                Ok((h.normal.iter().map(|&x| x as i128).collect(), b as i128))
            })
            .collect::<Result<_, PolytopeError>>()?;
        let mut point = lo.clone();
        loop {
            let inside = bounds.iter().all(|(n, b)| {
                n.iter().zip(&point).map(|(a, &x)| a * x as i128).sum::<i128>() >= *b
            });
            if inside {
                visit(&point);
            }
            // odometer, last coordinate fastest
            let mut k = d;
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                if point[k] < hi[k] {
                    point[k] += 1;
                    point[k + 1..d].clone_from_slice(&lo[k + 1..d]);
                    break;
                }
            }
        }
    }

    /// The dilate `kP`.
    pub fn scale(&self, k: u64) -> Polytope {
        let factor = Rational::from_integer(k.into());
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace::new(h.normal.clone(), &h.offset * &factor))
            .collect();
        Polytope::new(self.dim, halfspaces).expect("scaling preserves validity")
    }

    /// The translate `P + u`.
    pub fn translate(&self, u: &[i64]) -> Polytope {
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| {
                let shift: i64 = h.normal.iter().zip(u).map(|(a, b)| a * b).sum();
                HalfSpace::new(h.normal.clone(), &h.offset + q::int(shift))
            })
            .collect();
        Polytope::new(self.dim, halfspaces).expect("translation preserves validity")
    }
}

#[allow(clippy::needless_range_loop)]
fn pulling_simplices(
    face: &[usize],
    k: usize,
    verts: &[Point],
    tight: &[Vec<bool>],
    nh: usize,
) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let mut facets = BTreeSet::new();
    for h in 0..nh {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| tight[v][h]).collect();
        if sub.len() < k || sub.len() == face.len() || sub.contains(&apex) {
            continue;
        }
        let pts: Vec<Point> = sub.iter().map(|&v| verts[v].clone()).collect();
        if linalg::affine_dimension(&pts) == Some(k - 1) {
            facets.insert(sub);
        }
    }
    let mut out = Vec::new();
    for facet in facets {
        for mut s in pulling_simplices(&facet, k - 1, verts, tight, nh) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

/// `|det(v₁ − v₀, …, v_d − v₀)| / d!`.
pub fn simplex_volume(vertices: &[Point]) -> Rational {
    let (base, rest) = vertices.split_first().expect("nonempty simplex");
    let rows: linalg::Matrix = rest
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    linalg::determinant(&rows).abs() / q::factorial(rest.len())
}

/// True iff no rational point satisfies every half-space.
pub fn is_empty(halfspaces: &[HalfSpace], dim: usize) -> bool {
    let system = halfspaces.iter().map(HalfSpace::to_inequality).collect();
    !fourier_motzkin::is_feasible(system, dim)
}

pub fn vertex_enumeration(p: &Polytope) -> Result<Vec<Point>, PolytopeError> {
    p.vertices().map(<[Point]>::to_vec)
}

pub fn volume(p: &Polytope) -> Result<Rational, PolytopeError> {
    p.volume()
}

pub fn lattice_points(p: &Polytope) -> Result<Vec<Vec<i64>>, PolytopeError> {
    p.lattice_points()
}

pub fn scale(p: &Polytope, k: u64) -> Polytope {
    p.scale(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn hs(normal: &[i64], offset: Rational) -> HalfSpace {
        HalfSpace::new(normal.to_vec(), offset)
    }

    fn unit_square() -> Polytope {
        Polytope::new(
            2,
            vec![
                hs(&[1, 0], int(0)),
                hs(&[0, 1], int(0)),
                hs(&[-1, 0], int(-1)),
                hs(&[0, -1], int(-1)),
            ],
        )
        .unwrap()
    }

    /// The anticanonical polygon of P¹×P¹ blown up at the cone of (0,1),(1,0).
    fn blown_up_anticanonical() -> Polytope {
        let normals = [[1, 1], [-1, 0], [0, 1], [1, 0], [0, -1]];
        Polytope::new(2, normals.iter().map(|n| hs(n, int(-1))).collect()).unwrap()
    }

    fn pt(coords: &[i64]) -> Point {
        coords.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn square_vertices_and_points() {
        let sq = unit_square();
        assert_eq!(
            sq.vertices().unwrap(),
            &[pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 0]), pt(&[1, 1])]
        );
        assert_eq!(sq.lattice_points().unwrap().len(), 4);
        assert_eq!(sq.volume().unwrap(), int(1));
        let big = sq.scale(3);
        assert_eq!(big.count_lattice_points().unwrap(), 16);
        assert_eq!(big.volume().unwrap(), int(9));
    }

    #[test]
    fn blown_up_polygon_matches_two_subset_oracle() {
        let p = blown_up_anticanonical();
        // Oracle: brute-force all 2-subsets via Cramer's rule, keep feasible.
        let h = p.halfspaces();
        let mut oracle = BTreeSet::new();
        for i in 0..h.len() {
            for j in i + 1..h.len() {
                let (a, b) = (&h[i].normal, &h[j].normal);
                let det = a[0] * b[1] - a[1] * b[0];
                if det == 0 {
                    continue;
                }
                let (c, d) = (&h[i].offset, &h[j].offset);
                let x = (c * int(b[1]) - d * int(a[1])) / int(det);
                let y = (d * int(a[0]) - c * int(b[0])) / int(det);
                let m = vec![x, y];
                if h.iter().all(|hh| hh.contains(&m)) {
                    oracle.insert(m);
                }
            }
        }
        let verts = p.vertices().unwrap();
        assert_eq!(verts.len(), 5);
        assert_eq!(verts, oracle.into_iter().collect::<Vec<_>>().as_slice());
        assert!(verts.contains(&pt(&[-1, 0])));
        assert!(verts.contains(&pt(&[1, -1])));
        assert_eq!(p.volume().unwrap(), rat(7, 2));
        assert_eq!(p.scale(2).volume().unwrap(), int(14));
    }

    #[test]
    fn blown_up_polygon_lattice_points_match_pick() {
        let p = blown_up_anticanonical();
        // brute-force scan of a generous box
        let mut brute = 0;
        for x in -5..=5 {
            for y in -5..=5 {
                if p.contains(&pt(&[x, y])) {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 8);
        assert_eq!(p.lattice_points().unwrap().len(), 8);
        // Pick: I = A - B/2 + 1 with B = 7 boundary points, A = 7/2 => 1 interior.
        let boundary = p
            .lattice_points()
            .unwrap()
            .into_iter()
            .filter(|m| p.halfspaces().iter().any(|h| h.is_tight(&pt(m))))
            .count();
        assert_eq!(boundary, 7);
        assert_eq!(rat(7, 2) + rat(boundary as i64, 2) + int(1), int(8));
    }

    #[test]
    fn anticanonical_triangle_of_plane_has_ten_points() {
        let p = Polytope::new(
            2,
            vec![hs(&[1, 0], int(-1)), hs(&[0, 1], int(-1)), hs(&[-1, -1], int(-1))],
        )
        .unwrap();
        let points = p.lattice_points().unwrap();
        assert_eq!(points.len(), 10);
        assert!(points.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p.volume().unwrap(), rat(9, 2));
    }

    #[test]
    fn unbounded_and_empty() {
        let half = Polytope::new(2, vec![hs(&[1, 0], int(0))]).unwrap();
        assert_eq!(half.vertices().unwrap_err(), PolytopeError::UnboundedPolytope);
        assert_eq!(half.volume().unwrap_err(), PolytopeError::UnboundedPolytope);
        assert_eq!(half.lattice_points().unwrap_err(), PolytopeError::UnboundedPolytope);

        let empty = Polytope::new(1, vec![hs(&[1], int(1)), hs(&[-1], int(0))]).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.volume().unwrap(), int(0));
        assert!(empty.lattice_points().unwrap().is_empty());
        assert!(!is_empty(&[], 2));
    }

    #[test]
    fn threshold_family_emptiness() {
        // −K_{S'} − t·D₄' : the D₄ row becomes −m₂ >= −1 + t.
        let at = |t: Rational| {
            let normals = [[1, 1], [-1, 0], [0, 1], [1, 0]];
            let mut h: Vec<HalfSpace> = normals.iter().map(|n| hs(n, int(-1))).collect();
            h.push(hs(&[0, -1], int(-1) + t));
            h
        };
        assert!(!is_empty(&at(int(2)), 2));
        assert!(is_empty(&at(rat(5, 2)), 2));
        let degenerate = Polytope::new(2, at(int(2))).unwrap();
        assert_eq!(degenerate.volume().unwrap(), int(0));
    }

    #[test]
    fn lower_dimensional_and_one_dimensional() {
        let seg = Polytope::new(1, vec![hs(&[1], rat(-1, 2)), hs(&[-1], rat(-7, 3))]).unwrap();
        assert_eq!(seg.volume().unwrap(), rat(17, 6));
        assert_eq!(seg.lattice_points().unwrap(), vec![vec![0], vec![1], vec![2]]);
        let flat = Polytope::new(
            2,
            vec![hs(&[1, 0], int(0)), hs(&[-1, 0], int(0)), hs(&[0, 1], int(0)), hs(&[0, -1], int(-2))],
        )
        .unwrap();
        assert_eq!(flat.volume().unwrap(), int(0));
        assert_eq!(flat.count_lattice_points().unwrap(), 3);
    }

    #[test]
    fn three_dimensional_volumes() {
        // standard simplex scaled by 3 and the unit cube cut by x+y+z <= 3/2
        let simplex = Polytope::new(
            3,
            vec![
                hs(&[1, 0, 0], int(0)),
                hs(&[0, 1, 0], int(0)),
                hs(&[0, 0, 1], int(0)),
                hs(&[-1, -1, -1], int(-3)),
            ],
        )
        .unwrap();
        assert_eq!(simplex.volume().unwrap(), rat(9, 2));
        assert_eq!(simplex.count_lattice_points().unwrap(), 20);
        let cut_cube = Polytope::new(
            3,
            vec![
                hs(&[1, 0, 0], int(0)),
                hs(&[0, 1, 0], int(0)),
                hs(&[0, 0, 1], int(0)),
                hs(&[-1, 0, 0], int(-1)),
                hs(&[0, -1, 0], int(-1)),
                hs(&[0, 0, -1], int(-1)),
                hs(&[-1, -1, -1], rat(-3, 2)),
            ],
        )
        .unwrap();
        assert_eq!(cut_cube.volume().unwrap(), rat(1, 2));
    }

    #[test]
    fn invalid_halfspaces() {
        assert!(matches!(
            Polytope::new(2, vec![hs(&[0, 0], int(0))]),
            Err(PolytopeError::InvalidHalfSpace { index: 0, .. })
        ));
        assert!(Polytope::new(2, vec![hs(&[1], int(0))]).is_err());
    }
}
