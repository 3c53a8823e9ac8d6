#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_gcd::blowup::star_subdivision;
use toric_gcd::fan::{make_fan, standard_fan, Cone, Fan, LatticeVector, StandardSurface};
use toric_gcd::rational::{int, Rational};
use toric_gcd::ToricDivisor;

pub fn p2() -> Arc<Fan> {
    Arc::new(standard_fan(StandardSurface::P2))
}

pub fn p1xp1() -> Arc<Fan> {
    Arc::new(standard_fan(StandardSurface::P1xP1))
}

pub fn hirzebruch(r: u32) -> Arc<Fan> {
    Arc::new(standard_fan(StandardSurface::Hirzebruch(r)))
}

pub fn p3() -> Arc<Fan> {
    let rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]];
    let cones = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    Arc::new(
        make_fan(
            3,
            rays.iter().map(|r| LatticeVector(r.to_vec())).collect(),
            cones.iter().map(|c| Cone::new(c.to_vec())).collect(),
        )
        .unwrap(),
    )
}

/// Faces with at least two rays of the maximal cones, deduplicated.
pub fn centers(fan: &Fan) -> Vec<Vec<usize>> {
    let mut out = std::collections::BTreeSet::new();
    for cone in fan.max_cones() {
        let rays = cone.rays();
        let n = rays.len();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() >= 2 {
                out.insert((0..n).filter(|i| mask & (1 << i) != 0).map(|i| rays[i]).collect::<Vec<_>>());
            }
        }
    }
    out.into_iter().collect()
}

/// A base surface or `P³` followed by up to `max_blowups` random star
/// subdivisions.
pub fn random_fan(rng: &mut ChaCha8Rng, max_blowups: usize) -> Arc<Fan> {
    let bases = [p2(), p1xp1(), hirzebruch(2), hirzebruch(3), p3()];
    let mut fan = bases.choose(rng).unwrap().clone();
    for _ in 0..rng.gen_range(0..=max_blowups) {
        let cs = centers(&fan);
        let c = cs.choose(rng).unwrap();
        fan = star_subdivision(&fan, c).unwrap().source_fan().clone();
    }
    fan
}

/// Oracle for nefness: the piecewise linear function with value `−aᵢ` at
/// `vᵢ` is convex iff each cone's local character `m_σ` lies in `P_D`.
pub fn is_nef(d: &ToricDivisor) -> bool {
    let fan = d.fan();
    fan.max_cones().iter().all(|cone| {
        let m = solve_on_cone(fan, cone.rays(), d.coeffs());
        fan.rays().iter().zip(d.coeffs()).all(|(v, a)| {
            let pairing: Rational = v.coords().iter().zip(&m).map(|(&x, y)| int(x) * y).sum();
            pairing >= -a.clone()
        })
    })
}

/// `m` with `⟨m, vᵢ⟩ = −aᵢ` for the rays of the cone, by Cramer's rule.
fn solve_on_cone(fan: &Fan, cone: &[usize], a: &[Rational]) -> Vec<Rational> {
    let rows: Vec<Vec<Rational>> = cone.iter().map(|&i| fan.ray(i).coords().iter().map(|&x| int(x)).collect()).collect();
    let rhs: Vec<Rational> = cone.iter().map(|&i| -a[i].clone()).collect();
    let det = det(&rows);
    (0..rows.len())
        .map(|col| {
            let replaced: Vec<Vec<Rational>> = rows
                .iter()
                .zip(&rhs)
                .map(|(r, b)| {
                    let mut r = r.clone();
                    r[col] = b.clone();
                    r
                })
                .collect();
            self::det(&replaced) / &det
        })
        .collect()
}

/// Laplace expansion; fine for the tiny matrices used here.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    match m.len() {
        0 => int(1),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

/// Random nef divisor with positive volume and coefficients in `0..=max`.
pub fn random_nef_big(rng: &mut ChaCha8Rng, fan: &Arc<Fan>, max: i64) -> ToricDivisor {
    loop {
        let coeffs: Vec<i64> = (0..fan.num_rays()).map(|_| rng.gen_range(0..=max)).collect();
        let d = ToricDivisor::from_ints(fan.clone(), &coeffs).unwrap();
        if is_nef(&d) && d.polytope().volume().unwrap().is_positive() {
            return d;
        }
    }
}

/// Random nonzero effective divisor with small coefficients.
pub fn random_effective(rng: &mut ChaCha8Rng, fan: &Arc<Fan>) -> ToricDivisor {
    loop {
        let coeffs: Vec<i64> = (0..fan.num_rays()).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..=2) } else { 0 }).collect();
        let d = ToricDivisor::from_ints(fan.clone(), &coeffs).unwrap();
        if !d.is_zero() {
            return d;
        }
    }
}

pub fn random_rational_in(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let den = rng.gen_range(1..=97i64);
    let k = rng.gen_range(0..=den);
    lo + (hi - lo) * Rational::new(BigInt::from(k), BigInt::from(den))
}

/// Exact least-squares fit of a degree-`deg` polynomial; coefficients
/// constant first.
#[allow(clippy::needless_range_loop)]
pub fn least_squares_fit(xs: &[Rational], ys: &[Rational], deg: usize) -> Vec<Rational> {
    let n = deg + 1;
    let mut a = vec![vec![Rational::zero(); n + 1]; n];
    for (x, y) in xs.iter().zip(ys) {
        let powers: Vec<Rational> = (0..n).scan(int(1), |p, _| {
            let cur = p.clone();
            *p = &*p * x;
            Some(cur)
        }).collect();
        for i in 0..n {
            for j in 0..n {
                a[i][j] += &powers[i] * &powers[j];
            }
            a[i][n] += &powers[i] * y;
        }
    }
    // Gaussian elimination on the augmented normal equations
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular normal equations");
        a.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..=n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    (0..n).map(|i| &a[i][n] / &a[i][i]).collect()
}
