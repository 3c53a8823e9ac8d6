//! Small dense exact linear algebra over the rationals.
#![allow(clippy::needless_range_loop)]

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn from_int_rows(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect()
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            debug_assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = Rational::one() / &m[col][col];
        for k in col..=n {
            m[col][k] = &m[col][k] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for k in col..=n {
                    let delta = &factor * &m[col][k];
                    m[r][k] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

pub fn determinant(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[col][col];
                for k in col..n {
                    let delta = &factor * &m[col][k];
                    m[r][k] -= delta;
                }
            }
        }
    }
    det
}

/// Exact determinant of a square integer matrix.
pub fn int_determinant(rows: &[Vec<i64>]) -> i64 {
    let det = determinant(&from_int_rows(rows));
    det.to_integer()
        .try_into()
        .expect("integer determinant overflows i64")
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rational> = (0..n)
            .map(|i| if i == j { Rational::one() } else { Rational::zero() })
            .collect();
        columns.push(solve(a, &e)?);
    }
    Some(transpose(&columns))
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Rank of a list of row vectors.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Matrix = rows.to_vec();
    let Some(width) = m.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[rank][col];
                for k in col..width {
                    let delta = &factor * &m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Dimension of the affine hull of a point set (`-1` encoded as `None` for
/// the empty set).
pub fn affine_dimension(points: &[Vec<Rational>]) -> Option<usize> {
    let (base, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

pub fn dot_int(normal: &[i64], point: &[Rational]) -> Rational {
    normal
        .iter()
        .zip(point)
        .map(|(&n, x)| x * Rational::from_integer(n.into()))
        .fold(Rational::zero(), |acc, x| acc + x)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn solve_and_det() {
        let a = from_int_rows(&[vec![2, 1], vec![1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert_eq!(determinant(&a), int(5));
        assert_eq!(int_determinant(&[vec![0, 1], vec![-1, 2]]), 1);
        let singular = from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(solve(&singular, &[int(1), int(1)]).is_none());
        assert_eq!(determinant(&singular), int(0));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = from_int_rows(&[vec![1, 0, 0], vec![1, 1, 0], vec![-1, 2, 1]]);
        let inv = inverse(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e: Rational = (0..3).map(|k| &a[i][k] * &inv[k][j]).sum();
                assert_eq!(e, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn rank_and_affine_dimension() {
        let pts = vec![
            vec![int(0), int(0)],
            vec![int(1), int(1)],
            vec![int(2), int(2)],
        ];
        assert_eq!(affine_dimension(&pts), Some(1));
        assert_eq!(affine_dimension(&pts[..1]), Some(0));
        assert_eq!(affine_dimension(&[]), None);
        assert_eq!(rank(&from_int_rows(&[vec![1, 0], vec![0, 1], vec![1, 1]])), 2);
    }
}
