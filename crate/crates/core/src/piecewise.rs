//! Univariate rational polynomials and piecewise polynomials on an interval.

use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::rational::{self as q, Rational};

/// Coefficients, constant term first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn antiderivative(&self) -> Polynomial {
        let mut coeffs = vec![Rational::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / q::int(k as i64 + 1));
        }
        Polynomial::new(coeffs)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q::int(k as i64))
                .collect(),
        )
    }

    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }

    pub fn scaled(&self, k: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(nodes: &[Rational], values: &[Rational]) -> Polynomial {
        assert_eq!(nodes.len(), values.len());
        let n = nodes.len();
        let mut acc = vec![Rational::zero(); n];
        for i in 0..n {
            // basis numerator Π_{j≠i} (t − t_j), built by repeated multiplication
            let mut basis = vec![Rational::one()];
            let mut denom = Rational::one();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let mut next = vec![Rational::zero(); basis.len() + 1];
                for (k, c) in basis.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * &nodes[j];
                }
                basis = next;
                denom *= &nodes[i] - &nodes[j];
            }
            let w = &values[i] / denom;
            for (k, c) in basis.iter().enumerate() {
                acc[k] += c * &w;
            }
        }
        Polynomial::new(acc)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::rational::serde_str::vec::serialize(&self.coeffs, s)
    }
}

/// A function on `[breakpoints[0], breakpoints[last]]`, polynomial on each
/// closed interval `[breakpoints[i], breakpoints[i+1]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<Rational>,
    pieces: Vec<Polynomial>,
}

impl PiecewisePolynomial {
    /// Requires `pieces.len() + 1 == breakpoints.len()` and nondecreasing
    /// breakpoints (a single zero-width piece is allowed).
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Polynomial>) -> Self {
        assert_eq!(breakpoints.len(), pieces.len() + 1, "one piece per interval");
        assert!(breakpoints.windows(2).all(|w| w[0] <= w[1]), "breakpoints must be sorted");
        PiecewisePolynomial { breakpoints, pieces }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0], self.breakpoints.last().unwrap())
    }

    /// Value at `t`; `None` outside the domain.
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let (lo, hi) = self.domain();
        if t < lo || t > hi {
            return None;
        }
        let idx = self
            .breakpoints
            .windows(2)
            .position(|w| t <= &w[1])
            .unwrap_or(self.pieces.len() - 1);
        Some(self.pieces[idx].eval(t))
    }

    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .fold(Rational::zero(), |acc, (p, w)| acc + p.integrate(&w[0], &w[1]))
    }

    /// Exact equality of adjacent pieces at every interior breakpoint.
    pub fn is_continuous(&self) -> bool {
        (1..self.pieces.len()).all(|i| {
            let t = &self.breakpoints[i];
            self.pieces[i - 1].eval(t) == self.pieces[i].eval(t)
        })
    }

    /// Joins neighbouring pieces that are the same polynomial.
    pub fn merged(&self) -> PiecewisePolynomial {
        let mut breakpoints = vec![self.breakpoints[0].clone()];
        let mut pieces: Vec<Polynomial> = Vec::new();
        for (p, w) in self.pieces.iter().zip(self.breakpoints.windows(2)) {
            if pieces.last() == Some(p) {
                *breakpoints.last_mut().unwrap() = w[1].clone();
            } else {
                pieces.push(p.clone());
                breakpoints.push(w[1].clone());
            }
        }
        PiecewisePolynomial { breakpoints, pieces }
    }

    pub fn scaled(&self, k: &Rational) -> PiecewisePolynomial {
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scaled(k)).collect(),
        }
    }
}

impl Serialize for PiecewisePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Piece<'a> {
            from: String,
            to: String,
            coeffs: &'a Polynomial,
        }
        let pieces: Vec<Piece> = self
            .pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, w)| Piece { from: w[0].to_string(), to: w[1].to_string(), coeffs: p })
            .collect();
        let mut st = s.serialize_struct("PiecewisePolynomial", 2)?;
        st.serialize_field("breakpoints", &self.breakpoints.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        st.serialize_field("pieces", &pieces)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn poly(c: &[Rational]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn evaluation_and_integration() {
        // ½(2−t)² + (2−t) = 4 − 3t + t²/2
        let p = poly(&[int(4), int(-3), rat(1, 2)]);
        assert_eq!(p.eval(&int(1)), rat(3, 2));
        assert_eq!(p.eval(&int(2)), int(0));
        assert_eq!(p.integrate(&int(1), &int(2)), rat(2, 3));
        assert_eq!(p.derivative(), poly(&[int(-3), int(1)]));
        assert_eq!(Polynomial::new(vec![int(0), int(0)]).degree(), None);
    }

    #[test]
    fn interpolation_recovers_quadratic() {
        let p = poly(&[rat(7, 2), int(-2), rat(-1, 3)]);
        let nodes = vec![rat(1, 4), rat(1, 2), rat(3, 4)];
        let values: Vec<Rational> = nodes.iter().map(|t| p.eval(t)).collect();
        assert_eq!(Polynomial::interpolate(&nodes, &values), p);
        // a line sampled at three nodes comes back as a line
        let line = poly(&[int(1), int(5)]);
        let values: Vec<Rational> = nodes.iter().map(|t| line.eval(t)).collect();
        assert_eq!(Polynomial::interpolate(&nodes, &values), line);
    }

    #[test]
    fn piecewise_integral_and_merge() {
        let f = PiecewisePolynomial::new(
            vec![int(0), int(1), int(2)],
            vec![poly(&[rat(7, 2), int(-2)]), poly(&[int(4), int(-3), rat(1, 2)])],
        );
        assert!(f.is_continuous());
        assert_eq!(f.integral(), rat(19, 6));
        assert_eq!(f.eval(&rat(1, 2)), Some(rat(5, 2)));
        assert_eq!(f.eval(&int(3)), None);

        let g = PiecewisePolynomial::new(
            vec![int(0), int(1), int(2), int(3)],
            vec![poly(&[int(1)]), poly(&[int(1)]), poly(&[int(3), int(-1)])],
        );
        let m = g.merged();
        assert_eq!(m.breakpoints(), &[int(0), int(2), int(3)]);
        assert_eq!(m.integral(), g.integral());
    }
}
