//! Exact Fourier–Motzkin elimination for systems `a · x >= b`.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Inequality {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Inequality { coeffs, rhs }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(Signed::abs) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.rhs /= lead;
        }
        self
    }
}

/// Outcome of eliminating variables.
#[derive(Debug)]
pub enum Projection {
    /// A contradiction `0 >= b > 0` was derived.
    Infeasible,
    /// Remaining inequalities; eliminated coordinates are zero in each.
    System(Vec<Inequality>),
}

fn dedupe(system: Vec<Inequality>) -> Vec<Inequality> {
    // Same normal: keep the tightest right-hand side.
    let mut best: HashMap<Vec<Rational>, Rational> = HashMap::new();
    let mut order = Vec::new();
    for ineq in system {
        let ineq = ineq.normalized();
        match best.get_mut(&ineq.coeffs) {
            Some(rhs) => {
                if ineq.rhs > *rhs {
                    *rhs = ineq.rhs;
                }
            }
            None => {
                order.push(ineq.coeffs.clone());
                best.insert(ineq.coeffs, ineq.rhs);
            }
        }
    }
    order
        .into_iter()
        .map(|coeffs| {
            let rhs = best.remove(&coeffs).unwrap();
            Inequality { coeffs, rhs }
        })
        .collect()
}

/// Eliminates one variable.
pub fn eliminate(system: Vec<Inequality>, var: usize) -> Projection {
    let mut keep = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for ineq in system {
        let c = &ineq.coeffs[var];
        if c.is_zero() {
            keep.push(ineq);
        } else if c.is_positive() {
            lower.push(ineq);
        } else {
            upper.push(ineq);
        }
    }
    for lo in &lower {
        for up in &upper {
            let wl = -up.coeffs[var].clone();
            let wu = lo.coeffs[var].clone();
            let coeffs = lo
                .coeffs
                .iter()
                .zip(&up.coeffs)
                .map(|(a, b)| a * &wl + b * &wu)
                .collect();
            let rhs = &lo.rhs * &wl + &up.rhs * &wu;
            keep.push(Inequality { coeffs, rhs });
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for ineq in keep {
        if ineq.is_trivial() {
            if ineq.rhs.is_positive() {
                return Projection::Infeasible;
            }
        } else {
            out.push(ineq);
        }
    }
    Projection::System(dedupe(out))
}

/// Eliminates every listed variable in turn.
pub fn project_out(system: Vec<Inequality>, vars: &[usize]) -> Projection {
    let mut current = Vec::with_capacity(system.len());
    for ineq in system {
        if ineq.is_trivial() {
            if ineq.rhs.is_positive() {
                return Projection::Infeasible;
            }
        } else {
            current.push(ineq);
        }
    }
    let mut current = dedupe(current);
    for &v in vars {
        match eliminate(current, v) {
            Projection::Infeasible => return Projection::Infeasible,
            Projection::System(s) => current = s,
        }
    }
    Projection::System(current)
}

pub fn is_feasible(system: Vec<Inequality>, nvars: usize) -> bool {
    let vars: Vec<usize> = (0..nvars).collect();
    match project_out(system, &vars) {
        Projection::Infeasible => false,
        // Every remaining row is `0 >= b` with `b <= 0`; trivial rows were dropped.
        Projection::System(rest) => rest.is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ineq(c: &[i64], b: i64) -> Inequality {
        Inequality::new(c.iter().map(|&x| int(x)).collect(), int(b))
    }

    #[test]
    fn box_is_feasible() {
        let sys = vec![
            ineq(&[1, 0], 0),
            ineq(&[0, 1], 0),
            ineq(&[-1, 0], -1),
            ineq(&[0, -1], -1),
        ];
        assert!(is_feasible(sys, 2));
    }

    #[test]
    fn contradiction_is_detected() {
        assert!(!is_feasible(vec![ineq(&[1, 0], 1), ineq(&[-1, 0], 0)], 2));
        assert!(!is_feasible(vec![ineq(&[1, 1], 3), ineq(&[-1, 0], -1), ineq(&[0, -1], -1)], 2));
        assert!(is_feasible(vec![ineq(&[1, 1], 2), ineq(&[-1, 0], -1), ineq(&[0, -1], -1)], 2));
        assert!(is_feasible(Vec::new(), 3));
    }

    #[test]
    fn projection_keeps_bounds_on_remaining_variable() {
        // x + y >= t - 1, x <= 1, y <= 1  =>  t <= 3
        let sys = vec![ineq(&[1, 1, -1], -1), ineq(&[-1, 0, 0], -1), ineq(&[0, -1, 0], -1)];
        let Projection::System(rest) = project_out(sys, &[0, 1]) else {
            panic!("feasible")
        };
        assert_eq!(rest, vec![ineq(&[0, 0, -1], -3)]);
    }
}
