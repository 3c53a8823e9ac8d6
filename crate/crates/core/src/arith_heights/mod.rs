//! Heights over `Q`: places, normalized absolute values, the generalized gcd
//! height and local heights on the blow-up of `P¹×P¹` at `(0, 0)`.
//!
//! Absolute values are normalized so the product formula holds:
//! `|x|_p = p^{−ord_p x}` and `|x|_∞` is the usual absolute value.
//! Logarithms of rationals are kept exact as integer combinations of
//! `log p` ([`LogCombination`]); floats appear only when a value is read out.
//!
//! Local heights of the exceptional divisor use the standard choice
//! `λ_{E,v}(α, β) = min(log⁺ |α|_v⁻¹, log⁺ |β|_v⁻¹)`, which sums over all
//! places to `h_gcd(α, β)` with no constant term.

pub mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeightError {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("{0} is too large to factor")]
    TooLarge(BigInt),
    #[error("invalid place {0:?}: expected \"inf\" or a prime")]
    InvalidPlace(String),
    #[error("sweep grid is empty")]
    EmptyGrid,
}

/// A place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl Place {
    pub fn finite(p: u64) -> Result<Place, HeightError> {
        if is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(HeightError::InvalidPlace(p.to_string()))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = HeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinite),
            other => other
                .parse::<u64>()
                .map_err(|_| HeightError::InvalidPlace(s.to_string()))
                .and_then(Place::finite),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn to_u64(n: &BigInt) -> Result<u64, HeightError> {
    n.abs().to_u64().ok_or_else(|| HeightError::TooLarge(n.clone()))
}

/// `Σ c_p log p` with integer `c_p`, zero terms dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogCombination {
    terms: BTreeMap<u64, i64>,
}

impl LogCombination {
    pub fn zero() -> Self {
        LogCombination::default()
    }

    /// `log |n|` for a nonzero integer.
    pub fn log_of_integer(n: &BigInt) -> Result<Self, HeightError> {
        if n.is_zero() {
            return Err(HeightError::ZeroInput);
        }
        let mut out = LogCombination::zero();
        for (p, k) in factorize(to_u64(n)?) {
            out.add_term(p, i64::from(k));
        }
        Ok(out)
    }

    /// `log |x|` for a nonzero rational.
    pub fn log_of(x: &Rational) -> Result<Self, HeightError> {
        let mut out = LogCombination::log_of_integer(x.numer())?;
        out.sub_assign(&LogCombination::log_of_integer(x.denom())?);
        Ok(out)
    }

    pub fn add_term(&mut self, p: u64, c: i64) {
        let e = self.terms.entry(p).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn add_assign(&mut self, other: &LogCombination) {
        for (&p, &c) in &other.terms {
            self.add_term(p, c);
        }
    }

    pub fn sub_assign(&mut self, other: &LogCombination) {
        for (&p, &c) in &other.terms {
            self.add_term(p, -c);
        }
    }

    pub fn scaled(&self, k: i64) -> LogCombination {
        let mut out = LogCombination::zero();
        for (&p, &c) in &self.terms {
            out.add_term(p, c * k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(p, c_p)` pairs, primes ascending.
    pub fn terms(&self) -> Vec<(u64, i64)> {
        self.terms.iter().map(|(&p, &c)| (p, c)).collect()
    }

    /// The positive rational `Π p^{c_p}`.
    pub fn exp(&self) -> Rational {
        self.terms.iter().fold(Rational::one(), |acc, (&p, &c)| {
            let base = Rational::from_integer(BigInt::from(p));
            acc * num_traits::pow::Pow::pow(&base, c as i32)
        })
    }

    /// Exact sign, via `Π p^{c_p}` against 1.
    pub fn signum(&self) -> std::cmp::Ordering {
        self.exp().cmp(&Rational::one())
    }

    pub fn value(&self) -> f64 {
        self.terms.iter().map(|(&p, &c)| c as f64 * (p as f64).ln()).sum()
    }
}

impl Serialize for LogCombination {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LogCombination", 2)?;
        st.serialize_field("factors", &self.terms())?;
        st.serialize_field("value_float", &self.value())?;
        st.end()
    }
}

/// `ord_p(x)` for nonzero `x`.
pub fn ord_p(x: &Rational, p: u64) -> Result<i64, HeightError> {
    if x.is_zero() {
        return Err(HeightError::ZeroInput);
    }
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0i64;
        while n.is_multiple_of(&p) {
            n /= &p;
            k += 1;
        }
        k
    };
    Ok(count(x.numer()) - count(x.denom()))
}

/// `log |x|_v`.
pub fn log_abs(place: Place, x: &Rational) -> Result<LogCombination, HeightError> {
    match place {
        Place::Infinite => LogCombination::log_of(x),
        Place::Finite(p) => {
            let mut out = LogCombination::zero();
            out.add_term(p, -ord_p(x, p)?);
            Ok(out)
        }
    }
}

/// Places where some of the given nonzero rationals are not units, plus `∞`.
pub fn support_places(xs: &[&Rational]) -> Result<Vec<Place>, HeightError> {
    let mut primes = std::collections::BTreeSet::new();
    for x in xs {
        if x.is_zero() {
            return Err(HeightError::ZeroInput);
        }
        for n in [x.numer(), x.denom()] {
            primes.extend(factorize(to_u64(n)?).into_iter().map(|(p, _)| p));
        }
    }
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinite);
    Ok(out)
}

/// `Σ_v log |x|_v`, exactly; zero by the product formula.
pub fn product_formula_sum(x: &Rational) -> Result<LogCombination, HeightError> {
    let mut total = LogCombination::zero();
    for place in support_places(&[x])? {
        total.add_assign(&log_abs(place, x)?);
    }
    Ok(total)
}

/// `log gcd(α, β) = Σ_p min(ord_p α, ord_p β) log p`.
pub fn log_gcd(alpha: &BigInt, beta: &BigInt) -> Result<LogCombination, HeightError> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(HeightError::ZeroInput);
    }
    LogCombination::log_of_integer(&alpha.gcd(beta))
}

/// `λ_{E,v}(α, β) = min(max(−log|α|_v, 0), max(−log|β|_v, 0))`.
pub fn weil_e(place: Place, alpha: &Rational, beta: &Rational) -> Result<LogCombination, HeightError> {
    match place {
        Place::Finite(p) => {
            let k = ord_p(alpha, p)?.max(0).min(ord_p(beta, p)?.max(0));
            let mut out = LogCombination::zero();
            out.add_term(p, k);
            Ok(out)
        }
        Place::Infinite => {
            if alpha.is_zero() || beta.is_zero() {
                return Err(HeightError::ZeroInput);
            }
            // compare exactly: log⁺|x|⁻¹ = log max(1, 1/|x|)
            let one = Rational::one();
            let a = alpha.abs().recip().max(one.clone());
            let b = beta.abs().recip().max(one);
            LogCombination::log_of(&a.min(b))
        }
    }
}

/// `h_gcd(α, β)` split into its finite and archimedean parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdHeight {
    pub finite: LogCombination,
    pub infinite: LogCombination,
}

impl GcdHeight {
    pub fn exact(&self) -> LogCombination {
        let mut t = self.finite.clone();
        t.add_assign(&self.infinite);
        t
    }

    pub fn value(&self) -> f64 {
        self.exact().value()
    }
}

/// `Σ_v min(max(−log|α|_v, 0), max(−log|β|_v, 0))`.
pub fn h_gcd(alpha: &Rational, beta: &Rational) -> Result<GcdHeight, HeightError> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(HeightError::ZeroInput);
    }
    let finite = LogCombination::log_of_integer(&alpha.numer().gcd(beta.numer()))?;
    let infinite = weil_e(Place::Infinite, alpha, beta)?;
    Ok(GcdHeight { finite, infinite })
}

/// `h([1 : x]) = log max(|p|, |q|)` for `x = p/q` reduced, exactly.
pub fn height_p1_exact(x: &Rational) -> Result<LogCombination, HeightError> {
    if x.is_zero() {
        return Ok(LogCombination::zero());
    }
    LogCombination::log_of_integer(&x.numer().abs().max(x.denom().abs()))
}

pub fn height_p1(x: &Rational) -> f64 {
    let m = x.numer().abs().max(x.denom().abs());
    m.to_f64().map(f64::ln).unwrap_or(f64::INFINITY)
}

/// `Σ_v λ_{E,v}` over the support places; equals `h_gcd` exactly.
pub fn sum_weil_e(alpha: &Rational, beta: &Rational) -> Result<LogCombination, HeightError> {
    let mut total = LogCombination::zero();
    for place in support_places(&[alpha, beta])? {
        total.add_assign(&weil_e(place, alpha, beta)?);
    }
    Ok(total)
}

/// Choice of local heights `λ_{−π*K,v}` on the blow-up of `P¹×P¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum LocalHeightConvention {
    /// The torus-invariant boundary `D₁ + D₂ + D₃ + D₄`:
    /// `|log|α|_v| + |log|β|_v|`.
    #[default]
    TorusInvariant,
    /// Twice the divisor at infinity: `2 log⁺|α|_v + 2 log⁺|β|_v`.
    InfinityOnly,
}

impl FromStr for LocalHeightConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "torus-invariant" => Ok(LocalHeightConvention::TorusInvariant),
            "infinity-only" => Ok(LocalHeightConvention::InfinityOnly),
            _ => Err(format!("unknown convention {s:?}")),
        }
    }
}

/// `λ_{−π*K,v}(α, β)` under the given convention. Both choices sum over
/// all places to `2h(α) + 2h(β)`.
pub fn local_anticanonical(
    convention: LocalHeightConvention,
    place: Place,
    alpha: &Rational,
    beta: &Rational,
) -> Result<LogCombination, HeightError> {
    let mut out = LogCombination::zero();
    for x in [alpha, beta] {
        let l = log_abs(place, x)?;
        match convention {
            LocalHeightConvention::TorusInvariant => {
                out.add_assign(&if l.signum().is_lt() { l.scaled(-1) } else { l });
            }
            LocalHeightConvention::InfinityOnly => {
                if l.signum().is_gt() {
                    out.add_assign(&l.scaled(2));
                }
            }
        }
    }
    Ok(out)
}

/// `h_{−π*K}(α, β) = 2h(α) + 2h(β)`.
pub fn anticanonical_height(alpha: &Rational, beta: &Rational) -> Result<LogCombination, HeightError> {
    let mut out = height_p1_exact(alpha)?.scaled(2);
    out.add_assign(&height_p1_exact(beta)?.scaled(2));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn gcd_factorizations() {
        assert_eq!(log_gcd(&big(12), &big(18)).unwrap().terms(), vec![(2, 1), (3, 1)]);
        assert!(log_gcd(&big(7), &big(11)).unwrap().is_zero());
        assert_eq!(log_gcd(&big(1 << 10), &big((1 << 7) * 3)).unwrap().terms(), vec![(2, 7)]);
        assert_eq!(log_gcd(&big(0), &big(3)).unwrap_err(), HeightError::ZeroInput);
    }

    #[test]
    fn gcd_height_examples() {
        let h = h_gcd(&int(12), &int(18)).unwrap();
        assert_eq!(h.exact(), log_gcd(&big(12), &big(18)).unwrap());
        let h = h_gcd(&rat(1, 2), &rat(1, 3)).unwrap();
        assert!(h.finite.is_zero());
        assert_eq!(h.infinite.terms(), vec![(2, 1)]);
        assert!(h_gcd(&int(1), &int(987)).unwrap().exact().is_zero());
        assert_eq!(h_gcd(&int(0), &int(1)).unwrap_err(), HeightError::ZeroInput);
    }

    #[test]
    fn heights_on_the_line() {
        assert!((height_p1(&int(5)) - 5f64.ln()).abs() < 1e-12);
        assert!((height_p1(&rat(3, 7)) - 7f64.ln()).abs() < 1e-12);
        assert_eq!(height_p1(&int(1)), 0.0);
        assert_eq!(height_p1_exact(&rat(-9, 4)).unwrap(), height_p1_exact(&rat(-4, 9)).unwrap());
    }

    #[test]
    fn local_exceptional_heights() {
        assert_eq!(weil_e(Place::Finite(2), &int(12), &int(18)).unwrap().terms(), vec![(2, 1)]);
        assert!(weil_e(Place::Infinite, &int(12), &int(-18)).unwrap().is_zero());
        let (a, b) = (rat(4, 15), rat(10, 9));
        assert_eq!(sum_weil_e(&a, &b).unwrap(), h_gcd(&a, &b).unwrap().exact());
    }

    #[test]
    fn product_formula_and_places() {
        for x in [rat(-360, 77), int(1), rat(1, 1024)] {
            assert!(product_formula_sum(&x).unwrap().is_zero());
        }
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinite);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Finite(7));
        assert!("6".parse::<Place>().is_err());
        assert_eq!(LogCombination::log_of(&rat(12, 5)).unwrap().exp(), rat(12, 5));
    }

    #[test]
    fn anticanonical_local_heights_sum_to_global() {
        let (a, b) = (rat(-12, 35), rat(49, 8));
        let global = anticanonical_height(&a, &b).unwrap();
        for convention in [LocalHeightConvention::TorusInvariant, LocalHeightConvention::InfinityOnly] {
            let mut total = LogCombination::zero();
            for place in support_places(&[&a, &b]).unwrap() {
                total.add_assign(&local_anticanonical(convention, place, &a, &b).unwrap());
            }
            assert_eq!(total, global, "{convention:?}");
        }
    }
}
