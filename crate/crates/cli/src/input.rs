//! Loading fans and divisors from the command line.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context as _, Result};
use serde::Deserialize;
use toric_gcd::blowup::{star_subdivision, BlowupMap};
use toric_gcd::divisor::{anticanonical_divisor, DivisorJson};
use toric_gcd::fan::{standard_fan, Fan, FanJson, StandardSurface};
use toric_gcd::rational::{parse_rational, Rational};
use toric_gcd::ToricDivisor;

/// A validation failure in user input that is not a library error.
#[derive(Debug)]
pub struct InputError {
    pub code: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        InputError { code, message: message.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for InputError {}

fn standard_by_name(name: &str) -> Option<Fan> {
    let lower = name.to_ascii_lowercase();
    let surface = match lower.as_str() {
        "p2" => StandardSurface::P2,
        "p1xp1" => StandardSurface::P1xP1,
        _ => {
            let r = lower.strip_prefix("hirzebruch:").or_else(|| lower.strip_prefix('f'))?;
            let r: u32 = r.parse().ok()?;
            if r < 2 {
                return None;
            }
            StandardSurface::Hirzebruch(r)
        }
    };
    Some(standard_fan(surface))
}

/// A fan from a JSON file, or one of `p2`, `p1xp1`, `f<r>`, `hirzebruch:<r>`.
pub fn load_fan(arg: &str) -> Result<Arc<Fan>> {
    if !Path::new(arg).exists() {
        if let Some(fan) = standard_by_name(arg) {
            return Ok(Arc::new(fan));
        }
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading fan {arg}"))?;
    let json: FanJson = serde_json::from_str(&text)?;
    Ok(Arc::new(Fan::try_from(json)?))
}

pub fn parse_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| InputError::new("InvalidIndexList", format!("bad index {t:?} in {s:?}")).into())
        })
        .collect()
}

pub fn parse_rational_arg(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|m| InputError::new("InvalidRational", m).into())
}

/// The fan divisors are read on, and the blow-up when one was requested.
pub struct Setting {
    pub base: Arc<Fan>,
    pub map: Option<BlowupMap>,
}

impl Setting {
    pub fn new(fan: &str, center: Option<&str>) -> Result<Self> {
        let base = load_fan(fan)?;
        let map = match center {
            Some(c) => Some(star_subdivision(&base, &parse_indices(c)?)?),
            None => None,
        };
        Ok(Setting { base, map })
    }

    pub fn working_fan(&self) -> &Arc<Fan> {
        match &self.map {
            Some(m) => m.source_fan(),
            None => &self.base,
        }
    }

    fn require_map(&self, term: &str) -> Result<&BlowupMap> {
        self.map
            .as_ref()
            .ok_or_else(|| InputError::new("BlowupRequired", format!("{term:?} needs --blowup-center")).into())
    }

    fn ray_index(&self, fan: &Fan, s: &str) -> Result<usize> {
        let i: usize = s
            .parse()
            .map_err(|_| InputError::new("InvalidDivisorSpec", format!("bad ray index {s:?}")))?;
        if i >= fan.num_rays() {
            return Err(InputError::new("InvalidDivisorSpec", format!("ray {i} out of range")).into());
        }
        Ok(i)
    }

    fn term(&self, term: &str) -> Result<ToricDivisor> {
        let fan = self.working_fan();
        if let Some(i) = term.strip_prefix("prime:") {
            return Ok(ToricDivisor::prime(fan.clone(), self.ray_index(fan, i)?));
        }
        if let Some(i) = term.strip_prefix("pullback:") {
            let map = self.require_map(term)?;
            let i = self.ray_index(map.target_fan(), i)?;
            return Ok(map.pullback(&ToricDivisor::prime(map.target_fan().clone(), i))?);
        }
        match term {
            "anticanonical" => Ok(anticanonical_divisor(fan)),
            "anticanonical-pullback" => {
                let map = self.require_map(term)?;
                Ok(map.pullback(&anticanonical_divisor(map.target_fan()))?)
            }
            "exceptional" => Ok(self.require_map(term)?.exceptional_divisor()),
            path if Path::new(path).exists() => {
                let text = std::fs::read_to_string(path)?;
                let json: DivisorJson = serde_json::from_str(&text)?;
                Ok(ToricDivisor::from_json(fan.clone(), json)?)
            }
            other => Err(InputError::new("InvalidDivisorSpec", format!("unknown divisor {other:?}")).into()),
        }
    }

    /// `anticanonical`, `anticanonical-pullback`, `exceptional`, `prime:i`,
    /// `pullback:i`, a divisor JSON file, or a sum such as
    /// `2*pullback:2+3*pullback:3`.
    pub fn divisor(&self, spec: &str) -> Result<ToricDivisor> {
        let mut total = ToricDivisor::zero(self.working_fan().clone());
        for part in spec.split('+') {
            let part = part.trim();
            let (coeff, term) = match part.split_once('*') {
                Some((c, t)) => (parse_rational_arg(c)?, t.trim()),
                None => (Rational::from_integer(1.into()), part),
            };
            total = total.add_scaled(&self.term(term)?, &coeff)?;
        }
        Ok(total)
    }
}

#[derive(Deserialize)]
struct DecompositionFile {
    divisors: Vec<DivisorJson>,
}

/// Members of an anticanonical decomposition on the base fan, from a file
/// `{"divisors": [{"coeffs": [...]}, ...]}`.
pub fn load_decomposition(base: &Arc<Fan>, path: &str) -> Result<Vec<ToricDivisor>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading decomposition {path}"))?;
    let file: DecompositionFile = serde_json::from_str(&text)?;
    file.divisors
        .into_iter()
        .map(|d| Ok(ToricDivisor::from_json(base.clone(), d)?))
        .collect()
}
