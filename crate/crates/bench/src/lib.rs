//! Fixed inputs shared by the benchmarks.

use std::sync::Arc;

use toric_gcd::blowup::{star_subdivision, BlowupMap};
use toric_gcd::divisor::anticanonical_divisor;
use toric_gcd::fan::{standard_fan, StandardSurface};
use toric_gcd::gcd_bound::AnticanonicalDecomposition;
use toric_gcd::ToricDivisor;

/// The blow-up of `P¹×P¹` at the fixed point of `cone(v₂, v₃)`.
pub fn p1xp1_point() -> (BlowupMap, AnticanonicalDecomposition) {
    let base = Arc::new(standard_fan(StandardSurface::P1xP1));
    let map = star_subdivision(&base, &[1, 2]).expect("cone(v2, v3) is a max cone");
    (map, AnticanonicalDecomposition::primes(base))
}

/// `(−K, π*D₄)` on the blow-up of `P¹×P¹`.
pub fn anticanonical_pair() -> (ToricDivisor, ToricDivisor) {
    let (map, decomp) = p1xp1_point();
    let f = map.pullback(&decomp.divisors()[3]).expect("fans match");
    (anticanonical_divisor(map.source_fan()), f)
}

/// `(−K, E)` on the blow-up of the Hirzebruch surface `F_r` at a fixed point.
pub fn hirzebruch_exceptional(r: u32) -> (ToricDivisor, ToricDivisor) {
    let base = Arc::new(standard_fan(StandardSurface::Hirzebruch(r)));
    let map = star_subdivision(&base, &[0, 1]).expect("cone(v1, v2) is a max cone");
    (anticanonical_divisor(map.source_fan()), map.exceptional_divisor())
}
