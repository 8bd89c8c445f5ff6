//! Witten's formula for the Donaldson series of a simple type manifold:
//!
//! ```text
//! D^w(h^{δ−2m} x^m) = 2^{2−c} Σ_{i+2k=δ−2m} (δ−2m)!/(2^{k−m} k! i!) · SW^{w,i}(h) · Q(h)^k
//! ```

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use super::CobordismError;
use crate::algebra::combinatorics::{factorial, pow2};
use crate::algebra::{MultiPoly, Rational};
use crate::lattice::CohClass;
use crate::manifold::FourManifold;
use crate::swseries::sw_polynomial;

/// δ ≡ −w² − 3χ_h (mod 4).
pub fn witten_parity_gate(m: &FourManifold, w: &CohClass, delta: i64) -> Result<bool, CobordismError> {
    let chi_h = m.char_numbers()?.chi_h;
    let wsq = m.lattice().square(w)?.to_integer();
    let s = wsq + num_bigint::BigInt::from(delta + 3 * chi_h);
    Ok(s.mod_floor(&num_bigint::BigInt::from(4)).is_zero())
}

/// The degree δ − 2m polynomial h ↦ D^w(h^{δ−2m} x^m). Zero when the parity
/// gate fails. `w` needs w² + w·K even for every basic class.
pub fn witten_donaldson(m: &FourManifold, w: &CohClass, delta: i64, mm: i64) -> Result<MultiPoly, CobordismError> {
    if delta < 2 * mm || mm < 0 {
        return Err(CobordismError::DegreeTooSmall { delta, twice_m: 2 * mm });
    }
    let n = m.lattice().rank();
    if !witten_parity_gate(m, w, delta)? {
        return Ok(MultiPoly::zero(n));
    }
    let c = m.char_numbers()?.c;
    let d = delta - 2 * mm;
    let q = m.intersection_polynomial();
    let mut qpow: BTreeMap<i64, MultiPoly> = BTreeMap::new();
    let mut out = MultiPoly::zero(n);
    for k in 0..=d / 2 {
        let i = d - 2 * k;
        let sw = sw_polynomial(m, w, i as u32)?.poly;
        if sw.is_zero() {
            continue;
        }
        let coeff =
            Rational::new(factorial(d as u64), factorial(k as u64) * factorial(i as u64)) * pow2(mm - k) * pow2(2 - c);
        let qk = qpow.entry(k).or_insert_with(|| q.pow(k as u32));
        out += &(&sw * qk).scale(&coeff);
    }
    debug_assert!(out.is_homogeneous_of(d as u32));
    Ok(out)
}
