//! Builtin example manifolds: elliptic surfaces E(n) and lattice models of the
//! abstract X_q family.

use num_bigint::BigInt;

use super::{BasicClassTable, FourManifold};
use crate::algebra::combinatorics::binomial;
use crate::lattice::{CohClass, IntersectionLattice};

pub const BUILTIN_NAMES: &[&str] = &["K3", "E3", "E4", "E5", "E6", "E7", "E8", "Xq2", "Xq3", "Xq4"];

pub fn builtin_names() -> &'static [&'static str] {
    BUILTIN_NAMES
}

pub fn builtin(name: &str) -> Option<FourManifold> {
    if name == "K3" {
        return Some(make_elliptic_surface(2));
    }
    if let Some(n) = name.strip_prefix('E').and_then(|s| s.parse::<i64>().ok()) {
        return (3..=8).contains(&n).then(|| make_elliptic_surface(n));
    }
    if let Some(q) = name.strip_prefix("Xq").and_then(|s| s.parse::<i64>().ok()) {
        return (2..=4).contains(&q).then(|| make_abstract_xq(q));
    }
    None
}

/// E(n) with e = 12n, σ = −8n and B = {(2j − (n−2))·f : 0 ≤ j ≤ n−2},
/// SW′ = (−1)^j·binom(n−2, j).
///
/// For even n the lattice is nE8 ⊕ (2n−1)H and f is the first vector of the
/// first H. For odd n it is ⟨+1⟩⊕⟨−1⟩ ⊕ nE8 ⊕ (2n−2)H with f = p1 + n1, so
/// that the odd multiples of f are characteristic.
pub fn make_elliptic_surface(n: i64) -> FourManifold {
    assert!(n >= 2, "E(n) needs n >= 2");
    let (descriptor, f) = if n % 2 == 0 {
        let d = format!("{n}E8+{}H", 2 * n - 1);
        let rank = (12 * n - 2) as usize;
        (d, CohClass::basis(rank, 8 * n as usize))
    } else {
        let d = format!("diag(1,1)+{n}E8+{}H", 2 * n - 2);
        let rank = (12 * n - 2) as usize;
        (d, CohClass::basis(rank, 0).add(&CohClass::basis(rank, 1)))
    };
    let lattice = IntersectionLattice::named(&descriptor).expect("builtin descriptor parses");
    let mut sw = BasicClassTable::new();
    for j in 0..=(n - 2) {
        let mult = crate::algebra::int(2 * j - (n - 2));
        let mut v = binomial((n - 2) as u64, j as u64);
        if j % 2 == 1 {
            v = -v;
        }
        sw.insert(f.scale(&mult), v);
    }
    let name = if n == 2 { "K3".to_string() } else { format!("E{n}") };
    FourManifold::new(name, 12 * n, -8 * n, lattice, sw, None).expect("E(n) fixture is valid")
}

/// A model with χ_h = q, c = 3 and B = {±K}, K ≠ 0, on
/// diag(a,b) ⊕ kE8 ⊕ jH. K is supported on the diagonal part with odd
/// coordinates and K² = q − 3; SW′(K) = 1, SW′(−K) = (−1)^q.
pub fn make_abstract_xq(q: i64) -> FourManifold {
    assert!(q >= 2, "X_q needs q >= 2");
    let (a, b, x, y) = xq_diagonal_part(q).expect("a diagonal realization exists for every q >= 2");
    let k = (a as i64 - b as i64 + 7 * q + 3) / 8;
    let j = 2 * q - 1 - a as i64;
    let mut descriptor = format!("diag({a},{b})");
    if k > 0 {
        descriptor.push_str(&format!("+{k}E8"));
    }
    if j > 0 {
        descriptor.push_str(&format!("+{j}H"));
    }
    let lattice = IntersectionLattice::named(&descriptor).expect("builtin descriptor parses");
    let mut coords = vec![0i64; lattice.rank()];
    coords[..a].copy_from_slice(&x);
    coords[a..a + b].copy_from_slice(&y);
    let kc = CohClass::from_ints(&coords);
    let mut sw = BasicClassTable::new();
    sw.insert(kc.neg(), BigInt::from(if q % 2 == 0 { 1 } else { -1 }));
    sw.insert(kc, BigInt::from(1));
    FourManifold::new(format!("Xq{q}"), 11 * q + 3, -7 * q - 3, lattice, sw, None).expect("X_q fixture is valid")
}

/// Smallest (a, b) with a ≤ min(3, 2q−1), σ-compatible mod 8, and odd vectors
/// x ∈ ℤ^a, y ∈ ℤ^b with Σx² − Σy² = q − 3.
fn xq_diagonal_part(q: i64) -> Option<(usize, usize, Vec<i64>, Vec<i64>)> {
    let target = q - 3;
    let bound = 2 * q + 3;
    let max_a = (2 * q - 1).min(3) as usize;
    for a in 1..=max_a {
        for b in 0..=12usize {
            if (a as i64 - b as i64 + 7 * q + 3).rem_euclid(8) != 0 || a as i64 - b as i64 + 7 * q + 3 < 0 {
                continue;
            }
            // y is all ones except possibly its last entry
            for x in odd_tuples(a, bound) {
                let sx: i64 = x.iter().map(|v| v * v).sum();
                if b == 0 {
                    if sx == target {
                        return Some((a, b, x, Vec::new()));
                    }
                    continue;
                }
                let mut t = 1;
                while t <= bound {
                    let sy = (b as i64 - 1) + t * t;
                    if sx - sy == target {
                        let mut y = vec![1; b];
                        y[b - 1] = t;
                        return Some((a, b, x, y));
                    }
                    t += 2;
                }
            }
        }
    }
    None
}

/// Non-decreasing tuples of positive odd integers ≤ bound.
fn odd_tuples(len: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, bound: i64, start: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let mut v = start;
        while v <= bound {
            cur.push(v);
            rec(len, bound, v, cur, out);
            cur.pop();
            v += 2;
        }
    }
    rec(len, bound, 1, &mut cur, &mut out);
    out
}

/// X₂ blown up twice with the table replaced by {±K₀}, K₀ = K + e₁* + e₂*,
/// SW′ = 1 on both. c = 5 and SW^{w,1} ≠ 0, so it is not of superconformal
/// simple type. Not part of the builtin registry.
pub fn synthetic_non_scst() -> FourManifold {
    let x = make_abstract_xq(2).blow_up_times(2);
    let n = x.lattice().rank();
    let base = make_abstract_xq(2);
    let k = base
        .basic_classes()
        .iter()
        .map(|(k, _)| k.clone())
        .max()
        .expect("X_2 has basic classes");
    let k0 = k
        .extend(2)
        .add(&CohClass::basis(n, n - 2))
        .add(&CohClass::basis(n, n - 1));
    let table: BasicClassTable = [(k0.neg(), BigInt::from(1)), (k0, BigInt::from(1))]
        .into_iter()
        .collect();
    x.with_basic_classes(table)
        .expect("synthetic table is valid")
        .with_name("NonSCST")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    #[test]
    fn registry_resolves_every_name() {
        for name in BUILTIN_NAMES {
            let m = builtin(name).unwrap();
            assert_eq!(m.name(), *name);
            assert!(m.is_standard().standard, "{name}");
            assert!(m.is_simple_type(), "{name}");
            assert!(m.sw_symmetry_check(), "{name}");
        }
        assert!(builtin("E9").is_none());
        assert!(builtin("NonSCST").is_none());
    }

    #[test]
    fn elliptic_tables() {
        let k3 = make_elliptic_surface(2);
        let zero = CohClass::zero(22);
        assert_eq!(k3.basic_classes().len(), 1);
        assert_eq!(k3.basic_classes().get(&zero), Some(&BigInt::from(1)));

        let e4 = make_elliptic_surface(4);
        let f = CohClass::basis(46, 32);
        assert_eq!(e4.lattice().square(&f).unwrap(), int(0));
        assert_eq!(e4.basic_classes().get(&f.scale(&int(-2))), Some(&BigInt::from(1)));
        assert_eq!(e4.basic_classes().get(&CohClass::zero(46)), Some(&BigInt::from(-2)));
        assert_eq!(e4.basic_classes().get(&f.scale(&int(2))), Some(&BigInt::from(1)));

        let e5 = make_elliptic_surface(5);
        assert_eq!(e5.lattice().rank(), 58);
        assert_eq!(e5.lattice().signature(), -40);
        assert_eq!(e5.basic_classes().len(), 4);
    }

    #[test]
    fn xq_lattices_for_larger_q() {
        for q in 2..=12 {
            let x = make_abstract_xq(q);
            assert_eq!(x.euler(), 11 * q + 3);
            assert_eq!(x.b_plus(), 2 * q - 1);
            assert_eq!(x.basic_classes().len(), 2);
            assert!(x.is_simple_type());
            assert!(x.sw_symmetry_check());
            for (k, _) in x.basic_classes().iter() {
                assert!(!k.is_zero());
            }
        }
    }

    #[test]
    fn synthetic_table_shape() {
        let s = synthetic_non_scst();
        let cn = s.char_numbers().unwrap();
        assert_eq!((cn.chi_h, cn.c), (2, 5));
        assert_eq!(s.basic_classes().len(), 2);
        assert!(s.is_simple_type());
        assert!(s.sw_symmetry_check());
        assert!(!s.basic_classes().contains_zero());
    }
}
