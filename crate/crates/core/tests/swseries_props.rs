use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scst_core::algebra::{int, MultiPoly, Rational};
use scst_core::lattice::{CohClass, IntersectionLattice};
use scst_core::manifold::{builtin, make_elliptic_surface, BasicClassTable, FourManifold, BUILTIN_NAMES};
use scst_core::swseries::{blowup_series_identity, scst_blowup_transfer, scst_check, sw_polynomial};

fn odd(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    2 * rng.gen_range(-(bound + 1) / 2..=(bound - 1) / 2) + 1
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt() as i64;
    (r - 1..=r + 1).find(|x| *x >= 0 && x * x == n)
}

/// A characteristic K on diag(p, q) with K² = c₁² = 5p − q + 4.
fn random_class(rng: &mut ChaCha8Rng, p: usize, q: usize) -> Vec<i64> {
    let target = 5 * p as i64 - q as i64 + 4;
    loop {
        let mut k: Vec<i64> = (0..p + q - 1).map(|_| odd(rng, 5)).collect();
        let pos: i64 = k[..p].iter().map(|x| x * x).sum();
        let neg: i64 = k[p..].iter().map(|x| x * x).sum();
        if let Some(t) = isqrt(pos - neg - target) {
            if t % 2 == 1 {
                k.push(if rng.gen_bool(0.5) { t } else { -t });
                k[..p].shuffle(rng);
                k[p..].shuffle(rng);
                return k;
            }
        }
    }
}

/// Symmetric simple type table on diag(p, q) with p ∈ {3, 5}.
fn random_manifold(rng: &mut ChaCha8Rng) -> FourManifold {
    let p = *[3usize, 5].choose(rng).unwrap();
    let q = rng.gen_range(1..=(7 - p).max(2));
    let lattice = IntersectionLattice::named(&format!("diag({p},{q})")).unwrap();
    let chi_h = (p as i64 + 1) / 2;
    let mut table = BasicClassTable::new();
    let classes = rng.gen_range(1..=3);
    for _ in 0..classes {
        let k = CohClass::from_ints(&random_class(rng, p, q));
        if table.get(&k).is_some() || table.get(&k.neg()).is_some() {
            continue;
        }
        let v = loop {
            let v = rng.gen_range(-4i64..=4);
            if v != 0 {
                break v;
            }
        };
        let neg = if chi_h % 2 == 0 { v } else { -v };
        table.insert(k.neg(), BigInt::from(neg));
        table.insert(k, BigInt::from(v));
    }
    let w: Vec<i64> = (0..p + q).map(|_| odd(rng, 3)).collect();
    let e = (p + q + 2) as i64;
    let sigma = p as i64 - q as i64;
    FourManifold::new("random", e, sigma, lattice, table, Some(CohClass::from_ints(&w))).unwrap()
}

#[test]
fn random_tables_are_valid_simple_type() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let m = random_manifold(&mut rng);
        assert!(m.is_simple_type());
        assert!(m.sw_symmetry_check());
    }
}

#[test]
fn parity_vanishing_on_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in 0..100 {
        let m = random_manifold(&mut rng);
        let c = m.char_numbers().unwrap().c;
        let w = m.default_w();
        for i in 0..=5u32 {
            let sw = sw_polynomial(&m, &w, i).unwrap();
            if (c + i as i64) % 2 != 0 {
                assert!(sw.is_zero(), "table {t}, c = {c}, i = {i}");
            }
        }
    }
}

#[test]
fn parity_vanishing_on_fixtures() {
    for name in BUILTIN_NAMES {
        let m = builtin(name).unwrap();
        let c = m.char_numbers().unwrap().c;
        let w = m.default_w();
        for i in 0..=(c.max(0) as u32 + 3) {
            if (c + i as i64) % 2 != 0 {
                assert!(sw_polynomial(&m, &w, i).unwrap().is_zero(), "{name}, i = {i}");
            }
        }
    }
}

/// Replacing w by w + 2x multiplies the term of K by (−1)^{x·K}; when x·K has
/// constant parity on B, SW^{w,i} changes by a global sign.
#[test]
fn w_dependence_is_a_global_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut compared = 0;
    for _ in 0..100 {
        let m = random_manifold(&mut rng);
        let l = m.lattice();
        let w = m.default_w();
        let j = rng.gen_range(0..l.rank());
        let x = CohClass::basis(l.rank(), j);
        let w2 = w.add(&x.scale(&int(2)));
        let parities: Vec<bool> = m
            .basic_classes()
            .iter()
            .map(|(k, _)| l.pair(&x, k).unwrap().to_integer() % 2 == BigInt::zero())
            .collect();
        if parities.windows(2).any(|p| p[0] != p[1]) {
            continue;
        }
        let c = m.char_numbers().unwrap().c;
        let i = (c.rem_euclid(2)) as u32 + 2;
        let a = sw_polynomial(&m, &w, i).unwrap().poly;
        let b = sw_polynomial(&m, &w2, i).unwrap().poly;
        if a.is_zero() {
            assert!(b.is_zero());
            continue;
        }
        let r = b.ratio_to(&a).unwrap();
        assert!(r == int(1) || r == int(-1));
        compared += 1;
    }
    assert!(compared > 20);
}

fn elliptic_oracle(m: &FourManifold, n: i64, f: &CohClass, w: &CohClass, i: u32) -> MultiPoly {
    let l = m.lattice();
    let wsq = l.square(w).unwrap().to_integer();
    let wf = l.pair(w, f).unwrap().to_integer();
    let mut scalar = BigInt::zero();
    for j in 0..=(n - 2) {
        let t = 2 * j - (n - 2);
        let mut binom = BigInt::from(1);
        for r in 0..j {
            binom = binom * (n - 2 - r) / (r + 1);
        }
        let exponent: BigInt = (&wsq + &wf * t) / 2;
        let mut term = binom * num_traits::pow(BigInt::from(t), i as usize);
        if (exponent + j) % 2 != BigInt::zero() {
            term = -term;
        }
        scalar += term;
    }
    m.pairing_form(f).pow(i).scale(&Rational::from_integer(scalar))
}

#[test]
fn elliptic_series_match_direct_summation() {
    for n in 2..=8i64 {
        let m = make_elliptic_surface(n);
        let rank = m.lattice().rank();
        let f = if n % 2 == 0 {
            CohClass::basis(rank, 8 * n as usize)
        } else {
            CohClass::basis(rank, 0).add(&CohClass::basis(rank, 1))
        };
        let w = m.default_w();
        for i in 0..=(n as u32 + 1) {
            let got = sw_polynomial(&m, &w, i).unwrap().poly;
            assert_eq!(got, elliptic_oracle(&m, n, &f, &w, i), "E({n}), i = {i}");
        }
        if n >= 4 {
            for i in 0..=(n - 4) as u32 {
                assert!(sw_polynomial(&m, &w, i).unwrap().is_zero());
            }
            assert!(!sw_polynomial(&m, &w, (n - 2) as u32).unwrap().is_zero());
        }
        assert_eq!(m.char_numbers().unwrap().c, n);
    }
}

#[test]
fn blowup_identity_on_fixtures_and_random_tables() {
    for name in BUILTIN_NAMES {
        let m = builtin(name).unwrap();
        let w = m.default_w();
        for i in 0..=6 {
            let id = blowup_series_identity(&m, &w, i).unwrap();
            assert!(id.holds, "{name}, i = {i}: {}", id.difference());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10 {
        let m = random_manifold(&mut rng);
        let w = m.default_w();
        for i in 0..=4 {
            assert!(blowup_series_identity(&m, &w, i).unwrap().holds);
        }
    }
}

#[test]
fn scst_verdicts_survive_blow_up() {
    for name in BUILTIN_NAMES {
        let m = builtin(name).unwrap();
        let report = scst_blowup_transfer(&m, &m.default_w()).unwrap();
        assert!(report.agrees, "{name}");
        assert!(report.direct.holds, "{name}");
    }
    let bad = scst_core::manifold::synthetic_non_scst();
    let report = scst_blowup_transfer(&bad, &bad.default_w()).unwrap();
    assert!(report.agrees);
    assert!(!report.direct.holds);
    assert!(!scst_check(&bad, &bad.default_w()).unwrap().holds);
}
