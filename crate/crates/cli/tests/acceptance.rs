//! Acceptance suite. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion does.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scst_core::algebra::{depolarize, polarize, sym_power, sym_product, MultiPoly, Rational, SymMultilinear};
use scst_core::cobordism::{
    admissible_mn, indices, induction_replay, leading_coefficient, leading_identity_check, level, make_ft_n,
    replay_with_preparation, witten_donaldson, witten_parity_gate, RelationParams, RelationStatus,
};
use scst_core::lattice::{CohClass, IntersectionLattice};
use scst_core::manifold::{
    builtin, load_document, make_elliptic_surface, synthetic_non_scst, BasicClassTable, CharNumbers, FourManifold,
    BUILTIN_NAMES,
};
use scst_core::swseries::{blow_up_with_w, blowup_series_identity, scst_check, sw_polynomial};

type Check = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn fact(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binom(n: i64, k: i64) -> BigInt {
    fact(n) / (fact(k) * fact(n - k))
}

fn all_fixtures() -> Vec<FourManifold> {
    BUILTIN_NAMES.iter().map(|n| builtin(n).unwrap()).collect()
}

/// (−1)^{(w² + w·K)/2}, computed from the pairings.
fn term_sign(m: &FourManifold, w: &CohClass, k: &CohClass) -> i64 {
    let l = m.lattice();
    let e = (l.square(w).unwrap() + l.pair(w, k).unwrap()).to_integer();
    let half: BigInt = e / 2;
    if (half % 2u8).is_zero() {
        1
    } else {
        -1
    }
}

// 1

fn random_homogeneous(rng: &mut ChaCha8Rng, dim: usize, deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(dim);
    for _ in 0..rng.gen_range(1..=4) {
        let mut e = vec![0u32; dim];
        for _ in 0..deg {
            e[rng.gen_range(0..dim)] += 1;
        }
        p.add_term(
            e,
            Rational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into()),
        );
    }
    p
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for pair in 0..50 {
        let dim = rng.gen_range(1..=3);
        let (d1, d2) = (rng.gen_range(0..=3u32), rng.gen_range(0..=3u32));
        let p1 = random_homogeneous(&mut rng, dim, d1);
        let p2 = random_homogeneous(&mut rng, dim, d2);
        let m1 = depolarize(&p1, d1 as usize).map_err(|e| e.to_string())?;
        let m2 = depolarize(&p2, d2 as usize).map_err(|e| e.to_string())?;
        let prod = sym_product(&m1, &m2).map_err(|e| e.to_string())?;
        ensure(polarize(&prod) == &p1 * &p2, || format!("pair {pair}: product"))?;
    }
    for dim in 1..=4 {
        let g: Vec<Vec<Rational>> = (0..dim)
            .map(|i| (0..dim).map(|j| r(((i * 3 + j * 5 + i * j) % 7) as i64 - 3)).collect())
            .collect();
        let g: Vec<Vec<Rational>> = (0..dim)
            .map(|i| (0..dim).map(|j| &g[i][j] + &g[j][i]).collect())
            .collect();
        let q = SymMultilinear::from_symmetric_matrix(&g).map_err(|e| e.to_string())?;
        let qp = MultiPoly::quadratic_form(&g);
        for ell in 0..=4 {
            let power = sym_power(&q, ell);
            ensure(polarize(&power) == qp.pow(ell as u32), || format!("Q^{ell}, dim {dim}"))?;
            let h: Vec<Rational> = (0..dim).map(|i| r(i as i64 + 1)).collect();
            let diag = power.evaluate(&vec![h.clone(); 2 * ell]).map_err(|e| e.to_string())?;
            let qh = qp.eval(&h);
            ensure(diag == num_traits::pow(qh, ell), || {
                format!("Q^{ell}(h,...,h), dim {dim}")
            })?;
        }
    }
    Ok(())
}

// 2

fn criterion_2() -> Check {
    for n in 4..=8i64 {
        let m = make_elliptic_surface(n);
        let w = m.default_w();
        let rank = m.lattice().rank();
        let f = if n % 2 == 0 {
            CohClass::basis(rank, 8 * n as usize)
        } else {
            CohClass::basis(rank, 0).add(&CohClass::basis(rank, 1))
        };
        let f_form = MultiPoly::linear_form(&m.lattice().covector(&f).unwrap());
        for i in 0..=(n as u32) {
            let mut scalar = BigInt::zero();
            for j in 0..=(n - 2) {
                let t = 2 * j - (n - 2);
                let k = f.scale(&r(t));
                let mut term = binom(n - 2, j) * num_traits::pow(BigInt::from(t), i as usize);
                if j % 2 == 1 {
                    term = -term;
                }
                scalar += term * term_sign(&m, &w, &k);
            }
            let oracle = f_form.pow(i).scale(&Rational::from_integer(scalar.clone()));
            let got = sw_polynomial(&m, &w, i).map_err(|e| e.to_string())?;
            ensure(got.poly == oracle, || {
                format!("E({n}) i = {i} disagrees with the direct sum")
            })?;
            if i as i64 <= n - 4 {
                ensure(got.is_zero(), || format!("E({n}) SW^(w,{i}) nonzero"))?;
            }
            if i as i64 == n - 2 {
                ensure(!got.is_zero() && !scalar.is_zero(), || {
                    format!("E({n}) SW^(w,{i}) zero")
                })?;
            }
        }
    }
    Ok(())
}

// 3

fn odd(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    2 * rng.gen_range(-(bound + 1) / 2..=(bound - 1) / 2) + 1
}

fn random_table(rng: &mut ChaCha8Rng) -> FourManifold {
    let p = *[3usize, 5].choose(rng).unwrap();
    let q = rng.gen_range(1..=(7 - p).max(2));
    let c1sq = 5 * p as i64 - q as i64 + 4;
    let chi_h = (p as i64 + 1) / 2;
    let mut table = BasicClassTable::new();
    for _ in 0..rng.gen_range(1..=3) {
        let k = loop {
            let mut k: Vec<i64> = (0..p + q - 1).map(|_| odd(rng, 5)).collect();
            let s: i64 = k[..p].iter().map(|x| x * x).sum::<i64>() - k[p..].iter().map(|x| x * x).sum::<i64>();
            let need = s - c1sq;
            if need > 0 {
                let t = (need as f64).sqrt().round() as i64;
                if t * t == need && t % 2 == 1 {
                    k.push(if rng.gen_bool(0.5) { t } else { -t });
                    k.shuffle(rng);
                    let sq: i64 = k[..p].iter().map(|x| x * x).sum::<i64>() - k[p..].iter().map(|x| x * x).sum::<i64>();
                    if sq == c1sq {
                        break CohClass::from_ints(&k);
                    }
                }
            }
        };
        if table.get(&k).is_some() || table.get(&k.neg()).is_some() {
            continue;
        }
        let v = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
        table.insert(k.neg(), BigInt::from(if chi_h % 2 == 0 { v } else { -v }));
        table.insert(k, BigInt::from(v));
    }
    let w: Vec<i64> = (0..p + q).map(|_| odd(rng, 3)).collect();
    let lattice = IntersectionLattice::named(&format!("diag({p},{q})")).unwrap();
    let e = (p + q + 2) as i64;
    FourManifold::new(
        "random",
        e,
        p as i64 - q as i64,
        lattice,
        table,
        Some(CohClass::from_ints(&w)),
    )
    .unwrap()
}

fn parity_on(m: &FourManifold, top: u32) -> Check {
    let c = m.char_numbers().unwrap().c;
    let w = m.default_w();
    for i in 0..=top {
        if (c + i as i64) % 2 != 0 {
            let p = sw_polynomial(m, &w, i).map_err(|e| e.to_string())?;
            ensure(p.is_zero(), || format!("{}: SW^(w,{i}) nonzero with c = {c}", m.name()))?;
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    for m in all_fixtures() {
        parity_on(&m, 9)?;
    }
    parity_on(&synthetic_non_scst(), 9)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let m = random_table(&mut rng);
        ensure(m.is_simple_type() && m.sw_symmetry_check(), || {
            "generator produced a bad table".into()
        })?;
        parity_on(&m, 5)?;
    }
    Ok(())
}

// 4

fn criterion_4() -> Check {
    let mut ms = all_fixtures();
    ms.push(synthetic_non_scst());
    for m in &ms {
        let w = m.default_w();
        for i in 0..=6 {
            let id = blowup_series_identity(m, &w, i).map_err(|e| e.to_string())?;
            ensure(id.holds, || format!("{}: blow-up identity fails at i = {i}", m.name()))?;
        }
        let (b, _, wt) = blow_up_with_w(m, &w);
        let before = scst_check(m, &w).map_err(|e| e.to_string())?.holds;
        let after = scst_check(&b, &wt).map_err(|e| e.to_string())?.holds;
        ensure(before == after, || {
            format!("{}: SCST {before} before, {after} after", m.name())
        })?;
    }
    Ok(())
}

// 5

fn criterion_5() -> Check {
    for m in all_fixtures() {
        let cn = m.char_numbers().unwrap();
        for n in 0..=10 {
            let t = make_ft_n(&m, n).map_err(|e| e.to_string())?;
            let idx = indices(&t).map_err(|e| e.to_string())?;
            ensure(idx.n_a == n, || format!("{}: n_a = {} for n = {n}", m.name(), idx.n_a))?;
            ensure(idx.d_a == cn.c + 4 * cn.chi_h - 4 * n, || {
                format!("{}: d_a for n = {n}", m.name())
            })?;
            for (k, _) in m.basic_classes().iter() {
                let lv = level(&t, k).map_err(|e| e.to_string())?;
                ensure(lv == 2 * cn.chi_h - n, || {
                    format!("{}: level {lv} for n = {n}", m.name())
                })?;
            }
            for mm in 0..=4 {
                let p = RelationParams::new(cn.chi_h, cn.c1sq, n, mm);
                ensure(p.a + 2 * p.ell + 2 * mm == p.delta, || {
                    format!("{}: A + 2ℓ + 2m ≠ δ", m.name())
                })?;
                ensure(p.delta == idx.d_a + idx.n_a - 1, || {
                    format!("{}: δ ≠ d_a + n_a − 1", m.name())
                })?;
            }
        }
    }
    Ok(())
}

// 6

fn leading_oracle(chi_h: i64, c: i64, n: i64, m: i64) -> Rational {
    let a = c - n - 2 * m - 1;
    let delta = c + 4 * chi_h - 3 * n - 1;
    let ell = 2 * chi_h - n;
    let mut v = Rational::new(fact(delta - 2 * m), fact(ell) * fact(a));
    let shift = ell - delta;
    let two = BigInt::from(2).pow(shift.unsigned_abs() as u32);
    v = if shift >= 0 {
        v * Rational::from_integer(two)
    } else {
        v / Rational::from_integer(two)
    };
    if (m + ell) % 2 != 0 {
        -v
    } else {
        v
    }
}

fn criterion_6() -> Check {
    let v = leading_coefficient(2, -2, 0, 3).map_err(|e| e.to_string())?;
    ensure(v == r(-1), || format!("leading coefficient at (2, 4, 3, 0) is {v}"))?;
    let mut count = 0;
    for chi_h in 1..=6 {
        for c in 3..=12 {
            for n in 2..=2 * chi_h {
                for mm in 0..=4 {
                    let cn = CharNumbers {
                        c1sq: chi_h - c,
                        chi_h,
                        c,
                    };
                    if !admissible_mn(&cn, n, mm) {
                        continue;
                    }
                    let p = RelationParams::new(chi_h, chi_h - c, n, mm);
                    let r_xi = (3 * p.ell - p.delta - 1).max(0);
                    let wit = leading_identity_check(chi_h, chi_h - c, mm, n, r_xi).map_err(|e| e.to_string())?;
                    let expected = leading_oracle(chi_h, c, n, mm);
                    ensure(wit.agrees && wit.closed_form == expected && !expected.is_zero(), || {
                        format!("identity fails at χ_h={chi_h} c={c} n={n} m={mm}")
                    })?;
                    count += 1;
                }
            }
        }
    }
    ensure(count >= 200, || format!("only {count} admissible tuples"))
}

// 7

fn criterion_7() -> Check {
    for name in ["E4", "E6", "E8"] {
        let m = builtin(name).unwrap();
        let rep = replay_with_preparation(&m, &m.default_w()).map_err(|e| e.to_string())?;
        ensure(rep.verified, || format!("{name}: certificate not verified"))?;
        let c = m.char_numbers().unwrap().c;
        let mut got: Vec<i64> = rep.transferred.iter().map(|t| t.original_i).collect();
        got.sort();
        let want: Vec<i64> = (2..=c / 2).map(|v| c - 2 * v).rev().collect();
        ensure(got == want, || {
            format!("{name}: transferred {got:?}, expected {want:?}")
        })?;
    }
    let k3 = builtin("K3").unwrap().blow_up_times(2);
    let cert = induction_replay(&k3, &k3.default_w()).map_err(|e| e.to_string())?;
    ensure(cert.verified && cert.steps.len() == 1, || {
        "K3 blown up twice: not verified".into()
    })?;
    let bad = synthetic_non_scst();
    let cert = induction_replay(&bad, &bad.default_w()).map_err(|e| e.to_string())?;
    ensure(cert.violated_at == Some(2), || {
        format!("synthetic table: violated at {:?}", cert.violated_at)
    })?;
    ensure(cert.steps[0].relation.status == RelationStatus::Violated, || {
        "synthetic table: first relation not Violated".into()
    })
}

// 8

/// (2k)! times the degree 2k part of Σ_j (Q/2)^j/j!.
fn exponential_oracle(q: &MultiPoly, k: u32) -> Vec<MultiPoly> {
    let mut term = MultiPoly::one(q.nvars());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut parts = vec![MultiPoly::one(q.nvars())];
    for j in 1..=k {
        term = (&term * q).scale(&(&half / r(j as i64)));
        parts.push(term.scale(&Rational::from_integer(fact(2 * j as i64))));
    }
    parts
}

fn criterion_8() -> Check {
    let k3 = builtin("K3").unwrap();
    let rank = k3.lattice().rank();
    let q = k3.intersection_polynomial();
    let oracle = exponential_oracle(&q, 5);
    let w0 = CohClass::zero(rank);
    // w² = 2 on an H summand opens the gate for δ ≡ 0 mod 4
    let h0 = k3
        .lattice()
        .labels()
        .iter()
        .position(|l| l.starts_with('H'))
        .expect("K3 has an H summand");
    let wh = CohClass::basis(rank, h0).add(&CohClass::basis(rank, h0 + 1));
    let zero_class = CohClass::zero(rank);
    for k in 0..=5u32 {
        let delta = 2 * k as i64;
        let w = if k % 2 == 1 { &w0 } else { &wh };
        ensure(witten_parity_gate(&k3, w, delta).unwrap(), || {
            format!("gate closed at δ = {delta}")
        })?;
        let d = witten_donaldson(&k3, w, delta, 0).map_err(|e| e.to_string())?;
        let expected = oracle[k as usize].scale(&r(term_sign(&k3, w, &zero_class)));
        ensure(d == expected, || {
            format!("K3: D(h^{delta}) differs from the exponential series")
        })?;
    }
    for m in [k3.clone(), builtin("E4").unwrap(), builtin("Xq2").unwrap()] {
        let w = m.default_w();
        let cn = m.char_numbers().unwrap();
        let wsq = m.lattice().square(&w).unwrap().to_integer();
        for delta in 0..=11i64 {
            let open = ((BigInt::from(delta + 3 * cn.chi_h) + &wsq) % 4u8).is_zero();
            ensure(witten_parity_gate(&m, &w, delta).unwrap() == open, || {
                format!("{}: gate at δ = {delta}", m.name())
            })?;
            if !open {
                let d = witten_donaldson(&m, &w, delta, 0).map_err(|e| e.to_string())?;
                ensure(d.is_zero(), || {
                    format!("{}: gate closed but D ≠ 0 at δ = {delta}", m.name())
                })?;
            }
        }
    }
    Ok(())
}

// 9

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_scst"))
        .args(args)
        .env_remove("SCST_FIXTURE_DIR")
        .output()
        .expect("scst runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn criterion_9(started: Instant) -> Check {
    for name in BUILTIN_NAMES {
        let src = format!("builtin:{name}");
        for cmd in ["info", "scst", "replay"] {
            let (code, out) = run_cli(&["--json", cmd, &src]);
            ensure(code == 0, || format!("{cmd} {src} exited {code}"))?;
            let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| format!("{cmd} {src}: {e}"))?;
            ensure(v["schema"] == 1, || format!("{cmd} {src}: schema"))?;
        }
        let m = builtin(name).unwrap();
        let json = m.to_canonical_json();
        let back = load_document(&json).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == m && back.to_canonical_json() == json, || {
            format!("{name}: round trip")
        })?;
    }
    let (code, out) = run_cli(&["info", "/nonexistent.json"]);
    ensure(code == 2 && out.is_empty(), || {
        format!("invalid input exited {code} with output")
    })?;
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("suite took {elapsed:?}"))
}

#[test]
fn acceptance() {
    let started = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("polarization algebra", Box::new(criterion_1)),
        ("E(n) superconformal simple type", Box::new(criterion_2)),
        ("parity vanishing", Box::new(criterion_3)),
        ("blow-up identity", Box::new(criterion_4)),
        ("index and level formulas", Box::new(criterion_5)),
        ("leading coefficient", Box::new(criterion_6)),
        ("induction replay", Box::new(criterion_7)),
        ("Witten formula", Box::new(criterion_8)),
        ("CLI", Box::new(move || criterion_9(started))),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(()) => println!("PASS {} {name} ({:.2?})", i + 1, t.elapsed()),
            Err(e) => {
                println!("FAIL {} {name}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
