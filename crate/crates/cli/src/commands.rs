use serde_json::{json, Value};

use scst_core::cobordism::{replay_with_preparation, witten_donaldson, witten_parity_gate};
use scst_core::lattice::CohClass;
use scst_core::manifold::FourManifold;
use scst_core::swseries::{
    basic_class_lower_bound, blow_up_with_w, blowup_series_identity, scst_blowup_transfer, scst_check, sw_polynomial,
    term_list, ScstReason, SwError,
};

use crate::report::{Outcome, Status};

type CmdResult = Result<Outcome, Vec<String>>;

fn fail(e: impl std::fmt::Display) -> Vec<String> {
    vec![e.to_string()]
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

pub fn info(m: &FourManifold) -> CmdResult {
    let cn = m.char_numbers().map_err(fail)?;
    let std = m.is_standard();
    let simple = m.is_simple_type();
    let symmetric = m.sw_symmetry_check();
    let l = m.lattice();
    let results = json!({
        "name": m.name(),
        "euler": m.euler(),
        "signature": m.signature(),
        "rank": l.rank(),
        "lattice": l.descriptor(),
        "even": l.is_even(),
        "b_plus": m.b_plus(),
        "chi_h": cn.chi_h,
        "c1_squared": cn.c1sq,
        "c": cn.c,
        "standard": std,
        "simple_type": simple,
        "symmetric": symmetric,
        "basic_classes": m.basic_classes().len(),
        "basic_classes_mod_sign": m.basic_classes().count_mod_sign(),
    });
    let mut lines = vec![
        format!("{}", m.name()),
        format!("  e = {}, σ = {}, rank = {}", m.euler(), m.signature(), l.rank()),
        format!(
            "  b+ = {}, χ_h = {}, c1² = {}, c = {}",
            m.b_plus(),
            cn.chi_h,
            cn.c1sq,
            cn.c
        ),
        format!(
            "  standard: {}",
            if std.standard {
                "yes".to_string()
            } else {
                std.reasons.join("; ")
            }
        ),
        format!("  simple type: {}", yes_no(simple)),
        format!("  table symmetric: {}", yes_no(symmetric)),
        format!(
            "  basic classes: {} ({} up to sign)",
            m.basic_classes().len(),
            m.basic_classes().count_mod_sign()
        ),
    ];
    if let Some(d) = l.descriptor() {
        lines.insert(2, format!("  lattice: {d}"));
    }
    Ok(Outcome::new(results, lines, Status::Ok))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `a..b` (inclusive) or `a`.
pub fn parse_range(text: &str) -> Result<(u32, u32), Vec<String>> {
    let bad = || vec![format!("--i {text:?}: expected a..b or a single index")];
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim_start_matches('=').trim()),
        None => (text.trim(), text.trim()),
    };
    let a: u32 = a.parse().map_err(|_| bad())?;
    let b: u32 = b.parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn sw(m: &FourManifold, w: &CohClass, range: Option<&str>) -> CmdResult {
    let c = m.char_numbers().map_err(fail)?.c;
    let (lo, hi) = match range {
        Some(r) => parse_range(r)?,
        None => (0, c.max(0) as u32),
    };
    let mut polys = Vec::new();
    let mut lines = vec![format!("{}: c = {c}, w = {w}", m.name())];
    let mut status = Status::Ok;
    let mut warnings = Vec::new();
    for i in lo..=hi {
        let p = sw_polynomial(m, w, i).map_err(fail)?;
        let forced = (c + i as i64) % 2 != 0;
        if forced && !p.is_zero() {
            status = Status::Violated;
            warnings.push(format!("{}", SwError::ParityViolation(i)));
        }
        let mut v = to_value(&p);
        v["parity_forced_zero"] = json!(forced);
        polys.push(v);
        let tag = if forced { "  (parity)" } else { "" };
        lines.push(format!("  SW^(w,{i}) = {}{tag}", p.poly));
    }
    let mut out = Outcome::new(
        json!({ "c": c, "w": w.to_string(), "polynomials": polys }),
        lines,
        status,
    );
    out.warnings = warnings;
    Ok(out)
}

pub fn scst(m: &FourManifold, w: &CohClass) -> CmdResult {
    let v = scst_check(m, w).map_err(fail)?;
    let line = match &v.reason {
        ScstReason::CLe3 => format!("{}: SCST holds (c = {} ≤ 3)", m.name(), v.c),
        ScstReason::AllVanish => format!("{}: SCST holds (SW^(w,i) = 0 for i ≤ {})", m.name(), v.c - 4),
        ScstReason::Counterexample { witness } => format!(
            "{}: SCST fails, SW^(w,{}) = {} with c = {}",
            m.name(),
            witness.i,
            witness.poly,
            v.c
        ),
    };
    let status = if v.holds { Status::Ok } else { Status::Violated };
    Ok(Outcome::new(to_value(&v), vec![line], status))
}

pub fn bound(m: &FourManifold) -> CmdResult {
    match basic_class_lower_bound(m) {
        Ok(r) => {
            let line = format!(
                "{}: |B/±1| = {} against c/2 = {}: {}",
                m.name(),
                r.count,
                r.bound,
                if r.satisfied { "satisfied" } else { "unsatisfied" }
            );
            let status = if r.satisfied { Status::Ok } else { Status::Violated };
            let mut out = Outcome::new(to_value(&r), vec![line], status);
            if let Some(w) = &r.warning {
                out = out.warn(w.clone());
            }
            Ok(out)
        }
        Err(SwError::Inapplicable(why)) => Ok(Outcome::new(
            json!({ "applicable": false, "reason": why }),
            vec![format!("{}: bound not applicable ({why})", m.name())],
            Status::Ok,
        )),
        Err(e) => Err(fail(e)),
    }
}

pub fn blowup(m: &FourManifold, w: &CohClass, times: usize) -> CmdResult {
    let mut cur = m.clone();
    let mut cw = w.clone();
    let mut steps = Vec::new();
    let mut lines = Vec::new();
    let mut ok = true;
    for s in 1..=times {
        let c = cur.char_numbers().map_err(fail)?.c;
        let top = c.clamp(0, 6) as u32;
        let mut identity = Vec::new();
        for i in 0..=top {
            let id = blowup_series_identity(&cur, &cw, i).map_err(fail)?;
            ok &= id.holds;
            identity.push(json!({ "i": i, "holds": id.holds }));
        }
        let transfer = scst_blowup_transfer(&cur, &cw).map_err(fail)?;
        ok &= transfer.agrees;
        lines.push(format!(
            "  step {s}: series identity {} for i ≤ {top}, SCST {} before and {} after",
            if identity.iter().all(|x| x["holds"] == true) {
                "holds"
            } else {
                "FAILS"
            },
            yes_no(transfer.direct.holds),
            yes_no(transfer.blown_up.holds),
        ));
        steps.push(json!({
            "step": s,
            "identity": identity,
            "transfer": to_value(&transfer),
        }));
        let (b, _, wt) = blow_up_with_w(&cur, &cw);
        cur = b;
        cw = wt;
    }
    let cn = cur.char_numbers().map_err(fail)?;
    lines.insert(
        0,
        format!(
            "{} blown up {times} time(s): rank {}, χ_h = {}, c1² = {}, c = {}",
            m.name(),
            cur.lattice().rank(),
            cn.chi_h,
            cn.c1sq,
            cn.c
        ),
    );
    let results = json!({
        "times": times,
        "steps": steps,
        "w": cw.to_string(),
        "manifold": to_value(&cur.to_document()),
    });
    Ok(Outcome::new(
        results,
        lines,
        if ok { Status::Ok } else { Status::Violated },
    ))
}

pub fn donaldson(m: &FourManifold, w: &CohClass, delta: i64, mm: i64) -> CmdResult {
    let d = witten_donaldson(m, w, delta, mm).map_err(fail)?;
    let gate = witten_parity_gate(m, w, delta).map_err(fail)?;
    let degree = delta - 2 * mm;
    let q_multiple = if degree % 2 == 0 && !d.is_zero() {
        d.ratio_to(&m.intersection_polynomial().pow((degree / 2) as u32))
    } else {
        None
    };
    let shown = match &q_multiple {
        Some(r) => format!("{r}·Q^{}", degree / 2),
        None => d.to_string(),
    };
    let lines = vec![
        format!(
            "{}: δ = {delta}, m = {mm}, parity gate {}",
            m.name(),
            if gate { "open" } else { "closed" }
        ),
        format!("  D(h^{degree} x^{mm}) = {shown}"),
    ];
    let results = json!({
        "delta": delta,
        "m": mm,
        "degree": degree,
        "w": w.to_string(),
        "parity_gate": gate,
        "zero": d.is_zero(),
        "q_multiple": q_multiple.map(|r| r.to_string()),
        "terms": term_list(&d),
    });
    Ok(Outcome::new(results, lines, Status::Ok))
}

pub fn replay(m: &FourManifold, w: &CohClass) -> CmdResult {
    let r = replay_with_preparation(m, w).map_err(fail)?;
    let mut lines = vec![format!(
        "{}: replay on {} after {} blow-up(s)",
        m.name(),
        r.prepared,
        r.blowups
    )];
    for s in &r.certificate.steps {
        lines.push(format!(
            "  v = {}: n = {}, m = {}, relation {}, SW^(w,{}) = 0 {}",
            s.v,
            s.params.n,
            s.params.m,
            format!("{:?}", s.relation.status).to_lowercase(),
            s.concluded_i,
            if s.verified { "verified" } else { "NOT verified" }
        ));
    }
    for t in &r.transferred {
        lines.push(format!(
            "  transferred: SW^(w,{}) = 0 on {} {}",
            t.original_i,
            r.original,
            if t.extraction_consistent && t.holds_in_data {
                "verified"
            } else {
                "NOT verified"
            }
        ));
    }
    lines.push(format!(
        "  certificate {}",
        if r.verified { "verified" } else { "violated" }
    ));
    let status = if r.verified { Status::Ok } else { Status::Violated };
    Ok(Outcome::new(to_value(&r), lines, status))
}
