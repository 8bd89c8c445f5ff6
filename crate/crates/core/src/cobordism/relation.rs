//! Vanishing relations
//!
//! ```text
//! 0 = Σ_{k=0}^{ℓ} a_{A+2k,0,ℓ−k} · SW^{w,A+2k}(h) · Q(h)^{ℓ−k}
//! ```
//!
//! and the induction on v that turns them into SCST.

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{
    admissible_mn, coefficient_oracle, indices, make_ft_n, CobordismError, CoefficientQuery, CoefficientValue,
    RelationParams, ZeroRule,
};
use crate::algebra::MultiPoly;
use crate::lattice::CohClass;
use crate::manifold::FourManifold;
use crate::swseries::{blow_up_with_w, extract_from_blowup, sw_polynomial, term_list, SWPolynomial};

/// The conditions on the ASD side of the cobordism, with η_c = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AsdFlags {
    pub d_a: i64,
    pub n_a: i64,
    /// δ − 2m ≥ 0
    pub degree_nonnegative: bool,
    /// δ = d_a + n_a − 1
    pub link_dimension: bool,
    /// δ > d_a
    pub exceeds_asd_dimension: bool,
    /// d_a ≥ 0; not needed by the vanishing argument, recorded only
    pub asd_nonnegative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationTerm {
    pub k: i64,
    /// SW degree A + 2k
    pub i: i64,
    /// exponent of Q, ℓ − k
    pub q_power: i64,
    pub coefficient: CoefficientValue,
    pub sw: SWPolynomial,
}

impl RelationTerm {
    pub fn provably_zero(&self) -> bool {
        self.coefficient.is_known_zero() || self.sw.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingRelation {
    pub manifold: String,
    pub params: RelationParams,
    pub asd: AsdFlags,
    pub terms: Vec<RelationTerm>,
    q: MultiPoly,
}

impl Serialize for VanishingRelation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VanishingRelation", 4)?;
        st.serialize_field("manifold", &self.manifold)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("asd", &self.asd)?;
        st.serialize_field("terms", &self.terms)?;
        st.end()
    }
}

impl VanishingRelation {
    /// Σ a·SW·Q^{ℓ−k} over the terms whose coefficient is known and nonzero.
    pub fn known_sum(&self) -> MultiPoly {
        let mut acc = MultiPoly::zero(self.q.nvars());
        for t in &self.terms {
            if let CoefficientValue::KnownValue { value } = &t.coefficient {
                if !t.sw.is_zero() {
                    let qp = self.q.pow(t.q_power as u32);
                    acc += &(&t.sw.poly * &qp).scale(value);
                }
            }
        }
        acc
    }
}

fn require_standard_simple(m: &FourManifold) -> Result<(), CobordismError> {
    let st = m.is_standard();
    if !st.standard {
        return Err(CobordismError::NotStandard(st.reasons.join("; ")));
    }
    if !m.is_simple_type() {
        return Err(CobordismError::NotSimpleType);
    }
    Ok(())
}

fn require_characteristic(m: &FourManifold, w: &CohClass) -> Result<(), CobordismError> {
    if !m.lattice().is_characteristic(w) {
        return Err(CobordismError::NotCharacteristic(w.to_string()));
    }
    Ok(())
}

pub fn build_vanishing_relation(
    m: &FourManifold,
    w: &CohClass,
    n: i64,
    mm: i64,
) -> Result<VanishingRelation, CobordismError> {
    require_standard_simple(m)?;
    require_characteristic(m, w)?;
    let cn = m.char_numbers()?;
    if !admissible_mn(&cn, n, mm) {
        return Err(CobordismError::NotAdmissible { n, m: mm });
    }
    let params = RelationParams::new(cn.chi_h, cn.c1sq, n, mm);
    let idx = indices(&make_ft_n(m, n)?)?;
    let asd = AsdFlags {
        d_a: idx.d_a,
        n_a: idx.n_a,
        degree_nonnegative: params.delta - 2 * mm >= 0,
        link_dimension: params.delta == idx.d_a + idx.n_a - 1,
        exceeds_asd_dimension: params.delta > idx.d_a,
        asd_nonnegative: idx.d_a >= 0,
    };
    let mut terms = Vec::new();
    for k in 0..=params.ell {
        let i = params.a + 2 * k;
        let q = CoefficientQuery::lambda_zero(i, params.ell - k, cn.chi_h, cn.c1sq, mm, params.ell);
        terms.push(RelationTerm {
            k,
            i,
            q_power: params.ell - k,
            coefficient: coefficient_oracle(&q)?,
            sw: sw_polynomial(m, w, i as u32)?,
        });
    }
    Ok(VanishingRelation {
        manifold: m.name().to_string(),
        params,
        asd,
        terms,
        q: m.intersection_polynomial(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationStatus {
    Consistent,
    Indeterminate,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationVerdict {
    pub status: RelationStatus,
    /// the nonzero known sum when the relation fails
    pub residual: Option<MultiPoly>,
}

impl Serialize for RelationVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RelationVerdict", 2)?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("residual", &self.residual.as_ref().map(term_list))?;
        st.end()
    }
}

/// Consistent when every term vanishes or the known terms sum to zero,
/// Indeterminate when an unknown coefficient multiplies a nonzero polynomial,
/// Violated when everything is known and the sum is not zero. Powers of Q
/// are only expanded in the last two-way decision.
pub fn check_vanishing_relation(rel: &VanishingRelation) -> RelationVerdict {
    let live: Vec<&RelationTerm> = rel.terms.iter().filter(|t| !t.provably_zero()).collect();
    if live.is_empty() {
        return RelationVerdict {
            status: RelationStatus::Consistent,
            residual: None,
        };
    }
    if live.iter().any(|t| t.coefficient == CoefficientValue::Unknown) {
        return RelationVerdict {
            status: RelationStatus::Indeterminate,
            residual: None,
        };
    }
    let sum = rel.known_sum();
    if sum.is_zero() {
        RelationVerdict {
            status: RelationStatus::Consistent,
            residual: None,
        }
    } else {
        RelationVerdict {
            status: RelationStatus::Violated,
            residual: Some(sum),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermClass {
    /// k = 0, nonzero leading coefficient
    Leading,
    /// 1 ≤ k ≤ v − 2, SW factor vanishes by an earlier step
    InductivelyZero,
    /// k ≥ v − 1, coefficient vanishes
    CoefficientZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub k: i64,
    pub i: i64,
    pub q_power: i64,
    pub class: TermClass,
    pub rule: &'static str,
    pub coefficient: CoefficientValue,
    pub sw_zero: bool,
    /// the classification is backed by the oracle and by earlier steps
    pub justified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayStep {
    pub v: i64,
    pub params: RelationParams,
    pub asd: AsdFlags,
    pub terms: Vec<TermRecord>,
    /// SW^{w,c−2v} = 0 is forced
    pub concluded_i: i64,
    pub conclusion_holds_in_data: bool,
    pub relation: RelationVerdict,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayCertificate {
    pub manifold: String,
    pub c: i64,
    pub chi_h: i64,
    pub w: String,
    pub steps: Vec<ReplayStep>,
    pub verified: bool,
    /// first v whose forced conclusion fails on the data
    pub violated_at: Option<i64>,
}

/// For v = 2..⌊c/2⌋ with n = 3 and m = v − 2, builds the relation, sorts its
/// terms into leading / inductively zero / coefficient zero, concludes
/// SW^{w,c−2v} = 0 and checks that conclusion against the table.
pub fn induction_replay(m: &FourManifold, w: &CohClass) -> Result<ReplayCertificate, CobordismError> {
    require_standard_simple(m)?;
    require_characteristic(m, w)?;
    if m.basic_classes().contains_zero() {
        return Err(CobordismError::ZeroBasicClass);
    }
    let cn = m.char_numbers()?;
    let mut steps = Vec::new();
    let mut concluded: Vec<i64> = Vec::new();
    let mut violated_at = None;
    for v in 2..=cn.c / 2 {
        let rel = build_vanishing_relation(m, w, 3, v - 2)?;
        let mut records = Vec::new();
        for t in &rel.terms {
            let (class, rule, justified) = if t.k == 0 {
                let nonzero = matches!(&t.coefficient, CoefficientValue::KnownValue { value } if !value.is_zero());
                (TermClass::Leading, "leading_coefficient", nonzero)
            } else if t.k <= v - 2 {
                (
                    TermClass::InductivelyZero,
                    "earlier_step",
                    concluded.contains(&t.i) && t.sw.is_zero(),
                )
            } else {
                let rule = match t.coefficient {
                    CoefficientValue::KnownZero {
                        rule: ZeroRule::LinkPairing,
                    } => "link_pairing",
                    _ => "determining_coefficient",
                };
                (TermClass::CoefficientZero, rule, t.coefficient.is_known_zero())
            };
            records.push(TermRecord {
                k: t.k,
                i: t.i,
                q_power: t.q_power,
                class,
                rule,
                coefficient: t.coefficient.clone(),
                sw_zero: t.sw.is_zero(),
                justified,
            });
        }
        let concluded_i = cn.c - 2 * v;
        let holds = rel.terms[0].sw.is_zero();
        let relation = check_vanishing_relation(&rel);
        let verified = holds && records.iter().all(|r| r.justified) && relation.status == RelationStatus::Consistent;
        if !holds && violated_at.is_none() {
            violated_at = Some(v);
        }
        if holds {
            concluded.push(concluded_i);
        }
        steps.push(ReplayStep {
            v,
            params: rel.params,
            asd: rel.asd,
            terms: records,
            concluded_i,
            conclusion_holds_in_data: holds,
            relation,
            verified,
        });
    }
    let verified = steps.iter().all(|s| s.verified);
    Ok(ReplayCertificate {
        manifold: m.name().to_string(),
        c: cn.c,
        chi_h: cn.chi_h,
        w: w.to_string(),
        steps,
        verified,
        violated_at,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreparedManifold {
    pub manifold: FourManifold,
    pub w: CohClass,
    pub blowups: usize,
    /// the chain M = M₀, M₁, …, M_r with the w used on each
    pub chain: Vec<(FourManifold, CohClass)>,
}

/// Blows up (with w ↦ w − e*) until c₁² ≠ 0 and 0 ∉ B.
pub fn prepare_for_replay(m: &FourManifold, w: &CohClass) -> Result<PreparedManifold, CobordismError> {
    let mut cur = m.clone();
    let mut cw = w.clone();
    let mut chain = vec![(cur.clone(), cw.clone())];
    while cur.char_numbers()?.c1sq == 0 || cur.basic_classes().contains_zero() {
        let (b, _, wt) = blow_up_with_w(&cur, &cw);
        cur = b;
        cw = wt;
        chain.push((cur.clone(), cw.clone()));
    }
    Ok(PreparedManifold {
        blowups: chain.len() - 1,
        manifold: cur,
        w: cw,
        chain,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferredConclusion {
    /// index on the prepared manifold
    pub prepared_i: i64,
    /// index on the original manifold, prepared_i − r
    pub original_i: i64,
    /// each extraction step agrees with the direct polynomial
    pub extraction_consistent: bool,
    pub holds_in_data: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreparedReplay {
    pub original: String,
    pub prepared: String,
    pub blowups: usize,
    pub certificate: ReplayCertificate,
    pub transferred: Vec<TransferredConclusion>,
    pub verified: bool,
}

/// Prepares, replays, and carries each conclusion back down the blow-up
/// chain by reading off the linear coefficient in the exceptional variable.
pub fn replay_with_preparation(m: &FourManifold, w: &CohClass) -> Result<PreparedReplay, CobordismError> {
    require_standard_simple(m)?;
    require_characteristic(m, w)?;
    let prep = prepare_for_replay(m, w)?;
    let cert = induction_replay(&prep.manifold, &prep.w)?;
    let r = prep.blowups as i64;
    let mut transferred = Vec::new();
    for step in cert.steps.iter().filter(|s| s.conclusion_holds_in_data) {
        let j = step.concluded_i;
        if j < r {
            continue;
        }
        let mut consistent = true;
        let mut poly = sw_polynomial(&prep.manifold, &prep.w, j as u32)?.poly;
        for s in (1..prep.chain.len()).rev() {
            let idx = j - (prep.blowups - s) as i64;
            let down = extract_from_blowup(&poly, idx as u32);
            let (lower, lw) = &prep.chain[s - 1];
            let direct = sw_polynomial(lower, lw, (idx - 1) as u32)?.poly;
            consistent &= down == direct;
            poly = direct;
        }
        transferred.push(TransferredConclusion {
            prepared_i: j,
            original_i: j - r,
            extraction_consistent: consistent,
            holds_in_data: poly.is_zero(),
        });
    }
    let verified = cert.verified && transferred.iter().all(|t| t.extraction_consistent && t.holds_in_data);
    Ok(PreparedReplay {
        original: m.name().to_string(),
        prepared: prep.manifold.name().to_string(),
        blowups: prep.blowups,
        certificate: cert,
        transferred,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{builtin, make_abstract_xq, make_elliptic_surface, synthetic_non_scst, BasicClassTable};

    #[test]
    fn e4_relation_terms() {
        let e4 = make_elliptic_surface(4);
        let rel = build_vanishing_relation(&e4, &e4.default_w(), 3, 0).unwrap();
        assert_eq!(rel.terms.len(), 6);
        assert!(matches!(rel.terms[0].coefficient, CoefficientValue::KnownValue { .. }));
        for t in &rel.terms[1..] {
            assert!(t.coefficient.is_known_zero(), "k = {}", t.k);
        }
        assert!(rel.asd.link_dimension && rel.asd.exceeds_asd_dimension);
        assert_eq!(check_vanishing_relation(&rel).status, RelationStatus::Consistent);
    }

    #[test]
    fn k3_has_no_admissible_pair() {
        let k3 = builtin("K3").unwrap();
        assert!(matches!(
            build_vanishing_relation(&k3, &k3.default_w(), 3, 0),
            Err(CobordismError::NotAdmissible { .. })
        ));
    }

    #[test]
    fn xq_blown_up_relation() {
        let x = make_abstract_xq(2).blow_up();
        let rel = build_vanishing_relation(&x, &x.default_w(), 3, 0).unwrap();
        assert_eq!(rel.params.a, 0);
        assert_eq!(rel.terms.len(), rel.params.ell as usize + 1);
    }

    #[test]
    fn synthetic_violated() {
        let s = synthetic_non_scst();
        let rel = build_vanishing_relation(&s, &s.default_w(), 3, 0).unwrap();
        let v = check_vanishing_relation(&rel);
        assert_eq!(v.status, RelationStatus::Violated);
        assert!(v.residual.is_some());
        let cert = induction_replay(&s, &s.default_w()).unwrap();
        assert!(!cert.verified);
        assert_eq!(cert.violated_at, Some(2));
    }

    #[test]
    fn empty_table_consistent() {
        let e5 = make_elliptic_surface(5)
            .with_basic_classes(BasicClassTable::new())
            .unwrap();
        let rel = build_vanishing_relation(&e5, &e5.default_w(), 3, 0).unwrap();
        assert_eq!(check_vanishing_relation(&rel).status, RelationStatus::Consistent);
    }

    #[test]
    fn replay_needs_zero_free_table() {
        let e4 = make_elliptic_surface(4);
        assert_eq!(
            induction_replay(&e4, &e4.default_w()),
            Err(CobordismError::ZeroBasicClass)
        );
    }

    #[test]
    fn replay_e4_and_e6() {
        let e4 = make_elliptic_surface(4);
        let r = replay_with_preparation(&e4, &e4.default_w()).unwrap();
        assert!(r.verified);
        assert_eq!(r.blowups, 1);
        let originals: Vec<i64> = r.transferred.iter().map(|t| t.original_i).collect();
        assert_eq!(originals, vec![0]);

        let e6 = make_elliptic_surface(6);
        let r = replay_with_preparation(&e6, &e6.default_w()).unwrap();
        assert!(r.verified);
        let originals: Vec<i64> = r.transferred.iter().map(|t| t.original_i).collect();
        assert_eq!(originals, vec![2, 0]);
    }

    #[test]
    fn replay_k3_blown_up_twice() {
        let k3 = builtin("K3").unwrap().blow_up_times(2);
        let cert = induction_replay(&k3, &k3.default_w()).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.steps[0].concluded_i, 0);
    }
}
