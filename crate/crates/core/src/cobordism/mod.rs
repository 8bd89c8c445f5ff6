//! Spin^u characteristic-class arithmetic and the coefficient formulas of the
//! SO(3)-monopole cobordism with Λ = 0.
//!
//! A spin^u structure t is recorded by (p₁(t), Λ = c₁(t), w₂(t)). Its indices
//! are
//!
//! ```text
//! d_a = −p₁ − 3χ_h            n_a = (p₁ + Λ² − c₁² + 8χ_h)/4
//! ```
//!
//! and the level of a reducible with c₁(s) = K is ((K − Λ)² − p₁)/4.

mod relation;
mod witten;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::combinatorics::{factorial, pow2, sign_pow};
use crate::algebra::{int, Rational};
use crate::lattice::{CohClass, LatticeError, Mod2Class};
use crate::manifold::{CharNumbers, FourManifold, ManifoldError};
use crate::swseries::SwError;

pub use relation::{
    build_vanishing_relation, check_vanishing_relation, induction_replay, prepare_for_replay, replay_with_preparation,
    AsdFlags, PreparedManifold, PreparedReplay, RelationStatus, RelationTerm, RelationVerdict, ReplayCertificate,
    ReplayStep, TermClass, TermRecord, TransferredConclusion, VanishingRelation,
};
pub use witten::{witten_donaldson, witten_parity_gate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error("p₁ + Λ² − c₁² + 8χ_h = {0} is not divisible by 4")]
    NonIntegralIndex(i64),
    #[error("(K − Λ)² − p₁ = {0} is not divisible by 4")]
    NonIntegralLevel(BigInt),
    #[error("negative index: A = {a}, ℓ = {ell}")]
    NegativeIndex { a: i64, ell: i64 },
    #[error("unsupported coefficient query: {0}")]
    UnsupportedQuery(String),
    #[error("(n, m) = ({n}, {m}) is not admissible")]
    NotAdmissible { n: i64, m: i64 },
    #[error("0 is a basic class; blow up first")]
    ZeroBasicClass,
    #[error("manifold is not of Seiberg–Witten simple type")]
    NotSimpleType,
    #[error("manifold is not standard: {0}")]
    NotStandard(String),
    #[error("w = {0} is not characteristic")]
    NotCharacteristic(String),
    #[error("δ = {delta} < 2m = {twice_m}")]
    DegreeTooSmall { delta: i64, twice_m: i64 },
    #[error(transparent)]
    Sw(#[from] SwError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// (p₁, Λ, w₂) on a host manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinuStructure<'a> {
    pub p1: i64,
    pub c1: CohClass,
    pub w2: Mod2Class,
    pub host: &'a FourManifold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexData {
    pub d_a: i64,
    pub n_a: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinuExistence {
    pub exists: bool,
    /// an integral lift of w₂(t)
    pub witness: Option<CohClass>,
    pub failures: Vec<String>,
}

/// The three existence conditions: an integral lift w of w₂(t), Λ ≡ w₂(t) +
/// w₂(X) mod 2, and p₁ ≡ w² mod 4. H² has no torsion here, so the first
/// always holds.
pub fn spinu_exists(m: &FourManifold, p1: i64, lambda: &CohClass, w2: &Mod2Class) -> SpinuExistence {
    let l = m.lattice();
    let mut failures = Vec::new();
    if w2.len() != l.rank() || lambda.len() != l.rank() {
        failures.push("class length differs from lattice rank".to_string());
        return SpinuExistence {
            exists: false,
            witness: None,
            failures,
        };
    }
    let w = w2.lift();
    match lambda.mod2() {
        Some(lm) if lm == w2.add(&l.w2()) => {}
        Some(_) => failures.push("Λ is not congruent to w₂(t) + w₂(X) mod 2".to_string()),
        None => failures.push("Λ is not integral".to_string()),
    }
    let wsq = l.square(&w).expect("lengths checked").to_integer();
    if !(BigInt::from(p1) - wsq).mod_floor(&BigInt::from(4)).is_zero() {
        failures.push("p₁ is not congruent to w² mod 4".to_string());
    }
    SpinuExistence {
        exists: failures.is_empty(),
        witness: Some(w),
        failures,
    }
}

/// t_n: Λ = 0, p₁ = 4n + c₁² − 8χ_h, w₂ = w₂(X). Checks n_a(t_n) = n.
pub fn make_ft_n(m: &FourManifold, n: i64) -> Result<SpinuStructure<'_>, CobordismError> {
    let cn = m.char_numbers()?;
    let t = SpinuStructure {
        p1: 4 * n + cn.c1sq - 8 * cn.chi_h,
        c1: CohClass::zero(m.lattice().rank()),
        w2: m.lattice().w2(),
        host: m,
    };
    let idx = indices(&t)?;
    assert_eq!(idx.n_a, n, "n_a(t_n) must equal n");
    Ok(t)
}

pub fn indices(t: &SpinuStructure<'_>) -> Result<IndexData, CobordismError> {
    let cn = t.host.char_numbers()?;
    let lsq = t.host.lattice().square(&t.c1)?;
    if !lsq.is_integer() {
        return Err(CobordismError::NonIntegralLevel(lsq.to_integer()));
    }
    let lsq = lsq.to_integer();
    let num = BigInt::from(t.p1 - cn.c1sq + 8 * cn.chi_h) + lsq;
    let num: i64 = num.try_into().expect("index fits in i64");
    if num.rem_euclid(4) != 0 {
        return Err(CobordismError::NonIntegralIndex(num));
    }
    Ok(IndexData {
        d_a: -t.p1 - 3 * cn.chi_h,
        n_a: num / 4,
    })
}

/// ℓ(t, s) = ((K − Λ)² − p₁)/4.
pub fn level(t: &SpinuStructure<'_>, k: &CohClass) -> Result<i64, CobordismError> {
    let d = k.sub(&t.c1);
    let sq = t.host.lattice().square(&d)? - int(t.p1);
    let num = sq.to_integer();
    if !sq.is_integer() || !num.mod_floor(&BigInt::from(4)).is_zero() {
        return Err(CobordismError::NonIntegralLevel(num));
    }
    Ok(i64::try_from(num / 4).expect("level fits in i64"))
}

/// The integers attached to a choice of (n, m):
/// A = c − n − 2m − 1, δ = c + 4χ_h − 3n − 1, ℓ = 2χ_h − n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RelationParams {
    pub n: i64,
    pub m: i64,
    #[serde(rename = "A")]
    pub a: i64,
    pub delta: i64,
    pub ell: i64,
}

impl RelationParams {
    pub fn new(chi_h: i64, c1sq: i64, n: i64, m: i64) -> Self {
        let c = chi_h - c1sq;
        RelationParams {
            n,
            m,
            a: c - n - 2 * m - 1,
            delta: c + 4 * chi_h - 3 * n - 1,
            ell: 2 * chi_h - n,
        }
    }
}

/// 1 < n ≤ 2χ_h and c − n − 2m − 1 ≥ 0 (with m ≥ 0).
pub fn admissible_mn(cn: &CharNumbers, n: i64, m: i64) -> bool {
    m >= 0 && 1 < n && n <= 2 * cn.chi_h && cn.c - n - 2 * m >= 1
}

/// [`admissible_mn`] with n odd, the regime where the high coefficients are
/// known to vanish.
pub fn admissible_mn_odd(cn: &CharNumbers, n: i64, m: i64) -> bool {
    admissible_mn(cn, n, m) && n.rem_euclid(2) == 1
}

fn fact(n: i64) -> BigInt {
    factorial(n as u64)
}

/// a_{A,0,ℓ} = (−1)^{m+ℓ}·2^{ℓ−δ}·(δ − 2m)!/(ℓ!·A!).
pub fn leading_coefficient(chi_h: i64, c1sq: i64, m: i64, n: i64) -> Result<Rational, CobordismError> {
    let p = RelationParams::new(chi_h, c1sq, n, m);
    if p.a < 0 || p.ell < 0 || m < 0 {
        return Err(CobordismError::NegativeIndex { a: p.a, ell: p.ell });
    }
    let num = fact(p.delta - 2 * m);
    let den = fact(p.ell) * fact(p.a);
    Ok(Rational::new(num, den) * pow2(p.ell - p.delta) * int(sign_pow(m + p.ell)))
}

/// (2ℓ)!/(ℓ!·2^ℓ), the number of perfect matchings on 2ℓ points.
pub fn pairing_constant(ell: u64) -> BigInt {
    factorial(2 * ell) / (factorial(ell) * (BigInt::one() << ell))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingTermWitness {
    pub params: RelationParams,
    pub r_xi: i64,
    pub r_n: i64,
    #[serde(serialize_with = "crate::algebra::serde_rational")]
    pub closed_form: Rational,
    #[serde(serialize_with = "crate::algebra::serde_rational")]
    pub chain_form: Rational,
    pub exponent_identity: bool,
    pub dimension_identity: bool,
    pub agrees: bool,
}

/// Compares the closed form of the leading coefficient with the form
/// (δ−2m)!/(ℓ!A!)·(−1)^{A+m+r_Ξ+r_N+1}·2^{−A−2m−ℓ} coming out of the link
/// pairing, where r_N = r_Ξ + δ + 1 − 3ℓ.
pub fn leading_identity_check(
    chi_h: i64,
    c1sq: i64,
    m: i64,
    n: i64,
    r_xi: i64,
) -> Result<LeadingTermWitness, CobordismError> {
    let p = RelationParams::new(chi_h, c1sq, n, m);
    let closed_form = leading_coefficient(chi_h, c1sq, m, n)?;
    let r_n = r_xi + p.delta + 1 - 3 * p.ell;
    if r_xi < 0 || r_n < 0 {
        return Err(CobordismError::NegativeIndex { a: r_xi, ell: r_n });
    }
    let base = Rational::new(fact(p.delta - 2 * m), fact(p.ell) * fact(p.a));
    let chain_form = base * int(sign_pow(p.a + m + r_xi + r_n + 1)) * pow2(-p.a - 2 * m - p.ell);
    let exponent_identity = -p.a - 2 * m - p.ell == p.ell - p.delta && p.a + 2 * p.ell + 2 * m == p.delta;
    let dimension_identity = p.a + 2 * m + r_xi + p.ell == r_n + 2 * p.ell - 1;
    let agrees = closed_form == chain_form && exponent_identity && dimension_identity;
    Ok(LeadingTermWitness {
        params: p,
        r_xi,
        r_n,
        closed_form,
        chain_form,
        exponent_identity,
        dimension_identity,
        agrees,
    })
}

/// Arguments of a_{i,j,k}(χ_h, c₁², K·Λ, Λ², m, ℓ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientQuery {
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub chi_h: i64,
    pub c1sq: i64,
    pub k_dot_lambda: i64,
    pub lambda_sq: i64,
    pub m: i64,
    pub ell: i64,
}

impl CoefficientQuery {
    /// The Λ = 0, j = 0 query for a_{i,0,k}.
    pub fn lambda_zero(i: i64, k: i64, chi_h: i64, c1sq: i64, m: i64, ell: i64) -> Self {
        CoefficientQuery {
            i,
            j: 0,
            k,
            chi_h,
            c1sq,
            k_dot_lambda: 0,
            lambda_sq: 0,
            m,
            ell,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroRule {
    /// k exceeds the level
    LinkPairing,
    /// i ≥ c − 3 with n odd
    DeterminingCoefficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CoefficientValue {
    KnownZero {
        rule: ZeroRule,
    },
    KnownValue {
        #[serde(serialize_with = "crate::algebra::serde_rational")]
        value: Rational,
    },
    Unknown,
}

impl CoefficientValue {
    pub fn is_known_zero(&self) -> bool {
        matches!(self, CoefficientValue::KnownZero { .. })
    }
}

/// What is known about a_{i,0,k} with Λ = 0. The level determines n = 2χ_h − ℓ.
pub fn coefficient_oracle(q: &CoefficientQuery) -> Result<CoefficientValue, CobordismError> {
    if q.j != 0 {
        return Err(CobordismError::UnsupportedQuery(format!("j = {} > 0", q.j)));
    }
    if q.k_dot_lambda != 0 || q.lambda_sq != 0 {
        return Err(CobordismError::UnsupportedQuery("Λ-dependent arguments".into()));
    }
    if q.k > q.ell {
        return Ok(CoefficientValue::KnownZero {
            rule: ZeroRule::LinkPairing,
        });
    }
    let n = 2 * q.chi_h - q.ell;
    let c = q.chi_h - q.c1sq;
    let cn = CharNumbers {
        c1sq: q.c1sq,
        chi_h: q.chi_h,
        c,
    };
    let p = RelationParams::new(q.chi_h, q.c1sq, n, q.m);
    if q.i < 0 || q.k < 0 || q.i + 2 * q.k != p.delta - 2 * q.m {
        return Ok(CoefficientValue::Unknown);
    }
    if admissible_mn_odd(&cn, n, q.m) && c >= 3 && q.i >= c - 3 {
        return Ok(CoefficientValue::KnownZero {
            rule: ZeroRule::DeterminingCoefficient,
        });
    }
    if admissible_mn(&cn, n, q.m) && (q.i, q.k) == (p.a, p.ell) {
        return Ok(CoefficientValue::KnownValue {
            value: leading_coefficient(q.chi_h, q.c1sq, q.m, n)?,
        });
    }
    Ok(CoefficientValue::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::combinatorics::odd_double_factorial;
    use crate::manifold::{builtin, make_elliptic_surface};

    #[test]
    fn existence_conditions() {
        let k3 = builtin("K3").unwrap();
        let z = CohClass::zero(22);
        let w0 = Mod2Class::zero(22);
        assert!(spinu_exists(&k3, -4, &z, &w0).exists);
        assert!(!spinu_exists(&k3, -2, &z, &w0).exists);
        let mut bits = vec![false; 22];
        bits[0] = true;
        let odd = CohClass::basis(22, 0);
        let r = spinu_exists(&k3, 0, &odd, &w0);
        assert!(!r.exists);
        assert_eq!(r.failures.len(), 1);
        // Λ ≡ w₂(t) restores condition (2); the lift is an E8 root with w² = −2
        let w2 = Mod2Class::new(bits);
        assert!(!spinu_exists(&k3, 0, &odd, &w2).exists);
        assert!(spinu_exists(&k3, -2, &odd, &w2).exists);
    }

    #[test]
    fn ft_n_examples() {
        let k3 = builtin("K3").unwrap();
        let t = make_ft_n(&k3, 3).unwrap();
        assert_eq!(t.p1, -4);
        assert_eq!(indices(&t).unwrap(), IndexData { d_a: -2, n_a: 3 });
        assert_eq!(level(&t, &CohClass::zero(22)).unwrap(), 1);

        let e4 = make_elliptic_surface(4);
        let t = make_ft_n(&e4, 3).unwrap();
        assert_eq!(t.p1, -20);
        assert_eq!(indices(&t).unwrap(), IndexData { d_a: 8, n_a: 3 });
        let f2 = CohClass::basis(46, 32).scale(&int(2));
        assert_eq!(level(&t, &f2).unwrap(), 5);

        let t0 = make_ft_n(&e4, 0).unwrap();
        assert_eq!(indices(&t0).unwrap().n_a, 0);
        let ex = spinu_exists(&e4, t.p1, &t.c1, &t.w2);
        assert!(ex.exists, "{:?}", ex.failures);
    }

    #[test]
    fn non_integral_level() {
        let k3 = builtin("K3").unwrap();
        let mut t = make_ft_n(&k3, 3).unwrap();
        t.p1 += 1;
        assert!(matches!(
            level(&t, &CohClass::zero(22)),
            Err(CobordismError::NonIntegralLevel(_))
        ));
        assert!(matches!(indices(&t), Err(CobordismError::NonIntegralIndex(_))));
    }

    #[test]
    fn admissibility() {
        let cn = CharNumbers {
            c1sq: 0,
            chi_h: 3,
            c: 6,
        };
        assert!(admissible_mn(&cn, 3, 1));
        assert!(!admissible_mn(&cn, 1, 0));
        assert!(!admissible_mn(&cn, 7, 0));
        assert!(admissible_mn(&cn, 4, 0));
        assert!(!admissible_mn_odd(&cn, 4, 0));
        assert!(!admissible_mn(&cn, 3, 2));
    }

    #[test]
    fn leading_values() {
        assert_eq!(leading_coefficient(2, -2, 0, 3).unwrap(), int(-1));
        // χ_h = 4, c = 4, n = 3, m = 0: A = 0, ℓ = 5, δ = A + 2ℓ + 2m = 10
        let p = RelationParams::new(4, 0, 3, 0);
        assert_eq!((p.a, p.ell, p.delta), (0, 5, 10));
        let expected = -Rational::new(fact(10), fact(5)) * pow2(-5);
        assert_eq!(expected, int(-945));
        assert_eq!(leading_coefficient(4, 0, 0, 3).unwrap(), expected);
        assert!(matches!(
            leading_coefficient(2, 0, 0, 3),
            Err(CobordismError::NegativeIndex { a: -2, .. })
        ));
    }

    #[test]
    fn leading_identity_small() {
        let w = leading_identity_check(2, -2, 0, 3, 0).unwrap();
        assert!(w.agrees);
        assert_eq!(w.r_n, 0);
    }

    #[test]
    fn pairing_constant_is_double_factorial() {
        for ell in 0..=12 {
            assert_eq!(pairing_constant(ell), odd_double_factorial(ell));
        }
    }

    #[test]
    fn oracle_rules() {
        // χ_h = 2, c = 5, ℓ = 1 (n = 3), m = 0: δ = 3, A = 1; slots (3,0) and (1,1)
        let q = CoefficientQuery::lambda_zero(1, 2, 2, -3, 0, 1);
        assert_eq!(
            coefficient_oracle(&q).unwrap(),
            CoefficientValue::KnownZero {
                rule: ZeroRule::LinkPairing
            }
        );
        let q = CoefficientQuery::lambda_zero(3, 0, 2, -3, 0, 1);
        assert_eq!(
            coefficient_oracle(&q).unwrap(),
            CoefficientValue::KnownZero {
                rule: ZeroRule::DeterminingCoefficient
            }
        );
        let q = CoefficientQuery::lambda_zero(1, 1, 2, -3, 0, 1);
        assert_eq!(
            coefficient_oracle(&q).unwrap(),
            CoefficientValue::KnownValue {
                value: leading_coefficient(2, -3, 0, 3).unwrap()
            }
        );
        // degree mismatch
        let q = CoefficientQuery::lambda_zero(2, 0, 2, -3, 0, 1);
        assert_eq!(coefficient_oracle(&q).unwrap(), CoefficientValue::Unknown);

        let mut bad = q;
        bad.j = 1;
        assert!(matches!(
            coefficient_oracle(&bad),
            Err(CobordismError::UnsupportedQuery(_))
        ));
        bad.j = 0;
        bad.lambda_sq = -1;
        assert!(matches!(
            coefficient_oracle(&bad),
            Err(CobordismError::UnsupportedQuery(_))
        ));
    }

    #[test]
    fn determining_rule_needs_odd_n() {
        // χ_h = 3, c = 5. n = 3: ℓ = 3, δ = 7, slot (3,2) has i ≥ c − 3
        let q = CoefficientQuery::lambda_zero(3, 2, 3, -2, 0, 3);
        assert_eq!(
            coefficient_oracle(&q).unwrap(),
            CoefficientValue::KnownZero {
                rule: ZeroRule::DeterminingCoefficient
            }
        );
        // n = 4: ℓ = 2, δ = 4, slot (4,0) is not covered
        let q = CoefficientQuery::lambda_zero(4, 0, 3, -2, 0, 2);
        assert_eq!(coefficient_oracle(&q).unwrap(), CoefficientValue::Unknown);
    }

    #[test]
    fn c_minus_3_never_degree_compatible_for_odd_n() {
        // δ − 2m − (c − 3) = 4χ_h − 3n + 2 − 2m is odd when n is odd
        for chi_h in 2..6 {
            for c in 3..12 {
                for n in (3..=2 * chi_h).step_by(2) {
                    for m in 0..4 {
                        let p = RelationParams::new(chi_h, chi_h - c, n, m);
                        assert_eq!((p.delta - 2 * m - (c - 3)).rem_euclid(2), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn unknown_below_leading_slot() {
        // χ_h = 3, c = 8, n = 3, m = 1: ℓ = 3, δ − 2m = 8, A = 2
        let q = CoefficientQuery::lambda_zero(2, 3, 3, -5, 1, 3);
        assert!(matches!(
            coefficient_oracle(&q).unwrap(),
            CoefficientValue::KnownValue { .. }
        ));
        let q = CoefficientQuery::lambda_zero(4, 2, 3, -5, 1, 3);
        assert_eq!(coefficient_oracle(&q).unwrap(), CoefficientValue::Unknown);
        let q = CoefficientQuery::lambda_zero(6, 1, 3, -5, 1, 3);
        assert!(coefficient_oracle(&q).unwrap().is_known_zero());
    }
}
