//! Closed oriented four-manifolds with b¹ = 0, described by their Euler
//! characteristic, signature, intersection lattice and a table of
//! Seiberg–Witten basic classes.

mod document;
mod fixtures;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{CohClass, IntersectionLattice};

pub use document::{load_document, BasicClassEntry, LatticeSpec, ManifoldDocument, SwValue, SCHEMA_VERSION};
pub use fixtures::{
    builtin, builtin_names, make_abstract_xq, make_elliptic_surface, synthetic_non_scst, BUILTIN_NAMES,
};

/// One failed invariant, with a pointer to where it failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("e + σ = {0} is not divisible by 4, so χ_h is not an integer")]
    NonIntegralChiH(i64),
    #[error("invalid manifold data: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// SW′(K) for each basic class K. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasicClassTable {
    entries: BTreeMap<CohClass, BigInt>,
}

impl BasicClassTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or overwrites an entry; a zero value removes the class.
    pub fn insert(&mut self, k: CohClass, sw: BigInt) {
        if sw.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, sw);
        }
    }

    pub fn get(&self, k: &CohClass) -> Option<&BigInt> {
        self.entries.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CohClass, &BigInt)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_zero(&self) -> bool {
        self.entries.keys().any(|k| k.is_zero())
    }

    /// |B / {±1}|.
    pub fn count_mod_sign(&self) -> usize {
        self.entries
            .keys()
            .filter(|k| k.is_zero() || !self.entries.contains_key(&k.neg()) || **k > k.neg())
            .count()
    }
}

impl FromIterator<(CohClass, BigInt)> for BasicClassTable {
    fn from_iter<I: IntoIterator<Item = (CohClass, BigInt)>>(iter: I) -> Self {
        let mut t = BasicClassTable::new();
        for (k, v) in iter {
            t.insert(k, v);
        }
        t
    }
}

/// (c₁², χ_h, c) with c₁² = 2e + 3σ, χ_h = (e + σ)/4 and c = χ_h − c₁².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharNumbers {
    pub c1sq: i64,
    pub chi_h: i64,
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Standardness {
    pub standard: bool,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourManifold {
    name: String,
    euler: i64,
    signature: i64,
    lattice: IntersectionLattice,
    sw: BasicClassTable,
    w: Option<CohClass>,
}

impl FourManifold {
    /// Checks the structural invariants: lattice rank e − 2 and signature σ,
    /// integral χ_h, integral characteristic basic classes of the right
    /// length, and a characteristic `w` if one is supplied. The ± symmetry of
    /// the table is not enforced here; see [`FourManifold::sw_symmetry_check`].
    pub fn new(
        name: impl Into<String>,
        euler: i64,
        signature: i64,
        lattice: IntersectionLattice,
        sw: BasicClassTable,
        w: Option<CohClass>,
    ) -> Result<Self, ManifoldError> {
        let m = FourManifold {
            name: name.into(),
            euler,
            signature,
            lattice,
            sw,
            w,
        };
        let violations = m.structural_violations();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(ManifoldError::Invalid(violations))
        }
    }

    pub(crate) fn structural_violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let rank = self.lattice.rank() as i64;
        if rank != self.euler - 2 {
            v.push(Violation::new(
                "lattice",
                format!("rank {rank} differs from e - 2 = {}", self.euler - 2),
            ));
        }
        if self.lattice.signature() != self.signature {
            v.push(Violation::new(
                "signature",
                format!(
                    "lattice signature is {}, document says {}",
                    self.lattice.signature(),
                    self.signature
                ),
            ));
        }
        if (self.euler + self.signature).rem_euclid(4) != 0 {
            v.push(Violation::new(
                "euler",
                "e + σ is not divisible by 4 (χ_h not integral)",
            ));
        }
        for (idx, (k, _)) in self.sw.iter().enumerate() {
            let path = format!("basic_classes[{idx}].K");
            if k.len() != self.lattice.rank() {
                v.push(Violation::new(
                    path,
                    format!("length {} differs from rank {}", k.len(), rank),
                ));
            } else if !k.is_integral() {
                v.push(Violation::new(path, "not integral"));
            } else if !self.lattice.is_characteristic(k) {
                v.push(Violation::new(path, format!("{k} is not characteristic")));
            }
        }
        if let Some(w) = &self.w {
            if w.len() != self.lattice.rank() {
                v.push(Violation::new(
                    "w",
                    format!("length {} differs from rank {}", w.len(), rank),
                ));
            } else if !self.lattice.is_characteristic(w) {
                v.push(Violation::new("w", format!("{w} is not characteristic")));
            }
        }
        v
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }

    pub fn signature(&self) -> i64 {
        self.signature
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn basic_classes(&self) -> &BasicClassTable {
        &self.sw
    }

    /// The designated characteristic class, if the description carries one.
    pub fn designated_w(&self) -> Option<&CohClass> {
        self.w.as_ref()
    }

    /// The designated w, or the 0/1 lift of w₂(X).
    pub fn default_w(&self) -> CohClass {
        self.w.clone().unwrap_or_else(|| self.lattice.characteristic_vector())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn b_plus(&self) -> i64 {
        (self.euler + self.signature - 2) / 2
    }

    pub fn char_numbers(&self) -> Result<CharNumbers, ManifoldError> {
        let s = self.euler + self.signature;
        if s.rem_euclid(4) != 0 {
            return Err(ManifoldError::NonIntegralChiH(s));
        }
        let c1sq = 2 * self.euler + 3 * self.signature;
        let chi_h = s / 4;
        Ok(CharNumbers {
            c1sq,
            chi_h,
            c: chi_h - c1sq,
        })
    }

    /// b⁺ ≥ 3 and odd, with integral χ_h (b¹ = 0 is assumed throughout).
    pub fn is_standard(&self) -> Standardness {
        let mut reasons = Vec::new();
        let twice = self.euler + self.signature - 2;
        if twice.rem_euclid(2) != 0 {
            reasons.push("e + σ is odd".to_string());
        } else {
            let bp = twice / 2;
            if bp < 3 {
                reasons.push(format!("b+ = {bp} < 3"));
            }
            if bp.rem_euclid(2) == 0 {
                reasons.push(format!("b+ = {bp} is even"));
            }
        }
        if self.char_numbers().is_err() {
            reasons.push("χ_h is not an integer".to_string());
        }
        Standardness {
            standard: reasons.is_empty(),
            reasons,
        }
    }

    /// K² = c₁²(X) for every basic class.
    pub fn is_simple_type(&self) -> bool {
        let c1sq = 2 * self.euler + 3 * self.signature;
        self.sw.iter().all(|(k, _)| {
            self.lattice
                .square(k)
                .map(|sq| sq == crate::algebra::int(c1sq))
                .unwrap_or(false)
        })
    }

    /// SW′(−K) = (−1)^{χ_h}·SW′(K) for every K in the table.
    pub fn sw_symmetry_check(&self) -> bool {
        let Ok(cn) = self.char_numbers() else {
            return false;
        };
        self.sw.iter().all(|(k, v)| {
            let expected = if cn.chi_h.rem_euclid(2) == 0 { v.clone() } else { -v };
            self.sw.get(&k.neg()) == Some(&expected)
        })
    }

    /// The blow-up X # CP²‾: the lattice gains an orthogonal ⟨−1⟩ spanned by
    /// e*, each basic class K splits into K ± e* with the same SW′ value, and a
    /// designated w becomes w − e*.
    pub fn blow_up(&self) -> FourManifold {
        let (lattice, e) = self.lattice.blow_up();
        let mut sw = BasicClassTable::new();
        for (k, v) in self.sw.iter() {
            let k = k.extend(1);
            sw.insert(k.add(&e), v.clone());
            sw.insert(k.sub(&e), v.clone());
        }
        FourManifold {
            name: blown_up_name(&self.name),
            euler: self.euler + 1,
            signature: self.signature - 1,
            lattice,
            sw,
            w: self.w.as_ref().map(|w| w.extend(1).sub(&e)),
        }
    }

    pub fn blow_up_times(&self, r: usize) -> FourManifold {
        (0..r).fold(self.clone(), |m, _| m.blow_up())
    }

    /// The class e* added by the most recent blow-up, i.e. the last basis
    /// vector when the last summand is ⟨−1⟩.
    pub fn last_exceptional_class(&self) -> Option<CohClass> {
        let n = self.lattice.rank();
        let g = self.lattice.gram();
        (g[n - 1][n - 1] == -1 && (0..n - 1).all(|j| g[n - 1][j] == 0)).then(|| CohClass::basis(n, n - 1))
    }

    /// ⟨K,h⟩ as a linear polynomial in the PD coordinates of h.
    pub fn pairing_form(&self, k: &CohClass) -> crate::algebra::MultiPoly {
        let cov = self.lattice.covector(k).expect("class length checked at construction");
        crate::algebra::MultiPoly::linear_form(&cov)
    }

    /// ⟨K, h⟩^i.
    pub fn pairing_form_power(&self, k: &CohClass, i: u32) -> crate::algebra::MultiPoly {
        let cov = self.lattice.covector(k).expect("class length checked at construction");
        crate::algebra::MultiPoly::linear_form_power(&cov, i)
    }

    /// Q(h) as a quadratic polynomial in the PD coordinates of h.
    pub fn intersection_polynomial(&self) -> crate::algebra::MultiPoly {
        crate::algebra::MultiPoly::quadratic_form(&self.lattice.gram_rational())
    }

    /// Replaces the table (used to build synthetic test data).
    pub fn with_basic_classes(&self, sw: BasicClassTable) -> Result<FourManifold, ManifoldError> {
        FourManifold::new(
            self.name.clone(),
            self.euler,
            self.signature,
            self.lattice.clone(),
            sw,
            self.w.clone(),
        )
    }

    pub fn max_abs_sw(&self) -> BigInt {
        self.sw.iter().map(|(_, v)| v.abs()).max().unwrap_or_default()
    }
}

/// "X" → "X(1)", "X(3)" → "X(4)".
fn blown_up_name(name: &str) -> String {
    if let Some(stripped) = name.strip_suffix(')') {
        if let Some((base, count)) = stripped.rsplit_once('(') {
            if let Ok(r) = count.parse::<usize>() {
                return format!("{base}({})", r + 1);
            }
        }
    }
    format!("{name}(1)")
}
