//! Unimodular intersection lattices and cohomology class arithmetic.
//!
//! Homology classes are carried by their Poincaré-dual coordinates, so both
//! ⟨K, h⟩ and Q(h) are values of the one pairing [`IntersectionLattice::pair`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gram matrix must be square and non-empty")]
    NotSquare,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix has determinant {0}, expected ±1")]
    NotUnimodular(BigInt),
    #[error("cannot parse lattice name {0:?}")]
    Parse(String),
    #[error("class is not characteristic")]
    NotCharacteristic,
    #[error("no rational class satisfies the constraints")]
    Infeasible,
}

/// A cohomology class in lattice coordinates. Coordinates are rational so that
/// solved-for test vectors fit in the same type; basic classes and
/// characteristic vectors are checked to be integral where that matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohClass {
    coords: Vec<Rational>,
}

impl CohClass {
    pub fn new(coords: Vec<Rational>) -> Self {
        CohClass { coords }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        CohClass {
            coords: v.iter().map(|&x| int(x)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        CohClass {
            coords: vec![Rational::zero(); rank],
        }
    }

    /// The i-th basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.coords[i] = Rational::one();
        c
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|x| x.is_integer())
    }

    /// Integer coordinates, if integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CohClass {
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &CohClass) -> Self {
        CohClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CohClass) -> Self {
        CohClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CohClass {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    /// Appends `extra` zero coordinates.
    pub fn extend(&self, extra: usize) -> Self {
        let mut coords = self.coords.clone();
        coords.resize(self.coords.len() + extra, Rational::zero());
        CohClass { coords }
    }

    pub fn mod2(&self) -> Option<Mod2Class> {
        let ints = self.to_integers()?;
        Some(Mod2Class {
            bits: ints.iter().map(|x| x.is_odd()).collect(),
        })
    }
}

impl Serialize for CohClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::algebra::serde_rationals(&self.coords, s)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A class in H²(X; ℤ/2) in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Mod2Class {
    bits: Vec<bool>,
}

impl Mod2Class {
    pub fn new(bits: Vec<bool>) -> Self {
        Mod2Class { bits }
    }

    pub fn zero(rank: usize) -> Self {
        Mod2Class {
            bits: vec![false; rank],
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn add(&self, other: &Mod2Class) -> Mod2Class {
        Mod2Class {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// The 0/1 integral lift.
    pub fn lift(&self) -> CohClass {
        CohClass::from_ints(&self.bits.iter().map(|&b| b as i64).collect::<Vec<_>>())
    }
}

/// H²(X; ℤ) with its cup-product pairing.
///
/// Equality compares the gram matrix and the descriptor; basis labels are
/// cosmetic.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
    descriptor: Option<String>,
    b_plus: usize,
    b_minus: usize,
}

impl IntersectionLattice {
    /// Validates symmetry and unimodularity.
    pub fn from_gram(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let labels = (1..=gram.len()).map(|i| format!("b{i}")).collect();
        Self::with_labels(gram, labels, None)
    }

    fn with_labels(gram: Vec<Vec<i64>>, labels: Vec<String>, descriptor: Option<String>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        if (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(LatticeError::NotSymmetric);
        }
        let mut det = BigInt::one();
        let mut b_plus = 0;
        let mut b_minus = 0;
        for comp in components(&gram) {
            let block: Vec<Vec<i64>> = comp
                .iter()
                .map(|&i| comp.iter().map(|&j| gram[i][j]).collect())
                .collect();
            let big: Vec<Vec<BigInt>> = block
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            det *= linalg::integer_determinant(&big);
            let rat: Matrix = block.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let (d, _) = linalg::diagonalize_symmetric(&rat);
            let (p, m) = linalg::inertia(&d);
            b_plus += p;
            b_minus += m;
        }
        if det.abs() != BigInt::one() {
            return Err(LatticeError::NotUnimodular(det));
        }
        Ok(IntersectionLattice {
            gram,
            labels,
            descriptor,
            b_plus,
            b_minus,
        })
    }

    /// Parses orthogonal sums of the standard forms: `diag(p,q)` (p⟨+1⟩⊕q⟨−1⟩),
    /// `<1>`, `<-1>`, `H` (hyperbolic) and `E8` (negative definite), each with
    /// an optional multiplicity, e.g. `2E8+3H` or `diag(1,1) + 2*H`.
    pub fn named(descriptor: &str) -> Result<Self, LatticeError> {
        let err = || LatticeError::Parse(descriptor.to_string());
        let mut blocks: Vec<(Vec<Vec<i64>>, Vec<String>)> = Vec::new();
        let mut counters = std::collections::BTreeMap::<&str, usize>::new();
        let cleaned: String = descriptor.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(err());
        }
        for part in split_summands(&cleaned) {
            let (mult, body) = split_multiplicity(part).ok_or_else(err)?;
            for _ in 0..mult {
                let (block, kind): (Vec<Vec<i64>>, &str) = match body {
                    "H" => (vec![vec![0, 1], vec![1, 0]], "H"),
                    "E8" => (e8_negative(), "E8"),
                    "<1>" | "<+1>" => (vec![vec![1]], "+"),
                    "<-1>" => (vec![vec![-1]], "-"),
                    _ => {
                        let (p, q) = parse_diag(body).ok_or_else(err)?;
                        for _ in 0..p {
                            let k = counters.entry("+").or_default();
                            *k += 1;
                            blocks.push((vec![vec![1]], vec![format!("p{k}")]));
                        }
                        for _ in 0..q {
                            let k = counters.entry("-").or_default();
                            *k += 1;
                            blocks.push((vec![vec![-1]], vec![format!("n{k}")]));
                        }
                        continue;
                    }
                };
                let k = counters.entry(kind).or_default();
                *k += 1;
                let labels = match kind {
                    "+" => vec![format!("p{k}")],
                    "-" => vec![format!("n{k}")],
                    "H" => vec![format!("H{k}.a"), format!("H{k}.b")],
                    _ => (1..=8).map(|i| format!("E8_{k}.{i}")).collect(),
                };
                blocks.push((block, labels));
            }
        }
        let n: usize = blocks.iter().map(|(b, _)| b.len()).sum();
        if n == 0 {
            return Err(err());
        }
        let mut gram = vec![vec![0i64; n]; n];
        let mut labels = Vec::with_capacity(n);
        let mut off = 0;
        for (b, l) in blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    gram[off + i][off + j] = x;
                }
            }
            off += b.len();
            labels.extend(l);
        }
        Self::with_labels(gram, labels, Some(descriptor.to_string()))
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The string the lattice was parsed from, if it came from [`Self::named`].
    pub fn descriptor(&self) -> Option<&str> {
        self.descriptor.as_deref()
    }

    pub fn b_plus(&self) -> usize {
        self.b_plus
    }

    pub fn b_minus(&self) -> usize {
        self.b_minus
    }

    pub fn signature(&self) -> i64 {
        self.b_plus as i64 - self.b_minus as i64
    }

    /// Even lattices have x² ≡ 0 mod 2 for every x.
    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn gram_rational(&self) -> Matrix {
        self.gram.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn check_len(&self, c: &CohClass) -> Result<(), LatticeError> {
        if c.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: c.len(),
            });
        }
        Ok(())
    }

    /// aᵀ·G·b.
    pub fn pair(&self, a: &CohClass, b: &CohClass) -> Result<Rational, LatticeError> {
        self.check_len(a)?;
        self.check_len(b)?;
        let mut acc = Rational::zero();
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && !y.is_zero() {
                    acc += x * y * int(g);
                }
            }
        }
        Ok(acc)
    }

    pub fn square(&self, a: &CohClass) -> Result<Rational, LatticeError> {
        self.pair(a, a)
    }

    /// Coefficients of the linear function ĥ ↦ pair(a, ĥ).
    pub fn covector(&self, a: &CohClass) -> Result<Vec<Rational>, LatticeError> {
        self.check_len(a)?;
        let n = self.rank();
        Ok((0..n)
            .map(|j| {
                a.coords
                    .iter()
                    .enumerate()
                    .filter(|(i, x)| self.gram[*i][j] != 0 && !x.is_zero())
                    .fold(Rational::zero(), |acc, (i, x)| acc + x * int(self.gram[i][j]))
            })
            .collect())
    }

    /// w·b_i ≡ b_i² (mod 2) for every basis vector.
    pub fn is_characteristic(&self, w: &CohClass) -> bool {
        if w.len() != self.rank() {
            return false;
        }
        let Some(ints) = w.to_integers() else {
            return false;
        };
        (0..self.rank()).all(|i| {
            let dot: BigInt = ints.iter().enumerate().map(|(j, x)| x * self.gram[i][j]).sum();
            (dot - self.gram[i][i]).is_even()
        })
    }

    /// Van der Blij: w² ≡ σ (mod 8) for characteristic w.
    pub fn characteristic_defect_check(&self, w: &CohClass) -> Result<bool, LatticeError> {
        if !self.is_characteristic(w) {
            return Err(LatticeError::NotCharacteristic);
        }
        let sq = self.square(w)?.to_integer();
        Ok((sq - self.signature()).mod_floor(&BigInt::from(8)).is_zero())
    }

    /// w₂ as the mod-2 solution of G·w ≡ diag(G).
    pub fn w2(&self) -> Mod2Class {
        let n = self.rank();
        let mut rows: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                let mut r: Vec<bool> = self.gram[i].iter().map(|x| x.rem_euclid(2) == 1).collect();
                r.push(self.gram[i][i].rem_euclid(2) == 1);
                r
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| rows[i][c]) else {
                continue;
            };
            rows.swap(r, p);
            for i in 0..n {
                if i != r && rows[i][c] {
                    let src = rows[r].clone();
                    for (x, y) in rows[i].iter_mut().zip(src) {
                        *x ^= y;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let mut bits = vec![false; n];
        for (row, &c) in rows.iter().zip(&pivot_cols) {
            bits[c] = row[n];
        }
        Mod2Class { bits }
    }

    /// The 0/1 lift of w₂, a characteristic vector.
    pub fn characteristic_vector(&self) -> CohClass {
        self.w2().lift()
    }

    /// Orthogonal sum with ⟨−1⟩; returns the new lattice and the exceptional
    /// class e*.
    pub fn blow_up(&self) -> (IntersectionLattice, CohClass) {
        let n = self.rank();
        let mut gram: Vec<Vec<i64>> = self
            .gram
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(0);
                r
            })
            .collect();
        let mut last = vec![0; n + 1];
        last[n] = -1;
        gram.push(last);
        let k = self
            .labels
            .iter()
            .filter(|l| l.starts_with('e') && l[1..].parse::<usize>().is_ok())
            .count();
        let mut labels = self.labels.clone();
        labels.push(format!("e{}", k + 1));
        let descriptor = self.descriptor.as_ref().map(|d| format!("{d}+<-1>"));
        let lattice = IntersectionLattice {
            gram,
            labels,
            descriptor,
            b_plus: self.b_plus,
            b_minus: self.b_minus + 1,
        };
        (lattice, CohClass::basis(n + 1, n))
    }

    /// Some rational h with pair(c_i, h) = v_i for every constraint.
    pub fn find_dual_basis_vector(&self, constraints: &[(CohClass, Rational)]) -> Result<CohClass, LatticeError> {
        let mut rows = Vec::with_capacity(constraints.len());
        let mut rhs = Vec::with_capacity(constraints.len());
        for (c, v) in constraints {
            rows.push(self.covector(c)?);
            rhs.push(v.clone());
        }
        if rows.is_empty() {
            return Ok(CohClass::zero(self.rank()));
        }
        linalg::solve(&rows, self.rank(), &rhs)
            .map(CohClass::new)
            .ok_or(LatticeError::Infeasible)
    }

    /// Some h with pair(c_i, h) = 0 for every c_i and Q(h) > 0.
    pub fn find_positive_in_kernel(&self, classes: &[CohClass]) -> Result<CohClass, LatticeError> {
        let rows = classes
            .iter()
            .map(|c| self.covector(c))
            .collect::<Result<Vec<_>, _>>()?;
        let basis = if rows.is_empty() {
            linalg::identity(self.rank())
        } else {
            linalg::nullspace(&rows, self.rank())
        };
        let g = self.gram_rational();
        let restricted: Matrix = basis
            .iter()
            .map(|u| basis.iter().map(|v| linalg::bilinear(&g, u, v)).collect())
            .collect();
        let (diag, change) = linalg::diagonalize_symmetric(&restricted);
        let i = diag
            .iter()
            .position(|d| d.is_positive())
            .ok_or(LatticeError::Infeasible)?;
        let mut h = vec![Rational::zero(); self.rank()];
        for (coef, b) in change[i].iter().zip(&basis) {
            for (hx, bx) in h.iter_mut().zip(b) {
                *hx += coef * bx;
            }
        }
        Ok(CohClass::new(h))
    }
}

impl PartialEq for IntersectionLattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram && self.descriptor == other.descriptor
    }
}

impl Eq for IntersectionLattice {}

/// Index sets of the blocks of an orthogonal decomposition read off the
/// nonzero pattern of the gram matrix.
fn components(gram: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = gram.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let mut comp = Vec::new();
        while let Some(i) = stack.pop() {
            comp.push(i);
            for j in 0..n {
                if !seen[j] && gram[i][j] != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn split_summands(s: &str) -> Vec<&str> {
    // split on '+' outside parentheses and angle brackets
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '<' => depth += 1,
            ')' | '>' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn split_multiplicity(part: &str) -> Option<(usize, &str)> {
    let digits = part.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return (!part.is_empty()).then_some((1, part));
    }
    // "E8" starts with a letter, so leading digits are always a multiplicity
    let mult: usize = part[..digits].parse().ok()?;
    let rest = part[digits..].strip_prefix('*').unwrap_or(&part[digits..]);
    (!rest.is_empty()).then_some((mult, rest))
}

fn parse_diag(body: &str) -> Option<(usize, usize)> {
    let inner = body.strip_prefix("diag(")?.strip_suffix(')')?;
    let (p, q) = inner.split_once(',')?;
    Some((p.parse().ok()?, q.parse().ok()?))
}

/// Negative definite E8: minus the Cartan matrix of the E8 Dynkin diagram
/// (chain 1–7, node 8 attached to node 5).
fn e8_negative() -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

/// Small integer conversions used by callers that know values are bounded.
pub fn to_i64(r: &Rational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}
