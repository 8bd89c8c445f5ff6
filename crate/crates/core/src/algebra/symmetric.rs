//! Symmetric multilinear maps on ℚⁿ and the polarization isomorphism with
//! homogeneous polynomials.
//!
//! A degree-d symmetric map is stored by its values on sorted basis tuples
//! `i₁ ≤ … ≤ i_d`; every other tuple is a permutation of one of these. The
//! product is the symmetrization
//!
//! ```text
//! (M₁·M₂)(h₁,…,h_d) = 1/d! Σ_{σ ∈ S_d} M₁(h_σ(1),…,h_σ(d₁))·M₂(h_σ(d₁+1),…,h_σ(d))
//! ```
//!
//! and `polarize(M)(v) = M(v,…,v)` turns it into ordinary polynomial
//! multiplication.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::combinatorics::{binomial, multinomial};
use super::linalg::{is_symmetric, Matrix};
use super::poly::MultiPoly;
use super::{AlgebraError, Rational};

/// Sorted 0-based basis indices.
pub type IndexTuple = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMultilinear {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<IndexTuple, Rational>,
}

impl SymMultilinear {
    pub fn zero(dim: usize, degree: usize) -> Self {
        SymMultilinear {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: Rational) -> Self {
        let mut m = Self::zero(dim, 0);
        m.set(&[], c);
        m
    }

    /// A covector as a degree-1 map.
    pub fn from_covector(t: &[Rational]) -> Self {
        let mut m = Self::zero(t.len(), 1);
        for (i, a) in t.iter().enumerate() {
            m.set(&[i], a.clone());
        }
        m
    }

    /// A symmetric matrix as the bilinear map (u, v) ↦ uᵀ·g·v.
    pub fn from_symmetric_matrix(g: &Matrix) -> Result<Self, AlgebraError> {
        if !is_symmetric(g) {
            return Err(AlgebraError::NotSymmetric);
        }
        let mut m = Self::zero(g.len(), 2);
        for (i, row) in g.iter().enumerate() {
            for (j, a) in row.iter().enumerate().skip(i) {
                m.set(&[i, j], a.clone());
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&IndexTuple, &Rational)> {
        self.coeffs.iter()
    }

    /// Sets M(b_{i₁},…,b_{i_d}) for any ordering of the indices.
    pub fn set(&mut self, indices: &[usize], value: Rational) {
        assert_eq!(indices.len(), self.degree, "tuple length must equal degree");
        assert!(indices.iter().all(|&i| i < self.dim), "index out of range");
        let mut key = indices.to_vec();
        key.sort_unstable();
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    /// M(b_{i₁},…,b_{i_d}) for any ordering of the indices.
    pub fn value(&self, indices: &[usize]) -> Rational {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Full multilinear evaluation M(h₁,…,h_d) by expansion over all index
    /// tuples. Exponential in the degree; meant for small checks.
    pub fn evaluate(&self, vectors: &[Vec<Rational>]) -> Result<Rational, AlgebraError> {
        if vectors.len() != self.degree {
            return Err(AlgebraError::DegreeMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        if vectors.iter().any(|v| v.len() != self.dim) {
            return Err(AlgebraError::DimensionMismatch);
        }
        let mut acc = Rational::zero();
        let mut idx = vec![0usize; self.degree];
        loop {
            let mut term = self.value(&idx);
            if !term.is_zero() {
                for (v, &i) in vectors.iter().zip(&idx) {
                    term *= &v[i];
                }
                acc += term;
            }
            // odometer over dim^degree
            let mut pos = 0;
            loop {
                if pos == self.degree {
                    return Ok(acc);
                }
                idx[pos] += 1;
                if idx[pos] < self.dim {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn multiplicities(tuple: &[usize]) -> Vec<u64> {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for &i in tuple {
        *counts.entry(i).or_default() += 1;
    }
    counts.into_values().collect()
}

fn exponents_of(tuple: &[usize], dim: usize) -> Vec<u32> {
    let mut e = vec![0u32; dim];
    for &i in tuple {
        e[i] += 1;
    }
    e
}

fn tuple_of(exponents: &[u32]) -> IndexTuple {
    exponents
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
        .collect()
}

/// v ↦ M(v,…,v).
pub fn polarize(m: &SymMultilinear) -> MultiPoly {
    MultiPoly::from_terms(
        m.dim,
        m.coeffs.iter().map(|(t, c)| {
            let weight = Rational::from_integer(multinomial(&multiplicities(t)));
            (exponents_of(t, m.dim), c * weight)
        }),
    )
}

/// Inverse of [`polarize`] on homogeneous polynomials of degree `degree`.
pub fn depolarize(p: &MultiPoly, degree: usize) -> Result<SymMultilinear, AlgebraError> {
    if !p.is_homogeneous_of(degree as u32) {
        return Err(AlgebraError::NonHomogeneous);
    }
    let mut m = SymMultilinear::zero(p.nvars(), degree);
    for (e, c) in p.terms() {
        let t = tuple_of(e);
        let weight = Rational::from_integer(multinomial(&multiplicities(&t)));
        m.coeffs.insert(t, c / weight);
    }
    Ok(m)
}

/// All sorted tuples of length `degree` over `0..dim`.
fn sorted_tuples(dim: usize, degree: usize) -> Vec<IndexTuple> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(degree);
    fn rec(dim: usize, degree: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexTuple>) {
        if cur.len() == degree {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, degree, i, cur, out);
            cur.pop();
        }
    }
    rec(dim, degree, 0, &mut cur, &mut out);
    out
}

/// Symmetrized product. Each permutation only matters through which d₁
/// positions it sends to the first factor, so the 1/d! average collapses to an
/// average over the binom(d, d₁) position subsets.
pub fn sym_product(a: &SymMultilinear, b: &SymMultilinear) -> Result<SymMultilinear, AlgebraError> {
    if a.dim != b.dim {
        return Err(AlgebraError::DimensionMismatch);
    }
    let d1 = a.degree;
    let d = a.degree + b.degree;
    let mut out = SymMultilinear::zero(a.dim, d);
    if a.is_zero() || b.is_zero() {
        return Ok(out);
    }
    let norm = Rational::new(BigInt::one(), binomial(d as u64, d1 as u64));
    let subsets = position_subsets(d, d1);
    for t in sorted_tuples(a.dim, d) {
        let mut acc = Rational::zero();
        for s in &subsets {
            let (left, right): (Vec<usize>, Vec<usize>) = {
                let mut l = Vec::with_capacity(d1);
                let mut r = Vec::with_capacity(d - d1);
                for (pos, &i) in t.iter().enumerate() {
                    if s.contains(&pos) {
                        l.push(i);
                    } else {
                        r.push(i);
                    }
                }
                (l, r)
            };
            let x = a.value(&left);
            if x.is_zero() {
                continue;
            }
            let y = b.value(&right);
            if !y.is_zero() {
                acc += x * y;
            }
        }
        if !acc.is_zero() {
            out.coeffs.insert(t, acc * &norm);
        }
    }
    Ok(out)
}

/// ℓ-fold symmetrized power; the degree-0 unit for ℓ = 0.
pub fn sym_power(m: &SymMultilinear, ell: usize) -> SymMultilinear {
    let mut acc = SymMultilinear::scalar(m.dim, Rational::one());
    for _ in 0..ell {
        acc = sym_product(&acc, m).expect("dimensions agree");
    }
    acc
}

fn position_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn hyperbolic() -> SymMultilinear {
        SymMultilinear::from_symmetric_matrix(&vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap()
    }

    #[test]
    fn polarize_hyperbolic_pairing() {
        let p = polarize(&hyperbolic());
        assert_eq!(p.to_string(), "2*x1*x2");
    }

    #[test]
    fn polarize_scalar() {
        let p = polarize(&SymMultilinear::scalar(3, q(5)));
        assert_eq!(p, MultiPoly::constant(3, q(5)));
    }

    #[test]
    fn depolarize_square_and_cross_term() {
        let x = MultiPoly::var(2, 0);
        let m = depolarize(&x.pow(2), 2).unwrap();
        assert_eq!(m.value(&[0, 0]), q(1));
        assert_eq!(m.entries().count(), 1);

        let cross = (&x * &MultiPoly::var(2, 1)).scale(&q(2));
        let m = depolarize(&cross, 2).unwrap();
        assert_eq!(m.value(&[0, 1]), q(1));
        assert_eq!(m.value(&[1, 0]), q(1));
        assert_eq!(m, hyperbolic());
    }

    #[test]
    fn depolarize_rejects_mixed_degree() {
        let p = &MultiPoly::one(2) + &MultiPoly::var(2, 0);
        assert_eq!(depolarize(&p, 1), Err(AlgebraError::NonHomogeneous));
    }

    #[test]
    fn product_of_covectors_is_symmetrized_tensor() {
        let t = SymMultilinear::from_covector(&[q(1), q(2)]);
        let s = SymMultilinear::from_covector(&[q(3), q(-1)]);
        let ts = sym_product(&t, &s).unwrap();
        // ½(T⊗S + S⊗T) on basis pairs
        assert_eq!(ts.value(&[0, 0]), q(3));
        assert_eq!(ts.value(&[1, 1]), q(-2));
        assert_eq!(ts.value(&[0, 1]), Rational::new(5.into(), 2.into()));
    }

    #[test]
    fn unit_and_mismatch() {
        let h = hyperbolic();
        let one = SymMultilinear::scalar(2, q(1));
        assert_eq!(sym_product(&one, &h).unwrap(), h);
        let other = SymMultilinear::scalar(3, q(1));
        assert_eq!(sym_product(&other, &h), Err(AlgebraError::DimensionMismatch));
    }

    #[test]
    fn evaluate_agrees_with_polarization_on_diagonal() {
        let q2 = sym_power(&hyperbolic(), 2);
        let v = vec![q(2), q(3)];
        let direct = q2.evaluate(&vec![v.clone(); 4]).unwrap();
        assert_eq!(direct, polarize(&q2).eval(&v));
        assert_eq!(direct, q(144));
    }
}
