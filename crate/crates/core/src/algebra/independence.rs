//! Algebraic independence of a family of linear forms together with one
//! quadratic form.
//!
//! Linearly independent covectors T₁,…,T_k and a quadratic form Q that is
//! nonzero somewhere on ∩ Ker T_i are algebraically independent. The test
//! here is constructive: it either produces a kernel vector v with Q(v) ≠ 0
//! or the reason no such vector exists.

use num_traits::{One, Zero};
use serde::Serialize;

use super::linalg::{self, bilinear, dot, IncrementalRank, Matrix};
use super::{AlgebraError, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormFamily {
    dim: usize,
    forms: Vec<Vec<Rational>>,
    quadratic: Matrix,
}

impl LinearFormFamily {
    pub fn new(dim: usize, forms: Vec<Vec<Rational>>, quadratic: Matrix) -> Result<Self, AlgebraError> {
        if forms.iter().any(|t| t.len() != dim) || quadratic.len() != dim {
            return Err(AlgebraError::DimensionMismatch);
        }
        if !linalg::is_symmetric(&quadratic) {
            return Err(AlgebraError::NotSymmetric);
        }
        Ok(LinearFormFamily { dim, forms, quadratic })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[Vec<Rational>] {
        &self.forms
    }

    pub fn quadratic(&self) -> &Matrix {
        &self.quadratic
    }

    fn quadratic_value(&self, v: &[Rational]) -> Rational {
        bilinear(&self.quadratic, v, v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndependenceCertificate {
    /// v ∈ ∩ Ker T_i with Q(v) ≠ 0.
    KernelWitness {
        #[serde(serialize_with = "super::serde_rationals")]
        vector: Vec<Rational>,
        #[serde(serialize_with = "super::serde_rational")]
        value: Rational,
    },
    /// Σ c_i T_i = 0 with some c_i ≠ 0.
    LinearDependency {
        #[serde(serialize_with = "super::serde_rationals")]
        coefficients: Vec<Rational>,
    },
    /// Q vanishes identically on the common kernel.
    QuadraticVanishesOnKernel {
        kernel_dimension: usize,
    },
    InvalidDegreeBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub independent: bool,
    pub certificate: IndependenceCertificate,
}

/// Decides the hypotheses of the independence criterion and returns an
/// explicit certificate either way. `degree_bound` must be at least 1.
pub fn algebraically_independent(fam: &LinearFormFamily, degree_bound: u32) -> IndependenceReport {
    if degree_bound == 0 {
        return IndependenceReport {
            independent: false,
            certificate: IndependenceCertificate::InvalidDegreeBound,
        };
    }
    if let Some(coefficients) = linalg::row_dependency(&fam.forms, fam.dim) {
        return IndependenceReport {
            independent: false,
            certificate: IndependenceCertificate::LinearDependency { coefficients },
        };
    }
    match kernel_witness(fam) {
        Ok(vector) => {
            let value = fam.quadratic_value(&vector);
            IndependenceReport {
                independent: true,
                certificate: IndependenceCertificate::KernelWitness { vector, value },
            }
        }
        Err(kernel_dimension) => IndependenceReport {
            independent: false,
            certificate: IndependenceCertificate::QuadraticVanishesOnKernel { kernel_dimension },
        },
    }
}

/// A kernel vector with Q(v) ≠ 0, or the kernel dimension when Q vanishes there.
fn kernel_witness(fam: &LinearFormFamily) -> Result<Vec<Rational>, usize> {
    let basis = if fam.forms.is_empty() {
        linalg::identity(fam.dim)
    } else {
        linalg::nullspace(&fam.forms, fam.dim)
    };
    for b in &basis {
        if !fam.quadratic_value(b).is_zero() {
            return Ok(b.clone());
        }
    }
    // Q(b_i) = 0 for every basis vector, so Q(b_i + b_j) = 2·Q(b_i, b_j).
    for (i, bi) in basis.iter().enumerate() {
        for bj in &basis[i + 1..] {
            if !bilinear(&fam.quadratic, bi, bj).is_zero() {
                return Ok(bi.iter().zip(bj).map(|(x, y)| x + y).collect());
            }
        }
    }
    Err(basis.len())
}

/// Default ceiling on the number of monomials examined.
pub const DEFAULT_MONOMIAL_CAP: usize = 4000;

/// Exponents (i₁,…,i_k, j) of T₁^{i₁}⋯T_k^{i_k}·Q^j with Σ i + 2j ≤ budget.
pub fn family_monomials(forms: usize, budget: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; forms + 1];
    fn rec(pos: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let last = cur.len() - 1;
        if pos == last {
            for j in 0..=remaining / 2 {
                cur[last] = j;
                out.push(cur.clone());
            }
            cur[last] = 0;
            return;
        }
        for i in 0..=remaining {
            cur[pos] = i;
            rec(pos + 1, remaining - i, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, budget, &mut cur, &mut out);
    out
}

pub fn monomial_family_independent(fam: &LinearFormFamily, exponent_budget: u32) -> Result<bool, AlgebraError> {
    monomial_family_independent_with_cap(fam, exponent_budget, DEFAULT_MONOMIAL_CAP)
}

/// Linear independence of the functions T^α·Q^j (weighted degree ≤ budget),
/// decided by exact rank of their values on the integer grid {1,…,budget+1}
/// laid over a sample subspace. A polynomial of degree ≤ budget vanishing on
/// that whole grid is zero, so the rank test is exact.
///
/// When the family meets the independence criterion, the sample subspace is
/// spanned by a dual basis d_i (T_i(d_j) = δ_ij) and a kernel witness; the
/// monomials are already independent there. Otherwise the grid covers the
/// full space.
pub fn monomial_family_independent_with_cap(
    fam: &LinearFormFamily,
    exponent_budget: u32,
    cap: usize,
) -> Result<bool, AlgebraError> {
    let monomials = family_monomials(fam.forms.len(), exponent_budget);
    if monomials.len() > cap {
        return Err(AlgebraError::BudgetTooLarge {
            count: monomials.len(),
            cap,
        });
    }
    let sample_basis = sample_subspace(fam);
    let side = exponent_budget as u64 + 1;
    let points = side
        .checked_pow(sample_basis.len() as u32)
        .filter(|&p| p <= (cap as u64) * 64)
        .ok_or(AlgebraError::BudgetTooLarge {
            count: monomials.len(),
            cap,
        })?;

    let mut tracker = IncrementalRank::new();
    let mut coords = vec![1u64; sample_basis.len()];
    for _ in 0..points {
        let mut h = vec![Rational::zero(); fam.dim];
        for (y, b) in coords.iter().zip(&sample_basis) {
            let y = Rational::from_integer((*y).into());
            for (hx, bx) in h.iter_mut().zip(b) {
                *hx += &y * bx;
            }
        }
        let t_vals: Vec<Rational> = fam.forms.iter().map(|t| dot(t, &h)).collect();
        let q_val = fam.quadratic_value(&h);
        let row: Vec<Rational> = monomials
            .iter()
            .map(|e| {
                let mut v = Rational::one();
                for (x, &k) in t_vals.iter().zip(e) {
                    v *= num_traits::pow(x.clone(), k as usize);
                }
                v * num_traits::pow(q_val.clone(), e[fam.forms.len()] as usize)
            })
            .collect();
        tracker.insert(row);
        if tracker.rank() == monomials.len() {
            return Ok(true);
        }
        // advance the grid odometer
        for c in coords.iter_mut() {
            *c += 1;
            if *c <= side {
                break;
            }
            *c = 1;
        }
    }
    Ok(false)
}

fn sample_subspace(fam: &LinearFormFamily) -> Vec<Vec<Rational>> {
    let report = algebraically_independent(fam, 1);
    let IndependenceCertificate::KernelWitness { vector, .. } = report.certificate else {
        return linalg::identity(fam.dim);
    };
    let k = fam.forms.len();
    let mut basis = Vec::with_capacity(k + 1);
    for j in 0..k {
        let mut rhs = vec![Rational::zero(); k];
        rhs[j] = Rational::one();
        let d = linalg::solve(&fam.forms, fam.dim, &rhs).expect("independent forms have a dual basis");
        basis.push(d);
    }
    basis.push(vector);
    basis
}
