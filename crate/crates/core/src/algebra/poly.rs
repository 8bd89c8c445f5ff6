//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::combinatorics::factorial;
use super::linalg::Matrix;
use super::Rational;

/// Exponent vector `[e1, ..., en]` for `x1^e1 ... xn^en`.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

fn degree_of(m: &Monomial) -> u32 {
    m.iter().sum()
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate function x_{index+1}.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// x ↦ Σ a_i x_i.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    /// x ↦ xᵀ·g·x.
    pub fn quadratic_form(g: &Matrix) -> Self {
        let n = g.len();
        let mut p = Self::zero(n);
        for (i, row) in g.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, a.clone());
            }
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "monomial length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds c·x^e, dropping the entry if it cancels.
    pub fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(degree_of).max()
    }

    /// The common degree of all terms, if there is one. The zero polynomial
    /// is homogeneous of every degree and reports `None` here.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(degree_of);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| degree_of(e) == d)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// (Σ a_i x_i)^k by the multinomial theorem, touching only the variables
    /// with a_i ≠ 0.
    pub fn linear_form_power(coeffs: &[Rational], k: u32) -> Self {
        let n = coeffs.len();
        let support: Vec<usize> = (0..n).filter(|&i| !coeffs[i].is_zero()).collect();
        let mut p = Self::zero(n);
        if support.is_empty() {
            if k == 0 {
                p.add_term(vec![0; n], Rational::one());
            }
            return p;
        }
        let powers: Vec<Vec<Rational>> = support
            .iter()
            .map(|&i| {
                let mut v = vec![Rational::one()];
                for _ in 0..k {
                    let next = v.last().unwrap() * &coeffs[i];
                    v.push(next);
                }
                v
            })
            .collect();
        let fact: Vec<BigInt> = (0..=k as u64).map(factorial).collect();
        let mut exps = vec![0u32; support.len()];
        fn rec(
            pos: usize,
            left: u32,
            exps: &mut Vec<u32>,
            ctx: (&[usize], &[Vec<Rational>], &[BigInt], u32),
            out: &mut MultiPoly,
        ) {
            let (support, powers, fact, k) = ctx;
            if pos + 1 == support.len() {
                exps[pos] = left;
                let mut denom = BigInt::one();
                let mut c = Rational::one();
                let mut e = vec![0u32; out.nvars];
                for (j, &x) in exps.iter().enumerate() {
                    denom *= &fact[x as usize];
                    c *= &powers[j][x as usize];
                    e[support[j]] = x;
                }
                out.add_term(e, c * Rational::new(fact[k as usize].clone(), denom));
                return;
            }
            for x in 0..=left {
                exps[pos] = x;
                rec(pos + 1, left - x, exps, ctx, out);
            }
        }
        rec(0, k, &mut exps, (&support, &powers, &fact, k), &mut p);
        p
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Embeds into a ring with `extra` additional trailing variables.
    pub fn extend_vars(&self, extra: usize) -> Self {
        MultiPoly {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(self.nvars + extra, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Coefficient of x_var^power, as a polynomial in the remaining variables
    /// (the variable itself is kept but appears with exponent zero).
    pub fn coefficient_of_power(&self, var: usize, power: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == power {
                let mut e = e.clone();
                e[var] = 0;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Drops trailing variables that do not occur in any term.
    pub fn restrict_vars(&self, nvars: usize) -> Option<Self> {
        if self.terms.keys().any(|e| e[nvars..].iter().any(|&k| k > 0)) {
            return None;
        }
        Some(MultiPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e[..nvars].to_vec(), c.clone()))
                .collect(),
        })
    }

    /// If self = c·other for a rational c, returns c.
    pub fn ratio_to(&self, other: &MultiPoly) -> Option<Rational> {
        if self.nvars != other.nvars {
            return None;
        }
        if other.is_zero() {
            return self.is_zero().then(Rational::zero);
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (e0, b0) = other.terms.iter().next()?;
        let c = self.terms.get(e0)? / b0;
        let scaled = other.scale(&c);
        (scaled == *self).then_some(c)
    }

    /// Terms ordered by descending degree, then descending exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| degree_of(b.0).cmp(&degree_of(a.0)).then(b.0.cmp(a.0)));
        v
    }
}

/// Renders `x1^2*x3` style monomials (1-based variable names).
pub fn format_monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, k)
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono = format_monomial(e);
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial ring mismatch");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial ring mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}
