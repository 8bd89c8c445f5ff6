//! Exact factorials, binomials and friends.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// d! / (m_1! ... m_r!) for multiplicities summing to d.
pub fn multinomial(multiplicities: &[u64]) -> BigInt {
    let total: u64 = multiplicities.iter().sum();
    let mut acc = factorial(total);
    for &m in multiplicities {
        acc /= factorial(m);
    }
    acc
}

/// (2k-1)!! = 1·3·5···(2k-1); the empty product for k = 0.
pub fn odd_double_factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * (2 * j - 1))
}

/// 2^e for any signed exponent, as an exact rational.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// (-1)^e.
pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(multinomial(&[1, 1]), BigInt::from(2));
        assert_eq!(multinomial(&[2, 1, 1]), BigInt::from(12));
        assert_eq!(odd_double_factorial(3), BigInt::from(15));
        assert_eq!(pow2(-3), Rational::new(BigInt::one(), BigInt::from(8)));
        assert_eq!(sign_pow(-3), -1);
    }

    #[test]
    fn binomial_matches_factorial_ratio() {
        for n in 0..20u64 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), factorial(n) / (factorial(k) * factorial(n - k)));
            }
        }
    }
}
