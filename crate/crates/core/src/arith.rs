//! Exact integer and rational helpers shared across the crate.
//!
//! Everything here is arbitrary precision; no floating point is used anywhere
//! in the library.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{input, Result};

/// n choose k as a big integer; zero when k > n or either argument is negative.
pub fn binomial(n: &BigInt, k: &BigInt) -> BigInt {
    if k.is_negative() || n.is_negative() || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(n.clone(), k.clone())
}

pub fn binomial_u(n: u64, k: u64) -> BigInt {
    binomial(&BigInt::from(n), &BigInt::from(k))
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Falling factorial r (r-1) ... (r-k+1).
pub fn falling(r: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= r - BigInt::from(i);
    }
    acc
}

pub fn big_pow(base: u64, exp: u64) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_int(x: &BigInt, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero is undefined");
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = x.abs();
    loop {
        let (q, r) = cur.div_rem(&p);
        if r.is_zero() {
            v += 1;
            cur = q;
        } else {
            return v;
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation_rat(x: &BigRational, p: u64) -> i64 {
    valuation_int(x.numer(), p) - valuation_int(x.denom(), p)
}

/// A rational lies in the local ring at `ell` iff its reduced denominator is
/// prime to `ell`.
pub fn is_ell_integral(x: &BigRational, ell: u64) -> bool {
    x.is_zero() || !(x.denom() % BigInt::from(ell)).is_zero()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in ascending order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Some((p, k)) with n = p^k when n >= 2 is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let fs = prime_factors(n);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0];
    let mut k = 0u32;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / a.gcd(&b) * b
}

/// Renders a reduced rational as "n" or "n/d" with a positive denominator.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses "n" or "n/d" into a reduced rational. The denominator must be nonzero.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| crate::error::Error::Input(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| crate::error::Error::Input(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return input(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial_u(4, 2), BigInt::from(6));
        assert_eq!(binomial_u(3, 5), BigInt::zero());
        assert_eq!(binomial_u(7, 0), BigInt::one());
    }

    #[test]
    fn valuations() {
        let x = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(valuation_rat(&x, 2), -1);
        assert_eq!(valuation_rat(&x, 3), 0);
        assert!(is_ell_integral(&x, 3));
        assert!(!is_ell_integral(&x, 2));
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(5), Some((5, 1)));
    }

    #[test]
    fn rational_strings_round_trip() {
        let x = parse_rational("-3/6").unwrap();
        assert_eq!(format_rational(&x), "-1/2");
        assert_eq!(format_rational(&parse_rational("4").unwrap()), "4");
        assert!(parse_rational("1/0").is_err());
    }
}
