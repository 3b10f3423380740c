//! Big-integer arithmetic for the conditional period-index exponent: the
//! C_r-field bound, the surface-pullback constants, and the combined cycle
//! exponent. Everything is exact; the ceiling of N + log2(d·C) is read off
//! bit lengths.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, is_prime, prime_factors};
use crate::error::{input, Result};

/// Splitting bound over a C_r field: p^(r-1) - 1 for p the relevant prime.
pub fn matzri_exponent(r: u32, p: u64) -> Result<BigInt> {
    if r < 1 {
        return input("field dimension r must be at least 1");
    }
    if !is_prime(p) {
        return input(format!("{p} is not prime"));
    }
    Ok(BigInt::from(p).pow(r - 1) - 1)
}

/// Constants from pulling a class back through a correspondence with a
/// surface: C = (Π degrees)! bounds the Galois closure degree and
/// N = Σ degrees the number of conjugates.
pub fn surface_bound(degrees: &[u64]) -> Result<(BigInt, u64)> {
    if degrees.is_empty() {
        return input("degrees must be nonempty");
    }
    if degrees.iter().any(|&d| d == 0) {
        return input("degrees must be positive");
    }
    let mut product: u64 = 1;
    for &d in degrees {
        product = product
            .checked_mul(d)
            .ok_or_else(|| crate::error::Error::Input("degree product overflows".into()))?;
    }
    let n: u64 = degrees.iter().sum();
    Ok((factorial(product), n))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UpperBoundInputs {
    /// Dimension of the variety, at least 2.
    pub dim: usize,
    /// Order of the degree-2 torsion subgroup.
    pub h2_torsion: u64,
    /// Order of the degree-3 torsion subgroup.
    pub h3_torsion: u64,
    /// lcm of the denominators of the correspondence cycle coefficients.
    pub denominator_lcm: u64,
    /// Nonzero degrees of the cycle components over the variety.
    pub degrees: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct UpperBoundReport {
    pub inputs: UpperBoundInputs,
    /// m = denominator_lcm · h2_torsion · h3_torsion.
    pub multiplier: u64,
    /// Largest prime factor of m (1 when m = 1).
    pub max_prime: u64,
    /// d = m^(p^(dim-1) - 1), the splitting degree for classes of period
    /// dividing m; 1 when m = 1.
    pub splitting_degree: BigInt,
    pub galois_bound: BigInt,
    pub conjugate_count: u64,
    /// ceil(N + log2(d·C)).
    pub exponent: u64,
}

/// ceil(log2 x) for x >= 1: exact exponent on powers of two, bit length
/// otherwise.
fn ceil_log2(x: &BigInt) -> u64 {
    debug_assert!(x > &BigInt::zero());
    let bits = x.bits();
    let is_pow2 = (x & (x - 1u32)).is_zero();
    if is_pow2 {
        bits - 1
    } else {
        bits
    }
}

/// The conditional exponent: index divides period^e for
/// e = ceil(N + log2(d·C)).
pub fn cycle_exponent(inputs: &UpperBoundInputs) -> Result<UpperBoundReport> {
    if inputs.dim < 2 {
        return input("dimension must be at least 2");
    }
    if inputs.h2_torsion == 0 || inputs.h3_torsion == 0 || inputs.denominator_lcm == 0 {
        return input("torsion orders and the denominator lcm must be positive");
    }
    let multiplier = inputs
        .denominator_lcm
        .checked_mul(inputs.h2_torsion)
        .and_then(|m| m.checked_mul(inputs.h3_torsion))
        .ok_or_else(|| crate::error::Error::Input("multiplier overflows".into()))?;
    let (max_prime, splitting_degree) = if multiplier == 1 {
        (1, BigInt::one())
    } else {
        let p = *prime_factors(multiplier).last().unwrap();
        let exp = matzri_exponent(inputs.dim as u32, p)?;
        let exp = exp
            .to_u32()
            .ok_or_else(|| crate::error::Error::Input("splitting exponent overflows".into()))?;
        (p, BigInt::from(multiplier).pow(exp))
    };
    let (galois_bound, conjugate_count) = surface_bound(&inputs.degrees)?;
    let dc = &splitting_degree * &galois_bound;
    let exponent = conjugate_count + ceil_log2(&dc);
    Ok(UpperBoundReport {
        inputs: inputs.clone(),
        multiplier,
        max_prime,
        splitting_degree,
        galois_bound,
        conjugate_count,
        exponent,
    })
}

/// One exponent valid for every primary part: the maximum.
pub fn combine_prime_exponents(per_prime: &[(u64, BigInt)]) -> Result<BigInt> {
    if per_prime.is_empty() {
        return input("no primary parts given");
    }
    Ok(per_prime.iter().map(|(_, e)| e.clone()).max().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(dim: usize, lcm: u64, h2: u64, h3: u64, degrees: &[u64]) -> UpperBoundInputs {
        UpperBoundInputs {
            dim,
            h2_torsion: h2,
            h3_torsion: h3,
            denominator_lcm: lcm,
            degrees: degrees.to_vec(),
        }
    }

    #[test]
    fn matzri_values() {
        assert_eq!(matzri_exponent(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(matzri_exponent(1, 7).unwrap(), BigInt::zero());
        assert_eq!(matzri_exponent(4, 3).unwrap(), BigInt::from(26));
        assert!(matzri_exponent(3, 4).is_err());
    }

    #[test]
    fn surface_bounds() {
        assert_eq!(surface_bound(&[1]).unwrap(), (BigInt::one(), 1));
        assert_eq!(surface_bound(&[2, 3]).unwrap(), (BigInt::from(720), 5));
        assert_eq!(surface_bound(&[2, 2]).unwrap(), (BigInt::from(24), 4));
        assert!(surface_bound(&[]).is_err());
    }

    #[test]
    fn cycle_exponent_walkthrough() {
        // All trivial: m=1, d=1, C=1, N=1 gives e = 1.
        let r = cycle_exponent(&inputs(3, 1, 1, 1, &[1])).unwrap();
        assert_eq!(r.exponent, 1);

        // m=2, d=2^3=8, C=2, N=2: ceil(2 + log2(16)) = 6.
        let r = cycle_exponent(&inputs(3, 2, 1, 1, &[2])).unwrap();
        assert_eq!(r.multiplier, 2);
        assert_eq!(r.splitting_degree, BigInt::from(8));
        assert_eq!(r.exponent, 6);

        // dim=2 with trivial multipliers: e = k + ceil(log2 k!).
        for k in 1..=8u64 {
            let r = cycle_exponent(&inputs(2, 1, 1, 1, &[k])).unwrap();
            assert_eq!(r.exponent, k + ceil_log2(&factorial(k)));
        }
    }

    #[test]
    fn ceil_log2_matches_float_oracle_at_small_sizes() {
        for x in 1u64..=4096 {
            let exact = ceil_log2(&BigInt::from(x));
            let float = (x as f64).log2().ceil() as u64;
            assert_eq!(exact, float, "x = {x}");
        }
    }

    #[test]
    fn cycle_exponent_is_monotone() {
        // The torsion orders and the denominator lcm grow in divisibility
        // order (they are group orders and lcms); the dimension and the degree
        // multiset grow by extension.
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let base = inputs(
                rng.gen_range(2..=4),
                rng.gen_range(1..=3),
                rng.gen_range(1..=3),
                rng.gen_range(1..=3),
                &[rng.gen_range(1..=3), rng.gen_range(1..=3)],
            );
            let e0 = cycle_exponent(&base).unwrap().exponent;
            let mut bigger = base.clone();
            match rng.gen_range(0..5) {
                0 => bigger.dim += 1,
                1 => bigger.h2_torsion *= rng.gen_range(2..=3),
                2 => bigger.h3_torsion *= rng.gen_range(2..=3),
                3 => bigger.denominator_lcm *= rng.gen_range(2..=3),
                _ => bigger.degrees.push(rng.gen_range(1..=3)),
            }
            let e1 = cycle_exponent(&bigger).unwrap().exponent;
            assert!(e1 >= e0, "{base:?} -> {bigger:?}");
        }
    }

    #[test]
    fn combined_exponent_is_max() {
        let parts = vec![(2u64, BigInt::from(3)), (3, BigInt::from(5))];
        assert_eq!(combine_prime_exponents(&parts).unwrap(), BigInt::from(5));
        assert_eq!(
            combine_prime_exponents(&[(7, BigInt::from(4))]).unwrap(),
            BigInt::from(4)
        );
        assert!(combine_prime_exponents(&[]).is_err());
    }
}
