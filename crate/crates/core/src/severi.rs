//! Classes on a Severi-Brauer variety P → X of relative dimension r, stored
//! as polynomials in the fiber class h with pullback coefficients:
//! D = Σ_j π*(a_j) ∧ h^j. Integrality of D is componentwise integrality of
//! the a_j, by the projective-bundle decomposition of the cohomology of P.
//!
//! Only the operations the constructions need are provided: sums, scaling,
//! wedging with pullbacks, and powers of s·h + π*(base) of combined h-degree
//! at most r. The rewriting rule for h^(r+1) is deliberately absent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{binomial_u, factorial, falling, format_rational, is_prime, prime_power};
use crate::error::{input, internal, Error, Result};
use crate::obstruction::{build_zero_cycle_system, divisibility_obstruction, BrauerScenario};
use crate::ring::{hodge_basis, ExteriorClass, Locality, Monomial};
use crate::solver::{feasible_degree_generator, Verdict};

/// Σ_j π*(a_j) ∧ h^j with 0 ≤ j ≤ rel_dim; zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SeveriBrauerClass {
    g: usize,
    rel_dim: usize,
    coeffs: BTreeMap<usize, ExteriorClass>,
}

impl SeveriBrauerClass {
    pub fn zero(g: usize, rel_dim: usize) -> Self {
        SeveriBrauerClass { g, rel_dim, coeffs: BTreeMap::new() }
    }

    pub fn rel_dim(&self) -> usize {
        self.rel_dim
    }

    pub fn base_factors(&self) -> usize {
        self.g
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of h^j; zero class if absent.
    pub fn coefficient(&self, j: usize) -> ExteriorClass {
        self.coeffs.get(&j).cloned().unwrap_or_else(|| ExteriorClass::zero(self.g))
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &ExteriorClass)> {
        self.coeffs.iter().map(|(&j, a)| (j, a))
    }

    pub fn set_coefficient(&mut self, j: usize, a: ExteriorClass) -> Result<()> {
        if j > self.rel_dim {
            return input(format!("h-power {j} exceeds relative dimension {}", self.rel_dim));
        }
        if a.factors() != self.g {
            return input("coefficient lives in the wrong base ring");
        }
        if a.is_zero() {
            self.coeffs.remove(&j);
        } else {
            self.coeffs.insert(j, a);
        }
        Ok(())
    }

    fn add_to_coefficient(&mut self, j: usize, a: &ExteriorClass) -> Result<()> {
        let sum = self.coefficient(j).add(a)?;
        self.set_coefficient(j, sum)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.g != other.g || self.rel_dim != other.rel_dim {
            return input("mismatched Severi-Brauer classes");
        }
        let mut out = self.clone();
        for (j, a) in other.terms() {
            out.add_to_coefficient(j, a)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.g, self.rel_dim);
        }
        SeveriBrauerClass {
            g: self.g,
            rel_dim: self.rel_dim,
            coeffs: self.coeffs.iter().map(|(&j, a)| (j, a.scale(s))).collect(),
        }
    }

    /// Multiply by π*(c).
    pub fn mul_pullback(&self, c: &ExteriorClass) -> Result<Self> {
        let mut out = Self::zero(self.g, self.rel_dim);
        for (j, a) in self.terms() {
            out.add_to_coefficient(j, &a.wedge(c)?)?;
        }
        Ok(out)
    }

    /// Integrality is componentwise integrality of the pullback coefficients.
    pub fn is_integral(&self, locality: Locality) -> bool {
        self.coeffs.values().all(|a| a.is_integral(locality))
    }

    /// True when every term has total cohomological degree 2·rel_dim.
    pub fn is_pure_top(&self) -> bool {
        self.coeffs.iter().all(|(&j, a)| a.is_homogeneous(2 * (self.rel_dim - j)))
    }
}

impl std::fmt::Display for SeveriBrauerClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&j, a) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "pi*({a})")?;
            } else if a == &ExteriorClass::one(self.g) {
                write!(f, "h^{j}")?;
            } else {
                write!(f, "pi*({a})*h^{j}")?;
            }
        }
        Ok(())
    }
}

/// (s·h + π*(base))^k expanded by the binomial formula; base must have even
/// degree so the two summands commute.
pub fn linear_power(
    g: usize,
    rel_dim: usize,
    s: &BigRational,
    base: &ExteriorClass,
    k: u64,
) -> Result<SeveriBrauerClass> {
    if k as usize > rel_dim {
        return input(format!("h-degree {k} exceeds relative dimension {rel_dim}"));
    }
    if !base.is_zero() && !base.is_homogeneous(2) {
        return input("linear power base must be homogeneous of degree 2");
    }
    let mut out = SeveriBrauerClass::zero(g, rel_dim);
    let mut base_pow = ExteriorClass::one(g);
    // s^(k-i) walks down from s^k by division; recomputing the power per term
    // is quadratic in the bit length for the large degrees the vanishing
    // identities reach.
    let mut s_pow = s.pow(k as i32);
    for i in 0..=k {
        if base_pow.is_zero() {
            break;
        }
        let scalar = BigRational::from_integer(binomial_u(k, i)) * &s_pow;
        out.add_to_coefficient((k - i) as usize, &base_pow.scale(&scalar))?;
        if i < k {
            base_pow = base_pow.wedge(base)?;
            s_pow /= s;
        }
    }
    Ok(out)
}

/// The class h^e + Σ_{i=1..min(g-1,e)} C(e,i)/n^i · π*(b^i) ∧ h^(e-i), the
/// fibral-codimension-e class whose integrality the vanishing construction
/// guarantees at the right degrees. Stored with relative dimension e.
pub fn gamma_class(scenario: &BrauerScenario, e: u64) -> Result<SeveriBrauerClass> {
    if e == 0 {
        return input("gamma class needs e >= 1");
    }
    let g = scenario.g();
    let n = scenario.n();
    let rel_dim = e as usize;
    let mut out = SeveriBrauerClass::zero(g, rel_dim);
    let mut b_pow = ExteriorClass::one(g);
    let top = (g as u64 - 1).min(e);
    for i in 0..=top {
        if b_pow.is_zero() {
            break;
        }
        let scalar = BigRational::new(binomial_u(e, i), BigInt::from(n).pow(i as u32));
        out.add_to_coefficient((e - i) as usize, &b_pow.scale(&scalar))?;
        if i < top {
            b_pow = b_pow.wedge(scenario.b())?;
        }
    }
    Ok(out)
}

/// The fibral-degree-n^(g-2) class
/// Σ_i π*( n^(g-2-i) · r(r-1)...(r-i+1) · b^i / i! ) ∧ h^(r-i), summed to
/// g-1 or r depending on which is smaller.
pub fn delta_class(scenario: &BrauerScenario, rel_dim: usize) -> Result<SeveriBrauerClass> {
    if rel_dim == 0 {
        return input("delta class needs r >= 1");
    }
    let g = scenario.g();
    let n = BigInt::from(scenario.n());
    let r = BigInt::from(rel_dim);
    let mut out = SeveriBrauerClass::zero(g, rel_dim);
    let mut b_pow = ExteriorClass::one(g);
    let top = (g - 1).min(rel_dim);
    for i in 0..=top {
        if b_pow.is_zero() {
            break;
        }
        let n_part = if g >= 2 + i {
            BigRational::from_integer(n.pow((g - 2 - i) as u32))
        } else {
            BigRational::new(BigInt::one(), n.pow((i + 2 - g) as u32))
        };
        let scalar = n_part * BigRational::new(falling(&r, i as u64), factorial(i as u64));
        out.add_to_coefficient(rel_dim - i, &b_pow.scale(&scalar))?;
        if i < top {
            b_pow = b_pow.wedge(scenario.b())?;
        }
    }
    Ok(out)
}

/// Degree of the restriction to a fiber P^r: the scalar part of the h^r
/// coefficient. Positive-degree base classes die on a fiber. The class must
/// be pure of cohomological degree 2r.
pub fn fibral_degree(class: &SeveriBrauerClass) -> Result<BigRational> {
    if !class.is_pure_top() {
        return input("fibral degree needs a class pure of degree 2·rel_dim");
    }
    Ok(class.coefficient(class.rel_dim).coefficient(Monomial::ONE))
}

/// Round trip between witnesses and integral fibral-linear classes. A
/// Solvable verdict at degree e turns into the class
/// Σ_j π*(c_j)(h + π*B)^(e-j) with c_0 = 1, which must be integral; expanding
/// that class back in powers of h + π*B must reproduce the witness exactly.
/// An Obstructed verdict is passed through with no class.
pub fn integrality_and_witness_roundtrip(
    scenario: &BrauerScenario,
    e: u64,
    rel_dim: usize,
) -> Result<(Option<SeveriBrauerClass>, Verdict)> {
    if (rel_dim as u64) < e {
        return input("relative dimension must be at least e");
    }
    let verdict = divisibility_obstruction(scenario, e)?;
    let Verdict::Solvable { witness } = &verdict else {
        return Ok((None, verdict));
    };
    let g = scenario.g();
    let m = (e as usize).min(g);
    let corrections = witness_classes(scenario, witness, m)?;
    let b_field = scenario.b_field();
    let one = BigRational::one();

    let mut gamma = linear_power(g, rel_dim, &one, &b_field, e)?;
    for (j, c) in corrections.iter().enumerate() {
        let power = linear_power(g, rel_dim, &one, &b_field, e - (j as u64 + 1))?;
        gamma = gamma.add(&power.mul_pullback(c)?)?;
    }
    if !gamma.is_integral(scenario.locality()) {
        return internal("witness produced a non-integral fibral-linear class");
    }

    // Triangular recovery: the h^(e-j) coefficient of the remainder is c_j.
    let mut remainder = gamma.clone();
    for j in 0..=m as u64 {
        let c = remainder.coefficient((e - j) as usize);
        let expected =
            if j == 0 { ExteriorClass::one(g) } else { corrections[j as usize - 1].clone() };
        if c != expected {
            return internal("round trip failed to reproduce the witness");
        }
        if !c.is_zero() {
            let power = linear_power(g, rel_dim, &one, &b_field, e - j)?;
            remainder = remainder.sub(&power.mul_pullback(&c)?)?;
        }
    }
    if !remainder.is_zero() {
        return internal("round trip left a nonzero remainder");
    }
    Ok((Some(gamma), verdict))
}

/// Converts solver coordinates (ordered by degree block, then Hodge basis
/// position) into the correction classes c_1..c_m.
pub fn witness_classes(
    scenario: &BrauerScenario,
    witness: &[BigRational],
    m: usize,
) -> Result<Vec<ExteriorClass>> {
    let g = scenario.g();
    let mut out = Vec::with_capacity(m);
    let mut pos = 0usize;
    for j in 1..=m {
        let basis = hodge_basis(scenario.ring(), j)?;
        let mut c = ExteriorClass::zero(g);
        for elt in &basis.elements {
            if pos >= witness.len() {
                return input("witness is shorter than the system");
            }
            c = c.add(&elt.scale(&witness[pos]))?;
            pos += 1;
        }
        out.push(c);
    }
    if pos != witness.len() {
        return input("witness is longer than the system");
    }
    Ok(out)
}

/// Exact ring identity behind algebraicity of the period-power multiple:
/// n^e·γ = (n·h + π*b)^e − C(e,g)·π*(b^g) ∧ (n·h + π*b)^(e−g), where
/// n·h + π*b is the first Chern class of an honest line bundle. Both sides
/// carry the common constant factor n^(e-g); it is divided out before the
/// comparison so the coefficients stay polynomial in log e instead of
/// containing n^e itself.
pub fn algebraicity_identity(scenario: &BrauerScenario, e: u64) -> Result<()> {
    let g = scenario.g();
    if (e as usize) < g {
        return input("the algebraicity identity needs e >= g");
    }
    let n_to_g = BigRational::from_integer(BigInt::from(scenario.n()).pow(g as u32));
    let one = BigRational::one();
    let b_field = scenario.b_field();
    let lhs = gamma_class(scenario, e)?.scale(&n_to_g);
    let full = linear_power(g, e as usize, &one, &b_field, e)?.scale(&n_to_g);
    let tail = linear_power(g, e as usize, &one, &b_field, e - g as u64)?
        .mul_pullback(&scenario.b().pow(g as u64))?
        .scale(&BigRational::from_integer(binomial_u(e, g as u64)));
    let rhs = full.sub(&tail)?;
    if lhs != rhs {
        return internal("algebraicity identity failed");
    }
    Ok(())
}

/// Positive generator of the fibral degrees realized by integral classes of
/// top codimension on P; divides the index of the class.
pub fn hodge_index_wrt_p(scenario: &BrauerScenario, rel_dim: usize) -> Result<BigInt> {
    if scenario.locality() != Locality::Global {
        return input("the Hodge-theoretic index is a global notion");
    }
    index_wrt_p(scenario, rel_dim)
}

/// ℓ-local analog over the Tate classes.
pub fn tate_index_wrt_p(scenario: &BrauerScenario, rel_dim: usize, ell: u64) -> Result<BigInt> {
    if scenario.locality() != Locality::LocalAt(ell) {
        return input("scenario locality must match the requested prime");
    }
    index_wrt_p(scenario, rel_dim)
}

fn index_wrt_p(scenario: &BrauerScenario, rel_dim: usize) -> Result<BigInt> {
    if rel_dim == 0 {
        return input("relative dimension must be positive");
    }
    feasible_degree_generator(|e| build_zero_cycle_system(scenario, rel_dim as u64, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterexampleKind {
    IntegralHodge,
    IntegralTate { ell: u64, characteristic: u64 },
}

/// Everything a referee needs to re-verify the counterexample offline: the
/// class, its fibral degree, and the obstruction certificate.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub kind: CounterexampleKind,
    pub g: usize,
    pub t: usize,
    pub n: u64,
    pub rel_dim: usize,
    pub dim_p: usize,
    pub locality: Locality,
    pub delta: SeveriBrauerClass,
    pub fibral_degree: BigInt,
    pub obstructed_degree: u64,
    pub verdict: Verdict,
    pub index_exact: Option<BigInt>,
    pub conclusion: String,
}

fn counterexample_core(
    kind: CounterexampleKind,
    g: usize,
    n: u64,
    locality: Locality,
) -> Result<CounterexampleReport> {
    let t = g - 1;
    let scenario = BrauerScenario::standard(g, t, n, locality)?;
    let rel_dim_big = BigInt::from(n).pow(t as u32) - BigInt::one();
    let rel_dim = rel_dim_big
        .to_usize()
        .ok_or_else(|| Error::Input(format!("relative dimension {rel_dim_big} is too large")))?;
    let delta = delta_class(&scenario, rel_dim)?;
    if !delta.is_integral(locality) {
        return internal("delta class is not integral despite n dividing (g-1)!");
    }
    let fib = fibral_degree(&delta)?;
    let expected_fib = BigInt::from(n).pow(g as u32 - 2);
    if fib != BigRational::from_integer(expected_fib.clone()) {
        return internal(format!("fibral degree {} differs from n^(g-2)", format_rational(&fib)));
    }
    let obstructed_degree = expected_fib
        .to_u64()
        .ok_or_else(|| Error::Input("obstruction degree too large".into()))?;
    let verdict = divisibility_obstruction(&scenario, obstructed_degree)?;
    if verdict.is_solvable() {
        return internal("expected an obstruction at the fibral degree");
    }
    let index_exact = prime_power(n).map(|_| BigInt::from(n).pow(t as u32));
    let what = match kind {
        CounterexampleKind::IntegralHodge => "Hodge",
        CounterexampleKind::IntegralTate { .. } => "Tate",
    };
    let conclusion = format!(
        "delta is an integral {what} class of fibral degree {expected_fib} on a Severi-Brauer \
         variety of relative dimension {rel_dim} over a product of {g} elliptic curves, \
         the obstruction certificate rules out index dividing {obstructed_degree}, \
         so delta is not algebraic: the integral {what} conjecture fails in codimension {rel_dim}."
    );
    Ok(CounterexampleReport {
        kind,
        g,
        t,
        n,
        rel_dim,
        dim_p: g + rel_dim,
        locality,
        delta,
        fibral_degree: expected_fib,
        obstructed_degree,
        verdict,
        index_exact,
        conclusion,
    })
}

/// Non-algebraic integral Hodge class on a Severi-Brauer variety of relative
/// dimension n^(g-1) - 1. Needs n | (g-1)! (so delta is integral) and
/// n ∤ (g-2)! (so the obstruction fires at n^(g-2)).
pub fn ihc_counterexample(g: usize, n: u64) -> Result<CounterexampleReport> {
    if g < 3 {
        return input("the construction needs g >= 3");
    }
    if n == 0 {
        return input("n must be positive");
    }
    let fac_g1 = factorial(g as u64 - 1);
    let fac_g2 = factorial(g as u64 - 2);
    if !fac_g1.is_multiple_of(&BigInt::from(n)) {
        return input(format!("{n} does not divide (g-1)! = {fac_g1}"));
    }
    if fac_g2.is_multiple_of(&BigInt::from(n)) {
        return input(format!("{n} divides (g-2)! = {fac_g2}"));
    }
    counterexample_core(CounterexampleKind::IntegralHodge, g, n, Locality::Global)
}

/// ℓ-local analog: a non-algebraic integral Tate class on a Severi-Brauer
/// variety of dimension ℓ^ℓ + ℓ in characteristic p ≠ ℓ. The characteristic
/// enters only through the distinctness requirement.
pub fn itc_counterexample(ell: u64, characteristic: u64) -> Result<CounterexampleReport> {
    if !is_prime(ell) {
        return input(format!("{ell} is not prime"));
    }
    if !is_prime(characteristic) {
        return input(format!("characteristic {characteristic} is not prime"));
    }
    if ell == characteristic {
        return input("the locality prime must differ from the characteristic");
    }
    let g = ell as usize + 1;
    let report = counterexample_core(
        CounterexampleKind::IntegralTate { ell, characteristic },
        g,
        ell,
        Locality::LocalAt(ell),
    )?;
    let expected_dim = BigInt::from(ell).pow(ell as u32) + BigInt::from(ell);
    if BigInt::from(report.dim_p) != expected_dim {
        return internal("total dimension does not equal ell^ell + ell");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{standard_class, ProductRing};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn std_scenario(g: usize, t: usize, n: u64) -> BrauerScenario {
        BrauerScenario::standard(g, t, n, Locality::Global).unwrap()
    }

    #[test]
    fn gamma_class_examples() {
        // g=3, b standard, n=2, e=8: h^8 + 4b h^7 + 7b^2 h^6.
        let sc = std_scenario(3, 2, 2);
        let gamma = gamma_class(&sc, 8).unwrap();
        assert_eq!(gamma.coefficient(8), ExteriorClass::one(3));
        assert_eq!(gamma.coefficient(7), sc.b().scale(&q(4, 1)));
        assert_eq!(gamma.coefficient(6), sc.b().pow(2).scale(&q(7, 1)));
        assert!(gamma.coefficient(5).is_zero());
        assert!(gamma.is_integral(Locality::Global));

        // e=1, n=1: h + pi*(b).
        let ring = ProductRing::new(3, Locality::Global).unwrap();
        let b = standard_class(&ring, 2).unwrap();
        let sc1 = BrauerScenario::new(ring, b.clone(), 1).unwrap();
        let gamma = gamma_class(&sc1, 1).unwrap();
        assert_eq!(gamma.coefficient(1), ExteriorClass::one(3));
        assert_eq!(gamma.coefficient(0), b);

        // b=0: plain h^e.
        let ring = ProductRing::new(3, Locality::Global).unwrap();
        let sc0 = BrauerScenario::new(ring, ExteriorClass::zero(3), 2).unwrap();
        let gamma = gamma_class(&sc0, 5).unwrap();
        assert_eq!(gamma.coefficient(5), ExteriorClass::one(3));
        assert_eq!(gamma.terms().count(), 1);
    }

    #[test]
    fn delta_class_examples() {
        // g=3, b standard, n=2, r=3: 2h^3 + 3b h^2 + 3w' h.
        let sc = std_scenario(3, 2, 2);
        let delta = delta_class(&sc, 3).unwrap();
        assert_eq!(delta.coefficient(3), ExteriorClass::one(3).scale(&q(2, 1)));
        assert_eq!(delta.coefficient(2), sc.b().scale(&q(3, 1)));
        assert_eq!(delta.coefficient(1), sc.b().pow(2).scale(&q(3, 2)));
        assert!(delta.is_integral(Locality::Global));
        assert_eq!(fibral_degree(&delta).unwrap(), q(2, 1));

        // r=1 < g: 2h + pi*(b).
        let delta = delta_class(&sc, 1).unwrap();
        assert_eq!(delta.coefficient(1), ExteriorClass::one(3).scale(&q(2, 1)));
        assert_eq!(delta.coefficient(0), sc.b().clone());

        // b=0, r >= g: n^(g-2)·h^r.
        let ring = ProductRing::new(3, Locality::Global).unwrap();
        let sc0 = BrauerScenario::new(ring, ExteriorClass::zero(3), 3).unwrap();
        let delta = delta_class(&sc0, 4).unwrap();
        assert_eq!(delta.coefficient(4), ExteriorClass::one(3).scale(&q(3, 1)));
        assert_eq!(delta.terms().count(), 1);
    }

    #[test]
    fn fibral_degree_validation() {
        let sc = std_scenario(3, 2, 2);
        // No h^r term: degree zero.
        let ring = sc.ring();
        let w1 = hodge_basis(ring, 1).unwrap().elements[0].clone();
        let mut class = SeveriBrauerClass::zero(3, 2);
        class.set_coefficient(1, w1).unwrap();
        assert_eq!(fibral_degree(&class).unwrap(), q(0, 1));
        // Impure class is rejected.
        let mut impure = SeveriBrauerClass::zero(3, 2);
        impure.set_coefficient(2, ExteriorClass::one(3)).unwrap();
        impure.set_coefficient(1, ExteriorClass::one(3)).unwrap();
        assert!(fibral_degree(&impure).is_err());
        // Gamma restricts to the fibers with leading coefficient one.
        let gamma = gamma_class(&sc, 4).unwrap();
        assert_eq!(fibral_degree(&gamma).unwrap(), q(1, 1));
    }

    #[test]
    fn roundtrip_solvable_and_obstructed() {
        let sc = std_scenario(3, 2, 2);
        let (gamma, verdict) = integrality_and_witness_roundtrip(&sc, 4, 4).unwrap();
        assert!(verdict.is_solvable());
        let gamma = gamma.unwrap();
        assert!(gamma.is_integral(Locality::Global));
        // Zero witness: gamma = (h + pi*B)^4.
        assert_eq!(gamma.coefficient(3), sc.b().scale(&q(2, 1)));

        let (gamma, verdict) = integrality_and_witness_roundtrip(&sc, 2, 5).unwrap();
        assert!(gamma.is_none());
        assert!(!verdict.is_solvable());

        // Period 1: (h + pi*b)^e is always integral.
        let ring = ProductRing::new(3, Locality::Global).unwrap();
        let b = standard_class(&ring, 2).unwrap();
        let sc1 = BrauerScenario::new(ring, b, 1).unwrap();
        let (gamma, verdict) = integrality_and_witness_roundtrip(&sc1, 3, 3).unwrap();
        assert!(verdict.is_solvable());
        assert!(gamma.unwrap().is_integral(Locality::Global));

        assert!(integrality_and_witness_roundtrip(&sc, 4, 3).is_err());
    }

    #[test]
    fn algebraicity_identity_examples() {
        let sc = std_scenario(3, 2, 2);
        algebraicity_identity(&sc, 8).unwrap();
        // b = 0 reduces to n^e h^e = (n h)^e.
        let ring = ProductRing::new(3, Locality::Global).unwrap();
        let sc0 = BrauerScenario::new(ring, ExteriorClass::zero(3), 2).unwrap();
        algebraicity_identity(&sc0, 4).unwrap();
        // e below the dimension is rejected.
        assert!(algebraicity_identity(&sc, 2).is_err());
    }

    #[test]
    fn hodge_index_examples() {
        let sc = std_scenario(3, 2, 2);
        assert_eq!(hodge_index_wrt_p(&sc, 3).unwrap(), BigInt::from(2));
        let ring = ProductRing::new(3, Locality::Global).unwrap();
        let sc0 = BrauerScenario::new(ring, ExteriorClass::zero(3), 2).unwrap();
        assert_eq!(hodge_index_wrt_p(&sc0, 3).unwrap(), BigInt::one());
        // Locality mismatches are input errors.
        let sc_l = BrauerScenario::standard(3, 2, 2, Locality::LocalAt(2)).unwrap();
        assert!(hodge_index_wrt_p(&sc_l, 3).is_err());
        assert!(tate_index_wrt_p(&sc_l, 3, 3).is_err());
        assert_eq!(tate_index_wrt_p(&sc_l, 3, 2).unwrap(), BigInt::from(2));
    }

    #[test]
    fn ihc_parameters_and_validation() {
        let report = ihc_counterexample(3, 2).unwrap();
        assert_eq!(report.rel_dim, 3);
        assert_eq!(report.fibral_degree, BigInt::from(2));
        assert_eq!(report.obstructed_degree, 2);
        assert_eq!(report.index_exact, Some(BigInt::from(4)));
        assert!(!report.verdict.is_solvable());

        // 3 does not divide (3-1)! = 2.
        let err = ihc_counterexample(3, 3).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        assert!(err.to_string().contains("does not divide"));

        // 2 divides (4-2)! = 2.
        assert!(ihc_counterexample(4, 2).is_err());
    }

    #[test]
    fn itc_parameters() {
        let report = itc_counterexample(2, 7).unwrap();
        assert_eq!((report.g, report.n, report.rel_dim, report.dim_p), (3, 2, 3, 6));
        assert!(itc_counterexample(2, 2).is_err());
        assert!(itc_counterexample(4, 3).is_err());
    }
}
