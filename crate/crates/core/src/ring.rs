//! Sparse exact arithmetic in the integral cohomology ring of a product of
//! elliptic curves, modeled as the exterior algebra on generators
//! x_1, y_1, ..., x_g, y_g over the rationals.
//!
//! The generators are totally ordered x_1 < y_1 < x_2 < y_2 < ... < x_g < y_g;
//! this fixes every Koszul sign. Monomials are bitmasks over the 2g generators
//! and classes are sparse maps from monomials to nonzero rational coefficients.
//!
//! The monomial basis is declared to be the integral lattice: for a product of
//! elliptic curves the Kunneth decomposition is torsion-free and the products
//! of the chosen symplectic bases form a Z-basis of integral cohomology, so
//! integrality of a class means integrality of its monomial coefficients.
//! Similarly, the lattice of integral (1,1)-classes is spanned by the classes
//! w_i = x_i ∧ y_i, and the degree-2j Hodge classes are rationally spanned by
//! the products w_{i_1} ... w_{i_j}; we take the Z-span of those products as
//! the integral Hodge lattice in degree 2j (it is saturated, because distinct
//! monomials with unit coefficients span a direct summand).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::is_ell_integral;
use crate::error::{input, Result};

/// Integrality mode: over the integers, or over the local ring at a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Locality {
    Global,
    LocalAt(u64),
}

impl Locality {
    pub fn is_integral(&self, x: &BigRational) -> bool {
        match self {
            Locality::Global => x.is_integer(),
            Locality::LocalAt(ell) => is_ell_integral(x, *ell),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Locality::LocalAt(ell) = self {
            if !crate::arith::is_prime(*ell) {
                return input(format!("locality prime {ell} is not prime"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locality::Global => write!(f, "global"),
            Locality::LocalAt(ell) => write!(f, "local at {ell}"),
        }
    }
}

/// The ambient ring: `g` elliptic curve factors and an integrality mode.
/// Total rank is 2^(2g) and the degree-d graded piece has rank C(2g, d).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductRing {
    g: usize,
    locality: Locality,
}

impl ProductRing {
    pub const MAX_FACTORS: usize = 31;

    pub fn new(g: usize, locality: Locality) -> Result<Self> {
        if g == 0 || g > Self::MAX_FACTORS {
            return input(format!(
                "number of factors must be in 1..={}, got {g}",
                Self::MAX_FACTORS
            ));
        }
        locality.validate()?;
        Ok(ProductRing { g, locality })
    }

    pub fn factors(&self) -> usize {
        self.g
    }

    pub fn generators(&self) -> usize {
        2 * self.g
    }

    pub fn locality(&self) -> Locality {
        self.locality
    }

    /// Generator index of x_i (1-based factor).
    pub fn x(&self, i: usize) -> usize {
        2 * (i - 1)
    }

    /// Generator index of y_i (1-based factor).
    pub fn y(&self, i: usize) -> usize {
        2 * (i - 1) + 1
    }
}

/// A square-free monomial in the generators, as a bitmask. Bit k set means
/// generator k occurs; the generator sequence is always read in ascending
/// order, so a mask determines the monomial with no sign ambiguity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i >= 64 {
                return input(format!("generator index {i} out of range"));
            }
            let bit = 1u64 << i;
            if mask & bit != 0 {
                return input(format!("repeated generator index {i} in monomial"));
            }
            mask |= bit;
        }
        Ok(Monomial(mask))
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut m = self.0;
        while m != 0 {
            out.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        out
    }

    pub fn fits(&self, ring_generators: usize) -> bool {
        ring_generators >= 64 || self.0 < (1u64 << ring_generators)
    }

    /// Generator name in the canonical order: even indices are x's, odd are y's.
    pub fn generator_name(index: usize) -> String {
        let factor = index / 2 + 1;
        if index % 2 == 0 {
            format!("x{factor}")
        } else {
            format!("y{factor}")
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.indices().into_iter().map(Self::generator_name).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "{}", self.generator_names().join("^"))
    }
}

/// Koszul sign of e_A ∧ e_B for disjoint masks: parity of the number of pairs
/// (a, b) with a in A, b in B and a > b.
fn merge_sign(a: u64, b: u64) -> i32 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A sparse, possibly inhomogeneous element of the exterior algebra with exact
/// rational coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorClass {
    g: usize,
    terms: BTreeMap<u64, BigRational>,
}

impl ExteriorClass {
    pub fn zero(g: usize) -> Self {
        ExteriorClass { g, terms: BTreeMap::new() }
    }

    pub fn one(g: usize) -> Self {
        Self::monomial(g, Monomial::ONE, BigRational::one())
    }

    pub fn monomial(g: usize, m: Monomial, coeff: BigRational) -> Self {
        debug_assert!(m.fits(2 * g), "monomial uses generators beyond the ring");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m.0, coeff);
        }
        ExteriorClass { g, terms }
    }

    pub fn generator(g: usize, index: usize) -> Result<Self> {
        if index >= 2 * g {
            return input(format!("generator index {index} out of range for g={g}"));
        }
        Ok(Self::monomial(g, Monomial(1 << index), BigRational::one()))
    }

    pub fn factors(&self) -> usize {
        self.g
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigRational)> {
        self.terms.iter().map(|(&m, c)| (Monomial(m), c))
    }

    /// Exact coefficient of a monomial, zero if absent.
    pub fn coefficient(&self, m: Monomial) -> BigRational {
        self.terms.get(&m.0).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert_add(&mut self, mask: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mask) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.g != other.g {
            return input(format!("mismatched rings: g={} vs g={}", self.g, other.g));
        }
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.insert_add(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigRational::from_integer(BigInt::from(-1))))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.g);
        }
        ExteriorClass {
            g: self.g,
            terms: self.terms.iter().map(|(&m, c)| (m, c * s)).collect(),
        }
    }

    pub fn scale_int(&self, s: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(s.clone()))
    }

    /// Graded-anticommutative product. The sign on each pair of monomials is
    /// the parity of inversions when merging their index sequences.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.g != other.g {
            return input(format!("mismatched rings: g={} vs g={}", self.g, other.g));
        }
        let mut out = Self::zero(self.g);
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let mut coeff = ca * cb;
                if merge_sign(ma, mb) < 0 {
                    coeff = -coeff;
                }
                out.insert_add(ma | mb, coeff);
            }
        }
        Ok(out)
    }

    /// k-fold wedge power; the zeroth power is 1.
    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::one(self.g);
        for _ in 0..k {
            if acc.is_zero() {
                return acc;
            }
            acc = acc.wedge(self).expect("same ring");
        }
        acc
    }

    /// True when every stored monomial has the given degree (the zero class is
    /// homogeneous in every degree).
    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.keys().all(|m| m.count_ones() as usize == degree)
    }

    pub fn homogeneous_component(&self, degree: usize) -> Self {
        ExteriorClass {
            g: self.g,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() as usize == degree)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    /// Degrees of the nonzero homogeneous components, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| m.count_ones() as usize).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Integrality with respect to the declared monomial lattice: globally all
    /// coefficients must be integers, locally at a prime their valuations must
    /// be non-negative.
    pub fn is_integral(&self, locality: Locality) -> bool {
        self.terms.values().all(|c| locality.is_integral(c))
    }
}

impl fmt::Display for ExteriorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if m.0 == 0 {
                write!(f, "{}", crate::arith::format_rational(c))?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", crate::arith::format_rational(c))?;
            }
        }
        Ok(())
    }
}

/// All masks over `bits` generators with exactly `ones` bits set, ascending.
pub fn masks_of_weight(bits: usize, ones: usize) -> Vec<u64> {
    assert!(bits < 64);
    if ones > bits {
        return Vec::new();
    }
    if ones == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let limit = 1u64 << bits;
    // Gosper's hack walks the masks in increasing numeric order.
    let mut m = (1u64 << ones) - 1;
    while m < limit {
        out.push(m);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

/// The degree-2j Hodge basis: all C(g, j) products w_{i_1} ... w_{i_j} with
/// i_1 < ... < i_j, where w_i = x_i ∧ y_i. Each product is a single monomial
/// with coefficient +1, so the basis spans a saturated sublattice.
#[derive(Debug, Clone)]
pub struct HodgeBasis {
    pub degree: usize,
    pub elements: Vec<ExteriorClass>,
}

pub fn hodge_basis(ring: &ProductRing, j: usize) -> Result<HodgeBasis> {
    let g = ring.factors();
    if j > g {
        return input(format!("Hodge degree {j} out of range for g={g}"));
    }
    let elements = masks_of_weight(g, j)
        .into_iter()
        .map(|factor_mask| {
            // Spread each factor bit i into the generator pair {x_i, y_i}.
            let mut gen_mask = 0u64;
            let mut m = factor_mask;
            while m != 0 {
                let i = m.trailing_zeros() as u64;
                gen_mask |= 0b11 << (2 * i);
                m &= m - 1;
            }
            ExteriorClass::monomial(g, Monomial(gen_mask), BigRational::one())
        })
        .collect();
    Ok(HodgeBasis { degree: j, elements })
}

/// The class sum_{i=1..t} x_i ∧ y_{i+1}; needs t < g so that y_{t+1} exists.
pub fn standard_class(ring: &ProductRing, t: usize) -> Result<ExteriorClass> {
    let g = ring.factors();
    if t == 0 || t >= g {
        return input(format!("standard class needs 1 <= t <= g-1, got t={t}, g={g}"));
    }
    let mut b = ExteriorClass::zero(g);
    for i in 1..=t {
        let m = Monomial::from_indices(&[ring.x(i), ring.y(i + 1)])?;
        b = b.add(&ExteriorClass::monomial(g, m, BigRational::one()))?;
    }
    Ok(b)
}

/// A relabeling of the ring: permute the elliptic curve factors and optionally
/// swap x_i with y_i inside a factor. This induces a ring automorphism that
/// scrambles every Koszul sign while preserving the integral lattice and the
/// Hodge spans, which is exactly what sign-convention independence tests need.
pub fn relabel(
    class: &ExteriorClass,
    factor_perm: &[usize],
    swap_xy: &[bool],
) -> Result<ExteriorClass> {
    let g = class.factors();
    if factor_perm.len() != g || swap_xy.len() != g {
        return input("relabeling data must cover every factor");
    }
    let mut seen = vec![false; g];
    for &p in factor_perm {
        if p >= g || seen[p] {
            return input("factor relabeling is not a permutation");
        }
        seen[p] = true;
    }
    // Generator-level image: x_i -> x_{perm(i)} or y_{perm(i)}.
    let image: Vec<usize> = (0..2 * g)
        .map(|idx| {
            let factor = idx / 2;
            let is_y = idx % 2 == 1;
            let target = factor_perm[factor];
            let flipped = is_y != swap_xy[factor];
            2 * target + usize::from(flipped)
        })
        .collect();
    let mut out = ExteriorClass::zero(g);
    for (m, c) in class.terms() {
        let src = m.indices();
        let mut dst: Vec<usize> = src.iter().map(|&i| image[i]).collect();
        // Sign of sorting the image sequence back into canonical order.
        let mut sign = 1i32;
        for i in 1..dst.len() {
            let mut k = i;
            while k > 0 && dst[k - 1] > dst[k] {
                dst.swap(k - 1, k);
                sign = -sign;
                k -= 1;
            }
        }
        let mut coeff = c.clone();
        if sign < 0 {
            coeff = -coeff;
        }
        out.insert_add(Monomial::from_indices(&dst)?.0, coeff);
    }
    Ok(out)
}
