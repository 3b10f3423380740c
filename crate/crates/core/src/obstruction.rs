//! Divisibility obstructions for topologically trivial Brauer classes.
//!
//! A scenario presents a Brauer class as exp(b/n) for an integral degree-2
//! class b and a period n. If the index of the class divides e, then rational
//! Hodge classes c_1, ..., c_m (m = min(e, g)) must exist making every
//!
//! ```text
//! p_i = C(e,i)·B^i + Σ_{j=1..i} C(e-j, i-j)·B^{i-j} ∧ c_j,   B = b/n,
//! ```
//!
//! integral. Whether such c_j exist is a rational affine lattice problem over
//! the Hodge coordinates, built here and decided by the solver with a witness
//! or an integer certificate. The zero-cycle variant replaces the binomials by
//! their analogs in the relative dimension r of a Severi-Brauer variety and
//! scales the leading term by the sought fibral degree e; its feasible degrees
//! form a subgroup of Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{binomial_u, factorial, prime_power};
use crate::congruence::{decide_congruence, CongruenceSystem};
use crate::error::{input, internal, Error, Result};
use crate::ring::{
    hodge_basis, masks_of_weight, standard_class, ExteriorClass, Locality, Monomial, ProductRing,
};
use crate::solver::{decide, verify_verdict, ObstructionSystem, SystemLabels, Verdict};

/// A topologically trivial Brauer class presented by an integral B-field of
/// degree n. The period is taken as presented; no attempt is made to detect
/// whether exp(b/n) has smaller order.
#[derive(Debug, Clone)]
pub struct BrauerScenario {
    ring: ProductRing,
    b: ExteriorClass,
    n: u64,
}

impl BrauerScenario {
    pub fn new(ring: ProductRing, b: ExteriorClass, n: u64) -> Result<Self> {
        if n == 0 {
            return input("period must be positive");
        }
        if b.factors() != ring.factors() {
            return input("B-field does not live in the scenario ring");
        }
        if !b.is_zero() && !b.is_homogeneous(2) {
            return input("B-field must be homogeneous of degree 2");
        }
        if !b.is_integral(ring.locality()) {
            return input("B-field must be integral under the scenario locality");
        }
        if let Locality::LocalAt(ell) = ring.locality() {
            let mut m = n;
            while m % ell == 0 {
                m /= ell;
            }
            if m != 1 {
                return input(format!("period {n} is not a power of the locality prime {ell}"));
            }
        }
        Ok(BrauerScenario { ring, b, n })
    }

    /// The class sum_{i=1..t} x_i ∧ y_{i+1} with the given period.
    pub fn standard(g: usize, t: usize, n: u64, locality: Locality) -> Result<Self> {
        let ring = ProductRing::new(g, locality)?;
        let b = standard_class(&ring, t)?;
        Self::new(ring, b, n)
    }

    pub fn ring(&self) -> &ProductRing {
        &self.ring
    }

    pub fn b(&self) -> &ExteriorClass {
        &self.b
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn locality(&self) -> Locality {
        self.ring.locality()
    }

    pub fn g(&self) -> usize {
        self.ring.factors()
    }

    /// b/n.
    pub fn b_field(&self) -> ExteriorClass {
        self.b.scale(&BigRational::new(BigInt::one(), BigInt::from(self.n)))
    }

    /// Same class and period under a different integrality mode.
    pub fn with_locality(&self, locality: Locality) -> Result<Self> {
        let ring = ProductRing::new(self.g(), locality)?;
        Self::new(ring, self.b.clone(), self.n)
    }
}

fn check_correction_degrees(c: &[ExteriorClass], g: usize, upto: usize) -> Result<()> {
    if c.len() < upto {
        return input(format!("expected at least {upto} correction classes, got {}", c.len()));
    }
    for (idx, cj) in c.iter().enumerate().take(upto) {
        if cj.factors() != g {
            return input("correction class lives in the wrong ring");
        }
        if !cj.is_homogeneous(2 * (idx + 1)) {
            return input(format!("correction class {} is not homogeneous of degree {}", idx + 1, 2 * (idx + 1)));
        }
    }
    Ok(())
}

/// C(e,i)·B^i + Σ_j C(e-j, i-j)·B^{i-j} ∧ c_j; weighted homogeneous of degree
/// 2i when c_j has degree 2j.
pub fn subspace_polynomial(
    scenario: &BrauerScenario,
    e: u64,
    i: usize,
    c: &[ExteriorClass],
) -> Result<ExteriorClass> {
    let g = scenario.g();
    let m = (e as usize).min(g);
    if i == 0 || i > m {
        return input(format!("polynomial index {i} out of range 1..={m}"));
    }
    check_correction_degrees(c, g, i)?;
    let bf = scenario.b_field();
    let mut acc = bf.pow(i as u64).scale(&BigRational::from_integer(binomial_u(e, i as u64)));
    for j in 1..=i {
        let coeff = binomial_u(e - j as u64, (i - j) as u64);
        let term = bf.pow((i - j) as u64).wedge(&c[j - 1])?;
        acc = acc.add(&term.scale(&BigRational::from_integer(coeff)))?;
    }
    Ok(acc)
}

/// e·C(r,i)·B^i + Σ_j C(r-j, i-j)·B^{i-j} ∧ c_j; linear in (e, c).
pub fn zero_cycle_polynomial(
    scenario: &BrauerScenario,
    r: u64,
    e: i64,
    i: usize,
    c: &[ExteriorClass],
) -> Result<ExteriorClass> {
    let g = scenario.g();
    let m = (r as usize).min(g);
    if i == 0 || i > m {
        return input(format!("polynomial index {i} out of range 1..={m}"));
    }
    check_correction_degrees(c, g, i)?;
    let bf = scenario.b_field();
    let lead = BigRational::from_integer(BigInt::from(e) * binomial_u(r, i as u64));
    let mut acc = bf.pow(i as u64).scale(&lead);
    for j in 1..=i {
        let coeff = binomial_u(r - j as u64, (i - j) as u64);
        let term = bf.pow((i - j) as u64).wedge(&c[j - 1])?;
        acc = acc.add(&term.scale(&BigRational::from_integer(coeff)))?;
    }
    Ok(acc)
}

/// Row bookkeeping shared by the two system builders: one row per monomial of
/// each even degree 2..2m, blocks ascending, masks ascending inside a block.
struct RowIndex {
    blocks: Vec<(usize, std::collections::BTreeMap<u64, usize>)>,
    labels: Vec<(usize, Monomial)>,
    nrows: usize,
}

impl RowIndex {
    fn new(g: usize, m: usize) -> Self {
        let mut labels = Vec::new();
        let mut blocks = Vec::new();
        let mut offset = 0usize;
        for i in 1..=m {
            let masks = masks_of_weight(2 * g, 2 * i);
            let map: std::collections::BTreeMap<u64, usize> =
                masks.iter().enumerate().map(|(k, &mk)| (mk, offset + k)).collect();
            labels.extend(masks.iter().map(|&mk| (2 * i, Monomial(mk))));
            offset += masks.len();
            blocks.push((i, map));
        }
        RowIndex { blocks, labels, nrows: offset }
    }

    fn row(&self, block: usize, mask: u64) -> usize {
        self.blocks[block - 1].1[&mask]
    }
}

fn assemble_system(
    scenario: &BrauerScenario,
    m: usize,
    leading: impl Fn(usize) -> BigRational, // scalar on B^i in block i
    correction: impl Fn(usize, usize) -> BigRational, // scalar on B^{i-j} ∧ c_j
) -> Result<ObstructionSystem> {
    let g = scenario.g();
    let rows = RowIndex::new(g, m);
    let bf = scenario.b_field();
    let mut bf_pows = Vec::with_capacity(m + 1);
    bf_pows.push(ExteriorClass::one(g));
    for _ in 0..m {
        bf_pows.push(bf_pows.last().unwrap().wedge(&bf)?);
    }

    let mut target = vec![BigRational::zero(); rows.nrows];
    for i in 1..=m {
        let scaled = bf_pows[i].scale(&leading(i));
        for (mono, coeff) in scaled.terms() {
            target[rows.row(i, mono.0)] = coeff.clone();
        }
    }

    let mut columns = Vec::new();
    let mut col_labels = Vec::new();
    for j in 1..=m {
        let basis = hodge_basis(scenario.ring(), j)?;
        for (mu, elt) in basis.elements.iter().enumerate() {
            let mut col: Vec<(usize, BigRational)> = Vec::new();
            for i in j..=m {
                let scalar = correction(i, j);
                if scalar.is_zero() {
                    continue;
                }
                let class = bf_pows[i - j].wedge(elt)?.scale(&scalar);
                for (mono, coeff) in class.terms() {
                    col.push((rows.row(i, mono.0), coeff.clone()));
                }
            }
            columns.push(col);
            col_labels.push((j, mu));
        }
    }

    ObstructionSystem::new(
        scenario.locality(),
        rows.nrows,
        columns,
        target,
        SystemLabels { rows: rows.labels, cols: col_labels },
    )
}

/// Linearized system for codimension-e twisted linear subvarieties: unknowns
/// are the Hodge coordinates of c_1..c_m, rows the monomial coordinates of
/// degrees 2..2m, target the stacked leading terms C(e,i)·B^i.
pub fn build_subspace_system(scenario: &BrauerScenario, e: u64) -> Result<ObstructionSystem> {
    if e == 0 {
        return input("degree e must be positive");
    }
    let m = (e as usize).min(scenario.g());
    assemble_system(
        scenario,
        m,
        |i| BigRational::from_integer(binomial_u(e, i as u64)),
        |i, j| BigRational::from_integer(binomial_u(e - j as u64, (i - j) as u64)),
    )
}

/// Zero-cycle analog over a relative dimension r: leading terms e·C(r,i)·B^i,
/// corrections use binomials in r. Jointly linear in (e, c).
pub fn build_zero_cycle_system(
    scenario: &BrauerScenario,
    r: u64,
    e: i64,
) -> Result<ObstructionSystem> {
    if r == 0 {
        return input("relative dimension must be positive");
    }
    let m = (r as usize).min(scenario.g());
    assemble_system(
        scenario,
        m,
        |i| BigRational::from_integer(BigInt::from(e) * binomial_u(r, i as u64)),
        |i, j| BigRational::from_integer(binomial_u(r - j as u64, (i - j) as u64)),
    )
}

/// Decides whether the obstruction allows the index to divide e; an
/// Obstructed verdict certifies that it does not.
pub fn divisibility_obstruction(scenario: &BrauerScenario, e: u64) -> Result<Verdict> {
    decide(&build_subspace_system(scenario, e)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SharpnessConclusion {
    /// Obstructed at n^(t-1) with n a prime power: the index is exactly n^t.
    ExactIndex(BigInt),
    /// Obstructed at n^(t-1): the index divides n^t but not n^(t-1).
    NotDividing(BigInt),
    /// n divides (t-1)!, so the obstruction cannot fire at n^(t-1).
    Inconclusive(String),
}

#[derive(Debug, Clone)]
pub struct SharpnessReport {
    pub g: usize,
    pub t: usize,
    pub n: u64,
    pub locality: Locality,
    /// n^t: the class is represented by an Azumaya algebra of that degree, so
    /// the index always divides it (cited construction, not recomputed here).
    pub upper_bound: BigInt,
    pub tested_degree: u64,
    pub verdict: Verdict,
    pub conclusion: SharpnessConclusion,
}

/// Runs the obstruction for the standard class at e = n^(t-1). When n does
/// not divide (t-1)! the verdict must be Obstructed; with n additionally a
/// prime power this pins the index to exactly n^t.
pub fn sharpness_certificate(
    g: usize,
    t: usize,
    n: u64,
    locality: Locality,
) -> Result<SharpnessReport> {
    if g < 2 || t == 0 || t > g - 1 {
        return input(format!("sharpness needs 2 <= g and 1 <= t <= g-1, got g={g}, t={t}"));
    }
    if n < 2 {
        return input("sharpness needs n >= 2");
    }
    let scenario = BrauerScenario::standard(g, t, n, locality)?;
    let tested = BigInt::from(n).pow(t as u32 - 1);
    let tested_degree = tested
        .to_u64()
        .ok_or_else(|| Error::Input(format!("degree n^(t-1) = {tested} is too large")))?;
    let verdict = divisibility_obstruction(&scenario, tested_degree)?;
    let hypothesis = !factorial(t as u64 - 1).is_multiple_of(&BigInt::from(n));
    let conclusion = if hypothesis {
        if verdict.is_solvable() {
            return internal(format!(
                "expected an obstruction at e = {tested_degree} for (g, t, n) = ({g}, {t}, {n})"
            ));
        }
        if prime_power(n).is_some() {
            SharpnessConclusion::ExactIndex(BigInt::from(n).pow(t as u32))
        } else {
            SharpnessConclusion::NotDividing(tested.clone())
        }
    } else {
        SharpnessConclusion::Inconclusive(format!("{n} divides (t-1)! = {}", factorial(t as u64 - 1)))
    };
    Ok(SharpnessReport {
        g,
        t,
        n,
        locality,
        upper_bound: BigInt::from(n).pow(t as u32),
        tested_degree,
        verdict,
        conclusion,
    })
}

/// Shared assembly of the degree-4 congruences: columns are b∧w_mu scaled by
/// `c_scale` followed by the degree-4 Hodge monomials; the caller picks the
/// target and modulus.
fn degree_four_congruence(
    scenario: &BrauerScenario,
    c_scale: i64,
    target_class: &ExteriorClass,
    modulus: u64,
) -> Result<CongruenceSystem> {
    let g = scenario.g();
    let masks = masks_of_weight(2 * g, 4);
    let row_of: std::collections::BTreeMap<u64, usize> =
        masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let labels_rows: Vec<(usize, Monomial)> = masks.iter().map(|&m| (4, Monomial(m))).collect();

    let to_int = |x: &BigRational| -> Result<BigInt> {
        if x.is_integer() {
            Ok(x.to_integer())
        } else {
            internal("congruence data is not integral")
        }
    };

    let mut columns: Vec<Vec<(usize, BigInt)>> = Vec::new();
    let mut col_labels: Vec<(usize, usize)> = Vec::new();
    let scale = BigRational::from_integer(BigInt::from(c_scale));
    for (mu, w) in hodge_basis(scenario.ring(), 1)?.elements.iter().enumerate() {
        let class = scenario.b().wedge(w)?.scale(&scale);
        let mut col = Vec::new();
        for (mono, coeff) in class.terms() {
            col.push((row_of[&mono.0], to_int(coeff)?));
        }
        columns.push(col);
        col_labels.push((1, mu));
    }
    for (nu, d) in hodge_basis(scenario.ring(), 2)?.elements.iter().enumerate() {
        let mut col = Vec::new();
        for (mono, coeff) in d.terms() {
            col.push((row_of[&mono.0], to_int(coeff)?));
        }
        columns.push(col);
        col_labels.push((2, nu));
    }

    let mut target = vec![BigInt::zero(); masks.len()];
    for (mono, coeff) in target_class.terms() {
        target[row_of[&mono.0]] = to_int(coeff)?;
    }

    CongruenceSystem::new(
        modulus,
        masks.len(),
        columns,
        target,
        SystemLabels { rows: labels_rows, cols: col_labels },
    )
}

/// b^2 ≡ 2bc + d (mod 4) with integral Hodge classes c, d.
pub fn kresch_system(scenario: &BrauerScenario) -> Result<CongruenceSystem> {
    if scenario.n() != 2 {
        return input("the mod-4 congruence applies to period 2 only");
    }
    if scenario.locality() != Locality::Global {
        return input("the mod-4 congruence is a global check");
    }
    degree_four_congruence(scenario, 2, &scenario.b().pow(2), 4)
}

/// Decides the mod-4 congruence and cross-checks the verdict variant against
/// the degree-2 divisibility obstruction, which decides the same question
/// through the rational system.
pub fn kresch_check(scenario: &BrauerScenario) -> Result<Verdict> {
    let verdict = decide_congruence(&kresch_system(scenario)?)?;
    let cross = divisibility_obstruction(scenario, 2)?;
    if verdict.is_solvable() != cross.is_solvable() {
        return internal("mod-4 congruence disagrees with the degree-2 obstruction");
    }
    Ok(verdict)
}

/// (n/2)·b^2 + bc + d ≡ 0 (mod n) on threefolds, n even.
pub fn threefold_system(scenario: &BrauerScenario) -> Result<CongruenceSystem> {
    if scenario.g() != 3 {
        return input("the threefold congruence needs g = 3");
    }
    if scenario.locality() != Locality::Global {
        return input("the threefold congruence is a global check");
    }
    let n = scenario.n();
    if n % 2 != 0 {
        return input("the threefold congruence needs an even period");
    }
    let target = scenario
        .b()
        .pow(2)
        .scale(&BigRational::from_integer(-BigInt::from(n as i64 / 2)));
    degree_four_congruence(scenario, 1, &target, n)
}

pub fn threefold_check(scenario: &BrauerScenario) -> Result<Verdict> {
    decide_congruence(&threefold_system(scenario)?)
}

/// (n-1)·b^2 ≡ 2bc + d (mod 2n); an obstruction certifies that the index
/// does not divide n.
pub fn sharp_threefold_system(scenario: &BrauerScenario) -> Result<CongruenceSystem> {
    if scenario.g() != 3 {
        return input("the sharp threefold congruence needs g = 3");
    }
    if scenario.locality() != Locality::Global {
        return input("the sharp threefold congruence is a global check");
    }
    let n = scenario.n();
    let target = scenario
        .b()
        .pow(2)
        .scale(&BigRational::from_integer(BigInt::from(n as i64 - 1)));
    degree_four_congruence(scenario, 2, &target, 2 * n)
}

pub fn sharp_threefold_check(scenario: &BrauerScenario) -> Result<Verdict> {
    decide_congruence(&sharp_threefold_system(scenario)?)
}

/// The two characteristic vanishing degrees of the obstruction:
/// lcm{n^i·i : 1 <= i <= dim-1}, past which the obstruction always admits a
/// witness, and the index-divisibility form
/// n^(dim-1) · Π_{p | n} p^(max_i v_p(i / n^(dim-1-i))).
pub fn vanishing_degrees(dim: usize, n: u64) -> Result<(BigInt, BigInt)> {
    if dim < 2 || n == 0 {
        return input("vanishing degrees need dim >= 2 and n >= 1");
    }
    let mut lcm = BigInt::one();
    for i in 1..dim {
        let term = BigInt::from(n).pow(i as u32) * BigInt::from(i);
        lcm = lcm.lcm(&term);
    }
    let mut obs = BigInt::from(n).pow(dim as u32 - 1);
    for p in crate::arith::prime_factors(n) {
        let vp_n = crate::arith::valuation_int(&BigInt::from(n), p);
        let max_exp = (1..dim)
            .map(|i| {
                crate::arith::valuation_int(&BigInt::from(i), p)
                    - (dim - 1 - i) as i64 * vp_n
            })
            .max()
            .unwrap();
        if max_exp > 0 {
            obs *= BigInt::from(p).pow(max_exp as u32);
        }
    }
    Ok((lcm, obs))
}

/// Builds the subspace system at the lcm vanishing degree and returns it with
/// the explicit witness: c_j = 0 below the top degree and, when the top
/// constraint is present, c_g = -C(e,g)·B^g. The witness must verify; failure
/// is an internal invariant breach.
pub fn vanishing_witness(scenario: &BrauerScenario) -> Result<(u64, Verdict)> {
    let g = scenario.g();
    if g < 2 {
        return input("vanishing witness needs dim >= 2");
    }
    let (lcm, _) = vanishing_degrees(g, scenario.n())?;
    let e = lcm
        .to_u64()
        .ok_or_else(|| Error::Input(format!("vanishing degree {lcm} is too large")))?;
    let system = build_subspace_system(scenario, e)?;
    let m = (e as usize).min(g);
    let mut witness = vec![BigRational::zero(); system.cols()];
    if m == g {
        let top = scenario.b_field().pow(g as u64);
        let full_mask = Monomial((1u64 << (2 * g)) - 1);
        let coeff = top.coefficient(full_mask);
        if !coeff.is_zero() {
            let value = -BigRational::from_integer(binomial_u(e, g as u64)) * coeff;
            let last = witness.len() - 1;
            witness[last] = value;
        }
    }
    let verdict = Verdict::Solvable { witness };
    if !verify_verdict(&system, &verdict) {
        return internal("explicit vanishing witness failed verification");
    }
    Ok((e, verdict))
}
