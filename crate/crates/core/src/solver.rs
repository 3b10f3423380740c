//! Exact feasibility of rational affine lattice problems, with independently
//! checkable certificates in both directions.
//!
//! The question decided here: given a rational N×h matrix `A` and a rational
//! target `t`, is there a rational vector `c` with `A·c + t` integral — in
//! `Z^N` globally, or coordinatewise in the local ring Z_(ℓ)?
//!
//! Criterion. Let V ⊆ Q^N be the column span of A and q: Q^N → Q^N/V the
//! quotient map. The image q(Z^N) is a full-rank lattice L (Z^N spans Q^N),
//! and t ∈ V + Z^N iff q(t) ∈ L. Rational functionals on Q^N/V are exactly
//! the row vectors φ with φ·A = 0, and under that identification the dual
//! lattice L* is the saturated integer left kernel K = {φ ∈ Z^N : φ·A = 0}.
//! Lattice biduality gives: q(t) ∈ L iff φ·t ∈ Z for every φ in a basis of K.
//! So a kernel basis decides the problem in both directions: either every
//! pairing is integral and a witness exists, or a single φ with φ·t ∉ Z
//! refutes every possible witness, because φ·(A·c + t) = φ·t for all c.
//! Over Z_(ℓ) the same kernel works with the test v_ℓ(φ·t) ≥ 0.
//!
//! `verify_verdict` re-checks either outcome by direct arithmetic only; no
//! normal forms are involved, so it is an independent referee for `decide`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::valuation_rat;
use crate::error::{input, internal, Result};
use crate::hnf;
use crate::ring::{Locality, Monomial};

/// Labels tie matrix rows back to (cohomological degree, monomial) and columns
/// back to (unknown index j, Hodge basis position).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLabels {
    pub rows: Vec<(usize, Monomial)>,
    pub cols: Vec<(usize, usize)>,
}

/// The linearized integrality problem: decide whether some rational choice of
/// the unknowns lands `A·c + t` in the integral lattice. Columns are stored
/// sparsely; most systems built from sparse classes touch few rows.
#[derive(Debug, Clone)]
pub struct ObstructionSystem {
    locality: Locality,
    nrows: usize,
    columns: Vec<Vec<(usize, BigRational)>>,
    target: Vec<BigRational>,
    labels: SystemLabels,
}

/// Outcome of `decide`; both variants carry a proof object.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `A·witness + t` is integral under the system's locality.
    Solvable { witness: Vec<BigRational> },
    /// `certificate·A = 0` exactly, with integer entries, and
    /// `certificate·t = violation` is not integral under the locality.
    Obstructed { certificate: Vec<BigInt>, violation: BigRational },
}

impl Verdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Verdict::Solvable { .. })
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Verdict::Solvable { .. } => "solvable",
            Verdict::Obstructed { .. } => "obstructed",
        }
    }
}

impl ObstructionSystem {
    pub fn new(
        locality: Locality,
        nrows: usize,
        columns: Vec<Vec<(usize, BigRational)>>,
        target: Vec<BigRational>,
        labels: SystemLabels,
    ) -> Result<Self> {
        if target.len() != nrows || labels.rows.len() != nrows || labels.cols.len() != columns.len()
        {
            return input("system dimensions and labels disagree");
        }
        for col in &columns {
            if col.iter().any(|(r, _)| *r >= nrows) {
                return input("column entry outside row range");
            }
        }
        Ok(ObstructionSystem { locality, nrows, columns, target, labels })
    }

    pub fn locality(&self) -> Locality {
        self.locality
    }

    pub fn rows(&self) -> usize {
        self.nrows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn labels(&self) -> &SystemLabels {
        &self.labels
    }

    pub fn target(&self) -> &[BigRational] {
        &self.target
    }

    pub fn columns(&self) -> &[Vec<(usize, BigRational)>] {
        &self.columns
    }

    /// Rows where some column has a nonzero entry, ascending.
    fn support_rows(&self) -> Vec<usize> {
        let mut support = vec![false; self.nrows];
        for col in &self.columns {
            for (r, c) in col {
                if !c.is_zero() {
                    support[*r] = true;
                }
            }
        }
        (0..self.nrows).filter(|&r| support[r]).collect()
    }

    /// Dense submatrix of the support rows.
    fn dense_support(&self, support: &[usize]) -> hnf::RatMatrix {
        let pos: BTreeMap<usize, usize> =
            support.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut m = vec![vec![BigRational::zero(); self.columns.len()]; support.len()];
        for (ci, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                if let Some(&i) = pos.get(r) {
                    m[i][ci] += v;
                }
            }
        }
        m
    }

    pub fn is_integral(&self, x: &BigRational) -> bool {
        self.locality.is_integral(x)
    }

    /// A·c + t for a candidate witness.
    pub fn evaluate(&self, witness: &[BigRational]) -> Result<Vec<BigRational>> {
        if witness.len() != self.columns.len() {
            return input(format!(
                "witness length {} does not match {} unknowns",
                witness.len(),
                self.columns.len()
            ));
        }
        let mut out = self.target.clone();
        for (col, w) in self.columns.iter().zip(witness) {
            if w.is_zero() {
                continue;
            }
            for (r, v) in col {
                let delta = v * w;
                out[*r] += delta;
            }
        }
        Ok(out)
    }

    /// φ·A accumulated per column; exact.
    fn pair_with_columns(&self, phi: &[BigInt]) -> Vec<BigRational> {
        self.columns
            .iter()
            .map(|col| {
                let mut acc = BigRational::zero();
                for (r, v) in col {
                    if !phi[*r].is_zero() {
                        acc += v * BigRational::from_integer(phi[*r].clone());
                    }
                }
                acc
            })
            .collect()
    }

    fn pair_with_target(&self, phi: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for (r, v) in self.target.iter().enumerate() {
            if !phi[r].is_zero() && !v.is_zero() {
                acc += v * BigRational::from_integer(phi[r].clone());
            }
        }
        acc
    }

    /// A basis of the saturated integer left kernel, presented sparsely as
    /// (support rows, dense block) pairs plus the standalone unit vectors for
    /// rows no column touches. Unit vectors for untouched rows are kernel
    /// members, and together with the kernel of the support block they form
    /// the canonical Hermite basis of the whole kernel, because the two groups
    /// live on disjoint coordinates.
    fn kernel_parts(&self) -> (Vec<usize>, Vec<Vec<BigInt>>) {
        let support = self.support_rows();
        let block = self.dense_support(&support);
        let kernel = hnf::saturated_integer_left_kernel(&block);
        (support, kernel)
    }

    fn expand_support_vector(&self, support: &[usize], dense: &[BigInt]) -> Vec<BigInt> {
        let mut full = vec![BigInt::zero(); self.nrows];
        for (i, &r) in support.iter().enumerate() {
            full[r] = dense[i].clone();
        }
        full
    }
}

/// Decides the system, returning a verified verdict. The witness path lifts
/// the target through the quotient by the column span; the obstructed path
/// reports a kernel functional with non-integral pairing, chosen
/// deterministically (smallest max-abs entry, then lowest pivot row).
pub fn decide(system: &ObstructionSystem) -> Result<Verdict> {
    let verdict = decide_unverified(system)?;
    if !verify_verdict(system, &verdict) {
        return internal("decide produced a verdict that fails verification");
    }
    Ok(verdict)
}

fn decide_unverified(system: &ObstructionSystem) -> Result<Verdict> {
    // Integral targets need no correction at all.
    if system.target.iter().all(|x| system.is_integral(x)) {
        return Ok(Verdict::Solvable {
            witness: vec![BigRational::zero(); system.columns.len()],
        });
    }

    let (support, kernel) = system.kernel_parts();
    let in_support = {
        let mut f = vec![false; system.nrows];
        for &r in &support {
            f[r] = true;
        }
        f
    };

    // Candidate certificates: unit vectors on untouched rows with non-integral
    // target coordinate, and support-kernel vectors with non-integral pairing.
    struct Candidate {
        max_abs: BigInt,
        pivot: usize,
        phi: Vec<BigInt>,
        violation: BigRational,
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    for r in 0..system.nrows {
        if !in_support[r] && !system.is_integral(&system.target[r]) {
            let mut phi = vec![BigInt::zero(); system.nrows];
            phi[r] = BigInt::from(1);
            candidates.push(Candidate {
                max_abs: BigInt::from(1),
                pivot: r,
                violation: system.target[r].clone(),
                phi,
            });
        }
    }
    let support_target: Vec<BigRational> =
        support.iter().map(|&r| system.target[r].clone()).collect();
    for dense in &kernel {
        let pairing: BigRational = dense
            .iter()
            .zip(&support_target)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, t)| t * BigRational::from_integer(c.clone()))
            .sum();
        if !system.is_integral(&pairing) {
            let pivot_local = dense.iter().position(|x| !x.is_zero()).unwrap_or(0);
            candidates.push(Candidate {
                max_abs: dense.iter().map(|x| x.abs()).max().unwrap_or_default(),
                pivot: support[pivot_local],
                violation: pairing,
                phi: system.expand_support_vector(&support, dense),
            });
        }
    }
    if let Some(best) = candidates
        .into_iter()
        .min_by(|a, b| (&a.max_abs, a.pivot).cmp(&(&b.max_abs, b.pivot)))
    {
        return Ok(Verdict::Obstructed { certificate: best.phi, violation: best.violation });
    }

    // Every pairing is integral: lift the target through the quotient.
    // Kernel rows are saturated, so K: Z^S -> Z^k is onto and K z = K t has an
    // integer solution; locally at ℓ we clear the prime-to-ℓ denominators
    // first and divide back, staying inside Z_(ℓ).
    let witness = if kernel.is_empty() {
        // Column span covers the whole support block; solve directly.
        solve_support(system, &support, &support_target)?
    } else {
        let pairings: Vec<BigRational> = kernel
            .iter()
            .map(|dense| {
                dense
                    .iter()
                    .zip(&support_target)
                    .map(|(c, t)| t * BigRational::from_integer(c.clone()))
                    .sum()
            })
            .collect();
        let denom_lcm = pairings
            .iter()
            .fold(BigInt::from(1), |acc, p| acc.lcm(p.denom()));
        let scaled: Vec<BigInt> = pairings
            .iter()
            .map(|p| (p * BigRational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let z_scaled = hnf::solve_in_row_lattice(&transpose(&kernel), &scaled)
            .ok_or_else(|| crate::error::Error::Internal("saturated kernel not onto".into()))?;
        let z: Vec<BigRational> = z_scaled
            .into_iter()
            .map(|x| BigRational::new(x, denom_lcm.clone()))
            .collect();
        let shifted: Vec<BigRational> =
            support_target.iter().zip(&z).map(|(t, z)| t - z).collect();
        solve_support(system, &support, &shifted)?
    };
    Ok(Verdict::Solvable { witness })
}

/// Solves A_support · c = z - t_support (the rhs handed in is t - z, so we
/// negate); rows outside the support need no equation because the target is
/// integral there whenever this path is reached.
fn solve_support(
    system: &ObstructionSystem,
    support: &[usize],
    shifted_target: &[BigRational],
) -> Result<Vec<BigRational>> {
    let a = system.dense_support(support);
    let rhs: Vec<BigRational> = shifted_target.iter().map(|x| -x.clone()).collect();
    hnf::solve_rational(&a, &rhs)
        .ok_or_else(|| crate::error::Error::Internal("inconsistent lift in solvable branch".into()))
}

fn transpose(m: &[Vec<BigInt>]) -> hnf::IntMatrix {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); rows]; cols];
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[j][i] = v.clone();
        }
    }
    out
}

/// Re-checks a verdict by direct arithmetic alone. No normal forms, no
/// elimination: a witness is evaluated, a certificate is paired against the
/// columns and the target.
pub fn verify_verdict(system: &ObstructionSystem, verdict: &Verdict) -> bool {
    match verdict {
        Verdict::Solvable { witness } => match system.evaluate(witness) {
            Ok(values) => values.iter().all(|x| system.is_integral(x)),
            Err(_) => false,
        },
        Verdict::Obstructed { certificate, violation } => {
            if certificate.len() != system.nrows {
                return false;
            }
            let pairings = system.pair_with_columns(certificate);
            if pairings.iter().any(|p| !p.is_zero()) {
                return false;
            }
            let against_target = system.pair_with_target(certificate);
            against_target == *violation && !system.is_integral(&against_target)
        }
    }
}

/// The feasible degrees of a family e ↦ system(e) with fixed A and target
/// e·τ form a subgroup of Z; this returns its positive generator. Globally
/// that is the lcm of the denominators of the kernel pairings with τ; locally
/// at ℓ it is ℓ raised to the worst negative valuation among them.
pub fn feasible_degree_generator(
    family: impl Fn(i64) -> Result<ObstructionSystem>,
) -> Result<BigInt> {
    let base = family(1)?;
    let probe = family(2)?;
    if !same_matrix(&base, &probe) {
        return input("family matrix varies with the degree");
    }
    let doubled: Vec<BigRational> = base.target.iter().map(|t| t + t).collect();
    if doubled != probe.target {
        return input("family target is not linear in the degree");
    }

    let (support, kernel) = base.kernel_parts();
    let support_target: Vec<BigRational> =
        support.iter().map(|&r| base.target[r].clone()).collect();
    let mut pairings: Vec<BigRational> = base
        .target
        .iter()
        .enumerate()
        .filter(|(r, t)| !support.contains(r) && !t.is_zero())
        .map(|(_, t)| t.clone())
        .collect();
    for dense in &kernel {
        pairings.push(
            dense
                .iter()
                .zip(&support_target)
                .map(|(c, t)| t * BigRational::from_integer(c.clone()))
                .sum(),
        );
    }
    match base.locality {
        Locality::Global => {
            let mut gen = BigInt::from(1);
            for p in &pairings {
                gen = gen.lcm(p.denom());
            }
            Ok(gen)
        }
        Locality::LocalAt(ell) => {
            let worst = pairings
                .iter()
                .filter(|p| !p.is_zero())
                .map(|p| -valuation_rat(p, ell))
                .max()
                .unwrap_or(0)
                .max(0);
            Ok(BigInt::from(ell).pow(worst as u32))
        }
    }
}

fn same_matrix(a: &ObstructionSystem, b: &ObstructionSystem) -> bool {
    a.nrows == b.nrows && a.columns == b.columns && a.locality == b.locality
}
