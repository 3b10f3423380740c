//! Hermite normal form and saturated integer kernels, the exact linear
//! algebra underneath the solver.
//!
//! Matrices are dense row-major `Vec<Vec<BigInt>>`. The normal form here acts
//! by unimodular row operations on the left, H = U·M, with H in row echelon
//! form, positive pivots, and entries above each pivot reduced into
//! [0, pivot). That form is the canonical representative of the row lattice:
//! two integer matrices span the same row lattice iff their normal forms agree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        m.swap(a, b);
    }
}

fn negate_row(m: &mut [Vec<BigInt>], r: usize) {
    for x in &mut m[r] {
        *x = -std::mem::take(x);
    }
}

/// row[dst] -= q * row[src]
fn subtract_scaled(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m[src].len() {
        let delta = q * &m[src][j];
        m[dst][j] -= delta;
    }
}

/// Hermite normal form with transformation: returns (H, U) with H = U·M,
/// U unimodular, H canonical as described in the module docs. Handles any
/// shape, including empty and rank-deficient input; zero rows of H sink to
/// the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut pivot_row = 0usize;
    for col in 0..cols {
        // Euclidean reduction: shrink entries below the pivot until one remains.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if h[r][col].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(r),
                    Some(b) if h[r][col].abs() < h[b][col].abs() => Some(r),
                    keep => keep,
                };
            }
            let Some(best) = best else { break };
            swap_rows(&mut h, pivot_row, best);
            swap_rows(&mut u, pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..rows {
                if h[r][col].is_zero() {
                    continue;
                }
                let q = h[r][col].div_floor(&h[pivot_row][col]);
                subtract_scaled(&mut h, r, pivot_row, &q);
                subtract_scaled(&mut u, r, pivot_row, &q);
                if !h[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row..].iter().all(|r| r[col].is_zero()) {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            negate_row(&mut h, pivot_row);
            negate_row(&mut u, pivot_row);
        }
        // Reduce the entries above the pivot into [0, pivot).
        let pivot = h[pivot_row][col].clone();
        for r in 0..pivot_row {
            let q = h[r][col].div_floor(&pivot);
            subtract_scaled(&mut h, r, pivot_row, &q);
            subtract_scaled(&mut u, r, pivot_row, &q);
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    (h, u)
}

/// Rank of an integer matrix, read off its echelon form.
pub fn rank(m: &IntMatrix) -> usize {
    let (h, _) = hermite_normal_form(m);
    h.iter().filter(|r| r.iter().any(|x| !x.is_zero())).count()
}

/// Determinant sign tracking is not kept by `hermite_normal_form`, so compute
/// |det| directly via fraction-free elimination. Used by tests to confirm the
/// transformations are unimodular.
pub fn abs_det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant needs a square matrix");
    if n == 0 {
        return BigInt::one();
    }
    // Bareiss elimination.
    let mut a = m.clone();
    let mut denom = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &num / &denom;
            }
        }
        denom = a[k][k].clone();
    }
    a[n - 1][n - 1].abs()
}

/// Scales each column of a rational matrix to integers. Column scaling by
/// positive rationals does not change the left kernel.
pub fn clear_column_denominators(a: &RatMatrix) -> IntMatrix {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for c in 0..cols {
        let mut lcm = BigInt::one();
        for r in 0..rows {
            lcm = lcm.lcm(a[r][c].denom());
        }
        for r in 0..rows {
            let scaled = &a[r][c] * BigRational::from_integer(lcm.clone());
            debug_assert!(scaled.is_integer());
            out[r][c] = scaled.to_integer();
        }
    }
    out
}

/// A basis of {φ ∈ Z^N : φ·A = 0}, i.e. the rational left kernel of A
/// intersected with the integer lattice. The result is saturated (it is the
/// kernel of a map out of Z^N, so the quotient by it is torsion-free) and is
/// returned in canonical Hermite form, pivots ascending.
pub fn saturated_integer_left_kernel(a: &RatMatrix) -> Vec<Vec<BigInt>> {
    let m = clear_column_denominators(a);
    integer_left_kernel(&m)
}

/// Same as `saturated_integer_left_kernel` but for an integer matrix.
pub fn integer_left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let (h, u) = hermite_normal_form(m);
    let kernel: Vec<Vec<BigInt>> = (0..rows)
        .filter(|&r| h[r].iter().all(|x| x.is_zero()))
        .map(|r| u[r].clone())
        .collect();
    if kernel.is_empty() {
        return kernel;
    }
    let (canon, _) = hermite_normal_form(&kernel);
    canon.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Solves x·M = v over the integers, where the rows of M are an independent
/// generating set of a lattice. Returns None when v is not in the row lattice.
pub fn solve_in_row_lattice(m: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let (h, u) = hermite_normal_form(m);
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    assert_eq!(v.len(), cols);
    // Forward-substitute v against the echelon rows of H; the pivot of each
    // row must divide the current residual coordinate exactly.
    let mut residual: Vec<BigInt> = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); rows];
    for r in 0..rows {
        let Some(pc) = h[r].iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let (q, rem) = residual[pc].div_rem(&h[r][pc]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for j in 0..cols {
                let delta = &q * &h[r][j];
                residual[j] -= delta;
            }
        }
        coeffs[r] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    // x·M = (coeffs·U)·M = coeffs·H = v.
    let mut x = vec![BigInt::zero(); rows];
    for r in 0..rows {
        if coeffs[r].is_zero() {
            continue;
        }
        for j in 0..rows {
            let delta = &coeffs[r] * &u[r][j];
            x[j] += delta;
        }
    }
    Some(x)
}

/// Reduced row echelon solve of A·x = rhs over the rationals with free
/// variables pinned to zero; deterministic. Returns None when inconsistent.
pub fn solve_rational(a: &RatMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert_eq!(rhs.len(), rows);
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row = a[r].clone();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pr = 0usize;
    for pc in 0..cols {
        let Some(sel) = (pr..rows).find(|&r| !m[r][pc].is_zero()) else {
            continue;
        };
        m.swap(pr, sel);
        let inv = m[pr][pc].recip();
        for x in &mut m[pr] {
            *x = &*x * &inv;
        }
        for r in 0..rows {
            if r != pr && !m[r][pc].is_zero() {
                let factor = m[r][pc].clone();
                for j in 0..=cols {
                    let delta = &factor * &m[pr][j];
                    m[r][j] -= delta;
                }
            }
        }
        pivots.push((pr, pc));
        pr += 1;
        if pr == rows {
            break;
        }
    }
    if m[pr..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, c) in pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}
