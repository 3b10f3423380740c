//! Randomized soundness suite for the solver: verdicts must survive the
//! independent verifier, obstructions must reject every sampled witness,
//! kernels must be saturated, and degree-linear families must behave like a
//! subgroup. The grid searches here are heuristic confirmation; soundness
//! itself rests on `verify_verdict`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use brauerkit::hnf;
use brauerkit::ring::{Locality, Monomial};
use brauerkit::solver::{
    decide, feasible_degree_generator, verify_verdict, ObstructionSystem, SystemLabels, Verdict,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn labels(nrows: usize, ncols: usize) -> SystemLabels {
    SystemLabels {
        rows: (0..nrows).map(|r| (1, Monomial(r as u64))).collect(),
        cols: (0..ncols).map(|c| (1, c)).collect(),
    }
}

fn random_system(rng: &mut StdRng, max_rows: usize, max_cols: usize) -> ObstructionSystem {
    let nrows = rng.gen_range(1..=max_rows);
    let ncols = rng.gen_range(0..=max_cols);
    let locality = match rng.gen_range(0..3) {
        0 => Locality::Global,
        1 => Locality::LocalAt(2),
        _ => Locality::LocalAt(3),
    };
    let density = rng.gen_range(0.2..=0.8);
    let mut columns: Vec<Vec<(usize, BigRational)>> = Vec::with_capacity(ncols);
    for _ in 0..ncols {
        let mut col = Vec::new();
        for r in 0..nrows {
            if !rng.gen_bool(density) {
                continue;
            }
            let v = q(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            if !v.is_zero() {
                col.push((r, v));
            }
        }
        columns.push(col);
    }
    let target: Vec<BigRational> =
        (0..nrows).map(|_| q(rng.gen_range(-8..=8), rng.gen_range(1..=6))).collect();
    ObstructionSystem::new(locality, nrows, columns, target, labels(nrows, ncols)).unwrap()
}

#[test]
fn obstructed_systems_reject_random_witnesses() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0usize;
    while checked < 60 {
        let system = random_system(&mut rng, 10, 4);
        let verdict = decide(&system).unwrap();
        let Verdict::Obstructed { certificate, violation } = &verdict else {
            continue;
        };
        checked += 1;
        // The pairing argument: φ·(A·c + t) = φ·t for every c, so no witness
        // can make the values integral.
        for _ in 0..20 {
            let candidate: Vec<BigRational> = (0..system.cols())
                .map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=6)))
                .collect();
            let values = system.evaluate(&candidate).unwrap();
            let pairing: BigRational = values
                .iter()
                .zip(certificate)
                .map(|(v, p)| v * BigRational::from_integer(p.clone()))
                .sum();
            assert_eq!(&pairing, violation);
            assert!(values.iter().any(|v| !system.locality().is_integral(v)));
        }
    }
}

/// Grid search over small-denominator witnesses: an Obstructed verdict means
/// no witness exists at all, so none may show up in the grid.
#[test]
fn tiny_obstructed_instances_survive_witness_grid_search() {
    let mut rng = StdRng::seed_from_u64(99);
    let mut obstructed_checked = 0usize;
    let mut rounds = 0usize;
    while obstructed_checked < 20 && rounds < 400 {
        rounds += 1;
        let system = random_system(&mut rng, 4, 2);
        let verdict = decide(&system).unwrap();
        if verdict.is_solvable() || system.cols() == 0 {
            continue;
        }
        obstructed_checked += 1;
        let denom = 4i64;
        let span = 3 * denom;
        let ncols = system.cols();
        let mut counters = vec![-span; ncols];
        'grid: loop {
            let candidate: Vec<BigRational> = counters.iter().map(|&k| q(k, denom)).collect();
            let values = system.evaluate(&candidate).unwrap();
            assert!(
                values.iter().any(|v| !system.locality().is_integral(v)),
                "grid search found a witness for an Obstructed verdict"
            );
            for slot in counters.iter_mut() {
                *slot += 1;
                if *slot <= span {
                    continue 'grid;
                }
                *slot = -span;
            }
            break;
        }
    }
    assert!(obstructed_checked >= 10);
}

#[test]
fn kernel_vectors_are_primitive_and_saturated() {
    let mut rng = StdRng::seed_from_u64(3141);
    for _ in 0..80 {
        let nrows = rng.gen_range(1..=8usize);
        let ncols = rng.gen_range(0..=4usize);
        let a: hnf::RatMatrix = (0..nrows)
            .map(|_| (0..ncols).map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
            .collect();
        let kernel = hnf::saturated_integer_left_kernel(&a);
        for phi in &kernel {
            // Exactness.
            for c in 0..ncols {
                let dot: BigRational = (0..nrows)
                    .map(|r| &a[r][c] * BigRational::from_integer(phi[r].clone()))
                    .sum();
                assert!(dot.is_zero());
            }
            // Primitivity.
            let gcd = phi
                .iter()
                .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
            assert!(gcd.is_one(), "non-primitive kernel vector {phi:?}");
        }
        if kernel.is_empty() {
            continue;
        }
        // Saturation: a random rational combination scaled to a primitive
        // integer vector must already lie in the Z-span.
        for _ in 0..5 {
            let coeffs: Vec<BigRational> =
                (0..kernel.len()).map(|_| q(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect();
            let mut vec = vec![BigRational::zero(); nrows];
            for (phi, c) in kernel.iter().zip(&coeffs) {
                for (r, x) in phi.iter().enumerate() {
                    vec[r] += c * BigRational::from_integer(x.clone());
                }
            }
            if vec.iter().all(|x| x.is_zero()) {
                continue;
            }
            let lcm = vec
                .iter()
                .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            let ints: Vec<BigInt> = vec
                .iter()
                .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
                .collect();
            let gcd = ints
                .iter()
                .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
            let primitive: Vec<BigInt> = ints.iter().map(|x| x / &gcd).collect();
            assert!(
                hnf::solve_in_row_lattice(&kernel, &primitive).is_some(),
                "saturation breach: {primitive:?} outside Z-span"
            );
        }
    }
}

/// Witnesses of a degree-linear family add: witnesses for e1 and e2 sum to a
/// witness for e1 + e2, and nothing below the generator is feasible.
#[test]
fn family_witnesses_add() {
    let mut rng = StdRng::seed_from_u64(777);
    let mut checked = 0usize;
    while checked < 25 {
        let nrows = rng.gen_range(1..=8usize);
        let ncols = rng.gen_range(1..=4usize);
        let columns: Vec<Vec<(usize, BigRational)>> = (0..ncols)
            .map(|_| {
                (0..nrows)
                    .map(|r| (r, q(rng.gen_range(-4..=4), rng.gen_range(1..=3))))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        let tau: Vec<BigRational> =
            (0..nrows).map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=4))).collect();
        let family = |e: i64| {
            let target: Vec<BigRational> =
                tau.iter().map(|t| t * BigRational::from_integer(BigInt::from(e))).collect();
            ObstructionSystem::new(
                Locality::Global,
                nrows,
                columns.clone(),
                target,
                labels(nrows, ncols),
            )
        };
        let generator = feasible_degree_generator(&family).unwrap();
        let Some(g) = i64::try_from(&generator).ok().filter(|g| *g <= 64) else {
            continue;
        };
        checked += 1;
        let (e1, e2) = (g, 2 * g);
        let w1 = match decide(&family(e1).unwrap()).unwrap() {
            Verdict::Solvable { witness } => witness,
            v => panic!("generator degree must be feasible, got {v:?}"),
        };
        let w2 = match decide(&family(e2).unwrap()).unwrap() {
            Verdict::Solvable { witness } => witness,
            v => panic!("double generator degree must be feasible, got {v:?}"),
        };
        let sum: Vec<BigRational> = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();
        let combined = Verdict::Solvable { witness: sum };
        assert!(verify_verdict(&family(e1 + e2).unwrap(), &combined));
        if g > 1 {
            assert!(!decide(&family(1).unwrap()).unwrap().is_solvable());
        }
    }
}
