//! Deterministic fixtures: seeded random systems and elements, shared
//! by the verification suites and the tests.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynsys::{diagonal_basis, full_matrix_basis, DynSystem};
use crate::group::FiniteAbelianGroup;
use crate::linalg::{c, identity, Mat};

pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> Mat {
    Mat::from_fn(d, d, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> Mat {
    let m = random_matrix(rng, d);
    (&m + m.adjoint()).scale(0.5)
}

/// Haar-ish random unitary via QR of a complex Gaussian-ish matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> Mat {
    if d == 1 {
        return Mat::from_element(1, 1, Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU));
    }
    let m = random_matrix(rng, d) + identity(d).scale(0.1);
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Normalize column phases so Q is determined by the input alone.
    for j in 0..d {
        let rjj = r[(j, j)];
        if rjj.norm() > 0.0 {
            let phase = rjj / rjj.norm();
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Random element of the system's algebra (complex combination of the
/// orthonormal basis).
pub fn random_algebra_element(sys: &DynSystem, rng: &mut ChaCha8Rng) -> Mat {
    let mut acc = Mat::zeros(sys.dim(), sys.dim());
    for b in sys.algebra().basis() {
        let w = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        acc += b.map(|z| z * w);
    }
    acc
}

/// Positive element of the algebra: `m* m` for a random member.
pub fn random_positive_element(sys: &DynSystem, rng: &mut ChaCha8Rng) -> Mat {
    let m = random_algebra_element(sys, rng);
    m.adjoint() * &m
}

const GROUP_POOL: &[&[u64]] = &[
    &[2],
    &[3],
    &[4],
    &[2, 2],
    &[5],
    &[6],
    &[2, 4],
    &[8],
    &[3, 3],
    &[12],
    &[2, 2, 3],
    &[16],
];

/// Deterministic catalog of small systems (`|G| <= 16`, `d <= 6`).
///
/// Every action is of the form `u_t = Q diag(<x_j, t>) Q*` for random
/// characters `x_j` and a seeded unitary `Q`; that is the general shape
/// of a unitary representation of a finite abelian group, so the
/// catalog covers nontrivial spectra. The invariant algebra is the full
/// matrix algebra or the conjugated diagonal algebra.
pub fn seeded_system(seed: u64) -> DynSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0000 ^ seed);
    let factors = GROUP_POOL[rng.gen_range(0..GROUP_POOL.len())].to_vec();
    let group = FiniteAbelianGroup::new(factors).unwrap();
    let d = rng.gen_range(2..=6usize);

    let char_idx: Vec<usize> = (0..d).map(|_| rng.gen_range(0..group.order())).collect();
    let q = random_unitary(&mut rng, d);
    let unitaries: Vec<Mat> = (0..group.order())
        .map(|t| {
            let diag = Mat::from_fn(d, d, |i, j| {
                if i == j {
                    group.pairing_idx(char_idx[i], t)
                } else {
                    c(0.0, 0.0)
                }
            });
            &q * diag * q.adjoint()
        })
        .collect();

    let algebra: Vec<Mat> = if rng.gen_bool(0.7) {
        full_matrix_basis(d)
    } else {
        diagonal_basis(d).into_iter().map(|b| &q * b * q.adjoint()).collect()
    };

    DynSystem::new(group, unitaries, &algebra, 1e-9).unwrap()
}

/// The fixture batch used by the acceptance checks.
pub fn acceptance_systems() -> Vec<DynSystem> {
    (0..20).map(seeded_system).collect()
}
