//! Proper-action laboratories on commutative algebras: a finite cyclic
//! group acting freely on a finite set (exact orbit-space checks) and
//! the integers acting on themselves by translation (windowed decay
//! checks for compactly supported functions).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::crossed;
use crate::dynsys::{diagonal_basis, DynSystem};
use crate::error::{CoreError, Result};
use crate::fixtures;
use crate::group::FiniteAbelianGroup;
use crate::hmodule;
use crate::linalg::{c, hs_norm, span_of, Mat};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Report for the free action of `Z_n` on `n * k` points (`k` orbits).
#[derive(Debug, Clone)]
pub struct ProperActionReport {
    pub n: usize,
    pub k: usize,
    /// Dimension of `span { F(f, e) : f diagonal }`; must equal `k`.
    pub fixed_dim: usize,
    /// Dimension of `span { <f, g>_R }`; must also equal `k`.
    pub rip_dim: usize,
    /// Worst deviation of a fixed-algebra basis element from orbit
    /// constancy.
    pub orbit_residual: f64,
    /// Mutual span residuals between the two k-dimensional algebras.
    pub span_residual: f64,
    /// Worst residual of `rho(symbol) . lip` landing back on a lip pair.
    pub ideal_residual: f64,
    /// Dimension of `span { rho(delta_t (x) e_p) }`.
    pub crossed_dim: usize,
}

impl ProperActionReport {
    pub fn max_residual(&self) -> f64 {
        self.orbit_residual.max(self.span_residual).max(self.ideal_residual)
    }
}

/// Build the system for `Z_n` acting freely on `X = Z_n x {1..k}` by
/// rotation of the first coordinate; `A` = diagonal matrices on
/// `C^{n k}`.
pub fn free_action_system(n: usize, k: usize) -> Result<DynSystem> {
    if n < 1 || k < 1 {
        return Err(CoreError::Precondition("need n >= 1 and k >= 1".into()));
    }
    let group = FiniteAbelianGroup::cyclic(n as u64)?;
    let d = n * k;
    let point = |orbit_pos: usize, sheet: usize| orbit_pos * k + sheet;
    let unitaries: Vec<Mat> = (0..n)
        .map(|t| {
            let mut u = Mat::zeros(d, d);
            for a in 0..n {
                for j in 0..k {
                    u[(point((a + t) % n, j), point(a, j))] = c(1.0, 0.0);
                }
            }
            u
        })
        .collect();
    DynSystem::new(group, unitaries, &diagonal_basis(d), 1e-9)
}

pub fn proper_free_action_report(n: usize, k: usize) -> Result<ProperActionReport> {
    let sys = free_action_system(n, k)?;
    let d = n * k;
    let basis = diagonal_basis(d);

    // (a) span of the invariant averages of the diagonal units.
    let averages: Vec<Mat> = basis
        .iter()
        .map(|f| sys.fourier_coeff_idx(f, 0))
        .collect();
    let fixed = span_of(&averages, 1e-9)?;
    let fixed_dim = fixed.dim();

    // Orbit-indicator oracle: orbit of sheet j is { (a, j) : a }.
    let indicators: Vec<Mat> = (0..k)
        .map(|j| {
            Mat::from_fn(d, d, |p, q| {
                if p == q && p % k == j {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
        })
        .collect();
    let indicator_span = span_of(&indicators, 1e-9)?;
    let mut orbit_residual = 0.0f64;
    for b in fixed.basis() {
        orbit_residual = orbit_residual.max(indicator_span.residual(b)?);
        // Constancy along orbits, entry by entry.
        for a in 0..n {
            for j in 0..k {
                let p0 = j; // orbit position 0
                let p = a * k + j;
                orbit_residual = orbit_residual.max((b[(p, p)] - b[(p0, p0)]).norm());
            }
        }
    }

    // (b) span of the right inner products.
    let mut rips: Vec<Mat> = Vec::new();
    for f in &basis {
        for g in &basis {
            rips.push(hmodule::rip(&sys, f, g)?);
        }
    }
    let rip_span = crate::linalg::span_of_scaled(&rips, 1e-9, n as f64)?;
    let rip_dim = rip_span.dim();
    let mut span_residual = 0.0f64;
    for b in rip_span.basis() {
        span_residual = span_residual.max(fixed.residual(b)?);
    }
    for b in fixed.basis() {
        span_residual = span_residual.max(rip_span.residual(b)?);
    }

    // (c) left-ideal property of the lip span under rho of
    // algebra-valued symbols, through the exact intertwining identity.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1A5);
    let mut ideal_residual = 0.0f64;
    for _ in 0..4 {
        let a = fixtures::random_algebra_element(&sys, &mut rng);
        let b = fixtures::random_algebra_element(&sys, &mut rng);
        let cm = fixtures::random_algebra_element(&sys, &mut rng);
        for s in 0..n {
            let scale = hs_norm(&a).max(1.0) * hs_norm(&b).max(1.0) * hs_norm(&cm).max(1.0) * n as f64;
            ideal_residual =
                ideal_residual.max(crossed::lip_ideal_residual(&sys, s, &cm, &a, &b)? / scale);
        }
    }

    // (d) dimension of the crossed-product span.
    let mut gens: Vec<Mat> = Vec::new();
    for t in 0..n {
        for f in &basis {
            let sym = crate::dynsys::Symbol::delta(sys.group(), &sys.group().element(t), f.clone())?;
            gens.push(crossed::rho(&sys, &sym)?.matrix().clone());
        }
    }
    let crossed_dim = span_of(&gens, 1e-9)?.dim();

    Ok(ProperActionReport {
        n,
        k,
        fixed_dim,
        rip_dim,
        orbit_residual,
        span_residual,
        ideal_residual,
        crossed_dim,
    })
}

/// A compactly supported function on `Z`, as (position, value) pairs.
pub type LatticeFunction = Vec<(i64, Complex64)>;

#[derive(Debug, Clone)]
pub struct TranslationRow {
    pub z: Complex64,
    pub d_tilde: f64,
    /// Lipschitz majorant `C |1 - z|`.
    pub lipschitz_rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct TranslationPairReport {
    pub rows: Vec<TranslationRow>,
    pub interior_radius: i64,
}

#[derive(Debug, Clone)]
pub struct TranslationReport {
    pub pairs: Vec<TranslationPairReport>,
    pub window: i64,
}

/// Scalar symbol `sum_m conj(x)^m f(m)` of a lattice function; the
/// interior diagonal of the windowed coefficient operator factors
/// through it.
pub fn scalar_symbol(f: &LatticeFunction, x: Complex64) -> Complex64 {
    f.iter()
        .map(|&(m, v)| {
            let p = if m >= 0 { x.conj().powi(m as i32) } else { x.powi((-m) as i32) };
            v * p
        })
        .sum()
}

/// Windowed coefficient vector `F(f, x)[n] = sum_{|k| <= K} x^k f(n-k)`
/// for a diagonal `f`, over the whole window.
fn windowed_coeff_diag(
    f: &LatticeFunction,
    x: Complex64,
    half: i64,
    k_max: i64,
) -> Vec<Complex64> {
    let dim = (2 * half + 1) as usize;
    let mut out = vec![c(0.0, 0.0); dim];
    for (slot, n) in out.iter_mut().zip(-half..=half) {
        let mut acc = c(0.0, 0.0);
        for &(m, v) in f {
            let k = n - m;
            if k.abs() <= k_max {
                let xk = if k >= 0 { x.powi(k as i32) } else { x.conj().powi((-k) as i32) };
                acc += xk * v;
            }
        }
        *slot = acc;
    }
    out
}

/// Decay experiment for `Z` acting on itself by translation: for a
/// pair of compactly supported diagonal functions the windowed modulus
/// `d~(z)` obeys the Lipschitz bound
/// `(pi/2) (D_f S_g + S_f D_g) |1 - z|` with `S` the coefficient sum
/// and `D` the first-moment sum; every compactly supported function is
/// absolutely continuous for this action and the table shows it
/// quantitatively.
pub fn translation_on_z_report(
    half: i64,
    supports: &[LatticeFunction],
    zgrid: usize,
) -> Result<TranslationReport> {
    if half < 2 {
        return Err(CoreError::Window("window half-width must be >= 2".into()));
    }
    if zgrid < 8 {
        return Err(CoreError::Usage("z-grid needs at least 8 points".into()));
    }
    if supports.is_empty() {
        return Err(CoreError::Precondition("need at least one function".into()));
    }
    for f in supports {
        if f.iter().any(|&(m, _)| 2 * m.abs() > half) {
            return Err(CoreError::Window(
                "supports must live inside [-N/2, N/2]".into(),
            ));
        }
    }

    let pairs: Vec<(LatticeFunction, LatticeFunction)> = if supports.len() == 1 {
        // Pair the lone function against its unit translate.
        let f = supports[0].clone();
        let g: LatticeFunction = f.iter().map(|&(m, v)| (m + 1, v)).collect();
        vec![(f, g)]
    } else {
        supports.windows(2).map(|p| (p[0].clone(), p[1].clone())).collect()
    };

    let grid: Vec<Complex64> = (0..zgrid)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / zgrid as f64))
        .collect();

    let mut out = Vec::new();
    for (f, g) in &pairs {
        let s_max = f
            .iter()
            .chain(g.iter())
            .map(|&(m, _)| m.abs())
            .max()
            .unwrap_or(0)
            .max(1);
        let k_max = half - s_max;
        let radius = k_max - s_max;
        if radius < 1 {
            return Err(CoreError::Window("supports leave no interior".into()));
        }

        // Precompute windowed vectors on the grid (closed under the
        // grid's multiplications).
        let ff: Vec<Vec<Complex64>> =
            grid.iter().map(|&x| windowed_coeff_diag(f, x, half, k_max)).collect();
        let gg: Vec<Vec<Complex64>> =
            grid.iter().map(|&x| windowed_coeff_diag(g, x, half, k_max)).collect();

        let sum_f: f64 = f.iter().map(|&(_, v)| v.norm()).sum();
        let sum_g: f64 = g.iter().map(|&(_, v)| v.norm()).sum();
        let mom_f: f64 = f.iter().map(|&(m, v)| m.abs() as f64 * v.norm()).sum();
        let mom_g: f64 = g.iter().map(|&(m, v)| m.abs() as f64 * v.norm()).sum();
        let lip = std::f64::consts::FRAC_PI_2 * (mom_f * sum_g + sum_f * mom_g);

        let lo = (half - radius) as usize;
        let hi = (half + radius) as usize;
        let rows: Vec<TranslationRow> = (0..zgrid)
            .into_par_iter()
            .map(|zi| {
                let mut worst = 0.0f64;
                for x in 0..zgrid {
                    let xz = (x + zi) % zgrid;
                    for y in 0..zgrid {
                        let zy = (zi + y) % zgrid;
                        let (a, b, cc, dd) = (&ff[xz], &gg[y], &ff[x], &gg[zy]);
                        for n in lo..=hi {
                            let v = (a[n] * b[n] - cc[n] * dd[n]).norm();
                            if v > worst {
                                worst = v;
                            }
                        }
                    }
                }
                let z = grid[zi];
                let rhs = lip * (z - c(1.0, 0.0)).norm() + 1e-12;
                TranslationRow { z, d_tilde: worst, lipschitz_rhs: rhs, pass: worst <= rhs }
            })
            .collect();
        out.push(TranslationPairReport { rows, interior_radius: radius });
    }

    Ok(TranslationReport { pairs: out, window: half })
}
