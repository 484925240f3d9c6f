//! Truncation laboratory for the bilateral-shift system: the compacts
//! on `l2(Z)` carry the integer action `T -> U^n T U^{-n}` by the
//! shift, whose dual-group Fourier calculus is classical Laurent/
//! Toeplitz symbol calculus. Everything here happens on the window
//! `[-N, N]`; with finitely supported Fourier data the interior
//! comparisons are exact identities, not approximations, and every
//! report carries its truncation budget `eps_N`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::linalg::{c, op_norm, Mat};

use super::circle::{sample_count, toeplitz_sigma_max, CircleFunction, ShiftWindow};

/// `eps_N = 10 * (sum of declared truncation tails) + 1e-9`.
pub fn truncation_budget(parts: &[&CircleFunction]) -> f64 {
    10.0 * parts.iter().map(|f| f.tail_two_norm()).sum::<f64>() + 1e-9
}

/// Rank-one projection onto a unit vector with finitely many Fourier
/// coefficients: `P[i, j] = phat(i) conj(phat(j))` over the window.
pub fn rank_one_projection(phi: &CircleFunction, w: ShiftWindow) -> Result<Mat> {
    let n2 = phi.two_norm();
    if (n2 - 1.0).abs() > 1e-12 {
        return Err(CoreError::Precondition(format!(
            "projection vector must be normalized: ||phi||_2 = {n2}"
        )));
    }
    if phi.bandwidth() > w.half() {
        return Err(CoreError::Window("vector bandwidth exceeds the window".into()));
    }
    let dim = w.dim();
    Ok(Mat::from_fn(dim, dim, |i, j| {
        phi.coeff(w.mode(i)) * phi.coeff(w.mode(j)).conj()
    }))
}

/// The shifted copy `U^k T U^{-k}` on the window, by exact reindexing
/// (entries whose source lies outside the window read as zero).
pub fn shift_conjugate(t: &Mat, w: ShiftWindow, k: i64) -> Mat {
    let dim = w.dim();
    Mat::from_fn(dim, dim, |i, j| {
        let si = w.mode(i) - k;
        let sj = w.mode(j) - k;
        if w.contains(si) && w.contains(sj) {
            t[(w.idx(si), w.idx(sj))]
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Truncated orbit sum `sum_{|k| <= K} U^k T U^{-k}`.
pub fn shift_sum(t: &Mat, w: ShiftWindow, k_max: i64) -> Result<Mat> {
    if k_max < 0 || k_max > w.half() {
        return Err(CoreError::Window(format!(
            "orbit cutoff {k_max} outside the window half-width {}",
            w.half()
        )));
    }
    let dim = w.dim();
    let mut acc = Mat::zeros(dim, dim);
    for k in -k_max..=k_max {
        acc += shift_conjugate(t, w, k);
    }
    Ok(acc)
}

/// Laurent (Toeplitz) matrix of a symbol over the window:
/// `L[i, j] = coeff(i - j)`.
pub fn laurent_matrix(h: &CircleFunction, w: ShiftWindow) -> Mat {
    let dim = w.dim();
    Mat::from_fn(dim, dim, |i, j| h.coeff(i as i64 - j as i64))
}

/// Max-abs entry difference over the central block of radius `r`.
pub fn interior_max_diff(a: &Mat, b: &Mat, w: ShiftWindow, r: i64) -> f64 {
    let mut worst = 0.0f64;
    for i in -r..=r {
        for j in -r..=r {
            let d = (a[(w.idx(i), w.idx(j))] - b[(w.idx(i), w.idx(j))]).norm();
            worst = worst.max(d);
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct ShiftSumReport {
    pub window: i64,
    pub cutoff: i64,
    pub interior_radius: i64,
    /// Max-abs interior deviation of the orbit sum from the Laurent
    /// matrix of `|phi|^2`.
    pub interior_residual: f64,
    pub eps_n: f64,
}

/// Orbit-sum experiment: the truncated sum of shifted copies of the
/// rank-one projection must agree with the Laurent matrix of `|phi|^2`
/// on the interior of radius `K - bandwidth` (exactly, for finitely
/// supported data).
pub fn shift_sum_report(phi: &CircleFunction, w: ShiftWindow, k_max: i64) -> Result<ShiftSumReport> {
    let b = phi.bandwidth();
    if k_max > w.half() - b {
        return Err(CoreError::Window(format!(
            "cutoff {k_max} too large: window {} minus bandwidth {b} is the limit",
            w.half()
        )));
    }
    let p = rank_one_projection(phi, w)?;
    let total = shift_sum(&p, w, k_max)?;
    let h = phi.conj().product(phi);
    let laurent = laurent_matrix(&h, w);
    let radius = (k_max - b).max(0);
    let interior_residual = interior_max_diff(&total, &laurent, w, radius);
    Ok(ShiftSumReport {
        window: w.half(),
        cutoff: k_max,
        interior_radius: radius,
        interior_residual,
        eps_n: truncation_budget(&[phi]),
    })
}

#[derive(Debug, Clone)]
pub struct FourierShiftReport {
    pub z: Complex64,
    pub interior_radius: i64,
    /// Max-abs interior deviation between the truncated weighted orbit
    /// sum and the closed form `M_phi W_z M_phi^*`.
    pub interior_residual: f64,
    pub eps_n: f64,
}

/// Windowed Fourier coefficient of the projection at `z`: compares the
/// truncated sum `sum_{|k| <= K} z^k U^k P U^{-k}` (with `K = N - B`)
/// against the closed form whose entries are
/// `sum_n z^n phat(i-n) conj(phat(j-n))`.
pub fn fourier_shift_report(
    phi: &CircleFunction,
    z: Complex64,
    w: ShiftWindow,
) -> Result<FourierShiftReport> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(CoreError::Domain(format!("|z| must be 1, got {}", z.norm())));
    }
    let b = phi.bandwidth();
    let k_max = w.half() - b;
    if k_max < 1 {
        return Err(CoreError::Window("bandwidth leaves no room for the orbit sum".into()));
    }
    let p = rank_one_projection(phi, w)?;
    let dim = w.dim();
    let mut truncated = Mat::zeros(dim, dim);
    for k in -k_max..=k_max {
        let zk = if k >= 0 { z.powi(k as i32) } else { z.conj().powi((-k) as i32) };
        truncated += shift_conjugate(&p, w, k).map(|v| v * zk);
    }
    let closed = Mat::from_fn(dim, dim, |i, j| {
        let (mi, mj) = (w.mode(i), w.mode(j));
        let mut acc = c(0.0, 0.0);
        for n in (mi.max(mj) - b)..=(mi.min(mj) + b) {
            let zn = if n >= 0 { z.powi(n as i32) } else { z.conj().powi((-n) as i32) };
            acc += zn * phi.coeff(mi - n) * phi.coeff(mj - n).conj();
        }
        acc
    });
    let radius = (k_max - b).max(0);
    Ok(FourierShiftReport {
        z,
        interior_radius: radius,
        interior_residual: interior_max_diff(&truncated, &closed, w, radius),
        eps_n: truncation_budget(&[phi]),
    })
}

/// Everything the windowed modulus needs about one candidate pair.
///
/// In the untruncated model
/// `F(P,xz) F(Q,y) - F(P,x) F(Q,zy) = M_H W_{xzy}` with
/// `H = phi . (g_z o rot_x) . (conj(psi) o rot_{xzy})` and
/// `g_z = (conj(phi) psi) o rot_z - conj(phi) psi`,
/// and the diagonal unitary commutes with the interior compression, so
/// the compression norm is the Toeplitz norm `||T_R(H)||`. That is the
/// quantity computed here. The grid maximum is found by branch and
/// bound: dense samples of `|H|` give a certified upper bound
/// (Bernstein inflation) per pair, and only pairs whose bound exceeds
/// the best exact norm so far are evaluated.
struct ModulusEngine {
    phi: CircleFunction,
    psi_conj: CircleFunction,
    h0: CircleFunction,
    radius: i64,
    zgrid: usize,
    xygrid: usize,
    x_count: usize,
    y_count: usize,
}

impl ModulusEngine {
    fn new(
        phi: &CircleFunction,
        psi: &CircleFunction,
        radius: i64,
        zgrid: usize,
        xygrid: usize,
    ) -> Self {
        ModulusEngine {
            phi: phi.clone(),
            psi_conj: psi.conj(),
            h0: phi.conj().product(psi),
            radius,
            zgrid,
            xygrid,
            x_count: if phi.support_size() == 1 { 1 } else { xygrid },
            y_count: if psi.support_size() == 1 { 1 } else { xygrid },
        }
    }

    /// `g_z` coefficients: `(z^k - 1) h0hat(k)`.
    fn g_z(&self, z: Complex64) -> CircleFunction {
        let pairs: Vec<(i64, Complex64)> = self
            .h0
            .coeffs()
            .iter()
            .map(|(&k, &v)| {
                let zk = if k >= 0 { z.powi(k as i32) } else { z.conj().powi((-k) as i32) };
                (k, (zk - c(1.0, 0.0)) * v)
            })
            .collect();
        CircleFunction::from_pairs(&pairs)
    }

    /// `max_{x,y} || T_R(H_{x,y,z}) ||` over the sampled grids.
    fn d_tilde(&self, z_index: usize) -> f64 {
        let z = root_of_unity(z_index, self.zgrid);
        let g = self.g_z(z);
        if g.is_zero() {
            return 0.0;
        }
        let b_h = self.phi.bandwidth() + g.bandwidth() + self.psi_conj.bandwidth();

        // Sample grid: a multiple of lcm(zgrid, xygrid) that is at
        // least 64 bandwidths for a tight Bernstein factor.
        let l = lcm(self.zgrid, self.xygrid);
        let per = (64 * b_h.max(1) as usize).div_ceil(l).max(2048usize.div_ceil(l));
        let m = l * per;
        let phi_abs = sampled_abs(&self.phi, m);
        let g_abs = sampled_abs(&g, m);
        let psi_abs = sampled_abs(&self.psi_conj, m);
        let bern = 1.0 / (1.0 - std::f64::consts::PI * b_h as f64 / m as f64);

        // Cheap certified uppers per pair.
        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(self.x_count * self.y_count);
        let du_unit = m / self.xygrid;
        let dz = z_index * (m / self.zgrid);
        for jx in 0..self.x_count {
            let du = jx * du_unit;
            for jy in 0..self.y_count {
                let dv = (du + dz + jy * du_unit) % m;
                let mut sup = 0.0f64;
                for j in 0..m {
                    let v = phi_abs[j] * g_abs[(j + du) % m] * psi_abs[(j + dv) % m];
                    if v > sup {
                        sup = v;
                    }
                }
                pairs.push((sup, jx, jy));
            }
        }
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

        // Branch and bound over the exact Toeplitz norms.
        let dim = (2 * self.radius + 1) as usize;
        let mut best = 0.0f64;
        for &(sup, jx, jy) in &pairs {
            if sup * bern <= best {
                break;
            }
            let x = root_of_unity(jx, self.xygrid);
            let v = x * z * root_of_unity(jy, self.xygrid);
            let h = self
                .phi
                .product(&translate_symbol(&g, x))
                .product(&translate_symbol(&self.psi_conj, v));
            let exact = super::circle::toeplitz_sigma_max(&h, dim);
            if exact > best {
                best = exact;
            }
        }
        best
    }
}

fn root_of_unity(k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

fn sampled_abs(f: &CircleFunction, m: usize) -> Vec<f64> {
    f.sample(m).iter().map(|v| v.norm()).collect()
}

/// `f o rot_x` at the coefficient level: `coeff(k) -> x^k coeff(k)`.
fn translate_symbol(f: &CircleFunction, x: Complex64) -> CircleFunction {
    let pairs: Vec<(i64, Complex64)> = f
        .coeffs()
        .iter()
        .map(|(&k, &v)| {
            let xk = if k >= 0 { x.powi(k as i32) } else { x.conj().powi((-k) as i32) };
            (k, xk * v)
        })
        .collect();
    CircleFunction::from_pairs(&pairs)
}

/// Sampled translation oscillation of `h` at every point of the
/// `zgrid`-th roots of unity: `omega[k] = max_j |h(z_k w_j) - h(w_j)|`
/// over a sample set closed under multiplication by the grid.
pub fn omega_table(h: &CircleFunction, zgrid: usize) -> Vec<f64> {
    let per = {
        let need_bw = (16 * h.bandwidth().max(1) as usize).div_ceil(zgrid);
        let need_abs = 1024usize.div_ceil(zgrid);
        need_bw.max(need_abs).max(8)
    };
    let m = per * zgrid;
    let vals = h.sample(m);
    (0..zgrid)
        .map(|k| {
            let shift = k * per;
            (0..m)
                .map(|j| (vals[(j + shift) % m] - vals[j]).norm())
                .fold(0.0, f64::max)
        })
        .collect()
}

fn omega_at(h: &CircleFunction, z: Complex64) -> f64 {
    let m = sample_count(h.bandwidth());
    (0..m)
        .map(|j| {
            let wj = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64);
            (h.eval(z * wj) - h.eval(wj)).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct DichotomyRow {
    pub z: Complex64,
    pub d_tilde: f64,
    pub omega: f64,
    pub bound_rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct DichotomyReport {
    pub rows: Vec<DichotomyRow>,
    pub eps_n: f64,
    pub sup_phi: f64,
    pub sup_psi: f64,
    pub interior_radius: i64,
    /// `min(d_tilde)` over the two grid points adjacent to `z = 1`.
    pub floor_near_one: f64,
    pub all_pass: bool,
}

fn dichotomy_preconditions(
    phi: &CircleFunction,
    psi: &CircleFunction,
    w: ShiftWindow,
    zgrid: usize,
    xygrid: usize,
) -> Result<i64> {
    for (f, name) in [(phi, "phi"), (psi, "psi")] {
        let n2 = f.two_norm();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(CoreError::Precondition(format!(
                "{name} must be normalized: ||.||_2 = {n2}"
            )));
        }
        if 4 * f.bandwidth() > w.half() {
            return Err(CoreError::Window(format!(
                "{name}: bandwidth {} exceeds a quarter window ({})",
                f.bandwidth(),
                w.half()
            )));
        }
    }
    if zgrid < 8 || xygrid < 8 {
        return Err(CoreError::Usage("grids need at least 8 points".into()));
    }
    // Any central block at distance >= 2 * bandwidth from the window
    // edge is an exact compression of the untruncated model; cap the
    // block so the cost scales with the symbols, not the window.
    let exact_limit = w.half() - 2 * phi.bandwidth().max(psi.bandwidth());
    let radius = exact_limit.min(128i64.max(2 * (phi.bandwidth() + psi.bandwidth())));
    if radius < 1 {
        return Err(CoreError::Window("no interior left at this bandwidth".into()));
    }
    Ok(radius)
}

/// Windowed relative-continuity table for the pair of rank-one
/// projections onto `phi` and `psi`: for every `z` on the grid,
///
/// `d~(z) = max_{x,y} || F(P, xz) F(Q, y) - F(P, x) F(Q, zy) ||`
///
/// over interior compressions, against the multiplication-operator
/// bound `sup|phi| sup|psi| omega(z) + eps_N` with
/// `omega(z) = sup_w |conj(phi)psi(zw) - conj(phi)psi(w)|`.
///
/// When a vector has a single Fourier coefficient its windowed
/// coefficient operators are unimodular multiples of diagonal
/// unitaries, which commute with the compression, so the corresponding
/// grid maximum is exact with one representative; the implementation
/// uses that collapse.
pub fn rc_dichotomy(
    phi: &CircleFunction,
    psi: &CircleFunction,
    w: ShiftWindow,
    zgrid: usize,
    xygrid: usize,
) -> Result<DichotomyReport> {
    let radius = dichotomy_preconditions(phi, psi, w, zgrid, xygrid)?;
    let engine = ModulusEngine::new(phi, psi, radius, zgrid, xygrid);
    let omega = omega_table(&engine.h0, zgrid);
    let sup_phi = phi.sup_norm_lower();
    let sup_psi = psi.sup_norm_lower();
    let eps_n = truncation_budget(&[phi, psi]);

    let rows: Vec<DichotomyRow> = (0..zgrid)
        .into_par_iter()
        .map(|k| {
            let d_tilde = engine.d_tilde(k);
            let bound_rhs = sup_phi * sup_psi * omega[k] + eps_n;
            DichotomyRow {
                z: root_of_unity(k, zgrid),
                d_tilde,
                omega: omega[k],
                bound_rhs,
                pass: d_tilde <= bound_rhs,
            }
        })
        .collect();

    let floor_near_one = rows[1].d_tilde.min(rows[zgrid - 1].d_tilde);
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(DichotomyReport {
        rows,
        eps_n,
        sup_phi,
        sup_psi,
        interior_radius: radius,
        floor_near_one,
        all_pass,
    })
}

/// Focused evaluation of `(d~(z), omega(z))` at a single `z`, used by
/// the window-doubling convergence studies where a full table would be
/// wasteful.
pub fn dichotomy_at(
    phi: &CircleFunction,
    psi: &CircleFunction,
    w: ShiftWindow,
    z_index: usize,
    zgrid: usize,
    xygrid: usize,
) -> Result<(f64, f64)> {
    let radius = dichotomy_preconditions(phi, psi, w, zgrid, xygrid)?;
    let engine = ModulusEngine::new(phi, psi, radius, zgrid, xygrid);
    let d = engine.d_tilde(z_index % zgrid);
    let om = omega_at(&engine.h0, root_of_unity(z_index % zgrid, zgrid));
    Ok((d, om))
}

#[derive(Debug, Clone)]
pub struct CubeReport {
    pub z: Complex64,
    /// `omega(z)^3` from samples.
    pub lhs: f64,
    /// `sup|phi| sup|psi|` times the sum of the four coefficient-term
    /// norms from the reverse expansion.
    pub rhs: f64,
    pub slack: f64,
    pub eps_n: f64,
    pub pass: bool,
}

/// Reverse inequality: the cubed oscillation of `conj(phi) psi` is
/// controlled by four coefficient-difference norms. Evaluates both
/// sides on the truncation.
pub fn reverse_cube_bound(
    phi: &CircleFunction,
    psi: &CircleFunction,
    w: ShiftWindow,
    z: Complex64,
) -> Result<CubeReport> {
    let radius = dichotomy_preconditions(phi, psi, w, 8, 8)?;
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(CoreError::Domain("|z| must be 1".into()));
    }
    // F(Q, q) F(P, p) = M_{psi . tau_q(k0) . tau_{qp}(conj phi)} W_{qp}
    // with k0 = conj(psi) phi; each of the four terms pairs factors
    // with equal qp, so the diagonal unitaries cancel in the
    // differences and every term norm is a single Toeplitz norm.
    let k0 = psi.conj().product(phi);
    let phi_conj = phi.conj();
    let hterm = |q: Complex64, p: Complex64| {
        psi.product(&translate_symbol(&k0, q))
            .product(&translate_symbol(&phi_conj, q * p))
    };
    let one = c(1.0, 0.0);
    let zi = z.conj();
    let combos = [
        ((one, one), (zi, z)),
        ((one, zi), (zi, one)),
        ((z, one), (one, z)),
        ((z, zi), (one, one)),
    ];
    let dim = (2 * radius + 1) as usize;
    let mut sum = 0.0;
    for ((q1, p1), (q2, p2)) in combos {
        let diff = hterm(q1, p1).sub(&hterm(q2, p2));
        sum += toeplitz_sigma_max(&diff, dim);
    }

    let h = phi.conj().product(psi);
    let lhs = omega_at(&h, z).powi(3);
    let rhs = phi.sup_norm_lower() * psi.sup_norm_lower() * sum;
    let eps_n = truncation_budget(&[phi, psi]);
    Ok(CubeReport { z, lhs, rhs, slack: rhs - lhs, eps_n, pass: rhs - lhs >= -eps_n })
}

#[derive(Debug, Clone)]
pub struct PositiveReport {
    /// Sampled sup of `sum_n lambda_n |phi_n|^2`.
    pub sampled_sup: f64,
    /// Operator norm of the interior compression of the truncated
    /// strict sum of `sum_n lambda_n P_n`.
    pub windowed_norm: f64,
    /// Rigorous compression/sampling budget for the comparison.
    pub allowance: f64,
    pub eps_n: f64,
    pub interior_radius: i64,
    pub pass: bool,
}

/// Positive decomposition experiment: for pairwise orthogonal unit
/// vectors and positive weights, the truncated orbit sum of
/// `T = sum lambda_n P_n` must have windowed norm matching the sampled
/// sup of `g = sum lambda_n |phi_n|^2`.
///
/// The comparison carries an explicit allowance
/// `max(D / (R + 1), pi D / M)` with `D = sum |m| |ghat(m)|`: the first
/// term bounds the compression deficit of a multiplication operator on
/// `R + 1` modes (localized test vectors), the second the sampling
/// error of the sup on `M` points.
pub fn positive_decomposition(
    lambdas: &[f64],
    phis: &[CircleFunction],
    w: ShiftWindow,
) -> Result<PositiveReport> {
    if lambdas.len() != phis.len() || phis.is_empty() {
        return Err(CoreError::Precondition("need matching, nonempty weight/vector lists".into()));
    }
    if lambdas.iter().any(|&l| !l.is_finite() || l <= 0.0) {
        return Err(CoreError::Precondition("weights must be positive".into()));
    }
    for (i, f) in phis.iter().enumerate() {
        if (f.two_norm() - 1.0).abs() > 1e-12 {
            return Err(CoreError::Precondition(format!("vector {i} is not normalized")));
        }
        for g in phis.iter().skip(i + 1) {
            let inner: Complex64 = f
                .coeffs()
                .iter()
                .map(|(&n, &v)| v.conj() * g.coeff(n))
                .sum();
            if inner.norm() > 1e-10 {
                return Err(CoreError::Precondition(format!(
                    "vectors are not pairwise orthogonal: |<.,.>| = {:.3e}",
                    inner.norm()
                )));
            }
        }
    }
    let b_max = phis.iter().map(|f| f.bandwidth()).max().unwrap_or(0);
    let k_max = w.half() - b_max;
    if k_max < 1 {
        return Err(CoreError::Window("bandwidths leave no room for the orbit sum".into()));
    }

    let dim = w.dim();
    let mut t = Mat::zeros(dim, dim);
    let mut g = CircleFunction::new(Default::default());
    for (&lam, f) in lambdas.iter().zip(phis) {
        t += rank_one_projection(f, w)?.map(|v| v * lam);
        g = g.add(&f.conj().product(f).scale(c(lam, 0.0)));
    }
    let total = shift_sum(&t, w, k_max)?;
    let radius = (k_max - b_max).max(1);
    let dim_r = (2 * radius + 1) as usize;
    let off = (dim - dim_r) / 2;
    let block: Mat = total.view((off, off), (dim_r, dim_r)).into();
    let windowed_norm = op_norm(&block)?;

    let m = sample_count(g.bandwidth());
    let sampled_sup = g.sample(m).iter().map(|v| v.re).fold(0.0, f64::max);
    let d1 = g.derivative_one_norm();
    let allowance = (d1 / (radius as f64 + 1.0)).max(std::f64::consts::PI * d1 / m as f64);
    let eps_n = truncation_budget(&phis.iter().collect::<Vec<_>>());
    let pass = (windowed_norm - sampled_sup).abs() <= eps_n + allowance;
    Ok(PositiveReport { sampled_sup, windowed_norm, allowance, eps_n, interior_radius: radius, pass })
}

#[derive(Debug, Clone)]
pub struct TwistReport {
    /// Exact two-norm of `|delta|^2 - 1`.
    pub unimodular_deviation: f64,
    /// Table for the untwisted pair `(phi, psi)`.
    pub base: DichotomyReport,
    /// Table for the pair conjugated on both sides,
    /// `(delta phi, delta psi)`.
    pub both_twisted: DichotomyReport,
    /// Table for the mixed pair `(phi, delta psi)`.
    pub mixed: DichotomyReport,
    /// Exactness of the commutation of the twist with the shift action
    /// on windowed projections.
    pub commute_residual: f64,
}

/// Conjugation by a unimodular symbol `delta` commutes with the shift
/// action, so it maps the orbit calculus onto itself; but it can
/// destroy relative continuity of mixed pairs. The three tables make
/// that visible: base and both-twisted pass their dichotomy bounds,
/// while for a discontinuous `delta` the mixed table keeps a positive
/// floor near `z = 1`.
pub fn delta_twist_demo(
    delta: &CircleFunction,
    phi: &CircleFunction,
    psi: &CircleFunction,
    w: ShiftWindow,
    zgrid: usize,
    xygrid: usize,
) -> Result<TwistReport> {
    // Exact two-norm of |delta|^2 - 1 from the coefficients. A
    // truncated representation of a genuinely unimodular symbol with a
    // jump can never satisfy a pointwise check (the series crosses zero
    // at the jump), so the budget scales with the declared tail.
    let sq = delta.conj().product(delta);
    let one = CircleFunction::exponential(0);
    let unimodular_deviation = sq.sub(&one).two_norm();
    let limit = (3.0 * delta.tail_two_norm()).max(1e-10);
    if unimodular_deviation > limit {
        return Err(CoreError::Precondition(format!(
            "delta is not unimodular: |||delta|^2 - 1||_2 = {unimodular_deviation:.3e} (limit {limit:.1e})"
        )));
    }

    let dphi = delta.product(phi).normalized()?;
    let dpsi = delta.product(psi).normalized()?;

    let base = rc_dichotomy(phi, psi, w, zgrid, xygrid)?;
    let both_twisted = rc_dichotomy(&dphi, &dpsi, w, zgrid, xygrid)?;
    let mixed = rc_dichotomy(phi, &dpsi, w, zgrid, xygrid)?;

    // Twist-then-shift versus shift-then-twist, at the coefficient
    // level of the (unnormalized) projections; exact equality.
    let f1 = delta.product(&phi.times_exponential(1));
    let f2 = delta.product(phi).times_exponential(1);
    let mut commute_residual = 0.0f64;
    for n in -(f1.bandwidth().max(f2.bandwidth()))..=(f1.bandwidth().max(f2.bandwidth())) {
        commute_residual = commute_residual.max((f1.coeff(n) - f2.coeff(n)).norm());
    }

    Ok(TwistReport { unimodular_deviation, base, both_twisted, mixed, commute_residual })
}

/// The bundled continuous fixture pair: gentle trigonometric
/// polynomials (bandwidths 1 and 2) with small oscillation, normalized.
pub fn gentle_pair() -> (CircleFunction, CircleFunction) {
    // Irrational coefficient phases keep the maxima of the three
    // factors off every sampling grid, so the dichotomy bound retains
    // an alignment margin on top of the compression deficit.
    let phi = CircleFunction::from_pairs(&[
        (0, c(1.0, 0.0)),
        (1, Complex64::from_polar(0.15, 0.7)),
    ])
    .normalized()
    .unwrap();
    let psi = CircleFunction::from_pairs(&[
        (0, c(1.0, 0.0)),
        (-1, Complex64::from_polar(0.1, 2.31)),
        (2, Complex64::from_polar(0.05, -1.3)),
    ])
    .normalized()
    .unwrap();
    (phi, psi)
}

/// The bundled discontinuous fixture at window `N`: the truncated step
/// symbol at bandwidth `N / 8`, normalized.
pub fn step_fixture(w: ShiftWindow) -> Result<CircleFunction> {
    step_symbol(w.half() / 8).normalized()
}

pub use super::circle::step_symbol;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn e0() -> CircleFunction {
        CircleFunction::exponential(0)
    }

    #[test]
    fn projection_examples() {
        let w = ShiftWindow::new(8).unwrap();
        // phi = e_0 gives the matrix unit at (0, 0).
        let p = rank_one_projection(&e0(), w).unwrap();
        for i in 0..w.dim() {
            for j in 0..w.dim() {
                let want = if i == w.idx(0) && j == w.idx(0) { 1.0 } else { 0.0 };
                assert!((p[(i, j)] - c(want, 0.0)).norm() < 1e-15);
            }
        }

        // phi = (e0 + e1)/sqrt(2): a 2x2 block of 1/2.
        let phi = CircleFunction::from_pairs(&[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))])
            .normalized()
            .unwrap();
        let p = rank_one_projection(&phi, w).unwrap();
        for i in [w.idx(0), w.idx(1)] {
            for j in [w.idx(0), w.idx(1)] {
                assert!((p[(i, j)] - c(0.5, 0.0)).norm() < 1e-14);
            }
        }

        // Idempotency for a bandwidth-3 polynomial.
        let phi = CircleFunction::from_pairs(&[
            (0, c(0.6, 0.0)),
            (1, c(0.3, -0.2)),
            (-3, c(0.1, 0.4)),
        ])
        .normalized()
        .unwrap();
        let p = rank_one_projection(&phi, w).unwrap();
        assert!(max_abs_diff(&(&p * &p), &p) < 1e-12);
        assert!(max_abs_diff(&p.adjoint(), &p) < 1e-14);

        // Unnormalized input is rejected.
        let bad = CircleFunction::from_pairs(&[(0, c(2.0, 0.0))]);
        assert!(matches!(
            rank_one_projection(&bad, w),
            Err(CoreError::Precondition(_))
        ));
    }

    #[test]
    fn shift_sum_indicator_case() {
        // phi = e0: the orbit sum over |k| <= K is the diagonal
        // indicator of [-K, K]; |phi|^2 = 1 so the Laurent matrix is I.
        let w = ShiftWindow::new(10).unwrap();
        let rep = shift_sum_report(&e0(), w, 5).unwrap();
        assert_eq!(rep.interior_radius, 5);
        assert!(rep.interior_residual < 1e-15);

        let p = rank_one_projection(&e0(), w).unwrap();
        let total = shift_sum(&p, w, 5).unwrap();
        for i in 0..w.dim() {
            let want = if w.mode(i).abs() <= 5 { 1.0 } else { 0.0 };
            assert!((total[(i, i)] - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn shift_sum_interior_exactness() {
        let w = ShiftWindow::new(64).unwrap();
        let phi = CircleFunction::from_pairs(&[
            (0, c(0.7, 0.0)),
            (2, c(0.4, 0.3)),
            (-1, c(0.0, -0.2)),
        ])
        .normalized()
        .unwrap();
        let rep = shift_sum_report(&phi, w, 32).unwrap();
        assert!(rep.interior_residual <= 1e-12, "residual {:.3e}", rep.interior_residual);

        // Doubling the window with fixed data does not change the
        // interior statement.
        let w2 = ShiftWindow::new(128).unwrap();
        let rep2 = shift_sum_report(&phi, w2, 32).unwrap();
        assert!((rep.interior_residual - rep2.interior_residual).abs() <= 1e-9);

        // Cutoff beyond the window is rejected.
        assert!(matches!(
            shift_sum_report(&phi, w, 64),
            Err(CoreError::Window(_))
        ));
    }

    #[test]
    fn fourier_shift_cases() {
        let w = ShiftWindow::new(24).unwrap();
        let phi = CircleFunction::from_pairs(&[(0, c(0.8, 0.0)), (1, c(0.2, 0.1)), (-2, c(0.3, 0.0))])
            .normalized()
            .unwrap();

        // z = 1 reduces to the plain orbit sum.
        let rep = fourier_shift_report(&phi, c(1.0, 0.0), w).unwrap();
        assert!(rep.interior_residual <= 1e-12);

        // phi = e0, any z: the coefficient operator is the diagonal
        // (..., z^-1, 1, z, ...); checked entrywise.
        let z = Complex64::from_polar(1.0, 1.1);
        let repe = fourier_shift_report(&e0(), z, w).unwrap();
        assert!(repe.interior_residual <= 1e-13);

        // Interior agreement at z = i for a wider polynomial.
        let z = c(0.0, 1.0);
        let rep = fourier_shift_report(&phi, z, w).unwrap();
        assert!(rep.interior_residual <= 1e-12, "residual {:.3e}", rep.interior_residual);

        // |z| != 1 is a domain error.
        assert!(matches!(
            fourier_shift_report(&phi, c(1.1, 0.0), w),
            Err(CoreError::Domain(_))
        ));
    }

    #[test]
    fn modulus_engine_matches_dense_oracle() {
        // Double-sum oracle: assemble the four windowed coefficient
        // matrices densely from their defining sums, form the
        // difference of products, restrict to the interior block, and
        // compare its dense operator norm with the engine value.
        let w = ShiftWindow::new(16).unwrap();
        let phi = CircleFunction::from_pairs(&[(0, c(0.9, 0.0)), (1, c(0.2, -0.1))])
            .normalized()
            .unwrap();
        let psi = CircleFunction::from_pairs(&[(0, c(0.8, 0.0)), (-2, c(0.25, 0.2))])
            .normalized()
            .unwrap();
        let radius = w.half() - 2 * 2;
        let zgrid = 8;
        let xygrid = 8;
        let engine = ModulusEngine::new(&phi, &psi, radius, zgrid, xygrid);

        let dense_coeff = |f: &CircleFunction, v: Complex64| -> Mat {
            let dim = w.dim();
            Mat::from_fn(dim, dim, |i, j| {
                let (mi, mj) = (w.mode(i), w.mode(j));
                let b = f.bandwidth();
                let mut acc = c(0.0, 0.0);
                for n in (mi.max(mj) - b)..=(mi.min(mj) + b) {
                    let vn = if n >= 0 { v.powi(n as i32) } else { v.conj().powi((-n) as i32) };
                    acc += vn * f.coeff(mi - n) * f.coeff(mj - n).conj();
                }
                acc
            })
        };

        for z_index in [1usize, 3, 5] {
            let z = root_of_unity(z_index, zgrid);
            let got = engine.d_tilde(z_index);

            let mut want = 0.0f64;
            for jx in 0..xygrid {
                for jy in 0..xygrid {
                    let x = root_of_unity(jx, xygrid);
                    let y = root_of_unity(jy, xygrid);
                    let d = dense_coeff(&phi, x * z) * dense_coeff(&psi, y)
                        - dense_coeff(&phi, x) * dense_coeff(&psi, z * y);
                    let dim_r = (2 * radius + 1) as usize;
                    let off = (w.dim() - dim_r) / 2;
                    let block: Mat = d.view((off, off), (dim_r, dim_r)).into();
                    want = want.max(op_norm(&block).unwrap());
                }
            }
            assert!(
                (got - want).abs() <= 1e-8 * want.max(1e-9),
                "z_index {z_index}: got {got} want {want}"
            );
        }
    }

    #[test]
    fn dichotomy_constant_pair_is_exactly_zero() {
        let w = ShiftWindow::new(16).unwrap();
        let rep = rc_dichotomy(&e0(), &e0(), w, 8, 8).unwrap();
        assert!(rep.all_pass);
        for row in &rep.rows {
            assert!(row.d_tilde <= 1e-12);
        }
    }

    #[test]
    fn dichotomy_gentle_pair_small_window() {
        let (phi, psi) = gentle_pair();
        let w = ShiftWindow::new(32).unwrap();
        let rep = rc_dichotomy(&phi, &psi, w, 8, 8).unwrap();
        assert!(rep.all_pass, "rows {:?}", rep.rows);
        // Lipschitz decay: omega(z) <= derivative bound * |1 - z|.
        let h = phi.conj().product(&psi);
        let lip = h.derivative_one_norm() * std::f64::consts::FRAC_PI_2;
        for row in &rep.rows {
            assert!(row.omega <= lip * (row.z - c(1.0, 0.0)).norm() + 1e-12);
        }
    }

    #[test]
    fn dichotomy_rejects_bad_inputs() {
        let w = ShiftWindow::new(16).unwrap();
        let wide = CircleFunction::from_pairs(&[(0, c(1.0, 0.0)), (7, c(0.3, 0.0))])
            .normalized()
            .unwrap();
        assert!(matches!(
            rc_dichotomy(&wide, &e0(), w, 8, 8),
            Err(CoreError::Window(_))
        ));
        assert!(matches!(
            rc_dichotomy(&e0(), &e0(), w, 4, 8),
            Err(CoreError::Usage(_))
        ));
    }

    #[test]
    fn cube_bound_cases() {
        let w = ShiftWindow::new(24).unwrap();
        let (phi, psi) = gentle_pair();

        // z = 1: both sides vanish.
        let rep = reverse_cube_bound(&phi, &psi, w, c(1.0, 0.0)).unwrap();
        assert!(rep.lhs <= 1e-12 && rep.pass);

        // Continuous pair at a generic z.
        let z = Complex64::from_polar(1.0, 0.37);
        let rep = reverse_cube_bound(&phi, &psi, w, z).unwrap();
        assert!(rep.pass, "lhs {} rhs {}", rep.lhs, rep.rhs);
    }

    #[test]
    fn positive_decomposition_cases() {
        let w = ShiftWindow::new(24).unwrap();

        // Single phi = e0: both sides equal 1.
        let rep = positive_decomposition(&[1.0], &[e0()], w).unwrap();
        assert!((rep.sampled_sup - 1.0).abs() < 1e-12);
        assert!((rep.windowed_norm - 1.0).abs() < 1e-10);
        assert!(rep.pass);

        // Exponential family with geometric weights: sup = sum.
        let phis: Vec<CircleFunction> = (0..4).map(CircleFunction::exponential).collect();
        let lams = [1.0, 0.5, 0.25, 0.125];
        let rep = positive_decomposition(&lams, &phis, w).unwrap();
        assert!((rep.sampled_sup - 1.875).abs() < 1e-12);
        assert!(rep.pass, "{rep:?}");

        // Non-orthogonal family is rejected.
        let r = positive_decomposition(&[1.0, 1.0], &[e0(), e0()], w);
        assert!(matches!(r, Err(CoreError::Precondition(_))));
    }

    #[test]
    fn positive_decomposition_random_orthogonal_family() {
        // Two orthogonal trig vectors (Gram-Schmidt by hand) against
        // the sampled sup oracle.
        let w = ShiftWindow::new(48).unwrap();
        let f1 = CircleFunction::from_pairs(&[(0, c(0.8, 0.0)), (1, c(0.6, 0.0))])
            .normalized()
            .unwrap();
        let f2 = CircleFunction::from_pairs(&[(0, c(0.6, 0.0)), (1, c(-0.8, 0.0))])
            .normalized()
            .unwrap();
        let rep = positive_decomposition(&[1.0, 0.7], &[f1, f2], w).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn twist_demo_trivial_delta() {
        // delta = 1: all three tables coincide.
        let w = ShiftWindow::new(24).unwrap();
        let (phi, psi) = gentle_pair();
        let rep = delta_twist_demo(&e0(), &phi, &psi, w, 8, 8).unwrap();
        assert!(rep.unimodular_deviation <= 1e-14);
        assert!(rep.commute_residual <= 1e-14);
        for k in 0..rep.base.rows.len() {
            assert!((rep.base.rows[k].d_tilde - rep.both_twisted.rows[k].d_tilde).abs() <= 1e-8);
            assert!((rep.base.rows[k].d_tilde - rep.mixed.rows[k].d_tilde).abs() <= 1e-8);
        }
    }

    #[test]
    fn continuous_against_discontinuous_keeps_a_floor() {
        // Evidence for the absence of positive absolutely continuous
        // elements: pairing any continuous fixture vector against the
        // truncated step keeps the modulus bounded away from zero near
        // z = 1 (threshold 0.25, observed values above 2.6).
        let w = ShiftWindow::new(256).unwrap();
        let step = step_fixture(w).unwrap();
        let (gphi, gpsi) = gentle_pair();
        let e0v = e0();
        for cont in [&e0v, &gphi, &gpsi] {
            let (d_plus, _) = dichotomy_at(cont, &step, w, 1, 16, 16).unwrap();
            let (d_minus, _) = dichotomy_at(cont, &step, w, 15, 16, 16).unwrap();
            let floor = d_plus.min(d_minus);
            assert!(floor >= 0.25, "floor {floor}");
        }
    }

    #[test]
    fn twist_demo_rejects_non_unimodular_polynomial() {
        let w = ShiftWindow::new(24).unwrap();
        let bad = CircleFunction::from_pairs(&[(0, c(1.0, 0.0)), (1, c(0.8, 0.0))]);
        let r = delta_twist_demo(&bad, &e0(), &e0(), w, 8, 8);
        assert!(matches!(r, Err(CoreError::Precondition(_))));
    }
}
