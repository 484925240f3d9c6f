//! Circle functions with finitely supported Fourier data, truncation
//! windows for the bilateral shift, and banded operator machinery for
//! the windowed experiments.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::linalg::c;

/// An `L^inf(S^1)` symbol represented by finitely many Fourier
/// coefficients, together with the two-norm of whatever tail was
/// dropped when the representation was produced (zero for honest
/// trigonometric polynomials).
#[derive(Debug, Clone)]
pub struct CircleFunction {
    coeffs: BTreeMap<i64, Complex64>,
    tail2: f64,
}

impl CircleFunction {
    pub fn new(coeffs: BTreeMap<i64, Complex64>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, v)| v.norm() > 0.0).collect();
        CircleFunction { coeffs, tail2: 0.0 }
    }

    pub fn with_tail(mut self, tail2: f64) -> Self {
        self.tail2 = tail2;
        self
    }

    /// The exponential `e_m(w) = w^m`.
    pub fn exponential(m: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(m, c(1.0, 0.0));
        CircleFunction::new(coeffs)
    }

    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Self {
        CircleFunction::new(pairs.iter().cloned().collect())
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).cloned().unwrap_or_else(|| c(0.0, 0.0))
    }

    pub fn tail_two_norm(&self) -> f64 {
        self.tail2
    }

    pub fn bandwidth(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    /// Number of nonzero coefficients.
    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    /// Exact `L^2` norm (normalized Haar measure on the circle).
    pub fn two_norm(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.two_norm();
        if n == 0.0 {
            return Err(CoreError::Precondition("cannot normalize the zero function".into()));
        }
        Ok(self.scale(c(1.0 / n, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&n, &v)| (n, v * s)).collect();
        CircleFunction { coeffs, tail2: self.tail2 * s.norm() }
    }

    pub fn conj(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&n, &v)| (-n, v.conj())).collect();
        CircleFunction { coeffs, tail2: self.tail2 }
    }

    /// Pointwise product (coefficient convolution).
    pub fn product(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (&n, &a) in &self.coeffs {
            for (&m, &b) in &other.coeffs {
                *coeffs.entry(n + m).or_insert_with(|| c(0.0, 0.0)) += a * b;
            }
        }
        CircleFunction::new(coeffs).with_tail(self.tail2 + other.tail2)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&n, &v) in &other.coeffs {
            *coeffs.entry(n).or_insert_with(|| c(0.0, 0.0)) -= v;
        }
        CircleFunction::new(coeffs).with_tail(self.tail2 + other.tail2)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&n, &v) in &other.coeffs {
            *coeffs.entry(n).or_insert_with(|| c(0.0, 0.0)) += v;
        }
        CircleFunction::new(coeffs).with_tail(self.tail2 + other.tail2)
    }

    /// Multiply by `w^k` (index shift).
    pub fn times_exponential(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&n, &v)| (n + k, v)).collect();
        CircleFunction { coeffs, tail2: self.tail2 }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zc = z.conj();
        self.coeffs
            .iter()
            .map(|(&n, &v)| {
                let p = if n >= 0 { z.powi(n as i32) } else { zc.powi((-n) as i32) };
                v * p
            })
            .sum()
    }

    /// Values on `m` equispaced samples, starting at `w = 1`.
    pub fn sample(&self, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|j| {
                let theta = std::f64::consts::TAU * j as f64 / m as f64;
                self.eval(Complex64::from_polar(1.0, theta))
            })
            .collect()
    }

    /// Sampled sup norm on at least `16 * bandwidth` points (a lower
    /// bound of the true sup norm).
    pub fn sup_norm_lower(&self) -> f64 {
        let m = sample_count(self.bandwidth());
        self.sample(m).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `sum_n |n| |c_n|`, a bound on the sup norm of the derivative.
    pub fn derivative_one_norm(&self) -> f64 {
        self.coeffs.iter().map(|(&n, &v)| n.abs() as f64 * v.norm()).sum()
    }

    /// `sum_n |c_n|`, a bound on the sup norm.
    pub fn coeff_one_norm(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm()).sum()
    }
}

pub fn sample_count(bandwidth: i64) -> usize {
    (16 * bandwidth.max(0) as usize).max(4096)
}

/// Truncated Fourier series of the unit step `sign(Im w)` (square wave
/// over the circle), with the dropped tail recorded. Not normalized.
pub fn step_symbol(bandwidth: i64) -> CircleFunction {
    let mut coeffs = BTreeMap::new();
    let mut n = 1i64;
    while n <= bandwidth {
        // sign(sin theta) = sum over odd n of (4 / pi n) sin(n theta).
        let a = 2.0 / (std::f64::consts::PI * n as f64);
        coeffs.insert(n, c(0.0, -a));
        coeffs.insert(-n, c(0.0, a));
        n += 2;
    }
    // ||sign||_2^2 = 1, so the tail is what the kept coefficients miss.
    let kept: f64 = coeffs.values().map(|v| v.norm_sqr()).sum();
    let tail2 = (1.0 - kept).max(0.0).sqrt();
    CircleFunction::new(coeffs).with_tail(tail2)
}

/// Truncation window `[-N, N]` of the bilateral shift model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftWindow {
    half: i64,
}

impl ShiftWindow {
    pub fn new(half: i64) -> Result<Self> {
        if half < 1 {
            return Err(CoreError::Window("window half-width must be >= 1".into()));
        }
        Ok(ShiftWindow { half })
    }

    pub fn half(&self) -> i64 {
        self.half
    }

    pub fn dim(&self) -> usize {
        (2 * self.half + 1) as usize
    }

    pub fn idx(&self, n: i64) -> usize {
        debug_assert!(n.abs() <= self.half);
        (n + self.half) as usize
    }

    pub fn mode(&self, idx: usize) -> i64 {
        idx as i64 - self.half
    }

    pub fn contains(&self, n: i64) -> bool {
        n.abs() <= self.half
    }

    /// Guard: every symbol in an experiment must fit with room to act.
    pub fn check_bandwidth(&self, b: i64, label: &str) -> Result<()> {
        if 2 * b > self.half {
            return Err(CoreError::Window(format!(
                "{label}: bandwidth {b} too large for window half-width {}",
                self.half
            )));
        }
        Ok(())
    }
}

/// Dense-by-bands complex matrix: entry `(r, c)` is stored iff
/// `|r - c| <= half_band`.
#[derive(Debug, Clone)]
pub struct Banded {
    dim: usize,
    half_band: usize,
    data: Vec<Complex64>,
}

impl Banded {
    pub fn zeros(dim: usize, half_band: usize) -> Self {
        let hb = half_band.min(dim.saturating_sub(1));
        Banded { dim, half_band: hb, data: vec![c(0.0, 0.0); dim * (2 * hb + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_band(&self) -> usize {
        self.half_band
    }

    #[inline]
    fn slot(&self, r: usize, col: usize) -> usize {
        r * (2 * self.half_band + 1) + (col + self.half_band - r)
    }

    pub fn get(&self, r: usize, col: usize) -> Complex64 {
        if col + self.half_band < r || col > r + self.half_band {
            c(0.0, 0.0)
        } else {
            self.data[self.slot(r, col)]
        }
    }

    pub fn set(&mut self, r: usize, col: usize, v: Complex64) {
        debug_assert!(col + self.half_band >= r && col <= r + self.half_band);
        let s = self.slot(r, col);
        self.data[s] = v;
    }

    /// Toeplitz matrix of a symbol over the window: entry `(i, j) =
    /// coeff(i - j)`; this is the multiplication operator compressed to
    /// the window.
    pub fn toeplitz(w: ShiftWindow, f: &CircleFunction) -> Self {
        Banded::toeplitz_dim(w.dim(), f)
    }

    /// Toeplitz compression to `dim` consecutive modes.
    pub fn toeplitz_dim(dim: usize, f: &CircleFunction) -> Self {
        let hb = f.bandwidth() as usize;
        let mut m = Banded::zeros(dim, hb);
        for r in 0..dim {
            let lo = r.saturating_sub(m.half_band);
            let hi = (r + m.half_band).min(dim - 1);
            for col in lo..=hi {
                let diff = r as i64 - col as i64;
                m.set(r, col, f.coeff(diff));
            }
        }
        m
    }

    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        let hb = self.half_band;
        for r in 0..self.dim {
            let lo = r.saturating_sub(hb);
            let hi = (r + hb).min(self.dim - 1);
            let row = &self.data[r * (2 * hb + 1)..];
            let mut acc = c(0.0, 0.0);
            for col in lo..=hi {
                acc += row[col + hb - r] * x[col];
            }
            y[r] = acc;
        }
    }

    /// `y = self^H x`.
    pub fn matvec_adj(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        let hb = self.half_band;
        for v in y.iter_mut() {
            *v = c(0.0, 0.0);
        }
        for r in 0..self.dim {
            let lo = r.saturating_sub(hb);
            let hi = (r + hb).min(self.dim - 1);
            let row = &self.data[r * (2 * hb + 1)..];
            let xr = x[r];
            for col in lo..=hi {
                y[col] += row[col + hb - r].conj() * xr;
            }
        }
    }

    pub fn to_dense(&self) -> crate::linalg::Mat {
        crate::linalg::Mat::from_fn(self.dim, self.dim, |r, col| self.get(r, col))
    }
}


/// Top singular value of the Toeplitz compression `T[i,j] = coeff(i-j)`
/// of a symbol to `dim` consecutive modes.
///
/// Uses Golub-Kahan bidiagonalization with full reorthogonalization;
/// the compressions of multiplication operators have tightly clustered
/// top spectra, which plain power iteration cannot resolve.
pub fn toeplitz_sigma_max(h: &CircleFunction, dim: usize) -> f64 {
    debug_assert!(dim >= 1);
    if h.is_zero() {
        return 0.0;
    }
    let t = Banded::toeplitz_dim(dim, h);
    gk_sigma_max(&t)
}

fn gk_sigma_max(t: &Banded) -> f64 {
    let dim = t.dim();
    let max_steps = dim.min(420);
    let norm2 = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    // Deterministic start vector.
    let mut v: Vec<Complex64> = (0..dim)
        .map(|i| c(1.0 + 0.37 * ((i * 7 + 1) as f64).sin(), 0.19 * ((i * 3 + 2) as f64).cos()))
        .collect();
    let nv = norm2(&v);
    for z in v.iter_mut() {
        *z /= nv;
    }

    let mut vs: Vec<Vec<Complex64>> = vec![v.clone()];
    let mut us: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut work = vec![c(0.0, 0.0); dim];
    let mut best = 0.0f64;

    for step in 0..max_steps {
        // u_{k+1} = A v_{k+1} - beta_k u_k, reorthogonalized.
        t.matvec(&vs[step], &mut work);
        let mut u = work.clone();
        if let Some(prev) = us.last() {
            let b = betas[step - 1];
            for (x, p) in u.iter_mut().zip(prev) {
                *x -= p * b;
            }
        }
        for prev in &us {
            let coeff: Complex64 = prev.iter().zip(&u).map(|(p, x)| p.conj() * x).sum();
            for (x, p) in u.iter_mut().zip(prev) {
                *x -= p * coeff;
            }
        }
        let alpha = norm2(&u);
        if alpha <= 1e-300 {
            break;
        }
        for x in u.iter_mut() {
            *x /= alpha;
        }
        alphas.push(alpha);
        us.push(u);

        // v_{k+2} = A^H u_{k+1} - alpha_{k+1} v_{k+1}, reorthogonalized.
        t.matvec_adj(us.last().unwrap(), &mut work);
        let mut vnext = work.clone();
        let a = alphas[step];
        for (x, p) in vnext.iter_mut().zip(&vs[step]) {
            *x -= p * a;
        }
        for prev in &vs {
            let coeff: Complex64 = prev.iter().zip(&vnext).map(|(p, x)| p.conj() * x).sum();
            for (x, p) in vnext.iter_mut().zip(prev) {
                *x -= p * coeff;
            }
        }
        let beta = norm2(&vnext);

        // Convergence check on the bidiagonal projection.
        if step % 16 == 15 || beta <= 1e-300 || step + 1 == max_steps {
            let sigma = bidiagonal_sigma_max(&alphas, &betas);
            if beta <= 1e-300 || (sigma - best).abs() <= 1e-11 * sigma.max(1e-300) {
                return sigma.max(best);
            }
            best = best.max(sigma);
        }
        if beta <= 1e-300 {
            break;
        }
        betas.push(beta);
        for x in vnext.iter_mut() {
            *x /= beta;
        }
        vs.push(vnext);
    }
    best.max(bidiagonal_sigma_max(&alphas, &betas))
}

/// Largest singular value of the lower-bidiagonal matrix with diagonal
/// `alphas` and subdiagonal `betas`, via Sturm bisection on the
/// tridiagonal Gram matrix.
fn bidiagonal_sigma_max(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    if k == 0 {
        return 0.0;
    }
    // J = B^H B: diag d_i = alpha_i^2 + beta_i^2 (beta_k = 0),
    // off e_i = alpha_{i+1} beta_i.
    let d: Vec<f64> = (0..k)
        .map(|i| alphas[i] * alphas[i] + if i < betas.len() { betas[i] * betas[i] } else { 0.0 })
        .collect();
    let e: Vec<f64> = (0..k.saturating_sub(1))
        .map(|i| alphas[i + 1] * betas[i])
        .collect();
    tridiagonal_lambda_max(&d, &e).max(0.0).sqrt()
}

/// Largest eigenvalue of a symmetric tridiagonal matrix by bisection
/// with Sturm counts.
fn tridiagonal_lambda_max(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    if n == 1 {
        return d[0];
    }
    // Gershgorin upper bound.
    let mut hi = f64::MIN;
    let mut lo = f64::MAX;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i < n - 1 { e[i].abs() } else { 0.0 };
        hi = hi.max(d[i] + r);
        lo = lo.min(d[i] - r);
    }
    // Count of eigenvalues < x via the LDL^T pivot sequence.
    let count_below = |x: f64| -> usize {
        let mut cnt = 0usize;
        let mut piv = d[0] - x;
        if piv < 0.0 {
            cnt += 1;
        }
        for i in 1..n {
            let denom = if piv.abs() < 1e-300 { 1e-300_f64.copysign(piv) } else { piv };
            piv = d[i] - x - e[i - 1] * e[i - 1] / denom;
            if piv < 0.0 {
                cnt += 1;
            }
        }
        cnt
    };
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if count_below(mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
