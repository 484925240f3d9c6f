//! Dense complex matrix substrate: operator norms, Hilbert–Schmidt
//! geometry, spans, projections and positivity tests.
//!
//! Everything downstream (crossed products, bundles, labs) reduces its
//! checks to the handful of primitives in this module.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Dense complex matrix, the carrier for algebra elements and operators.
pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> Mat {
    Mat::identity(d, d)
}

pub fn zeros(rows: usize, cols: usize) -> Mat {
    Mat::zeros(rows, cols)
}

fn check_finite(m: &Mat) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(CoreError::Numeric("matrix has non-finite entries".into()))
    }
}

/// Hilbert–Schmidt inner product `tr(a* b)`.
pub fn hs_inner(a: &Mat, b: &Mat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm(a: &Mat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_part(m: &Mat) -> Mat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of the hermitian part, ascending.
fn hermitian_eigenvalues(m: &Mat) -> Vec<f64> {
    let h = hermitian_part(m);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

const DENSE_SVD_LIMIT: usize = 512;
const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 20_000;

/// Largest singular value of `m`.
///
/// Dense decomposition up to 512 rows/cols, power iteration on `m* m`
/// beyond that.
pub fn op_norm(m: &Mat) -> Result<f64> {
    check_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    if m.nrows().max(m.ncols()) <= DENSE_SVD_LIMIT {
        Ok(sval_max_dense(m))
    } else {
        Ok(sval_max_power(m))
    }
}

/// Dense top singular value via the hermitian eigenproblem of the Gram
/// matrix (whichever of `m* m` / `m m*` is smaller).
fn sval_max_dense(m: &Mat) -> f64 {
    let g = if m.ncols() <= m.nrows() {
        m.adjoint() * m
    } else {
        m * m.adjoint()
    };
    let top = SymmetricEigen::new(g)
        .eigenvalues
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    top.max(0.0).sqrt()
}

fn sval_max_power(m: &Mat) -> f64 {
    let n = m.ncols();
    // Deterministic generic start vector.
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| c(1.0 + 0.37 * ((i * 7 + 1) as f64).sin(), 0.19 * ((i * 3 + 2) as f64).cos()))
        .collect();
    let mut nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= nv;
    }
    let mut sigma2 = 0.0f64;
    for _ in 0..POWER_MAX_ITERS {
        let dv = DMatrix::from_column_slice(n, 1, &v);
        let w = m * &dv;
        let u = m.adjoint() * w;
        let new_sigma2 = u.iter().zip(v.iter()).map(|(a, b)| (a * b.conj()).re).sum::<f64>();
        nv = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nv == 0.0 {
            return 0.0;
        }
        for (slot, z) in v.iter_mut().zip(u.iter()) {
            *slot = z / nv;
        }
        if (new_sigma2 - sigma2).abs() <= POWER_TOL * new_sigma2.abs().max(1e-300) {
            sigma2 = new_sigma2;
            break;
        }
        sigma2 = new_sigma2;
    }
    sigma2.max(0.0).sqrt()
}

/// `max(0, -lambda_min((m + m*)/2))`: zero exactly when the hermitian
/// part of `m` is positive semidefinite.
pub fn psd_defect(m: &Mat) -> Result<f64> {
    check_finite(m)?;
    if m.nrows() != m.ncols() {
        return Err(CoreError::Structural(format!(
            "psd_defect needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let lam_min = hermitian_eigenvalues(m)[0];
    Ok((-lam_min).max(0.0))
}

/// An orthonormal (Hilbert–Schmidt) basis of a span of matrices of one
/// common shape.
#[derive(Debug, Clone)]
pub struct Subspace {
    rows: usize,
    cols: usize,
    basis: Vec<Mat>,
    tol: f64,
}

impl Subspace {
    pub fn empty(rows: usize, cols: usize, tol: f64) -> Self {
        Subspace { rows, cols, basis: Vec::new(), tol }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn check_shape(&self, m: &Mat) -> Result<()> {
        if m.nrows() != self.rows || m.ncols() != self.cols {
            return Err(CoreError::Structural(format!(
                "shape mismatch: expected {}x{}, got {}x{}",
                self.rows,
                self.cols,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }

    /// Orthogonal projection of `m` onto the span.
    pub fn project(&self, m: &Mat) -> Result<Mat> {
        self.check_shape(m)?;
        let mut p = zeros(self.rows, self.cols);
        for b in &self.basis {
            let coeff = hs_inner(b, m);
            p += b.map(|z| z * coeff);
        }
        Ok(p)
    }

    /// Hilbert–Schmidt norm of `m - proj(m)`; zero (up to tol) iff
    /// `m` lies in the span.
    pub fn residual(&self, m: &Mat) -> Result<f64> {
        let p = self.project(m)?;
        Ok(hs_norm(&(m - p)))
    }

    pub fn contains(&self, m: &Mat) -> Result<bool> {
        Ok(self.residual(m)? <= self.tol * hs_norm(m).max(1.0))
    }

    /// Try to extend the basis with `m`; returns true when the dimension
    /// grew. Uses twice-iterated Gram–Schmidt.
    pub fn absorb(&mut self, m: &Mat, scale: f64) -> Result<bool> {
        self.check_shape(m)?;
        let mut v = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let coeff = hs_inner(b, &v);
                v -= b.map(|z| z * coeff);
            }
        }
        let nv = hs_norm(&v);
        if nv <= self.tol * scale.max(1e-300) {
            return Ok(false);
        }
        self.basis.push(v.map(|z| z / nv));
        Ok(true)
    }
}

/// Like [`span_of`] but with the rank threshold anchored at an
/// explicit `scale` instead of the largest input norm; needed when the
/// inputs may all be numerical zeros of a larger computation.
pub fn span_of_scaled(mats: &[Mat], tol: f64, scale: f64) -> Result<Subspace> {
    if mats.is_empty() {
        return Err(CoreError::Structural("span needs at least one matrix".into()));
    }
    let rows = mats[0].nrows();
    let cols = mats[0].ncols();
    let mut s = Subspace::empty(rows, cols, tol);
    for m in mats {
        check_finite(m)?;
        s.absorb(m, scale)?;
    }
    Ok(s)
}

/// Orthonormal span of `mats` with numerical rank cut at `tol`
/// (relative to the largest input HS norm).
pub fn span_of(mats: &[Mat], tol: f64) -> Result<Subspace> {
    if mats.is_empty() {
        return Err(CoreError::Structural("span_of needs at least one matrix".into()));
    }
    let rows = mats[0].nrows();
    let cols = mats[0].ncols();
    for m in mats {
        if m.nrows() != rows || m.ncols() != cols {
            return Err(CoreError::Structural(format!(
                "span_of: mixed shapes {}x{} vs {}x{}",
                rows,
                cols,
                m.nrows(),
                m.ncols()
            )));
        }
        check_finite(m)?;
    }
    let scale = mats.iter().map(hs_norm).fold(0.0f64, f64::max);
    let mut s = Subspace::empty(rows, cols, tol);
    for m in mats {
        s.absorb(m, scale)?;
    }
    Ok(s)
}

/// Span with the default scale-invariant threshold `1e-9 * max HS norm`.
pub fn span_of_default(mats: &[Mat]) -> Result<Subspace> {
    span_of(mats, 1e-9)
}

/// Max-abs entry of the difference, a cheap exactness measure.
pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
