//! Quantitative relative-continuity diagnostics.
//!
//! For integrable `p, q` the modulus table
//!
//! `d(z) = max_{x,y} || F(p, xz) F(q, y) - F(p, x) F(q, zy) ||`
//!
//! measures how far the pair is from commuting its Fourier data past a
//! dual translation by `z`; the pair is relatively continuous when the
//! table vanishes as `z -> e`. On a finite dual the table itself is the
//! deliverable, together with the two identity-point defect sequences
//!
//! `c1(z) = ||F(p,z) F(q,e) - F(p,e) F(q,z)||`,
//! `c2(z) = ||F(p,z) F(q,z^{-1}) - F(p,e) F(q,e)||`,
//!
//! and the inequalities that relate all of these to the dual-translation
//! modulus of the operator `zeta(a) zeta(b)*`.

use num_complex::Complex64;

use crate::crossed;
use crate::dynsys::DynSystem;
use crate::error::{CoreError, Result};
use crate::hmodule::{lip, zeta};
use crate::linalg::{op_norm, Mat};

/// Modulus table over the dual group, indexed by enumeration order.
#[derive(Debug, Clone)]
pub struct RcTable {
    pub d: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
}

impl RcTable {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

/// Full modulus table for the pair `(p, q)` by exhaustive enumeration
/// of `(x, y, z)` over the dual group.
pub fn rc_modulus(sys: &DynSystem, p: &Mat, q: &Mat) -> Result<RcTable> {
    sys.check_dim(p)?;
    sys.check_dim(q)?;
    let n = sys.order();
    let fp: Vec<Mat> = (0..n).map(|x| sys.fourier_coeff_idx(p, x)).collect();
    let fq: Vec<Mat> = (0..n).map(|x| sys.fourier_coeff_idx(q, x)).collect();

    let mut d = vec![0.0f64; n];
    let mut c1 = vec![0.0f64; n];
    let mut c2 = vec![0.0f64; n];
    for z in 0..n {
        let zinv = sys.group().neg_idx(z);
        c1[z] = op_norm(&(&fp[z] * &fq[0] - &fp[0] * &fq[z]))?;
        c2[z] = op_norm(&(&fp[z] * &fq[zinv] - &fp[0] * &fq[0]))?;
        let mut worst = 0.0f64;
        for x in 0..n {
            let xz = sys.group().add_idx(x, z);
            for y in 0..n {
                let zy = sys.group().add_idx(z, y);
                let diff = &fp[xz] * &fq[y] - &fp[x] * &fq[zy];
                worst = worst.max(op_norm(&diff)?);
            }
        }
        d[z] = worst;
    }
    Ok(RcTable { d, c1, c2 })
}

/// Pointwise slack report for the chain inequality
/// `d_{a*a, b*b}(z) <= ||zeta(a)|| m_T(z) ||zeta(b)||`
/// with `T = zeta(a) zeta(b)*` and `m_T` its dual-translation modulus.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub d: Vec<f64>,
    pub bound: Vec<f64>,
    /// `min_z (bound - d)`.
    pub worst_slack: f64,
}

pub fn rc_chain_inequality(sys: &DynSystem, a: &Mat, b: &Mat) -> Result<ChainReport> {
    let p = a.adjoint() * a;
    let q = b.adjoint() * b;
    let table = rc_modulus(sys, &p, &q)?;
    let za = zeta(sys, a)?;
    let zb = zeta(sys, b)?;
    let na = za.op_norm()?;
    let nb = zb.op_norm()?;
    let t_op = lip(sys, &za, &zb)?;
    let m = crossed::v_continuity_modulus(sys, &t_op)?;
    let bound: Vec<f64> = m.iter().map(|&mz| na * mz * nb).collect();
    let worst_slack = bound
        .iter()
        .zip(&table.d)
        .map(|(b, d)| b - d)
        .fold(f64::INFINITY, f64::min);
    Ok(ChainReport { d: table.d, bound, worst_slack })
}

/// One verified inequality or equality, with the worst slack over the
/// dual group (negative slack = violation).
#[derive(Debug, Clone)]
pub struct SlackItem {
    pub name: &'static str,
    pub worst_slack: f64,
}

/// Report of the four modulus laws: additivity, adjoint symmetry (an
/// equality), multiplier contraction, and the smoothing bound.
#[derive(Debug, Clone)]
pub struct RcPropertyReport {
    pub items: Vec<SlackItem>,
}

impl RcPropertyReport {
    pub fn worst(&self) -> f64 {
        self.items.iter().map(|i| i.worst_slack).fold(f64::INFINITY, f64::min)
    }
}

/// Verify, pointwise over `z`:
///
/// 1. `d_{a+b,c}(z) <= d_{a,c}(z) + d_{b,c}(z)`
/// 2. `d_{b*,a*}(z) = d_{a,b}(z^{-1})` (equality)
/// 3. `d_{m a, b}(z) <= ||m|| d_{a,b}(z)` for `m` in the `w`-spectral
///    multiplier subspace (precondition, checked)
/// 4. `d_{a',b}(z) <= sup_x |ghat(xz) - ghat(x)| U(a) U(b) +
///    ||ghat||_inf d_{a,b}(z)` for `a' = smooth(a, g)`, with `U` the
///    one-norm upper bracket.
pub fn rc_property_suite(
    sys: &DynSystem,
    a: &Mat,
    b: &Mat,
    c: &Mat,
    m: &Mat,
    w: &crate::group::DualElement,
    g: &[Complex64],
) -> Result<RcPropertyReport> {
    sys.check_dim(a)?;
    sys.check_dim(b)?;
    sys.check_dim(c)?;
    sys.check_dim(m)?;
    let n = sys.order();
    let wi = sys.group().index_of(w)?;

    // Precondition: m lies in the w-spectral subspace.
    let m_defect = sys.spectral_subspace_defect(m, w)?;
    if m_defect > sys.tol() * op_norm(m)?.max(1.0) {
        return Err(CoreError::Precondition(format!(
            "m is not in the {wi}-spectral multiplier subspace: defect {m_defect:.3e}"
        )));
    }

    let mut items = Vec::new();

    // (1) additivity against c.
    let d_ac = rc_modulus(sys, a, c)?;
    let d_bc = rc_modulus(sys, b, c)?;
    let d_abc = rc_modulus(sys, &(a + b), c)?;
    let slack1 = (0..n)
        .map(|z| d_ac.d[z] + d_bc.d[z] - d_abc.d[z])
        .fold(f64::INFINITY, f64::min);
    items.push(SlackItem { name: "additivity", worst_slack: slack1 });

    // (2) adjoint symmetry, an equality: report the negated absolute
    // deviation so that "slack >= -tol" reads the same way.
    let d_ab = rc_modulus(sys, a, b)?;
    let d_adj = rc_modulus(sys, &b.adjoint(), &a.adjoint())?;
    let dev2 = (0..n)
        .map(|z| {
            let zinv = sys.group().neg_idx(z);
            (d_adj.d[z] - d_ab.d[zinv]).abs()
        })
        .fold(0.0f64, f64::max);
    items.push(SlackItem { name: "adjoint_symmetry", worst_slack: -dev2 });

    // (3) multiplier contraction.
    let d_mab = rc_modulus(sys, &(m * a), b)?;
    let nm = op_norm(m)?;
    let slack3 = (0..n)
        .map(|z| nm * d_ab.d[z] - d_mab.d[z])
        .fold(f64::INFINITY, f64::min);
    items.push(SlackItem { name: "multiplier_bound", worst_slack: slack3 });

    // (4) smoothing bound.
    if g.len() != n {
        return Err(CoreError::Structural("weight vector length must be |G|".into()));
    }
    let a_smooth = sys.smooth(a, g)?;
    let d_sab = rc_modulus(sys, &a_smooth, b)?;
    let ua = sys.one_norm_upper(a)?;
    let ub = sys.one_norm_upper(b)?;
    let ghat: Vec<Complex64> = (0..n).map(|x| sys.ghat(g, x)).collect();
    let ghat_sup = ghat.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let slack4 = (0..n)
        .map(|z| {
            let osc = (0..n)
                .map(|x| (ghat[sys.group().add_idx(x, z)] - ghat[x]).norm())
                .fold(0.0f64, f64::max);
            osc * ua * ub + ghat_sup * d_ab.d[z] - d_sab.d[z]
        })
        .fold(f64::INFINITY, f64::min);
    items.push(SlackItem { name: "smoothing_bound", worst_slack: slack4 });

    Ok(RcPropertyReport { items })
}

/// Strict-continuity modulus `s(z) = max_x ||F(a, zx) b - F(a, x) b||`.
pub fn strict_continuity_modulus(sys: &DynSystem, a: &Mat, b: &Mat) -> Result<Vec<f64>> {
    sys.check_dim(a)?;
    sys.check_dim(b)?;
    let n = sys.order();
    let fa: Vec<Mat> = (0..n).map(|x| sys.fourier_coeff_idx(a, x)).collect();
    (0..n)
        .map(|z| {
            let mut worst = 0.0f64;
            for x in 0..n {
                let zx = sys.group().add_idx(z, x);
                worst = worst.max(op_norm(&((&fa[zx] - &fa[x]) * b))?);
            }
            Ok(worst)
        })
        .collect()
}

/// Report of the hereditary probe for `0 <= a <= b` with `b` paired
/// against `c`.
#[derive(Debug, Clone)]
pub struct HereditaryReport {
    /// `||T||` of the contraction with `a^{1/2} = T b^{1/2}`.
    pub contraction_norm: f64,
    /// Residual of the factorization `a^{1/2} - T b^{1/2}`.
    pub factor_residual: f64,
    /// `min_z (bound(z) - d_{a,c}(z))` for the chain bound
    /// `||zeta(a1)|| ||pi(T)|| m_S(z) ||zeta(c1)||`,
    /// `S = zeta(b1) zeta(c1)*`.
    pub worst_slack: f64,
}

/// Constructive form of the hereditary property: factor `a^{1/2}`
/// through `b^{1/2}` by least squares and verify the resulting chain
/// bound on `d_{a,c}`. Errors when no contraction exists within
/// tolerance (i.e. `a <= b` fails numerically).
pub fn hereditary_probe(sys: &DynSystem, a: &Mat, b: &Mat, c: &Mat) -> Result<HereditaryReport> {
    sys.check_dim(a)?;
    sys.check_dim(b)?;
    sys.check_dim(c)?;
    let a1 = hermitian_sqrt(a)?;
    let b1 = hermitian_sqrt(b)?;
    let c1 = hermitian_sqrt(c)?;

    // Least squares T b1 = a1  =>  T = a1 b1^+.
    let t = &a1 * pseudo_inverse(&b1)?;
    let factor_residual = op_norm(&(&t * &b1 - &a1))?;
    let contraction_norm = op_norm(&t)?;
    let scale = op_norm(&a1)?.max(1.0);
    if factor_residual > sys.tol() * scale * 1e3 || contraction_norm > 1.0 + 1e-7 {
        return Err(CoreError::Precondition(format!(
            "no contraction T with a^(1/2) = T b^(1/2): residual {factor_residual:.3e}, ||T|| = {contraction_norm:.6}"
        )));
    }

    let d_ac = rc_modulus(sys, a, c)?;
    let s_op = lip(sys, &zeta(sys, &b1)?, &zeta(sys, &c1)?)?;
    let m_s = crossed::v_continuity_modulus(sys, &s_op)?;
    let za1 = zeta(sys, &a1)?.op_norm()?;
    let zc1 = zeta(sys, &c1)?.op_norm()?;
    let pit = pi_extended_norm(sys, &t)?;
    let worst_slack = (0..sys.order())
        .map(|z| za1 * pit * m_s[z] * zc1 - d_ac.d[z])
        .fold(f64::INFINITY, f64::min);

    Ok(HereditaryReport { contraction_norm, factor_residual, worst_slack })
}

/// `||pi(T)||` for the extension of `pi` to all of `B(H)`; equals the
/// worst conjugated norm over the group.
fn pi_extended_norm(sys: &DynSystem, t: &Mat) -> Result<f64> {
    let mut worst = 0.0f64;
    for s in 0..sys.order() {
        worst = worst.max(op_norm(&sys.alpha_inv_idx(s, t))?);
    }
    Ok(worst)
}

/// Square root of a PSD matrix through its hermitian eigensystem;
/// tiny negative eigenvalues are clipped.
fn hermitian_sqrt(m: &Mat) -> Result<Mat> {
    let defect = crate::linalg::psd_defect(m)?;
    let scale = op_norm(m)?.max(1.0);
    if defect > 1e-9 * scale {
        return Err(CoreError::Precondition(format!(
            "matrix is not PSD: defect {defect:.3e}"
        )));
    }
    let h = crate::linalg::hermitian_part(m);
    let eig = nalgebra::SymmetricEigen::new(h);
    let d = m.nrows();
    let diag = Mat::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(eig.eigenvalues[i].max(0.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(&eig.eigenvectors * diag * eig.eigenvectors.adjoint())
}

/// Moore-Penrose pseudo-inverse via the dense SVD.
fn pseudo_inverse(m: &Mat) -> Result<Mat> {
    let svd = m.clone().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max().max(1.0);
    svd.pseudo_inverse(eps)
        .map_err(|e| CoreError::Numeric(format!("pseudo-inverse failed: {e}")))
}
