//! The regular representation of the crossed product on `l2(G, H)`:
//! the covariant pair `(pi, Lambda)`, integrated symbols `rho(f)`, the
//! dual unitaries `V_x`, Laurent-operator detection with symbol
//! extraction, and the membership test for the crossed product.

use num_complex::Complex64;

use crate::blockop::BigOp;
use crate::dynsys::{DynSystem, Symbol};
use crate::error::{CoreError, Result};
use crate::hmodule::zeta;
use crate::linalg::{c, op_norm, zeros, Mat};

/// `pi(a)` with diagonal blocks `alpha_t^{-1}(a)`.
pub fn pi(sys: &DynSystem, a: &Mat) -> Result<BigOp> {
    sys.check_dim(a)?;
    let n = sys.order();
    let d = sys.dim();
    let mut big = BigOp::zeros(n, d);
    for t in 0..n {
        big.set_block(t, t, &sys.alpha_inv_idx(t, a));
    }
    Ok(big)
}

/// Translation unitary `Lambda_t`, block permutation `(r, t^{-1} r)`.
pub fn lambda_op(sys: &DynSystem, t: &crate::group::GroupElement) -> Result<BigOp> {
    Ok(lambda_op_idx(sys, sys.group().index_of(t)?))
}

pub fn lambda_op_idx(sys: &DynSystem, t: usize) -> BigOp {
    let n = sys.order();
    let d = sys.dim();
    let id = Mat::identity(d, d);
    let mut big = BigOp::zeros(n, d);
    for r in 0..n {
        let s = sys.group().sub_idx(r, t);
        big.set_block(r, s, &id);
    }
    big
}

/// Integrated symbol `rho(f) = sum_t pi(f(t)) Lambda_t`, i.e. the
/// kernel operator with blocks `(t, s) -> alpha_t^{-1}(f(t s^{-1}))`.
pub fn rho(sys: &DynSystem, f: &Symbol) -> Result<BigOp> {
    sys.check_symbol(f)?;
    let n = sys.order();
    let d = sys.dim();
    let mut big = BigOp::zeros(n, d);
    for t in 0..n {
        for s in 0..n {
            let r = sys.group().sub_idx(t, s);
            big.set_block(t, s, &sys.alpha_inv_idx(t, f.value(r)));
        }
    }
    Ok(big)
}

/// Dual unitary `V_x`, diagonal blocks `conj(<x, t>) I`.
pub fn big_v(sys: &DynSystem, x: &crate::group::DualElement) -> Result<BigOp> {
    Ok(big_v_idx(sys, sys.group().index_of(x)?))
}

pub fn big_v_idx(sys: &DynSystem, x: usize) -> BigOp {
    let n = sys.order();
    let d = sys.dim();
    let mut big = BigOp::zeros(n, d);
    for t in 0..n {
        let w = sys.group().pairing_conj_idx(x, t);
        big.set_block(t, t, &Mat::from_fn(d, d, |i, j| if i == j { w } else { c(0.0, 0.0) }));
    }
    big
}

/// Pointwise dual twist `f(r) -> conj(<x, r>) f(r)`, the symbol-level
/// form of conjugation by `V_x`.
pub fn dual_action(sys: &DynSystem, f: &Symbol, x: &crate::group::DualElement) -> Result<Symbol> {
    sys.check_symbol(f)?;
    let xi = sys.group().index_of(x)?;
    let values = (0..sys.order())
        .map(|r| {
            let w = sys.group().pairing_conj_idx(xi, r);
            f.value(r).map(|z| z * w)
        })
        .collect();
    Symbol::new(values)
}

/// Convolution product `(f * g)(t) = sum_s f(s) alpha_s(g(s^{-1} t))`.
pub fn convolve(sys: &DynSystem, f: &Symbol, g: &Symbol) -> Result<Symbol> {
    sys.check_symbol(f)?;
    sys.check_symbol(g)?;
    let n = sys.order();
    let values = (0..n)
        .map(|t| {
            let mut acc = zeros(sys.dim(), sys.dim());
            for s in 0..n {
                let r = sys.group().sub_idx(t, s);
                acc += f.value(s) * sys.alpha_idx(s, g.value(r));
            }
            acc
        })
        .collect();
    Symbol::new(values)
}

/// Involution `f#(t) = alpha_t(f(t^{-1})*)`, so that `rho(f)* = rho(f#)`.
pub fn sharp(sys: &DynSystem, f: &Symbol) -> Result<Symbol> {
    sys.check_symbol(f)?;
    let n = sys.order();
    let values = (0..n)
        .map(|t| {
            let inv = sys.group().neg_idx(t);
            sys.alpha_idx(t, &f.value(inv).adjoint())
        })
        .collect();
    Symbol::new(values)
}

/// Outcome of the Laurent test: worst translation-covariance defect of
/// the kernel and worst residual of the would-be symbol against the
/// algebra.
#[derive(Debug, Clone)]
pub struct LaurentCheck {
    pub is_laurent: bool,
    pub covariance_defect: f64,
    pub algebra_defect: f64,
}

/// Test whether `op` is a Laurent operator: kernel satisfying
/// `k(t r, s r) = alpha_r^{-1}(k(t, s))` with algebra-valued symbol.
pub fn is_laurent(sys: &DynSystem, op: &BigOp, tol: f64) -> Result<LaurentCheck> {
    check_big(sys, op)?;
    let n = sys.order();
    let mut covariance_defect = 0.0f64;
    for t in 0..n {
        for s in 0..n {
            let base = op.block(t, s);
            for r in 1..n {
                let tr = sys.group().add_idx(t, r);
                let sr = sys.group().add_idx(s, r);
                let moved = sys.alpha_inv_idx(r, &base);
                covariance_defect =
                    covariance_defect.max(op_norm(&(op.block(tr, sr) - moved))?);
            }
        }
    }
    let mut algebra_defect = 0.0f64;
    for r in 0..n {
        let sym = sys.alpha_idx(r, &op.block(r, 0));
        algebra_defect = algebra_defect.max(sys.algebra().residual(&sym)?);
    }
    Ok(LaurentCheck {
        is_laurent: covariance_defect <= tol && algebra_defect <= tol,
        covariance_defect,
        algebra_defect,
    })
}

/// Symbol of a Laurent operator, `f(r) = alpha_r(k(r, e))`.
///
/// Errors with the measured defects when the operator is not Laurent at
/// the system tolerance (scaled by the operator norm).
pub fn symbol_of(sys: &DynSystem, op: &BigOp) -> Result<Symbol> {
    check_big(sys, op)?;
    let scale = op.op_norm()?.max(1.0);
    let check = is_laurent(sys, op, sys.tol() * scale)?;
    if !check.is_laurent {
        return Err(CoreError::NotLaurent {
            defect: check.covariance_defect,
            algebra_defect: check.algebra_defect,
        });
    }
    symbol_of_unchecked(sys, op)
}

pub fn symbol_of_unchecked(sys: &DynSystem, op: &BigOp) -> Result<Symbol> {
    let values = (0..sys.order())
        .map(|r| sys.alpha_idx(r, &op.block(r, 0)))
        .collect();
    Symbol::new(values)
}

/// Membership in the crossed product: Laurent with algebra-valued
/// symbol. Returns the reconstruction residual
/// `||op - rho(symbol_of(op))||` when Laurent, the Laurent defect
/// otherwise.
pub fn in_crossed_product(sys: &DynSystem, op: &BigOp, tol: f64) -> Result<(bool, f64)> {
    check_big(sys, op)?;
    let check = is_laurent(sys, op, tol)?;
    if !check.is_laurent {
        return Ok((false, check.covariance_defect.max(check.algebra_defect)));
    }
    let f = symbol_of_unchecked(sys, op)?;
    let residual = rho(sys, &f)?.sub(op)?.op_norm()?;
    Ok((residual <= tol, residual))
}

/// Residual of `zeta(a)* V_x zeta(b) = F(a* b, x)`, the bridge between
/// the dual unitaries and the Fourier coefficients.
pub fn fourier_via_v(
    sys: &DynSystem,
    a: &Mat,
    b: &Mat,
    x: &crate::group::DualElement,
) -> Result<f64> {
    let xi = sys.group().index_of(x)?;
    let za = zeta(sys, a)?.as_matrix();
    let zb = zeta(sys, b)?.as_matrix();
    let v = big_v_idx(sys, xi);
    let lhs = za.adjoint() * (v.matrix() * zb);
    let rhs = sys.fourier_coeff_idx(&(a.adjoint() * b), xi);
    op_norm(&(lhs - rhs))
}

/// Table of dual-translation moduli `m(x) = ||V_x op V_x* - op||` over
/// the whole dual group, in enumeration order.
pub fn v_continuity_modulus(sys: &DynSystem, op: &BigOp) -> Result<Vec<f64>> {
    check_big(sys, op)?;
    (0..sys.order())
        .map(|x| {
            let v = big_v_idx(sys, x);
            let twisted = v.mul(op)?.mul(&v.adjoint())?;
            twisted.sub(op)?.op_norm()
        })
        .collect()
}

/// Residual of the intertwining identity
/// `rho(g (.) c) zeta(a) = zeta(c a')` with `a' = sum_t g(t) alpha_t(a)`.
pub fn zeta_intertwine_residual(
    sys: &DynSystem,
    g: &[Complex64],
    c_mat: &Mat,
    a: &Mat,
) -> Result<f64> {
    sys.check_dim(c_mat)?;
    sys.check_dim(a)?;
    if g.len() != sys.order() {
        return Err(CoreError::Structural("weight vector length must be |G|".into()));
    }
    let f = Symbol::new((0..sys.order()).map(|t| c_mat.map(|z| z * g[t])).collect())?;
    let lhs = rho(sys, &f)?.apply_col(&zeta(sys, a)?)?;
    let smoothed = sys.smooth(a, g)?;
    let rhs = zeta(sys, &(c_mat * smoothed))?;
    lhs.sub(&rhs)?.op_norm()
}

/// Residual of `rho(delta_s (x) c) lip = lip'` where the left factor of
/// the pair absorbs `c alpha_s(.)`; exactness of this identity is what
/// makes the span of left inner products a left ideal.
pub fn lip_ideal_residual(
    sys: &DynSystem,
    s: usize,
    c_mat: &Mat,
    a: &Mat,
    b: &Mat,
) -> Result<f64> {
    let za = zeta(sys, a)?;
    let zb = zeta(sys, b)?;
    let lip_ab = crate::hmodule::lip(sys, &za, &zb)?;
    let f = Symbol::delta(sys.group(), &sys.group().element(s), c_mat.clone())?;
    let lhs = rho(sys, &f)?.mul(&lip_ab)?;
    let moved = c_mat * sys.alpha_idx(s, a);
    let rhs = crate::hmodule::lip(sys, &zeta(sys, &moved)?, &zb)?;
    lhs.sub(&rhs)?.op_norm()
}

fn check_big(sys: &DynSystem, op: &BigOp) -> Result<()> {
    if op.blocks_per_side() != sys.order() || op.block_dim() != sys.dim() {
        return Err(CoreError::Structural("operator does not match the system".into()));
    }
    Ok(())
}
