//! The column-operator representation of the module of integrable
//! elements: `zeta(a) v|_t = alpha_t^{-1}(a) v`, the algebra-valued
//! right inner product, the operator-valued left inner product, and the
//! module identities connecting them.

use crate::blockop::{BigOp, ColumnOp};
use crate::dynsys::DynSystem;
use crate::error::{CoreError, Result};
use crate::linalg::{op_norm, zeros, Mat};

/// `zeta(a)` with blocks `alpha_{t^{-1}}(a)` in enumeration order.
pub fn zeta(sys: &DynSystem, a: &Mat) -> Result<ColumnOp> {
    sys.check_dim(a)?;
    let blocks = (0..sys.order()).map(|t| sys.alpha_inv_idx(t, a)).collect();
    ColumnOp::new(blocks)
}

/// Right inner product `<a, b>_R = sum_t alpha_t(a* b)`, a fixed point
/// of the action.
pub fn rip(sys: &DynSystem, a: &Mat, b: &Mat) -> Result<Mat> {
    sys.check_dim(a)?;
    sys.check_dim(b)?;
    let ab = a.adjoint() * b;
    let mut acc = zeros(sys.dim(), sys.dim());
    for t in 0..sys.order() {
        acc += sys.alpha_idx(t, &ab);
    }
    Ok(acc)
}

/// Left inner product `(T | S)_L = T S*` as a block operator with
/// blocks `T_t (S_s)*`.
pub fn lip(sys: &DynSystem, t_op: &ColumnOp, s_op: &ColumnOp) -> Result<BigOp> {
    t_op.check_same(s_op)?;
    if t_op.dim() != sys.dim() || t_op.len() != sys.order() {
        return Err(CoreError::Structural("column operators do not match the system".into()));
    }
    let prod = t_op.as_matrix() * s_op.as_matrix().adjoint();
    BigOp::from_matrix(sys.order(), sys.dim(), prod)
}

/// Worst-case commutation defect of `m` with the action, i.e. distance
/// from the fixed-point multiplier algebra `M_e`.
pub fn fixed_point_defect(sys: &DynSystem, m: &Mat) -> Result<f64> {
    sys.check_dim(m)?;
    let mut worst = 0.0f64;
    for t in 0..sys.order() {
        worst = worst.max(op_norm(&(sys.alpha_idx(t, m) - m))?);
    }
    Ok(worst)
}

/// Residuals of the module identities.
#[derive(Debug, Clone)]
pub struct ModuleAxiomsReport {
    /// `||zeta(a)||^2 - ||<a,a>_R||`.
    pub isometry: f64,
    /// `zeta(a) m - zeta(a m)` for a fixed-point multiplier `m`.
    pub right_multiplier: f64,
    /// `pi(b) zeta(a) - zeta(b a)`.
    pub left_action: f64,
    /// `Lambda_t zeta(a) - zeta(alpha_t(a))`.
    pub translation: f64,
}

impl ModuleAxiomsReport {
    pub fn max(&self) -> f64 {
        self.isometry
            .max(self.right_multiplier)
            .max(self.left_action)
            .max(self.translation)
    }
}

/// Check the four module identities. `m` must commute with the action
/// (verified against the system tolerance).
pub fn module_axioms(
    sys: &DynSystem,
    a: &Mat,
    m: &Mat,
    b: &Mat,
    t: &crate::group::GroupElement,
) -> Result<ModuleAxiomsReport> {
    sys.check_dim(a)?;
    sys.check_dim(b)?;
    let m_defect = fixed_point_defect(sys, m)?;
    let scale = op_norm(m)?.max(1.0);
    if m_defect > sys.tol() * scale {
        return Err(CoreError::Precondition(format!(
            "m is not a fixed-point multiplier: commutation defect {m_defect:.3e}"
        )));
    }

    let za = zeta(sys, a)?;
    let norm_za = za.op_norm()?;
    let rip_aa = rip(sys, a, a)?;
    let isometry = (norm_za * norm_za - op_norm(&rip_aa)?).abs();

    let right_multiplier = za
        .right_mul(m)?
        .sub(&zeta(sys, &(a * m))?)?
        .op_norm()?;

    let pib = crate::crossed::pi(sys, b)?;
    let left_action = pib
        .apply_col(&za)?
        .sub(&zeta(sys, &(b * a))?)?
        .op_norm()?;

    let ti = sys.group().index_of(t)?;
    let lam = crate::crossed::lambda_op_idx(sys, ti);
    let translation = lam
        .apply_col(&za)?
        .sub(&zeta(sys, &sys.alpha_idx(ti, a))?)?
        .op_norm()?;

    Ok(ModuleAxiomsReport { isometry, right_multiplier, left_action, translation })
}

/// Residual of the ternary identity
/// `zeta(a) zeta(b)* zeta(c) = zeta(a <b, c>_R)`.
pub fn ternary_identity(sys: &DynSystem, a: &Mat, b: &Mat, c: &Mat) -> Result<f64> {
    let za = zeta(sys, a)?.as_matrix();
    let zb = zeta(sys, b)?.as_matrix();
    let zc = zeta(sys, c)?.as_matrix();
    let lhs = &za * (zb.adjoint() * zc);
    let rhs = zeta(sys, &(a * rip(sys, b, c)?))?.as_matrix();
    op_norm(&(lhs - rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::full_matrix_basis;
    use crate::fixtures;
    use crate::group::FiniteAbelianGroup;
    use crate::linalg::{c, hs_inner, hs_norm, identity, psd_defect};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn swap_system() -> DynSystem {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        DynSystem::cyclic_shift(g, &full_matrix_basis(2), 1e-9).unwrap()
    }

    #[test]
    fn zeta_examples() {
        let sys = swap_system();
        // Zero maps to the zero column.
        let z = zeta(&sys, &zeros(2, 2)).unwrap();
        assert!(z.op_norm().unwrap() == 0.0);

        // Swap action, a = E11: blocks {e: E11, 1: E22} (hand oracle).
        let e11 = Mat::from_fn(2, 2, |i, j| if (i, j) == (0, 0) { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let e22 = Mat::from_fn(2, 2, |i, j| if (i, j) == (1, 1) { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let z = zeta(&sys, &e11).unwrap();
        assert!(crate::linalg::max_abs_diff(z.block(0), &e11) < 1e-14);
        assert!(crate::linalg::max_abs_diff(z.block(1), &e22) < 1e-14);

        // Trivial action: every block equals a.
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let triv = DynSystem::trivial(g, 2, &full_matrix_basis(2), 1e-9).unwrap();
        let a = fixtures::random_matrix(&mut ChaCha8Rng::seed_from_u64(1), 2);
        let z = zeta(&triv, &a).unwrap();
        for t in 0..3 {
            assert!(crate::linalg::max_abs_diff(z.block(t), &a) < 1e-14);
        }
    }

    #[test]
    fn rip_examples_and_block_oracle() {
        // Trivial action, d = 1, |G| = 2, a = b = 1 -> 2.
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let triv = DynSystem::trivial(g, 1, &[identity(1)], 1e-9).unwrap();
        let one = identity(1);
        let r = rip(&triv, &one, &one).unwrap();
        assert!((r[(0, 0)] - c(2.0, 0.0)).norm() < 1e-14);

        // a = 0 -> 0.
        let sys = fixtures::seeded_system(2);
        let z = zeros(sys.dim(), sys.dim());
        assert!(hs_norm(&rip(&sys, &z, &z).unwrap()) == 0.0);

        // rip vs zeta* zeta by block multiplication, random |G|=4, d=3
        // style fixture.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = fixtures::random_algebra_element(&sys, &mut rng);
        let b = fixtures::random_algebra_element(&sys, &mut rng);
        let r = rip(&sys, &a, &b).unwrap();
        let za = zeta(&sys, &a).unwrap();
        let zb = zeta(&sys, &b).unwrap();
        // Oracle: block-by-block product of the stacked columns.
        let mut oracle = zeros(sys.dim(), sys.dim());
        for t in 0..sys.order() {
            oracle += za.block(t).adjoint() * zb.block(t);
        }
        assert!(op_norm(&(&r - &oracle)).unwrap() < 1e-12);
        let prod = za.as_matrix().adjoint() * zb.as_matrix();
        assert!(op_norm(&(&r - &prod)).unwrap() <= 1e-10 * hs_norm(&r).max(1.0));

        // rip lands in the fixed-point algebra.
        assert!(fixed_point_defect(&sys, &r).unwrap() <= 1e-10 * hs_norm(&r).max(1.0));
    }

    #[test]
    fn lip_examples() {
        let sys = fixtures::seeded_system(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = fixtures::random_algebra_element(&sys, &mut rng);
        let b = fixtures::random_algebra_element(&sys, &mut rng);
        let za = zeta(&sys, &a).unwrap();
        let zb = zeta(&sys, &b).unwrap();

        // S = 0 gives the zero operator.
        let zzero = zeta(&sys, &zeros(sys.dim(), sys.dim())).unwrap();
        assert!(lip(&sys, &za, &zzero).unwrap().op_norm().unwrap() == 0.0);

        // lip(T, T) is a Gram operator, hence PSD.
        let gram = lip(&sys, &za, &za).unwrap();
        assert!(psd_defect(gram.matrix()).unwrap() <= 1e-12 * gram.op_norm().unwrap().max(1.0));

        // lip(T, S)* = lip(S, T).
        let ts = lip(&sys, &za, &zb).unwrap();
        let st = lip(&sys, &zb, &za).unwrap();
        assert!(ts.adjoint().sub(&st).unwrap().op_norm().unwrap() <= 1e-12 * ts.op_norm().unwrap().max(1.0));
    }

    #[test]
    fn module_axioms_trivial_and_random() {
        // Trivial action: ||zeta(I)||^2 = |G|.
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        let triv = DynSystem::trivial(g, 2, &full_matrix_basis(2), 1e-9).unwrap();
        let z = zeta(&triv, &identity(2)).unwrap();
        assert!((z.op_norm().unwrap().powi(2) - 4.0).abs() < 1e-10);

        // m = I is always a legal multiplier; random system residuals.
        let sys = fixtures::seeded_system(4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = fixtures::random_algebra_element(&sys, &mut rng);
        let b = fixtures::random_algebra_element(&sys, &mut rng);
        let m = rip(&sys, &a, &b).unwrap();
        let t = sys.group().element(sys.order() - 1);
        let rep = module_axioms(&sys, &a, &m, &b, &t).unwrap();
        let scale = hs_norm(&a).max(1.0) * hs_norm(&m).max(1.0) * sys.order() as f64;
        assert!(rep.max() <= 1e-9 * scale, "report {rep:?}");
    }

    #[test]
    fn module_axioms_rejects_non_multiplier() {
        let sys = swap_system();
        // E11 does not commute with the swap action.
        let e11 = Mat::from_fn(2, 2, |i, j| if (i, j) == (0, 0) { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let r = module_axioms(&sys, &identity(2), &e11, &identity(2), &sys.group().identity());
        assert!(matches!(r, Err(CoreError::Precondition(_))));
    }

    #[test]
    fn ternary_identity_cases() {
        let sys = fixtures::seeded_system(6);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = fixtures::random_algebra_element(&sys, &mut rng);
        let c_ = fixtures::random_algebra_element(&sys, &mut rng);
        let z = zeros(sys.dim(), sys.dim());

        assert!(ternary_identity(&sys, &a, &z, &c_).unwrap() == 0.0);

        let b = fixtures::random_algebra_element(&sys, &mut rng);
        let scale = hs_norm(&a) * hs_norm(&b) * hs_norm(&c_) * (sys.order() as f64);
        assert!(ternary_identity(&sys, &a, &b, &c_).unwrap() <= 1e-10 * scale.max(1.0));

        // a = b = c = I under the trivial action on C: both sides are
        // |G| * zeta(1).
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let triv = DynSystem::trivial(g, 1, &[identity(1)], 1e-9).unwrap();
        assert!(ternary_identity(&triv, &identity(1), &identity(1), &identity(1)).unwrap() < 1e-12);
    }

    #[test]
    fn rip_is_sesquilinear_via_polarization() {
        let sys = fixtures::seeded_system(8);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = fixtures::random_algebra_element(&sys, &mut rng);
        let b = fixtures::random_algebra_element(&sys, &mut rng);
        // Polarization: a* b = (1/4) sum_k i^{-k} (a + i^k b)* (a + i^k b),
        // so rip(a, b) equals the polarized combination of diagonal rips.
        let i = c(0.0, 1.0);
        let mut acc = zeros(sys.dim(), sys.dim());
        let mut ik = c(1.0, 0.0);
        for _ in 0..4 {
            let combo = &a + &b.map(|z| z * ik);
            let diag = rip(&sys, &combo, &combo).unwrap();
            acc += diag.map(|z| z / ik / c(4.0, 0.0));
            ik *= i;
        }
        let direct = rip(&sys, &a, &b).unwrap();
        assert!(op_norm(&(acc - direct)).unwrap() <= 1e-12 * hs_norm(&a).max(1.0) * hs_norm(&b).max(1.0) * sys.order() as f64);

        // Sesquilinearity in the first slot.
        let lam = c(0.7, -0.2);
        let lhs = rip(&sys, &a.map(|z| z * lam), &b).unwrap();
        let rhs = rip(&sys, &a, &b).unwrap().map(|z| z * lam.conj());
        assert!(op_norm(&(lhs - rhs)).unwrap() <= 1e-12 * hs_norm(&a).max(1.0) * sys.order() as f64);
    }

    #[test]
    fn zeta_inner_products_are_fixed_points() {
        let sys = fixtures::seeded_system(9);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = fixtures::random_algebra_element(&sys, &mut rng);
        let b = fixtures::random_algebra_element(&sys, &mut rng);
        let za = zeta(&sys, &a).unwrap();
        let zb = zeta(&sys, &b).unwrap();
        let inner: Mat = za.as_matrix().adjoint() * zb.as_matrix();
        assert!(fixed_point_defect(&sys, &inner).unwrap() <= 1e-9 * hs_norm(&inner).max(1.0));
        let _ = hs_inner(&a, &b);
    }
}
