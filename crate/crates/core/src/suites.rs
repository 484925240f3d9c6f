//! Named verification suites over a configured system. Each suite
//! draws its sample elements from a seeded generator, checks the
//! identities of one layer of the theory, and reports scale-normalized
//! residuals against fixed thresholds.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::crossed;
use crate::dynsys::{full_matrix_basis, DynSystem, Symbol};
use crate::error::{CoreError, Result};
use crate::fell;
use crate::fixtures;
use crate::hmodule;
use crate::linalg::{c, hs_norm, op_norm, Mat};
use crate::rcdiag;
use crate::report::SuiteReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Module,
    Fourier,
    Crossed,
    Rc,
    Fell,
    All,
}

impl std::str::FromStr for SuiteKind {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "module" => Ok(SuiteKind::Module),
            "fourier" => Ok(SuiteKind::Fourier),
            "crossed" => Ok(SuiteKind::Crossed),
            "rc" => Ok(SuiteKind::Rc),
            "fell" => Ok(SuiteKind::Fell),
            "all" => Ok(SuiteKind::All),
            other => Err(CoreError::Usage(format!(
                "unknown suite {other:?}; expected module | fourier | crossed | rc | fell | all"
            ))),
        }
    }
}

/// Side tables produced while running the suites, for CSV export.
#[derive(Debug, Clone, Default)]
pub struct SuiteArtifacts {
    /// Dual-translation modulus of a lip operator, per dual index.
    pub v_modulus: Option<Vec<f64>>,
    /// Fiber dimensions of the full-algebra bundle.
    pub fiber_dims: Option<Vec<usize>>,
}

const TOL: f64 = 1e-9;
const TIGHT: f64 = 1e-10;

struct Samples {
    a: Mat,
    b: Mat,
    c: Mat,
    weights: Vec<Complex64>,
}

fn samples(sys: &DynSystem, seed: u64) -> Samples {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = fixtures::random_algebra_element(sys, &mut rng);
    let b = fixtures::random_algebra_element(sys, &mut rng);
    let c_mat = fixtures::random_algebra_element(sys, &mut rng);
    let weights = (0..sys.order())
        .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    Samples { a, b, c: c_mat, weights }
}

fn scale2(x: &Mat, y: &Mat, n: usize) -> f64 {
    (hs_norm(x).max(1.0) * hs_norm(y).max(1.0) * n as f64).max(1.0)
}

pub fn run_suite(
    sys: &DynSystem,
    kind: SuiteKind,
    seed: u64,
) -> Result<(SuiteReport, SuiteArtifacts)> {
    let mut artifacts = SuiteArtifacts::default();
    let report = match kind {
        SuiteKind::Module => module_suite(sys, seed)?,
        SuiteKind::Fourier => fourier_suite(sys, seed)?,
        SuiteKind::Crossed => crossed_suite(sys, seed, &mut artifacts)?,
        SuiteKind::Rc => rc_suite(sys, seed)?,
        SuiteKind::Fell => fell_suite(sys, seed, &mut artifacts)?,
        SuiteKind::All => {
            let mut all = SuiteReport::new("all");
            all.merge(module_suite(sys, seed)?);
            all.merge(fourier_suite(sys, seed)?);
            all.merge(crossed_suite(sys, seed, &mut artifacts)?);
            all.merge(rc_suite(sys, seed)?);
            all.merge(fell_suite(sys, seed, &mut artifacts)?);
            all
        }
    };
    Ok((report, artifacts))
}

fn module_suite(sys: &DynSystem, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("module");
    let s = samples(sys, seed ^ 0x11);
    let n = sys.order();

    let za = hmodule::zeta(sys, &s.a)?;
    let zb = hmodule::zeta(sys, &s.b)?;
    let sc = scale2(&s.a, &s.b, n);

    let rip_ab = hmodule::rip(sys, &s.a, &s.b)?;
    let prod: Mat = za.as_matrix().adjoint() * zb.as_matrix();
    r.check("rip_equals_zeta_pairing", op_norm(&(&rip_ab - prod))? / sc, TIGHT);

    let norm_za = za.op_norm()?;
    let rip_aa = hmodule::rip(sys, &s.a, &s.a)?;
    r.check(
        "zeta_isometry",
        (norm_za * norm_za - op_norm(&rip_aa)?).abs() / sc,
        TOL,
    );
    r.check(
        "rip_is_fixed_point",
        hmodule::fixed_point_defect(sys, &rip_ab)? / sc,
        TOL,
    );

    let m = rip_ab.clone();
    let t = sys.group().element(n - 1);
    let axioms = hmodule::module_axioms(sys, &s.a, &m, &s.b, &t)?;
    let msc = sc * hs_norm(&m).max(1.0);
    r.check("module_isometry", axioms.isometry / msc, TOL);
    r.check("module_right_multiplier", axioms.right_multiplier / msc, TOL);
    r.check("module_left_action", axioms.left_action / msc, TOL);
    r.check("module_translation", axioms.translation / msc, TOL);

    r.check(
        "ternary_identity",
        hmodule::ternary_identity(sys, &s.a, &s.b, &s.c)? / (sc * hs_norm(&s.c).max(1.0)),
        TOL,
    );

    let gram = hmodule::lip(sys, &za, &za)?;
    r.check(
        "lip_gram_psd",
        crate::linalg::psd_defect(gram.matrix())? / sc,
        TIGHT,
    );
    let ts = hmodule::lip(sys, &za, &zb)?;
    let st = hmodule::lip(sys, &zb, &za)?;
    r.check(
        "lip_adjoint_symmetry",
        ts.adjoint().sub(&st)?.op_norm()? / sc,
        TIGHT,
    );
    Ok(r)
}

fn fourier_suite(sys: &DynSystem, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("fourier");
    let s = samples(sys, seed ^ 0x22);
    let n = sys.order();
    let sc = scale2(&s.a, &s.b, n);

    // Inversion round trip over every group element.
    let table = sys.fourier_table(&s.a)?;
    let mut worst = 0.0f64;
    for t in sys.group().clone().elements() {
        let got = sys.inverse_fourier(&table, &t)?;
        let want = sys.alpha(&t, &s.a)?;
        worst = worst.max(op_norm(&(got - want))?);
    }
    r.check("fourier_inversion", worst / sc, TIGHT);

    // Spectral subspace membership of every coefficient.
    let mut worst = 0.0f64;
    for x in sys.group().clone().elements() {
        let f = sys.fourier_coeff(&s.a, &x)?;
        worst = worst.max(sys.spectral_subspace_defect(&f, &x)?);
    }
    r.check("coefficients_in_spectral_subspaces", worst / sc, TOL);

    let x = sys.group().element(n - 1);
    let y = sys.group().element(n / 2);
    let rules = sys.fourier_product_report(&s.a, &s.b, &x, &y)?;
    let psc = sc * sc;
    r.check("fourier_adjoint_rule", rules.adjoint / sc, TOL);
    r.check("fourier_product_right", rules.product_right / psc, TOL);
    r.check("fourier_product_left", rules.product_left / psc, TOL);

    // Smoothing is pointwise multiplication on the dual side.
    let smoothed = sys.smooth(&s.a, &s.weights)?;
    let mut worst = 0.0f64;
    for xi in 0..n {
        let lhs = sys.fourier_coeff_idx(&smoothed, xi);
        let rhs = sys.fourier_coeff_idx(&s.a, xi).map(|z| z * sys.ghat(&s.weights, xi));
        worst = worst.max(op_norm(&(lhs - rhs))?);
    }
    r.check("smoothing_convolution", worst / sc, TIGHT);

    let f = Symbol::from_fn(sys.group(), |t| {
        let ti = sys.group().index_of(t).unwrap();
        s.a.map(|z| z * s.weights[ti]) + s.b.map(|z| z * s.weights[(ti + 1) % n])
    })?;
    r.check("support_inequality", sys.support_inequality_defect(&f)? / sc, TIGHT);

    let (lower, upper) = sys.one_norm_bracket(&s.a, 8, seed ^ 0x2222)?;
    r.check("one_norm_bracket_order", (lower - upper).max(0.0) / sc, 1e-12);
    let mut worst = 0.0f64;
    for xi in 0..n {
        worst = worst.max(op_norm(&sys.fourier_coeff_idx(&s.a, xi))? - upper);
    }
    r.check("coefficient_norm_below_upper_bracket", worst.max(0.0) / sc, TOL);

    let mut acc = crate::linalg::zeros(sys.dim(), sys.dim());
    for xi in 0..n {
        acc += sys.fourier_coeff_idx(&s.a, xi);
    }
    r.check(
        "spectral_decomposition",
        op_norm(&(acc.map(|z| z / n as f64) - &s.a))? / sc,
        TIGHT,
    );
    Ok(r)
}

fn crossed_suite(
    sys: &DynSystem,
    seed: u64,
    artifacts: &mut SuiteArtifacts,
) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("crossed");
    let s = samples(sys, seed ^ 0x33);
    let n = sys.order();
    let sc = scale2(&s.a, &s.b, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3333);

    // Covariance of the regular pair.
    let mut worst = 0.0f64;
    for t in 0..n {
        let lam = crossed::lambda_op_idx(sys, t);
        let lhs = lam.mul(&crossed::pi(sys, &s.a)?)?.mul(&lam.adjoint())?;
        let rhs = crossed::pi(sys, &sys.alpha_idx(t, &s.a))?;
        worst = worst.max(lhs.sub(&rhs)?.op_norm()?);
    }
    r.check("pi_lambda_covariance", worst / sc, TIGHT);

    let f = Symbol::new((0..n).map(|_| fixtures::random_algebra_element(sys, &mut rng)).collect())?;
    let g = Symbol::new((0..n).map(|_| fixtures::random_algebra_element(sys, &mut rng)).collect())?;
    let rf = crossed::rho(sys, &f)?;
    let rg = crossed::rho(sys, &g)?;
    let rsc = rf.op_norm()?.max(1.0) * rg.op_norm()?.max(1.0);

    let conv = crossed::rho(sys, &crossed::convolve(sys, &f, &g)?)?;
    r.check(
        "rho_convolution_homomorphism",
        rf.mul(&rg)?.sub(&conv)?.op_norm()? / rsc,
        TOL,
    );
    let sharped = crossed::rho(sys, &crossed::sharp(sys, &f)?)?;
    r.check("rho_star_map", rf.adjoint().sub(&sharped)?.op_norm()? / rsc, TOL);

    // Dual covariance under V.
    let mut worst = 0.0f64;
    for x in sys.group().clone().elements() {
        let xi = sys.group().index_of(&x)?;
        let v = crossed::big_v_idx(sys, xi);
        let lhs = v.mul(&rf)?.mul(&v.adjoint())?;
        let rhs = crossed::rho(sys, &crossed::dual_action(sys, &f, &x)?)?;
        worst = worst.max(lhs.sub(&rhs)?.op_norm()?);
    }
    r.check("dual_covariance", worst / rf.op_norm()?.max(1.0), TIGHT);

    // Laurent symbol round trips.
    let sym = crossed::symbol_of(sys, &rf)?;
    let mut worst = 0.0f64;
    for t in 0..n {
        worst = worst.max(op_norm(&(sym.value(t) - f.value(t)))?);
    }
    r.check("symbol_of_rho_roundtrip", worst / sc, TIGHT);
    r.check(
        "rho_of_symbol_roundtrip",
        crossed::rho(sys, &sym)?.sub(&rf)?.op_norm()? / rf.op_norm()?.max(1.0),
        TIGHT,
    );

    // lip pairs are Laurent with the product symbol, and members.
    let za = hmodule::zeta(sys, &s.a)?;
    let zb = hmodule::zeta(sys, &s.b)?;
    let lip_op = hmodule::lip(sys, &za, &zb)?;
    let lip_sym = crossed::symbol_of(sys, &lip_op)?;
    let mut worst = 0.0f64;
    for t in 0..n {
        let want = &s.a * sys.alpha_idx(t, &s.b.adjoint());
        worst = worst.max(op_norm(&(lip_sym.value(t) - want))?);
    }
    r.check("lip_symbol_formula", worst / sc, TIGHT);
    let lsc = lip_op.op_norm()?.max(1.0);
    let (member, residual) = crossed::in_crossed_product(sys, &lip_op, TOL * lsc)?;
    r.check("lip_membership", if member { residual / lsc } else { 1.0 }, TOL);

    // The Fourier bridge through the dual unitaries.
    let mut worst = 0.0f64;
    for x in sys.group().clone().elements() {
        worst = worst.max(crossed::fourier_via_v(sys, &s.a, &s.b, &x)?);
    }
    r.check("fourier_via_dual_unitaries", worst / sc, TOL);

    // Modulus table of the lip operator: symmetric, zero at identity.
    let table = crossed::v_continuity_modulus(sys, &lip_op)?;
    r.check("v_modulus_zero_at_identity", table[0] / lsc, 1e-12);
    let mut worst = 0.0f64;
    for x in 0..n {
        worst = worst.max((table[x] - table[sys.group().neg_idx(x)]).abs());
    }
    r.check("v_modulus_inversion_symmetry", worst / lsc, 1e-12);
    artifacts.v_modulus = Some(table);

    r.check(
        "zeta_intertwining",
        crossed::zeta_intertwine_residual(sys, &s.weights, &s.c, &s.a)?
            / (sc * hs_norm(&s.c).max(1.0)),
        TOL,
    );
    Ok(r)
}

fn rc_suite(sys: &DynSystem, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("rc");
    let s = samples(sys, seed ^ 0x44);
    let n = sys.order();
    let sc2 = scale2(&s.a, &s.b, n).powi(2);

    let p = s.a.adjoint() * &s.a;
    let q = s.b.adjoint() * &s.b;
    let table = rcdiag::rc_modulus(sys, &p, &q)?;
    r.check("rc_zero_at_identity", table.d[0].max(table.c1[0]).max(table.c2[0]), 1e-12);

    let chain = rcdiag::rc_chain_inequality(sys, &s.a, &s.b)?;
    r.check("rc_chain_inequality", (-chain.worst_slack).max(0.0) / sc2, TOL);

    let w = sys.group().element(n - 1);
    let m = sys.fourier_coeff(&s.c, &w)?;
    let props = rcdiag::rc_property_suite(sys, &s.a, &s.b, &s.c, &m, &w, &s.weights)?;
    for item in &props.items {
        r.check(
            format!("rc_{}", item.name),
            (-item.worst_slack).max(0.0) / (sc2 * hs_norm(&m).max(1.0)),
            TOL,
        );
    }

    let strict = rcdiag::strict_continuity_modulus(sys, &s.a, &s.b)?;
    r.check("strict_modulus_zero_at_identity", strict[0], 1e-12);

    let b_pos = &q + crate::linalg::identity(sys.dim()).scale(0.1 * op_norm(&q)?.max(1e-6));
    let a_pos = b_pos.scale(0.4);
    let c_pos = s.c.adjoint() * &s.c;
    let hered = rcdiag::hereditary_probe(sys, &a_pos, &b_pos, &c_pos)?;
    r.check(
        "rc_hereditary_bound",
        (-hered.worst_slack).max(0.0) / (sc2 * hs_norm(&c_pos).max(1.0)),
        TOL,
    );

    // Finite-scale degeneracy: lip pairs always belong to the crossed
    // product.
    let lip_op = hmodule::lip(sys, &hmodule::zeta(sys, &s.a)?, &hmodule::zeta(sys, &s.b)?)?;
    let lsc = lip_op.op_norm()?.max(1.0);
    let (member, residual) = crossed::in_crossed_product(sys, &lip_op, TOL * lsc)?;
    r.check("lip_always_member_at_finite_scale", if member { residual / lsc } else { 1.0 }, TOL);
    Ok(r)
}

fn fell_suite(sys: &DynSystem, seed: u64, artifacts: &mut SuiteArtifacts) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("fell");
    let s = samples(sys, seed ^ 0x55);
    let n = sys.order();
    let d = sys.dim();
    let gens = full_matrix_basis(d);
    let bundle = fell::build_bundle(sys, &gens)?;

    r.check_eq("fiber_dimension_sum", bundle.total_fiber_dim(), d * d);
    artifacts.fiber_dims = Some(bundle.fiber_dims());

    let axioms = fell::bundle_axioms(sys, &bundle)?;
    r.check("bundle_product_axiom", axioms.product_defect, TOL);
    r.check("bundle_adjoint_axiom", axioms.adjoint_defect, TOL);

    let section = fell::Section::of_element(sys, &s.a)?;
    let back = fell::kappa(sys, &bundle, &section)?;
    let sc = hs_norm(&s.a).max(1.0) * n as f64;
    r.check("kappa_inverts_fourier_sections", op_norm(&(back - &s.a))? / sc, TIGHT);

    let cov = fell::covariance_check(sys, &bundle, &gens, &section, &sys.group().element(n - 1))?;
    r.check("kappa_covariance", cov.residual / sc, TOL);
    r.check_eq("kappa_range_is_generated_algebra", cov.fiber_span_dim, cov.algebra_dim);

    r.check(
        "fourier_diagram",
        fell::diagram_check(sys, &bundle, &s.a, &s.weights)? / sc,
        TOL,
    );

    // Morita data at finite scale: the rip span of the module over the
    // system algebra equals the unit fiber of the bundle generated by
    // that same algebra (which is the full bundle only when A = M_d).
    let alg_bundle = fell::build_bundle(sys, sys.algebra().basis())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5555);
    let mut rips = Vec::new();
    for _ in 0..(d * d + 4) {
        let a = fixtures::random_algebra_element(sys, &mut rng);
        let b = fixtures::random_algebra_element(sys, &mut rng);
        rips.push(hmodule::rip(sys, &a, &b)?);
    }
    let rip_span = crate::linalg::span_of(&rips, 1e-9)?;
    r.check_eq("rip_span_dim_equals_unit_fiber", rip_span.dim(), alg_bundle.fiber(0).dim());
    let mut worst = 0.0f64;
    for bvec in rip_span.basis() {
        worst = worst.max(alg_bundle.fiber(0).residual(bvec)?);
    }
    for bvec in alg_bundle.fiber(0).basis() {
        worst = worst.max(rip_span.residual(bvec)?);
    }
    r.check("rip_span_matches_unit_fiber", worst, TOL);

    // Left-ideal stability of the lip span, through the exact
    // intertwining identity on sampled generators.
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let a = fixtures::random_algebra_element(sys, &mut rng);
        let b = fixtures::random_algebra_element(sys, &mut rng);
        let cmat = fixtures::random_algebra_element(sys, &mut rng);
        for t in 0..n {
            let sc = scale2(&a, &b, n) * hs_norm(&cmat).max(1.0);
            worst = worst.max(crossed::lip_ideal_residual(sys, t, &cmat, &a, &b)? / sc);
        }
    }
    r.check("lip_span_left_ideal", worst, TOL);

    // Grading completeness of the algebra.
    let mut acc = crate::linalg::zeros(d, d);
    for x in 0..n {
        acc += sys.fourier_coeff_idx(&s.a, x);
    }
    r.check(
        "grading_reconstruction",
        op_norm(&(acc.map(|z| z / n as f64) - &s.a))? / sc,
        TIGHT,
    );
    Ok(r)
}
