//! Acceptance suite: every exit-gate property of the toolkit, one test
//! per criterion, at fixed tolerances. Each test prints a single
//! PASS/FAIL line (visible with `--nocapture`).

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cdsys_core::crossed;
use cdsys_core::dynsys::{full_matrix_basis, Symbol};
use cdsys_core::fell;
use cdsys_core::fixtures;
use cdsys_core::hmodule;
use cdsys_core::labs::{self, CircleFunction, ShiftWindow};
use cdsys_core::linalg::{c, hs_norm, op_norm, span_of, zeros, Mat};
use cdsys_core::rcdiag;

/// Floor for the discontinuous-pair modulus near `z = 1`, frozen from
/// the window-doubling study over half-widths {128, 256, 512} at a
/// 16-point z-grid (observed floors 2.830 / 2.634 / 2.474; the frozen
/// value sits 11% below the largest-window result).
const STEP_FLOOR: f64 = 2.2;
const STEP_ZGRID: usize = 16;
const STEP_XYGRID: usize = 64;

fn report(criterion: &str, pass: bool, detail: String) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn sample_pair(sys: &cdsys_core::dynsys::DynSystem, seed: u64) -> (Mat, Mat) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        fixtures::random_algebra_element(sys, &mut rng),
        fixtures::random_algebra_element(sys, &mut rng),
    )
}

#[test]
fn criterion_01_fourier_inversion() {
    let mut worst = 0.0f64;
    for (i, sys) in fixtures::acceptance_systems().iter().enumerate() {
        let (a, _) = sample_pair(sys, 100 + i as u64);
        let table = sys.fourier_table(&a).unwrap();
        for t in sys.group().clone().elements() {
            let got = sys.inverse_fourier(&table, &t).unwrap();
            let want = sys.alpha(&t, &a).unwrap();
            worst = worst.max(op_norm(&(got - want)).unwrap());
        }
    }
    report(
        "01 fourier_inversion",
        worst <= 1e-10,
        format!("max round-trip residual {worst:.3e} <= 1e-10"),
    );
}

#[test]
fn criterion_02_module_representation_identities() {
    let mut worst = 0.0f64;
    for (i, sys) in fixtures::acceptance_systems().iter().enumerate() {
        let (a, b) = sample_pair(sys, 200 + i as u64);
        let za = hmodule::zeta(sys, &a).unwrap();
        let zb = hmodule::zeta(sys, &b).unwrap();
        let rip_ab = hmodule::rip(sys, &a, &b).unwrap();
        let pairing: Mat = za.as_matrix().adjoint() * zb.as_matrix();
        worst = worst.max(op_norm(&(&rip_ab - pairing)).unwrap());

        let norm_za = za.op_norm().unwrap();
        let rip_aa = hmodule::rip(sys, &a, &a).unwrap();
        worst = worst.max((norm_za * norm_za - op_norm(&rip_aa).unwrap()).abs());
    }
    report(
        "02 module_representation",
        worst <= 1e-9,
        format!("max identity residual {worst:.3e} <= 1e-9"),
    );
}

#[test]
fn criterion_03_laurent_symbol_round_trips() {
    let mut worst_symbol = 0.0f64;
    let mut worst_op = 0.0f64;
    let mut worst_lip = 0.0f64;
    for (i, sys) in fixtures::acceptance_systems().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(300 + i as u64);
        let f = Symbol::new(
            (0..sys.order())
                .map(|_| fixtures::random_algebra_element(sys, &mut rng))
                .collect(),
        )
        .unwrap();
        let op = crossed::rho(sys, &f).unwrap();
        let sym = crossed::symbol_of(sys, &op).unwrap();
        for t in 0..sys.order() {
            worst_symbol =
                worst_symbol.max(op_norm(&(sym.value(t) - f.value(t))).unwrap());
        }
        let back = crossed::rho(sys, &sym).unwrap();
        worst_op = worst_op.max(back.sub(&op).unwrap().op_norm().unwrap());

        let (a, b) = sample_pair(sys, 310 + i as u64);
        let lip_op = hmodule::lip(
            sys,
            &hmodule::zeta(sys, &a).unwrap(),
            &hmodule::zeta(sys, &b).unwrap(),
        )
        .unwrap();
        let lip_sym = crossed::symbol_of(sys, &lip_op).unwrap();
        for t in 0..sys.order() {
            let want = &a * sys.alpha_idx(t, &b.adjoint());
            worst_lip = worst_lip.max(op_norm(&(lip_sym.value(t) - want)).unwrap());
        }
    }
    let worst = worst_symbol.max(worst_op).max(worst_lip);
    report(
        "03 laurent_symbols",
        worst <= 1e-10,
        format!(
            "symbol {worst_symbol:.3e}, operator {worst_op:.3e}, lip symbol {worst_lip:.3e} <= 1e-10"
        ),
    );
}

#[test]
fn criterion_04_dual_covariance() {
    let mut worst = 0.0f64;
    for (i, sys) in fixtures::acceptance_systems().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + i as u64);
        let f = Symbol::new(
            (0..sys.order())
                .map(|_| fixtures::random_algebra_element(sys, &mut rng))
                .collect(),
        )
        .unwrap();
        let rf = crossed::rho(sys, &f).unwrap();
        for x in sys.group().clone().elements() {
            let xi = sys.group().index_of(&x).unwrap();
            let v = crossed::big_v_idx(sys, xi);
            let lhs = v.mul(&rf).unwrap().mul(&v.adjoint()).unwrap();
            let rhs = crossed::rho(sys, &crossed::dual_action(sys, &f, &x).unwrap()).unwrap();
            worst = worst.max(lhs.sub(&rhs).unwrap().op_norm().unwrap());
        }
    }
    report(
        "04 dual_covariance",
        worst <= 1e-10,
        format!("max conjugation residual {worst:.3e} <= 1e-10"),
    );
}

#[test]
fn criterion_05_rc_inequalities() {
    let mut worst_violation = 0.0f64;
    let mut worst_adjoint = 0.0f64;
    for (i, sys) in fixtures::acceptance_systems().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + i as u64);
        let a = fixtures::random_algebra_element(sys, &mut rng);
        let b = fixtures::random_algebra_element(sys, &mut rng);
        let cc = fixtures::random_algebra_element(sys, &mut rng);
        let w = sys.group().element(sys.order() - 1);
        let m = sys.fourier_coeff(&cc, &w).unwrap();
        let g: Vec<Complex64> = (0..sys.order())
            .map(|t| c(0.3 * (t as f64 + 1.0).sin(), 0.2 * (t as f64).cos()))
            .collect();

        let props = rcdiag::rc_property_suite(sys, &a, &b, &cc, &m, &w, &g).unwrap();
        for item in &props.items {
            if item.name == "adjoint_symmetry" {
                worst_adjoint = worst_adjoint.max(-item.worst_slack);
            } else {
                worst_violation = worst_violation.max((-item.worst_slack).max(0.0));
            }
        }
        let chain = rcdiag::rc_chain_inequality(sys, &a, &b).unwrap();
        worst_violation = worst_violation.max((-chain.worst_slack).max(0.0));
    }
    report(
        "05 rc_inequalities",
        worst_violation <= 1e-9 && worst_adjoint <= 1e-9,
        format!(
            "worst bound violation {worst_violation:.3e}, adjoint equality deviation {worst_adjoint:.3e} <= 1e-9"
        ),
    );
}

#[test]
fn criterion_06_fell_bundle() {
    let mut dims_ok = true;
    let mut worst_axiom = 0.0f64;
    let mut worst_diagram = 0.0f64;
    for (i, sys) in fixtures::acceptance_systems().iter().enumerate() {
        let d = sys.dim();
        let bundle = fell::build_bundle(sys, &full_matrix_basis(d)).unwrap();
        dims_ok &= bundle.total_fiber_dim() == d * d;
        let axioms = fell::bundle_axioms(sys, &bundle).unwrap();
        worst_axiom = worst_axiom.max(axioms.max());
        let mut rng = ChaCha8Rng::seed_from_u64(600 + i as u64);
        let a = fixtures::random_algebra_element(sys, &mut rng);
        let g: Vec<Complex64> = (0..sys.order())
            .map(|t| c(0.4 * (t as f64 + 0.3).cos(), -0.1 * (t as f64).sin()))
            .collect();
        worst_diagram = worst_diagram.max(fell::diagram_check(sys, &bundle, &a, &g).unwrap());
    }
    report(
        "06 fell_bundle",
        dims_ok && worst_axiom <= 1e-9 && worst_diagram <= 1e-9,
        format!(
            "fiber dims exact: {dims_ok}, axioms {worst_axiom:.3e}, diagram {worst_diagram:.3e} <= 1e-9"
        ),
    );
}

#[test]
fn criterion_07_morita_at_finite_scale() {
    let mut dims_ok = true;
    let mut worst_span = 0.0f64;
    let mut worst_ideal = 0.0f64;
    for (i, sys) in fixtures::acceptance_systems().iter().enumerate() {
        let d = sys.dim();
        let bundle = fell::build_bundle(sys, sys.algebra().basis()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(700 + i as u64);
        let mut rips = Vec::new();
        for _ in 0..(d * d + 4) {
            let a = fixtures::random_algebra_element(sys, &mut rng);
            let b = fixtures::random_algebra_element(sys, &mut rng);
            rips.push(hmodule::rip(sys, &a, &b).unwrap());
        }
        let rip_span = span_of(&rips, 1e-9).unwrap();
        dims_ok &= rip_span.dim() == bundle.fiber(0).dim();
        for v in rip_span.basis() {
            worst_span = worst_span.max(bundle.fiber(0).residual(v).unwrap());
        }
        for v in bundle.fiber(0).basis() {
            worst_span = worst_span.max(rip_span.residual(v).unwrap());
        }
        for _ in 0..3 {
            let a = fixtures::random_algebra_element(sys, &mut rng);
            let b = fixtures::random_algebra_element(sys, &mut rng);
            let cm = fixtures::random_algebra_element(sys, &mut rng);
            for t in 0..sys.order() {
                worst_ideal =
                    worst_ideal.max(crossed::lip_ideal_residual(sys, t, &cm, &a, &b).unwrap());
            }
        }
    }
    report(
        "07 morita_finite_scale",
        dims_ok && worst_span <= 1e-9 && worst_ideal <= 1e-9,
        format!(
            "span dims equal: {dims_ok}, mutual residual {worst_span:.3e}, ideal residual {worst_ideal:.3e} <= 1e-9"
        ),
    );
}

#[test]
fn criterion_08_shift_lab_exactness() {
    // Bandwidth-8 trigonometric polynomial at half-width 64.
    let phi = CircleFunction::from_pairs(&[
        (0, c(0.6, 0.0)),
        (2, c(0.0, 0.3)),
        (-5, c(0.2, 0.1)),
        (8, c(0.1, 0.0)),
    ])
    .normalized()
    .unwrap();
    let w = ShiftWindow::new(64).unwrap();

    let sum_rep = labs::shift_sum_report(&phi, w, 32).unwrap();
    let mut worst_fourier = 0.0f64;
    for k in 0..16 {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 16.0);
        let rep = labs::fourier_shift_report(&phi, z, w).unwrap();
        worst_fourier = worst_fourier.max(rep.interior_residual);
    }
    report(
        "08 shift_lab_exactness",
        sum_rep.interior_residual <= 1e-10 && worst_fourier <= 1e-10,
        format!(
            "orbit-sum interior {:.3e}, coefficient interior {worst_fourier:.3e} <= 1e-10",
            sum_rep.interior_residual
        ),
    );
}

#[test]
fn criterion_09_dichotomy_continuous_side() {
    let (phi, psi) = labs::gentle_pair();
    let w = ShiftWindow::new(256).unwrap();
    let rep = labs::rc_dichotomy(&phi, &psi, w, 64, 64).unwrap();
    let near_one = rep.rows[1].d_tilde.max(rep.rows[63].d_tilde);
    let limit = 0.05 * rep.sup_phi * rep.sup_psi;
    report(
        "09 dichotomy_continuous",
        rep.all_pass && near_one <= limit,
        format!(
            "bound holds at all 64 grid points: {}, near-1 value {near_one:.4e} <= {limit:.4e}",
            rep.all_pass
        ),
    );
}

#[test]
fn criterion_10_dichotomy_discontinuous_side() {
    let psi = CircleFunction::exponential(0);
    let mut floors = Vec::new();
    for half in [128i64, 256, 512] {
        let w = ShiftWindow::new(half).unwrap();
        let phi = labs::step_fixture(w).unwrap();
        let (d_plus, _) = labs::dichotomy_at(&phi, &psi, w, 1, STEP_ZGRID, STEP_XYGRID).unwrap();
        let (d_minus, _) =
            labs::dichotomy_at(&phi, &psi, w, STEP_ZGRID - 1, STEP_ZGRID, STEP_XYGRID).unwrap();
        floors.push(d_plus.min(d_minus));
    }
    let variation = (floors[1] - floors[2]).abs() / floors[2];
    report(
        "10 dichotomy_discontinuous",
        floors[1] >= STEP_FLOOR && floors[2] >= STEP_FLOOR && variation < 0.10,
        format!(
            "floors {:.4} / {:.4} / {:.4} >= {STEP_FLOOR} at windows 128/256/512, window-doubling variation {:.2}% < 10%",
            floors[0], floors[1], floors[2], 100.0 * variation
        ),
    );
}

#[test]
fn criterion_11_proper_free_actions() {
    let mut ok = true;
    let mut detail = String::new();
    for (n, k) in [(3usize, 2usize), (4, 1), (5, 3)] {
        let rep = labs::proper_free_action_report(n, k).unwrap();
        let this_ok =
            rep.fixed_dim == k && rep.rip_dim == k && rep.max_residual() <= 1e-9;
        ok &= this_ok;
        detail.push_str(&format!(
            "({n},{k}): fixed dim {} rip dim {} residual {:.2e}; ",
            rep.fixed_dim,
            rep.rip_dim,
            rep.max_residual()
        ));
    }
    report("11 proper_free_actions", ok, detail);
}

#[test]
fn criterion_12_twist_cone_non_uniqueness() {
    let w = ShiftWindow::new(256).unwrap();
    let delta = labs::step_fixture(w).unwrap();
    let e0 = CircleFunction::exponential(0);
    let rep = labs::delta_twist_demo(&delta, &e0, &e0, w, 64, 8).unwrap();
    let ok = rep.base.all_pass && rep.both_twisted.all_pass && rep.mixed.floor_near_one >= 0.25;
    report(
        "12 twist_cone_non_uniqueness",
        ok,
        format!(
            "base pass {}, both-twisted pass {}, mixed floor {:.4} >= 0.25",
            rep.base.all_pass, rep.both_twisted.all_pass, rep.mixed.floor_near_one
        ),
    );
}

// Criterion 13 (byte-identical CLI output under a fixed seed) lives in
// the command-line crate's test suite, next to the binary it drives.

#[test]
fn acceptance_fixture_set_shape() {
    // The fixture catalog itself: 20 systems, |G| <= 16, d <= 6.
    let systems = fixtures::acceptance_systems();
    assert_eq!(systems.len(), 20);
    for sys in &systems {
        assert!(sys.order() <= 16 && sys.dim() <= 6);
        // Sanity: the zero element round-trips trivially.
        let z = zeros(sys.dim(), sys.dim());
        assert!(hs_norm(&sys.fourier_coeff_idx(&z, 0)) == 0.0);
    }
}
