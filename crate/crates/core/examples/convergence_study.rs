//! Window-doubling studies behind the frozen lab constants.
//!
//! `cargo run --release -p cdsys-core --example convergence_study [which]`
//!
//! * `gentle` - full dichotomy table for the bundled continuous pair at
//!   half-width 256 with 64-point grids, reporting the worst
//!   modulus-to-bound ratio and the near-identity values.
//! * `step` - the floor of the discontinuous pair (truncated step
//!   against the constant vector) near `z = 1`, across half-widths
//!   {128, 256, 512}; the acceptance floor constant is frozen from
//!   this table.
//! * `twist` - the three-table conjugation demonstration at half-width
//!   256.

use cdsys_core::labs::{self, CircleFunction, ShiftWindow};
use std::time::Instant;

fn main() {
    let what = std::env::args().nth(1).unwrap_or_else(|| "step".into());

    match what.as_str() {
        "gentle" => {
            let (phi, psi) = labs::gentle_pair();
            let w = ShiftWindow::new(256).unwrap();
            let t0 = Instant::now();
            let rep = labs::rc_dichotomy(&phi, &psi, w, 64, 64).unwrap();
            println!("continuous pair, half-width 256, 64x64 grids ({:?})", t0.elapsed());
            println!(
                "  sup_phi = {:.6}, sup_psi = {:.6}, interior radius = {}",
                rep.sup_phi, rep.sup_psi, rep.interior_radius
            );
            println!("  all rows within bound: {}", rep.all_pass);
            let worst = rep
                .rows
                .iter()
                .skip(1)
                .map(|r| r.d_tilde / r.bound_rhs)
                .fold(0.0f64, f64::max);
            println!("  worst modulus/bound ratio: {worst:.6}");
            println!(
                "  near-identity modulus: {:.6} (5% threshold {:.6})",
                rep.rows[1].d_tilde,
                0.05 * rep.sup_phi * rep.sup_psi
            );
        }
        "step" => {
            let psi = CircleFunction::exponential(0);
            println!("discontinuous pair floors near z = 1 (z-grid 16, xy-grid 64):");
            for half in [128i64, 256, 512] {
                let w = ShiftWindow::new(half).unwrap();
                let phi = labs::step_fixture(w).unwrap();
                let t0 = Instant::now();
                let (d_plus, omega) = labs::dichotomy_at(&phi, &psi, w, 1, 16, 64).unwrap();
                let (d_minus, _) = labs::dichotomy_at(&phi, &psi, w, 15, 16, 64).unwrap();
                println!(
                    "  half-width {half} (bandwidth {}): floor = {:.6}, omega = {:.4} ({:?})",
                    phi.bandwidth(),
                    d_plus.min(d_minus),
                    omega,
                    t0.elapsed()
                );
            }
        }
        "twist" => {
            let w = ShiftWindow::new(256).unwrap();
            let delta = labs::step_fixture(w).unwrap();
            let e0 = CircleFunction::exponential(0);
            let t0 = Instant::now();
            let rep = labs::delta_twist_demo(&delta, &e0, &e0, w, 64, 8).unwrap();
            println!("twist demo, half-width 256 ({:?})", t0.elapsed());
            println!(
                "  |delta|^2 deviation = {:.4}, twist/shift commutation = {:.3e}",
                rep.unimodular_deviation, rep.commute_residual
            );
            for (label, table) in [
                ("base", &rep.base),
                ("both-twisted", &rep.both_twisted),
                ("mixed", &rep.mixed),
            ] {
                println!(
                    "  {label}: pass = {}, floor near 1 = {:.6}",
                    table.all_pass, table.floor_near_one
                );
            }
        }
        other => {
            eprintln!("unknown study {other:?}: expected gentle | step | twist");
            std::process::exit(2);
        }
    }
}
