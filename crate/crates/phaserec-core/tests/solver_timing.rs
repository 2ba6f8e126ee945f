//! Timing probe (ignored by default): sizes the dense solves used by the
//! larger verification runs.

use std::time::Instant;

use phaserec_core::forward::{solve_psi_on_support, PlaneWaveContext};
use phaserec_core::medium::{discretize, Potential, PotentialKind};
use phaserec_core::{Dimension, Vector};

#[test]
#[ignore]
fn time_large_solves() {
    let disc = Potential::new(
        Dimension::Two,
        PotentialKind::DiscConstant {
            amplitude: 0.5,
            radius: 1.0,
        },
        1.0,
    )
    .unwrap();
    let grid = discretize(&disc, 48).unwrap();
    let ctx = PlaneWaveContext::from_direction(Vector::new2(1.0, 0.0), 1.0).unwrap();
    let t0 = Instant::now();
    let sol = solve_psi_on_support(&grid, &ctx).unwrap();
    println!(
        "2D 48^2: {} cells, {:.2?}, residual {:.2e}",
        grid.active_len(),
        t0.elapsed(),
        sol.residual()
    );

    let ball = Potential::new(
        Dimension::Three,
        PotentialKind::DiscConstant {
            amplitude: 0.3,
            radius: 1.0,
        },
        1.0,
    )
    .unwrap();
    let grid = discretize(&ball, 16).unwrap();
    let ctx = PlaneWaveContext::from_direction(Vector::new3(1.0, 0.0, 0.0), 1.0).unwrap();
    let t0 = Instant::now();
    let sol = solve_psi_on_support(&grid, &ctx).unwrap();
    println!(
        "3D 16^3: {} cells, {:.2?}, residual {:.2e}",
        grid.active_len(),
        t0.elapsed(),
        sol.residual()
    );
}
