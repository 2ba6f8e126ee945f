//! Probe (ignored by default): prints the deterministic reciprocity defects
//! at several refinements and point pairs.

use phaserec_core::medium::{discretize, Potential, PotentialKind};
use phaserec_core::resolvent::reciprocity_defect;
use phaserec_core::{Dimension, Vector};

#[test]
#[ignore]
fn print_reciprocity_defects() {
    let potential = Potential::new(
        Dimension::Two,
        PotentialKind::DiscConstant {
            amplitude: 0.5,
            radius: 1.0,
        },
        1.0,
    )
    .unwrap();
    let pairs = [
        (Vector::new2(2.0, 0.5), Vector::new2(-0.3, 2.5)),
        (Vector::new2(1.5, 0.8), Vector::new2(-2.0, 0.4)),
        (Vector::new2(3.0, 0.0), Vector::new2(0.0, 3.0)),
        (Vector::new2(2.5, -1.0), Vector::new2(-1.2, 1.8)),
    ];
    for (idx, (x, xp)) in pairs.iter().enumerate() {
        for cells in [32u32, 48] {
            let grid = discretize(&potential, cells).unwrap();
            let defect = reciprocity_defect(&grid, x, xp, 1.0).unwrap();
            println!("pair {idx} cells {cells}: defect = {defect:.6e}");
        }
    }
}
