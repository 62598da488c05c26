//! Fixtures shared by the benchmarks in `benches/`.

use kepler_billiards::{pt, KeplerBilliard, Table, TableSpec};

/// The focused ellipse whose lift is the `(1.2, 0.8)` centered ellipse.
pub fn focused_table() -> Table {
    Table::new(TableSpec::focused_ellipse(1.2, 0.8)).expect("valid table")
}

/// A K-convex Fourier perturbation of the focused ellipse.
pub fn perturbed_table() -> Table {
    let mut coeffs: Vec<_> = match TableSpec::focused_ellipse(1.2, 0.8).to_fourier() {
        TableSpec::Fourier { coeffs } => coeffs.iter().map(|c| (c.0, pt(c.1, c.2))).collect(),
        TableSpec::Ellipse { .. } => unreachable!("to_fourier returns Fourier"),
    };
    coeffs.extend([(2, pt(0.004, 0.002)), (-2, pt(-0.001, 0.003)), (3, pt(0.002, -0.001))]);
    Table::new(TableSpec::fourier(coeffs)).expect("valid table")
}

pub fn billiard(table: Table) -> KeplerBilliard {
    KeplerBilliard::new(table)
}
