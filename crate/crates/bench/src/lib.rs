//! Shared inputs for the criterion benchmarks.

use fweno_core::models::Burgers;
use fweno_core::solver::{Boundaries, DtRule, Field, Grid};
use fweno_core::{Solver, SolverConfig, SplittingScheme, WenoVariant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` windows of `2r-1` uniform values in `[-1, 1)`, back to back.
pub fn windows(r: usize, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n * (2 * r - 1)).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Periodic smooth Burgers problem on `n` points with a global LF split.
pub fn burgers_solver(n: usize, r: usize, variant: WenoVariant) -> (Solver<Burgers, 1>, Field<1>) {
    let grid = Grid::line(-1.0, 1.0, n);
    let mut cfg = SolverConfig::new(0.3);
    cfg.splitting = SplittingScheme::GlobalLaxFriedrichs;
    cfg.dt_rule = DtRule::Standard;
    cfg.lf_margin = 1.1;
    let solver = Solver::new(Burgers, grid, Boundaries::periodic(), r, variant, cfg).expect("valid benchmark setup");
    let u0 = Field::from_fn(&grid, |x, _| [0.25 + 0.5 * (std::f64::consts::PI * x).sin()]);
    (solver, u0)
}
