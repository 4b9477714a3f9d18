//! Randomized invariants of the kernels, the coefficient factorizations,
//! the eigensystems and the conservative update.

use fweno_core::coeffgen::{cached_table, js_quadratic_form, ldl_sum_of_squares, DiscretizationMode};
use fweno_core::kernels::{
    alphas, fast_indicators, fast_indicators_naive, reconstruct, substencil_values, undivided_diff_sq, weights,
    StencilWindow, WeightDesign, WenoVariant,
};
use fweno_core::models::{conserved_1d, conserved_2d, Burgers, ConservationLaw, Direction, Euler1d, Euler2d};
use fweno_core::solver::{Boundaries, DtRule, Field, Grid};
use fweno_core::{SolverConfig, SplittingScheme};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn table(r: usize) -> std::sync::Arc<fweno_core::ReconstructionTable> {
    cached_table(r, DiscretizationMode::CellAverage).unwrap()
}

/// `r` in `[2, 8]` and a window of `2r-1` values in `[-scale, scale]`.
fn window_strategy(scale: f64) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..=8).prop_flat_map(move |r| (Just(r), prop::collection::vec(-scale..scale, 2 * r - 1)))
}

/// Windows mixing smooth pieces and jumps.
fn rough_window_strategy() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..=8).prop_flat_map(|r| {
        let w = 2 * r - 1;
        (Just(r), prop::collection::vec(-1.0..1.0f64, w), 0..w, -5.0..5.0f64).prop_map(|(r, mut v, at, jump)| {
            for x in &mut v[at..] {
                *x += jump;
            }
            (r, v)
        })
    })
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

proptest! {
    #[test]
    fn recurrence_matches_definition((r, v) in window_strategy(1.0)) {
        let w = StencilWindow::new(&v, r).unwrap();
        let fast = fast_indicators(&w);
        let naive = fast_indicators_naive(&w);
        for (f, n) in fast.iter().zip(naive.iter()) {
            prop_assert!((f - n).abs() <= 1e-13, "r={r}: {f} vs {n}");
        }
    }

    #[test]
    fn fast_indicators_and_undivided_difference_ignore_dyadic_shifts(
        r in 2usize..=8,
        ints in prop::collection::vec(-4096i64..4096, 15),
        shift in -1024i64..1024,
    ) {
        // multiples of 2^-6 shifted by a multiple of 2^-3: every operation is exact
        let v: Vec<f64> = ints[..2 * r - 1].iter().map(|&k| k as f64 / 64.0).collect();
        let c = shift as f64 / 8.0;
        let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
        let t = table(r);
        let (a, b) = (StencilWindow::new(&v, r).unwrap(), StencilWindow::new(&shifted, r).unwrap());
        prop_assert_eq!(&*fast_indicators(&a), &*fast_indicators(&b));
        prop_assert_eq!(undivided_diff_sq(&a, &t).unwrap(), undivided_diff_sq(&b, &t).unwrap());
    }

    #[test]
    fn weights_are_a_partition_of_unity((r, v) in rough_window_strategy(), design in 0usize..3) {
        let design = WeightDesign::ALL[design];
        let t = table(r);
        let variant = WenoVariant::new(design, r);
        let w = StencilWindow::new(&v, r).unwrap();
        let ind = match design {
            WeightDesign::Fast => fast_indicators(&w).to_vec(),
            _ => fweno_core::kernels::js_indicators(&w, &t).unwrap().to_vec(),
        };
        let d = if design == WeightDesign::JiangShu { 0.0 } else { undivided_diff_sq(&w, &t).unwrap() };
        // JS at high order can overflow α on flat substencils; that is signalled, not hidden
        let Ok(a) = alphas(&variant, &ind, d, &t.ideal_weights) else { return Ok(()) };
        let om = weights(&a).unwrap();
        let sum: f64 = om.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-14, "sum {sum}");
        prop_assert!(om.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn reconstruction_is_a_convex_combination((r, v) in rough_window_strategy()) {
        let t = table(r);
        let w = StencilWindow::new(&v, r).unwrap();
        let p = substencil_values(&w, &t).unwrap();
        let (lo, hi) = p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let slack = 8.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        for design in [WeightDesign::Fast, WeightDesign::YamaleevCarpenter] {
            let q = reconstruct(&w, &t, &WenoVariant::new(design, r)).unwrap();
            prop_assert!(q >= lo - slack && q <= hi + slack, "{design}: {q} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn polynomials_up_to_degree_2r_minus_3_are_reconstructed_exactly(
        r in 2usize..=8,
        coeffs in prop::collection::vec(-1.0..1.0f64, 14),
    ) {
        let degree = 2 * r - 3;
        let c = &coeffs[..=degree];
        // cell averages over [j - 1/2, j + 1/2] from the antiderivative
        let anti = |x: f64| c.iter().enumerate().map(|(k, a)| a * x.powi(k as i32 + 1) / (k + 1) as f64).sum::<f64>();
        let v: Vec<f64> = (-(r as i64) + 1..r as i64).map(|j| anti(j as f64 + 0.5) - anti(j as f64 - 0.5)).collect();
        let exact: f64 = c.iter().enumerate().map(|(k, a)| a * 0.5f64.powi(k as i32)).sum();
        let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let t = table(r);
        let w = StencilWindow::new(&v, r).unwrap();
        for design in [WeightDesign::Fast, WeightDesign::YamaleevCarpenter] {
            let q = reconstruct(&w, &t, &WenoVariant::new(design, r)).unwrap();
            prop_assert!((q - exact).abs() <= 1e-11 * scale, "{design} r={r}: {q} vs {exact}");
        }
    }

    #[test]
    fn ldl_reassembles_random_rank_deficient_forms(
        n in 2usize..=6,
        entries in prop::collection::vec(-4i64..=4, 36),
    ) {
        // A = Gᵀ G with rows of G summing to zero: constants lie in the kernel
        let rows = n - 1;
        let mut g = vec![vec![rat(0); n]; rows];
        for (i, row) in g.iter_mut().enumerate() {
            let mut total = 0;
            for (j, x) in row.iter_mut().enumerate().take(n - 1) {
                let e = entries[i * 6 + j];
                *x = rat(e);
                total += e;
            }
            row[n - 1] = rat(-total);
        }
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|p| (0..n).map(|q| (0..rows).map(|k| &g[k][p] * &g[k][q]).fold(rat(0), |s, x| s + x)).collect())
            .collect();
        if let Ok(sos) = ldl_sum_of_squares(&a) {
            prop_assert_eq!(sos.reassemble(), a);
        }
    }
}

#[test]
fn ldl_reassembles_every_jiang_shu_form() {
    for r in 2..=8 {
        for i in 0..r {
            let form = js_quadratic_form(r, i, DiscretizationMode::CellAverage).unwrap();
            let sos = ldl_sum_of_squares(&form).unwrap();
            assert_eq!(sos.reassemble(), form, "r={r}, i={i}");
        }
    }
}

fn check_round_trip<const M: usize>(left: &[[f64; M]; M], right: &[[f64; M]; M]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..M {
        for j in 0..M {
            let v: f64 = (0..M).map(|k| left[i][k] * right[k][j]).sum();
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn euler_eigensystems_round_trip(
        rho in 0.05..10.0f64,
        vx in -5.0..5.0f64,
        vy in -5.0..5.0f64,
        p in 0.05..100.0f64,
        rho2 in 0.05..10.0f64,
        vx2 in -5.0..5.0f64,
        p2 in 0.05..100.0f64,
    ) {
        let (ul, ur) = (conserved_1d(rho, vx, p, 1.4), conserved_1d(rho2, vx2, p2, 1.4));
        let es = Euler1d::default().roe_eigensystem(&ul, &ur, Direction::X).unwrap();
        prop_assert!(check_round_trip(&es.left, &es.right) < 1e-12);
        let u2 = conserved_2d(rho, vx, vy, p, 1.4);
        for dir in [Direction::X, Direction::Y] {
            let es = Euler2d::default().eigensystem_at(&u2, dir).unwrap();
            prop_assert!(check_round_trip(&es.left, &es.right) < 1e-12);
        }
    }
}

#[test]
fn periodic_runs_conserve_the_total() {
    let cases: [(SplittingScheme, WeightDesign, usize); 4] = [
        (SplittingScheme::GlobalLaxFriedrichs, WeightDesign::Fast, 3),
        (SplittingScheme::LocalLaxFriedrichs, WeightDesign::YamaleevCarpenter, 4),
        (SplittingScheme::DonatMarquina, WeightDesign::JiangShu, 3),
        (SplittingScheme::DonatMarquina, WeightDesign::Fast, 5),
    ];
    for (splitting, design, r) in cases {
        // Burgers past shock formation, so the check covers steep fronts
        let grid = Grid::line(-1.0, 1.0, 64);
        let mut cfg = SolverConfig::new(0.8);
        cfg.splitting = splitting;
        cfg.dt_rule = DtRule::Standard;
        let solver =
            fweno_core::Solver::new(Burgers, grid, Boundaries::periodic(), r, WenoVariant::new(design, r), cfg).unwrap();
        let u0 = Field::from_fn(&grid, |x, _| [0.25 + 0.5 * (std::f64::consts::PI * x).sin() + 0.1 * (3.0 * x).cos()]);
        let m0: f64 = u0.data.iter().map(|u| u[0]).sum();
        let scale: f64 = u0.data.iter().map(|u| u[0].abs()).sum();
        let res = solver.run(u0).unwrap();
        let m1: f64 = res.field.data.iter().map(|u| u[0]).sum();
        assert!((m1 - m0).abs() <= 1e-12 * scale, "{splitting:?} {design}: {m0} -> {m1}");
    }

    // 1D Euler density wave, all three components
    let grid = Grid::line(0.0, 1.0, 50);
    let solver = fweno_core::Solver::new(
        Euler1d::default(),
        grid,
        Boundaries::periodic(),
        3,
        WenoVariant::fast(3),
        SolverConfig::new(0.2),
    )
    .unwrap();
    let u0 = Field::from_fn(&grid, |x, _| conserved_1d(1.0 + 0.3 * (2.0 * std::f64::consts::PI * x).sin(), 0.7, 1.0, 1.4));
    let before: Vec<f64> = (0..3).map(|k| u0.data.iter().map(|u| u[k]).sum()).collect();
    let res = solver.run(u0).unwrap();
    for (k, b) in before.iter().enumerate() {
        let after: f64 = res.field.data.iter().map(|u| u[k]).sum();
        assert!((after - b).abs() <= 1e-12 * b.abs(), "component {k}: {b} -> {after}");
    }
}
