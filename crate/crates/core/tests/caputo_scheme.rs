mod common;

use common::{argmax, argmin, forward_euler_sis, gamma_oracle};
use fracsis::{
    existence_horizon, invariance_box, l1_weights, solve_caputo, solve_caputo_generic,
    CaputoOrdersF64, EpidemicParamsF64, GridSpecF64,
};
use proptest::prelude::*;

#[test]
fn gamma_agrees_with_stirling_oracle() {
    for k in 1..=300 {
        let z = k as f64 * 0.01;
        let want = gamma_oracle(z);
        let got = fracsis::gamma(z).unwrap();
        assert!(
            ((got - want) / want).abs() < 1e-12,
            "z = {z}: {got} vs {want}"
        );
    }
}

#[test]
fn alpha_one_matches_forward_euler() {
    let params = EpidemicParamsF64::new(0.7, 0.2, 8.0, 2.0).unwrap();
    let orders = CaputoOrdersF64::new(1.0, 1.0).unwrap();
    let grid = GridSpecF64::new(20.0, 1000).unwrap();
    let traj = solve_caputo(&params, &orders, &grid).unwrap();
    let euler = forward_euler_sis(0.7, 0.2, 8.0, 2.0, 20.0, 1000);
    for (k, (s, i)) in euler.iter().enumerate() {
        assert!((traj.s[k] - s).abs() <= 1e-12);
        assert!((traj.i[k] - i).abs() <= 1e-12);
    }
}

#[test]
fn equal_orders_conserve_population() {
    let params = EpidemicParamsF64::new(0.7, 0.2, 8.0, 2.0).unwrap();
    let grid = GridSpecF64::new(20.0, 10_000).unwrap();
    for alpha in [0.3, 0.5, 0.9] {
        let orders = CaputoOrdersF64::new(alpha, alpha).unwrap();
        let traj = solve_caputo(&params, &orders, &grid).unwrap();
        let worst = traj
            .totals()
            .iter()
            .map(|n| (n - 10.0).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10, "alpha {alpha}: {worst}");
    }
}

/// Constant right-hand side: `D^α u = λ` has `u = u0 + λ t^α / Γ(α + 1)`.
#[test]
fn constant_forcing_converges_to_exact_solution() {
    let (u0, lambda) = (0.5, 1.7);
    for alpha in [0.3, 0.5, 0.8] {
        let exact = u0 + lambda / gamma_oracle(alpha + 1.0);
        let mut last = f64::INFINITY;
        for k in 5..=11 {
            let grid = GridSpecF64::new(1.0, 1 << k).unwrap();
            let out = solve_caputo_generic(
                |_, rhs: &mut [f64]| {
                    rhs[0] = lambda;
                    Ok(())
                },
                &[alpha],
                &[u0],
                &grid,
            )
            .unwrap();
            let err = (out.last().unwrap()[0] - exact).abs();
            assert!(err < last, "alpha {alpha} n 2^{k}: {err} >= {last}");
            last = err;
        }
        assert!(last / exact.abs() < 1e-2);
    }
}

#[test]
fn mixed_system_with_per_component_orders() {
    // Decoupled components reproduce independent scalar solves.
    let grid = GridSpecF64::new(2.0, 256).unwrap();
    let joint = solve_caputo_generic(
        |_, rhs: &mut [f64]| {
            rhs[0] = 1.0;
            rhs[1] = -2.0;
            Ok(())
        },
        &[0.4, 0.9],
        &[0.0, 1.0],
        &grid,
    )
    .unwrap();
    for (c, (alpha, lambda, u0)) in [(0.4, 1.0, 0.0), (0.9, -2.0, 1.0)].into_iter().enumerate() {
        let single = solve_caputo_generic(
            |_, rhs: &mut [f64]| {
                rhs[0] = lambda;
                Ok(())
            },
            &[alpha],
            &[u0],
            &grid,
        )
        .unwrap();
        for (a, b) in joint.iter().zip(&single) {
            assert_eq!(a[c], b[0]);
        }
    }
}

/// Near `t = 0`, `N − N0 ≈ f0 (t^α1/Γ(α1+1) − t^α2/Γ(α2+1))`; with
/// `f0 = −0.72` and `α1 = 0.9 > α2 = 0.5` this is positive, so N rises
/// first and the interior extremum is a maximum. Swapping flips it.
#[test]
fn total_population_extremum_flips_with_orders() {
    let params = EpidemicParamsF64::new(0.7, 0.2, 8.0, 2.0).unwrap();
    let grid = GridSpecF64::new(20.0, 2000).unwrap();

    let f0 = fracsis::sis_field(8.0, 2.0, &params).unwrap();
    let short_time = |t: f64, a1: f64, a2: f64| {
        f0 * (t.powf(a1) / gamma_oracle(a1 + 1.0) - t.powf(a2) / gamma_oracle(a2 + 1.0))
    };

    let fwd = solve_caputo(&params, &CaputoOrdersF64::new(0.9, 0.5).unwrap(), &grid).unwrap();
    let n = fwd.totals();
    let peak = argmax(&n);
    assert!(
        peak > 0 && peak < n.len() - 1,
        "interior maximum expected, got {peak}"
    );
    assert!(n[peak] > n[0] && n[peak] > *n.last().unwrap());
    assert!(n[1] > n[0] && short_time(grid.time(1), 0.9, 0.5) > 0.0);
    assert!(*n.last().unwrap() < n[0]);

    let rev = solve_caputo(&params, &CaputoOrdersF64::new(0.5, 0.9).unwrap(), &grid).unwrap();
    let n = rev.totals();
    let dip = argmin(&n);
    assert!(
        dip > 0 && dip < n.len() - 1,
        "interior minimum expected, got {dip}"
    );
    assert!(n[1] < n[0] && short_time(grid.time(1), 0.5, 0.9) < 0.0);
    assert!(*n.last().unwrap() > n[0]);
}

#[test]
fn recovery_dominated_stays_positive_within_horizon() {
    let orders = CaputoOrdersF64::new(0.35, 0.75).unwrap();
    let params = EpidemicParamsF64::new(0.3, 0.6, 2.0, 5.0).unwrap();
    assert!(existence_horizon(&params, &orders).unwrap().is_infinite());
    let b = invariance_box(&params, &orders, 0.5).unwrap();
    let grid = GridSpecF64::new(b.horizon, 500).unwrap();
    let traj = solve_caputo(&params, &orders, &grid).unwrap();
    assert!(traj.s.iter().chain(&traj.i).all(|&x| x > 0.0));
}

#[test]
fn single_precision_runs() {
    let params = fracsis::EpidemicParamsF32::new(0.7, 0.2, 8.0, 2.0).unwrap();
    let orders = fracsis::CaputoOrdersF32::new(0.5, 0.5).unwrap();
    let grid = fracsis::GridSpecF32::new(20.0, 1000).unwrap();
    let traj = solve_caputo(&params, &orders, &grid).unwrap();
    assert!(traj.totals().iter().all(|n| (n - 10.0).abs() < 1e-3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn step_weights_are_a_probability_vector(alpha in 0.01..1.0_f64, n in 0usize..3000) {
        let w = l1_weights(alpha, n + 1).unwrap();
        let c = w.step_weights(n);
        prop_assert!(c.iter().all(|&x| x >= 0.0));
        let sum: f64 = c.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn equal_orders_conserve_for_random_params(alpha in 0.05..1.0_f64, beta in 0.05..2.0_f64,
                                                gamma in 0.05..2.0_f64, s0 in 0.1..20.0_f64,
                                                i0 in 0.1..20.0_f64) {
        let params = EpidemicParamsF64::new(beta, gamma, s0, i0).unwrap();
        let orders = CaputoOrdersF64::new(alpha, alpha).unwrap();
        let grid = GridSpecF64::new(10.0, 400).unwrap();
        let traj = solve_caputo(&params, &orders, &grid).unwrap();
        for n in traj.totals() {
            prop_assert!((n - (s0 + i0)).abs() <= 1e-10 * (s0 + i0).max(1.0));
        }
    }
}
