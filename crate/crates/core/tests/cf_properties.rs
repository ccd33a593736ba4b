use fracsis::{
    cf_constants, cf_equilibria, cf_invariant, g_alpha, g_alpha_prime, invert_alpha, solve_cf,
    solve_cf_with, CfOrderF64, EpidemicParamsF64, GridSpecF64, IntegratorConfigF64, Method,
    Monotonicity,
};
use proptest::prelude::*;

/// (β, γ, α, S0, I0) for every curve of the four CF figures.
fn figure_configs() -> Vec<(f64, f64, f64, f64, f64)> {
    let mut out = Vec::new();
    for beta in [0.7, 0.1] {
        for alpha in [0.2, 0.4, 0.6, 0.8, 1.0] {
            out.push((beta, 0.2, alpha, 6.0, 4.0));
        }
        for i0 in [2.0, 4.0, 6.0, 8.0] {
            out.push((beta, 0.2, 0.5, 10.0 - i0, i0));
        }
    }
    out
}

fn tight() -> IntegratorConfigF64 {
    IntegratorConfigF64::with_tolerances(1e-11, 1e-13)
}

#[test]
fn figure_configurations_follow_their_class() {
    let grid = GridSpecF64::new(20.0, 400).unwrap();
    for (beta, gamma, alpha, s0, i0) in figure_configs() {
        let params = EpidemicParamsF64::new(beta, gamma, s0, i0).unwrap();
        let order = CfOrderF64::unit_scaling(alpha).unwrap();
        let class = cf_equilibria(&params, &order).unwrap().n_monotonicity;
        let n = solve_cf_with(&params, &order, &grid, &tight())
            .unwrap()
            .totals();
        let label = format!("beta {beta} alpha {alpha} I0 {i0}: {class}");
        match class {
            Monotonicity::Increasing => assert!(n.windows(2).all(|w| w[1] > w[0]), "{label}"),
            Monotonicity::Decreasing => assert!(n.windows(2).all(|w| w[1] < w[0]), "{label}"),
            Monotonicity::Constant => {
                assert!(n.iter().all(|x| (x - 10.0).abs() <= 1e-9), "{label}")
            }
        }
    }
}

#[test]
fn trajectory_properties_on_figure_configurations() {
    let grid = GridSpecF64::new(50.0, 1000).unwrap();
    for (beta, gamma, alpha, s0, i0) in figure_configs() {
        let params = EpidemicParamsF64::new(beta, gamma, s0, i0).unwrap();
        let order = CfOrderF64::unit_scaling(alpha).unwrap();
        let consts = cf_constants(&params, &order).unwrap();
        let eq = cf_equilibria(&params, &order).unwrap();
        let traj = solve_cf(&params, &order, &grid).unwrap();
        let cap = consts.p_alpha / (alpha - (1.0 - alpha) * gamma);
        let mut lyapunov = f64::INFINITY;
        for k in 0..traj.len() {
            let (s, i) = (traj.s[k], traj.i[k]);
            assert!(i > 0.0 && s >= 0.0);
            assert!(i <= cap);
            let p = cf_invariant(s, i, &params, &order);
            assert!(((p - consts.p_alpha) / consts.p_alpha).abs() <= 1e-8);
            let v = (i - eq.i_star).powi(2);
            assert!(v <= lyapunov, "V rose at sample {k}");
            lyapunov = v;
        }
    }
}

#[test]
fn endemic_limit_reached() {
    let params = EpidemicParamsF64::new(0.7, 0.2, 6.0, 4.0).unwrap();
    let order = CfOrderF64::unit_scaling(0.5).unwrap();
    let grid = GridSpecF64::new(200.0, 2000).unwrap();
    for method in [Method::AdaptiveRk45, Method::ImplicitTrapezoid] {
        let config = IntegratorConfigF64::default().with_method(method);
        let (_, s, i) = solve_cf_with(&params, &order, &grid, &config)
            .unwrap()
            .last()
            .unwrap();
        assert!((i - 4.22 / 0.45).abs() <= 1e-3, "{method:?}: {i}");
        assert!(
            (s - 0.2 / 0.5 * 4.22 / 0.45).abs() <= 1e-3,
            "{method:?}: {s}"
        );
    }
}

#[test]
fn disease_free_limit_reached() {
    let params = EpidemicParamsF64::new(0.1, 0.2, 6.0, 4.0).unwrap();
    let order = CfOrderF64::unit_scaling(0.5).unwrap();
    let eq = cf_equilibria(&params, &order).unwrap();
    let grid = GridSpecF64::new(400.0, 400).unwrap();
    let (_, s, i) = solve_cf(&params, &order, &grid).unwrap().last().unwrap();
    assert!(i < 1e-6);
    assert!((s - eq.s_star).abs() < 1e-5);
}

#[test]
fn round_trip_on_figure_parameters() {
    let params = EpidemicParamsF64::new(0.7, 0.2, 6.0, 4.0).unwrap();
    for alpha in [0.3, 0.5, 0.8] {
        let order = CfOrderF64::unit_scaling(alpha).unwrap();
        let n_inf = cf_equilibria(&params, &order).unwrap().n_star;
        assert!((invert_alpha(&params, n_inf).unwrap() - alpha).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn g_alpha_convex_on_relevant_range(beta in 0.3..2.0_f64, gamma in 0.05..0.25_f64,
                                        alpha in 0.3..1.0_f64, s0 in 0.5..10.0_f64,
                                        i0 in 0.5..10.0_f64) {
        let params = EpidemicParamsF64::new(beta, gamma, s0, i0).unwrap();
        let order = CfOrderF64::unit_scaling(alpha).unwrap();
        let consts = cf_constants(&params, &order).unwrap();
        let i_star = cf_equilibria(&params, &order).unwrap().i_star;
        let h = (2.0 * i_star / 400.0).max(1e-3);
        for k in 1..400 {
            let x = k as f64 * h;
            let d2 = g_alpha(x + h, &consts, &order) - 2.0 * g_alpha(x, &consts, &order)
                + g_alpha(x - h, &consts, &order);
            prop_assert!(d2 >= -1e-10, "x = {x}: {d2}");
        }
    }

    #[test]
    fn g_alpha_prime_matches_differences(beta in 0.1..2.0_f64, gamma in 0.05..0.25_f64,
                                         alpha in 0.3..1.0_f64, s0 in 0.5..10.0_f64,
                                         i0 in 0.5..10.0_f64, x in 0.1..20.0_f64) {
        let params = EpidemicParamsF64::new(beta, gamma, s0, i0).unwrap();
        let order = CfOrderF64::unit_scaling(alpha).unwrap();
        let consts = cf_constants(&params, &order).unwrap();
        let h = 1e-5 * x.max(1.0);
        let fd = (g_alpha(x + h, &consts, &order) - g_alpha(x - h, &consts, &order)) / (2.0 * h);
        let exact = g_alpha_prime(x, &consts, &order);
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
    }

    #[test]
    fn invariant_starts_at_p_alpha(beta in 0.1..2.0_f64, gamma in 0.05..0.25_f64,
                                   alpha in 0.3..1.0_f64, s0 in 0.5..10.0_f64, i0 in 0.0..10.0_f64) {
        let params = EpidemicParamsF64::new(beta, gamma, s0, i0).unwrap();
        let order = CfOrderF64::unit_scaling(alpha).unwrap();
        let p = cf_constants(&params, &order).unwrap().p_alpha;
        prop_assert!((cf_invariant(s0, i0, &params, &order) - p).abs() <= 1e-12 * p);
        prop_assert!((g_alpha(i0, &consts_of(&params, &order), &order) - s0).abs() <= 1e-9 * s0.max(1.0));
        prop_assert!(p >= (alpha - (1.0 - alpha) * gamma) * i0);
    }
}

fn consts_of(params: &EpidemicParamsF64, order: &CfOrderF64) -> fracsis::CfConstantsF64 {
    cf_constants(params, order).unwrap()
}
