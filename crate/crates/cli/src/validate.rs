//! Self-check suite: invariants and closed-form oracles with measured errors.

use std::fmt;
use std::time::Instant;

use fracsis::{
    cf_constants, cf_equilibria, cf_invariant, existence_horizon, gamma, invariance_box,
    invert_alpha, l1_weights, solve_caputo, solve_caputo_generic, solve_cf, CaputoOrdersF64,
    CfOrderF64, EpidemicParamsF64, GridSpecF64, L1WeightsF64, Monotonicity,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub weight_tol: f64,
    pub conservation_tol: f64,
    pub euler_tol: f64,
    pub oracle_tol: f64,
    pub horizon_tol: f64,
    pub cf_equilibrium_tol: f64,
    pub cf_conservation_tol: f64,
    pub inversion_tol: f64,
    pub box_draws: usize,
    pub seed: u64,
    /// Perturb one entry of the L1 coefficient table (mutation check).
    pub corrupt_weights: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            weight_tol: 1e-12,
            conservation_tol: 1e-9,
            euler_tol: 1e-12,
            oracle_tol: 1e-2,
            horizon_tol: 1e-10,
            cf_equilibrium_tol: 1e-3,
            cf_conservation_tol: 1e-8,
            inversion_tol: 1e-9,
            box_draws: 20,
            seed: 20240611,
            corrupt_weights: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// Passes when `measured ≤ tolerance` (NaN fails).
    fn within(name: &'static str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            measured,
            tolerance,
            passed: measured <= tolerance,
            detail,
        }
    }

    fn failed(name: &'static str, detail: String) -> Self {
        Self {
            name,
            measured: f64::NAN,
            tolerance: f64::NAN,
            passed: false,
            detail,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub elapsed_secs: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{mark}  {:<22} {:>11.3e}", c.name, c.measured)?;
            if c.tolerance.is_finite() {
                write!(f, " (tol {:.1e})", c.tolerance)?;
            }
            writeln!(f, "  {}", c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        writeln!(
            f,
            "{} checks, {failed} failed, {:.2}s",
            self.checks.len(),
            self.elapsed_secs
        )
    }
}

pub fn validate() -> Report {
    validate_with(&ValidateOptions::default())
}

pub fn validate_with(opts: &ValidateOptions) -> Report {
    let start = Instant::now();
    let checks = vec![
        weight_contract(opts),
        conservation(opts),
        euler_reduction(opts),
        fractional_oracle(opts),
        extremum_flip(),
        horizons(opts),
        box_invariance(opts),
        cf_equilibrium(opts),
        cf_conservation(opts),
        cf_monotonicity(),
        inversion(opts),
    ];
    Report {
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

fn params(beta: f64, gamma: f64, s0: f64, i0: f64) -> EpidemicParamsF64 {
    EpidemicParamsF64::new(beta, gamma, s0, i0).expect("fixed parameters are valid")
}

fn orders(a1: f64, a2: f64) -> CaputoOrdersF64 {
    CaputoOrdersF64::new(a1, a2).expect("fixed orders are valid")
}

fn grid(t_end: f64, n: usize) -> GridSpecF64 {
    GridSpecF64::new(t_end, n).expect("fixed grid is valid")
}

fn weight_contract(opts: &ValidateOptions) -> Check {
    const N: usize = 2000;
    let mut worst = 0.0_f64;
    for k in 1..=9 {
        let alpha = k as f64 / 10.0;
        let mut w = l1_weights(alpha, N).expect("valid order");
        if opts.corrupt_weights {
            let mut a = w.a().to_vec();
            a[3] *= 1.1;
            w = L1WeightsF64::from_table(alpha, a);
        }
        for n in 0..N {
            let c = w.step_weights(n);
            if c.iter().any(|&x| x < 0.0) {
                worst = f64::INFINITY;
            }
            worst = worst.max((c.iter().sum::<f64>() - 1.0).abs());
        }
    }
    Check::within(
        "weight_contract",
        worst,
        opts.weight_tol,
        "max |sum C[n+1,.] - 1| (inf if any weight < 0), alpha 0.1..0.9, n < 2000".into(),
    )
}

fn conservation(opts: &ValidateOptions) -> Check {
    let traj = solve_caputo(
        &params(0.7, 0.2, 8.0, 2.0),
        &orders(0.5, 0.5),
        &grid(20.0, 10_000),
    );
    match traj {
        Ok(tr) => {
            let dev = tr
                .totals()
                .iter()
                .map(|n| (n - 10.0).abs())
                .fold(0.0, f64::max);
            Check::within(
                "conservation",
                dev,
                opts.conservation_tol,
                "max |N - 10|, alpha1 = alpha2 = 0.5, 1e4 steps".into(),
            )
        }
        Err(e) => Check::failed("conservation", e.to_string()),
    }
}

fn euler_reduction(opts: &ValidateOptions) -> Check {
    let p = params(0.7, 0.2, 8.0, 2.0);
    let g = grid(20.0, 1000);
    let tr = match solve_caputo(&p, &orders(1.0, 1.0), &g) {
        Ok(tr) => tr,
        Err(e) => return Check::failed("euler_reduction", e.to_string()),
    };
    let dt = g.dt();
    let (mut s, mut i) = (p.s0, p.i0);
    let mut dev = 0.0_f64;
    for k in 1..tr.len() {
        let f = (p.gamma - p.beta * s / (s + i)) * i;
        s += dt * f;
        i -= dt * f;
        dev = dev.max((tr.s[k] - s).abs()).max((tr.i[k] - i).abs());
    }
    Check::within(
        "euler_reduction",
        dev,
        opts.euler_tol,
        "alpha = 1 vs forward Euler, 1e3 steps".into(),
    )
}

fn fractional_oracle(opts: &ValidateOptions) -> Check {
    let (u0, lambda) = (0.5, 1.7);
    let mut worst = 0.0_f64;
    let mut monotone = true;
    for alpha in [0.3, 0.5, 0.8] {
        let exact = u0 + lambda / gamma(alpha + 1.0).expect("positive argument");
        let mut prev = f64::INFINITY;
        for k in 7..=11 {
            let out = solve_caputo_generic(
                |_, rhs: &mut [f64]| {
                    rhs[0] = lambda;
                    Ok(())
                },
                &[alpha],
                &[u0],
                &grid(1.0, 1 << k),
            );
            let err = match out {
                Ok(v) => ((v[v.len() - 1][0] - exact) / exact).abs(),
                Err(e) => return Check::failed("fractional_oracle", e.to_string()),
            };
            monotone &= err < prev;
            prev = err;
        }
        worst = worst.max(prev);
    }
    let mut c = Check::within(
        "fractional_oracle",
        worst,
        opts.oracle_tol,
        format!("relative error at t = 1, n = 2^11; monotone over 2^7..2^11: {monotone}"),
    );
    c.passed &= monotone;
    c
}

/// Interior extremum of N for `(0.9, 0.5)`, opposite kind for `(0.5, 0.9)`.
fn extremum_flip() -> Check {
    let p = params(0.7, 0.2, 8.0, 2.0);
    let g = grid(20.0, 2000);
    let depth = |a1, a2, sign: f64| -> Result<(f64, usize), fracsis::Error> {
        let n: Vec<f64> = solve_caputo(&p, &orders(a1, a2), &g)?
            .totals()
            .iter()
            .map(|x| sign * x)
            .collect();
        let k = (0..n.len()).fold(0, |b, k| if n[k] > n[b] { k } else { b });
        Ok((n[k] - n[0].max(n[n.len() - 1]), k))
    };
    match (depth(0.9, 0.5, 1.0), depth(0.5, 0.9, -1.0)) {
        (Ok((up, kmax)), Ok((down, kmin))) => {
            let measured = up.min(down);
            Check {
                name: "extremum_flip",
                measured,
                tolerance: f64::NAN,
                passed: measured > 0.0,
                detail: format!(
                    "N max at t = {:.2} for (0.9, 0.5), min at t = {:.2} for (0.5, 0.9)",
                    g.time(kmax),
                    g.time(kmin)
                ),
            }
        }
        (Err(e), _) | (_, Err(e)) => Check::failed("extremum_flip", e.to_string()),
    }
}

fn horizons(opts: &ValidateOptions) -> Check {
    let o = orders(1.0, 1.0);
    let cases = [(8.0, 2.0, 1.0 / 2.7), (2.0, 8.0, 1.0 / 8.1)];
    let mut worst = 0.0_f64;
    for (s0, i0, want) in cases {
        match existence_horizon(&params(0.7, 0.2, s0, i0), &o) {
            Ok(t) => worst = worst.max((t - want).abs()),
            Err(e) => return Check::failed("existence_horizon", e.to_string()),
        }
    }
    Check::within(
        "existence_horizon",
        worst,
        opts.horizon_tol,
        "1/2.7 and 1/8.1 at alpha = 1".into(),
    )
}

/// Random draws for both box regimes; measured is the number of escapes.
fn box_invariance(opts: &ValidateOptions) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut escapes = 0usize;
    for draw in 0..2 * opts.box_draws {
        let recovery = draw < opts.box_draws;
        let gamma = rng.gen_range(0.05..1.0);
        let beta = if recovery {
            gamma * rng.gen_range(0.05..1.0)
        } else {
            gamma * rng.gen_range(1.01..4.0)
        };
        let p = params(
            beta,
            gamma,
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..10.0),
        );
        let o = orders(rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0));
        let eps = rng.gen_range(0.05..0.95);
        let outcome = invariance_box(&p, &o, eps).and_then(|b| {
            let tr = solve_caputo(&p, &o, &grid(b.horizon, 300))?;
            Ok((0..tr.len()).all(|k| b.contains(tr.s[k], tr.i[k])))
        });
        match outcome {
            Ok(true) => {}
            Ok(false) => escapes += 1,
            Err(e) => return Check::failed("box_invariance", format!("draw {draw}: {e}")),
        }
    }
    Check::within(
        "box_invariance",
        escapes as f64,
        0.0,
        format!("escapes over {} draws per regime", opts.box_draws),
    )
}

fn cf_run() -> Result<(fracsis::TrajectoryF64, EpidemicParamsF64, CfOrderF64), fracsis::Error> {
    let p = params(0.7, 0.2, 6.0, 4.0);
    let order = CfOrderF64::unit_scaling(0.5)?;
    Ok((solve_cf(&p, &order, &grid(200.0, 2000))?, p, order))
}

fn cf_equilibrium(opts: &ValidateOptions) -> Check {
    match cf_run() {
        Ok((tr, ..)) => {
            let (_, s, i) = tr.last().expect("nonempty");
            let (ie, se) = (4.22 / 0.45, 0.4 * 4.22 / 0.45);
            let dev = (i - ie).abs().max((s - se).abs());
            Check::within(
                "cf_equilibrium",
                dev,
                opts.cf_equilibrium_tol,
                format!("I(200) = {i:.9}, S(200) = {s:.9}"),
            )
        }
        Err(e) => Check::failed("cf_equilibrium", e.to_string()),
    }
}

fn cf_conservation(opts: &ValidateOptions) -> Check {
    let (tr, p, order) = match cf_run() {
        Ok(v) => v,
        Err(e) => return Check::failed("cf_conservation", e.to_string()),
    };
    let p_alpha = cf_constants(&p, &order).expect("validated").p_alpha;
    let dev = (0..tr.len())
        .map(|k| ((cf_invariant(tr.s[k], tr.i[k], &p, &order) - p_alpha) / p_alpha).abs())
        .fold(0.0, f64::max);
    Check::within(
        "cf_conservation",
        dev,
        opts.cf_conservation_tol,
        "max relative deviation of P(t)".into(),
    )
}

/// Every curve of the four CF figures; measured is the number of violations.
fn cf_monotonicity() -> Check {
    let mut configs = Vec::new();
    for beta in [0.7, 0.1] {
        for alpha in [0.2, 0.4, 0.6, 0.8, 1.0] {
            configs.push((beta, alpha, 6.0, 4.0));
        }
        for i0 in [2.0, 4.0, 6.0, 8.0] {
            configs.push((beta, 0.5, 10.0 - i0, i0));
        }
    }
    let mut bad = Vec::new();
    for (beta, alpha, s0, i0) in configs {
        let p = params(beta, 0.2, s0, i0);
        let outcome = CfOrderF64::unit_scaling(alpha).and_then(|order| {
            let class = cf_equilibria(&p, &order)?.n_monotonicity;
            let n = solve_cf(&p, &order, &grid(20.0, 400))?.totals();
            Ok(match class {
                Monotonicity::Increasing => n.windows(2).all(|w| w[1] > w[0]),
                Monotonicity::Decreasing => n.windows(2).all(|w| w[1] < w[0]),
                Monotonicity::Constant => n.iter().all(|x| (x - n[0]).abs() <= 1e-9),
            })
        });
        if !matches!(outcome, Ok(true)) {
            bad.push(format!("beta={beta} alpha={alpha} I0={i0}"));
        }
    }
    let detail = if bad.is_empty() {
        "18 figure curves follow their class".into()
    } else {
        bad.join("; ")
    };
    Check::within("cf_monotonicity", bad.len() as f64, 0.0, detail)
}

fn inversion(opts: &ValidateOptions) -> Check {
    let p = params(0.7, 0.2, 6.0, 4.0);
    let mut worst = 0.0_f64;
    for alpha in [0.3, 0.5, 0.8] {
        let got = CfOrderF64::unit_scaling(alpha)
            .and_then(|o| cf_equilibria(&p, &o))
            .and_then(|eq| invert_alpha(&p, eq.n_star));
        match got {
            Ok(a) => worst = worst.max((a - alpha).abs()),
            Err(e) => return Check::failed("inverse_alpha", e.to_string()),
        }
    }
    Check::within(
        "inverse_alpha",
        worst,
        opts.inversion_tol,
        "alpha in {0.3, 0.5, 0.8}".into(),
    )
}
