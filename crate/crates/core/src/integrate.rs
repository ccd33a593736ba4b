//! Adaptive scalar initial-value integrator.
//!
//! Two methods share one driver: the Dormand-Prince 5(4) embedded pair and
//! the implicit trapezoidal rule with a step-doubling error estimate. Steps
//! are clipped so that every grid node is landed on exactly; no
//! interpolation is involved in the sampled output.

use crate::caputo::GridSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    AdaptiveRk45,
    ImplicitTrapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_steps: usize,
    pub method: Method,
}

impl<T: Scalar> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-8),
            abs_tol: T::lit(1e-10),
            max_steps: 1_000_000,
            method: Method::AdaptiveRk45,
        }
    }
}

impl<T: Scalar> IntegratorConfig<T> {
    pub fn with_tolerances(rel_tol: T, abs_tol: T) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return Err(Error::invalid(
                "rel_tol",
                self.rel_tol.as_f64(),
                "must be positive",
            ));
        }
        if !(self.abs_tol > T::zero()) {
            return Err(Error::invalid(
                "abs_tol",
                self.abs_tol.as_f64(),
                "must be positive",
            ));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps", 0.0, "must be at least 1"));
        }
        Ok(())
    }

    fn scale(&self, a: T, b: T) -> T {
        self.abs_tol + self.rel_tol * a.abs().max(b.abs())
    }
}

/// Result of one trial step.
struct Trial<T> {
    y: T,
    /// Derivative at the new point, reused as the next step's first stage.
    f: T,
    /// Error estimate scaled by the tolerances; accept if `≤ 1`.
    err: T,
}

/// Integrates `y' = rhs(t, y)` and samples the solution at the grid nodes.
///
/// The first sample is `y0` itself. Failures of `rhs` are reported as
/// [`Error::Field`] with the count of accepted steps so far.
pub fn integrate_scalar<T, F>(
    mut rhs: F,
    y0: T,
    grid: &GridSpec<T>,
    config: &IntegratorConfig<T>,
) -> Result<Vec<T>>
where
    T: Scalar,
    F: FnMut(T, T) -> Result<T>,
{
    grid.validate()?;
    config.validate()?;

    let mut accepted = 0usize;
    let mut eval = |t: T, y: T, accepted: usize| {
        rhs(t, y).map_err(|e| Error::Field {
            step: accepted,
            source: Box::new(e),
        })
    };

    let (exponent, safety) = match config.method {
        Method::AdaptiveRk45 => (T::lit(-0.2), T::lit(0.9)),
        Method::ImplicitTrapezoid => (T::lit(-1.0 / 3.0), T::lit(0.9)),
    };
    let min_factor = T::lit(0.2);
    let max_factor = T::lit(5.0);

    let mut t = T::zero();
    let mut y = y0;
    let mut f = eval(t, y, 0)?;
    let mut h = initial_step(y, f, grid, config);

    let mut out = Vec::with_capacity(grid.n_steps + 1);
    out.push(y0);

    for k in 1..=grid.n_steps {
        let target = grid.time(k);
        while t < target {
            let remaining = target - t;
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };

            let trial = match config.method {
                Method::AdaptiveRk45 => dopri_step(&mut eval, t, y, f, step, config, accepted)?,
                Method::ImplicitTrapezoid => {
                    trapezoid_trial(&mut eval, t, y, f, step, config, accepted)?
                }
            };

            let factor = if trial.err > T::zero() {
                (safety * trial.err.powf(exponent))
                    .max(min_factor)
                    .min(max_factor)
            } else {
                max_factor
            };

            if trial.err <= T::one() && trial.y.is_finite() {
                t = if clipped { target } else { t + step };
                y = trial.y;
                f = trial.f;
                accepted += 1;
                if accepted >= config.max_steps && (t < target || k < grid.n_steps) {
                    return Err(Error::MaxStepsExceeded {
                        max_steps: config.max_steps,
                        t: t.as_f64(),
                        y: y.as_f64(),
                    });
                }
                let grown = step * factor;
                // A step shortened only to hit a node says nothing about h.
                h = if clipped { grown.max(h) } else { grown };
            } else {
                h = step * factor.min(T::lit(0.5));
                let floor = T::lit(16.0) * T::epsilon() * t.abs().max(T::one());
                if h < floor {
                    return Err(Error::StepUnderflow {
                        t: t.as_f64(),
                        y: y.as_f64(),
                    });
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}

fn initial_step<T: Scalar>(y: T, f: T, grid: &GridSpec<T>, config: &IntegratorConfig<T>) -> T {
    let sc = config.scale(y, y);
    let d0 = y.abs() / sc;
    let d1 = f.abs() / sc;
    let tiny = T::lit(1e-5);
    let h = if d0 < tiny || d1 < tiny {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * d0 / d1
    };
    h.min(grid.t_end)
}

// Dormand-Prince 5(4) coefficients.
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
/// Fifth-order weights; also the last stage row (FSAL).
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn combo<T: Scalar>(coeffs: &[f64], k: &[T]) -> T {
    coeffs
        .iter()
        .zip(k)
        .fold(T::zero(), |acc, (&c, &kv)| acc + T::lit(c) * kv)
}

fn dopri_step<T, F>(
    eval: &mut F,
    t: T,
    y: T,
    f0: T,
    h: T,
    config: &IntegratorConfig<T>,
    accepted: usize,
) -> Result<Trial<T>>
where
    T: Scalar,
    F: FnMut(T, T, usize) -> Result<T>,
{
    let mut k = [T::zero(); 7];
    k[0] = f0;
    let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
    for (s, row) in rows.iter().enumerate() {
        let ys = y + h * combo(row, &k[..=s]);
        k[s + 1] = eval(t + T::lit(C[s]) * h, ys, accepted)?;
    }
    let y_new = y + h * combo(&B, &k[..6]);
    k[6] = eval(t + h, y_new, accepted)?;
    let err = (h * combo(&E, &k)).abs() / config.scale(y, y_new);
    Ok(Trial {
        y: y_new,
        f: k[6],
        err,
    })
}

/// One implicit trapezoid step of size `h`, solved by Newton iteration with
/// a finite-difference derivative.
fn trapezoid_solve<T, F>(
    eval: &mut F,
    t: T,
    y: T,
    f0: T,
    h: T,
    config: &IntegratorConfig<T>,
    accepted: usize,
) -> Result<(T, T)>
where
    T: Scalar,
    F: FnMut(T, T, usize) -> Result<T>,
{
    let half_h = h * T::lit(0.5);
    let t1 = t + h;
    let mut z = y + h * f0;
    let root_eps = T::epsilon().sqrt();
    for _ in 0..25 {
        let fz = eval(t1, z, accepted)?;
        let residual = z - y - half_h * (f0 + fz);
        let dz = root_eps * z.abs().max(T::one());
        let jac = (eval(t1, z + dz, accepted)? - fz) / dz;
        let delta = residual / (T::one() - half_h * jac);
        z = z - delta;
        if delta.abs() <= T::lit(1e-3) * config.scale(z, y) || delta.abs() <= T::epsilon() * z.abs()
        {
            let fz = eval(t1, z, accepted)?;
            return Ok((z, fz));
        }
    }
    Err(Error::NonConvergence {
        t: t.as_f64(),
        y: y.as_f64(),
    })
}

fn trapezoid_trial<T, F>(
    eval: &mut F,
    t: T,
    y: T,
    f0: T,
    h: T,
    config: &IntegratorConfig<T>,
    accepted: usize,
) -> Result<Trial<T>>
where
    T: Scalar,
    F: FnMut(T, T, usize) -> Result<T>,
{
    let half = h * T::lit(0.5);
    let (big, _) = trapezoid_solve(eval, t, y, f0, h, config, accepted)?;
    let (mid, f_mid) = trapezoid_solve(eval, t, y, f0, half, config, accepted)?;
    let (small, _) = trapezoid_solve(eval, t + half, mid, f_mid, half, config, accepted)?;
    // Richardson: the two-half-step result is off by about (small − big) / 3.
    let correction = (small - big) / T::lit(3.0);
    let y_new = small + correction;
    let err = correction.abs() / config.scale(y, y_new);
    Ok(Trial {
        y: y_new,
        f: eval(t + h, y_new, accepted)?,
        err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logistic_exact(t: f64) -> f64 {
        10.0 / (1.0 + 9.0 * (-0.5 * t).exp())
    }

    #[test]
    fn zero_rhs_is_constant() {
        let grid = GridSpec::new(5.0, 10).unwrap();
        for method in [Method::AdaptiveRk45, Method::ImplicitTrapezoid] {
            let cfg = IntegratorConfig::default().with_method(method);
            let ys = integrate_scalar(|_, _| Ok(0.0), 2.5, &grid, &cfg).unwrap();
            assert_eq!(ys, vec![2.5; 11]);
        }
    }

    #[test]
    fn exponential_decay() {
        let grid = GridSpec::new(1.0, 4).unwrap();
        for method in [Method::AdaptiveRk45, Method::ImplicitTrapezoid] {
            let cfg = IntegratorConfig::default().with_method(method);
            let ys = integrate_scalar(|_, y| Ok(-y), 1.0_f64, &grid, &cfg).unwrap();
            assert_eq!(ys[0], 1.0);
            let want = (-1.0_f64).exp();
            assert!((ys[4] - 0.367_879_4).abs() < 1e-7);
            assert!(
                ((ys[4] - want) / want).abs() < 1e-8,
                "{method:?}: {}",
                ys[4]
            );
        }
    }

    #[test]
    fn logistic_growth() {
        let grid = GridSpec::new(20.0, 40).unwrap();
        for method in [Method::AdaptiveRk45, Method::ImplicitTrapezoid] {
            let cfg = IntegratorConfig::default().with_method(method);
            let ys =
                integrate_scalar(|_, y| Ok(0.5 * y * (1.0 - y / 10.0)), 1.0, &grid, &cfg).unwrap();
            for (k, y) in ys.iter().enumerate() {
                let t = grid.time(k);
                assert!((y - logistic_exact(t)).abs() < 1e-6, "{method:?} t = {t}");
            }
        }
    }

    #[test]
    fn equilibrium_preserved() {
        let grid = GridSpec::new(50.0, 100).unwrap();
        let cfg = IntegratorConfig::default();
        let ys =
            integrate_scalar(|_, y| Ok(0.5 * y * (1.0 - y / 10.0)), 10.0_f64, &grid, &cfg).unwrap();
        assert!(ys.iter().all(|y| (y - 10.0).abs() <= cfg.abs_tol));
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos t, y(0) = 0.
        let grid = GridSpec::new(6.0, 12).unwrap();
        let ys = integrate_scalar(
            |t: f64, _| Ok(t.cos()),
            0.0,
            &grid,
            &IntegratorConfig::default(),
        )
        .unwrap();
        for (k, y) in ys.iter().enumerate() {
            assert!((y - grid.time(k).sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y², y(0) = 1 blows up at t = 1.
        let grid = GridSpec::new(2.0, 2).unwrap();
        let err = integrate_scalar(
            |_, y: f64| Ok(y * y),
            1.0,
            &grid,
            &IntegratorConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::StepUnderflow { t, .. } | Error::MaxStepsExceeded { t, .. } => {
                assert!(t > 0.9 && t < 1.01, "t = {t}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn max_steps_reported() {
        let grid = GridSpec::new(100.0, 1).unwrap();
        let cfg = IntegratorConfig {
            max_steps: 5,
            ..IntegratorConfig::default()
        };
        let err = integrate_scalar(|t: f64, _| Ok((10.0 * t).sin()), 0.0, &grid, &cfg).unwrap_err();
        assert!(matches!(err, Error::MaxStepsExceeded { max_steps: 5, .. }));
    }

    #[test]
    fn rhs_errors_propagate() {
        let grid = GridSpec::new(1.0, 1).unwrap();
        let err = integrate_scalar(
            |_, y: f64| {
                if y > 1.5 {
                    Err(Error::Domain("y".into()))
                } else {
                    Ok(1.0)
                }
            },
            1.0,
            &grid,
            &IntegratorConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Field { .. }));
    }

    #[test]
    fn tighter_tolerance_not_worse() {
        // Combined error over both oracles. Above ~1e-4 the step sequences
        // are coarse enough that a halving can reshuffle them for the worse.
        let grid = GridSpec::new(20.0, 1).unwrap();
        for method in [Method::AdaptiveRk45, Method::ImplicitTrapezoid] {
            let mut last = f64::INFINITY;
            let mut tol = 1e-4;
            while tol >= 1e-10 {
                let cfg = IntegratorConfig::with_tolerances(tol, tol * 1e-2).with_method(method);
                let exp = integrate_scalar(|_, y| Ok(-y), 1.0, &grid, &cfg).unwrap()[1];
                let log = integrate_scalar(|_, y| Ok(0.5 * y * (1.0 - y / 10.0)), 1.0, &grid, &cfg)
                    .unwrap()[1];
                let err = ((exp - (-20.0_f64).exp()).abs() + (log - logistic_exact(20.0)).abs())
                    .max(1e-15);
                assert!(err <= last, "{method:?} tol {tol}: {err} > {last}");
                last = err;
                tol /= 2.0;
            }
        }
    }

    #[test]
    fn rejects_bad_config() {
        let grid = GridSpec::new(1.0, 1).unwrap();
        let cfg = IntegratorConfig::with_tolerances(0.0, 1e-10);
        assert!(integrate_scalar(|_, y: f64| Ok(y), 1.0, &grid, &cfg).is_err());
    }
}
