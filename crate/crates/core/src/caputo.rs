//! L1 discretization of the mixed-order Caputo SIS system.
//!
//! For `D^α u = f(u)` on a uniform grid the step to `t_{n+1}` reads
//!
//! ```text
//! u^{n+1} = a[n] u^0 + Σ_{j=1..n} (a[n−j] − a[n+1−j]) u^j + Γ(2−α) Δt^α f(u^n)
//! a[k]    = (k+1)^{1−α} − k^{1−α}
//! ```
//!
//! The step weights `C[n+1, j]` are nonnegative and telescope to one, and
//! at `α = 1` only `C[n+1, n] = 1` survives, which is forward Euler.
//! The full history is kept; work is quadratic in the number of steps.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sis::{sis_field, CaputoOrders, EpidemicParams, ModelTag, Trajectory};
use crate::special::gamma;

/// Uniform grid on `[0, t_end]` with `n_steps` intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub t_end: T,
    pub n_steps: usize,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(t_end: T, n_steps: usize) -> Result<Self> {
        let grid = Self { t_end, n_steps };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > T::zero()) || !self.t_end.is_finite() {
            return Err(Error::invalid(
                "t_end",
                self.t_end.as_f64(),
                "must be positive",
            ));
        }
        if self.n_steps == 0 {
            return Err(Error::invalid("n_steps", 0.0, "must be at least 1"));
        }
        Ok(())
    }

    pub fn dt(&self) -> T {
        self.t_end / T::from_count(self.n_steps)
    }

    /// `t_n`, computed so that the last node is exactly `t_end`.
    pub fn time(&self, n: usize) -> T {
        if n == self.n_steps {
            self.t_end
        } else {
            self.t_end * T::from_count(n) / T::from_count(self.n_steps)
        }
    }

    pub fn times(&self) -> Vec<T> {
        (0..=self.n_steps).map(|n| self.time(n)).collect()
    }
}

/// Table of `a[k] = (k+1)^{1−α} − k^{1−α}` for one order.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights<T> {
    alpha: T,
    a: Vec<T>,
    /// `diff[k] = a[k−1] − a[k]`, `diff[0]` unused.
    diff: Vec<T>,
}

/// Builds the weight table for `n_steps` steps.
pub fn l1_weights<T: Scalar>(alpha: T, n_steps: usize) -> Result<L1Weights<T>> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::Domain(format!(
            "L1 weights need alpha in (0, 1], got {alpha}"
        )));
    }
    if n_steps == 0 {
        return Err(Error::invalid("n_steps", 0.0, "must be at least 1"));
    }
    let p = T::one() - alpha;
    let mut a = Vec::with_capacity(n_steps);
    a.push(T::one());
    for k in 1..n_steps {
        // k^p ((1 + 1/k)^p − 1) avoids cancelling two large powers.
        let k = T::from_count(k);
        a.push(k.powf(p) * (p * k.recip().ln_1p()).exp_m1());
    }
    Ok(L1Weights::from_table(alpha, a))
}

impl<T: Scalar> L1Weights<T> {
    /// Wraps an arbitrary `a[k]` table without checking it.
    pub fn from_table(alpha: T, a: Vec<T>) -> Self {
        let mut diff = Vec::with_capacity(a.len());
        diff.push(T::zero());
        diff.extend(a.windows(2).map(|w| w[0] - w[1]));
        Self { alpha, a, diff }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn a(&self) -> &[T] {
        &self.a
    }

    /// Number of steps the table supports.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `C[n+1, j]` for `j = 0..=n`.
    pub fn step_weights(&self, n: usize) -> Vec<T> {
        assert!(
            n < self.a.len(),
            "step {n} beyond weight table of length {}",
            self.a.len()
        );
        let mut c = Vec::with_capacity(n + 1);
        c.push(self.a[n]);
        c.extend((1..=n).map(|j| self.diff[n + 1 - j]));
        c
    }

    /// Σ_j C[n+1, j] history[j], evaluated in increment form
    /// `u^n − Σ_{k=1..n} a[k] (u^{n+1−k} − u^{n−k})`, which is exact for
    /// constant histories.
    pub fn memory_sum(&self, n: usize, history: &[T]) -> T {
        let correction = self.a[1..=n]
            .iter()
            .zip(history[..=n].windows(2).rev())
            .fold(T::zero(), |acc, (&a, w)| acc + a * (w[1] - w[0]));
        history[n] - correction
    }
}

/// Per-component L1 stepper with retained history (component-major).
struct L1Stepper<T> {
    weights: Vec<L1Weights<T>>,
    /// `Γ(2−α) Δt^α`
    forcing: Vec<T>,
    history: Vec<Vec<T>>,
}

impl<T: Scalar> L1Stepper<T> {
    fn new(orders: &[T], y0: &[T], grid: &GridSpec<T>) -> Result<Self> {
        grid.validate()?;
        if orders.len() != y0.len() {
            return Err(Error::Domain(format!(
                "{} orders given for a {}-dimensional state",
                orders.len(),
                y0.len()
            )));
        }
        let dt = grid.dt();
        let mut weights = Vec::with_capacity(orders.len());
        let mut forcing = Vec::with_capacity(orders.len());
        for &alpha in orders {
            weights.push(l1_weights(alpha, grid.n_steps)?);
            forcing.push(gamma(T::lit(2.0) - alpha)? * dt.powf(alpha));
        }
        let history = y0
            .iter()
            .map(|&u| {
                let mut h = Vec::with_capacity(grid.n_steps + 1);
                h.push(u);
                h
            })
            .collect();
        Ok(Self {
            weights,
            forcing,
            history,
        })
    }

    fn state(&self, n: usize, out: &mut [T]) {
        for (o, h) in out.iter_mut().zip(&self.history) {
            *o = h[n];
        }
    }

    /// Advances from step `n` to `n + 1` given `rhs = f(u^n)`.
    fn advance(&mut self, n: usize, rhs: &[T]) {
        for (c, h) in self.history.iter_mut().enumerate() {
            let next = self.weights[c].memory_sum(n, h) + self.forcing[c] * rhs[c];
            h.push(next);
        }
    }
}

/// Solves `D^{α_k} y_k = field_k(y)` for an arbitrary system with
/// per-component orders. Returns the states at every grid node.
pub fn solve_caputo_generic<T, F>(
    mut field: F,
    orders: &[T],
    y0: &[T],
    grid: &GridSpec<T>,
) -> Result<Vec<Vec<T>>>
where
    T: Scalar,
    F: FnMut(&[T], &mut [T]) -> Result<()>,
{
    let mut stepper = L1Stepper::new(orders, y0, grid)?;
    let dim = y0.len();
    let mut state = vec![T::zero(); dim];
    let mut rhs = vec![T::zero(); dim];
    for n in 0..grid.n_steps {
        stepper.state(n, &mut state);
        field(&state, &mut rhs).map_err(|e| Error::Field {
            step: n,
            source: Box::new(e),
        })?;
        stepper.advance(n, &rhs);
    }
    Ok((0..=grid.n_steps)
        .map(|n| {
            stepper.state(n, &mut state);
            state.clone()
        })
        .collect())
}

/// Solves the mixed-order Caputo SIS system with the explicit L1 scheme.
///
/// Fails with [`Error::PopulationCollapse`] if `S^n + I^n ≤ 0` at some node,
/// carrying the samples up to and including that node.
pub fn solve_caputo<T: Scalar>(
    params: &EpidemicParams<T>,
    orders: &CaputoOrders<T>,
    grid: &GridSpec<T>,
) -> Result<Trajectory<T>> {
    params.validate()?;
    orders.validate()?;
    let mut stepper = L1Stepper::new(
        &[orders.alpha1, orders.alpha2],
        &[params.s0, params.i0],
        grid,
    )?;

    let collapse = |stepper: L1Stepper<T>, step: usize| {
        let mut history = stepper.history.into_iter();
        let s = history.next().unwrap_or_default();
        let i = history.next().unwrap_or_default();
        let total = (s[step] + i[step]).as_f64();
        let partial = Trajectory {
            times: (0..=step).map(|n| grid.time(n)).collect(),
            s,
            i,
            model: ModelTag::Caputo,
        };
        Error::PopulationCollapse {
            step,
            total,
            partial: Box::new(partial.to_f64()),
        }
    };

    for n in 0..grid.n_steps {
        let (s, i) = (stepper.history[0][n], stepper.history[1][n]);
        let Ok(f) = sis_field(s, i, params) else {
            return Err(collapse(stepper, n));
        };
        stepper.advance(n, &[f, -f]);
    }
    let last = grid.n_steps;
    if !(stepper.history[0][last] + stepper.history[1][last] > T::zero()) {
        return Err(collapse(stepper, last));
    }

    let mut history = stepper.history.into_iter();
    Ok(Trajectory {
        times: grid.times(),
        s: history.next().unwrap_or_default(),
        i: history.next().unwrap_or_default(),
        model: ModelTag::Caputo,
    })
}
