//! Existence horizons and invariance boxes for the mixed-order Caputo
//! system, plus the delayed-Picard approximants used to construct solutions.
//!
//! Everything is driven by `G(t) = max_i t^{α_i} / Γ(α_i + 1)`, which bounds
//! the mass of the kernel `(t − s)^{α_i − 1} / Γ(α_i)` on `[0, t]`.

use crate::caputo::GridSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sis::{sis_field, CaputoOrders, EpidemicParams, ModelTag, Trajectory};
use crate::special::gamma;

/// `t^α / Γ(α + 1)`
fn kernel_mass<T: Scalar>(t: T, alpha: T) -> T {
    // Γ on (1, 2] cannot fail.
    let g = gamma(alpha + T::one()).unwrap_or_else(|_| T::nan());
    t.powf(alpha) / g
}

/// `G(t; α1, α2)`. Zero at the origin and strictly increasing.
pub fn g_bound<T: Scalar>(t: T, orders: &CaputoOrders<T>) -> T {
    if t <= T::zero() {
        return T::zero();
    }
    kernel_mass(t, orders.alpha1).max(kernel_mass(t, orders.alpha2))
}

/// Solves `G(t) = target` by doubling then bisecting to machine precision.
pub fn solve_g_equation<T: Scalar>(target: T, orders: &CaputoOrders<T>) -> T {
    if !(target > T::zero()) {
        return T::zero();
    }
    if target.is_infinite() {
        return T::infinity();
    }
    let two = T::lit(2.0);
    let mut lo = T::zero();
    let mut hi = T::one();
    while g_bound(hi, orders) < target {
        lo = hi;
        hi = hi * two;
    }
    loop {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if g_bound(mid, orders) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever end lands closer to the target.
    if (g_bound(lo, orders) - target).abs() < (g_bound(hi, orders) - target).abs() {
        lo
    } else {
        hi
    }
}

/// Horizon on which a positive solution is guaranteed.
///
/// Infinite when `γ ≥ β`. Otherwise the root of `G(T) = 1/(3(β+γ))` if
/// `S0 ≥ I0` and of `G(T) = S0/((S0 + 2 I0)(β+γ))` if `S0 < I0`.
pub fn existence_horizon<T: Scalar>(
    params: &EpidemicParams<T>,
    orders: &CaputoOrders<T>,
) -> Result<T> {
    params.validate()?;
    orders.validate()?;
    if params.gamma >= params.beta {
        return Ok(T::infinity());
    }
    let rate = params.beta + params.gamma;
    let target = if params.s0 >= params.i0 {
        T::one() / (T::lit(3.0) * rate)
    } else {
        params.s0 / ((params.s0 + T::lit(2.0) * params.i0) * rate)
    };
    Ok(solve_g_equation(target, orders))
}

/// Parameter regime a box was built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxRegime {
    /// `γ ≥ β`: susceptibles can only grow.
    RecoveryDominated,
    /// `β > γ`: symmetric box around the initial data.
    InfectionDominated,
}

/// Rectangle in `(S, I)` that the Volterra map keeps invariant up to `horizon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceBox<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub y_lo: T,
    pub y_hi: T,
    pub epsilon: T,
    pub horizon: T,
    pub regime: BoxRegime,
}

impl<T: Scalar> InvarianceBox<T> {
    pub fn contains(&self, s: T, i: T) -> bool {
        s >= self.x_lo && s <= self.x_hi && i >= self.y_lo && i <= self.y_hi
    }
}

/// Invariance box around `(S0, I0)`.
///
/// For `γ ≥ β` the caller's `epsilon ∈ (0, 1)` is used and the horizon
/// solves `G(T)(1 + ε)γ = ε`. For `β > γ` the supplied value is ignored in
/// favour of `ε = min{1/2, S0/(2 I0)}`, with `G(T)(β + γ)(1 + ε) = ε`.
pub fn invariance_box<T: Scalar>(
    params: &EpidemicParams<T>,
    orders: &CaputoOrders<T>,
    epsilon: T,
) -> Result<InvarianceBox<T>> {
    params.validate()?;
    orders.validate()?;
    if !(params.s0 > T::zero() && params.i0 > T::zero()) {
        return Err(Error::Domain(
            "invariance boxes need strictly positive S0 and I0".into(),
        ));
    }
    let (s0, i0) = (params.s0, params.i0);
    let one = T::one();
    let half = T::lit(0.5);

    if params.gamma >= params.beta {
        if !(epsilon > T::zero() && epsilon < one) {
            return Err(Error::Domain(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        let target = epsilon / ((one + epsilon) * params.gamma);
        Ok(InvarianceBox {
            x_lo: s0,
            x_hi: s0 + epsilon * i0,
            y_lo: (one - epsilon) * i0,
            y_hi: (one + epsilon) * i0,
            epsilon,
            horizon: solve_g_equation(target, orders),
            regime: BoxRegime::RecoveryDominated,
        })
    } else {
        let epsilon = half.min(half * s0 / i0);
        let target = epsilon / ((params.beta + params.gamma) * (one + epsilon));
        // Same root as `existence_horizon`, reached through a differently
        // rounded target; never exceed it.
        let horizon = solve_g_equation(target, orders).min(existence_horizon(params, orders)?);
        Ok(InvarianceBox {
            x_lo: s0 - epsilon * i0,
            x_hi: s0 + epsilon * i0,
            y_lo: (one - epsilon) * i0,
            y_hi: (one + epsilon) * i0,
            epsilon,
            horizon,
            regime: BoxRegime::InfectionDominated,
        })
    }
}

/// The `n`-th delayed-Picard approximant on `grid`, with delay `t_end / n`.
///
/// Equal to `(S0, I0)` up to the delay; afterwards each component is the
/// Volterra integral truncated at `t − t_end/n`, with `f` frozen at the left
/// node of every subinterval and the kernel integrated exactly.
pub fn picard_approximant<T: Scalar>(
    params: &EpidemicParams<T>,
    orders: &CaputoOrders<T>,
    n: usize,
    grid: &GridSpec<T>,
) -> Result<Trajectory<T>> {
    grid.validate()?;
    if n == 0 {
        return Err(Error::Domain("approximant index must be at least 1".into()));
    }
    let horizon = existence_horizon(params, orders)?;
    if grid.t_end > horizon {
        return Err(Error::Domain(format!(
            "t_end = {} exceeds the existence horizon {horizon}",
            grid.t_end
        )));
    }

    let delay = grid.t_end / T::from_count(n);
    let times = grid.times();
    let steps = grid.n_steps;
    let g1 = gamma(orders.alpha1 + T::one())?;
    let g2 = gamma(orders.alpha2 + T::one())?;

    let mut s = Vec::with_capacity(steps + 1);
    let mut i = Vec::with_capacity(steps + 1);
    // f at every node already computed.
    let mut field: Vec<T> = Vec::with_capacity(steps + 1);

    for m in 0..=steps {
        let t = times[m];
        let (x, y) = if t <= delay {
            (params.s0, params.i0)
        } else {
            let cutoff = t - delay;
            let (mut int1, mut int2) = (T::zero(), T::zero());
            for k in 0..m {
                let lo = times[k];
                if lo >= cutoff {
                    break;
                }
                let hi = times[k + 1].min(cutoff);
                let (near, far) = (t - hi, t - lo);
                let w1 = (far.powf(orders.alpha1) - near.powf(orders.alpha1)) / g1;
                let w2 = (far.powf(orders.alpha2) - near.powf(orders.alpha2)) / g2;
                int1 = int1 + field[k] * w1;
                int2 = int2 + field[k] * w2;
            }
            (params.s0 + int1, params.i0 - int2)
        };
        let f = sis_field(x, y, params).map_err(|e| Error::Field {
            step: m,
            source: Box::new(e),
        })?;
        field.push(f);
        s.push(x);
        i.push(y);
    }

    Ok(Trajectory {
        times,
        s,
        i,
        model: ModelTag::Caputo,
    })
}
