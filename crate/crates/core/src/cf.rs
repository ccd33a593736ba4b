//! Caputo-Fabrizio SIS model.
//!
//! With the susceptibles driven by the Caputo-Fabrizio operator and the
//! infected by an ordinary derivative, the quantity
//!
//! ```text
//! P = M S + α I + (1 − α)(β − γ − β I / (S + I)) I
//! ```
//!
//! is conserved. Solving it for `S` gives `S = g_α(I)` and leaves a scalar
//! ODE for `I`. The operator itself is never discretized.

use crate::caputo::GridSpec;
use crate::error::{Error, Result};
use crate::integrate::{integrate_scalar, IntegratorConfig};
use crate::scalar::Scalar;
use crate::sis::{CfOrder, EpidemicParams, ModelTag, Trajectory};

/// `B_α`, `C_α` and `P_α(S0, I0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfConstants<T> {
    pub b_alpha: T,
    pub c_alpha: T,
    pub p_alpha: T,
}

fn constants_unchecked<T: Scalar>(params: &EpidemicParams<T>, alpha: T, m: T) -> CfConstants<T> {
    let one = T::one();
    let half = T::lit(0.5);
    let EpidemicParams {
        beta,
        gamma,
        s0,
        i0,
    } = *params;
    let b_alpha = half * (alpha + m + (one - alpha) * (beta - gamma));
    let c_alpha = m * (alpha - (one - alpha) * gamma);
    let p_alpha = m * s0 + alpha * i0 + (one - alpha) * (beta - gamma - beta * i0 / (s0 + i0)) * i0;
    CfConstants {
        b_alpha,
        c_alpha,
        p_alpha,
    }
}

/// Constants of the reduction. Fails if `γ < α/(1−α)` or `M(α) ≥ α` is violated.
pub fn cf_constants<T: Scalar>(
    params: &EpidemicParams<T>,
    order: &CfOrder<T>,
) -> Result<CfConstants<T>> {
    order.validate_with(params)?;
    Ok(constants_unchecked(params, order.alpha, order.m_alpha))
}

/// Coefficients of the radicand `r(x) = q2 x² + q1 x + q0` under the root of `g_α`.
fn radicand_coeffs<T: Scalar>(consts: &CfConstants<T>, order: &CfOrder<T>) -> (T, T, T) {
    let CfConstants {
        b_alpha: b,
        c_alpha: c,
        p_alpha: p,
    } = *consts;
    let m = order.m_alpha;
    (b * b - c, (m - b) * p, p * p * T::lit(0.25))
}

fn radicand<T: Scalar>(x: T, consts: &CfConstants<T>, order: &CfOrder<T>) -> T {
    let half_p = consts.p_alpha * T::lit(0.5);
    let shifted = consts.b_alpha * x - half_p;
    let r = shifted * shifted - consts.c_alpha * x * x + order.m_alpha * consts.p_alpha * x;
    if r < T::zero() {
        let scale = T::one().max(consts.p_alpha * consts.p_alpha);
        debug_assert!(
            r >= -T::lit(1e-12) * scale,
            "negative radicand {r} at x = {x}"
        );
        T::zero()
    } else {
        r
    }
}

/// `S` as a function of `I` along solutions.
pub fn g_alpha<T: Scalar>(x: T, consts: &CfConstants<T>, order: &CfOrder<T>) -> T {
    let root = radicand(x, consts, order).sqrt();
    (-consts.b_alpha * x + consts.p_alpha * T::lit(0.5) + root) / order.m_alpha
}

/// First derivative of [`g_alpha`].
pub fn g_alpha_prime<T: Scalar>(x: T, consts: &CfConstants<T>, order: &CfOrder<T>) -> T {
    let (q2, q1, _) = radicand_coeffs(consts, order);
    let r = radicand(x, consts, order);
    let dr = T::lit(2.0) * q2 * x + q1;
    (-consts.b_alpha + dr / (T::lit(2.0) * r.sqrt())) / order.m_alpha
}

/// Second derivative of [`g_alpha`]: `(4 q2 q0 − q1²) / (4 M r^{3/2})`, nonnegative.
pub fn g_alpha_second<T: Scalar>(x: T, consts: &CfConstants<T>, order: &CfOrder<T>) -> T {
    let (q2, q1, q0) = radicand_coeffs(consts, order);
    let r = radicand(x, consts, order);
    let four = T::lit(4.0);
    (four * q2 * q0 - q1 * q1) / (four * order.m_alpha * r * r.sqrt())
}

/// Right-hand side of the reduced equation `I' = (β − γ − β I / (g_α(I) + I)) I`.
pub fn cf_reduced_rhs<T: Scalar>(
    i: T,
    consts: &CfConstants<T>,
    order: &CfOrder<T>,
    params: &EpidemicParams<T>,
) -> Result<T> {
    let total = g_alpha(i, consts, order) + i;
    if !(total > T::zero()) {
        return Err(Error::Domain(format!(
            "reduced field undefined: g(I) + I = {total} at I = {i}"
        )));
    }
    Ok((params.beta - params.gamma - params.beta * i / total) * i)
}

/// `M S + α I + (1 − α)(β − γ − β I/(S + I)) I`, constant along solutions.
pub fn cf_invariant<T: Scalar>(s: T, i: T, params: &EpidemicParams<T>, order: &CfOrder<T>) -> T {
    let one = T::one();
    order.m_alpha * s
        + order.alpha * i
        + (one - order.alpha) * (params.beta - params.gamma - params.beta * i / (s + i)) * i
}

/// Solves the model with the default integrator settings.
pub fn solve_cf<T: Scalar>(
    params: &EpidemicParams<T>,
    order: &CfOrder<T>,
    grid: &GridSpec<T>,
) -> Result<Trajectory<T>> {
    solve_cf_with(params, order, grid, &IntegratorConfig::default())
}

/// Integrates the reduced equation for `I` and recovers `S = g_α(I)`.
pub fn solve_cf_with<T: Scalar>(
    params: &EpidemicParams<T>,
    order: &CfOrder<T>,
    grid: &GridSpec<T>,
    config: &IntegratorConfig<T>,
) -> Result<Trajectory<T>> {
    let consts = cf_constants(params, order)?;
    let i = integrate_scalar(
        |_, i| cf_reduced_rhs(i, &consts, order, params),
        params.i0,
        grid,
        config,
    )?;
    let mut s: Vec<T> = i.iter().map(|&x| g_alpha(x, &consts, order)).collect();
    s[0] = params.s0;
    Ok(Trajectory {
        times: grid.times(),
        s,
        i,
        model: ModelTag::CaputoFabrizio,
    })
}

/// Direction in which `N(t) = S(t) + I(t)` moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
}

impl std::fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Monotonicity::Increasing => "increasing",
            Monotonicity::Decreasing => "decreasing",
            Monotonicity::Constant => "constant",
        })
    }
}

/// Long-time limits of the model and the monotonicity class of `N(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumReport<T> {
    pub reproduction_number: T,
    pub i_star: T,
    pub s_star: T,
    pub n_star: T,
    pub n_monotonicity: Monotonicity,
}

/// Endemic state `E_α`, limits of `S` and `N`, and the monotonicity of `N`.
///
/// For `R ≤ 1` the susceptibles tend to `P_α / M(α) = g_α(0)`.
pub fn cf_equilibria<T: Scalar>(
    params: &EpidemicParams<T>,
    order: &CfOrder<T>,
) -> Result<EquilibriumReport<T>> {
    let consts = cf_constants(params, order)?;
    let EpidemicParams {
        beta, gamma, i0, ..
    } = *params;
    let r0 = params.reproduction_number();
    let p = consts.p_alpha;
    let m = order.m_alpha;

    let (i_star, s_star, n_star) = if r0 > T::one() {
        let denom = order.alpha * (beta - gamma) + m * gamma;
        let e = (beta - gamma) * p / denom;
        (e, gamma / (beta - gamma) * e, beta * p / denom)
    } else {
        (T::zero(), p / m, p / m)
    };

    let at_endemic = r0 > T::one() && (i0 - i_star).abs() <= T::lit(1e-12) * i_star;
    let n_monotonicity = if order.is_classical() || i0 == T::zero() || at_endemic {
        Monotonicity::Constant
    } else if r0 > T::one() && i0 < i_star {
        Monotonicity::Increasing
    } else {
        Monotonicity::Decreasing
    };

    Ok(EquilibriumReport {
        reproduction_number: r0,
        i_star,
        s_star,
        n_star,
        n_monotonicity,
    })
}

/// Smallest order compatible with `γ < α/(1−α)`; itself excluded.
pub fn min_admissible_alpha<T: Scalar>(gamma: T) -> T {
    gamma / (T::one() + gamma)
}

/// `lim N(t)` for `R > 1` as a function of the order, without validating it.
fn limit_total<T: Scalar>(params: &EpidemicParams<T>, alpha: T, m: T) -> T {
    let p = constants_unchecked(params, alpha, m).p_alpha;
    params.beta * p / (alpha * (params.beta - params.gamma) + m * params.gamma)
}

fn check_inversion_inputs<T: Scalar>(params: &EpidemicParams<T>, n_infinity: T) -> Result<()> {
    params.validate()?;
    if !(params.reproduction_number() > T::one()) {
        return Err(Error::Domain(
            "order inversion needs R = beta/gamma > 1".into(),
        ));
    }
    if !n_infinity.is_finite() {
        return Err(Error::Domain(format!("N_inf = {n_infinity} is not finite")));
    }
    Ok(())
}

fn check_in_range<T: Scalar>(n_infinity: T, a: T, b: T) -> Result<()> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if n_infinity < lo || n_infinity > hi {
        return Err(Error::Domain(format!(
            "N_inf = {n_infinity} outside the attainable range [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn check_order_result<T: Scalar>(alpha: T) -> Result<T> {
    if alpha > T::zero() && alpha <= T::one() {
        Ok(alpha)
    } else {
        Err(Error::Domain(format!(
            "recovered order {alpha} outside (0, 1]"
        )))
    }
}

/// Recovers the order from the observed limit of `N(t)`, for `M ≡ 1`.
///
/// Closed form of `β P_α / (α(β − γ) + γ) = N∞`, which is linear in `α`:
///
/// ```text
/// α = 1 − (N∞ − N0) N0 β / (β² I0 S0 − β N0 (I0 + γ I0 − N∞) − γ N0 N∞)
/// ```
pub fn invert_alpha<T: Scalar>(params: &EpidemicParams<T>, n_infinity: T) -> Result<T> {
    check_inversion_inputs(params, n_infinity)?;
    let one = T::one();
    let alpha_lo = min_admissible_alpha(params.gamma);
    check_in_range(
        n_infinity,
        limit_total(params, alpha_lo, one),
        limit_total(params, one, one),
    )?;

    let EpidemicParams {
        beta,
        gamma,
        s0,
        i0,
    } = *params;
    let n0 = s0 + i0;
    let denom = beta * beta * i0 * s0
        - beta * n0 * (i0 + gamma * i0 - n_infinity)
        - gamma * n0 * n_infinity;
    if denom == T::zero() || !denom.is_finite() {
        return Err(Error::Domain(
            "order inversion is singular for these inputs".into(),
        ));
    }
    check_order_result(one - (n_infinity - n0) * n0 * beta / denom)
}

/// Recovers the order for a general scaling `M` by bisection of
/// `β P_α / (α(β − γ) + M(α) γ) = N∞` over the admissible orders.
pub fn invert_alpha_with_scaling<T: Scalar>(
    params: &EpidemicParams<T>,
    n_infinity: T,
    scaling: impl Fn(T) -> T,
) -> Result<T> {
    check_inversion_inputs(params, n_infinity)?;
    let one = T::one();
    let residual = |alpha: T| limit_total(params, alpha, scaling(alpha)) - n_infinity;

    let mut lo = min_admissible_alpha(params.gamma);
    let mut hi = one;
    let (r_lo, r_hi) = (residual(lo), residual(hi));
    check_in_range(n_infinity, r_lo + n_infinity, r_hi + n_infinity)?;
    if r_hi == T::zero() {
        return Ok(one);
    }
    let lo_negative = r_lo < T::zero();
    let two = T::lit(2.0);
    loop {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let r = residual(mid);
        if r == T::zero() {
            return check_order_result(mid);
        }
        if (r < T::zero()) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = if residual(lo).abs() < residual(hi).abs() {
        lo
    } else {
        hi
    };
    CfOrder::with_scaling(alpha, &scaling)?;
    check_order_result(alpha)
}
