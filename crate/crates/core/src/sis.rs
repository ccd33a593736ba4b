//! Domain types shared by both models and the SIS vector field.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Contact/recovery rates and initial populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicParams<T> {
    pub beta: T,
    pub gamma: T,
    pub s0: T,
    pub i0: T,
}

impl<T: Scalar> EpidemicParams<T> {
    pub fn new(beta: T, gamma: T, s0: T, i0: T) -> Result<Self> {
        let params = Self {
            beta,
            gamma,
            s0,
            i0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let zero = T::zero();
        if !(self.beta > zero) || !self.beta.is_finite() {
            return Err(Error::invalid(
                "beta",
                self.beta.as_f64(),
                "must be positive",
            ));
        }
        if !(self.gamma > zero) || !self.gamma.is_finite() {
            return Err(Error::invalid(
                "gamma",
                self.gamma.as_f64(),
                "must be positive",
            ));
        }
        if !(self.s0 >= zero) || !self.s0.is_finite() {
            return Err(Error::invalid(
                "s0",
                self.s0.as_f64(),
                "must be nonnegative",
            ));
        }
        if !(self.i0 >= zero) || !self.i0.is_finite() {
            return Err(Error::invalid(
                "i0",
                self.i0.as_f64(),
                "must be nonnegative",
            ));
        }
        if !(self.s0 + self.i0 > zero) {
            return Err(Error::invalid(
                "s0 + i0",
                (self.s0 + self.i0).as_f64(),
                "initial population must be positive",
            ));
        }
        Ok(())
    }

    /// Initial total population `S0 + I0`.
    pub fn n0(&self) -> T {
        self.s0 + self.i0
    }

    /// Basic reproduction number `β / γ`.
    pub fn reproduction_number(&self) -> T {
        self.beta / self.gamma
    }
}

fn check_order<T: Scalar>(name: &'static str, alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha <= T::one() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            alpha.as_f64(),
            "fractional order must lie in (0, 1]",
        ))
    }
}

/// Orders of the Caputo derivatives acting on S and I respectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaputoOrders<T> {
    pub alpha1: T,
    pub alpha2: T,
}

impl<T: Scalar> CaputoOrders<T> {
    pub fn new(alpha1: T, alpha2: T) -> Result<Self> {
        let orders = Self { alpha1, alpha2 };
        orders.validate()?;
        Ok(orders)
    }

    pub fn validate(&self) -> Result<()> {
        check_order("alpha1", self.alpha1)?;
        check_order("alpha2", self.alpha2)
    }
}

/// Order of the Caputo-Fabrizio operator and the value of its scaling
/// factor `M(α)` at that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfOrder<T> {
    pub alpha: T,
    pub m_alpha: T,
}

impl<T: Scalar> CfOrder<T> {
    pub fn new(alpha: T, m_alpha: T) -> Result<Self> {
        let order = Self { alpha, m_alpha };
        order.validate()?;
        Ok(order)
    }

    /// `M ≡ 1`.
    pub fn unit_scaling(alpha: T) -> Result<Self> {
        Self::new(alpha, T::one())
    }

    /// Evaluates a user scaling function at `alpha`.
    pub fn with_scaling(alpha: T, scaling: impl Fn(T) -> T) -> Result<Self> {
        Self::new(alpha, scaling(alpha))
    }

    /// Order-only checks: `0 < α ≤ 1` and `M(α) ≥ α`.
    pub fn validate(&self) -> Result<()> {
        check_order("alpha", self.alpha)?;
        if !(self.m_alpha >= self.alpha) || !self.m_alpha.is_finite() {
            return Err(Error::Assumption(format!(
                "M(alpha) >= alpha fails: M({}) = {}",
                self.alpha, self.m_alpha
            )));
        }
        Ok(())
    }

    /// Full check against a parameter set, including `γ < α / (1 − α)`.
    pub fn validate_with(&self, params: &EpidemicParams<T>) -> Result<()> {
        self.validate()?;
        params.validate()?;
        if self.alpha < T::one() {
            let bound = self.alpha / (T::one() - self.alpha);
            if !(params.gamma < bound) {
                return Err(Error::Assumption(format!(
                    "gamma < alpha/(1 - alpha) fails: gamma = {} >= {} (alpha = {})",
                    params.gamma, bound, self.alpha
                )));
            }
        }
        Ok(())
    }

    pub fn is_classical(&self) -> bool {
        self.alpha == T::one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Caputo,
    CaputoFabrizio,
}

/// Sampled solution `(t, S, I)` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub s: Vec<T>,
    pub i: Vec<T>,
    pub model: ModelTag,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `N = S + I` at sample `k`.
    pub fn total(&self, k: usize) -> T {
        self.s[k] + self.i[k]
    }

    pub fn totals(&self) -> Vec<T> {
        self.s.iter().zip(&self.i).map(|(&s, &i)| s + i).collect()
    }

    pub fn last(&self) -> Option<(T, T, T)> {
        let k = self.len().checked_sub(1)?;
        Some((self.times[k], self.s[k], self.i[k]))
    }

    pub fn to_f64(&self) -> Trajectory<f64> {
        let conv = |v: &[T]| v.iter().map(|x| x.as_f64()).collect();
        Trajectory {
            times: conv(&self.times),
            s: conv(&self.s),
            i: conv(&self.i),
            model: self.model,
        }
    }
}

/// SIS field `f(x, y) = (γ − β x / (x + y)) y`.
///
/// The Caputo system reads `D^α1 S = f`, `D^α2 I = −f`: `f` is the rate of
/// change of the susceptibles.
pub fn sis_field<T: Scalar>(s: T, i: T, params: &EpidemicParams<T>) -> Result<T> {
    let total = s + i;
    if !(total > T::zero()) {
        return Err(Error::Domain(format!(
            "SIS field undefined for S + I = {total} <= 0"
        )));
    }
    Ok((params.gamma - params.beta * s / total) * i)
}
