//! The annulus-to-interval change of variables and its weight `q(t)`.
//!
//! For `N > p` the substitution `t = B - A r^{-(N-p)/(p-1)}` gives
//!
//! ```text
//! q(t) = ((p-1)/(N-p))^p A^{(p-1)p/(N-p)} / (B - t)^{p(N-1)/(N-p)},
//! ```
//!
//! and for `p = N` the substitution `r = R (Rbar/R)^t` gives
//! `q(t) = [R (Rbar/R)^t ln(Rbar/R)]^p`.
//!
//! Both are evaluated in a rescaled form that stays accurate for thin shells
//! `Rbar = R + 1` with large `R`. Writing `g = (N-p)/(p-1)`, `L = ln(Rbar/R)`,
//! `E = exp(g L) - 1`, `c = Rbar E / g` and `kappa = (g+1)/g`, the subcritical
//! weight is
//!
//! ```text
//! q(t) = [c (1 + E(1-t))^{-kappa}]^p,
//! ```
//!
//! with `A = Rbar^g / E` and `B = 1 + 1/E`.

use crate::error::{Error, Result};
use crate::ptrig::PExponent;

/// Exponent, dimension and radii of a radial problem on an annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemConfig {
    p: PExponent,
    dim: u32,
    inner: f64,
    outer: f64,
}

impl ProblemConfig {
    pub fn new(p: f64, dim: u32, inner: f64, outer: f64) -> Result<Self> {
        let p = PExponent::new(p)?;
        if dim < 2 {
            return Err(Error::InvalidConfig(format!(
                "dimension N must be at least 2, got {dim}"
            )));
        }
        if p.value() > dim as f64 {
            return Err(Error::InvalidConfig(format!(
                "exponent p = {} exceeds the dimension N = {dim}",
                p.value()
            )));
        }
        if !(inner > 0.0) || !inner.is_finite() || !outer.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "radii must be positive and finite, got R = {inner}, Rbar = {outer}"
            )));
        }
        if !(inner < outer) {
            return Err(Error::InvalidConfig(format!(
                "inner radius must be below the outer radius, got R = {inner}, Rbar = {outer}"
            )));
        }
        Ok(Self {
            p,
            dim,
            inner,
            outer,
        })
    }

    /// The unit-width shell `R < |x| < R + 1`.
    pub fn unit_width(p: f64, dim: u32, inner: f64) -> Result<Self> {
        Self::new(p, dim, inner, inner + 1.0)
    }

    pub fn p(&self) -> f64 {
        self.p.value()
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// `ln(Rbar/R)`, computed without cancellation for thin shells.
    fn log_ratio(&self) -> f64 {
        ((self.outer - self.inner) / self.inner).ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightCase {
    /// `N > p`.
    Subcritical,
    /// `p = N`.
    Conformal,
    /// `q = 1`, the common large-radius limit.
    Unit,
}

/// Constants `A`, `B` of the subcritical substitution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConstants {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    Power {
        log_c: f64,
        e: f64,
        kappa: f64,
    },
    Exponential {
        /// `ln(R L)`.
        log_scale: f64,
        l: f64,
    },
    Unit,
}

/// The weight `q` on `[0, 1]` for one problem configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightProfile {
    p: f64,
    config: Option<ProblemConfig>,
    case: WeightCase,
    constants: Option<TransformConstants>,
    form: Form,
    kink: Option<f64>,
}

fn check_unit_interval(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain(format!("t must lie in [0, 1], got {t}")))
    }
}

impl WeightProfile {
    pub fn new(config: ProblemConfig) -> Result<Self> {
        let p = config.p();
        let dim = config.dim() as f64;
        let l = config.log_ratio();
        let (case, constants, form) = if p == dim {
            let form = Form::Exponential {
                log_scale: config.inner().ln() + l.ln(),
                l,
            };
            (WeightCase::Conformal, None, form)
        } else {
            let g = (dim - p) / (p - 1.0);
            let e = (g * l).exp_m1();
            let constants = TransformConstants {
                a: config.outer().powf(g) / e,
                b: 1.0 + 1.0 / e,
            };
            // ln c = ln(Rbar L) + ln(E / (g L)); both terms are O(1/R) for thin
            // shells, so no large logarithms cancel.
            let gl = g * l;
            let excess = if gl < 1.0 {
                (e / gl).ln()
            } else {
                e.ln() - gl.ln()
            };
            let form = Form::Power {
                log_c: (config.outer() * l).ln() + excess,
                e,
                kappa: (g + 1.0) / g,
            };
            (WeightCase::Subcritical, Some(constants), form)
        };
        let mut profile = Self {
            p,
            config: Some(config),
            case,
            constants,
            form,
            kink: None,
        };
        profile.kink = profile.locate_kink();
        Ok(profile)
    }

    /// The constant weight `q = 1`, for exponent `p`.
    pub fn unit(p: f64) -> Result<Self> {
        let p = PExponent::new(p)?.value();
        Ok(Self {
            p,
            config: None,
            case: WeightCase::Unit,
            constants: None,
            form: Form::Unit,
            kink: None,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn config(&self) -> Option<&ProblemConfig> {
        self.config.as_ref()
    }

    pub fn case(&self) -> WeightCase {
        self.case
    }

    pub fn constants(&self) -> Option<TransformConstants> {
        self.constants
    }

    /// Point of `(0, 1)` where `q = 1`, present iff `q(0) < 1 < q(1)`.
    pub fn kink(&self) -> Option<f64> {
        self.kink
    }

    /// `ln q(t)` without a domain check.
    #[inline]
    pub fn ln_q_unchecked(&self, t: f64) -> f64 {
        match self.form {
            Form::Power { log_c, e, kappa } => self.p * (log_c - kappa * (e * (1.0 - t)).ln_1p()),
            Form::Exponential { log_scale, l } => self.p * (log_scale + t * l),
            Form::Unit => 0.0,
        }
    }

    /// `q(t)` without a domain check.
    #[inline]
    pub fn q_unchecked(&self, t: f64) -> f64 {
        self.ln_q_unchecked(t).exp()
    }

    pub fn q(&self, t: f64) -> Result<f64> {
        check_unit_interval(t)?;
        Ok(self.q_unchecked(t))
    }

    pub fn q0(&self) -> f64 {
        self.q_unchecked(0.0)
    }

    pub fn q1(&self) -> f64 {
        self.q_unchecked(1.0)
    }

    /// `q'(t)`.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        check_unit_interval(t)?;
        let q = self.q_unchecked(t);
        Ok(match self.form {
            Form::Power { e, kappa, .. } => q * self.p * kappa * e / (1.0 + e * (1.0 - t)),
            Form::Exponential { l, .. } => q * self.p * l,
            Form::Unit => 0.0,
        })
    }

    /// `Q(t) = int_0^t q`.
    pub fn antiderivative(&self, t: f64) -> Result<f64> {
        check_unit_interval(t)?;
        Ok(self.antiderivative_unchecked(t))
    }

    fn antiderivative_unchecked(&self, t: f64) -> f64 {
        match self.form {
            Form::Power { log_c, e, kappa } => {
                // c^p u0^{1-m} [(u(t)/u0)^{1-m} - 1] / (E (m-1)), u(t) = 1 + E(1-t)
                let m = self.p * kappa;
                let u0 = 1.0 + e;
                // ln(u(t)/u0); the difference of logs once u0 rounds to E.
                let x = e * t / u0;
                let ratio_log = if x < 0.5 {
                    (-x).ln_1p()
                } else {
                    (e * (1.0 - t)).ln_1p() - e.ln_1p()
                };
                let lead = (self.p * log_c + (1.0 - m) * u0.ln()).exp();
                lead * ((1.0 - m) * ratio_log).exp_m1() / (e * (m - 1.0))
            }
            Form::Exponential { log_scale, l } => {
                (self.p * log_scale).exp() * (self.p * t * l).exp_m1() / (self.p * l)
            }
            Form::Unit => t,
        }
    }

    /// `int_0^1 q`.
    pub fn integral(&self) -> f64 {
        self.antiderivative_unchecked(1.0)
    }

    fn locate_kink(&self) -> Option<f64> {
        let (lo, hi) = (self.ln_q_unchecked(0.0), self.ln_q_unchecked(1.0));
        if !(lo < 0.0 && hi > 0.0) {
            return None;
        }
        let closed = match self.form {
            Form::Power { log_c, e, kappa } => 1.0 - (log_c / kappa).exp_m1() / e,
            Form::Exponential { log_scale, l } => -log_scale / l,
            Form::Unit => return None,
        };
        if closed > 0.0 && closed < 1.0 && (self.q_unchecked(closed) - 1.0).abs() <= 1e-12 {
            return Some(closed);
        }
        // Bisection on ln q, which is increasing.
        let (mut a, mut b) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if self.ln_q_unchecked(mid) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        Some(0.5 * (a + b))
    }
}
