//! Generalized p-trigonometric functions.
//!
//! `sin_p` is the solution of
//!
//! ```text
//! (|u'|^{p-2} u')' + |u|^{p-2} u = 0,   u(0) = 0,   u'(0) = 1,
//! ```
//!
//! so that `|sin_p|^p + (p-1)|cos_p|^p = p-1` with `cos_p = sin_p'`. Under this
//! normalization the first positive zero of `sin_p` is
//! `pi_p = 2 pi (p-1)^{1/p} / (p sin(pi/p))` and `v(t) = sin_p(k pi_p t)`
//! solves the unit-weight Dirichlet problem on `(0, 1)` with eigenvalue
//! `(k pi_p)^p`.
//!
//! On the quarter period `[0, pi_p/2]` the inverse of `sin_p` is an incomplete
//! beta integral,
//!
//! ```text
//! theta / (pi_p/2) = I_{x^p}(1/p, 1 - 1/p),   x = sin_p(theta) / (p-1)^{1/p},
//! ```
//!
//! which is inverted once per exponent on a uniform grid and interpolated with
//! cubic Hermite splines. Near `theta = 0` the table interpolates `x`; near the
//! crest it interpolates `|cos_p|^{p-1}`, which is smooth there while `cos_p`
//! itself is not. The rest of the line follows from oddness, reflection about
//! `pi_p/2` and `2 pi_p` periodicity.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Number of cells in the quarter-period table.
const TABLE_CELLS: usize = 8192;

/// A Laplacian exponent `p > 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::Domain(format!(
                "exponent p must satisfy p > 1, got {p}"
            )));
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Half-period `pi_p` of `sin_p`.
    pub fn pi_p(self) -> f64 {
        let p = self.0;
        2.0 * PI * (p - 1.0).powf(1.0 / p) / (p * (PI / p).sin())
    }
}

/// `pi_p = 2 pi (p-1)^{1/p} / (p sin(pi/p))`.
pub fn pi_p(p: f64) -> Result<f64> {
    Ok(PExponent::new(p)?.pi_p())
}

/// Generalized sine of a single argument. Uses the shared table for `p`.
pub fn sin_p(p: f64, theta: f64) -> Result<f64> {
    Ok(PTrigTable::cached(p)?.sin_p(theta))
}

/// Normalization used for `sin_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinPConvention {
    /// `(|u'|^{p-2}u')' + |u|^{p-2}u = 0`, `u(0) = 0`, `u'(0) = 1`; the
    /// unit-weight problem on `(0, pi_p)` has first eigenvalue 1.
    UnitEigenvalue,
}

impl SinPConvention {
    pub fn id(self) -> &'static str {
        match self {
            SinPConvention::UnitEigenvalue => "unit-eigenvalue",
        }
    }
}

/// Point on the quarter period, with the signs needed to unfold it.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    /// Sign of `sin_p`.
    sign_sin: f64,
    /// Sign of `cos_p` relative to `sin_p` (negative past the crest).
    sign_cos: f64,
    phi: f64,
}

/// Values on the quarter period: `x = sin_p / a`, `y = |cos_p|`, `z = x^p`.
#[derive(Debug, Clone, Copy)]
struct Quarter {
    x: f64,
    y: f64,
    z: f64,
}

/// Tabulated `sin_p`/`cos_p` for one exponent.
#[derive(Debug, Clone)]
pub struct PTrigTable {
    p: PExponent,
    pi_p: f64,
    convention: SinPConvention,
    /// Amplitude `(p-1)^{1/p}` of `sin_p`.
    amplitude: f64,
    step: f64,
    /// Quarter-period angle where `x^p = 1/2`; below it `x` is interpolated,
    /// above it `|cos_p|^{p-1}`.
    switch: f64,
    x: Vec<f64>,
    dx: Vec<f64>,
    eta: Vec<f64>,
    deta: Vec<f64>,
}

impl PTrigTable {
    pub fn new(p: f64) -> Result<Self> {
        let exponent = PExponent::new(p)?;
        let pi_p = exponent.pi_p();
        let amplitude = (p - 1.0).powf(1.0 / p);
        let alpha = 1.0 / p;
        let beta = 1.0 - alpha;
        let u_switch = reg_inc_beta(0.5, alpha, beta);
        let quarter = 0.5 * pi_p;
        let step = quarter / TABLE_CELLS as f64;

        let n = TABLE_CELLS + 1;
        let mut x = Vec::with_capacity(n);
        let mut dx = Vec::with_capacity(n);
        let mut eta = Vec::with_capacity(n);
        let mut deta = Vec::with_capacity(n);
        for i in 0..n {
            let u = i as f64 / TABLE_CELLS as f64;
            let (xi, yi) = if u <= u_switch {
                let xi = invert_rising(p, u, quarter, amplitude);
                (xi, (1.0 - xi.powf(p)).max(0.0).powf(1.0 / p))
            } else {
                let yi = invert_falling(p, 1.0 - u, quarter, amplitude);
                ((1.0 - yi.powf(p)).max(0.0).powf(1.0 / p), yi)
            };
            x.push(xi);
            dx.push(yi / amplitude);
            eta.push(yi.powf(p - 1.0));
            deta.push(-(p - 1.0) * xi.powf(p - 1.0) / amplitude);
        }

        Ok(Self {
            p: exponent,
            pi_p,
            convention: SinPConvention::UnitEigenvalue,
            amplitude,
            step,
            switch: u_switch * quarter,
            x,
            dx,
            eta,
            deta,
        })
    }

    /// Shared, lazily built table for `p`.
    pub fn cached(p: f64) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<PTrigTable>>>> = OnceLock::new();
        PExponent::new(p)?;
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = p.to_bits();
        if let Some(table) = cache.lock().expect("table cache poisoned").get(&key) {
            return Ok(Arc::clone(table));
        }
        let table = Arc::new(Self::new(p)?);
        cache
            .lock()
            .expect("table cache poisoned")
            .entry(key)
            .or_insert_with(|| Arc::clone(&table));
        Ok(table)
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p.value()
    }

    pub fn exponent(&self) -> PExponent {
        self.p
    }

    #[inline]
    pub fn pi_p(&self) -> f64 {
        self.pi_p
    }

    pub fn convention(&self) -> SinPConvention {
        self.convention
    }

    /// Maximum of `sin_p`, reached at `pi_p/2`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn sin_p(&self, theta: f64) -> f64 {
        let r = self.reduce(theta);
        r.sign_sin * self.amplitude * self.quarter(r.phi).x
    }

    /// Derivative of `sin_p`.
    pub fn cos_p(&self, theta: f64) -> f64 {
        let r = self.reduce(theta);
        r.sign_sin * r.sign_cos * self.quarter(r.phi).y
    }

    /// `|sin_p(theta)|^p / (p-1)`, which lies in `[0, 1]`.
    #[inline]
    pub fn sin_p_power(&self, theta: f64) -> f64 {
        self.quarter(self.reduce(theta).phi).z
    }

    /// Angle rate of the half-linear Pruefer transformation.
    ///
    /// With `v = rho sin_p(theta)` and `v' = lambda^{1/p} rho cos_p(theta)`,
    /// the equation `(|v'|^{p-2}v')' + lambda q |v|^{p-2} v = 0` becomes
    ///
    /// ```text
    /// theta' = lambda^{1/p} [1 + (q - 1) |sin_p(theta)|^p / (p-1)].
    /// ```
    ///
    /// For `q = 1` the angle advances at the constant rate `lambda^{1/p}`, and
    /// at zeros of `sin_p` the rate is `lambda^{1/p} > 0` whatever `q` is.
    pub fn prufer_rhs(&self, theta: f64, lambda: f64, q: f64) -> Result<f64> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !(q >= 0.0) {
            return Err(Error::Domain(format!(
                "weight value must be non-negative, got {q}"
            )));
        }
        Ok(self.angle_rate(theta, lambda.powf(1.0 / self.p()), q))
    }

    /// Unchecked angle rate with `scale = lambda^{1/p}` precomputed.
    #[inline]
    pub(crate) fn angle_rate(&self, theta: f64, scale: f64, q: f64) -> f64 {
        scale * (1.0 + (q - 1.0) * self.sin_p_power(theta))
    }

    /// `(ln rho)'` of the Pruefer amplitude.
    #[inline]
    pub(crate) fn log_amplitude_rate(&self, theta: f64, scale: f64, q: f64) -> f64 {
        let r = self.reduce(theta);
        let v = self.quarter(r.phi);
        -scale * (q - 1.0) * r.sign_cos * v.y * v.x.powf(self.p() - 1.0) / self.amplitude
    }

    fn reduce(&self, theta: f64) -> Reduced {
        let period = 2.0 * self.pi_p;
        let mut phi = theta.rem_euclid(period);
        let mut sign_sin = 1.0;
        if phi >= self.pi_p {
            phi -= self.pi_p;
            sign_sin = -1.0;
        }
        let mut sign_cos = 1.0;
        if phi > 0.5 * self.pi_p {
            phi = (self.pi_p - phi).max(0.0);
            sign_cos = -1.0;
        }
        Reduced {
            sign_sin,
            sign_cos,
            phi,
        }
    }

    fn quarter(&self, phi: f64) -> Quarter {
        let p = self.p();
        if phi <= self.switch {
            let x = hermite(&self.x, &self.dx, self.step, phi).clamp(0.0, 1.0);
            let z = x.powf(p);
            Quarter {
                x,
                y: (1.0 - z).max(0.0).powf(1.0 / p),
                z,
            }
        } else {
            let eta = hermite(&self.eta, &self.deta, self.step, phi).clamp(0.0, 1.0);
            let y = eta.powf(1.0 / (p - 1.0));
            let z = 1.0 - y.powf(p);
            Quarter {
                x: z.max(0.0).powf(1.0 / p),
                y,
                z,
            }
        }
    }
}

/// Cubic Hermite interpolation on a uniform grid starting at zero.
#[inline]
fn hermite(values: &[f64], slopes: &[f64], step: f64, at: f64) -> f64 {
    let cells = values.len() - 1;
    let pos = at / step;
    let i = (pos.floor() as usize).min(cells - 1);
    let s = pos - i as f64;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * values[i] + step * (h10 * slopes[i] + h11 * slopes[i + 1]) + h01 * values[i + 1]
}

/// `int_0^w t^{a-1} (1-t)^{-a} dt` for `w <= 1/2`, by its hypergeometric series.
fn beta_series(w: f64, a: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let mut coeff = 1.0;
    let mut power = 1.0;
    let mut sum = 1.0 / a;
    for n in 0..400 {
        let nf = n as f64;
        coeff *= (a + nf) / (nf + 1.0);
        power *= w;
        let term = coeff * power / (a + nf + 1.0);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    w.powf(a) * sum
}

/// Regularized incomplete beta `I_z(a, b)` for the case `a + b = 1`.
fn reg_inc_beta(z: f64, a: f64, b: f64) -> f64 {
    debug_assert!((a + b - 1.0).abs() < 1e-14);
    let complete = PI / (PI * a).sin();
    if z <= 0.0 {
        0.0
    } else if z >= 1.0 {
        1.0
    } else if z <= 0.5 {
        beta_series(z, a) / complete
    } else {
        1.0 - beta_series(1.0 - z, b) / complete
    }
}

/// Newton iteration safeguarded by bisection on `[0, 1]` for an increasing `f`.
fn solve_increasing(f: impl Fn(f64) -> (f64, f64), guess: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut x = guess.clamp(0.0, 1.0);
    for _ in 0..200 {
        let (value, slope) = f(x);
        if value == 0.0 {
            return x;
        }
        if value < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - value / slope;
        let next = if slope.is_finite() && slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs() || hi - lo <= f64::MIN_POSITIVE {
            return next;
        }
        x = next;
    }
    x
}

/// `x` in `[0, 1]` with `I_{x^p}(1/p, 1-1/p) = u`.
fn invert_rising(p: f64, u: f64, quarter: f64, amplitude: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let a = 1.0 / p;
    let complete = PI / (PI * a).sin();
    let guess = u * quarter / amplitude;
    solve_increasing(
        |x| {
            let z = x.powf(p);
            let value = reg_inc_beta(z, a, 1.0 - a) - u;
            let slope = p * (1.0 - z).max(0.0).powf(-a) / complete;
            (value, slope)
        },
        guess,
    )
}

/// `y` in `[0, 1]` with `I_{y^p}(1-1/p, 1/p) = w`, i.e. `|cos_p|` at distance
/// `w pi_p/2` before the crest.
fn invert_falling(p: f64, w: f64, quarter: f64, amplitude: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let a = 1.0 / p;
    let b = 1.0 - a;
    let complete = PI / (PI * a).sin();
    let guess = ((p - 1.0) * w * quarter / amplitude).powf(1.0 / (p - 1.0));
    solve_increasing(
        |y| {
            let z = y.powf(p);
            let value = reg_inc_beta(z, b, a) - w;
            let slope = p * y.powf(p - 2.0) * (1.0 - z).max(0.0).powf(-b) / complete;
            (value, slope)
        },
        guess,
    )
}
