//! Eigenvalues of `(|v'|^{p-2}v')' + lambda q |v|^{p-2} v = 0`, `v(0) = v(1) = 0`.
//!
//! The Pruefer angle `theta` of a solution with `theta(0) = 0` satisfies
//! `theta' = lambda^{1/p} [1 + (q - 1)|sin_p theta|^p / (p-1)]`, and the zeros of
//! `v` sit exactly where `theta` crosses a multiple of `pi_p`. The miss function
//! `lambda -> theta(1; lambda)` is increasing, so `lambda_k` is the unique root
//! of `theta(1; lambda) = k pi_p`. The root is searched inside the two-sided
//! bracket from [`crate::bounds`], on the equivalent condition
//! `t(k pi_p; lambda) = 1` for the inverse function `t(theta)`, which can be
//! integrated between the points where `sin_p` loses smoothness.

use crate::bounds::{eigen_bracket, EigenBracket};
use crate::error::{Error, Result};
use crate::ode::{integrate, Dopri5, StepControl};
use crate::ptrig::PTrigTable;
use crate::weight::WeightProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Local error tolerance of the angle integration.
    pub angle_tol: f64,
    /// Relative width at which bisection hands over to the secant polish.
    pub rel_tol: f64,
    /// Number of eigenfunction samples, endpoints included.
    pub samples: usize,
    pub secant_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            angle_tol: 1e-10,
            rel_tol: 1e-8,
            samples: 401,
            secant_steps: 3,
        }
    }
}

impl SolverOptions {
    /// Defaults with the angle tolerance replaced.
    pub fn with_tol(angle_tol: f64) -> Self {
        Self {
            angle_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.angle_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Domain("solver tolerances must be positive".into()));
        }
        if self.samples < 3 {
            return Err(Error::Domain(
                "at least three eigenfunction samples are needed".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    pub lambda: f64,
    pub theta_end: f64,
    /// `(t, theta)` at every accepted step, starting at `(0, 0)`.
    pub trace: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub k: usize,
    pub lambda: f64,
    pub theta_end: f64,
    /// `(t, v)` samples with `max |v| = 1`, positive on the first bump.
    pub eigenfunction: Vec<(f64, f64)>,
    /// Sign changes of the sampled eigenfunction inside `(0, 1)`.
    pub zero_count: usize,
    pub bracket: EigenBracket,
    /// `|v(1)|` of the normalized eigenfunction.
    pub residual: f64,
}

fn check_table(w: &WeightProfile, table: &PTrigTable) -> Result<()> {
    if table.p() != w.p() {
        return Err(Error::InvalidConfig(format!(
            "trigonometric table is for p = {}, weight is for p = {}",
            table.p(),
            w.p()
        )));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    Ok(())
}

/// `q` continued past `t = 1` by its tangent in `ln q`, capped so that
/// overshooting trial values stay finite.
fn q_continued(w: &WeightProfile, ln_q1: f64, slope: f64, t: f64) -> f64 {
    if t <= 1.0 {
        w.q_unchecked(t)
    } else {
        (ln_q1 + ((t - 1.0) * slope).min(50.0)).exp()
    }
}

/// Order of the endpoint flattening in [`arrival_miss`].
const FLATTEN: i32 = 4;

/// `1 - t(k pi_p)`, where `t(theta)` inverts the Pruefer angle.
///
/// Same sign as `theta(1) - k pi_p`. `dt/dtheta` is integrated one quarter
/// period at a time: `|sin_p|^p` behaves like a fractional power of the
/// distance to its zeros and peaks, and the map
/// `theta = a + (b - a) s^m / (s^m + (1 - s)^m)` flattens those endpoints so
/// that the integrand is smooth in `s`.
fn arrival_miss(
    w: &WeightProfile,
    table: &PTrigTable,
    lambda: f64,
    k: usize,
    tol: f64,
) -> Result<f64> {
    let scale = lambda.powf(1.0 / w.p());
    let ln_q1 = w.ln_q_unchecked(1.0);
    let slope = w.derivative(1.0)? / w.q1();
    let quarter = 0.5 * table.pi_p();
    let m = FLATTEN;
    let mut t = 0.0;
    for j in 0..2 * k {
        let start = j as f64 * quarter;
        let rhs = |s: f64, y: &[f64; 1]| {
            let (a, b) = (s.powi(m), (1.0 - s).powi(m));
            let den = a + b;
            let theta = start + quarter * a / den;
            let dtheta = quarter * m as f64 * (s * (1.0 - s)).powi(m - 1) / (den * den);
            let q = q_continued(w, ln_q1, slope, y[0]);
            [dtheta / table.angle_rate(theta, scale, q)]
        };
        t = integrate(rhs, 0.0, [t], 1.0, StepControl::new(tol), |_, _| {})?[0];
    }
    Ok(1.0 - t)
}

/// Integrate the angle equation over `[0, 1]` for a trial `lambda`.
pub fn shoot(
    w: &WeightProfile,
    lambda: f64,
    table: &PTrigTable,
    tol: f64,
) -> Result<ShootingResult> {
    check_table(w, table)?;
    check_lambda(lambda)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let scale = lambda.powf(1.0 / w.p());
    let mut trace = vec![(0.0, 0.0)];
    let y = integrate(
        |t, y: &[f64; 1]| [table.angle_rate(y[0], scale, w.q_unchecked(t))],
        0.0,
        [0.0],
        1.0,
        StepControl::new(tol),
        |t, y| trace.push((t, y[0])),
    )?;
    Ok(ShootingResult {
        lambda,
        theta_end: y[0],
        trace,
    })
}

/// The `k`-th eigenvalue and its eigenfunction.
pub fn eigenvalue(
    w: &WeightProfile,
    k: usize,
    table: &PTrigTable,
    opts: &SolverOptions,
) -> Result<EigenResult> {
    check_table(w, table)?;
    opts.validate()?;
    let bracket = eigen_bracket(w, k, table)?;
    let miss = |lambda: f64| arrival_miss(w, table, lambda, k, opts.angle_tol);

    // Widen so that integration error cannot push a root sitting on a bracket
    // endpoint outside the search interval. An error e in t(k pi_p) moves the
    // root by a relative p e, since t scales like lambda^{-1/p}.
    let margin = 4.0 * opts.rel_tol + 50.0 * w.p() * opts.angle_tol;
    let (mut lo, mut hi) = (
        bracket.lower * (1.0 - margin),
        bracket.upper * (1.0 + margin),
    );
    let (mut m_lo, mut m_hi) = (miss(lo)?, miss(hi)?);
    if m_lo > 0.0 || m_hi < 0.0 {
        return Err(Error::Bracket {
            k,
            lower: lo,
            upper: hi,
            miss_lower: m_lo,
            miss_upper: m_hi,
        });
    }

    let slack = 100.0 * opts.angle_tol;
    while hi - lo > opts.rel_tol * 0.5 * (lo + hi) {
        let mid = 0.5 * (lo + hi);
        let m = miss(mid)?;
        if m < m_lo - slack || m > m_hi + slack {
            return Err(Error::NonMonotone { lambda: mid });
        }
        if m < 0.0 {
            lo = mid;
            m_lo = m;
        } else {
            hi = mid;
            m_hi = m;
        }
    }

    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..opts.secant_steps {
        if m_hi - m_lo <= 0.0 {
            break;
        }
        let guess = lo - m_lo * (hi - lo) / (m_hi - m_lo);
        if !(guess > lo && guess < hi) {
            break;
        }
        lambda = guess;
        let m = miss(guess)?;
        if m == 0.0 {
            break;
        }
        if m < 0.0 {
            lo = guess;
            m_lo = m;
        } else {
            hi = guess;
            m_hi = m;
        }
    }

    let (theta_end, eigenfunction) = reconstruct(w, table, lambda, opts)?;
    let zero_count = count_sign_changes(&eigenfunction[1..eigenfunction.len() - 1]);
    let residual = eigenfunction.last().map_or(0.0, |&(_, v)| v.abs());
    Ok(EigenResult {
        k,
        lambda,
        theta_end,
        eigenfunction,
        zero_count,
        bracket,
        residual,
    })
}

/// Sample `v = rho sin_p(theta)` on a uniform grid, normalized to `max |v| = 1`.
fn reconstruct(
    w: &WeightProfile,
    table: &PTrigTable,
    lambda: f64,
    opts: &SolverOptions,
) -> Result<(f64, Vec<(f64, f64)>)> {
    let scale = lambda.powf(1.0 / w.p());
    let rhs = |t: f64, y: &[f64; 2]| {
        let q = w.q_unchecked(t);
        [
            table.angle_rate(y[0], scale, q),
            table.log_amplitude_rate(y[0], scale, q),
        ]
    };
    let mut solver = Dopri5::new(0.0, [0.0, 0.0], StepControl::new(opts.angle_tol))?;
    let last = opts.samples - 1;
    let mut samples = Vec::with_capacity(opts.samples);
    samples.push((0.0, 0.0));
    let mut theta_end = 0.0;
    for i in 1..=last {
        let t = i as f64 / last as f64;
        let y = solver.advance_to(rhs, t, |_, _| {})?;
        samples.push((t, y[1].exp() * table.sin_p(y[0])));
        theta_end = y[0];
    }
    let peak = samples.iter().fold(0.0_f64, |m, &(_, v)| m.max(v.abs()));
    if peak > 0.0 {
        for s in &mut samples {
            s.1 /= peak;
        }
    }
    Ok((theta_end, samples))
}

fn count_sign_changes(samples: &[(f64, f64)]) -> usize {
    let mut count = 0;
    let mut sign = 0.0;
    for &(_, v) in samples {
        if v == 0.0 {
            continue;
        }
        let s = v.signum();
        if sign != 0.0 && s != sign {
            count += 1;
        }
        sign = s;
    }
    count
}

#[inline]
fn signed_pow(x: f64, e: f64) -> f64 {
    x.abs().powf(e).copysign(x)
}

/// `v(1)` and the number of sign changes of `v` on `(0, 1]`.
fn direct_shot(w: &WeightProfile, lambda: f64, tol: f64) -> Result<(f64, usize)> {
    let p = w.p();
    let inv = 1.0 / (p - 1.0);
    let mut sign = 1.0;
    let mut changes = 0;
    let y = integrate(
        |t, y: &[f64; 2]| {
            [
                signed_pow(y[1], inv),
                -lambda * w.q_unchecked(t) * signed_pow(y[0], p - 1.0),
            ]
        },
        0.0,
        [0.0, 1.0],
        1.0,
        StepControl::new(tol).with_h_max(0.02),
        |_, y| {
            if y[0] != 0.0 && y[0].signum() != sign {
                sign = y[0].signum();
                changes += 1;
            }
        },
    )?;
    Ok((y[0], changes))
}

/// Direct shooting on the first-order system
/// `v' = |w|^{1/(p-1)} sign w`, `w' = -lambda q |v|^{p-2} v` with
/// `v(0) = 0`, `w(0) = 1`. Returns `v(1)`.
///
/// This path is independent of the Pruefer angle and of `sin_p`; it is kept as
/// a cross-check. For `p` far from 2 the right-hand side is not Lipschitz at
/// zeros of `v` or `w` and the integrator may report a failure.
pub fn direct_shoot_oracle(w: &WeightProfile, lambda: f64, tol: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(direct_shot(w, lambda, tol)?.0)
}

/// `lambda_k` by bisection on the zero count of the direct shot:
/// the smallest `lambda` for which `v` has `k` zeros in `(0, 1]`.
pub fn direct_eigenvalue_oracle(
    w: &WeightProfile,
    k: usize,
    rel_tol: f64,
    tol: f64,
) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    let zeros = |lambda: f64| direct_shot(w, lambda, tol).map(|(_, n)| n);
    let mut lo = 1.0;
    while zeros(lo)? >= k {
        lo *= 0.5;
    }
    let mut hi = 2.0 * lo;
    while zeros(hi)? < k {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if zeros(mid)? >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::ProblemConfig;
    use std::f64::consts::PI;

    #[test]
    fn unit_weight_angle_advances_linearly() {
        let w = WeightProfile::unit(2.0).unwrap();
        let table = PTrigTable::cached(2.0).unwrap();
        for &lambda in &[0.5, 3.0, 40.0] {
            let s = shoot(&w, lambda, &table, 1e-11).unwrap();
            assert!((s.theta_end - lambda.sqrt()).abs() < 1e-10);
            assert_eq!(s.trace[0], (0.0, 0.0));
        }
    }

    #[test]
    fn rejects_degenerate_requests() {
        let w = WeightProfile::unit(2.0).unwrap();
        let table = PTrigTable::cached(2.0).unwrap();
        assert!(shoot(&w, 0.0, &table, 1e-10).is_err());
        assert!(shoot(&w, -1.0, &table, 1e-10).is_err());
        assert!(shoot(&w, 1.0, &table, 0.0).is_err());
        assert!(eigenvalue(&w, 0, &table, &SolverOptions::default()).is_err());
        let other = PTrigTable::cached(3.0).unwrap();
        assert!(shoot(&w, 1.0, &other, 1e-10).is_err());
        assert!(direct_shoot_oracle(&w, 0.0, 1e-10).is_err());
        assert!(direct_eigenvalue_oracle(&w, 0, 1e-8, 1e-10).is_err());
    }

    #[test]
    fn three_dimensional_shell_first_eigenvalue() {
        let w = WeightProfile::new(ProblemConfig::new(2.0, 3, 1.0, 2.0).unwrap()).unwrap();
        let table = PTrigTable::cached(2.0).unwrap();
        let s = shoot(&w, PI * PI, &table, 1e-11).unwrap();
        assert!((s.theta_end - PI).abs() < 1e-8);
        let r = eigenvalue(&w, 1, &table, &SolverOptions::default()).unwrap();
        assert!((r.lambda - PI * PI).abs() < 1e-8 * PI * PI);
        assert_eq!(r.zero_count, 0);
        assert!(r.residual < 1e-7);
    }

    #[test]
    fn sign_changes_skip_exact_zeros() {
        let s = [(0.0, 1.0), (0.1, 0.0), (0.2, -1.0), (0.3, -2.0), (0.4, 3.0)];
        assert_eq!(count_sign_changes(&s), 2);
    }
}
