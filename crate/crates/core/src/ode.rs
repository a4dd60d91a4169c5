//! Dormand–Prince 5(4) integrator with local error control.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th and 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl StepControl {
    pub fn new(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }
}

/// Integrator state for a system of fixed dimension `D`.
///
/// The step size carries over between calls to [`Dopri5::advance_to`], so a
/// solution can be sampled at many output points without restarting.
#[derive(Debug, Clone)]
pub struct Dopri5<const D: usize> {
    t: f64,
    y: [f64; D],
    h: Option<f64>,
    control: StepControl,
    steps: usize,
    rejected: usize,
}

#[inline]
fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

impl<const D: usize> Dopri5<D> {
    pub fn new(t0: f64, y0: [f64; D], control: StepControl) -> Result<Self> {
        if !(control.rtol > 0.0) || !(control.atol > 0.0) {
            return Err(Error::Domain(
                "integrator tolerances must be positive".into(),
            ));
        }
        Ok(Self {
            t: t0,
            y: y0,
            h: None,
            control,
            steps: 0,
            rejected: 0,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; D] {
        &self.y
    }

    /// Accepted and rejected step counts so far.
    pub fn stats(&self) -> (usize, usize) {
        (self.steps, self.rejected)
    }

    fn initial_step(&self, f0: &[f64; D], span: f64) -> f64 {
        let scale = |i: usize| self.control.atol + self.control.rtol * self.y[i].abs();
        let d0 = (0..D)
            .map(|i| (self.y[i] / scale(i)).powi(2))
            .sum::<f64>()
            .sqrt();
        let d1 = (0..D)
            .map(|i| (f0[i] / scale(i)).powi(2))
            .sum::<f64>()
            .sqrt();
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h.min(span.abs())
            .min(self.control.h_max)
            .max(1e-12 * span.abs())
    }

    /// Integrate forward to `t_end`, calling `observe(t, y)` after every
    /// accepted step.
    pub fn advance_to<F, O>(&mut self, mut f: F, t_end: f64, mut observe: O) -> Result<[f64; D]>
    where
        F: FnMut(f64, &[f64; D]) -> [f64; D],
        O: FnMut(f64, &[f64; D]),
    {
        if t_end < self.t {
            return Err(Error::Domain(
                "the integrator only runs forward in t".into(),
            ));
        }
        if t_end == self.t {
            return Ok(self.y);
        }
        let mut k1 = f(self.t, &self.y);
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(&k1, t_end - self.t),
        };

        while self.t < t_end {
            if self.steps + self.rejected >= self.control.max_steps {
                return Err(Error::Integration {
                    t: self.t,
                    reason: format!("step budget of {} exhausted", self.control.max_steps),
                });
            }
            h = h.min(self.control.h_max);
            let last = self.t + h >= t_end;
            let h_try = if last { t_end - self.t } else { h };
            if h_try <= 4.0 * f64::EPSILON * self.t.abs().max(1.0) && !last {
                return Err(Error::Integration {
                    t: self.t,
                    reason: format!("step size underflow (h = {h_try:e})"),
                });
            }

            let t = self.t;
            let y = &self.y;
            let k2 = f(t + C2 * h_try, &axpy(y, h_try, &[(A21, &k1)]));
            let k3 = f(t + C3 * h_try, &axpy(y, h_try, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                t + C4 * h_try,
                &axpy(y, h_try, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                t + C5 * h_try,
                &axpy(y, h_try, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + h_try,
                &axpy(
                    y,
                    h_try,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                y,
                h_try,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let t_new = if last { t_end } else { t + h_try };
            let k7 = f(t_new, &y_new);

            let mut err = 0.0;
            for i in 0..D {
                let e = h_try
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.control.atol + self.control.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / D as f64).sqrt();
            if !err.is_finite() {
                self.rejected += 1;
                h = 0.25 * h_try;
                continue;
            }

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                self.t = t_new;
                self.y = y_new;
                self.steps += 1;
                k1 = k7;
                observe(self.t, &self.y);
                // Keep the pre-truncation step for the next call.
                h = if last { h.max(h_try) } else { h_try * factor };
            } else {
                self.rejected += 1;
                h = h_try * factor.min(1.0);
            }
        }
        self.h = Some(h);
        Ok(self.y)
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` in one call.
pub fn integrate<const D: usize, F, O>(
    f: F,
    t0: f64,
    y0: [f64; D],
    t1: f64,
    control: StepControl,
    observe: O,
) -> Result<[f64; D]>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
    O: FnMut(f64, &[f64; D]),
{
    Dopri5::new(t0, y0, control)?.advance_to(f, t1, observe)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = integrate(
            |_, y| [-2.0 * y[0]],
            0.0,
            [1.0],
            3.0,
            StepControl::new(1e-12),
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - (-6.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_oscillator_with_restarts() {
        let mut solver = Dopri5::new(0.0, [0.0, 1.0], StepControl::new(1e-11)).unwrap();
        for i in 1..=10 {
            let t = i as f64 * 0.7;
            let y = solver
                .advance_to(|_, y| [y[1], -y[0]], t, |_, _| {})
                .unwrap();
            assert!((y[0] - t.sin()).abs() < 1e-9, "t = {t}");
            assert!((y[1] - t.cos()).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn step_budget_is_reported() {
        let mut control = StepControl::new(1e-12);
        control.max_steps = 5;
        let err = integrate(
            |_, y| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            100.0,
            control,
            |_, _| {},
        );
        assert!(matches!(err, Err(Error::Integration { .. })));
    }

    #[test]
    fn observer_sees_final_time() {
        let mut last = 0.0;
        integrate(
            |_, y| [y[0]],
            0.0,
            [1.0],
            1.0,
            StepControl::new(1e-8),
            |t, _| last = t,
        )
        .unwrap();
        assert_eq!(last, 1.0);
    }
}
