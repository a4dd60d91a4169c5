//! Two-sided eigenvalue bounds from the weight averages
//! `qbar_minus = int_0^1 min{1, q}` and `qbar_plus = int_0^1 max{1, q}`:
//!
//! ```text
//! (k pi_p / qbar_plus)^p <= lambda_k <= (k pi_p / qbar_minus)^p.
//! ```
//!
//! Because `q` is increasing, `min{1, q}` and `max{1, q}` switch branches at most
//! once, at the kink `q(t*) = 1`, and both integrals are exact in terms of the
//! antiderivative of `q`.

use crate::error::{Error, Result};
use crate::ptrig::PTrigTable;
use crate::quadrature;
use crate::weight::WeightProfile;

/// `int_0^1 min{1, q(t)} dt`, in `(0, 1]`.
pub fn q_bar_minus(w: &WeightProfile) -> f64 {
    match w.kink() {
        Some(t) => w.antiderivative(t).expect("kink lies in (0, 1)") + (1.0 - t),
        None if w.q0() >= 1.0 => 1.0,
        None => w.integral(),
    }
}

/// `int_0^1 max{1, q(t)} dt`, at least 1.
pub fn q_bar_plus(w: &WeightProfile) -> f64 {
    match w.kink() {
        Some(t) => t + (w.integral() - w.antiderivative(t).expect("kink lies in (0, 1)")),
        None if w.q0() >= 1.0 => w.integral(),
        None => 1.0,
    }
}

/// Both averages by adaptive quadrature, split at the kink. Independent of the
/// closed-form antiderivative; used as a cross-check.
pub fn q_bars_by_quadrature(w: &WeightProfile, tol: f64) -> Result<(f64, f64)> {
    let breaks: Vec<f64> = match w.kink() {
        Some(t) => vec![0.0, t, 1.0],
        None => vec![0.0, 1.0],
    };
    let minus = quadrature::integrate_with_breaks(|t| w.q_unchecked(t).min(1.0), &breaks, tol)?;
    let plus = quadrature::integrate_with_breaks(|t| w.q_unchecked(t).max(1.0), &breaks, tol)?;
    Ok((minus.value, plus.value))
}

/// Eigenvalue bracket for index `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBracket {
    pub k: usize,
    pub q_minus: f64,
    pub q_plus: f64,
    pub lower: f64,
    pub upper: f64,
}

impl EigenBracket {
    pub fn contains(&self, lambda: f64) -> bool {
        self.lower <= lambda && lambda <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn eigen_bracket(w: &WeightProfile, k: usize, table: &PTrigTable) -> Result<EigenBracket> {
    if k < 1 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    if table.p() != w.p() {
        return Err(Error::InvalidConfig(format!(
            "trigonometric table is for p = {}, weight is for p = {}",
            table.p(),
            w.p()
        )));
    }
    let q_minus = q_bar_minus(w);
    let q_plus = q_bar_plus(w);
    let scaled = k as f64 * table.pi_p();
    Ok(EigenBracket {
        k,
        q_minus,
        q_plus,
        lower: (scaled / q_plus).powf(w.p()),
        upper: (scaled / q_minus).powf(w.p()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::ProblemConfig;

    #[test]
    fn unit_weight_bracket_is_degenerate() {
        for &p in &[1.5, 2.0, 3.0] {
            let w = WeightProfile::unit(p).unwrap();
            let table = PTrigTable::cached(p).unwrap();
            assert_eq!(q_bar_minus(&w), 1.0);
            assert_eq!(q_bar_plus(&w), 1.0);
            for k in 1..4 {
                let b = eigen_bracket(&w, k, &table).unwrap();
                let target = (k as f64 * table.pi_p()).powf(p);
                assert!((b.lower - target).abs() <= 1e-14 * target);
                assert_eq!(b.lower, b.upper);
            }
        }
    }

    #[test]
    fn index_doubling_scales_by_two_to_the_p() {
        let w = WeightProfile::new(ProblemConfig::new(3.0, 5, 1.0, 2.0).unwrap()).unwrap();
        let table = PTrigTable::cached(3.0).unwrap();
        let one = eigen_bracket(&w, 1, &table).unwrap();
        let two = eigen_bracket(&w, 2, &table).unwrap();
        assert!((two.lower / one.lower - 8.0).abs() < 1e-13);
        assert!((two.upper / one.upper - 8.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_zero_index_and_mismatched_table() {
        let w = WeightProfile::unit(2.0).unwrap();
        let table = PTrigTable::cached(2.0).unwrap();
        assert!(eigen_bracket(&w, 0, &table).is_err());
        let other = PTrigTable::cached(3.0).unwrap();
        assert!(matches!(
            eigen_bracket(&w, 1, &other),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn one_sided_weights() {
        let above = WeightProfile::new(ProblemConfig::new(2.0, 3, 10.0, 20.0).unwrap()).unwrap();
        assert_eq!(q_bar_minus(&above), 1.0);
        assert_eq!(q_bar_plus(&above), above.integral());
        let below = WeightProfile::new(ProblemConfig::new(2.0, 3, 0.01, 0.02).unwrap()).unwrap();
        assert_eq!(q_bar_plus(&below), 1.0);
        assert_eq!(q_bar_minus(&below), below.integral());
    }
}
