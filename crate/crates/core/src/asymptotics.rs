//! Thin-shell sweeps `lambda_k(R, R+1)` as `R` grows.
//!
//! Three families have `q(t) -> 1` uniformly as `R -> infinity`, so both bracket
//! endpoints, and with them `lambda_k`, tend to `(k pi_p)^p`:
//!
//! * `p = N`,
//! * `p = 2`, `N >= 3`,
//! * `p = r + 1`, `N = 2r + 1`, where `q(t) = (R^2+R)^{r+1} / (R+1-t)^{2(r+1)}`.
//!
//! No rate is known for this limit. The pass criterion below is derived from
//! the bracket width, which shrinks like `1/R`.

use std::fmt;

use rayon::prelude::*;

use crate::bounds::{eigen_bracket, q_bar_minus, q_bar_plus};
use crate::eigensolver::{eigenvalue, SolverOptions};
use crate::error::{Error, Result};
use crate::ptrig::PTrigTable;
use crate::weight::{ProblemConfig, WeightProfile};

/// Default radii of a sweep.
pub const DEFAULT_RADII: [f64; 4] = [10.0, 100.0, 1000.0, 10000.0];

/// Beyond this radius `q - 1` approaches rounding level in double precision.
pub const LARGE_RADIUS: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `p = N`.
    PEqualsN { p: u32 },
    /// `p = 2`, `N >= 3`.
    P2 { dim: u32 },
    /// `p = r + 1`, `N = 2r + 1`.
    RFamily { r: u32 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::PEqualsN { p } if p < 2 => Err(Error::InvalidConfig(format!(
                "the p = N family needs p >= 2, got {p}"
            ))),
            Family::P2 { dim } if dim < 3 => Err(Error::InvalidConfig(format!(
                "the p = 2 family needs N >= 3, got {dim}"
            ))),
            Family::RFamily { r } if r < 1 => Err(Error::InvalidConfig(format!(
                "the r family needs r >= 1, got {r}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn p(&self) -> f64 {
        match *self {
            Family::PEqualsN { p } => p as f64,
            Family::P2 { .. } => 2.0,
            Family::RFamily { r } => (r + 1) as f64,
        }
    }

    pub fn dim(&self) -> u32 {
        match *self {
            Family::PEqualsN { p } => p,
            Family::P2 { dim } => dim,
            Family::RFamily { r } => 2 * r + 1,
        }
    }

    pub fn r(&self) -> Option<u32> {
        match *self {
            Family::RFamily { r } => Some(r),
            _ => None,
        }
    }

    /// Short name used on the command line and in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            Family::PEqualsN { .. } => "pn",
            Family::P2 { .. } => "p2",
            Family::RFamily { .. } => "rfam",
        }
    }

    /// Leading coefficient `max(p, N-1)` of the `1/R` deviation of `q` from 1.
    pub fn rate_factor(&self) -> f64 {
        self.p().max(self.dim() as f64 - 1.0)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::PEqualsN { p } => write!(f, "pn(p = N = {p})"),
            Family::P2 { dim } => write!(f, "p2(p = 2, N = {dim})"),
            Family::RFamily { r } => write!(f, "rfam(r = {r}, p = {}, N = {})", r + 1, 2 * r + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub radii: Vec<f64>,
    pub k_max: usize,
    pub options: SolverOptions,
}

impl SweepSpec {
    pub fn new(family: Family, radii: Vec<f64>, k_max: usize) -> Result<Self> {
        let spec = Self {
            family,
            radii,
            k_max,
            options: SolverOptions::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_defaults(family: Family, k_max: usize) -> Result<Self> {
        Self::new(family, DEFAULT_RADII.to_vec(), k_max)
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if self.k_max < 1 {
            return Err(Error::InvalidConfig("k_max must be at least 1".into()));
        }
        if self.radii.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one radius is required".into(),
            ));
        }
        if self.radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidConfig(
                "radii must be positive and finite".into(),
            ));
        }
        if self.radii.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidConfig(
                "radii must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Radii above [`LARGE_RADIUS`], where results are dominated by rounding.
    pub fn large_radii(&self) -> Vec<f64> {
        self.radii
            .iter()
            .copied()
            .filter(|&r| r > LARGE_RADIUS)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecordStatus {
    Ok,
    Failed(String),
}

impl fmt::Display for RecordStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordStatus::Ok => f.write_str("ok"),
            RecordStatus::Failed(msg) => write!(f, "error: {msg}"),
        }
    }
}

/// One `(R, k)` row of a sweep, with `Rbar = R + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub family: Family,
    pub radius: f64,
    pub k: usize,
    pub lambda: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    /// `(k pi_p)^p`.
    pub target: f64,
    /// `|lambda - target|`.
    pub gap: Option<f64>,
    pub q0: f64,
    pub q1: f64,
    pub qbar_minus: f64,
    pub qbar_plus: f64,
    pub status: RecordStatus,
}

impl SweepRecord {
    pub fn p(&self) -> f64 {
        self.family.p()
    }

    pub fn dim(&self) -> u32 {
        self.family.dim()
    }
}

fn sweep_record(
    family: Family,
    radius: f64,
    k: usize,
    table: &PTrigTable,
    opts: &SolverOptions,
) -> Result<SweepRecord> {
    let config = ProblemConfig::unit_width(family.p(), family.dim(), radius)?;
    let w = WeightProfile::new(config)?;
    let bracket = eigen_bracket(&w, k, table)?;
    let target = (k as f64 * table.pi_p()).powf(family.p());
    let (lambda, status) = match eigenvalue(&w, k, table, opts) {
        Ok(res) => (Some(res.lambda), RecordStatus::Ok),
        Err(e) => (None, RecordStatus::Failed(e.to_string())),
    };
    Ok(SweepRecord {
        family,
        radius,
        k,
        lambda,
        lower: bracket.lower,
        upper: bracket.upper,
        target,
        gap: lambda.map(|l| (l - target).abs()),
        q0: w.q0(),
        q1: w.q1(),
        qbar_minus: q_bar_minus(&w),
        qbar_plus: q_bar_plus(&w),
        status,
    })
}

/// Solve every `(R, k)` pair of the sweep. Solver failures are recorded per
/// row; only an invalid spec is an error. Rows are sorted by `(k, R)`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let table = PTrigTable::cached(spec.family.p())?;
    let jobs: Vec<(usize, f64)> = (1..=spec.k_max)
        .flat_map(|k| spec.radii.iter().map(move |&r| (k, r)))
        .collect();
    let mut records = jobs
        .par_iter()
        .map(|&(k, r)| sweep_record(spec.family, r, k, &table, &spec.options))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.k.cmp(&b.k).then(a.radius.total_cmp(&b.radius)));
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every gap is below [`RATE_FLOOR`].
    Exact,
    Converging,
    /// Some rows of the group failed to solve.
    Incomplete,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Exact => "exact",
            Verdict::Converging => "converging",
            Verdict::Incomplete => "incomplete",
        })
    }
}

/// Convergence diagnostics for one `(family, k)` group of records.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSummary {
    pub family: Family,
    pub k: usize,
    pub radii: Vec<f64>,
    pub gaps: Vec<f64>,
    /// Least-squares slope of `ln gap` against `ln R`, over gaps above the
    /// noise floor. `None` with fewer than two such points.
    pub slope: Option<f64>,
    pub verdict: Verdict,
    /// Allowed gap at the largest radius.
    pub tolerance: f64,
    pub passed: bool,
}

/// Relative gap accepted at any radius.
pub const NOISE_FLOOR: f64 = 1e-6;

/// Relative gap below which a record counts as solver noise when fitting the
/// decay rate: ten times the default eigenvalue tolerance.
pub const RATE_FLOOR: f64 = 1e-7;

/// Allowed gap at radius `r`: `max(1e-6 target, 5 k f target / r)` with
/// `f = max(p, N-1)`.
pub fn gap_tolerance(family: Family, k: usize, target: f64, radius: f64) -> f64 {
    (NOISE_FLOOR * target).max(5.0 * k as f64 * family.rate_factor() * target / radius)
}

fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(r, g)| (a + r.ln(), b + g.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(r, g) in points {
        let dx = r.ln() - mx;
        sxy += dx * (g.ln() - my);
        sxx += dx * dx;
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Group records by `(family, k)` and judge each group against
/// [`gap_tolerance`] at its largest radius.
pub fn convergence_report(records: &[SweepRecord]) -> Result<Vec<ConvergenceSummary>> {
    let mut keys: Vec<(Family, usize)> = records.iter().map(|r| (r.family, r.k)).collect();
    keys.sort();
    keys.dedup();
    if keys.is_empty() {
        return Err(Error::InsufficientData("no records".into()));
    }

    let mut out = Vec::with_capacity(keys.len());
    for (family, k) in keys {
        let mut group: Vec<&SweepRecord> = records
            .iter()
            .filter(|r| r.family == family && r.k == k)
            .collect();
        group.sort_by(|a, b| a.radius.total_cmp(&b.radius));
        group.dedup_by(|a, b| a.radius == b.radius);
        if group.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "{family}, k = {k}: at least two radii are needed to estimate a rate"
            )));
        }
        let last = group[group.len() - 1];
        let tolerance = gap_tolerance(family, k, last.target, last.radius);
        let radii: Vec<f64> = group.iter().map(|r| r.radius).collect();
        if group.iter().any(|r| r.gap.is_none()) {
            out.push(ConvergenceSummary {
                family,
                k,
                radii,
                gaps: group.iter().map(|r| r.gap.unwrap_or(f64::NAN)).collect(),
                slope: None,
                verdict: Verdict::Incomplete,
                tolerance,
                passed: false,
            });
            continue;
        }
        let gaps: Vec<f64> = group.iter().map(|r| r.gap.unwrap_or(f64::NAN)).collect();
        let above_floor: Vec<(f64, f64)> = group
            .iter()
            .zip(&gaps)
            .filter(|(r, &g)| g > RATE_FLOOR * r.target)
            .map(|(r, &g)| (r.radius, g))
            .collect();
        let verdict = if above_floor.is_empty() {
            Verdict::Exact
        } else {
            Verdict::Converging
        };
        let slope = log_log_slope(&above_floor);
        let passed = gaps[gaps.len() - 1] <= tolerance;
        out.push(ConvergenceSummary {
            family,
            k,
            radii,
            gaps,
            slope,
            verdict,
            tolerance,
            passed,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parameters() {
        let f = Family::RFamily { r: 2 };
        assert_eq!((f.p(), f.dim(), f.r()), (3.0, 5, Some(2)));
        assert_eq!(Family::P2 { dim: 7 }.rate_factor(), 6.0);
        assert_eq!(Family::PEqualsN { p: 3 }.rate_factor(), 3.0);
        assert!(Family::P2 { dim: 2 }.validate().is_err());
        assert!(Family::PEqualsN { p: 1 }.validate().is_err());
        assert!(Family::RFamily { r: 0 }.validate().is_err());
    }

    #[test]
    fn spec_validation() {
        let f = Family::P2 { dim: 3 };
        assert!(SweepSpec::new(f, vec![10.0, 100.0], 2).is_ok());
        assert!(SweepSpec::new(f, vec![100.0, 10.0], 2).is_err());
        assert!(SweepSpec::new(f, vec![10.0, 10.0], 2).is_err());
        assert!(SweepSpec::new(f, vec![-1.0, 10.0], 2).is_err());
        assert!(SweepSpec::new(f, vec![], 2).is_err());
        assert!(SweepSpec::new(f, vec![10.0], 0).is_err());
        let spec = SweepSpec::new(f, vec![10.0, 1e9], 1).unwrap();
        assert_eq!(spec.large_radii(), vec![1e9]);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&r| (r, 3.0 / r))
            .collect();
        assert!((log_log_slope(&pts).unwrap() + 1.0).abs() < 1e-12);
        assert!(log_log_slope(&pts[..1]).is_none());
    }

    #[test]
    fn report_needs_two_radii() {
        let spec = SweepSpec::new(Family::P2 { dim: 3 }, vec![10.0], 1).unwrap();
        let records = run_sweep(&spec).unwrap();
        assert!(matches!(
            convergence_report(&records),
            Err(Error::InsufficientData(_))
        ));
        assert!(convergence_report(&[]).is_err());
    }
}
