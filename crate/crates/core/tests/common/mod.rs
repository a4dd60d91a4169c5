//! Oracles shared by the integration tests. None of them touch the Pruefer
//! angle or the `sin_p` table.

#![allow(dead_code)]

use radial_plap::weight::{ProblemConfig, WeightProfile};

pub const PI_3: f64 = 3.046991999046172284453393904397330639495;
pub const PI_4: f64 = 2.923581388750120730486878669957777343732;

/// `sin_p(f pi_p)` for `f` in [`SIN_P_FRACTIONS`], from 40-digit evaluation.
pub const SIN_P_FRACTIONS: [f64; 4] = [0.1, 0.25, 0.4, 0.49];
pub const SIN_P_VALUES: [(f64, [f64; 4]); 3] = [
    (
        3.0,
        [
            0.30433980874687416708,
            0.7475630914416271763,
            1.1217601860147314496,
            1.2554567730173111425,
        ],
    ),
    (
        1.5,
        [
            0.27867219724948941829,
            0.538855069012217768,
            0.62402725934808038331,
            0.62995458468665686178,
        ],
    ),
    (
        4.0,
        [
            0.29232253251598015532,
            0.72738603271323676954,
            1.1303223564313015318,
            1.3071969958686079051,
        ],
    ),
];

/// Radial Dirichlet eigenvalues at `p = 2`, `Rbar = R + 1`, from the Bessel
/// cross-product determinant: `(N, R, [lambda_1, lambda_2, lambda_3])`.
pub const BESSEL_EIGENVALUES: [(u32, f64, [f64; 3]); 5] = [
    (
        2,
        1.0,
        [
            9.7533221247507149107,
            39.355995657592581457,
            88.702633308924489804,
        ],
    ),
    (
        5,
        1.0,
        [
            10.797839372011283074,
            40.458226829498168702,
            89.817244930829000198,
        ],
    ),
    (
        10,
        1.0,
        [
            17.084708022727263233,
            47.212895175875485783,
            96.645858663785374423,
        ],
    ),
    (
        2,
        10.0,
        [
            9.8673348087926793277,
            39.476145663644444411,
            88.824167232347437646,
        ],
    ),
    (
        5,
        10.0,
        [
            9.8877611246790817822,
            39.496593134446725563,
            88.84461863208531776,
        ],
    ),
];

pub fn profile(p: f64, dim: u32, inner: f64, outer: f64) -> WeightProfile {
    WeightProfile::new(ProblemConfig::new(p, dim, inner, outer).unwrap()).unwrap()
}

pub fn unit_width(p: f64, dim: u32, inner: f64) -> WeightProfile {
    WeightProfile::new(ProblemConfig::unit_width(p, dim, inner).unwrap()).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Finite-difference oracle for `-v'' = lambda q v`, `v(0) = v(1) = 0`, on
/// `n` interior points. The generalized problem `A v = lambda Q v` is
/// symmetrized as `Q^{-1/2} A Q^{-1/2}` and the `k`-th eigenvalue isolated by
/// Sturm-count bisection.
pub fn fd_eigenvalue(w: &WeightProfile, k: usize, n: usize) -> f64 {
    let h = 1.0 / (n + 1) as f64;
    let q: Vec<f64> = (1..=n).map(|i| w.q_unchecked(i as f64 * h)).collect();
    let d: Vec<f64> = q.iter().map(|qi| 2.0 / (h * h * qi)).collect();
    let e: Vec<f64> = q
        .windows(2)
        .map(|pair| -1.0 / (h * h * (pair[0] * pair[1]).sqrt()))
        .collect();

    // Eigenvalues strictly below x: negative pivots of T - x I.
    let count_below = |x: f64| {
        let mut count = 0;
        let mut pivot = d[0] - x;
        if pivot < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let prev = if pivot == 0.0 { f64::EPSILON } else { pivot };
            pivot = d[i] - x - e[i - 1] * e[i - 1] / prev;
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    };

    let mut lo = 0.0;
    let mut hi = d
        .iter()
        .enumerate()
        .map(|(i, di)| {
            let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { e[i].abs() } else { 0.0 };
            di + left + right
        })
        .fold(0.0, f64::max);
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Classical RK4 on `v' = |w|^{1/(p-1)} sign w`, `w' = -lambda q |v|^{p-2} v`,
/// `v(0) = 0`, `w(0) = 1`, with `steps` equal steps. Returns
/// `(v(1), max |v|, sign changes of v)`.
pub fn rk4_direct(w: &WeightProfile, lambda: f64, steps: usize) -> (f64, f64, usize) {
    let p = w.p();
    let spow = |x: f64, e: f64| x.abs().powf(e).copysign(x);
    let f = |t: f64, y: [f64; 2]| {
        [
            spow(y[1], 1.0 / (p - 1.0)),
            -lambda * w.q_unchecked(t) * spow(y[0], p - 1.0),
        ]
    };
    let h = 1.0 / steps as f64;
    let mut y = [0.0, 1.0];
    let mut peak = 0.0_f64;
    let mut changes = 0;
    let mut sign = 1.0;
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(
            t + 0.5 * h,
            [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]],
        );
        let k3 = f(
            t + 0.5 * h,
            [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]],
        );
        let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        peak = peak.max(y[0].abs());
        if i + 1 < steps && y[0] != 0.0 && y[0].signum() != sign {
            sign = y[0].signum();
            changes += 1;
        }
    }
    (y[0], peak, changes)
}

/// Random admissible configuration `(p, N, R, Rbar)`: `1 < p <= N <= 10`, half
/// of them with `p = N`, `R` in `[1e-2, 1e4]`, `Rbar / R - 1` in `[1e-3, 30]`.
pub fn config_strategy() -> impl proptest::strategy::Strategy<Value = (f64, u32, f64, f64)> {
    use proptest::prelude::*;
    (
        2u32..=10,
        0.0f64..1.0,
        any::<bool>(),
        -2.0f64..4.0,
        -3.0f64..1.5,
    )
        .prop_map(|(dim, frac, conformal, log_r, log_width)| {
            let p = if conformal {
                dim as f64
            } else {
                1.05 + frac * (dim as f64 - 1.05)
            };
            let inner = 10f64.powf(log_r);
            (p, dim, inner, inner * (1.0 + 10f64.powf(log_width)))
        })
}
