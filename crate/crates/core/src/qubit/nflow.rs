//! Flow of the exponential coordinate `n(t, t0)` with `U = exp{-i n.σ}`.

use crate::error::{QevoError, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::linalg::{cross3, norm3};
use crate::trajectory::{step_count, Trajectory};

use super::check_interval;

/// Integration stops once `|n|` exceeds this (cot x diverges at π).
pub const CHART_LIMIT: f64 = std::f64::consts::PI - 0.05;

const SERIES_SWITCH: f64 = 0.1;

/// Sign of the `b × n` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NFlowSign {
    /// `dn/dt = b + b×n − c(|n|) n×(b×n)`, consistent with the quaternion flow
    Corrected,
    /// `dn/dt = b − b×n − c(|n|) n×(b×n)`
    Flipped,
}

/// `(1 − x cot x)/x²` by its Taylor series.
pub fn cot_coefficient_series(x: f64) -> f64 {
    let x2 = x * x;
    1.0 / 3.0 + x2 * (1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (1.0 / 4725.0 + x2 * 2.0 / 93555.0)))
}

pub fn cot_coefficient_direct(x: f64) -> f64 {
    (1.0 - x * x.cos() / x.sin()) / (x * x)
}

pub fn cot_coefficient(x: f64) -> f64 {
    if x < SERIES_SWITCH {
        cot_coefficient_series(x)
    } else {
        cot_coefficient_direct(x)
    }
}

fn rhs(b: &[f64; 3], n: &[f64; 3], sign: NFlowSign) -> [f64; 3] {
    let bxn = cross3(b, n);
    let nbn = cross3(n, &bxn);
    let k = cot_coefficient(norm3(n));
    let s = match sign {
        NFlowSign::Corrected => 1.0,
        NFlowSign::Flipped => -1.0,
    };
    [b[0] + s * bxn[0] - k * nbn[0], b[1] + s * bxn[1] - k * nbn[1], b[2] + s * bxn[2] - k * nbn[2]]
}

/// RK4 integration of the `n` flow from `n(t0) = 0`.
pub fn integrate_n_ode(h: &HamiltonianSpec, t0: f64, t1: f64, step: f64) -> Result<Trajectory<[f64; 3]>> {
    integrate_n_ode_with(h, t0, t1, step, NFlowSign::Corrected)
}

pub fn integrate_n_ode_with(
    h: &HamiltonianSpec,
    t0: f64,
    t1: f64,
    step: f64,
    sign: NFlowSign,
) -> Result<Trajectory<[f64; 3]>> {
    check_interval(t0, t1, step)?;
    let n_steps = step_count(t0, t1, step);
    let dt = (t1 - t0) / n_steps as f64;
    let mut traj = Trajectory::with_capacity(n_steps + 1, n_steps, dt);
    let mut n = [0.0; 3];
    traj.push(t0, n, 0.0, 0.0);
    let add = |a: &[f64; 3], s: f64, k: &[f64; 3]| [a[0] + s * k[0], a[1] + s * k[1], a[2] + s * k[2]];
    for k in 1..=n_steps {
        let t = t0 + (k - 1) as f64 * dt;
        let tk = if k == n_steps { t1 } else { t0 + k as f64 * dt };
        let (bl, bm, br) = (h.field(t), h.field(t + 0.5 * dt), h.field(tk));
        let k1 = rhs(&bl, &n, sign);
        let k2 = rhs(&bm, &add(&n, 0.5 * dt, &k1), sign);
        let k3 = rhs(&bm, &add(&n, 0.5 * dt, &k2), sign);
        let k4 = rhs(&br, &add(&n, dt, &k3), sign);
        for i in 0..3 {
            n[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let norm = norm3(&n);
        if !(norm <= CHART_LIMIT) {
            return Err(QevoError::ChartSingularity { t: tk, norm });
        }
        traj.push(tk, n, 0.0, 0.0);
    }
    Ok(traj)
}
