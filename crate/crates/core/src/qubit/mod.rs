//! Qubit (d = 2) evolution in quaternion coordinates.
//!
//! A propagator `U = e^{-iα}(u0 I + i ũ.σ)` is carried as the real unit
//! 4-vector `(u0, ũ)`, which obeys `q' = A(t) q` with a skew-symmetric `A`
//! built from `b(t)`.

mod classes;
mod families;
mod nflow;

pub use classes::{
    class_certificate_theorem3, commuting_check, commuting_closed_form, gamma_b, theorem3_closed_form,
    theorem3_derivative, to_spherical, ClassCertificate, ClassKind, SphericalTrack, J_DRIFT_TOLERANCE,
    THEOREM3_SAMPLES,
};
pub use families::{
    phi_driven_closed_form, rotating_field_closed_form, rotating_field_pure_state, EtaReading, GammaConvention,
    PhiDrivenParams, RotatingFieldParams,
};
pub use nflow::{
    cot_coefficient, cot_coefficient_direct, cot_coefficient_series, integrate_n_ode, integrate_n_ode_with, NFlowSign,
    CHART_LIMIT,
};

use serde::{Deserialize, Serialize};

use crate::error::{QevoError, Result};
use crate::hamiltonian::{BlochHamiltonian, HamiltonianSpec};
use crate::linalg::{c, cross3, dot3, norm3, CMatrix};
use crate::trajectory::{step_count, RecordOptions, Trajectory};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuaternionState {
    pub u0: f64,
    pub u: [f64; 3],
}

impl QuaternionState {
    pub const IDENTITY: QuaternionState = QuaternionState { u0: 1.0, u: [0.0; 3] };

    pub fn new(u0: f64, u: [f64; 3]) -> Self {
        Self { u0, u }
    }

    pub fn from_array(q: [f64; 4]) -> Self {
        Self { u0: q[0], u: [q[1], q[2], q[3]] }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.u0, self.u[0], self.u[1], self.u[2]]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u0 * self.u0 + dot3(&self.u, &self.u)
    }

    /// `|u0² + |ũ|² − 1|`.
    pub fn norm_defect(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self { u0: self.u0 / n, u: self.u.map(|x| x / n) }
    }

    /// Quaternion of the product `U_a U_b` of the corresponding propagators.
    pub fn compose(&self, other: &QuaternionState) -> QuaternionState {
        let (a0, a, b0, b) = (self.u0, &self.u, other.u0, &other.u);
        let x = cross3(a, b);
        QuaternionState {
            u0: a0 * b0 - dot3(a, b),
            u: [a0 * b[0] + b0 * a[0] - x[0], a0 * b[1] + b0 * a[1] - x[1], a0 * b[2] + b0 * a[2] - x[2]],
        }
    }

    pub fn max_abs_diff(&self, other: &QuaternionState) -> f64 {
        self.to_array().iter().zip(other.to_array().iter()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// The 4×4 skew-symmetric generator of the quaternion flow.
pub fn skew_matrix(b: &[f64; 3]) -> [[f64; 4]; 4] {
    let [b1, b2, b3] = *b;
    [[0.0, b1, b2, b3], [-b1, 0.0, -b3, b2], [-b2, b3, 0.0, -b1], [-b3, -b2, b1, 0.0]]
}

#[inline]
fn flow(b: &[f64; 3], q: &[f64; 4]) -> [f64; 4] {
    let [b1, b2, b3] = *b;
    [
        b1 * q[1] + b2 * q[2] + b3 * q[3],
        -b1 * q[0] - b3 * q[2] + b2 * q[3],
        -b2 * q[0] + b3 * q[1] - b1 * q[3],
        -b3 * q[0] - b2 * q[1] + b1 * q[2],
    ]
}

#[inline]
fn axpy(q: &[f64; 4], h: f64, k: &[f64; 4]) -> [f64; 4] {
    [q[0] + h * k[0], q[1] + h * k[1], q[2] + h * k[2], q[3] + h * k[3]]
}

pub(crate) fn check_interval(t0: f64, t1: f64, step: f64) -> Result<()> {
    if !(t1 > t0) {
        return Err(QevoError::Precondition(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(QevoError::Precondition(format!("need step > 0, got {step}")));
    }
    Ok(())
}

/// RK4 integration of the quaternion flow from `(1, 0, 0, 0)`, recording
/// every step.
pub fn integrate_quaternion(h: &HamiltonianSpec, t0: f64, t1: f64, step: f64) -> Result<Trajectory<QuaternionState>> {
    integrate_quaternion_with(h, t0, t1, step, RecordOptions::default())
}

pub fn integrate_quaternion_with(
    h: &HamiltonianSpec,
    t0: f64,
    t1: f64,
    step: f64,
    opts: RecordOptions,
) -> Result<Trajectory<QuaternionState>> {
    check_interval(t0, t1, step)?;
    h.validate_on(t0, t1)?;
    let n = step_count(t0, t1, step);
    let dt = (t1 - t0) / n as f64;
    let mut traj = Trajectory::with_capacity(n / opts.stride + 2, n, dt);
    let mut q = [1.0, 0.0, 0.0, 0.0];
    traj.push(t0, QuaternionState::IDENTITY, 0.0, 0.0);
    let mut worst = 0.0_f64;
    let mut b_left = h.field(t0);
    for k in 1..=n {
        let t = t0 + (k - 1) as f64 * dt;
        let b_mid = h.field(t + 0.5 * dt);
        let b_right = h.field(if k == n { t1 } else { t0 + k as f64 * dt });
        let k1 = flow(&b_left, &q);
        let k2 = flow(&b_mid, &axpy(&q, 0.5 * dt, &k1));
        let k3 = flow(&b_mid, &axpy(&q, 0.5 * dt, &k2));
        let k4 = flow(&b_right, &axpy(&q, dt, &k3));
        for i in 0..4 {
            q[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let nsq = q.iter().map(|x| x * x).sum::<f64>();
        if !nsq.is_finite() {
            return Err(QevoError::Numerical(format!("quaternion state diverged at t = {t}")));
        }
        worst = worst.max((nsq - 1.0).abs());
        if opts.renormalize {
            let s = nsq.sqrt();
            q.iter_mut().for_each(|x| *x /= s);
        }
        b_left = b_right;
        if opts.records(k, n) {
            let tk = if k == n { t1 } else { t0 + k as f64 * dt };
            traj.push(tk, QuaternionState::from_array(q), worst, h.phase_integral(t0, tk));
            worst = 0.0;
        }
    }
    Ok(traj)
}

/// `∫_{t0}^{t1} b0 dτ`.
pub fn phase_integral(h: &HamiltonianSpec, t0: f64, t1: f64) -> f64 {
    h.phase_integral(t0, t1)
}

/// `U = e^{-i phase} (u0 I + i ũ.σ)`.
pub fn assemble_propagator(q: &QuaternionState, phase: f64) -> Result<CMatrix> {
    let defect = q.norm_defect();
    if defect > 1e-8 {
        return Err(QevoError::NotNormalized(defect));
    }
    let [u1, u2, u3] = q.u;
    let g = Complex64::from_polar(1.0, -phase);
    Ok(CMatrix::from_row_slice(2, 2, &[c(q.u0, u3) * g, c(u2, u1) * g, c(-u2, u1) * g, c(q.u0, -u3) * g]))
}

/// Inverse of the SU(2) exponential on the principal branch: `n` with
/// `exp{-i n.σ} = u0 I + i ũ.σ` and `|n| ∈ [0, π]`.
pub fn recover_n(q: &QuaternionState) -> Result<[f64; 3]> {
    let s = norm3(&q.u);
    if s <= 1e-12 {
        return if q.u0 > 0.0 { Ok([0.0; 3]) } else { Err(QevoError::DirectionUndefined) };
    }
    let angle = s.atan2(q.u0);
    Ok(q.u.map(|x| -angle * x / s))
}

/// `U ψ0` for a normalized qubit state.
pub fn evolve_pure_state(u: &CMatrix, psi0: &[Complex64; 2]) -> Result<[Complex64; 2]> {
    if u.shape() != (2, 2) {
        return Err(QevoError::DimensionMismatch { expected: 2, found: u.nrows() });
    }
    let defect = (psi0[0].norm_sqr() + psi0[1].norm_sqr() - 1.0).abs();
    if defect > 1e-12 {
        return Err(QevoError::NotNormalized(defect));
    }
    Ok([u[(0, 0)] * psi0[0] + u[(0, 1)] * psi0[1], u[(1, 0)] * psi0[0] + u[(1, 1)] * psi0[1]])
}

/// Largest component mismatch in `q(t,s) q(s,t0) = q(t,t0)`.
pub fn cocycle_residual(q_ts: &QuaternionState, q_st0: &QuaternionState, q_tt0: &QuaternionState) -> f64 {
    q_ts.compose(q_st0).max_abs_diff(q_tt0)
}
