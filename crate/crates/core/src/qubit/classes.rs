//! Class detection (commuting / constant-J) and the corresponding closed forms.

use serde::Serialize;

use super::QuaternionState;
use crate::error::{QevoError, Result};
use crate::hamiltonian::{cross_residual, BlochHamiltonian, HamiltonianSpec};
use crate::linalg::norm3;
use crate::quadrature::adaptive_simpson;

/// Default grid for the constant-J certificate.
pub const THEOREM3_SAMPLES: usize = 64;
/// Allowed drift of `J1`, `J2` over the grid.
pub const J_DRIFT_TOLERANCE: f64 = 1e-9;
/// Grid used to unwrap a numerically tracked azimuth.
const UNWRAP_SAMPLES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Commuting,
    Theorem3,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassCertificate {
    pub kind: ClassKind,
    pub j1: Option<f64>,
    pub j2: Option<f64>,
    pub sample_times: Vec<f64>,
    pub omega_samples: Vec<f64>,
    pub max_j_drift: f64,
    /// commuting check: largest `|b(t_i) × ∫b|`
    pub max_residual: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalTrack {
    pub times: Vec<f64>,
    pub bnorm: Vec<f64>,
    pub theta: Vec<f64>,
    /// continuously unwrapped azimuth
    pub phi: Vec<f64>,
    pub phi_dot: Vec<f64>,
}

impl SphericalTrack {
    /// `bnorm (sinθ cosφ, sinθ sinφ, cosθ)` at sample `i`.
    pub fn cartesian(&self, i: usize) -> [f64; 3] {
        let (st, ct) = self.theta[i].sin_cos();
        let (sp, cp) = self.phi[i].sin_cos();
        let r = self.bnorm[i];
        [r * st * cp, r * st * sp, r * ct]
    }
}

fn sample_grid(t0: f64, t1: f64, samples: usize) -> Vec<f64> {
    (0..samples).map(|k| if k + 1 == samples { t1 } else { t0 + (t1 - t0) * k as f64 / (samples - 1) as f64 }).collect()
}

/// `|b × ∫_{t0}^{t} b dτ|` on a grid; commuting iff the residual is below
/// `1e-9 max|b|² (t1 − t0)`.
pub fn commuting_check(h: &HamiltonianSpec, t0: f64, t1: f64, samples: usize) -> Result<ClassCertificate> {
    if samples < 16 {
        return Err(QevoError::Precondition(format!("commuting check needs >= 16 samples, got {samples}")));
    }
    h.validate_on(t0, t1)?;
    let times = sample_grid(t0, t1, samples);
    let mut max_b = 0.0_f64;
    let mut max_res = 0.0_f64;
    for &t in &times {
        let b = h.field(t);
        max_b = max_b.max(norm3(&b));
        max_res = max_res.max(cross_residual(&b, &h.field_integral(t0, t)));
    }
    let tolerance = 1e-9 * max_b * max_b * (t1 - t0).abs();
    let kind = if max_res <= tolerance { ClassKind::Commuting } else { ClassKind::None };
    Ok(ClassCertificate {
        kind,
        j1: None,
        j2: None,
        sample_times: times,
        omega_samples: Vec::new(),
        max_j_drift: 0.0,
        max_residual: Some(max_res),
        tolerance,
    })
}

fn sinc(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}

/// `u0 = cos|n|, ũ = −sin|n| n/|n|` with `n = ∫b dτ`. Exact only for the
/// commuting class; the caller is responsible for checking membership.
pub fn commuting_closed_form(h: &HamiltonianSpec, t0: f64, t1: f64) -> QuaternionState {
    let n = h.field_integral(t0, t1);
    let x = norm3(&n);
    let s = sinc(x);
    QuaternionState { u0: x.cos(), u: n.map(|v| -s * v) }
}

struct AzimuthPoint {
    bnorm: f64,
    theta: f64,
    raw_phi: f64,
    phi_dot: f64,
}

fn azimuth_point(h: &HamiltonianSpec, t: f64) -> Result<AzimuthPoint> {
    let b = h.field(t);
    let r = norm3(&b);
    let perp = b[0].hypot(b[1]);
    if !(perp > 1e-12 * r.max(1.0)) {
        return Err(QevoError::IllDefinedAzimuth { t });
    }
    let phi_dot = match h {
        HamiltonianSpec::RotatingField { omega, .. } => *omega,
        HamiltonianSpec::PhiDriven { phi, .. } => phi.derivative(t),
        _ => {
            let db = h.field_derivative(t);
            (b[0] * db[1] - b[1] * db[0]) / (perp * perp)
        }
    };
    Ok(AzimuthPoint { bnorm: r, theta: perp.atan2(b[2]), raw_phi: b[1].atan2(b[0]), phi_dot })
}

/// Analytic azimuth where the family provides one.
fn analytic_phi(h: &HamiltonianSpec, t: f64) -> Option<f64> {
    match h {
        HamiltonianSpec::RotatingField { omega, eta, .. } => Some(omega * t + eta),
        HamiltonianSpec::PhiDriven { q, phi, .. } => {
            Some(phi.value(t) + if *q < 0.0 { std::f64::consts::PI } else { 0.0 })
        }
        _ => None,
    }
}

fn unwrap_onto(prev: f64, raw: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    raw + tau * ((prev - raw) / tau).round()
}

/// Spherical coordinates `(|b|, θ, φ)` of the field on a grid, with `φ`
/// continued across branch cuts.
pub fn to_spherical(h: &HamiltonianSpec, t0: f64, t1: f64, samples: usize) -> Result<SphericalTrack> {
    if samples < 2 {
        return Err(QevoError::Precondition("spherical track needs >= 2 samples".into()));
    }
    h.validate_on(t0.min(t1), t0.max(t1))?;
    let times = sample_grid(t0, t1, samples);
    let mut track = SphericalTrack {
        times: times.clone(),
        bnorm: Vec::with_capacity(samples),
        theta: Vec::with_capacity(samples),
        phi: Vec::with_capacity(samples),
        phi_dot: Vec::with_capacity(samples),
    };
    for (i, &t) in times.iter().enumerate() {
        let p = azimuth_point(h, t)?;
        let phi = match analytic_phi(h, t) {
            Some(phi) => phi,
            None if i == 0 => p.raw_phi,
            None => unwrap_onto(track.phi[i - 1], p.raw_phi),
        };
        track.bnorm.push(p.bnorm);
        track.theta.push(p.theta);
        track.phi.push(phi);
        track.phi_dot.push(p.phi_dot);
    }
    Ok(track)
}

/// `(J1, J2, Ω_b)` from spherical data at one instant.
fn j_values(bnorm: f64, theta: f64, phi_dot: f64) -> (f64, f64, f64) {
    let (st, ct) = theta.sin_cos();
    let a = ct - phi_dot / (2.0 * bnorm);
    let omega = a.hypot(st);
    (a / omega, st / omega, omega)
}

/// Checks constancy of `J1 = (cosθ − φ'/(2|b|))/Ω_b` and `J2 = sinθ/Ω_b`.
pub fn class_certificate_theorem3(h: &HamiltonianSpec, t0: f64, t1: f64, samples: usize) -> Result<ClassCertificate> {
    let track = to_spherical(h, t0, t1, samples)?;
    let mut omegas = Vec::with_capacity(samples);
    let mut js = Vec::with_capacity(samples);
    for i in 0..track.times.len() {
        let (j1, j2, omega) = j_values(track.bnorm[i], track.theta[i], track.phi_dot[i]);
        if !(omega * track.bnorm[i] > 1e-14) || !j1.is_finite() {
            return Err(QevoError::DegenerateClass { t: track.times[i] });
        }
        omegas.push(omega);
        js.push((j1, j2));
    }
    let (j10, j20) = js[0];
    let drift = js.iter().fold(0.0_f64, |m, (a, b)| m.max((a - j10).abs()).max((b - j20).abs()));
    let kind = if drift <= J_DRIFT_TOLERANCE { ClassKind::Theorem3 } else { ClassKind::None };
    Ok(ClassCertificate {
        kind,
        j1: Some(j10),
        j2: Some(j20),
        sample_times: track.times,
        omega_samples: omegas,
        max_j_drift: drift,
        max_residual: None,
        tolerance: J_DRIFT_TOLERANCE,
    })
}

/// `|b| Ω_b = sqrt((b3 − φ'/2)² + b1² + b2²)` at time `t`.
fn gamma_rate(h: &HamiltonianSpec, t: f64) -> f64 {
    let b = h.field(t);
    let perp2 = b[0] * b[0] + b[1] * b[1];
    let phi_dot = match h {
        HamiltonianSpec::RotatingField { omega, .. } => *omega,
        HamiltonianSpec::PhiDriven { phi, .. } => phi.derivative(t),
        _ if perp2 == 0.0 => 0.0,
        _ => {
            let db = h.field_derivative(t);
            (b[0] * db[1] - b[1] * db[0]) / perp2
        }
    };
    (b[2] - 0.5 * phi_dot).hypot(perp2.sqrt())
}

/// `γ_b(t1, t0) = ∫ |b| Ω_b dτ`.
pub fn gamma_b(h: &HamiltonianSpec, t0: f64, t1: f64) -> f64 {
    if t1 == t0 {
        return 0.0;
    }
    match h {
        HamiltonianSpec::RotatingField { b, theta, omega, .. } => {
            let (st, ct) = theta.sin_cos();
            (b * ct - 0.5 * omega).hypot(b * st) * (t1 - t0)
        }
        HamiltonianSpec::PhiDriven { q, p, lambda, phi, .. } => {
            let zeta = (p - 0.5 * lambda).hypot(*q);
            zeta / lambda * (phi.value(t1) - phi.value(t0))
        }
        HamiltonianSpec::Constant { b, .. } => norm3(b) * (t1 - t0),
        HamiltonianSpec::FixedAxis { bnorm, .. } => {
            let probe = sample_grid(t0, t1, 65);
            if probe.iter().all(|&t| bnorm.value(t) > 0.0) {
                bnorm.integral(t0, t1)
            } else if probe.iter().all(|&t| bnorm.value(t) < 0.0) {
                -bnorm.integral(t0, t1)
            } else {
                adaptive_simpson(|t| bnorm.value(t).abs(), t0, t1, 1e-12)
            }
        }
        HamiltonianSpec::Sampled(_) => adaptive_simpson(|t| gamma_rate(h, t), t0, t1, 1e-12),
    }
}

/// Azimuth at both ends of the interval, on one continuous branch.
fn azimuth_ends(h: &HamiltonianSpec, t0: f64, t1: f64) -> Result<(f64, f64)> {
    match h {
        HamiltonianSpec::RotatingField { .. } | HamiltonianSpec::PhiDriven { .. } => {
            Ok((analytic_phi(h, t0).unwrap(), analytic_phi(h, t1).unwrap()))
        }
        HamiltonianSpec::Constant { .. } | HamiltonianSpec::FixedAxis { .. } => {
            let p = azimuth_point(h, t0)?;
            Ok((p.raw_phi, p.raw_phi))
        }
        HamiltonianSpec::Sampled(_) => {
            let track = to_spherical(h, t0, t1, UNWRAP_SAMPLES)?;
            Ok((track.phi[0], *track.phi.last().unwrap()))
        }
    }
}

fn closed_form_components(j1: f64, j2: f64, half_diff: f64, half_sum: f64, g: f64) -> QuaternionState {
    let (sd, cd) = half_diff.sin_cos();
    let (ss, cs) = half_sum.sin_cos();
    let (sg, cg) = g.sin_cos();
    QuaternionState { u0: cd * cg - j1 * sd * sg, u: [-j2 * cs * sg, -j2 * ss * sg, -j1 * cd * sg - sd * cg] }
}

pub(crate) fn theorem3_components(j1: f64, j2: f64, phi0: f64, phi1: f64, g: f64) -> QuaternionState {
    closed_form_components(j1, j2, 0.5 * (phi1 - phi0), 0.5 * (phi1 + phi0), g)
}

fn certified_j(h: &HamiltonianSpec, t0: f64, t1: f64) -> Result<(f64, f64)> {
    let cert = class_certificate_theorem3(h, t0.min(t1), t0.max(t1), THEOREM3_SAMPLES)?;
    if cert.kind != ClassKind::Theorem3 {
        return Err(QevoError::Precondition(format!(
            "J1, J2 not constant on the interval (drift {:.3e})",
            cert.max_j_drift
        )));
    }
    Ok((cert.j1.unwrap(), cert.j2.unwrap()))
}

/// Closed-form propagator for fields with constant `J1`, `J2`.
pub fn theorem3_closed_form(h: &HamiltonianSpec, t0: f64, t1: f64) -> Result<QuaternionState> {
    if t1 == t0 {
        return Ok(QuaternionState::IDENTITY);
    }
    let (j1, j2) = certified_j(h, t0, t1)?;
    let (phi0, phi1) = azimuth_ends(h, t0, t1)?;
    Ok(theorem3_components(j1, j2, phi0, phi1, gamma_b(h, t0, t1)))
}

/// Analytic time derivative of the closed form at `t`, to be compared with
/// `A(t) q(t, t0)`.
pub fn theorem3_derivative(h: &HamiltonianSpec, t0: f64, t: f64) -> Result<[f64; 4]> {
    let (j1, j2) = certified_j(h, t0, t)?;
    let (phi0, phi1) = azimuth_ends(h, t0, t)?;
    let g = gamma_b(h, t0, t);
    let rate = gamma_rate(h, t);
    let half_rate = 0.5 * azimuth_point(h, t)?.phi_dot;
    let (a, s) = (0.5 * (phi1 - phi0), 0.5 * (phi1 + phi0));
    let (sa, ca) = a.sin_cos();
    let (ss, cs) = s.sin_cos();
    let (sg, cg) = g.sin_cos();
    Ok([
        -half_rate * sa * cg - rate * ca * sg - j1 * (half_rate * ca * sg + rate * sa * cg),
        -j2 * (-half_rate * ss * sg + rate * cs * cg),
        -j2 * (half_rate * cs * sg + rate * ss * cg),
        -j1 * (-half_rate * sa * sg + rate * ca * cg) - (half_rate * ca * cg - rate * sa * sg),
    ])
}
