//! Closed forms specialised to the rotating-field and φ-driven families.

use num_complex::Complex64;
use serde::Serialize;

use super::classes::theorem3_components;
use super::QuaternionState;
use crate::error::{QevoError, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::linalg::c;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotatingFieldParams {
    pub j1: f64,
    pub j2: f64,
    pub omega_b: f64,
    /// `sqrt((2b cosθ − ω)² + 4b² sin²θ)`
    pub omega_tilde: f64,
}

impl RotatingFieldParams {
    pub fn new(b: f64, theta: f64, omega: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let a = ct - omega / (2.0 * b);
        let omega_b = a.hypot(st);
        Self { j1: a / omega_b, j2: st / omega_b, omega_b, omega_tilde: (2.0 * b * ct - omega).hypot(2.0 * b * st) }
    }

    pub fn of(h: &HamiltonianSpec) -> Result<(Self, f64, f64, f64)> {
        match h {
            HamiltonianSpec::RotatingField { b, theta, omega, eta, .. } => {
                Ok((Self::new(*b, *theta, *omega), *b, *omega, *eta))
            }
            _ => Err(QevoError::InvalidSpec(format!("expected a rotating_field Hamiltonian, got {}", h.family_name()))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiDrivenParams {
    pub zeta: f64,
    pub j1: f64,
    pub j2: f64,
}

impl PhiDrivenParams {
    pub fn new(q: f64, p: f64, lambda: f64) -> Self {
        let zeta = ((p - lambda / 2.0).powi(2) + q * q).sqrt();
        Self { zeta, j1: (p - lambda / 2.0) / zeta, j2: q / zeta }
    }
}

/// Rotation-angle convention for the rotating-field closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GammaConvention {
    /// `γ = ∫|b|Ω_b dτ = bΩ_b (t − t0)`
    Theorem3,
    /// `γ = Ω̃_b (t − t0)` with `Ω̃_b = 2bΩ_b`
    DoubledRate,
}

/// Placement of `η` in the `|1⟩` amplitude of the pure state from `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EtaReading {
    /// `exp{i(ωt/2 + η)}`
    PhaseInside,
    /// `exp{iωt/2 + η}`
    EtaOutside,
}

fn rotating_gamma(p: &RotatingFieldParams, b: f64, dt: f64, convention: GammaConvention) -> f64 {
    match convention {
        GammaConvention::Theorem3 => b * p.omega_b * dt,
        GammaConvention::DoubledRate => p.omega_tilde * dt,
    }
}

pub fn rotating_field_closed_form(
    h: &HamiltonianSpec,
    t0: f64,
    t: f64,
    convention: GammaConvention,
) -> Result<QuaternionState> {
    let (p, b, omega, eta) = RotatingFieldParams::of(h)?;
    let g = rotating_gamma(&p, b, t - t0, convention);
    Ok(theorem3_components(p.j1, p.j2, omega * t0 + eta, omega * t + eta, g))
}

/// Amplitudes of `U(t, 0)|0⟩` for the rotating field.
pub fn rotating_field_pure_state(
    h: &HamiltonianSpec,
    t: f64,
    convention: GammaConvention,
    reading: EtaReading,
) -> Result<[Complex64; 2]> {
    let (p, b, omega, eta) = RotatingFieldParams::of(h)?;
    let (sg, cg) = rotating_gamma(&p, b, t, convention).sin_cos();
    let upper = c(cg, -p.j1 * sg) * Complex64::from_polar(1.0, -0.5 * omega * t);
    let carrier = match reading {
        EtaReading::PhaseInside => Complex64::from_polar(1.0, 0.5 * omega * t + eta),
        EtaReading::EtaOutside => Complex64::from_polar(eta.exp(), 0.5 * omega * t),
    };
    let lower = c(0.0, -p.j2 * sg) * carrier;
    Ok([upper, lower])
}

/// Closed form for `b = (φ'/λ)(q cosφ, q sinφ, p)`.
pub fn phi_driven_closed_form(h: &HamiltonianSpec, t0: f64, t: f64) -> Result<QuaternionState> {
    match h {
        HamiltonianSpec::PhiDriven { q, p, lambda, phi, .. } => {
            let params = PhiDrivenParams::new(*q, *p, *lambda);
            let (phi0, phi1) = (phi.value(t0), phi.value(t));
            let g = params.zeta / lambda * (phi1 - phi0);
            Ok(theorem3_components(params.j1, params.j2, phi0, phi1, g))
        }
        _ => Err(QevoError::InvalidSpec(format!("expected a phi_driven Hamiltonian, got {}", h.family_name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{assemble_propagator, evolve_pure_state, theorem3_closed_form};
    use crate::timefn::TimeFn;

    #[test]
    fn params_are_normalized() {
        let p = RotatingFieldParams::new(1.0, 0.7, 2.0);
        assert!((p.j1.hypot(p.j2) - 1.0).abs() < 1e-12);
        assert!((p.omega_tilde - 2.0 * p.omega_b).abs() < 1e-14);
        let p = PhiDrivenParams::new(1.0, 0.5, 1.0);
        assert!((p.j1.hypot(p.j2) - 1.0).abs() < 1e-12);
        assert_eq!(p.zeta, 1.0);
    }

    #[test]
    fn family_forms_agree_with_generic_closed_form() {
        let h = HamiltonianSpec::rotating_field(1.2, 0.8, 1.7, 0.3);
        for &(t0, t) in &[(0.0, 1.0), (0.4, 6.3)] {
            let a = rotating_field_closed_form(&h, t0, t, GammaConvention::Theorem3).unwrap();
            let b = theorem3_closed_form(&h, t0, t).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-13);
        }
        let h = HamiltonianSpec::phi_driven(-0.7, 0.5, 1.3, TimeFn::Polynomial { coeffs: vec![0.2, 1.0, 0.1] });
        for &(t0, t) in &[(0.0, 1.0), (0.4, 4.3)] {
            let a = phi_driven_closed_form(&h, t0, t).unwrap();
            let b = theorem3_closed_form(&h, t0, t).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-13);
        }
    }

    #[test]
    fn phi_driven_with_uniform_rate_is_a_rotating_field() {
        let (q, p, w) = (0.8, 0.6, 1.7);
        let phi = HamiltonianSpec::phi_driven(q, p, w, TimeFn::Linear { a: 0.0, b: w });
        let rot = HamiltonianSpec::rotating_field(q.hypot(p), q.atan2(p), w, 0.0);
        for &(t0, t) in &[(0.0, 0.5), (1.0, 7.0)] {
            let a = phi_driven_closed_form(&phi, t0, t).unwrap();
            let b = rotating_field_closed_form(&rot, t0, t, GammaConvention::Theorem3).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn pure_state_matches_propagator_column() {
        let h = HamiltonianSpec::rotating_field(1.0, 0.9, 2.0, 0.3);
        let t = 2.7;
        let q = rotating_field_closed_form(&h, 0.0, t, GammaConvention::Theorem3).unwrap();
        let u = assemble_propagator(&q, 0.0).unwrap();
        let psi = evolve_pure_state(&u, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let amp = rotating_field_pure_state(&h, t, GammaConvention::Theorem3, EtaReading::PhaseInside).unwrap();
        assert!((psi[0] - amp[0]).norm() < 1e-15 && (psi[1] - amp[1]).norm() < 1e-15);
    }

    #[test]
    fn wrong_family_is_rejected() {
        let h = HamiltonianSpec::zero();
        assert!(rotating_field_closed_form(&h, 0.0, 1.0, GammaConvention::Theorem3).is_err());
        assert!(phi_driven_closed_form(&h, 0.0, 1.0).is_err());
    }
}
