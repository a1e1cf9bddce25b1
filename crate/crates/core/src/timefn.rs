//! Scalar time functions with analytic derivatives and antiderivatives.

use serde::{Deserialize, Serialize};

/// A scalar coefficient `f(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeFn {
    Constant {
        value: f64,
    },
    /// `a + b t`
    Linear {
        a: f64,
        b: f64,
    },
    /// `Σ_k coeffs[k] t^k`
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// `amplitude sin(omega t + phase) + offset`
    Sinusoid {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
    },
}

impl TimeFn {
    pub fn constant(value: f64) -> Self {
        TimeFn::Constant { value }
    }

    pub fn zero() -> Self {
        TimeFn::Constant { value: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TimeFn::Constant { value } => *value == 0.0,
            TimeFn::Linear { a, b } => *a == 0.0 && *b == 0.0,
            TimeFn::Polynomial { coeffs } => coeffs.iter().all(|c| *c == 0.0),
            TimeFn::Sinusoid { amplitude, offset, .. } => *amplitude == 0.0 && *offset == 0.0,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            TimeFn::Constant { value } => *value,
            TimeFn::Linear { a, b } => a + b * t,
            TimeFn::Polynomial { coeffs } => horner(coeffs, t),
            TimeFn::Sinusoid { amplitude, omega, phase, offset } => amplitude * (omega * t + phase).sin() + offset,
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            TimeFn::Constant { .. } => 0.0,
            TimeFn::Linear { b, .. } => *b,
            TimeFn::Polynomial { coeffs } => horner(&poly_derivative(coeffs), t),
            TimeFn::Sinusoid { amplitude, omega, phase, .. } => amplitude * omega * (omega * t + phase).cos(),
        }
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        match self {
            TimeFn::Constant { .. } | TimeFn::Linear { .. } => 0.0,
            TimeFn::Polynomial { coeffs } => horner(&poly_derivative(&poly_derivative(coeffs)), t),
            TimeFn::Sinusoid { amplitude, omega, phase, .. } => -amplitude * omega * omega * (omega * t + phase).sin(),
        }
    }

    /// `∫_{t0}^{t1} f`.
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        match self {
            TimeFn::Constant { value } => value * (t1 - t0),
            TimeFn::Linear { a, b } => a * (t1 - t0) + 0.5 * b * (t1 * t1 - t0 * t0),
            TimeFn::Polynomial { coeffs } => {
                let anti: Vec<f64> =
                    std::iter::once(0.0).chain(coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64)).collect();
                horner(&anti, t1) - horner(&anti, t0)
            }
            TimeFn::Sinusoid { amplitude, omega, phase, offset } => {
                let drift = offset * (t1 - t0);
                if *omega == 0.0 {
                    drift + amplitude * phase.sin() * (t1 - t0)
                } else {
                    drift - amplitude / omega * ((omega * t1 + phase).cos() - (omega * t0 + phase).cos())
                }
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            TimeFn::Constant { value } => value.is_finite(),
            TimeFn::Linear { a, b } => a.is_finite() && b.is_finite(),
            TimeFn::Polynomial { coeffs } => coeffs.iter().all(|c| c.is_finite()),
            TimeFn::Sinusoid { amplitude, omega, phase, offset } => {
                [amplitude, omega, phase, offset].iter().all(|x| x.is_finite())
            }
        }
    }
}

impl Default for TimeFn {
    fn default() -> Self {
        TimeFn::zero()
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}
