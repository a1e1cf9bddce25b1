//! Time-dependent Hamiltonians in Bloch coordinates,
//! `H(t) = b0(t) I + sqrt(d/2) b(t).Λ`.

use serde::{Deserialize, Serialize};

use crate::error::{QevoError, Result};
use crate::linalg::{cross3, norm3};
use crate::spline::CubicSpline;
use crate::timefn::TimeFn;

/// Grid used to check pointwise preconditions on an interval.
const VALIDATION_POINTS: usize = 257;

/// Anything that yields Bloch coefficients `(b0(t), b(t))`.
pub trait BlochHamiltonian: Sync {
    fn dimension(&self) -> usize;

    fn b0(&self, t: f64) -> f64;

    /// Writes `b(t)` (length `d² − 1`) into `out`.
    fn b_into(&self, t: f64, out: &mut [f64]);

    fn b(&self, t: f64) -> Vec<f64> {
        let d = self.dimension();
        let mut out = vec![0.0; d * d - 1];
        self.b_into(t, &mut out);
        out
    }

    /// `∫_{t0}^{t1} b0 dτ`.
    fn phase_integral(&self, t0: f64, t1: f64) -> f64;

    /// `∫_{t0}^{t1} b dτ`.
    fn b_integral(&self, t0: f64, t1: f64) -> Vec<f64>;

    /// Checks that the coefficients are evaluable (and family-specific
    /// conditions hold) on `[t0, t1]`.
    fn validate_on(&self, t0: f64, t1: f64) -> Result<()>;
}

fn grid(t0: f64, t1: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| if k + 1 == n { t1 } else { t0 + (t1 - t0) * k as f64 / (n - 1) as f64 })
}

fn check_finite<H: BlochHamiltonian + ?Sized>(h: &H, t0: f64, t1: f64) -> Result<()> {
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(QevoError::InvalidSpec("non-finite interval".into()));
    }
    let mut buf = vec![0.0; h.dimension() * h.dimension() - 1];
    for t in grid(t0, t1, VALIDATION_POINTS) {
        h.b_into(t, &mut buf);
        if !h.b0(t).is_finite() || buf.iter().any(|x| !x.is_finite()) {
            return Err(QevoError::InvalidSpec(format!("coefficients not finite at t = {t}")));
        }
    }
    Ok(())
}

/// Raw sample table as it appears in scenario documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleTableDoc {
    pub times: Vec<f64>,
    pub b0: Vec<f64>,
    /// one row of `d² − 1` coefficients per sample time
    pub b: Vec<Vec<f64>>,
}

/// Cubic-spline interpolated `(b0, b)` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampleTableDoc", into = "SampleTableDoc")]
pub struct SampledTable {
    doc: SampleTableDoc,
    b0: CubicSpline,
    b: Vec<CubicSpline>,
}

impl TryFrom<SampleTableDoc> for SampledTable {
    type Error = QevoError;

    fn try_from(doc: SampleTableDoc) -> Result<Self> {
        let b0 = CubicSpline::new(&doc.times, &doc.b0)?;
        let width = doc.b.first().map(Vec::len).unwrap_or(0);
        if width == 0 || doc.b.iter().any(|row| row.len() != width) {
            return Err(QevoError::InvalidSpec("ragged or empty coefficient table".into()));
        }
        let b = (0..width)
            .map(|j| {
                let column: Vec<f64> = doc.b.iter().map(|row| row[j]).collect();
                CubicSpline::new(&doc.times, &column)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { doc, b0, b })
    }
}

impl From<SampledTable> for SampleTableDoc {
    fn from(t: SampledTable) -> Self {
        t.doc
    }
}

impl SampledTable {
    pub fn new(times: Vec<f64>, b0: Vec<f64>, b: Vec<Vec<f64>>) -> Result<Self> {
        SampleTableDoc { times, b0, b }.try_into()
    }

    pub fn width(&self) -> usize {
        self.b.len()
    }

    fn covers(&self, t0: f64, t1: f64) -> Result<()> {
        let (lo, hi) = self.b0.domain();
        let (a, b) = (t0.min(t1), t0.max(t1));
        if a < lo || b > hi {
            return Err(QevoError::InvalidSpec(format!("interval [{a}, {b}] outside sampled range [{lo}, {hi}]")));
        }
        Ok(())
    }

    fn b0(&self, t: f64) -> f64 {
        self.b0.value(t)
    }

    fn b_into(&self, t: f64, out: &mut [f64]) {
        for (o, s) in out.iter_mut().zip(&self.b) {
            *o = s.value(t);
        }
    }

    fn b_dot_into(&self, t: f64, out: &mut [f64]) {
        for (o, s) in out.iter_mut().zip(&self.b) {
            *o = s.derivative(t);
        }
    }

    fn phase_integral(&self, t0: f64, t1: f64) -> f64 {
        self.b0.integral(t0, t1)
    }

    fn b_integral(&self, t0: f64, t1: f64) -> Vec<f64> {
        self.b.iter().map(|s| s.integral(t0, t1)).collect()
    }
}

/// Qubit Hamiltonian families, `H(t) = b0(t) I + b(t).σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSpec {
    Constant {
        #[serde(default)]
        b0: f64,
        b: [f64; 3],
    },
    /// `b(t) = e_b |b|(t)` with a fixed unit axis.
    FixedAxis {
        e_b: [f64; 3],
        bnorm: TimeFn,
        #[serde(default)]
        b0: TimeFn,
    },
    /// Field of constant norm `b` at polar angle `theta` rotating about x3:
    /// azimuth `omega t + eta`.
    RotatingField {
        b: f64,
        theta: f64,
        omega: f64,
        #[serde(default)]
        eta: f64,
        #[serde(default)]
        b0: TimeFn,
    },
    /// `b(t) = (φ'(t)/λ) (q cos φ, q sin φ, p)`.
    PhiDriven {
        q: f64,
        p: f64,
        lambda: f64,
        phi: TimeFn,
        #[serde(default)]
        b0: TimeFn,
    },
    Sampled(SampledTable),
}

impl HamiltonianSpec {
    pub fn zero() -> Self {
        HamiltonianSpec::Constant { b0: 0.0, b: [0.0; 3] }
    }

    pub fn rotating_field(b: f64, theta: f64, omega: f64, eta: f64) -> Self {
        HamiltonianSpec::RotatingField { b, theta, omega, eta, b0: TimeFn::zero() }
    }

    pub fn phi_driven(q: f64, p: f64, lambda: f64, phi: TimeFn) -> Self {
        HamiltonianSpec::PhiDriven { q, p, lambda, phi, b0: TimeFn::zero() }
    }

    pub fn fixed_axis(e_b: [f64; 3], bnorm: TimeFn) -> Self {
        HamiltonianSpec::FixedAxis { e_b, bnorm, b0: TimeFn::zero() }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            HamiltonianSpec::Constant { .. } => "constant",
            HamiltonianSpec::FixedAxis { .. } => "fixed_axis",
            HamiltonianSpec::RotatingField { .. } => "rotating_field",
            HamiltonianSpec::PhiDriven { .. } => "phi_driven",
            HamiltonianSpec::Sampled(_) => "sampled",
        }
    }

    /// Parameter checks that do not depend on an interval.
    pub fn validate(&self) -> Result<()> {
        match self {
            HamiltonianSpec::Constant { b0, b } => {
                if !b0.is_finite() || b.iter().any(|x| !x.is_finite()) {
                    return Err(QevoError::InvalidSpec("non-finite constant field".into()));
                }
            }
            HamiltonianSpec::FixedAxis { e_b, bnorm, b0 } => {
                if (norm3(e_b) - 1.0).abs() > 1e-9 {
                    return Err(QevoError::InvalidSpec(format!(
                        "fixed axis must be a unit vector, |e_b| = {}",
                        norm3(e_b)
                    )));
                }
                if !bnorm.is_finite() || !b0.is_finite() {
                    return Err(QevoError::InvalidSpec("non-finite coefficients".into()));
                }
            }
            HamiltonianSpec::RotatingField { b, theta, omega, eta, b0 } => {
                if !(*b > 0.0) || !b.is_finite() {
                    return Err(QevoError::InvalidSpec(format!("rotating field needs b > 0, got {b}")));
                }
                if !(0.0..=std::f64::consts::PI).contains(theta) {
                    return Err(QevoError::InvalidSpec(format!("theta = {theta} outside [0, pi]")));
                }
                if !omega.is_finite() || !eta.is_finite() || !b0.is_finite() {
                    return Err(QevoError::InvalidSpec("non-finite rotating-field parameters".into()));
                }
            }
            HamiltonianSpec::PhiDriven { q, p, lambda, phi, b0 } => {
                if *lambda == 0.0 || !lambda.is_finite() {
                    return Err(QevoError::InvalidSpec("phi-driven family needs lambda != 0".into()));
                }
                if !q.is_finite() || !p.is_finite() || !phi.is_finite() || !b0.is_finite() {
                    return Err(QevoError::InvalidSpec("non-finite phi-driven parameters".into()));
                }
            }
            HamiltonianSpec::Sampled(table) => {
                if table.width() != 3 {
                    return Err(QevoError::InvalidSpec(format!(
                        "qubit sample table needs 3 coefficients per row, got {}",
                        table.width()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self, t: f64) -> [f64; 3] {
        match self {
            HamiltonianSpec::Constant { b, .. } => *b,
            HamiltonianSpec::FixedAxis { e_b, bnorm, .. } => {
                let n = bnorm.value(t);
                [e_b[0] * n, e_b[1] * n, e_b[2] * n]
            }
            HamiltonianSpec::RotatingField { b, theta, omega, eta, .. } => {
                let (st, ct) = theta.sin_cos();
                let (sp, cp) = (omega * t + eta).sin_cos();
                [b * st * cp, b * st * sp, b * ct]
            }
            HamiltonianSpec::PhiDriven { q, p, lambda, phi, .. } => {
                let s = phi.derivative(t) / lambda;
                let (sp, cp) = phi.value(t).sin_cos();
                [s * q * cp, s * q * sp, s * p]
            }
            HamiltonianSpec::Sampled(table) => {
                let mut out = [0.0; 3];
                table.b_into(t, &mut out);
                out
            }
        }
    }

    /// `db/dt`, analytic for every family except `Sampled` (spline derivative).
    pub fn field_derivative(&self, t: f64) -> [f64; 3] {
        match self {
            HamiltonianSpec::Constant { .. } => [0.0; 3],
            HamiltonianSpec::FixedAxis { e_b, bnorm, .. } => {
                let n = bnorm.derivative(t);
                [e_b[0] * n, e_b[1] * n, e_b[2] * n]
            }
            HamiltonianSpec::RotatingField { b, theta, omega, eta, .. } => {
                let st = theta.sin();
                let (sp, cp) = (omega * t + eta).sin_cos();
                [-b * st * omega * sp, b * st * omega * cp, 0.0]
            }
            HamiltonianSpec::PhiDriven { q, p, lambda, phi, .. } => {
                let dphi = phi.derivative(t);
                let s = dphi / lambda;
                let ds = phi.second_derivative(t) / lambda;
                let (sp, cp) = phi.value(t).sin_cos();
                [ds * q * cp - s * q * dphi * sp, ds * q * sp + s * q * dphi * cp, ds * p]
            }
            HamiltonianSpec::Sampled(table) => {
                let mut out = [0.0; 3];
                table.b_dot_into(t, &mut out);
                out
            }
        }
    }

    fn b0_fn(&self) -> Option<&TimeFn> {
        match self {
            HamiltonianSpec::FixedAxis { b0, .. }
            | HamiltonianSpec::RotatingField { b0, .. }
            | HamiltonianSpec::PhiDriven { b0, .. } => Some(b0),
            _ => None,
        }
    }

    pub fn field_integral(&self, t0: f64, t1: f64) -> [f64; 3] {
        match self {
            HamiltonianSpec::Constant { b, .. } => b.map(|x| x * (t1 - t0)),
            HamiltonianSpec::FixedAxis { e_b, bnorm, .. } => {
                let g = bnorm.integral(t0, t1);
                e_b.map(|x| x * g)
            }
            HamiltonianSpec::RotatingField { b, theta, omega, eta, .. } => {
                let (st, ct) = theta.sin_cos();
                if *omega == 0.0 {
                    let (sp, cp) = eta.sin_cos();
                    return [b * st * cp, b * st * sp, b * ct].map(|x| x * (t1 - t0));
                }
                let (s1, c1) = (omega * t1 + eta).sin_cos();
                let (s0, c0) = (omega * t0 + eta).sin_cos();
                [b * st / omega * (s1 - s0), -b * st / omega * (c1 - c0), b * ct * (t1 - t0)]
            }
            HamiltonianSpec::PhiDriven { q, p, lambda, phi, .. } => {
                let (p1, p0) = (phi.value(t1), phi.value(t0));
                [q / lambda * (p1.sin() - p0.sin()), -q / lambda * (p1.cos() - p0.cos()), p / lambda * (p1 - p0)]
            }
            HamiltonianSpec::Sampled(table) => {
                let v = table.b_integral(t0, t1);
                [v[0], v[1], v[2]]
            }
        }
    }
}

impl BlochHamiltonian for HamiltonianSpec {
    fn dimension(&self) -> usize {
        2
    }

    fn b0(&self, t: f64) -> f64 {
        match self {
            HamiltonianSpec::Constant { b0, .. } => *b0,
            HamiltonianSpec::Sampled(table) => table.b0(t),
            _ => self.b0_fn().map(|f| f.value(t)).unwrap_or(0.0),
        }
    }

    fn b_into(&self, t: f64, out: &mut [f64]) {
        out.copy_from_slice(&self.field(t));
    }

    fn phase_integral(&self, t0: f64, t1: f64) -> f64 {
        match self {
            HamiltonianSpec::Constant { b0, .. } => b0 * (t1 - t0),
            HamiltonianSpec::Sampled(table) => table.phase_integral(t0, t1),
            _ => self.b0_fn().map(|f| f.integral(t0, t1)).unwrap_or(0.0),
        }
    }

    fn b_integral(&self, t0: f64, t1: f64) -> Vec<f64> {
        self.field_integral(t0, t1).to_vec()
    }

    fn validate_on(&self, t0: f64, t1: f64) -> Result<()> {
        self.validate()?;
        if let HamiltonianSpec::Sampled(table) = self {
            table.covers(t0, t1)?;
        }
        check_finite(self, t0, t1)?;
        if let HamiltonianSpec::PhiDriven { lambda, phi, .. } = self {
            for t in grid(t0, t1, VALIDATION_POINTS) {
                if !(phi.derivative(t) / lambda > 0.0) {
                    return Err(QevoError::Precondition(format!(
                        "phi-driven family needs phi'(t)/lambda > 0, violated at t = {t}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Coefficients of a general qudit Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuditCoefficients {
    Coefficients {
        #[serde(default)]
        b0: TimeFn,
        b: Vec<TimeFn>,
    },
    Sampled(SampledTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuditHamiltonianSpec {
    dimension: usize,
    coefficients: QuditCoefficients,
}

impl QuditHamiltonianSpec {
    pub fn new(dimension: usize, coefficients: QuditCoefficients) -> Result<Self> {
        if dimension < 2 {
            return Err(QevoError::InvalidDimension(dimension));
        }
        let n = dimension * dimension - 1;
        let found = match &coefficients {
            QuditCoefficients::Coefficients { b, .. } => b.len(),
            QuditCoefficients::Sampled(table) => table.width(),
        };
        if found != n {
            return Err(QevoError::DimensionMismatch { expected: n, found });
        }
        Ok(Self { dimension, coefficients })
    }

    pub fn from_functions(dimension: usize, b0: TimeFn, b: Vec<TimeFn>) -> Result<Self> {
        Self::new(dimension, QuditCoefficients::Coefficients { b0, b })
    }

    /// Constant coefficients.
    pub fn constant(dimension: usize, b0: f64, b: &[f64]) -> Result<Self> {
        Self::from_functions(dimension, TimeFn::constant(b0), b.iter().map(|&x| TimeFn::constant(x)).collect())
    }

    pub fn zero(dimension: usize) -> Result<Self> {
        Self::constant(dimension, 0.0, &vec![0.0; dimension.saturating_mul(dimension).saturating_sub(1)])
    }

    pub fn coefficients(&self) -> &QuditCoefficients {
        &self.coefficients
    }
}

impl BlochHamiltonian for QuditHamiltonianSpec {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn b0(&self, t: f64) -> f64 {
        match &self.coefficients {
            QuditCoefficients::Coefficients { b0, .. } => b0.value(t),
            QuditCoefficients::Sampled(table) => table.b0(t),
        }
    }

    fn b_into(&self, t: f64, out: &mut [f64]) {
        match &self.coefficients {
            QuditCoefficients::Coefficients { b, .. } => {
                for (o, f) in out.iter_mut().zip(b) {
                    *o = f.value(t);
                }
            }
            QuditCoefficients::Sampled(table) => table.b_into(t, out),
        }
    }

    fn phase_integral(&self, t0: f64, t1: f64) -> f64 {
        match &self.coefficients {
            QuditCoefficients::Coefficients { b0, .. } => b0.integral(t0, t1),
            QuditCoefficients::Sampled(table) => table.phase_integral(t0, t1),
        }
    }

    fn b_integral(&self, t0: f64, t1: f64) -> Vec<f64> {
        match &self.coefficients {
            QuditCoefficients::Coefficients { b, .. } => b.iter().map(|f| f.integral(t0, t1)).collect(),
            QuditCoefficients::Sampled(table) => table.b_integral(t0, t1),
        }
    }

    fn validate_on(&self, t0: f64, t1: f64) -> Result<()> {
        if let QuditCoefficients::Sampled(table) = &self.coefficients {
            table.covers(t0, t1)?;
        }
        check_finite(self, t0, t1)
    }
}

/// Qubit Hamiltonian viewed through the general-d interface.
impl From<&HamiltonianSpec> for QuditHamiltonianSpec {
    fn from(h: &HamiltonianSpec) -> Self {
        // only used for families expressible with TimeFn coefficients
        match h {
            HamiltonianSpec::Constant { b0, b } => QuditHamiltonianSpec::constant(2, *b0, b).unwrap(),
            HamiltonianSpec::Sampled(table) => {
                QuditHamiltonianSpec::new(2, QuditCoefficients::Sampled(table.clone())).unwrap()
            }
            HamiltonianSpec::RotatingField { b, theta, omega, eta, b0 } => {
                let (st, ct) = theta.sin_cos();
                QuditHamiltonianSpec::from_functions(
                    2,
                    b0.clone(),
                    vec![
                        TimeFn::Sinusoid {
                            amplitude: b * st,
                            omega: *omega,
                            phase: eta + std::f64::consts::FRAC_PI_2,
                            offset: 0.0,
                        },
                        TimeFn::Sinusoid { amplitude: b * st, omega: *omega, phase: *eta, offset: 0.0 },
                        TimeFn::constant(b * ct),
                    ],
                )
                .unwrap()
            }
            HamiltonianSpec::FixedAxis { e_b, bnorm, b0 } => {
                let scaled = |s: f64| scale_timefn(bnorm, s);
                QuditHamiltonianSpec::from_functions(
                    2,
                    b0.clone(),
                    vec![scaled(e_b[0]), scaled(e_b[1]), scaled(e_b[2])],
                )
                .unwrap()
            }
            HamiltonianSpec::PhiDriven { .. } => {
                panic!("phi-driven fields have no TimeFn coefficient form; use the qubit path")
            }
        }
    }
}

fn scale_timefn(f: &TimeFn, s: f64) -> TimeFn {
    match f {
        TimeFn::Constant { value } => TimeFn::Constant { value: value * s },
        TimeFn::Linear { a, b } => TimeFn::Linear { a: a * s, b: b * s },
        TimeFn::Polynomial { coeffs } => TimeFn::Polynomial { coeffs: coeffs.iter().map(|c| c * s).collect() },
        TimeFn::Sinusoid { amplitude, omega, phase, offset } => {
            TimeFn::Sinusoid { amplitude: amplitude * s, omega: *omega, phase: *phase, offset: offset * s }
        }
    }
}

/// `|b × ∫b|`, the qubit commuting-condition residual at one point.
pub fn cross_residual(b: &[f64; 3], integral: &[f64; 3]) -> f64 {
    norm3(&cross3(b, integral))
}
