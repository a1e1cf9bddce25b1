//! General-d evolution in Gell-Mann coordinates,
//! `U = e^{-i∫b0}(u0 I + i sqrt(d/2) ũ.Λ)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QevoError, Result};
use crate::gellmann::{GellMannBasis, StructureConstants};
use crate::hamiltonian::BlochHamiltonian;
use crate::linalg::{max_abs_diff, norm, CMatrix, I};
use crate::qubit::check_interval;
use crate::su_exp::{assemble_from_characteristic, exp_sud, grad_k2, grad_k3, grad_kd_fd, k2, k3, kd};
use crate::trajectory::{step_count, RecordOptions, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuditPropagatorCoords {
    pub u0: Complex64,
    pub u: Vec<Complex64>,
    pub phase: f64,
}

impl QuditPropagatorCoords {
    pub fn identity(d: usize) -> Self {
        Self { u0: Complex64::new(1.0, 0.0), u: vec![Complex64::new(0.0, 0.0); d * d - 1], phase: 0.0 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u0.norm_sqr() + self.u.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstIntegralResiduals {
    /// `| |u0|² + |ũ|² − 1 |`
    pub scalar_residual: f64,
    pub vector_residuals: Vec<f64>,
}

impl FirstIntegralResiduals {
    pub fn max_vector(&self) -> f64 {
        self.vector_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Unitarity identities in terms of `u = i ũ`:
/// `|u0|² + |u|² = 1` and
/// `u0 conj(u_j) + conj(u0) u_j + sqrt(d/2) Σ (dsym + i f)_kmj u_k conj(u_m) = 0`.
pub fn first_integral_residuals(
    coords: &QuditPropagatorCoords,
    constants: &StructureConstants,
) -> FirstIntegralResiduals {
    let coupling = constants.product_coupling();
    residuals_with(coords, &coupling, constants.dimension)
}

fn residuals_with(
    coords: &QuditPropagatorCoords,
    coupling: &[(usize, usize, usize, Complex64)],
    d: usize,
) -> FirstIntegralResiduals {
    let s = (d as f64 / 2.0).sqrt();
    let u: Vec<Complex64> = coords.u.iter().map(|z| I * z).collect();
    let u0 = coords.u0;
    let mut v: Vec<Complex64> = u.iter().map(|uj| u0 * uj.conj() + u0.conj() * uj).collect();
    for &(k, m, j, c) in coupling {
        v[j] += s * c * u[k] * u[m].conj();
    }
    FirstIntegralResiduals {
        scalar_residual: (coords.norm_sqr() - 1.0).abs(),
        vector_residuals: v.iter().map(|z| z.norm()).collect(),
    }
}

/// Output of [`integrate_gellmann_ode`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuditRun {
    pub trajectory: Trajectory<QuditPropagatorCoords>,
    /// largest vector first-integral residual seen at any step
    pub max_vector_residual: f64,
}

fn check_dimensions(d: usize, basis: &GellMannBasis, constants: &StructureConstants) -> Result<()> {
    for found in [basis.dimension(), constants.dimension] {
        if found != d {
            return Err(QevoError::DimensionMismatch { expected: d, found });
        }
    }
    Ok(())
}

struct BlochOde<'a> {
    coupling: &'a [(usize, usize, usize, Complex64)],
    scale: f64,
}

impl BlochOde<'_> {
    /// `u0' = b.ũ`, `ũ_j' = −u0 b_j + sqrt(d/2) Σ (f − i dsym)_kmj b_k ũ_m`.
    fn eval(&self, b: &[f64], y: &[Complex64], out: &mut [Complex64]) {
        let (u0, u) = (y[0], &y[1..]);
        out[0] = b.iter().zip(u).map(|(bj, uj)| uj * *bj).sum();
        for (o, bj) in out[1..].iter_mut().zip(b) {
            *o = -u0 * *bj;
        }
        for &(k, m, j, c) in self.coupling {
            if b[k] != 0.0 {
                out[1 + j] += c * (self.scale * b[k]) * u[m];
            }
        }
    }
}

/// RK4 on the complexified Bloch ODE from `u0 = 1, ũ = 0`, with the scalar
/// first integral restored after each step and the vector identities
/// monitored.
pub fn integrate_gellmann_ode<H: BlochHamiltonian + ?Sized>(
    h: &H,
    basis: &GellMannBasis,
    constants: &StructureConstants,
    t0: f64,
    t1: f64,
    step: f64,
    opts: RecordOptions,
) -> Result<QuditRun> {
    let d = h.dimension();
    check_dimensions(d, basis, constants)?;
    check_interval(t0, t1, step)?;
    h.validate_on(t0, t1)?;
    let ode_coupling = constants.ode_coupling();
    let product_coupling = constants.product_coupling();
    let ode = BlochOde { coupling: &ode_coupling, scale: basis.scale() };
    let n = step_count(t0, t1, step);
    let dt = (t1 - t0) / n as f64;
    let dim = d * d;

    let mut y = vec![Complex64::new(0.0, 0.0); dim];
    y[0] = Complex64::new(1.0, 0.0);
    let mut traj = Trajectory::with_capacity(n / opts.stride + 2, n, dt);
    traj.push(t0, QuditPropagatorCoords::identity(d), 0.0, 0.0);

    let (mut bl, mut bm, mut br) = (vec![0.0; dim - 1], vec![0.0; dim - 1], vec![0.0; dim - 1]);
    let mut ks: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); dim]);
    let mut tmp = vec![Complex64::new(0.0, 0.0); dim];
    h.b_into(t0, &mut bl);
    let mut worst = 0.0_f64;
    let mut max_vec = 0.0_f64;
    for k in 1..=n {
        let t = t0 + (k - 1) as f64 * dt;
        let tk = if k == n { t1 } else { t0 + k as f64 * dt };
        h.b_into(t + 0.5 * dt, &mut bm);
        h.b_into(tk, &mut br);

        ode.eval(&bl, &y, &mut ks[0]);
        for (i, z) in tmp.iter_mut().enumerate() {
            *z = y[i] + ks[0][i] * (0.5 * dt);
        }
        ode.eval(&bm, &tmp, &mut ks[1]);
        for (i, z) in tmp.iter_mut().enumerate() {
            *z = y[i] + ks[1][i] * (0.5 * dt);
        }
        ode.eval(&bm, &tmp, &mut ks[2]);
        for (i, z) in tmp.iter_mut().enumerate() {
            *z = y[i] + ks[2][i] * dt;
        }
        ode.eval(&br, &tmp, &mut ks[3]);
        for (i, z) in y.iter_mut().enumerate() {
            *z += (ks[0][i] + ks[1][i] * 2.0 + ks[2][i] * 2.0 + ks[3][i]) * (dt / 6.0);
        }

        let nsq: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        if !nsq.is_finite() {
            return Err(QevoError::Numerical(format!("Gell-Mann ODE diverged at t = {t}")));
        }
        worst = worst.max((nsq - 1.0).abs());
        if opts.renormalize {
            let s = nsq.sqrt();
            y.iter_mut().for_each(|z| *z /= s);
        }
        std::mem::swap(&mut bl, &mut br);

        let coords = QuditPropagatorCoords { u0: y[0], u: y[1..].to_vec(), phase: 0.0 };
        let res = residuals_with(&coords, &product_coupling, d);
        max_vec = max_vec.max(res.max_vector());
        if opts.records(k, n) {
            let phase = h.phase_integral(t0, tk);
            traj.push(tk, QuditPropagatorCoords { phase, ..coords }, worst, phase);
            worst = 0.0;
        }
    }
    Ok(QuditRun { trajectory: traj, max_vector_residual: max_vec })
}

/// `e^{-i phase}(u0 I + i sqrt(d/2) ũ.Λ)`.
pub fn assemble_qudit_propagator(coords: &QuditPropagatorCoords, basis: &GellMannBasis) -> Result<CMatrix> {
    let defect = (coords.norm_sqr() - 1.0).abs();
    if defect > 1e-8 {
        return Err(QevoError::NotNormalized(defect));
    }
    let s = basis.scale();
    let scaled: Vec<Complex64> = coords.u.iter().map(|z| I * s * z).collect();
    let mut m = basis.contract_complex(&scaled)?;
    for i in 0..basis.dimension() {
        m[(i, i)] += coords.u0;
    }
    Ok(m * Complex64::from_polar(1.0, -coords.phase))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutingResult {
    pub commuting: bool,
    pub max_residual: f64,
    pub tolerance: f64,
}

/// Evaluates `Σ_km f_kmj b_k(t_i) (∫_{t0}^{t_i} b_m dτ)` on a grid.
pub fn commuting_check_general<H: BlochHamiltonian + ?Sized>(
    h: &H,
    constants: &StructureConstants,
    t0: f64,
    t1: f64,
    samples: usize,
) -> Result<CommutingResult> {
    if samples < 16 {
        return Err(QevoError::Precondition(format!("commuting check needs >= 16 samples, got {samples}")));
    }
    if constants.dimension != h.dimension() {
        return Err(QevoError::DimensionMismatch { expected: h.dimension(), found: constants.dimension });
    }
    h.validate_on(t0, t1)?;
    let n = constants.generator_count();
    let mut max_b = 0.0_f64;
    let mut max_res = 0.0_f64;
    for i in 0..samples {
        let t = if i + 1 == samples { t1 } else { t0 + (t1 - t0) * i as f64 / (samples - 1) as f64 };
        let b = h.b(t);
        let integral = h.b_integral(t0, t);
        let mut r = vec![0.0; n];
        for ((k, m, j), f) in constants.f.iter() {
            r[j] += f * b[k] * integral[m];
        }
        max_b = max_b.max(norm(&b));
        max_res = max_res.max(norm(&r));
    }
    let tolerance = 1e-9 * max_b * max_b * (t1 - t0).abs();
    Ok(CommutingResult { commuting: max_res <= tolerance, max_residual: max_res, tolerance })
}

/// `e^{-i∫b0} exp{-i sqrt(d/2) (∫b).Λ}`; exact only for the commuting class.
pub fn commuting_closed_form_general<H: BlochHamiltonian + ?Sized>(
    h: &H,
    basis: &GellMannBasis,
    t0: f64,
    t1: f64,
) -> Result<CMatrix> {
    if basis.dimension() != h.dimension() {
        return Err(QevoError::DimensionMismatch { expected: h.dimension(), found: basis.dimension() });
    }
    let u = exp_sud(&h.b_integral(t0, t1), basis)?;
    Ok(u * Complex64::from_polar(1.0, -h.phase_integral(t0, t1)))
}

/// `|exp_sud(n) − (K/d I + i sqrt(d/2) (∇K/d).Λ)|_max`, with `K` and `∇K`
/// from the closed forms for d = 2, 3 and from the spectral route with
/// finite-difference gradient otherwise.
pub fn forward_map_check(n: &[f64], basis: &GellMannBasis) -> Result<f64> {
    let d = basis.dimension();
    if n.len() != basis.len() {
        return Err(QevoError::DimensionMismatch { expected: basis.len(), found: n.len() });
    }
    let (k, grad): (Complex64, Vec<Complex64>) = match d {
        2 => {
            let r = [n[0], n[1], n[2]];
            (Complex64::new(k2(&r), 0.0), grad_k2(&r).iter().map(|&g| Complex64::new(g, 0.0)).collect())
        }
        3 => {
            let r: [f64; 8] = n.try_into().unwrap();
            (k3(&r), grad_k3(&r)?.to_vec())
        }
        _ => (kd(n, basis)?, grad_kd_fd(n, basis, 1e-5)?),
    };
    let forward = assemble_from_characteristic(k, &grad, basis)?;
    Ok(max_abs_diff(&exp_sud(n, basis)?, &forward))
}
