//! Reference propagator: ordered product of midpoint-sampled short-time
//! exponentials, `U = Π_{k=N..1} exp(−i H(t_k^mid) Δt)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QevoError, Result};
use crate::gellmann::GellMannBasis;
use crate::hamiltonian::BlochHamiltonian;
use crate::linalg::{expm_hermitian, identity, max_abs_diff, trace, CMatrix};

/// Steps per independently multiplied block. Fixed so that the rounding
/// pattern (and hence the output) does not depend on the thread count.
const CHUNK: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub u: CMatrix,
    pub steps: usize,
    pub richardson_error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitaryDistance {
    pub max_abs: f64,
    /// `min_φ |U − e^{iφ} V|_max` with `φ = arg tr(V†U)`
    pub phase_invariant: f64,
}

fn check_basis<H: BlochHamiltonian + ?Sized>(h: &H, basis: &GellMannBasis) -> Result<()> {
    if basis.dimension() != h.dimension() {
        return Err(QevoError::DimensionMismatch { expected: h.dimension(), found: basis.dimension() });
    }
    Ok(())
}

/// Ordered product over steps `first..last` of a uniform `steps`-step grid.
fn block_product<H: BlochHamiltonian + ?Sized>(
    h: &H,
    basis: &GellMannBasis,
    t0: f64,
    dt: f64,
    first: usize,
    last: usize,
) -> Result<CMatrix> {
    let d = basis.dimension();
    let mut b = vec![0.0; basis.len()];
    let mut u = identity(d);
    for k in first..last {
        let t = t0 + (k as f64 + 0.5) * dt;
        h.b_into(t, &mut b);
        let factor = expm_hermitian(&basis.hamiltonian(h.b0(t), &b)?, dt);
        u = factor * u;
    }
    Ok(u)
}

/// The `steps`-factor product without an error estimate.
pub fn stepwise_product<H: BlochHamiltonian + ?Sized>(
    h: &H,
    basis: &GellMannBasis,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<CMatrix> {
    check_basis(h, basis)?;
    if steps == 0 {
        return Err(QevoError::Precondition("oracle needs at least one step".into()));
    }
    let dt = (t1 - t0) / steps as f64;
    let blocks: Vec<CMatrix> = (0..steps.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| block_product(h, basis, t0, dt, c * CHUNK, ((c + 1) * CHUNK).min(steps)))
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().fold(identity(basis.dimension()), |acc, block| block * acc))
}

/// Stepwise propagator with a Richardson estimate of its error from the
/// `2·steps` product (midpoint rule, order 2).
pub fn stepwise_propagator<H: BlochHamiltonian + ?Sized>(
    h: &H,
    basis: &GellMannBasis,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<OracleResult> {
    if steps < 2 {
        return Err(QevoError::Precondition(format!("oracle needs >= 2 steps, got {steps}")));
    }
    h.validate_on(t0.min(t1), t0.max(t1))?;
    let coarse = stepwise_product(h, basis, t0, t1, steps)?;
    let fine = stepwise_product(h, basis, t0, t1, 2 * steps)?;
    let estimate = max_abs_diff(&coarse, &fine) * 4.0 / 3.0;
    Ok(OracleResult { u: coarse, steps, richardson_error_estimate: estimate })
}

/// Cumulative oracle propagators `U(times[i], times[0])`, using
/// `steps_per_segment` factors between consecutive times.
pub fn stepwise_checkpoints<H: BlochHamiltonian + ?Sized>(
    h: &H,
    basis: &GellMannBasis,
    times: &[f64],
    steps_per_segment: usize,
) -> Result<Vec<CMatrix>> {
    check_basis(h, basis)?;
    if steps_per_segment == 0 {
        return Err(QevoError::Precondition("oracle needs at least one step per segment".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(QevoError::Precondition("checkpoint times must increase".into()));
    }
    let segments: Vec<CMatrix> = times
        .par_windows(2)
        .map(|w| {
            let dt = (w[1] - w[0]) / steps_per_segment as f64;
            block_product(h, basis, w[0], dt, 0, steps_per_segment)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(times.len());
    out.push(identity(basis.dimension()));
    for seg in segments {
        let next = seg * out.last().unwrap();
        out.push(next);
    }
    Ok(out)
}

pub fn unitary_distance(u: &CMatrix, v: &CMatrix) -> Result<UnitaryDistance> {
    if u.shape() != v.shape() {
        return Err(QevoError::DimensionMismatch { expected: u.nrows(), found: v.nrows() });
    }
    let overlap = trace(&(v.adjoint() * u));
    let phase = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
    let rotated = v * Complex64::from_polar(1.0, phase);
    Ok(UnitaryDistance { max_abs: max_abs_diff(u, v), phase_invariant: max_abs_diff(u, &rotated) })
}
