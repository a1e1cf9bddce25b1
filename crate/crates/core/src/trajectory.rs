//! Recorded solution of a fixed-step integration.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    /// Largest pre-renormalization norm defect over the steps since the
    /// previous recorded row (0 for the initial row).
    pub norm_defects: Vec<f64>,
    /// `∫_{t0}^{t} b0 dτ` at each recorded time.
    pub phases: Vec<f64>,
    pub steps: usize,
    pub step: f64,
}

impl<S> Trajectory<S> {
    pub(crate) fn with_capacity(rows: usize, steps: usize, step: f64) -> Self {
        Self {
            times: Vec::with_capacity(rows),
            states: Vec::with_capacity(rows),
            norm_defects: Vec::with_capacity(rows),
            phases: Vec::with_capacity(rows),
            steps,
            step,
        }
    }

    pub(crate) fn push(&mut self, t: f64, state: S, defect: f64, phase: f64) {
        self.times.push(t);
        self.states.push(state);
        self.norm_defects.push(defect);
        self.phases.push(phase);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }

    pub fn max_norm_defect(&self) -> f64 {
        self.norm_defects.iter().copied().fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// Fixed-step schedule shared by the integrators: `n` equal steps covering
/// `[t0, t1]` with `h <= step`.
pub fn step_count(t0: f64, t1: f64, step: f64) -> usize {
    let raw = (t1 - t0) / step;
    // tolerate round-off in e.g. 10 / 1e-4
    let n = (raw - 1e-9 * raw.max(1.0)).ceil();
    (n as usize).max(1)
}

/// Options controlling what an integrator records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordOptions {
    /// record every `stride`-th step (the final step is always recorded)
    pub stride: usize,
    /// project back onto the constraint surface after every step
    pub renormalize: bool,
}

impl Default for RecordOptions {
    fn default() -> Self {
        Self { stride: 1, renormalize: true }
    }
}

impl RecordOptions {
    pub fn stride(stride: usize) -> Self {
        Self { stride: stride.max(1), ..Self::default() }
    }

    /// Stride giving about `rows` output intervals for `steps` integration steps.
    pub fn for_rows(steps: usize, rows: usize) -> Self {
        Self::stride(steps.div_ceil(rows.max(1)))
    }

    pub(crate) fn records(&self, k: usize, n: usize) -> bool {
        k % self.stride == 0 || k == n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_count_tolerates_round_off() {
        assert_eq!(step_count(0.0, 10.0, 1e-4), 100_000);
        assert_eq!(step_count(0.0, 1.0, 0.3), 4);
        assert_eq!(step_count(0.0, 1.0, 2.0), 1);
    }

    #[test]
    fn stride_rows() {
        let o = RecordOptions::for_rows(100_000, 1000);
        assert_eq!(o.stride, 100);
        let rows = (0..=100_000).filter(|&k| o.records(k, 100_000)).count();
        assert_eq!(rows, 1001);
    }
}
