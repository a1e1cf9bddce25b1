//! Natural cubic spline used by the sampled Hamiltonian families.

use crate::error::{QevoError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    // per-interval coefficients of a + b dx + c dx² + d dx³
    coef: Vec<[f64; 4]>,
    // ∫ from knots[0] to knots[i]
    cumulative: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: &[f64], values: &[f64]) -> Result<Self> {
        let n = knots.len();
        if n < 4 {
            return Err(QevoError::InvalidSpec(format!("cubic interpolation needs at least 4 samples, got {n}")));
        }
        if values.len() != n {
            return Err(QevoError::InvalidSpec(format!("{} sample values for {} sample times", values.len(), n)));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(QevoError::InvalidSpec("sample times must be strictly increasing".into()));
        }
        if values.iter().chain(knots).any(|x| !x.is_finite()) {
            return Err(QevoError::InvalidSpec("non-finite sample".into()));
        }

        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        // second derivatives m with m[0] = m[n-1] = 0 (Thomas algorithm)
        let mut m = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            rhs[i] = 6.0 * ((values[i + 1] - values[i]) / h[i] - (values[i] - values[i - 1]) / h[i - 1]);
        }
        for i in 2..n - 1 {
            let w = h[i - 1] / diag[i - 1];
            diag[i] -= w * h[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for i in (1..n - 1).rev() {
            let upper = if i + 1 < n - 1 { h[i] * m[i + 1] } else { 0.0 };
            m[i] = (rhs[i] - upper) / diag[i];
        }

        let coef: Vec<[f64; 4]> = (0..n - 1)
            .map(|i| {
                let a = values[i];
                let b = (values[i + 1] - values[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
                let c = 0.5 * m[i];
                let d = (m[i + 1] - m[i]) / (6.0 * h[i]);
                [a, b, c, d]
            })
            .collect();
        let mut cumulative = vec![0.0; n];
        for i in 0..n - 1 {
            cumulative[i + 1] = cumulative[i] + segment_integral(&coef[i], h[i]);
        }
        Ok(Self { knots: knots.to_vec(), coef, cumulative })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let last = self.coef.len() - 1;
        let i = match self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i.min(last),
            Err(0) => 0,
            Err(i) => (i - 1).min(last),
        };
        (i, t - self.knots[i])
    }

    pub fn value(&self, t: f64) -> f64 {
        let (i, x) = self.locate(t);
        let [a, b, c, d] = self.coef[i];
        a + x * (b + x * (c + x * d))
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let (i, x) = self.locate(t);
        let [_, b, c, d] = self.coef[i];
        b + x * (2.0 * c + 3.0 * d * x)
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        let (i, x) = self.locate(t);
        let [_, _, c, d] = self.coef[i];
        2.0 * c + 6.0 * d * x
    }

    fn antiderivative(&self, t: f64) -> f64 {
        let (i, x) = self.locate(t);
        self.cumulative[i] + segment_integral(&self.coef[i], x)
    }

    /// `∫_{t0}^{t1}` of the interpolant (exact for the cubic pieces).
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        self.antiderivative(t1) - self.antiderivative(t0)
    }
}

fn segment_integral(c: &[f64; 4], x: f64) -> f64 {
    x * (c[0] + x * (c[1] / 2.0 + x * (c[2] / 3.0 + x * c[3] / 4.0)))
}
