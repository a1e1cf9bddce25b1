//! Fixtures shared by the criterion benchmarks in `benches/`.

use qevo_core::{HamiltonianSpec, QuditHamiltonianSpec, TimeFn};

pub fn rotating_field() -> HamiltonianSpec {
    HamiltonianSpec::rotating_field(1.0, std::f64::consts::FRAC_PI_4, 2.0, 0.0)
}

pub fn phi_driven() -> HamiltonianSpec {
    HamiltonianSpec::phi_driven(1.0, 0.5, 1.0, TimeFn::Polynomial { coeffs: vec![0.0, 1.0, 0.1] })
}

/// d = 3 field rotating between two non-commuting generators.
pub fn qutrit_field() -> QuditHamiltonianSpec {
    let mut b = vec![TimeFn::zero(); 8];
    b[0] = TimeFn::Sinusoid { amplitude: 1.0, omega: 1.0, phase: std::f64::consts::FRAC_PI_2, offset: 0.0 };
    b[3] = TimeFn::Sinusoid { amplitude: 1.0, omega: 1.0, phase: 0.0, offset: 0.0 };
    QuditHamiltonianSpec::from_functions(3, TimeFn::zero(), b).expect("eight coefficients")
}

/// Deterministic, well spread SU(3) coefficient vectors.
pub fn su3_vectors(n: usize) -> Vec<[f64; 8]> {
    (0..n).map(|i| std::array::from_fn(|j| 2.0 * ((i * 8 + j) as f64 * 0.754_877_666).fract() - 1.0)).collect()
}
