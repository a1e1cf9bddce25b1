//! The characteristic function `K_d(r) = Σ_m k_m exp{-i sqrt(d/2) λ_m(r)}`,
//! its gradient, and the SU(d) exponential map
//! `V_d(r) = exp{-i sqrt(d/2) (r.Λ)} = K_d/d I + i sqrt(d/2) (∇K_d/d).Λ`.
//!
//! d = 2 and d = 3 have closed forms; every d has the spectral path.
//!
//! For d = 3 the eigenvalues of `r.Λ` are `(2/√3)|r| sin(φ + 2πk/3)`,
//! `k = 0, 1, 2`, with `sin 3φ = −(3√3 / 2|r|³) det(r.Λ)` on the principal
//! branch `3φ ∈ [−π/2, π/2]`.

use std::f64::consts::{FRAC_PI_3, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{QevoError, Result};
use crate::gellmann::{structure_constants, GellMannBasis, StructureConstants};
use crate::linalg::{c, hermitian_eigen, identity, norm, CMatrix, I};

/// `|1 − 2cos(2(φ + 2πk/3))|` below this switches the SU(3) closed form to
/// the spectral path.
pub const DEGENERACY_THRESHOLD: f64 = 1e-3;

/// Norms below this use truncated series instead of `sin|r|/|r|` style
/// quotients.
pub const SMALL_NORM: f64 = 1e-8;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn su3() -> &'static (GellMannBasis, StructureConstants) {
    static SU3: OnceLock<(GellMannBasis, StructureConstants)> = OnceLock::new();
    SU3.get_or_init(|| {
        let basis = GellMannBasis::new(3).expect("d = 3 is valid");
        let sc = structure_constants(&basis);
        (basis, sc)
    })
}

/// Shared SU(3) basis (Gell-Mann matrices) and structure constants.
pub fn su3_basis() -> &'static GellMannBasis {
    &su3().0
}

/// Distinct eigenvalues of a Hermitian matrix with multiplicities and
/// spectral projectors.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub projectors: Vec<CMatrix>,
}

impl SpectralData {
    /// Eigenvalues closer than `1e-9 * max(1, spectral radius)` are merged.
    pub fn of(h: &CMatrix) -> Self {
        let (values, vectors) = hermitian_eigen(h);
        let d = values.len();
        let radius = values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        let tol = 1e-9 * radius;

        let mut eigenvalues: Vec<f64> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (idx, &v) in values.iter().enumerate() {
            match eigenvalues.last() {
                Some(&last) if (v - last).abs() <= tol => groups.last_mut().unwrap().push(idx),
                _ => {
                    eigenvalues.push(v);
                    groups.push(vec![idx]);
                }
            }
        }
        // representative value: mean over the cluster
        for (ev, g) in eigenvalues.iter_mut().zip(&groups) {
            *ev = g.iter().map(|&i| values[i]).sum::<f64>() / g.len() as f64;
        }
        let projectors = groups
            .iter()
            .map(|g| {
                let mut p = CMatrix::zeros(d, d);
                for &col in g {
                    let v = vectors.column(col);
                    p += &v * v.adjoint();
                }
                p
            })
            .collect();
        let multiplicities = groups.iter().map(Vec::len).collect();
        Self { eigenvalues, multiplicities, projectors }
    }

    /// `Σ_m exp{-i scale λ_m} E(λ_m)`.
    pub fn exp_minus_i(&self, scale: f64) -> CMatrix {
        let d = self.projectors[0].nrows();
        let mut u = CMatrix::zeros(d, d);
        for (l, p) in self.eigenvalues.iter().zip(&self.projectors) {
            u += p * Complex64::from_polar(1.0, -scale * l);
        }
        u
    }
}

/// `K_2(r) = 2 cos|r|`.
pub fn k2(r: &[f64; 3]) -> f64 {
    2.0 * norm(r).cos()
}

/// `∇K_2(r) = −2 sin|r| r/|r|`.
pub fn grad_k2(r: &[f64; 3]) -> [f64; 3] {
    let n = norm(r);
    let s = if n < SMALL_NORM { 1.0 - n * n / 6.0 } else { n.sin() / n };
    [-2.0 * s * r[0], -2.0 * s * r[1], -2.0 * s * r[2]]
}

/// `exp{-i r.σ} = I cos|r| − i sin|r| (r.σ)/|r|`.
pub fn exp_su2(r: &[f64; 3]) -> CMatrix {
    let n = norm(r);
    let (cs, sinc) = if n < SMALL_NORM { (1.0 - 0.5 * n * n, 1.0) } else { (n.cos(), n.sin() / n) };
    // -i sinc (r.σ)
    let a = -sinc;
    CMatrix::from_row_slice(2, 2, &[c(cs, a * r[2]), c(a * r[1], a * r[0]), c(-a * r[1], a * r[0]), c(cs, -a * r[2])])
}

/// `det(r.Λ)` for the Gell-Mann matrices, as an explicit cubic polynomial.
pub fn su3_det(r: &[f64; 8]) -> f64 {
    let [r1, r2, r3, r4, r5, r6, r7, r8] = *r;
    2.0 * (r1 * r4 * r6 + r1 * r5 * r7 + r2 * r5 * r6 - r2 * r4 * r7)
        + r8 / SQRT3 * (2.0 * r1 * r1 + 2.0 * r2 * r2 + 2.0 * r3 * r3 - r4 * r4 - r5 * r5 - r6 * r6 - r7 * r7)
        + r3 * (r4 * r4 + r5 * r5 - r6 * r6 - r7 * r7)
        - 2.0 / (3.0 * SQRT3) * r8 * r8 * r8
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su3Angles {
    pub norm: f64,
    /// Principal branch, `3φ ∈ [−π/2, π/2]`.
    pub phi: f64,
}

impl Su3Angles {
    pub fn of(r: &[f64; 8]) -> Self {
        let n = norm(r);
        if n == 0.0 {
            return Self { norm: 0.0, phi: 0.0 };
        }
        let mut s = (-(3.0 * SQRT3) / (2.0 * n * n * n) * su3_det(r)).clamp(-1.0, 1.0);
        // asin has infinite slope at ±1: a few ulps of round-off in s would
        // cost ~1e-8 in φ at an exactly doubly-degenerate spectrum
        if 1.0 - s.abs() < 1e-14 {
            s = s.signum();
        }
        Self { norm: n, phi: s.asin() / 3.0 }
    }

    /// `φ + 2πk/3`.
    pub fn shifted(&self, k: usize) -> f64 {
        self.phi + 2.0 * PI * k as f64 / 3.0
    }

    /// `1 − 2cos(2(φ + 2πk/3))`, the closed-form denominators.
    pub fn denominators(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| 1.0 - 2.0 * (2.0 * self.shifted(k)).cos())
    }

    pub fn is_degenerate(&self) -> bool {
        self.denominators().iter().any(|d| d.abs() < DEGENERACY_THRESHOLD)
    }
}

/// Eigenvalues `(2/√3)|r| sin(φ + 2πk/3)`, `k = 0, 1, 2`. Zero vector gives
/// the zero triple.
pub fn su3_eigenvalues(r: &[f64; 8]) -> [f64; 3] {
    let ang = Su3Angles::of(r);
    if ang.norm == 0.0 {
        return [0.0; 3];
    }
    [0, 1, 2].map(|k| 2.0 / SQRT3 * ang.norm * ang.shifted(k).sin())
}

fn phase_terms(ang: &Su3Angles) -> [Complex64; 3] {
    let a = 2f64.sqrt() * ang.norm;
    [0, 1, 2].map(|k| Complex64::from_polar(1.0, -a * ang.shifted(k).sin()))
}

/// `K_3(r) = Σ_k exp{-i√2 |r| sin(φ + 2πk/3)}`.
pub fn k3(r: &[f64; 8]) -> Complex64 {
    let ang = Su3Angles::of(r);
    if ang.norm == 0.0 {
        return c(3.0, 0.0);
    }
    phase_terms(&ang).iter().sum()
}

/// `p_m(r) = Σ_ij r_i r_j dsym_ijm / |r|²`.
pub fn su3_p(r: &[f64; 8]) -> [f64; 8] {
    let n2: f64 = r.iter().map(|x| x * x).sum();
    let mut p = [0.0; 8];
    if n2 == 0.0 {
        return p;
    }
    for ((i, j, m), d) in su3().1.dsym.iter() {
        p[m] += r[i] * r[j] * d;
    }
    p.map(|x| x / n2)
}

/// `F1, F2` of the SU(3) gradient formula, or a degenerate-spectrum error.
pub fn su3_f_terms(ang: &Su3Angles) -> Result<(Complex64, Complex64)> {
    let den = ang.denominators();
    if let Some(&bad) = den.iter().find(|d| d.abs() < DEGENERACY_THRESHOLD) {
        return Err(QevoError::DegenerateSpectrum { denominator: bad });
    }
    let e = phase_terms(ang);
    let mut f1 = c(0.0, 0.0);
    let mut f2 = c(0.0, 0.0);
    for k in 0..3 {
        f1 += e[k] / den[k];
        f2 += e[k] * ang.shifted(k).sin() / den[k];
    }
    Ok((f1, f2 * (2.0 / SQRT3)))
}

/// `∇K_3(r) = −3i sqrt(2/3) (F1 p + F2 r/|r|)`.
///
/// Below [`SMALL_NORM`] the leading Taylor term `−3r` is returned.
pub fn grad_k3(r: &[f64; 8]) -> Result<[Complex64; 8]> {
    let ang = Su3Angles::of(r);
    if ang.norm < SMALL_NORM {
        return Ok(r.map(|x| c(-3.0 * x, 0.0)));
    }
    let (f1, f2) = su3_f_terms(&ang)?;
    let p = su3_p(r);
    let pre = -3.0 * I * (2.0f64 / 3.0).sqrt();
    let mut g = [c(0.0, 0.0); 8];
    for m in 0..8 {
        g[m] = pre * (f1 * p[m] + f2 * r[m] / ang.norm);
    }
    Ok(g)
}

/// `exp{-i sqrt(3/2) (r.Λ)}` from the projector closed form, with a spectral
/// fallback near eigenvalue degeneracies.
pub fn exp_su3(r: &[f64; 8]) -> CMatrix {
    let basis = su3_basis();
    let m = basis.contract(r).expect("length 8");
    let scale = 1.5f64.sqrt();
    let ang = Su3Angles::of(r);
    if ang.norm < SMALL_NORM {
        let m2 = &m * &m;
        return identity(3) - m.map(|z| z * I * scale) - m2.scale(0.75);
    }
    if ang.is_degenerate() {
        return SpectralData::of(&m).exp_minus_i(scale);
    }
    let n = ang.norm;
    let m2 = (&m * &m).scale(1.0 / (n * n));
    let e = phase_terms(&ang);
    let mut u = CMatrix::zeros(3, 3);
    for k in 0..3 {
        let psi = ang.shifted(k);
        let cos2 = (2.0 * psi).cos();
        let mut proj = &m2 + m.scale(2.0 / (SQRT3 * n) * psi.sin());
        for i in 0..3 {
            proj[(i, i)] -= c((1.0 + 2.0 * cos2) / 3.0, 0.0);
        }
        u += proj * (e[k] / (1.0 - 2.0 * cos2));
    }
    u
}

fn check_len(r: &[f64], basis: &GellMannBasis) -> Result<()> {
    if r.len() != basis.len() {
        return Err(QevoError::DimensionMismatch { expected: basis.len(), found: r.len() });
    }
    Ok(())
}

/// Spectral data of `r.Λ`.
pub fn spectral_data(r: &[f64], basis: &GellMannBasis) -> Result<SpectralData> {
    check_len(r, basis)?;
    Ok(SpectralData::of(&basis.contract(r)?))
}

/// `exp{-i sqrt(d/2) (r.Λ)}` by eigen-decomposition of `r.Λ`.
pub fn exp_sud(r: &[f64], basis: &GellMannBasis) -> Result<CMatrix> {
    Ok(spectral_data(r, basis)?.exp_minus_i(basis.scale()))
}

/// `K_d(r) = Σ_m k_m exp{-i sqrt(d/2) λ_m}`.
pub fn kd(r: &[f64], basis: &GellMannBasis) -> Result<Complex64> {
    let sd = spectral_data(r, basis)?;
    let s = basis.scale();
    Ok(sd.eigenvalues.iter().zip(&sd.multiplicities).map(|(&l, &k)| Complex64::from_polar(k as f64, -s * l)).sum())
}

/// `∂K_d/∂r_j = tr(∂_j V_d) = −i sqrt(d/2) tr(Λ_j V_d(r))`.
pub fn grad_kd(r: &[f64], basis: &GellMannBasis) -> Result<Vec<Complex64>> {
    let v = exp_sud(r, basis)?;
    let pre = -I * basis.scale();
    Ok((0..basis.len()).map(|j| pre * basis.trace_with(&v, j)).collect())
}

/// Central finite differences of [`kd`] with step `h`.
pub fn grad_kd_fd(r: &[f64], basis: &GellMannBasis, h: f64) -> Result<Vec<Complex64>> {
    check_len(r, basis)?;
    let mut x = r.to_vec();
    let mut g = Vec::with_capacity(r.len());
    for j in 0..r.len() {
        x[j] = r[j] + h;
        let plus = kd(&x, basis)?;
        x[j] = r[j] - h;
        let minus = kd(&x, basis)?;
        x[j] = r[j];
        g.push((plus - minus) / (2.0 * h));
    }
    Ok(g)
}

/// Bloch coordinates of the exponential map from a value/gradient pair:
/// `K/d I + i sqrt(d/2) (∇K/d).Λ`.
pub fn assemble_from_characteristic(k: Complex64, grad: &[Complex64], basis: &GellMannBasis) -> Result<CMatrix> {
    let d = basis.dimension() as f64;
    let scaled: Vec<Complex64> = grad.iter().map(|g| g * I * basis.scale() / d).collect();
    let mut m = basis.contract_complex(&scaled)?;
    for i in 0..basis.dimension() {
        m[(i, i)] += k / d;
    }
    Ok(m)
}

/// Eigenvalue triple recomputed from the alternative angle shift `φ ± π/3`
/// layout. Kept for comparison: the triple is the negated spectrum when φ
/// comes from the principal `sin 3φ` branch.
pub fn su3_eigenvalues_shifted_layout(r: &[f64; 8]) -> [f64; 3] {
    let ang = Su3Angles::of(r);
    let a = 2.0 / SQRT3 * ang.norm;
    [a * (ang.phi + FRAC_PI_3).sin(), a * (ang.phi - FRAC_PI_3).sin(), -a * ang.phi.sin()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_defect};
    use std::f64::consts::FRAC_PI_2;

    fn e(k: usize) -> [f64; 8] {
        let mut r = [0.0; 8];
        r[k] = 1.0;
        r
    }

    fn sorted(mut v: [f64; 3]) -> [f64; 3] {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn k2_values() {
        assert_eq!(k2(&[0.0; 3]), 2.0);
        assert!(k2(&[FRAC_PI_2, 0.0, 0.0]).abs() < 1e-15);
        assert!((k2(&[0.0, PI, 0.0]) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn exp_su2_quarter_turn_is_minus_i_sigma1() {
        assert_eq!(exp_su2(&[0.0; 3]), identity(2));
        let u = exp_su2(&[FRAC_PI_2, 0.0, 0.0]);
        let expected = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., -1.), c(0., 0.)]);
        assert!(max_abs_diff(&u, &expected) < 1e-15);
    }

    #[test]
    fn su3_det_known_values() {
        assert!((su3_det(&e(7)) + 2.0 / (3.0 * SQRT3)).abs() < 1e-15);
        assert_eq!(su3_det(&e(2)), 0.0);
        assert_eq!(su3_det(&[0.0; 8]), 0.0);
    }

    #[test]
    fn su3_eigenvalues_on_diagonal_generators() {
        let l = sorted(su3_eigenvalues(&e(2)));
        assert!((l[0] + 1.0).abs() < 1e-15 && l[1].abs() < 1e-15 && (l[2] - 1.0).abs() < 1e-15);
        let l = sorted(su3_eigenvalues(&e(7)));
        let s = 1.0 / SQRT3;
        assert!((l[0] + 2.0 * s).abs() < 1e-14);
        assert!((l[1] - s).abs() < 1e-12 && (l[2] - s).abs() < 1e-12);
        assert_eq!(su3_eigenvalues(&[0.0; 8]), [0.0; 3]);
    }

    #[test]
    fn shifted_layout_is_the_negated_spectrum() {
        let l = sorted(su3_eigenvalues_shifted_layout(&e(7)));
        let s = 1.0 / SQRT3;
        assert!((l[2] - 2.0 * s).abs() < 1e-14);
        assert!((l[0] + s).abs() < 1e-12);
    }

    #[test]
    fn k3_at_origin_and_on_lambda3() {
        assert_eq!(k3(&[0.0; 8]), c(3.0, 0.0));
        let a = 1.5f64.sqrt();
        let expected = Complex64::from_polar(1.0, -a) + Complex64::from_polar(1.0, a) + 1.0;
        assert!((k3(&e(2)) - expected).norm() < 1e-14);
    }

    #[test]
    fn p_is_scale_invariant() {
        let r = [0.3, -0.2, 0.5, 0.1, 0.7, -0.4, 0.2, 0.6];
        let p1 = su3_p(&r);
        let p2 = su3_p(&r.map(|x| 3.7 * x));
        for (a, b) in p1.iter().zip(&p2) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_gradient_is_reported() {
        assert!(matches!(grad_k3(&e(7)), Err(QevoError::DegenerateSpectrum { .. })));
    }

    #[test]
    fn exp_su3_degenerate_falls_back() {
        let u = exp_su3(&e(7));
        let a = 1.5f64.sqrt() / SQRT3;
        let mut expected = CMatrix::zeros(3, 3);
        expected[(0, 0)] = Complex64::from_polar(1.0, -a);
        expected[(1, 1)] = Complex64::from_polar(1.0, -a);
        expected[(2, 2)] = Complex64::from_polar(1.0, 2.0 * a);
        assert!(max_abs_diff(&u, &expected) < 1e-12);
        assert_eq!(exp_su3(&[0.0; 8]), identity(3));
    }

    #[test]
    fn kd_zero_vector_is_dimension() {
        for d in 2..6 {
            let b = GellMannBasis::new(d).unwrap();
            let k = kd(&vec![0.0; b.len()], &b).unwrap();
            assert!((k - c(d as f64, 0.0)).norm() < 1e-14);
            assert_eq!(exp_sud(&vec![0.0; b.len()], &b).unwrap(), identity(d));
        }
    }

    #[test]
    fn exp_sud_rejects_wrong_length() {
        let b = GellMannBasis::new(3).unwrap();
        assert!(exp_sud(&[0.0; 3], &b).is_err());
    }

    #[test]
    fn spectral_projectors_resolve_identity() {
        let b = GellMannBasis::new(4).unwrap();
        let r: Vec<f64> = (0..15).map(|k| ((k * 7) % 5) as f64 * 0.1 - 0.2).collect();
        let sd = spectral_data(&r, &b).unwrap();
        assert_eq!(sd.multiplicities.iter().sum::<usize>(), 4);
        let sum = sd.projectors.iter().fold(CMatrix::zeros(4, 4), |a, p| a + p);
        assert!(max_abs_diff(&sum, &identity(4)) < 1e-12);
        for (i, p) in sd.projectors.iter().enumerate() {
            for (j, q) in sd.projectors.iter().enumerate() {
                let expected = if i == j { p.clone() } else { CMatrix::zeros(4, 4) };
                assert!(max_abs_diff(&(p * q), &expected) < 1e-10);
            }
        }
        assert!(unitarity_defect(&sd.exp_minus_i(1.3)) < 1e-12);
    }
}
