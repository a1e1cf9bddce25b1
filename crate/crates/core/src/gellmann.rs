//! Generalized Gell-Mann matrices, their structure constants, and the
//! Bloch-like decomposition `A = a0 I + sqrt(d/2) a.Λ`.
//!
//! Generators are normalized so that `tr(Λ_k Λ_m) = 2 δ_km`. For d = 2 they
//! are the Pauli matrices (σ1, σ2, σ3); for d = 3 the usual Gell-Mann
//! numbering λ1 … λ8 is used. Every other d uses the block ordering: all
//! symmetric off-diagonal generators, then all antisymmetric ones (pairs
//! `j < k` in row-major order), then the `d - 1` diagonal ones.
//!
//! Indices are zero-based throughout the crate: `Λ_0` is σ1 / λ1.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QevoError, Result};
use crate::linalg::{c, CMatrix};

/// Entries below this modulus are treated as exact zeros in the sparse
/// structure-constant tensors.
pub const STRUCTURE_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GeneratorKind {
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
    Diagonal(usize),
}

/// The `d² − 1` traceless Hermitian generators of SU(d).
#[derive(Debug, Clone)]
pub struct GellMannBasis {
    dimension: usize,
    generators: Vec<CMatrix>,
    // (row, col, value) of the nonzero entries of each generator
    sparse: Vec<Vec<(usize, usize, Complex64)>>,
}

impl GellMannBasis {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(QevoError::InvalidDimension(d));
        }
        let kinds = generator_order(d);
        let generators: Vec<CMatrix> = kinds.iter().map(|&k| generator_matrix(d, k)).collect();
        let sparse = generators
            .iter()
            .map(|g| {
                let mut e = Vec::new();
                for i in 0..d {
                    for j in 0..d {
                        if g[(i, j)] != Complex64::new(0.0, 0.0) {
                            e.push((i, j, g[(i, j)]));
                        }
                    }
                }
                e
            })
            .collect();
        Ok(Self { dimension: d, generators, sparse })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of generators, `d² − 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, k: usize) -> &CMatrix {
        &self.generators[k]
    }

    /// `sqrt(d/2)`, the normalization factor of the Bloch representation.
    pub fn scale(&self) -> f64 {
        (self.dimension as f64 / 2.0).sqrt()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.len() {
            return Err(QevoError::DimensionMismatch { expected: self.len(), found: n });
        }
        Ok(())
    }

    /// `Σ_j r_j Λ_j` for a real coefficient vector.
    pub fn contract(&self, r: &[f64]) -> Result<CMatrix> {
        self.check_len(r.len())?;
        let d = self.dimension;
        let mut m = CMatrix::zeros(d, d);
        for (coef, entries) in r.iter().zip(&self.sparse) {
            if *coef == 0.0 {
                continue;
            }
            for &(i, j, v) in entries {
                m[(i, j)] += v * *coef;
            }
        }
        Ok(m)
    }

    /// `Σ_j a_j Λ_j` for a complex coefficient vector.
    pub fn contract_complex(&self, a: &[Complex64]) -> Result<CMatrix> {
        self.check_len(a.len())?;
        let d = self.dimension;
        let mut m = CMatrix::zeros(d, d);
        for (coef, entries) in a.iter().zip(&self.sparse) {
            for &(i, j, v) in entries {
                m[(i, j)] += v * coef;
            }
        }
        Ok(m)
    }

    /// `tr(A Λ_k)` using the sparsity of `Λ_k`.
    pub fn trace_with(&self, a: &CMatrix, k: usize) -> Complex64 {
        self.sparse[k].iter().map(|&(i, j, v)| a[(j, i)] * v).sum()
    }

    /// Hamiltonian matrix `b0 I + sqrt(d/2) b.Λ`.
    pub fn hamiltonian(&self, b0: f64, b: &[f64]) -> Result<CMatrix> {
        let mut h = self.contract(b)?.scale(self.scale());
        for i in 0..self.dimension {
            h[(i, i)] += b0;
        }
        Ok(h)
    }

    pub fn to_document(&self) -> BasisDocument {
        BasisDocument {
            dimension: self.dimension,
            generators: self
                .generators
                .iter()
                .map(|g| {
                    let mut flat = Vec::with_capacity(self.dimension * self.dimension);
                    for i in 0..self.dimension {
                        for j in 0..self.dimension {
                            flat.push([g[(i, j)].re, g[(i, j)].im]);
                        }
                    }
                    flat
                })
                .collect(),
        }
    }
}

/// Serialized form of a basis: each generator is a flat row-major list of
/// `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDocument {
    pub dimension: usize,
    pub generators: Vec<Vec<[f64; 2]>>,
}

pub fn build_basis(d: usize) -> Result<GellMannBasis> {
    GellMannBasis::new(d)
}

fn generator_order(d: usize) -> Vec<GeneratorKind> {
    use GeneratorKind::*;
    if d == 3 {
        // λ1 … λ8
        return vec![
            Symmetric(0, 1),
            Antisymmetric(0, 1),
            Diagonal(1),
            Symmetric(0, 2),
            Antisymmetric(0, 2),
            Symmetric(1, 2),
            Antisymmetric(1, 2),
            Diagonal(2),
        ];
    }
    // d = 2 gives (σ1, σ2, σ3) with this ordering already.
    let mut order = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            order.push(Symmetric(j, k));
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            order.push(Antisymmetric(j, k));
        }
    }
    order.extend((1..d).map(Diagonal));
    order
}

fn generator_matrix(d: usize, kind: GeneratorKind) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    match kind {
        GeneratorKind::Symmetric(j, k) => {
            m[(j, k)] = c(1.0, 0.0);
            m[(k, j)] = c(1.0, 0.0);
        }
        GeneratorKind::Antisymmetric(j, k) => {
            m[(j, k)] = c(0.0, -1.0);
            m[(k, j)] = c(0.0, 1.0);
        }
        GeneratorKind::Diagonal(l) => {
            let lf = l as f64;
            let norm = (2.0 / (lf * (lf + 1.0))).sqrt();
            for i in 0..l {
                m[(i, i)] = c(norm, 0.0);
            }
            m[(l, l)] = c(-lf * norm, 0.0);
        }
    }
    m
}

/// Sparse real rank-3 tensor keyed by zero-based `(k, m, j)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseTensor3 {
    entries: BTreeMap<(usize, usize, usize), f64>,
}

impl SparseTensor3 {
    pub fn get(&self, k: usize, m: usize, j: usize) -> f64 {
        self.entries.get(&(k, m, j)).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        self.entries.iter().map(|(&key, &v)| (key, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    fn insert(&mut self, key: (usize, usize, usize), v: f64) {
        if v.abs() >= STRUCTURE_ZERO {
            self.entries.insert(key, v);
        }
    }
}

/// Antisymmetric (`f`) and symmetric (`dsym`) structure constants:
/// `Λ_k Λ_m = (2/d) δ_km I + Σ_j (dsym_kmj + i f_kmj) Λ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub dimension: usize,
    pub f: SparseTensor3,
    pub dsym: SparseTensor3,
}

impl StructureConstants {
    pub fn generator_count(&self) -> usize {
        self.dimension * self.dimension - 1
    }

    /// Nonzero `(k, m, j, f_kmj − i dsym_kmj)`, the coupling of the Bloch ODE.
    pub fn ode_coupling(&self) -> Vec<(usize, usize, usize, Complex64)> {
        let mut merged: BTreeMap<(usize, usize, usize), Complex64> = BTreeMap::new();
        for (key, v) in self.f.iter() {
            merged.entry(key).or_default().re += v;
        }
        for (key, v) in self.dsym.iter() {
            merged.entry(key).or_default().im -= v;
        }
        merged.into_iter().map(|((k, m, j), v)| (k, m, j, v)).collect()
    }

    /// Nonzero `(k, m, j, dsym_kmj + i f_kmj)`, the coefficients of the product rule.
    pub fn product_coupling(&self) -> Vec<(usize, usize, usize, Complex64)> {
        self.ode_coupling().into_iter().map(|(k, m, j, v)| (k, m, j, Complex64::new(-v.im, v.re))).collect()
    }
}

/// `f_kmj = tr([Λk,Λm]Λj)/(4i)`, `dsym_kmj = tr({Λk,Λm}Λj)/4`.
///
/// Both come from `T_kmj = tr(Λk Λm Λj)`: since `T_mkj = conj(T_kmj)`,
/// `f = Im T / 2` and `dsym = Re T / 2`. Only `k <= m` is evaluated; the
/// `(m, k)` entries are filled by exact (anti)symmetry.
pub fn structure_constants(basis: &GellMannBasis) -> StructureConstants {
    let n = basis.len();
    let mut f = SparseTensor3::default();
    let mut dsym = SparseTensor3::default();
    for k in 0..n {
        for m in k..n {
            let prod = basis.generator(k) * basis.generator(m);
            for j in 0..n {
                let t = basis.trace_with(&prod, j);
                let fv = 0.5 * t.im;
                let dv = 0.5 * t.re;
                if k != m {
                    f.insert((k, m, j), fv);
                    f.insert((m, k, j), -fv);
                    dsym.insert((m, k, j), dv);
                }
                dsym.insert((k, m, j), dv);
            }
        }
    }
    StructureConstants { dimension: basis.dimension(), f, dsym }
}

/// Coefficients of `A = a0 I + sqrt(d/2) a.Λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochDecomposition {
    pub a0: Complex64,
    pub a: Vec<Complex64>,
}

impl BlochDecomposition {
    /// Real parts of `a`, meaningful for Hermitian inputs.
    pub fn real_vector(&self) -> Vec<f64> {
        self.a.iter().map(|z| z.re).collect()
    }
}

/// `a0 = tr(A)/d`, `a_j = tr(A Λ_j)/sqrt(2d)`.
pub fn decompose(a: &CMatrix, basis: &GellMannBasis) -> Result<BlochDecomposition> {
    let d = basis.dimension();
    if a.nrows() != d || a.ncols() != d {
        return Err(QevoError::DimensionMismatch { expected: d, found: a.nrows().max(a.ncols()) });
    }
    let a0 = crate::linalg::trace(a) / d as f64;
    let norm = (2.0 * d as f64).sqrt();
    let coeffs = (0..basis.len()).map(|j| basis.trace_with(a, j) / norm).collect();
    Ok(BlochDecomposition { a0, a: coeffs })
}

/// `a0 I + sqrt(d/2) Σ a_j Λ_j`.
pub fn reconstruct(dec: &BlochDecomposition, basis: &GellMannBasis) -> Result<CMatrix> {
    let mut m = basis.contract_complex(&dec.a)?.scale(basis.scale());
    for i in 0..basis.dimension() {
        m[(i, i)] += dec.a0;
    }
    Ok(m)
}
