//! Ground-truth engine for small instances: dense boundary matrices, exact
//! Betti numbers via integer rank, exact spectra of the combinatorial
//! Laplacian, and exact normalized traces of powers of `H = I - Δ_k/λ̂`.
//!
//! Everything here materializes dense matrices and is intentionally limited
//! to desk-scale instances; the estimators are validated against it, not
//! replaced by it.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::rank::integer_rank;

/// Maximum number of entries of a dense boundary matrix.
pub const DENSE_ENTRY_LIMIT: usize = 10_000_000;
/// Maximum `d_k` for a dense eigendecomposition.
pub const SPECTRUM_LIMIT: usize = 2000;
/// Default relative threshold separating zero eigenvalues from the gap.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Dense signed boundary operator from k-faces to (k-1)-faces.
///
/// Entries live in `{-1, 0, +1}`; the column of a face `A` holds
/// `(-1)^ℓ` at its `ℓ`-th codimension-one subface (0-based vertex
/// removal order). For `k = 0` the matrix has zero rows: the complex is
/// treated with unreduced homology, so vertices have empty boundary.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub k: usize,
    pub row_faces: Arc<[Face]>,
    pub col_faces: Arc<[Face]>,
    data: Vec<i64>,
}

impl BoundaryMatrix {
    pub fn nrows(&self) -> usize {
        self.row_faces.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_faces.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.ncols() + col]
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn rank(&self) -> usize {
        integer_rank(&self.data, self.nrows(), self.ncols())
    }

    /// Integer product `self · other`, used for the chain identity check.
    pub fn multiply(&self, other: &BoundaryMatrix) -> Vec<i64> {
        assert_eq!(self.ncols(), other.nrows());
        let (n, m, inner) = (self.nrows(), other.ncols(), self.ncols());
        let mut out = vec![0i64; n * m];
        for i in 0..n {
            for l in 0..inner {
                let a = self.data[i * inner + l];
                if a == 0 {
                    continue;
                }
                for j in 0..m {
                    out[i * m + j] += a * other.data[l * m + j];
                }
            }
        }
        out
    }
}

fn check_dense_size(rows: usize, cols: usize, what: &str) -> Result<()> {
    if rows.saturating_mul(cols) > DENSE_ENTRY_LIMIT {
        return Err(Error::OracleScale(format!(
            "{what} would have {rows} x {cols} entries"
        )));
    }
    Ok(())
}

/// Builds the dense boundary matrix taking k-faces to (k-1)-faces.
pub fn build_boundary(c: &Complex, k: usize) -> Result<BoundaryMatrix> {
    let col_faces = c.k_faces(k);
    if k == 0 {
        return Ok(BoundaryMatrix {
            k,
            row_faces: Arc::from(Vec::new()),
            col_faces,
            data: Vec::new(),
        });
    }
    let row_faces = c.k_faces(k - 1);
    check_dense_size(row_faces.len(), col_faces.len(), "boundary matrix")?;
    let ncols = col_faces.len();
    let mut data = vec![0i64; row_faces.len() * ncols];
    for (col, face) in col_faces.iter().enumerate() {
        for (skip, sub) in face.boundary().enumerate() {
            let row = row_faces
                .binary_search(&sub)
                .expect("downward closure: subface present");
            let sign = if skip % 2 == 0 { 1 } else { -1 };
            data[row * ncols + col] = sign;
        }
    }
    Ok(BoundaryMatrix { k, row_faces, col_faces, data })
}

/// Dense integer combinatorial Laplacian `∂_k^T ∂_k + ∂_{k+1} ∂_{k+1}^T`,
/// returned row-major together with the face order of its rows/columns.
pub fn dense_laplacian(c: &Complex, k: usize) -> Result<(Arc<[Face]>, Vec<i64>)> {
    let faces = c.k_faces(k);
    let d = faces.len();
    check_dense_size(d, d, "dense Laplacian")?;
    let mut lap = vec![0i64; d * d];

    let down = build_boundary(c, k)?;
    debug_assert_eq!(down.ncols(), d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0i64;
            for r in 0..down.nrows() {
                acc += down.entry(r, i) * down.entry(r, j);
            }
            lap[i * d + j] += acc;
        }
    }

    let up = build_boundary(c, k + 1)?;
    if up.ncols() > 0 {
        debug_assert_eq!(up.nrows(), d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0i64;
                for col in 0..up.ncols() {
                    acc += up.entry(i, col) * up.entry(j, col);
                }
                lap[i * d + j] += acc;
            }
        }
    }
    Ok((faces, lap))
}

/// Exact k-th Betti number, `d_k - rank(∂_k) - rank(∂_{k+1})`, computed
/// with fraction-free integer elimination.
pub fn exact_betti(c: &Complex, k: usize) -> Result<u64> {
    let d_k = c.face_count(k);
    let rank_down = build_boundary(c, k)?.rank();
    let rank_up = build_boundary(c, k + 1)?.rank();
    Ok((d_k - rank_down - rank_up) as u64)
}

/// Exact spectral summary of the k-th combinatorial Laplacian.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
    /// Smallest eigenvalue above the zero threshold; `None` when the
    /// Laplacian is zero on the whole space.
    pub gap: Option<f64>,
    /// Count of eigenvalues at or below the zero threshold.
    pub betti_spectral: u64,
    pub zero_threshold: f64,
}

/// Full symmetric eigendecomposition of the dense Laplacian.
///
/// `zero_tol` is relative to `lambda_max`; eigenvalues at or below
/// `zero_tol * lambda_max` count as zero.
pub fn exact_spectrum(c: &Complex, k: usize, zero_tol: f64) -> Result<SpectrumReport> {
    let d = c.face_count(k);
    if d == 0 {
        return Err(Error::EmptyDimension { k });
    }
    if d > SPECTRUM_LIMIT {
        return Err(Error::OracleScale(format!(
            "d_k = {d} exceeds the eigensolver limit {SPECTRUM_LIMIT}"
        )));
    }
    let (_, lap) = dense_laplacian(c, k)?;
    let mat = DMatrix::from_fn(d, d, |i, j| lap[i * d + j] as f64);
    let eig = mat.symmetric_eigenvalues();
    let mut eigenvalues: Vec<f64> = eig.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("eigensolver returned non-finite values".into()));
    }
    let lambda_max = *eigenvalues.last().expect("d >= 1");
    let zero_threshold = if lambda_max > 0.0 { zero_tol * lambda_max } else { zero_tol };
    let betti_spectral = eigenvalues.iter().filter(|&&v| v <= zero_threshold).count() as u64;
    let gap = eigenvalues.iter().copied().find(|&v| v > zero_threshold);
    Ok(SpectrumReport {
        eigenvalues,
        lambda_max,
        gap,
        betti_spectral,
        zero_threshold,
    })
}

/// Exact `Tr(H^z) / d_k` with `H = I - Δ_k/λ̂`, via eigenvalue powers.
pub fn exact_trace_power(c: &Complex, k: usize, z: u32, lambda_hat: f64) -> Result<f64> {
    if lambda_hat <= 0.0 {
        return Err(Error::InvalidParams("lambda_hat must be positive".into()));
    }
    let spectrum = exact_spectrum(c, k, DEFAULT_ZERO_TOL)?;
    let d = spectrum.eigenvalues.len() as f64;
    let total: f64 = spectrum
        .eigenvalues
        .iter()
        .map(|&lam| (1.0 - lam / lambda_hat).powi(z as i32))
        .sum();
    Ok(total / d)
}

/// Same quantity by repeated dense multiplication; a cross-check route for
/// the eigenvalue path, limited to `z <= 64`.
pub fn trace_power_by_matmul(c: &Complex, k: usize, z: u32, lambda_hat: f64) -> Result<f64> {
    if lambda_hat <= 0.0 {
        return Err(Error::InvalidParams("lambda_hat must be positive".into()));
    }
    if z > 64 {
        return Err(Error::InvalidParams("matmul trace route supports z <= 64".into()));
    }
    let d = c.face_count(k);
    if d == 0 {
        return Err(Error::EmptyDimension { k });
    }
    if d > SPECTRUM_LIMIT {
        return Err(Error::OracleScale(format!("d_k = {d} too large for dense powers")));
    }
    let (_, lap) = dense_laplacian(c, k)?;
    let h = DMatrix::from_fn(d, d, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - lap[i * d + j] as f64 / lambda_hat
    });
    let mut power = DMatrix::<f64>::identity(d, d);
    for _ in 0..z {
        power *= &h;
    }
    Ok(power.trace() / d as f64)
}
