//! Entrywise and rowwise access to the combinatorial Laplacian `Δ_k` and to
//! `H = I - Δ_k/λ̂` without materializing matrices.
//!
//! For `k >= 1` the row structure follows the three-case description of the
//! Laplacian: the diagonal is `up_degree + k + 1`, an off-diagonal entry is
//! `±1` exactly for pairs of k-faces that share all but one vertex and whose
//! union is not a face, and everything else vanishes. For `k = 0` the
//! complex is treated with unreduced homology, so `Δ_0 = ∂_1 ∂_1^†` is the
//! plain graph Laplacian on the 0-faces: degree diagonal, `-1` at each
//! 1-face neighbor.
//!
//! `Δ_k` is symmetric, so rows and columns coincide; `h_column_norm` is the
//! 1-norm of the corresponding column of `H`.

use serde::Serialize;

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};

/// Caller-asserted spectral estimates: `lambda_hat` upper-bounds the largest
/// Laplacian eigenvalue, and `gamma * lambda_hat` lower-bounds the spectral
/// gap. Validity is checked only in oracle-backed tests.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralParams {
    lambda_hat: f64,
    gamma: f64,
}

impl SpectralParams {
    pub fn new(lambda_hat: f64, gamma: f64) -> Result<Self> {
        if lambda_hat <= 0.0 || !lambda_hat.is_finite() {
            return Err(Error::InvalidParams(format!(
                "lambda_hat must be positive and finite, got {lambda_hat}"
            )));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidParams(format!("gamma must lie in (0, 1], got {gamma}")));
        }
        Ok(SpectralParams { lambda_hat, gamma })
    }

    pub fn lambda_hat(&self) -> f64 {
        self.lambda_hat
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// How two distinct k-faces relate in the neighbor taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    NotNeighbors,
    /// Symmetric difference two and the union is a face.
    UpDown,
    /// Symmetric difference two and the union is not a face.
    DownUpOnly,
}

/// Classifies a pair of distinct k-faces.
pub fn classify_pair(c: &Complex, i: &Face, j: &Face) -> Result<PairClass> {
    if i == j {
        return Err(Error::InvalidParams("classify_pair requires distinct faces".into()));
    }
    if i.dim() != j.dim() {
        return Err(Error::InvalidParams("classify_pair requires equal dimensions".into()));
    }
    if i.symmetric_difference_size(j) != 2 {
        return Ok(PairClass::NotNeighbors);
    }
    if c.contains(&i.union(j))? {
        Ok(PairClass::UpDown)
    } else {
        Ok(PairClass::DownUpOnly)
    }
}

/// Sign of the Laplacian entry for a down-up-only pair: `(-1)^(p+q)` where
/// `p` and `q` are the 1-based positions of the differing vertex inside
/// each face. Symmetric in its arguments.
pub fn entry_sign(i: &Face, j: &Face) -> Result<i8> {
    if i.symmetric_difference_size(j) != 2 {
        return Err(Error::InvalidParams(
            "entry_sign requires faces with symmetric difference two".into(),
        ));
    }
    let vi = i
        .vertices()
        .iter()
        .position(|v| !j.contains_vertex(*v))
        .expect("faces differ");
    let vj = j
        .vertices()
        .iter()
        .position(|v| !i.contains_vertex(*v))
        .expect("faces differ");
    // 1-based positions; parity is unchanged by adding 2.
    Ok(if (vi + vj) % 2 == 0 { 1 } else { -1 })
}

/// One signed off-diagonal Laplacian entry.
#[derive(Debug, Clone, Serialize)]
pub struct SignedEntry {
    pub neighbor: Face,
    pub sign: i8,
    pub magnitude: f64,
}

/// The sparse row of `Δ_k` at one face, plus the 1-norm of the matching
/// column of `H = I - Δ_k/λ̂`.
#[derive(Debug, Clone, Serialize)]
pub struct LaplacianRow {
    pub base: Face,
    pub diagonal: f64,
    pub off_diagonal: Vec<SignedEntry>,
    pub h_column_norm: f64,
}

/// Computes the complete sparse Laplacian row at `face` by scanning the
/// `(k+1)(n-k-1)` candidate faces with symmetric difference two. Costs
/// `poly(n)` membership queries.
pub fn laplacian_row(c: &Complex, face: &Face, params: &SpectralParams) -> Result<LaplacianRow> {
    if !c.contains(face)? {
        return Err(Error::NotAFace { face: face.to_string() });
    }
    let n = c.vertex_count();
    let k = face.dim();

    // Up-degree scan: which outside vertices extend the face.
    let mut up_vertex = vec![false; n as usize + 1];
    let mut up_degree = 0usize;
    for v in 1..=n {
        if face.contains_vertex(v) {
            continue;
        }
        let sup = face.extended(v).expect("outside vertex");
        if c.contains_in_range(&sup) {
            up_vertex[v as usize] = true;
            up_degree += 1;
        }
    }

    let diagonal = if k == 0 {
        up_degree as f64
    } else {
        (up_degree + k + 1) as f64
    };

    let mut off_diagonal = Vec::new();
    if k == 0 {
        // Graph-Laplacian row: -1 at every adjacent vertex.
        for v in 1..=n {
            if up_vertex[v as usize] {
                off_diagonal.push(SignedEntry {
                    neighbor: Face::new([v]).expect("single vertex"),
                    sign: -1,
                    magnitude: 1.0,
                });
            }
        }
    } else {
        // When v extends the face, every candidate sharing k vertices with
        // the base and containing v is an up-down neighbor (its union with
        // the base is the extending face), so only non-extending vertices
        // can produce entries.
        for v in 1..=n {
            if face.contains_vertex(v) || up_vertex[v as usize] {
                continue;
            }
            for &x in face.vertices() {
                let candidate = face.replaced(x, v);
                if c.contains_in_range(&candidate) {
                    let sign = entry_sign(face, &candidate)?;
                    off_diagonal.push(SignedEntry {
                        neighbor: candidate,
                        sign,
                        magnitude: 1.0,
                    });
                }
            }
        }
        off_diagonal.sort_by(|a, b| a.neighbor.cmp(&b.neighbor));
    }

    let lambda_hat = params.lambda_hat();
    let h_column_norm =
        (1.0 - diagonal / lambda_hat).abs() + off_diagonal.len() as f64 / lambda_hat;
    Ok(LaplacianRow {
        base: face.clone(),
        diagonal,
        off_diagonal,
        h_column_norm,
    })
}

/// One outgoing transition of the walk's Markov chain, carrying the sign of
/// the underlying `H` entry.
#[derive(Debug, Clone, Serialize)]
pub struct HTransition {
    pub target: Face,
    pub probability: f64,
    pub sign: i8,
}

/// Transition distribution out of a row's base face: each entry of the `H`
/// column, normalized by `h_column_norm`. The self-loop carries probability
/// `|1 - diagonal/λ̂| / h_column_norm`.
///
/// Returns `None` for an absorbing row (`h_column_norm = 0`): every
/// continuation of a walk standing here has weight zero.
pub fn h_row_distribution(row: &LaplacianRow, params: &SpectralParams) -> Option<Vec<HTransition>> {
    if row.h_column_norm <= 0.0 {
        return None;
    }
    let lambda_hat = params.lambda_hat();
    let norm = row.h_column_norm;
    let mut out = Vec::with_capacity(row.off_diagonal.len() + 1);
    let h_diag = 1.0 - row.diagonal / lambda_hat;
    if h_diag != 0.0 {
        out.push(HTransition {
            target: row.base.clone(),
            probability: h_diag.abs() / norm,
            sign: if h_diag > 0.0 { 1 } else { -1 },
        });
    }
    for entry in &row.off_diagonal {
        // H = I - Δ/λ̂ flips the sign of off-diagonal Laplacian entries.
        out.push(HTransition {
            target: entry.neighbor.clone(),
            probability: entry.magnitude / lambda_hat / norm,
            sign: -entry.sign,
        });
    }
    Some(out)
}
