//! Path-integral Monte Carlo estimation of `Tr(H^z)/d_k`.
//!
//! A walk starts at a uniformly random k-face and takes `z` steps of the
//! Markov chain whose transition probabilities are the normalized `H`-column
//! magnitudes at the current face. Its value is zero unless it returns to
//! its start, and otherwise the signed product of the column norms it saw.
//! Averaging independent walks gives an unbiased estimate of the normalized
//! trace; Hoeffding's inequality sizes the sample count.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::laplacian::{h_row_distribution, laplacian_row, SpectralParams};

/// Row-cache capacity per worker; full caches are dropped wholesale.
pub const DEFAULT_ROW_CACHE_CAPACITY: usize = 1 << 14;

/// Face counts up to this size compute the norm bound `B` by an exact scan
/// of all rows; larger instances fall back to the analytic bound.
pub const EXACT_NORM_SCAN_LIMIT: usize = 10_000;

/// One realized walk.
#[derive(Debug, Clone)]
pub struct WalkSample {
    /// Zero unless the walk returned to its start; then the signed product
    /// of the column norms along the way.
    pub y_value: f64,
    pub product_of_norms: f64,
    pub sign_parity: i8,
    /// Full path, retained only on request.
    pub path: Option<Vec<Face>>,
}

/// A Laplacian row preprocessed for walking: cumulative transition
/// probabilities plus the sign of each `H` entry.
#[derive(Debug)]
struct WalkRow {
    norm: f64,
    targets: Vec<Face>,
    cumulative: Vec<f64>,
    signs: Vec<i8>,
}

impl WalkRow {
    fn build(c: &Complex, face: &Face, params: &SpectralParams) -> Result<Self> {
        let row = laplacian_row(c, face, params)?;
        let norm = row.h_column_norm;
        match h_row_distribution(&row, params) {
            None => Ok(WalkRow { norm, targets: Vec::new(), cumulative: Vec::new(), signs: Vec::new() }),
            Some(dist) => {
                let mut targets = Vec::with_capacity(dist.len());
                let mut cumulative = Vec::with_capacity(dist.len());
                let mut signs = Vec::with_capacity(dist.len());
                let mut acc = 0.0;
                for t in dist {
                    acc += t.probability;
                    targets.push(t.target);
                    cumulative.push(acc);
                    signs.push(t.sign);
                }
                Ok(WalkRow { norm, targets, cumulative, signs })
            }
        }
    }

    fn is_absorbing(&self) -> bool {
        self.targets.is_empty()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Face, i8) {
        let u: f64 = rng.gen();
        let idx = self
            .cumulative
            .partition_point(|&c| c <= u)
            .min(self.targets.len() - 1);
        (self.targets[idx].clone(), self.signs[idx])
    }
}

/// Per-worker memoization of walk rows. Walks revisit faces constantly, so
/// even a crude bounded map pays for itself; on overflow the whole cache is
/// dropped rather than tracking recency.
pub struct RowCache {
    map: HashMap<Face, WalkRow>,
    capacity: usize,
}

impl RowCache {
    pub fn new(capacity: usize) -> Self {
        RowCache { map: HashMap::new(), capacity: capacity.max(1) }
    }

    fn walk_row(&mut self, c: &Complex, face: &Face, params: &SpectralParams) -> Result<&WalkRow> {
        if !self.map.contains_key(face) {
            if self.map.len() >= self.capacity {
                self.map.clear();
            }
            let row = WalkRow::build(c, face, params)?;
            self.map.insert(face.clone(), row);
        }
        Ok(self.map.get(face).expect("row just ensured"))
    }
}

impl Default for RowCache {
    fn default() -> Self {
        RowCache::new(DEFAULT_ROW_CACHE_CAPACITY)
    }
}

/// Samples one walk of length `z` started at a uniform k-face.
///
/// A walk that reaches an absorbing row before step `z` has every
/// continuation weighted zero, so its product (and value) collapse to zero.
pub fn sample_walk<R: Rng + ?Sized>(
    c: &Complex,
    k: usize,
    z: u32,
    params: &SpectralParams,
    rng: &mut R,
    cache: &mut RowCache,
    retain_path: bool,
) -> Result<WalkSample> {
    let start = c.sample_k_face(k, rng)?;
    let mut path = retain_path.then(|| {
        let mut p = Vec::with_capacity(z as usize + 1);
        p.push(start.clone());
        p
    });
    let mut product = 1.0f64;
    let mut parity: i8 = 1;
    let mut current = start.clone();
    for _ in 0..z {
        let row = cache.walk_row(c, &current, params)?;
        if row.is_absorbing() {
            product = 0.0;
            break;
        }
        let (next, sign) = row.sample(rng);
        product *= row.norm;
        parity *= sign;
        current = next;
        if let Some(p) = &mut path {
            p.push(current.clone());
        }
    }
    let y_value = if current == start { parity as f64 * product } else { 0.0 };
    Ok(WalkSample { y_value, product_of_norms: product, sign_parity: parity, path })
}

/// Upper bound `B` on the column norms of `H`.
///
/// Small instances are scanned exactly. Beyond that, clique complexes use
/// the sparsity-based bound (`2n/λ̂`, or `1 + n/λ̂` once `λ̂ > n` makes that
/// form tighter and the former invalid), and general complexes bound the
/// diagonal term by its extreme values plus `(k+1)(n-k-1)` off-diagonal
/// entries of magnitude `1/λ̂`.
pub fn column_norm_bound(c: &Complex, k: usize, params: &SpectralParams) -> Result<f64> {
    let faces = c.k_faces(k);
    if faces.is_empty() {
        return Err(Error::EmptyDimension { k });
    }
    if faces.len() <= EXACT_NORM_SCAN_LIMIT {
        let mut best = 0.0f64;
        for f in faces.iter() {
            let row = laplacian_row(c, f, params)?;
            best = best.max(row.h_column_norm);
        }
        return Ok(best);
    }
    let n = c.vertex_count() as f64;
    let lambda_hat = params.lambda_hat();
    if c.is_clique() {
        if lambda_hat <= n {
            Ok(2.0 * n / lambda_hat)
        } else {
            Ok(1.0 + n / lambda_hat)
        }
    } else {
        let kf = k as f64;
        let diag_min = if k == 0 { 0.0 } else { kf + 1.0 };
        let diag_term = (1.0 - diag_min / lambda_hat)
            .abs()
            .max((1.0 - n / lambda_hat).abs());
        Ok(diag_term + (kf + 1.0) * (n - kf - 1.0) / lambda_hat)
    }
}

/// Sample-count prescription for one trace estimation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleBudget {
    pub delta: f64,
    pub failure_prob: f64,
    /// Number of independent walks.
    pub p: u64,
    /// The norm bound `B` the budget was derived from.
    pub bound_b: f64,
}

/// Hoeffding sample count `p = ceil(2 B^{2z} ln(2/φ) / δ²)` for a
/// `δ`-additive estimate of `Tr(H^z)/d_k` with failure probability `φ`,
/// using that every walk value lies in `[-B^z, B^z]`.
pub fn hoeffding_budget(
    bound_b: f64,
    z: u32,
    delta: f64,
    failure_prob: f64,
    limit: u64,
) -> Result<SampleBudget> {
    if delta <= 0.0 || !delta.is_finite() {
        return Err(Error::InvalidParams(format!("delta must be positive, got {delta}")));
    }
    if !(failure_prob > 0.0 && failure_prob < 1.0) {
        return Err(Error::InvalidParams(format!(
            "failure probability must lie in (0, 1), got {failure_prob}"
        )));
    }
    if bound_b < 0.0 || bound_b.is_nan() {
        return Err(Error::InvalidParams(format!("norm bound must be nonnegative, got {bound_b}")));
    }
    let b2z = bound_b.powi(2 * z as i32);
    let required = (2.0 * b2z * (2.0 / failure_prob).ln() / (delta * delta)).ceil();
    if !required.is_finite() || required > limit as f64 {
        return Err(Error::Budget { required, limit: limit as f64 });
    }
    Ok(SampleBudget {
        delta,
        failure_prob,
        p: (required as u64).max(1),
        bound_b,
    })
}

/// Mean of a batch of walks for one power.
#[derive(Debug, Clone, Serialize)]
pub struct TraceEstimate {
    pub z: u32,
    pub mean: f64,
    pub sample_count: u64,
    pub empirical_std_error: f64,
    pub bound_b: f64,
}

/// Deterministic pairwise tree reduction.
fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

struct WorkerPartial {
    sum: f64,
    sum_sq: f64,
}

#[allow(clippy::too_many_arguments)]
fn run_worker(
    c: &Complex,
    k: usize,
    z: u32,
    params: &SpectralParams,
    seed: u64,
    stream: u64,
    count: u64,
    y_cap: f64,
) -> Result<WorkerPartial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut cache = RowCache::default();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..count {
        let sample = sample_walk(c, k, z, params, &mut rng, &mut cache, false)?;
        let y = sample.y_value;
        assert!(
            y.abs() <= y_cap,
            "walk value {y} exceeds B^z = {y_cap}"
        );
        sum += y;
        sum_sq += y * y;
    }
    Ok(WorkerPartial { sum, sum_sq })
}

/// Runs `budget.p` independent walks and returns their mean.
///
/// Workers receive disjoint ChaCha streams derived from
/// `(seed, stream_offset + worker index)` and fixed sample counts, so a
/// given `(seed, workers)` pair reproduces the estimate bit for bit. The
/// final reduction is a pairwise tree over the per-worker partial sums in
/// worker order.
#[allow(clippy::too_many_arguments)]
pub fn estimate_trace_power(
    c: &Complex,
    k: usize,
    z: u32,
    params: &SpectralParams,
    budget: &SampleBudget,
    seed: u64,
    stream_offset: u64,
    workers: usize,
) -> Result<TraceEstimate> {
    if c.face_count(k) == 0 {
        return Err(Error::EmptyDimension { k });
    }
    let p = budget.p.max(1);
    let workers = workers.max(1).min(p as usize);
    // Tolerate rounding drift in the per-sample bound check.
    let y_cap = budget.bound_b.powi(z as i32) * (1.0 + 1e-9) + 1e-300;

    let base = p / workers as u64;
    let extra = p % workers as u64;
    let counts: Vec<u64> = (0..workers as u64)
        .map(|w| base + u64::from(w < extra))
        .collect();

    let partials: Vec<Result<WorkerPartial>> = if workers == 1 {
        vec![run_worker(c, k, z, params, seed, stream_offset, counts[0], y_cap)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = counts
                .iter()
                .enumerate()
                .map(|(w, &count)| {
                    let stream = stream_offset + w as u64;
                    scope.spawn(move || run_worker(c, k, z, params, seed, stream, count, y_cap))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker thread panicked"))
                .collect()
        })
    };

    let mut sums = Vec::with_capacity(workers);
    let mut sums_sq = Vec::with_capacity(workers);
    for partial in partials {
        let partial = partial?;
        sums.push(partial.sum);
        sums_sq.push(partial.sum_sq);
    }
    let total = pairwise_sum(&sums);
    let total_sq = pairwise_sum(&sums_sq);
    let pf = p as f64;
    let mean = total / pf;
    let empirical_std_error = if p > 1 {
        let var = ((total_sq - total * total / pf) / (pf - 1.0)).max(0.0);
        (var / pf).sqrt()
    } else {
        0.0
    };
    Ok(TraceEstimate {
        z,
        mean,
        sample_count: p,
        empirical_std_error,
        bound_b: budget.bound_b,
    })
}
