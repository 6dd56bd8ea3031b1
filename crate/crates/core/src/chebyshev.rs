//! Chebyshev acceleration: replace the long power `x^r` by a degree-`d`
//! polynomial, estimate each monomial's normalized trace with walks of that
//! length, and recombine. Cuts the needed walk length from `r` to roughly
//! `sqrt(r)`.
//!
//! Coefficients are assembled in exact big-rational arithmetic: the
//! alternating Chebyshev-to-monomial conversion cancels catastrophically in
//! floating point, so only the final monomial coefficients are rounded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::laplacian::SpectralParams;
use crate::walk::{column_norm_bound, estimate_trace_power, hoeffding_budget, TraceEstimate};
use crate::{DEFAULT_MAX_BUDGET, DEFAULT_SEED};

/// Monomial coefficients of the Chebyshev polynomial `T_i`, as exact
/// integers from the recurrence `T_i = 2x T_{i-1} - T_{i-2}`.
pub fn chebyshev_monomial_coeffs(i: u32) -> Vec<BigInt> {
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    if i == 0 {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for _ in 2..=i {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (l, c) in cur.iter().enumerate() {
            next[l + 1] += 2 * c;
        }
        for (l, c) in prev.iter().enumerate() {
            next[l] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for j in 0..k.min(n - k) {
        out = out * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    out
}

/// Degree-`d` monomial-basis approximation of `x^r` obtained by truncating
/// the Chebyshev expansion of the monomial.
#[derive(Debug, Clone, Serialize)]
pub struct ChebyshevExpansion {
    pub r: u32,
    pub d: u32,
    /// Chebyshev-basis weights of `x^r`: nonzero only at indices with the
    /// parity of `r`.
    #[serde(skip)]
    pub alpha: Vec<BigRational>,
    /// Monomial coefficients of the truncated expansion.
    pub b: Vec<f64>,
}

impl ChebyshevExpansion {
    /// Horner evaluation of the approximating polynomial.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.b.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `Σ |b_ℓ|`, which controls how per-power estimation error amplifies.
    pub fn coefficient_l1(&self) -> f64 {
        self.b.iter().map(|c| c.abs()).sum()
    }

    /// Largest deviation from `x^r` over a uniform grid on `[-1, 1]`.
    pub fn max_grid_error(&self, points: usize) -> f64 {
        let points = points.max(2);
        let mut worst = 0.0f64;
        for t in 0..points {
            let x = -1.0 + 2.0 * t as f64 / (points - 1) as f64;
            let err = (self.eval(x) - x.powi(self.r as i32)).abs();
            worst = worst.max(err);
        }
        worst
    }
}

/// Builds the expansion `p_{r,d}(x) = α_0 + Σ_{i=1..d} 2 α_i T_i(x)` in the
/// monomial basis, with `α_i = C(r, (r-i)/2) / 2^r` for `i ≡ r (mod 2)`.
pub fn build_expansion(r: u32, d: u32) -> Result<ChebyshevExpansion> {
    if d > r {
        return Err(Error::InvalidParams(format!("degree d = {d} must not exceed r = {r}")));
    }
    let two_pow_r = BigInt::one() << r;
    let mut alpha = vec![BigRational::zero(); d as usize + 1];
    for (i, a) in alpha.iter_mut().enumerate() {
        let i = i as u32;
        if i % 2 == r % 2 {
            *a = BigRational::new(binomial(r, (r - i) / 2), two_pow_r.clone());
        }
    }
    let mut b_exact = vec![BigRational::zero(); d as usize + 1];
    for i in 0..=d {
        let a = &alpha[i as usize];
        if a.is_zero() {
            continue;
        }
        let weight = if i == 0 { BigInt::one() } else { BigInt::from(2) };
        let coeffs = chebyshev_monomial_coeffs(i);
        for (l, c) in coeffs.iter().enumerate() {
            b_exact[l] += a * BigRational::from_integer(&weight * c);
        }
    }
    let b = b_exact
        .iter()
        .map(|v| v.to_f64().ok_or_else(|| Error::Numerical("coefficient out of f64 range".into())))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ChebyshevExpansion { r, d, alpha, b })
}

/// The walk schedule: power `r`, truncation degree `d` and the worst-case
/// per-power Monte Carlo precision.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Schedule {
    pub r: u32,
    pub d: u32,
    /// `ε / (3 (d+1) 2^{3d})`, the coefficient-bound-based precision.
    pub delta: f64,
}

/// Largest power the scheduler will accept; beyond this the expansion
/// itself becomes the bottleneck and no budget is practical.
pub const MAX_SCHEDULE_POWER: u32 = 10_000;
/// Largest truncation degree the scheduler will accept.
pub const MAX_SCHEDULE_DEGREE: u32 = 256;

/// Computes `r = ⌈(1/γ) ln(3/ε)⌉` and `d = ⌈sqrt(2/γ) ln(6/ε)⌉` (natural
/// logarithms), capping `d` at `r` since the degree-`r` truncation is
/// already exact.
pub fn estimation_schedule(gamma: f64, epsilon: f64) -> Result<Schedule> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParams(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParams(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let r = ((1.0 / gamma) * (3.0 / epsilon).ln()).ceil() as u32;
    let r = r.max(1);
    let d_uncapped = ((2.0 / gamma).sqrt() * (6.0 / epsilon).ln()).ceil() as u32;
    let d = d_uncapped.min(r);
    if r > MAX_SCHEDULE_POWER || d > MAX_SCHEDULE_DEGREE {
        return Err(Error::InvalidParams(format!(
            "schedule r = {r}, d = {d} is beyond any practical sample budget; increase gamma or epsilon"
        )));
    }
    let delta = epsilon / (3.0 * (d as f64 + 1.0)) * (2.0f64).powi(-(3 * d as i32));
    Ok(Schedule { r, d, delta })
}

/// Options shared by the estimation entry points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EstimateOptions {
    pub seed: u64,
    pub workers: usize,
    /// Per-power cap on the number of walks.
    pub max_budget: u64,
    /// Overall failure probability, split evenly over the d+1 powers.
    pub failure_prob: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            seed: DEFAULT_SEED,
            workers: 1,
            max_budget: DEFAULT_MAX_BUDGET,
            failure_prob: 0.01,
        }
    }
}

/// An estimate of the normalized Betti number `β_k/d_k`.
#[derive(Debug, Clone, Serialize)]
pub struct BettiEstimate {
    /// The estimate, clamped to `[0, 1]`.
    pub nu_tilde: f64,
    pub epsilon: f64,
    pub r: u32,
    pub d: u32,
    pub per_power: Vec<TraceEstimate>,
    /// Whether clamping changed the raw combination.
    pub clamped: bool,
}

impl BettiEstimate {
    /// Total number of walks across all powers.
    pub fn samples_used(&self) -> u64 {
        self.per_power.iter().map(|t| t.sample_count).sum()
    }
}

/// Estimates `β_k/d_k` to additive precision `epsilon`: schedules `(r, d)`,
/// builds the expansion, estimates each power's normalized trace to the
/// per-power precision, and combines.
///
/// The per-power precision is `ε / (3 Σ|b_ℓ|)` when that is weaker than the
/// schedule's worst-case `δ`; both make the combined Monte Carlo error at
/// most `ε/3`, so the cheaper one is used.
pub fn estimate_betti(
    c: &Complex,
    k: usize,
    params: &SpectralParams,
    epsilon: f64,
    opts: &EstimateOptions,
) -> Result<BettiEstimate> {
    if c.face_count(k) == 0 {
        return Err(Error::EmptyDimension { k });
    }
    let schedule = estimation_schedule(params.gamma(), epsilon)?;
    let expansion = build_expansion(schedule.r, schedule.d)?;
    let bound = column_norm_bound(c, k, params)?;
    let coeff_l1 = expansion.coefficient_l1();
    let delta = if coeff_l1 > 0.0 {
        schedule.delta.max(epsilon / (3.0 * coeff_l1))
    } else {
        schedule.delta
    };
    let per_power_failure = opts.failure_prob / (schedule.d as f64 + 1.0);

    let mut per_power = Vec::with_capacity(schedule.d as usize + 1);
    for l in 0..=schedule.d {
        let budget = hoeffding_budget(bound, l, delta, per_power_failure, opts.max_budget)?;
        let est = estimate_trace_power(
            c,
            k,
            l,
            params,
            &budget,
            opts.seed,
            (l as u64) << 32,
            opts.workers,
        )?;
        per_power.push(est);
    }

    let mut raw = 0.0;
    for (l, est) in per_power.iter().enumerate() {
        raw += expansion.b[l] * est.mean;
    }
    let nu_tilde = raw.clamp(0.0, 1.0);
    Ok(BettiEstimate {
        nu_tilde,
        epsilon,
        r: schedule.r,
        d: schedule.d,
        per_power,
        clamped: nu_tilde != raw,
    })
}
