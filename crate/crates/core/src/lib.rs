//! Monte Carlo estimation of normalized Betti numbers `β_k/d_k` of
//! simplicial and clique complexes.
//!
//! The estimator never materializes the combinatorial Laplacian: it samples
//! signed random walks over k-faces whose expected value is the normalized
//! trace of a power of `H = I - Δ_k/λ̂`, and accelerates the long power by a
//! truncated Chebyshev expansion. An exact dense oracle ([`oracle`])
//! provides ground truth on small instances for validation.
//!
//! Modules follow the pipeline:
//!
//! * [`complex`] — face representations, membership, enumeration, sampling.
//! * [`laplacian`] — sparse Laplacian rows and walk transition distributions.
//! * [`walk`] — the path estimator, sample budgets, parallel trace estimation.
//! * [`chebyshev`] — monomial expansions and the end-to-end Betti estimator.
//! * [`oracle`] — dense boundary matrices, exact Betti numbers and spectra.
//! * [`io`] / [`gen`] — instance files and seeded random instance families.
//!
//! ```
//! use bettimc::{estimate_betti, EstimateOptions, SpectralParams, oracle};
//! use bettimc::io::parse_complex_str;
//!
//! // A hollow triangle has one 1-dimensional hole across three edges.
//! let c = parse_complex_str("complex 3\n1 2\n1 3\n2 3\n")?;
//! let spectrum = oracle::exact_spectrum(&c, 1, oracle::DEFAULT_ZERO_TOL)?;
//! let params = SpectralParams::new(spectrum.lambda_max, 1.0)?;
//! let est = estimate_betti(&c, 1, &params, 0.25, &EstimateOptions::default())?;
//! assert!((est.nu_tilde - 1.0 / 3.0).abs() <= 0.25);
//! # Ok::<(), bettimc::Error>(())
//! ```

pub mod chebyshev;
pub mod complex;
pub mod error;
pub mod gen;
pub mod io;
pub mod laplacian;
pub mod oracle;
pub mod rank;
pub mod walk;

pub use chebyshev::{
    estimation_schedule, build_expansion, chebyshev_monomial_coeffs, estimate_betti,
    BettiEstimate, ChebyshevExpansion, EstimateOptions, Schedule,
};
pub use complex::{CliqueComplex, Complex, Face, GeneralComplex, VertexId};
pub use error::{Error, Result};
pub use laplacian::{
    classify_pair, entry_sign, h_row_distribution, laplacian_row, HTransition, LaplacianRow,
    PairClass, SignedEntry, SpectralParams,
};
pub use oracle::{
    build_boundary, exact_betti, exact_spectrum, exact_trace_power, BoundaryMatrix,
    SpectrumReport,
};
pub use walk::{
    column_norm_bound, estimate_trace_power, hoeffding_budget, sample_walk, RowCache,
    SampleBudget, TraceEstimate, WalkSample,
};

/// Default seed for reproducible runs.
pub const DEFAULT_SEED: u64 = 0xBE771;

/// Default per-power cap on the number of walks.
pub const DEFAULT_MAX_BUDGET: u64 = 100_000_000;
