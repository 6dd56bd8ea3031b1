//! The structural invariant suite run by `bettimc validate`: per-dimension
//! checks of the Laplacian row structure against the bounds and against the
//! dense oracle.

use bettimc::complex::Complex;
use bettimc::laplacian::{laplacian_row, SpectralParams};
use bettimc::oracle;
use bettimc::Result;

use crate::report::CheckResult;

const DENSE_MATCH_LIMIT: usize = 200;

fn push(checks: &mut Vec<CheckResult>, name: &str, k: usize, passed: bool, detail: String) {
    checks.push(CheckResult { name: name.to_string(), k, passed, detail });
}

pub fn run_suite(c: &Complex) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let n = c.vertex_count();
    let Some(dim) = c.dimension() else {
        return Ok(checks);
    };

    for k in 0..=dim {
        let faces = c.k_faces(k);
        let d_k = faces.len();
        if d_k == 0 {
            continue;
        }
        let params = SpectralParams::new(n as f64, 1.0)?;
        let rows: Vec<_> = faces
            .iter()
            .map(|f| laplacian_row(c, f, &params))
            .collect::<Result<_>>()?;

        if k >= 1 {
            let mut ok = true;
            let mut detail = String::new();
            for (f, row) in faces.iter().zip(&rows) {
                let dup = c.up_degree(f)?;
                if row.diagonal as usize != dup + k + 1 {
                    ok = false;
                    detail = format!("{f}: diagonal {} != {}", row.diagonal, dup + k + 1);
                    break;
                }
            }
            push(&mut checks, "diagonal_formula", k, ok, detail);
        }

        {
            let worst = rows.iter().map(|r| r.diagonal).fold(0.0f64, f64::max);
            push(
                &mut checks,
                "diagonal_bound",
                k,
                worst <= n as f64,
                format!("max diagonal {worst} vs n = {n}"),
            );
        }

        {
            let cap = (k + 1) * (n as usize - k - 1);
            let worst = rows.iter().map(|r| r.off_diagonal.len()).max().unwrap_or(0);
            push(
                &mut checks,
                "general_sparsity",
                k,
                worst <= cap,
                format!("max off-diagonal count {worst} vs bound {cap}"),
            );
        }

        if c.is_clique() && k >= 1 {
            let mut ok = true;
            let mut detail = String::new();
            for (f, row) in faces.iter().zip(&rows) {
                let dup = c.up_degree(f)?;
                let cap = n as usize - k - dup;
                // Count includes the diagonal entry when it is nonzero.
                let nnz = row.off_diagonal.len() + usize::from(row.diagonal != 0.0);
                if nnz > cap {
                    ok = false;
                    detail = format!("{f}: {nnz} nonzeros vs bound {cap}");
                    break;
                }
            }
            push(&mut checks, "clique_sparsity", k, ok, detail);

            // Each vertex outside a face appears in at most one of its
            // down-up-only neighbors.
            let mut ok = true;
            let mut detail = String::new();
            'outer: for (f, row) in faces.iter().zip(&rows) {
                let mut seen = std::collections::HashMap::new();
                for e in &row.off_diagonal {
                    let added = e
                        .neighbor
                        .vertices()
                        .iter()
                        .copied()
                        .find(|&v| !f.contains_vertex(v))
                        .expect("neighbor differs in one vertex");
                    let slot = seen.entry(added).or_insert(0usize);
                    *slot += 1;
                    if *slot > 1 {
                        ok = false;
                        detail = format!("{f}: outside vertex {added} repeats");
                        break 'outer;
                    }
                }
            }
            push(&mut checks, "clique_outside_vertex", k, ok, detail);
        }

        {
            let mut ok = true;
            let mut detail = String::new();
            'sym: for (f, row) in faces.iter().zip(&rows) {
                for e in &row.off_diagonal {
                    let idx = faces.binary_search(&e.neighbor).expect("neighbor is a k-face");
                    let back = &rows[idx];
                    let mirrored = back.off_diagonal.iter().find(|b| &b.neighbor == f);
                    if mirrored.map(|b| b.sign) != Some(e.sign) {
                        ok = false;
                        detail = format!("asymmetric pair {f} / {}", e.neighbor);
                        break 'sym;
                    }
                }
            }
            push(&mut checks, "row_symmetry", k, ok, detail);
        }

        if d_k <= DENSE_MATCH_LIMIT {
            let (order, lap) = oracle::dense_laplacian(c, k)?;
            let mut ok = true;
            let mut detail = String::new();
            for (i, f) in order.iter().enumerate() {
                let row = laplacian_row(c, f, &params)?;
                let mut sparse = vec![0i64; d_k];
                sparse[i] = row.diagonal as i64;
                for e in &row.off_diagonal {
                    sparse[order.binary_search(&e.neighbor).expect("k-face")] = e.sign as i64;
                }
                if sparse.as_slice() != &lap[i * d_k..(i + 1) * d_k] {
                    ok = false;
                    detail = format!("row of {f} disagrees with the dense Laplacian");
                    break;
                }
            }
            push(&mut checks, "dense_match", k, ok, detail);
        }

        if d_k <= oracle::SPECTRUM_LIMIT {
            let spectrum = oracle::exact_spectrum(c, k, oracle::DEFAULT_ZERO_TOL)?;
            let lambda_max = spectrum.lambda_max;

            let upper = lambda_max <= n as f64 + 1e-9;
            let lower = if k >= 1 {
                let delta_k = c.max_up_degree(k) as f64;
                delta_k + k as f64 + 1.0 <= lambda_max + 1e-9
            } else {
                true
            };
            push(
                &mut checks,
                "lambda_max_bounds",
                k,
                upper && lower,
                format!("lambda_max = {lambda_max}"),
            );

            if c.is_clique() && lambda_max > 0.0 {
                let exact_params = SpectralParams::new(lambda_max, 1.0)?;
                let max_norm = faces
                    .iter()
                    .map(|f| laplacian_row(c, f, &exact_params).map(|r| r.h_column_norm))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .fold(0.0f64, f64::max);
                let cap = 2.0 * n as f64 / lambda_max;
                push(
                    &mut checks,
                    "h_norm_bound",
                    k,
                    max_norm <= cap + 1e-9,
                    format!("max column norm {max_norm:.6} vs 2n/lambda = {cap:.6}"),
                );
            }

            let rank_betti = oracle::exact_betti(c, k)?;
            push(
                &mut checks,
                "betti_agreement",
                k,
                spectrum.betti_spectral == rank_betti,
                format!("spectral {} vs rank {rank_betti}", spectrum.betti_spectral),
            );
        }

        {
            let down = oracle::build_boundary(c, k)?;
            let up = oracle::build_boundary(c, k + 1)?;
            let ok = if down.nrows() == 0 || up.ncols() == 0 {
                true
            } else {
                down.multiply(&up).iter().all(|&x| x == 0)
            };
            push(&mut checks, "chain_identity", k, ok, String::new());
        }
    }
    Ok(checks)
}
