//! Property tests for the structural invariants: closure, sparsity bounds,
//! symmetry, coefficient bounds and budget monotonicity.

use bettimc::complex::{CliqueComplex, Complex, Face};
use bettimc::gen::{random_er_clique_complex, random_general_complex};
use bettimc::laplacian::{laplacian_row, SpectralParams};
use bettimc::walk::hoeffding_budget;
use bettimc::{chebyshev_monomial_coeffs, oracle};
use num_traits::Signed;
use proptest::prelude::*;

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut out = 1u128;
    for j in 0..k.min(n - k) {
        out = out * (n - j) as u128 / (j + 1) as u128;
    }
    out
}

fn brute_force_k_faces(c: &Complex, k: usize) -> Vec<Face> {
    let n = c.vertex_count();
    let mut out = Vec::new();
    let mut pick = vec![0u32; k + 1];
    fn rec(c: &Complex, n: u32, pick: &mut Vec<u32>, depth: usize, start: u32, out: &mut Vec<Face>) {
        if depth == pick.len() {
            let f = Face::new(pick.iter().copied()).unwrap();
            if c.contains(&f).unwrap() {
                out.push(f);
            }
            return;
        }
        for v in start..=n {
            pick[depth] = v;
            rec(c, n, pick, depth + 1, v + 1, out);
        }
    }
    rec(c, n, &mut pick, 0, 1, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_and_counts_hold(seed in 0u64..10_000, n in 4u32..9, general in any::<bool>()) {
        let c = if general {
            random_general_complex(n, 6, 4, seed).unwrap()
        } else {
            random_er_clique_complex(n, 0.5, seed).unwrap()
        };
        let Some(dim) = c.dimension() else { return Ok(()) };
        for k in 0..=dim {
            let faces = c.k_faces(k);
            prop_assert!((faces.len() as u128) <= binom(n as usize, k + 1));
            // Lexicographic, duplicate-free.
            for w in faces.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            if k > 0 {
                for f in faces.iter() {
                    for sub in f.boundary() {
                        prop_assert!(c.contains(&sub).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn clique_enumeration_matches_brute_force(seed in 0u64..10_000, n in 4u32..9, p in 0.2f64..0.8) {
        let c = random_er_clique_complex(n, p, seed).unwrap();
        for k in 0..n as usize {
            let fast = c.k_faces(k);
            let brute = brute_force_k_faces(&c, k);
            prop_assert_eq!(fast.as_ref(), brute.as_slice());
            if fast.is_empty() {
                break;
            }
        }
    }

    #[test]
    fn max_up_degree_respects_vertex_count(seed in 0u64..10_000, n in 4u32..10) {
        let c = random_er_clique_complex(n, 0.6, seed).unwrap();
        let Some(dim) = c.dimension() else { return Ok(()) };
        for k in 0..=dim {
            let delta = c.max_up_degree(k);
            prop_assert!(delta + k < n as usize);
        }
    }

    #[test]
    fn rows_are_symmetric_and_sparse(seed in 0u64..10_000, n in 4u32..9, general in any::<bool>()) {
        let c = if general {
            random_general_complex(n, 5, 4, seed).unwrap()
        } else {
            random_er_clique_complex(n, 0.5, seed).unwrap()
        };
        let Some(dim) = c.dimension() else { return Ok(()) };
        let params = SpectralParams::new(n as f64, 1.0).unwrap();
        for k in 1..=dim {
            let faces = c.k_faces(k);
            for f in faces.iter() {
                let row = laplacian_row(&c, f, &params).unwrap();
                let dup = c.up_degree(f).unwrap();
                prop_assert_eq!(row.diagonal as usize, dup + k + 1);
                prop_assert!(row.diagonal <= n as f64);
                prop_assert!(row.off_diagonal.len() <= (k + 1) * (n as usize - k - 1));
                if !general {
                    prop_assert!(row.off_diagonal.len() <= n as usize - k - 1 - dup);
                }
                for e in &row.off_diagonal {
                    let back = laplacian_row(&c, &e.neighbor, &params).unwrap();
                    let mirrored = back.off_diagonal.iter().find(|b| &b.neighbor == f);
                    prop_assert!(mirrored.map(|b| b.sign) == Some(e.sign));
                }
            }
        }
    }

    #[test]
    fn chebyshev_coefficients_bounded(i in 0u32..18) {
        let coeffs = chebyshev_monomial_coeffs(i);
        prop_assert_eq!(coeffs.len(), i as usize + 1);
        let cap = num_bigint::BigInt::from(1) << (2 * i);
        for (l, c) in coeffs.iter().enumerate() {
            prop_assert!(c.abs() <= cap.clone());
            // Parity support: T_i only has terms of i's parity.
            if (l as u32) % 2 != i % 2 {
                prop_assert_eq!(c, &num_bigint::BigInt::from(0));
            }
        }
    }

    #[test]
    fn budget_is_monotone(b in 0.5f64..3.0, z in 0u32..4, delta in 0.01f64..0.5, phi in 0.001f64..0.5) {
        let p0 = hoeffding_budget(b, z, delta, phi, u64::MAX).unwrap().p;
        let p1 = hoeffding_budget(b, z, delta * 1.5, phi, u64::MAX).unwrap().p;
        prop_assert!(p1 <= p0);
        let p2 = hoeffding_budget(b, z, delta, phi * 1.5, u64::MAX).unwrap().p;
        prop_assert!(p2 <= p0);
    }
}

/// Chi-squared uniformity of face sampling at significance 0.01 on a
/// support of up to 100 faces.
#[test]
fn face_sampling_passes_chi_squared() {
    use rand::SeedableRng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    let instances: Vec<Complex> = vec![
        random_er_clique_complex(10, 0.55, 4242).unwrap(),
        Complex::Clique(CliqueComplex::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)]).unwrap()),
    ];
    for (which, c) in instances.iter().enumerate() {
        for k in 0..=c.dimension().unwrap() {
            let faces = c.k_faces(k);
            let d = faces.len();
            if !(2..=100).contains(&d) {
                continue;
            }
            let draws = 100_000usize;
            let mut counts = vec![0u64; d];
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9000 + which as u64);
            for _ in 0..draws {
                let f = c.sample_k_face(k, &mut rng).unwrap();
                counts[faces.binary_search(&f).unwrap()] += 1;
            }
            let expected = draws as f64 / d as f64;
            let stat: f64 = counts
                .iter()
                .map(|&o| {
                    let diff = o as f64 - expected;
                    diff * diff / expected
                })
                .sum();
            let critical = ChiSquared::new((d - 1) as f64)
                .unwrap()
                .inverse_cdf(0.99);
            assert!(
                stat <= critical,
                "instance {which} k={k}: chi2 {stat:.2} > critical {critical:.2}"
            );
        }
    }
}

/// Claim cross-check for clique complexes: every vertex outside a face can
/// appear in at most one of its down-up-only neighbors.
#[test]
fn outside_vertices_yield_at_most_one_neighbor() {
    for seed in 0..12u64 {
        let c = random_er_clique_complex(9, 0.5, 777 + seed).unwrap();
        let params = SpectralParams::new(9.0, 1.0).unwrap();
        let Some(dim) = c.dimension() else { continue };
        for k in 1..=dim {
            for f in c.k_faces(k).iter() {
                let row = laplacian_row(&c, f, &params).unwrap();
                let mut seen = std::collections::HashMap::new();
                for e in &row.off_diagonal {
                    let added = e
                        .neighbor
                        .vertices()
                        .iter()
                        .copied()
                        .find(|&v| !f.contains_vertex(v))
                        .unwrap();
                    *seen.entry(added).or_insert(0usize) += 1;
                }
                for (v, count) in seen {
                    assert!(count <= 1, "vertex {v} appears in {count} neighbors of {f}");
                }
            }
        }
    }
}

/// The spectral view and the rank view of the Betti number agree.
#[test]
fn spectral_and_rank_betti_agree() {
    for seed in 0..10u64 {
        let c = if seed % 2 == 0 {
            random_er_clique_complex(8, 0.5, 1234 + seed).unwrap()
        } else {
            random_general_complex(8, 6, 4, 1234 + seed).unwrap()
        };
        let Some(dim) = c.dimension() else { continue };
        for k in 0..=dim {
            if c.face_count(k) == 0 {
                continue;
            }
            let spectrum = oracle::exact_spectrum(&c, k, oracle::DEFAULT_ZERO_TOL).unwrap();
            let rank = oracle::exact_betti(&c, k).unwrap();
            assert_eq!(spectrum.betti_spectral, rank, "seed={seed} k={k}");
        }
    }
}
