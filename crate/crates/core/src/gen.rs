//! Seeded random instance families for validation: Erdős–Rényi clique
//! complexes and random facet-generated general complexes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{CliqueComplex, Complex, Face, GeneralComplex};
use crate::error::Result;

/// Clique complex of an Erdős–Rényi graph G(n, p).
pub fn random_er_clique_complex(n: u32, p: f64, seed: u64) -> Result<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Complex::Clique(CliqueComplex::from_edges(n, &edges)?))
}

/// General complex generated by random facets; downward closure makes the
/// result a valid complex. Facet sizes are drawn from `2..=max_facet_size`.
pub fn random_general_complex(
    n: u32,
    facet_count: usize,
    max_facet_size: usize,
    seed: u64,
) -> Result<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_size = max_facet_size.min(n as usize).max(2);
    let mut facets = Vec::with_capacity(facet_count);
    for _ in 0..facet_count {
        let size = rng.gen_range(2..=max_size);
        let mut verts: Vec<u32> = (1..=n).collect();
        // Partial Fisher-Yates: the first `size` entries form the facet.
        for i in 0..size {
            let j = rng.gen_range(i..verts.len());
            verts.swap(i, j);
        }
        verts.truncate(size);
        facets.push(Face::new(verts).expect("distinct vertices"));
    }
    Ok(Complex::General(GeneralComplex::from_facets(n, facets)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::format_complex;

    #[test]
    fn er_generation_is_deterministic() {
        let a = random_er_clique_complex(8, 0.5, 42).unwrap();
        let b = random_er_clique_complex(8, 0.5, 42).unwrap();
        assert_eq!(format_complex(&a), format_complex(&b));
        let c = random_er_clique_complex(8, 0.5, 43).unwrap();
        assert_ne!(format_complex(&a), format_complex(&c));
    }

    #[test]
    fn er_edge_probability_is_plausible() {
        // 28 candidate edges at p = 0.5; over 200 seeds the mean count
        // should be close to 14.
        let mut total = 0usize;
        for seed in 0..200 {
            if let Complex::Clique(g) = random_er_clique_complex(8, 0.5, seed).unwrap() {
                total += g.edges().len();
            }
        }
        let mean = total as f64 / 200.0;
        assert!((mean - 14.0).abs() < 1.0, "mean edges {mean}");
    }

    #[test]
    fn random_general_complex_is_downward_closed() {
        for seed in 0..10 {
            let c = random_general_complex(7, 5, 4, seed).unwrap();
            let dim = c.dimension().unwrap();
            for k in 1..=dim {
                for f in c.k_faces(k).iter() {
                    for sub in f.boundary() {
                        assert!(c.contains(&sub).unwrap());
                    }
                }
            }
        }
    }
}
