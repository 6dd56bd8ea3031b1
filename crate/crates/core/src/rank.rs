//! Exact integer matrix rank by Bareiss fraction-free elimination.

use num_bigint::BigInt;
use num_traits::Zero;

/// Rank of an integer matrix, row-major `data` of shape `nrows x ncols`.
///
/// Runs the fraction-free elimination in `i128` first and falls back to
/// big integers if any intermediate product overflows.
pub fn integer_rank(data: &[i64], nrows: usize, ncols: usize) -> usize {
    assert_eq!(data.len(), nrows * ncols);
    match rank_i128(data, nrows, ncols) {
        Some(r) => r,
        None => rank_bigint(data, nrows, ncols),
    }
}

fn rank_i128(data: &[i64], nrows: usize, ncols: usize) -> Option<usize> {
    let mut m: Vec<i128> = data.iter().map(|&x| x as i128).collect();
    let mut rank = 0usize;
    let mut prev_pivot: i128 = 1;
    let mut row = 0usize;
    for col in 0..ncols {
        // Find a pivot at or below `row`.
        let pivot_row = (row..nrows).find(|&r| m[r * ncols + col] != 0);
        let Some(pr) = pivot_row else { continue };
        if pr != row {
            for c in 0..ncols {
                m.swap(row * ncols + c, pr * ncols + c);
            }
        }
        let pivot = m[row * ncols + col];
        for r in row + 1..nrows {
            let lead = m[r * ncols + col];
            for c in col..ncols {
                let a = pivot.checked_mul(m[r * ncols + c])?;
                let b = lead.checked_mul(m[row * ncols + c])?;
                let num = a.checked_sub(b)?;
                debug_assert_eq!(num % prev_pivot, 0);
                m[r * ncols + c] = num / prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    Some(rank)
}

fn rank_bigint(data: &[i64], nrows: usize, ncols: usize) -> usize {
    let mut m: Vec<BigInt> = data.iter().map(|&x| BigInt::from(x)).collect();
    let mut rank = 0usize;
    let mut prev_pivot = BigInt::from(1);
    let mut row = 0usize;
    for col in 0..ncols {
        let pivot_row = (row..nrows).find(|&r| !m[r * ncols + col].is_zero());
        let Some(pr) = pivot_row else { continue };
        if pr != row {
            for c in 0..ncols {
                m.swap(row * ncols + c, pr * ncols + c);
            }
        }
        let pivot = m[row * ncols + col].clone();
        for r in row + 1..nrows {
            let lead = m[r * ncols + col].clone();
            for c in col..ncols {
                let num = &pivot * &m[r * ncols + c] - &lead * &m[row * ncols + c];
                debug_assert!((&num % &prev_pivot).is_zero());
                m[r * ncols + c] = num / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}
