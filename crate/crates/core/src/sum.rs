//! Pairwise (cascade) summation.
//!
//! The summation tree depends only on the slice length: the slice is halved
//! at `len / 2` until at most [`BLOCK`] elements remain, which are added left
//! to right. Large halves are evaluated with `rayon::join`, so the result is
//! bitwise identical for any thread count.

const BLOCK: usize = 8;
const PARALLEL_MIN: usize = 1 << 15;

pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= BLOCK {
        return values.iter().fold(0.0, |acc, &v| acc + v);
    }
    let (left, right) = values.split_at(values.len() / 2);
    let (l, r) = if values.len() >= PARALLEL_MIN {
        rayon::join(|| pairwise_sum(left), || pairwise_sum(right))
    } else {
        (pairwise_sum(left), pairwise_sum(right))
    };
    l + r
}
