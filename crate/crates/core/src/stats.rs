//! Order statistics. All quantiles use the nearest-rank definition: the
//! p-quantile of `n` sorted values is the element at rank `ceil(p * n)`
//! (1-based), clamped to `[1, n]`.

/// Nearest-rank quantile of already sorted data. Panics on empty input.
pub fn nearest_rank_sorted<T: Copy>(sorted: &[T], p: f64) -> T {
    assert!(!sorted.is_empty(), "quantile of empty data");
    assert!((0.0..=1.0).contains(&p), "quantile level {p} outside [0, 1]");
    let n = sorted.len();
    let rank = (p * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

pub fn nearest_rank<T: Copy + PartialOrd>(values: &[T], p: f64) -> T {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("unordered value in quantile input"));
    nearest_rank_sorted(&sorted, p)
}
