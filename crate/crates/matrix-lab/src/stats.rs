use freeconv_core::MomentSequence;
use serde::Serialize;

use crate::error::{LabError, Result};

/// `m_k = (1/n) Σ λ_i^k` for `k = 1..=order`.
pub fn empirical_moments(eigenvalues: &[f64], order: usize) -> MomentSequence<f64> {
    let n = eigenvalues.len().max(1) as f64;
    let mut sums = vec![0.0; order];
    for &x in eigenvalues {
        let mut power = 1.0;
        for s in sums.iter_mut() {
            power *= x;
            *s += power;
        }
    }
    MomentSequence::new(sums.into_iter().map(|s| s / n).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: usize,
    pub density: f64,
}

/// Equal-width bins on `range`, the last one closed. `density` is
/// `count / (len · width)` with `len` the number of values supplied, so
/// values outside the range lower the total mass.
pub fn histogram(values: &[f64], bins: usize, range: (f64, f64)) -> Result<Vec<HistogramBin>> {
    let (lo, hi) = range;
    if bins == 0 {
        return Err(LabError::InvalidParameter("histogram needs at least one bin".into()));
    }
    if !lo.is_finite() || !hi.is_finite() || hi <= lo {
        return Err(LabError::EmptyRange(lo, hi));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in values {
        if x < lo || x > hi {
            continue;
        }
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let total = values.len().max(1) as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            bin_left: lo + i as f64 * width,
            bin_right: if i + 1 == bins { hi } else { lo + (i + 1) as f64 * width },
            count,
            density: count as f64 / (total * width),
        })
        .collect())
}

/// `[min, max]` of the values; errors when they do not span an interval.
pub fn value_range(values: &[f64]) -> Result<(f64, f64)> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        Ok((lo, hi))
    } else {
        Err(LabError::EmptyRange(lo, hi))
    }
}

/// Two-sample Kolmogorov distance `sup_x |F_a(x) - F_b(x)|`.
pub fn kolmogorov_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() { 0.0 } else { 1.0 };
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `|a - b| / |b|`, or `|a - b|` when `b` vanishes.
pub fn relative_error(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}

pub fn relative_errors(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| relative_error(*x, *y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_examples() {
        assert_eq!(empirical_moments(&[1.0, 1.0], 3).into_vec(), vec![1.0, 1.0, 1.0]);
        assert_eq!(empirical_moments(&[0.0, 2.0], 2).into_vec(), vec![1.0, 2.0]);
    }

    #[test]
    fn histogram_examples() {
        let h = histogram(&[1.0, 1.0], 1, (0.0, 2.0)).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].count, 2);
        assert!((h[0].density - 0.5).abs() < 1e-15);

        let values: Vec<f64> = (0..=100).map(|i| i as f64 / 10.0).collect();
        let h = histogram(&values, 7, (0.0, 10.0)).unwrap();
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), values.len());
        assert_eq!(h.last().unwrap().bin_right, 10.0);
        let mass: f64 = h.iter().map(|b| b.density * (b.bin_right - b.bin_left)).sum();
        assert!((mass - 1.0).abs() < 1e-12);

        assert!(matches!(histogram(&[1.0], 3, (1.0, 1.0)), Err(LabError::EmptyRange(..))));
        assert!(histogram(&[1.0], 0, (0.0, 1.0)).is_err());
        assert!(matches!(value_range(&[2.0, 2.0]), Err(LabError::EmptyRange(..))));
    }

    #[test]
    fn kolmogorov_examples() {
        assert_eq!(kolmogorov_distance(&[1.0, 2.0], &[2.0, 1.0]), 0.0);
        assert_eq!(kolmogorov_distance(&[0.0, 0.0], &[1.0, 1.0]), 1.0);
        assert!((kolmogorov_distance(&[0.0, 1.0], &[1.0, 1.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn relative_error_examples() {
        assert!((relative_error(1.1, 1.0) - 0.1).abs() < 1e-12);
        assert_eq!(relative_error(0.5, 0.0), 0.5);
    }
}
