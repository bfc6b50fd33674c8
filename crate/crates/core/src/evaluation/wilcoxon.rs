use statrs::distribution::{ContinuousCDF, Normal};

use crate::{OhitError, Result};

/// Largest number of non-zero differences tested with the exact null
/// distribution.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Two-sided p-value.
    pub p_value: f64,
    /// Sum of ranks of positive differences `a − b`.
    pub w_plus: f64,
    pub w_minus: f64,
    /// Pairs left after dropping zero differences.
    pub n_effective: usize,
    pub exact: bool,
}

/// Midranks (1-based) of `values`, ascending.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mid;
        }
        i = j + 1;
    }
    ranks
}

/// Wilcoxon signed-rank test on paired samples.
///
/// Zero differences are dropped. Up to [`EXACT_LIMIT`] remaining pairs the
/// two-sided p-value comes from the exact null distribution of `W+` over all
/// `2^n` sign assignments (tied magnitudes get midranks); beyond that a
/// normal approximation with tie and continuity correction is used. When
/// every difference is zero the p-value is 1.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(OhitError::Contract(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(OhitError::Contract(
            "non-finite value in paired samples".into(),
        ));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|&d| d != 0.0)
        .collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            p_value: 1.0,
            w_plus: 0.0,
            w_minus: 0.0,
            n_effective: 0,
            exact: true,
        });
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&magnitudes);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;

    let (p_value, exact) = if n <= EXACT_LIMIT {
        (exact_p(&ranks, w_plus), true)
    } else {
        (normal_p(&ranks, w_plus), false)
    };
    Ok(WilcoxonResult {
        p_value,
        w_plus,
        w_minus,
        n_effective: n,
        exact,
    })
}

/// Exact two-sided p-value. Midranks are doubled to integers so the null
/// distribution of `2·W+` is a subset-sum count over the `2^n` sign
/// patterns.
fn exact_p(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut counts = vec![0.0f64; max + 1];
    counts[0] = 1.0;
    for &r in &doubled {
        for s in (r..=max).rev() {
            counts[s] += counts[s - r];
        }
    }
    let observed = (w_plus * 2.0).round() as usize;
    let patterns = 2f64.powi(ranks.len() as i32);
    let lower: f64 = counts[..=observed].iter().sum::<f64>() / patterns;
    let upper: f64 = counts[observed..].iter().sum::<f64>() / patterns;
    (2.0 * lower.min(upper)).min(1.0)
}

fn normal_p(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let dev = w_plus - mean;
    let corrected = (dev.abs() - 0.5).max(0.0);
    let z = corrected / var.sqrt();
    let normal = Normal::standard();
    (2.0 * (1.0 - normal.cdf(z))).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_positive_twelve() {
        let a: Vec<f64> = (1..=12).map(|i| i as f64).collect();
        let b = vec![0.0; 12];
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(r.p_value, 2.0 / 4096.0);
        assert_eq!(r.w_plus, 78.0);
        assert!(r.exact);
    }

    #[test]
    fn smallest_negative_twelve() {
        let mut a: Vec<f64> = (1..=12).map(|i| i as f64).collect();
        a[0] = -1.0;
        let r = wilcoxon_signed_rank(&a, &[0.0; 12]).unwrap();
        assert_eq!(r.w_minus, 1.0);
        assert_eq!(r.p_value, 4.0 / 4096.0);
    }

    #[test]
    fn identical_samples() {
        let a = [0.3, 0.5, 0.9];
        let r = wilcoxon_signed_rank(&a, &a).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.n_effective, 0);
    }

    #[test]
    fn symmetric_and_bounded() {
        let a = [1.0, -2.0, 3.0, 0.5, -0.25, 4.0];
        let b = [0.0; 6];
        let r1 = wilcoxon_signed_rank(&a, &b).unwrap();
        let r2 = wilcoxon_signed_rank(&b, &a).unwrap();
        assert_eq!(r1.p_value, r2.p_value);
        assert!(r1.p_value > 0.0 && r1.p_value <= 1.0);
    }

    #[test]
    fn tied_magnitudes_use_midranks() {
        let a = [1.0, -1.0, 2.0, 2.0];
        let r = wilcoxon_signed_rank(&a, &[0.0; 4]).unwrap();
        // ranks: |1| -> 1.5, |2| -> 3.5
        assert_eq!(r.w_plus, 1.5 + 3.5 + 3.5);
        assert_eq!(r.w_minus, 1.5);
    }

    #[test]
    fn large_sample_uses_normal_approximation() {
        let a: Vec<f64> = (1..=30).map(|i| i as f64).collect();
        let r = wilcoxon_signed_rank(&a, &[0.0; 30]).unwrap();
        assert!(!r.exact);
        assert!(r.p_value < 1e-5);
        let alt: Vec<f64> = (1..=30)
            .map(|i| if i % 2 == 0 { i as f64 } else { -(i as f64) })
            .collect();
        let r = wilcoxon_signed_rank(&alt, &[0.0; 30]).unwrap();
        assert!(r.p_value > 0.5);
    }

    #[test]
    fn length_mismatch() {
        assert!(wilcoxon_signed_rank(&[1.0], &[1.0, 2.0]).is_err());
    }
}
