//! Ranks, Kendall's Tₙ, Spearman's Sₙ and the degree-3 U-statistic S̃ₙ.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model_core::PairedSample;
use crate::scalar::Real;

/// Ranks 1..=n of distinct values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector {
    ranks: Vec<usize>,
}

impl RankVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.ranks
    }
}

fn sorted_order<R: Real>(values: &[R], column: &str) -> Result<Vec<usize>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Tie {
            column: column.to_string(),
        });
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(Ordering::Equal));
    if idx.windows(2).any(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::Tie {
            column: column.to_string(),
        });
    }
    Ok(idx)
}

/// rankᵢ = 1 + #{j : valueⱼ < valueᵢ}.
pub fn ranks<R: Real>(values: &[R]) -> Result<RankVector> {
    ranks_in(values, "values")
}

fn ranks_in<R: Real>(values: &[R], column: &str) -> Result<RankVector> {
    let order = sorted_order(values, column)?;
    let mut r = vec![0; values.len()];
    for (k, &i) in order.iter().enumerate() {
        r[i] = k + 1;
    }
    Ok(RankVector { ranks: r })
}

fn require(n: usize, min: usize, what: &'static str) -> Result<()> {
    if n < min {
        Err(Error::SampleSize { what, min, got: n })
    } else {
        Ok(())
    }
}

/// Numbers of concordant and discordant pairs.
pub fn concordance_counts<R: Real>(sample: &PairedSample<R>) -> Result<(u64, u64)> {
    let pairs = sample.pairs();
    let xs: Vec<R> = pairs.iter().map(|p| p.0).collect();
    let order = sorted_order(&xs, "x")?;
    let mut ys: Vec<R> = order.iter().map(|&i| pairs[i].1).collect();
    if ys.iter().any(|v| !v.is_finite()) {
        return Err(Error::Tie { column: "y".into() });
    }
    let mut buf = ys.clone();
    let discordant = merge_count(&mut ys, &mut buf)?;
    let n = pairs.len() as u64;
    let total = n * n.saturating_sub(1) / 2;
    Ok((total - discordant, discordant))
}

/// Sorts `v` and returns the number of inversions; errors on equal entries.
fn merge_count<R: Real>(v: &mut [R], buf: &mut [R]) -> Result<u64> {
    let n = v.len();
    if n < 2 {
        return Ok(0);
    }
    let mid = n / 2;
    let (left, right) = v.split_at_mut(mid);
    let (bl, br) = buf.split_at_mut(mid);
    let mut inv = merge_count(left, bl)? + merge_count(right, br)?;
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if left[i] == right[j] {
            return Err(Error::Tie { column: "y".into() });
        }
        if left[i] < right[j] {
            buf[k] = left[i];
            i += 1;
        } else {
            buf[k] = right[j];
            inv += (left.len() - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + left.len() - i].copy_from_slice(&left[i..]);
    k += left.len() - i;
    buf[k..k + right.len() - j].copy_from_slice(&right[j..]);
    v.copy_from_slice(&buf[..n]);
    Ok(inv)
}

/// Kendall's Tₙ = (C − D)/binom(n, 2), in O(n log n).
pub fn kendall_t<R: Real>(sample: &PairedSample<R>) -> Result<R> {
    require(sample.len(), 2, "Kendall's T")?;
    let (c, d) = concordance_counts(sample)?;
    let n = sample.len() as u64;
    Ok((R::lit(c as f64) - R::lit(d as f64)) / R::lit((n * (n - 1) / 2) as f64))
}

fn rank_cross_sum<R: Real>(sample: &PairedSample<R>) -> Result<i128> {
    let xs: Vec<R> = sample.pairs().iter().map(|p| p.0).collect();
    let ys: Vec<R> = sample.pairs().iter().map(|p| p.1).collect();
    let rx = ranks_in(&xs, "x")?;
    let ry = ranks_in(&ys, "y")?;
    Ok(rx.ranks.iter().zip(&ry.ranks).map(|(&a, &b)| (a * b) as i128).sum())
}

/// Spearman's Sₙ = 12/(n(n²−1))·Σ Rᵢ(X)Rᵢ(Y) − 3(n+1)/(n−1), with the
/// numerator formed exactly in integers.
pub fn spearman_s<R: Real>(sample: &PairedSample<R>) -> Result<R> {
    let n = sample.len();
    require(n, 3, "Spearman's S")?;
    let sum = rank_cross_sum(sample)?;
    let n = n as i128;
    let num = 12 * sum - 3 * n * (n + 1) * (n + 1);
    let den = n * (n * n - 1);
    Ok(R::lit(num as f64) / R::lit(den as f64))
}

/// S̃ₙ = binom(n,3)⁻¹ Σ_{i<j<k} h₃(Pᵢ,Pⱼ,Pₖ) through
/// Σ Rᵢ(X)Rᵢ(Y) = n² + Kₙ + binom(n,3)·S̃ₙ, Kₙ the concordant-pair count.
pub fn spearman_u_tilde<R: Real>(sample: &PairedSample<R>) -> Result<R> {
    let n = sample.len();
    require(n, 3, "S-tilde")?;
    let sum = rank_cross_sum(sample)?;
    let (k, _) = concordance_counts(sample)?;
    let n = n as i128;
    let num = sum - n * n - k as i128;
    let triples = n * (n - 1) * (n - 2) / 6;
    Ok(R::lit(num as f64) / R::lit(triples as f64))
}

/// sign((x_p − x_q)(y_p − y_q)).
pub fn h2_kernel<R: Real>(p: (R, R), q: (R, R)) -> Result<i8> {
    if p.0 == q.0 {
        return Err(Error::Tie { column: "x".into() });
    }
    if p.1 == q.1 {
        return Err(Error::Tie { column: "y".into() });
    }
    Ok(if (p.0 < q.0) == (p.1 < q.1) { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(p: &[(f64, f64)]) -> PairedSample<f64> {
        PairedSample::from_pairs(p.to_vec()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ranks(&[10.0f64]).unwrap().into_vec(), vec![1]);
        assert_eq!(ranks(&[3.0f64, 1.0, 2.0]).unwrap().into_vec(), vec![3, 1, 2]);
        assert!(matches!(ranks(&[1.0f64, 1.0]), Err(Error::Tie { .. })));
    }

    #[test]
    fn four_point_sample() {
        let s = sample(&[(1.0, 2.0), (2.0, 1.0), (3.0, 4.0), (4.0, 3.0)]);
        assert!((kendall_t(&s).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((spearman_s(&s).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn extremes() {
        assert_eq!(kendall_t(&sample(&[(0.0, 0.0), (1.0, 1.0)])).unwrap(), 1.0);
        let id = sample(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        assert_eq!(spearman_s(&id).unwrap(), 1.0);
        assert_eq!(spearman_u_tilde(&id).unwrap(), 2.0);
        let dec: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, -(i as f64))).collect();
        assert_eq!(spearman_s(&sample(&dec)).unwrap(), -1.0);
        assert_eq!(kendall_t(&sample(&dec)).unwrap(), -1.0);
    }

    #[test]
    fn size_errors() {
        assert!(matches!(kendall_t(&sample(&[(0.0, 0.0)])), Err(Error::SampleSize { .. })));
        assert!(matches!(
            spearman_s(&sample(&[(0.0, 0.0), (1.0, 2.0)])),
            Err(Error::SampleSize { .. })
        ));
    }

    #[test]
    fn h2_signs() {
        assert_eq!(h2_kernel((0.0f64, 0.0), (1.0, 1.0)).unwrap(), 1);
        assert_eq!(h2_kernel((0.0f64, 1.0), (1.0, 0.0)).unwrap(), -1);
        assert!(h2_kernel((0.0f64, 1.0), (0.0, 0.0)).is_err());
    }
}
