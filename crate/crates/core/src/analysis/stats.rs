//! Nonparametric statistics: rank correlation and the Mann-Whitney U test.

use super::AnalysisError;

/// Average ranks (1-based) with ties sharing their mean rank. Values must
/// be finite.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean_rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

fn check_finite(xs: &[f64]) -> Result<(), AnalysisError> {
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFinite);
    }
    Ok(())
}

fn is_constant(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// Pearson product-moment correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 3 {
        return Err(AnalysisError::TooFewPoints {
            need: 3,
            have: xs.len(),
        });
    }
    check_finite(xs)?;
    check_finite(ys)?;
    if is_constant(xs) || is_constant(ys) {
        return Err(AnalysisError::ConstantInput);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation with average-rank tie handling. A constant
/// vector has no rank ordering, so the coefficient is undefined and
/// reported as an error rather than 0.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 3 {
        return Err(AnalysisError::TooFewPoints {
            need: 3,
            have: xs.len(),
        });
    }
    check_finite(xs)?;
    check_finite(ys)?;
    if is_constant(xs) || is_constant(ys) {
        return Err(AnalysisError::ConstantInput);
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Standard normal CDF via an Abramowitz-Stegun erf approximation
/// (absolute error < 1.5e-7).
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// Exact enumeration is used when the smaller sample has at most this
/// many observations (and the combination count stays tractable).
pub const EXACT_MAX_MIN_SIZE: usize = 8;
const EXACT_MAX_COMBINATIONS: f64 = 2_000_000.0;

fn combinations(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Mann-Whitney U test. Returns `(U, p)` where `U` is the statistic of the
/// first sample and `p` is two-sided. Small samples get an exact
/// permutation p-value; larger ones use the normal approximation with tie
/// correction and continuity correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<(f64, f64), AnalysisError> {
    if a.is_empty() || b.is_empty() {
        return Err(AnalysisError::Empty);
    }
    check_finite(a)?;
    check_finite(b)?;
    let n = a.len();
    let m = b.len();
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..n].iter().sum();
    let u_a = rank_sum_a - (n * (n + 1)) as f64 / 2.0;

    let min_size = n.min(m);
    let p = if min_size <= EXACT_MAX_MIN_SIZE
        && combinations(n + m, min_size) <= EXACT_MAX_COMBINATIONS
    {
        exact_two_sided_p(&ranks, n, u_a)
    } else {
        normal_two_sided_p(&pooled, n, m, u_a)
    };
    Ok((u_a, p.min(1.0)))
}

// Two-sided exact p over all C(n+m, n) assignments of pooled ranks to the
// first sample: 2 * min(P(U <= u_obs), P(U >= u_obs)), capped at 1.
fn exact_two_sided_p(ranks: &[f64], n: usize, u_obs: f64) -> f64 {
    let total = ranks.len();
    // enumerate the smaller side; U_b = nm - U_a keeps the tail symmetric
    let m = total - n;
    let (k, observed) = if n <= m {
        (n, u_obs)
    } else {
        (m, (n * m) as f64 - u_obs)
    };
    let offset = (k * (k + 1)) as f64 / 2.0;
    let mut le = 0u64;
    let mut ge = 0u64;
    let mut count = 0u64;
    let eps = 1e-9;
    enumerate(ranks, 0, k, 0.0, &mut |rank_sum| {
        let u = rank_sum - offset;
        count += 1;
        if u <= observed + eps {
            le += 1;
        }
        if u >= observed - eps {
            ge += 1;
        }
    });
    let p_le = le as f64 / count as f64;
    let p_ge = ge as f64 / count as f64;
    (2.0 * p_le.min(p_ge)).min(1.0)
}

fn enumerate(ranks: &[f64], start: usize, remaining: usize, sum: f64, visit: &mut impl FnMut(f64)) {
    if remaining == 0 {
        visit(sum);
        return;
    }
    if ranks.len() - start < remaining {
        return;
    }
    for i in start..=ranks.len() - remaining {
        enumerate(ranks, i + 1, remaining - 1, sum + ranks[i], visit);
    }
}

fn normal_two_sided_p(pooled: &[f64], n: usize, m: usize, u: f64) -> f64 {
    let nn = n as f64;
    let mm = m as f64;
    let total = (n + m) as f64;
    let mean = nn * mm / 2.0;

    // tie correction: sum of t^3 - t over tie groups
    let mut tie_sum = 0.0;
    let mut sorted: Vec<f64> = pooled.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_sum += t * t * t - t;
        i = j + 1;
    }
    let variance = nn * mm / 12.0 * ((total + 1.0) - tie_sum / (total * (total - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let diff = u - mean;
    let correction = 0.5 * diff.signum();
    let z = (diff - correction) / variance.sqrt();
    2.0 * normal_cdf(-z.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-9;

    #[test]
    fn ranks_with_ties() {
        let r = average_ranks(&[1.0, 2.0, 2.0, 4.0, 5.0]);
        assert_eq!(r, vec![1.0, 2.5, 2.5, 4.0, 5.0]);
    }

    #[test]
    fn spearman_identity_and_reverse() {
        let xs = [3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.0];
        assert!((spearman(&xs, &xs).unwrap() - 1.0).abs() < EPS);
        let neg: Vec<f64> = xs.iter().map(|v| -v).collect();
        assert!((spearman(&xs, &neg).unwrap() + 1.0).abs() < EPS);
    }

    #[test]
    fn spearman_ten_pair_fixture() {
        // hand-ranked: xs ranks (ties averaged) = [2, 1, 3.5, 3.5, 5, 6, 7, 8.5, 8.5, 10]
        //              ys ranks                 = [1, 3, 2, 5, 4, 7, 6, 8, 10, 9]
        // centered products: sxy = 74, sxx = 81.5, syy = 82.5
        let xs = [12.0, 10.0, 15.0, 15.0, 18.0, 20.0, 22.0, 25.0, 25.0, 30.0];
        let ys = [1.0, 3.0, 2.0, 6.0, 4.0, 9.0, 7.0, 10.0, 13.0, 12.0];
        let rho = spearman(&xs, &ys).unwrap();
        let expected = 74.0 / (81.5_f64 * 82.5).sqrt();
        assert!(
            (rho - expected).abs() < EPS,
            "rho = {rho}, expected = {expected}"
        );
    }

    #[test]
    fn spearman_monotone_transform_invariance() {
        let xs = [0.5, 2.0, 3.0, 7.0, 11.0, 13.0];
        let ys = [9.0, 4.0, 6.0, 2.0, 8.0, 1.0];
        let base = spearman(&xs, &ys).unwrap();
        let squashed: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
        assert!((spearman(&squashed, &ys).unwrap() - base).abs() < EPS);
        let stretched: Vec<f64> = ys.iter().map(|v| v * v * v + 5.0).collect();
        assert!((spearman(&xs, &stretched).unwrap() - base).abs() < EPS);
    }

    #[test]
    fn spearman_constant_is_undefined() {
        let xs = [1.0, 1.0, 1.0, 1.0];
        let ys = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(spearman(&xs, &ys), Err(AnalysisError::ConstantInput));
    }

    #[test]
    fn mwu_separated_samples_exact() {
        let (u, p) = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(u, 0.0);
        assert!((p - 0.1).abs() < EPS, "p = {p}");
    }

    #[test]
    fn mwu_identical_multisets() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let (_, p) = mann_whitney_u(&a, &a).unwrap();
        assert!(p >= 0.99, "p = {p}");
    }

    #[test]
    fn mwu_swap_symmetry() {
        let a = [1.0, 5.0, 3.0, 8.0, 2.0];
        let b = [4.0, 9.0, 2.0, 7.0];
        let (u_ab, p_ab) = mann_whitney_u(&a, &b).unwrap();
        let (u_ba, p_ba) = mann_whitney_u(&b, &a).unwrap();
        assert!((u_ab + u_ba - (a.len() * b.len()) as f64).abs() < EPS);
        assert!((p_ab - p_ba).abs() < EPS);
    }

    #[test]
    fn mwu_empty_sample_is_an_error() {
        assert_eq!(mann_whitney_u(&[], &[1.0]), Err(AnalysisError::Empty));
    }

    #[test]
    fn mwu_large_samples_take_normal_path() {
        let a: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..200).map(|i| (i + 150) as f64).collect();
        let (_, p) = mann_whitney_u(&a, &b).unwrap();
        assert!(p < 0.001);
        let c: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let (_, p_same) = mann_whitney_u(&a, &c).unwrap();
        assert!(p_same > 0.9);
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-7);
        assert!((normal_cdf(1.959964) - 0.975).abs() < 1e-5);
        assert!((normal_cdf(-1.959964) - 0.025).abs() < 1e-5);
    }
}
