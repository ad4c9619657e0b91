//! Small statistics helpers shared by the estimators and tests.

/// Binomial standard error `sqrt(p (1 - p) / n)`.
pub fn binomial_stderr(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Two-sided confidence interval for a proportion: normal approximation,
/// falling back to Wilson when fewer than 10 successes or failures.
pub fn proportion_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let p = successes as f64 / n as f64;
    if successes < 10 || n - successes < 10 {
        return wilson_interval(successes, n, z);
    }
    let se = binomial_stderr(p, n);
    ((p - z * se).max(0.0), (p + z * se).min(1.0))
}

/// Kolmogorov–Smirnov distance between two empirical distributions of
/// nonnegative integers.
pub fn ks_distance_counts(a: &[u64], b: &[u64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() { 0.0 } else { 1.0 };
    }
    let max = a.iter().chain(b).copied().max().unwrap_or(0) as usize;
    let hist = |xs: &[u64]| {
        let mut h = vec![0u64; max + 1];
        for &x in xs {
            h[x as usize] += 1;
        }
        h
    };
    let (ha, hb) = (hist(a), hist(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut ca, mut cb, mut worst) = (0u64, 0u64, 0.0f64);
    for k in 0..=max {
        ca += ha[k];
        cb += hb[k];
        worst = worst.max((ca as f64 / na - cb as f64 / nb).abs());
    }
    worst
}

/// Empirical tail `P(X >= k)` for `k = 0..=max`.
pub fn tail_at_least(xs: &[u64]) -> Vec<f64> {
    let max = xs.iter().copied().max().unwrap_or(0) as usize;
    let mut hist = vec![0u64; max + 2];
    for &x in xs {
        hist[x as usize] += 1;
    }
    let n = xs.len().max(1) as f64;
    let mut out = vec![0.0; max + 1];
    let mut acc = 0u64;
    for k in (0..=max).rev() {
        acc += hist[k];
        out[k] = acc as f64 / n;
    }
    out
}

/// Least-squares slope of `y` against `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
