//! Shared statistical helpers for the integration suites.

/// One-sample Kolmogorov-Smirnov statistic of `sample` against the
/// continuous CDF `cdf`. Sorts the sample in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &mut [f64], cdf: F) -> f64 {
    assert!(!sample.is_empty(), "KS statistic of an empty sample");
    sample.sort_unstable_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        let below = f - i as f64 / n;
        let above = (i + 1) as f64 / n - f;
        d = d.max(below).max(above);
    }
    d
}

/// Asymptotic 1%-level critical value for the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Asserts the KS test passes at the 1% level, with a readable message.
#[allow(dead_code)]
pub fn assert_ks_1pct<F: Fn(f64) -> f64>(name: &str, sample: &mut [f64], cdf: F) {
    let n = sample.len();
    let d = ks_statistic(sample, cdf);
    let crit = ks_critical_1pct(n);
    assert!(
        d < crit,
        "{name}: KS statistic {d:.5} exceeds the 1% critical value {crit:.5} at n={n}"
    );
}

/// Pearson correlation coefficient of two equal-length samples.
#[allow(dead_code)]
pub fn pearson_correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
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
    sxy / (sxx * syy).sqrt()
}

/// Least-squares slope of y on x.
#[allow(dead_code)]
pub fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
