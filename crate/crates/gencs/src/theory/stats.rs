/// Half-width of the Wilson score interval for `events` successes in
/// `trials` Bernoulli draws at `z` standard deviations.
///
/// Used to accept Monte-Carlo frequencies against closed-form tail bounds:
/// the bounds are probabilistic and the trial count is finite, so a raw
/// `empirical <= bound` comparison would flag sampling noise as failure.
pub fn wilson_half_width(events: u64, trials: u64, z: f64) -> f64 {
    assert!(trials > 0);
    let n = trials as f64;
    let p = events as f64 / n;
    let z2 = z * z;
    z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|x, y| x.total_cmp(y));
    sb.sort_by(|x, y| x.total_cmp(y));

    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < sa.len() && j < sb.len() {
        // consume every copy of the smaller value from both samples so that
        // ties never produce a spurious gap
        let v = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] == v {
            i += 1;
        }
        while j < sb.len() && sb[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Critical value of the two-sample KS statistic for equal sample sizes
/// `trials` at significance `alpha` (asymptotic formula).
pub fn ks_critical_value(trials: u64, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * (2.0 / trials as f64).sqrt()
}
