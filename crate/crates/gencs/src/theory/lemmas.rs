use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Rng;
use crate::theory::stats::{ks_critical_value, ks_two_sample, wilson_half_width};

/// Fixed chunk count for Monte-Carlo parallelism. Each chunk draws from its
/// own rng stream, so the aggregate is identical for any thread count.
const CHUNKS: u64 = 64;

/// Which chi-squared tail to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tail {
    Upper,
    Lower,
}

/// Outcome of one Monte-Carlo check of a closed-form tail bound.
#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloCheck {
    pub empirical: f64,
    pub bound: f64,
    /// 3-sigma Wilson half-width of the empirical frequency.
    pub half_width: f64,
    pub events: u64,
    pub trials: u64,
    /// `empirical <= bound + half_width`
    pub pass: bool,
}

fn run_counting_trials(trials: u64, rng: &Rng, trial: impl Fn(&mut Rng) -> bool + Sync) -> u64 {
    let per_chunk = trials / CHUNKS;
    let remainder = trials % CHUNKS;
    (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut r = rng.child(chunk);
            let count = per_chunk + if chunk < remainder { 1 } else { 0 };
            let mut events = 0u64;
            for _ in 0..count {
                if trial(&mut r) {
                    events += 1;
                }
            }
            events
        })
        .sum()
}

fn finish_check(events: u64, trials: u64, bound: f64) -> MonteCarloCheck {
    let empirical = events as f64 / trials as f64;
    let half_width = wilson_half_width(events, trials, 3.0);
    MonteCarloCheck {
        empirical,
        bound,
        half_width,
        events,
        trials,
        pass: empirical <= bound + half_width,
    }
}

/// Chi-squared concentration: compares the empirical frequency of
/// `Σ Uᵢ² > m(1+τ)` (upper tail) or `Σ Uᵢ² < m(1−τ)` (lower tail) for
/// standard normal Uᵢ against the exponential bound
/// `e^{-(m/2)(τ - ln(1+τ))}` resp. `e^{(m/2)(τ + ln(1-τ))}`.
pub fn verify_lemma1(m: usize, tau: f64, tail: Tail, trials: u64, rng: &Rng) -> Result<MonteCarloCheck> {
    if m == 0 || trials == 0 {
        return Err(Error::Parameter {
            name: "m/trials",
            reason: "must be >= 1".into(),
        });
    }
    let bound = match tail {
        Tail::Upper => {
            if !(tau >= 0.0 && tau.is_finite()) {
                return Err(Error::Parameter {
                    name: "tau",
                    reason: format!("upper tail needs tau >= 0, got {tau}"),
                });
            }
            (-(m as f64 / 2.0) * (tau - (1.0 + tau).ln())).exp()
        }
        Tail::Lower => {
            if !(tau > 0.0 && tau < 1.0) {
                return Err(Error::Parameter {
                    name: "tau",
                    reason: format!("lower tail needs tau in (0,1), got {tau}"),
                });
            }
            ((m as f64 / 2.0) * (tau + (1.0 - tau).ln())).exp()
        }
    };

    let mf = m as f64;
    let events = run_counting_trials(trials, rng, move |r| {
        let mut sum = 0.0;
        for _ in 0..m {
            let u = r.normal();
            sum += u * u;
        }
        match tail {
            Tail::Upper => sum > mf * (1.0 + tau),
            Tail::Lower => sum < mf * (1.0 - tau),
        }
    });
    Ok(finish_check(events, trials, bound))
}

/// Gram de-correlation bound: for unit vectors u, v and a matrix A with
/// i.i.d. standard normal entries, the event
/// `⟨u,v⟩ − (1/m)⟨Au,Av⟩ ≥ 0.45` has probability at most `2^{-0.05 m}`.
/// Each trial samples u, v uniformly on the sphere and a fresh A.
pub fn verify_lemma2(n: usize, m: usize, trials: u64, rng: &Rng) -> Result<MonteCarloCheck> {
    if n == 0 || m == 0 || trials == 0 {
        return Err(Error::Parameter {
            name: "n/m/trials",
            reason: "must be >= 1".into(),
        });
    }
    let bound = 2.0f64.powf(-0.05 * m as f64);

    let events = run_counting_trials(trials, rng, move |r| {
        let u = unit_sphere(r, n);
        let v = unit_sphere(r, n);
        let alpha = crate::numerics::dot(&u, &v);
        // stream A row by row; only Au and Av are needed
        let mut gram = 0.0;
        for _ in 0..m {
            let mut au = 0.0;
            let mut av = 0.0;
            for j in 0..n {
                let a = r.normal();
                au += a * u[j];
                av += a * v[j];
            }
            gram += au * av;
        }
        alpha - gram / m as f64 >= 0.45
    });
    Ok(finish_check(events, trials, bound))
}

fn unit_sphere(rng: &mut Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let nv = crate::numerics::norm(&v);
        if nv > 0.0 {
            return v.iter().map(|x| x / nv).collect();
        }
    }
}

/// Outcome of the distributional check of `⟨u,v⟩ ~ ‖u‖·G`.
#[derive(Debug, Clone, Serialize)]
pub struct KsCheck {
    pub ks_statistic: f64,
    pub critical_value: f64,
    pub trials: u64,
    /// `ks_statistic < critical_value` at the 1% level
    pub pass: bool,
}

/// Inner-product distribution: for u, v with i.i.d. standard normal entries,
/// `⟨u,v⟩` is distributed as `‖u‖·G` with G standard normal independent of
/// `‖u‖`. Verified by a two-sample Kolmogorov–Smirnov test.
pub fn verify_lemma3(n: usize, trials: u64, rng: &Rng) -> Result<KsCheck> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            reason: "must be >= 1".into(),
        });
    }
    if trials < 1000 {
        return Err(Error::Parameter {
            name: "trials",
            reason: format!("needs at least 1000 trials for the KS critical value, got {trials}"),
        });
    }

    let per_chunk = trials / CHUNKS;
    let remainder = trials % CHUNKS;
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut r = rng.child(chunk);
            let count = (per_chunk + if chunk < remainder { 1 } else { 0 }) as usize;
            let mut inner = Vec::with_capacity(count);
            let mut scaled = Vec::with_capacity(count);
            for _ in 0..count {
                let mut ip = 0.0;
                for _ in 0..n {
                    ip += r.normal() * r.normal();
                }
                inner.push(ip);
                let mut norm_sq = 0.0;
                for _ in 0..n {
                    let u = r.normal();
                    norm_sq += u * u;
                }
                scaled.push(norm_sq.sqrt() * r.normal());
            }
            (inner, scaled)
        })
        .collect();

    let mut inner = Vec::with_capacity(trials as usize);
    let mut scaled = Vec::with_capacity(trials as usize);
    for (a, b) in pairs {
        inner.extend(a);
        scaled.extend(b);
    }

    let ks_statistic = ks_two_sample(&inner, &scaled);
    let critical_value = ks_critical_value(trials, 0.01);
    Ok(KsCheck {
        ks_statistic,
        critical_value,
        trials,
        pass: ks_statistic < critical_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma1_upper_bound_value_and_pass() {
        let rng = Rng::new(100, 0);
        let check = verify_lemma1(100, 1.0, Tail::Upper, 20_000, &rng).unwrap();
        // e^{-50(1 - ln 2)} ≈ 2.17e-7
        assert!((check.bound - (-50.0 * (1.0 - 2.0f64.ln())).exp()).abs() < 1e-18);
        assert!(check.bound > 2.1e-7 && check.bound < 2.2e-7);
        assert!(check.pass, "{check:?}");
    }

    #[test]
    fn lemma1_tau_zero_is_trivially_satisfied() {
        let rng = Rng::new(101, 0);
        let check = verify_lemma1(50, 0.0, Tail::Upper, 2_000, &rng).unwrap();
        assert_eq!(check.bound, 1.0);
        assert!(check.pass);
    }

    #[test]
    fn lemma1_lower_tail() {
        let rng = Rng::new(102, 0);
        let check = verify_lemma1(100, 0.5, Tail::Lower, 20_000, &rng).unwrap();
        // e^{50(0.5 + ln 0.5)} ≈ e^{-9.66}
        let expect = (50.0 * (0.5 + 0.5f64.ln())).exp();
        assert!((check.bound - expect).abs() < 1e-12);
        assert!(check.bound < 7e-5 && check.bound > 6e-5);
        assert!(check.pass, "{check:?}");
    }

    #[test]
    fn lemma1_rejects_bad_tau() {
        let rng = Rng::new(0, 0);
        assert!(verify_lemma1(10, -0.5, Tail::Upper, 100, &rng).is_err());
        assert!(verify_lemma1(10, 1.5, Tail::Lower, 100, &rng).is_err());
    }

    #[test]
    fn lemma1_is_deterministic_across_runs() {
        let rng = Rng::new(7, 3);
        let a = verify_lemma1(20, 0.2, Tail::Upper, 10_000, &rng).unwrap();
        let b = verify_lemma1(20, 0.2, Tail::Upper, 10_000, &rng).unwrap();
        assert_eq!(a.events, b.events);
    }

    #[test]
    fn lemma2_bound_values() {
        let rng = Rng::new(200, 0);
        let check = verify_lemma2(10, 100, 5_000, &rng).unwrap();
        assert!((check.bound - 0.03125).abs() < 1e-15);
        assert!(check.pass, "{check:?}");
    }

    #[test]
    fn lemma2_aligned_vectors_reduce_to_a_lower_chi_square_tail() {
        // u = v: event is 1 - ‖Au‖²/m ≥ 0.45, still within the bound
        let m = 100usize;
        let bound = 2.0f64.powf(-0.05 * m as f64);
        let mut rng = Rng::new(201, 0);
        let mut events = 0u64;
        let trials = 5_000u64;
        for _ in 0..trials {
            let u = unit_sphere(&mut rng, 10);
            let mut norm_sq = 0.0;
            for _ in 0..m {
                let mut au = 0.0;
                for uj in &u {
                    au += rng.normal() * uj;
                }
                norm_sq += au * au;
            }
            if 1.0 - norm_sq / m as f64 >= 0.45 {
                events += 1;
            }
        }
        let empirical = events as f64 / trials as f64;
        let hw = wilson_half_width(events, trials, 3.0);
        assert!(empirical <= bound + hw, "empirical {empirical}, bound {bound}");
    }

    #[test]
    fn lemma3_degenerate_and_moderate_dimension() {
        let rng = Rng::new(300, 0);
        let one = verify_lemma3(1, 5_000, &rng).unwrap();
        assert!(one.pass, "{one:?}");

        let fifty = verify_lemma3(50, 10_000, &rng).unwrap();
        assert!(fifty.critical_value < 0.0231 && fifty.critical_value > 0.0230);
        assert!(fifty.pass, "{fifty:?}");
    }

    #[test]
    fn lemma3_requires_enough_trials() {
        let rng = Rng::new(0, 0);
        assert!(verify_lemma3(5, 999, &rng).is_err());
    }

    #[test]
    fn inner_product_is_sign_symmetric() {
        let n = 10usize;
        let trials = 10_000u64;
        let mut rng = Rng::new(301, 0);
        let mut sum = 0.0;
        for _ in 0..trials {
            let mut ip = 0.0;
            for _ in 0..n {
                ip += rng.normal() * rng.normal();
            }
            sum += ip;
        }
        let mean = sum / trials as f64;
        // Var⟨u,v⟩ = n, so stderr = √(n/trials)
        let stderr = (n as f64 / trials as f64).sqrt();
        assert!(mean.abs() <= 3.0 * stderr, "mean {mean}, stderr {stderr}");
    }
}
