use serde::Serialize;

use crate::error::{Error, Result};

/// Inputs to the exhaustive-search recovery bound.
///
/// `eta` and `upsilon` are the free parameters of the bound; `delta` is the
/// covering distortion of the generative map, `lipschitz` its Lipschitz
/// constant, and `sigma` the per-component noise level.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Params {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub lipschitz: f64,
    pub delta: f64,
    pub sigma: f64,
    pub eta: f64,
    pub upsilon: f64,
}

impl Theorem1Params {
    fn validate(&self) -> Result<()> {
        let fail = |name: &'static str, reason: String| Err(Error::Parameter { name, reason });
        if self.k == 0 || self.n == 0 || self.m == 0 {
            return fail("k/n/m", "dimensions must be >= 1".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return fail("delta", format!("must lie in (0,1), got {}", self.delta));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return fail("sigma", format!("must be finite and >= 0, got {}", self.sigma));
        }
        if !(self.lipschitz > 0.0 && self.lipschitz.is_finite()) {
            return fail("lipschitz", format!("must be finite and > 0, got {}", self.lipschitz));
        }
        if !(self.eta > 2.0) {
            return fail("eta", format!("must be > 2, got {}", self.eta));
        }
        if !(self.upsilon > 0.0 && self.upsilon < 1.0) {
            return fail("upsilon", format!("must lie in (0,1), got {}", self.upsilon));
        }
        if 0.5 - self.upsilon / 2.0 - 1.0 / self.eta <= 0.0 {
            return fail(
                "eta/upsilon",
                format!(
                    "1/2 - upsilon/2 - 1/eta must be > 0, got {}",
                    0.5 - self.upsilon / 2.0 - 1.0 / self.eta
                ),
            );
        }
        if (self.m as f64) < self.eta * self.k as f64 {
            return fail("m", format!("needs m >= eta*k = {}", self.eta * self.k as f64));
        }
        if self.m > self.n {
            return fail("m", format!("needs m <= n, got m={} > n={}", self.m, self.n));
        }
        Ok(())
    }
}

/// Evaluated recovery bound for exhaustive latent search.
///
/// `error_bound = mixed_term + noise_term + alpha_term` in the
/// `(1/√n)‖x̂ − x‖` scale. The bound is reported as stated even when it
/// exceeds 1 or the probability guarantee is empty; `vacuous` flags that
/// case instead of clamping.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Bound {
    pub error_bound: f64,
    pub mixed_term: f64,
    pub noise_term: f64,
    pub alpha_term: f64,
    pub zeta: f64,
    pub prob_lower_bound: f64,
    pub vacuous: bool,
}

/// Evaluates the recovery-error bound with the latent range constant a = 1
/// (latents in [0,1]).
pub fn theorem1_bound(p: &Theorem1Params) -> Result<Theorem1Bound> {
    theorem1_bound_with_latent_range(p, 1.0)
}

/// Evaluates the recovery-error bound for latents spanning a range of width `a`.
pub fn theorem1_bound_with_latent_range(p: &Theorem1Params, a: f64) -> Result<Theorem1Bound> {
    p.validate()?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Parameter {
            name: "a",
            reason: format!("latent range width must be finite and > 0, got {a}"),
        });
    }
    let (kf, nf, mf) = (p.k as f64, p.n as f64, p.m as f64);
    let (l, d, s, eta, ups) = (p.lipschitz, p.delta, p.sigma, p.eta, p.upsilon);
    let ln_inv = (1.0 / d).ln();

    let mixed_term = (6.0 * l * s).sqrt() * (2.0 * kf / mf).powf(0.25) * d.powf(0.5 - ups / 2.0 - 1.0 / eta);
    let noise_term = 4.0 * s * d.powf(-2.0 / eta) * (kf * ln_inv / mf).sqrt();
    let alpha_term = 2.0 * d.powf(1.0 - 1.0 / eta)
        + d.powf(0.5 - 1.0 / eta) * (2.0 * s).sqrt()
        + 3.0 * l * d.powf(1.0 - ups - 1.0 / eta) * (kf / mf).sqrt()
        + l * d.powf(1.0 - ups) * (kf / nf).sqrt();
    let error_bound = mixed_term + noise_term + alpha_term;

    let zeta = (a.ln() + (eta / 2.0) * (1.0 - d.powf(2.0 / eta))) / ln_inv;
    let prob_lower_bound = 1.0
        - (-(ups - zeta) * kf * ln_inv).exp()
        - (-kf * ln_inv).exp()
        - 3.0 * (-0.8 * mf).exp();

    Ok(Theorem1Bound {
        error_bound,
        mixed_term,
        noise_term,
        alpha_term,
        zeta,
        prob_lower_bound,
        vacuous: error_bound > 1.0 || prob_lower_bound <= 0.0,
    })
}

/// Per-iteration constants of the projected-descent convergence bound.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Constants {
    pub eta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub m_required: usize,
    /// Whether the per-iteration multiplier 0.9 + eta is an actual contraction.
    pub contraction_ok: bool,
}

/// Evaluates the projected-descent constants with the default slack
/// parameter upsilon = 0.1 in the measurement requirement.
pub fn theorem2_constants(
    k: usize,
    n: usize,
    m: usize,
    lipschitz: f64,
    delta: f64,
    alpha: f64,
) -> Result<Theorem2Constants> {
    theorem2_constants_with_upsilon(k, n, m, lipschitz, delta, alpha, 0.1)
}

pub fn theorem2_constants_with_upsilon(
    k: usize,
    n: usize,
    m: usize,
    lipschitz: f64,
    delta: f64,
    alpha: f64,
    upsilon: f64,
) -> Result<Theorem2Constants> {
    let fail = |name: &'static str, reason: String| Err(Error::Parameter { name, reason });
    if k == 0 || n == 0 || m == 0 {
        return fail("k/n/m", "dimensions must be >= 1".into());
    }
    if !(delta > 0.0 && delta < 1.0) {
        return fail("delta", format!("must lie in (0,1), got {delta}"));
    }
    if !(lipschitz >= 0.0 && lipschitz.is_finite()) {
        return fail("lipschitz", format!("must be finite and >= 0, got {lipschitz}"));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return fail("alpha", format!("must be finite and >= 0, got {alpha}"));
    }
    if !(upsilon >= 0.0 && upsilon.is_finite()) {
        return fail("upsilon", format!("must be finite and >= 0, got {upsilon}"));
    }

    let (kf, nf, mf) = (k as f64, n as f64, m as f64);
    let root_nm = (nf / mf).sqrt();
    let da = delta.powf(alpha);

    let eta = (kf / nf) * (1.0 + (root_nm + 2.0) * (root_nm + 2.0)) * lipschitz * lipschitz * da * da;
    let gamma1 = (2.0 + root_nm) * (2.0 + root_nm) * (lipschitz * da * (kf / nf).sqrt() + 1.0);
    let gamma2 = (2.0 * kf / nf).sqrt() * (2.0 + root_nm);
    let m_required = (40.0 * (1.0 + alpha + upsilon) * kf * (1.0 / delta).log2()).ceil() as usize;

    Ok(Theorem2Constants {
        eta,
        gamma1,
        gamma2,
        m_required,
        contraction_ok: 0.9 + eta < 1.0,
    })
}

/// One-step error prediction of the projected-descent bound, in the
/// `(1/√n)`-normalized scale: given the previous normalized error, returns
/// the bound on the next one.
#[allow(clippy::too_many_arguments)]
pub fn predict_next_error(
    prev: f64,
    c: &Theorem2Constants,
    lipschitz: f64,
    sigma: f64,
    n: usize,
    k: usize,
    m: usize,
    delta: f64,
    alpha: f64,
) -> f64 {
    debug_assert!(prev >= 0.0);
    let noise_coeff = (6.0 * (1.0 + alpha) * (1.0 / delta).log2() * k as f64 / m as f64).sqrt()
        + c.gamma2 * lipschitz * delta.powf(alpha);
    (0.9 + c.eta) * prev + noise_coeff * sigma / (n as f64).sqrt() + c.gamma1 * delta
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: usize, n: usize, m: usize, l: f64, d: f64, s: f64, eta: f64, ups: f64) -> Theorem1Params {
        Theorem1Params {
            k,
            n,
            m,
            lipschitz: l,
            delta: d,
            sigma: s,
            eta,
            upsilon: ups,
        }
    }

    #[test]
    fn noiseless_bound_has_the_expected_leading_term() {
        // L=1, eta=4, upsilon=0.25, delta=0.01, k/m = 1/4:
        // 3·L·√(k/m)·δ^{1-υ-1/η} = 1.5 · 0.01^0.5 = 0.15
        let p = params(25, 200, 100, 1.0, 0.01, 0.0, 4.0, 0.25);
        let b = theorem1_bound(&p).unwrap();
        let leading = 3.0 * (25.0f64 / 100.0).sqrt() * 0.01f64.powf(1.0 - 0.25 - 0.25);
        assert!((leading - 0.15).abs() < 1e-12);
        assert_eq!(b.mixed_term, 0.0);
        assert_eq!(b.noise_term, 0.0);
        // with sigma = 0 the whole bound is the alpha aggregate
        assert!((b.error_bound - b.alpha_term).abs() < 1e-15);
        let rest = 2.0 * 0.01f64.powf(0.75) + 0.01f64.powf(0.75) * (25.0f64 / 200.0).sqrt();
        assert!((b.alpha_term - (leading + rest)).abs() < 1e-12);
    }

    #[test]
    fn shrinking_delta_inflates_the_noise_term() {
        let mut terms = Vec::new();
        for d in [0.1, 0.01, 0.001] {
            let p = params(10, 400, 80, 1.0, d, 0.1, 4.0, 0.25);
            terms.push(theorem1_bound(&p).unwrap().noise_term);
        }
        assert!(terms[0] < terms[1] && terms[1] < terms[2], "{terms:?}");
    }

    #[test]
    fn probability_is_at_most_one_and_tiny_m_is_flagged_vacuous() {
        let p = params(25, 200, 100, 1.0, 0.01, 0.0, 4.0, 0.25);
        let b = theorem1_bound(&p).unwrap();
        assert!(b.prob_lower_bound <= 1.0);

        // m barely above eta*k with large zeta -> empty guarantee
        let p = params(2, 10, 9, 5.0, 0.9, 0.0, 4.0, 0.2);
        let b = theorem1_bound(&p).unwrap();
        assert!(b.vacuous);
    }

    #[test]
    fn parameter_violations_name_the_failed_condition() {
        let p = params(25, 200, 100, 1.0, 0.01, 0.0, 1.5, 0.25);
        match theorem1_bound(&p) {
            Err(Error::Parameter { name, .. }) => assert_eq!(name, "eta"),
            other => panic!("expected parameter error, got {other:?}"),
        }
        let p = params(25, 200, 50, 1.0, 0.01, 0.0, 4.0, 0.25);
        match theorem1_bound(&p) {
            Err(Error::Parameter { name, .. }) => assert_eq!(name, "m"),
            other => panic!("expected parameter error, got {other:?}"),
        }
        let p = params(25, 200, 100, 1.0, 0.01, 0.0, 4.0, 0.99);
        assert!(theorem1_bound(&p).is_err());
    }

    #[test]
    fn projected_descent_constants_match_hand_derivation() {
        // k=100, n=400, m=100, L=1, alpha=0
        let c = theorem2_constants(100, 400, 100, 1.0, 0.1, 0.0).unwrap();
        assert!((c.eta - 4.25).abs() < 1e-12, "eta {}", c.eta);
        assert!((c.gamma2 - 2.0 * 2.0f64.sqrt()).abs() < 1e-12, "gamma2 {}", c.gamma2);
        assert!((c.gamma1 - 24.0).abs() < 1e-12, "gamma1 {}", c.gamma1);
        assert!(!c.contraction_ok);
    }

    #[test]
    fn delta_to_zero_limits() {
        let c = theorem2_constants(100, 400, 100, 1.0, 1e-12, 1.0).unwrap();
        assert!(c.eta < 1e-20);
        assert!((c.gamma1 - 16.0).abs() < 1e-9);
    }

    #[test]
    fn eta_is_invariant_under_the_stated_rescaling() {
        // scaling L by c and delta^alpha by 1/c leaves eta unchanged
        let a = theorem2_constants(8, 64, 32, 3.0, 0.04, 0.5).unwrap();
        let b = theorem2_constants(8, 64, 32, 6.0, 0.01, 0.5).unwrap();
        assert!((a.eta - b.eta).abs() < 1e-12 * a.eta.max(1.0));
    }

    #[test]
    fn next_error_prediction_degenerates_correctly() {
        let c = theorem2_constants(4, 256, 2000, 0.5, 1e-9, 0.5).unwrap();
        assert!(c.eta < 0.1);
        let pred = predict_next_error(0.2, &c, 0.5, 0.0, 256, 4, 2000, 1e-9, 0.5);
        assert!((pred - (0.9 + c.eta) * 0.2).abs() < 1e-7);

        let at_zero = predict_next_error(0.0, &c, 0.5, 0.0, 256, 4, 2000, 1e-9, 0.5);
        assert!((at_zero - c.gamma1 * 1e-9).abs() < 1e-20);
    }

    #[test]
    fn m_required_scales_with_log_inverse_delta() {
        let a = theorem2_constants(8, 64, 32, 1.0, 0.5, 0.0).unwrap();
        // 40 * 1.1 * 8 * log2(2) = 352
        assert_eq!(a.m_required, 352);
        let b = theorem2_constants(8, 64, 32, 1.0, 0.25, 0.0).unwrap();
        assert_eq!(b.m_required, 704);
    }
}
