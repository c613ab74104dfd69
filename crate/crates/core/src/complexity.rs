//! Sample-size bounds for the scenario approach.

use statrs::function::gamma::ln_gamma;

use crate::SwcError;

fn check_unit(name: &str, v: f64) -> Result<(), SwcError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(SwcError::Domain(format!("{name} must lie strictly between 0 and 1, got {v}")))
    }
}

/// `ceil((1/ε) · e/(e-1) · (ln(1/β) + n0 + 1))`.
pub fn sample_complexity(epsilon: f64, beta: f64, n0: usize) -> Result<usize, SwcError> {
    check_unit("epsilon", epsilon)?;
    check_unit("beta", beta)?;
    if n0 == 0 {
        return Err(SwcError::Domain("n0 must be at least 1".into()));
    }
    let e = std::f64::consts::E;
    let n = (1.0 / epsilon) * (e / (e - 1.0)) * ((1.0 / beta).ln() + n0 as f64 + 1.0);
    Ok(n.ceil() as usize)
}

fn ln_choose(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `Σ_{k<d} C(N,k) ε^k (1-ε)^{N-k}`, the probability that `N` samples leave
/// a violation above `ε` for a problem with `d` decision variables. With
/// `N < d` the sum covers the whole support and equals 1.
pub fn binomial_violation_bound(n: usize, epsilon: f64, d: usize) -> Result<f64, SwcError> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(SwcError::Domain(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    if d == 0 {
        return Err(SwcError::Domain("d must be at least 1".into()));
    }
    if epsilon == 0.0 {
        return Ok(1.0);
    }
    if epsilon == 1.0 {
        return Ok(if d > n { 1.0 } else { 0.0 });
    }
    let (le, l1e) = (epsilon.ln(), (-epsilon).ln_1p());
    let logs: Vec<f64> = (0..d.min(n + 1)).map(|k| ln_choose(n, k) + k as f64 * le + (n - k) as f64 * l1e).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    Ok((top + sum.ln()).exp().min(1.0))
}

/// Smallest `N >= d` with `binomial_violation_bound(N, ε, d) <= β`.
pub fn min_samples_exact(epsilon: f64, beta: f64, d: usize) -> Result<usize, SwcError> {
    check_unit("epsilon", epsilon)?;
    check_unit("beta", beta)?;
    if d == 0 {
        return Err(SwcError::Domain("d must be at least 1".into()));
    }
    let ok = |n: usize| binomial_violation_bound(n, epsilon, d).map(|p| p <= beta);
    if ok(d)? {
        return Ok(d);
    }
    let (mut lo, mut hi) = (d, 2 * d);
    while !ok(hi)? {
        lo = hi;
        hi *= 2;
    }
    // invariant: !ok(lo), ok(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
