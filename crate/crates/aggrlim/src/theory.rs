//! Exact finite-size and limit formulas the simulations are verified
//! against.
//!
//! Everything here is deterministic. The central objects, for a panel
//! of copies with mixing law `law` and per-copy model `params`:
//!
//! * the stationary covariance of one copy at lag k, averaged over the
//!   coefficient: `scale * E[alpha^k / (1 - alpha)]` for INAR,
//!   `scale * E[alpha^k / (1 - alpha^2)]` for AR;
//! * the exact covariance of centered partial sums over `m1` and `m2`
//!   steps, a lag-weighted double sum of the above, whose `m ln m`
//!   growth is what forces the logarithmic normalizations;
//! * the Brownian limit constants of the two iterated-limit orders and
//!   the 1-stable characteristic function that controls the
//!   copies-per-time tail in the time-first order.

use num_complex::Complex64;
use thiserror::Error;

use crate::mixing::{MixingLaw, Moment, PsiProfile};
use crate::processes::ModelParams;
use crate::quad::{self, QuadOpts};
use crate::sum::Accumulator;

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("characteristic function not supported for |theta| > {max}, got {got}")]
    ThetaOutOfRange { got: f64, max: f64 },
    #[error("oscillatory tail quadrature did not converge at theta = {0}")]
    TailQuadrature(f64),
}

/// Which of the two iterated limits is taken first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitOrder {
    /// Number of copies to infinity first, then the time scale;
    /// normalization sqrt(n ln n * N).
    CopiesFirst,
    /// Time scale to infinity first, then copies;
    /// normalization sqrt(n * N ln N).
    TimeFirst,
}

const EULER_GAMMA: f64 = 0.577215664901532860606512090082402431;

/// Harmonic number H(m) = 1 + 1/2 + ... + 1/m.
///
/// Direct compensated summation up to 1e4 terms, then the asymptotic
/// expansion `ln m + gamma + 1/(2m) - 1/(12 m^2)`, whose error at the
/// crossover is ~1/(120 m^4) = 1e-18, far below f64 resolution of H.
pub fn harmonic_number(m: u64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    if m <= 10_000 {
        let mut acc = Accumulator::new();
        for k in (1..=m).rev() {
            acc.add(1.0 / k as f64);
        }
        return acc.value();
    }
    let x = m as f64;
    x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x)
}

/// Exact value of `sum_{k<=m1} sum_{l<=m2} 1/(|k-l|+1)` in closed form,
/// O(1) beyond the harmonic-number evaluations. Grows like
/// `2 min(m1,m2) ln max(m1,m2)` on the diagonal; this is the critical
/// INAR partial-sum covariance up to the factor `2 lambda`.
pub fn harmonic_double_sum(m1: u64, m2: u64) -> f64 {
    if m1 == 0 || m2 == 0 {
        return 0.0;
    }
    let (a, b) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
    let af = a as f64;
    let bf = b as f64;
    let ha = harmonic_number(a);
    let hb = harmonic_number(b);
    let h_gap = harmonic_number(b - a + 1);
    (af + 1.0) * (ha - 1.0) + 2.0 - af + af * (hb - 1.0) + (bf - af + 1.0) * (hb - h_gap)
}

/// Brute-force double loop for [`harmonic_double_sum`]; quadratic cost,
/// kept public as the verification oracle.
pub fn harmonic_double_sum_brute(m1: u64, m2: u64) -> f64 {
    let mut acc = Accumulator::new();
    for k in 1..=m1 {
        for l in 1..=m2 {
            acc.add(1.0 / (k.abs_diff(l) + 1) as f64);
        }
    }
    acc.value()
}

/// Variance constant of the Brownian limit for the given model, limit
/// order and mixing limit value `psi1`. The time-first order halves the
/// copies-first constant because only the long-run variance rate of
/// each copy survives the inner limit.
pub fn limit_variance_constant(params: &ModelParams, order: LimitOrder, psi1: f64) -> f64 {
    let scale = params.innovation_scale();
    match (params, order) {
        (ModelParams::Inar1(_), LimitOrder::CopiesFirst) => 2.0 * scale * psi1,
        (ModelParams::Inar1(_), LimitOrder::TimeFirst) => scale * psi1,
        (ModelParams::Ar1(_), LimitOrder::CopiesFirst) => scale * psi1,
        (ModelParams::Ar1(_), LimitOrder::TimeFirst) => 0.5 * scale * psi1,
    }
}

/// Covariance matrix `c * min(t_i, t_j)` of the Brownian limit on a
/// time grid.
pub fn limit_cov_matrix(times: &[f64], c: f64) -> Vec<Vec<f64>> {
    times
        .iter()
        .map(|&ti| times.iter().map(|&tj| c * ti.min(tj)).collect())
        .collect()
}

/// Cholesky factor of a symmetric positive-definite matrix, or None if
/// a pivot fails. Small grids only; used to certify limit covariance
/// matrices are valid Gaussian covariances.
pub fn cholesky(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Stationary lag-k covariance of one copy with the coefficient
/// integrated out: `lambda E[a^k/(1-a)]` (INAR) or
/// `sigma2 E[a^k/(1-a^2)]` (AR). Divergent unless `beta > 0`.
pub fn stationary_cov(params: &ModelParams, law: &MixingLaw, lag: u32) -> Moment {
    let scale = params.innovation_scale();
    let m = match params {
        ModelParams::Inar1(_) => law.mixed_moment(lag, 1.0, 0.0),
        ModelParams::Ar1(_) => law.mixed_moment(lag, 1.0, 1.0),
    };
    match m {
        Moment::Finite(v) => Moment::Finite(scale * v),
        Moment::Divergent => Moment::Divergent,
    }
}

/// All lag covariances 0..=max_lag in one pass.
///
/// Constant profiles use exact Beta-moment recurrences
/// (`M_d = M_{d-1} d/(beta+d)` for `E[a^d/(1-a)]` and
/// `J_d = E[a^(d-1)] - J_{d-1}` for `E[a^d/(1+a)]`), costing O(max_lag)
/// total. Other profiles fall back to one quadrature per lag, which is
/// correct but O(max_lag) quadratures; fine for the small grids it is
/// used on.
pub fn stationary_cov_sequence(
    params: &ModelParams,
    law: &MixingLaw,
    max_lag: u64,
) -> Option<Vec<f64>> {
    let beta = law.beta();
    if beta <= 0.0 {
        return None;
    }
    let scale = params.innovation_scale();
    let n = max_lag as usize + 1;

    if matches!(law.profile(), PsiProfile::Constant) {
        let mut out = Vec::with_capacity(n);
        match params {
            ModelParams::Inar1(_) => {
                let mut m_d = (beta + 1.0) / beta;
                out.push(scale * m_d);
                for d in 1..n as u64 {
                    m_d *= d as f64 / (beta + d as f64);
                    out.push(scale * m_d);
                }
            }
            ModelParams::Ar1(_) => {
                // E[a^d/(1-a^2)] = (M_d + J_d)/2
                let mut m_d = (beta + 1.0) / beta;
                let mut j_d = law.mixed_moment(0, 0.0, 1.0).expect_finite("E[1/(1+a)]");
                let mut e_prev = 1.0; // E[a^0]
                out.push(scale * 0.5 * (m_d + j_d));
                for d in 1..n as u64 {
                    let df = d as f64;
                    m_d *= df / (beta + df);
                    j_d = e_prev - j_d;
                    e_prev *= df / (beta + df + 1.0);
                    out.push(scale * 0.5 * (m_d + j_d));
                }
            }
        }
        return Some(out);
    }

    let mut out = Vec::with_capacity(n);
    for d in 0..n {
        match stationary_cov(params, law, d as u32) {
            Moment::Finite(v) => out.push(v),
            Moment::Divergent => return None,
        }
    }
    Some(out)
}

/// Exact covariance of the centered partial sums over `m1` and `m2`
/// steps of one copy, coefficient integrated out:
///
/// `sum_{k<=m1} sum_{l<=m2} cov(|k-l|) = sum_d w(d) cov(d)`
///
/// with `w(0) = min(m1,m2)` and
/// `w(d) = max(0, min(m1,m2-d)) + max(0, min(m2,m1-d))` for d >= 1.
/// Divergent when the lag covariances are (beta <= 0).
pub fn exact_prelimit_cov(params: &ModelParams, law: &MixingLaw, m1: u64, m2: u64) -> Moment {
    if m1 == 0 || m2 == 0 {
        return Moment::Finite(0.0);
    }
    let (a, b) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
    let Some(cov) = stationary_cov_sequence(params, law, b - 1) else {
        return Moment::Divergent;
    };
    let mut acc = Accumulator::new();
    acc.add(a as f64 * cov[0]);
    for d in 1..b {
        let from_right = a.min(b - d) as f64;
        let from_left = a.saturating_sub(d) as f64;
        acc.add((from_right + from_left) * cov[d as usize]);
    }
    Moment::Finite(acc.value())
}

/// Tail mass `nu([x, inf)) = psi1 * scale / x` of the 1-stable Levy
/// measure governing the copies-per-time tail in the time-first order.
pub fn levy_tail(psi1: f64, scale: f64, x: f64) -> f64 {
    assert!(x > 0.0, "tail evaluated at x <= 0");
    psi1 * scale / x
}

/// `E[rate(alpha) 1{rate(alpha) <= threshold}]`, the truncation of the
/// per-copy variance rate at `threshold`. With threshold = N this is
/// the exact centering that turns the copy-rate sum `sum_j rate_j / N`
/// into the quantity converging to the 1-stable law of [`stable_cf`].
/// Grows like `psi1 * scale * ln(threshold)`, which is the source of
/// every logarithmic normalization in the time-first order.
pub fn truncated_rate_mean(params: &ModelParams, law: &MixingLaw, threshold: f64) -> f64 {
    assert!(threshold > 0.0);
    let gap = params.rate_gap(threshold).min(1.0);
    if gap >= 1.0 {
        return 0.0;
    }
    // x-space integral over [0, 1-gap]; bounded integrand, kinks only
    // at grid-profile nodes, which adaptive bisection resolves.
    let r = quad::integrate(
        |x| params.variance_rate(x) * law.density(x),
        0.0,
        1.0 - gap,
        &QuadOpts { rel_tol: 1e-10, abs_tol: 1e-14, max_splits: 4000 },
    );
    r.value
}

const CF_THETA_MAX: f64 = 1e6;

/// Characteristic function of the 1-stable limit of centered
/// copies-per-time sums:
///
/// `exp{ int_1^inf (e^(i theta x) - 1) nu(dx)
///      + int_0^1 (e^(i theta x) - 1 - i theta x) nu(dx) }`
///
/// with `nu(dx) = psi1 * scale * x^-2 dx`. Both integrals are computed
/// by adaptive quadrature; the oscillatory tails are split at the
/// trigonometric zeros and summed with series acceleration. Errors for
/// `|theta| > 1e6` (outside the supported range).
pub fn stable_cf(theta: f64, scale: f64, psi1: f64) -> Result<Complex64, TheoryError> {
    assert!(scale > 0.0 && psi1 > 0.0);
    if !theta.is_finite() || theta.abs() > CF_THETA_MAX {
        return Err(TheoryError::ThetaOutOfRange { got: theta, max: CF_THETA_MAX });
    }
    if theta == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if theta < 0.0 {
        return Ok(stable_cf(-theta, scale, psi1)?.conj());
    }

    let intensity = psi1 * scale;
    let opts = QuadOpts { rel_tol: 1e-12, abs_tol: 1e-13, max_splits: 4000 };

    // int_0^1 (cos(theta x) - 1)/x^2 dx, compensated form of cos - 1
    let head_cos = quad::integrate(
        |x| {
            let s = (0.5 * theta * x).sin();
            -2.0 * s * s / (x * x)
        },
        0.0,
        1.0,
        &opts,
    );
    // int_0^1 (sin(theta x) - theta x)/x^2 dx
    let head_sin = quad::integrate(|x| sin_minus_arg(theta * x) / (x * x), 0.0, 1.0, &opts);

    // int_1^inf cos/sin(theta x)/x^2 dx
    let (tail_cos, tail_sin) = oscillatory_tail(theta).ok_or(TheoryError::TailQuadrature(theta))?;

    if !(head_cos.converged && head_sin.converged) {
        return Err(TheoryError::TailQuadrature(theta));
    }

    // int_1^inf (cos - 1)/x^2 = tail_cos - int_1^inf x^-2 = tail_cos - 1
    let re = intensity * (head_cos.value + tail_cos - 1.0);
    let im = intensity * (head_sin.value + tail_sin);
    Ok(Complex64::from_polar(re.exp(), im))
}

/// sin(t) - t without cancellation: series for small |t|.
fn sin_minus_arg(t: f64) -> f64 {
    if t.abs() < 0.25 {
        let t2 = t * t;
        -t * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)))
    } else {
        t.sin() - t
    }
}

/// `(int_1^inf cos(theta x)/x^2 dx, int_1^inf sin(theta x)/x^2 dx)`
/// for theta > 0: head panel up to the first trigonometric zero past 1,
/// then half-period panels alternating in sign, accelerated.
fn oscillatory_tail(theta: f64) -> Option<(f64, f64)> {
    let opts = QuadOpts { rel_tol: 1e-12, abs_tol: 1e-15, max_splits: 2000 };
    let half_period = std::f64::consts::PI / theta;
    let n_panels = 48usize;

    let mut results = [0.0f64; 2];
    for (slot, first_zero_coeff) in [(0usize, 0.5f64), (1, 1.0)] {
        // zeros of cos at (k + 1/2) pi / theta, of sin at k pi / theta
        let f = |x: f64| {
            let t = theta * x;
            if slot == 0 { t.cos() / (x * x) } else { t.sin() / (x * x) }
        };
        let mut k = (theta / std::f64::consts::PI - first_zero_coeff).ceil().max(0.0);
        let mut z = (k + first_zero_coeff) * half_period;
        while z <= 1.0 {
            k += 1.0;
            z = (k + first_zero_coeff) * half_period;
        }
        let head = quad::integrate(&f, 1.0, z, &opts);
        if !head.converged {
            return None;
        }
        let mut terms = Vec::with_capacity(n_panels);
        let mut lo = z;
        for _ in 0..n_panels {
            let hi = lo + half_period;
            let panel = quad::integrate(&f, lo, hi, &opts);
            if !panel.converged {
                return None;
            }
            terms.push(panel.value);
            lo = hi;
        }
        results[slot] = head.value + quad::alternating_series_sum(&terms);
    }
    Some((results[0], results[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixing::MixingLaw;
    use crate::processes::{Ar1Params, Inar1Params};

    fn inar(lambda: f64) -> ModelParams {
        ModelParams::Inar1(Inar1Params { lambda })
    }

    fn ar(sigma2: f64) -> ModelParams {
        ModelParams::Ar1(Ar1Params { sigma2 })
    }

    #[test]
    fn harmonic_number_values() {
        assert_eq!(harmonic_number(0), 0.0);
        assert_eq!(harmonic_number(1), 1.0);
        assert!((harmonic_number(4) - 25.0 / 12.0).abs() < 1e-15);
        // crossover consistency: direct sum vs asymptotic at 1e4
        let direct = harmonic_number(10_000);
        let x = 10_000.0f64;
        let asym = x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x);
        assert!((direct - asym).abs() < 1e-13, "{direct} vs {asym}");
    }

    #[test]
    fn double_sum_closed_form_matches_brute() {
        for &(m1, m2) in &[(1u64, 1u64), (1, 3), (2, 2), (3, 3), (7, 19), (40, 40), (13, 57), (60, 31)] {
            let exact = harmonic_double_sum(m1, m2);
            let brute = harmonic_double_sum_brute(m1, m2);
            assert!(
                (exact - brute).abs() <= 1e-12 * brute,
                "(m1,m2)=({m1},{m2}): {exact} vs {brute}"
            );
        }
        assert_eq!(harmonic_double_sum(0, 5), 0.0);
    }

    #[test]
    fn double_sum_diagonal_growth() {
        // S(m,m) = 2(m+1)(H(m)-1) + 2 - m, so the ratio to m ln m is
        // 2 + (2 gamma - 3)/ln m + O(1/m): converges to 2 from below,
        // deviation shrinking like 1.85/ln m.
        let mut prev_dev = f64::INFINITY;
        for &m in &[1_000u64, 10_000, 100_000, 1_000_000] {
            let ratio = harmonic_double_sum(m, m) / (m as f64 * (m as f64).ln());
            let dev = (ratio - 2.0).abs();
            let predicted = (3.0 - 2.0 * EULER_GAMMA) / (m as f64).ln();
            assert!((dev - predicted).abs() < 0.02 * predicted + 1e-3, "m={m}: dev {dev} vs {predicted}");
            assert!(dev < prev_dev, "deviation not decreasing at m={m}");
            prev_dev = dev;
        }
    }

    #[test]
    fn limit_constants() {
        let psi1 = 2.0;
        assert_eq!(limit_variance_constant(&inar(1.0), LimitOrder::CopiesFirst, psi1), 4.0);
        assert_eq!(limit_variance_constant(&inar(1.0), LimitOrder::TimeFirst, psi1), 2.0);
        assert_eq!(limit_variance_constant(&ar(1.0), LimitOrder::CopiesFirst, psi1), 2.0);
        assert_eq!(limit_variance_constant(&ar(1.0), LimitOrder::TimeFirst, psi1), 1.0);
        // scale linearity
        assert_eq!(limit_variance_constant(&inar(2.5), LimitOrder::TimeFirst, psi1), 5.0);
    }

    #[test]
    fn limit_matrix_is_min_kernel_and_psd() {
        let times = [0.5, 1.0, 2.0, 4.0];
        let m = limit_cov_matrix(&times, 3.0);
        assert_eq!(m[0][3], 1.5);
        assert_eq!(m[2][2], 6.0);
        assert_eq!(m[1][2], m[2][1]);
        assert!(cholesky(&m).is_some(), "min kernel matrix must be PD");
    }

    #[test]
    fn stationary_cov_closed_forms() {
        let law = MixingLaw::constant(1.0).unwrap();
        for k in 0..=10u32 {
            let got = stationary_cov(&inar(1.0), &law, k).expect_finite("cov");
            let expected = 2.0 / (k as f64 + 1.0);
            assert!((got - expected).abs() < 1e-8, "k={k}: {got} vs {expected}");
        }
        // AR: 2 I_k with I_0 = ln 2, I_k = 1/k - I_{k-1}
        let ln2 = std::f64::consts::LN_2;
        let mut i_k = ln2;
        for k in 0..=10u32 {
            if k > 0 {
                i_k = 1.0 / k as f64 - i_k;
            }
            let got = stationary_cov(&ar(1.0), &law, k).expect_finite("cov");
            assert!((got - 2.0 * i_k).abs() < 1e-8, "k={k}: {got} vs {}", 2.0 * i_k);
        }
        // divergence at beta = 0 for both models
        let flat = MixingLaw::constant(0.0).unwrap();
        assert!(stationary_cov(&inar(1.0), &flat, 0).is_divergent());
        assert!(stationary_cov(&ar(1.0), &flat, 0).is_divergent());
    }

    #[test]
    fn cov_sequence_matches_single_lag_quadrature() {
        let laws = [
            MixingLaw::constant(1.0).unwrap(),
            MixingLaw::constant(0.7).unwrap(),
            MixingLaw::new(crate::mixing::PsiProfile::Poly(vec![1.0, 1.0]), 1.0).unwrap(),
        ];
        for law in &laws {
            for params in [inar(1.3), ar(0.8)] {
                let seq = stationary_cov_sequence(&params, law, 12).unwrap();
                for (d, &v) in seq.iter().enumerate() {
                    let single = stationary_cov(&params, law, d as u32).expect_finite("cov");
                    assert!(
                        (v - single).abs() <= 1e-8 * single.abs().max(1e-12),
                        "lag {d}: sequence {v} vs quadrature {single}"
                    );
                }
            }
        }
    }

    #[test]
    fn prelimit_cov_matches_brute_double_sum() {
        let law = MixingLaw::constant(1.0).unwrap();
        for params in [inar(0.9), ar(1.7)] {
            for &(m1, m2) in &[(1u64, 1u64), (3, 3), (5, 12), (12, 5), (12, 12)] {
                let got = exact_prelimit_cov(&params, &law, m1, m2).expect_finite("prelimit");
                let mut brute = 0.0;
                for k in 1..=m1 {
                    for l in 1..=m2 {
                        brute += stationary_cov(&params, &law, k.abs_diff(l) as u32)
                            .expect_finite("cov");
                    }
                }
                assert!(
                    (got - brute).abs() <= 1e-9 * brute,
                    "({m1},{m2}): {got} vs brute {brute}"
                );
            }
        }
    }

    #[test]
    fn critical_inar_prelimit_is_harmonic_sum() {
        // at the critical constant law cov(d) = 2 lambda/(d+1), so the
        // double sum collapses to 2 lambda * harmonic_double_sum
        let law = MixingLaw::constant(1.0).unwrap();
        let lambda = 1.4;
        for &(m1, m2) in &[(50u64, 50u64), (200, 500), (1000, 1000)] {
            let got = exact_prelimit_cov(&inar(lambda), &law, m1, m2).expect_finite("prelimit");
            let expected = 2.0 * lambda * harmonic_double_sum(m1, m2);
            assert!(
                (got - expected).abs() <= 1e-10 * expected,
                "({m1},{m2}): {got} vs {expected}"
            );
        }
    }

    #[test]
    fn prelimit_divergent_at_flat_exponent() {
        let flat = MixingLaw::constant(0.0).unwrap();
        assert!(exact_prelimit_cov(&inar(1.0), &flat, 10, 10).is_divergent());
    }

    #[test]
    fn levy_tail_values() {
        assert!((levy_tail(2.0, 1.0, 1.0) - 2.0).abs() < 1e-15);
        assert!((levy_tail(2.0, 1.0, 10.0) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn truncated_rate_mean_closed_form() {
        // critical constant law, INAR: rate(1-u) = lambda(2-u)/u^2 and
        // density 2u in the gap variable, so
        // E[rate 1{rate<=T}] = 2 lambda (2 ln(1/gap) - 1 + gap).
        let law = MixingLaw::constant(1.0).unwrap();
        let lambda = 1.3;
        let params = inar(lambda);
        for &threshold in &[10.0, 1e4, 1e8] {
            let gap = params.rate_gap(threshold);
            let expected = 2.0 * lambda * (2.0 * (1.0 / gap).ln() - 1.0 + gap);
            let got = truncated_rate_mean(&params, &law, threshold);
            assert!(
                (got - expected).abs() < 1e-8 * expected,
                "T={threshold}: {got} vs {expected}"
            );
        }
        // threshold below the minimum rate truncates everything
        assert_eq!(truncated_rate_mean(&params, &law, 0.5 * lambda), 0.0);
    }

    #[test]
    fn stable_cf_against_closed_form() {
        // For theta > 0 the exponent has the closed form
        // intensity * (-pi theta / 2 + i theta (1 - gamma - ln theta)),
        // from int_0^inf (1-cos(tx))/x^2 dx = pi t/2 and the cosine
        // integral expansion of the sine parts.
        for &(scale, psi1) in &[(1.0, 2.0), (0.3, 2.0), (1.0, 0.6)] {
            let intensity = scale * psi1;
            for &theta in &[0.5, 1.0, 2.0, 17.3] {
                let got = stable_cf(theta, scale, psi1).unwrap();
                let re = -intensity * std::f64::consts::FRAC_PI_2 * theta;
                let im = intensity * theta * (1.0 - EULER_GAMMA - theta.ln());
                let expected = Complex64::from_polar(re.exp(), im);
                assert!(
                    (got - expected).norm() < 1e-8,
                    "theta={theta} intensity={intensity}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn stable_cf_basics() {
        assert_eq!(stable_cf(0.0, 1.0, 2.0).unwrap(), Complex64::new(1.0, 0.0));
        let plus = stable_cf(1.5, 1.0, 2.0).unwrap();
        let minus = stable_cf(-1.5, 1.0, 2.0).unwrap();
        assert!((plus - minus.conj()).norm() < 1e-14);
        assert!(plus.norm() <= 1.0);
        assert!(stable_cf(2e6, 1.0, 2.0).is_err());
        assert!(stable_cf(f64::NAN, 1.0, 2.0).is_err());
    }
}
