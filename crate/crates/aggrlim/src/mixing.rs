//! Mixing law of the autoregression coefficient.
//!
//! The coefficient of each panel copy is drawn from a density
//! proportional to `psi(x) (1-x)^beta` on `[0, 1)`, where `psi` is a
//! bounded profile with a positive left limit at 1. The exponent `beta`
//! controls how much mass sits near 1 and therefore which inverse
//! moments of `1 - alpha` exist: `E[(1-alpha)^-p]` is finite exactly
//! when `p < beta + 1`. Everything downstream (covariance growth,
//! normalization, the distinction between the two iterated limits)
//! hinges on that tradeoff, so the moment routine reports divergence as
//! a value rather than an error.

use rand::Rng;
use thiserror::Error;

use crate::quad::{self, QuadOpts};

/// Unnormalized bounded part of the mixing density.
#[derive(Clone, Debug, PartialEq)]
pub enum PsiProfile {
    /// `psi(x) = 1`.
    Constant,
    /// `psi(x) = c0 + c1 x + ... `, must be nonnegative on [0, 1].
    Poly(Vec<f64>),
    /// Piecewise-linear interpolation of `(x, psi(x))` nodes, held
    /// constant at the first node value before the first node and at
    /// the declared `limit` after the last node (values past the grid
    /// are never extrapolated from the last segment's slope).
    Grid { nodes: Vec<(f64, f64)>, limit: f64 },
}

#[derive(Debug, Error)]
pub enum MixingError {
    #[error("beta must be finite and > -1, got {0}")]
    BetaOutOfRange(f64),
    #[error("profile is negative at x = {x}: psi(x) = {value}")]
    NegativeProfile { x: f64, value: f64 },
    #[error("profile limit at 1 must be positive, got {0}")]
    NonPositiveLimit(f64),
    #[error("invalid profile grid: {0}")]
    BadGrid(String),
    #[error("profile normalization integral did not converge")]
    Normalization,
}

/// Validated mixing law with cached normalization constant, left limit
/// at 1 and rejection envelope bound.
#[derive(Clone, Debug)]
pub struct MixingLaw {
    beta: f64,
    profile: PsiProfile,
    /// Normalizing constant: density(x) = norm * psi(x) * (1-x)^beta.
    norm: f64,
    /// Normalized left limit of the bounded part at 1.
    psi1: f64,
    /// Upper bound for the raw profile on [0, 1], used by rejection.
    profile_sup: f64,
}

/// Number of evaluation points used to certify polynomial profiles
/// nonnegative. A sign change between consecutive points of a degree
/// <= 64 polynomial over this grid is not possible without the value
/// dipping well below the tolerance at a grid point.
const POLY_CHECK_POINTS: usize = 4097;

impl MixingLaw {
    pub fn new(profile: PsiProfile, beta: f64) -> Result<Self, MixingError> {
        if !beta.is_finite() || beta <= -1.0 {
            return Err(MixingError::BetaOutOfRange(beta));
        }
        match &profile {
            PsiProfile::Constant => {}
            PsiProfile::Poly(coeffs) => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(MixingError::BadGrid("empty or non-finite poly coefficients".into()));
                }
                for i in 0..POLY_CHECK_POINTS {
                    let x = i as f64 / (POLY_CHECK_POINTS - 1) as f64;
                    let v = poly_eval(coeffs, x);
                    if v < 0.0 {
                        return Err(MixingError::NegativeProfile { x, value: v });
                    }
                }
                let at_one = poly_eval(coeffs, 1.0);
                if at_one <= 0.0 {
                    return Err(MixingError::NonPositiveLimit(at_one));
                }
            }
            PsiProfile::Grid { nodes, limit } => {
                if nodes.is_empty() {
                    return Err(MixingError::BadGrid("no nodes".into()));
                }
                for w in nodes.windows(2) {
                    if !(w[0].0 < w[1].0) {
                        return Err(MixingError::BadGrid(format!(
                            "node abscissae not strictly increasing at x = {}",
                            w[1].0
                        )));
                    }
                }
                for &(x, v) in nodes {
                    if !(0.0..=1.0).contains(&x) || !v.is_finite() {
                        return Err(MixingError::BadGrid(format!("node ({x}, {v}) outside [0,1] or non-finite")));
                    }
                    if v < 0.0 {
                        return Err(MixingError::NegativeProfile { x, value: v });
                    }
                }
                if !limit.is_finite() || *limit <= 0.0 {
                    return Err(MixingError::NonPositiveLimit(*limit));
                }
            }
        }

        let mut law = Self { beta, profile, norm: 1.0, psi1: 0.0, profile_sup: 0.0 };
        law.profile_sup = law.raw_profile_sup();
        let mass = law.raw_mass()?;
        law.norm = 1.0 / mass;
        law.psi1 = law.norm * law.raw_limit_at_one();
        Ok(law)
    }

    /// Constant profile; the only parameter left is the exponent.
    pub fn constant(beta: f64) -> Result<Self, MixingError> {
        Self::new(PsiProfile::Constant, beta)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn profile(&self) -> &PsiProfile {
        &self.profile
    }

    /// Normalized left limit of the density's bounded part at 1, the
    /// constant that enters every limit variance.
    pub fn psi1(&self) -> f64 {
        self.psi1
    }

    /// Raw (unnormalized) profile value.
    fn raw_profile(&self, x: f64) -> f64 {
        match &self.profile {
            PsiProfile::Constant => 1.0,
            PsiProfile::Poly(c) => poly_eval(c, x).max(0.0),
            PsiProfile::Grid { nodes, limit } => {
                if x <= nodes[0].0 {
                    return nodes[0].1;
                }
                if x >= nodes[nodes.len() - 1].0 {
                    return *limit;
                }
                // nodes are strictly increasing; find the bracketing pair
                let j = nodes.partition_point(|&(nx, _)| nx <= x);
                let (x0, v0) = nodes[j - 1];
                let (x1, v1) = nodes[j];
                v0 + (v1 - v0) * (x - x0) / (x1 - x0)
            }
        }
    }

    fn raw_limit_at_one(&self) -> f64 {
        match &self.profile {
            PsiProfile::Constant => 1.0,
            PsiProfile::Poly(c) => poly_eval(c, 1.0),
            PsiProfile::Grid { limit, .. } => *limit,
        }
    }

    fn raw_profile_sup(&self) -> f64 {
        match &self.profile {
            PsiProfile::Constant => 1.0,
            // x^i <= 1 on [0,1], so the positive coefficients bound the sup.
            PsiProfile::Poly(c) => c.iter().filter(|&&ci| ci > 0.0).sum::<f64>().max(f64::MIN_POSITIVE),
            PsiProfile::Grid { nodes, limit } => {
                nodes.iter().map(|&(_, v)| v).fold(*limit, f64::max)
            }
        }
    }

    /// `int_0^1 psi(x) (1-x)^beta dx`, exactly where a closed form
    /// exists (constant, polynomial), by segment-split quadrature for
    /// grid profiles.
    fn raw_mass(&self) -> Result<f64, MixingError> {
        let b = self.beta;
        match &self.profile {
            PsiProfile::Constant => Ok(1.0 / (b + 1.0)),
            PsiProfile::Poly(c) => {
                // int x^i (1-x)^beta dx = i! / prod_{j=1..i+1} (beta + j)
                let mut mass = 0.0;
                let mut term = 1.0 / (b + 1.0);
                for (i, &ci) in c.iter().enumerate() {
                    if i > 0 {
                        term *= i as f64 / (b + 1.0 + i as f64);
                    }
                    mass += ci * term;
                }
                if mass <= 0.0 || !mass.is_finite() {
                    return Err(MixingError::Normalization);
                }
                Ok(mass)
            }
            PsiProfile::Grid { .. } => {
                let mass = self.integrate_weighted(|_| 1.0, &QuadOpts::default());
                match mass {
                    Some(m) if m > 0.0 => Ok(m),
                    _ => Err(MixingError::Normalization),
                }
            }
        }
    }

    /// Normalized density on [0, 1); zero outside.
    pub fn density(&self, x: f64) -> f64 {
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        self.norm * self.raw_profile(x) * (1.0 - x).powf(self.beta)
    }

    /// Breakpoints of the substituted variable u = 1 - x where the
    /// integrand may have kinks, in increasing order including 0 and 1.
    fn u_breakpoints(&self) -> Vec<f64> {
        let mut us = vec![0.0, 1.0];
        if let PsiProfile::Grid { nodes, .. } = &self.profile {
            for &(x, _) in nodes {
                let u = 1.0 - x;
                if u > 0.0 && u < 1.0 {
                    us.push(u);
                }
            }
        }
        us.sort_by(f64::total_cmp);
        us.dedup();
        us
    }

    /// `int_0^1 g(u) psi(1-u) u^exponent du` in the substituted
    /// variable, split at profile kinks. The full power of u must come
    /// in through `exponent`: computing `u^beta * u^-p` as two factors
    /// overflows to inf * 0 = NaN deep in the adaptive refinement.
    /// Returns None when any segment fails to converge. Unnormalized:
    /// callers multiply by `self.norm` as appropriate.
    fn integrate_weighted_exp<G: Fn(f64) -> f64>(
        &self,
        exponent: f64,
        g: G,
        opts: &QuadOpts,
    ) -> Option<f64> {
        let us = self.u_breakpoints();
        let mut total = 0.0;
        for w in us.windows(2) {
            let r = quad::integrate(
                |u| g(u) * self.raw_profile(1.0 - u) * u.powf(exponent),
                w[0],
                w[1],
                opts,
            );
            if !r.converged {
                return None;
            }
            total += r.value;
        }
        Some(total)
    }

    fn integrate_weighted<G: Fn(f64) -> f64>(&self, g: G, opts: &QuadOpts) -> Option<f64> {
        self.integrate_weighted_exp(self.beta, g, opts)
    }

    /// One coefficient draw.
    ///
    /// Constant profiles invert the CDF `F(x) = 1 - (1-x)^(beta+1)`
    /// directly; other profiles reject against that law, which
    /// dominates them with constant `sup psi / mass`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let exponent = 1.0 / (self.beta + 1.0);
        match &self.profile {
            PsiProfile::Constant => {
                let u: f64 = rng.gen(); // in [0, 1), so 1-u is in (0, 1]
                1.0 - (1.0 - u).powf(exponent)
            }
            _ => loop {
                let u: f64 = rng.gen();
                let x = 1.0 - (1.0 - u).powf(exponent);
                let accept: f64 = rng.gen();
                if accept * self.profile_sup < self.raw_profile(x) {
                    return x;
                }
            },
        }
    }

    /// `E[alpha^k (1-alpha)^(-p) (1+alpha)^(-q)]` for integer k >= 0 and
    /// real p, q >= 0.
    ///
    /// Finite exactly when p < beta + 1; the boundary case p = beta + 1
    /// is logarithmically divergent and reported as `Divergent` too.
    pub fn mixed_moment(&self, k: u32, p: f64, q: f64) -> Moment {
        assert!(p >= 0.0 && q >= 0.0, "inverse-moment exponents must be >= 0, got p={p}, q={q}");
        if p >= self.beta + 1.0 {
            return Moment::Divergent;
        }
        let opts = QuadOpts::default();
        let val = self.integrate_weighted_exp(
            self.beta - p,
            |u| {
                let x = 1.0 - u;
                x.powi(k as i32) * (2.0 - u).powf(-q)
            },
            &opts,
        );
        match val {
            Some(v) => Moment::Finite(self.norm * v),
            None => Moment::Divergent,
        }
    }

    /// Scaled coefficient tail `n_copies * P(slope > n_copies * x)`
    /// where `slope = lambda (1+alpha)/(1-alpha)^2` is the long-run
    /// variance rate of a copy with coefficient `alpha`. Converges to
    /// `psi1 * lambda / x` as `n_copies` grows.
    pub fn scaled_tail(&self, lambda: f64, n_copies: f64, x: f64) -> f64 {
        assert!(lambda > 0.0 && n_copies > 0.0 && x > 0.0);
        let gap = slope_gap(lambda, n_copies * x).min(1.0);
        let opts = QuadOpts::default();
        let b = self.beta;
        let mut total = 0.0;
        let mut lo = 0.0;
        for hi in self.u_breakpoints() {
            if hi <= lo {
                continue;
            }
            let end = hi.min(gap);
            if end > lo {
                let r = quad::integrate(
                    |u| self.raw_profile(1.0 - u) * u.powf(b),
                    lo,
                    end,
                    &opts,
                );
                total += r.value;
            }
            lo = hi;
            if lo >= gap {
                break;
            }
        }
        n_copies * self.norm * total
    }
}

/// Result of a possibly-infinite moment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Moment {
    Finite(f64),
    Divergent,
}

impl Moment {
    pub fn is_divergent(&self) -> bool {
        matches!(self, Moment::Divergent)
    }

    /// Value of a moment the caller knows is finite.
    pub fn expect_finite(&self, what: &str) -> f64 {
        match self {
            Moment::Finite(v) => *v,
            Moment::Divergent => panic!("{what} is divergent"),
        }
    }
}

/// Gap `u` solving `lambda (2-u)/u^2 = x`, i.e. the distance `1 - a`
/// at which the long-run variance rate `lambda (1+a)/(1-a)^2` of a copy
/// crosses `x`. Returned untruncated: values above 1 mean the rate
/// never reaches `x` on the support.
pub fn slope_gap(lambda: f64, x: f64) -> f64 {
    assert!(lambda > 0.0 && x > 0.0, "slope_gap needs lambda > 0 and x > 0");
    1.0 / (0.25 + (0.0625 + x / (2.0 * lambda)).sqrt())
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    let mut v = 0.0;
    for &c in coeffs.iter().rev() {
        v = v * x + c;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn critical() -> MixingLaw {
        MixingLaw::constant(1.0).unwrap()
    }

    #[test]
    fn constant_profile_normalization() {
        let law = critical();
        // density 2(1-x): limit of the bounded part at 1 is 2
        assert!((law.psi1() - 2.0).abs() < 1e-12);
        assert!((law.density(0.0) - 2.0).abs() < 1e-12);
        assert!((law.density(0.5) - 1.0).abs() < 1e-12);
        assert_eq!(law.density(1.0), 0.0);
        assert_eq!(law.density(-0.1), 0.0);
        let mass = quad::integrate_default(|x| law.density(x), 0.0, 1.0);
        assert!((mass.value - 1.0).abs() < 1e-10, "mass {}", mass.value);
    }

    #[test]
    fn poly_profile_normalization() {
        // psi(x) = 1 + x at beta = 1: mass = 1/2 + 1/6 = 2/3, so the
        // normalized limit at 1 is (3/2) * 2 = 3.
        let law = MixingLaw::new(PsiProfile::Poly(vec![1.0, 1.0]), 1.0).unwrap();
        assert!((law.psi1() - 3.0).abs() < 1e-12, "psi1 {}", law.psi1());
        let mass = quad::integrate_default(|x| law.density(x), 0.0, 1.0);
        assert!((mass.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn grid_profile_matches_constant() {
        let law = MixingLaw::new(
            PsiProfile::Grid { nodes: vec![(0.0, 1.0), (1.0, 1.0)], limit: 1.0 },
            1.0,
        )
        .unwrap();
        let reference = critical();
        for &x in &[0.0, 0.25, 0.5, 0.9, 0.999] {
            assert!(
                (law.density(x) - reference.density(x)).abs() < 1e-9,
                "density mismatch at {x}"
            );
        }
        assert!((law.psi1() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_laws_are_rejected() {
        assert!(MixingLaw::constant(-1.0).is_err());
        assert!(MixingLaw::constant(f64::NAN).is_err());
        // negative on (0,1)
        assert!(MixingLaw::new(PsiProfile::Poly(vec![0.2, -1.0]), 1.0).is_err());
        // zero limit at 1
        assert!(MixingLaw::new(PsiProfile::Poly(vec![1.0, -1.0]), 1.0).is_err());
        assert!(MixingLaw::new(
            PsiProfile::Grid { nodes: vec![(0.5, 1.0), (0.5, 2.0)], limit: 1.0 },
            1.0
        )
        .is_err());
        assert!(MixingLaw::new(
            PsiProfile::Grid { nodes: vec![(0.0, 1.0)], limit: 0.0 },
            1.0
        )
        .is_err());
    }

    #[test]
    fn moment_finiteness_boundary() {
        // E[(1-alpha)^-p] finite iff p < beta + 1, divergent at equality.
        for &beta in &[-0.5, 0.0, 0.5, 1.0, 1.5, 2.0] {
            let law = MixingLaw::constant(beta).unwrap();
            for p in 0..=3 {
                let m = law.mixed_moment(0, p as f64, 0.0);
                let finite = (p as f64) < beta + 1.0;
                assert_eq!(
                    !m.is_divergent(),
                    finite,
                    "beta={beta} p={p}: got {m:?}"
                );
            }
        }
    }

    #[test]
    fn moments_match_closed_forms() {
        let law = critical();
        // E[alpha^k/(1-alpha)] = 2/(k+1) under density 2(1-x)
        for k in 0..=50 {
            let m = law.mixed_moment(k, 1.0, 0.0).expect_finite("moment");
            let expected = 2.0 / (k as f64 + 1.0);
            assert!(
                (m - expected).abs() <= 1e-8 * expected,
                "k={k}: {m} vs {expected}"
            );
        }
        // E[1/(1+alpha)] = 2 int (1-a)/(1+a) da = 2(2 ln 2 - 1)
        let m = law.mixed_moment(0, 0.0, 1.0).expect_finite("moment");
        let expected = 2.0 * (2.0 * std::f64::consts::LN_2 - 1.0);
        assert!((m - expected).abs() < 1e-10, "{m} vs {expected}");
        // E[1] = 1 for any valid law
        let one = law.mixed_moment(0, 0.0, 0.0).expect_finite("moment");
        assert!((one - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moment_against_midpoint_oracle() {
        // Independent check of the quadrature path: plain midpoint rule
        // with enough panels on the smooth case k=2, p=0, q=1.
        let law = critical();
        let n = 2_000_000;
        let mut acc = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) / n as f64;
            acc += x * x / (1.0 + x) * law.density(x);
        }
        let oracle = acc / n as f64;
        let m = law.mixed_moment(2, 0.0, 1.0).expect_finite("moment");
        assert!((m - oracle).abs() < 1e-9, "{m} vs oracle {oracle}");
    }

    #[test]
    fn fractional_exponents_allowed() {
        // E[(1-a)^(-3/2)] under density 2(1-a) is int 2(1-a)^(-1/2) da = 4,
        // an endpoint-singular integrand the adaptive rule must resolve.
        let law = critical();
        let m = law.mixed_moment(0, 1.5, 0.0).expect_finite("moment");
        assert!((m - 4.0).abs() < 1e-9, "got {m}");
    }

    #[test]
    fn slope_gap_inverts_variance_rate() {
        for &lambda in &[0.5, 1.0, 5.0] {
            let mut x = 0.01;
            while x <= 1e6 {
                let u = slope_gap(lambda, x);
                let back = lambda * (2.0 - u) / (u * u);
                assert!(
                    (back - x).abs() <= 1e-10 * x,
                    "lambda={lambda} x={x}: u={u} maps back to {back}"
                );
                x *= 10.0;
            }
        }
        // unit case: rate lambda(1+a)/(1-a)^2 = 1 at a = 0 when lambda = 1
        assert!((slope_gap(1.0, 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_tail_approaches_levy_intensity() {
        // For the critical constant profile the tail is exactly
        // N * gap^2, and N * P(slope > N x) -> psi1 * lambda / x.
        let law = critical();
        let lambda = 1.0;
        for &x in &[0.5, 1.0, 2.0, 10.0] {
            let n = 1e8;
            let got = law.scaled_tail(lambda, n, x);
            let exact = n * slope_gap(lambda, n * x).powi(2);
            assert!(
                (got - exact).abs() < 1e-8 * exact,
                "quadrature {got} vs closed form {exact}"
            );
            let levy = law.psi1() * lambda / x;
            assert!(
                (got - levy).abs() < 1e-3 * levy,
                "x={x}: scaled tail {got} vs levy {levy}"
            );
        }
    }

    #[test]
    fn sampling_matches_moments() {
        // MC means vs quadrature moments, three sigma bands.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cases = [
            MixingLaw::constant(1.0).unwrap(),
            MixingLaw::new(PsiProfile::Poly(vec![1.0, 1.0]), 1.0).unwrap(),
            MixingLaw::new(
                PsiProfile::Grid { nodes: vec![(0.0, 2.0), (0.5, 1.0), (1.0, 1.0)], limit: 1.0 },
                0.5,
            )
            .unwrap(),
        ];
        let n = 200_000;
        for law in &cases {
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            for _ in 0..n {
                let a = law.sample(&mut rng);
                assert!((0.0..1.0).contains(&a));
                s1 += a;
                s2 += a * a;
            }
            let mean = s1 / n as f64;
            let second = s2 / n as f64;
            let m1 = law.mixed_moment(1, 0.0, 0.0).expect_finite("E[a]");
            let m2 = law.mixed_moment(2, 0.0, 0.0).expect_finite("E[a^2]");
            let sd = ((m2 - m1 * m1) / n as f64).sqrt();
            assert!(
                (mean - m1).abs() < 4.0 * sd,
                "mean {mean} vs {m1} (profile {:?})",
                law.profile()
            );
            assert!((second - m2).abs() < 0.01, "second {second} vs {m2}");
        }
    }

    #[test]
    fn constant_sampler_quantiles() {
        // Inverse CDF check: F(x) = 1 - (1-x)^2 at beta = 1.
        let law = critical();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000usize;
        let mut xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        for &q in &[0.1, 0.5, 0.9] {
            let x_emp = xs[(q * n as f64) as usize];
            let x_exact = 1.0 - (1.0 - q).sqrt();
            assert!(
                (x_emp - x_exact).abs() < 0.01,
                "quantile {q}: {x_emp} vs {x_exact}"
            );
        }
    }
}
