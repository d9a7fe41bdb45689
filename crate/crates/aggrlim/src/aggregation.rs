//! Panel simulation and aggregation.
//!
//! A panel is `N` independent copies of the chosen process, each with
//! its own coefficient. For a grid of time points t the panel statistic
//! is the doubly indexed sum
//!
//! `S(t) = sum_{j<=N} sum_{k<=floor(n t)} (X_k^(j) - mu_j)`
//!
//! with `mu_j` the exact conditional stationary mean of copy j. Two
//! normalizations turn S into the quantity with a Brownian limit,
//! depending on which of N and n grows first; both are provided.
//!
//! Simulation is streaming: a copy's path is never materialized, only
//! its running centered sum, snapshotted at grid boundaries. Copies are
//! reduced with the fixed-shape compensated tree of [`crate::sum`], so
//! a panel is a pure function of (spec, replicate id) regardless of
//! thread count. Grid positions are carried as exact integers: the
//! step count of time t is floor(n * num / den) in integer arithmetic,
//! never a float product.

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::mixing::MixingLaw;
use crate::processes::{Ar1Copy, Inar1Copy, ModelParams, ProcessError};
use crate::rng::Streams;
use crate::sum::{chunked_vector_sum, Accumulator};

#[derive(Debug, Error)]
pub enum AggregationError {
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error("panel needs at least one copy")]
    ZeroCopies,
    #[error("invalid time grid: {0}")]
    BadGrid(String),
    #[error(
        "mixing exponent beta = {beta} gives divergent copy moments \
         (needs beta > 0); aggregate statistics would not converge"
    )]
    DivergentMixing { beta: f64 },
    #[error("fixed coefficient list has {got} entries, panel has {expected} copies")]
    FixedAlphaCount { expected: u64, got: usize },
    #[error("{what} normalization needs {which} >= 2, got {got}")]
    NormalizeDomain { what: &'static str, which: &'static str, got: u64 },
    #[error("aggregate lags must be strictly increasing")]
    BadLags,
    #[error("need at least one replicate")]
    ZeroReplicates,
}

/// Time grid of a panel, exact by construction.
#[derive(Clone, Debug, PartialEq)]
pub enum TimeGrid {
    /// Time points as exact rationals (num, den); the step count at
    /// scale n is floor(n * num / den).
    Times(Vec<(u64, u64)>),
    /// Step counts given directly; the time of entry m is m / n.
    Steps(Vec<u64>),
}

impl TimeGrid {
    pub fn validate(&self) -> Result<(), AggregationError> {
        match self {
            TimeGrid::Times(ts) => {
                if ts.is_empty() {
                    return Err(AggregationError::BadGrid("empty grid".into()));
                }
                for &(_, den) in ts {
                    if den == 0 {
                        return Err(AggregationError::BadGrid("zero denominator".into()));
                    }
                }
                // strictly increasing as rationals: a/b < c/d iff ad < cb
                for w in ts.windows(2) {
                    let (a, b) = (w[0].0 as u128, w[0].1 as u128);
                    let (c, d) = (w[1].0 as u128, w[1].1 as u128);
                    if a * d >= c * b {
                        return Err(AggregationError::BadGrid(
                            "time points not strictly increasing".into(),
                        ));
                    }
                }
                Ok(())
            }
            TimeGrid::Steps(ms) => {
                if ms.is_empty() {
                    return Err(AggregationError::BadGrid("empty grid".into()));
                }
                for w in ms.windows(2) {
                    if w[0] >= w[1] {
                        return Err(AggregationError::BadGrid(
                            "step counts not strictly increasing".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TimeGrid::Times(ts) => ts.len(),
            TimeGrid::Steps(ms) => ms.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Step counts at time scale n, in u128 to keep n * num exact for
    /// any u64 inputs.
    pub fn steps(&self, time_scale: u64) -> Vec<u64> {
        match self {
            TimeGrid::Times(ts) => ts
                .iter()
                .map(|&(num, den)| {
                    let m = (time_scale as u128 * num as u128) / den as u128;
                    u64::try_from(m).expect("step count overflows u64")
                })
                .collect(),
            TimeGrid::Steps(ms) => ms.clone(),
        }
    }

    /// Time points as f64, for reporting only.
    pub fn times(&self, time_scale: u64) -> Vec<f64> {
        match self {
            TimeGrid::Times(ts) => ts.iter().map(|&(num, den)| num as f64 / den as f64).collect(),
            TimeGrid::Steps(ms) => ms.iter().map(|&m| m as f64 / time_scale as f64).collect(),
        }
    }
}

/// Where copy coefficients come from.
#[derive(Clone, Debug)]
pub enum AlphaSource {
    /// One fresh draw from the mixing law per copy.
    Mixing(MixingLaw),
    /// Frozen coefficients, one per copy; used to study the panel
    /// conditionally on the coefficients.
    Fixed(Vec<f64>),
}

/// Full description of one panel experiment.
#[derive(Clone, Debug)]
pub struct PanelSpec {
    pub params: ModelParams,
    pub alphas: AlphaSource,
    /// N: number of copies aggregated per replicate.
    pub n_copies: u64,
    /// n: time scale; grid times map to floor(n t) steps.
    pub time_scale: u64,
    pub grid: TimeGrid,
    pub seed: u64,
}

impl PanelSpec {
    pub fn validate(&self) -> Result<(), AggregationError> {
        self.params.validate()?;
        if self.n_copies == 0 {
            return Err(AggregationError::ZeroCopies);
        }
        self.grid.validate()?;
        match &self.alphas {
            AlphaSource::Mixing(law) => {
                // aggregate covariances are E[rate-type moments], finite
                // only for beta > 0; refuse rather than report noise
                if law.beta() <= 0.0 {
                    return Err(AggregationError::DivergentMixing { beta: law.beta() });
                }
            }
            AlphaSource::Fixed(alphas) => {
                if alphas.len() as u64 != self.n_copies {
                    return Err(AggregationError::FixedAlphaCount {
                        expected: self.n_copies,
                        got: alphas.len(),
                    });
                }
                for &a in alphas {
                    if !(0.0..1.0).contains(&a) {
                        return Err(AggregationError::Process(ProcessError::BadCoefficient(a)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Identification of an aggregate with the inputs that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleMeta {
    pub n_copies: u64,
    pub time_scale: u64,
    pub seed: u64,
    pub replicate: u64,
}

/// Unnormalized aggregate values S(t) on the grid.
#[derive(Clone, Debug)]
pub struct AggregateSample {
    pub values: Vec<f64>,
    pub meta: SampleMeta,
}

/// Centered partial-sum snapshots of a single copy at the grid steps.
///
/// This is the exact per-copy term of the panel sum; the panel is the
/// fixed-order compensated reduction of these over copies. Public so
/// additivity and prefix properties can be tested against the panel.
pub fn copy_contribution(
    spec: &PanelSpec,
    replicate: u64,
    copy: u64,
    steps: &[u64],
) -> Result<Vec<f64>, ProcessError> {
    let streams = Streams::new(spec.seed);
    let mut rng = streams.copy_rng(replicate, copy);
    let alpha = match &spec.alphas {
        AlphaSource::Mixing(law) => law.sample(&mut rng),
        AlphaSource::Fixed(alphas) => alphas[copy as usize],
    };
    let m_max = steps.iter().copied().max().unwrap_or(0);
    let mut out = Vec::with_capacity(steps.len());
    let mut running = Accumulator::new();
    let mut g = 0;
    while g < steps.len() && steps[g] == 0 {
        out.push(0.0);
        g += 1;
    }
    match &spec.params {
        ModelParams::Ar1(p) => {
            let mut copy_state = Ar1Copy::stationary(alpha, p, &mut rng)?;
            for k in 1..=m_max {
                let x = copy_state.step(&mut rng);
                running.add(x);
                while g < steps.len() && steps[g] == k {
                    out.push(running.value());
                    g += 1;
                }
            }
        }
        ModelParams::Inar1(p) => {
            let mut copy_state = Inar1Copy::stationary(alpha, p, &mut rng)?;
            let mean = p.lambda / (1.0 - alpha);
            for k in 1..=m_max {
                let x = copy_state.step(&mut rng) as f64;
                running.add(x - mean);
                while g < steps.len() && steps[g] == k {
                    out.push(running.value());
                    g += 1;
                }
            }
        }
    }
    debug_assert_eq!(out.len(), steps.len());
    Ok(out)
}

/// Simulate one replicate of the panel: the aggregate S(t) over the
/// grid. Bit-reproducible for fixed (spec, replicate) at any thread
/// count.
pub fn simulate_panel_fdd(spec: &PanelSpec, replicate: u64) -> Result<AggregateSample, AggregationError> {
    spec.validate()?;
    let steps = spec.grid.steps(spec.time_scale);
    let width = steps.len();

    // first failing copy index, u64::MAX while none
    let failed = AtomicU64::new(u64::MAX);
    let values = chunked_vector_sum(spec.n_copies as usize, width, |j, acc| {
        match copy_contribution(spec, replicate, j as u64, &steps) {
            Ok(contrib) => {
                for (a, v) in acc.iter_mut().zip(&contrib) {
                    a.add(*v);
                }
            }
            Err(_) => {
                failed.fetch_min(j as u64, Ordering::Relaxed);
            }
        }
    });

    let failed = failed.load(Ordering::Relaxed);
    if failed != u64::MAX {
        // reconstruct the error for the diagnostic
        let err = copy_contribution(spec, replicate, failed, &steps)
            .expect_err("copy failed during panel but not on replay");
        return Err(err.into());
    }

    Ok(AggregateSample {
        values,
        meta: SampleMeta {
            n_copies: spec.n_copies,
            time_scale: spec.time_scale,
            seed: spec.seed,
            replicate,
        },
    })
}

/// Copies-first normalization: S / sqrt(n ln n * N). Needs n >= 2.
pub fn normalize_copies_first(sample: &AggregateSample) -> Result<Vec<f64>, AggregationError> {
    let n = sample.meta.time_scale;
    if n < 2 {
        return Err(AggregationError::NormalizeDomain {
            what: "copies-first",
            which: "time scale n",
            got: n,
        });
    }
    let nf = n as f64;
    let denom = (nf * nf.ln() * sample.meta.n_copies as f64).sqrt();
    Ok(sample.values.iter().map(|v| v / denom).collect())
}

/// Time-first normalization: S / sqrt(n * N ln N). Needs N >= 2.
pub fn normalize_time_first(sample: &AggregateSample) -> Result<Vec<f64>, AggregationError> {
    let n_copies = sample.meta.n_copies;
    if n_copies < 2 {
        return Err(AggregationError::NormalizeDomain {
            what: "time-first",
            which: "copy count N",
            got: n_copies,
        });
    }
    let nf = sample.meta.n_copies as f64;
    let denom = (sample.meta.time_scale as f64 * nf * nf.ln()).sqrt();
    Ok(sample.values.iter().map(|v| v / denom).collect())
}

/// Which scaling to apply to raw aggregate values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Unscaled S(t).
    Raw,
    /// S / sqrt(n ln n * N).
    CopiesFirst,
    /// S / sqrt(n * N ln N).
    TimeFirst,
}

pub fn normalize(sample: &AggregateSample, norm: Normalization) -> Result<Vec<f64>, AggregationError> {
    match norm {
        Normalization::Raw => Ok(sample.values.clone()),
        Normalization::CopiesFirst => normalize_copies_first(sample),
        Normalization::TimeFirst => normalize_time_first(sample),
    }
}

/// Replicate rows of the (optionally normalized) panel statistic:
/// row r is the grid vector of replicate r, r = 0..replicates.
pub fn replicate_panel_rows(
    spec: &PanelSpec,
    norm: Normalization,
    replicates: u64,
) -> Result<Vec<Vec<f64>>, AggregationError> {
    if replicates == 0 {
        return Err(AggregationError::ZeroReplicates);
    }
    let mut rows = Vec::with_capacity(replicates as usize);
    for r in 0..replicates {
        let sample = simulate_panel_fdd(spec, r)?;
        rows.push(normalize(&sample, norm)?);
    }
    Ok(rows)
}

/// Replicate rows of [`simple_aggregate`], one row per replicate.
pub fn replicate_simple_rows(
    params: &ModelParams,
    law: &MixingLaw,
    n_copies: u64,
    lags: &[u32],
    seed: u64,
    replicates: u64,
) -> Result<Vec<Vec<f64>>, AggregationError> {
    if replicates == 0 {
        return Err(AggregationError::ZeroReplicates);
    }
    let mut rows = Vec::with_capacity(replicates as usize);
    for r in 0..replicates {
        rows.push(simple_aggregate(params, law, n_copies, lags, seed, r)?);
    }
    Ok(rows)
}

/// Cross-sectional aggregate at fixed lags, no time summation:
/// `N^(-1/2) sum_j (X_k^(j) - mu_j)` for each requested k. The lag-k
/// and lag-l aggregates have covariance equal to the mixed stationary
/// covariance at lag |k-l|, which is what the verification estimates.
pub fn simple_aggregate(
    params: &ModelParams,
    law: &MixingLaw,
    n_copies: u64,
    lags: &[u32],
    seed: u64,
    replicate: u64,
) -> Result<Vec<f64>, AggregationError> {
    params.validate()?;
    if n_copies == 0 {
        return Err(AggregationError::ZeroCopies);
    }
    if lags.is_empty() || lags.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AggregationError::BadLags);
    }
    if law.beta() <= 0.0 {
        return Err(AggregationError::DivergentMixing { beta: law.beta() });
    }
    let streams = Streams::new(seed);
    let k_max = *lags.last().unwrap();

    let failed = AtomicU64::new(u64::MAX);
    let params = *params;
    let values = chunked_vector_sum(n_copies as usize, lags.len(), |j, acc| {
        let mut rng = streams.copy_rng(replicate, j as u64);
        let alpha = law.sample(&mut rng);
        let mean = params.conditional_mean(alpha);
        let push = |slot: &mut Accumulator, x: f64| slot.add(x - mean);
        match &params {
            ModelParams::Ar1(p) => match Ar1Copy::stationary(alpha, p, &mut rng) {
                Ok(mut state) => {
                    let mut g = 0;
                    if lags[g] == 0 {
                        push(&mut acc[g], state.value());
                        g += 1;
                    }
                    for k in 1..=k_max {
                        let x = state.step(&mut rng);
                        if g < lags.len() && lags[g] == k {
                            push(&mut acc[g], x);
                            g += 1;
                        }
                    }
                }
                Err(_) => {
                    failed.fetch_min(j as u64, Ordering::Relaxed);
                }
            },
            ModelParams::Inar1(p) => match Inar1Copy::stationary(alpha, p, &mut rng) {
                Ok(mut state) => {
                    let mut g = 0;
                    if lags[g] == 0 {
                        push(&mut acc[g], state.value() as f64);
                        g += 1;
                    }
                    for k in 1..=k_max {
                        let x = state.step(&mut rng) as f64;
                        if g < lags.len() && lags[g] == k {
                            push(&mut acc[g], x);
                            g += 1;
                        }
                    }
                }
                Err(_) => {
                    failed.fetch_min(j as u64, Ordering::Relaxed);
                }
            },
        }
    });

    if failed.load(Ordering::Relaxed) != u64::MAX {
        return Err(AggregationError::Process(ProcessError::MeanOverflow {
            mean: f64::INFINITY,
            cap: crate::processes::INAR_MEAN_CAP,
        }));
    }

    let scale = 1.0 / (n_copies as f64).sqrt();
    Ok(values.into_iter().map(|v| v * scale).collect())
}

/// Normalized sum of per-copy variance rates,
/// `(N ln N)^(-1) sum_j rate(alpha_j)`. The rate law has a tail of
/// index 1, so this converges in probability to its tail constant:
/// `lambda * psi1` for INAR, `sigma2 * psi1 / 2` for AR. Needs N >= 2.
pub fn slope_statistic(
    params: &ModelParams,
    law: &MixingLaw,
    n_copies: u64,
    seed: u64,
    replicate: u64,
) -> Result<f64, AggregationError> {
    params.validate()?;
    if n_copies < 2 {
        return Err(AggregationError::NormalizeDomain {
            what: "slope statistic",
            which: "copy count N",
            got: n_copies,
        });
    }
    let streams = Streams::new(seed);
    let params = *params;
    let total = chunked_vector_sum(n_copies as usize, 1, |j, acc| {
        let mut rng = streams.copy_rng(replicate, j as u64);
        let alpha = law.sample(&mut rng);
        acc[0].add(params.variance_rate(alpha));
    });
    let nf = n_copies as f64;
    Ok(total[0] / (nf * nf.ln()))
}

/// Centered copy-rate sum `sum_j rate(alpha_j)/N - E[rate 1{rate<=N}]`,
/// the quantity converging to the 1-stable law with characteristic
/// function [`crate::theory::stable_cf`]. Needs N >= 1.
pub fn centered_rate_sum(
    params: &ModelParams,
    law: &MixingLaw,
    n_copies: u64,
    seed: u64,
    replicate: u64,
) -> Result<f64, AggregationError> {
    params.validate()?;
    if n_copies == 0 {
        return Err(AggregationError::ZeroCopies);
    }
    let streams = Streams::new(seed);
    let params_v = *params;
    let total = chunked_vector_sum(n_copies as usize, 1, |j, acc| {
        let mut rng = streams.copy_rng(replicate, j as u64);
        let alpha = law.sample(&mut rng);
        acc[0].add(params_v.variance_rate(alpha));
    });
    let nf = n_copies as f64;
    let centering = crate::theory::truncated_rate_mean(params, law, nf);
    Ok(total[0] / nf - centering)
}
