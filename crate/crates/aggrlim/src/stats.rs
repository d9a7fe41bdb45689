//! Estimators used by the verification suite.
//!
//! Panel statistics have heavy-tailed fourth moments (the squared
//! copy variance is only just integrable), so plain means of squared
//! quantities converge slowly and are fragile to a single extreme
//! coefficient draw. Covariances are therefore estimated by
//! median-of-means over replicates, which keeps the usual root-R rate
//! while bounding the influence of any one block.

use num_complex::Complex64;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::aggregation::{
    replicate_panel_rows, AggregationError, AlphaSource, Normalization, PanelSpec, TimeGrid,
};
use crate::mixing::MixingLaw;
use crate::processes::ModelParams;
use crate::sum::Accumulator;
use crate::theory::{exact_prelimit_cov, limit_cov_matrix, limit_variance_constant, LimitOrder};

/// Point estimate with a robust standard error and confidence band.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub point: f64,
    pub se: f64,
    pub blocks: usize,
    /// point +/- 1.58 IQR(block means) / sqrt(blocks), the notch-style
    /// interval; contains the point by construction.
    pub band: (f64, f64),
}

/// Median of the values, averaging the two middle order statistics
/// for even length.
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty(), "median of empty slice");
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    sorted_quantile(&v, 0.5)
}

/// Linear-interpolation quantile of an already sorted slice
/// (index p*(n-1), the convention most numeric packages default to).
fn sorted_quantile(v: &[f64], p: f64) -> f64 {
    let n = v.len();
    if n == 1 {
        return v[0];
    }
    let idx = p * (n - 1) as f64;
    let lo = idx.floor() as usize;
    let hi = idx.ceil() as usize;
    let frac = idx - lo as f64;
    v[lo] + frac * (v[hi] - v[lo])
}

/// Compensated sample mean.
pub fn sample_mean(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty(), "mean of empty slice");
    let mut acc = Accumulator::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value() / xs.len() as f64
}

/// Two-pass compensated sample variance with the 1/(n-1) convention.
pub fn sample_variance(xs: &[f64]) -> f64 {
    assert!(xs.len() >= 2, "variance needs at least two samples");
    let mean = sample_mean(xs);
    let mut acc = Accumulator::new();
    for &x in xs {
        let d = x - mean;
        acc.add(d * d);
    }
    acc.value() / (xs.len() - 1) as f64
}

/// Median-of-means: sample i goes to block i mod `blocks`, the point
/// is the median of the block means. Interleaved assignment keeps the
/// estimate stable under extending a replicate stream.
///
/// The standard error combines two normal-reference constants:
/// sd(block mean) is estimated by 1.4826 * MAD of the block means,
/// and the median of `blocks` near-normal block means has sd about
/// sqrt(pi/2) = 1.2533 times the mean's.
pub fn mom_estimate(samples: &[f64], blocks: usize) -> Estimate {
    assert!(blocks >= 1, "need at least one block");
    assert!(
        samples.len() >= blocks,
        "need at least one sample per block ({} < {})",
        samples.len(),
        blocks
    );
    let mut sums = vec![Accumulator::new(); blocks];
    let mut counts = vec![0u64; blocks];
    for (i, &x) in samples.iter().enumerate() {
        let b = i % blocks;
        sums[b].add(x);
        counts[b] += 1;
    }
    let mut means: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s.value() / c as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let point = sorted_quantile(&means, 0.5);
    let iqr = sorted_quantile(&means, 0.75) - sorted_quantile(&means, 0.25);
    let half_width = 1.58 * iqr / (blocks as f64).sqrt();
    let deviations: Vec<f64> = means.iter().map(|m| (m - point).abs()).collect();
    let mad = median(&deviations);
    let se = 1.2533 * 1.4826 * mad / (blocks as f64).sqrt();
    Estimate { point, se, blocks, band: (point - half_width, point + half_width) }
}

/// Covariance matrix of replicate rows (R rows of d entries), each
/// entry a median-of-means over the centered cross products. Rows are
/// centered by the compensated column means; the 1/R (not 1/(R-1))
/// convention is irrelevant at verification sample sizes.
pub fn mom_cov_matrix(rows: &[Vec<f64>], blocks: usize) -> Vec<Vec<Estimate>> {
    assert!(rows.len() >= 2, "covariance needs at least two rows");
    let d = rows[0].len();
    assert!(rows.iter().all(|r| r.len() == d), "ragged replicate rows");
    let col_means: Vec<f64> = (0..d)
        .map(|j| {
            let mut acc = Accumulator::new();
            for r in rows {
                acc.add(r[j]);
            }
            acc.value() / rows.len() as f64
        })
        .collect();
    let mut out = vec![Vec::with_capacity(d); d];
    let mut products = vec![0.0; rows.len()];
    for i in 0..d {
        for j in 0..d {
            if j < i {
                let e = out[j][i];
                out[i].push(e);
                continue;
            }
            for (r, row) in rows.iter().enumerate() {
                products[r] = (row[i] - col_means[i]) * (row[j] - col_means[j]);
            }
            out[i].push(mom_estimate(&products, blocks));
        }
    }
    out
}

/// Largest relative deviation between an estimated matrix and a
/// reference, over entries where the reference is nonzero; entries
/// with zero reference contribute their absolute deviation instead.
pub fn max_rel_deviation(estimate: &[Vec<Estimate>], reference: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (er, rr) in estimate.iter().zip(reference) {
        for (e, &r) in er.iter().zip(rr) {
            let dev = if r != 0.0 { ((e.point - r) / r).abs() } else { e.point.abs() };
            worst = worst.max(dev);
        }
    }
    worst
}

/// Two-sided Kolmogorov-Smirnov distance to Normal(mean, var), with
/// the asymptotic 1% critical value 1.628 / sqrt(R). `pass` compares
/// against that threshold; `meaningful` marks whether the sample is
/// large enough (R >= 1000) for the asymptotic threshold to be fair.
#[derive(Clone, Copy, Debug)]
pub struct KsResult {
    pub statistic: f64,
    pub threshold: f64,
    pub n_samples: usize,
    pub pass: bool,
    pub meaningful: bool,
}

pub fn ks_normal(samples: &[f64], mean: f64, var: f64) -> KsResult {
    assert!(!samples.is_empty(), "KS of empty sample");
    assert!(var > 0.0, "KS needs positive variance");
    let normal = Normal::new(mean, var.sqrt()).expect("valid normal");
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = normal.cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    // 2 exp(-2 c^2) = 0.01 at c = 1.628; later series terms < 1e-9
    let threshold = 1.628 / n.sqrt();
    KsResult {
        statistic: d,
        threshold,
        n_samples: v.len(),
        pass: d <= threshold,
        meaningful: v.len() >= 1000,
    }
}

/// Empirical characteristic function `mean of exp(i theta x)` at each
/// requested theta, real and imaginary parts compensated separately.
pub fn empirical_cf(samples: &[f64], thetas: &[f64]) -> Vec<Complex64> {
    assert!(!samples.is_empty(), "cf of empty sample");
    thetas
        .iter()
        .map(|&theta| {
            let mut re = Accumulator::new();
            let mut im = Accumulator::new();
            for &x in samples {
                let (s, c) = (theta * x).sin_cos();
                re.add(c);
                im.add(s);
            }
            let n = samples.len() as f64;
            Complex64::new(re.value() / n, im.value() / n)
        })
        .collect()
}

/// One (N, n) convergence experiment: the mom covariance of normalized
/// panel replicates next to its exact finite-size reference and the
/// Brownian limit kernel. Rows carry seed and replicate count so any
/// row can be recomputed from its own metadata.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SweepRow {
    pub regime: &'static str,
    pub n_copies: u64,
    pub time_scale: u64,
    pub replicates: u64,
    pub seed: u64,
    pub times: Vec<f64>,
    pub estimate: Vec<Vec<f64>>,
    pub estimate_se: Vec<Vec<f64>>,
    pub exact_reference: Vec<Vec<f64>>,
    pub limit_reference: Vec<Vec<f64>>,
    pub max_rel_dev_exact: f64,
    pub max_rel_dev_limit: f64,
}

fn panel_cov_row(
    spec: &PanelSpec,
    law: &MixingLaw,
    order: LimitOrder,
    replicates: u64,
    blocks: usize,
) -> Result<SweepRow, AggregationError> {
    let norm = match order {
        LimitOrder::CopiesFirst => Normalization::CopiesFirst,
        LimitOrder::TimeFirst => Normalization::TimeFirst,
    };
    let rows = replicate_panel_rows(spec, norm, replicates)?;
    let est = mom_cov_matrix(&rows, blocks);

    let steps = spec.grid.steps(spec.time_scale);
    let times = spec.grid.times(spec.time_scale);
    let d = steps.len();
    // the normalized second moment is exact at every finite size:
    // E[U_i U_j] = prelimit(m_i, m_j) / (n ln n) copies-first,
    //            = prelimit(m_i, m_j) / (n ln N) time-first
    let log_factor = match order {
        LimitOrder::CopiesFirst => (spec.time_scale as f64).ln(),
        LimitOrder::TimeFirst => (spec.n_copies as f64).ln(),
    };
    let scale = spec.time_scale as f64 * log_factor;
    let mut exact = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i..d {
            let pre = exact_prelimit_cov(&spec.params, law, steps[i], steps[j])
                .expect_finite("finite-size covariance");
            exact[i][j] = pre / scale;
            exact[j][i] = exact[i][j];
        }
    }
    let c = limit_variance_constant(&spec.params, order, law.psi1());
    let limit = limit_cov_matrix(&times, c);

    Ok(SweepRow {
        regime: match order {
            LimitOrder::CopiesFirst => "copies-first",
            LimitOrder::TimeFirst => "time-first",
        },
        n_copies: spec.n_copies,
        time_scale: spec.time_scale,
        replicates,
        seed: spec.seed,
        times,
        estimate: est.iter().map(|r| r.iter().map(|e| e.point).collect()).collect(),
        estimate_se: est.iter().map(|r| r.iter().map(|e| e.se).collect()).collect(),
        max_rel_dev_exact: max_rel_deviation(&est, &exact),
        max_rel_dev_limit: max_rel_deviation(&est, &limit),
        exact_reference: exact,
        limit_reference: limit,
    })
}

/// Copies-first protocol: fixed N, growing time scales. The exact
/// finite-size deviation should shrink with n; the limit-kernel
/// deviation shrinks only at log rate.
#[allow(clippy::too_many_arguments)]
pub fn sweep_copies_first(
    params: &ModelParams,
    law: &MixingLaw,
    n_copies: u64,
    time_scales: &[u64],
    grid: &TimeGrid,
    replicates: u64,
    seed: u64,
    blocks: usize,
) -> Result<Vec<SweepRow>, AggregationError> {
    time_scales
        .iter()
        .map(|&n| {
            let spec = PanelSpec {
                params: *params,
                alphas: AlphaSource::Mixing(law.clone()),
                n_copies,
                time_scale: n,
                grid: grid.clone(),
                seed,
            };
            panel_cov_row(&spec, law, LimitOrder::CopiesFirst, replicates, blocks)
        })
        .collect()
}

/// Time-first protocol: fixed time scale, growing copy counts.
#[allow(clippy::too_many_arguments)]
pub fn sweep_time_first(
    params: &ModelParams,
    law: &MixingLaw,
    copy_counts: &[u64],
    time_scale: u64,
    grid: &TimeGrid,
    replicates: u64,
    seed: u64,
    blocks: usize,
) -> Result<Vec<SweepRow>, AggregationError> {
    copy_counts
        .iter()
        .map(|&n_copies| {
            let spec = PanelSpec {
                params: *params,
                alphas: AlphaSource::Mixing(law.clone()),
                n_copies,
                time_scale,
                grid: grid.clone(),
                seed,
            };
            panel_cov_row(&spec, law, LimitOrder::TimeFirst, replicates, blocks)
        })
        .collect()
}
