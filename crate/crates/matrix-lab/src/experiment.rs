use std::collections::BTreeMap;

use freeconv_core::{boxplus, boxtimes, mp_product_law, mu_lambda_moments, MomentSequence};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::model::{sample_sides, sample_spectrum, Factor, MatrixModel, SpectrumSample};
use crate::stats::{empirical_moments, histogram, kolmogorov_distance, relative_errors, HistogramBin};

/// Seed of trial `index` under `master`: the SplitMix64 output function
/// applied to `master + (index + 1) · 0x9E3779B97F4A7C15`. Trials therefore
/// draw from independent streams whatever order they run in.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeErrors {
    pub lhs_rhs: Vec<f64>,
    pub lhs_theory: Vec<f64>,
    pub rhs_theory: Vec<f64>,
}

impl RelativeErrors {
    pub fn max(&self) -> f64 {
        self.lhs_rhs
            .iter()
            .chain(&self.lhs_theory)
            .chain(&self.rhs_theory)
            .copied()
            .fold(0.0, f64::max)
    }
}

/// Averaged moments of two spectra, their limits and pooled histograms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub model: String,
    pub params: BTreeMap<String, f64>,
    pub trials: usize,
    pub moments_lhs: Vec<f64>,
    pub moments_rhs: Vec<f64>,
    /// Limit of the left-hand moments.
    pub moments_theory: Vec<f64>,
    /// Limit of the right-hand moments.
    pub moments_theory_rhs: Vec<f64>,
    /// `lhs_rhs` compares the two empirical sides; the others compare each
    /// side with its own limit.
    pub rel_err: RelativeErrors,
    pub kolmogorov_lhs_rhs: f64,
    /// Largest total of clamped negative eigenvalues in any sample.
    pub clamped_max: f64,
    #[serde(skip)]
    pub histogram_lhs: Vec<HistogramBin>,
    #[serde(skip)]
    pub histogram_rhs: Vec<HistogramBin>,
    /// Per-trial empirical moments.
    #[serde(skip)]
    pub trial_moments_lhs: Vec<Vec<f64>>,
    #[serde(skip)]
    pub trial_moments_rhs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Params {
    pub n: usize,
    pub lambda: f64,
    pub c: f64,
    pub trials: usize,
    pub bins: usize,
    pub seed: u64,
    /// Number of moments compared.
    pub order: usize,
}

impl Figure1Params {
    pub fn new(n: usize, lambda: f64, c: f64, trials: usize, bins: usize, seed: u64) -> Self {
        Self {
            n,
            lambda,
            c,
            trials,
            bins,
            seed,
            order: 4,
        }
    }

    /// `(p, q) = (round(cn), round(n/λ))`.
    pub fn dims(&self) -> (usize, usize) {
        (
            (self.c * self.n as f64).round() as usize,
            (self.n as f64 / self.lambda).round() as usize,
        )
    }
}

/// `MM*` for the rank-one sum (left) against `(1/(nq))TTᵀQQᵀ` (right). Both
/// converge to `MP_c ⊠ μ_λ`, the law whose push-forward by `x -> x/λ` is
/// `MP_c ⊠ MP_{1/λ}`.
pub fn run_figure1(params: &Figure1Params) -> Result<ComparisonReport> {
    let &Figure1Params { n, lambda, c, trials, bins, seed, order } = params;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(LabError::InvalidParameter(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(LabError::InvalidParameter(format!("c must be positive, got {c}")));
    }
    check_trials(trials, order)?;
    let (p, q) = params.dims();
    let lhs_model = MatrixModel::RankOneSum { n, p, q };
    let rhs_model = MatrixModel::WishartProduct { n, p, q };
    let samples: Vec<(SpectrumSample, SpectrumSample)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            Ok((
                sample_spectrum(&lhs_model, trial_seed(seed, 2 * i))?,
                sample_spectrum(&rhs_model, trial_seed(seed, 2 * i + 1))?,
            ))
        })
        .collect::<Result<_>>()?;

    let theory = mp_product_law(&c, &(1.0 / lambda), order)?.dilate(&lambda);
    let mut report_params = BTreeMap::new();
    for (k, v) in [
        ("n", n as f64),
        ("p", p as f64),
        ("q", q as f64),
        ("lambda", lambda),
        ("c", c),
        ("bins", bins as f64),
        ("seed", seed as f64),
    ] {
        report_params.insert(k.to_string(), v);
    }
    assemble("figure1", report_params, &samples, theory.clone(), theory, bins, order)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdditivityParams {
    /// `FlatSum` or `BiInvariantSum`.
    pub model: MatrixModel,
    pub trials: usize,
    pub bins: usize,
    pub seed: u64,
    pub order: usize,
}

impl AdditivityParams {
    pub fn new(model: MatrixModel, trials: usize, seed: u64) -> Self {
        Self {
            model,
            trials,
            bins: 40,
            seed,
            order: 3,
        }
    }
}

/// Combined matrix (left) against the sum of the separate Gram matrices
/// (right), both normalised by `1/p`. With `μ_A`, `μ_B` the laws of `AA*`,
/// `BB*` and `λ = n/p`, the left side tends to `(μ_A ⊞ μ_B) ⊠ μ_λ` and the
/// right side to `(μ_A ⊠ μ_λ) ⊞ (μ_B ⊠ μ_λ)`; a flat sum is the case
/// `A = B = I`.
pub fn run_additivity_sim(params: &AdditivityParams) -> Result<ComparisonReport> {
    let AdditivityParams { model, trials, bins, seed, order } = params;
    if !model.is_additive() {
        return Err(LabError::InvalidParameter(format!("{} is not an additive model", model.name())));
    }
    check_trials(*trials, *order)?;
    let samples: Vec<(SpectrumSample, SpectrumSample)> = (0..*trials as u64)
        .into_par_iter()
        .map(|i| sample_sides(model, trial_seed(*seed, i)))
        .collect::<Result<_>>()?;

    let (n, p, a, b) = match model {
        MatrixModel::FlatSum { n, p } => (*n, *p, Factor::Identity, Factor::Identity),
        MatrixModel::BiInvariantSum { n, p, a, b } => (*n, *p, a.clone(), b.clone()),
        _ => unreachable!(),
    };
    let lambda = n as f64 / p as f64;
    let ml = mu_lambda_moments(&lambda, *order)?;
    let mu_a = empirical_moments(&a.squared_singular_values(n), *order);
    let mu_b = empirical_moments(&b.squared_singular_values(n), *order);
    let theory_lhs = boxtimes(&boxplus(&mu_a, &mu_b)?, &ml)?;
    let theory_rhs = boxplus(&boxtimes(&mu_a, &ml)?, &boxtimes(&mu_b, &ml)?)?;

    let mut report_params = BTreeMap::new();
    for (k, v) in [
        ("n", n as f64),
        ("p", p as f64),
        ("lambda", lambda),
        ("bins", *bins as f64),
        ("seed", *seed as f64),
    ] {
        report_params.insert(k.to_string(), v);
    }
    assemble(model.name(), report_params, &samples, theory_lhs, theory_rhs, *bins, *order)
}

fn check_trials(trials: usize, order: usize) -> Result<()> {
    if trials == 0 {
        return Err(LabError::InvalidParameter("trials must be at least 1".into()));
    }
    if order == 0 {
        return Err(LabError::InvalidParameter("order must be at least 1".into()));
    }
    Ok(())
}

fn assemble(
    name: &str,
    params: BTreeMap<String, f64>,
    samples: &[(SpectrumSample, SpectrumSample)],
    theory_lhs: MomentSequence<f64>,
    theory_rhs: MomentSequence<f64>,
    bins: usize,
    order: usize,
) -> Result<ComparisonReport> {
    let trial_moments_lhs: Vec<Vec<f64>> = samples
        .iter()
        .map(|(l, _)| empirical_moments(&l.eigenvalues, order).into_vec())
        .collect();
    let trial_moments_rhs: Vec<Vec<f64>> = samples
        .iter()
        .map(|(_, r)| empirical_moments(&r.eigenvalues, order).into_vec())
        .collect();
    let moments_lhs = average(&trial_moments_lhs, order);
    let moments_rhs = average(&trial_moments_rhs, order);

    let pooled_lhs: Vec<f64> = samples.iter().flat_map(|(l, _)| l.eigenvalues.iter().copied()).collect();
    let pooled_rhs: Vec<f64> = samples.iter().flat_map(|(_, r)| r.eigenvalues.iter().copied()).collect();
    let top = pooled_lhs.iter().chain(&pooled_rhs).copied().fold(0.0, f64::max);
    let range = (0.0, if top > 0.0 { top } else { 1.0 });
    let clamped_max = samples
        .iter()
        .map(|(l, r)| l.clamped.max(r.clamped))
        .fold(0.0, f64::max);

    let theory_lhs = theory_lhs.into_vec();
    let theory_rhs = theory_rhs.into_vec();
    Ok(ComparisonReport {
        model: name.to_string(),
        params,
        trials: samples.len(),
        rel_err: RelativeErrors {
            lhs_rhs: relative_errors(&moments_lhs, &moments_rhs),
            lhs_theory: relative_errors(&moments_lhs, &theory_lhs),
            rhs_theory: relative_errors(&moments_rhs, &theory_rhs),
        },
        moments_lhs,
        moments_rhs,
        moments_theory: theory_lhs,
        moments_theory_rhs: theory_rhs,
        kolmogorov_lhs_rhs: kolmogorov_distance(&pooled_lhs, &pooled_rhs),
        clamped_max,
        histogram_lhs: histogram(&pooled_lhs, bins, range)?,
        histogram_rhs: histogram(&pooled_rhs, bins, range)?,
        trial_moments_lhs,
        trial_moments_rhs,
    })
}

fn average(rows: &[Vec<f64>], order: usize) -> Vec<f64> {
    let mut acc = vec![0.0; order];
    for row in rows {
        for (a, x) in acc.iter_mut().zip(row) {
            *a += x;
        }
    }
    acc.into_iter().map(|a| a / rows.len() as f64).collect()
}
