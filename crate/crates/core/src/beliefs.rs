//! Probability aggregation and resource-headroom arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{ensure_positive, Error, Result};
use crate::likelihood::{likelihood_term, LikelihoodTerm};

/// Independent substreams per Monte Carlo run. Fixed so results do not
/// depend on the thread count.
pub const SHARDS: u64 = 64;
/// Smallest sample count accepted for a reported estimate.
pub const MIN_SAMPLES: u64 = 10_000;

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(name, format!("probability must lie in [0, 1], got {p}")))
    }
}

/// `1 - prod(1 - p_i)`.
pub fn disjunction_independent(marginals: &[f64]) -> Result<f64> {
    for p in marginals {
        check_probability("marginals", *p)?;
    }
    Ok(1.0 - marginals.iter().map(|p| 1.0 - p).product::<f64>())
}

/// Blocker arguments whose truth shares one Gaussian latent factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgumentSet {
    pub names: Vec<String>,
    pub marginals: Vec<f64>,
    /// Loading on the common factor, in `[0, 1)`.
    pub latent_corr: f64,
    pub seed: u64,
    pub n_samples: u64,
}

impl ArgumentSet {
    pub fn validate(&self) -> Result<()> {
        if self.marginals.is_empty() {
            return Err(Error::param("marginals", "need at least one argument"));
        }
        if self.names.len() != self.marginals.len() {
            return Err(Error::param("names", "need one name per marginal"));
        }
        for p in &self.marginals {
            check_probability("marginals", *p)?;
        }
        check_corr(self.latent_corr)?;
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::param(
                "n_samples",
                format!("need at least {MIN_SAMPLES} samples"),
            ));
        }
        Ok(())
    }
}

fn check_corr(c: f64) -> Result<()> {
    if (0.0..1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::param("latent_corr", format!("must lie in [0, 1), got {c}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub p: f64,
    pub std_err: f64,
}

impl Estimate {
    fn from_hits(hits: u64, n: u64) -> Self {
        let p = hits as f64 / n as f64;
        Self {
            p,
            std_err: (p * (1.0 - p) / n as f64).sqrt(),
        }
    }

    pub fn likelihood(&self) -> LikelihoodTerm {
        likelihood_term(self.p.clamp(0.0, 1.0)).expect("clamped probability")
    }
}

fn thresholds(marginals: &[f64]) -> Vec<f64> {
    let normal = Normal::standard();
    marginals
        .iter()
        .map(|&p| match p {
            0.0 => f64::NEG_INFINITY,
            1.0 => f64::INFINITY,
            p => normal.inverse_cdf(p),
        })
        .collect()
}

struct Tally {
    hits: Vec<u64>,
    /// Per adjacent grid pair: samples where the later point fired but the
    /// earlier did not, and vice versa.
    up: Vec<u64>,
    down: Vec<u64>,
}

impl Tally {
    fn zeros(points: usize) -> Self {
        Self {
            hits: vec![0; points],
            up: vec![0; points.saturating_sub(1)],
            down: vec![0; points.saturating_sub(1)],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in [
            (&mut self.hits, other.hits),
            (&mut self.up, other.up),
            (&mut self.down, other.down),
        ] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self
    }
}

/// Draws every sample once and evaluates the union event at each loading.
fn run_union(marginals: &[f64], corrs: &[f64], seed: u64, n: u64) -> Tally {
    let cut = thresholds(marginals);
    let loadings: Vec<(f64, f64)> = corrs.iter().map(|c| (c.sqrt(), (1.0 - c).sqrt())).collect();
    (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let count = n / SHARDS + u64::from(shard < n % SHARDS);
            let mut tally = Tally::zeros(corrs.len());
            let mut idio = vec![0.0; marginals.len()];
            let mut fired = vec![false; corrs.len()];
            for _ in 0..count {
                let common: f64 = rng.sample(StandardNormal);
                idio.iter_mut().for_each(|z| *z = rng.sample(StandardNormal));
                for (j, &(lc, li)) in loadings.iter().enumerate() {
                    fired[j] = idio.iter().zip(&cut).any(|(z, t)| lc * common + li * z < *t);
                    tally.hits[j] += u64::from(fired[j]);
                    if j > 0 {
                        tally.up[j - 1] += u64::from(fired[j] && !fired[j - 1]);
                        tally.down[j - 1] += u64::from(!fired[j] && fired[j - 1]);
                    }
                }
            }
            tally
        })
        .reduce(|| Tally::zeros(corrs.len()), Tally::merge)
}

/// Monte Carlo probability that at least one argument holds. Argument `i`
/// holds when `sqrt(c) Z + sqrt(1-c) Z_i` falls below the normal quantile
/// of its marginal.
pub fn disjunction_correlated(args: &ArgumentSet) -> Result<Estimate> {
    args.validate()?;
    let tally = run_union(&args.marginals, &[args.latent_corr], args.seed, args.n_samples);
    Ok(Estimate::from_hits(tally.hits[0], args.n_samples))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSweep {
    pub latent_corrs: Vec<f64>,
    pub estimates: Vec<Estimate>,
    /// Estimated change from each grid point to the next.
    pub differences: Vec<f64>,
    /// Standard error of each difference, paired over shared draws.
    pub difference_std_errs: Vec<f64>,
}

/// Evaluates the union probability across loadings using the same draws at
/// every grid point.
pub fn correlation_sweep(
    marginals: &[f64],
    latent_corrs: &[f64],
    seed: u64,
    n_samples: u64,
) -> Result<CorrelationSweep> {
    if latent_corrs.is_empty() {
        return Err(Error::param("latent_corrs", "need at least one grid point"));
    }
    for c in latent_corrs {
        check_corr(*c)?;
    }
    let probe = ArgumentSet {
        names: marginals.iter().enumerate().map(|(i, _)| format!("arg{i}")).collect(),
        marginals: marginals.to_vec(),
        latent_corr: latent_corrs[0],
        seed,
        n_samples,
    };
    probe.validate()?;
    let tally = run_union(marginals, latent_corrs, seed, n_samples);
    let n = n_samples as f64;
    let (differences, difference_std_errs) = tally
        .up
        .iter()
        .zip(&tally.down)
        .map(|(&up, &down)| {
            let mean = (up as f64 - down as f64) / n;
            let second = (up + down) as f64 / n;
            (mean, ((second - mean * mean) / n).sqrt())
        })
        .unzip();
    Ok(CorrelationSweep {
        latent_corrs: latent_corrs.to_vec(),
        estimates: tally.hits.iter().map(|&h| Estimate::from_hits(h, n_samples)).collect(),
        differences,
        difference_std_errs,
    })
}

/// Chance that a bottleneck appears within the next `ooms_ahead` orders of
/// magnitude, given one per `ooms_observed` so far:
/// `1 - 1 / (1 + ahead / observed)`.
pub fn laplace_time_invariant(ooms_observed: f64, ooms_ahead: f64) -> Result<f64> {
    ensure_positive("ooms_observed", ooms_observed)?;
    ensure_positive("ooms_ahead", ooms_ahead)?;
    Ok(ooms_ahead / (ooms_observed + ooms_ahead))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Headroom {
    pub current: f64,
    pub limit: f64,
    /// `log10(limit / current)`.
    pub ooms: f64,
}

impl Headroom {
    pub fn ratio(&self) -> f64 {
        self.limit / self.current
    }
}

/// Orders of magnitude between current use and a hard limit, in any shared
/// unit.
pub fn resource_headroom(current: f64, limit: f64) -> Result<Headroom> {
    ensure_positive("current", current)?;
    ensure_positive("limit", limit)?;
    if !(limit > current) {
        return Err(Error::param("limit", "must exceed current level"));
    }
    Ok(Headroom {
        current,
        limit,
        ooms: (limit / current).log10(),
    })
}

/// Constant annual growth `10^(ooms / years) - 1` that uses up the headroom
/// over the window.
pub fn implied_growth_under_headroom(ooms: f64, transition_years: f64) -> Result<f64> {
    ensure_positive("ooms", ooms)?;
    if !(transition_years > 0.0) {
        return Err(Error::param("transition_years", "must be positive"));
    }
    Ok(10f64.powf(ooms / transition_years) - 1.0)
}
