//! Parameter parsing and execution for each scenario model. Parsing
//! validates everything up front so a rejected config writes no files.

use serde_json::json;

use super::config::{Model, Params, ScenarioConfig};
use super::output::Outputs;
use super::svg::{Chart, Series};
use crate::beliefs::{correlation_sweep, disjunction_independent, ArgumentSet, Estimate};
use crate::ces::{
    automation_schedule, back_loaded_share, finite_boost_level_effect, level_effect,
    ScaleUpTable, SCALE_UP_FRACTIONS, SCALE_UP_RHOS,
};
use crate::delays::{
    asymptotic_growth, delay_discount, fitted_growth, halving_time, settling_horizon,
    simulate_delay, DelayParams,
};
use crate::digital_workers::{
    calibrate_a, simulate_on as simulate_digital, steady_state_growth, DigitalEconomyParams,
    UsCalibration,
};
use crate::error::{ensure_positive, Error, Result};
use crate::fixtures::{SCHEDULE_MULTIPLIER, SCHEDULE_RHOS, SCHEDULE_YEARS};
use crate::growth::{
    detect_explosive, finite_time_blowup, fit_power_law_exponent, EXPLOSIVE_THRESHOLD,
};
use crate::integrate::{IntegrationResult, SampleGrid, DEFAULT_GRID_POINTS};
use crate::likelihood::likelihood_term;
use crate::semi_endog::{
    hyperbolic_exponent, simulate_multifactor_on, simulate_tfp_capital_on, worst_case_exponent,
    MultiFactorParams, SemiEndogParams,
};
use crate::trajectory::Trajectory;

/// A fully validated scenario, ready to execute.
#[derive(Debug, Clone)]
pub(crate) enum Job {
    SemiEndog {
        params: SemiEndogParams,
        horizon: f64,
        grid: usize,
    },
    Multifactor {
        params: MultiFactorParams,
        horizon: f64,
        grid: usize,
    },
    Digital {
        params: DigitalEconomyParams,
        horizon: f64,
        grid: usize,
    },
    CesLevel {
        fractions: Vec<f64>,
        rhos: Vec<f64>,
        boost: Option<f64>,
    },
    CesSchedule {
        rhos: Vec<f64>,
        m: f64,
        horizon: f64,
        rate: f64,
    },
    Delay {
        params: DelayParams,
        horizon: f64,
    },
    Beliefs {
        names: Vec<String>,
        marginals: Vec<f64>,
        latent_corrs: Vec<f64>,
        n_samples: u64,
        seed: u64,
    },
}

fn horizon(config: &ScenarioConfig, default: f64) -> Result<f64> {
    let h = config.horizon.unwrap_or(default);
    ensure_positive("horizon", h)?;
    Ok(h)
}

fn grid(config: &ScenarioConfig) -> Result<usize> {
    let n = config.output_grid.unwrap_or(DEFAULT_GRID_POINTS);
    if n < 2 {
        return Err(Error::param("output_grid", "need at least 2 samples"));
    }
    Ok(n)
}

fn reject_extras(config: &ScenarioConfig, model: Model) -> Result<()> {
    if config.technology.is_some() && model != Model::Multifactor {
        return Err(Error::param("technology", "only valid for model `multifactor`"));
    }
    if config.arguments.is_some() && model != Model::Beliefs {
        return Err(Error::param("arguments", "only valid for model `beliefs`"));
    }
    Ok(())
}

pub(crate) fn prepare(config: &ScenarioConfig) -> Result<Job> {
    let model = config.model()?;
    reject_extras(config, model)?;
    let mut p = Params::new(&config.parameters);
    let job = match model {
        Model::SemiEndog => {
            let params = SemiEndogParams {
                beta: p.number("beta", 0.7)?,
                phi: p.number("phi", 1.0 / 0.32)?,
                lambda: p.number("lambda", 1.0)?,
                saving_share_ideas: p.number("saving_share_ideas", 0.1)?,
                saving_share_factors: p.number("saving_share_factors", 0.2)?,
                a0: p.number("a0", 1.0)?,
                k0: p.number("k0", 1.0)?,
            };
            params.validate()?;
            Job::SemiEndog {
                params,
                horizon: horizon(config, 200.0)?,
                grid: grid(config)?,
            }
        }
        Model::Multifactor => {
            let degree = p.number("degree", 2.0)?;
            let alpha = p.number("alpha", 0.2)?;
            let endowments = p.list("endowments", &[1.0, 1.0])?;
            let returns = p.list("returns", &vec![1.0; endowments.len()])?;
            let params = match config.technology.as_deref().unwrap_or("cobb-douglas") {
                "cobb-douglas" => {
                    MultiFactorParams::cobb_douglas(degree, endowments, alpha).with_returns(returns)
                }
                "leontief" => MultiFactorParams::leontief(degree, endowments, returns, alpha),
                other => {
                    return Err(Error::param(
                        "technology",
                        format!("expected `cobb-douglas` or `leontief`, got `{other}`"),
                    ))
                }
            };
            params.validate()?;
            Job::Multifactor {
                params,
                horizon: horizon(config, 50.0)?,
                grid: grid(config)?,
            }
        }
        Model::Digital => {
            let alpha = p.number("alpha", UsCalibration::EMPLOYED.alpha)?;
            let calibration = UsCalibration {
                alpha,
                ..UsCalibration::EMPLOYED
            };
            let a = match p.optional_number("a")? {
                Some(a) => a,
                None => calibrate_a(&calibration)?,
            };
            let params = DigitalEconomyParams {
                a,
                alpha,
                s: p.number("s", 0.2)?,
                f: p.number("f", alpha)?,
                c_bar: p.number("c_bar", 1.5e4)?,
                delta_l: p.number("delta_l", 0.0)?,
                delta_k: p.number("delta_k", 0.0)?,
                l0: p.number("l0", calibration.labor)?,
                k0: p.number("k0", calibration.capital)?,
            };
            params.validate()?;
            Job::Digital {
                params,
                horizon: horizon(config, 50.0)?,
                grid: grid(config)?,
            }
        }
        Model::CesLevel => {
            let fractions = p.list("f", &SCALE_UP_FRACTIONS)?;
            let rhos = p.list("rho", &SCALE_UP_RHOS)?;
            let boost = p.optional_number("m")?;
            for &f in &fractions {
                for &rho in &rhos {
                    match boost {
                        Some(m) => finite_boost_level_effect(f, rho, m)?,
                        None => level_effect(f, rho)?,
                    };
                }
            }
            Job::CesLevel {
                fractions,
                rhos,
                boost,
            }
        }
        Model::CesSchedule => {
            let rhos = p.list("rho", &SCHEDULE_RHOS)?;
            let m = p.number("m", SCHEDULE_MULTIPLIER)?;
            let horizon = horizon(config, SCHEDULE_YEARS)?;
            let rate = p.number("rate", 1.0 / horizon)?;
            for &rho in &rhos {
                automation_schedule(rho, m, horizon, rate)?;
            }
            Job::CesSchedule {
                rhos,
                m,
                horizon,
                rate,
            }
        }
        Model::Delay => {
            let a = p.number("a", 2.0 / 3.0)?;
            let s = p.number("s", 0.3)?;
            let eta = p.number("eta", a * s)?;
            let k0 = p.number("k0", 1.0)?;
            let i0 = p.number("i0", s * a * k0)?;
            let params = DelayParams { a, s, eta, k0, i0 };
            params.validate()?;
            if eta.is_infinite() {
                return Err(Error::param("eta", "must be finite"));
            }
            let default_horizon = settling_horizon(a, s, eta)?;
            Job::Delay {
                params,
                horizon: horizon(config, default_horizon)?,
            }
        }
        Model::Beliefs => {
            let args = config
                .arguments
                .clone()
                .ok_or_else(|| Error::param("arguments", "beliefs needs an [arguments] table"))?;
            let latent_corrs = p.list("latent_corr", &[0.3])?;
            let n = p.number("n_samples", 100_000.0)?;
            if !(n >= 1.0 && n.fract() == 0.0) {
                return Err(Error::param("n_samples", "must be a positive integer"));
            }
            let seed = config.seed.unwrap_or(0);
            for &latent_corr in &latent_corrs {
                ArgumentSet {
                    names: args.names.clone(),
                    marginals: args.marginals.clone(),
                    latent_corr,
                    seed,
                    n_samples: n as u64,
                }
                .validate()?;
            }
            Job::Beliefs {
                names: args.names,
                marginals: args.marginals,
                latent_corrs,
                n_samples: n as u64,
                seed,
            }
        }
    };
    p.finish(model)?;
    Ok(job)
}

fn run_summary(run: &IntegrationResult) -> serde_json::Value {
    json!({
        "terminated": format!("{:?}", run.terminated),
        "blowup_time": run.blowup_time,
        "samples": run.trajectory.len(),
        "accepted_steps": run.accepted_steps,
    })
}

fn explosive_summary(traj: &Trajectory) -> serde_json::Value {
    match detect_explosive(traj, EXPLOSIVE_THRESHOLD) {
        Ok(a) => json!({
            "explosive": a.explosive,
            "first_explosive_year": a.first_explosive_year,
            "peak_annual_growth": a.peak_annual_growth,
        }),
        Err(_) => json!({ "explosive": null, "reason": "run shorter than two calendar years" }),
    }
}

fn output_chart(title: &str, traj: &Trajectory) -> String {
    let points = traj.times().iter().copied().zip(traj.output().iter().copied()).collect();
    Chart::new(title, "years", "Y")
        .log_y()
        .lines(&[Series::new("Y", points)])
}

fn label(prefix: &str, v: f64) -> String {
    format!("{prefix}={v}")
}

impl Job {
    pub(crate) fn execute(&self) -> Result<Outputs> {
        let mut out = Outputs::default();
        match self {
            Job::SemiEndog {
                params,
                horizon,
                grid,
            } => {
                let run = simulate_tfp_capital_on(params, *horizon, SampleGrid::Uniform(*grid))?;
                let steps = simulate_tfp_capital_on(params, *horizon, SampleGrid::Steps)?;
                out.add_trajectory("trajectory.csv", &run.trajectory)?;
                out.add("chart.svg", output_chart("TFP and capital economy", &run.trajectory));
                out.add_json(
                    "summary.json",
                    &json!({
                        "model": "semi-endog",
                        "returns_sum": params.lambda / params.phi + params.beta,
                        "regime": format!("{:?}", params.regime()?),
                        "finite_time_blowup": finite_time_blowup(&steps)?,
                        "run": run_summary(&run),
                        "growth": explosive_summary(&run.trajectory),
                    }),
                );
            }
            Job::Multifactor {
                params,
                horizon,
                grid,
            } => {
                let run = simulate_multifactor_on(params, *horizon, SampleGrid::Uniform(*grid))?;
                out.add_trajectory("trajectory.csv", &run.trajectory)?;
                out.add("chart.svg", output_chart("Multi-factor economy", &run.trajectory));
                let fit = fit_power_law_exponent(&run.trajectory).ok();
                out.add_json(
                    "summary.json",
                    &json!({
                        "model": "multifactor",
                        "fitted_exponent": fit.map(|f| f.exponent),
                        "fit_r_squared": fit.map(|f| f.r_squared),
                        "hyperbolic_exponent": hyperbolic_exponent(params.degree)?,
                        "worst_case_exponent": worst_case_exponent(&params.returns, params.degree)?,
                        "run": run_summary(&run),
                    }),
                );
            }
            Job::Digital {
                params,
                horizon,
                grid,
            } => {
                let run = simulate_digital(params, *horizon, SampleGrid::Uniform(*grid))?;
                let traj = &run.trajectory;
                out.add_trajectory("trajectory.csv", traj)?;
                out.add("chart.svg", output_chart("Digital-worker economy", traj));
                let end = traj.last_time().unwrap_or(0.0);
                let start = (end - 10.0).max(traj.first_time().unwrap_or(0.0));
                let final_growth = traj.log_growth_rate(start, end).ok();
                let ratio = match (traj.state_column("L"), traj.state_column("K")) {
                    (Some(l), Some(k)) => l.last().zip(k.last()).map(|(l, k)| l / k),
                    _ => None,
                };
                out.add_json(
                    "summary.json",
                    &json!({
                        "model": "digital",
                        "a": params.a,
                        "steady_state_growth": steady_state_growth(params).ok(),
                        "final_decade_growth": final_growth,
                        "final_labor_capital_ratio": ratio,
                        "balanced_labor_capital_ratio": params.balanced_labor_capital_ratio(),
                        "growth": explosive_summary(traj),
                        "run": run_summary(&run),
                    }),
                );
            }
            Job::CesLevel {
                fractions,
                rhos,
                boost,
            } => {
                let values = fractions
                    .iter()
                    .map(|&f| {
                        rhos.iter()
                            .map(|&rho| match boost {
                                Some(m) => finite_boost_level_effect(f, rho, *m),
                                None => level_effect(f, rho),
                            })
                            .collect()
                    })
                    .collect::<Result<Vec<Vec<f64>>>>()?;
                let table = ScaleUpTable {
                    fractions: fractions.clone(),
                    rhos: rhos.clone(),
                    values,
                };
                let mut buf = Vec::new();
                table.write_csv(&mut buf)?;
                out.add("table.csv", buf);
                out.add("chart.svg", scale_up_chart(&table));
            }
            Job::CesSchedule {
                rhos,
                m,
                horizon,
                rate,
            } => {
                let curves = rhos
                    .iter()
                    .map(|&rho| automation_schedule(rho, *m, *horizon, *rate))
                    .collect::<Result<Vec<_>>>()?;
                write_schedule(&mut out, rhos, &curves)?;
                let shares = rhos
                    .iter()
                    .zip(&curves)
                    .map(|(rho, c)| Ok(json!({ "rho": rho, "final_decile_share": back_loaded_share(c, 0.1)? })))
                    .collect::<Result<Vec<_>>>()?;
                out.add_json(
                    "summary.json",
                    &json!({ "model": "ces-schedule", "m": m, "rate": rate, "back_loading": shares }),
                );
            }
            Job::Delay { params, horizon } => {
                let run = simulate_delay(params, *horizon)?;
                out.add_trajectory("trajectory.csv", &run.trajectory)?;
                out.add("chart.svg", output_chart("Delayed investment", &run.trajectory));
                let eigen = asymptotic_growth(params.a, params.s, params.eta)?;
                let fitted = fitted_growth(&run)?;
                out.add_json(
                    "summary.json",
                    &json!({
                        "model": "delay",
                        "eigenvalue": eigen,
                        "delay_discount": delay_discount(params.a, params.s, params.eta)?,
                        "halving_time_years": halving_time(params.eta)?,
                        "fitted_growth": fitted,
                        "fit_rel_error": (fitted - eigen).abs() / eigen,
                        "run": run_summary(&run),
                    }),
                );
            }
            Job::Beliefs {
                names,
                marginals,
                latent_corrs,
                n_samples,
                seed,
            } => {
                let independent = disjunction_independent(marginals)?;
                let sweep = correlation_sweep(marginals, latent_corrs, *seed, *n_samples)?;
                let mut rows = vec![belief_row("independent", 0.0, independent, 0.0)?];
                for (c, Estimate { p, std_err }) in sweep.latent_corrs.iter().zip(&sweep.estimates) {
                    rows.push(belief_row("correlated", *c, *p, *std_err)?);
                }
                for (name, p) in names.iter().zip(marginals) {
                    rows.push(belief_row(&format!("marginal:{name}"), 0.0, *p, 0.0)?);
                }
                out.add_table(
                    "beliefs.csv",
                    &["aggregate", "latent_corr", "estimate", "std_err", "likelihood"],
                    &rows,
                )?;
                let categories: Vec<String> = std::iter::once("independent".to_string())
                    .chain(latent_corrs.iter().map(|c| label("corr", *c)))
                    .collect();
                let heights = std::iter::once(independent)
                    .chain(sweep.estimates.iter().map(|e| e.p))
                    .collect();
                out.add(
                    "chart.svg",
                    Chart::new("Probability that some blocker holds", "dependence", "P")
                        .bars(&categories, &[("P(any)".to_string(), heights)]),
                );
                out.add_json("summary.json", &json!({ "model": "beliefs", "seed": seed, "sweep": sweep }));
            }
        }
        Ok(out)
    }
}

fn belief_row(name: &str, corr: f64, p: f64, se: f64) -> Result<Vec<String>> {
    Ok(vec![
        name.to_string(),
        corr.to_string(),
        p.to_string(),
        se.to_string(),
        likelihood_term(p.clamp(0.0, 1.0))?.label().to_string(),
    ])
}

pub(crate) fn scale_up_chart(table: &ScaleUpTable) -> String {
    let categories: Vec<String> = table.fractions.iter().map(|f| label("f", *f)).collect();
    let series: Vec<(String, Vec<f64>)> = table
        .rhos
        .iter()
        .enumerate()
        .map(|(j, rho)| (label("rho", *rho), table.values.iter().map(|row| row[j]).collect()))
        .collect();
    Chart::new("Output multiplier from automation", "unautomated fraction", "multiplier")
        .log_y()
        .bars(&categories, &series)
}

pub(crate) fn write_schedule(out: &mut Outputs, rhos: &[f64], curves: &[Trajectory]) -> Result<()> {
    let mut header = vec!["t_years".to_string()];
    header.extend(rhos.iter().map(|r| label("rho", *r)));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let times = curves[0].times();
    let rows: Vec<Vec<String>> = times
        .iter()
        .enumerate()
        .map(|(i, t)| {
            std::iter::once(t.to_string())
                .chain(curves.iter().map(|c| c.output()[i].to_string()))
                .collect()
        })
        .collect();
    out.add_table("schedule.csv", &header_refs, &rows)?;
    let series: Vec<Series> = rhos
        .iter()
        .zip(curves)
        .map(|(rho, c)| {
            Series::new(
                label("rho", *rho),
                c.times().iter().copied().zip(c.output().iter().copied()).collect(),
            )
        })
        .collect();
    out.add(
        "chart.svg",
        Chart::new("Output during gradual automation", "years", "Y(t)/Y(0)")
            .log_y()
            .lines(&series),
    );
    Ok(())
}
