use std::fmt::Write as _;

use anyhow::{Context, Result};
use ising_quench_core::limits::{asymptotic_decay_law, thermodynamic_limit, LimitObservable};
use ising_quench_core::series::{
    format_value, series_to_csv, simulate, string_operator_series, string_series_to_csv, table_to_csv, CSV_COLUMNS,
    TIME_UNITS_NOTE,
};
use ising_quench_core::{compare_with_oracle, fit_exponential, ObservableSeries, OracleComparison};
use rayon::prelude::*;
use serde::Serialize;

use crate::spec::{Command, Format, RunSpec};

/// Rendered output plus whether a gate (ed-check tolerance) failed.
pub struct Outcome {
    pub text: String,
    pub failed: bool,
    /// One-line summary for stderr.
    pub summary: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            failed: false,
            summary: None,
        }
    }
}

fn to_json<T: Serialize>(spec: &RunSpec, data: &T) -> Result<String> {
    #[derive(Serialize)]
    struct Envelope<'a, T> {
        spec: &'a RunSpec,
        units: &'static str,
        data: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Envelope {
        spec,
        units: TIME_UNITS_NOTE,
        data,
    })?;
    s.push('\n');
    Ok(s)
}

pub fn run(spec: &RunSpec) -> Result<Outcome> {
    match spec.command {
        Command::Evolve => evolve(spec),
        Command::StringOp => string_op(spec),
        Command::SweepG => sweep_g(spec),
        Command::Fit => fit(spec),
        Command::EdCheck => ed_check(spec),
        Command::Limits => limits(spec),
    }
}

fn evolve(spec: &RunSpec) -> Result<Outcome> {
    let series = simulate(&spec.quench_config(spec.g)?)?;
    Ok(Outcome::ok(match spec.format {
        Format::Csv => series_to_csv(&series, &spec.header()),
        Format::Json => to_json(spec, &series)?,
    }))
}

fn string_op(spec: &RunSpec) -> Result<Outcome> {
    let series = string_operator_series(&spec.quench_config(spec.g)?, &spec.j_list)?;
    Ok(Outcome::ok(match spec.format {
        Format::Csv => string_series_to_csv(&series, &spec.header()),
        Format::Json => to_json(spec, &series)?,
    }))
}

fn sweep_g(spec: &RunSpec) -> Result<Outcome> {
    let runs = spec
        .g_list
        .par_iter()
        .map(|&g| {
            let config = spec.quench_config(g)?;
            simulate(&config).with_context(|| format!("g = {g}"))
        })
        .collect::<Result<Vec<ObservableSeries>>>()?;
    Ok(Outcome::ok(match spec.format {
        Format::Csv => {
            let mut columns = vec!["g"];
            columns.extend(CSV_COLUMNS);
            let rows: Vec<Vec<f64>> = runs
                .iter()
                .flat_map(|s| {
                    s.records.iter().map(|r| {
                        let mut row = vec![s.config.field_g];
                        row.extend(r.values());
                        row
                    })
                })
                .collect();
            table_to_csv(&columns, &rows, &spec.header())
        }
        Format::Json => to_json(spec, &runs)?,
    }))
}

#[derive(Debug, Serialize)]
struct FitRow {
    g: f64,
    prefactor: f64,
    prefactor_stddev: f64,
    rate: f64,
    rate_stddev: f64,
    log_residual: f64,
    samples: usize,
    /// closed-form `A(g)`, only for `g < 1`
    prefactor_formula: Option<f64>,
    /// quadrature `gamma(g)`, only for `g <= 1`
    rate_quadrature: Option<f64>,
}

const FIT_COLUMNS: [&str; 9] = [
    "g",
    "A",
    "A_stddev",
    "gamma",
    "gamma_stddev",
    "log_residual",
    "samples",
    "A_formula",
    "gamma_quadrature",
];

fn fit(spec: &RunSpec) -> Result<Outcome> {
    let window = spec.window.context("fit needs a window")?;
    let rows = spec
        .g_list
        .par_iter()
        .map(|&g| {
            let series = string_operator_series(&spec.quench_config(g)?, &[1])?;
            let sx = series.column(1).unwrap_or_default();
            let fit = fit_exponential(&series.times, &sx, window).with_context(|| format!("fit at g = {g}"))?;
            let law = (g <= 1.0).then(|| asymptotic_decay_law(g)).transpose()?;
            Ok(FitRow {
                g,
                prefactor: fit.prefactor,
                prefactor_stddev: fit.prefactor_stddev,
                rate: fit.rate,
                rate_stddev: fit.rate_stddev,
                log_residual: fit.residual,
                samples: fit.samples,
                prefactor_formula: law.and_then(|l| l.prefactor),
                rate_quadrature: law.map(|l| l.rate),
            })
        })
        .collect::<Result<Vec<FitRow>>>()?;
    Ok(Outcome::ok(match spec.format {
        Format::Csv => {
            let table: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.g,
                        r.prefactor,
                        r.prefactor_stddev,
                        r.rate,
                        r.rate_stddev,
                        r.log_residual,
                        r.samples as f64,
                        r.prefactor_formula.unwrap_or(f64::NAN),
                        r.rate_quadrature.unwrap_or(f64::NAN),
                    ]
                })
                .collect();
            table_to_csv(&FIT_COLUMNS, &table, &spec.header())
        }
        Format::Json => to_json(spec, &rows)?,
    }))
}

fn ed_check(spec: &RunSpec) -> Result<Outcome> {
    let times = spec.times()?;
    let cmp: OracleComparison = compare_with_oracle(spec.n_sites, spec.g, &times)?;
    let (worst_name, worst) = cmp.worst();
    let pass = worst <= spec.tol;
    let summary = format!(
        "{}: max deviation {worst:.3e} ({worst_name}) over {} time points, tol {:e}",
        if pass { "PASS" } else { "FAIL" },
        cmp.time_points,
        spec.tol
    );
    let text = match spec.format {
        Format::Csv => {
            let mut out = String::new();
            for line in spec.header() {
                let _ = writeln!(out, "# {line}");
            }
            let _ = writeln!(out, "# {TIME_UNITS_NOTE}");
            let _ = writeln!(out, "observable,max_deviation");
            for (name, dev) in &cmp.max_deviation {
                let _ = writeln!(out, "{name},{}", format_value(*dev));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                comparison: &'a OracleComparison,
                worst_observable: &'a str,
                worst_deviation: f64,
                pass: bool,
            }
            to_json(
                spec,
                &Report {
                    comparison: &cmp,
                    worst_observable: worst_name,
                    worst_deviation: worst,
                    pass,
                },
            )?
        }
    };
    Ok(Outcome {
        text,
        failed: !pass,
        summary: Some(summary),
    })
}

#[derive(Debug, Serialize)]
struct LimitRow {
    t: f64,
    sz: f64,
    cxx: f64,
    rho11: f64,
}

fn limits(spec: &RunSpec) -> Result<Outcome> {
    let g = spec.g;
    let rows = spec
        .times()?
        .par_iter()
        .map(|&t| {
            Ok(LimitRow {
                t,
                sz: thermodynamic_limit(g, t, LimitObservable::Sz)?,
                cxx: thermodynamic_limit(g, t, LimitObservable::Cxx)?,
                rho11: thermodynamic_limit(g, t, LimitObservable::Rho11)?,
            })
        })
        .collect::<Result<Vec<LimitRow>>>()?;
    Ok(Outcome::ok(match spec.format {
        Format::Csv => {
            let table: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.t, r.sz, r.cxx, r.rho11]).collect();
            table_to_csv(&["t", "sz", "cxx", "rho11"], &table, &spec.header())
        }
        Format::Json => to_json(spec, &rows)?,
    }))
}
