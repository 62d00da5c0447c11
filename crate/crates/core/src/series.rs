//! Full observable snapshots and time series, plus their CSV/JSON form.
//!
//! Columns: `t,sx,sy,sz,purity,czz,cxx,cxy,cxz,concurrence`. Time is in units
//! of the inverse Ising coupling with `hbar = 1`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::even::EvenObservables;
use crate::model::{Quench, QuenchConfig};
use crate::odd::{longitudinal_magnetization, odd_rdm_entries, string_operator, CrossParityKernel};
use crate::rdm::{assemble_two_site, concurrence, correlators, Correlators, SingleSiteRDM, TwoSiteRDM};

pub const CSV_COLUMNS: [&str; 10] = ["t", "sx", "sy", "sz", "purity", "czz", "cxx", "cxy", "cxz", "concurrence"];

pub const TIME_UNITS_NOTE: &str = "time in units of the inverse Ising coupling, hbar = 1";

/// Everything computed at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub even: EvenObservables,
    pub c1: Complex64,
    pub c2: Complex64,
    pub single: SingleSiteRDM,
    pub two_site: TwoSiteRDM,
    pub correlators: Correlators,
    pub purity: f64,
    pub concurrence: f64,
}

impl Snapshot {
    pub fn record(&self) -> ObservableRecord {
        let [sx, sy, sz] = self.single.bloch;
        ObservableRecord {
            t: self.time,
            sx,
            sy,
            sz,
            purity: self.purity,
            czz: self.correlators.czz,
            cxx: self.correlators.cxx,
            cxy: self.correlators.cxy,
            cxz: self.correlators.cxz,
            concurrence: self.concurrence,
        }
    }
}

pub fn snapshot(quench: &Quench, t: f64) -> Result<Snapshot> {
    let state = quench.state_at(t);
    let even = EvenObservables::evaluate(&state);
    let kernel = CrossParityKernel::new(&state);
    let c1 = kernel.amplitude(1)?.value;
    let c2 = kernel.amplitude(2)?.value;
    let (sx, sy) = longitudinal_magnetization(c1);
    let single = SingleSiteRDM::new(sx, sy, even.sz);
    let (rho12, rho24) = odd_rdm_entries(c1, c2);
    let two_site = assemble_two_site(&even, rho12, rho24, &single)?;
    Ok(Snapshot {
        time: t,
        even,
        c1,
        c2,
        single,
        correlators: correlators(&two_site, c2),
        purity: single.purity(),
        concurrence: concurrence(&two_site)?,
        two_site,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub purity: f64,
    pub czz: f64,
    pub cxx: f64,
    pub cxy: f64,
    pub cxz: f64,
    pub concurrence: f64,
}

impl ObservableRecord {
    pub fn values(&self) -> [f64; 10] {
        [
            self.t,
            self.sx,
            self.sy,
            self.sz,
            self.purity,
            self.czz,
            self.cxx,
            self.cxy,
            self.cxz,
            self.concurrence,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub config: QuenchConfig,
    pub records: Vec<ObservableRecord>,
}

impl ObservableSeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    /// Column by CSV name; `None` for unknown names.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = CSV_COLUMNS.iter().position(|&c| c == name)?;
        Some(self.records.iter().map(|r| r.values()[idx]).collect())
    }
}

/// Evaluates every time point of `config` in parallel; output order follows
/// the time grid.
pub fn simulate(config: &QuenchConfig) -> Result<ObservableSeries> {
    let quench = Quench::new(config.n_sites, config.field_g)?;
    let records = config
        .time_grid
        .par_iter()
        .map(|&t| snapshot(&quench, t).map(|s| s.record()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservableSeries {
        config: config.clone(),
        records,
    })
}

/// `<X_j>_t` for each `j` in `sites`; `values[i][m]` belongs to
/// `times[i]` and `sites[m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StringSeries {
    pub config: QuenchConfig,
    pub sites: Vec<usize>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl StringSeries {
    pub fn column(&self, site: usize) -> Option<Vec<f64>> {
        let m = self.sites.iter().position(|&j| j == site)?;
        Some(self.values.iter().map(|row| row[m]).collect())
    }
}

pub fn string_operator_series(config: &QuenchConfig, sites: &[usize]) -> Result<StringSeries> {
    let quench = Quench::new(config.n_sites, config.field_g)?;
    let values = config
        .time_grid
        .par_iter()
        .map(|&t| {
            let kernel = CrossParityKernel::new(&quench.state_at(t));
            sites
                .iter()
                .map(|&j| kernel.amplitude(j).map(|a| string_operator(&a)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StringSeries {
        config: config.clone(),
        sites: sites.to_vec(),
        times: config.time_grid.clone(),
        values,
    })
}

/// Fixed 17-significant-digit scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

fn comment_block(out: &mut String, header: &[String]) {
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# {TIME_UNITS_NOTE}");
}

fn csv_rows<'a>(out: &mut String, columns: &[String], rows: impl Iterator<Item = Vec<f64>> + 'a) {
    let _ = writeln!(out, "{}", columns.join(","));
    for row in rows {
        let line: Vec<String> = row.into_iter().map(format_value).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
}

/// CSV with `#` comment lines (`header` first, then the units note), the
/// column header, and one row per time.
pub fn series_to_csv(series: &ObservableSeries, header: &[String]) -> String {
    let mut out = String::new();
    comment_block(&mut out, header);
    let columns: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
    csv_rows(&mut out, &columns, series.records.iter().map(|r| r.values().to_vec()));
    out
}

/// CSV with columns `t,X_<j>...`.
pub fn string_series_to_csv(series: &StringSeries, header: &[String]) -> String {
    let mut out = String::new();
    comment_block(&mut out, header);
    let mut columns = vec!["t".to_string()];
    columns.extend(series.sites.iter().map(|j| format!("X_{j}")));
    csv_rows(
        &mut out,
        &columns,
        series.times.iter().zip(&series.values).map(|(&t, row)| {
            let mut v = vec![t];
            v.extend(row);
            v
        }),
    );
    out
}

/// Generic table: `columns` names, `rows` values.
pub fn table_to_csv(columns: &[&str], rows: &[Vec<f64>], header: &[String]) -> String {
    let mut out = String::new();
    comment_block(&mut out, header);
    let columns: Vec<String> = columns.iter().map(|s| s.to_string()).collect();
    csv_rows(&mut out, &columns, rows.iter().cloned());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_time_grid;

    #[test]
    fn initial_snapshot() {
        let q = Quench::new(12, 1.0).unwrap();
        let s = snapshot(&q, 0.0).unwrap();
        let r = s.record();
        assert!((r.sx - 1.0).abs() < 1e-12);
        assert!(r.sy.abs() < 1e-12 && r.sz.abs() < 1e-12);
        assert!((r.purity - 1.0).abs() < 1e-12);
        assert!((r.cxx - 1.0).abs() < 1e-12 && r.czz.abs() < 1e-12);
        assert!(r.concurrence < 1e-6);
    }

    #[test]
    fn csv_layout_and_determinism() {
        let cfg = QuenchConfig::new(8, 0.7, uniform_time_grid(0.0, 1.0, 0.25).unwrap()).unwrap();
        let a = series_to_csv(&simulate(&cfg).unwrap(), &["spec".into()]);
        let b = series_to_csv(&simulate(&cfg).unwrap(), &["spec".into()]);
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], "# spec");
        assert!(lines[1].starts_with("# time in units"));
        assert_eq!(lines[2], CSV_COLUMNS.join(","));
        assert_eq!(lines.len(), 3 + 5);
        assert!(lines[3].starts_with("0.0000000000000000e0,"));
    }

    #[test]
    fn value_formatting_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0] {
            assert_eq!(format_value(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn string_series_matches_kernel() {
        let cfg = QuenchConfig::new(10, 1.0, vec![0.0, 0.5, 1.0]).unwrap();
        let s = string_operator_series(&cfg, &[1, 2, 4]).unwrap();
        assert!((s.column(1).unwrap()[0] - 1.0).abs() < 1e-12);
        assert!(s.column(4).unwrap()[0].abs() < 1e-12);
        let csv = string_series_to_csv(&s, &[]);
        assert!(csv.contains("t,X_1,X_2,X_4"));
    }
}
