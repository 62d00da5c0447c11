//! Run specification: clap flags merged over an optional key-value config
//! file, then validated per command.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use ising_quench_core::model::{uniform_time_grid, QuenchConfig};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Evolve,
    StringOp,
    SweepG,
    Fit,
    EdCheck,
    Limits,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::StringOp => "string-op",
            Command::SweepG => "sweep-g",
            Command::Fit => "fit",
            Command::EdCheck => "ed-check",
            Command::Limits => "limits",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, false).map_err(|_| anyhow!("unknown command `{s}`"))
    }

    /// Keys other than the common ones this command reads.
    fn extra_keys(self) -> &'static [&'static str] {
        match self {
            Command::Evolve | Command::Limits => &[],
            Command::StringOp => &["j-list"],
            Command::SweepG => &["g-list"],
            Command::Fit => &["g-list", "window"],
            Command::EdCheck => &["tol"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. All optional so that config-file values
/// can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Key-value config file (`key = value` per line, `#` comments)
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Ring size N (even, >= 4)
    #[arg(long)]
    pub n: Option<usize>,

    /// Post-quench transverse field g
    #[arg(long)]
    pub g: Option<f64>,

    #[arg(long)]
    pub t_min: Option<f64>,

    #[arg(long)]
    pub t_max: Option<f64>,

    #[arg(long)]
    pub dt: Option<f64>,

    /// Field values: `a:step:b` or a comma list
    #[arg(long, value_name = "LIST")]
    pub g_list: Option<String>,

    /// String-operator distances: `a:step:b`, `a:b` or a comma list
    #[arg(long, value_name = "LIST")]
    pub j_list: Option<String>,

    /// Fit window `lo,hi`
    #[arg(long, value_name = "LO,HI")]
    pub window: Option<String>,

    /// Largest tolerated deviation for ed-check
    #[arg(long)]
    pub tol: Option<f64>,

    /// Output file; stdout when absent or `-`
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

const KEYS: [&str; 12] = [
    "command", "n", "g", "t-min", "t-max", "dt", "g-list", "j-list", "window", "tol", "output", "format",
];

const COMMON_KEYS: [&str; 8] = ["command", "n", "g", "t-min", "t-max", "dt", "output", "format"];

/// Raw string values keyed by flag name, before typing.
#[derive(Debug, Clone, Default)]
struct RawSpec {
    entries: Vec<(String, String)>,
}

impl RawSpec {
    fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn set(&mut self, key: &str, value: String) {
        self.entries.push((key.to_string(), value));
    }
}

/// Parses `key = value` lines. Keys accept `_` or `-`; unknown keys and
/// duplicates are errors.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if !KEYS.contains(&key.as_str()) {
            bail!("line {}: unknown key `{key}`", lineno + 1);
        }
        if value.is_empty() {
            bail!("line {}: empty value for `{key}`", lineno + 1);
        }
        if out.iter().any(|(k, _)| *k == key) {
            bail!("line {}: duplicate key `{key}`", lineno + 1);
        }
        out.push((key, value.to_string()));
    }
    Ok(out)
}

fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in config {}", path.display()))
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| anyhow!("invalid `{key}` value `{v}`: {e}"))
}

fn snap(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// `a:step:b` (inclusive, snapped to 1e-12) or `a,b,c`.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    let out = if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(|p| parse_num("list", p)).collect::<Result<_>>()?;
        let [a, step, b] = parts[..] else {
            bail!("range `{s}` must be `start:step:end`");
        };
        if !(step > 0.0) || !(b >= a) {
            bail!("range `{s}` needs step > 0 and end >= start");
        }
        let count = ((b - a) / step + 1e-9).floor() as usize;
        (0..=count).map(|i| snap(a + i as f64 * step)).collect()
    } else {
        s.split(',').map(|p| parse_num("list", p)).collect::<Result<Vec<f64>>>()?
    };
    if out.is_empty() {
        bail!("empty list `{s}`");
    }
    Ok(out)
}

/// `a:step:b`, `a:b` or `a,b,c` over integers.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let out = if s.contains(':') {
        let parts: Vec<usize> = s.split(':').map(|p| parse_num("list", p)).collect::<Result<_>>()?;
        let (a, step, b) = match parts[..] {
            [a, b] => (a, 1, b),
            [a, step, b] => (a, step, b),
            _ => bail!("range `{s}` must be `start:end` or `start:step:end`"),
        };
        if step == 0 || b < a {
            bail!("range `{s}` needs step > 0 and end >= start");
        }
        (a..=b).step_by(step).collect()
    } else {
        s.split(',').map(|p| parse_num("list", p)).collect::<Result<Vec<usize>>>()?
    };
    if out.is_empty() {
        bail!("empty list `{s}`");
    }
    Ok(out)
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| anyhow!("window `{s}` must be `lo,hi`"))?;
    let (lo, hi) = (parse_num("window", lo)?, parse_num("window", hi)?);
    if !(lo >= 0.0 && hi > lo) {
        bail!("window `{s}` needs 0 <= lo < hi");
    }
    Ok((lo, hi))
}

/// Fully resolved and validated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSpec {
    pub command: Command,
    pub n_sites: usize,
    pub g: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub dt: f64,
    pub g_list: Vec<f64>,
    pub j_list: Vec<usize>,
    pub window: Option<(f64, f64)>,
    pub tol: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

struct Defaults {
    n: usize,
    t_min: f64,
    t_max: f64,
    dt: f64,
}

fn defaults(command: Command) -> Defaults {
    match command {
        Command::EdCheck => Defaults { n: 10, t_min: 0.0, t_max: 10.0, dt: 0.2 },
        Command::Fit => Defaults { n: 100, t_min: 0.0, t_max: 20.0, dt: 0.1 },
        _ => Defaults { n: 60, t_min: 0.0, t_max: 10.0, dt: 0.05 },
    }
}

impl RunSpec {
    /// Config file first, then flags on top; validation last.
    pub fn resolve(command: Command, args: &RunArgs) -> Result<Self> {
        let mut raw = RawSpec::default();
        if let Some(path) = &args.config {
            raw.entries = read_config(path)?;
        }
        if let Some(c) = raw.get("command") {
            let from_file = Command::parse(c)?;
            if from_file != command {
                bail!("config file is for `{from_file}` but `{command}` was requested");
            }
        }
        let flags: [(&str, Option<String>); 11] = [
            ("n", args.n.map(|v| v.to_string())),
            ("g", args.g.map(|v| v.to_string())),
            ("t-min", args.t_min.map(|v| v.to_string())),
            ("t-max", args.t_max.map(|v| v.to_string())),
            ("dt", args.dt.map(|v| v.to_string())),
            ("g-list", args.g_list.clone()),
            ("j-list", args.j_list.clone()),
            ("window", args.window.clone()),
            ("tol", args.tol.map(|v| v.to_string())),
            ("output", args.output.as_ref().map(|p| p.display().to_string())),
            ("format", args.format.map(|f| format!("{f:?}").to_lowercase())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.set(key, v);
            }
        }
        for (key, _) in &raw.entries {
            if command == Command::Limits && key == "n" {
                bail!("`limits` is for the infinite ring and takes no `n`");
            }
            if !COMMON_KEYS.contains(&key.as_str()) && !command.extra_keys().contains(&key.as_str()) {
                bail!("`{key}` does not apply to `{command}`");
            }
        }
        Self::from_raw(command, &raw)
    }

    fn from_raw(command: Command, raw: &RawSpec) -> Result<Self> {
        let d = defaults(command);
        let n_sites = raw.get("n").map(|v| parse_num("n", v)).transpose()?.unwrap_or(d.n);
        let g = raw.get("g").map(|v| parse_num("g", v)).transpose()?.unwrap_or(1.0);
        let window = raw.get("window").map(parse_window).transpose()?;
        let (wlo, whi) = window.unwrap_or((d.t_min, d.t_max));
        let (t_min_default, t_max_default) = if command == Command::Fit { (wlo, whi) } else { (d.t_min, d.t_max) };
        let t_min = raw.get("t-min").map(|v| parse_num("t-min", v)).transpose()?.unwrap_or(t_min_default);
        let t_max = raw.get("t-max").map(|v| parse_num("t-max", v)).transpose()?.unwrap_or(t_max_default);
        let dt = raw.get("dt").map(|v| parse_num("dt", v)).transpose()?.unwrap_or(d.dt);
        let g_list = raw.get("g-list").map(parse_f64_list).transpose()?.unwrap_or_default();
        let j_list = match raw.get("j-list") {
            Some(v) => parse_usize_list(v)?,
            None => (1..=n_sites).collect(),
        };
        let tol = raw.get("tol").map(|v| parse_num("tol", v)).transpose()?.unwrap_or(1e-8);
        let output = raw.get("output").filter(|&p| p != "-").map(PathBuf::from);
        let format = match raw.get("format") {
            Some(v) => Format::from_str(v, true).map_err(|_| anyhow!("unknown format `{v}` (csv or json)"))?,
            None => Format::Csv,
        };
        let spec = RunSpec {
            command,
            n_sites,
            g,
            t_min,
            t_max,
            dt,
            g_list,
            j_list,
            window,
            tol,
            output,
            format,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        // surfaces ring-size, field and grid errors before any work starts
        self.quench_config(self.g)?;
        if let Some(&j) = self.j_list.iter().find(|&&j| j == 0 || j > self.n_sites) {
            bail!("string distance j = {j} outside [1, {}]", self.n_sites);
        }
        if matches!(self.command, Command::SweepG | Command::Fit) && self.g_list.is_empty() {
            bail!("`{}` needs --g-list", self.command);
        }
        for &g in &self.g_list {
            ising_quench_core::model::validate_field(g)?;
        }
        if self.command == Command::Fit {
            let (lo, hi) = self.window.ok_or_else(|| anyhow!("`fit` needs --window lo,hi"))?;
            if lo < self.t_min || hi > self.t_max + 1e-9 {
                bail!("window [{lo}, {hi}] not inside the time range [{}, {}]", self.t_min, self.t_max);
            }
        }
        if !(self.tol > 0.0) {
            bail!("tol must be positive");
        }
        Ok(())
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        Ok(uniform_time_grid(self.t_min, self.t_max, self.dt)?)
    }

    pub fn quench_config(&self, g: f64) -> Result<QuenchConfig> {
        Ok(QuenchConfig::new(self.n_sites, g, self.times()?)?)
    }

    /// Comment lines echoing every setting that affects the output.
    pub fn header(&self) -> Vec<String> {
        let mut lines = vec![format!("ising-quench {}", self.command)];
        if self.command == Command::Limits {
            lines.push("n = infinity".into());
        } else {
            lines.push(format!("n = {}", self.n_sites));
        }
        if !matches!(self.command, Command::SweepG | Command::Fit) {
            lines.push(format!("g = {}", self.g));
        }
        lines.push(format!("t-min = {}", self.t_min));
        lines.push(format!("t-max = {}", self.t_max));
        lines.push(format!("dt = {}", self.dt));
        let keys = self.command.extra_keys();
        if keys.contains(&"g-list") {
            let v: Vec<String> = self.g_list.iter().map(|g| g.to_string()).collect();
            lines.push(format!("g-list = {}", v.join(",")));
        }
        if keys.contains(&"j-list") {
            let v: Vec<String> = self.j_list.iter().map(|j| j.to_string()).collect();
            lines.push(format!("j-list = {}", v.join(",")));
        }
        if let Some((lo, hi)) = self.window {
            lines.push(format!("window = {lo},{hi}"));
        }
        if keys.contains(&"tol") {
            lines.push(format!("tol = {}", self.tol));
        }
        lines
    }
}
