//! Command-line driver: figure reproduction, sweeps, CSV and SVG output.
//!
//! A run is described by a [`RunConfig`], filled from experiment defaults,
//! then an optional `key = value` file, then command-line flags.

mod svg;
mod table;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

pub use svg::{render_svg, PlotSpec};
pub use table::{format_sig, format_value, parse_csv, ResultTable, SIG_DIGITS};

use crate::entanglement::PairConcurrence;
use crate::spin_model::{AnisoDimerParams, ClusterSpec, SpinMagnitude};
use crate::thermo::AnisoDimerModel;
use crate::witness::{
    linear_grid, sweep_alpha, sweep_spin, witness_report, AllToAllKind, AlphaSweep,
};

pub const TOOL_VERSION: &str = concat!("spinwitness ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    SweepAlpha,
    SweepSpin,
    Witness,
    PqScan,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Self::Fig1,
        Self::Fig2,
        Self::Fig3,
        Self::Fig4,
        Self::Fig5,
        Self::Fig6,
        Self::SweepAlpha,
        Self::SweepSpin,
        Self::Witness,
        Self::PqScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
            Self::SweepAlpha => "sweep-alpha",
            Self::SweepSpin => "sweep-spin",
            Self::Witness => "witness",
            Self::PqScan => "pq-scan",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    CsvSvg,
}

impl FromStr for OutputFormat {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Self::Csv),
            "csv+svg" => Ok(Self::CsvSvg),
            _ => Err(CliError::Usage(format!(
                "unknown format '{s}' (csv | csv+svg)"
            ))),
        }
    }
}

/// Cluster selected for `witness` and `sweep-spin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterChoice {
    AllToAll(AllToAllKind),
    Tetramer,
}

impl ClusterChoice {
    fn name(self) -> &'static str {
        match self {
            Self::AllToAll(k) => k.name(),
            Self::Tetramer => "tetramer",
        }
    }
}

impl FromStr for ClusterChoice {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "tetramer" {
            return Ok(Self::Tetramer);
        }
        s.parse::<AllToAllKind>().map(Self::AllToAll).map_err(|_| {
            CliError::Usage(format!(
                "unknown cluster '{s}' (dimer | trimer | tetrahedron | tetramer)"
            ))
        })
    }
}

/// Parses `1/2`, `3/2`, `1`, `1.5`, ...
pub fn parse_spin(s: &str) -> Result<SpinMagnitude, CliError> {
    let bad = || CliError::Usage(format!("'{s}' is not a positive half-integer spin"));
    let value = match s.split_once('/') {
        Some((num, "2")) => num.trim().parse::<u32>().map_err(|_| bad())? as f64 / 2.0,
        Some(_) => return Err(bad()),
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    SpinMagnitude::from_f64(value).map_err(|_| bad())
}

/// Every parameter of a run. Energies are in units of `j`; with `j` given
/// as J/k_B in Kelvin all temperatures come out in Kelvin.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub alpha: f64,
    pub j: f64,
    /// Exchange anisotropy δ of the spin-1 dimer.
    pub delta: f64,
    /// Single-ion anisotropy in units of J.
    pub d: f64,
    pub beta_j: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub b_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_points: usize,
    pub cluster: ClusterChoice,
    pub spin: SpinMagnitude,
    pub s_max: SpinMagnitude,
    pub out_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

const CONFIG_KEYS: [&str; 17] = [
    "alpha",
    "j",
    "delta",
    "d",
    "beta-j",
    "b-min",
    "b-max",
    "b-points",
    "t-min",
    "t-max",
    "t-points",
    "alpha-min",
    "alpha-max",
    "alpha-points",
    "cluster",
    "spin",
    "s-max",
];

impl RunConfig {
    /// Tool defaults for an experiment.
    pub fn new(experiment: Experiment) -> Self {
        use Experiment::*;
        let dimensionless = matches!(experiment, Fig4 | Fig5 | Fig6 | SweepSpin | PqScan);
        Self {
            experiment,
            alpha: 0.4,
            j: if dimensionless { 1.0 } else { 92.7 },
            delta: 1.0,
            d: 0.0,
            beta_j: if experiment == Fig5 { 3.0 } else { 20.0 },
            b_min: 0.0,
            b_max: 5.0,
            b_points: 500,
            t_min: 1.0,
            t_max: 300.0,
            t_points: 300,
            alpha_min: 0.1,
            alpha_max: 2.0,
            // step 1/30, so α = 0.4 is a grid point
            alpha_points: 58,
            cluster: if experiment == Witness {
                ClusterChoice::Tetramer
            } else {
                ClusterChoice::AllToAll(AllToAllKind::Dimer)
            },
            spin: SpinMagnitude::HALF,
            s_max: SpinMagnitude::from_twice(6).expect("nonzero"),
            out_dir: None,
            format: OutputFormat::Csv,
        }
    }

    /// Sets one parameter from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{key}: '{value}' is not a number")))
        };
        let count = || {
            value
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("{key}: '{value}' is not a point count")))
        };
        match key {
            "alpha" => self.alpha = num()?,
            "j" => self.j = num()?,
            "delta" => self.delta = num()?,
            "d" => self.d = num()?,
            "beta-j" => self.beta_j = num()?,
            "b-min" => self.b_min = num()?,
            "b-max" => self.b_max = num()?,
            "b-points" => self.b_points = count()?,
            "t-min" => self.t_min = num()?,
            "t-max" => self.t_max = num()?,
            "t-points" => self.t_points = count()?,
            "alpha-min" => self.alpha_min = num()?,
            "alpha-max" => self.alpha_max = num()?,
            "alpha-points" => self.alpha_points = count()?,
            "cluster" => self.cluster = value.parse()?,
            "spin" => self.spin = parse_spin(value)?,
            "s-max" => self.s_max = parse_spin(value)?,
            "out" => self.out_dir = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "experiment" => {
                if value != self.experiment.name() {
                    return Err(CliError::Usage(format!(
                        "config is for '{value}' but the subcommand is '{}'",
                        self.experiment
                    )));
                }
            }
            // provenance lines copied from an artifact header
            "tool" | "note" => {}
            _ => return Err(CliError::Usage(format!("unknown parameter '{key}'"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", n + 1))
            })?;
            self.set(k.trim(), v)
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_text(&text)
    }

    fn value_of(&self, key: &str) -> String {
        match key {
            "alpha" => self.alpha.to_string(),
            "j" => self.j.to_string(),
            "delta" => self.delta.to_string(),
            "d" => self.d.to_string(),
            "beta-j" => self.beta_j.to_string(),
            "b-min" => self.b_min.to_string(),
            "b-max" => self.b_max.to_string(),
            "b-points" => self.b_points.to_string(),
            "t-min" => self.t_min.to_string(),
            "t-max" => self.t_max.to_string(),
            "t-points" => self.t_points.to_string(),
            "alpha-min" => self.alpha_min.to_string(),
            "alpha-max" => self.alpha_max.to_string(),
            "alpha-points" => self.alpha_points.to_string(),
            "cluster" => self.cluster.name().to_string(),
            "spin" => self.spin.to_string(),
            "s-max" => self.s_max.to_string(),
            _ => unreachable!("not a config key: {key}"),
        }
    }

    /// Header lines that reproduce this run when fed back as a config file.
    /// Output location and format are left out so artifacts do not depend on them.
    pub fn echo(&self) -> Vec<String> {
        let mut lines = vec![
            format!("tool = {TOOL_VERSION}"),
            format!("experiment = {}", self.experiment),
        ];
        lines.extend(
            CONFIG_KEYS
                .iter()
                .map(|k| format!("{k} = {}", self.value_of(k))),
        );
        lines
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        for (name, v) in [
            ("alpha", self.alpha),
            ("j", self.j),
            ("delta", self.delta),
            ("d", self.d),
            ("beta-j", self.beta_j),
            ("b-min", self.b_min),
            ("b-max", self.b_max),
            ("t-min", self.t_min),
            ("t-max", self.t_max),
            ("alpha-min", self.alpha_min),
            ("alpha-max", self.alpha_max),
        ] {
            if !v.is_finite() {
                return usage(format!("{name} must be finite"));
            }
        }
        if self.j <= 0.0 {
            return usage("j must be > 0 (antiferromagnetic coupling)".into());
        }
        if self.alpha <= 0.0 || self.alpha_min <= 0.0 {
            return usage("alpha must be > 0".into());
        }
        if self.alpha_max < self.alpha_min {
            return usage("alpha-max must be >= alpha-min".into());
        }
        if self.alpha_points < 1 {
            return usage("alpha-points must be >= 1".into());
        }
        if self.t_min <= 0.0 || self.t_max <= self.t_min {
            return usage("need 0 < t-min < t-max".into());
        }
        if self.t_points < 2 || self.b_points < 2 {
            return usage("t-points and b-points must be >= 2".into());
        }
        if self.b_max <= self.b_min {
            return usage("need b-min < b-max".into());
        }
        if self.beta_j <= 0.0 {
            return usage("beta-j must be > 0".into());
        }
        if self.cluster == ClusterChoice::Tetramer && self.spin.twice() > 2 {
            return usage("the tetramer is diagonalized densely; spin must be 1/2 or 1".into());
        }
        if self.experiment == Experiment::SweepSpin && self.cluster == ClusterChoice::Tetramer {
            return usage("sweep-spin needs dimer, trimer or tetrahedron".into());
        }
        if self.format == OutputFormat::CsvSvg && self.out_dir.is_none() {
            return usage("--format csv+svg needs --out DIR".into());
        }
        Ok(())
    }
}

/// One table plus the plots drawn from it (file suffix, selection).
#[derive(Debug, Clone)]
pub struct Artifact {
    pub table: ResultTable,
    pub plots: Vec<(String, PlotSpec)>,
}

/// Result of [`run`]: the tables and any files written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub files: Vec<PathBuf>,
}

fn opt(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

fn new_table(cfg: &RunConfig, columns: &[&str]) -> ResultTable {
    let mut t = ResultTable::new(cfg.experiment.name(), columns);
    for line in cfg.echo() {
        t.note(line);
    }
    t
}

fn extrema_note(t: &mut ResultTable, sweep: &AlphaSweep) {
    let defined: Vec<f64> = sweep
        .rows
        .iter()
        .filter(|r| r.t_e.is_some())
        .map(|r| r.alpha)
        .collect();
    if let Some(e) = sweep.t_e_extrema {
        t.note(format!(
            "note = t_e argmax at alpha = {}, argmin at alpha = {}, non-monotonic = {}",
            format_value(defined[e.argmax]),
            format_value(defined[e.argmin]),
            e.non_monotonic()
        ));
    }
}

fn alpha_grid(cfg: &RunConfig) -> Vec<f64> {
    linear_grid(cfg.alpha_min, cfg.alpha_max, cfg.alpha_points)
}

fn alpha_table(cfg: &RunConfig) -> Result<Artifact, CliError> {
    use Experiment::*;
    let with_pairs = matches!(cfg.experiment, Fig2 | SweepAlpha);
    let sweep = sweep_alpha(&alpha_grid(cfg), cfg.j, with_pairs)?;
    let (columns, plot): (&[&str], PlotSpec) = match cfg.experiment {
        Fig2 => (
            &["alpha", "t_c_12", "t_c_23"],
            PlotSpec::new(
                "alpha",
                &["t_c_12", "t_c_23"],
                "pair concurrence critical temperatures",
            ),
        ),
        Fig3 => (
            &["alpha", "t_e", "t_c_chi"],
            PlotSpec::new(
                "alpha",
                &["t_e", "t_c_chi"],
                "energy and susceptibility witness temperatures",
            ),
        ),
        _ => (
            &["alpha", "t_e", "t_c_chi", "t_c_12", "t_c_23"],
            PlotSpec::new(
                "alpha",
                &["t_e", "t_c_chi", "t_c_12", "t_c_23"],
                "witness temperatures",
            ),
        ),
    };
    let mut t = new_table(cfg, columns);
    if cfg.experiment != Fig2 {
        extrema_note(&mut t, &sweep);
    }
    for r in &sweep.rows {
        let row = match cfg.experiment {
            Fig2 => vec![r.alpha, opt(r.t_c_12), opt(r.t_c_23)],
            Fig3 => vec![r.alpha, opt(r.t_e), opt(r.t_c_chi)],
            _ => vec![
                r.alpha,
                opt(r.t_e),
                opt(r.t_c_chi),
                opt(r.t_c_12),
                opt(r.t_c_23),
            ],
        };
        t.push_row(row)?;
    }
    Ok(Artifact {
        table: t,
        plots: vec![(String::new(), plot)],
    })
}

fn spin_grid(cfg: &RunConfig) -> u32 {
    cfg.s_max.twice()
}

fn fig1(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let cluster = ClusterSpec::linear_tetramer(SpinMagnitude::HALF, cfg.alpha, cfg.j)?;
    let pc = PairConcurrence::new(&cluster)?;
    let mut t = new_table(cfg, &["t", "c_12", "c_23"]);
    for temp in linear_grid(cfg.t_min, cfg.t_max, cfg.t_points) {
        let at = |e: crate::Error| e.at(format!("T = {temp}"));
        let c12 = pc.at(temp, 0, 1).map_err(at)?;
        let c23 = pc.at(temp, 1, 2).map_err(at)?;
        t.push_row(vec![temp, c12.c, c23.c])?;
    }
    Ok(Artifact {
        table: t,
        plots: vec![(
            String::new(),
            PlotSpec::new("t", &["c_12", "c_23"], "pair concurrence vs temperature"),
        )],
    })
}

fn fig4(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let mut columns = vec!["s".to_string()];
    let mut per_kind = Vec::new();
    for kind in AllToAllKind::ALL {
        columns.push(format!("t_e_{}", kind.name()));
        columns.push(format!("t_scaled_{}", kind.name()));
        per_kind.push(sweep_spin(kind, spin_grid(cfg), cfg.j)?);
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut t = new_table(cfg, &cols);
    for (i, row) in per_kind[0].iter().enumerate() {
        let mut r = vec![row.spin.value()];
        for rows in &per_kind {
            r.push(rows[i].t_e);
            r.push(rows[i].t_e_scaled);
        }
        t.push_row(r)?;
    }
    Ok(Artifact {
        table: t,
        plots: vec![
            (
                String::new(),
                PlotSpec::new(
                    "s",
                    &["t_e_dimer", "t_e_trimer", "t_e_tetrahedron"],
                    "gap temperature vs S",
                ),
            ),
            (
                "-inset".into(),
                PlotSpec::new(
                    "s",
                    &["t_scaled_dimer", "t_scaled_trimer", "t_scaled_tetrahedron"],
                    "scaled gap temperature vs S",
                ),
            ),
        ],
    })
}

fn sweep_spin_table(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let ClusterChoice::AllToAll(kind) = cfg.cluster else {
        return Err(CliError::Usage(
            "sweep-spin needs dimer, trimer or tetrahedron".into(),
        ));
    };
    let rows = sweep_spin(kind, spin_grid(cfg), cfg.j)?;
    let mut t = new_table(cfg, &["s", "t_e", "t_e_scaled", "e_sep", "e_g", "e_tot"]);
    for r in rows {
        t.push_row(vec![
            r.spin.value(),
            r.t_e,
            r.t_e_scaled,
            r.e_sep,
            r.e_g,
            r.e_tot,
        ])?;
    }
    Ok(Artifact {
        table: t,
        plots: vec![(
            String::new(),
            PlotSpec::new("s", &["t_e"], &format!("gap temperature, {}", kind.name())),
        )],
    })
}

fn pq_table(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let model = AnisoDimerModel::new()?;
    let p = AnisoDimerParams::new(cfg.j, cfg.delta, cfg.d * cfg.j, 0.0);
    let mut t = new_table(cfg, &["b_over_j", "p", "q", "p_plus_q", "m"]);
    let mut max_sum = f64::NEG_INFINITY;
    let mut rows = Vec::with_capacity(cfg.b_points);
    for b in linear_grid(cfg.b_min, cfg.b_max, cfg.b_points) {
        let pt = model
            .point(&p.with_field(b * cfg.j), cfg.beta_j)
            .map_err(|e| e.at(format!("B/J = {b}")))?;
        max_sum = max_sum.max(pt.sum());
        rows.push(vec![b, pt.p, pt.q, pt.sum(), pt.magnetization]);
    }
    t.note(format!("note = max p_plus_q = {}", format_value(max_sum)));
    for r in rows {
        t.push_row(r)?;
    }
    Ok(Artifact {
        table: t,
        plots: vec![(
            String::new(),
            PlotSpec::new(
                "b_over_j",
                &["p", "q", "p_plus_q"],
                &format!("complementarity, beta J = {}", cfg.beta_j),
            ),
        )],
    })
}

fn witness_table(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let cluster = match cfg.cluster {
        ClusterChoice::AllToAll(kind) => kind.cluster(cfg.spin, cfg.j),
        ClusterChoice::Tetramer => ClusterSpec::linear_tetramer(cfg.spin, cfg.alpha, cfg.j)?,
    };
    let report = witness_report(&cluster)?;
    let mut columns = vec!["t_e", "t_e_scaled", "t_c_chi", "e_sep", "e_g", "e_tot"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    let mut row = vec![
        opt(report.t_e),
        opt(report.t_e_scaled),
        opt(report.t_c_chi),
        report.e_sep,
        report.e_g,
        report.e_tot,
    ];
    for ((k, l), tc) in &report.t_c_pairs {
        columns.push(format!("t_c_{}{}", k + 1, l + 1));
        row.push(opt(*tc));
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut t = new_table(cfg, &cols);
    t.push_row(row)?;
    Ok(Artifact {
        table: t,
        plots: Vec::new(),
    })
}

/// Computes the tables of an experiment without touching the filesystem.
pub fn compute(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    cfg.validate()?;
    use Experiment::*;
    let artifact = match cfg.experiment {
        Fig1 => fig1(cfg)?,
        Fig2 | Fig3 | SweepAlpha => alpha_table(cfg)?,
        Fig4 => fig4(cfg)?,
        SweepSpin => sweep_spin_table(cfg)?,
        Fig5 | Fig6 | PqScan => pq_table(cfg)?,
        Witness => witness_table(cfg)?,
    };
    Ok(vec![artifact])
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Runs an experiment and writes `<name>.csv` (plus `<name>*.svg` with
/// `csv+svg`) into the output directory when one is configured.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let artifacts = compute(cfg)?;
    let mut files = Vec::new();
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        for a in &artifacts {
            files.push(write(
                dir.join(format!("{}.csv", a.table.name)),
                &a.table.to_csv(),
            )?);
            if cfg.format == OutputFormat::CsvSvg {
                for (suffix, spec) in &a.plots {
                    let svg = render_svg(&a.table, spec)?;
                    files.push(write(
                        dir.join(format!("{}{suffix}.svg", a.table.name)),
                        &svg,
                    )?);
                }
            }
        }
    }
    Ok(RunOutput { artifacts, files })
}
