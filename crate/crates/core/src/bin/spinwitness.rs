use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinwitness::cli::{run, CliError, Experiment, RunConfig};

#[derive(Parser)]
#[command(
    name = "spinwitness",
    version,
    about = "Thermal entanglement witnesses for small spin clusters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pair concurrences C12, C23 of the tetramer versus temperature
    Fig1(Params),
    /// Pair critical temperatures of the tetramer versus alpha
    Fig2(Params),
    /// Energy-gap and susceptibility witness temperatures versus alpha
    Fig3(Params),
    /// Gap temperature and its scaled form versus S for all-to-all clusters
    Fig4(Params),
    /// P, Q and P+Q of the spin-1 dimer at beta J = 3
    Fig5(Params),
    /// P, Q and P+Q of the spin-1 dimer at beta J = 20
    Fig6(Params),
    /// All tetramer witness temperatures versus alpha
    SweepAlpha(Params),
    /// Gap temperature versus S for one all-to-all cluster
    SweepSpin(Params),
    /// Every witness temperature of one cluster
    Witness(Params),
    /// P, Q scan of the spin-1 dimer for arbitrary delta, d, beta J
    PqScan(Params),
}

/// Flags override values from --config.
#[derive(Args, Default)]
struct Params {
    /// key = value file with any of the parameters below
    #[arg(long, allow_negative_numbers = true)]
    config: Option<PathBuf>,
    /// Output directory; CSV goes to stdout when omitted
    #[arg(long, allow_negative_numbers = true)]
    out: Option<String>,
    /// csv | csv+svg
    #[arg(long, allow_negative_numbers = true)]
    format: Option<String>,
    /// Middle-bond ratio of the tetramer
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<String>,
    /// Exchange J/k_B (K); sets the temperature unit
    #[arg(long, allow_negative_numbers = true)]
    j: Option<String>,
    /// Exchange anisotropy of the spin-1 dimer
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<String>,
    /// Single-ion anisotropy in units of J
    #[arg(long, allow_negative_numbers = true)]
    d: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    beta_j: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    b_min: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    b_max: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    b_points: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    t_points: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    alpha_min: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    alpha_max: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    alpha_points: Option<String>,
    /// dimer | trimer | tetrahedron | tetramer
    #[arg(long, allow_negative_numbers = true)]
    cluster: Option<String>,
    /// Site spin, e.g. 1/2 or 3/2
    #[arg(long, allow_negative_numbers = true)]
    spin: Option<String>,
    /// Largest spin of an S sweep
    #[arg(long, allow_negative_numbers = true)]
    s_max: Option<String>,
}

impl Params {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        [
            ("out", &self.out),
            ("format", &self.format),
            ("alpha", &self.alpha),
            ("j", &self.j),
            ("delta", &self.delta),
            ("d", &self.d),
            ("beta-j", &self.beta_j),
            ("b-min", &self.b_min),
            ("b-max", &self.b_max),
            ("b-points", &self.b_points),
            ("t-min", &self.t_min),
            ("t-max", &self.t_max),
            ("t-points", &self.t_points),
            ("alpha-min", &self.alpha_min),
            ("alpha-max", &self.alpha_max),
            ("alpha-points", &self.alpha_points),
            ("cluster", &self.cluster),
            ("spin", &self.spin),
            ("s-max", &self.s_max),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }
}

fn split(command: Command) -> (Experiment, Params) {
    match command {
        Command::Fig1(p) => (Experiment::Fig1, p),
        Command::Fig2(p) => (Experiment::Fig2, p),
        Command::Fig3(p) => (Experiment::Fig3, p),
        Command::Fig4(p) => (Experiment::Fig4, p),
        Command::Fig5(p) => (Experiment::Fig5, p),
        Command::Fig6(p) => (Experiment::Fig6, p),
        Command::SweepAlpha(p) => (Experiment::SweepAlpha, p),
        Command::SweepSpin(p) => (Experiment::SweepSpin, p),
        Command::Witness(p) => (Experiment::Witness, p),
        Command::PqScan(p) => (Experiment::PqScan, p),
    }
}

fn execute(experiment: Experiment, params: &Params) -> Result<(), CliError> {
    let mut cfg = RunConfig::new(experiment);
    if let Some(path) = &params.config {
        cfg.apply_file(path)?;
    }
    for (k, v) in params.overrides() {
        cfg.set(k, v)?;
    }
    let out = run(&cfg)?;
    if cfg.out_dir.is_none() {
        for a in &out.artifacts {
            print!("{}", a.table.to_csv());
        }
    }
    for f in &out.files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (experiment, params) = split(cli.command);
    match execute(experiment, &params) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinwitness: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
