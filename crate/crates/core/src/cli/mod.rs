//! Command-line front end: scenario resolution, campaign runs and output files.
//!
//! Settings are layered as band defaults, then subcommand presets, then the
//! `--config` file, then `--set` pairs, then the dedicated flags. Every run
//! writes one CSV per filter, a gnuplot script and `manifest.txt`, which
//! `replay` accepts to regenerate the same CSVs.

pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::digital_precoding::PrecodingFilter;
use crate::error::{Error, Result};
use crate::montecarlo::{run_benchmark_su, run_campaign, ScenarioConfig};

pub use config::{emit_config, parse_config, parse_pairs, resolve, Pairs};

pub const MANIFEST_FILE: &str = "manifest.txt";
pub const PLOT_FILE: &str = "plot.gp";
pub const SU_FILE: &str = "su.csv";

#[derive(Debug, Parser)]
#[command(name = "hybrid-secrecy", version, about = "Secrecy-rate campaigns for hybrid-beamformed MU-MIMO links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Secrecy and energy efficiency against transmit SNR, plus a single-user benchmark.
    SweepSnr(RunArgs),
    /// Secrecy and energy efficiency against the number of users.
    SweepUsers(RunArgs),
    /// Raise the transmit power until every user meets a secrecy target.
    PowerAdapt(RunArgs),
    /// One point at the resolved settings.
    Single(RunArgs),
    /// Re-run a campaign from a manifest written by an earlier run.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Scenario file of key=value lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// sub6 or mmwave.
    #[arg(long)]
    pub band: Option<String>,
    /// zf, mmse, mrt or all.
    #[arg(long)]
    pub filter: Option<String>,
    /// Transmit SNR range in dB, START:STOP:STEP.
    #[arg(long, allow_hyphen_values = true)]
    pub snr: Option<String>,
    /// User range, START:STOP.
    #[arg(long)]
    pub users: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub trials: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub target_secrecy: Option<String>,
    /// Transmit power cap in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub power_cap: Option<String>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Extra KEY=VALUE setting, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", allow_hyphen_values = true)]
    pub set: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    SweepSnr,
    SweepUsers,
    PowerAdapt,
    Single,
}

impl RunKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RunKind::SweepSnr => "sweep-snr",
            RunKind::SweepUsers => "sweep-users",
            RunKind::PowerAdapt => "power-adapt",
            RunKind::Single => "single",
        }
    }

    /// Scenario settings each subcommand starts from.
    pub fn presets(self) -> Pairs {
        let p: &[(&str, &str)] = match self {
            RunKind::SweepSnr => &[("sweep", "snr:-10:10:2"), ("n_j", "16"), ("power.p_j_db", "-20")],
            RunKind::SweepUsers => &[("sweep", "users:1:10")],
            RunKind::PowerAdapt => &[
                ("sweep", "none"),
                ("power.p_b_db", "-10"),
                ("power.p_j_db", "-5"),
                ("power_adapt.enabled", "true"),
            ],
            RunKind::Single => &[("sweep", "none")],
        };
        p.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    fn sweeps_all_filters(self) -> bool {
        matches!(self, RunKind::SweepSnr | RunKind::SweepUsers)
    }
}

impl FromStr for RunKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sweep-snr" => Ok(RunKind::SweepSnr),
            "sweep-users" => Ok(RunKind::SweepUsers),
            "power-adapt" => Ok(RunKind::PowerAdapt),
            "single" => Ok(RunKind::Single),
            other => Err(format!("unknown command `{other}`")),
        }
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub kind: RunKind,
    pub config: ScenarioConfig,
    pub filters: Vec<PrecodingFilter>,
    pub config_path: Option<String>,
}

pub fn plan(kind: RunKind, args: &RunArgs) -> Result<RunPlan> {
    let mut pairs = kind.presets();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        pairs.extend(parse_pairs(&text)?);
    }
    for kv in &args.set {
        let Some((k, v)) = kv.split_once('=') else {
            return Err(Error::config("--set", format!("expected KEY=VALUE, got `{kv}`")));
        };
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    let mut flag = |key: &str, value: &Option<String>| {
        if let Some(v) = value {
            pairs.push((key.to_string(), v.clone()));
        }
    };
    flag("band", &args.band);
    flag("trials", &args.trials);
    flag("seed", &args.seed);
    flag("power_adapt.target_secrecy", &args.target_secrecy);
    flag("power_adapt.power_cap_db", &args.power_cap);
    flag("sweep", &args.snr.as_ref().map(|s| format!("snr:{s}")));
    flag("sweep", &args.users.as_ref().map(|s| format!("users:{s}")));

    let filters = match args.filter.as_deref() {
        Some("all") => PrecodingFilter::ALL.to_vec(),
        Some(f) => {
            let f: PrecodingFilter = f.parse().map_err(|e: String| Error::config("--filter", e))?;
            pairs.push(("filter".into(), f.as_str().into()));
            vec![f]
        }
        None => Vec::new(),
    };
    let config = resolve(&pairs)?;
    let filters = if !filters.is_empty() {
        filters
    } else if kind.sweeps_all_filters() {
        PrecodingFilter::ALL.to_vec()
    } else {
        vec![config.filter]
    };
    Ok(RunPlan {
        kind,
        config,
        filters,
        config_path: args.config.as_ref().map(|p| p.display().to_string()),
    })
}

/// Runs the plan and writes every output file, returning their paths.
pub fn execute(plan: &RunPlan, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = Vec::new();
    let mut curves = Vec::new();
    for &filter in &plan.filters {
        let mut cfg = plan.config.clone();
        cfg.filter = filter;
        let result = run_campaign(&cfg)?;
        let name = format!("{}.csv", filter.as_str());
        let path = out_dir.join(&name);
        output::write_csv(&result, &path)?;
        curves.push((name, filter.as_str().to_uppercase()));
        files.push(path);
    }
    if plan.kind == RunKind::SweepSnr {
        let result = run_benchmark_su(&plan.config)?;
        let path = out_dir.join(SU_FILE);
        output::write_csv(&result, &path)?;
        curves.push((SU_FILE.to_string(), "SU".to_string()));
        files.push(path);
    }
    let plot = out_dir.join(PLOT_FILE);
    output::write_file(&plot, &output::plot_script(plan.config.sweep.label(), &curves))?;
    files.push(plot);
    let manifest = out_dir.join(MANIFEST_FILE);
    output::write_file(&manifest, &manifest_string(plan, out_dir))?;
    files.push(manifest);
    Ok(files)
}

/// Resolved scenario followed by `run.*` entries.
pub fn manifest_string(plan: &RunPlan, out_dir: &Path) -> String {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let filters: Vec<&str> = plan.filters.iter().map(|f| f.as_str()).collect();
    let mut s = emit_config(&plan.config);
    s.push_str(&format!("run.command={}\n", plan.kind.as_str()));
    s.push_str(&format!("run.filters={}\n", filters.join(",")));
    s.push_str(&format!("run.config_path={}\n", plan.config_path.as_deref().unwrap_or("-")));
    s.push_str(&format!("run.out_dir={}\n", out_dir.display()));
    s.push_str(&format!("run.timestamp={timestamp}\n"));
    s.push_str(&format!("run.version={}\n", env!("CARGO_PKG_VERSION")));
    s
}

/// Rebuilds the plan recorded in a manifest, plus its output directory.
pub fn plan_from_manifest(text: &str) -> Result<(RunPlan, PathBuf)> {
    let (run, scenario): (Pairs, Pairs) = parse_pairs(text)?
        .into_iter()
        .partition(|(k, _)| k.starts_with("run."));
    let get = |key: &str| {
        run.iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::config(key, "missing from manifest"))
    };
    let kind = get("run.command")?
        .parse::<RunKind>()
        .map_err(|e| Error::config("run.command", e))?;
    let filters = get("run.filters")?
        .split(',')
        .map(|f| f.parse::<PrecodingFilter>().map_err(|e| Error::config("run.filters", e)))
        .collect::<Result<Vec<_>>>()?;
    let config_path = match get("run.config_path")? {
        "-" => None,
        p => Some(p.to_string()),
    };
    let out_dir = PathBuf::from(get("run.out_dir")?);
    let plan = RunPlan {
        kind,
        config: resolve(&scenario)?,
        filters,
        config_path,
    };
    Ok((plan, out_dir))
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config("--threads", e.to_string()))?;
            pool.install(f)
        }
    }
}

pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    let (kind, args) = match cli.command {
        Command::SweepSnr(a) => (RunKind::SweepSnr, a),
        Command::SweepUsers(a) => (RunKind::SweepUsers, a),
        Command::PowerAdapt(a) => (RunKind::PowerAdapt, a),
        Command::Single(a) => (RunKind::Single, a),
        Command::Replay {
            manifest,
            out,
            threads,
        } => {
            let text = fs::read_to_string(&manifest).map_err(|e| Error::io(&manifest, e))?;
            let (plan, recorded) = plan_from_manifest(&text)?;
            let out = out.unwrap_or(recorded);
            return with_threads(threads, || execute(&plan, &out));
        }
    };
    let plan = plan(kind, &args)?;
    with_threads(args.threads, || execute(&plan, &args.out))
}

/// 2 for a campaign with too many failed trials, 1 for anything else.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::CampaignFailed { .. } => 2,
        _ => 1,
    }
}
