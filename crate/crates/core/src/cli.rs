//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::actuation;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::experiments::{self, ResultSet, RunOptions};
use crate::gait::GaitTrajectory;

/// Samples per period when measuring peak joint speeds.
const CHECK_SAMPLES: usize = 2000;

#[derive(Debug, Parser)]
#[command(name = "quadsim", version, about = "Quadruped gait and morphology simulator")]
pub struct Cli {
    /// Configuration file; the shipped defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct RunFlags {
    /// Base seed for every experiment, replacing the configured one.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "results")]
    pub out_dir: PathBuf,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Disable per-evaluation speed noise.
    #[arg(long)]
    pub no_noise: bool,
}

impl RunFlags {
    fn options(&self) -> RunOptions {
        RunOptions {
            seed: self.seed,
            noise: !self.no_noise,
            jobs: self.jobs.max(1),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a named experiment from the config, or `all`.
    Reproduce {
        scenario: String,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Run every experiment defined in a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Write control points and sampled foot path of one gait as CSV.
    DumpTrajectory {
        #[arg(long)]
        gait: String,
        #[arg(long)]
        morph: String,
        /// Ground height override, mm.
        #[arg(long, allow_hyphen_values = true)]
        ground: Option<f64>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a config and report peak joint speeds per pairing.
    Check { config: Option<PathBuf> },
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Config(_) | Error::UnknownName { .. } | Error::Io { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default_config()),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Reproduce { scenario, flags } => {
            let config = load_config(cli.config.as_deref())?;
            reproduce(&config, scenario, flags, out, err)
        }
        Command::Run { config, flags } => {
            let config = Config::load(config)?;
            reproduce(&config, "all", flags, out, err)
        }
        Command::DumpTrajectory {
            gait,
            morph,
            ground,
            samples,
            out: path,
        } => {
            let config = load_config(cli.config.as_deref())?;
            let text = dump_trajectory(&config, gait, morph, *ground, *samples)?;
            match path {
                Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e))?,
                None => out.write_all(text.as_bytes()).map_err(|e| Error::io(Path::new("-"), e))?,
            }
            Ok(0)
        }
        Command::Check { config } => {
            let config = load_config(config.as_deref().or(cli.config.as_deref()))?;
            check(&config, out)
        }
    }
}

fn reproduce(
    config: &Config,
    scenario: &str,
    flags: &RunFlags,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let names: Vec<&String> = if scenario == "all" {
        config.experiments.keys().collect()
    } else {
        match config.experiments.get_key_value(scenario) {
            Some((k, _)) => vec![k],
            None => {
                let mut candidates: Vec<String> = config.experiments.keys().cloned().collect();
                candidates.push("all".into());
                return Err(Error::UnknownName {
                    kind: "scenario",
                    name: scenario.to_string(),
                    candidates,
                });
            }
        }
    };
    if names.is_empty() {
        return Err(Error::Config("config defines no experiments".into()));
    }
    let mut sets: Vec<ResultSet> = Vec::new();
    for name in names {
        sets.push(experiments::run_matrix(
            config,
            name,
            &config.experiments[name],
            flags.options(),
        )?);
    }
    let reports = experiments::write_outputs(&flags.out_dir, &sets)?;
    let _ = out.write_all(experiments::render_table(&reports).as_bytes());
    let failed: usize = sets.iter().map(|s| s.failures().count()).sum();
    if failed > 0 {
        let _ = writeln!(err, "{failed} evaluation(s) failed");
        return Ok(1);
    }
    Ok(0)
}

/// CSV with the five control points followed by `samples` foot positions
/// evenly spaced in phase.
pub fn dump_trajectory(
    config: &Config,
    gait: &str,
    morph: &str,
    ground: Option<f64>,
    samples: usize,
) -> Result<String> {
    let traj = GaitTrajectory::with_options(
        *config.gait(gait)?,
        config.morphology(morph)?,
        config.trajectory_options(ground)?,
    )?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "index", "phase", "x", "y", "z"])?;
    for (i, p) in traj.control_points().as_slice().iter().enumerate() {
        w.write_record([
            "control".to_string(),
            (i + 1).to_string(),
            String::new(),
            p.x.to_string(),
            p.y.to_string(),
            p.z.to_string(),
        ])?;
    }
    for k in 0..samples {
        let phase = k as f64 / samples as f64;
        let p = traj.foot_at_phase(phase);
        w.write_record([
            "sample".to_string(),
            k.to_string(),
            phase.to_string(),
            p.x.to_string(),
            p.y.to_string(),
            p.z.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn check(config: &Config, out: &mut dyn Write) -> Result<i32> {
    let rated = config.servo.rated_speed();
    let cap = config.servo.policy_cap;
    let mut violations = Vec::new();
    let _ = writeln!(
        out,
        "policy cap {cap} RPM, rated speed {rated} RPM at {} V",
        config.servo.rated_voltage
    );
    for (gait_name, params) in &config.gaits {
        for warning in params.warnings(&config.trajectory.schedule) {
            let _ = writeln!(out, "warning: gait `{gait_name}`: {warning}");
        }
        for morph_name in config.morphologies.keys() {
            let label = format!("{gait_name}+{morph_name}");
            let traj = match config.trajectory(gait_name, morph_name) {
                Ok(t) => t,
                Err(e) => {
                    violations.push(format!("{label}: {e}"));
                    continue;
                }
            };
            let peaks = actuation::required_joint_speeds(&traj, CHECK_SAMPLES)?;
            let peak = peaks.iter().copied().fold(0.0, f64::max);
            let verdict = if peak > rated {
                violations.push(format!("{label}: peak {peak:.1} RPM exceeds rated {rated:.1} RPM"));
                "OVER-SPEED"
            } else if peak > cap {
                "above cap"
            } else {
                "ok"
            };
            let _ = writeln!(
                out,
                "{label:<20} coxa {:>5.1}  femur {:>5.1}  tibia {:>5.1} RPM  {verdict}",
                peaks[0], peaks[1], peaks[2]
            );
        }
    }
    for v in &violations {
        let _ = writeln!(out, "violation: {v}");
    }
    Ok(if violations.is_empty() { 0 } else { 1 })
}
