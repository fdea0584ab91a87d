use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hyperkin::goldens::run_goldens;
use hyperkin::harness::{self, ExperimentConfig};
use hyperkin::robot::RobotGeometry;
use hyperkin::solvers::{parse_pairs, Branches, KinematicSample, SolverId};
use hyperkin::trajectory::reference_trajectory;

#[derive(Parser)]
#[command(
    name = "hyperkin",
    version,
    about = "Higher-order kinematics of the hybrid RCM robot"
)]
struct Cli {
    /// Geometry file of `key = value` lines (l, l0 .. l4, mm).
    #[arg(long, global = true, env = "HYPERKIN_GEOMETRY")]
    geometry: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Experiment {
    #[arg(long, default_value = "1-2,3-4,5-6,7-8")]
    pairs: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 42, env = "HYPERKIN_SEED")]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Flavor-pair residuals (RMS and whiteness) as JSON.
    Accuracy {
        #[command(flatten)]
        exp: Experiment,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-trial wall times as CSV; summary and p-values on stdout.
    Timing {
        #[command(flatten)]
        exp: Experiment,
        #[arg(long, default_value_t = 10)]
        warmup: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// IK then FK over the reference motion.
    Roundtrip {
        #[arg(long, default_value = "1,2,3,4,5,6,7,8")]
        solvers: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the planned reference motion to CSV.
    Trajectory {
        /// Use the built-in reference endpoints (the only source supported).
        #[arg(long = "from-eq42", required = true)]
        reference: bool,
        #[arg(long, default_value_t = 100.0)]
        rate: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One sample through one solver, JSON in and out.
    Solve {
        #[arg(long)]
        solver: SolverId,
        /// Sample JSON; `-` reads stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        branch: u8,
        /// Run the forward counterpart instead.
        #[arg(long)]
        forward: bool,
    },
    /// Check the closed forms against the reference tables.
    Goldens {
        /// Print passing rows too.
        #[arg(long)]
        verbose: bool,
    },
}

fn writer(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn config(geometry: RobotGeometry, exp: &Experiment) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        trials: exp.trials,
        samples_per_trial: exp.samples,
        pairs: parse_pairs(&exp.pairs)?,
        seed: exp.seed,
        geometry,
        ..ExperimentConfig::default()
    })
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let g = match &cli.geometry {
        Some(p) => RobotGeometry::load(p)?,
        None => RobotGeometry::default(),
    };
    match cli.cmd {
        Cmd::Accuracy { exp, out } => {
            let reports = harness::run_accuracy(&config(g, &exp)?)?;
            let ok = reports.iter().all(|r| r.pass);
            for r in &reports {
                let fields: Vec<String> = r
                    .fields
                    .iter()
                    .map(|f| {
                        format!(
                            "{} {:.2e} ({:.0}% white)",
                            f.field,
                            f.rms,
                            100.0 * f.white_fraction
                        )
                    })
                    .collect();
                eprintln!("{}-{}: {}", r.pair.0, r.pair.1, fields.join(", "));
            }
            let keyed: BTreeMap<String, _> = reports
                .into_iter()
                .map(|r| (format!("{}-{}", r.pair.0, r.pair.1), r))
                .collect();
            let mut w = writer(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &keyed)?;
            writeln!(w)?;
            return Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
        Cmd::Timing { exp, warmup, out } => {
            let cfg = ExperimentConfig {
                warmup,
                ..config(g, &exp)?
            };
            let reports = harness::run_timing(&cfg)?;
            harness::write_timing_csv(&reports, writer(out.as_deref())?)?;
            for r in &reports {
                eprintln!(
                    "{}-{}: median {:.3e} s vs {:.3e} s, IQR {:.1e} / {:.1e}, spikes {} / {}, rank-sum p = {:.3e}",
                    r.pair.0,
                    r.pair.1,
                    r.first.median,
                    r.second.median,
                    r.first.iqr,
                    r.second.iqr,
                    r.first.spikes,
                    r.second.spikes,
                    r.rank_sum.p_value
                );
            }
        }
        Cmd::Roundtrip {
            solvers,
            samples,
            out,
        } => {
            let ids = solvers
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<Vec<SolverId>, _>>()?;
            let cfg = ExperimentConfig {
                trials: 1,
                samples_per_trial: samples,
                geometry: g,
                ..Default::default()
            };
            let report = harness::run_roundtrip_validation(&cfg, &ids)?;
            for r in &report.results {
                eprintln!(
                    "{}: max deviation {:.2e} at sample {}",
                    r.solver, r.max_deviation, r.worst_sample
                );
            }
            let keyed: BTreeMap<String, _> = report
                .results
                .iter()
                .map(|r| (r.solver.to_string(), r))
                .collect();
            let mut w = writer(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &keyed)?;
            writeln!(w)?;
            return Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
        Cmd::Trajectory {
            reference,
            rate,
            out,
        } => {
            debug_assert!(reference);
            let n = reference_trajectory().write_csv(writer(out.as_deref())?, rate)?;
            eprintln!("{n} rows");
        }
        Cmd::Solve {
            solver,
            input,
            branch,
            forward,
        } => {
            let text = if input.as_os_str() == "-" {
                io::read_to_string(io::stdin())?
            } else {
                std::fs::read_to_string(&input)
                    .with_context(|| format!("reading {}", input.display()))?
            };
            let sample: KinematicSample = serde_json::from_str(&text).context("parsing sample")?;
            let br = Branches::uniform(branch);
            let out = if forward {
                solver.fk(&g, &sample, &br)?
            } else {
                solver.ik(&g, &sample, &br)?
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Cmd::Goldens { verbose } => {
            let checks = run_goldens(&g)?;
            let misses = checks.iter().filter(|c| !c.pass).count();
            for c in checks.iter().filter(|c| verbose || !c.pass) {
                println!(
                    "{:5} {:>4} {:<22} expected {:>10.4} got {:>12.6} tol {:.0e} {}",
                    c.table,
                    c.row,
                    c.column,
                    c.expected,
                    c.got,
                    c.tol,
                    if c.pass { "ok" } else { "MISS" }
                );
            }
            println!("{} checks, {} misses", checks.len(), misses);
            if misses > 0 {
                bail!("{misses} table values out of tolerance");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
