//! Batch front-end over instance files: validate, lift, globalize, and
//! run the theorem registry. Exit codes: 0 success, 1 I/O or parse
//! problem, 2 validation/verification failure, 3 internal inconsistency.

use clap::{Parser, Subcommand};
use galg::io::{self, Caps, IoError};
use galg::verify::{self, Status, VerifyOptions};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "galg", version, about = "Exact groupoid actions on finite rings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate every piece referenced by a bundle file.
    Validate {
        bundle: PathBuf,
    },
    /// Lift a datum file to a partial groupoid action.
    Lift {
        datum: PathBuf,
        /// transversal override: JSON {"base": …, "transversal": {…}}
        #[arg(long)]
        tau: Option<PathBuf>,
        /// write the lifted action here (stdout otherwise)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify the globalization described by a file.
    Globalize {
        gdatum: PathBuf,
        /// write the global action here (stdout otherwise)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the theorem registry over a bundle.
    Verify {
        bundle: PathBuf,
        /// comma-separated subset of registry ids
        #[arg(long, value_delimiter = ',')]
        theorems: Option<Vec<String>>,
        /// seed for sampled checks above the exhaustive cap
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// override the ring and tensor size caps
        #[arg(long)]
        cap: Option<usize>,
        /// run independent checks on this many threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// include per-check timings (report stays deterministic without)
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Deserialize)]
struct TauFile {
    base: String,
    #[serde(default)]
    transversal: BTreeMap<String, String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(classify(&err))
        }
    }
}

/// I/O problems exit 1, everything the validators reject exits 2.
fn classify(err: &IoError) -> u8 {
    match err {
        IoError::Read { .. } | IoError::Write { .. } | IoError::Json { .. } => 1,
        _ => 2,
    }
}

fn caps_with(cap: Option<usize>) -> Caps {
    match cap {
        Some(n) => Caps::with_cap(n),
        None => Caps::default(),
    }
}

fn run(cli: Cli) -> Result<ExitCode, IoError> {
    match cli.cmd {
        Cmd::Validate { bundle } => {
            let loaded = io::load_bundle(&bundle, &Caps::default())?;
            println!(
                "ok: `{}` — groupoid with {} morphisms over a ring of {} elements",
                loaded.name,
                loaded.groupoid.len(),
                loaded.ring.len()
            );
            println!(
                "    datum at base `{}`{}; the action {}",
                loaded.groupoid.name(loaded.datum.base()),
                if loaded.action_given {
                    " (extracted from the supplied action)"
                } else {
                    ""
                },
                if loaded.action.is_global() {
                    "is global"
                } else {
                    "is partial"
                }
            );
            if loaded.gdatum.is_some() {
                println!("    globalizable datum attached");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Lift { datum, tau, out } => {
            let caps = Caps::default();
            let mut spec: io::DatumSpec = read_json_file(&datum)?;
            if let Some(tau_path) = tau {
                let tf: TauFile = read_json_file(&tau_path)?;
                spec.base = tf.base;
                spec.transversal = tf.transversal;
            }
            let gspec: galg::groupoid::GroupoidSpec =
                read_json_file(&sibling(&datum, &spec.groupoid))?;
            let gd = std::sync::Arc::new(galg::groupoid::FiniteGroupoid::validate_capped(
                &gspec,
                caps.groupoid,
            )?);
            let rspec: galg::ring::RingSpec = read_json_file(&sibling(&datum, &spec.ring))?;
            let ring = rspec.build(caps.ring)?;
            let d = io::build_datum_from_spec(&gd, &ring, &spec)?;
            let action = d.lift()?;
            // round-trip facts for the report
            let back = galg::action::Datum::extract(&action, d.tau())?;
            let report = serde_json::json!({
                "lifted": true,
                "extract_lift_identity": back.eq_datum(&d),
                "tau_global": action.is_tau_global(d.tau()),
                "global": action.is_global(),
            });
            let spec_out = io::action_spec(&action);
            match out {
                Some(path) => {
                    io::write_json(&path, &spec_out)?;
                    println!("{report}");
                }
                None => {
                    println!(
                        "{}",
                        serde_json::json!({"action": spec_out, "report": report})
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Globalize { gdatum, out } => {
            let caps = Caps::default();
            let spec: io::GdatumSpec = read_json_file(&gdatum)?;
            let (gd, ring, base_datum) = io::load_datum(&sibling(&gdatum, &spec.datum), &caps)?;
            let gdat = io::build_gdatum_public(&gd, &ring, &base_datum, &spec)?;
            let glob = gdat.build_global_action()?;
            let spec_out = io::action_spec(&glob.action);
            match out {
                Some(path) => {
                    io::write_json(&path, &spec_out)?;
                    println!("{}", serde_json::json!({"globalized": true}));
                }
                None => println!(
                    "{}",
                    serde_json::json!({"action": spec_out, "globalized": true})
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            bundle,
            theorems,
            seed,
            cap,
            jobs,
            out,
            timings,
        } => {
            let caps = caps_with(cap);
            let loaded = io::load_bundle(&bundle, &caps)?;
            let opts = VerifyOptions {
                theorems,
                seed,
                caps,
                jobs: jobs.max(1),
                timings,
            };
            let report = verify::run_registry(&loaded, &opts);
            for e in &report.entries {
                let tag = match e.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                println!("{tag:4}  {:38}  {}", e.id, e.detail);
            }
            if let Some(path) = out {
                io::write_json(&path, &report)?;
            }
            if report.inconsistent {
                eprintln!("internal inconsistency detected");
                Ok(ExitCode::from(3))
            } else if report.failed() {
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn read_json_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn sibling(base: &Path, rel: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(rel)
}
