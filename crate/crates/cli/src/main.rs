#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod config;
mod run;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use clap::{CommandFactory, FromArgMatches};
use serde_json::json;
use tuplesieve::budget::{parse_bytes, MEM_CAP_ENV};
use tuplesieve::Error;

use args::{Cli, Format};
use config::Manifest;
use run::{Outcome, Table};

pub const SCHEMA_VERSION: u32 = 1;

const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidInput { .. }) => EXIT_USAGE,
        Some(Error::Resource { .. }) => EXIT_RESOURCE,
        Some(Error::Verification(_)) => EXIT_VERIFICATION,
        _ => EXIT_OTHER,
    }
}

fn fail(err: anyhow::Error) -> ExitCode {
    eprintln!("error: {err:#}");
    ExitCode::from(exit_code(&err))
}

fn csv_bytes(table: &Table) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for r in &table.rows {
        w.write_record(r)?;
    }
    Ok(w.into_inner()?)
}

fn body(outcome: &Outcome, format: Format, command: &[String]) -> anyhow::Result<Vec<u8>> {
    if let Some(b) = &outcome.binary {
        return Ok(b.clone());
    }
    match format {
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command.join(" "),
                "report": outcome.report,
            });
            let mut s = serde_json::to_vec_pretty(&doc)?;
            s.push(b'\n');
            Ok(s)
        }
        Format::Csv => csv_bytes(&outcome.table),
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn main() -> ExitCode {
    let argv = match config::merged_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let matches = match Cli::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let mut cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let Some(command) = cli.command.take() else {
        let _ = Cli::command().print_help();
        return ExitCode::from(EXIT_USAGE);
    };
    let resolved = config::resolve(&matches, &cli);

    if let Some(cap) = &cli.mem_cap {
        if parse_bytes(cap).is_none() {
            eprintln!("error: invalid --mem-cap '{cap}' (expected e.g. 512M or 4G)");
            return ExitCode::from(EXIT_USAGE);
        }
        std::env::set_var(MEM_CAP_ENV, cap);
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_OTHER);
        }
    }
    let time_cap = match cli.time_cap {
        Some(t) if !(t > 0.0 && t.is_finite()) => {
            eprintln!("error: --time-cap must be a positive number of seconds");
            return ExitCode::from(EXIT_USAGE);
        }
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };

    let started = Instant::now();
    let binary_target = cli.out.is_some();
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(run::run(command, binary_target));
    });
    let result = match time_cap {
        Some(cap) => match rx.recv_timeout(cap) {
            Ok(r) => r,
            Err(mpsc::RecvTimeoutError::Timeout) => {
                eprintln!("error: time cap of {:.3} s exceeded", cap.as_secs_f64());
                return ExitCode::from(EXIT_RESOURCE);
            }
            Err(mpsc::RecvTimeoutError::Disconnected) => {
                eprintln!("error: worker thread panicked");
                return ExitCode::from(EXIT_OTHER);
            }
        },
        None => match rx.recv() {
            Ok(r) => r,
            Err(_) => {
                eprintln!("error: worker thread panicked");
                return ExitCode::from(EXIT_OTHER);
            }
        },
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let elapsed = started.elapsed().as_secs_f64();

    let format = cli.format.unwrap_or(Format::Json);
    let bytes = match body(&outcome, format, &resolved.command) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let mut outputs = Vec::new();
    let written = (|| -> anyhow::Result<()> {
        match &cli.out {
            Some(p) => {
                std::fs::write(p, &bytes)?;
                outputs.push(p.display().to_string());
            }
            None => std::io::stdout().write_all(&bytes)?,
        }
        for (p, data) in &outcome.side_files {
            std::fs::write(p, data)?;
            outputs.push(p.display().to_string());
        }
        Ok(())
    })();
    if let Err(e) = written {
        return fail(e);
    }

    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: "tuplesieve".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        formulas: config::formula(&resolved.command),
        config: resolved,
        outputs,
        wall_time_seconds: elapsed,
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    let text = match serde_json::to_string_pretty(&manifest) {
        Ok(t) => t,
        Err(e) => return fail(e.into()),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(manifest_path(p), text + "\n") {
                return fail(e.into());
            }
        }
        None => eprintln!("{text}"),
    }
    ExitCode::SUCCESS
}
