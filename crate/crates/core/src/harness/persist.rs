//! Output files. Every file starts with one metadata line: a JSON object
//! under `"meta"` for traces, a `#`-prefixed line for CSV tables.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::regret::{RegretTrace, TraceRecord};
use super::run::RunSummary;
use crate::env::GENERATOR_ID;
use crate::error::{Error, Result};

/// Pins the timestamp written into output headers.
pub const TIMESTAMP_ENV: &str = "DGETC_TIMESTAMP";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config_sha256: String,
    pub seed: u64,
    pub generator: String,
    pub version: String,
    pub timestamp: String,
}

impl Metadata {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        Self::with_hash(cfg.hash(), cfg.seed)
    }

    pub fn with_hash(config_sha256: String, seed: u64) -> Self {
        Self {
            config_sha256,
            seed,
            generator: GENERATOR_ID.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
        }
    }

    fn csv_header(&self) -> String {
        format!(
            "# config_sha256={} seed={} generator={:?} version={} timestamp={}\n",
            self.config_sha256, self.seed, self.generator, self.version, self.timestamp
        )
    }
}

fn timestamp() -> String {
    std::env::var(TIMESTAMP_ENV).unwrap_or_else(|_| {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        format!("unix:{secs}")
    })
}

#[derive(Serialize, Deserialize)]
struct MetaLine {
    meta: Metadata,
    optimum: f64,
    truncated: bool,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Writes `trace` as JSON lines: the metadata line, then one record per round.
pub fn write_trace(path: &Path, meta: &Metadata, trace: &RegretTrace) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = create(path)?;
    let head = MetaLine {
        meta: meta.clone(),
        optimum: trace.optimum,
        truncated: trace.truncated,
    };
    serde_json::to_writer(&mut w, &head).map_err(|e| io(e.into()))?;
    w.write_all(b"\n").map_err(io)?;
    for r in &trace.records {
        serde_json::to_writer(&mut w, r).map_err(|e| io(e.into()))?;
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads a trace file back; commitments are not part of it.
pub fn read_trace(path: &Path) -> Result<(Metadata, RegretTrace)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let bad = |msg: String| Error::Config(format!("{}: {msg}", path.display()));
    let first = lines
        .next()
        .ok_or_else(|| bad("empty trace file".into()))?
        .map_err(|e| Error::io(path, e))?;
    let head: MetaLine = serde_json::from_str(&first).map_err(|e| bad(e.to_string()))?;
    let mut records = Vec::new();
    for line in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        let r: TraceRecord = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        records.push(r);
    }
    Ok((
        head.meta,
        RegretTrace {
            optimum: head.optimum,
            records,
            commitments: Vec::new(),
            truncated: head.truncated,
        },
    ))
}

/// CSV writer that first emits the metadata comment line.
pub(crate) fn csv_writer(path: &Path, meta: &Metadata) -> Result<csv::Writer<BufWriter<File>>> {
    let mut w = create(path)?;
    w.write_all(meta.csv_header().as_bytes()).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(w))
}

pub(crate) fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

/// CSV reader that skips the metadata line.
pub fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| csv_err(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// Writes `summary.csv`, `aggregate.csv`, `commitments.csv` and the resolved
/// `config.toml` into `dir`.
pub fn write_summary(dir: &Path, meta: &Metadata, s: &RunSummary) -> Result<()> {
    let path = dir.join("summary.csv");
    let mut w = csv_writer(&path, meta)?;
    let e = |err| csv_err(&path, err);
    w.write_record(["replication", "regret", "exploration_rounds", "exploit_mean_regret", "truncated"])
        .map_err(e)?;
    for r in &s.results {
        w.write_record([
            r.replication.to_string(),
            r.regret.to_string(),
            r.exploration_rounds.to_string(),
            opt(r.exploit_mean_regret),
            r.truncated.to_string(),
        ])
        .map_err(e)?;
    }
    w.flush().map_err(|err| Error::io(&path, err))?;

    let path = dir.join("aggregate.csv");
    let mut w = csv_writer(&path, meta)?;
    let e = |err| csv_err(&path, err);
    let a = &s.aggregates;
    w.write_record(["statistic", "value"]).map_err(e)?;
    for (k, v) in [
        ("optimum", s.optimum),
        ("replications", a.replications as f64),
        ("mean_regret", a.mean_regret),
        ("std_regret", a.std_regret),
        ("stderr_regret", a.stderr_regret),
        ("q05", a.q05),
        ("q25", a.q25),
        ("median", a.median),
        ("q75", a.q75),
        ("q95", a.q95),
        ("mean_exploration", a.mean_exploration),
        ("truncated", a.truncated as f64),
    ] {
        w.write_record([k.to_string(), v.to_string()]).map_err(e)?;
    }
    w.flush().map_err(|err| Error::io(&path, err))?;

    let path = dir.join("commitments.csv");
    let mut w = csv_writer(&path, meta)?;
    let e = |err| csv_err(&path, err);
    w.write_record(["replication", "item", "tau", "alpha_hat", "beta_hat", "p", "exit"])
        .map_err(e)?;
    for r in &s.results {
        for c in &r.commitments {
            let exit = serde_json::to_value(c.exit).expect("unit enum serializes");
            w.write_record([
                r.replication.to_string(),
                c.item.to_string(),
                c.tau.to_string(),
                c.alpha_hat.to_string(),
                c.beta_hat.to_string(),
                c.p.to_string(),
                exit.as_str().unwrap_or_default().to_string(),
            ])
            .map_err(e)?;
        }
    }
    w.flush().map_err(|err| Error::io(&path, err))?;

    let path = dir.join("config.toml");
    let text = format!("{}{}", meta.csv_header(), s.config.to_toml_string());
    std::fs::write(&path, text).map_err(|err| Error::io(&path, err))
}
