use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::config::{set_dotted, ExperimentConfig};
use super::persist::{csv_err, csv_writer, Metadata};
use super::run::{run_experiment, Aggregates, RunOptions};
use crate::error::{Error, Result};

/// A grid of experiments: a base config plus dotted-key overrides, either
/// as a cartesian product of `[axes]` or as explicit `[[cells]]`.
///
/// ```toml
/// [base]
/// algorithm = "dgetc"
/// horizon = 1000
/// # ... remaining config fields
///
/// [axes]
/// horizon = [1000, 10000, 100000]
/// algorithm = ["dgetc", "rgl"]
/// ```
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub base: toml::Value,
    #[serde(default)]
    pub axes: toml::Table,
    #[serde(default)]
    pub cells: Vec<toml::Table>,
}

impl SweepGrid {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Override sets of every cell: the axes product (first axis slowest),
    /// then the explicit cells. No axes and no cells is an empty grid.
    pub fn cells(&self) -> Result<Vec<Vec<(String, toml::Value)>>> {
        let mut out: Vec<Vec<(String, toml::Value)>> = Vec::new();
        if !self.axes.is_empty() {
            out.push(Vec::new());
            for (key, values) in &self.axes {
                let values = values
                    .as_array()
                    .ok_or_else(|| Error::Config(format!("axis {key:?} must be an array")))?;
                out = out
                    .into_iter()
                    .flat_map(|prefix| {
                        values.iter().map(move |v| {
                            let mut cell = prefix.clone();
                            cell.push((key.clone(), v.clone()));
                            cell
                        })
                    })
                    .collect();
            }
        }
        for cell in &self.cells {
            out.push(cell.iter().map(|(k, v)| (k.clone(), v.clone())).collect());
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub cell: usize,
    /// Overrides of the cell, `key=value` joined by `;`.
    pub label: String,
    pub replication: Option<usize>,
    pub regret: Option<f64>,
    pub exploration_rounds: Option<u64>,
    pub truncated: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Aggregates of each successful cell.
    pub cells: Vec<(usize, String, Aggregates)>,
}

fn label(cell: &[(String, toml::Value)]) -> String {
    cell.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

/// Runs every cell; a failing cell yields one row carrying the error and the
/// sweep carries on. With `out_dir`, each cell's outputs go to `cell{n}/` and
/// the long table to `sweep.csv`.
pub fn sweep(grid: &SweepGrid, opts: &RunOptions) -> Result<SweepTable> {
    let mut table = SweepTable::default();
    for (n, cell) in grid.cells()?.into_iter().enumerate() {
        let label = label(&cell);
        let cell_opts = RunOptions {
            out_dir: opts.out_dir.as_ref().map(|d| d.join(format!("cell{n}"))),
            ..opts.clone()
        };
        let outcome = (|| {
            let mut value = grid.base.clone();
            for (k, v) in cell {
                set_dotted(&mut value, &k, v)?;
            }
            let cfg = ExperimentConfig::from_value(value)?;
            run_experiment(&cfg, &cell_opts)
        })();
        match outcome {
            Ok(summary) => {
                for r in &summary.results {
                    table.rows.push(SweepRow {
                        cell: n,
                        label: label.clone(),
                        replication: Some(r.replication),
                        regret: Some(r.regret),
                        exploration_rounds: Some(r.exploration_rounds),
                        truncated: Some(r.truncated),
                        error: None,
                    });
                }
                table.cells.push((n, label, summary.aggregates));
            }
            Err(e) => {
                log::warn!("sweep cell {n} ({label}) failed: {e}");
                table.rows.push(SweepRow {
                    cell: n,
                    label,
                    replication: None,
                    regret: None,
                    exploration_rounds: None,
                    truncated: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    if let Some(dir) = &opts.out_dir {
        write_sweep(dir, grid, &table)?;
    }
    Ok(table)
}

fn write_sweep(dir: &Path, grid: &SweepGrid, table: &SweepTable) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let hash = hex::encode(Sha256::digest(format!("{grid:?}").as_bytes()));
    let seed = grid.base.get("seed").and_then(|s| s.as_integer()).unwrap_or(0) as u64;
    let meta = Metadata::with_hash(hash, seed);
    let path: PathBuf = dir.join("sweep.csv");
    let mut w = csv_writer(&path, &meta)?;
    let e = |err| csv_err(&path, err);
    w.write_record(["cell", "label", "replication", "regret", "exploration_rounds", "truncated", "error"])
        .map_err(e)?;
    let s = |v: Option<String>| v.unwrap_or_default();
    for r in &table.rows {
        w.write_record([
            r.cell.to_string(),
            r.label.clone(),
            s(r.replication.map(|x| x.to_string())),
            s(r.regret.map(|x| x.to_string())),
            s(r.exploration_rounds.map(|x| x.to_string())),
            s(r.truncated.map(|x| x.to_string())),
            s(r.error.clone()),
        ])
        .map_err(e)?;
    }
    w.flush().map_err(|err| Error::io(&path, err))
}
