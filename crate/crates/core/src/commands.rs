//! Artifact-producing entry points behind the command-line tool. Every
//! command validates and computes everything in memory first, and only then
//! touches the filesystem.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::gdof::{self, Bound, GdofPoint};
use crate::geometry::{max_weighted_sum, RateRegion};
use crate::ic::{genie_outer, z_outer, ChannelConfig, InnerSweep, SweepGrid};
use crate::owc::{self, AverageTable, Scenario, Scheme, SweepCell};
use crate::p2p::bound_pair;

/// Rounds to the 9 significant digits used in every artifact, so JSON output
/// carries the same precision as the CSV files.
fn round9(x: f64) -> f64 {
    sig9(x).parse().unwrap_or(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct P2PRecord {
    pub peak_ratio: f64,
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
}

/// Both capacity bounds at `A/σ = peak_ratio` with σ = 1.
pub fn cmd_p2p(peak_ratio: f64, alpha: f64) -> Result<P2PRecord> {
    if !(peak_ratio > 0.0 && peak_ratio.is_finite()) {
        return Err(Error::config("peak-ratio", format!("must be finite and positive, got {peak_ratio}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::config("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    let b = bound_pair(peak_ratio, alpha, 1.0)?;
    Ok(P2PRecord {
        peak_ratio,
        alpha,
        lower: round9(b.lower),
        upper: round9(b.upper),
        gap: round9(b.gap()),
    })
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    if dir.exists() && !dir.is_dir() {
        return Err(Error::config("out", format!("`{}` exists and is not a directory", dir.display())));
    }
    fs::create_dir_all(dir)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionOutput {
    pub bound: Bound,
    pub path: PathBuf,
    pub sum_rate: f64,
}

/// Writes `<bound>.csv` (vertex list, header `r1,r2`) into `out` for each
/// requested bound.
pub fn cmd_region(cfg: &ChannelConfig, bounds: &[Bound], grid: &SweepGrid, out: &Path) -> Result<Vec<RegionOutput>> {
    cfg.validate()?;
    grid.validate()?;
    if bounds.is_empty() {
        return Err(Error::config("bounds", "at least one bound is required"));
    }
    let sweep = if bounds.iter().any(|b| matches!(b, Bound::Tin | Bound::Hk)) {
        Some(InnerSweep::new(cfg, grid)?)
    } else {
        None
    };
    let mut regions: Vec<(Bound, RateRegion)> = Vec::new();
    for &b in bounds {
        if regions.iter().any(|(seen, _)| *seen == b) {
            continue;
        }
        let r = match (b, &sweep) {
            (Bound::Tin, Some(s)) => s.tin_region()?,
            (Bound::Hk, Some(s)) => s.hk_region()?,
            (Bound::Z, _) => z_outer(cfg)?,
            (Bound::Genie, _) => genie_outer(cfg)?,
            _ => unreachable!("inner sweep is built whenever an inner bound is requested"),
        };
        regions.push((b, r));
    }
    ensure_dir(out)?;
    let mut outputs = Vec::new();
    for (b, r) in regions {
        let path = out.join(format!("{}.csv", b.name()));
        write_file(&path, |w| r.write_csv(w))?;
        outputs.push(RegionOutput {
            bound: b,
            path,
            sum_rate: max_weighted_sum(&r, 1.0, 1.0),
        });
    }
    Ok(outputs)
}

/// Writes the GDoF sweep CSV to the file `out`.
pub fn cmd_gdof(
    peak_ratio: f64,
    alpha: f64,
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    grid: &SweepGrid,
    out: &Path,
) -> Result<Vec<GdofPoint>> {
    if out.is_dir() {
        return Err(Error::config("out", format!("`{}` is a directory", out.display())));
    }
    let points = gdof::gdof_sweep(peak_ratio, alpha, delta_min, delta_max, steps, grid)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    write_file(out, |w| gdof::write_csv(&points, w))?;
    Ok(points)
}

/// A built-in scenario name or the path of a scenario JSON file.
pub fn load_scenario(name_or_path: &str) -> Result<Scenario> {
    match name_or_path {
        "onchip" | "indoor" => Scenario::builtin(name_or_path),
        path => {
            let p = Path::new(path);
            if !p.is_file() {
                return Err(Error::config(
                    "scenario",
                    format!("`{path}` is neither a built-in scenario (onchip, indoor) nor a file"),
                ));
            }
            Scenario::from_json(&fs::read_to_string(p)?)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScenarioOutput {
    pub sweep: Option<(PathBuf, Vec<SweepCell>)>,
    pub table: Option<(PathBuf, AverageTable)>,
}

/// Runs the placement sweep (`sweep.csv`) and/or the averaged table
/// (`table.json`) configured in the scenario, writing into `out`.
pub fn cmd_scenario(s: &Scenario, out: &Path) -> Result<ScenarioOutput> {
    s.validate()?;
    if s.sweep.is_none() && s.table.is_none() {
        return Err(Error::config("scenario", "nothing to run: add a `sweep` or a `table` section"));
    }
    let cells = s
        .sweep
        .as_ref()
        .map(|spec| owc::placement_sweep(s, spec, &Scheme::ALL))
        .transpose()?;
    let table = s
        .table
        .as_ref()
        .map(|spec| owc::indoor_average_table(s, spec, &Scheme::ALL))
        .transpose()?
        .map(|t| {
            t.into_iter()
                .map(|(k, row)| (k, row.into_iter().map(|(sc, v)| (sc, round9(v))).collect()))
                .collect::<BTreeMap<_, BTreeMap<_, _>>>()
        });
    ensure_dir(out)?;
    let mut result = ScenarioOutput::default();
    if let Some(cells) = cells {
        let path = out.join("sweep.csv");
        write_file(&path, |w| owc::write_sweep_csv(&cells, w))?;
        result.sweep = Some((path, cells));
    }
    if let Some(table) = table {
        let path = out.join("table.json");
        write_file(&path, |w| {
            serde_json::to_writer_pretty(&mut *w, &table)?;
            writeln!(w)
        })?;
        result.table = Some((path, table));
    }
    Ok(result)
}
