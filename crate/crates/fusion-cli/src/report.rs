//! Report bundle: line-delimited cell records, a ranking document, a
//! versioned model/LAE archive and a human-readable summary. Identical
//! config and seed give byte-identical machine-readable files.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fusion::evaluation::{run_cell, wborda_rank, CellArchive, CellResult, RankingTable};

use crate::config::{load_config, ResolvedExperiment};
use crate::CliError;

pub const ARCHIVE_FORMAT: &str = "fusion-archive/1";

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelArchive {
    pub format: String,
    pub seed: u64,
    pub cells: Vec<CellArchive>,
}

pub fn run_experiments(
    config_path: &Path,
    out_override: &Option<PathBuf>,
    seed_override: Option<u64>,
    quiet: bool,
) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let seed = seed_override.unwrap_or(config.seed);
    let out_dir = out_override.clone().unwrap_or_else(|| config.out_dir.clone());

    // resolve and validate every plan before any work or output
    let resolved: Vec<ResolvedExperiment> = config
        .experiments
        .iter()
        .map(|e| e.resolve(seed))
        .collect::<Result<_, _>>()?;

    let mut cells: Vec<CellResult> = Vec::new();
    let mut archives: Vec<CellArchive> = Vec::new();
    for exp in &resolved {
        for &k in &exp.plan.k_splits {
            let run = run_cell(&exp.dataset, &exp.plan, k).map_err(|e| {
                CliError::Run(format!("experiment `{}`, K={k}: {e}", exp.name))
            })?;
            cells.extend(run.cells);
            archives.push(run.archive);
        }
    }
    let ranking = wborda_rank(&cells).map_err(|e| CliError::Run(e.to_string()))?;

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Run(format!("{}: {e}", out_dir.display())))?;
    write_jsonl(&out_dir.join("cells.jsonl"), &cells)?;
    write_json(&out_dir.join("ranking.json"), &ranking)?;
    write_json(
        &out_dir.join("archive.json"),
        &ModelArchive {
            format: ARCHIVE_FORMAT.to_string(),
            seed,
            cells: archives,
        },
    )?;

    let summary = render_summary(&ranking);
    std::fs::write(out_dir.join("summary.txt"), &summary)
        .map_err(|e| CliError::Run(e.to_string()))?;
    if !quiet {
        print!("{summary}");
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Run(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))
}

fn write_jsonl<T: Serialize>(path: &Path, values: &[T]) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    for v in values {
        serde_json::to_writer(&mut w, v).map_err(|e| CliError::Run(e.to_string()))?;
        w.write_all(b"\n").map_err(|e| CliError::Run(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Run(e.to_string()))
}

/// Human-readable ranking summary: one improvement table per experiment
/// column, then the rules sorted by total wBorda points.
pub fn render_summary(table: &RankingTable) -> String {
    let mut out = String::new();
    let mut columns: Vec<(String, usize, fusion::types::ClassifierKind)> = Vec::new();
    for p in &table.points {
        let key = (p.dataset.clone(), p.k, p.classifier);
        if !columns.contains(&key) {
            columns.push(key);
        }
    }

    for (dataset, k, classifier) in &columns {
        let cell = table
            .cells
            .iter()
            .find(|c| &c.dataset == dataset && c.k == *k && c.classifier == *classifier);
        writeln!(out, "column: {dataset} K={k} {classifier:?}").unwrap();
        if let Some(c) = cell {
            writeln!(
                out,
                "  members: mean {:.2}%  best {:.2}%  ({} realizations)",
                c.member_mean_accuracy, c.member_max_accuracy, c.realizations
            )
            .unwrap();
        }
        writeln!(out, "  {:<28} {:>11} {:>6}", "rule", "improvement", "points").unwrap();
        let mut rows: Vec<_> = table
            .points
            .iter()
            .filter(|p| &p.dataset == dataset && p.k == *k && p.classifier == *classifier)
            .collect();
        rows.sort_by(|a, b| {
            b.points
                .cmp(&a.points)
                .then(a.rule.display_name().cmp(b.rule.display_name()))
        });
        for p in rows {
            writeln!(
                out,
                "  {:<28} {:>11.2} {:>6}",
                p.rule.display_name(),
                p.mean_improvement,
                p.points
            )
            .unwrap();
        }
        out.push('\n');
    }

    writeln!(out, "overall wBorda ranking ({} columns)", columns.len()).unwrap();
    writeln!(out, "  {:<4} {:<28} {:>5} {:>6} {:>6}", "rank", "rule", "sum", "mean", "stdev").unwrap();
    for (i, t) in table.totals.iter().enumerate() {
        writeln!(
            out,
            "  {:<4} {:<28} {:>5} {:>6.2} {:>6.2}",
            i + 1,
            t.rule.display_name(),
            t.sum,
            t.mean,
            t.stdev
        )
        .unwrap();
    }
    out
}

/// Writes `points` evenly spaced (score, local_accuracy) pairs over the
/// member's observed score range as two-column data.
pub fn emit_lae_curve(
    archive_path: &Path,
    cell: usize,
    member: usize,
    points: usize,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    if points == 0 {
        return Err(CliError::Config("--points must be positive".into()));
    }
    let text = std::fs::read_to_string(archive_path)
        .map_err(|e| CliError::Run(format!("{}: {e}", archive_path.display())))?;
    let archive: ModelArchive =
        serde_json::from_str(&text).map_err(|e| CliError::Run(format!("bad archive: {e}")))?;
    if archive.format != ARCHIVE_FORMAT {
        return Err(CliError::Run(format!(
            "unsupported archive format `{}` (expected {ARCHIVE_FORMAT})",
            archive.format
        )));
    }
    let cell_ref = archive
        .cells
        .get(cell)
        .ok_or_else(|| CliError::Run(format!("cell index {cell} out of range ({} cells)", archive.cells.len())))?;
    let lae = cell_ref
        .fit
        .lae
        .get(member)
        .ok_or_else(|| CliError::Run(format!("member index {member} out of range (K={})", cell_ref.fit.lae.len())))?;

    let (lo, hi) = lae.score_range();
    let mut doc = String::from("score\tlocal_accuracy\n");
    for i in 0..points {
        let s = if points == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (points - 1) as f64
        };
        writeln!(doc, "{s}\t{}", lae.local_accuracy(s)).unwrap();
    }
    crate::write_output(out, &doc)
}
