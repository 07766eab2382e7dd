use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::experiment::{ExperimentResult, VerificationResult};
use super::plot::scatter_svg;
use super::{HarnessError, OutputFormat, Regime, Result};
use crate::verify::reports_to_json_lines;

/// `{regime}_n{n}_k{k}_seed{seed}`.
pub fn cell_file_stem(regime: Regime, n: usize, k: usize, seed: u64) -> String {
    format!("{}_n{n}_k{k}_seed{seed}", regime.as_str())
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

/// Writes the result JSON (`{regime}_seed{seed}_result.json`) and, depending
/// on `format`, one `re,im` CSV and/or SVG scatter per cell. Cells record
/// their CSV name in `points_file`. Returns the written paths, result JSON last.
pub fn export_result(result: &mut ExperimentResult, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for cell in &mut result.cells {
        let stem = cell_file_stem(result.regime, cell.n, cell.k, cell.seed);
        let Some(esd) = cell.esd.as_ref() else {
            continue;
        };
        if matches!(format, OutputFormat::Csv | OutputFormat::Svg) {
            let name = format!("{stem}.csv");
            let path = dir.join(&name);
            let file = fs::File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
            let mut w = BufWriter::new(file);
            esd.write_csv(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| HarnessError::io(&path, e))?;
            cell.points_file = Some(name);
            written.push(path);
        }
        if format == OutputFormat::Svg {
            let path = dir.join(format!("{stem}.svg"));
            write_file(&path, scatter_svg(esd.points(), true).as_bytes())?;
            written.push(path);
        }
    }
    let path = dir.join(format!("{}_seed{}_result.json", result.regime.as_str(), result.seed));
    let mut json = serde_json::to_string_pretty(result).expect("result serializes");
    json.push('\n');
    write_file(&path, json.as_bytes())?;
    written.push(path);
    Ok(written)
}

pub fn load_result(path: &Path) -> Result<ExperimentResult> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// `verify_seed{seed}.jsonl` (one report per line) and `verify_seed{seed}_summary.json`.
pub fn export_verification(result: &VerificationResult, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let lines = dir.join(format!("verify_seed{}.jsonl", result.seed));
    write_file(&lines, reports_to_json_lines(&result.reports).as_bytes())?;
    let summary = serde_json::json!({
        "schema_version": result.schema_version,
        "seed": result.seed,
        "reports": result.reports.len(),
        "deterministic_violations": result.deterministic_violations,
        "probabilistic_violations": result.probabilistic_violations,
        "passed": result.passed(),
    });
    let summary_path = dir.join(format!("verify_seed{}_summary.json", result.seed));
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    write_file(&summary_path, text.as_bytes())?;
    Ok(vec![lines, summary_path])
}
