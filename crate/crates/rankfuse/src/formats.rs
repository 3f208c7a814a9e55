//! Plain-text file formats. Everything is UTF-8 with LF newlines;
//! `#`-prefixed lines are comments and are ignored on input. Malformed rows
//! are hard errors carrying their line number — never warnings.
//!
//! - rankings: one ranking per line, comma-separated object ids in rank
//!   order (position 1 first);
//! - weights sidecar: one non-negative real per line, length-matched;
//! - labels: delimited rows under a `worker,item,label` header;
//! - gold: delimited rows under an `item,label` header.
//!
//! Labels and gold are comma-delimited in `.csv` files and tab-delimited in
//! `.tsv` files (chosen by extension).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rankfuse_core::{Ranking, RankingList, WeightedRanking};

use crate::bench::SweepResult;
use crate::crowd::{GoldLabels, ItemId, Label, LabelMatrix, PipelineReport, WorkerId};
use crate::Error;

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Non-comment, nonempty lines with their 1-based line numbers. Splits on
/// bare `\n` (not `str::lines`, which would silently accept CRLF) and
/// rejects any carriage return: the formats are LF-only.
fn content_lines<'a>(
    text: &'a str,
    path: &'a Path,
) -> impl Iterator<Item = Result<(usize, &'a str), Error>> + 'a {
    text.split('\n').enumerate().filter_map(move |(idx, line)| {
        let number = idx + 1;
        if line.contains('\r') {
            return Some(Err(parse_err(
                path,
                number,
                "carriage return found; files must use LF newlines",
            )));
        }
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some(Ok((number, trimmed)))
        }
    })
}

/// Parses a rankings file: each line one comma-separated ranking.
pub fn parse_rankings(path: &Path) -> Result<Vec<Ranking>, Error> {
    let text = read(path)?;
    let mut rankings = Vec::new();
    for entry in content_lines(&text, path) {
        let (line, content) = entry?;
        let ids = content
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<u64>()
                    .map_err(|_| parse_err(path, line, format!("invalid object id '{field}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ranking = Ranking::new(ids).map_err(|e| parse_err(path, line, e.to_string()))?;
        rankings.push(ranking);
    }
    if rankings.is_empty() {
        return Err(Error::Core(rankfuse_core::Error::EmptyInput));
    }
    Ok(rankings)
}

/// Parses a weights sidecar: one non-negative real per line.
pub fn parse_weights(path: &Path) -> Result<Vec<f64>, Error> {
    let text = read(path)?;
    let mut weights = Vec::new();
    for entry in content_lines(&text, path) {
        let (line, content) = entry?;
        let w = content
            .parse::<f64>()
            .map_err(|_| parse_err(path, line, format!("invalid weight '{content}'")))?;
        if !w.is_finite() || w < 0.0 {
            return Err(parse_err(path, line, format!("weight {w} must be >= 0")));
        }
        weights.push(w);
    }
    Ok(weights)
}

/// Loads rankings plus an optional weights sidecar into a validated list;
/// absent weights mean uniform 1.0.
pub fn parse_ranking_list(
    rankings_path: &Path,
    weights_path: Option<&Path>,
) -> Result<RankingList, Error> {
    let rankings = parse_rankings(rankings_path)?;
    match weights_path {
        None => Ok(RankingList::uniform(rankings)?),
        Some(wp) => {
            let weights = parse_weights(wp)?;
            if weights.len() != rankings.len() {
                return Err(Error::LengthMismatch {
                    rankings: rankings.len(),
                    weights: weights.len(),
                });
            }
            let items = rankings
                .into_iter()
                .zip(weights)
                .map(|(r, w)| WeightedRanking::new(r, w))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(RankingList::new(items)?)
        }
    }
}

/// Renders rankings one per line, comma-separated — the inverse of
/// [`parse_rankings`].
pub fn write_rankings(list: &RankingList) -> String {
    let mut out = String::new();
    for item in list.items() {
        let ids: Vec<String> = item.ranking().order().iter().map(u64::to_string).collect();
        let _ = writeln!(out, "{}", ids.join(","));
    }
    out
}

/// Renders the weights sidecar, one weight per line.
pub fn write_weights(list: &RankingList) -> String {
    let mut out = String::new();
    for item in list.items() {
        let _ = writeln!(out, "{}", item.weight());
    }
    out
}

fn delimiter_for(path: &Path) -> char {
    match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") => '\t',
        _ => ',',
    }
}

fn split_row<'a>(
    content: &'a str,
    delimiter: char,
    expected: usize,
    path: &Path,
    line: usize,
) -> Result<Vec<&'a str>, Error> {
    let fields: Vec<&str> = content.split(delimiter).map(str::trim).collect();
    if fields.len() != expected {
        return Err(parse_err(
            path,
            line,
            format!("expected {expected} fields, found {}", fields.len()),
        ));
    }
    Ok(fields)
}

fn parse_u64(field: &str, what: &str, path: &Path, line: usize) -> Result<u64, Error> {
    field
        .parse::<u64>()
        .map_err(|_| parse_err(path, line, format!("invalid {what} '{field}'")))
}

fn parse_label(field: &str, path: &Path, line: usize) -> Result<Label, Error> {
    match field {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(parse_err(
            path,
            line,
            format!("invalid label '{other}' (expected 0 or 1)"),
        )),
    }
}

/// Parses a worker/item/label file under a `worker,item,label` header.
pub fn parse_labels(path: &Path) -> Result<LabelMatrix, Error> {
    let text = read(path)?;
    let delimiter = delimiter_for(path);
    let header = ["worker", "item", "label"].join(&delimiter.to_string());
    let mut records: Vec<(WorkerId, ItemId, Label)> = Vec::new();
    let mut seen = std::collections::HashMap::new();
    let mut saw_header = false;
    for entry in content_lines(&text, path) {
        let (line, content) = entry?;
        if !saw_header {
            if content != header {
                return Err(parse_err(path, line, format!("expected header '{header}'")));
            }
            saw_header = true;
            continue;
        }
        let fields = split_row(content, delimiter, 3, path, line)?;
        let worker = parse_u64(fields[0], "worker id", path, line)?;
        let item = parse_u64(fields[1], "item id", path, line)?;
        let label = parse_label(fields[2], path, line)?;
        if let Some(first) = seen.insert((worker, item), line) {
            return Err(parse_err(
                path,
                line,
                format!("duplicate label for worker {worker}, item {item} (first at line {first})"),
            ));
        }
        records.push((worker, item, label));
    }
    if !saw_header {
        return Err(parse_err(path, 1, format!("missing header '{header}'")));
    }
    LabelMatrix::from_records(records)
}

/// Parses gold labels under an `item,label` header.
pub fn parse_gold(path: &Path) -> Result<GoldLabels, Error> {
    let text = read(path)?;
    let delimiter = delimiter_for(path);
    let header = ["item", "label"].join(&delimiter.to_string());
    let mut gold = GoldLabels::new();
    let mut saw_header = false;
    for entry in content_lines(&text, path) {
        let (line, content) = entry?;
        if !saw_header {
            if content != header {
                return Err(parse_err(path, line, format!("expected header '{header}'")));
            }
            saw_header = true;
            continue;
        }
        let fields = split_row(content, delimiter, 2, path, line)?;
        let item = parse_u64(fields[0], "item id", path, line)?;
        let label = parse_label(fields[1], path, line)?;
        if gold.insert(item, label).is_some() {
            return Err(parse_err(path, line, format!("duplicate gold item {item}")));
        }
    }
    if !saw_header {
        return Err(parse_err(path, 1, format!("missing header '{header}'")));
    }
    Ok(gold)
}

/// `# rankfuse key=value ...` header embedded in every output file so runs
/// are reproducible from their artifacts alone.
pub fn config_header(command: &str, pairs: &[(&str, String)]) -> String {
    let mut line = format!("# rankfuse {command}");
    for (key, value) in pairs {
        let _ = write!(line, " {key}={value}");
    }
    line.push('\n');
    line
}

/// Per-level similarity curves as CSV: `algorithm,sigma,mean_similarity`.
pub fn write_sweep_curves(result: &SweepResult, header: &str) -> String {
    let mut out = String::from(header);
    out.push_str("algorithm,sigma,mean_similarity\n");
    for curve in &result.curves {
        for &(sigma, sim) in &curve.points {
            let _ = writeln!(out, "{},{sigma},{sim}", curve.algorithm);
        }
    }
    out
}

/// AUC summary as CSV: `algorithm,auc`.
pub fn write_sweep_auc(result: &SweepResult, header: &str) -> String {
    let mut out = String::from(header);
    out.push_str("algorithm,auc\n");
    for curve in &result.curves {
        let _ = writeln!(out, "{},{}", curve.algorithm, curve.auc);
    }
    out
}

/// Key-value report for a crowd pipeline run.
pub fn write_crowd_report(report: &PipelineReport, header: &str) -> String {
    let mut out = String::from(header);
    let consensus: Vec<String> = report
        .consensus
        .consensus
        .order()
        .iter()
        .map(u64::to_string)
        .collect();
    let _ = writeln!(out, "baseline_accuracy = {}", report.baseline_accuracy);
    let _ = writeln!(out, "proposed_accuracy = {}", report.proposed_accuracy);
    let _ = writeln!(out, "n_workers = {}", report.worker_weights.len());
    let _ = writeln!(out, "n_items = {}", report.predictions.len());
    let _ = writeln!(out, "consensus_objective = {}", report.consensus.objective);
    let _ = writeln!(out, "consensus_weight = {}", report.consensus.weight);
    let _ = writeln!(out, "consensus_ranking = {}", consensus.join(","));
    out
}

/// Worker positions and weights as CSV: `worker,position,weight`.
pub fn write_annotator_csv(report: &PipelineReport, header: &str) -> String {
    let mut out = String::from(header);
    out.push_str("worker,position,weight\n");
    for (position, &worker) in report.consensus.consensus.order().iter().enumerate() {
        let _ = writeln!(
            out,
            "{worker},{},{}",
            position + 1,
            report.worker_weights[&worker]
        );
    }
    out
}

/// Predicted labels as CSV: `item,label`.
pub fn write_predictions_csv(
    predictions: &BTreeMap<ItemId, Label>,
    header: &str,
) -> String {
    let mut out = String::from(header);
    out.push_str("item,label\n");
    for (item, label) in predictions {
        let _ = writeln!(out, "{item},{label}");
    }
    out
}
