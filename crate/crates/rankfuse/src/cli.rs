//! The `rankfuse` command-line interface.
//!
//! Four subcommands: `aggregate` (consensus of a rankings file), `bench`
//! (the synthetic noise sweep), `crowd` (label aggregation pipeline), and
//! `metrics` (distances between two rankings of a file). Every run prints
//! and embeds its effective configuration as `# rankfuse ...` comment lines
//! so outputs are reproducible from the artifacts alone.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use rankfuse_core::merge::{aggregate, InitialWeightPolicy, MergeConfig};
use rankfuse_core::metrics::{
    footrule_distance, kendall_distance, normalized_similarity, weighted_total_distance,
    DistanceKind,
};

use crate::bench::{run_algorithm, run_sweep, Algorithm, SweepConfig};
use crate::crowd::{run_pipeline, Feature, PipelineConfig};
use crate::formats;
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "rankfuse", version, about = "Weighted rank aggregation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Aggregate a rankings file into a consensus ranking.
    Aggregate {
        /// Rankings file: one comma-separated ranking per line.
        #[arg(long)]
        rankings: PathBuf,
        /// Optional weights sidecar: one non-negative real per line.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// proposed | borda | mean | geometric | voting | mc4 | stuart | rra
        #[arg(long, default_value = "proposed")]
        algorithm: String,
        /// footrule | kendall
        #[arg(long, default_value = "footrule")]
        distance: String,
        /// Past-experience blend for the merged-ranking weight update.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Also write the output to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the Gaussian-noise benchmark and write curve + AUC CSVs.
    Bench {
        #[arg(long, default_value_t = 20)]
        n_rankings: usize,
        #[arg(long, default_value_t = 30)]
        m_objects: usize,
        #[arg(long, default_value_t = 50)]
        iterations: usize,
        #[arg(long, default_value_t = 0.02)]
        sigma_step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated algorithm list, or 'all'.
        #[arg(long, default_value = "all")]
        algorithms: String,
        #[arg(long, default_value = "footrule")]
        distance: String,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Directory for curves.csv and auc.csv (created if missing).
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Aggregate crowd labels: majority baseline, worker quality ranking,
    /// and rank-weighted predictions.
    Crowd {
        /// Label file with a worker,item,label header (.csv or .tsv).
        #[arg(long)]
        labels: PathBuf,
        /// Gold file with an item,label header (.csv or .tsv).
        #[arg(long)]
        gold: PathBuf,
        /// 'default' (accuracy,specificity,sensitivity,precision),
        /// 'literal' (sensitivity counted twice under its recall alias), or
        /// a comma-separated feature list.
        #[arg(long, default_value = "default")]
        features: String,
        /// Label assigned on exact vote ties (0 or 1).
        #[arg(long, default_value_t = 1)]
        tie_label: u8,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Value used when a feature's denominator is zero.
        #[arg(long, default_value_t = 0.0)]
        undefined_value: f64,
        /// Give every worker weight 1.0 (prediction reduces to majority voting).
        #[arg(long)]
        uniform_weights: bool,
        /// Directory for report.txt, annotators.csv, predictions.csv.
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Distances and similarities between two rankings of a file.
    Metrics {
        #[arg(long)]
        rankings: PathBuf,
        /// 1-based line indices of the pair to compare.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Vec<usize>,
    },
}

fn parse_distance(s: &str) -> Result<DistanceKind, Error> {
    match s {
        "footrule" => Ok(DistanceKind::SpearmanFootrule),
        "kendall" => Ok(DistanceKind::KendallTau),
        other => Err(Error::Config(format!(
            "unknown distance '{other}' (expected footrule or kendall)"
        ))),
    }
}

fn parse_algorithms(s: &str) -> Result<Vec<Algorithm>, Error> {
    if s == "all" {
        return Ok(Algorithm::ALL.to_vec());
    }
    let mut out = Vec::new();
    for token in s.split(',') {
        let alg: Algorithm = token.trim().parse()?;
        if !out.contains(&alg) {
            out.push(alg);
        }
    }
    if out.is_empty() {
        return Err(Error::Config("at least one algorithm is required".into()));
    }
    Ok(out)
}

fn parse_features(s: &str) -> Result<Vec<Feature>, Error> {
    match s {
        "default" => Ok(PipelineConfig::default().features),
        "literal" => Ok(PipelineConfig::literal_features()),
        list => list
            .split(',')
            .map(|token| match token.trim() {
                "accuracy" => Ok(Feature::Accuracy),
                "specificity" => Ok(Feature::Specificity),
                "sensitivity" | "recall" => Ok(Feature::Sensitivity),
                "precision" => Ok(Feature::Precision),
                other => Err(Error::Config(format!("unknown feature '{other}'"))),
            })
            .collect(),
    }
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf, Error> {
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Executes a parsed command, printing results to stdout and writing any
/// requested files.
pub fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Aggregate {
            rankings,
            weights,
            algorithm,
            distance,
            alpha,
            output,
        } => {
            let algorithm: Algorithm = algorithm.parse()?;
            let distance = parse_distance(&distance)?;
            let inputs = formats::parse_ranking_list(&rankings, weights.as_deref())?;
            let merge = MergeConfig {
                distance,
                alpha,
                initial_weight_policy: if weights.is_some() {
                    InitialWeightPolicy::Provided
                } else {
                    InitialWeightPolicy::Uniform
                },
                ..MergeConfig::default()
            };
            let header = formats::config_header(
                "aggregate",
                &[
                    ("rankings", rankings.display().to_string()),
                    (
                        "weights",
                        weights
                            .as_ref()
                            .map(|p| p.display().to_string())
                            .unwrap_or_else(|| "uniform".into()),
                    ),
                    ("algorithm", algorithm.to_string()),
                    ("distance", distance_token(distance).into()),
                    ("alpha", alpha.to_string()),
                ],
            );

            let mut body = String::new();
            if algorithm == Algorithm::Proposed {
                let result = aggregate(&inputs, &merge)?;
                let order: Vec<String> =
                    result.consensus.order().iter().map(u64::to_string).collect();
                body.push_str(&format!("consensus = {}\n", order.join(",")));
                body.push_str(&format!("objective = {}\n", result.objective));
                body.push_str(&format!("weight = {}\n", result.weight));
                body.push_str(&format!("merges = {}\n", result.merge_trace.len()));
            } else {
                let consensus =
                    run_algorithm(algorithm, &inputs, &merge, &Default::default())?;
                let objective = weighted_total_distance(&consensus, &inputs, distance)?;
                let order: Vec<String> = consensus.order().iter().map(u64::to_string).collect();
                body.push_str(&format!("consensus = {}\n", order.join(",")));
                body.push_str(&format!("objective = {objective}\n"));
            }
            print!("{header}{body}");
            if let Some(path) = output {
                std::fs::write(&path, format!("{header}{body}")).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            Ok(())
        }

        Command::Bench {
            n_rankings,
            m_objects,
            iterations,
            sigma_step,
            seed,
            algorithms,
            distance,
            alpha,
            output_dir,
        } => {
            let cfg = SweepConfig {
                n_rankings,
                m_objects,
                iterations,
                sigma_step,
                seed,
                algorithms: parse_algorithms(&algorithms)?,
                merge: MergeConfig {
                    distance: parse_distance(&distance)?,
                    alpha,
                    ..MergeConfig::default()
                },
                ..SweepConfig::default()
            };
            let header = formats::config_header(
                "bench",
                &[
                    ("n_rankings", cfg.n_rankings.to_string()),
                    ("m_objects", cfg.m_objects.to_string()),
                    ("iterations", cfg.iterations.to_string()),
                    ("sigma_step", cfg.sigma_step.to_string()),
                    ("seed", cfg.seed.to_string()),
                    (
                        "algorithms",
                        cfg.algorithms
                            .iter()
                            .map(Algorithm::token)
                            .collect::<Vec<_>>()
                            .join(","),
                    ),
                    ("distance", distance_token(cfg.merge.distance).into()),
                    ("alpha", cfg.merge.alpha.to_string()),
                ],
            );
            let result = run_sweep(&cfg)?;
            std::fs::create_dir_all(&output_dir).map_err(|source| Error::Io {
                path: output_dir.clone(),
                source,
            })?;
            let curves = write_file(
                &output_dir,
                "curves.csv",
                &formats::write_sweep_curves(&result, &header),
            )?;
            let auc_csv = formats::write_sweep_auc(&result, &header);
            let auc = write_file(&output_dir, "auc.csv", &auc_csv)?;
            print!("{auc_csv}");
            log::info!("wrote {} and {}", curves.display(), auc.display());
            Ok(())
        }

        Command::Crowd {
            labels,
            gold,
            features,
            tie_label,
            alpha,
            undefined_value,
            uniform_weights,
            output_dir,
        } => {
            let cfg = PipelineConfig {
                features: parse_features(&features)?,
                tie_label,
                merge: MergeConfig {
                    alpha,
                    ..MergeConfig::default()
                },
                undefined_feature_value: undefined_value,
                uniform_weights,
            };
            let label_matrix = formats::parse_labels(&labels)?;
            let gold_labels = formats::parse_gold(&gold)?;
            let header = formats::config_header(
                "crowd",
                &[
                    ("labels", labels.display().to_string()),
                    ("gold", gold.display().to_string()),
                    (
                        "features",
                        cfg.features
                            .iter()
                            .map(Feature::token)
                            .collect::<Vec<_>>()
                            .join(","),
                    ),
                    ("tie_label", cfg.tie_label.to_string()),
                    ("alpha", cfg.merge.alpha.to_string()),
                    ("undefined_value", cfg.undefined_feature_value.to_string()),
                    ("uniform_weights", cfg.uniform_weights.to_string()),
                ],
            );
            let report = run_pipeline(&label_matrix, &gold_labels, &cfg)?;
            std::fs::create_dir_all(&output_dir).map_err(|source| Error::Io {
                path: output_dir.clone(),
                source,
            })?;
            let text = formats::write_crowd_report(&report, &header);
            write_file(&output_dir, "report.txt", &text)?;
            write_file(
                &output_dir,
                "annotators.csv",
                &formats::write_annotator_csv(&report, &header),
            )?;
            write_file(
                &output_dir,
                "predictions.csv",
                &formats::write_predictions_csv(&report.predictions, &header),
            )?;
            print!("{text}");
            Ok(())
        }

        Command::Metrics { rankings, pair } => {
            let list = formats::parse_rankings(&rankings)?;
            let [i, j] = pair[..] else {
                return Err(Error::Config("--pair needs exactly two indices".into()));
            };
            for idx in [i, j] {
                if idx == 0 || idx > list.len() {
                    return Err(Error::Config(format!(
                        "pair index {idx} is outside 1..={}",
                        list.len()
                    )));
                }
            }
            let (a, b) = (&list[i - 1], &list[j - 1]);
            let header = formats::config_header(
                "metrics",
                &[
                    ("rankings", rankings.display().to_string()),
                    ("pair", format!("{i},{j}")),
                ],
            );
            print!("{header}");
            println!("footrule_distance = {}", footrule_distance(a, b)?);
            println!("kendall_distance = {}", kendall_distance(a, b)?);
            println!(
                "footrule_similarity = {}",
                normalized_similarity(a, b, DistanceKind::SpearmanFootrule)?
            );
            println!(
                "kendall_similarity = {}",
                normalized_similarity(a, b, DistanceKind::KendallTau)?
            );
            Ok(())
        }
    }
}

fn distance_token(kind: DistanceKind) -> &'static str {
    match kind {
        DistanceKind::SpearmanFootrule => "footrule",
        DistanceKind::KendallTau => "kendall",
    }
}

/// Applies the RANKFUSE_THREADS cap to the global worker pool. Call once at
/// startup, before any parallel work.
pub fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("RANKFUSE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("RANKFUSE_THREADS='{raw}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_and_algorithm_parsing() {
        assert_eq!(
            parse_distance("footrule").unwrap(),
            DistanceKind::SpearmanFootrule
        );
        assert_eq!(parse_distance("kendall").unwrap(), DistanceKind::KendallTau);
        assert!(parse_distance("hamming").is_err());

        assert_eq!(parse_algorithms("all").unwrap().len(), 8);
        assert_eq!(
            parse_algorithms("proposed,borda").unwrap(),
            vec![Algorithm::Proposed, Algorithm::Borda]
        );
        assert!(parse_algorithms("nope").is_err());
    }

    #[test]
    fn feature_parsing() {
        assert_eq!(parse_features("default").unwrap().len(), 4);
        let literal = parse_features("literal").unwrap();
        assert_eq!(
            literal,
            vec![
                Feature::Accuracy,
                Feature::Specificity,
                Feature::Sensitivity,
                Feature::Sensitivity
            ]
        );
        assert_eq!(
            parse_features("recall,precision").unwrap(),
            vec![Feature::Sensitivity, Feature::Precision]
        );
        assert!(parse_features("vibes").is_err());
    }

    #[test]
    fn unknown_flags_are_rejected() {
        let parsed = Cli::try_parse_from(["rankfuse", "metrics", "--rankings", "x", "--bogus"]);
        assert!(parsed.is_err());
    }
}
