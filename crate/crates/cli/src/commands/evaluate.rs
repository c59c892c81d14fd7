use std::fs;

use anyhow::Result;
use grafia_core::eval::{evaluate as run_evaluate, EvaluationDocument};
use grafia_core::{load_jsonl, load_model, Error};

use crate::args::EvaluateArgs;

/// Error pairs listed under the table.
const TOP_ERRORS: usize = 5;

pub fn evaluate(a: EvaluateArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let test = load_jsonl(&a.test)?;
    let (cm, report) = run_evaluate(&model, &test)?;

    if let Some(path) = &a.confusion {
        fs::write(path, cm.to_csv()).map_err(|e| Error::io(path, e))?;
    }
    let id = a.id.clone().unwrap_or_else(|| {
        a.model.file_stem().map_or_else(|| "model".to_string(), |s| s.to_string_lossy().into_owned())
    });
    let document = EvaluationDocument::new(id, &model, cm, report);
    let json = serde_json::to_string_pretty(&document)?;
    if let Some(path) = &a.report {
        fs::write(path, format!("{json}\n")).map_err(|e| Error::io(path, e))?;
    }

    if a.json {
        println!("{json}");
        return Ok(());
    }
    println!("model: {} ({}, {})", document.model_id, document.model_kind, model.features.describe());
    println!("{}", document.metrics);
    let errors: Vec<_> = document.error_pairs.iter().take(TOP_ERRORS).collect();
    if !errors.is_empty() {
        println!("most frequent errors (gold -> predicted):");
        for e in errors {
            println!("  {:<8} -> {:<8} {}", e.gold.as_str(), e.predicted.as_str(), e.count);
        }
    }
    Ok(())
}
