use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};

use anyhow::Result;
use grafia_core::eval::bulk_classify;
use grafia_core::{load_model, Error, OrthographyClass, TrainedModel};

use crate::args::ClassifyArgs;
use crate::usage;

/// Lines classified per parallel batch.
const BATCH: usize = 4096;

struct Summary {
    counts: BTreeMap<(bool, Option<OrthographyClass>), usize>,
    confidence_sum: f64,
    n: usize,
}

pub fn classify(a: ClassifyArgs) -> Result<()> {
    if let Some(t) = a.min_confidence {
        if !(0.0..=1.0).contains(&t) {
            return Err(usage(format!("--min-confidence must be in [0, 1], got {t}")));
        }
    }
    let model = load_model(&a.model)?;
    let input: Box<dyn BufRead> = match &a.input {
        Some(path) => Box::new(BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?)),
        None => Box::new(io::stdin().lock()),
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut summary = Summary { counts: BTreeMap::new(), confidence_sum: 0.0, n: 0 };

    let mut batch: Vec<String> = Vec::with_capacity(BATCH);
    for line in input.lines() {
        let line = line?;
        batch.push(line.trim_end_matches('\r').to_string());
        if batch.len() == BATCH {
            emit(&model, &batch, &a, &mut out, &mut summary)?;
            batch.clear();
        }
    }
    emit(&model, &batch, &a, &mut out, &mut summary)?;
    out.flush()?;

    let mut err = io::stderr().lock();
    writeln!(err, "classified {} lines", summary.n)?;
    for ((_, label), count) in &summary.counts {
        let name = label.map_or("UNKNOWN", |c| c.as_str());
        writeln!(err, "  {:<9} {:>8} {:>7.2}%", name, count, 100.0 * *count as f64 / summary.n as f64)?;
    }
    if summary.n > 0 {
        writeln!(err, "mean confidence: {:.4}", summary.confidence_sum / summary.n as f64)?;
    }
    Ok(())
}

fn emit(
    model: &TrainedModel,
    lines: &[String],
    a: &ClassifyArgs,
    out: &mut impl Write,
    summary: &mut Summary,
) -> Result<()> {
    if lines.is_empty() {
        return Ok(());
    }
    let report = bulk_classify(model, lines, a.min_confidence);
    for r in &report.records {
        *summary.counts.entry((r.label.is_none(), r.label)).or_default() += 1;
        summary.confidence_sum += r.confidence;
        summary.n += 1;
        if a.jsonl {
            let tag = r.label.unwrap_or(OrthographyClass::NoTag);
            let text = serde_json::to_string(&r.text)?;
            writeln!(out, "{{\"text\": {text}, \"tag\": \"{tag}\"}}")?;
        } else if a.echo {
            writeln!(out, "{}\t{:.4}\t{}", r.label_str(), r.confidence, r.text)?;
        } else {
            writeln!(out, "{}\t{:.4}", r.label_str(), r.confidence)?;
        }
    }
    Ok(())
}
