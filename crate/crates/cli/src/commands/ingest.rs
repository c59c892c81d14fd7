use std::fs::File;
use std::io::{self, BufReader};

use anyhow::Result;
use grafia_core::wiki::{ingest as run_ingest, IngestConfig, IngestOutput, DEFAULT_CONFIG_TOML};
use grafia_core::Error;

use super::{jsonl_string, write_outputs};
use crate::args::IngestArgs;

pub fn default_config() -> Result<()> {
    print!("{DEFAULT_CONFIG_TOML}");
    Ok(())
}

pub fn ingest(a: IngestArgs) -> Result<()> {
    let config = match &a.config {
        Some(path) => IngestConfig::load(path)?,
        None => IngestConfig::default(),
    };
    let output: IngestOutput = if a.dump.as_os_str() == "-" {
        run_ingest(io::stdin().lock(), &config)?
    } else {
        let file = File::open(&a.dump).map_err(|e| Error::io(&a.dump, e))?;
        run_ingest(BufReader::with_capacity(1 << 20, file), &config)?
    };

    let report = output.report();
    let mut files = vec![
        ("corpus.jsonl", jsonl_string(&output.filtered.kept)),
        ("untagged.jsonl", jsonl_string(&output.filtered.untagged)),
        ("filter_report.txt", report.to_toml_string()),
    ];
    if a.review {
        let mut review = String::from("tag\treasons\ttext\n");
        for item in &output.filtered.review {
            review.push_str(&format!("{}\t{}\t{}\n", item.tag, item.reasons.join("; "), item.text));
        }
        files.push(("review.tsv", review));
    }
    write_outputs(&a.out, &files)?;

    println!(
        "{} articles ({} tagged, {} with conflicting tags)",
        report.pages.articles, report.pages.tagged, report.pages.conflicting_tags
    );
    println!("{}", report.lines);
    Ok(())
}
