use anyhow::Result;
use grafia_core::{class_distribution, load_jsonl, stratified_split, SplitRatios};

use super::{jsonl_string, write_outputs};
use crate::args::{SplitArgs, StatsArgs};

pub fn split(a: SplitArgs) -> Result<()> {
    let ratios: SplitRatios = a.ratios.parse()?;
    let samples = load_jsonl(&a.input)?;
    let set = stratified_split(&samples, ratios, a.seed)?;
    write_outputs(
        &a.out_dir,
        &[
            ("train.jsonl", jsonl_string(&set.train)),
            ("valid.jsonl", jsonl_string(&set.valid)),
            ("test.jsonl", jsonl_string(&set.test)),
        ],
    )?;
    println!(
        "train {} / valid {} / test {} (seed {})",
        set.train.len(),
        set.valid.len(),
        set.test.len(),
        a.seed
    );
    Ok(())
}

pub fn stats(a: StatsArgs) -> Result<()> {
    let samples = load_jsonl(&a.input)?;
    println!("{}", class_distribution(&samples));
    Ok(())
}
