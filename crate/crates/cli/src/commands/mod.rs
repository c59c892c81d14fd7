mod classify;
mod corpus;
mod evaluate;
mod ingest;
mod train;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Result;
use grafia_core::Error;

pub use classify::classify;
pub use corpus::{split, stats};
pub use evaluate::evaluate;
pub use ingest::{default_config, ingest};
pub use train::train;

/// Writes every `(name, contents)` pair into `dir`, or none of them:
/// files go to temporary names first and are renamed once all writes
/// succeed.
pub(crate) fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let staged: Vec<(PathBuf, PathBuf)> = files
        .iter()
        .map(|(name, _)| (dir.join(format!(".{name}.partial")), dir.join(name)))
        .collect();
    let cleanup = |upto: usize| {
        for (tmp, fin) in &staged[..upto] {
            let _ = fs::remove_file(tmp);
            let _ = fs::remove_file(fin);
        }
    };
    for (i, ((tmp, _), (_, contents))) in staged.iter().zip(files).enumerate() {
        if let Err(e) = fs::write(tmp, contents) {
            cleanup(i + 1);
            return Err(Error::io(tmp, e).into());
        }
    }
    for (tmp, fin) in &staged {
        if let Err(e) = fs::rename(tmp, fin) {
            cleanup(staged.len());
            return Err(Error::io(fin, e).into());
        }
    }
    Ok(())
}

pub(crate) fn jsonl_string(samples: &[grafia_core::Sample]) -> String {
    let mut out = String::new();
    for s in samples {
        out.push_str(&s.to_jsonl());
        out.push('\n');
    }
    out
}
