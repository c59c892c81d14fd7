use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use grafia_core::synthetic::synthetic_corpus;
use grafia_core::{load_jsonl, load_model, write_jsonl, OrthographyClass, Sample};
use tempfile::TempDir;

fn grafia(args: &[&str]) -> Output {
    grafia_stdin(args, None)
}

fn grafia_stdin(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_grafia"))
        .args(args)
        .env_remove("GRAFIA_CONFIG")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            // the binary may exit before reading stdin
            if let Err(e) = pipe.write_all(s.as_bytes()) {
                assert_eq!(e.kind(), std::io::ErrorKind::BrokenPipe, "{e}");
            }
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const DUMP: &str = r#"<mediawiki xmlns="http://www.mediawiki.org/xml/export-0.11/">
<page><title>Milan</title><ns>0</ns><revision><text xml:space="preserve">{{GrafMIL}}
'''Milan''' l'è la cittaa pussee granda de la [[Lombardia]].
== Storia ==
Milan l'è staa fondada di Insubri tanti agn fa.
Milan
</text></revision></page>
<page><title>Bergum</title><ns>0</ns><revision><text xml:space="preserve">Bergum l'è 'na cità de la Lombardia orientala.</text></revision></page>
<page><title>Milàn</title><ns>0</ns><redirect title="Milan" /><revision><text>#REDIRECT [[Milan]]</text></revision></page>
</mediawiki>
"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.path(name);
        fs::write(&path, contents).unwrap();
        path
    }

    /// Synthetic train and valid files.
    fn corpus(&self) -> (PathBuf, PathBuf) {
        let samples = synthetic_corpus(60, 3);
        let (train, valid): (Vec<_>, Vec<_>) = samples.iter().cloned().enumerate().partition(|(i, _)| i % 5 != 0);
        let strip = |v: Vec<(usize, Sample)>| v.into_iter().map(|(_, s)| s).collect::<Vec<_>>();
        let (t, v) = (self.path("train.jsonl"), self.path("valid.jsonl"));
        write_jsonl(&t, &strip(train)).unwrap();
        write_jsonl(&v, &strip(valid)).unwrap();
        (t, v)
    }

    fn trained(&self, model: &str, features: &str) -> (PathBuf, PathBuf) {
        let (train, valid) = self.corpus();
        let out = self.path(&format!("{model}.json"));
        let o = grafia(&["train", "--model", model, "--features", features, "--train", p(&train), "--valid", p(&valid), "--out", p(&out)]);
        assert!(o.status.success(), "{}", stderr(&o));
        (out, valid)
    }
}

#[test]
fn version_reports_model_format() {
    let o = grafia(&["--version"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("model format 1"), "{}", stdout(&o));
}

#[test]
fn ingest_writes_three_files_with_balanced_report() {
    let f = Fixture::new();
    let dump = f.write("dump.xml", DUMP);
    let out = f.path("out");
    let o = grafia(&["ingest", "--dump", p(&dump), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let corpus = load_jsonl(out.join("corpus.jsonl")).unwrap();
    assert_eq!(corpus.len(), 2);
    assert!(corpus.iter().all(|s| s.tag == OrthographyClass::Milclass));
    let untagged = load_jsonl(out.join("untagged.jsonl")).unwrap();
    assert_eq!(untagged.len(), 1);
    assert_eq!(untagged[0].tag, OrthographyClass::NoTag);

    let report: toml::Value = fs::read_to_string(out.join("filter_report.txt")).unwrap().parse().unwrap();
    let lines = &report["lines"];
    let removed: i64 = lines["removed"].as_table().unwrap().values().map(|v| v.as_integer().unwrap()).sum();
    assert_eq!(lines["kept"].as_integer().unwrap() + removed, lines["input"].as_integer().unwrap());
    assert_eq!(report["pages"]["articles"].as_integer(), Some(2));
}

#[test]
fn ingest_review_mode_writes_review_file() {
    let f = Fixture::new();
    let dump = f.write("dump.xml", DUMP);
    let out = f.path("out");
    let o = grafia(&["ingest", "--dump", p(&dump), "--out", p(&out), "--review"]);
    assert!(o.status.success());
    assert!(fs::read_to_string(out.join("review.tsv")).unwrap().starts_with("tag\treasons\ttext"));
}

#[test]
fn ingest_missing_dump_is_io_error() {
    let f = Fixture::new();
    let missing = f.path("nope.xml");
    let out = f.path("out");
    let o = grafia(&["ingest", "--dump", p(&missing), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.xml"));
    assert!(!out.join("corpus.jsonl").exists());
}

#[test]
fn ingest_bad_config_is_config_error() {
    let f = Fixture::new();
    let dump = f.write("dump.xml", DUMP);
    let config = f.write("bad.toml", "[filter]\nboilerplate_patterns = [\"(\"]\n");
    let out = f.path("out");
    let o = grafia(&["ingest", "--dump", p(&dump), "--config", p(&config), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn ingest_truncated_dump_leaves_no_outputs() {
    let f = Fixture::new();
    let dump = f.write("dump.xml", &DUMP[..DUMP.len() / 2]);
    let out = f.path("out");
    let o = grafia(&["ingest", "--dump", p(&dump), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.join("corpus.jsonl").exists());
}

#[test]
fn ingest_reads_config_from_environment() {
    let f = Fixture::new();
    let dump = f.write("dump.xml", DUMP);
    let config = f.write("c.toml", "[tags]\nSL = [\"GrafMIL\"]\n");
    let out = f.path("out");
    let o = Command::new(env!("CARGO_BIN_EXE_grafia"))
        .args(["ingest", "--dump", p(&dump), "--out", p(&out)])
        .env("GRAFIA_CONFIG", &config)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let corpus = load_jsonl(out.join("corpus.jsonl")).unwrap();
    assert!(corpus.iter().all(|s| s.tag == OrthographyClass::Sl));
}

#[test]
fn default_config_parses() {
    let o = grafia(&["default-config"]);
    assert!(o.status.success());
    assert!(grafia_core::IngestConfig::from_toml_str(&stdout(&o)).is_ok());
}

#[test]
fn split_is_deterministic_and_validates_ratios() {
    let f = Fixture::new();
    let corpus = f.path("corpus.jsonl");
    write_jsonl(&corpus, &synthetic_corpus(50, 1)).unwrap();
    let (a, b) = (f.path("a"), f.path("b"));
    for dir in [&a, &b] {
        let o = grafia(&["split", "--in", p(&corpus), "--out-dir", p(dir), "--seed", "9"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in ["train.jsonl", "valid.jsonl", "test.jsonl"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
    }
    assert_eq!(load_jsonl(a.join("test.jsonl")).unwrap().len(), 15);

    let o = grafia(&["split", "--in", p(&corpus), "--out-dir", p(&f.path("c")), "--ratios", "0.8,0.1,0.2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn train_reports_validation_accuracy() {
    let f = Fixture::new();
    let (train, valid) = f.corpus();
    let out = f.path("m.json");
    let o = grafia(&["train", "--model", "logreg", "--features", "byte", "--train", p(&train), "--valid", p(&valid), "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("validation accuracy"));
    assert!(out.exists());
}

#[test]
fn train_combined_features_builds_three_member_union() {
    let f = Fixture::new();
    let (model, _) = f.trained("svm", "byte,char,word");
    let m = load_model(model).unwrap();
    assert_eq!(m.features.members().len(), 3);
    assert_eq!(m.features.describe(), "byte+char+word");
}

#[test]
fn train_rejects_bad_flags() {
    let f = Fixture::new();
    let (train, _) = f.corpus();
    let out = f.path("m.json");
    for extra in [
        vec!["--model", "logreg", "--features", "byte", "--c", "2"],
        vec!["--model", "nb", "--features", "grapheme"],
        vec!["--model", "nb", "--features", "byte,byte"],
        vec!["--model", "svm", "--features", "char", "--ngram-min", "3", "--ngram-max", "2"],
        vec!["--model", "tree", "--features", "char"],
    ] {
        let mut args = vec!["train", "--train", p(&train), "--out", p(&out)];
        args.extend(extra.iter().copied());
        let o = grafia(&args);
        assert_eq!(o.status.code(), Some(1), "{extra:?}: {}", stderr(&o));
    }
    assert!(!out.exists());
}

#[test]
fn train_single_class_is_computation_failure() {
    let f = Fixture::new();
    let train = f.path("one.jsonl");
    let samples: Vec<Sample> = synthetic_corpus(20, 1).into_iter().filter(|s| s.tag == OrthographyClass::Sl).collect();
    write_jsonl(&train, &samples).unwrap();
    let o = grafia(&["train", "--model", "logreg", "--features", "char", "--train", p(&train), "--out", p(&f.path("m.json"))]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn lsi_excluded_unless_requested() {
    let f = Fixture::new();
    let mut samples = synthetic_corpus(20, 1);
    for text in ["Quella l'è la strada lunga", "Mi a vo a cà stasira", "Ul temp l'è bel inco"] {
        samples.push(Sample::new(text, OrthographyClass::Lsi).unwrap());
    }
    let train = f.path("t.jsonl");
    write_jsonl(&train, &samples).unwrap();
    for (flag, expected) in [(None, 3), (Some("--include-lsi"), 4)] {
        let out = f.path("m.json");
        let mut args = vec!["train", "--model", "nb", "--features", "char", "--train", p(&train), "--out", p(&out)];
        args.extend(flag);
        assert!(grafia(&args).status.success());
        assert_eq!(load_model(&out).unwrap().classes().len(), expected);
    }
}

#[test]
fn evaluate_prints_table_and_exports() {
    let f = Fixture::new();
    let (model, valid) = f.trained("nb", "char");
    let csv = f.path("cm.csv");
    let json = f.path("eval.json");
    let o = grafia(&["evaluate", "--model", p(&model), "--test", p(&valid), "--confusion", p(&csv), "--report", p(&json)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("overall accuracy") && text.contains("average class accuracy"));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 4);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["model_id", "model_kind", "features", "metrics", "confusion", "error_pairs"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["model_kind"], "nb");
}

#[test]
fn evaluate_missing_test_file_is_io_error() {
    let f = Fixture::new();
    let (model, _) = f.trained("nb", "word");
    let o = grafia(&["evaluate", "--model", p(&model), "--test", p(&f.path("missing.jsonl"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_single_line_from_stdin() {
    let f = Fixture::new();
    let (model, _) = f.trained("logreg", "char");
    let o = grafia_stdin(&["classify", "--model", p(&model)], Some("El fög de la sira.\n"));
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    let label = out.split('\t').next().unwrap();
    assert!(label.parse::<OrthographyClass>().is_ok(), "{out}");
    assert!(stderr(&o).contains("mean confidence"));
}

#[test]
fn classify_threshold_and_jsonl() {
    let f = Fixture::new();
    let (model, _) = f.trained("logreg", "char");
    let input = f.write("in.txt", "xyz\nEl fög de la sira.\n");
    let o = grafia(&["classify", "--model", p(&model), "--input", p(&input), "--min-confidence", "0.99", "--echo"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let first = out.lines().next().unwrap();
    assert!(first.starts_with("UNKNOWN\t") && first.ends_with("\txyz"), "{out}");

    let o = grafia(&["classify", "--model", p(&model), "--input", p(&input), "--jsonl"]);
    let records: Vec<Sample> = stdout(&o).lines().map(|l| grafia_core::corpus::parse_jsonl_line(l, 1).unwrap()).collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[1].text, "El fög de la sira.");
}

#[test]
fn classify_unreadable_model_is_io_error() {
    let f = Fixture::new();
    let bogus = f.write("bogus.json", "{\"format_version\": 1");
    let o = grafia_stdin(&["classify", "--model", p(&bogus)], Some("x\n"));
    assert_eq!(o.status.code(), Some(2));
    let o = grafia_stdin(&["classify", "--model", p(&f.path("absent.json"))], Some("x\n"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(grafia(&["train"]).status.code(), Some(1));
    assert_eq!(grafia(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(grafia(&["--help"]).status.code(), Some(0));
}
