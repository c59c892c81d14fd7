//! Model files.
//!
//! A model is stored as one UTF-8 JSON document:
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "model_kind": "logreg" | "svm" | "nb" | "rf",
//!   "classes": ["LOCC", "MILCLASS", ...],
//!   "feature_space": { "members": [ { "config": {...}, "terms": [hex...], "idf": [...] } ] },
//!   "parameters": { ...kind specific... }
//! }
//! ```
//!
//! Reals are written in shortest round-trip form and parsed back exactly,
//! so parameters survive a save/load cycle bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::{Classifier, ForestModel, LinearModel, NbModel, TrainedModel};
use crate::corpus::OrthographyClass;
use crate::error::{Error, Result};
use crate::features::FeatureUnion;

pub const MODEL_FORMAT_VERSION: u64 = 1;

#[derive(Serialize)]
struct ModelFileRef<'a, P: Serialize> {
    format_version: u64,
    model_kind: &'static str,
    classes: &'a [OrthographyClass],
    feature_space: &'a FeatureUnion,
    parameters: &'a P,
}

pub fn write_model<W: Write>(model: &TrainedModel, writer: W) -> Result<()> {
    fn emit<W: Write, P: Serialize>(model: &TrainedModel, params: &P, writer: W) -> Result<()> {
        let doc = ModelFileRef {
            format_version: MODEL_FORMAT_VERSION,
            model_kind: model.classifier.kind_name(),
            classes: model.classes(),
            feature_space: &model.features,
            parameters: params,
        };
        serde_json::to_writer(writer, &doc).map_err(|e| Error::Stream(e.into()))
    }
    match &model.classifier {
        Classifier::Logreg(m) | Classifier::Svm(m) => emit(model, m, writer),
        Classifier::Nb(m) => emit(model, m, writer),
        Classifier::Rf(m) => emit(model, m, writer),
    }
}

pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    write_model(model, &mut writer).map_err(|e| match e {
        Error::Stream(source) => Error::io(path, source),
        other => other,
    })?;
    writer.flush().map_err(|e| Error::io(path, e))
}

fn json_error(e: serde_json::Error) -> Error {
    match e.classify() {
        serde_json::error::Category::Eof => Error::ModelTruncated(e.to_string()),
        serde_json::error::Category::Io => Error::Stream(e.into()),
        _ => Error::ModelCorrupt(e.to_string()),
    }
}

fn take_field(doc: &mut serde_json::Map<String, Value>, name: &str) -> Result<Value> {
    doc.remove(name)
        .ok_or_else(|| Error::ModelCorrupt(format!("missing field {name:?}")))
}

pub fn read_model<R: Read>(mut reader: R) -> Result<TrainedModel> {
    let mut text = String::new();
    reader.read_to_string(&mut text).map_err(|e| {
        if e.kind() == std::io::ErrorKind::InvalidData {
            Error::ModelCorrupt("model file is not UTF-8".into())
        } else {
            Error::Stream(e)
        }
    })?;
    if text.trim().is_empty() {
        return Err(Error::ModelTruncated("model file is empty".into()));
    }
    let value: Value = serde_json::from_str(&text).map_err(json_error)?;
    let Value::Object(mut doc) = value else {
        return Err(Error::ModelCorrupt("top level is not an object".into()));
    };

    let version = take_field(&mut doc, "format_version")?
        .as_u64()
        .ok_or_else(|| Error::ModelCorrupt("format_version is not an integer".into()))?;
    if version != MODEL_FORMAT_VERSION {
        return Err(Error::ModelVersion {
            found: version,
            supported: MODEL_FORMAT_VERSION,
        });
    }
    let kind = take_field(&mut doc, "model_kind")?;
    let classes: Vec<OrthographyClass> =
        serde_json::from_value(take_field(&mut doc, "classes")?).map_err(json_error)?;
    let features: FeatureUnion =
        serde_json::from_value(take_field(&mut doc, "feature_space")?).map_err(json_error)?;
    let params = take_field(&mut doc, "parameters")?;

    let classifier = match kind.as_str() {
        Some("logreg") => Classifier::Logreg(serde_json::from_value::<LinearModel>(params).map_err(json_error)?),
        Some("svm") => Classifier::Svm(serde_json::from_value::<LinearModel>(params).map_err(json_error)?),
        Some("nb") => Classifier::Nb(serde_json::from_value::<NbModel>(params).map_err(json_error)?),
        Some("rf") => Classifier::Rf(serde_json::from_value::<ForestModel>(params).map_err(json_error)?),
        _ => return Err(Error::ModelCorrupt(format!("unknown model_kind {kind}"))),
    };
    classifier.validate()?;
    if classifier.classes() != classes.as_slice() {
        return Err(Error::ModelCorrupt(
            "class list does not match the model parameters".into(),
        ));
    }
    TrainedModel::new(features, classifier).map_err(|e| Error::ModelCorrupt(e.to_string()))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_model(BufReader::new(file)).map_err(|e| match e {
        Error::Stream(source) => Error::io(path, source),
        other => other,
    })
}
