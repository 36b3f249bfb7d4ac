//! Versioned JSON documents and file loading.

use std::fmt::Debug;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::hmsrep::{HiddenRepresentation, RepError, RepresentationDoc};
use crate::measure::{MeasureDoc, MeasureError, ProbabilityMeasure};
use crate::msys::{validate, MeasurementDoc, MeasurementSystem, RawSystem, SystemError, TableEntry};
use crate::quantum::{QuantumDoc, QuantumError};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: invalid JSON: {message}")]
    Json { path: String, message: String },
    #[error("document needs exactly one of an explicit table or a quantum block")]
    ProbabilitySource,
    #[error("unsupported document version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Representation(#[from] RepError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

fn variant_name(e: &dyn Debug) -> String {
    let text = format!("{e:?}");
    text.split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or_default()
        .to_string()
}

impl DocumentError {
    /// Name of the innermost error kind, e.g. `MassNotOne`.
    pub fn kind(&self) -> String {
        match self {
            DocumentError::System(SystemError::Measure { source, .. }) => variant_name(source),
            DocumentError::System(e) => variant_name(e),
            DocumentError::Quantum(QuantumError::System(e)) => variant_name(e),
            DocumentError::Quantum(e) => variant_name(e),
            DocumentError::Representation(e) => variant_name(e),
            DocumentError::Measure(e) => variant_name(e),
            other => variant_name(other),
        }
    }

    /// Machine-readable form written to standard error by the CLI.
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        if let DocumentError::System(SystemError::MassNotOne {
            state,
            measurement,
            deficit,
        }) = self
        {
            v["state"] = json!(state);
            v["measurement"] = json!(measurement);
            v["deficit"] = json!(crate::rational::format(deficit));
        }
        v
    }
}

/// A measurement system as stored on disk. The probabilities come either
/// from an explicit `table` or from a `quantum` block of states and bases.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDocument {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measurements: Vec<MeasurementDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumDoc>,
}

impl SystemDocument {
    pub fn from_system(ms: &MeasurementSystem) -> Self {
        let raw = ms.to_raw();
        Self {
            version: 1,
            states: raw.states,
            measurements: raw.measurements,
            table: Some(raw.table),
            quantum: None,
        }
    }

    pub fn from_quantum(q: QuantumDoc) -> Self {
        Self {
            version: 1,
            states: Vec::new(),
            measurements: Vec::new(),
            table: None,
            quantum: Some(q),
        }
    }

    pub fn to_system(&self) -> Result<MeasurementSystem, DocumentError> {
        if self.version != 1 {
            return Err(DocumentError::UnsupportedVersion(self.version));
        }
        match (&self.table, &self.quantum) {
            (Some(table), None) => Ok(validate(RawSystem {
                version: self.version,
                states: self.states.clone(),
                measurements: self.measurements.clone(),
                table: table.clone(),
            })?),
            (None, Some(q)) if self.states.is_empty() && self.measurements.is_empty() => Ok(q.to_system()?),
            _ => Err(DocumentError::ProbabilitySource),
        }
    }
}

/// A measure file: a bare measure object, optionally with a version tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureFile {
    #[serde(default = "version_one")]
    pub version: u32,
    #[serde(flatten)]
    pub measure: MeasureDoc,
}

fn version_one() -> u32 {
    1
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, DocumentError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| DocumentError::Io {
        path: p.clone(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| DocumentError::Json {
        path: p,
        message: e.to_string(),
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), DocumentError> {
    let text = serde_json::to_string_pretty(value).expect("documents serialize");
    std::fs::write(path, text + "\n").map_err(|e| DocumentError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_system(path: &Path) -> Result<MeasurementSystem, DocumentError> {
    read_json::<SystemDocument>(path)?.to_system()
}

pub fn load_representation(path: &Path) -> Result<HiddenRepresentation, DocumentError> {
    let doc: RepresentationDoc = read_json(path)?;
    if doc.version != 1 {
        return Err(DocumentError::UnsupportedVersion(doc.version));
    }
    Ok(HiddenRepresentation::try_from(doc)?)
}

pub fn load_measure(path: &Path) -> Result<ProbabilityMeasure, DocumentError> {
    let file: MeasureFile = read_json(path)?;
    if file.version != 1 {
        return Err(DocumentError::UnsupportedVersion(file.version));
    }
    Ok(ProbabilityMeasure::try_from(file.measure)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const COIN: &str = r#"{
        "version": 1,
        "states": ["fair"],
        "measurements": [{"name": "toss", "outcomes": [{"name": "h"}, {"name": "t"}]}],
        "table": [{"state": "fair", "measurement": "toss", "measure": {"atoms": {"h": "1/2", "t": "1/2"}}}]
    }"#;

    #[test]
    fn table_document_round_trip() {
        let doc: SystemDocument = serde_json::from_str(COIN).unwrap();
        let ms = doc.to_system().unwrap();
        assert_eq!(ms.measure(0, 0).atom_weight("h"), Some(&ratio(1, 2)));
        let again = SystemDocument::from_system(&ms);
        let text = serde_json::to_string(&again).unwrap();
        let back: SystemDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_system().unwrap(), ms);
    }

    #[test]
    fn exactly_one_source() {
        let mut doc: SystemDocument = serde_json::from_str(COIN).unwrap();
        doc.quantum = Some(crate::quantum::aerts_document(&[ratio(1, 3)], &[]));
        assert!(matches!(doc.to_system(), Err(DocumentError::ProbabilitySource)));
        doc.table = None;
        doc.quantum = None;
        assert!(matches!(doc.to_system(), Err(DocumentError::ProbabilitySource)));
    }

    #[test]
    fn error_payloads() {
        let bad = COIN.replace("\"t\": \"1/2\"", "\"t\": \"1/3\"");
        let doc: SystemDocument = serde_json::from_str(&bad).unwrap();
        let err = doc.to_system().unwrap_err();
        assert_eq!(err.kind(), "MassNotOne");
        assert_eq!(err.to_json()["deficit"], "1/6");
        let neg = COIN.replace("\"t\": \"1/2\"", "\"t\": \"-1/2\"");
        let doc: SystemDocument = serde_json::from_str(&neg).unwrap();
        assert_eq!(doc.to_system().unwrap_err().kind(), "NegativeWeight");
    }
}
