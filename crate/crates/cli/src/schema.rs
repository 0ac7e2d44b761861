//! Recognition of the JSON documents this tool emits.

use debranges::classifier::ClassificationReport;
use debranges::defect::{DefectProfile, GramReport};
use debranges::fock::{CompareReport, FockWeight};
use debranges::forge::{BiorResult, Certificate, SeedResult, VerifyReport};
use debranges::spectral::SpectralData;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commands::RotationReport;
use crate::error::CliError;
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    SpectralData,
    Certificate,
    ClassificationReport,
    GramReport,
    DefectProfile,
    BiorResult,
    SeedResult,
    VerifyReport,
    RotationReport,
    FockWeight,
    CompareReport,
    RunManifest,
    ValidationReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub kind: Option<Kind>,
    pub valid: bool,
    pub violations: Vec<String>,
}

fn has(v: &Value, keys: &[&str]) -> bool {
    keys.iter().all(|k| v.get(k).is_some())
}

/// Kind of a document by its distinguishing keys; the schema itself is checked by [`check`].
pub fn detect(v: &Value) -> Option<Kind> {
    let kind = if has(v, &["case", "a", "b", "zeros"]) {
        Kind::Certificate
    } else if has(v, &["verdict"]) {
        Kind::ClassificationReport
    } else if has(v, &["singular_values", "labels"]) {
        Kind::GramReport
    } else if has(v, &["estimates", "annihilation"]) {
        Kind::DefectProfile
    } else if has(v, &["generating_function", "moment_residual"]) {
        Kind::BiorResult
    } else if has(v, &["identity_error"]) {
        Kind::SeedResult
    } else if has(v, &["passed", "failures"]) {
        Kind::VerifyReport
    } else if has(v, &["column_norms", "theta"]) {
        Kind::RotationReport
    } else if has(v, &["bands", "epsilon"]) {
        Kind::FockWeight
    } else if has(v, &["ratios", "eigen_min"]) {
        Kind::CompareReport
    } else if has(v, &["argv", "exit_status"]) {
        Kind::RunManifest
    } else if has(v, &["kind", "valid"]) {
        Kind::ValidationReport
    } else if has(v, &["t", "mu"]) {
        Kind::SpectralData
    } else {
        return None;
    };
    Some(kind)
}

pub fn parse<T: DeserializeOwned>(v: &Value, kind: &str) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| CliError::invalid("SchemaMismatch", format!("not a valid {kind}: {e}")))
}

fn data_violations(d: &SpectralData) -> Vec<String> {
    d.violations().iter().map(|v| v.to_string()).collect()
}

fn none<T>(_: T) -> Vec<String> {
    Vec::new()
}

/// Schema and invariant violations of a document of the given kind.
pub fn check(kind: Kind, v: &Value) -> Vec<String> {
    fn typed<T: DeserializeOwned>(v: &Value, name: &str, extra: impl FnOnce(T) -> Vec<String>) -> Vec<String> {
        match parse::<T>(v, name) {
            Ok(x) => extra(x),
            Err(e) => vec![e.message],
        }
    }
    match kind {
        Kind::SpectralData => typed(v, "SpectralData", |d: SpectralData| data_violations(&d)),
        Kind::Certificate => typed(v, "Certificate", |c: Certificate| {
            let mut out = data_violations(&c.data);
            if c.a.len() != c.data.len() || c.b.len() != c.data.len() {
                out.push(format!("coefficient lengths {}/{} for {} nodes", c.a.len(), c.b.len(), c.data.len()));
            }
            out
        }),
        Kind::ClassificationReport => typed::<ClassificationReport>(v, "ClassificationReport", none::<_>),
        Kind::GramReport => typed(v, "GramReport", |g: GramReport| {
            if g.singular_values.windows(2).all(|w| w[0] >= w[1]) {
                Vec::new()
            } else {
                vec!["singular values are not sorted".to_string()]
            }
        }),
        Kind::DefectProfile => typed::<DefectProfile>(v, "DefectProfile", none::<_>),
        Kind::BiorResult => typed::<BiorResult>(v, "BiorResult", none::<_>),
        Kind::SeedResult => typed(v, "SeedResult", |s: SeedResult| data_violations(&s.data)),
        Kind::VerifyReport => typed::<VerifyReport>(v, "VerifyReport", none::<_>),
        Kind::RotationReport => typed::<RotationReport>(v, "RotationReport", none::<_>),
        Kind::FockWeight => typed::<FockWeight>(v, "FockWeight", none::<_>),
        Kind::CompareReport => typed::<CompareReport>(v, "CompareReport", none::<_>),
        Kind::RunManifest => typed::<RunManifest>(v, "RunManifest", none::<_>),
        Kind::ValidationReport => typed::<ValidationReport>(v, "ValidationReport", none::<_>),
    }
}
