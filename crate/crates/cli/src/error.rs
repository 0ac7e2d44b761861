use debranges::defect::DefectError;
use debranges::fock::FockError;
use debranges::forge::ForgeError;
use debranges::spectral::SpectralError;
use serde::Serialize;

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Failure carried to the exit code and the JSON error body.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    #[serde(rename = "error")]
    pub name: String,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn new(code: i32, name: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            message: message.into(),
            exit_code: code,
        }
    }

    pub fn invalid(name: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID, name, message)
    }

    pub fn construction(name: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(EXIT_CONSTRUCTION, name, message)
    }

    pub fn missing_field(field: &str, kind: &str) -> Self {
        Self::invalid("MissingField", format!("{kind} input has no usable `{field}`"))
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        Self::invalid(e.name(), e.to_string())
    }
}

impl From<ForgeError> for CliError {
    fn from(e: ForgeError) -> Self {
        match e {
            ForgeError::Spectral(s) => s.into(),
            e @ ForgeError::IndexMismatch(_) => Self::invalid(e.name(), e.to_string()),
            e => Self::construction(e.name(), e.to_string()),
        }
    }
}

impl From<DefectError> for CliError {
    fn from(e: DefectError) -> Self {
        match e {
            DefectError::Forge(f) => f.into(),
            e => Self::invalid(e.name(), e.to_string()),
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::QuadratureUnstable { .. } => Self::construction(e.name(), e.to_string()),
            e => Self::invalid(e.name(), e.to_string()),
        }
    }
}
