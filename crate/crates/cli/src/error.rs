use std::path::PathBuf;

use hyperdoc_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input not found: {}", .0.display())]
    MissingInput(PathBuf),
    #[error("missing required setting: {0} (pass the flag or set it in --config)")]
    MissingSetting(&'static str),
    #[error("no vocabulary term occurs in the corpus or the documents")]
    EmptyModel,
    #[error("invalid value for {name}: {message}")]
    BadValue { name: &'static str, message: String },
}

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_EMPTY_MODEL: i32 = 4;
pub const EXIT_ALIGNMENT: i32 = 5;

fn core_code(e: &CoreError) -> i32 {
    match e {
        CoreError::Io(_) => EXIT_IO,
        CoreError::Parse { .. }
        | CoreError::Schema { .. }
        | CoreError::Json(_)
        | CoreError::Format(_)
        | CoreError::Config(_) => EXIT_PARSE,
        CoreError::EmptyVocabulary | CoreError::EmptyMatrix(_) => EXIT_EMPTY_MODEL,
        CoreError::Alignment(_) => EXIT_ALIGNMENT,
        CoreError::NegativeWeight { .. } | CoreError::Domain(_) => EXIT_FAILURE,
    }
}

/// Exit code for the first recognized error in the chain.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CoreError>() {
            return core_code(e);
        }
        if let Some(e) = cause.downcast_ref::<CliError>() {
            return match e {
                CliError::MissingInput(_) => EXIT_IO,
                CliError::MissingSetting(_) | CliError::BadValue { .. } => EXIT_PARSE,
                CliError::EmptyModel => EXIT_EMPTY_MODEL,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return EXIT_PARSE;
        }
    }
    EXIT_FAILURE
}
