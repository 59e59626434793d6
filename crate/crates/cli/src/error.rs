use finsler_core::GeometryError;
use finsler_symbolic::ExprError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read config file `{path}`: {source}")]
    ConfigFile { path: String, source: std::io::Error },
    #[error("{line}: {message}")]
    ConfigLine { line: usize, message: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{object}: {source}")]
    Object { object: String, source: GeometryError },
}
