use thiserror::Error;

use crate::tensor::Cut;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("unsupported state kind `{0}` for this operation")]
    UnsupportedKind(String),

    #[error("candidate is not PPT across {cut}: min partial-transpose eigenvalue {eigenvalue:.3e}")]
    NotPpt { cut: Cut, eigenvalue: f64 },

    #[error("twirl of dimension {dim} ({local_dim}^{factors}) with {perms} permutations exceeds the size guard")]
    TwirlTooLarge {
        local_dim: usize,
        factors: usize,
        dim: usize,
        perms: usize,
    },

    #[error("lemma check `{check}` failed: {detail}")]
    LemmaCheck { check: &'static str, detail: String },

    #[error("distillation check failed: {0}")]
    Distill(String),

    #[error("unknown claim id `{id}`; registry: {registry}")]
    UnknownClaim { id: String, registry: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
