use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("invalid Frobenius action: {0}")]
    InvalidFrobenius(String),
    #[error("group of order {order} exceeds the bound {bound}")]
    SizeBound { order: u128, bound: u128 },
    #[error("affine root system: {0}")]
    Affine(String),
    #[error("point is not generic: {0}")]
    NotGeneric(String),
    #[error("theta datum: {0}")]
    Theta(String),
    #[error("normalization: {0}")]
    Normalization(String),
    #[error("certificate failure: {0}")]
    Certificate(String),
    #[error("hecke algebra: {0}")]
    Hecke(String),
    #[error("finite group: {0}")]
    Group(String),
    #[error("spec: {0}")]
    Spec(String),
    #[error("parameter table: {0}")]
    Table(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
