use thiserror::Error;

use crate::ElementId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot pick from an empty pool")]
    EmptyPool,
    #[error("element {id} is outside the ground set of size {n}")]
    ForeignElement { id: ElementId, n: usize },
    #[error("element {0} was already processed")]
    DuplicateElement(ElementId),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid construction: {0}")]
    Construction(String),
    #[error("refusing to enumerate {n} elements (limit {limit})")]
    Guardrail { n: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
