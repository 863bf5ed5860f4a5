use alloc::string::String;

use crate::token::Token;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(Token),
    #[error("{token:?} is not an element of the {role}")]
    NotAnElement { token: Token, role: &'static str },
    #[error("map is not total: no image for {0:?}")]
    MissingImage(Token),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("map is not a bijection")]
    NotBijective,
    #[error("{kind} failed validation: {detail}")]
    Invalid { kind: &'static str, detail: String },
    #[error("theory violates the {guard} axiom: {detail}")]
    TheoryViolation { guard: &'static str, detail: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
