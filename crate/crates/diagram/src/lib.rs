//! String-diagram terms over finite categories.
//!
//! Wires are functors, nodes are natural transformations and regions are
//! categories. Terms are typed against an [`Environment`], evaluated to
//! component tables, normalized modulo the interchange law and rendered as
//! SVG.

pub mod ast;
pub mod env;
pub mod eval;
pub mod fixture;
pub mod normal;
pub mod parse;
pub mod svg;

pub use ast::Term;
pub use env::{typecheck, Boundary, Environment, Generator, Interface};
pub use eval::evaluate;
pub use normal::{compare_terms, normalization_check, normalize, Comparison};
pub use parse::parse_term;
pub use svg::render_svg;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("vertical mismatch at `{node}`: {message}")]
    Vertical { node: String, message: String },
    #[error("horizontal mismatch at `{node}`: {message}")]
    Horizontal { node: String, message: String },
    #[error("invalid declaration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] fincat::Error),
}
