#![allow(clippy::needless_range_loop)]

pub mod adjunction;
pub mod cat;
pub mod config;
pub mod ends;
pub mod finset;
pub mod fixtures;
pub mod functor;
pub mod functor_category;
pub mod kan;
pub mod limits;
pub mod random;
pub mod report;
pub mod union_find;
pub mod universal;

pub use cat::{opposite, product, validate_category, FinCat};
pub use config::Guard;
pub use functor::{validate_functor, validate_natural, Functor, NatTrans};
pub use report::{Error, Outcome, Report, Result};
