//! Type checker for the λΠ-calculus modulo theory, with the Simple Type
//! Theory and Calculus of Constructions embeddings, finite Π-algebra models
//! of both, and bounded strong-normalization checks.

#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod candidates;
pub mod cli;
pub mod gen;
pub mod kernel;
pub mod model;
pub mod reduction;
pub mod scan;
pub mod syntax;
pub mod typing;
