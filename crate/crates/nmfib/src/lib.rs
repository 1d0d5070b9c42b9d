//! Syntax, Nmatrix semantics and Hilbert calculi for fibred logics.

pub mod boolfun;
pub mod calculus;
pub mod catalog;
pub mod fibring;
pub mod formats;
pub mod matrix_ops;
pub mod semantics;
pub mod syntax;
