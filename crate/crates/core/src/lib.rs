//! Deductive verification over big-step operational semantics.
//!
//! Languages plug in through [`kernel::Language`] by listing their rule
//! instances; specifications attach result sets to configurations such as
//! loops and calls, and the checkers test them by specification-aware
//! inference.

pub mod corpus;
pub mod kernel;
pub mod lang;
pub mod speclib;
pub mod syntax;
