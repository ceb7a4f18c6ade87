//! The bundled language plugins.

pub mod while_lang;
pub mod extwhile;
pub mod fun;
