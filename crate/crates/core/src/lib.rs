//! Parsing, validation and trust scoring for machine-readable B2B service
//! advertisements described with the usdl-Trust vocabulary.

pub mod corpus;
pub mod engine;
pub mod shapes;
pub mod stad;
pub mod vocab;
