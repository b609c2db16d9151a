//! Prime decomposition in number fields, splitting-type spectra, adelic
//! elementary invariants, and a finite evaluator for Feferman–Vaught
//! generalized products.

pub mod exactpoly;
pub mod splitting;
pub mod corpus;
pub mod golden;
pub mod invariants;
pub mod fv;
