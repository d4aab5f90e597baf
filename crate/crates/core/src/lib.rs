//! Descriptive, deterministic names and readable ordering for generated REST
//! API test suites.
//!
//! The pipeline has four stages, each usable on its own:
//!
//! 1. [`parser`] reads REST-Assured-style test files into a language-agnostic
//!    IR ([`model`], serialized by [`ir`]).
//! 2. [`ordering`] reorders the suite by endpoint generality, status-code
//!    group, and HTTP verb.
//! 3. [`naming`] renders a descriptive identifier for every test under one of
//!    four naming conventions.
//! 4. [`rewrite`] applies the names and the order back onto the original
//!    source text, byte-exactly preserving everything else.
//!
//! The `restname` binary wires the stages together; see [`cli`].

pub mod cli;
pub mod ir;
pub mod model;
pub mod naming;
pub mod ordering;
pub mod parser;
pub mod rewrite;
