//! Ranked data tables over complete residuated lattices.
//!
//! A ranked data table assigns each tuple a degree from a residuated
//! lattice instead of a yes/no membership. This crate provides the lattice
//! carriers (Lukasiewicz, Goedel, product, finite chains), relational
//! operations on ranked tables, similarity measures comparing whole tables,
//! a small query language with an interval-style sensitivity analysis that
//! bounds how far query results can drift when inputs are replaced by
//! similar tables, and a command line front end.

pub mod cli;
pub mod decimal;
pub mod lattice;
pub mod query;
pub mod rdt;
pub mod schema;
pub mod similarity;
pub mod testkit;
