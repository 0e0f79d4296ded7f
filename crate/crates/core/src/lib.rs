//! Finite-window constructions for symbolic dynamics on groups: random
//! witness configurations, saturated packings, block stamping, and
//! proximality checkers for shift approximations.

pub mod cli;
pub mod configuration;
pub mod field;
pub mod format;
pub mod glue;
pub mod group;
pub mod packing;
pub mod prox;
pub mod run_config;
pub mod witness;
