//! Experiment harness for the reflecting-surface rate-region library:
//! scenario configs, deterministic artifact serialization, region/sweep
//! runners, and SVG plotting. The binary in `main.rs` is a thin CLI over
//! these modules.

pub mod config;
pub mod formats;
pub mod runners;
pub mod svg;
