//! Experiment harness around `densedp-core`: synthetic instance generators,
//! a seeded multi-trial runner, and CSV emission. The `densedp` binary is a
//! thin argument-parsing shell over [`run_experiment`] and [`write_csv`].

pub mod csv_out;
pub mod gen;
pub mod runner;

pub use csv_out::{fmt_sig, write_csv, CSV_HEADER};
pub use gen::{gen_gnm, gen_gnp, gen_planted_clique, gen_two_cliques};
pub use runner::{run_experiment, Algorithm, ExperimentConfig, ExperimentRecord, InputSpec};
