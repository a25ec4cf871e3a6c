//! Benchmark harness: ingestion, kernels, experiment execution and result emission.

pub mod emit;
pub mod experiment;
pub mod ingest;
pub mod kernel;

pub use emit::{emit, OutputFormat};
pub use experiment::{run_experiment, ExperimentConfig, Method, ResultRecord, Source, Sweep, Task, Variant};
pub use ingest::{ingest, InputFormat, DEFAULT_MAX_DIM};
pub use kernel::build_rbf_kernel;
