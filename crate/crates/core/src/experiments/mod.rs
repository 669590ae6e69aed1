//! Experiment pipelines, result sinks, caching and the command line.

pub mod cache;
pub mod cli;
pub mod config;
pub mod density;
pub mod output;
pub mod scan;
pub mod scar;
pub mod verify;

pub use cache::PropagatorCache;
pub use config::{ExperimentConfig, OutputFormat, Tolerances};
pub use density::{good_integer_density, good_primes, split_density, GoodIntegerDensity, SplitDensity};
pub use output::RowSink;
pub use scan::{delta_points, que_scan, DeltaPoint, FrequencyDelta, ScanRow};
pub use scar::{scar_demo, ScarReport};
pub use verify::{verify_suite, Verdict};
