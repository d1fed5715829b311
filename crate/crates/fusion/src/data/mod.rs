//! Dataset acquisition: synthetic generators and CSV ingestion/export.

pub mod csv_io;
pub mod generators;

pub use csv_io::{export_csv, ingest_csv, LabelColumn};
pub use generators::{generate_dataset, GeneratorKind};
