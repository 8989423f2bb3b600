//! File formats: seed files and trace logs.

mod seed_file;
mod trace;

pub use seed_file::{parse_seed, read_seed, write_seed, write_seed_file, SeedFileError};
pub use trace::{digest, TraceLog, TraceRecord};
