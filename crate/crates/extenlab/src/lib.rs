//! File formats, report rendering and the command-line front end for
//! [`extenlab_core`].

pub mod cli;
pub mod formats;
pub mod render;

use std::path::PathBuf;

/// Directory with shipped problem, certificate and space files:
/// `EXTENLAB_DATA_DIR` if set, else the `data/` directory of the source tree.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("EXTENLAB_DATA_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")),
    }
}
