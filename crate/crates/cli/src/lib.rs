//! File formats, configuration and batch commands around `toolpose-core`.
//!
//! The core crate is pure computation on in-memory buffers; everything that
//! touches the filesystem lives here:
//!
//! - [`hmap`]: the `HMAP1` binary heatmap container.
//! - [`pnm`]: P6 (color) and P5 (grayscale) images.
//! - [`annot`]: line-oriented joint annotations.
//! - [`skelfile`]: skeleton definitions and the built-in presets.
//! - [`records`]: JSON-lines pose records emitted by decoding.
//! - [`config`]: layered run configuration (flags over file over preset).
//! - [`cmd`]: one module per subcommand of the `toolpose` binary.
//!
//! All readers reject malformed input with a diagnostic naming the file and
//! the byte offset of the failure; nothing is silently skipped.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod annot;
pub mod cmd;
pub mod config;
pub mod draw;
pub mod hmap;
pub mod pnm;
pub mod records;
pub mod skelfile;

/// Builds a rayon pool with `threads` workers; `0` means one per core.
pub fn thread_pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool construction only fails on exotic resource limits")
}

/// Frame identifier for a file path: the stem, without directories or the
/// extension. Non-UTF-8 stems fall back to a lossy rendering.
pub fn frame_id(path: &std::path::Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned())
}
