//! One module per subcommand of the `toolpose` binary.
//!
//! Commands write their payload to a caller-supplied writer (the binary
//! passes locked stdout) and return errors for the binary to report on
//! stderr with a nonzero exit. Batch commands process frames in bounded
//! chunks: parallel within a chunk, emitted in input order, so peak memory
//! is a constant number of frames and output never depends on `--threads`.

use rayon::prelude::*;

pub mod bench;
pub mod decode;
pub mod eval;
pub mod gate;
pub mod render;
pub mod swap;
pub mod synth;
pub mod tv;

/// Errors cross thread boundaries, hence the `Send + Sync` bound.
pub type CmdError = Box<dyn std::error::Error + Send + Sync>;

/// Result type of every subcommand.
pub type CmdResult = Result<(), CmdError>;

/// Frames processed in flight per chunk; bounds peak memory.
const CHUNK: usize = 32;

/// Runs `work` over `items` on the pool, chunk by chunk, handing results to
/// `sink` in input order.
pub(crate) fn chunked_ordered<I, T>(
    pool: &rayon::ThreadPool,
    items: &[I],
    work: impl Fn(&I) -> Result<T, CmdError> + Sync,
    mut sink: impl FnMut(T) -> Result<(), CmdError>,
) -> CmdResult
where
    I: Sync,
    T: Send,
{
    for chunk in items.chunks(CHUNK) {
        let results: Vec<Result<T, CmdError>> =
            pool.install(|| chunk.par_iter().map(&work).collect());
        for result in results {
            sink(result?)?;
        }
    }
    Ok(())
}
