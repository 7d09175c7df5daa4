//! Harness for the `rotlab` binary: file formats, the float fast path, size
//! sweeps and randomized verification suites.

pub mod cli;
pub mod experiment;
pub mod fastpath;
pub mod io;
pub mod verify;

/// Size of the global rayon pool from `ROTLAB_WORKERS`; unset or invalid
/// values leave the rayon default.
pub fn configure_workers() -> Option<usize> {
    let n = std::env::var("ROTLAB_WORKERS").ok()?.trim().parse::<usize>().ok()?;
    if n == 0 {
        return None;
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok()?;
    Some(n)
}
