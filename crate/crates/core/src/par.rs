//! Data-parallel helpers with a serial fallback. Results always come back in
//! input order.

use crate::budget::ExecMode;

pub fn map_ordered<T, R, F>(exec: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == ExecMode::Parallel && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

pub fn join<A, B, RA, RB>(exec: ExecMode, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if exec == ExecMode::Parallel {
        return rayon::join(a, b);
    }
    let _ = exec;
    let ra = a();
    (ra, b())
}

/// True when `exec` actually fans out in this build.
pub fn is_parallel(exec: ExecMode) -> bool {
    cfg!(feature = "parallel") && exec == ExecMode::Parallel
}
