//! Data-parallel map for sampling sweeps.
//!
//! With the `parallel` feature (default) `par_map` fans out over rayon's
//! global pool; without it the same call runs sequentially. `seq_map` is
//! always sequential, so benchmarks can compare the two on equal input.
//! Results are position-stable either way, hence identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(&f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(&f).collect()
    }
}

/// Sequential map with the same shape as [`par_map`].
pub fn seq_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Which backend `par_map` uses in this build.
pub fn backend() -> &'static str {
    if cfg!(feature = "parallel") {
        "rayon"
    } else {
        "sequential"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_and_seq_agree_in_order() {
        let items: Vec<i64> = (0..1000).collect();
        let f = |x: &i64| x * x - 3;
        assert_eq!(par_map(&items, f), seq_map(&items, f));
    }
}
