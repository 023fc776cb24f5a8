//! Execution strategy for the box sweeps.
//!
//! With the `parallel` feature (on by default) [`Strategy::Parallel`] runs on
//! the rayon global pool; without it every strategy runs sequentially.
//! Results are collected in index order either way, so output never depends
//! on the strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether this strategy actually runs on multiple threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// `(0..len).filter_map(f)` in index order.
pub(crate) fn filter_map_range<T, F>(strategy: Strategy, len: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..len).into_par_iter().filter_map(f).collect();
    }
    let _ = strategy;
    (0..len).filter_map(f).collect()
}

/// `items.iter().map(f)` in order.
pub(crate) fn map_slice<I, T, F>(strategy: Strategy, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let f = |i: u64| (i % 7 == 3).then_some(i * i);
        assert_eq!(
            filter_map_range(Strategy::Sequential, 1000, f),
            filter_map_range(Strategy::Parallel, 1000, f)
        );
        let items: Vec<u32> = (0..100).collect();
        assert_eq!(
            map_slice(Strategy::Sequential, &items, |x| x + 1),
            map_slice(Strategy::Parallel, &items, |x| x + 1)
        );
    }
}
