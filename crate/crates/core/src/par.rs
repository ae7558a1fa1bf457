//! Data-parallel helpers. With the `parallel` feature disabled every call
//! runs sequentially regardless of the requested [`Exec`].

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for the sweeps in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Order-preserving map.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Smallest index in `0..n` for which `f` yields a value, with that value.
/// The parallel path returns exactly what the sequential scan would.
pub fn find_first<R, F>(exec: Exec, n: u64, f: F) -> Option<(u64, R)>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n)
            .into_par_iter()
            .filter_map(|i| f(i).map(|r| (i, r)))
            .find_first(|_| true);
    }
    let _ = exec;
    (0..n).find_map(|i| f(i).map(|r| (i, r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map(Exec::Sequential, &items, |x| x * x);
        let par = map(Exec::Parallel, &items, |x| x * x);
        assert_eq!(seq, par);
        let hit = |i: u64| (i % 97 == 96 && i > 300).then_some(i * 2);
        assert_eq!(find_first(Exec::Sequential, 5000, hit), Some((387, 774)));
        assert_eq!(find_first(Exec::Parallel, 5000, hit), Some((387, 774)));
        assert_eq!(find_first(Exec::Parallel, 10, |_| None::<()>), None);
    }
}
