//! Order-preserving parallel map. With the `parallel` feature the work runs
//! on a rayon pool of the requested size; without it, or with one worker,
//! it runs sequentially. Results are identical either way.

/// Number of workers used when the caller passes `0`.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: Vec<T>, workers: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let workers = if workers == 0 { default_workers() } else { workers };
    if workers <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.into_par_iter().map(&f).collect()),
        Err(_) => items.into_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: Vec<T>, _workers: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn preserves_order_for_any_worker_count() {
        let expected: Vec<u64> = (0..1000u64).map(|x| x * x).collect();
        for workers in [0, 1, 2, 7] {
            assert_eq!(super::map((0..1000u64).collect(), workers, |x| x * x), expected);
        }
    }
}
