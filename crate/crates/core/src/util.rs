//! Small shared helpers.

/// Applies `f` to every item index, fanning out over `workers` threads.
/// Results come back in input order, so the output is identical for any
/// worker count. `workers <= 1` stays on the calling thread.
pub fn indexed_parallel_map<T, F>(len: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if workers <= 1 || len <= 1 {
        return (0..len).map(f).collect();
    }
    let workers = workers.min(len);
    let mut slots: Vec<Option<T>> = (0..len).map(|_| None).collect();
    let chunk = len.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slice) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (offset, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(w * chunk + offset));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("worker filled slot"))
        .collect()
}
