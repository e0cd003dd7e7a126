//! Request-rate gate shared by all workers.

use std::sync::Mutex;
use std::time::{Duration, Instant};

/// Enforces a minimum spacing between request starts across threads.
pub struct Throttle {
    min_interval: Duration,
    last: Mutex<Option<Instant>>,
}

impl Throttle {
    pub fn new(min_interval: Duration) -> Throttle {
        Throttle {
            min_interval,
            last: Mutex::new(None),
        }
    }

    /// Blocks until the next request may start. The lock is held while
    /// sleeping so concurrent callers queue up behind it.
    pub fn acquire(&self) {
        if self.min_interval.is_zero() {
            return;
        }
        let mut last = self.last.lock().unwrap();
        if let Some(prev) = *last {
            let ready = prev + self.min_interval;
            let now = Instant::now();
            if ready > now {
                std::thread::sleep(ready - now);
            }
        }
        *last = Some(Instant::now());
    }
}
