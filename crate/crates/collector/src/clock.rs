//! Injectable time source, so pacing can be tested without waiting.

use std::sync::atomic::{AtomicI64, Ordering};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

pub trait Clock: Send + Sync {
    /// Seconds since the Unix epoch.
    fn now(&self) -> i64;
    fn sleep(&self, d: Duration);
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> i64 {
        SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs() as i64)
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// Simulated clock: `sleep` advances time instantly. Shared between the
/// collector and the mock server in tests.
#[derive(Debug, Default)]
pub struct SimClock {
    millis: AtomicI64,
    slept_millis: AtomicI64,
}

impl SimClock {
    pub fn starting_at(epoch_secs: i64) -> Self {
        SimClock { millis: AtomicI64::new(epoch_secs * 1000), slept_millis: AtomicI64::new(0) }
    }

    pub fn advance(&self, d: Duration) {
        self.millis.fetch_add(d.as_millis() as i64, Ordering::SeqCst);
    }

    /// Total simulated time spent in `sleep`.
    pub fn slept(&self) -> Duration {
        Duration::from_millis(self.slept_millis.load(Ordering::SeqCst) as u64)
    }
}

impl Clock for SimClock {
    fn now(&self) -> i64 {
        self.millis.load(Ordering::SeqCst).div_euclid(1000)
    }

    fn sleep(&self, d: Duration) {
        self.slept_millis.fetch_add(d.as_millis() as i64, Ordering::SeqCst);
        self.advance(d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sim_clock_advances_on_sleep() {
        let c = SimClock::starting_at(100);
        c.sleep(Duration::from_millis(1500));
        assert_eq!(c.now(), 101);
        c.sleep(Duration::from_millis(500));
        assert_eq!(c.now(), 102);
        assert_eq!(c.slept(), Duration::from_secs(2));
    }
}
