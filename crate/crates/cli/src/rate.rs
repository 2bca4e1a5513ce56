//! One admitted seek per client per window.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admission {
    Admit,
    RetryAfter(Duration),
}

/// Last admitted time per client key, on a caller-supplied monotone clock.
#[derive(Debug)]
pub struct RateLimiterState {
    window: Duration,
    last_admit: Mutex<HashMap<String, Duration>>,
}

impl RateLimiterState {
    pub fn new(window: Duration) -> RateLimiterState {
        RateLimiterState { window, last_admit: Mutex::new(HashMap::new()) }
    }

    pub fn window(&self) -> Duration {
        self.window
    }
}

/// Admits iff `client_key` has no admitted seek in the last window. The
/// check and the update happen under one lock. A clock reading earlier than
/// the stored one counts as no time elapsed.
pub fn rate_admit(state: &RateLimiterState, client_key: &str, now: Duration) -> Admission {
    let mut map = state.last_admit.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(&last) = map.get(client_key) {
        let elapsed = now.saturating_sub(last);
        if elapsed < state.window {
            return Admission::RetryAfter(state.window - elapsed);
        }
    }
    if map.len() > 4096 {
        let window = state.window;
        map.retain(|_, t| now.saturating_sub(*t) < window);
    }
    map.insert(client_key.to_string(), now);
    Admission::Admit
}

/// Monotone time source handed to the service.
pub type Clock = Arc<dyn Fn() -> Duration + Send + Sync>;

pub fn monotonic_clock() -> Clock {
    let start = Instant::now();
    Arc::new(move || start.elapsed())
}
