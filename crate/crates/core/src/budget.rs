//! Wall-clock limits for long computations.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// A deadline checked cooperatively by the expensive loops; exceeding it
/// surfaces as [`Error::TimedOut`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self { deadline: None }
    }

    pub fn until(deadline: Instant) -> Self {
        Self {
            deadline: Some(deadline),
        }
    }

    pub fn for_duration(d: Duration) -> Self {
        Self::until(Instant::now() + d)
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    pub fn remaining(&self) -> Option<Duration> {
        self.deadline
            .map(|d| d.saturating_duration_since(Instant::now()))
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::TimedOut),
            _ => Ok(()),
        }
    }

    /// Checks only every 1024th tick, for tight loops.
    pub(crate) fn tick(&self, counter: &mut u32) -> Result<()> {
        *counter = counter.wrapping_add(1);
        if *counter & 1023 == 0 {
            self.check()
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expiry() {
        assert!(Budget::unlimited().check().is_ok());
        assert!(Budget::for_duration(Duration::from_secs(60))
            .check()
            .is_ok());
        assert_eq!(Budget::until(Instant::now()).check(), Err(Error::TimedOut));
        let b = Budget::until(Instant::now());
        let mut c = 0;
        assert!((0..2048).any(|_| b.tick(&mut c).is_err()));
    }
}
