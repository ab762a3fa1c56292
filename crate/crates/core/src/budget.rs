/// Default node budget for backtracking searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Call-local node counter for exponential searches.
///
/// Every search node ticks the budget and folds a tag into a running digest,
/// so a negative answer comes with a reproducible transcript fingerprint.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
    digest: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: 0,
            digest: 0xcbf2_9ce4_8422_2325,
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    #[inline]
    pub fn tick(&mut self, tag: u64) -> crate::Result<()> {
        self.used += 1;
        self.digest = (self.digest ^ tag).wrapping_mul(0x0000_0100_0000_01b3);
        if self.used > self.limit {
            Err(crate::Error::Budget { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            nodes: self.used,
            digest: self.digest,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// Fingerprint of an exhausted search: node count and digest of visited nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Transcript {
    pub nodes: u64,
    pub digest: u64,
}
