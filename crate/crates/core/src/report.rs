use serde::Serialize;

/// Witnesses kept per report; the failure count is always exact.
pub const WITNESS_CAP: usize = 16;

/// Outcome of a finite scan: how much was checked, whether the scan was
/// exhaustive, and the first failures found in scan order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checked: u64,
    pub exhaustive: bool,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(exhaustive: bool) -> Self {
        CheckReport { exhaustive, ..Default::default() }
    }

    pub fn exact() -> Self {
        Self::new(true)
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn tick(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.failure_count += 1;
        if self.failures.len() < WITNESS_CAP {
            self.failures.push(witness.into());
        }
    }

    /// Records one check; on `ok == false` the witness closure runs.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    /// Appends `other`, keeping witness order.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.exhaustive &= other.exhaustive;
        self.failure_count += other.failure_count;
        for w in other.failures {
            if self.failures.len() < WITNESS_CAP {
                self.failures.push(w);
            }
        }
    }

    /// `absorb` with every witness prefixed by `label`.
    pub fn absorb_labeled(&mut self, label: &str, other: CheckReport) {
        let failures = other.failures.into_iter().map(|w| format!("{label}: {w}")).collect();
        self.absorb(CheckReport { failures, ..other });
    }

    pub fn merged(mut self, other: CheckReport) -> Self {
        self.absorb(other);
        self
    }
}
