//! Resource caps shared by the enumeration-heavy operations.

use crate::error::{Error, Result};

pub const HARD_SUPPORT_CAP: usize = 10;
pub const HARD_POSET_CAP: usize = 20;
pub const HARD_STAGE_CAP: usize = 64;
pub const HARD_PRECISION_CAP: u32 = 64;

/// Environment variable holding cap overrides, e.g. `support=7,poset=12`.
pub const CAPS_ENV: &str = "UMINFLOW_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest event support enumerated by the exact measure.
    pub support: usize,
    /// Largest poset whose linear extensions are counted.
    pub poset: usize,
    /// Largest universal-poset stage constructed.
    pub stage: usize,
    /// Largest dyadic precision exponent.
    pub precision: u32,
    /// Candidates examined per back-and-forth step.
    pub step_budget: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            support: 8,
            poset: 16,
            stage: 64,
            precision: 64,
            step_budget: 1 << 16,
        }
    }
}

impl Caps {
    /// Defaults overridden by `UMINFLOW_CAPS` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPS_ENV) {
            Ok(spec) => Caps::default().with_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    /// Applies comma-separated `key=value` overrides.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("cap override `{item}` lacks `=`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("cap `{key}` is not a natural number")))?;
            match key.trim() {
                "support" => self.support = value,
                "poset" => self.poset = value,
                "stage" => self.stage = value,
                "precision" => self.precision = value.min(u32::MAX as usize) as u32,
                "budget" => self.step_budget = value,
                other => return Err(Error::Format(format!("unknown cap `{other}`"))),
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check("support cap", self.support, HARD_SUPPORT_CAP)?;
        check("poset cap", self.poset, HARD_POSET_CAP)?;
        check("stage cap", self.stage, HARD_STAGE_CAP)?;
        check(
            "precision cap",
            self.precision as usize,
            HARD_PRECISION_CAP as usize,
        )
    }
}

pub(crate) fn check(what: &'static str, got: usize, cap: usize) -> Result<()> {
    if got > cap {
        Err(Error::CapExceeded { what, got, cap })
    } else {
        Ok(())
    }
}
