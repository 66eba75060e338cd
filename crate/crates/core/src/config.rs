//! Run parameters shared by the grid, histogram and limit computations.

use crate::error::{Error, Result};
use crate::primes::MAX_LIMIT;
use crate::ratios::Deps;
use crate::zeta::EulerMaclaurinParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    /// Height T.
    pub t: f64,
    pub prime_limit: u64,
    /// Number of Bernoulli correction terms in Euler–Maclaurin.
    pub em_depth: usize,
    pub mask_band: f64,
    pub window: f64,
    /// Theory grid spacing.
    pub step: f64,
    /// Histogram bin width.
    pub bin: f64,
    pub switch_radius: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            t: 75000.0,
            prime_limit: 100_000,
            em_depth: 12,
            mask_band: 0.5,
            window: 30.0,
            step: 0.25,
            bin: 0.2,
            switch_radius: 1e-3,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} (need a positive finite value)")))
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        positive("T", self.t)?;
        if self.t <= 2.0 * std::f64::consts::PI {
            return Err(Error::Domain(format!("T = {} (need T > 2 pi)", self.t)));
        }
        positive("mask_band", self.mask_band)?;
        positive("window", self.window)?;
        positive("step", self.step)?;
        positive("bin", self.bin)?;
        if self.step > self.window {
            return Err(Error::Domain(format!(
                "step = {} exceeds window = {}",
                self.step, self.window
            )));
        }
        if self.bin > self.window {
            return Err(Error::Domain(format!(
                "bin = {} exceeds window = {}",
                self.bin, self.window
            )));
        }
        if !(2..=MAX_LIMIT).contains(&self.prime_limit) {
            return Err(Error::Domain(format!(
                "prime_limit = {} (need 2..={MAX_LIMIT})",
                self.prime_limit
            )));
        }
        self.zeta_params()?;
        Ok(())
    }

    pub fn zeta_params(&self) -> Result<EulerMaclaurinParams> {
        EulerMaclaurinParams::new(
            EulerMaclaurinParams::default().cutoff_terms,
            self.em_depth,
            self.switch_radius,
        )
    }

    /// Validates and builds the prime table.
    pub fn deps(&self) -> Result<Deps> {
        self.validate()?;
        Deps::new(self.prime_limit, self.zeta_params()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        EngineConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_fields() {
        let base = EngineConfig::default();
        let bad = [
            EngineConfig { t: 5.0, ..base },
            EngineConfig { mask_band: 0.0, ..base },
            EngineConfig { step: 40.0, ..base },
            EngineConfig { bin: f64::NAN, ..base },
            EngineConfig { em_depth: 1, ..base },
            EngineConfig {
                switch_radius: 0.5,
                ..base
            },
            EngineConfig { prime_limit: 1, ..base },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::Domain(_))), "{c:?}");
        }
    }
}
