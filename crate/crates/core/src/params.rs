//! Model parameters.

use crate::error::{Error, Result};

/// The five rotating-frame parameters; all in units of rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Detuning between resonator and drive.
    pub delta: f64,
    /// Tunneling amplitude between the resonators; the unit scale.
    pub j: f64,
    /// Real, nonnegative drive amplitude on the lossy resonator.
    pub f: f64,
    /// Incoherent pump rate of resonator 1.
    pub gamma1: f64,
    /// Radiative decay rate of resonator 2.
    pub gamma2: f64,
}

impl SystemParams {
    pub fn new(delta: f64, j: f64, f: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        let p = Self { delta, j, f, gamma1, gamma2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.delta, self.j, self.f, self.gamma1, self.gamma2];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite value".into()));
        }
        if self.j <= 0.0 {
            return Err(Error::InvalidParameter(format!("J must be positive, got {}", self.j)));
        }
        if self.f < 0.0 {
            return Err(Error::InvalidParameter(format!("F must be nonnegative, got {}", self.f)));
        }
        if self.gamma1 < 0.0 || self.gamma2 < 0.0 {
            return Err(Error::InvalidParameter("rates must be nonnegative".into()));
        }
        Ok(())
    }

    /// Parameter set with a different drive amplitude.
    pub fn with_f(self, f: f64) -> Self {
        Self { f, ..self }
    }

    /// Look up a parameter by its conventional name.
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "delta" => self.delta,
            "j" => self.j,
            "f" => self.f,
            "gamma1" => self.gamma1,
            "gamma2" => self.gamma2,
            _ => return None,
        })
    }

    /// Set a parameter by name; validation is left to the caller.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "delta" => &mut self.delta,
            "j" => &mut self.j,
            "f" => &mut self.f,
            "gamma1" => &mut self.gamma1,
            "gamma2" => &mut self.gamma2,
            _ => return Err(Error::InvalidParameter(format!("unknown parameter `{name}`"))),
        };
        *slot = value;
        Ok(())
    }

    pub const NAMES: [&'static str; 5] = ["delta", "j", "f", "gamma1", "gamma2"];
}
