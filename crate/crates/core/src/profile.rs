//! Repetition counts and multipliers for every randomized step.
//!
//! Each count is first evaluated by its closed-form formula, then passed
//! through a [`Scale`]: multiplied by `factor`, rounded up, raised to
//! `floor` and lowered to `cap`. The `paper` preset is the identity on every
//! formula. The `light` preset shrinks the astronomically large formula
//! values to something that runs at desk scale; its guarantees are measured
//! empirically by the acceptance suite rather than proven.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scale {
    pub factor: f64,
    #[serde(default = "one")]
    pub floor: u64,
    #[serde(default)]
    pub cap: Option<u64>,
}

fn one() -> u64 {
    1
}

impl Scale {
    pub const IDENTITY: Scale = Scale {
        factor: 1.0,
        floor: 1,
        cap: None,
    };

    pub const fn factor(factor: f64) -> Scale {
        Scale {
            factor,
            floor: 1,
            cap: None,
        }
    }

    pub const fn capped(cap: u64) -> Scale {
        Scale {
            factor: 1.0,
            floor: 1,
            cap: Some(cap),
        }
    }

    /// `max(floor, 1, ceil(value * factor))`, then `min(cap)`.
    pub fn apply(&self, value: f64) -> u64 {
        let scaled = (value * self.factor).ceil();
        let scaled = if scaled.is_finite() && scaled < u64::MAX as f64 {
            scaled as u64
        } else {
            u64::MAX
        };
        let v = scaled.max(self.floor).max(1);
        match self.cap {
            Some(cap) => v.min(cap.max(1)),
            None => v,
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.factor > 0.0 && self.factor.is_finite()) {
            return Err(invalid(format!("{name}.factor must be positive and finite")));
        }
        if let Some(cap) = self.cap {
            if cap < self.floor.max(1) {
                return Err(invalid(format!("{name}.cap is below its floor")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsProfile {
    pub name: String,
    /// VerifyGuess repetitions per guess in ColourCoarse.
    pub colour_coarse_reps: Scale,
    /// Random colourings drawn by HelperCoarse.
    pub colourings: Scale,
    /// ColourCoarse repetitions per colouring (median taken).
    pub colouring_rounds: Scale,
    /// HelperCoarse repetitions inside Coarse (median taken).
    pub coarse_rounds: Scale,
    /// HelperCount repetitions inside Count (median taken).
    pub count_rounds: Scale,
    /// Per-bucket sample sizes in Trim.
    pub trim_samples: Scale,
    /// Per-entry subset counts in Halve.
    pub halve_samples: Scale,
    /// Rejection-loop iterations allowed per level of the sampler.
    pub accept_cap: Scale,
    /// Multiplier on the asymptotic query bounds used as run budgets.
    pub resource_cap_factor: f64,
    /// Inputs with at most this many vertices are counted exactly.
    pub exact_threshold: usize,
}

impl ConstantsProfile {
    /// Every formula evaluated verbatim.
    pub fn paper() -> Self {
        ConstantsProfile {
            name: "paper".into(),
            colour_coarse_reps: Scale::IDENTITY,
            colourings: Scale::IDENTITY,
            colouring_rounds: Scale::IDENTITY,
            coarse_rounds: Scale::IDENTITY,
            count_rounds: Scale::IDENTITY,
            trim_samples: Scale::IDENTITY,
            halve_samples: Scale::IDENTITY,
            accept_cap: Scale::IDENTITY,
            resource_cap_factor: 64.0,
            exact_threshold: 500,
        }
    }

    /// Desk-scale preset.
    ///
    /// | count                   | scale                  |
    /// |-------------------------|------------------------|
    /// | ColourCoarse reps `N`   | x1e-4, floor 30        |
    /// | colourings `t`          | cap 12                 |
    /// | colouring rounds `T`    | cap 5                  |
    /// | Coarse rounds           | cap 5                  |
    /// | Count rounds            | cap 5                  |
    /// | Trim / Halve samples    | x1.5e-12               |
    /// | accept-loop cap         | x1                     |
    pub fn light() -> Self {
        ConstantsProfile {
            name: "light".into(),
            colour_coarse_reps: Scale {
                factor: 1e-4,
                floor: 30,
                cap: None,
            },
            colourings: Scale::capped(12),
            colouring_rounds: Scale::capped(5),
            coarse_rounds: Scale::capped(5),
            count_rounds: Scale::capped(5),
            trim_samples: Scale::factor(1.5e-12),
            halve_samples: Scale::factor(1.5e-12),
            accept_cap: Scale::IDENTITY,
            resource_cap_factor: 64.0,
            exact_threshold: 500,
        }
    }

    pub fn with_exact_threshold(mut self, threshold: usize) -> Self {
        self.exact_threshold = threshold;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.colour_coarse_reps.validate("colour_coarse_reps")?;
        self.colourings.validate("colourings")?;
        self.colouring_rounds.validate("colouring_rounds")?;
        self.coarse_rounds.validate("coarse_rounds")?;
        self.count_rounds.validate("count_rounds")?;
        self.trim_samples.validate("trim_samples")?;
        self.halve_samples.validate("halve_samples")?;
        self.accept_cap.validate("accept_cap")?;
        if self.resource_cap_factor.is_nan() || self.resource_cap_factor <= 0.0 {
            return Err(invalid("resource_cap_factor must be positive"));
        }
        Ok(())
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "paper" => Some(Self::paper()),
            "light" => Some(Self::light()),
            _ => None,
        }
    }
}

impl Default for ConstantsProfile {
    fn default() -> Self {
        Self::light()
    }
}
