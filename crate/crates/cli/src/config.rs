use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Seed used when neither the config nor `--seed` provides one. Reports
/// always record the seed that was actually used.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    /// Replaces the default slack of every claim that has one.
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub snake: SnakeConfig,
    pub sharkteeth: SharkTeethConfig,
    pub dendrite: DendriteConfig,
    pub scattered: ScatteredConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnakeConfig {
    pub depth: usize,
    pub angular_step: f64,
    pub radial_step: f64,
    /// Random pairs per Lipschitz run.
    pub pairs: usize,
    /// Depths checked for weak contraction.
    pub contraction_depths: Vec<usize>,
    /// Number of cover maps; searched by doubling when absent.
    pub cover_maps: Option<usize>,
    pub sanders_depth: usize,
}

impl Default for SnakeConfig {
    fn default() -> Self {
        SnakeConfig {
            depth: 50,
            angular_step: 1e-2,
            radial_step: 1e-3,
            pairs: 100_000,
            contraction_depths: vec![10, 25, 50],
            cover_maps: None,
            sanders_depth: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SharkTeethConfig {
    pub rows: usize,
    pub samples_per_row: usize,
    pub resolution: f64,
    pub word_length: usize,
    pub pairs: usize,
}

impl Default for SharkTeethConfig {
    fn default() -> Self {
        SharkTeethConfig {
            rows: 6,
            samples_per_row: 129,
            resolution: 1e-3,
            word_length: 10,
            pairs: 100_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DendriteConfig {
    pub depth: u32,
    /// Samples per arc of the zigzag dendrite; defaults to twice the leg
    /// count of the deepest arc.
    pub samples_per_arc: Option<usize>,
    pub straight_depth: u32,
    pub straight_samples: usize,
    pub pairs: usize,
}

impl Default for DendriteConfig {
    fn default() -> Self {
        DendriteConfig {
            depth: 8,
            samples_per_arc: None,
            straight_depth: 12,
            straight_samples: 1025,
            pairs: 100_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatteredConfig {
    pub max_exponent: u32,
    pub embed_depth: usize,
}

impl Default for ScatteredConfig {
    fn default() -> Self {
        ScatteredConfig {
            max_exponent: 9,
            embed_depth: 4,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("tolerance must be > 0, got {t}"));
            }
        }
        let positive = [
            ("snake.angular_step", self.snake.angular_step),
            ("snake.radial_step", self.snake.radial_step),
            ("sharkteeth.resolution", self.sharkteeth.resolution),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be > 0, got {v}"));
            }
        }
        Ok(())
    }
}
