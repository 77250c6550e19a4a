use serde::{Deserialize, Serialize};

/// Global knobs shared by the CLI and the generators. The level `n` of the
/// collapsing hierarchy is a configuration value, never a per-term field;
/// all formula-class tests take it as an argument.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Config {
    /// Level n ≥ 2 of the Σ_n machinery.
    pub level_n: u32,
    /// Maximum von Neumann rank of hereditarily finite constants.
    pub hf_cap: usize,
    /// Maximum term size (node count) for enumeration and oracles.
    pub size_cap: usize,
    /// Maximum stage-iteration depth for the hull oracle.
    pub depth_cap: usize,
    /// Maximum height of ω-towers.
    pub tower_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            level_n: 2,
            hf_cap: 6,
            size_cap: 7,
            depth_cap: 12,
            tower_cap: 24,
        }
    }
}

impl Config {
    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let mut cfg: Config =
            serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
        if cfg.level_n < 2 {
            return Err(format!("{path}: level_n must be at least 2"));
        }
        if cfg.tower_cap == 0 {
            cfg.tower_cap = Config::default().tower_cap;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!(c.level_n, 2);
        assert_eq!(c.hf_cap, 6);
        assert_eq!(c.size_cap, 7);
        assert_eq!(c.depth_cap, 12);
    }
}
