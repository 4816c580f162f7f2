use homforge::graph::GadgetLayout;
use homforge::ortho::{vertex_guard, DEFAULT_REFLECT_CAP};
use serde::Serialize;

/// Settings shared by every command; echoed into each report.
#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub corpus_max_n: usize,
    pub degree_cap: usize,
    pub reflect_cap: usize,
    pub seed: u64,
    pub vertex_guard: usize,
    /// Random formal sums per corpus pair.
    pub samples: usize,
    /// Random multipliers per stage in the recovery check.
    pub multipliers: usize,
    pub gadget_layout: GadgetLayout,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            corpus_max_n: 3,
            degree_cap: homforge::corner::DEFAULT_DEGREE_CAP,
            reflect_cap: DEFAULT_REFLECT_CAP,
            seed: 0,
            vertex_guard: vertex_guard(),
            samples: 25,
            multipliers: 100,
            gadget_layout: GadgetLayout::default(),
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), String> {
        if self.degree_cap == 0 {
            return Err("--degree-cap must be positive".into());
        }
        if self.reflect_cap == 0 {
            return Err("--reflect-cap must be positive".into());
        }
        if self.corpus_max_n == 0 {
            return Err("--corpus-max-n must be positive".into());
        }
        Ok(())
    }
}
