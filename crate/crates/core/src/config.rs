use crate::error::{Error, Result};

pub const LIMITS_ENV: &str = "TDOPT_LIMITS";

/// Caps for the exponential desk-scale searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest matroid rank handed to the exact branch-depth search.
    pub max_rank: usize,
    /// Largest ground set handed to the exact branch-depth search.
    pub max_elements: usize,
    /// Largest graph handed to the exact tree-depth solver.
    pub max_vertices: usize,
    /// Largest number of used leaves checked by exhaustive validation.
    pub max_validate_leaves: usize,
    /// Largest box enumerated by the brute-force IP oracle.
    pub box_cap: u64,
    /// Initial ∞-norm bound for augmenting directions.
    pub aug_initial_norm: i64,
    /// ∞-norm bound at which direction growth stops on unbounded variables.
    pub aug_max_norm: i64,
    /// Maximum number of improving steps in one augmentation run.
    pub aug_step_budget: usize,
    /// Half-width of the window searched for a start on unbounded variables.
    pub start_radius: i64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rank: 6,
            max_elements: 10,
            max_vertices: 20,
            max_validate_leaves: 20,
            box_cap: 10_000_000,
            aug_initial_norm: 2,
            aug_max_norm: 4,
            aug_step_budget: 10_000,
            start_radius: 8,
        }
    }
}

impl Limits {
    /// Applies `key=value` overrides separated by commas, e.g.
    /// `max_rank=7,max_vertices=24`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("limit override {item:?} is not key=value")))?;
            let bad = || Error::Parse(format!("bad value in limit override {item:?}"));
            let value = value.trim();
            match key.trim() {
                "max_rank" => self.max_rank = value.parse().map_err(|_| bad())?,
                "max_elements" => self.max_elements = value.parse().map_err(|_| bad())?,
                "max_vertices" => self.max_vertices = value.parse().map_err(|_| bad())?,
                "max_validate_leaves" => {
                    self.max_validate_leaves = value.parse().map_err(|_| bad())?
                }
                "box_cap" => self.box_cap = value.parse().map_err(|_| bad())?,
                "aug_initial_norm" => self.aug_initial_norm = value.parse().map_err(|_| bad())?,
                "aug_max_norm" => self.aug_max_norm = value.parse().map_err(|_| bad())?,
                "aug_step_budget" => self.aug_step_budget = value.parse().map_err(|_| bad())?,
                "start_radius" => self.start_radius = value.parse().map_err(|_| bad())?,
                other => return Err(Error::Parse(format!("unknown limit {other:?}"))),
            }
        }
        Ok(self)
    }

    /// Defaults with `TDOPT_LIMITS` applied when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(LIMITS_ENV) {
            Ok(spec) => Limits::default().with_overrides(&spec),
            Err(_) => Ok(Limits::default()),
        }
    }
}
