//! Evaluation settings shared by both semantics.

use std::time::Duration;

/// Default number of strategy evaluations one check may spend.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "TRISTRAT_BUDGET";

/// Reading of the release operator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ReleaseMode {
    /// `φ1 R φ2` holds when at every position `φ2` holds or `φ1` held at
    /// some position up to and including the current one.
    #[default]
    Literal,
    /// Textbook LTL release: `φ1` must hold strictly before a position
    /// where `φ2` fails.
    Standard,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub release: ReleaseMode,
    /// Maximum number of strategy evaluations per check.
    pub budget: u64,
    pub timeout: Option<Duration>,
    /// Try path-quantifier readings over the union graph before
    /// enumerating strategies.
    pub shortcuts: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            release: ReleaseMode::Literal,
            budget: DEFAULT_BUDGET,
            timeout: None,
            shortcuts: true,
        }
    }
}

impl Config {
    /// Defaults, with the budget taken from `TRISTRAT_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Some(b) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            cfg.budget = b;
        }
        cfg
    }

    pub fn with_release(mut self, mode: ReleaseMode) -> Self {
        self.release = mode;
        self
    }
}
