//! Pipeline configuration and its line-oriented `key = value` file format.
//!
//! ```text
//! # bound
//! c = 0.01
//! eps = 0.025
//! ln_base = e
//! dichotomy_recursion_limit = 6
//! # threshold overrides (optional)
//! override.window = 2
//! ```

use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {value:?}")]
    BadValue { line: usize, key: String, value: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Optional replacements for the construction's thresholds.
///
/// At desk scale `gamma = d^eps` is barely above one and several windows
/// degenerate; these let tests and experiments exercise the logic with
/// meaningful sizes. `None` means the default formula.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    /// Degree at or above which a path vertex is heavy (`gamma^-2 n`).
    pub heavy_threshold: Option<f64>,
    /// Index window for chords, danger and crucial sums (`gamma^9`).
    pub window: Option<usize>,
    /// Partner count that makes a heavy vertex safe (`4 gamma^4.5`).
    pub danger_quota: Option<f64>,
    /// Partner count in the bad-pair test (`gamma^4.5`).
    pub bad_pair_quota: Option<f64>,
    /// Common out-neighbourhood size that counts as overlap (`gamma^-4 n / 100`).
    pub overlap: Option<f64>,
    /// Additive slack for chordless heavy vertices (`gamma^7`).
    pub violation_slack: Option<f64>,
    /// Segment-sum level that makes a heavy vertex crucial (`p / (2 gamma^2)`).
    pub crucial_threshold: Option<f64>,
    /// Detour sets must be smaller than this, fake edges at most this (`gamma^2`).
    pub detour_limit: Option<f64>,
    /// Minimum index gap between detour vertices, exclusive (`3 gamma^9`).
    pub spacing: Option<usize>,
    /// Common heavy neighbours needed to add a fake edge (`7 gamma^11`).
    pub rewire_threshold: Option<f64>,
    /// Maximum length of a problematic path (`d^(1/2) gamma`).
    pub problematic_max_len: Option<usize>,
    /// A problematic path meets the initial segment in more than this many vertices (`gamma^2`).
    pub problematic_hits: Option<f64>,
    /// Initial segment length (`max(1, d^(1/2) gamma^-5)`).
    pub segment_len: Option<usize>,
}

/// Budgets for the d-full subgraph search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    /// Exhaustive vertex-subset search when the support is at most this large.
    pub exact_vertex_limit: usize,
    /// Enumerate unions of decomposition cycles when there are at most this many.
    pub decomposition_subset_limit: usize,
    /// Cap on single-vertex cycle-removal probes per search round (0 = all).
    pub max_probes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exact_vertex_limit: 12,
            decomposition_subset_limit: 12,
            max_probes: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub c: f64,
    pub eps: f64,
    /// Nesting depth of recursive path searches before falling back.
    pub recursion_limit: usize,
    /// Total recursive solver invocations per query.
    pub max_calls: usize,
    pub good_path_retries: usize,
    pub max_resamples: usize,
    pub d_min: f64,
    /// Extensions allowed to the greedy fallback search.
    pub greedy_budget: usize,
    /// Node budget for problematic-path search when more than two hits are needed.
    pub problematic_search_budget: usize,
    /// Keep evaluating branches after one certifies (diagnostics).
    pub run_all_branches: bool,
    /// Fail with an error, instead of noting it and carrying on, when a
    /// separator step finds a witness that the graph is not d-full.
    pub strict_fullness: bool,
    pub search: SearchBudget,
    pub overrides: Overrides,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            c: 0.01,
            eps: 1.0 / 40.0,
            recursion_limit: 6,
            max_calls: 64,
            good_path_retries: 64,
            max_resamples: 100,
            d_min: 1.0,
            greedy_budget: 20_000,
            problematic_search_budget: 200_000,
            run_all_branches: false,
            strict_fullness: false,
            search: SearchBudget::default(),
            overrides: Overrides::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(ConfigError::Invalid(format!("c must be positive, got {}", self.c)));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(ConfigError::Invalid(format!(
                "eps must lie in (0, 1/2), got {}",
                self.eps
            )));
        }
        Ok(())
    }

    /// Applies one `key = value` setting. Returns `Ok(false)` for keys this
    /// struct does not know, so callers can layer their own keys on top.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool, String> {
        fn num<T: FromStr>(v: &str) -> Result<T, String> {
            v.parse().map_err(|_| v.to_string())
        }
        fn opt<T: FromStr>(v: &str) -> Result<Option<T>, String> {
            if v == "default" || v == "none" {
                Ok(None)
            } else {
                num(v).map(Some)
            }
        }
        let o = &mut self.overrides;
        match key {
            "c" => self.c = num(value)?,
            "eps" => self.eps = num(value)?,
            "ln_base" => {
                if value != "e" {
                    return Err(value.to_string());
                }
            }
            "dichotomy_recursion_limit" => self.recursion_limit = num(value)?,
            "max_calls" => self.max_calls = num(value)?,
            "good_path_retries" => self.good_path_retries = num(value)?,
            "max_resamples" => self.max_resamples = num(value)?,
            "d_min" => self.d_min = num(value)?,
            "greedy_budget" => self.greedy_budget = num(value)?,
            "problematic_search_budget" => self.problematic_search_budget = num(value)?,
            "run_all_branches" => self.run_all_branches = num(value)?,
            "strict_fullness" => self.strict_fullness = num(value)?,
            "exact_vertex_limit" => self.search.exact_vertex_limit = num(value)?,
            "decomposition_subset_limit" => self.search.decomposition_subset_limit = num(value)?,
            "max_probes" => self.search.max_probes = num(value)?,
            "override.heavy_threshold" => o.heavy_threshold = opt(value)?,
            "override.window" => o.window = opt(value)?,
            "override.danger_quota" => o.danger_quota = opt(value)?,
            "override.bad_pair_quota" => o.bad_pair_quota = opt(value)?,
            "override.overlap" => o.overlap = opt(value)?,
            "override.violation_slack" => o.violation_slack = opt(value)?,
            "override.crucial_threshold" => o.crucial_threshold = opt(value)?,
            "override.detour_limit" => o.detour_limit = opt(value)?,
            "override.spacing" => o.spacing = opt(value)?,
            "override.rewire_threshold" => o.rewire_threshold = opt(value)?,
            "override.problematic_max_len" => o.problematic_max_len = opt(value)?,
            "override.problematic_hits" => o.problematic_hits = opt(value)?,
            "override.segment_len" => o.segment_len = opt(value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = PipelineConfig::default();
        for entry in key_values(text) {
            let (line, key, value) = entry?;
            match cfg.set(key, value) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
                Err(v) => {
                    return Err(ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        value: v,
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `(line number, key, value)` for every non-comment line.
pub fn key_values(text: &str) -> impl Iterator<Item = Result<(usize, &str, &str), ConfigError>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        Some(match line.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => Ok((i + 1, k.trim(), v.trim())),
            _ => Err(ConfigError::Syntax { line: i + 1 }),
        })
    })
}
