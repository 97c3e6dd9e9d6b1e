//! Experiment plans and their flat `key = value` text format.
//!
//! ```text
//! # comment
//! problems   = lsmop1, lsmop5
//! dimensions = 1000, 2000, 5000
//! seeds      = 1-10
//! N = 300
//! ```
//!
//! One assignment per line, `#` starts a comment, lists are comma separated.
//! Integer lists also accept inclusive ranges `a-b`. `problems = all` selects
//! LSMOP1 to LSMOP9. Only `problems` is required.

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::IgdDistance;
use crate::optimizer::OptimizerConfig;
use crate::problems::LsmopId;

/// Environment variable that replaces the configured seed list.
pub const SEED_ENV: &str = "LTPPM_SEED";

pub const DEFAULT_DIMENSION: usize = 1000;
pub const DEFAULT_SEEDS: std::ops::RangeInclusive<u64> = 1..=10;
pub const DEFAULT_OBJECTIVES: usize = 3;
pub const DEFAULT_REFERENCE_POINTS: usize = 1000;
pub const DEFAULT_OUTPUT: &str = "results";

pub const KEYS: &[&str] = &[
    "problems",
    "dimensions",
    "seeds",
    "objectives",
    "N",
    "P",
    "offspring_per_gen",
    "e",
    "r",
    "h0",
    "step_mode",
    "step_scale",
    "kde_space",
    "igd_squared",
    "reference_points",
    "output",
    "baseline",
    "timing",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub problems: Vec<LsmopId>,
    pub dimensions: Vec<usize>,
    pub seeds: Vec<u64>,
    pub objectives: usize,
    /// Per-run settings; `seed` is replaced by each cell's seed.
    pub optimizer: OptimizerConfig<f64>,
    pub igd_distance: IgdDistance,
    pub reference_points: usize,
    pub output: PathBuf,
    /// Also run the uniform random baseline for every cell.
    pub baseline: bool,
    /// Record wall-clock time in traces. Off gives byte-reproducible traces.
    pub timing: bool,
}

impl ExperimentPlan {
    /// A plan over `problems` with every other setting at its default.
    pub fn new(problems: Vec<LsmopId>) -> Self {
        Self {
            problems,
            dimensions: vec![DEFAULT_DIMENSION],
            seeds: DEFAULT_SEEDS.collect(),
            objectives: DEFAULT_OBJECTIVES,
            optimizer: OptimizerConfig::default(),
            igd_distance: IgdDistance::Euclidean,
            reference_points: DEFAULT_REFERENCE_POINTS,
            output: PathBuf::from(DEFAULT_OUTPUT),
            baseline: false,
            timing: true,
        }
    }

    /// Number of (problem, dimension, seed) cells per algorithm.
    pub fn cell_count(&self) -> usize {
        self.problems.len() * self.dimensions.len() * self.seeds.len()
    }

    /// Replaces the seed list with `value`, in the same list syntax as the
    /// `seeds` key.
    pub fn override_seeds(&mut self, value: &str) -> Result<()> {
        let seeds = parse_list(value, parse_u64_item).map_err(|message| Error::Parse {
            line: 0,
            key: SEED_ENV.to_string(),
            message,
        })?;
        self.seeds = seeds;
        Ok(())
    }

    /// Applies `LTPPM_SEED` when it is set.
    pub fn apply_seed_env(&mut self) -> Result<()> {
        match std::env::var(SEED_ENV) {
            Ok(v) => self.override_seeds(&v),
            Err(_) => Ok(()),
        }
    }
}

fn parse_u64_item(s: &str) -> std::result::Result<Vec<u64>, String> {
    if let Some((a, b)) = s.split_once('-') {
        let lo: u64 = a.trim().parse().map_err(|_| format!("`{s}` is not an integer range"))?;
        let hi: u64 = b.trim().parse().map_err(|_| format!("`{s}` is not an integer range"))?;
        if lo > hi {
            return Err(format!("range `{s}` is empty"));
        }
        Ok((lo..=hi).collect())
    } else {
        s.parse().map(|v| vec![v]).map_err(|_| format!("`{s}` is not a non-negative integer"))
    }
}

fn parse_list<V>(
    value: &str,
    item: impl Fn(&str) -> std::result::Result<Vec<V>, String>,
) -> std::result::Result<Vec<V>, String> {
    let mut out = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err("list contains an empty entry".into());
        }
        out.extend(item(part)?);
    }
    if out.is_empty() {
        return Err("list is empty".into());
    }
    Ok(out)
}

fn parse_scalar<V: FromStr>(value: &str, what: &str) -> std::result::Result<V, String> {
    value.parse().map_err(|_| format!("`{value}` is not {what}"))
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("`{value}` is not a boolean")),
    }
}

fn positive_real(value: &str) -> std::result::Result<f64, String> {
    let v: f64 = parse_scalar(value, "a number")?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {value}"))
    }
}

fn positive_count(value: &str) -> std::result::Result<usize, String> {
    let v: usize = parse_scalar(value, "a non-negative integer")?;
    if v == 0 {
        Err("must be at least 1".into())
    } else {
        Ok(v)
    }
}

/// Parses and validates a plan. Errors name the offending line and key.
pub fn parse_plan(text: &str) -> Result<ExperimentPlan> {
    let mut plan = ExperimentPlan::new(Vec::new());
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut offspring: Option<(usize, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split_once('#').map_or(raw, |(c, _)| c).trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                key: content.to_string(),
                message: "expected `key = value`".into(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let fail = |message: String| Error::Parse {
            line,
            key: key.to_string(),
            message,
        };
        if !KEYS.contains(&key) {
            return Err(fail(format!("unknown key (known: {})", KEYS.join(", "))));
        }
        let canonical = if key == "offspring_per_gen" { "P" } else { key };
        if let Some(prev) = seen.insert(canonical.to_string(), line) {
            return Err(fail(format!("already set on line {prev}")));
        }
        if value.is_empty() {
            return Err(fail("missing value".into()));
        }

        match key {
            "problems" => {
                plan.problems = if value.eq_ignore_ascii_case("all") {
                    LsmopId::all().collect()
                } else {
                    parse_list(value, |s| {
                        LsmopId::from_str(s).map(|id| vec![id]).map_err(|e| e.to_string())
                    })
                    .map_err(fail)?
                };
            }
            "dimensions" => {
                plan.dimensions = parse_list(value, |s| positive_count(s).map(|v| vec![v])).map_err(fail)?;
            }
            "seeds" => plan.seeds = parse_list(value, parse_u64_item).map_err(fail)?,
            "objectives" => {
                let m = positive_count(value).map_err(fail)?;
                if m < 2 {
                    return Err(fail("needs at least 2 objectives".into()));
                }
                plan.objectives = m;
            }
            "N" => plan.optimizer.capacity = positive_count(value).map_err(fail)?,
            "P" | "offspring_per_gen" => offspring = Some((positive_count(value).map_err(fail)?, line)),
            "e" => {
                plan.optimizer.max_evaluations = parse_scalar(value, "a non-negative integer").map_err(fail)?
            }
            "r" => {
                let r: f64 = parse_scalar(value, "a number").map_err(fail)?;
                if !(r > 0.0 && r < 1.0) {
                    return Err(fail(format!("must lie in (0, 1), got {value}")));
                }
                plan.optimizer.attenuation = r;
            }
            "h0" => plan.optimizer.initial_bandwidth = positive_real(value).map_err(fail)?,
            "step_mode" => plan.optimizer.step_mode = value.parse().map_err(|e: Error| fail(e.to_string()))?,
            "step_scale" => plan.optimizer.step_scale = positive_real(value).map_err(fail)?,
            "kde_space" => plan.optimizer.kde_space = value.parse().map_err(|e: Error| fail(e.to_string()))?,
            "igd_squared" => {
                plan.igd_distance = if parse_bool(value).map_err(fail)? {
                    IgdDistance::Squared
                } else {
                    IgdDistance::Euclidean
                }
            }
            "reference_points" => plan.reference_points = positive_count(value).map_err(fail)?,
            "output" => plan.output = PathBuf::from(value),
            "baseline" => plan.baseline = parse_bool(value).map_err(fail)?,
            "timing" => plan.timing = parse_bool(value).map_err(fail)?,
            _ => unreachable!("key list and match arms agree"),
        }
    }

    if plan.problems.is_empty() {
        return Err(Error::Parse {
            line: 0,
            key: "problems".into(),
            message: "required key is missing".into(),
        });
    }
    plan.optimizer.offspring = offspring.map_or(plan.optimizer.capacity, |(p, _)| p);
    if plan.optimizer.max_evaluations < plan.optimizer.offspring as u64 {
        let (key, line) = match seen.get("e") {
            Some(&l) => ("e", l),
            None => ("P", offspring.map_or(0, |(_, l)| l)),
        };
        return Err(Error::Parse {
            line,
            key: key.into(),
            message: format!(
                "evaluation limit {} is below the population size {}",
                plan.optimizer.max_evaluations, plan.optimizer.offspring
            ),
        });
    }
    if plan.reference_points < plan.objectives {
        return Err(Error::Parse {
            line: seen.get("reference_points").copied().unwrap_or(0),
            key: "reference_points".into(),
            message: format!("needs at least {} points", plan.objectives),
        });
    }
    plan.optimizer.validate()?;
    Ok(plan)
}
