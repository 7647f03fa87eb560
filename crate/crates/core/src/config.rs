//! Run configuration: resource caps, catalog bounds, anchors, seeds.
//!
//! An optional config file holds flat `key = value` lines ('#' comments);
//! command-line flags override file values. Unknown keys are rejected.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Caps {
    /// maximum EV-system size built
    pub ev_cap: u64,
    /// node cap per backtracking search
    pub search_budget: u64,
    /// cap on the quadratic pair loop of the signature-transfer check
    pub pair_cap: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ev_cap: crate::ev::DEFAULT_EV_CAP,
            search_budget: crate::hom::DEFAULT_SEARCH_BUDGET,
            pair_cap: 100_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// catalog bound for counting checks
    pub max_n: usize,
    /// catalog bound for quadratic signature checks
    pub max_n_quadratic: usize,
    pub caps: Caps,
    /// anchor override for product-cancellation iterations (canonical
    /// position 0 when unset)
    pub anchor: Option<String>,
    pub k_max: usize,
    pub format: OutputFormat,
    pub seed: u64,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_n: 4,
            max_n_quadratic: 3,
            caps: Caps::default(),
            anchor: None,
            k_max: 3,
            format: OutputFormat::Text,
            seed: 1,
            workers: 0,
        }
    }
}

impl RunConfig {
    /// Apply `key = value` lines from a config file. Unknown keys are an
    /// error so typos cannot silently change a run.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: format!("expected key = value, got {raw:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_u64 = |v: &str| -> Result<u64> {
                v.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("invalid number {v:?} for {key}"),
                })
            };
            match key {
                "max_n" => self.max_n = parse_u64(value)? as usize,
                "max_n_quadratic" => self.max_n_quadratic = parse_u64(value)? as usize,
                "ev_cap" => self.caps.ev_cap = parse_u64(value)?,
                "search_budget" => self.caps.search_budget = parse_u64(value)?,
                "pair_cap" => self.caps.pair_cap = parse_u64(value)?,
                "k_max" => self.k_max = parse_u64(value)? as usize,
                "seed" => self.seed = parse_u64(value)?,
                "workers" => self.workers = parse_u64(value)? as usize,
                "anchor" => self.anchor = Some(value.to_string()),
                "format" => {
                    self.format = match value {
                        "text" => OutputFormat::Text,
                        "json" => OutputFormat::Json,
                        _ => {
                            return Err(Error::Parse {
                                line: lineno + 1,
                                message: format!("format must be text or json, got {value:?}"),
                            })
                        }
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("unknown config key {key:?}"),
                    })
                }
            }
        }
        if self.max_n == 0 || self.k_max == 0 || self.caps.ev_cap == 0 || self.caps.search_budget == 0
        {
            return Err(Error::Parse {
                line: 0,
                message: "bounds must be positive".into(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_and_rejects_unknown_keys() {
        let mut cfg = RunConfig::default();
        cfg.apply_file("max_n = 5\nseed=9 # comment\n\n# full comment\n")
            .unwrap();
        assert_eq!(cfg.max_n, 5);
        assert_eq!(cfg.seed, 9);
        assert!(cfg.apply_file("no_such_key = 1").is_err());
        assert!(cfg.apply_file("max_n = banana").is_err());
        assert!(cfg.apply_file("max_n = 0").is_err());
    }
}
