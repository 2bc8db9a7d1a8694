//! Run configuration: a JSON document with rationals encoded as "p/q" strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GciError, Result};
use crate::fourpoint::PWParams;
use crate::partialwave::default_order;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Tolerance names and defaults for the numeric checks.
pub const DEFAULT_TOLERANCES: [(&str, f64); 9] = [
    ("modular", 1e-10),
    ("anomaly", 1e-10),
    ("weight2", 1e-8),
    ("gibbs", 1e-12),
    ("kms", 1e-8),
    ("weyl_periodicity", 1e-8),
    ("weyl_vacuum", 1e-10),
    ("kernel", 1e-12),
    ("decay", 0.1),
];

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "PWParams::zero")]
    pub params: PWParams,
    #[serde(default = "default_twist")]
    pub max_twist: usize,
    #[serde(default = "default_spin")]
    pub max_spin: usize,
    #[serde(default)]
    pub series_order: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub tau_points: Vec<String>,
    #[serde(default)]
    pub json_out: Option<String>,
    #[serde(default)]
    pub csv_dir: Option<String>,
}

fn default_twist() -> usize {
    3
}

fn default_spin() -> usize {
    4
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: PWParams::zero(),
            max_twist: default_twist(),
            max_spin: default_spin(),
            series_order: None,
            seed: DEFAULT_SEED,
            tolerances: BTreeMap::new(),
            tau_points: Vec::new(),
            json_out: None,
            csv_dir: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: RunConfig =
            serde_json::from_str(text).map_err(|e| GciError::Usage(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GciError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Series order, defaulting to 2L + 2K + 8.
    pub fn order(&self) -> usize {
        self.series_order
            .unwrap_or_else(|| default_order(self.max_twist, self.max_spin))
    }

    /// Named tolerance, falling back to the built-in default.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .unwrap_or(1e-10)
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.max_twist == 0 {
            return Err(GciError::Usage("max_twist must be at least 1".into()));
        }
        let need = 2 * self.max_spin + 2 * self.max_twist;
        if self.order() + 2 < need {
            return Err(GciError::Usage(format!(
                "series_order {} too small for K = {}, L = {} (need at least {})",
                self.order(),
                self.max_twist,
                self.max_spin,
                need - 2
            )));
        }
        for (k, v) in &self.tolerances {
            if !(v.is_finite() && *v > 0.0) {
                return Err(GciError::Usage(format!("tolerance '{k}' must be positive")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, ri};

    #[test]
    fn parse_full() {
        let c = RunConfig::from_json(
            r#"{"params":{"a0":"1/2","a1":"1","a2":"0","b":"-1/3","c":"0","B":"2"},
                "max_twist":2,"max_spin":3,"seed":7,"tolerances":{"gibbs":1e-9},"tau_points":["1.1i"]}"#,
        )
        .unwrap();
        assert_eq!(c.params.a0, rat(1, 2));
        assert_eq!(c.params.big_b, ri(2));
        assert_eq!(c.tolerance("gibbs"), 1e-9);
        assert_eq!(c.tolerance("modular"), 1e-10);
        assert_eq!(c.order(), 2 * 3 + 2 * 2 + 8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::from_json(r#"{"max_twist":0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"tolerances":{"x":-1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"params":{"a0":"1/0"}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"params":{"B":"-1"}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"max_spin":10,"series_order":4}"#).is_err());
        assert!(RunConfig::from_json(r#"{"bogus":1}"#).is_err());
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }
}
