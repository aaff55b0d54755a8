use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

/// Every run option. The same keys are accepted in a TOML file given with
/// `--config`; values from the file win over flags.
#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// Group model: f2, free:3, z, fp:2,3, bs:2,3,1.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    /// Comma separated generator words; capitals are inverses.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gens: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Element cap for enumerations.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[arg(long = "constants-D", global = true)]
    #[serde(rename = "constants-D", skip_serializing_if = "Option::is_none")]
    pub constants_d: Option<u64>,
    #[arg(long = "constants-M", global = true)]
    #[serde(rename = "constants-M", skip_serializing_if = "Option::is_none")]
    pub constants_m: Option<u64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<u64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing)]
    pub shards: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// JSON-lines output file; stdout when absent.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// CSV output file for tables.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// SVG output file for plots.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
    /// TOML file with any of these keys.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Ball radius for separators, primitivity and the audit.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// Cutoff radius for the cone automaton (growth).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub automaton: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<usize>,
    /// Maximal word length of scanned generators, or of kernel words (limit).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_lower: Option<bool>,
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub require_hyperbolic: Option<bool>,
    /// Image templates of the free generators, e.g. "a, A^n b a^n".
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub templates: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_model: Option<String>,
    /// Images of the free generators in the limit model.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_gens: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        $(if $top.$f.is_some() { $base.$f = $top.$f.clone(); })*
    };
}

impl RunConfig {
    pub fn parse_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("config: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse_toml(&text)
    }

    /// Values present in `file` replace those given as flags.
    pub fn overlay(mut self, file: &RunConfig) -> Self {
        overlay!(
            self, file, model, gens, depth, cap, constants_d, constants_m, epsilon, shards, seed, out, csv, plot,
            radius, automaton, m, q, cardinality, length, no_lower, require_hyperbolic, templates, relations,
            horizon, limit_model, limit_gens, cases
        );
        self
    }

    pub fn shards(&self) -> usize {
        self.shards.unwrap_or(1).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::parse_toml("model = \"f2\"\ncolour = 3\n").is_err());
        let c = RunConfig::parse_toml("model = \"f2\"\nconstants-D = 2\n").unwrap();
        assert_eq!(c.constants_d, Some(2));
    }

    #[test]
    fn file_wins() {
        let flags = RunConfig {
            model: Some("fp:2,3".into()),
            depth: Some(4),
            ..RunConfig::default()
        };
        let file = RunConfig::parse_toml("model = \"f2\"").unwrap();
        let c = flags.overlay(&file);
        assert_eq!((c.model.as_deref(), c.depth), (Some("f2"), Some(4)));
    }
}
