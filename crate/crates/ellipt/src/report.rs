//! `report run`: config loading, the φ source, and the combined report.

use std::path::{Path, PathBuf};

use ellipt_core::associator::{self, AssociatorSeries, GaugeRule, SolverConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::checks::{self, CheckResult};
use crate::error::{CliError, Result};
use crate::json;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub checks: Vec<Suite>,
    #[serde(default)]
    pub phi: PhiSource,
    #[serde(default)]
    pub associator: AssociatorConfig,
    #[serde(default)]
    pub elliptic: SuiteDegree,
    #[serde(default)]
    pub diagrams: DiagramConfig,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Associator,
    Elliptic,
    UMap,
    RestrictedIso,
    ChainExpansion,
    Normalizers,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq, Default)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSource {
    /// Solve at the larger of the associator and elliptic degrees.
    #[default]
    Solve,
    File {
        path: PathBuf,
    },
    Trivial,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AssociatorConfig {
    #[serde(default = "four")]
    pub max_degree: usize,
    #[serde(default = "yes")]
    pub even: bool,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SuiteDegree {
    #[serde(default = "four")]
    pub max_degree: usize,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DiagramConfig {
    /// Degree bound for two-strand checks.
    #[serde(default = "four")]
    pub max_degree: usize,
    /// Degree bound for three-strand checks.
    #[serde(default = "three")]
    pub max_degree_three_strands: usize,
    #[serde(default = "hundred")]
    pub pairs: usize,
    #[serde(default)]
    pub seed: u64,
}

fn four() -> usize {
    4
}
fn three() -> usize {
    3
}
fn hundred() -> usize {
    100
}
fn yes() -> bool {
    true
}

impl Default for AssociatorConfig {
    fn default() -> Self {
        AssociatorConfig { max_degree: 4, even: true }
    }
}

impl Default for SuiteDegree {
    fn default() -> Self {
        SuiteDegree { max_degree: 4 }
    }
}

impl Default for DiagramConfig {
    fn default() -> Self {
        DiagramConfig { max_degree: 4, max_degree_three_strands: 3, pairs: 100, seed: 0 }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })?;
        if value.as_object().is_some_and(|m| m.is_empty()) {
            return Err(CliError::Usage(format!("{}: config is empty", path.display())));
        }
        let mut cfg: Config =
            serde_json::from_value(value).map_err(|source| CliError::Json { path: path.into(), source })?;
        if cfg.checks.is_empty() {
            return Err(CliError::Usage(format!("{}: no checks enabled", path.display())));
        }
        if let PhiSource::File { path: p } = &mut cfg.phi {
            if p.is_relative() {
                *p = path.parent().unwrap_or(Path::new(".")).join(&*p);
            }
        }
        cfg.checks.sort();
        cfg.checks.dedup();
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PhiProvenance {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub version: String,
    pub phi: PhiProvenance,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Loads or solves φ with at least `degree` degrees.
pub fn load_phi(src: &PhiSource, degree: usize, even: bool) -> Result<(AssociatorSeries, PhiProvenance)> {
    let blank = |source: &str| PhiProvenance {
        source: source.to_string(),
        max_degree: None,
        even: None,
        file: None,
        sha256: None,
    };
    Ok(match src {
        PhiSource::Solve => {
            let phi = associator::solve(&SolverConfig { max_degree: degree, even, gauge: GaugeRule::default() })?;
            (phi, PhiProvenance { max_degree: Some(degree), even: Some(even), ..blank("solve") })
        }
        PhiSource::Trivial => (AssociatorSeries::trivial(degree), blank("trivial")),
        PhiSource::File { path } => {
            let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let phi = json::read_lie(path)?;
            if phi.truncation() < degree {
                return Err(CliError::Usage(format!(
                    "{}: phi is truncated at degree {}, {degree} needed",
                    path.display(),
                    phi.truncation()
                )));
            }
            let name = path.file_name().map(|s| s.to_string_lossy().into_owned());
            let prov = PhiProvenance { file: name, sha256: Some(sha256_hex(&bytes)), ..blank("file") };
            (AssociatorSeries::new(phi)?, prov)
        }
    })
}

pub fn run_all(cfg: &Config, timings: bool) -> Result<Report> {
    let needs_phi = cfg.checks.iter().any(|s| matches!(s, Suite::Associator | Suite::Elliptic));
    let degree = cfg.associator.max_degree.max(cfg.elliptic.max_degree);
    let (phi, provenance) = if needs_phi {
        load_phi(&cfg.phi, degree, cfg.associator.even)?
    } else {
        (
            AssociatorSeries::trivial(1),
            PhiProvenance { source: "unused".into(), max_degree: None, even: None, file: None, sha256: None },
        )
    };
    let dc = cfg.diagrams;
    let mut results = Vec::new();
    for suite in &cfg.checks {
        let start = std::time::Instant::now();
        let mut out = match suite {
            Suite::Associator => {
                checks::associator(&phi.truncate(cfg.associator.max_degree), cfg.associator.max_degree)?
            }
            Suite::Elliptic => checks::elliptic(&phi, cfg.elliptic.max_degree)?,
            Suite::UMap => vec![
                checks::u_map_relations(2, dc.max_degree)?,
                checks::u_map_relations(3, dc.max_degree)?,
                checks::u_map_multiplicative(2, dc.max_degree, dc.pairs, dc.seed)?,
                checks::u_map_multiplicative(3, dc.max_degree, dc.pairs, dc.seed)?,
            ],
            Suite::RestrictedIso => {
                vec![checks::restricted_iso(2, dc.max_degree)?, checks::restricted_iso(3, dc.max_degree_three_strands)?]
            }
            Suite::ChainExpansion => vec![checks::chain_expansion(dc.max_degree)?],
            Suite::Normalizers => checks::normalizers(dc.max_degree, dc.max_degree, dc.max_degree_three_strands)?,
        };
        let ms = start.elapsed().as_millis() as u64;
        for c in &mut out {
            c.wall_ms = if timings { c.wall_ms.or(Some(ms)) } else { None };
        }
        results.extend(out);
    }
    results.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(Report { version: VERSION.to_string(), phi: provenance, pass: results.iter().all(|c| c.pass), checks: results })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, text: &str) -> PathBuf {
        let p = dir.join("cfg.json");
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn empty_config_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        for text in ["{}", r#"{"checks": []}"#] {
            let err = Config::load(&write(dir.path(), text)).unwrap_err();
            assert!(matches!(err, CliError::Usage(_)), "{err}");
            assert_eq!(err.exit_code(), 2);
        }
        let err = Config::load(&write(dir.path(), r#"{"checks": ["chain_expansion"], "bogus": 1}"#)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn defaults_and_relative_phi_path() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = Config::load(&write(
            dir.path(),
            r#"{"checks": ["elliptic", "associator", "elliptic"], "phi": {"source": "file", "path": "phi.json"}}"#,
        ))
        .unwrap();
        assert_eq!(cfg.checks, vec![Suite::Associator, Suite::Elliptic]);
        assert_eq!(cfg.phi, PhiSource::File { path: dir.path().join("phi.json") });
        assert_eq!(cfg.diagrams, DiagramConfig::default());
    }

    #[test]
    fn small_report_is_sorted_and_deterministic() {
        let cfg = Config {
            checks: vec![Suite::ChainExpansion, Suite::Associator],
            phi: PhiSource::Solve,
            associator: AssociatorConfig { max_degree: 3, even: true },
            elliptic: SuiteDegree { max_degree: 3 },
            diagrams: DiagramConfig { max_degree: 2, ..Default::default() },
        };
        let a = run_all(&cfg, false).unwrap();
        let names: Vec<&str> = a.checks.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert!(a.pass, "{:?}", a.failing());
        assert_eq!(json::to_text(&a), json::to_text(&run_all(&cfg, false).unwrap()));
    }
}
