//! Optional TOML config file. Command-line flags take precedence over every
//! value read here.

use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use sbdd_core::diffsched::ScheduleKind;
use sbdd_core::ibstats::InteractionThresholds;
use sbdd_core::scaffold::Task;

use crate::UsageError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub energy: EnergySection,
    pub refine: RefineSection,
    pub analyze: AnalyzeSection,
    pub interactions: Option<InteractionThresholds>,
    pub schedule: ScheduleSection,
    pub gsnr: GsnrSection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergySection {
    pub weights: Option<[f64; 5]>,
    /// Pocket clip radius (Å) about the ligand heavy-atom centroid.
    pub clip_radius: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RefineSection {
    pub epochs: Option<usize>,
    pub step: Option<f64>,
    pub eps: Option<f64>,
    pub central: Option<bool>,
    pub memory: Option<usize>,
    pub gradient_tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeSection {
    pub tasks: Option<Vec<Task>>,
    pub edge_threshold: Option<f64>,
    pub neighbors: Option<usize>,
    pub gridsize: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleSection {
    pub steps: Option<usize>,
    pub kind: Option<ScheduleKind>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GsnrSection {
    pub window: Option<usize>,
    pub rolling: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text)
            .map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
    }
}

/// Flag value if given, else config value, else the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn positive(name: &str, v: f64) -> Result<f64, UsageError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(UsageError(format!(
            "{name} must be a positive finite number, got {v}"
        )))
    }
}

pub fn at_least(name: &str, v: usize, min: usize) -> Result<usize, UsageError> {
    if v >= min {
        Ok(v)
    } else {
        Err(UsageError(format!(
            "{name} must be at least {min}, got {v}"
        )))
    }
}

pub fn weights(flag: Option<Vec<f64>>, file: Option<[f64; 5]>) -> Result<[f64; 5], UsageError> {
    let w = match flag {
        Some(v) => <[f64; 5]>::try_from(v.as_slice()).map_err(|_| {
            UsageError(format!("--weights takes exactly 5 values, got {}", v.len()))
        })?,
        None => file.unwrap_or(sbdd_core::energy::DEFAULT_WEIGHTS),
    };
    if w.iter().any(|x| !x.is_finite()) {
        return Err(UsageError("weights must be finite".into()));
    }
    Ok(w)
}

pub fn thresholds(
    file: Option<InteractionThresholds>,
) -> Result<InteractionThresholds, UsageError> {
    let th = file.unwrap_or_default();
    for (name, v) in [
        ("hydrophobic", th.hydrophobic),
        ("hydrogen_bond", th.hydrogen_bond),
        ("water_ligand", th.water_ligand),
        ("water_receptor", th.water_receptor),
        ("pi_pi", th.pi_pi),
        ("pi_cation", th.pi_cation),
        ("halogen", th.halogen),
        ("metal", th.metal),
    ] {
        positive(&format!("interactions.{name}"), v)?;
    }
    Ok(th)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_parse() {
        let c: FileConfig = toml::from_str(
            r#"
seed = 7
[refine]
epochs = 20
central = true
[energy]
weights = [1.0, 0.0, 0.0, 0.0, 0.0]
[analyze]
tasks = ["SH", "DN"]
[interactions]
hydrophobic = 4.5
[schedule]
steps = 10
kind = { kind = "cosine", s = 0.008 }
"#,
        )
        .unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.refine.epochs, Some(20));
        assert_eq!(
            c.analyze.tasks,
            Some(vec![Task::ScaffoldHopping, Task::DeNovo])
        );
        assert_eq!(c.interactions.unwrap().hydrophobic, 4.5);
        assert_eq!(c.interactions.unwrap().hydrogen_bond, 3.5);
        assert_eq!(c.schedule.kind, Some(ScheduleKind::Cosine { s: 0.008 }));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("[refine]\nepoch = 3").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        assert_eq!(pick(Some(3), Some(5), 1), 3);
        assert_eq!(pick(None, Some(5), 1), 5);
        assert_eq!(pick::<usize>(None, None, 1), 1);
        assert!(weights(Some(vec![1.0; 4]), None).is_err());
    }
}
