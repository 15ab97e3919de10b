//! TOML configuration: presets, hardware constants, and experiment specs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::actuation::{self, LinearActuatorModel, ServoModel};
use crate::error::{Error, Result};
use crate::gait::{self, GaitParams, GaitTrajectory, LegSchedule, TrajectoryOptions};
use crate::kinematics::{BodyGeometry, MorphologyConfig};
use crate::simulator::{self, Environment, LoadModel, SimSetup};
use crate::spline;

/// The configuration shipped with the binary.
pub const DEFAULT_CONFIG: &str = include_str!("../config/default.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySettings {
    pub tangents: String,
    pub timing: String,
    pub schedule: LegSchedule,
}

impl Default for TrajectorySettings {
    fn default() -> Self {
        Self {
            tangents: "catmull-rom".into(),
            timing: "equal-time".into(),
            schedule: gait::leg_schedule(),
        }
    }
}

/// One (morphology, gait, environment, voltage) cell of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub morphology: String,
    pub gait: String,
    pub environment: String,
    pub voltage: f64,
    pub replicates: usize,
}

impl CellSpec {
    pub fn label(&self) -> String {
        format!(
            "{}/{}/{}/{}V",
            self.morphology, self.gait, self.environment, self.voltage
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Evaluation protocol name (`lab` or `field`).
    pub protocol: String,
    #[serde(default)]
    pub base_seed: u64,
    pub cells: Vec<CellSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub morphologies: BTreeMap<String, MorphologyConfig>,
    #[serde(default)]
    pub gaits: BTreeMap<String, GaitParams>,
    #[serde(default)]
    pub environments: BTreeMap<String, Environment>,
    #[serde(default)]
    pub body: BodyGeometry,
    #[serde(default)]
    pub servo: ServoModel,
    #[serde(default)]
    pub load: LoadModel,
    #[serde(default)]
    pub actuator: LinearActuatorModel,
    #[serde(default)]
    pub trajectory: TrajectorySettings,
    #[serde(default)]
    pub experiments: BTreeMap<String, ExperimentSpec>,
}

impl Config {
    /// Parses and validates `text`; `origin` labels diagnostics.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut config: Config =
            toml::from_str(text).map_err(|e| Error::Config(format!("{origin}: {e}")))?;
        for (name, env) in config.environments.iter_mut() {
            if env.name.is_empty() {
                env.name = name.clone();
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn default_config() -> Self {
        Self::parse(DEFAULT_CONFIG, "default.toml").expect("shipped config is valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.morphologies.is_empty() || self.gaits.is_empty() {
            return Err(Error::Config(
                "no presets: at least one morphology and one gait are required".into(),
            ));
        }
        for morph in self.morphologies.values() {
            morph.validate()?;
        }
        for (name, params) in &self.gaits {
            params
                .validate()
                .map_err(|e| Error::Config(format!("gait `{name}`: {e}")))?;
        }
        for env in self.environments.values() {
            env.validate()?;
        }
        actuation::speed_curves().get(&self.servo.speed_curve)?;
        spline::tangent_schemes().get(&self.trajectory.tangents)?;
        gait::swing_timings().get(&self.trajectory.timing)?;
        let protocols = simulator::protocols();
        for (name, spec) in &self.experiments {
            protocols.get(&spec.protocol)?;
            if spec.cells.is_empty() {
                return Err(Error::Config(format!("experiment `{name}` has no cells")));
            }
            for cell in &spec.cells {
                self.resolve(&self.morphologies, "morphology", &cell.morphology)?;
                self.resolve(&self.gaits, "gait", &cell.gait)?;
                self.resolve(&self.environments, "environment", &cell.environment)?;
                if cell.replicates == 0 {
                    return Err(Error::Config(format!(
                        "experiment `{name}`, cell {}: replicates must be >= 1",
                        cell.label()
                    )));
                }
                if !(cell.voltage >= 0.0) {
                    return Err(Error::Config(format!(
                        "experiment `{name}`, cell {}: voltage must be >= 0",
                        cell.label()
                    )));
                }
            }
        }
        Ok(())
    }

    fn resolve<'a, T>(&self, map: &'a BTreeMap<String, T>, kind: &'static str, name: &str) -> Result<&'a T> {
        map.get(name).ok_or_else(|| Error::UnknownName {
            kind,
            name: name.to_string(),
            candidates: map.keys().cloned().collect(),
        })
    }

    pub fn morphology(&self, name: &str) -> Result<&MorphologyConfig> {
        self.resolve(&self.morphologies, "morphology", name)
    }

    pub fn gait(&self, name: &str) -> Result<&GaitParams> {
        self.resolve(&self.gaits, "gait", name)
    }

    pub fn environment(&self, name: &str) -> Result<&Environment> {
        self.resolve(&self.environments, "environment", name)
    }

    pub fn trajectory_options(&self, ground_override: Option<f64>) -> Result<TrajectoryOptions> {
        Ok(TrajectoryOptions {
            ground_override,
            tangents: spline::tangent_schemes().get(&self.trajectory.tangents)?,
            timing: gait::swing_timings().get(&self.trajectory.timing)?,
            schedule: self.trajectory.schedule,
        })
    }

    pub fn trajectory(&self, gait: &str, morphology: &str) -> Result<GaitTrajectory> {
        GaitTrajectory::with_options(
            *self.gait(gait)?,
            self.morphology(morphology)?,
            self.trajectory_options(None)?,
        )
    }

    /// Simulation setup for one cell using this config's hardware constants.
    pub fn setup(&self, cell: &CellSpec) -> Result<SimSetup> {
        let trajectory = self.trajectory(&cell.gait, &cell.morphology)?;
        let mut setup = SimSetup::new(trajectory, self.environment(&cell.environment)?.clone(), cell.voltage)?;
        setup.speed_curve = actuation::speed_curves().get(&self.servo.speed_curve)?;
        setup.servo = self.servo.clone();
        setup.dt = self.servo.step_dt();
        setup.body = self.body;
        setup.load = self.load.clone();
        Ok(setup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_config_matches_built_in_presets() {
        let c = Config::default_config();
        assert_eq!(c.morphologies["short"], MorphologyConfig::SHORT);
        assert_eq!(c.morphologies["tall"], MorphologyConfig::TALL);
        assert_eq!(c.gaits["base"], GaitParams::BASE);
        assert_eq!(c.gaits["extended"], GaitParams::EXTENDED);
        assert_eq!(c.environments["lab"], Environment::lab());
        assert_eq!(c.environments["garage"], Environment::garage());
        assert_eq!(c.environments["footpath"], Environment::footpath());
        assert_eq!(c.servo, ServoModel::default());
        assert_eq!(c.load, LoadModel::default());
        assert_eq!(c.actuator, LinearActuatorModel::default());
        assert_eq!(c.trajectory, TrajectorySettings::default());
    }

    #[test]
    fn shipped_experiments_have_expected_replicate_counts() {
        let c = Config::default_config();
        let counts: Vec<(String, usize)> = c
            .experiments
            .iter()
            .map(|(k, v)| (k.clone(), v.cells.iter().map(|c| c.replicates).sum()))
            .collect();
        assert_eq!(
            counts,
            vec![
                ("garage".to_string(), 6),
                ("lab-10v".to_string(), 30),
                ("lab-15v".to_string(), 30),
                ("outside".to_string(), 9)
            ]
        );
    }

    #[test]
    fn empty_config_has_no_presets() {
        let err = Config::parse("", "empty").unwrap_err();
        assert!(err.to_string().contains("no presets"));
    }

    #[test]
    fn unknown_key_reports_location() {
        let text = format!("{DEFAULT_CONFIG}\n[servo_extra]\nx = 1\n");
        let err = Config::parse(&text, "cfg.toml").unwrap_err().to_string();
        assert!(err.contains("cfg.toml") && err.contains("servo_extra") && err.contains("line"), "{err}");
    }

    #[test]
    fn unresolved_cell_names_list_candidates() {
        let text = DEFAULT_CONFIG.replacen("morphology = \"short\"", "morphology = \"giant\"", 1);
        let err = Config::parse(&text, "cfg").unwrap_err().to_string();
        assert!(err.contains("giant") && err.contains("short") && err.contains("tall"), "{err}");
    }
}
