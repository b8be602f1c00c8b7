//! JSON configuration for `simulate`.

use diagstab::simulation::{BlockSpec, ExternalInput, InterconnectionSpec, SectorShape, Topology};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyConfig {
    Cyclic,
    Cascade,
    Popov,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeConfig {
    Linear,
    Softsat,
    Hill { p: u32, offset: f64 },
    Table(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Linear,
    OfpCubic,
    Sector,
}

// Flat rather than an internally tagged enum: serde buffers tagged content,
// which would strip the field name from type errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockConfig {
    pub kind: BlockKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Zero,
    Step,
    Sin,
    Samples,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub kind: InputKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl InputConfig {
    pub fn zero() -> Self {
        Self { kind: InputKind::Zero, height: None, amplitude: None, frequency: None, dt: None, values: None }
    }

    fn to_input(&self) -> Result<ExternalInput<f64>, ConfigError> {
        let need = |v: Option<f64>, field: &str| v.ok_or_else(|| err(format!("input.{field}"), "missing field"));
        Ok(match self.kind {
            InputKind::Zero => ExternalInput::Zero,
            InputKind::Step => ExternalInput::Step { height: need(self.height, "height")? },
            InputKind::Sin => ExternalInput::Sinusoid {
                amplitude: need(self.amplitude, "amplitude")?,
                frequency: need(self.frequency, "frequency")?,
            },
            InputKind::Samples => {
                let dt = need(self.dt, "dt")?;
                if !(dt > 0.0) {
                    return Err(err("input.dt", "must be positive"));
                }
                let values = self.values.clone().ok_or_else(|| err("input.values", "missing field"))?;
                if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                    return Err(err(format!("input.values[{i}]"), "must be finite"));
                }
                ExternalInput::Samples { dt, values }
            }
        })
    }
}

fn zero_input() -> InputConfig {
    InputConfig::zero()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub topology: TopologyConfig,
    pub blocks: Vec<BlockConfig>,
    pub x0: Vec<f64>,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "zero_input")]
    pub input: InputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// Validation failure pinned to a field path such as `blocks[1].tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn err(path: impl Into<String>, message: impl std::fmt::Display) -> ConfigError {
    ConfigError { path: path.into(), message: message.to_string() }
}

pub fn parse(text: &str) -> Result<SimConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        err(path, e.into_inner())
    })
}

impl SimConfig {
    /// Checks every field and builds the core interconnection.
    pub fn validate(&self) -> Result<InterconnectionSpec<f64>, ConfigError> {
        if self.blocks.is_empty() {
            return Err(err("blocks", "at least one block required"));
        }
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| b.to_spec().map_err(|(field, msg)| err(format!("blocks[{i}]{field}"), msg)))
            .collect::<Result<Vec<_>, _>>()?;
        let topology = match self.topology {
            TopologyConfig::Cyclic => Topology::Cyclic,
            TopologyConfig::Cascade => Topology::Cascade,
            TopologyConfig::Popov => Topology::Popov,
        };
        let input = self.input.to_input()?;
        let mut spec = InterconnectionSpec::new(topology, blocks).with_input(input);
        if let Some(w) = &self.weights {
            spec = spec.with_weights(w.clone());
        }
        spec.validate().map_err(|e| {
            let path = match e {
                diagstab::Error::DimensionMismatch { .. } | diagstab::Error::NonPositive { .. } => "weights",
                _ => "blocks",
            };
            err(path, e)
        })?;
        let expected = spec.dynamic_count();
        if self.x0.len() != expected {
            return Err(err(
                "x0",
                format!("expected {expected} entries (one per dynamic block), got {}", self.x0.len()),
            ));
        }
        if let Some(i) = self.x0.iter().position(|x| !x.is_finite()) {
            return Err(err(format!("x0[{i}]"), "must be finite"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(err("dt", "must be positive"));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(err("t_end", "must be positive"));
        }
        Ok(spec)
    }
}

impl BlockConfig {
    fn to_spec(&self) -> Result<BlockSpec<f64>, (String, String)> {
        use diagstab::Error;
        let need = |v: Option<f64>, field: &str| v.ok_or_else(|| (format!(".{field}"), "missing field".to_string()));
        let fail = |field: &str, e: Error| (format!(".{field}"), e.to_string());
        match self.kind {
            BlockKind::Linear => {
                let (tau, gamma) = (need(self.tau, "tau")?, need(self.gamma, "gamma")?);
                BlockSpec::linear(tau, gamma).map_err(|e| match e {
                    Error::NonPositive { name: "tau", .. } => fail("tau", e),
                    _ => fail("gamma", e),
                })
            }
            BlockKind::OfpCubic => {
                let (a, gamma) = (need(self.a, "a")?, need(self.gamma, "gamma")?);
                BlockSpec::ofp_cubic(gamma, a).map_err(|e| match e {
                    Error::InvalidSpec(_) => fail("a", e),
                    _ => fail("gamma", e),
                })
            }
            BlockKind::Sector => {
                let param = need(self.param, "param")?;
                let shape = match self.shape.as_ref().ok_or_else(|| (".shape".to_string(), "missing field".to_string()))? {
                    ShapeConfig::Linear => SectorShape::Linear,
                    ShapeConfig::Softsat => SectorShape::SoftSat,
                    ShapeConfig::Hill { p, offset } => SectorShape::ShiftedHill { p: *p, offset: *offset },
                    ShapeConfig::Table(rows) => SectorShape::Table(rows.iter().map(|r| (r[0], r[1])).collect()),
                };
                BlockSpec::sector(param, shape).map_err(|e| match e {
                    Error::NonPositive { .. } => fail("param", e),
                    _ => fail("shape", e),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"{
        "topology": "cyclic",
        "blocks": [
            {"kind": "linear", "tau": 1.0, "gamma": 1.9},
            {"kind": "linear", "tau": 1.0, "gamma": 1.9},
            {"kind": "linear", "tau": 1.0, "gamma": 1.9}
        ],
        "x0": [1.0, 1.0, 1.0],
        "dt": 0.01,
        "t_end": 50.0
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = parse(FIG1).unwrap();
        assert_eq!(cfg.input, InputConfig::zero());
        let v = cfg.validate().unwrap();
        assert_eq!(v.blocks.len(), 3);
    }

    #[test]
    fn round_trip_is_idempotent() {
        let text = r#"{
            "topology": "popov",
            "blocks": [
                {"kind": "ofp_cubic", "a": 0.5, "gamma": 1.0},
                {"kind": "sector", "shape": {"table": [[-1, -1], [0, 0], [2, 1]]}, "param": 1.0},
                {"kind": "linear", "tau": 0.5, "gamma": 2.0},
                {"kind": "sector", "shape": {"hill": {"p": 2, "offset": 1.0}}, "param": 1.0}
            ],
            "x0": [0.1, -0.2],
            "dt": 0.01,
            "t_end": 5.0,
            "input": {"kind": "sin", "amplitude": 0.5, "frequency": 2.0}
        }"#;
        let once = parse(text).unwrap();
        let again = parse(&serde_json::to_string(&once).unwrap()).unwrap();
        assert_eq!(once, again);
        assert_eq!(once.validate().unwrap(), again.validate().unwrap());
    }

    #[test]
    fn empty_blocks_rejected() {
        let cfg = parse(r#"{"topology":"cyclic","blocks":[],"x0":[],"dt":0.01,"t_end":1}"#).unwrap();
        let e = cfg.validate().unwrap_err();
        assert_eq!(e.path, "blocks");
        assert_eq!(e.message, "at least one block required");
    }

    #[test]
    fn errors_name_the_field() {
        let cfg = parse(
            r#"{"topology":"cyclic","blocks":[{"kind":"linear","tau":1,"gamma":1},{"kind":"linear","tau":0,"gamma":1}],"x0":[0,0],"dt":0.01,"t_end":1}"#,
        )
        .unwrap();
        assert_eq!(cfg.validate().unwrap_err().path, "blocks[1].tau");

        let cfg = parse(
            r#"{"topology":"cyclic","blocks":[{"kind":"linear","tau":1,"gamma":1}],"x0":[0,0],"dt":0.01,"t_end":1}"#,
        )
        .unwrap();
        assert_eq!(cfg.validate().unwrap_err().path, "x0");

        let e = parse(r#"{"topology":"cyclic","blocks":[{"kind":"linear","tau":1,"gamma":"x"}],"x0":[0],"dt":0.01,"t_end":1}"#)
            .unwrap_err();
        assert_eq!(e.path, "blocks[0].gamma");

        let cfg = parse(
            r#"{"topology":"cyclic","blocks":[{"kind":"linear","tau":1}],"x0":[0],"dt":0.01,"t_end":1}"#,
        )
        .unwrap();
        assert_eq!(cfg.validate().unwrap_err().path, "blocks[0].gamma");

        let e = parse(r#"{"topology":"ring","blocks":[],"x0":[],"dt":0.01,"t_end":1}"#).unwrap_err();
        assert_eq!(e.path, "topology");
    }
}
