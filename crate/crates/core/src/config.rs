//! JSON run configuration shared by the CLI subcommands.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::clcst::{BSelection, Path, Sampling, ThetaList, UList};
use crate::clct::LCTParams;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::windows::{Normalization, WindowKind, WindowSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    #[serde(flatten)]
    pub kind: WindowKind,
    #[serde(default = "default_normalization")]
    pub normalization: Normalization,
}

fn default_normalization() -> Normalization {
    Normalization::UnitIntegral
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UListConfig {
    /// ±{1…N/4}·Δw per axis.
    Default,
    /// ±{1…count}·step per axis; step defaults to Δw.
    Symmetric { count: usize, step: Option<f64> },
    /// Every nonzero-component frequency bin.
    FrequencyLattice,
    Explicit { points: Vec<Vec<f64>>, weight: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub volume: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub spectrogram: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub grid: GridConfig,
    #[serde(rename = "M")]
    pub lct: LCTParams,
    pub window: WindowConfig,
    pub u_list: UListConfig,
    pub theta_list: Vec<f64>,
    #[serde(default = "default_b")]
    pub b: BSelection,
    pub path: Path,
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_b() -> BSelection {
    BSelection::Lattice
}

impl RunConfig {
    /// Default grid, M = (1, 1, 0, 1), unit-integral Gaussian σ = 1.
    pub fn default_for(n: usize) -> Result<Self> {
        let spec = GridSpec::default_for(n)?;
        Ok(RunConfig {
            n,
            grid: GridConfig {
                half_width: spec.half_width,
                samples: spec.samples,
            },
            lct: LCTParams::new(1.0, 1.0, 0.0, 1.0)?,
            window: WindowConfig {
                kind: WindowKind::Gaussian { sigma: 1.0 },
                normalization: Normalization::UnitIntegral,
            },
            u_list: UListConfig::Default,
            theta_list: vec![0.0, PI / 4.0, PI / 2.0],
            b: BSelection::Lattice,
            path: Path::ThreeStep,
            strict: false,
            output: OutputConfig::default(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.n) {
            return Err(Error::UnsupportedDimension {
                n: self.n,
                reason: "the command line supports n = 2 and n = 3".into(),
            });
        }
        self.grid_spec()?;
        LCTParams::new(self.lct.a, self.lct.b, self.lct.c, self.lct.d)?;
        if self.lct.b == 0.0 {
            return Err(Error::DegenerateB);
        }
        self.window_spec()?;
        self.sampling()?;
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.n, self.grid.half_width, self.grid.samples)
    }

    pub fn algebra(&self) -> Result<Arc<Algebra>> {
        Algebra::for_transforms(self.n)
    }

    pub fn window_spec(&self) -> Result<WindowSpec> {
        WindowSpec {
            kind: self.window.kind,
            normalization: self.window.normalization,
            n: self.n,
        }
        .validated()
    }

    pub fn u_list(&self) -> Result<UList> {
        let spec = self.grid_spec()?;
        match &self.u_list {
            UListConfig::Default => UList::default_for(&spec),
            UListConfig::Symmetric { count, step } => {
                UList::symmetric(self.n, step.unwrap_or(spec.dw()), *count)
            }
            UListConfig::FrequencyLattice => UList::frequency_lattice(&spec),
            UListConfig::Explicit { points, weight } => {
                if points.iter().any(|p| p.len() != self.n) {
                    return Err(Error::InvalidParams(format!("u points must have {} components", self.n)));
                }
                UList::new(points.clone(), *weight)
            }
        }
    }

    pub fn sampling(&self) -> Result<Sampling> {
        let spec = self.grid_spec()?;
        let theta = if self.theta_list == [0.0, PI / 4.0, PI / 2.0] {
            ThetaList::default_list()
        } else {
            ThetaList::new(self.theta_list.clone())?
        };
        if self.path != Path::Direct {
            self.b.lattice_indices(&spec)?;
        }
        Ok(Sampling {
            b: self.b.clone(),
            u: self.u_list()?,
            theta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_json() {
        for n in [2, 3] {
            let c = RunConfig::default_for(n).unwrap();
            c.validate().unwrap();
            let text = serde_json::to_string_pretty(&c).unwrap();
            assert_eq!(RunConfig::from_json(&text).unwrap(), c);
        }
    }

    #[test]
    fn parses_hand_written_document() {
        let text = r#"{
            "n": 2,
            "grid": {"L": 6, "N": 64},
            "M": {"a": 0.5, "b": 2, "c": -0.375, "d": 0.5},
            "window": {"kind": "dog", "lambda": 0.5, "normalization": "raw"},
            "u_list": {"kind": "symmetric", "count": 4},
            "theta_list": [1.5707963267948966],
            "path": "direct",
            "output": {"volume": "out.clcg"}
        }"#;
        let c = RunConfig::from_json(text).unwrap();
        assert_eq!(c.sampling().unwrap().u.len(), 64);
        assert_eq!(c.window_spec().unwrap().kind, WindowKind::Dog { lambda: 0.5 });
    }

    #[test]
    fn rejects_invalid_settings() {
        let mut c = RunConfig::default_for(2).unwrap();
        c.lct.c = 1.0;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default_for(2).unwrap();
        c.grid.samples = 63;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default_for(2).unwrap();
        c.window.kind = WindowKind::Dog { lambda: 1.2 };
        assert!(c.validate().is_err());

        let mut c = RunConfig::default_for(2).unwrap();
        c.u_list = UListConfig::Explicit {
            points: vec![vec![1.0, 0.0]],
            weight: 1.0,
        };
        assert!(c.validate().is_err());

        // unit-integral DOG is impossible in two dimensions
        let mut c = RunConfig::default_for(2).unwrap();
        c.window.kind = WindowKind::Dog { lambda: 0.5 };
        assert!(matches!(c.validate(), Err(Error::ZeroIntegral(_))));

        let mut c = RunConfig::default_for(2).unwrap();
        c.n = 4;
        assert!(c.validate().is_err());

        assert!(RunConfig::from_json(r#"{"n": 2, "bogus": 1}"#).is_err());
    }
}
