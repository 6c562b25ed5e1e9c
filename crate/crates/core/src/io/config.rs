//! JSON experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curves::CurveLabel;
use crate::error::{Error, Result};
use crate::greens::EndpointRule;
use crate::lattice::{DisorderTarget, ParamBlock};
use crate::winding::Ray;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Spectrum,
    Curves,
    WindingMap,
    GreensSweep,
    FreqSweep,
    AnalyticCompare,
    Disorder,
    Fig1,
    Fig2,
    Fig3,
    #[serde(rename = "figS1")]
    FigS1,
}

impl Task {
    pub const ALL: [Task; 11] = [
        Task::Spectrum,
        Task::Curves,
        Task::WindingMap,
        Task::GreensSweep,
        Task::FreqSweep,
        Task::AnalyticCompare,
        Task::Disorder,
        Task::Fig1,
        Task::Fig2,
        Task::Fig3,
        Task::FigS1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Spectrum => "spectrum",
            Task::Curves => "curves",
            Task::WindingMap => "winding-map",
            Task::GreensSweep => "greens-sweep",
            Task::FreqSweep => "freq-sweep",
            Task::AnalyticCompare => "analytic-compare",
            Task::Disorder => "disorder",
            Task::Fig1 => "fig1",
            Task::Fig2 => "fig2",
            Task::Fig3 => "fig3",
            Task::FigS1 => "figS1",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown task `{s}`")))
    }
}

/// A complex number written as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair(pub C64);

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        super::complex_pair::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Pair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        super::complex_pair::deserialize(d).map(Pair)
    }
}

/// A 1-based site index, or `"N"` for the last site of whatever chain the
/// task is run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteRef {
    Index(usize),
    Last,
}

impl SiteRef {
    pub fn resolve(self, n_sites: usize) -> Result<usize> {
        match self {
            SiteRef::Last => Ok(n_sites),
            SiteRef::Index(i) if (1..=n_sites).contains(&i) => Ok(i),
            SiteRef::Index(i) => Err(Error::SiteOutOfRange { site: i, n_sites }),
        }
    }
}

impl Serialize for SiteRef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SiteRef::Index(i) => s.serialize_u64(*i as u64),
            SiteRef::Last => s.serialize_str("N"),
        }
    }
}

impl<'de> Deserialize<'de> for SiteRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Index(i) => Ok(SiteRef::Index(i)),
            Raw::Name(s) if s == "N" => Ok(SiteRef::Last),
            Raw::Name(s) => Err(serde::de::Error::custom(format!(
                "site must be a positive integer or \"N\", got \"{s}\""
            ))),
        }
    }
}

/// Rectangular grid of frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
}

impl Grid {
    /// Row-major points, imaginary part outermost.
    pub fn points(&self) -> Vec<C64> {
        let axis = |lim: [f64; 2], n: usize| -> Vec<f64> {
            if n == 1 {
                return vec![lim[0]];
            }
            (0..n)
                .map(|j| lim[0] + (lim[1] - lim[0]) * j as f64 / (n - 1) as f64)
                .collect()
        };
        let (xs, ys) = (axis(self.re, self.n_re), axis(self.im, self.n_im));
        ys.iter()
            .flat_map(|&y| xs.iter().map(move |&x| C64::new(x, y)))
            .collect()
    }
}

/// Task options. Every field is optional; a task ignores the fields it does
/// not use and fills the rest from its defaults (see `respond <task> --help`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omegas: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Ray>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<EndpointRule>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<SiteRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<SiteRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_range: Option<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contours: Option<Vec<CurveLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<DisorderTarget>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single_trial: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cond_limit: Option<f64>,
}

impl TaskOptions {
    pub fn is_empty(&self) -> bool {
        *self == TaskOptions::default()
    }

    pub fn omega_list(&self) -> Option<Vec<C64>> {
        self.omegas.as_ref().map(|v| v.iter().map(|p| p.0).collect())
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub params: ParamBlock,
    pub task: Task,
    #[serde(default, skip_serializing_if = "TaskOptions::is_empty")]
    pub options: TaskOptions,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks everything that can be checked without running the task.
    pub fn validate(&self) -> Result<()> {
        self.params.params().validate()?;
        let o = &self.options;
        if let Some(sizes) = &o.sizes {
            if sizes.is_empty() {
                return Err(Error::InvalidArgument("sizes is empty".into()));
            }
            if let Some(&n) = sizes.iter().find(|&&n| n < 3) {
                return Err(Error::TooFewSites(n));
            }
        }
        if let Some(w) = &o.omegas {
            if w.is_empty() || w.iter().any(|p| !p.0.is_finite()) {
                return Err(Error::InvalidArgument(
                    "omegas must be a nonempty list of finite [re, im]".into(),
                ));
            }
        }
        if let Some(ray) = &o.ray {
            if ray.steps == 0 || !(ray.t_max > 0.0) || ray.direction.norm() == 0.0 {
                return Err(Error::InvalidArgument(
                    "ray needs steps >= 1, t_max > 0, nonzero direction".into(),
                ));
            }
        }
        if o.rules.as_ref().is_some_and(|r| r.is_empty()) {
            return Err(Error::InvalidArgument("rules is empty".into()));
        }
        if let Some(c) = &o.contours {
            if c.is_empty() {
                return Err(Error::InvalidArgument("contours is empty".into()));
            }
            if c.iter()
                .any(|l| matches!(l, CurveLabel::Fgbz1 | CurveLabel::Fgbz2))
            {
                return Err(Error::InvalidArgument(
                    "contours must be closed curves, not FGBZ point sets".into(),
                ));
            }
        }
        if o.targets.as_ref().is_some_and(|c| c.is_empty()) {
            return Err(Error::InvalidArgument("targets is empty".into()));
        }
        for s in [o.k, o.l].into_iter().flatten() {
            if s == SiteRef::Index(0) {
                return Err(Error::SiteOutOfRange {
                    site: 0,
                    n_sites: self.params.n_sites,
                });
            }
        }
        if o.samples.is_some_and(|m| m < crate::curves::MIN_SAMPLES) {
            return Err(Error::InvalidArgument(format!(
                "samples must be at least {}",
                crate::curves::MIN_SAMPLES
            )));
        }
        if o.quadrature_samples
            .is_some_and(|m| m < crate::greens::analytic::MIN_QUADRATURE_SAMPLES)
        {
            return Err(Error::InvalidArgument(format!(
                "quadrature_samples must be at least {}",
                crate::greens::analytic::MIN_QUADRATURE_SAMPLES
            )));
        }
        if o.q_range.is_some_and(|[a, b]| a > b) {
            return Err(Error::InvalidArgument(
                "q_range must be [low, high] with low <= high".into(),
            ));
        }
        if let Some(g) = &o.grid {
            if g.n_re == 0 || g.n_im == 0 {
                return Err(Error::InvalidArgument("grid needs n_re, n_im >= 1".into()));
            }
        }
        if o.half_width.is_some_and(|w| !(w.is_finite() && w >= 0.0)) {
            return Err(Error::InvalidArgument(
                "half_width must be finite and >= 0".into(),
            ));
        }
        if o.trials == Some(0) {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if o.cond_limit.is_some_and(|c| !(c > 1.0)) {
            return Err(Error::InvalidArgument("cond_limit must exceed 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "name": "base",
        "params": {"t1": [0.5, 0], "t2": [1, 0], "delta": [1e-5, 0], "n_sites": 60, "boundary": "pobc"},
        "task": "fig1"
    }"#;

    #[test]
    fn minimal_config() {
        let c = ExperimentConfig::from_json(BASE).unwrap();
        assert_eq!(c.task, Task::Fig1);
        assert_eq!(c.output_dir, PathBuf::from("out"));
        assert!(c.options.is_empty());
        c.validate().unwrap();
    }

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::from_json(BASE).unwrap();
        c.options.omegas = Some(vec![Pair(C64::new(0.0, 0.1)), Pair(C64::new(0.3, -0.2))]);
        c.options.l = Some(SiteRef::Last);
        c.options.k = Some(SiteRef::Index(7));
        c.options.rules = Some(vec![EndpointRule::FirstLast]);
        c.options.ray = Some(Ray::imaginary_axis(0.5, 100));
        c.options.targets = Some(vec![DisorderTarget::Onsite]);
        let back = ExperimentConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_input() {
        let unknown = BASE.replace("\"task\"", "\"extra\": 1, \"task\"");
        assert!(ExperimentConfig::from_json(&unknown).is_err());
        let boundary = BASE.replace("pobc", "periodic");
        assert!(ExperimentConfig::from_json(&boundary).is_err());
        let task = BASE.replace("fig1", "fig9");
        assert!(ExperimentConfig::from_json(&task).is_err());
        let site = BASE.replace("\"task\"", "\"options\": {\"l\": \"M\"}, \"task\"");
        assert!(ExperimentConfig::from_json(&site).is_err());
        let order = BASE.replace("[0.5, 0]", "[2, 0]");
        assert!(ExperimentConfig::from_json(&order).unwrap().validate().is_err());
    }

    #[test]
    fn site_refs() {
        assert_eq!(SiteRef::Last.resolve(40).unwrap(), 40);
        assert_eq!(SiteRef::Index(3).resolve(40).unwrap(), 3);
        assert!(SiteRef::Index(41).resolve(40).is_err());
    }

    #[test]
    fn task_names() {
        for t in Task::ALL {
            assert_eq!(t.as_str().parse::<Task>().unwrap(), t);
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.as_str()));
        }
    }

    #[test]
    fn grid_points() {
        let g = Grid {
            re: [-1.0, 1.0],
            im: [0.0, 0.5],
            n_re: 3,
            n_im: 2,
        };
        let pts = g.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], C64::new(-1.0, 0.0));
        assert_eq!(pts[5], C64::new(1.0, 0.5));
    }
}
