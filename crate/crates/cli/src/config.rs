//! The JSON experiment configuration and the command-line space selectors.

use std::collections::HashSet;
use std::path::PathBuf;

use dke_core::experiments::SpaceSpec;
use dke_core::mmspace::MetricMode;
use dke_core::transforms::TransformKind;
use dke_core::AbStandardness;
use serde::{Deserialize, Serialize};

use crate::drivers::{default_dirs, default_maxdim, KindSelection, NamedSpace, TransformSettings};

/// A malformed flag or configuration file. Maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Output directory; `--out` takes precedence.
    #[serde(default)]
    pub out: Option<PathBuf>,
    pub spaces: Vec<NamedSpace>,
    #[serde(default)]
    pub sample: Option<Selection>,
    #[serde(default)]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default)]
    pub embed: Option<EmbedSection>,
    #[serde(default)]
    pub hausdorff: Option<HausdorffSection>,
    #[serde(default)]
    pub bounds: Option<BoundsSection>,
    #[serde(default)]
    pub transform: Option<TransformSection>,
    #[serde(default)]
    pub compare: Option<CompareSection>,
}

/// Names of the spaces a section applies to; all spaces when absent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Selection {
    #[serde(default)]
    pub spaces: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub spaces: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedSection {
    pub k: usize,
    #[serde(default = "default_bins")]
    pub bins: usize,
    /// 1-based eigenfunction indices to histogram.
    #[serde(default = "default_eigenfunctions")]
    pub eigenfunctions: Vec<usize>,
    #[serde(default)]
    pub spaces: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HausdorffSection {
    pub ks: Vec<usize>,
    #[serde(default)]
    pub spaces: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub ks: Vec<usize>,
    /// `[a, b, r]`; estimated from each space when absent.
    #[serde(default)]
    pub ab: Option<[f64; 3]>,
    #[serde(default)]
    pub spaces: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSection {
    pub k: usize,
    pub rips_scale: f64,
    #[serde(default)]
    pub embedded_scale: Option<f64>,
    #[serde(default = "default_dirs")]
    pub dirs: usize,
    pub direction_seed: u64,
    #[serde(default = "default_maxdim")]
    pub maxdim: usize,
    #[serde(default)]
    pub kinds: Option<Vec<TransformKind>>,
    #[serde(default)]
    pub spaces: Option<Vec<String>>,
}

impl TransformSection {
    pub fn settings(&self) -> TransformSettings {
        TransformSettings {
            k: self.k,
            rips_scale: self.rips_scale,
            embedded_scale: self.embedded_scale,
            dirs: self.dirs,
            direction_seed: self.direction_seed,
            maxdim: self.maxdim,
            kinds: self.kinds.clone().unwrap_or_else(|| KindSelection::All.kinds()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    pub pairs: Vec<[String; 2]>,
    pub k: usize,
    /// When present, the embedded transforms of each pair are compared too.
    #[serde(default)]
    pub rips_scale: Option<f64>,
    #[serde(default = "default_dirs")]
    pub dirs: usize,
    #[serde(default)]
    pub direction_seed: Option<u64>,
    #[serde(default = "default_maxdim")]
    pub maxdim: usize,
}

fn default_count() -> usize {
    50
}

fn default_bins() -> usize {
    30
}

fn default_eigenfunctions() -> Vec<usize> {
    vec![10, 20]
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let mut names = HashSet::new();
        for (i, s) in self.spaces.iter().enumerate() {
            if !names.insert(s.name.as_str()) {
                return err(format!("config: spaces[{i}].name `{}` is used twice", s.name));
            }
        }
        let sections: [(&str, Option<&Option<Vec<String>>>); 6] = [
            ("sample", self.sample.as_ref().map(|s| &s.spaces)),
            ("spectrum", self.spectrum.as_ref().map(|s| &s.spaces)),
            ("embed", self.embed.as_ref().map(|s| &s.spaces)),
            ("hausdorff", self.hausdorff.as_ref().map(|s| &s.spaces)),
            ("bounds", self.bounds.as_ref().map(|s| &s.spaces)),
            ("transform", self.transform.as_ref().map(|s| &s.spaces)),
        ];
        for (section, list) in sections {
            for (i, name) in list.and_then(|l| l.as_ref()).into_iter().flatten().enumerate() {
                if !names.contains(name.as_str()) {
                    return err(format!("config: {section}.spaces[{i}] names unknown space `{name}`"));
                }
            }
        }
        if let Some(c) = &self.compare {
            for (i, pair) in c.pairs.iter().enumerate() {
                for name in pair {
                    if !names.contains(name.as_str()) {
                        return err(format!("config: compare.pairs[{i}] names unknown space `{name}`"));
                    }
                }
            }
            if c.rips_scale.is_some() && c.direction_seed.is_none() {
                return err("config: compare.direction_seed is required with compare.rips_scale");
            }
        }
        Ok(())
    }

    /// The spaces selected by `names`, in configuration order.
    pub fn select(&self, names: &Option<Vec<String>>) -> Vec<NamedSpace> {
        match names {
            None => self.spaces.clone(),
            Some(list) => self.spaces.iter().filter(|s| list.contains(&s.name)).cloned().collect(),
        }
    }

    pub fn space(&self, name: &str) -> &NamedSpace {
        self.spaces.iter().find(|s| s.name == name).expect("names are checked on parse")
    }
}

impl BoundsSection {
    pub fn standardness(&self) -> Result<Option<AbStandardness>, ConfigError> {
        self.ab
            .map(|[a, b, r]| AbStandardness::new(a, b, r).map_err(|e| ConfigError(format!("config: bounds.ab: {e}"))))
            .transpose()
    }
}

impl CompareSection {
    pub fn transform_settings(&self) -> Option<TransformSettings> {
        Some(TransformSettings {
            k: self.k,
            rips_scale: self.rips_scale?,
            embedded_scale: None,
            dirs: self.dirs,
            direction_seed: self.direction_seed?,
            maxdim: self.maxdim,
            kinds: Vec::new(),
        })
    }
}

/// Defaults a selector falls back on for parameters it does not name.
pub struct SelectorDefaults {
    pub n: usize,
    pub seed: u64,
    pub metric: MetricMode,
}

/// Parses `sphere:2`, `sphere:3`, `torus`, `torus:R:r`, `lens:p:q` or
/// `file:PATH`, with an optional `@seed` suffix on sampled spaces.
pub fn parse_selector(text: &str, d: &SelectorDefaults) -> Result<NamedSpace, ConfigError> {
    if let Some(path) = text.strip_prefix("file:") {
        return Ok(NamedSpace { name: text.to_string(), spec: SpaceSpec::File { path: PathBuf::from(path) } });
    }
    let (body, seed) = match text.rsplit_once('@') {
        Some((b, s)) => (b, s.parse::<u64>().map_err(|_| ConfigError(format!("--space {text}: bad seed `{s}`")))?),
        None => (text, d.seed),
    };
    let parts: Vec<&str> = body.split(':').collect();
    let bad = || ConfigError(format!("--space {text}: expected sphere:2|3, torus[:R:r], lens:p:q or file:PATH"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let int = |s: &str| s.parse::<i64>().map_err(|_| bad());
    let n = d.n;
    let spec = match parts.as_slice() {
        ["sphere", dim] => SpaceSpec::Sphere { dim: int(dim)? as usize, n, metric: d.metric, seed },
        ["torus"] => SpaceSpec::Torus { n, major: 2.5, minor: 1.0, seed },
        ["torus", major, minor] => SpaceSpec::Torus { n, major: num(major)?, minor: num(minor)?, seed },
        ["lens", p, q] => {
            let p = int(p)?;
            if p <= 0 || p > u32::MAX as i64 {
                return Err(bad());
            }
            SpaceSpec::Lens { n, p: p as u32, q: int(q)?, seed }
        }
        _ => return Err(bad()),
    };
    Ok(NamedSpace { name: text.to_string(), spec })
}

/// Parses `1-20,30` into `[1, 2, ..., 20, 30]`.
pub fn parse_ks(text: &str) -> Result<Vec<usize>, ConfigError> {
    let bad = || ConfigError(format!("--k {text}: expected a list like 1-20,30"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (a.parse::<usize>().map_err(|_| bad())?, b.parse::<usize>().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.contains(&0) {
        return err(format!("--k {text}: k must be at least 1"));
    }
    Ok(out)
}
