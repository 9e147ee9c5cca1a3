//! JSON scenario files.
//!
//! Gains and powers are given in the unit named by the mandatory `units`
//! field; conferencing capacities are always in bits per channel use.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cmac_core::dm::{Conditional, DmOptions};
use cmac_core::{DmChannel, EncoderConferencing, GaussianCmChannel, GridSpec, R0Mode, Scheme};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Db,
    Linear,
}

impl Units {
    pub fn to_linear(self, v: f64) -> f64 {
        match self {
            Units::Db => 10f64.powf(v / 10.0),
            Units::Linear => v,
        }
    }
}

/// Squared gains and powers of the Gaussian channel, in the config's units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelBlock {
    pub g11: f64,
    pub g12: f64,
    pub g21: f64,
    pub g22: f64,
    pub p1: f64,
    pub p2: f64,
}

/// A region family named on the command line or in a config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    Outer,
    OneRound,
    TwoRound,
    NoCoop,
    CmeOuter,
}

impl SchemeName {
    pub fn core(self) -> Option<Scheme> {
        match self {
            SchemeName::Outer => Some(Scheme::Outer),
            SchemeName::OneRound => Some(Scheme::OneRound),
            SchemeName::TwoRound => Some(Scheme::TwoRound),
            SchemeName::NoCoop => Some(Scheme::NoCoop),
            SchemeName::CmeOuter => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self.core() {
            Some(s) => s.name(),
            None => "cme-outer",
        }
    }
}

impl fmt::Display for SchemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cme-outer" => Ok(SchemeName::CmeOuter),
            other => other.parse::<Scheme>().map(SchemeName::from).map_err(|_| {
                CliError::Usage(format!(
                    "unknown scheme '{other}' (expected outer, one-round, two-round, no-coop, cme-outer)"
                ))
            }),
        }
    }
}

impl From<Scheme> for SchemeName {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Outer => SchemeName::Outer,
            Scheme::OneRound => SchemeName::OneRound,
            Scheme::TwoRound => SchemeName::TwoRound,
            Scheme::NoCoop => SchemeName::NoCoop,
        }
    }
}

/// A link capacity that may be unlimited. Written as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity(pub f64);

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Capacity(v)),
            Raw::Text(t) if t == "inf" || t == "infinity" => Ok(Capacity(f64::INFINITY)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got \"{t}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    C12,
    C21,
    Cbar12,
    Cbar21,
    /// Both transmit powers, in the config's units.
    P,
}

impl FromStr for SweepVar {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c12" => Ok(SweepVar::C12),
            "c21" => Ok(SweepVar::C21),
            "cbar12" => Ok(SweepVar::Cbar12),
            "cbar21" => Ok(SweepVar::Cbar21),
            "p" => Ok(SweepVar::P),
            _ => Err(CliError::Usage(format!("unknown sweep variable '{s}' (expected c12, c21, cbar12, cbar21, p)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.min < self.max) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(CliError::Usage(format!("sweep range needs min < max, got [{}, {}]", self.min, self.max)));
        }
        if self.samples < 2 {
            return Err(CliError::Usage(format!("sweep needs at least 2 samples, got {}", self.samples)));
        }
        let step = (self.max - self.min) / (self.samples - 1) as f64;
        Ok((0..self.samples)
            .map(|i| if i + 1 == self.samples { self.max } else { self.min + step * i as f64 })
            .collect())
    }
}

impl FromStr for SweepSpec {
    type Err = CliError;

    /// `var=min:max:samples`, e.g. `c21=0:2:21`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Usage(format!("sweep must look like var=min:max:samples, got '{s}'"));
        let (var, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [min, max, n] = parts[..] else {
            return Err(bad());
        };
        Ok(SweepSpec {
            var: var.parse()?,
            min: min.parse().map_err(|_| bad())?,
            max: max.parse().map_err(|_| bad())?,
            samples: n.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapMode {
    Broadcast,
    Symmetric,
    Mux,
}

impl FromStr for GapMode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "broadcast" => Ok(GapMode::Broadcast),
            "symmetric" => Ok(GapMode::Symmetric),
            "mux" => Ok(GapMode::Mux),
            _ => Err(CliError::Usage(format!("unknown gap mode '{s}' (expected broadcast, symmetric, mux)"))),
        }
    }
}

fn default_samples() -> usize {
    10_000
}

fn default_epsilon() -> f64 {
    0.5
}

fn default_p_grid() -> Vec<f64> {
    vec![1e2, 1e3, 1e4, 1e5, 1e6]
}

/// Gap-analysis settings. Gains, powers and SNRs here are linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSpec {
    #[serde(default)]
    pub mode: Option<GapMode>,
    /// Random instances per audit.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Optional single broadcast instance, evaluated with the config's `c12`, `c21`.
    #[serde(default)]
    pub pa: Option<f64>,
    #[serde(default)]
    pub pb: Option<f64>,
    /// Symmetric direct and cross gains; also the multiplexing template.
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    /// Optional single symmetric instance power and link capacity.
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_p_grid")]
    pub p_grid: Vec<f64>,
    /// Constant link capacity for the comparison sweep.
    #[serde(default)]
    pub fixed_c: Option<f64>,
}

impl Default for GapSpec {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

/// A discrete memoryless channel, either as a full table or as a degraded cascade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DmChannelSpec {
    /// `transition` is row-major over `(x1, x2, y1, y2)`.
    Table { sizes: [usize; 4], transition: Vec<f64> },
    /// `first[x1 * |X2| + x2][y1]` then `second[y1][y2]`.
    Cascade { x_sizes: [usize; 2], first: Vec<Vec<f64>>, second: Vec<Vec<f64>> },
}

impl DmChannelSpec {
    pub fn build(&self, max_alphabet: usize) -> Result<DmChannel> {
        // Check sizes before allocating anything proportional to them.
        let sizes: Vec<usize> = match self {
            DmChannelSpec::Table { sizes, .. } => sizes.to_vec(),
            DmChannelSpec::Cascade { x_sizes, first, second } => {
                let mut v = x_sizes.to_vec();
                v.push(first.first().map_or(0, Vec::len));
                v.push(second.first().map_or(0, Vec::len));
                v
            }
        };
        if let Some(n) = sizes.iter().find(|&&n| n > max_alphabet) {
            return Err(CliError::Usage(format!("alphabet size {n} exceeds the cap of {max_alphabet}")));
        }
        Ok(match self {
            DmChannelSpec::Table { sizes, transition } => DmChannel::new(*sizes, transition.clone())?,
            DmChannelSpec::Cascade { x_sizes, first, second } => DmChannel::degraded_cascade(
                *x_sizes,
                &Conditional::from_rows(first)?,
                &Conditional::from_rows(second)?,
            )?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmSpec {
    pub channel: DmChannelSpec,
    #[serde(default)]
    pub options: DmOptions,
    /// Overrides the top-level grid for the discrete evaluators.
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

fn default_schemes() -> Vec<SchemeName> {
    Scheme::ALL.into_iter().map(SchemeName::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub units: Units,
    #[serde(default)]
    pub channel: Option<ChannelBlock>,
    #[serde(default)]
    pub c12: f64,
    #[serde(default)]
    pub c21: f64,
    #[serde(default)]
    pub cbar12: Option<Capacity>,
    #[serde(default)]
    pub cbar21: Option<Capacity>,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<SchemeName>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub r0_mode: R0Mode,
    #[serde(default)]
    pub seed: u64,
    /// Output directory, used when `--out` is not given.
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub gap: Option<GapSpec>,
    #[serde(default)]
    pub dm: Option<DmSpec>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text).map_err(|source| CliError::Config { path: path.to_path_buf(), source })
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(CliError::Usage("scheme list must not be empty".into()));
        }
        for (name, v) in [("c12", self.c12), ("c21", self.c21)] {
            if !v.is_finite() || v < 0.0 {
                return Err(CliError::Usage(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        self.encoder().validate()?;
        self.grid.validate()?;
        if self.channel.is_some() {
            self.gaussian()?;
        }
        Ok(())
    }

    /// The Gaussian channel in linear units.
    pub fn gaussian(&self) -> Result<GaussianCmChannel> {
        let b = self.channel.ok_or_else(|| CliError::Usage("config has no `channel` block".into()))?;
        let u = |v| self.units.to_linear(v);
        let ch = GaussianCmChannel {
            g11: u(b.g11),
            g12: u(b.g12),
            g21: u(b.g21),
            g22: u(b.g22),
            p1: u(b.p1),
            p2: u(b.p2),
            c12: self.c12,
            c21: self.c21,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn encoder(&self) -> EncoderConferencing {
        EncoderConferencing { cbar12: self.cbar12.map_or(0.0, |c| c.0), cbar21: self.cbar21.map_or(0.0, |c| c.0) }
    }

    pub fn wants(&self, s: SchemeName) -> bool {
        self.schemes.contains(&s)
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(&Sha256::digest(&bytes)[..8])
    }
}
