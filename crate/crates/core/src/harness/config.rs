//! Simulation configuration: TOML/JSON ingestion, dotted-path overrides and
//! validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{ChannelKind, FadingModel};
use crate::codebook::{
    build_bch, build_ca_polar, hamming_7_4, load_alist, parse_reliability_order,
    polarization_weight_order, random_linear_code, uncoded, CrcSpec, Gf2Poly, LinearCode,
};
use crate::equalize::Detector;
use crate::error::{Error, Result};
use crate::grand::{DecoderKind, QuerySchedule, DEFAULT_MAX_QUERIES};
use crate::modem::Modulation;

/// Environment variable consulted when a config leaves `workers` unset.
pub const WORKERS_ENV: &str = "PSGRAND_WORKERS";

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CodeSpec {
    /// Narrow-sense primitive BCH code of length `2^m − 1` correcting `t` errors.
    Bch { m: u32, t: usize },
    CaPolar {
        block_length: usize,
        k: usize,
        /// `"crc11"`, `"none"`, or a hex polynomial including the leading term.
        #[serde(default = "default_crc")]
        crc: String,
        /// Whitespace-separated channel indices, least reliable first.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reliability_file: Option<PathBuf>,
    },
    RandomLinear { n: usize, k: usize, seed: u64 },
    Hamming74,
    Uncoded { n: usize },
    Alist { path: PathBuf },
}

fn default_crc() -> String {
    "crc11".into()
}

fn parse_crc(text: &str) -> Result<CrcSpec> {
    match text.trim().to_ascii_lowercase().as_str() {
        "crc11" => Ok(CrcSpec::crc11()),
        "none" | "" => Ok(CrcSpec::none()),
        other => {
            let hex = other.trim_start_matches("0x");
            let v = u64::from_str_radix(hex, 16)
                .map_err(|_| cfg_err(format!("bad CRC polynomial {text:?}")))?;
            CrcSpec::new(&Gf2Poly::from_u64(v))
        }
    }
}

impl CodeSpec {
    /// Builds the code; relative paths resolve against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<LinearCode> {
        match self {
            CodeSpec::Bch { m, t } => Ok(build_bch(*m, *t)?.1),
            CodeSpec::CaPolar {
                block_length,
                k,
                crc,
                reliability_file,
            } => {
                let order = match reliability_file {
                    Some(p) => parse_reliability_order(&std::fs::read_to_string(base_dir.join(p))?)?,
                    None => polarization_weight_order(*block_length),
                };
                Ok(build_ca_polar(*block_length, *k, parse_crc(crc)?, &order)?.1)
            }
            CodeSpec::RandomLinear { n, k, seed } => random_linear_code(*n, *k, *seed),
            CodeSpec::Hamming74 => Ok(hamming_7_4()),
            CodeSpec::Uncoded { n } => uncoded(*n),
            CodeSpec::Alist { path } => load_alist(&std::fs::read_to_string(base_dir.join(path))?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Softness {
    Hard,
    Psoft,
    Soft,
}

impl Softness {
    pub fn name(self) -> &'static str {
        match self {
            Softness::Hard => "hard",
            Softness::Psoft => "psoft",
            Softness::Soft => "soft",
        }
    }
}

impl fmt::Display for Softness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Softness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hard" => Ok(Softness::Hard),
            "psoft" => Ok(Softness::Psoft),
            "soft" => Ok(Softness::Soft),
            _ => Err(Error::InvalidArgument(format!("unknown softness {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    #[serde(default)]
    pub k_factor: f64,
}

impl ChannelSpec {
    pub fn model(&self) -> Result<FadingModel> {
        match self.kind {
            ChannelKind::Awgn => Ok(FadingModel::awgn()),
            ChannelKind::Rayleigh => Ok(FadingModel::rayleigh()),
            ChannelKind::Rician => FadingModel::rician(self.k_factor),
        }
    }
}

/// Query budget: a positive count or `"unlimited"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BudgetRepr", into = "BudgetRepr")]
pub struct QueryBudget(pub Option<u64>);

impl Default for QueryBudget {
    fn default() -> Self {
        QueryBudget(Some(DEFAULT_MAX_QUERIES))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BudgetRepr {
    Count(u64),
    Word(String),
}

impl TryFrom<BudgetRepr> for QueryBudget {
    type Error = String;

    fn try_from(r: BudgetRepr) -> std::result::Result<Self, String> {
        match r {
            BudgetRepr::Count(0) => Err("max_queries must be at least 1".into()),
            BudgetRepr::Count(b) => Ok(QueryBudget(Some(b))),
            BudgetRepr::Word(w) if w.eq_ignore_ascii_case("unlimited") => Ok(QueryBudget(None)),
            BudgetRepr::Word(w) => w
                .parse::<u64>()
                .ok()
                .filter(|&b| b > 0)
                .map(|b| QueryBudget(Some(b)))
                .ok_or_else(|| format!("max_queries must be a positive integer or \"unlimited\", got {w:?}")),
        }
    }
}

impl From<QueryBudget> for BudgetRepr {
    fn from(b: QueryBudget) -> Self {
        match b.0 {
            Some(c) => BudgetRepr::Count(c),
            None => BudgetRepr::Word("unlimited".into()),
        }
    }
}

/// SNR points in dB: an explicit list or an inclusive `start..=stop` range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SnrGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Default for SnrGrid {
    fn default() -> Self {
        SnrGrid::List(Vec::new())
    }
}

impl SnrGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        match self {
            SnrGrid::List(v) => {
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(cfg_err("SNR values must be finite"));
                }
                Ok(v.clone())
            }
            SnrGrid::Range { start, stop, step } => {
                if !(step.is_finite() && *step > 0.0 && start.is_finite() && stop.is_finite()) {
                    return Err(cfg_err("SNR range needs finite bounds and a positive step"));
                }
                let count = ((stop - start) / step + 1e-9).floor();
                if count < 0.0 {
                    return Ok(Vec::new());
                }
                Ok((0..=count as usize).map(|i| start + i as f64 * step).collect())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopRule {
    #[serde(default = "default_min_errors")]
    pub min_block_errors: u64,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
}

fn default_min_errors() -> u64 {
    200
}

fn default_max_frames() -> u64 {
    2_000_000
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_block_errors: default_min_errors(),
            max_frames: default_max_frames(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Stem of the output files `<name>.csv` and `<name>.json`.
    #[serde(default = "default_name")]
    pub name: String,
    pub code: CodeSpec,
    pub modulation: Modulation,
    pub channel: ChannelSpec,
    pub detector: Detector,
    pub softness: Softness,
    pub decoder: DecoderKind,
    #[serde(default)]
    pub max_queries: QueryBudget,
    #[serde(default)]
    pub snr_db: SnrGrid,
    #[serde(default)]
    pub stop: StopRule,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Directory for result files; nothing is written when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Directory that relative code-file paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_name() -> String {
    "curve".into()
}

impl SimConfig {
    pub fn from_value(value: Value) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_value(value).map_err(|e| cfg_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_value(toml_to_value(text)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(text).map_err(|e| cfg_err(e.to_string()))?)
    }

    /// Reads a `.json` or TOML file, applies `key=value` overrides, and
    /// resolves relative paths against the file's directory.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut value = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            serde_json::from_str(&text).map_err(|e| cfg_err(format!("{}: {e}", path.display())))?
        } else {
            toml_to_value(&text)?
        };
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let mut cfg = Self::from_value(value)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.softness == Softness::Soft && self.detector == Detector::Ml {
            return Err(cfg_err("softness = soft requires detector zf or mmse"));
        }
        if self.decoder != DecoderKind::GrandHard && self.softness == Softness::Hard {
            return Err(cfg_err(format!(
                "decoder {} needs reliabilities; use softness psoft or soft",
                self.decoder
            )));
        }
        if self.stop.max_frames == 0 {
            return Err(cfg_err("stop.max_frames must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(cfg_err("workers must be at least 1"));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(cfg_err(format!("invalid output name {:?}", self.name)));
        }
        self.channel.model()?;
        self.snr_db.points()?;
        Ok(())
    }

    pub fn snr_points(&self) -> Vec<f64> {
        self.snr_db.points().unwrap_or_default()
    }

    pub fn schedule(&self) -> QuerySchedule {
        QuerySchedule {
            kind: self.decoder.schedule_kind(),
            max_queries: self.max_queries.0,
        }
    }

    /// Worker threads: config, then the environment, then the core count.
    pub fn resolved_workers(&self) -> usize {
        self.workers
            .or_else(|| std::env::var(WORKERS_ENV).ok()?.trim().parse().ok())
            .filter(|&w| w > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn build_code(&self) -> Result<LinearCode> {
        self.code.build(&self.base_dir)
    }

    pub fn csv_path(&self) -> Option<PathBuf> {
        self.output_dir.as_ref().map(|d| d.join(format!("{}.csv", self.name)))
    }

    pub fn json_path(&self) -> Option<PathBuf> {
        self.output_dir.as_ref().map(|d| d.join(format!("{}.json", self.name)))
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("config is always serializable")
    }
}

fn toml_to_value(text: &str) -> Result<Value> {
    let t: toml::Value = toml::from_str(text).map_err(|e| cfg_err(e.to_string()))?;
    serde_json::to_value(t).map_err(|e| cfg_err(e.to_string()))
}

/// Applies `a.b.c=value`. The value is read as JSON when it parses as such
/// (numbers, booleans, arrays, quoted strings) and as a bare string otherwise.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| cfg_err(format!("override {assignment:?} is not key=value")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(cfg_err(format!("override {assignment:?} has an empty key")));
    }
    let raw = raw.trim();
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if !node.is_object() {
            *node = Value::Object(Default::default());
        }
        let map = node.as_object_mut().unwrap();
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("split yields at least one part")
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
name = "bch-psoft"
modulation = "bpsk"
detector = "zf"
softness = "psoft"
decoder = "orbgrand"
snr_db = [10.0, 12.0]

[code]
kind = "bch"
m = 7
t = 2

[channel]
kind = "rayleigh"
"#;

    #[test]
    fn parses_toml_with_defaults() {
        let c = SimConfig::from_toml_str(BASE).unwrap();
        assert_eq!(c.code, CodeSpec::Bch { m: 7, t: 2 });
        assert_eq!(c.max_queries, QueryBudget(Some(1_000_000)));
        assert_eq!(c.stop, StopRule::default());
        assert_eq!(c.snr_points(), vec![10.0, 12.0]);
        assert_eq!(c.build_code().unwrap().k(), 113);
    }

    #[test]
    fn overrides_and_budget_words() {
        let mut v = toml_to_value(BASE).unwrap();
        apply_override(&mut v, "max_queries=unlimited").unwrap();
        apply_override(&mut v, "stop.min_block_errors=50").unwrap();
        apply_override(&mut v, "snr_db={\"start\":0,\"stop\":4,\"step\":2}").unwrap();
        apply_override(&mut v, "channel.kind=rician").unwrap();
        apply_override(&mut v, "channel.k_factor=4").unwrap();
        let c = SimConfig::from_value(v).unwrap();
        assert_eq!(c.max_queries, QueryBudget(None));
        assert_eq!(c.stop.min_block_errors, 50);
        assert_eq!(c.stop.max_frames, 2_000_000);
        assert_eq!(c.snr_points(), vec![0.0, 2.0, 4.0]);
        assert_eq!(c.channel.k_factor, 4.0);
        assert!(apply_override(&mut toml_to_value(BASE).unwrap(), "novalue").is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = SimConfig::from_toml_str(BASE).unwrap();
        let back = SimConfig::from_json_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn invariants_enforced() {
        let mut v = toml_to_value(BASE).unwrap();
        apply_override(&mut v, "softness=soft").unwrap();
        apply_override(&mut v, "detector=ml").unwrap();
        assert!(matches!(SimConfig::from_value(v), Err(Error::Config(_))));
        let mut v = toml_to_value(BASE).unwrap();
        apply_override(&mut v, "softness=hard").unwrap();
        assert!(SimConfig::from_value(v).is_err());
        let mut v = toml_to_value(BASE).unwrap();
        apply_override(&mut v, "max_queries=0").unwrap();
        assert!(SimConfig::from_value(v).is_err());
        let mut v = toml_to_value(BASE).unwrap();
        apply_override(&mut v, "bogus=1").unwrap();
        assert!(SimConfig::from_value(v).is_err());
    }
}
