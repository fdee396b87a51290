use std::path::{Path, PathBuf};

use fano_mms::families::Caps;
use fano_mms::mms::{FalsificationGrid, DEFAULT_SEED};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinesRange {
    pub m_min: u64,
    pub m_max: u64,
    pub l_min: u64,
    pub l_max: u64,
}

impl Default for LinesRange {
    fn default() -> Self {
        Self {
            m_min: 3,
            m_max: 12,
            l_min: 3,
            l_max: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FuzzConfig {
    pub seed: u64,
    pub graphs: usize,
    pub ledgers: usize,
    pub max_k: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            graphs: 1_000,
            ledgers: 10_000,
            max_k: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub caps: Caps,
    pub grid: FalsificationGrid,
    pub lines: LinesRange,
    pub fuzz: FuzzConfig,
    pub format: Format,
    pub cache: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        let c = &self.caps;
        if c.max_a_x < 1 || c.max_a_q < 0 || c.max_a_w < 0 || c.max_twists < 1 {
            return Err("caps must be positive (a_Q and a_W may be 0)".into());
        }
        if c.m_min < 2 || c.m_min > c.m_max {
            return Err(format!("m range {}..{} is empty or below 2", c.m_min, c.m_max));
        }
        self.grid.validate().map_err(|e| e.to_string())?;
        let l = &self.lines;
        if l.m_min < 3 || l.l_min < 3 || l.m_min > l.m_max || l.l_min > l.l_max {
            return Err("lines ranges need 3 <= min <= max".into());
        }
        if self.fuzz.max_k < 1 {
            return Err("fuzz max_k must be at least 1".into());
        }
        Ok(())
    }
}

/// `max_a_x=3,max_a_q=2,...`; the short keys `a_x`, `a_q`, `a_w`, `twists`
/// are accepted too.
pub fn parse_caps(s: &str, base: Caps) -> Result<Caps, String> {
    let mut caps = base;
    for kv in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("caps entry `{kv}` is not key=value"))?;
        let v: i64 = v.trim().parse().map_err(|_| format!("caps value `{v}` is not an integer"))?;
        match k.trim() {
            "max_a_x" | "a_x" => caps.max_a_x = v,
            "max_a_q" | "a_q" => caps.max_a_q = v,
            "max_a_w" | "a_w" => caps.max_a_w = v,
            "max_twists" | "twists" => caps.max_twists = usize::try_from(v).map_err(|_| "twists must be >= 0")?,
            "m_min" => caps.m_min = v,
            "m_max" => caps.m_max = v,
            other => return Err(format!("unknown caps key `{other}`")),
        }
    }
    Ok(caps)
}

/// `a..b` or a single value.
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("range `{s}` is not `a..b`");
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}
