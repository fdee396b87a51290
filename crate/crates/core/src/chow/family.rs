use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    DoubleHypersurface,
    DoubleSpace,
}

impl FamilyKind {
    pub fn short_name(self) -> &'static str {
        match self {
            FamilyKind::DoubleHypersurface => "double-hypersurface",
            FamilyKind::DoubleSpace => "double-space",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse family `{input}`: {reason}")]
pub struct ParseFamilyError {
    pub input: String,
    pub reason: String,
}

/// Discrete data of a fibration family.
///
/// `twists` holds the full nondecreasing list `(a_1, …)` without the
/// implicit `a_0 = 0`: length `M + 1` for double hypersurfaces (rank
/// `M + 2`), `M` for double spaces (rank `M + 1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub kind: FamilyKind,
    pub twists: Vec<i64>,
    /// Degree of `Q` on the fibers; `None` for double spaces.
    pub m: Option<i64>,
    /// Half the fiber degree of the branch divisor. Equals `M` for double spaces.
    pub l: i64,
    pub a_q: Option<i64>,
    pub a_w: i64,
}

impl FamilyParams {
    /// `nonzero` lists the positive twists in any order; zeros are padded in
    /// front so that `M + 1 = m + l` entries result.
    pub fn double_hypersurface(nonzero: &[i64], a_q: i64, a_w: i64, m: i64, l: i64) -> Result<Self, String> {
        if m < 2 || l < 2 {
            return Err(format!("need m >= 2 and l >= 2, got m={m}, l={l}"));
        }
        if a_q < 0 || a_w < 0 {
            return Err("a_Q and a_W must be nonnegative".into());
        }
        let twists = pad_twists(nonzero, (m + l) as usize)?;
        Ok(Self {
            kind: FamilyKind::DoubleHypersurface,
            twists,
            m: Some(m),
            l,
            a_q: Some(a_q),
            a_w,
        })
    }

    pub fn double_space(nonzero: &[i64], a_w: i64, big_m: i64) -> Result<Self, String> {
        if big_m < 2 {
            return Err(format!("need M >= 2, got {big_m}"));
        }
        if a_w < 0 {
            return Err("a_W must be nonnegative".into());
        }
        let twists = pad_twists(nonzero, big_m as usize)?;
        Ok(Self {
            kind: FamilyKind::DoubleSpace,
            twists,
            m: None,
            l: big_m,
            a_q: None,
            a_w,
        })
    }

    /// Parse with defaults `l = max(2, #nonzero − m)` and `M = max(2, #nonzero)`.
    pub fn parse(s: &str) -> Result<Self, ParseFamilyError> {
        s.parse()
    }

    /// `M`, with `dim V = M + 1`.
    pub fn big_m(&self) -> u32 {
        match self.kind {
            FamilyKind::DoubleHypersurface => (self.twists.len() - 1) as u32,
            FamilyKind::DoubleSpace => self.twists.len() as u32,
        }
    }

    pub fn dim_v(&self) -> u32 {
        self.big_m() + 1
    }

    /// `rank E = dim X`.
    pub fn ambient_dim(&self) -> u32 {
        self.twists.len() as u32 + 1
    }

    pub fn a_x(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// Coefficient `b` in `K_V = −L_V + b·F`.
    pub fn canonical_twist(&self) -> i64 {
        self.a_x() + self.a_q.unwrap_or(0) + self.a_w - 2
    }

    pub fn nonzero_twists(&self) -> Vec<i64> {
        self.twists.iter().copied().filter(|&a| a != 0).collect()
    }

    /// Tuple notation without the dimension attributes, e.g. `((1,2),(0,0))`.
    pub fn signature(&self) -> String {
        let nz = self.nonzero_twists();
        let tw = if nz.is_empty() {
            "0".to_string()
        } else {
            nz.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
        };
        match self.kind {
            FamilyKind::DoubleHypersurface => {
                format!("(({tw}),({},{}))", self.a_q.unwrap_or(0), self.a_w)
            }
            FamilyKind::DoubleSpace => format!("(({tw}),{})", self.a_w),
        }
    }

    /// Same data with a different `m`, keeping the default `l` rule.
    pub fn with_m(&self, m: i64) -> Result<Self, String> {
        let nz = self.nonzero_twists();
        let l = default_l(nz.len(), m);
        Self::double_hypersurface(&nz, self.a_q.unwrap_or(0), self.a_w, m, l)
    }
}

fn default_l(nonzero: usize, m: i64) -> i64 {
    (nonzero as i64 - m).max(2)
}

fn pad_twists(nonzero: &[i64], len: usize) -> Result<Vec<i64>, String> {
    if nonzero.iter().any(|&a| a < 0) {
        return Err("twists must be nonnegative".into());
    }
    let mut nz: Vec<i64> = nonzero.iter().copied().filter(|&a| a != 0).collect();
    if nz.len() > len {
        return Err(format!("{} nonzero twists do not fit into {len} slots", nz.len()));
    }
    nz.sort_unstable();
    let mut out = vec![0; len - nz.len()];
    out.extend(nz);
    Ok(out)
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::DoubleHypersurface => write!(
                f,
                "{},m={},l={}",
                self.signature(),
                self.m.unwrap_or(0),
                self.l
            ),
            FamilyKind::DoubleSpace => write!(f, "{},M={}", self.signature(), self.big_m()),
        }
    }
}

impl FromStr for FamilyParams {
    type Err = ParseFamilyError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParseFamilyError {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let body = s.strip_prefix("((").ok_or_else(|| err("expected `((`"))?;
        let close = body.find(')').ok_or_else(|| err("unterminated twist list"))?;
        let twists = parse_int_list(&body[..close]).map_err(|r| err(&r))?;
        let rest = body[close + 1..]
            .strip_prefix(',')
            .ok_or_else(|| err("expected `,` after twist list"))?;

        let (kind, a_q, a_w, attrs) = if let Some(pair) = rest.strip_prefix('(') {
            let end = pair.find(')').ok_or_else(|| err("unterminated (a_Q,a_W) pair"))?;
            let vals = parse_int_list(&pair[..end]).map_err(|r| err(&r))?;
            let [a_q, a_w] = vals[..] else {
                return Err(err("expected exactly two entries (a_Q,a_W)"));
            };
            let attrs = pair[end + 1..]
                .strip_prefix(')')
                .ok_or_else(|| err("expected closing `)`"))?;
            (FamilyKind::DoubleHypersurface, Some(a_q), a_w, attrs)
        } else {
            let end = rest.find(')').ok_or_else(|| err("expected closing `)`"))?;
            let a_w: i64 = rest[..end].parse().map_err(|_| err("a_W is not an integer"))?;
            (FamilyKind::DoubleSpace, None, a_w, &rest[end + 1..])
        };

        let mut m = None;
        let mut l = None;
        let mut big_m = None;
        for attr in attrs.split(',').filter(|a| !a.is_empty()) {
            let (key, val) = attr.split_once('=').ok_or_else(|| err("attributes look like `m=4`"))?;
            let v: i64 = val.parse().map_err(|_| err("attribute value is not an integer"))?;
            match key {
                "m" => m = Some(v),
                "l" => l = Some(v),
                "M" => big_m = Some(v),
                _ => return Err(err(&format!("unknown attribute `{key}`"))),
            }
        }
        let nonzero = twists.iter().filter(|&&a| a != 0).count();
        match kind {
            FamilyKind::DoubleHypersurface => {
                if big_m.is_some() {
                    return Err(err("`M` is derived from m and l for double hypersurfaces"));
                }
                let m = m.ok_or_else(|| err("double hypersurfaces need `m=`"))?;
                let l = l.unwrap_or_else(|| default_l(nonzero, m));
                FamilyParams::double_hypersurface(&twists, a_q.unwrap_or(0), a_w, m, l).map_err(|r| err(&r))
            }
            FamilyKind::DoubleSpace => {
                if m.is_some() || l.is_some() {
                    return Err(err("double spaces take only `M=`"));
                }
                let big_m = big_m.unwrap_or((nonzero as i64).max(2));
                FamilyParams::double_space(&twists, a_w, big_m).map_err(|r| err(&r))
            }
        }
    }
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| t.parse::<i64>().map_err(|_| format!("`{t}` is not an integer")))
        .collect()
}
