use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chow::{self, FamilyKind, FamilyParams};

/// Enumeration bounds. Double spaces ignore `max_a_q` and the `m` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    pub max_a_x: i64,
    pub max_a_q: i64,
    pub max_a_w: i64,
    /// Bound on the number of nonzero twists.
    pub max_twists: usize,
    pub m_min: i64,
    pub m_max: i64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_a_x: 3,
            max_a_q: 2,
            max_a_w: 1,
            max_twists: 3,
            m_min: 2,
            m_max: 8,
        }
    }
}

impl Caps {
    pub fn is_empty(&self, kind: FamilyKind) -> bool {
        let base = self.max_a_x < 0 || self.max_a_w < 0;
        match kind {
            FamilyKind::DoubleHypersurface => {
                base || self.max_a_q < 0 || self.m_min.max(2) > self.m_max
            }
            FamilyKind::DoubleSpace => base,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Uniformity {
    /// Sign of the K² pairing is the same for every `m ≥ 2`.
    AllM,
    /// Positive for some `m` in range only.
    MDependent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratedFamily {
    pub signature: String,
    pub kind: FamilyKind,
    pub twists: Vec<i64>,
    pub a_q: Option<i64>,
    pub a_w: i64,
    pub uniformity: Uniformity,
    /// Values of `m` in the capped range where the K² pairing is positive
    /// (double hypersurfaces only).
    pub failing_m: Vec<i64>,
    /// One instance per failing `m` (a single one for double spaces).
    #[serde(skip)]
    pub instances: Vec<FamilyParams>,
}

impl EnumeratedFamily {
    pub fn a_x(&self) -> i64 {
        self.twists.iter().sum()
    }

    fn sort_key(&self) -> (FamilyKind, i64, Vec<i64>, Option<i64>, i64) {
        (self.kind, self.a_x(), self.twists.clone(), self.a_q, self.a_w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub kind: FamilyKind,
    pub caps: Caps,
    pub uniform: Vec<EnumeratedFamily>,
    pub m_dependent: Vec<EnumeratedFamily>,
}

impl Enumeration {
    pub fn all(&self) -> impl Iterator<Item = &EnumeratedFamily> {
        self.uniform.iter().chain(&self.m_dependent)
    }

    pub fn signatures(&self) -> Vec<String> {
        self.all().map(|f| f.signature.clone()).collect()
    }
}

/// Nondecreasing positive tuples with sum `≤ max_sum` and length `≤ max_len`,
/// including the empty tuple.
fn twist_tuples(max_sum: i64, max_len: usize) -> Vec<Vec<i64>> {
    fn go(prefix: &mut Vec<i64>, min: i64, left: i64, max_len: usize, out: &mut Vec<Vec<i64>>) {
        out.push(prefix.clone());
        if prefix.len() == max_len {
            return;
        }
        for a in min.max(1)..=left {
            prefix.push(a);
            go(prefix, a, left - a, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if max_sum >= 0 {
        go(&mut Vec::new(), 1, max_sum, max_len, &mut out);
    }
    out
}

/// `s = 4 − a_X − 2a_Q − 2a_W`, so that the K² pairing equals `2sm + 2a_Q`.
fn slope(a_x: i64, a_q: i64, a_w: i64) -> i64 {
    4 - a_x - 2 * a_q - 2 * a_w
}

/// Whether `2sm + 2a_Q > 0` for every `m ≥ 2`, for none, or depends on `m`.
fn sign_pattern(s: i64, a_q: i64) -> Option<Uniformity> {
    match s {
        s if s > 0 => Some(Uniformity::AllM),
        0 if a_q > 0 => Some(Uniformity::AllM),
        0 => None,
        // decreasing in m; positive somewhere iff positive at m = 2
        s if 4 * s + 2 * a_q > 0 => Some(Uniformity::MDependent),
        _ => None,
    }
}

pub fn enumerate_k2_failing(kind: FamilyKind, caps: &Caps) -> Enumeration {
    let mut found: Vec<EnumeratedFamily> = if caps.is_empty(kind) {
        Vec::new()
    } else {
        let tuples = twist_tuples(caps.max_a_x, caps.max_twists);
        let aq_range: Vec<Option<i64>> = match kind {
            FamilyKind::DoubleHypersurface => (0..=caps.max_a_q).map(Some).collect(),
            FamilyKind::DoubleSpace => vec![None],
        };
        let mut candidates = Vec::new();
        for t in &tuples {
            for &a_q in &aq_range {
                for a_w in 0..=caps.max_a_w {
                    candidates.push((t.clone(), a_q, a_w));
                }
            }
        }
        candidates
            .into_par_iter()
            .filter_map(|(t, a_q, a_w)| classify_one(kind, caps, t, a_q, a_w))
            .collect()
    };
    found.sort_by_key(EnumeratedFamily::sort_key);
    let (uniform, m_dependent) = found
        .into_iter()
        .partition(|f| f.uniformity == Uniformity::AllM);
    Enumeration {
        kind,
        caps: *caps,
        uniform,
        m_dependent,
    }
}

fn classify_one(kind: FamilyKind, caps: &Caps, twists: Vec<i64>, a_q: Option<i64>, a_w: i64) -> Option<EnumeratedFamily> {
    let a_x: i64 = twists.iter().sum();
    match kind {
        FamilyKind::DoubleSpace => {
            let big_m = (twists.len() as i64).max(2);
            let fp = FamilyParams::double_space(&twists, a_w, big_m).ok()?;
            let k2 = chow::k2_number(&fp);
            debug_assert_eq!(k2, chow::k2_closed_form(&fp));
            (k2 > 0.into()).then(|| EnumeratedFamily {
                signature: fp.signature(),
                kind,
                twists,
                a_q: None,
                a_w,
                uniformity: Uniformity::AllM,
                failing_m: Vec::new(),
                instances: vec![fp],
            })
        }
        FamilyKind::DoubleHypersurface => {
            let a_q_v = a_q.unwrap_or(0);
            let pattern = sign_pattern(slope(a_x, a_q_v, a_w), a_q_v)?;
            let mut failing_m = Vec::new();
            let mut instances = Vec::new();
            for m in caps.m_min.max(2)..=caps.m_max {
                let l = (twists.len() as i64 - m).max(2);
                let fp = FamilyParams::double_hypersurface(&twists, a_q_v, a_w, m, l).ok()?;
                if chow::k2_number(&fp) > 0.into() {
                    failing_m.push(m);
                    instances.push(fp);
                }
            }
            if instances.is_empty() {
                return None;
            }
            Some(EnumeratedFamily {
                signature: instances[0].signature(),
                kind,
                twists,
                a_q,
                a_w,
                uniformity: pattern,
                failing_m,
                instances,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn twist_tuples_small() {
        let t = twist_tuples(3, 3);
        let expect: Vec<Vec<i64>> = vec![vec![], vec![1], vec![1, 1], vec![1, 1, 1], vec![1, 2], vec![2], vec![3]];
        assert_eq!(t, expect);
        assert!(twist_tuples(-1, 3).is_empty());
    }

    #[test]
    fn default_caps_double_hypersurface() {
        let e = enumerate_k2_failing(FamilyKind::DoubleHypersurface, &Caps::default());
        assert!(e.m_dependent.is_empty());
        let studied = set(&[
            "((0),(2,0))",
            "((0),(1,1))",
            "((1),(0,1))",
            "((2),(1,0))",
            "((2),(0,0))",
            "((3),(0,0))",
            "((1,2),(0,0))",
            "((1,1,1),(0,0))",
        ]);
        let others = set(&[
            "((0),(0,0))",
            "((1),(0,0))",
            "((1,1),(0,0))",
            "((0),(1,0))",
            "((1),(1,0))",
            "((0),(0,1))",
            "((1,1),(1,0))",
        ]);
        let got: BTreeSet<String> = e.signatures().into_iter().collect();
        assert_eq!(got, studied.union(&others).cloned().collect());
        for f in &e.uniform {
            assert_eq!(f.failing_m, (2..=8).collect::<Vec<_>>());
        }
    }

    #[test]
    fn default_caps_double_space() {
        let e = enumerate_k2_failing(FamilyKind::DoubleSpace, &Caps::default());
        let got: BTreeSet<String> = e.signatures().into_iter().collect();
        let want = set(&[
            "((1),1)",
            "((2),0)",
            "((3),0)",
            "((1,2),0)",
            "((1,1,1),0)",
            "((0),0)",
            "((1),0)",
            "((1,1),0)",
            "((0),1)",
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn boundary_family_is_excluded() {
        let caps = Caps { max_a_w: 2, ..Caps::default() };
        let e = enumerate_k2_failing(FamilyKind::DoubleHypersurface, &caps);
        assert!(!e.signatures().contains(&"((0),(0,2))".to_string()));
    }

    #[test]
    fn empty_caps_give_empty_list() {
        let caps = Caps { m_min: 9, m_max: 8, ..Caps::default() };
        assert!(enumerate_k2_failing(FamilyKind::DoubleHypersurface, &caps).signatures().is_empty());
        let caps = Caps { max_a_x: -1, ..Caps::default() };
        assert!(enumerate_k2_failing(FamilyKind::DoubleSpace, &caps).signatures().is_empty());
    }

    #[test]
    fn sign_pattern_matches_brute_force() {
        for a_x in 0..=8 {
            for a_q in 0..=4 {
                for a_w in 0..=4 {
                    let s = slope(a_x, a_q, a_w);
                    let signs: Vec<bool> = (2..=40).map(|m| 2 * s * m + 2 * a_q > 0).collect();
                    let expected = if signs.iter().all(|&b| b) {
                        Some(Uniformity::AllM)
                    } else if signs.iter().any(|&b| b) {
                        Some(Uniformity::MDependent)
                    } else {
                        None
                    };
                    assert_eq!(sign_pattern(s, a_q), expected, "{a_x} {a_q} {a_w}");
                }
            }
        }
    }

    #[test]
    fn output_is_sorted_and_stable() {
        let a = enumerate_k2_failing(FamilyKind::DoubleHypersurface, &Caps::default());
        let b = enumerate_k2_failing(FamilyKind::DoubleHypersurface, &Caps::default());
        assert_eq!(a, b);
        let keys: Vec<_> = a.uniform.iter().map(EnumeratedFamily::sort_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
