//! Per-level multiplicity accounting for a horizontal cycle restricted to a fiber.

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::{IndexClass, ResolutionGraph, Vertex};
use super::MmsError;
use crate::exactmath::{rat, Rational};

/// One cross term `m_{j,i}` with `j < i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossTerm {
    pub lower: usize,
    pub upper: usize,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub value: Rational,
}

/// Vectors are indexed by vertex `1..=K` (stored 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityLedger {
    pub graph: ResolutionGraph,
    #[serde(with = "crate::exactmath::serde_text::rational_vec")]
    pub m_y: Vec<Rational>,
    #[serde(with = "crate::exactmath::serde_text::rational_vec")]
    pub m_yf: Vec<Rational>,
    #[serde(with = "crate::exactmath::serde_text::rational_vec")]
    pub d: Vec<Rational>,
    #[serde(default)]
    pub cross: Vec<CrossTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerCheck {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

impl MultiplicityLedger {
    fn k(&self) -> usize {
        self.graph.len()
    }

    fn cross_into(&self, i: usize) -> Rational {
        self.cross
            .iter()
            .filter(|c| c.upper == i)
            .fold(Rational::zero(), |acc, c| acc + &c.value)
    }

    fn mu(&self, i: usize) -> Rational {
        rat(self.graph.vertex(i).mu.into())
    }

    fn class_members(&self, class: IndexClass) -> Vec<usize> {
        (1..=self.k()).filter(|&i| self.graph.index_class(i) == class).collect()
    }

    pub fn small_indices(&self) -> Vec<usize> {
        self.class_members(IndexClass::Small)
    }

    /// `Σ_{i∈J_m⁺} m_Y(i)·μ_i`
    fn middle_plus_load(&self) -> Rational {
        self.class_members(IndexClass::MiddlePlus)
            .into_iter()
            .fold(Rational::zero(), |acc, i| acc + &self.m_y[i - 1] * self.mu(i))
    }
}

/// Checks the equality chain on `J_s`, arrow support and the degree bound for
/// cross terms, vanishing of `m_{Y,F}` on `J_m⁻`, nonnegativity, and
/// `d_S ≥ Σ_{J_m⁺} m_Y(i)μ_i`.
pub fn ledger_validate(led: &MultiplicityLedger) -> LedgerCheck {
    let mut diag = Vec::new();
    let k = led.k();
    for (name, v) in [("m_Y", &led.m_y), ("m_YF", &led.m_yf), ("d", &led.d)] {
        if v.len() != k {
            diag.push(format!("{name} has {} entries, graph has {k} vertices", v.len()));
        }
    }
    if !diag.is_empty() {
        return LedgerCheck { valid: false, diagnostics: diag };
    }
    for (name, v) in [("m_Y", &led.m_y), ("m_YF", &led.m_yf), ("d", &led.d)] {
        for (i, x) in v.iter().enumerate() {
            if x.is_negative() {
                diag.push(format!("{name}({}) = {x} is negative", i + 1));
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for c in &led.cross {
        let (j, i) = (c.lower, c.upper);
        if !(1..=k).contains(&i) || !(1..=k).contains(&j) || j >= i {
            diag.push(format!("cross term m_{{{j},{i}}} has invalid indices"));
            continue;
        }
        if !seen.insert((j, i)) {
            diag.push(format!("cross term m_{{{j},{i}}} listed twice"));
        }
        if c.value.is_negative() {
            diag.push(format!("m_{{{j},{i}}} = {} is negative", c.value));
        }
        if c.value.is_positive() && !led.graph.has_arrow(i, j) {
            diag.push(format!("m_{{{j},{i}}} > 0 but there is no arrow {i} -> {j}"));
        }
        if c.value > led.d[j - 1] {
            diag.push(format!("m_{{{j},{i}}} = {} exceeds d_{j} = {}", c.value, led.d[j - 1]));
        }
    }
    for i in led.small_indices() {
        let lhs = &led.m_y[i - 1] * led.mu(i) + &led.d[i - 1];
        let rhs = &led.m_yf[i - 1] + led.cross_into(i);
        if lhs != rhs {
            diag.push(format!("level {i}: m_Y*mu + d = {lhs} but m_YF + cross = {rhs}"));
        }
    }
    for i in led.class_members(IndexClass::MiddleMinus) {
        if !led.m_yf[i - 1].is_zero() {
            diag.push(format!("m_YF({i}) must vanish off the fiber"));
        }
    }
    let s = led.graph.s_top();
    if s > 0 {
        let load = led.middle_plus_load();
        if led.d[s - 1] < load {
            diag.push(format!("d_{s} = {} is below the codimension-3 load {load}", led.d[s - 1]));
        }
    }
    LedgerCheck {
        valid: diag.is_empty(),
        diagnostics: diag,
    }
}

/// `a(i) ≥ Σ_{j→i, j∈J_s} a(j)` for `i ∈ J_s`.
pub fn is_compatible(g: &ResolutionGraph, a: &[Rational]) -> bool {
    let s = g.s_top();
    (1..=s).all(|i| {
        let incoming = g
            .arrows_into(i)
            .into_iter()
            .filter(|&j| j <= s)
            .fold(Rational::zero(), |acc, j| acc + &a[j - 1]);
        a[i - 1] >= incoming
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct B8Check {
    pub holds: bool,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub lhs: Rational,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub rhs: Rational,
}

/// `Σ_{J_s} a(i)m_{Y,F}(i) ≥ Σ_{J_s} a(i)m_Y(i)μ_i + a(S)·Σ_{J_m⁺} m_Y(i)μ_i`.
pub fn ledger_b8_check(led: &MultiplicityLedger, a: &[Rational]) -> Result<B8Check, MmsError> {
    if a.len() != led.k() || a.iter().any(Signed::is_negative) {
        return Err(MmsError::Precondition("weights must be nonnegative, one per vertex".into()));
    }
    if !is_compatible(&led.graph, a) {
        return Err(MmsError::Precondition("weights are not compatible with the graph".into()));
    }
    let js = led.small_indices();
    let Some(&s) = js.last() else {
        return Ok(B8Check {
            holds: true,
            lhs: Rational::zero(),
            rhs: Rational::zero(),
        });
    };
    let mut lhs = Rational::zero();
    let mut rhs = Rational::zero();
    for &i in &js {
        lhs += &a[i - 1] * &led.m_yf[i - 1];
        rhs += &a[i - 1] * &led.m_y[i - 1] * led.mu(i);
    }
    rhs += &a[s - 1] * led.middle_plus_load();
    Ok(B8Check {
        holds: lhs >= rhs,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop21Check {
    /// `Σ μ p m_Y ≤ p_1 m_{Y,F}(1) + (Σ_s − p_1) m_{Y,F}(2)`
    pub b2: bool,
    /// `… ≤ Σ_s m_{Y,F}(1)`
    pub b3: bool,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub lhs: Rational,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub middle: Rational,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub upper: Rational,
}

/// Requires a nonempty `J_s` and `m_{Y,F}(i) ≤ m_{Y,F}(2) ≤ m_{Y,F}(1)` on it.
pub fn prop21_check(led: &MultiplicityLedger, p: &[u64]) -> Result<Prop21Check, MmsError> {
    if p.len() != led.k() {
        return Err(MmsError::Precondition("one path count per vertex".into()));
    }
    let s = led.graph.s_top();
    if s == 0 {
        return Err(MmsError::Precondition("J_s is empty".into()));
    }
    let yf = &led.m_yf;
    if s >= 2 && (yf[1] > yf[0] || (2..s).any(|i| yf[i] > yf[1])) {
        return Err(MmsError::Precondition("m_YF is not monotone on J_s".into()));
    }
    let pr = |i: usize| rat(p[i - 1] as i64);
    let mut lhs = Rational::zero();
    for i in 1..=led.k() {
        if matches!(led.graph.index_class(i), IndexClass::Small | IndexClass::MiddlePlus) {
            lhs += led.mu(i) * pr(i) * &led.m_y[i - 1];
        }
    }
    let sigma_s: Rational = (1..=s).map(pr).sum();
    let second = if s >= 2 { yf[1].clone() } else { Rational::zero() };
    let middle = pr(1) * &yf[0] + (&sigma_s - pr(1)) * second;
    let upper = &sigma_s * &yf[0];
    Ok(Prop21Check {
        b2: lhs <= middle,
        b3: lhs <= upper,
        lhs,
        middle,
        upper,
    })
}

/// Random graph with at most `max_k` vertices; codimensions in `2..=6`.
pub fn random_graph<R: Rng>(rng: &mut R, max_k: usize) -> ResolutionGraph {
    let k = rng.gen_range(1..=max_k);
    let mut codims: Vec<u32> = (0..k).map(|_| rng.gen_range(2..=6)).collect();
    codims.sort_unstable_by(|a, b| b.cmp(a));
    let n = rng.gen_range(1..=k);
    let vertices = codims
        .iter()
        .enumerate()
        .map(|(idx, &codim)| Vertex {
            codim,
            mu: if idx == 0 {
                rng.gen_range(1..=2)
            } else {
                u32::from(idx < n)
            },
            in_fiber: idx < n,
        })
        .collect();
    let mut arrows = Vec::new();
    for i in 3..=k {
        for j in 1..i - 1 {
            if rng.gen_bool(0.3) {
                arrows.push((i, j));
            }
        }
    }
    ResolutionGraph::new(vertices, &arrows).expect("generator respects the graph rules")
}

/// Like [`random_graph`] but guaranteed to have at least one codim-≥4 centre.
pub fn random_graph_with_small<R: Rng>(rng: &mut R, max_k: usize) -> ResolutionGraph {
    loop {
        let g = random_graph(rng, max_k);
        if g.s_top() > 0 {
            return g;
        }
    }
}

fn small_value<R: Rng>(rng: &mut R, max: i64) -> Rational {
    // halves as well as integers
    Rational::new(rng.gen_range(0..=2 * max).into(), 2.into())
}

fn below<R: Rng>(rng: &mut R, cap: &Rational) -> Rational {
    if cap.is_zero() {
        return Rational::zero();
    }
    let t = Rational::new(rng.gen_range(0..=8).into(), 8.into());
    cap * t
}

/// Draw `d` first, then cross terms `m_{j,i} ≤ d_j` on arrows, then `m_Y`,
/// and solve the equality chain for `m_{Y,F}` on `J_s`. Returns `None` when a
/// solved value is negative.
pub fn random_ledger<R: Rng>(rng: &mut R, g: &ResolutionGraph) -> Option<MultiplicityLedger> {
    let k = g.len();
    let s = g.s_top();
    let d: Vec<Rational> = (0..k).map(|_| small_value(rng, 4)).collect();
    let mut cross = Vec::new();
    for i in 2..=k {
        for &j in g.arrows_from(i) {
            let v = below(rng, &d[j - 1]);
            if !v.is_zero() {
                cross.push(CrossTerm { lower: j, upper: i, value: v });
            }
        }
    }
    let mut m_y: Vec<Rational> = (0..k).map(|_| small_value(rng, 3)).collect();
    // keep the codimension-3 load in the fiber under d_S
    if s > 0 {
        let mut budget = d[s - 1].clone();
        for i in 1..=k {
            if g.index_class(i) == IndexClass::MiddlePlus {
                let mu = rat(g.vertex(i).mu.into());
                let cap = &budget / &mu;
                m_y[i - 1] = below(rng, &cap);
                budget -= &m_y[i - 1] * &mu;
            }
        }
    }
    let mut m_yf = vec![Rational::zero(); k];
    for i in 1..=k {
        m_yf[i - 1] = match g.index_class(i) {
            IndexClass::Small => {
                let into: Rational = cross.iter().filter(|c| c.upper == i).map(|c| c.value.clone()).sum();
                let v = &m_y[i - 1] * rat(g.vertex(i).mu.into()) + &d[i - 1] - into;
                if v.is_negative() {
                    return None;
                }
                v
            }
            IndexClass::MiddleMinus => Rational::zero(),
            _ => small_value(rng, 3),
        };
    }
    Some(MultiplicityLedger {
        graph: g.clone(),
        m_y,
        m_yf,
        d,
        cross,
    })
}

/// Monotone construction: `m_{Y,F}` on `J_s` first (nonincreasing from
/// level 2 on, below level 1), then cross terms, then `m_Y` and `d` level by
/// level so that the chain holds. Needs `J_s ≠ ∅`.
pub fn random_monotone_ledger<R: Rng>(rng: &mut R, g: &ResolutionGraph) -> Option<MultiplicityLedger> {
    let k = g.len();
    let s = g.s_top();
    if s == 0 {
        return None;
    }
    let mut m_yf = vec![Rational::zero(); k];
    m_yf[0] = small_value(rng, 5);
    for i in 2..=s {
        let cap = if i == 2 { m_yf[0].clone() } else { m_yf[1].clone() };
        m_yf[i - 1] = below(rng, &cap);
    }
    let mut d = vec![Rational::zero(); k];
    let mut m_y = vec![Rational::zero(); k];
    let mut cross = Vec::new();
    for i in 1..=k {
        let mut into = Rational::zero();
        for &j in g.arrows_from(i) {
            let v = below(rng, &d[j - 1]);
            if !v.is_zero() {
                into += &v;
                cross.push(CrossTerm { lower: j, upper: i, value: v });
            }
        }
        let mu = rat(g.vertex(i).mu.into());
        if i <= s {
            let rhs = &m_yf[i - 1] + &into;
            m_y[i - 1] = if mu.is_zero() {
                small_value(rng, 3)
            } else {
                below(rng, &(&rhs / &mu))
            };
            d[i - 1] = rhs - &m_y[i - 1] * &mu;
        } else {
            d[i - 1] = small_value(rng, 4);
            m_yf[i - 1] = if g.index_class(i) == IndexClass::MiddleMinus {
                Rational::zero()
            } else {
                small_value(rng, 3)
            };
            m_y[i - 1] = small_value(rng, 3);
        }
    }
    let mut budget = d[s - 1].clone();
    for i in s + 1..=k {
        if g.index_class(i) == IndexClass::MiddlePlus {
            let mu = rat(g.vertex(i).mu.into());
            m_y[i - 1] = below(rng, &(&budget / &mu));
            budget -= &m_y[i - 1] * &mu;
        }
    }
    Some(MultiplicityLedger {
        graph: g.clone(),
        m_y,
        m_yf,
        d,
        cross,
    })
}
