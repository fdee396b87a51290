//! Counting bounds for lines through a point of a fiber: λ_{m,l}, the
//! codimension bound Δ, the ordering function, hypertangent mult/deg bounds,
//! the exceptional (m, l) set and the mobile-curve ratio.

mod table;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{binomial, rat, ratio, Polynomial, Rational, VarContext};

pub use table::{lines_table, LinesRow, LINES_CSV_HEADER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinesError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `(2l−1)!/(l−1)!`
fn falling(l: u64) -> BigInt {
    (l..=2 * l - 1).fold(BigInt::one(), |acc, k| acc * k)
}

/// `K = m!·(2l−1)!/(l−1)!`, the common factor of λ and the mobile ratio.
pub fn k_factor(m: u64, l: u64) -> BigInt {
    factorial(m) * falling(l)
}

/// `m!/6 · (2l−1)!/(l−1)! − 1`.
pub fn lambda_ml(m: u64, l: u64) -> Result<BigInt, LinesError> {
    if m < 3 || l < 2 {
        return Err(LinesError::Parameter(format!("lambda needs m >= 3, l >= 2 (got m={m}, l={l})")));
    }
    let k = k_factor(m, l);
    if !(&k % 6u32).is_zero() {
        return Err(LinesError::Parameter(format!("lambda({m},{l}) is not an integer")));
    }
    Ok(k / 6u32 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaParams {
    /// Ambient dimension `N`.
    pub n_ambient: u64,
    /// Degree cap `e`.
    pub e: u64,
    /// Cycle dimension `a ≥ 1`.
    pub a: u64,
    /// `c_1, …, c_k`, all positive.
    pub c: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaBound {
    pub value: BigInt,
    pub a_i: Vec<u64>,
    pub c_star: Vec<u64>,
    /// Codimension the bound has to reach when used for λ, if known (`M + 2`).
    pub codim_target: Option<u64>,
}

impl DeltaBound {
    pub fn meets_target(&self) -> Option<bool> {
        self.codim_target.map(|t| self.value >= BigInt::from(t))
    }
}

/// `M + 2` with `M = m + l − 1`.
pub fn codimension_target(m: u64, l: u64) -> u64 {
    m + l + 1
}

/// `Σ_i binom(a_i + c*_i, c*_i)`.
pub fn delta_bound(dp: &DeltaParams) -> Result<DeltaBound, LinesError> {
    let bad = |s: String| Err(LinesError::Parameter(s));
    let k = dp.c.len() as u64;
    if k == 0 {
        return bad("delta bound needs at least one point".into());
    }
    if dp.a == 0 {
        return bad("cycle dimension a must be at least 1".into());
    }
    if dp.c.iter().any(|&c| c == 0) {
        return bad("all c_i must be positive".into());
    }
    let head: u64 = dp.c[..dp.c.len() - 1].iter().sum::<u64>() + (k - 1);
    if head > dp.e {
        return bad(format!("c_1+..+c_(k-1)+(k-1) = {head} exceeds e = {}", dp.e));
    }
    if (k - 1) * dp.a > dp.n_ambient {
        return bad(format!("(k-1)a = {} exceeds N = {}", (k - 1) * dp.a, dp.n_ambient));
    }
    let mut a_i = vec![dp.a; dp.c.len()];
    let mut c_star = dp.c.clone();
    a_i[dp.c.len() - 1] = dp.a.min(dp.n_ambient - (k - 1) * dp.a);
    c_star[dp.c.len() - 1] = dp.c[dp.c.len() - 1].min(dp.e - head);
    let value = a_i
        .iter()
        .zip(&c_star)
        .map(|(&a, &c)| BigInt::from(binomial(a + c, c)))
        .sum();
    Ok(DeltaBound {
        value,
        a_i,
        c_star,
        codim_target: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingFunction {
    pub m: u64,
    pub l: u64,
    /// `c_e` for `e = 0..=e_max`.
    pub c: Vec<u64>,
    /// `χ(1), …, χ(m+l−4)`.
    pub chi: Vec<u64>,
}

/// `c_e = #([4,e] ∩ {2..m−1}) + #([3,e] ∩ {l..2l−1})` and its ordering
/// function. `e` runs to `max(m−1, 2l−1)` so both sets are exhausted.
pub fn ordering_function(m: u64, l: u64) -> Result<OrderingFunction, LinesError> {
    if m < 4 || l < 3 {
        return Err(LinesError::Parameter(format!("ordering function needs m >= 4, l >= 3 (got m={m}, l={l})")));
    }
    let e_max = (m - 1).max(2 * l - 1);
    let count = |lo: u64, hi: u64, e: u64| -> u64 {
        let top = e.min(hi);
        if top < lo {
            0
        } else {
            top - lo + 1
        }
    };
    let c: Vec<u64> = (0..=e_max).map(|e| count(4, m - 1, e) + count(l.max(3), 2 * l - 1, e)).collect();
    let size = m + l - 4;
    if c[e_max as usize] != size {
        return Err(LinesError::Internal(format!(
            "c_max = {} but the domain of chi has {size} elements at (m,l)=({m},{l})",
            c[e_max as usize]
        )));
    }
    let chi = (1..=size)
        .map(|i| c.iter().position(|&ce| ce >= i).expect("c reaches size") as u64)
        .collect();
    Ok(OrderingFunction { m, l, c, chi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    C4,
    C5,
    RefinedC4,
    RefinedC5,
}

impl BoundVariant {
    pub fn for_case(m: u64, l: u64, refined: bool) -> Self {
        match (m <= 2 * l, refined) {
            (true, false) => BoundVariant::C4,
            (false, false) => BoundVariant::C5,
            (true, true) => BoundVariant::RefinedC4,
            (false, true) => BoundVariant::RefinedC5,
        }
    }
}

/// Upper bound on `mult_o/deg` from hypertangent divisors.
pub fn hypertangent_bound(m: u64, l: u64, variant: BoundVariant) -> Result<Rational, LinesError> {
    if m < 2 || l < 1 {
        return Err(LinesError::Parameter(format!("bound needs m >= 2, l >= 1 (got m={m}, l={l})")));
    }
    let low = m <= 2 * l;
    let (m, l) = (m as i64, l as i64);
    match variant {
        BoundVariant::C4 | BoundVariant::RefinedC4 if !low => Err(LinesError::Parameter(format!(
            "{variant:?} needs m <= 2l (got m={m}, l={l})"
        ))),
        BoundVariant::C5 | BoundVariant::RefinedC5 if low => Err(LinesError::Parameter(format!(
            "{variant:?} needs m >= 2l+1 (got m={m}, l={l})"
        ))),
        BoundVariant::C4 => Ok(ratio(4 * l, m * (2 * l - 1))),
        BoundVariant::RefinedC4 => Ok(ratio(8 * l, 3 * m * (2 * l - 1))),
        BoundVariant::C5 => Ok(ratio(2, m - 1)),
        BoundVariant::RefinedC5 => Ok(ratio(4, 3 * (m - 1))),
    }
}

/// Target `3/(2m)` for the refined bounds.
pub fn refined_target(m: u64) -> Rational {
    ratio(3, 2 * m as i64)
}

/// Target `3/m` for the first-pass bounds.
pub fn first_pass_target(m: u64) -> Rational {
    ratio(3, m as i64)
}

/// True when the refined bound for `(m, l)` exceeds `3/(2m)`.
pub fn is_exceptional(m: u64, l: u64) -> Result<bool, LinesError> {
    let b = hypertangent_bound(m, l, BoundVariant::for_case(m, l, true))?;
    Ok(b > refined_target(m))
}

/// True when the first-pass bound for `(m, l)` exceeds `3/m`.
pub fn first_pass_fails(m: u64, l: u64) -> Result<bool, LinesError> {
    let b = hypertangent_bound(m, l, BoundVariant::for_case(m, l, false))?;
    Ok(b > first_pass_target(m))
}

pub fn exceptional_set(
    m_range: std::ops::RangeInclusive<u64>,
    l_range: std::ops::RangeInclusive<u64>,
) -> Result<BTreeSet<(u64, u64)>, LinesError> {
    if *m_range.start() < 3 || *l_range.start() < 3 {
        return Err(LinesError::Parameter("exceptional set needs m >= 3, l >= 3".into()));
    }
    let mut out = BTreeSet::new();
    for m in m_range {
        for l in l_range.clone() {
            if is_exceptional(m, l)? {
                out.insert((m, l));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobileRatio {
    pub numerator: BigInt,
    pub denominator: BigInt,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub ratio: Rational,
    /// `ratio − 2/3`
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub margin: Rational,
    pub exceeds_two_thirds: bool,
}

/// `(m!/4·(2l)!/l! − λ) / (2m!/3·(2l−1)!/(l−1)! − λ)` against `2/3`.
pub fn mobile_ratio(m: u64, l: u64) -> Result<MobileRatio, LinesError> {
    if m < 4 || l < 3 {
        return Err(LinesError::Parameter(format!("mobile ratio needs m >= 4, l >= 3 (got m={m}, l={l})")));
    }
    let lambda = lambda_ml(m, l)?;
    // (2l)!/l! = 2·(2l−1)!/(l−1)!
    let numerator = factorial(m) * falling(l) * 2u32 / 4u32 - &lambda;
    let denominator = factorial(m) * 2u32 * falling(l) / 3u32 - &lambda;
    if !denominator.is_positive() {
        return Err(LinesError::Parameter(format!("mobile ratio denominator {denominator} is not positive")));
    }
    let ratio_v = Rational::new(numerator.clone(), denominator.clone());
    let margin = &ratio_v - ratio(2, 3);
    Ok(MobileRatio {
        exceeds_two_thirds: margin.is_positive(),
        numerator,
        denominator,
        ratio: ratio_v,
        margin,
    })
}

/// `2K/3 − 4λ` evaluated at `(m, l)`; identically 4.
pub fn denominator_gap(m: u64, l: u64) -> Result<BigInt, LinesError> {
    Ok(k_factor(m, l) * 2u32 / 3u32 - lambda_ml(m, l)? * 4u32)
}

/// `2K/3 − 4(K/6 − 1) = 4` as polynomials in `K`.
pub fn symbolic_denominator_identity() -> bool {
    let ctx = VarContext::new(["K"]).expect("one variable");
    let k = ctx.var("K").expect("declared");
    let lambda = &(&k * &Polynomial::constant(&ctx, ratio(1, 6))) - 1;
    let head = &k * &Polynomial::constant(&ctx, ratio(2, 3));
    &head - &(&lambda * 4) == Polynomial::constant(&ctx, rat(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthExample {
    pub a: u32,
    pub degree_lower_bound: u128,
    pub conditions: u64,
}

/// `2^a` lines through a point cut by `a(a+1)` conditions.
pub fn lines_growth_example(a: u32) -> Result<GrowthExample, LinesError> {
    let degree_lower_bound = 1u128
        .checked_shl(a)
        .filter(|_| a < 128)
        .ok_or_else(|| LinesError::Parameter(format!("2^{a} does not fit in 128 bits")))?;
    Ok(GrowthExample {
        a,
        degree_lower_bound,
        conditions: a as u64 * (a as u64 + 1),
    })
}
