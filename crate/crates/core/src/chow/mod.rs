//! Intersection numbers on `X = P(E)` over the line and on the double
//! cover `V` of a hypersurface `Q ⊂ X` (or of `X` itself for double spaces).
//!
//! The ambient ring is `Z[ξ, R] / (R², ξ^r − a_X·ξ^{r−1}·R)` where `ξ` is
//! the tautological class, `R` a fiber, `r = rank E = dim X` and
//! `a_X = Σ a_i`. A class on `V` written in the `{L_V, F}` basis is pulled
//! back from `X`, so its top intersections are computed on `X` against the
//! class of `Q` and doubled.

mod expr;
mod family;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::Rational;

pub use expr::{parse_class_expr, ClassExpr};
pub use family::{FamilyKind, FamilyParams, ParseFamilyError};

/// Degree of `V → Q` (or `V → X`).
pub const COVER_DEGREE: i64 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("total codimension {got} does not match dim V = {expected}")]
    Dimension { expected: u32, got: u32 },
    #[error("invalid family parameters: {0}")]
    Family(String),
    #[error("class expression: {0}")]
    Expr(String),
}

/// Element of the ambient Chow ring, stored as `(ξ-exponent, R-exponent) → coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AmbientClass {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl AmbientClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    pub fn monomial(xi: u32, r: u32, coef: impl Into<BigInt>) -> Self {
        let mut c = Self::zero();
        c.add_term(xi, r, coef.into());
        c
    }

    /// `α·ξ + β·R`
    pub fn divisor(alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Self {
        let mut c = Self::zero();
        c.add_term(1, 0, alpha.into());
        c.add_term(0, 1, beta.into());
        c
    }

    fn add_term(&mut self, xi: u32, r: u32, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry((xi, r)).or_insert_with(BigInt::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&(xi, r));
        }
    }

    pub fn coefficient(&self, xi: u32, r: u32) -> BigInt {
        self.terms.get(&(xi, r)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(x, r), c) in &other.terms {
            out.add_term(x, r, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        for (&(x, r), c) in &self.terms {
            out.add_term(x, r, c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(xa, ra), ca) in &self.terms {
            for (&(xb, rb), cb) in &other.terms {
                out.add_term(xa + xb, ra + rb, ca * cb);
            }
        }
        out
    }

    /// Highest codimension among the terms.
    pub fn codim(&self) -> u32 {
        self.terms.keys().map(|(x, r)| x + r).max().unwrap_or(0)
    }
}

impl fmt::Display for AmbientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(x, r), c)| match (x, r) {
                (0, 0) => format!("{c}"),
                (x, 0) => format!("{c}*xi^{x}"),
                (0, r) => format!("{c}*R^{r}"),
                (x, r) => format!("{c}*xi^{x}*R^{r}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `reduce_ambient`: apply `R² = 0` and `ξ^r = a_X·ξ^{r−1}·R` until no
/// term can be rewritten. Idempotent and linear.
pub fn reduce_ambient(c: &AmbientClass, fp: &FamilyParams) -> AmbientClass {
    let rank = fp.ambient_dim();
    let a_x = BigInt::from(fp.a_x());
    let mut pending: Vec<((u32, u32), BigInt)> = c.terms.iter().map(|(k, v)| (*k, v.clone())).collect();
    let mut out = AmbientClass::zero();
    while let Some(((x, r), coef)) = pending.pop() {
        if r >= 2 {
            continue;
        }
        if x >= rank {
            // ξ^x R^r = a_X ξ^{x-1} R^{r+1}
            pending.push(((x - 1, r + 1), coef * &a_x));
            continue;
        }
        out.add_term(x, r, coef);
    }
    out
}

/// A class on `V` of codimension one or two in the bases used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FiberwiseClass {
    /// `l·L_V + f·F`
    Divisor { l: i64, f: i64 },
    /// `k2·K_V² + h·H_F`
    Codim2 { k2: i64, h: i64 },
}

impl FiberwiseClass {
    pub const L: FiberwiseClass = FiberwiseClass::Divisor { l: 1, f: 0 };
    pub const F: FiberwiseClass = FiberwiseClass::Divisor { l: 0, f: 1 };

    pub fn divisor(l: i64, f: i64) -> Self {
        FiberwiseClass::Divisor { l, f }
    }

    /// Coordinates `(κ, φ)` with the divisor equal to `κ·K_V + φ·F`.
    pub fn to_canonical_basis(&self, fp: &FamilyParams) -> Option<(i64, i64)> {
        match *self {
            FiberwiseClass::Divisor { l, f } => {
                // L = −K + bF with b = a_X + a_Q + a_W − 2
                let b = fp.canonical_twist();
                Some((-l, l * b + f))
            }
            FiberwiseClass::Codim2 { .. } => None,
        }
    }

    pub fn from_canonical_basis(kappa: i64, phi: i64, fp: &FamilyParams) -> Self {
        // K = −L + bF
        let b = fp.canonical_twist();
        FiberwiseClass::Divisor {
            l: -kappa,
            f: kappa * b + phi,
        }
    }

    fn as_divisor(&self) -> Option<(i64, i64)> {
        match *self {
            FiberwiseClass::Divisor { l, f } => Some((l, f)),
            FiberwiseClass::Codim2 { .. } => None,
        }
    }
}

impl fmt::Display for FiberwiseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FiberwiseClass::Divisor { l, f: ff } => write!(f, "{l}*L_V + {ff}*F"),
            FiberwiseClass::Codim2 { k2, h } => write!(f, "{k2}*K_V^2 + {h}*H_F"),
        }
    }
}

/// `top_intersection_V`: the intersection number of divisor classes on `V`
/// whose count equals `dim V`.
pub fn top_intersection_v(classes: &[FiberwiseClass], fp: &FamilyParams) -> Result<BigInt, ChowError> {
    let dim_v = fp.dim_v();
    let mut product = AmbientClass::one();
    for c in classes {
        let (l, f) = c
            .as_divisor()
            .ok_or_else(|| ChowError::Expr(format!("{c} is not a divisor class")))?;
        product = product.mul(&AmbientClass::divisor(l, f));
    }
    let got = classes.len() as u32;
    if got != dim_v {
        return Err(ChowError::Dimension { expected: dim_v, got });
    }
    intersect_ambient_on_v(&product, fp)
}

/// Push a codimension-`dim V` ambient class (already restricted to `V`)
/// down to `X` and read off the degree.
pub fn intersect_ambient_on_v(product: &AmbientClass, fp: &FamilyParams) -> Result<BigInt, ChowError> {
    let dim_v = fp.dim_v();
    if !product.is_zero() && product.codim() != dim_v {
        return Err(ChowError::Dimension {
            expected: dim_v,
            got: product.codim(),
        });
    }
    let on_x = match fp.kind {
        FamilyKind::DoubleHypersurface => {
            let (m, a_q) = (fp.m.unwrap_or(0), fp.a_q.unwrap_or(0));
            product.mul(&AmbientClass::divisor(m, a_q))
        }
        FamilyKind::DoubleSpace => product.clone(),
    };
    let reduced = reduce_ambient(&on_x, fp);
    let point = reduced.coefficient(fp.ambient_dim() - 1, 1);
    Ok(point * BigInt::from(COVER_DEGREE))
}

/// Pairing of a codimension-two class with `L_V^{M−1}`.
pub fn pair_with_l_power(c: &FiberwiseClass, fp: &FamilyParams) -> Result<BigInt, ChowError> {
    match *c {
        FiberwiseClass::Codim2 { k2, h } => {
            Ok(BigInt::from(k2) * k2_number(fp) + BigInt::from(h) * degree_v(fp))
        }
        FiberwiseClass::Divisor { .. } => Err(ChowError::Dimension {
            expected: 2,
            got: 1,
        }),
    }
}

/// `K_V = −L_V + (a_X + a_Q + a_W − 2)·F`, as `(−1, b)` in `{L_V, F}`.
pub fn canonical_class(fp: &FamilyParams) -> FiberwiseClass {
    FiberwiseClass::Divisor {
        l: -1,
        f: fp.canonical_twist(),
    }
}

fn l_power_classes(k: u32) -> Vec<FiberwiseClass> {
    vec![FiberwiseClass::L; k as usize]
}

/// `(K_V² · L_V^{M−1})`, computed in the ring.
pub fn k2_number(fp: &FamilyParams) -> BigInt {
    let k = canonical_class(fp);
    let mut classes = vec![k, k];
    classes.extend(l_power_classes(fp.dim_v() - 2));
    top_intersection_v(&classes, fp).expect("dimension is dim V by construction")
}

/// `(H_F · L_V^{M−1}) = (F · L_V^M)`, the degree of a fiber.
pub fn degree_v(fp: &FamilyParams) -> BigInt {
    let mut classes = vec![FiberwiseClass::F];
    classes.extend(l_power_classes(fp.dim_v() - 1));
    top_intersection_v(&classes, fp).expect("dimension is dim V by construction")
}

/// Closed form of `(K_V² · L_V^{M−1})`: `2m(4 − a_X − 2a_Q − 2a_W) + 2a_Q`
/// for double hypersurfaces, `8 − 2a_X − 4a_W` for double spaces.
pub fn k2_closed_form(fp: &FamilyParams) -> BigInt {
    let a_x = fp.a_x();
    let a_w = fp.a_w;
    match fp.kind {
        FamilyKind::DoubleHypersurface => {
            let m = fp.m.unwrap_or(0);
            let a_q = fp.a_q.unwrap_or(0);
            BigInt::from(2 * m * (4 - a_x - 2 * a_q - 2 * a_w) + 2 * a_q)
        }
        FamilyKind::DoubleSpace => BigInt::from(8 - 2 * a_x - 4 * a_w),
    }
}

/// Evaluate a parsed class-monomial expression (see [`parse_class_expr`]).
pub fn eval_class_expr(expr: &ClassExpr, fp: &FamilyParams) -> Result<BigInt, ChowError> {
    let mut product = AmbientClass::one();
    let mut codim = 0u32;
    for (factor, power) in expr.factors() {
        let exp = power.resolve(fp)?;
        let (base, base_codim) = match *factor {
            expr::Factor::Divisor { k, l, f } => {
                let b = fp.canonical_twist();
                // kK + lL + fF with K = −L + bF
                (AmbientClass::divisor(l - k, f + k * b), 1)
            }
            // H_F = (−K·F) = L·F since F² = 0
            expr::Factor::HyperplaneOfFiber => (AmbientClass::monomial(1, 1, 1), 2),
        };
        for _ in 0..exp {
            product = product.mul(&base);
        }
        codim += base_codim * exp;
    }
    if codim != fp.dim_v() {
        return Err(ChowError::Dimension {
            expected: fp.dim_v(),
            got: codim,
        });
    }
    intersect_ambient_on_v(&product, fp)
}

/// `k2 / deg V` as an exact rational.
pub fn k2_over_degree(fp: &FamilyParams) -> Rational {
    Rational::new(k2_number(fp), degree_v(fp))
}
