use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed};

use super::{Polynomial, Rational};

/// A factor whose value is nonnegative on the region a certificate talks about.
#[derive(Debug, Clone)]
pub enum Generator {
    /// `q^2`, nonnegative unconditionally.
    Square(Polynomial),
    /// A single variable, which must be among the declared nonnegative ones.
    Var(usize),
    /// A polynomial assumed nonnegative, e.g. `4 - k_h` or `S_s - p_1`.
    Assumed { label: String, poly: Polynomial },
}

impl Generator {
    pub fn assumed(label: impl Into<String>, poly: Polynomial) -> Self {
        Generator::Assumed {
            label: label.into(),
            poly,
        }
    }

    /// The polynomial this generator contributes as a factor.
    pub fn expand(&self, like: &Polynomial) -> Polynomial {
        match self {
            Generator::Square(q) => q * q,
            Generator::Var(i) => Polynomial::variable(like.context(), *i),
            Generator::Assumed { poly, .. } => poly.clone(),
        }
    }

    fn describe(&self) -> String {
        match self {
            Generator::Square(q) => format!("({q})^2"),
            Generator::Var(i) => format!("var#{i}"),
            Generator::Assumed { label, .. } => label.clone(),
        }
    }
}

/// `product(generators) * multiplier`, with the multiplier expected to have
/// nonnegative coefficients.
#[derive(Debug, Clone)]
pub struct Part {
    pub generators: Vec<Generator>,
    pub multiplier: Polynomial,
}

impl Part {
    pub fn new(generators: Vec<Generator>, multiplier: Polynomial) -> Self {
        Self {
            generators,
            multiplier,
        }
    }

    /// A part that is just `q^2`.
    pub fn square(q: Polynomial) -> Self {
        let one = Polynomial::constant(q.context(), Rational::one());
        Part::new(vec![Generator::Square(q)], one)
    }

    pub fn expand(&self) -> Polynomial {
        let mut acc = self.multiplier.clone();
        for g in &self.generators {
            acc = &acc * &g.expand(&self.multiplier);
        }
        acc
    }
}

/// A claimed decomposition `target = sum of parts`.
#[derive(Debug, Clone)]
pub struct NonnegCombination {
    pub target: Polynomial,
    pub parts: Vec<Part>,
}

impl NonnegCombination {
    pub fn new(target: Polynomial, parts: Vec<Part>) -> Self {
        Self { target, parts }
    }

    pub fn sum_of_parts(&self) -> Polynomial {
        self.parts
            .iter()
            .fold(Polynomial::zero(self.target.context()), |acc, p| &acc + &p.expand())
    }

    /// Labels of all `Assumed` generators, deduplicated, in first-use order.
    pub fn assumptions(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for p in &self.parts {
            for g in &p.generators {
                if let Generator::Assumed { label, .. } = g {
                    if seen.insert(label.clone()) {
                        out.push(label.clone());
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationCheck {
    pub holds: bool,
    pub diagnostics: Vec<String>,
}

impl fmt::Display for CombinationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            f.write_str("verified")
        } else {
            write!(f, "rejected: {}", self.diagnostics.join("; "))
        }
    }
}

/// Checks that the parts sum exactly to the target and that every part is
/// visibly nonnegative once the generators are: multiplier coefficients are
/// nonnegative, and any variable with an odd exponent in the multiplier is
/// declared nonnegative. A positive result certifies `target >= 0` wherever
/// all generators are nonnegative.
pub fn check_nonneg_combination(c: &NonnegCombination, nonneg_vars: &BTreeSet<usize>) -> CombinationCheck {
    let mut diagnostics = Vec::new();
    for (k, part) in c.parts.iter().enumerate() {
        if let Err(e) = part.multiplier.same_context(&c.target) {
            diagnostics.push(format!("part {k}: {e}"));
            continue;
        }
        for g in &part.generators {
            match g {
                Generator::Var(i) if !nonneg_vars.contains(i) => {
                    let name = c.target.context().names().get(*i).cloned().unwrap_or_default();
                    diagnostics.push(format!("part {k}: generator variable `{name}` is not declared nonnegative"));
                }
                Generator::Square(q) | Generator::Assumed { poly: q, .. } => {
                    if let Err(e) = q.same_context(&c.target) {
                        diagnostics.push(format!("part {k}: generator {}: {e}", g.describe()));
                    }
                }
                _ => {}
            }
        }
        for (m, coef) in part.multiplier.terms() {
            if coef.is_negative() {
                diagnostics.push(format!("part {k}: multiplier has negative coefficient {coef}"));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                if e % 2 == 1 && !nonneg_vars.contains(&i) {
                    diagnostics.push(format!(
                        "part {k}: multiplier uses `{}` with odd exponent but it is not declared nonnegative",
                        c.target.context().name(i)
                    ));
                }
            }
        }
    }
    if diagnostics.is_empty() {
        let residual = &c.target - &c.sum_of_parts();
        if !residual.is_zero() {
            diagnostics.push(format!("target minus parts leaves {residual}"));
        }
    }
    CombinationCheck {
        holds: diagnostics.is_empty(),
        diagnostics,
    }
}
