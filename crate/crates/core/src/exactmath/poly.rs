use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{ExactError, Rational};

static NEXT_CONTEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A set of interned variable names. Every context gets a fresh id, so two
/// contexts with the same names are still distinct.
#[derive(Debug)]
pub struct VarContext {
    id: u64,
    names: Vec<String>,
}

impl VarContext {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, ExactError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(ExactError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(Self {
            id: NEXT_CONTEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            names,
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(self: &Arc<Self>, name: &str) -> Result<Polynomial, ExactError> {
        let idx = self
            .index(name)
            .ok_or_else(|| ExactError::UnknownVariable(name.to_string()))?;
        Ok(Polynomial::variable(self, idx))
    }
}

/// Exponent vector, one entry per context variable. Ordered graded
/// lexicographically: total degree first, then exponents left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for Monomial {
    fn from(v: Vec<u32>) -> Self {
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients. No zero coefficient is
/// ever stored, so structural equality is polynomial equality.
#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rational) -> Self {
        let mut p = Self::zero(ctx);
        p.add_term(Monomial::one(ctx.len()), c);
        p
    }

    pub fn variable(ctx: &Arc<VarContext>, index: usize) -> Self {
        assert!(index < ctx.len(), "variable index out of range");
        let mut exps = vec![0; ctx.len()];
        exps[index] = 1;
        let mut p = Self::zero(ctx);
        p.add_term(Monomial(exps), Rational::one());
        p
    }

    pub fn from_terms<I>(ctx: &Arc<VarContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(ctx);
        for (exps, c) in terms {
            assert_eq!(exps.len(), ctx.len(), "exponent vector length");
            p.add_term(Monomial(exps), c);
        }
        p
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn same_context(&self, other: &Polynomial) -> Result<(), ExactError> {
        if self.ctx.id == other.ctx.id {
            Ok(())
        } else {
            Err(ExactError::ContextMismatch {
                left: self.ctx.id,
                right: other.ctx.id,
            })
        }
    }

    fn expect_same(&self, other: &Polynomial) {
        if let Err(e) = self.same_context(other) {
            panic!("{e}");
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Indices of the variables that actually occur.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    out.insert(i);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.ctx);
        if c.is_zero() {
            return out;
        }
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.ctx, Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Exact value at a full assignment (one value per context variable).
    pub fn eval(&self, values: &[Rational]) -> Result<Rational, ExactError> {
        if values.len() != self.ctx.len() {
            return Err(ExactError::Arity {
                expected: self.ctx.len(),
                got: values.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in values.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replace variable `index` by `value` (a polynomial in the same context).
    pub fn substitute(&self, index: usize, value: &Polynomial) -> Polynomial {
        self.expect_same(value);
        let mut out = Polynomial::zero(&self.ctx);
        let mut powers: Vec<Polynomial> = vec![Polynomial::constant(&self.ctx, Rational::one())];
        for (m, c) in &self.terms {
            let e = m.0[index] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[index] = 0;
            let mut head = Polynomial::zero(&self.ctx);
            head.add_term(rest, c.clone());
            out = &out + &(&head * &powers[e]);
        }
        out
    }

    /// Substitute a rational constant for a variable.
    pub fn substitute_value(&self, index: usize, value: &Rational) -> Polynomial {
        self.substitute(index, &Polynomial::constant(&self.ctx, value.clone()))
    }

    fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(self.ctx.name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

/// Canonical text: terms in descending graded-lex order, every coefficient
/// written explicitly as an integer or `p/q`, e.g. `2*n^2*S_s - 1/4*e + 3`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            write!(f, "{mag}")?;
            if !m.is_one() {
                f.write_str("*")?;
                self.fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[ctx {}]({})", self.ctx.id, self)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.expect_same(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.expect_same(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.expect_same(rhs);
        let mut out = Polynomial::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
        impl $tr<i64> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: i64) -> Polynomial {
                let c = Polynomial::constant(&self.ctx, Rational::from_integer(rhs.into()));
                self.$method(&c)
            }
        }
        impl $tr<i64> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: i64) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
