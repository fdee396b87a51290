//! Monomials in divisor classes on `V`, e.g. `K^2 L^(M-1)` or
//! `(L-2F)*(L-F)*L^(M-1)`. `H` stands for `H_F`; `_V`/`_F` suffixes are
//! accepted and ignored.

use super::{ChowError, FamilyParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// `k·K + l·L + f·F`
    Divisor { k: i64, l: i64, f: i64 },
    HyperplaneOfFiber,
}

/// Exponent, possibly relative to `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Power {
    Const(i64),
    RelativeToM(i64),
}

impl Power {
    pub fn resolve(&self, fp: &FamilyParams) -> Result<u32, ChowError> {
        let v = match *self {
            Power::Const(c) => c,
            Power::RelativeToM(off) => fp.big_m() as i64 + off,
        };
        u32::try_from(v).map_err(|_| ChowError::Expr(format!("exponent {v} is negative")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExpr {
    factors: Vec<(Factor, Power)>,
}

impl ClassExpr {
    pub fn factors(&self) -> impl Iterator<Item = (&Factor, &Power)> {
        self.factors.iter().map(|(f, p)| (f, p))
    }
}

pub fn parse_class_expr(input: &str) -> Result<ClassExpr, ChowError> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
    };
    let mut factors = Vec::new();
    loop {
        p.skip_ws();
        if p.peek() == Some('*') || p.peek() == Some('.') {
            p.pos += 1;
            continue;
        }
        if p.peek().is_none() {
            break;
        }
        let base = p.atom()?;
        p.skip_ws();
        let power = if p.eat('^') { p.power()? } else { Power::Const(1) };
        factors.push((base, power));
    }
    if factors.is_empty() {
        return Err(ChowError::Expr("empty expression".into()));
    }
    Ok(ClassExpr { factors })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, what: &str) -> Result<T, ChowError> {
        Err(ChowError::Expr(format!("{what} at position {}", self.pos)))
    }

    fn int(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn symbol(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.peek()?;
        if !matches!(c, 'K' | 'L' | 'F' | 'H') {
            return None;
        }
        self.pos += 1;
        if self.peek() == Some('_') && matches!(self.chars.get(self.pos + 1), Some('V' | 'F')) {
            self.pos += 2;
        }
        Some(c)
    }

    fn atom(&mut self) -> Result<Factor, ChowError> {
        if self.eat('(') {
            let f = self.linear()?;
            if !self.eat(')') {
                return self.fail("expected `)`");
            }
            return Ok(f);
        }
        match self.symbol() {
            Some('H') => Ok(Factor::HyperplaneOfFiber),
            Some(c) => Ok(unit(c)),
            None => self.fail("expected K, L, F, H or `(`"),
        }
    }

    fn linear(&mut self) -> Result<Factor, ChowError> {
        let (mut k, mut l, mut f) = (0, 0, 0);
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                -1
            } else if self.eat('+') || first {
                1
            } else {
                break;
            };
            first = false;
            let coef = self.int();
            self.eat('*');
            let c = match self.symbol() {
                Some('H') => return self.fail("H_F is not a divisor"),
                Some(c) => c,
                None => return self.fail("expected K, L or F"),
            };
            let v = sign * coef.unwrap_or(1);
            match c {
                'K' => k += v,
                'L' => l += v,
                _ => f += v,
            }
            self.skip_ws();
            if self.peek() == Some(')') {
                break;
            }
        }
        Ok(Factor::Divisor { k, l, f })
    }

    fn power(&mut self) -> Result<Power, ChowError> {
        let paren = self.eat('(');
        let pw = if let Some(c) = self.int() {
            Power::Const(c)
        } else if self.eat('M') {
            let off = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                0
            };
            let k = if off != 0 {
                match self.int() {
                    Some(k) => k,
                    None => return self.fail("expected integer offset"),
                }
            } else {
                0
            };
            Power::RelativeToM(off * k)
        } else {
            return self.fail("expected exponent");
        };
        if paren && !self.eat(')') {
            return self.fail("expected `)` after exponent");
        }
        Ok(pw)
    }
}

fn unit(c: char) -> Factor {
    match c {
        'K' => Factor::Divisor { k: 1, l: 0, f: 0 },
        'L' => Factor::Divisor { k: 0, l: 1, f: 0 },
        _ => Factor::Divisor { k: 0, l: 0, f: 1 },
    }
}
