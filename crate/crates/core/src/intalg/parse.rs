//! Recursive-descent parser for the set DSL.
//!
//! ```text
//! set   := term {("|" | "&" | "\") term}
//! term  := "periodic(" ints ";" INT ")" | "blocks(" sched "," END "," END ")"
//!        | "interval(" INT "," INT ")" | "shift(" set "," INT ")" | "(" set ")"
//! sched := "geom(" INT "," INT ")" | "superexp(" INT ")" | "tower(" INT ")"
//!        | "rec3(" INT ")" | "list(" ints ")"
//! END   := INT ["/" INT] | "a"
//! ```
//!
//! Binary operators are left-associative with equal precedence. The endpoint
//! `a` stands for the companion value `a_n` of a `rec3` schedule.

use crate::error::{Error, Result};

use super::interval::BoolOp;
use super::schedule::Schedule;
use super::structured::{Endpoint, Frac, StructuredSet};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self
                .peek()
                .map_or("end of input".to_string(), |f| format!("'{f}'"));
            err(self.pos, format!("expected '{c}', found {found}"))
        }
    }

    fn word(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(rest.len());
        self.pos += len;
        (start, &rest[..len])
    }

    fn int(&mut self) -> Result<i128> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let sign = usize::from(rest.starts_with('-') || rest.starts_with('+'));
        let digits = rest[sign..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - sign);
        if digits == 0 {
            return err(start, "expected an integer");
        }
        self.pos += sign + digits;
        rest[..sign + digits]
            .parse()
            .or_else(|_| err(start, "integer out of range"))
    }

    fn uint(&mut self) -> Result<u128> {
        let start = self.pos;
        let v = self.int()?;
        u128::try_from(v).or_else(|_| err(start, "expected a nonnegative integer"))
    }

    fn count(&mut self) -> Result<usize> {
        let start = self.pos;
        let v = self.uint()?;
        usize::try_from(v).or_else(|_| err(start, "count out of range"))
    }

    fn uints(&mut self) -> Result<Vec<u128>> {
        let mut out = vec![self.uint()?];
        while self.eat(',') {
            out.push(self.uint()?);
        }
        Ok(out)
    }

    fn set(&mut self) -> Result<StructuredSet> {
        let mut left = self.term()?;
        loop {
            let op = match self.peek() {
                Some('|') => BoolOp::Union,
                Some('&') => BoolOp::Intersect,
                Some('\\') => BoolOp::Diff,
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.term()?;
            left = StructuredSet::binary(op, left, right);
        }
    }

    fn term(&mut self) -> Result<StructuredSet> {
        if self.eat('(') {
            let s = self.set()?;
            self.expect(')')?;
            return Ok(s);
        }
        let (start, name) = self.word();
        let node = match name {
            "periodic" => {
                self.expect('(')?;
                let residues = if self.peek() == Some(';') {
                    Vec::new()
                } else {
                    self.uints()?
                };
                self.expect(';')?;
                let at = self.pos;
                let modulus = self.uint()?;
                if modulus == 0 {
                    return err(at, "modulus must be positive");
                }
                StructuredSet::Periodic { residues, modulus }
            }
            "blocks" => {
                self.expect('(')?;
                let schedule = self.schedule()?;
                self.expect(',')?;
                let lo = self.endpoint()?;
                self.expect(',')?;
                let hi = self.endpoint()?;
                StructuredSet::Blocks { schedule, lo, hi }
            }
            "interval" => {
                self.expect('(')?;
                let lo = self.uint()?;
                self.expect(',')?;
                let hi = self.uint()?;
                StructuredSet::Interval { lo, hi }
            }
            "shift" => {
                self.expect('(')?;
                let set = Box::new(self.set()?);
                self.expect(',')?;
                let by = self.int()?;
                StructuredSet::Shift { set, by }
            }
            "" => return err(start, "expected a set term"),
            other => return err(start, format!("unknown set constructor '{other}'")),
        };
        self.expect(')')?;
        Ok(node)
    }

    fn schedule(&mut self) -> Result<Schedule> {
        let (start, name) = self.word();
        self.expect('(')?;
        let s = match name {
            "geom" => {
                let base = self.uint()?;
                self.expect(',')?;
                Schedule::Geometric {
                    base,
                    count: self.count()?,
                }
            }
            "superexp" => Schedule::Superexp {
                count: self.count()?,
            },
            "tower" => Schedule::Tower {
                count: self.count()?,
            },
            "rec3" => Schedule::Rec3 {
                count: self.count()?,
            },
            "list" => Schedule::List {
                values: self.uints()?,
            },
            other => return err(start, format!("unknown schedule '{other}'")),
        };
        self.expect(')')?;
        if let Err(e) = s.values() {
            return match e {
                Error::Overflow(_) => Err(e),
                _ => err(start, e.to_string()),
            };
        }
        Ok(s)
    }

    fn endpoint(&mut self) -> Result<Endpoint> {
        if self.peek() == Some('a') {
            let (start, w) = self.word();
            if w != "a" {
                return err(start, format!("unknown endpoint '{w}'"));
            }
            return Ok(Endpoint::Companion);
        }
        let num = self.uint()?;
        if self.eat('/') {
            let at = self.pos;
            let den = self.uint()?;
            if den == 0 {
                return err(at, "zero denominator");
            }
            return Ok(Endpoint::Frac(Frac::new(num, den)?));
        }
        Ok(Endpoint::Frac(Frac::integer(num)))
    }
}

/// Parses a set expression.
pub fn parse_set(text: &str) -> Result<StructuredSet> {
    let mut p = Parser { src: text, pos: 0 };
    let s = p.set()?;
    if p.peek().is_some() {
        return err(p.pos, "unexpected trailing input");
    }
    if let StructuredSet::Blocks {
        lo: Endpoint::Frac(a),
        hi: Endpoint::Frac(b),
        ..
    } = &s
    {
        if a.num.checked_mul(b.den) > b.num.checked_mul(a.den) {
            return err(0, format!("block endpoints need p <= q, got {a} > {b}"));
        }
    }
    s.validate()?;
    Ok(s)
}

/// Parses a schedule expression such as `superexp(10)`.
pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let mut p = Parser { src: text, pos: 0 };
    let s = p.schedule()?;
    if p.peek().is_some() {
        return err(p.pos, "unexpected trailing input");
    }
    Ok(s)
}
