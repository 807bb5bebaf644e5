use std::fmt;

use num::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

use super::interval::{BoolOp, IntervalUnion};
use super::pattern::Pattern;
use super::schedule::Schedule;
use super::segments::{SegmentSet, DEFAULT_INTERVAL_BUDGET};

/// A nonnegative rational `num/den` used for block endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Frac {
    pub num: u128,
    pub den: u128,
}

impl Frac {
    pub fn new(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = num.gcd(&den).max(1);
        Ok(Frac {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(n: u128) -> Self {
        Frac { num: n, den: 1 }
    }

    /// `⌊(num/den)·s⌋`.
    pub fn floor_mul(self, s: u128) -> Result<u128> {
        let whole = (s / self.den).checked_mul(self.num);
        let part = (s % self.den).checked_mul(self.num).map(|p| p / self.den);
        whole
            .zip(part)
            .and_then(|(w, p)| w.checked_add(p))
            .ok_or(Error::Overflow("block endpoint"))
    }

    /// `⌈(num/den)·s⌉`.
    pub fn ceil_mul(self, s: u128) -> Result<u128> {
        let whole = (s / self.den).checked_mul(self.num);
        let part = (s % self.den)
            .checked_mul(self.num)
            .map(|p| p.div_ceil(self.den));
        whole
            .zip(part)
            .and_then(|(w, p)| w.checked_add(p))
            .ok_or(Error::Overflow("block endpoint"))
    }

    fn le(self, other: Frac) -> bool {
        match (
            self.num.checked_mul(other.den),
            other.num.checked_mul(self.den),
        ) {
            (Some(a), Some(b)) => a <= b,
            _ => (self.num as f64 / self.den as f64) <= (other.num as f64 / other.den as f64),
        }
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A block endpoint: a multiple of `s_n`, or the schedule's companion value `a_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Frac(Frac),
    Companion,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Frac(p) => p.fmt(f),
            Endpoint::Companion => write!(f, "a"),
        }
    }
}

/// Symbolic subsets of ℕ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum StructuredSet {
    /// `{x >= 0 : x mod modulus ∈ residues}`.
    Periodic {
        residues: Vec<u128>,
        modulus: u128,
    },
    /// `⋃_n [lo_n, hi_n]` with `lo_n = ⌈p·s_n⌉` (or `a_n`) and `hi_n = ⌊q·s_n⌋`.
    Blocks {
        schedule: Schedule,
        lo: Endpoint,
        hi: Endpoint,
    },
    Interval {
        lo: u128,
        hi: u128,
    },
    /// `(S + t) ∩ ℕ`.
    Shift {
        set: Box<StructuredSet>,
        by: i128,
    },
    Binary {
        op: BoolOp,
        left: Box<StructuredSet>,
        right: Box<StructuredSet>,
    },
}

impl StructuredSet {
    pub fn periodic(residues: &[u128], modulus: u128) -> Self {
        StructuredSet::Periodic {
            residues: residues.to_vec(),
            modulus,
        }
    }

    pub fn blocks(schedule: Schedule, p: Frac, q: Frac) -> Self {
        StructuredSet::Blocks {
            schedule,
            lo: Endpoint::Frac(p),
            hi: Endpoint::Frac(q),
        }
    }

    pub fn binary(op: BoolOp, left: StructuredSet, right: StructuredSet) -> Self {
        StructuredSet::Binary {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Checks parameters and that every schedule materializes.
    pub fn validate(&self) -> Result<()> {
        match self {
            StructuredSet::Periodic { modulus, .. } => self.pattern(*modulus).map(|_| ()),
            StructuredSet::Blocks { .. } => self.block_list().map(|_| ()),
            StructuredSet::Interval { .. } => Ok(()),
            StructuredSet::Shift { set, .. } => set.validate(),
            StructuredSet::Binary { left, right, .. } => left.validate().and(right.validate()),
        }
    }

    fn pattern(&self, modulus: u128) -> Result<Option<std::sync::Arc<Pattern>>> {
        let StructuredSet::Periodic { residues, .. } = self else {
            unreachable!()
        };
        if modulus == 0 || modulus > super::pattern::PATTERN_MAX_MODULUS as u128 {
            return Err(Error::InvalidInput(format!(
                "periodic modulus must be in [1, {}]",
                super::pattern::PATTERN_MAX_MODULUS
            )));
        }
        Pattern::new(modulus as usize, residues)
    }

    /// The blocks `[lo_n, hi_n]` in schedule order (empty blocks dropped).
    pub fn block_list(&self) -> Result<Vec<(u128, u128)>> {
        let StructuredSet::Blocks { schedule, lo, hi } = self else {
            return Err(Error::InvalidInput("not a block set".into()));
        };
        if let (Endpoint::Frac(p), Endpoint::Frac(q)) = (lo, hi) {
            if !p.le(*q) {
                return Err(Error::InvalidInput(format!(
                    "block endpoints need p <= q, got {p} > {q}"
                )));
            }
        }
        let s = schedule.values()?;
        let companions = if matches!(lo, Endpoint::Companion) || matches!(hi, Endpoint::Companion) {
            schedule.companions()?
        } else {
            Vec::new()
        };
        let mut out = Vec::with_capacity(s.len());
        for (n, &sn) in s.iter().enumerate() {
            let a = match lo {
                Endpoint::Frac(p) => p.ceil_mul(sn)?,
                Endpoint::Companion => companions[n],
            };
            let b = match hi {
                Endpoint::Frac(q) => q.floor_mul(sn)?,
                Endpoint::Companion => companions[n],
            };
            if a <= b {
                out.push((a, b));
            }
        }
        Ok(out)
    }

    /// Direct membership test from the definition.
    pub fn contains(&self, x: u128) -> Result<bool> {
        Ok(match self {
            StructuredSet::Periodic { residues, modulus } => {
                *modulus > 0 && residues.iter().any(|r| r % modulus == x % modulus)
            }
            StructuredSet::Blocks { .. } => {
                self.block_list()?.iter().any(|&(a, b)| a <= x && x <= b)
            }
            StructuredSet::Interval { lo, hi } => *lo <= x && x <= *hi,
            StructuredSet::Shift { set, by } => {
                let y = x as i128 - by;
                y >= 0 && set.contains(y as u128)?
            }
            StructuredSet::Binary { op, left, right } => {
                op.apply(left.contains(x)?, right.contains(x)?)
            }
        })
    }

    /// `S ∩ [lo, hi]` in piecewise-periodic form.
    pub fn segments(&self, lo: u128, hi: u128) -> Result<SegmentSet> {
        if lo > hi {
            return Ok(SegmentSet::empty());
        }
        match self {
            StructuredSet::Periodic { modulus, .. } => Ok(match self.pattern(*modulus)? {
                Some(p) => SegmentSet::periodic(p, lo, hi),
                None => SegmentSet::empty(),
            }),
            StructuredSet::Blocks { .. } => {
                let u = IntervalUnion::new(self.block_list()?);
                Ok(SegmentSet::from_intervals(&u.clip(lo, hi)))
            }
            StructuredSet::Interval { lo: a, hi: b } => {
                Ok(SegmentSet::interval((*a).max(lo), (*b).min(hi)))
            }
            StructuredSet::Shift { set, by } => {
                let inner_lo = (lo as i128).saturating_sub(*by).max(0) as u128;
                let inner_hi = (hi as i128).saturating_sub(*by);
                if inner_hi < 0 {
                    return Ok(SegmentSet::empty());
                }
                Ok(set
                    .segments(inner_lo, inner_hi as u128)?
                    .shift(*by)?
                    .clip(lo, hi))
            }
            StructuredSet::Binary { op, left, right } => left
                .segments(lo, hi)?
                .boolean(&right.segments(lo, hi)?, *op),
        }
    }

    /// `|S ∩ [lo, hi]|` without materializing intervals.
    pub fn count(&self, lo: u128, hi: u128) -> Result<u128> {
        Ok(self.segments(lo, hi)?.count())
    }

    /// The periodic part that governs the set's density, when there is one:
    /// `(modulus, residues)` of the first `Periodic` leaf met in the tree.
    pub fn periodic_component(&self) -> Option<(u128, Vec<u128>)> {
        match self {
            StructuredSet::Periodic { residues, modulus } => Some((*modulus, residues.clone())),
            StructuredSet::Shift { set, .. } => set.periodic_component(),
            StructuredSet::Binary { left, right, .. } => left
                .periodic_component()
                .or_else(|| right.periodic_component()),
            _ => None,
        }
    }

    /// Whether the tree contains a `Periodic` leaf.
    pub fn has_periodic(&self) -> bool {
        self.periodic_component().is_some()
    }

    /// Whether the set is a union of residue classes with no block structure.
    pub fn is_purely_periodic(&self) -> bool {
        match self {
            StructuredSet::Periodic { .. } => true,
            StructuredSet::Binary { left, right, .. } => {
                left.is_purely_periodic() && right.is_purely_periodic()
            }
            _ => false,
        }
    }

    /// Breakpoints of the structure inside `[lo, hi]`: block and interval ends.
    pub fn breakpoints(&self, lo: u128, hi: u128) -> Result<Vec<u128>> {
        let mut out = Vec::new();
        for s in self.segments(lo, hi)?.segments() {
            out.push(s.lo);
            out.push(s.hi);
        }
        Ok(out)
    }
}

/// `S ∩ [lo, hi]` as intervals, with the default budget.
pub fn to_intervals(s: &StructuredSet, lo: u128, hi: u128) -> Result<IntervalUnion> {
    to_intervals_with_budget(s, lo, hi, DEFAULT_INTERVAL_BUDGET)
}

pub fn to_intervals_with_budget(
    s: &StructuredSet,
    lo: u128,
    hi: u128,
    budget: usize,
) -> Result<IntervalUnion> {
    s.segments(lo, hi)?.materialize(budget)
}

impl fmt::Display for StructuredSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuredSet::Periodic { residues, modulus } => {
                let r: Vec<String> = residues.iter().map(|x| x.to_string()).collect();
                write!(f, "periodic({};{modulus})", r.join(","))
            }
            StructuredSet::Blocks { schedule, lo, hi } => write!(f, "blocks({schedule},{lo},{hi})"),
            StructuredSet::Interval { lo, hi } => write!(f, "interval({lo},{hi})"),
            StructuredSet::Shift { set, by } => write!(f, "shift({set},{by})"),
            StructuredSet::Binary { op, left, right } => {
                write!(f, "({left}{}{right})", op.symbol())
            }
        }
    }
}
