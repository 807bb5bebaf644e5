use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{capacity, Error, Result};

/// Pairwise interval sums allowed in one [`iu_sumset`] call.
pub const SUMSET_MAX_PAIRS: usize = 1 << 26;

/// A finite subset of ℕ as sorted, disjoint, non-adjacent closed intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalUnion {
    intervals: Vec<(u128, u128)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    /// Normalizes an arbitrary list of intervals; empty ones (`a > b`) are dropped.
    pub fn new(mut intervals: Vec<(u128, u128)>) -> Self {
        intervals.retain(|&(a, b)| a <= b);
        intervals.sort_unstable();
        let mut out: Vec<(u128, u128)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match out.last_mut() {
                Some(last) if a <= last.1.saturating_add(1) => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn interval(a: u128, b: u128) -> Self {
        Self::new(vec![(a, b)])
    }

    pub fn from_points(points: impl IntoIterator<Item = u128>) -> Self {
        Self::new(points.into_iter().map(|x| (x, x)).collect())
    }

    pub fn intervals(&self) -> &[(u128, u128)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn min(&self) -> Option<u128> {
        self.intervals.first().map(|i| i.0)
    }

    pub fn max(&self) -> Option<u128> {
        self.intervals.last().map(|i| i.1)
    }

    /// Total cardinality.
    pub fn count(&self) -> u128 {
        self.intervals.iter().map(|&(a, b)| b - a + 1).sum()
    }

    pub fn contains(&self, x: u128) -> bool {
        let i = self.intervals.partition_point(|&(_, b)| b < x);
        i < self.intervals.len() && self.intervals[i].0 <= x
    }

    /// Intersection with `[lo, hi]`.
    pub fn clip(&self, lo: u128, hi: u128) -> IntervalUnion {
        let start = self.intervals.partition_point(|&(_, b)| b < lo);
        let intervals = self.intervals[start..]
            .iter()
            .take_while(|&&(a, _)| a <= hi)
            .map(|&(a, b)| (a.max(lo), b.min(hi)))
            .collect();
        IntervalUnion { intervals }
    }

    pub fn iter(&self) -> impl Iterator<Item = u128> + '_ {
        self.intervals.iter().flat_map(|&(a, b)| a..=b)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{a},{b}]")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = self
            .intervals
            .iter()
            .map(|(a, b)| [a.to_string(), b.to_string()])
            .collect();
        pairs.serialize(s)
    }
}

/// `(U + V) ∩ [0, cap]`. Both operands must lie in `[0, cap]`.
pub fn iu_sumset(u: &IntervalUnion, v: &IntervalUnion, cap: u128) -> Result<IntervalUnion> {
    if u.max().is_some_and(|m| m > cap) || v.max().is_some_and(|m| m > cap) {
        return Err(Error::InvalidInput(format!(
            "sumset operands must lie in [0, {cap}]"
        )));
    }
    let pairs = u.intervals.len().saturating_mul(v.intervals.len());
    if pairs > SUMSET_MAX_PAIRS {
        return Err(capacity(
            "interval pairs in sumset",
            pairs as u128,
            SUMSET_MAX_PAIRS as u128,
        ));
    }
    let mut sums = Vec::with_capacity(pairs);
    for &(a1, b1) in &u.intervals {
        for &(a2, b2) in &v.intervals {
            let lo = a1
                .checked_add(a2)
                .ok_or(Error::Overflow("interval sumset"))?;
            if lo > cap {
                break;
            }
            let hi = b1
                .checked_add(b2)
                .ok_or(Error::Overflow("interval sumset"))?;
            sums.push((lo, hi.min(cap)));
        }
    }
    Ok(IntervalUnion::new(sums))
}

/// `|U ∩ [lo, hi]|`.
pub fn iu_count(u: &IntervalUnion, lo: u128, hi: u128) -> u128 {
    if lo > hi {
        return 0;
    }
    u.clip(lo, hi).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolOp {
    Union,
    Intersect,
    Diff,
}

impl BoolOp {
    pub fn apply(self, x: bool, y: bool) -> bool {
        match self {
            BoolOp::Union => x || y,
            BoolOp::Intersect => x && y,
            BoolOp::Diff => x && !y,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            BoolOp::Union => '|',
            BoolOp::Intersect => '&',
            BoolOp::Diff => '\\',
        }
    }
}

/// Union, intersection or difference of two interval unions.
pub fn iu_boolean(u: &IntervalUnion, v: &IntervalUnion, op: BoolOp) -> IntervalUnion {
    // Sweep the merged boundary list; each boundary toggles one operand.
    let mut events: Vec<(u128, bool, bool)> = Vec::new();
    for &(a, b) in &u.intervals {
        events.push((a, true, true));
        if let Some(e) = b.checked_add(1) {
            events.push((e, true, false));
        }
    }
    for &(a, b) in &v.intervals {
        events.push((a, false, true));
        if let Some(e) = b.checked_add(1) {
            events.push((e, false, false));
        }
    }
    events.sort_unstable();
    let (mut in_u, mut in_v) = (false, false);
    let mut open: Option<u128> = None;
    let mut out = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let x = events[i].0;
        while i < events.len() && events[i].0 == x {
            let (_, is_u, on) = events[i];
            if is_u {
                in_u = on;
            } else {
                in_v = on;
            }
            i += 1;
        }
        match (open, op.apply(in_u, in_v)) {
            (None, true) => open = Some(x),
            (Some(a), false) => {
                out.push((a, x - 1));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(a) = open {
        out.push((a, u128::MAX));
    }
    IntervalUnion::new(out)
}

/// `(U + kℤ) ∩ [lo, hi]`, limited to `budget` output intervals.
pub fn periodize(
    u: &IntervalUnion,
    k: u128,
    lo: u128,
    hi: u128,
    budget: usize,
) -> Result<IntervalUnion> {
    if k == 0 {
        return Err(Error::InvalidInput("periodize needs k >= 1".into()));
    }
    if lo > hi {
        return Ok(IntervalUnion::empty());
    }
    if u.is_empty() {
        return Ok(IntervalUnion::empty());
    }
    let mut residues = Vec::new();
    for &(a, b) in &u.intervals {
        if b - a + 1 >= k {
            return Ok(IntervalUnion::interval(lo, hi));
        }
        let (ra, rb) = (a % k, b % k);
        if ra <= rb {
            residues.push((ra, rb));
        } else {
            residues.push((ra, k - 1));
            residues.push((0, rb));
        }
    }
    let runs = IntervalUnion::new(residues).intervals;
    if runs == [(0, k - 1)] {
        return Ok(IntervalUnion::interval(lo, hi));
    }
    let periods = (hi - lo) / k + 2;
    let estimate = periods.saturating_mul(runs.len() as u128);
    if estimate > budget as u128 {
        return Err(Error::Budget {
            needed: estimate,
            budget: budget as u128,
        });
    }
    let mut out = Vec::new();
    let mut base = lo - lo % k;
    loop {
        for &(s, e) in &runs {
            let (a, b) = (base.saturating_add(s), base.saturating_add(e));
            if b >= lo && a <= hi {
                out.push((a.max(lo), b.min(hi)));
            }
        }
        match base.checked_add(k) {
            Some(next) if next <= hi => base = next,
            _ => break,
        }
    }
    Ok(IntervalUnion::new(out))
}
