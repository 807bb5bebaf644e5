//! Piecewise-periodic subsets of ℕ.
//!
//! A [`SegmentSet`] is a sorted list of disjoint segments `[lo, hi]`, each
//! carrying a residue pattern; the set is `⋃ [lo, hi] ∩ (R + Mℤ)`. Block
//! constructions are segments with the full pattern, periodic sets are one
//! segment, and their boolean combinations stay small, so counts over
//! astronomically large windows are exact and cheap.

use std::sync::Arc;

use crate::error::{capacity, Error, Result};

use super::interval::{BoolOp, IntervalUnion};
use super::pattern::{lcm, Pattern};

/// Default limit on materialized intervals.
pub const DEFAULT_INTERVAL_BUDGET: usize = 1_000_000;
/// Limit on segments produced by a single operation.
pub const MAX_SEGMENTS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub lo: u128,
    pub hi: u128,
    pub pattern: Arc<Pattern>,
}

impl Segment {
    pub fn count(&self) -> u128 {
        self.pattern.count(self.lo, self.hi)
    }

    fn len(&self) -> u128 {
        self.hi - self.lo + 1
    }

    /// Tightens the bounds to actual members; `None` if there are none.
    fn tighten(self) -> Option<Segment> {
        let lo = self.pattern.next_member(self.lo)?;
        let hi = self.pattern.prev_member(self.hi)?;
        (lo <= hi).then_some(Segment {
            lo,
            hi,
            pattern: self.pattern,
        })
    }

    fn intervals_estimate(&self) -> u128 {
        if self.pattern.is_full() {
            return 1;
        }
        let m = self.pattern.modulus() as u128;
        (self.len() / m + 2).saturating_mul(self.pattern.runs().len() as u128)
    }

    fn materialize_into(&self, out: &mut Vec<(u128, u128)>) {
        if self.pattern.is_full() {
            out.push((self.lo, self.hi));
            return;
        }
        let m = self.pattern.modulus() as u128;
        let runs = self.pattern.runs();
        let mut base = self.lo - self.lo % m;
        loop {
            for &(s, e) in &runs {
                let (a, b) = (
                    base.saturating_add(s as u128),
                    base.saturating_add(e as u128),
                );
                if b >= self.lo && a <= self.hi {
                    out.push((a.max(self.lo), b.min(self.hi)));
                }
            }
            match base.checked_add(m) {
                Some(next) if next <= self.hi => base = next,
                _ => break,
            }
        }
    }

    fn members(&self) -> impl Iterator<Item = u128> + '_ {
        (self.lo..=self.hi).filter(move |&x| self.pattern.contains(x))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SegmentSet {
    segs: Vec<Segment>,
}

impl SegmentSet {
    pub fn empty() -> Self {
        SegmentSet::default()
    }

    /// Normalizes segments that are already sorted and disjoint.
    fn from_sorted(segs: Vec<Segment>) -> Self {
        let mut out: Vec<Segment> = Vec::with_capacity(segs.len());
        for s in segs.into_iter().filter_map(Segment::tighten) {
            match out.last_mut() {
                Some(last) if last.pattern == s.pattern && fits(last, &s) => last.hi = s.hi,
                _ => out.push(s),
            }
        }
        SegmentSet { segs: out }
    }

    pub fn interval(lo: u128, hi: u128) -> Self {
        Self::periodic(Pattern::full(), lo, hi)
    }

    pub fn periodic(pattern: Arc<Pattern>, lo: u128, hi: u128) -> Self {
        if lo > hi {
            return Self::empty();
        }
        Self::from_sorted(vec![Segment { lo, hi, pattern }])
    }

    pub fn from_intervals(u: &IntervalUnion) -> Self {
        let full = Pattern::full();
        let segs = u
            .intervals()
            .iter()
            .map(|&(lo, hi)| Segment {
                lo,
                hi,
                pattern: full.clone(),
            })
            .collect();
        SegmentSet { segs }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn min(&self) -> Option<u128> {
        self.segs.first().map(|s| s.lo)
    }

    pub fn max(&self) -> Option<u128> {
        self.segs.last().map(|s| s.hi)
    }

    pub fn count(&self) -> u128 {
        self.segs.iter().map(Segment::count).sum()
    }

    /// `|S ∩ [lo, hi]|`.
    pub fn count_in(&self, lo: u128, hi: u128) -> u128 {
        if lo > hi {
            return 0;
        }
        let start = self.segs.partition_point(|s| s.hi < lo);
        self.segs[start..]
            .iter()
            .take_while(|s| s.lo <= hi)
            .map(|s| s.pattern.count(s.lo.max(lo), s.hi.min(hi)))
            .sum()
    }

    pub fn contains(&self, x: u128) -> bool {
        let i = self.segs.partition_point(|s| s.hi < x);
        i < self.segs.len() && self.segs[i].lo <= x && self.segs[i].pattern.contains(x)
    }

    pub fn clip(&self, lo: u128, hi: u128) -> SegmentSet {
        if lo > hi {
            return Self::empty();
        }
        let segs = self
            .segs
            .iter()
            .filter(|s| s.hi >= lo && s.lo <= hi)
            .map(|s| Segment {
                lo: s.lo.max(lo),
                hi: s.hi.min(hi),
                pattern: s.pattern.clone(),
            })
            .collect();
        Self::from_sorted(segs)
    }

    /// `(S + t) ∩ ℕ`.
    pub fn shift(&self, t: i128) -> Result<SegmentSet> {
        let mut segs = Vec::with_capacity(self.segs.len());
        for s in &self.segs {
            let (lo, hi, pattern) = if t >= 0 {
                let t = t as u128;
                let hi = s.hi.checked_add(t).ok_or(Error::Overflow("shift"))?;
                (s.lo + t, hi, s.pattern.shift(t))
            } else {
                let t = t.unsigned_abs();
                if s.hi < t {
                    continue;
                }
                let m = s.pattern.modulus() as u128;
                (s.lo.saturating_sub(t), s.hi - t, s.pattern.shift(m - t % m))
            };
            segs.push(Segment { lo, hi, pattern });
        }
        Ok(Self::from_sorted(segs))
    }

    /// Upper bound on the number of intervals [`Self::materialize`] produces.
    pub fn intervals_estimate(&self) -> u128 {
        self.segs
            .iter()
            .map(Segment::intervals_estimate)
            .fold(0, u128::saturating_add)
    }

    pub fn materialize(&self, budget: usize) -> Result<IntervalUnion> {
        let needed = self.intervals_estimate();
        if needed > budget as u128 {
            return Err(Error::Budget {
                needed,
                budget: budget as u128,
            });
        }
        let mut out = Vec::new();
        for s in &self.segs {
            s.materialize_into(&mut out);
        }
        Ok(IntervalUnion::new(out))
    }

    pub fn boolean(&self, other: &SegmentSet, op: BoolOp) -> Result<SegmentSet> {
        let mut cuts: Vec<u128> = Vec::with_capacity(2 * (self.segs.len() + other.segs.len()));
        for s in self.segs.iter().chain(&other.segs) {
            cuts.push(s.lo);
            if let Some(e) = s.hi.checked_add(1) {
                cuts.push(e);
            }
        }
        cuts.sort_unstable();
        cuts.dedup();
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        for (w, &a) in cuts.iter().enumerate() {
            let b = cuts.get(w + 1).map_or(u128::MAX, |&c| c - 1);
            while i < self.segs.len() && self.segs[i].hi < a {
                i += 1;
            }
            while j < other.segs.len() && other.segs[j].hi < a {
                j += 1;
            }
            let pa = self.segs.get(i).filter(|s| s.lo <= a).map(|s| &*s.pattern);
            let pb = other.segs.get(j).filter(|s| s.lo <= a).map(|s| &*s.pattern);
            if pa.is_none() && pb.is_none() {
                continue;
            }
            if let Some(pattern) = Pattern::combine(pa, pb, op)? {
                out.push(Segment {
                    lo: a,
                    hi: b,
                    pattern,
                });
            }
        }
        Ok(Self::from_sorted(out))
    }

    /// The union of arbitrarily many, possibly overlapping, segments.
    pub fn union_all(pieces: Vec<Segment>) -> Result<SegmentSet> {
        if pieces.len() > MAX_SEGMENTS {
            return Err(capacity(
                "segments in a union",
                pieces.len() as u128,
                MAX_SEGMENTS as u128,
            ));
        }
        let mut cuts: Vec<u128> = Vec::with_capacity(2 * pieces.len());
        for s in &pieces {
            cuts.push(s.lo);
            if let Some(e) = s.hi.checked_add(1) {
                cuts.push(e);
            }
        }
        cuts.sort_unstable();
        cuts.dedup();
        let mut order: Vec<usize> = (0..pieces.len()).collect();
        order.sort_by_key(|&i| pieces[i].lo);
        let mut next = 0;
        let mut active: Vec<usize> = Vec::new();
        let mut out: Vec<Segment> = Vec::new();
        for (w, &a) in cuts.iter().enumerate() {
            let b = cuts.get(w + 1).map_or(u128::MAX, |&c| c - 1);
            active.retain(|&i| pieces[i].hi >= a);
            while next < order.len() && pieces[order[next]].lo <= a {
                active.push(order[next]);
                next += 1;
            }
            if active.is_empty() {
                continue;
            }
            let mut acc: Option<Arc<Pattern>> = None;
            for &i in &active {
                let p = &pieces[i].pattern;
                acc = match acc {
                    None => Some(p.clone()),
                    Some(q) if q.is_full() || q == *p => Some(q),
                    Some(q) => Pattern::combine(Some(&q), Some(p), BoolOp::Union)?,
                };
            }
            if let Some(pattern) = acc {
                out.push(Segment {
                    lo: a,
                    hi: b,
                    pattern,
                });
            }
        }
        Ok(Self::from_sorted(out))
    }

    /// `(S + T) ∩ [0, cap]`.
    pub fn sumset(&self, other: &SegmentSet, cap: u128) -> Result<SegmentSet> {
        let mut pieces = Vec::new();
        for x in &self.segs {
            for y in &other.segs {
                match x.lo.checked_add(y.lo) {
                    Some(s) if s <= cap => sum_pair(x, y, cap, &mut pieces)?,
                    _ => break,
                }
                if pieces.len() > MAX_SEGMENTS {
                    return Err(capacity(
                        "segments in a sumset",
                        pieces.len() as u128,
                        MAX_SEGMENTS as u128,
                    ));
                }
            }
        }
        Self::union_all(pieces)
    }

    /// Residues modulo `k` hit by the set.
    pub fn residues_mod(&self, k: usize) -> Result<Option<Arc<Pattern>>> {
        let mut member = vec![false; k];
        for s in &self.segs {
            let l = lcm(s.pattern.modulus(), k)? as u128;
            if s.len() >= l {
                if let Some(p) = s.pattern.reduce_mod(k)? {
                    for r in p.residues() {
                        for x in (r..k).step_by(p.modulus()) {
                            member[x] = true;
                        }
                    }
                }
            } else {
                for x in s.members() {
                    member[(x % k as u128) as usize] = true;
                }
            }
        }
        Pattern::from_member(member)
    }

    /// `(S + kℤ) ∩ [lo, hi]`.
    pub fn periodize(&self, k: usize, lo: u128, hi: u128) -> Result<SegmentSet> {
        if k == 0 {
            return Err(Error::InvalidInput("periodize needs k >= 1".into()));
        }
        Ok(match self.residues_mod(k)? {
            Some(p) => SegmentSet::periodic(p, lo, hi),
            None => SegmentSet::empty(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = u128> + '_ {
        self.segs.iter().flat_map(|s| s.members())
    }
}

/// Adjacent segments with equal patterns may merge.
fn fits(a: &Segment, b: &Segment) -> bool {
    if a.pattern.is_full() {
        return a.hi.checked_add(1) == Some(b.lo);
    }
    // No member of the pattern may lie strictly between the two segments.
    a.hi < b.lo && a.pattern.next_member(a.hi + 1).is_some_and(|x| x >= b.lo)
}

/// Appends segments whose union is `(x + y) ∩ [0, cap]`.
fn sum_pair(x: &Segment, y: &Segment, cap: u128, out: &mut Vec<Segment>) -> Result<()> {
    let l = lcm(x.pattern.modulus(), y.pattern.modulus())? as u128;
    if x.len() >= l && y.len() >= l {
        return sum_long(x, y, l, cap, out);
    }
    let (short, long) = if x.len() < l { (x, y) } else { (y, x) };
    let m = long.pattern.modulus() as u128;
    let mut runs = Vec::new();
    short.materialize_into(&mut runs);
    for (a, b) in runs {
        if b - a + 1 >= m && long.len() >= m {
            let run = Segment {
                lo: a,
                hi: b,
                pattern: Pattern::full(),
            };
            sum_long(&run, long, m, cap, out)?;
        } else {
            for u in a..=b {
                push_clipped(out, shifted(long, u)?, cap);
            }
        }
    }
    Ok(())
}

fn shifted(s: &Segment, t: u128) -> Result<Segment> {
    Ok(Segment {
        lo: s.lo.checked_add(t).ok_or(Error::Overflow("sumset"))?,
        hi: s.hi.checked_add(t).ok_or(Error::Overflow("sumset"))?,
        pattern: s.pattern.shift(t),
    })
}

fn push_clipped(out: &mut Vec<Segment>, mut s: Segment, cap: u128) {
    if s.lo <= cap {
        s.hi = s.hi.min(cap);
        out.push(s);
    }
}

/// Both segments span at least one full period `l` of the combined pattern:
/// the middle of the sum is periodic and only the two ends need enumeration.
fn sum_long(x: &Segment, y: &Segment, l: u128, cap: u128, out: &mut Vec<Segment>) -> Result<()> {
    let lo = x.lo + y.lo;
    let hi = x.hi.checked_add(y.hi).ok_or(Error::Overflow("sumset"))?;
    let body = Pattern::sum(&x.pattern, &y.pattern)?;
    push_clipped(
        out,
        Segment {
            lo: lo + l - 1,
            hi: hi - (l - 1),
            pattern: body,
        },
        cap,
    );
    if l < 2 {
        return Ok(());
    }
    // Left end: sums below lo + l - 1 only use the first l - 1 elements of each.
    let near = |s: &Segment, from_top: bool| -> Vec<usize> {
        (0..l - 1)
            .filter(|&i| {
                s.pattern
                    .contains(if from_top { s.hi - i } else { s.lo + i })
            })
            .map(|i| i as usize)
            .collect()
    };
    let w = (2 * l - 3) as usize;
    for from_top in [false, true] {
        let (ox, oy) = (near(x, from_top), near(y, from_top));
        let mut hit = vec![false; w];
        for &i in &ox {
            for &j in &oy {
                if i + j < w {
                    hit[i + j] = true;
                }
            }
        }
        let points = (0..(l - 1) as usize).filter(|&d| hit[d]).map(|d| {
            if from_top {
                hi - d as u128
            } else {
                lo + d as u128
            }
        });
        for p in points {
            push_clipped(
                out,
                Segment {
                    lo: p,
                    hi: p,
                    pattern: Pattern::full(),
                },
                cap,
            );
        }
    }
    Ok(())
}
