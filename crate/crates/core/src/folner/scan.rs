use serde::Serialize;

use crate::error::{capacity, Error, Result};
use crate::intalg::{SegmentSet, StructuredSet};
use crate::rational::Exact;

use super::density::density;
use super::prefix::FolnerPrefix;

/// Segments allowed in a window search.
pub const WINDOW_SEARCH_MAX_SEGMENTS: usize = 4096;

/// Extremes of `|S ∩ [1, n]| / n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadRecord {
    pub bound: u128,
    pub tail_from: u128,
    pub global_min: Exact,
    pub global_argmin: u128,
    pub tail_min: Exact,
    pub tail_argmin: u128,
    pub tail_max: Exact,
    pub tail_argmax: u128,
}

/// Points of `[from, to]` where `|S ∩ [1, n]| / n` can attain a local
/// extremum. The ratio never decreases inside a run of members and never
/// increases inside a gap, so minima sit just before run starts and maxima
/// at run ends. Inside a periodic segment the count along one residue class
/// is affine in `n`, so only the first and last point of each class matter.
pub(crate) fn candidates(s: &SegmentSet, from: u128, to: u128) -> Vec<u128> {
    let mut out = vec![from, to];
    let mut push = |x: u128| {
        if (from..=to).contains(&x) {
            out.push(x);
        }
    };
    for seg in s.segments() {
        if seg.hi < from.saturating_sub(1) || seg.lo > to.saturating_add(1) {
            continue;
        }
        push(seg.lo.saturating_sub(1));
        push(seg.hi);
        let m = seg.pattern.modulus() as u128;
        // Run starts x give n = x - 1 in [from, to]; run ends give n = x.
        for (lo, hi) in [(from.saturating_add(1), to.saturating_add(1)), (from, to)] {
            let (lo, hi) = (seg.lo.max(lo), seg.hi.min(hi));
            if lo > hi {
                continue;
            }
            for (start, end) in seg.pattern.runs() {
                for r in [start as u128, end as u128] {
                    let first = lo + (r + m - lo % m) % m;
                    if first > hi {
                        continue;
                    }
                    let last = first + (hi - first) / m * m;
                    for x in [first, last] {
                        push(x);
                        push(x.saturating_sub(1));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn ratio_at(s: &SegmentSet, n: u128) -> Exact {
    Exact::from_counts(s.count_in(1, n), n)
}

fn extremes(s: &SegmentSet, from: u128, to: u128) -> ((Exact, u128), (Exact, u128)) {
    let mut min: Option<(Exact, u128)> = None;
    let mut max: Option<(Exact, u128)> = None;
    for n in candidates(s, from, to) {
        let q = ratio_at(s, n);
        if min.as_ref().is_none_or(|(m, _)| q < *m) {
            min = Some((q.clone(), n));
        }
        if max.as_ref().is_none_or(|(m, _)| q > *m) {
            max = Some((q, n));
        }
    }
    (min.expect("nonempty range"), max.expect("nonempty range"))
}

/// Breakpoint scan of `|S ∩ [1, n]| / n` over `n ≤ bound`, from segments
/// covering `[1, bound]`. The tail restriction is `n ≥ tail_from`.
pub fn lad_scan_segments(s: &SegmentSet, bound: u128, tail_from: u128) -> Result<LadRecord> {
    if bound == 0 {
        return Err(Error::InvalidInput(
            "the scan bound must be positive".into(),
        ));
    }
    let tail_from = tail_from.clamp(1, bound);
    let ((global_min, global_argmin), _) = extremes(s, 1, bound);
    let ((tail_min, tail_argmin), (tail_max, tail_argmax)) = extremes(s, tail_from, bound);
    Ok(LadRecord {
        bound,
        tail_from,
        global_min,
        global_argmin,
        tail_min,
        tail_argmin,
        tail_max,
        tail_argmax,
    })
}

/// Default start of the tail: `⌊√bound⌋`.
pub fn default_tail_from(bound: u128) -> u128 {
    num::integer::Roots::sqrt(&bound).max(1)
}

pub fn lad_scan(s: &StructuredSet, bound: u128, tail_from: Option<u128>) -> Result<LadRecord> {
    let segs = s.segments(1, bound)?;
    lad_scan_segments(
        &segs,
        bound,
        tail_from.unwrap_or_else(|| default_tail_from(bound)),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowHit {
    pub lo: u128,
    pub hi: u128,
    pub ratio: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UbdRecord {
    /// `(label, limsup estimate)` per candidate prefix.
    pub candidates: Vec<(String, Exact)>,
    pub window: Option<WindowHit>,
    pub best: String,
    pub upper_estimate: Exact,
}

/// Best density over windows `[l, r] ⊆ [1, bound]` with `l` a segment start,
/// `r` a segment end and length at least `⌊√r⌋`.
pub fn window_search(s: &SegmentSet, bound: u128) -> Result<Option<WindowHit>> {
    let s = s.clip(1, bound);
    let segs = s.segments();
    if segs.len() > WINDOW_SEARCH_MAX_SEGMENTS {
        return Err(capacity(
            "segments in a window search",
            segs.len() as u128,
            WINDOW_SEARCH_MAX_SEGMENTS as u128,
        ));
    }
    let mut best: Option<WindowHit> = None;
    for (i, a) in segs.iter().enumerate() {
        for b in &segs[i..] {
            let (l, r) = (a.lo, b.hi);
            let len = r - l + 1;
            if len < default_tail_from(r) {
                continue;
            }
            let ratio = Exact::from_counts(s.count_in(l, r), len);
            let better = match &best {
                None => true,
                Some(h) => ratio > h.ratio || (ratio == h.ratio && len > h.hi - h.lo + 1),
            };
            if better {
                best = Some(WindowHit {
                    lo: l,
                    hi: r,
                    ratio,
                });
            }
        }
    }
    Ok(best)
}

/// Upper Banach density estimate: the best limsup estimate over the
/// candidate prefixes, and over a window search up to `bound` when given.
pub fn ubd_estimate(
    s: &StructuredSet,
    candidates: &[FolnerPrefix],
    bound: Option<u128>,
) -> Result<UbdRecord> {
    if candidates.is_empty() && bound.is_none() {
        return Err(Error::InvalidInput(
            "ubd_estimate needs candidate prefixes or a search bound".into(),
        ));
    }
    let mut out = Vec::with_capacity(candidates.len());
    let mut best: Option<(String, Exact)> = None;
    for p in candidates {
        let r = density(s, p)?;
        if best.as_ref().is_none_or(|(_, q)| r.limsup_estimate > *q) {
            best = Some((p.label.clone(), r.limsup_estimate.clone()));
        }
        out.push((p.label.clone(), r.limsup_estimate));
    }
    let window = match bound {
        Some(n) => window_search(&s.segments(1, n)?, n)?,
        None => None,
    };
    if let Some(h) = &window {
        if best.as_ref().is_none_or(|(_, q)| h.ratio > *q) {
            best = Some((format!("window:[{},{}]", h.lo, h.hi), h.ratio.clone()));
        }
    }
    let (best, upper_estimate) = best.unwrap_or_else(|| ("none".into(), Exact::zero()));
    Ok(UbdRecord {
        candidates: out,
        window,
        best,
        upper_estimate,
    })
}
