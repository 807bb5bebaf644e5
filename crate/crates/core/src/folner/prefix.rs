use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intalg::{parse_schedule, BoolOp, Frac, IntervalUnion, Schedule, SegmentSet};

/// One term of a Følner prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// A finite subset of ℕ: an interval, a union of intervals, or an interval
    /// filtered by residue classes.
    Line(SegmentSet),
    /// The box `∏ [lo_i, hi_i]` in `ℤ^d`.
    Box { lo: Vec<i64>, hi: Vec<i64> },
}

impl Window {
    pub fn interval(lo: u128, hi: u128) -> Self {
        Window::Line(SegmentSet::interval(lo, hi))
    }

    pub fn dim(&self) -> usize {
        match self {
            Window::Line(_) => 1,
            Window::Box { lo, .. } => lo.len(),
        }
    }

    pub fn size(&self) -> u128 {
        match self {
            Window::Line(s) => s.count(),
            Window::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| (b - a + 1) as u128)
                .product(),
        }
    }

    /// Largest element of a 1-D window.
    pub fn max(&self) -> Option<i128> {
        match self {
            Window::Line(s) => s.max().map(|m| m as i128),
            Window::Box { hi, .. } if hi.len() == 1 => Some(hi[0] as i128),
            Window::Box { .. } => None,
        }
    }

    /// The window as a subset of ℕ (the nonnegative part of a 1-D box).
    pub fn as_line(&self) -> Option<SegmentSet> {
        match self {
            Window::Line(s) => Some(s.clone()),
            Window::Box { lo, hi } if lo.len() == 1 => {
                if hi[0] < 0 {
                    return Some(SegmentSet::empty());
                }
                Some(SegmentSet::interval(lo[0].max(0) as u128, hi[0] as u128))
            }
            Window::Box { .. } => None,
        }
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Window) -> Result<bool> {
        match (self, other) {
            (Window::Box { lo, hi }, Window::Box { lo: lo2, hi: hi2 }) if lo.len() == lo2.len() => {
                Ok((0..lo.len()).all(|i| lo2[i] <= lo[i] && hi[i] <= hi2[i]))
            }
            _ => match (self.as_line(), other.as_line()) {
                (Some(a), Some(b)) => Ok(a.boolean(&b, BoolOp::Diff)?.is_empty()),
                _ => Err(Error::InvalidInput(
                    "windows of different dimensions".into(),
                )),
            },
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Line(s) => {
                let parts: Vec<String> = s
                    .segments()
                    .iter()
                    .map(|seg| {
                        if seg.pattern.is_full() {
                            format!("[{},{}]", seg.lo, seg.hi)
                        } else {
                            let r: Vec<String> = seg
                                .pattern
                                .residues()
                                .iter()
                                .map(|x| x.to_string())
                                .collect();
                            format!(
                                "[{},{}]&{{{}}}+{}Z",
                                seg.lo,
                                seg.hi,
                                r.join(","),
                                seg.pattern.modulus()
                            )
                        }
                    })
                    .collect();
                if parts.is_empty() {
                    write!(f, "{{}}")
                } else {
                    write!(f, "{}", parts.join("|"))
                }
            }
            Window::Box { lo, hi } => {
                let parts: Vec<String> = lo
                    .iter()
                    .zip(hi)
                    .map(|(a, b)| format!("[{a},{b}]"))
                    .collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite truncation `F_1, ..., F_T` of a Følner sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FolnerPrefix {
    pub label: String,
    pub terms: Vec<Window>,
}

impl FolnerPrefix {
    pub fn new(label: impl Into<String>, terms: Vec<Window>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput(
                "a prefix needs at least one term".into(),
            ));
        }
        let d = terms[0].dim();
        for (n, t) in terms.iter().enumerate() {
            if t.dim() != d {
                return Err(Error::InvalidInput(
                    "prefix terms have different dimensions".into(),
                ));
            }
            if t.size() == 0 {
                return Err(Error::InvalidInput(format!(
                    "prefix term {} is empty",
                    n + 1
                )));
            }
        }
        Ok(FolnerPrefix {
            label: label.into(),
            terms,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.terms[0].dim()
    }

    /// Largest element over all 1-D terms (0 if all are negative).
    pub fn max_point(&self) -> u128 {
        self.terms
            .iter()
            .filter_map(Window::max)
            .max()
            .unwrap_or(0)
            .max(0) as u128
    }

    pub fn sizes(&self) -> Vec<u128> {
        self.terms.iter().map(Window::size).collect()
    }
}

/// The prefix families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrefixKind {
    /// `F_n = [1, s_n]`.
    Intervals(Schedule),
    /// `F_n = [⌈α s_n⌉, s_n]`.
    Suffix(Schedule, Frac),
    /// `F_n = [1, s_n]^d`.
    Boxes(usize, Schedule),
    /// `F_n = [-r_n, r_n]^d`.
    SymmetricBoxes(usize, Schedule),
    Explicit(Vec<IntervalUnion>),
}

pub fn make_prefix(kind: &PrefixKind) -> Result<FolnerPrefix> {
    let to_i64 = |v: u128| i64::try_from(v).map_err(|_| Error::Overflow("box side"));
    match kind {
        PrefixKind::Intervals(s) => {
            let terms = s
                .values()?
                .into_iter()
                .map(|v| Window::interval(1, v))
                .collect();
            FolnerPrefix::new(format!("intervals:{s}"), terms)
        }
        PrefixKind::Suffix(s, alpha) => {
            if alpha.num == 0 || alpha.num >= alpha.den {
                return Err(Error::InvalidInput(format!(
                    "suffix windows need 0 < alpha < 1, got {alpha}"
                )));
            }
            let terms = s
                .values()?
                .into_iter()
                .map(|v| Ok(Window::interval(alpha.ceil_mul(v)?.max(1), v)))
                .collect::<Result<_>>()?;
            FolnerPrefix::new(format!("suffix:{s}:{alpha}"), terms)
        }
        PrefixKind::Boxes(d, s) | PrefixKind::SymmetricBoxes(d, s) => {
            if *d == 0 {
                return Err(Error::InvalidInput("box dimension must be positive".into()));
            }
            let symmetric = matches!(kind, PrefixKind::SymmetricBoxes(..));
            let terms = s
                .values()?
                .into_iter()
                .map(|v| {
                    let v = to_i64(v)?;
                    let (a, b) = if symmetric { (-v, v) } else { (1, v) };
                    Ok(Window::Box {
                        lo: vec![a; *d],
                        hi: vec![b; *d],
                    })
                })
                .collect::<Result<_>>()?;
            let name = if symmetric { "symboxes" } else { "boxes" };
            FolnerPrefix::new(format!("{name}:{d}:{s}"), terms)
        }
        PrefixKind::Explicit(list) => {
            let terms: Vec<Window> = list
                .iter()
                .map(|u| Window::Line(SegmentSet::from_intervals(u)))
                .collect();
            let desc: Vec<String> = list.iter().map(|u| u.to_string()).collect();
            FolnerPrefix::new(format!("explicit:{}", desc.join(";")), terms)
        }
    }
}

/// Parses prefix spec strings:
/// `intervals:SCHED`, `suffix:SCHED:FRAC`, `boxes:D:SCHED`, `symboxes:D:SCHED`,
/// `explicit:a-b,c-d;e-f` (terms separated by `;`, intervals by `,`).
pub fn parse_prefix(spec: &str) -> Result<FolnerPrefix> {
    let bad = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg} in prefix spec '{spec}'"),
    };
    let (kind, rest) = spec
        .trim()
        .split_once(':')
        .ok_or_else(|| bad("missing ':'"))?;
    let kind = match kind {
        "intervals" => PrefixKind::Intervals(parse_schedule(rest)?),
        "suffix" => {
            let (s, a) = rest.rsplit_once(':').ok_or_else(|| bad("missing alpha"))?;
            PrefixKind::Suffix(
                parse_schedule(s)?,
                parse_frac(a).ok_or_else(|| bad("bad alpha"))?,
            )
        }
        "boxes" | "symboxes" => {
            let (d, s) = rest
                .split_once(':')
                .ok_or_else(|| bad("missing dimension"))?;
            let d: usize = d.trim().parse().map_err(|_| bad("bad dimension"))?;
            let s = parse_schedule(s)?;
            if kind == "boxes" {
                PrefixKind::Boxes(d, s)
            } else {
                PrefixKind::SymmetricBoxes(d, s)
            }
        }
        "explicit" => {
            let mut terms = Vec::new();
            for term in rest.split(';') {
                let mut iv = Vec::new();
                for part in term.split(',') {
                    let (a, b) = part.split_once('-').unwrap_or((part, part));
                    let a: u128 = a.trim().parse().map_err(|_| bad("bad interval"))?;
                    let b: u128 = b.trim().parse().map_err(|_| bad("bad interval"))?;
                    iv.push((a, b));
                }
                terms.push(IntervalUnion::new(iv));
            }
            PrefixKind::Explicit(terms)
        }
        _ => return Err(bad("unknown prefix kind")),
    };
    make_prefix(&kind)
}

pub(crate) fn parse_frac(s: &str) -> Option<Frac> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => Frac::new(p.trim().parse().ok()?, q.trim().parse().ok()?).ok(),
        None => Some(Frac::integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_examples() {
        let p = make_prefix(&PrefixKind::Intervals(Schedule::List {
            values: vec![10, 100, 1000],
        }))
        .unwrap();
        assert_eq!(
            p.terms,
            vec![
                Window::interval(1, 10),
                Window::interval(1, 100),
                Window::interval(1, 1000)
            ]
        );
        let s = parse_prefix("suffix:superexp(8):1/2").unwrap();
        assert_eq!(s.terms[0], Window::interval(1, 2));
        assert_eq!(s.terms[7], Window::interval(1 << 35, 1 << 36));
        let b = parse_prefix("symboxes:2:list(5,10)").unwrap();
        assert_eq!(
            b.terms[1],
            Window::Box {
                lo: vec![-10, -10],
                hi: vec![10, 10]
            }
        );
        assert_eq!(b.terms[0].size(), 121);
        let e = parse_prefix("explicit:1-10,20-30;5").unwrap();
        assert_eq!(e.sizes(), vec![21, 1]);
        assert_eq!(
            parse_prefix("boxes:2:list(5,10,20)").unwrap().label,
            "boxes:2:list(5,10,20)"
        );
    }

    #[test]
    fn invalid_prefixes() {
        assert!(parse_prefix("suffix:superexp(3):3/2").is_err());
        assert!(parse_prefix("nonsense:tower(2)").is_err());
        assert!(parse_prefix("intervals").is_err());
        assert!(parse_prefix("boxes:0:list(3)").is_err());
    }

    #[test]
    fn containment() {
        let f = Window::interval(1, 100);
        assert!(Window::interval(50, 100).is_subset_of(&f).unwrap());
        assert!(!Window::interval(50, 101).is_subset_of(&f).unwrap());
        let b = Window::Box {
            lo: vec![0, 0],
            hi: vec![9, 9],
        };
        assert!(Window::Box {
            lo: vec![0, 5],
            hi: vec![4, 9]
        }
        .is_subset_of(&b)
        .unwrap());
    }
}
