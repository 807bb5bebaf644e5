use serde::Serialize;

use crate::error::{Error, Result};
use crate::intalg::{BoolOp, SegmentSet, StructuredSet};
use crate::rational::Exact;

use super::prefix::{FolnerPrefix, Window};
use super::torus::TorusSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityOptions {
    /// Number of trailing terms used for the tail estimates; `None` means
    /// the last half (at least one term).
    pub tail_terms: Option<usize>,
    /// `converged` is set when `tail_max - tail_min` is at most this.
    pub tolerance: Exact,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            tail_terms: None,
            tolerance: Exact::new(1, 50),
        }
    }
}

impl DensityOptions {
    pub fn tail_start(&self, terms: usize) -> usize {
        let tail = self.tail_terms.unwrap_or(terms / 2).clamp(1, terms.max(1));
        terms - tail
    }
}

/// Per-term ratios `|A ∩ F_n| / |F_n|` and their tail estimates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub label: String,
    pub counts: Vec<String>,
    pub sizes: Vec<String>,
    pub ratios: Vec<Exact>,
    /// First term (0-based) of the tail.
    pub tail_start: usize,
    pub tail_min: Exact,
    pub tail_max: Exact,
    pub liminf_estimate: Exact,
    pub limsup_estimate: Exact,
    pub converged: bool,
}

impl DensityReport {
    pub fn from_counts(
        label: &str,
        counts: &[u128],
        sizes: &[u128],
        opts: &DensityOptions,
    ) -> Self {
        let ratios: Vec<Exact> = counts
            .iter()
            .zip(sizes)
            .map(|(&c, &s)| Exact::from_counts(c, s))
            .collect();
        let start = opts.tail_start(ratios.len());
        let tail = &ratios[start..];
        let tail_min = tail.iter().min().cloned().unwrap_or_else(Exact::zero);
        let tail_max = tail.iter().max().cloned().unwrap_or_else(Exact::zero);
        let converged = &tail_max - &tail_min <= opts.tolerance;
        DensityReport {
            label: label.to_string(),
            counts: counts.iter().map(|c| c.to_string()).collect(),
            sizes: sizes.iter().map(|c| c.to_string()).collect(),
            ratios,
            tail_start: start,
            liminf_estimate: tail_min.clone(),
            limsup_estimate: tail_max.clone(),
            tail_min,
            tail_max,
            converged,
        }
    }
}

/// `|S ∩ W|` for a set given on a window covering `W`.
pub fn count_in_window(s: &SegmentSet, w: &Window) -> Result<u128> {
    let line = w
        .as_line()
        .ok_or_else(|| Error::InvalidInput("1-D sets need 1-D windows".into()))?;
    match line.segments() {
        [] => Ok(0),
        [seg] if seg.pattern.is_full() => Ok(s.count_in(seg.lo, seg.hi)),
        _ => {
            let (lo, hi) = (line.min().unwrap_or(0), line.max().unwrap_or(0));
            Ok(s.clip(lo, hi).boolean(&line, BoolOp::Intersect)?.count())
        }
    }
}

/// Densities of a set of naturals given as segments covering `[0, max F]`.
pub fn density_segments(
    s: &SegmentSet,
    p: &FolnerPrefix,
    opts: &DensityOptions,
) -> Result<DensityReport> {
    let counts = p
        .terms
        .iter()
        .map(|w| count_in_window(s, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityReport::from_counts(
        &p.label,
        &counts,
        &p.sizes(),
        opts,
    ))
}

pub fn density(s: &StructuredSet, p: &FolnerPrefix) -> Result<DensityReport> {
    density_with(s, p, &DensityOptions::default())
}

pub fn density_with(
    s: &StructuredSet,
    p: &FolnerPrefix,
    opts: &DensityOptions,
) -> Result<DensityReport> {
    density_segments(&s.segments(0, p.max_point())?, p, opts)
}

/// Densities of a periodic subset of `ℤ^d` along box windows.
pub fn density_torus(
    s: &TorusSet,
    p: &FolnerPrefix,
    opts: &DensityOptions,
) -> Result<DensityReport> {
    let counts = p
        .terms
        .iter()
        .map(|w| match w {
            Window::Box { lo, hi } => s.count_box(lo, hi),
            Window::Line(_) => Err(Error::InvalidInput(
                "periodic subsets of Z^d need box windows".into(),
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityReport::from_counts(
        &p.label,
        &counts,
        &p.sizes(),
        opts,
    ))
}

/// `|F Δ (F + t)| / |F|` for every term and shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub label: String,
    pub shifts: Vec<Vec<i64>>,
    /// `ratios[n][j]` is the defect of term `n` under shift `j`.
    pub ratios: Vec<Vec<Exact>>,
}

pub fn defect_report(p: &FolnerPrefix, shifts: &[Vec<i64>]) -> Result<DefectReport> {
    let mut ratios = Vec::with_capacity(p.len());
    for w in &p.terms {
        let size = w.size();
        let mut row = Vec::with_capacity(shifts.len());
        for t in shifts {
            if t.len() != w.dim() {
                return Err(Error::InvalidInput(format!(
                    "shift {t:?} does not match dimension {}",
                    w.dim()
                )));
            }
            let overlap = match w {
                Window::Box { lo, hi } => lo
                    .iter()
                    .zip(hi)
                    .zip(t)
                    .map(|((a, b), s)| {
                        ((b - a + 1) as u128).saturating_sub(s.unsigned_abs() as u128)
                    })
                    .product(),
                Window::Line(f) => {
                    // |F ∩ (F + t)| = |F ∩ (F + |t|)| by translating by -t.
                    let moved = f.shift(t[0].unsigned_abs() as i128)?;
                    f.boolean(&moved, BoolOp::Intersect)?.count()
                }
            };
            row.push(Exact::from_counts(2 * (size - overlap), size));
        }
        ratios.push(row);
    }
    Ok(DefectReport {
        label: p.label.clone(),
        shifts: shifts.to_vec(),
        ratios,
    })
}
