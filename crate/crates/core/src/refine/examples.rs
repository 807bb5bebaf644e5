//! Fixed-parameter reproductions of three constructions: half-blocks along
//! superexponential scales, the tower of doubling intervals, and the
//! `rec3` blocks whose prefix and lower densities disagree.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::folner::{
    default_tail_from, density_segments, lad_scan_segments, DensityOptions, DensityReport,
    FolnerPrefix, LadRecord, Window,
};
use crate::intalg::{parse_set, Schedule, StructuredSet};
use crate::rational::Exact;

use super::lad::cofiniteness_witness;
use super::search::{
    density_gap, refinement_search, verify_folner_theorem, FolnerCheck, Instance, RefinementResult,
    SearchOptions,
};

/// One line of a pass/fail summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub name: String,
    pub value: String,
    pub target: String,
    pub pass: bool,
}

impl Criterion {
    fn new(name: &str, value: impl ToString, target: &str, pass: bool) -> Self {
        Criterion {
            name: name.into(),
            value: value.to_string(),
            target: target.into(),
            pass,
        }
    }
}

fn near(x: &Exact, target: f64, tol: f64) -> bool {
    (x.to_f64() - target).abs() <= tol
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfBlocksReport {
    pub set: String,
    pub prefix: String,
    pub density_a: DensityReport,
    pub density_aa: DensityReport,
    /// `A+A+kℤ` for `k = 1, 2, 3`.
    pub density_aak: Vec<DensityReport>,
    pub delta: Exact,
    pub refinement: RefinementResult,
    pub check: FolnerCheck,
    /// `Ψ = F` fails the second conclusion.
    pub unrefined: FolnerCheck,
    pub criteria: Vec<Criterion>,
    pub pass: bool,
}

/// `A = B = ⋃ [⌊s_n/2⌋, s_n]` along `F_n = [1, s_n]`, `s_n = 2^{n(n+1)/2}`.
pub fn half_blocks_example(terms: usize, eps: &Exact) -> Result<HalfBlocksReport> {
    let schedule = Schedule::Superexp { count: terms };
    let a = parse_set(&format!("blocks({schedule},1/2,1)"))?;
    let f = crate::folner::make_prefix(&crate::folner::PrefixKind::Intervals(schedule))?;
    let opts = DensityOptions::default();
    let max = f.max_point();
    let sa = a.segments(0, max)?;
    let saa = sa.sumset(&sa, max)?;
    let density_a = density_segments(&sa, &f, &opts)?;
    let density_aa = density_segments(&saa, &f, &opts)?;
    let density_aak = (1..=3)
        .map(|k| density_segments(&saa.periodize(k, 0, max)?, &f, &opts))
        .collect::<Result<Vec<_>>>()?;
    let inst = Instance::Line(&a, &a);
    let delta = density_gap(inst, &f, &opts)?.delta;
    let refinement = refinement_search(inst, &f, 1, &delta, eps, &SearchOptions::default())?;
    let check = verify_folner_theorem(inst, &f, &refinement.psi, 1, &delta, eps, &opts)?;
    let unrefined = verify_folner_theorem(inst, &f, &f, 1, &delta, eps, &opts)?;

    let half = refinement.family.to_string() == "suffix-alpha(1/2)";
    let criteria = vec![
        Criterion::new(
            "d_F(A) near 1/2",
            &density_a.tail_min,
            "|x - 1/2| <= 0.01",
            near(&density_a.tail_min, 0.5, 0.01),
        ),
        Criterion::new(
            "d_F(A+A) near 1/2",
            &density_aa.tail_min,
            "|x - 1/2| <= 0.01",
            near(&density_aa.tail_min, 0.5, 0.01),
        ),
        Criterion::new(
            "d_F(A+A+kZ) = 1 for k = 1,2,3",
            density_aak
                .iter()
                .map(|d| d.tail_min.to_string())
                .collect::<Vec<_>>()
                .join(","),
            "exactly 1",
            density_aak.iter().all(|d| d.tail_min == Exact::integer(1)),
        ),
        Criterion::new(
            "refined family",
            &refinement.family,
            "suffix-alpha(1/2), feasible",
            half && refinement.feasible,
        ),
        Criterion::new(
            "d_Psi(A+A)",
            &refinement.densities.ab,
            ">= 0.98",
            refinement.densities.ab.to_f64() >= 0.98,
        ),
        Criterion::new(
            "gap_Psi",
            &refinement.densities.gap,
            ">= 0.96",
            refinement.densities.gap.to_f64() >= 0.96,
        ),
        Criterion::new("independent check of Psi", check.pass, "pass", check.pass),
        Criterion::new(
            "Psi = F fails d(A+B) = d(A+B+kZ)",
            unrefined.residuals.r2_pass,
            "false",
            !unrefined.residuals.r2_pass,
        ),
    ];
    let pass = criteria.iter().all(|c| c.pass);
    Ok(HalfBlocksReport {
        set: a.to_string(),
        prefix: f.label.clone(),
        density_a,
        density_aa,
        density_aak,
        delta,
        refinement,
        check,
        unrefined,
        criteria,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerReport {
    pub set: String,
    pub prefix: String,
    pub density_a: DensityReport,
    pub density_ab: DensityReport,
    /// Least element of `(A+B+kℤ) \ (A+B)` above the witness floor, per `k`.
    pub witnesses: Vec<(usize, Option<String>)>,
    pub witness_floor: String,
    pub criteria: Vec<Criterion>,
    pub pass: bool,
}

/// Witnesses are sought above this point.
pub const TOWER_WITNESS_FLOOR: u128 = 1_000_000;

/// `A = B = ⋃ F_n` with `F_n = [2^{2^n} + 1, 2·2^{2^n}]`.
pub fn tower_example(terms: usize) -> Result<TowerReport> {
    let schedule = Schedule::Tower { count: terms };
    let values = schedule.values()?;
    let a = parse_set(&format!("blocks({schedule},1,2) \\ blocks({schedule},1,1)"))?;
    let windows = values
        .iter()
        .map(|&s| Window::interval(s + 1, 2 * s))
        .collect();
    let f = FolnerPrefix::new(format!("tower:{schedule}"), windows)?;
    let opts = DensityOptions::default();
    let max = f.max_point();
    let top = max.checked_mul(2).ok_or(Error::Overflow("tower bound"))?;
    let sa = a.segments(0, max)?;
    let sab = sa.sumset(&sa, max)?;
    let density_a = density_segments(&sa, &f, &opts)?;
    let density_ab = density_segments(&sab, &f, &opts)?;
    let witnesses = (1..=3)
        .map(|k| {
            Ok((
                k,
                cofiniteness_witness(&a, &a, k, TOWER_WITNESS_FLOOR + 1, top)?
                    .map(|w| w.to_string()),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let criteria = vec![
        Criterion::new(
            "d_F(A) = d_F(B)",
            &density_a.tail_min,
            ">= 0.99",
            density_a.tail_min.to_f64() >= 0.99,
        ),
        Criterion::new(
            "d_F(A+B)",
            &density_ab.tail_min,
            ">= 0.99",
            density_ab.tail_min.to_f64() >= 0.99,
        ),
        Criterion::new(
            "A+B not cofinite in A+B+kZ, k = 1,2,3",
            witnesses
                .iter()
                .map(|(k, w)| format!("k={k}:{}", w.as_deref().unwrap_or("none")))
                .collect::<Vec<_>>()
                .join(","),
            "a witness above 10^6 for each k",
            witnesses.iter().all(|(_, w)| w.is_some()),
        ),
    ];
    let pass = criteria.iter().all(|c| c.pass);
    Ok(TowerReport {
        set: a.to_string(),
        prefix: f.label.clone(),
        density_a,
        density_ab,
        witnesses,
        witness_floor: TOWER_WITNESS_FLOOR.to_string(),
        criteria,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rec3Report {
    pub set: String,
    pub prefix: String,
    pub density_a: DensityReport,
    pub density_aa: DensityReport,
    pub lower_a: LadRecord,
    pub lower_aa: LadRecord,
    pub criteria: Vec<Criterion>,
    pub pass: bool,
}

/// `A = B = ⋃ [a_n, b_n]` with `a_1 = 1`, `b_n = n²a_n`, `a_{n+1} = 3b_n`,
/// along `F_n = [1, b_n]`, with lower densities from a breakpoint scan.
pub fn rec3_example(terms: usize) -> Result<Rec3Report> {
    let schedule = Schedule::Rec3 { count: terms };
    let a: StructuredSet = parse_set(&format!("blocks({schedule},a,1)"))?;
    let f = crate::folner::make_prefix(&crate::folner::PrefixKind::Intervals(schedule))?;
    let opts = DensityOptions::default();
    let max = f.max_point();
    let sa = a.segments(0, max)?;
    let saa = sa.sumset(&sa, max)?;
    let density_a = density_segments(&sa, &f, &opts)?;
    let density_aa = density_segments(&saa, &f, &opts)?;
    let from = default_tail_from(max);
    let lower_a = lad_scan_segments(&sa, max, from)?;
    let lower_aa = lad_scan_segments(&saa, max, from)?;
    let criteria = vec![
        Criterion::new(
            "d_F(A)",
            &density_a.tail_min,
            ">= 0.98",
            density_a.tail_min.to_f64() >= 0.98,
        ),
        Criterion::new(
            "lower density of A",
            &lower_a.tail_min,
            "|x - 1/3| <= 0.02",
            near(&lower_a.tail_min, 1.0 / 3.0, 0.02),
        ),
        Criterion::new(
            "lower density of A+A",
            &lower_aa.tail_min,
            "|x - 2/3| <= 0.02",
            near(&lower_aa.tail_min, 2.0 / 3.0, 0.02),
        ),
    ];
    let pass = criteria.iter().all(|c| c.pass);
    Ok(Rec3Report {
        set: a.to_string(),
        prefix: f.label.clone(),
        density_a,
        density_aa,
        lower_a,
        lower_aa,
        criteria,
        pass,
    })
}
