use kneser::folner::{
    defect_report, density_segments, density_torus, lad_scan, parse_prefix, ubd_estimate,
    DefectReport, DensityOptions, DensityReport, FolnerPrefix, LadRecord, TorusSet, UbdRecord,
};
use kneser::grouplat::{
    enumerate_sublattices, hnf_reduce, subgroup_closure, Ambient, FiniteGroup, GroupRef, Sublattice,
};
use kneser::intalg::parse_set;
use kneser::refine::{
    density_gap, half_blocks_example, kj_stabilizer_periodic, kj_stabilizer_torus, rec3_example,
    refinement_search, tower_example, ubd_pipeline, verify_folner_theorem, verify_kneser_lad,
    FamilyKind, FolnerCheck, GapReport, HalfBlocksReport, Instance, KjReport, KneserLadReport,
    Period, PipelineOptions, Rec3Report, RefinementResult, SearchOptions, TowerReport,
};
use kneser::setalg::{kj_reduce, kneser_certificate, sumset, DenseSet, KneserCertificate};
use kneser::verify::{
    check_gap_bound, check_jin_analog, check_kneser, check_push_analog, check_two_subgroups,
    sweep_exhaustive, sweep_random, CheckOutcome, SweepOptions, SweepStats,
};
use kneser::{Error, Exact};
use serde::Serialize;
use serde_json::Value;

use crate::args::*;
use crate::render::envelope;
use crate::CliError;

/// A finished command: its JSON record and whether any check failed.
pub struct Outcome {
    pub record: Value,
    pub failed: bool,
    /// Lines for stderr in text mode (timings and the like).
    pub log: Vec<String>,
}

fn done(command: &str, failed: bool, report: &impl Serialize) -> Result<Outcome, CliError> {
    Ok(Outcome {
        record: envelope(command, failed, report)?,
        failed,
        log: Vec::new(),
    })
}

fn group(spec: &str) -> Result<GroupRef, CliError> {
    Ok(Ambient::Finite(FiniteGroup::parse(spec)?).into_ref())
}

fn tuples(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "expected residue tuples like (0,1);(1,1), found {text:?}"
        ))
    };
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let inner = t
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .unwrap_or(t);
            inner
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        })
        .collect()
}

fn torus_set(period: usize, text: &str) -> Result<TorusSet, CliError> {
    let reps = tuples(text)?;
    let dim = reps.first().map_or(1, Vec::len);
    Ok(TorusSet::new(period, dim, &reps)?)
}

fn matrix(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    tuples(text)
}

#[derive(Serialize)]
struct Checks {
    kneser_equation: CheckOutcome,
    jin_analog: CheckOutcome,
    push_analog: CheckOutcome,
    gap_bound: CheckOutcome,
    two_subgroups: CheckOutcome,
}

#[derive(Serialize)]
struct AnalyzeReport {
    group: String,
    a: String,
    b: String,
    sum: String,
    stabilizer: String,
    certificate: KneserCertificate,
    checks: Checks,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let g = group(&args.group)?;
    let a = DenseSet::parse(g.clone(), &args.a)?;
    let b = DenseSet::parse(g.clone(), &args.b)?;
    let cert = kneser_certificate(&a, &b)?;
    let sum = sumset(&a, &b)?;
    let two_subgroups = match check_two_subgroups(&sum) {
        Err(Error::Capacity { what, limit, .. }) => CheckOutcome::Skip {
            reason: format!("{what} is limited to {limit}"),
        },
        other => other?,
    };
    let checks = Checks {
        kneser_equation: check_kneser(&a, &b)?,
        jin_analog: check_jin_analog(&a, &b)?,
        push_analog: check_push_analog(&a, &b)?,
        gap_bound: check_gap_bound(&a, &b)?,
        two_subgroups,
    };
    let failed = [
        &checks.kneser_equation,
        &checks.jin_analog,
        &checks.push_analog,
        &checks.gap_bound,
        &checks.two_subgroups,
    ]
    .iter()
    .any(|c| c.is_fail());
    let report = AnalyzeReport {
        group: args.group.clone(),
        a: a.to_literal(),
        b: b.to_literal(),
        sum: sum.to_literal(),
        stabilizer: DenseSet::subgroup(g, &cert.stabilizer).to_literal(),
        certificate: cert,
        checks,
    };
    done("analyze", failed, &report)
}

#[derive(Serialize)]
struct SweepReport {
    total_violations: u64,
    runs: Vec<SweepStats>,
}

pub fn sweep(args: &SweepArgs, threads: Option<usize>) -> Result<Outcome, CliError> {
    let opts = SweepOptions {
        threads,
        sample_a: args.sample_a,
        seed: args.seed,
    };
    let mut runs = Vec::new();
    let mut log = Vec::new();
    for spec in &args.group {
        let g = group(spec)?;
        let run = match args.mode {
            SweepMode::Exhaustive => sweep_exhaustive(&g, &opts)?,
            SweepMode::Random => sweep_random(&g, args.trials, args.seed, &opts)?,
        };
        log.push(format!(
            "{}: {} pairs in {:.2}s on {} threads",
            run.stats.group, run.stats.pairs_tested, run.elapsed_seconds, run.threads
        ));
        runs.push(run.stats);
    }
    let total_violations = runs.iter().map(|r| r.violations.total()).sum();
    let mut out = done(
        "sweep",
        total_violations > 0,
        &SweepReport {
            total_violations,
            runs,
        },
    )?;
    out.log = log;
    Ok(out)
}

#[derive(Serialize)]
struct DensityOut {
    density: DensityReport,
    defect: Option<DefectReport>,
}

fn shift(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad shift {text:?}")))
        })
        .collect()
}

pub fn density(args: &DensityArgs) -> Result<Outcome, CliError> {
    let p = parse_prefix(&args.prefix)?;
    let opts = DensityOptions {
        tail_terms: args.tail_terms,
        ..DensityOptions::default()
    };
    let density = match args.input.torus {
        Some(period) => density_torus(&torus_set(period, &args.input.set)?, &p, &opts)?,
        None => {
            let s = parse_set(&args.input.set)?;
            density_segments(&s.segments(0, p.max_point())?, &p, &opts)?
        }
    };
    let defect = if args.shift.is_empty() {
        None
    } else {
        let shifts = args
            .shift
            .iter()
            .map(|s| shift(s))
            .collect::<Result<Vec<_>, _>>()?;
        Some(defect_report(&p, &shifts)?)
    };
    done("density", false, &DensityOut { density, defect })
}

pub fn lad(args: &LadArgs) -> Result<Outcome, CliError> {
    let s = parse_set(&args.set)?;
    let r: LadRecord = lad_scan(&s, args.bound, args.tail_from)?;
    done("lad", false, &r)
}

#[derive(Serialize)]
struct UbdOut {
    estimate: UbdRecord,
    pipeline: Option<kneser::refine::UbdPipelineReport>,
}

pub fn ubd(args: &UbdArgs) -> Result<Outcome, CliError> {
    let s = parse_set(&args.set)?;
    let candidates = args
        .candidate
        .iter()
        .map(|c| parse_prefix(c))
        .collect::<kneser::Result<Vec<FolnerPrefix>>>()?;
    let estimate = ubd_estimate(&s, &candidates, Some(args.bound))?;
    let pipeline = if args.estimate_only {
        None
    } else {
        let opts = PipelineOptions {
            k: args.k,
            terms: args.terms,
            search: SearchOptions::default(),
        };
        Some(ubd_pipeline(&s, args.bound, &args.eps, &opts)?)
    };
    let failed = pipeline
        .as_ref()
        .is_some_and(|p| !p.refinement.feasible || !p.check.pass);
    done("ubd", failed, &UbdOut { estimate, pipeline })
}

#[derive(Serialize)]
struct RefineOut {
    gap: GapReport,
    result: RefinementResult,
    check: FolnerCheck,
}

pub fn refine(args: &RefineArgs) -> Result<Outcome, CliError> {
    let f = parse_prefix(&args.prefix)?;
    let line;
    let torus;
    let inst = match args.input.torus {
        Some(period) => {
            torus = (
                torus_set(period, &args.input.a)?,
                torus_set(period, &args.input.b)?,
            );
            Instance::Torus(&torus.0, &torus.1)
        }
        None => {
            line = (parse_set(&args.input.a)?, parse_set(&args.input.b)?);
            Instance::Line(&line.0, &line.1)
        }
    };
    let families = args
        .families
        .iter()
        .map(|f| match f {
            FamilyArg::Suffix => FamilyKind::Suffix,
            FamilyArg::Coset => FamilyKind::Coset,
            FamilyArg::SubBox => FamilyKind::SubBox,
        })
        .collect();
    let opts = SearchOptions {
        families,
        alpha_denominator: args.alpha_denominator,
        ..SearchOptions::default()
    };
    let gap = density_gap(inst, &f, &opts.density)?;
    let delta = args.delta.clone().unwrap_or_else(|| gap.delta.clone());
    let result = refinement_search(inst, &f, args.k, &delta, &args.eps, &opts)?;
    let check = verify_folner_theorem(
        inst,
        &f,
        &result.psi,
        args.k,
        &delta,
        &args.eps,
        &opts.density,
    )?;
    if result.feasible && !check.pass {
        return Err(Error::Violation("the searcher and the checker disagree".into()).into());
    }
    let failed = !result.feasible;
    done("refine", failed, &RefineOut { gap, result, check })
}

pub fn kneser_lad(args: &KneserLadArgs) -> Result<Outcome, CliError> {
    let (a, b) = (parse_set(&args.a)?, parse_set(&args.b)?);
    let r: KneserLadReport = verify_kneser_lad(&a, &b, args.k, args.bound, &args.eps)?;
    done("kneser-lad", !r.pass, &r)
}

#[derive(Serialize)]
struct FiniteKj {
    group: String,
    a: String,
    b: String,
    k0: String,
    k: String,
    order: usize,
    index: usize,
}

pub fn kj(args: &KjArgs) -> Result<Outcome, CliError> {
    if let Some(spec) = &args.group {
        let g = group(spec)?;
        let a = DenseSet::parse(g.clone(), &args.a)?;
        let b = DenseSet::parse(g.clone(), &args.b)?;
        let gens = match &args.k0 {
            Some(text) => DenseSet::parse(g.clone(), text)?.elements(),
            None => Vec::new(),
        };
        let k0 = subgroup_closure(&g, &gens);
        let k = kj_reduce(&a, &b, &k0)?;
        let report = FiniteKj {
            group: spec.clone(),
            a: a.to_literal(),
            b: b.to_literal(),
            k0: DenseSet::subgroup(g.clone(), &k0).to_literal(),
            k: DenseSet::subgroup(g.clone(), &k).to_literal(),
            order: k.order(),
            index: g.order() / k.order(),
        };
        return done("kj", false, &report);
    }
    let r: KjReport = match (&args.lattice, args.torus, args.modulus) {
        (Some(rows), Some(period), _) => {
            let l = hnf_reduce(&matrix(rows)?)?;
            kj_stabilizer_torus(
                &torus_set(period, &args.a)?,
                &torus_set(period, &args.b)?,
                &l,
            )?
        }
        (None, None, Some(m)) => kj_stabilizer_periodic(
            &parse_set(&args.a)?,
            &parse_set(&args.b)?,
            &Period::Modulus(m),
        )?,
        _ => {
            return Err(CliError::Usage(
                "kj needs --group, --modulus, or --lattice with --torus".into(),
            ))
        }
    };
    done("kj", false, &r)
}

#[derive(Serialize)]
struct Lattice {
    index: u64,
    hnf: Vec<Vec<i64>>,
}

impl From<&Sublattice> for Lattice {
    fn from(l: &Sublattice) -> Self {
        Lattice {
            index: l.index(),
            hnf: l.hnf().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct HnfOut {
    dim: usize,
    count: usize,
    lattices: Vec<Lattice>,
}

pub fn hnf(args: &HnfArgs) -> Result<Outcome, CliError> {
    let lattices: Vec<Lattice> = match (&args.matrix, args.index) {
        (Some(m), _) => vec![Lattice::from(&hnf_reduce(&matrix(m)?)?)],
        (None, Some(n)) => enumerate_sublattices(args.dim, n)?
            .iter()
            .map(Lattice::from)
            .collect(),
        (None, None) => return Err(CliError::Usage("hnf needs --index or --matrix".into())),
    };
    let dim = lattices.first().map_or(args.dim, |l| l.hnf.len());
    done(
        "hnf",
        false,
        &HnfOut {
            dim,
            count: lattices.len(),
            lattices,
        },
    )
}

#[derive(Serialize)]
struct ExamplesOut {
    pass: bool,
    summary: Vec<String>,
    half_blocks: Option<HalfBlocksReport>,
    tower: Option<TowerReport>,
    rec3: Option<Rec3Report>,
}

pub fn examples(args: &ExamplesArgs) -> Result<Outcome, CliError> {
    let want = |w: Which| args.which == w || args.which == Which::All;
    let eps: &Exact = &args.eps;
    let half = want(Which::HalfBlocks)
        .then(|| half_blocks_example(args.terms.unwrap_or(10), eps))
        .transpose()?;
    let tower = want(Which::Tower)
        .then(|| tower_example(args.terms.unwrap_or(5)))
        .transpose()?;
    let rec3 = want(Which::Rec3)
        .then(|| rec3_example(args.terms.unwrap_or(10)))
        .transpose()?;
    let mut summary = Vec::new();
    let mut pass = true;
    let groups = [
        ("half-blocks", half.as_ref().map(|r| &r.criteria)),
        ("tower", tower.as_ref().map(|r| &r.criteria)),
        ("rec3", rec3.as_ref().map(|r| &r.criteria)),
    ];
    for (name, criteria) in groups {
        for c in criteria.into_iter().flatten() {
            pass &= c.pass;
            let tag = if c.pass { "PASS" } else { "FAIL" };
            summary.push(format!(
                "{tag} {name}: {} = {} (want {})",
                c.name, c.value, c.target
            ));
        }
    }
    done(
        "examples",
        !pass,
        &ExamplesOut {
            pass,
            summary,
            half_blocks: half,
            tower,
            rec3,
        },
    )
}
