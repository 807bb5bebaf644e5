use serde::Serialize;

use crate::error::{capacity, Error, Result};
use crate::folner::TorusSet;
use crate::grouplat::{lattice_quotient, Ambient, FiniteGroup, GroupRef, Subgroup, Sublattice};
use crate::intalg::{StructuredSet, PATTERN_MAX_MODULUS};
use crate::setalg::{kj_reduce, DenseSet};

/// The period of a periodic model: `Lℤ`, or a sublattice of `ℤ^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Period {
    Modulus(u128),
    Lattice(Sublattice),
}

/// KJ-stabilizer of a periodic pair, computed in the finite quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KjReport {
    pub quotient: String,
    pub quotient_order: usize,
    pub a: String,
    pub b: String,
    pub sum: String,
    /// Elements of `K` as quotient labels.
    pub stabilizer: Vec<String>,
    pub stabilizer_order: usize,
    /// `k = [Γ : K]`.
    pub index: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub size_sum: usize,
    pub size_a_plus_k: usize,
    pub size_b_plus_k: usize,
    pub equation_holds: bool,
    #[serde(skip)]
    pub subgroup: Subgroup,
}

/// Where a structured set stops having finite structure: beyond this point
/// only the periodic leaves matter.
pub(crate) fn finite_extent(s: &StructuredSet) -> Result<u128> {
    Ok(match s {
        StructuredSet::Periodic { .. } => 0,
        StructuredSet::Blocks { .. } => s.block_list()?.last().map_or(0, |&(_, hi)| hi + 1),
        StructuredSet::Interval { hi, .. } => hi + 1,
        StructuredSet::Shift { set, by } => {
            let e = finite_extent(set)?;
            if *by > 0 {
                e.checked_add(*by as u128)
                    .ok_or(Error::Overflow("finite extent"))?
            } else {
                e
            }
        }
        StructuredSet::Binary { left, right, .. } => {
            finite_extent(left)?.max(finite_extent(right)?)
        }
    })
}

/// Least common multiple of the periodic moduli in the tree (1 if none).
pub(crate) fn tree_period(s: &StructuredSet) -> Result<u128> {
    let join = |a: u128, b: u128| -> Result<u128> {
        let l = num::integer::lcm(a, b);
        if l > PATTERN_MAX_MODULUS as u128 {
            return Err(capacity("common period", l, PATTERN_MAX_MODULUS as u128));
        }
        Ok(l)
    };
    match s {
        StructuredSet::Periodic { modulus, .. } => Ok(*modulus),
        StructuredSet::Shift { set, .. } => tree_period(set),
        StructuredSet::Binary { left, right, .. } => join(tree_period(left)?, tree_period(right)?),
        _ => Ok(1),
    }
}

/// Residues modulo `l` of the periodic tail of `s`; fails when the tail is
/// not `l`-periodic.
fn tail_residues(s: &StructuredSet, l: u128) -> Result<Vec<usize>> {
    let m = num::integer::lcm(tree_period(s)?, l);
    if m > PATTERN_MAX_MODULUS as u128 {
        return Err(capacity("common period", m, PATTERN_MAX_MODULUS as u128));
    }
    let start = finite_extent(s)?.div_ceil(m) * m;
    let segs = s.segments(start, start + m - 1)?;
    let mut member = vec![false; l as usize];
    for x in segs.iter() {
        member[(x % l) as usize] = true;
    }
    let residues: Vec<usize> = (0..l as usize).filter(|&r| member[r]).collect();
    if segs.count() != residues.len() as u128 * (m / l) {
        return Err(Error::Precondition(format!(
            "{s} is not eventually periodic with period {l}"
        )));
    }
    Ok(residues)
}

fn reduce(a: &DenseSet, b: &DenseSet, quotient: String) -> Result<KjReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition(
            "the periodic parts of A and B must be nonempty".into(),
        ));
    }
    let k = kj_reduce(a, b, &Subgroup::trivial()).map_err(|e| match e {
        Error::Precondition(msg) if msg.starts_with("deficiency") => {
            Error::Hypothesis(format!("no KJ reduction applies: {msg}"))
        }
        e => e,
    })?;
    let g = a.group();
    let sum = a.sumset_unchecked(b);
    let (ak, bk) = (a.plus_subgroup(&k).len(), b.plus_subgroup(&k).len());
    Ok(KjReport {
        quotient,
        quotient_order: a.order(),
        a: format!("{{{}}}", a.to_literal()),
        b: format!("{{{}}}", b.to_literal()),
        sum: format!("{{{}}}", sum.to_literal()),
        stabilizer: k.elements().iter().map(|&e| g.label(e)).collect(),
        stabilizer_order: k.order(),
        index: a.order() / k.order(),
        size_a: a.len(),
        size_b: b.len(),
        size_sum: sum.len(),
        size_a_plus_k: ak,
        size_b_plus_k: bk,
        equation_holds: sum.len() + k.order() == ak + bk,
        subgroup: k,
    })
}

/// KJ-stabilizer of eventually periodic `A, B ⊆ ℕ` in the quotient `ℤ/L`:
/// `K = H(A+B)` computed on the periodic tails, with `k = [ℤ/L : K]`.
pub fn kj_stabilizer_periodic(
    a: &StructuredSet,
    b: &StructuredSet,
    period: &Period,
) -> Result<KjReport> {
    let l = match period {
        Period::Modulus(m) => *m,
        Period::Lattice(lat) if lat.dim() == 1 => lat.index() as u128,
        Period::Lattice(_) => {
            return Err(Error::InvalidInput(
                "subsets of N need a modulus or a 1-D lattice".into(),
            ))
        }
    };
    if l == 0 || l > PATTERN_MAX_MODULUS as u128 {
        return Err(Error::InvalidInput(format!(
            "period must be in [1, {PATTERN_MAX_MODULUS}]"
        )));
    }
    let g: GroupRef = Ambient::Finite(FiniteGroup::cyclic(l as usize)?).into_ref();
    let da = DenseSet::from_elements(g.clone(), &tail_residues(a, l)?)?;
    let db = DenseSet::from_elements(g, &tail_residues(b, l)?)?;
    reduce(&da, &db, format!("Z/{l}"))
}

/// KJ-stabilizer of periodic subsets of `ℤ^d` in `ℤ^d / L`. Both sets must
/// be `L`-periodic.
pub fn kj_stabilizer_torus(a: &TorusSet, b: &TorusSet, l: &Sublattice) -> Result<KjReport> {
    let q = lattice_quotient(l)?;
    let mut images = Vec::new();
    for s in [a, b] {
        if s.dim() != l.dim() {
            return Err(Error::InvalidInput(
                "set and lattice dimensions differ".into(),
            ));
        }
        let n = s.period() as i64;
        for i in 0..l.dim() {
            let mut e = vec![0; l.dim()];
            e[i] = n;
            if !l.contains(&e)? {
                return Err(Error::Precondition(format!(
                    "the lattice does not contain {n}Z^{}",
                    l.dim()
                )));
            }
        }
        let g = s.residues().group().clone();
        let fg = g.as_finite().expect("torus groups are finite");
        let mut idx = Vec::new();
        for x in s.residues().iter() {
            let coords: Vec<i64> = fg.decode(x).residues.iter().map(|&r| r as i64).collect();
            idx.push(q.project_coords(&coords)?);
        }
        idx.sort_unstable();
        idx.dedup();
        let fibre = s.residues().order() / q.order();
        if idx.len() * fibre != s.residues().len() {
            return Err(Error::Precondition(
                "set is not periodic modulo the lattice".into(),
            ));
        }
        images.push(idx);
    }
    let hnf: Vec<String> = l.hnf().iter().map(|r| format!("{r:?}")).collect();
    let g: GroupRef = Ambient::Quotient(q).into_ref();
    let da = DenseSet::from_elements(g.clone(), &images[0])?;
    let db = DenseSet::from_elements(g, &images[1])?;
    reduce(&da, &db, format!("Z^{}/[{}]", l.dim(), hnf.join(",")))
}
