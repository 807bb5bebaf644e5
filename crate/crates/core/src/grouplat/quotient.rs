use crate::error::{capacity, Error, Result};

use super::group::{Ambient, GroupRef};
use super::lattice::Sublattice;
use super::subgroup::Subgroup;

/// Largest quotient order for which an explicit addition table is built.
pub const QUOTIENT_MAX_ORDER: usize = 1024;

/// How ambient elements map to cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Ambient finite group; `map[x]` is the coset of element `x`.
    Table { ambient: GroupRef, map: Vec<u32> },
    /// `Z^d / L`; cosets are numbered by the fundamental box of `L`.
    Lattice(Sublattice),
}

/// A finite quotient as an explicit coset table.
///
/// Coset `0` is the identity coset. Representatives are stored as integer
/// coordinate vectors (residues for finite ambients, box vectors for
/// lattice quotients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    reps: Vec<Vec<i64>>,
    table: Vec<u32>,
    negs: Vec<u32>,
    projection: Projection,
}

impl QuotientGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Vec<i64>] {
        &self.reps
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.negs[a] as usize
    }

    /// Coset of an ambient element given by index (finite ambients only).
    pub fn project_index(&self, x: usize) -> Result<usize> {
        match &self.projection {
            Projection::Table { map, .. } => map
                .get(x)
                .map(|&c| c as usize)
                .ok_or_else(|| Error::InvalidInput(format!("element {x} outside ambient group"))),
            Projection::Lattice(_) => Err(Error::InvalidInput(
                "lattice quotient takes coordinate vectors".into(),
            )),
        }
    }

    /// Coset of an ambient element given by coordinates.
    pub fn project_coords(&self, x: &[i64]) -> Result<usize> {
        match &self.projection {
            Projection::Table { ambient, map } => match ambient.as_ref() {
                Ambient::Finite(g) => Ok(map[g.index_of(x)?] as usize),
                Ambient::Quotient(_) => match x {
                    [i] if *i >= 0 && (*i as usize) < map.len() => Ok(map[*i as usize] as usize),
                    _ => Err(Error::InvalidInput(
                        "quotient-of-quotient elements are single indices".into(),
                    )),
                },
            },
            Projection::Lattice(l) => {
                let r = l.reduce(x)?;
                Ok(box_index(&l.diagonal_entries(), &r))
            }
        }
    }

    /// The ambient group when the quotient was built from a finite group.
    pub fn ambient(&self) -> Option<&GroupRef> {
        match &self.projection {
            Projection::Table { ambient, .. } => Some(ambient),
            Projection::Lattice(_) => None,
        }
    }
}

fn group_table(n: usize, add: impl Fn(usize, usize) -> usize) -> (Vec<u32>, Vec<u32>) {
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = add(a, b) as u32;
        }
    }
    let negs = (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| table[a * n + b] == 0)
                .expect("quotient has inverses") as u32
        })
        .collect();
    (table, negs)
}

fn box_index(diag: &[i64], v: &[i64]) -> usize {
    v.iter()
        .zip(diag)
        .fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
}

/// `G / K` for a finite group (or quotient) `G` and a subgroup `K`.
pub fn quotient(group: &GroupRef, k: &Subgroup) -> Result<QuotientGroup> {
    let n = group.order();
    let k = Subgroup::from_elements(group, k.elements())?;
    let order = n / k.order();
    if order > QUOTIENT_MAX_ORDER {
        return Err(capacity(
            "quotient order",
            order as u128,
            QUOTIENT_MAX_ORDER as u128,
        ));
    }
    let mut map = vec![u32::MAX; n];
    let mut rep_index = Vec::with_capacity(order);
    for x in 0..n {
        if map[x] == u32::MAX {
            let c = rep_index.len() as u32;
            for &e in k.elements() {
                map[group.add(x, e)] = c;
            }
            rep_index.push(x);
        }
    }
    let reps = rep_index
        .iter()
        .map(|&x| match group.as_ref() {
            Ambient::Finite(g) => g.decode(x).residues.iter().map(|&r| r as i64).collect(),
            Ambient::Quotient(_) => vec![x as i64],
        })
        .collect();
    let (table, negs) = group_table(order, |a, b| {
        map[group.add(rep_index[a], rep_index[b])] as usize
    });
    Ok(QuotientGroup {
        reps,
        table,
        negs,
        projection: Projection::Table {
            ambient: group.clone(),
            map,
        },
    })
}

/// `Z^d / L` with representatives in the fundamental box of `L`.
pub fn lattice_quotient(l: &Sublattice) -> Result<QuotientGroup> {
    let order = l.index();
    if order > QUOTIENT_MAX_ORDER as u64 {
        return Err(capacity("quotient order", order, QUOTIENT_MAX_ORDER as u64));
    }
    let diag = l.diagonal_entries();
    let reps: Vec<Vec<i64>> = (0..order as usize)
        .map(|mut i| {
            let mut v = vec![0i64; diag.len()];
            for k in (0..diag.len()).rev() {
                v[k] = (i % diag[k] as usize) as i64;
                i /= diag[k] as usize;
            }
            v
        })
        .collect();
    let add = |a: usize, b: usize| {
        let s: Vec<i64> = reps[a].iter().zip(&reps[b]).map(|(x, y)| x + y).collect();
        box_index(&diag, &l.reduce(&s).expect("dimension matches"))
    };
    let (table, negs) = group_table(reps.len(), add);
    Ok(QuotientGroup {
        reps,
        table,
        negs,
        projection: Projection::Lattice(l.clone()),
    })
}
