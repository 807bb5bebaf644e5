use std::sync::Arc;

use crate::error::{capacity, Error, Result};
use crate::grouplat::{Ambient, FiniteGroup, GroupRef, Sublattice};
use crate::setalg::{sumset, DenseSet};

/// Cells a single box count may visit.
pub const BOX_MAX_CELLS: u128 = 100_000_000;

/// A subset of `ℤ^d` invariant under `nℤ^d`, stored as a subset of `(ℤ/n)^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSet {
    period: usize,
    dim: usize,
    set: DenseSet,
    /// `row_prefix[row * (n + 1) + j]` counts members in the first `j` cells of a row.
    row_prefix: Arc<Vec<u32>>,
}

fn torus(period: usize, dim: usize) -> Result<GroupRef> {
    if period == 0 || dim == 0 {
        return Err(Error::InvalidInput(
            "torus sets need positive period and dimension".into(),
        ));
    }
    Ok(Ambient::Finite(FiniteGroup::new(&vec![period; dim])?).into_ref())
}

impl TorusSet {
    fn from_dense(period: usize, dim: usize, set: DenseSet) -> Self {
        let rows = set.order() / period;
        let mut prefix = Vec::with_capacity(rows * (period + 1));
        for row in 0..rows {
            let mut c = 0;
            prefix.push(0);
            for j in 0..period {
                c += set.contains(row * period + j) as u32;
                prefix.push(c);
            }
        }
        TorusSet {
            period,
            dim,
            set,
            row_prefix: Arc::new(prefix),
        }
    }

    /// The union of the classes of `residues` modulo `nℤ^d`.
    pub fn new(period: usize, dim: usize, residues: &[Vec<i64>]) -> Result<Self> {
        let g = torus(period, dim)?;
        let fg = g.as_finite().expect("finite");
        let mut idx = Vec::with_capacity(residues.len());
        for r in residues {
            if r.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "residue {r:?} is not {dim}-dimensional"
                )));
            }
            idx.push(fg.index_of(r)?);
        }
        Ok(Self::from_dense(
            period,
            dim,
            DenseSet::from_elements(g, &idx)?,
        ))
    }

    /// The union of the cosets `r + L` for the given representatives.
    pub fn from_lattice(l: &Sublattice, reps: &[Vec<i64>]) -> Result<Self> {
        let period = l.index() as usize;
        let dim = l.dim();
        let g = torus(period, dim)?;
        let fg = g.as_finite().expect("finite");
        let mut wanted = Vec::with_capacity(reps.len());
        for r in reps {
            wanted.push(l.reduce(r)?);
        }
        let members: Vec<usize> = (0..fg.order())
            .filter(|&i| {
                let x: Vec<i64> = fg.decode(i).residues.iter().map(|&v| v as i64).collect();
                l.reduce(&x).is_ok_and(|red| wanted.contains(&red))
            })
            .collect();
        Ok(Self::from_dense(
            period,
            dim,
            DenseSet::from_elements(g, &members)?,
        ))
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn residues(&self) -> &DenseSet {
        &self.set
    }

    fn index(&self, x: &[i64]) -> usize {
        let n = self.period as i64;
        x.iter()
            .fold(0, |acc, &v| acc * self.period + v.rem_euclid(n) as usize)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim && self.set.contains(self.index(x))
    }

    /// Density `|S ∩ (ℤ/n)^d| / n^d`.
    pub fn density(&self) -> (u128, u128) {
        (self.set.len() as u128, self.set.order() as u128)
    }

    /// The same set described with period `lcm(n, m)`.
    pub fn lift(&self, m: usize) -> Result<TorusSet> {
        let l = self.period / gcd(self.period, m) * m;
        if l == self.period {
            return Ok(self.clone());
        }
        let group = torus(l, self.dim)?;
        let fg = group.as_finite().expect("finite");
        let members: Vec<usize> = (0..fg.order())
            .filter(|&i| {
                let x: Vec<i64> = fg.decode(i).residues.iter().map(|&v| v as i64).collect();
                self.contains(&x)
            })
            .collect();
        Ok(Self::from_dense(
            l,
            self.dim,
            DenseSet::from_elements(group, &members)?,
        ))
    }

    /// `S + T` (both lifted to a common period).
    pub fn sumset(&self, other: &TorusSet) -> Result<TorusSet> {
        if self.dim != other.dim {
            return Err(Error::InvalidInput(
                "torus sets of different dimensions".into(),
            ));
        }
        let (a, b) = (self.lift(other.period)?, other.lift(self.period)?);
        let s = sumset(&a.set, &b.set)?;
        Ok(Self::from_dense(a.period, a.dim, s))
    }

    /// `S + kℤ^d`.
    pub fn plus_multiples(&self, k: usize) -> Result<TorusSet> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be positive".into()));
        }
        let a = self.lift(k)?;
        let fg = a.set.group().as_finite().expect("finite").clone();
        let n = a.period;
        let steps = n / k;
        let total = steps.pow(self.dim as u32);
        let mut out = DenseSet::empty(a.set.group().clone());
        for x in a.set.iter() {
            let base = &fg.decode(x).residues;
            // Add every element of k(ℤ/n)^d.
            for t in 0..total {
                let mut rem = t;
                let mut idx = 0;
                for &b in base {
                    idx = idx * n + (b + (rem % steps) * k) % n;
                    rem /= steps;
                }
                out.insert(idx);
            }
        }
        Ok(Self::from_dense(n, self.dim, out))
    }

    /// `|S ∩ ∏ [lo_i, hi_i]|` by row counts.
    pub fn count_box(&self, lo: &[i64], hi: &[i64]) -> Result<u128> {
        if lo.len() != self.dim || hi.len() != self.dim {
            return Err(Error::InvalidInput(
                "box dimension differs from set dimension".into(),
            ));
        }
        if lo.iter().zip(hi).any(|(a, b)| a > b) {
            return Ok(0);
        }
        let cells: u128 = lo
            .iter()
            .zip(hi)
            .map(|(a, b)| (b - a + 1) as u128)
            .product();
        if cells > BOX_MAX_CELLS {
            return Err(capacity("cells in a box count", cells, BOX_MAX_CELLS));
        }
        let n = self.period;
        let d = self.dim;
        let (a, b) = (lo[d - 1], hi[d - 1]);
        let row_total = |row: usize, upto: i64| -> u128 {
            // Members x of the row with 0 <= x < upto (upto may be negative).
            let q = upto.div_euclid(n as i64);
            let r = upto.rem_euclid(n as i64) as usize;
            let full = self.row_prefix[row * (n + 1) + n] as i128;
            (q as i128 * full + self.row_prefix[row * (n + 1) + r] as i128) as u128
        };
        let mut total = 0u128;
        let mut coords: Vec<i64> = lo[..d - 1].to_vec();
        loop {
            let row = coords
                .iter()
                .fold(0usize, |acc, &v| acc * n + v.rem_euclid(n as i64) as usize);
            total += row_total(row, b + 1).wrapping_sub(row_total(row, a));
            // Odometer over the leading coordinates.
            let mut i = d - 1;
            loop {
                if i == 0 {
                    return Ok(total);
                }
                i -= 1;
                if coords[i] < hi[i] {
                    coords[i] += 1;
                    break;
                }
                coords[i] = lo[i];
            }
        }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
