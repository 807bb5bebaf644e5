//! Residue patterns: subsets of ℤ/M stored with prefix counts.

use std::fmt;
use std::sync::Arc;

use crate::error::{capacity, Error, Result};
use crate::grouplat::{Ambient, FiniteGroup};
use crate::setalg::{sumset, DenseSet};

use super::interval::BoolOp;

/// Largest modulus a pattern may have.
pub const PATTERN_MAX_MODULUS: usize = 1 << 20;
/// Largest modulus for which residue sumsets are formed.
pub const SUM_MAX_MODULUS: usize = 1 << 12;

/// A nonempty residue set `R ⊆ ℤ/M` in reduced form (`M` is the minimal period).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    modulus: usize,
    member: Vec<bool>,
    /// `prefix[r] = |R ∩ [0, r)|`.
    prefix: Vec<u32>,
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} mod {}", join(&self.residues()), self.modulus)
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl Pattern {
    /// Builds and reduces a pattern; `None` when no residue is set.
    pub fn from_member(member: Vec<bool>) -> Result<Option<Arc<Pattern>>> {
        let m = member.len();
        if m == 0 || m > PATTERN_MAX_MODULUS {
            return Err(capacity(
                "residue pattern modulus",
                m as u128,
                PATTERN_MAX_MODULUS as u128,
            ));
        }
        if !member.iter().any(|&b| b) {
            return Ok(None);
        }
        let d = (1..=m)
            .filter(|d| m % d == 0)
            .find(|&d| (d..m).all(|r| member[r] == member[r % d]))
            .unwrap_or(m);
        let member = member[..d].to_vec();
        let mut prefix = Vec::with_capacity(d + 1);
        let mut c = 0u32;
        prefix.push(0);
        for &b in &member {
            c += b as u32;
            prefix.push(c);
        }
        Ok(Some(Arc::new(Pattern {
            modulus: d,
            member,
            prefix,
        })))
    }

    pub fn new(modulus: usize, residues: &[u128]) -> Result<Option<Arc<Pattern>>> {
        if modulus == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        if modulus > PATTERN_MAX_MODULUS {
            return Err(capacity(
                "residue pattern modulus",
                modulus as u128,
                PATTERN_MAX_MODULUS as u128,
            ));
        }
        let mut member = vec![false; modulus];
        for &r in residues {
            member[(r % modulus as u128) as usize] = true;
        }
        Self::from_member(member)
    }

    pub fn full() -> Arc<Pattern> {
        Arc::new(Pattern {
            modulus: 1,
            member: vec![true],
            prefix: vec![0, 1],
        })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn is_full(&self) -> bool {
        self.modulus == 1
    }

    pub fn size(&self) -> usize {
        self.prefix[self.modulus] as usize
    }

    pub fn residues(&self) -> Vec<usize> {
        (0..self.modulus).filter(|&r| self.member[r]).collect()
    }

    pub fn contains(&self, x: u128) -> bool {
        self.member[(x % self.modulus as u128) as usize]
    }

    /// `|{0 <= y < x : y ∈ R + Mℤ}|`.
    pub fn count_below(&self, x: u128) -> u128 {
        let m = self.modulus as u128;
        (x / m) * self.size() as u128 + self.prefix[(x % m) as usize] as u128
    }

    /// `|[lo, hi] ∩ (R + Mℤ)|`.
    pub fn count(&self, lo: u128, hi: u128) -> u128 {
        if lo > hi {
            return 0;
        }
        match hi.checked_add(1) {
            Some(h) => self.count_below(h) - self.count_below(lo),
            None => self.count_below(hi) - self.count_below(lo) + self.contains(hi) as u128,
        }
    }

    /// Smallest member `>= x`, if representable.
    pub fn next_member(&self, x: u128) -> Option<u128> {
        let m = self.modulus as u128;
        let r = (x % m) as usize;
        let step = (0..self.modulus).find(|&i| self.member[(r + i) % self.modulus])?;
        x.checked_add(step as u128)
    }

    /// Largest member `<= x`.
    pub fn prev_member(&self, x: u128) -> Option<u128> {
        let m = self.modulus;
        let r = (x % m as u128) as usize;
        let step = (0..m).find(|&i| self.member[(r + m - i) % m])?;
        x.checked_sub(step as u128)
    }

    /// Maximal runs of consecutive residues inside `[0, M)`.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < self.modulus {
            if self.member[i] {
                let s = i;
                while i + 1 < self.modulus && self.member[i + 1] {
                    i += 1;
                }
                runs.push((s, i));
            }
            i += 1;
        }
        runs
    }

    /// Pattern of `R + t`.
    pub fn shift(self: &Arc<Self>, t: u128) -> Arc<Pattern> {
        let m = self.modulus;
        let t = (t % m as u128) as usize;
        if t == 0 {
            return self.clone();
        }
        let mut member = vec![false; m];
        for r in 0..m {
            member[(r + t) % m] = self.member[r];
        }
        Self::from_member(member)
            .expect("same modulus")
            .expect("nonempty")
    }

    /// Pattern of `-R`.
    pub fn negate(self: &Arc<Self>) -> Arc<Pattern> {
        let m = self.modulus;
        let member = (0..m).map(|r| self.member[(m - r) % m]).collect();
        Self::from_member(member)
            .expect("same modulus")
            .expect("nonempty")
    }

    /// The residues hit modulo `k`.
    pub fn reduce_mod(&self, k: usize) -> Result<Option<Arc<Pattern>>> {
        let l = lcm(self.modulus, k)?;
        let mut member = vec![false; k];
        for r in 0..l {
            if self.member[r % self.modulus] {
                member[r % k] = true;
            }
        }
        Self::from_member(member)
    }

    /// Pointwise combination of two patterns with modulus `lcm`.
    pub fn combine(
        a: Option<&Pattern>,
        b: Option<&Pattern>,
        op: BoolOp,
    ) -> Result<Option<Arc<Pattern>>> {
        let ma = a.map_or(1, |p| p.modulus);
        let mb = b.map_or(1, |p| p.modulus);
        let l = lcm(ma, mb)?;
        let member = (0..l)
            .map(|r| {
                let x = a.is_some_and(|p| p.member[r % ma]);
                let y = b.is_some_and(|p| p.member[r % mb]);
                op.apply(x, y)
            })
            .collect();
        Self::from_member(member)
    }

    /// `R_a + R_b` modulo `lcm(M_a, M_b)`.
    pub fn sum(a: &Pattern, b: &Pattern) -> Result<Arc<Pattern>> {
        let l = lcm(a.modulus, b.modulus)?;
        if l > SUM_MAX_MODULUS {
            return Err(capacity(
                "modulus of a residue sumset",
                l as u128,
                SUM_MAX_MODULUS as u128,
            ));
        }
        let g = Ambient::Finite(FiniteGroup::cyclic(l)?).into_ref();
        let lift = |p: &Pattern| -> Result<DenseSet> {
            let e: Vec<usize> = (0..l).filter(|&r| p.member[r % p.modulus]).collect();
            DenseSet::from_elements(g.clone(), &e)
        };
        let s = sumset(&lift(a)?, &lift(b)?)?;
        let mut member = vec![false; l];
        for x in s.iter() {
            member[x] = true;
        }
        Ok(Self::from_member(member)?.expect("sum of nonempty sets"))
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> Result<usize> {
    let l = (a / gcd(a, b)).checked_mul(b).unwrap_or(usize::MAX);
    if l > PATTERN_MAX_MODULUS {
        return Err(capacity(
            "residue pattern modulus",
            l as u128,
            PATTERN_MAX_MODULUS as u128,
        ));
    }
    Ok(l)
}
