use std::fmt;
use std::sync::Arc;

use crate::error::{capacity, Error, Result};

use super::quotient::QuotientGroup;

/// Largest group order accepted by [`FiniteGroup::new`].
pub const DEFAULT_MAX_ORDER: usize = 1 << 20;

/// `Z_{n1} x ... x Z_{nd}` with mixed-radix element indexing.
///
/// The last coordinate varies fastest: the index of `(r1, ..., rd)` is
/// `sum_i r_i * stride_i` with `stride_d = 1` and
/// `stride_i = n_{i+1} * stride_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    moduli: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
}

/// A group element as explicit residues, one per modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub residues: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(moduli: &[usize]) -> Result<Self> {
        Self::with_max(moduli, DEFAULT_MAX_ORDER)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn with_max(moduli: &[usize], max_order: usize) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidInput(
                "a group needs at least one modulus".into(),
            ));
        }
        if moduli.contains(&0) {
            return Err(Error::InvalidInput("moduli must be positive".into()));
        }
        let mut order: u128 = 1;
        for &n in moduli {
            order = order.saturating_mul(n as u128);
        }
        if order > max_order as u128 {
            return Err(capacity("group order", order, max_order as u128));
        }
        let mut strides = vec![1usize; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        Ok(FiniteGroup {
            moduli: moduli.to_vec(),
            strides,
            order: order as usize,
        })
    }

    /// Parses `"n1xn2x...xnd"`, e.g. `"2x4"` or `"6"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut moduli = Vec::new();
        let mut pos = 0;
        for part in spec.trim().split(['x', 'X']) {
            let n: usize = part.trim().parse().map_err(|_| Error::Parse {
                pos,
                msg: format!("expected a positive modulus, found {part:?}"),
            })?;
            moduli.push(n);
            pos += part.len() + 1;
        }
        Self::new(&moduli)
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn spec(&self) -> String {
        self.moduli
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    /// Index of the element whose residues are `coords` reduced modulo each
    /// modulus (negative coordinates are allowed).
    pub fn index_of(&self, coords: &[i64]) -> Result<usize> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "element has {} coordinates, group has rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(coords
            .iter()
            .zip(&self.moduli)
            .zip(&self.strides)
            .map(|((&c, &n), &s)| c.rem_euclid(n as i64) as usize * s)
            .sum())
    }

    pub fn encode(&self, g: &GroupElement) -> Result<usize> {
        if g.residues.len() != self.rank()
            || g.residues.iter().zip(&self.moduli).any(|(r, n)| r >= n)
        {
            return Err(Error::InvalidInput(format!(
                "{g:?} is not an element of {}",
                self.spec()
            )));
        }
        Ok(g.residues
            .iter()
            .zip(&self.strides)
            .map(|(r, s)| r * s)
            .sum())
    }

    pub fn decode(&self, mut index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        let mut residues = vec![0; self.rank()];
        for (i, s) in self.strides.iter().enumerate() {
            residues[i] = index / s;
            index %= s;
        }
        GroupElement { residues }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.moduli.len() == 1 {
            let s = a + b;
            return if s >= self.order { s - self.order } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for (&n, &s) in self.moduli.iter().zip(&self.strides) {
            let (ra, rb) = (a / s, b / s);
            a %= s;
            b %= s;
            let r = ra + rb;
            out += if r >= n { r - n } else { r } * s;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        for (&n, &s) in self.moduli.iter().zip(&self.strides) {
            let r = a / s;
            a %= s;
            out += if r == 0 { 0 } else { n - r } * s;
        }
        out
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// The ambient group of a dense set: either an explicit product of cyclic
/// groups or a coset-table quotient.
///
/// Both number their elements `0..order` with `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    Finite(FiniteGroup),
    Quotient(QuotientGroup),
}

pub type GroupRef = Arc<Ambient>;

impl Ambient {
    pub fn order(&self) -> usize {
        match self {
            Ambient::Finite(g) => g.order(),
            Ambient::Quotient(q) => q.order(),
        }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match self {
            Ambient::Finite(g) => g.add(a, b),
            Ambient::Quotient(q) => q.add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        match self {
            Ambient::Finite(g) => g.neg(a),
            Ambient::Quotient(q) => q.neg(a),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match self {
            Ambient::Finite(g) => Some(g),
            Ambient::Quotient(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Ambient::Finite(g) => g.spec(),
            Ambient::Quotient(q) => format!("quotient of order {}", q.order()),
        }
    }

    /// Human-readable label of an element: residues for product groups,
    /// the plain index otherwise.
    pub fn label(&self, index: usize) -> String {
        match self {
            Ambient::Finite(g) if g.rank() > 1 => {
                let r: Vec<String> = g
                    .decode(index)
                    .residues
                    .iter()
                    .map(|r| r.to_string())
                    .collect();
                format!("({})", r.join(","))
            }
            _ => index.to_string(),
        }
    }

    pub fn into_ref(self) -> GroupRef {
        Arc::new(self)
    }
}

impl From<FiniteGroup> for Ambient {
    fn from(g: FiniteGroup) -> Self {
        Ambient::Finite(g)
    }
}

impl From<QuotientGroup> for Ambient {
    fn from(q: QuotientGroup) -> Self {
        Ambient::Quotient(q)
    }
}
