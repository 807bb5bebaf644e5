use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Schedule values must stay below this bound.
pub const SCHEDULE_LIMIT: u128 = 1 << 127;

/// An increasing sequence `s_1 < s_2 < ...` of block scales.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Schedule {
    List {
        values: Vec<u128>,
    },
    /// `s_n = base^n`.
    Geometric {
        base: u128,
        count: usize,
    },
    /// `s_n = 2^(n(n+1)/2)`.
    Superexp {
        count: usize,
    },
    /// `s_n = 2^(2^n)`.
    Tower {
        count: usize,
    },
    /// `a_1 = 1`, `b_n = n^2 a_n`, `a_(n+1) = 3 b_n`; the values are the `b_n`.
    Rec3 {
        count: usize,
    },
}

impl Schedule {
    pub fn len(&self) -> usize {
        match self {
            Schedule::List { values } => values.len(),
            Schedule::Geometric { count, .. }
            | Schedule::Superexp { count }
            | Schedule::Tower { count }
            | Schedule::Rec3 { count } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The materialized values, checked to be strictly increasing and below `2^127`.
    pub fn values(&self) -> Result<Vec<u128>> {
        let vals = match self {
            Schedule::List { values } => values.clone(),
            Schedule::Geometric { base, count } => {
                if *base < 2 {
                    return Err(Error::InvalidInput(
                        "geometric schedule needs base >= 2".into(),
                    ));
                }
                let mut out = Vec::with_capacity(*count);
                let mut s: u128 = 1;
                for _ in 0..*count {
                    s = s
                        .checked_mul(*base)
                        .ok_or(Error::Overflow("geometric schedule"))?;
                    out.push(s);
                }
                out
            }
            Schedule::Superexp { count } => (1..=*count as u32)
                .map(|n| pow2(n * (n + 1) / 2, "superexp schedule"))
                .collect::<Result<_>>()?,
            Schedule::Tower { count } => (1..=*count as u32)
                .map(|n| {
                    1u32.checked_shl(n)
                        .ok_or(Error::Overflow("tower schedule"))
                        .and_then(|e| pow2(e, "tower schedule"))
                })
                .collect::<Result<_>>()?,
            Schedule::Rec3 { .. } => self.rec3_pairs()?.into_iter().map(|(_, b)| b).collect(),
        };
        for (i, &v) in vals.iter().enumerate() {
            if v >= SCHEDULE_LIMIT {
                return Err(Error::Overflow("schedule value reaches 2^127"));
            }
            if v == 0 || (i > 0 && vals[i - 1] >= v) {
                return Err(Error::InvalidInput(format!(
                    "schedule is not strictly increasing and positive: {self}"
                )));
            }
        }
        Ok(vals)
    }

    /// Companion values `a_n` for schedules that define them (only `rec3`).
    pub fn companions(&self) -> Result<Vec<u128>> {
        match self {
            Schedule::Rec3 { .. } => {
                let pairs = self.rec3_pairs()?;
                if pairs.last().is_some_and(|p| p.1 >= SCHEDULE_LIMIT) {
                    return Err(Error::Overflow("schedule value reaches 2^127"));
                }
                Ok(pairs.into_iter().map(|(a, _)| a).collect())
            }
            _ => Err(Error::InvalidInput(format!(
                "schedule {self} has no companion sequence"
            ))),
        }
    }

    fn rec3_pairs(&self) -> Result<Vec<(u128, u128)>> {
        let Schedule::Rec3 { count } = self else {
            unreachable!()
        };
        let mut out = Vec::with_capacity(*count);
        let mut a: u128 = 1;
        for n in 1..=*count as u128 {
            let b = a
                .checked_mul(n * n)
                .ok_or(Error::Overflow("rec3 schedule"))?;
            out.push((a, b));
            if n < *count as u128 {
                a = b.checked_mul(3).ok_or(Error::Overflow("rec3 schedule"))?;
            }
        }
        Ok(out)
    }
}

fn pow2(e: u32, what: &'static str) -> Result<u128> {
    if e >= 127 {
        return Err(Error::Overflow(what));
    }
    Ok(1u128 << e)
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::List { values } => {
                let v: Vec<String> = values.iter().map(|x| x.to_string()).collect();
                write!(f, "list({})", v.join(","))
            }
            Schedule::Geometric { base, count } => write!(f, "geom({base},{count})"),
            Schedule::Superexp { count } => write!(f, "superexp({count})"),
            Schedule::Tower { count } => write!(f, "tower({count})"),
            Schedule::Rec3 { count } => write!(f, "rec3({count})"),
        }
    }
}
