use std::ops::Deref;

use super::sft::Sym;
use crate::error::{Error, Result};

/// A finite word, optionally anchored at a coordinate (for cylinders
/// `_r[b_1 ... b_n]_{r+n-1}`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<Sym>,
    offset: i64,
}

impl Word {
    pub fn new(symbols: Vec<Sym>) -> Self {
        Word { symbols, offset: 0 }
    }

    pub fn anchored(symbols: Vec<Sym>, offset: i64) -> Self {
        Word { symbols, offset }
    }

    pub fn symbols(&self) -> &[Sym] {
        &self.symbols
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn into_symbols(self) -> Vec<Sym> {
        self.symbols
    }
}

impl Deref for Word {
    type Target = [Sym];

    fn deref(&self) -> &[Sym] {
        &self.symbols
    }
}

impl From<Vec<Sym>> for Word {
    fn from(symbols: Vec<Sym>) -> Self {
        Word::new(symbols)
    }
}

/// A bi-infinite point `... L L . C R R ...`: the left tail repeats towards
/// minus infinity and ends at `anchor - 1`, the center starts at `anchor`,
/// and the right tail repeats towards plus infinity after the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyPeriodicPoint {
    left_tail: Vec<Sym>,
    center: Vec<Sym>,
    right_tail: Vec<Sym>,
    anchor: i64,
}

impl EventuallyPeriodicPoint {
    pub fn new(left_tail: Vec<Sym>, center: Vec<Sym>, right_tail: Vec<Sym>, anchor: i64) -> Result<Self> {
        if left_tail.is_empty() || right_tail.is_empty() {
            return Err(Error::InvalidPoint("tails must be nonempty".into()));
        }
        Ok(EventuallyPeriodicPoint {
            left_tail,
            center,
            right_tail,
            anchor,
        })
    }

    /// The periodic point `... w w . w w ...` with `y_0 = w_0`.
    pub fn periodic(cycle: Vec<Sym>) -> Result<Self> {
        Self::new(cycle.clone(), Vec::new(), cycle, 0)
    }

    pub fn left_tail(&self) -> &[Sym] {
        &self.left_tail
    }

    pub fn center(&self) -> &[Sym] {
        &self.center
    }

    pub fn right_tail(&self) -> &[Sym] {
        &self.right_tail
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// First coordinate of the right tail.
    pub fn right_start(&self) -> i64 {
        self.anchor + self.center.len() as i64
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.center.is_empty() && self.left_tail == self.right_tail
    }

    pub fn symbol_at(&self, i: i64) -> Sym {
        if i < self.anchor {
            let back = (self.anchor - 1 - i) as usize;
            let p = self.left_tail.len();
            self.left_tail[p - 1 - back % p]
        } else if i < self.right_start() {
            self.center[(i - self.anchor) as usize]
        } else {
            let p = self.right_tail.len();
            self.right_tail[(i - self.right_start()) as usize % p]
        }
    }

    /// `y_[a, b]`, resolving tails by periodicity.
    pub fn window(&self, a: i64, b: i64) -> Word {
        assert!(a <= b, "window [{a}, {b}] is empty");
        Word::anchored((a..=b).map(|i| self.symbol_at(i)).collect(), a)
    }

    /// Checks every junction (including the tails' wrap-arounds) against a
    /// transition relation.
    pub fn validate(&self, allows: impl Fn(Sym, Sym) -> bool) -> Result<()> {
        let check = |a: Sym, b: Sym, what: &str| {
            if allows(a, b) {
                Ok(())
            } else {
                Err(Error::InvalidPoint(format!("forbidden transition in {what}")))
            }
        };
        for (name, tail) in [("left tail", &self.left_tail), ("right tail", &self.right_tail)] {
            for p in tail.windows(2) {
                check(p[0], p[1], name)?;
            }
            check(tail[tail.len() - 1], tail[0], name)?;
        }
        for p in self.center.windows(2) {
            check(p[0], p[1], "center")?;
        }
        let first = self.center.first().unwrap_or(&self.right_tail[0]);
        check(*self.left_tail.last().unwrap(), *first, "left junction")?;
        if let Some(&last) = self.center.last() {
            check(last, self.right_tail[0], "right junction")?;
        }
        Ok(())
    }
}
