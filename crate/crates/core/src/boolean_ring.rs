//! The finite Boolean ring `B = 2^Ω`.
//!
//! Elements are atom sets stored as bitmasks. Addition is symmetric
//! difference, multiplication is intersection, and the derived join,
//! order and complement are union, inclusion and set complement.

use std::fmt;
use std::ops::{Add, BitOr, Mul, Not};

use crate::error::{dim_err, Error, Result};

/// Hard capacity of the bitmask representation.
pub const MAX_OMEGA: usize = 64;

/// Default bound on `|Ω|` for anything that enumerates `B`.
pub const DEFAULT_OMEGA_LIMIT: usize = 16;

/// An element of `2^Ω`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolElem {
    bits: u64,
    omega: u8,
}

fn mask_for(omega: usize) -> u64 {
    if omega == 64 {
        u64::MAX
    } else {
        (1u64 << omega) - 1
    }
}

impl BoolElem {
    pub fn zero(omega: usize) -> Self {
        assert!(omega <= MAX_OMEGA, "|Ω| = {omega} exceeds {MAX_OMEGA}");
        BoolElem {
            bits: 0,
            omega: omega as u8,
        }
    }

    pub fn one(omega: usize) -> Self {
        assert!(omega <= MAX_OMEGA, "|Ω| = {omega} exceeds {MAX_OMEGA}");
        BoolElem {
            bits: mask_for(omega),
            omega: omega as u8,
        }
    }

    /// Builds an element from a bitmask; bit `i` is atom `i`.
    pub fn from_bits(omega: usize, bits: u64) -> Result<Self> {
        if omega > MAX_OMEGA {
            return Err(Error::Dimension(format!("|Ω| = {omega} exceeds {MAX_OMEGA}")));
        }
        if bits & !mask_for(omega) != 0 {
            return Err(Error::Dimension(format!(
                "bitmask {bits:#b} has atoms outside Ω of size {omega}"
            )));
        }
        Ok(BoolElem {
            bits,
            omega: omega as u8,
        })
    }

    pub fn from_atoms(omega: usize, atoms: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u64;
        for a in atoms {
            if a >= omega {
                return Err(Error::Dimension(format!("atom {a} outside Ω of size {omega}")));
            }
            bits |= 1 << a;
        }
        Self::from_bits(omega, bits)
    }

    pub fn omega(&self) -> usize {
        self.omega as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains_atom(&self, atom: usize) -> bool {
        atom < self.omega() && self.bits >> atom & 1 == 1
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.omega()).filter(move |&i| self.contains_atom(i))
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == mask_for(self.omega())
    }

    pub fn complement(&self) -> Self {
        BoolElem {
            bits: !self.bits & mask_for(self.omega()),
            omega: self.omega,
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        self.check_same(other);
        BoolElem {
            bits: self.bits | other.bits,
            omega: self.omega,
        }
    }

    /// `self ≤ other`, i.e. `self · other = self`.
    pub fn leq(&self, other: &Self) -> bool {
        self.check_same(other);
        self.bits & other.bits == self.bits
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_same(other);
        self.bits & other.bits == 0
    }

    /// All `2^|Ω|` elements in increasing bitmask order.
    pub fn all(omega: usize) -> impl Iterator<Item = BoolElem> {
        assert!(omega < MAX_OMEGA, "cannot enumerate 2^{omega} elements");
        (0..1u64 << omega).map(move |bits| BoolElem {
            bits,
            omega: omega as u8,
        })
    }

    /// 0/1 vector, index `i` is atom `i`.
    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.omega()).map(|i| self.contains_atom(i) as u8).collect()
    }

    pub fn from_slice(v: &[u8]) -> Result<Self> {
        let mut bits = 0u64;
        for (i, &b) in v.iter().enumerate() {
            match b {
                0 => {}
                1 => bits |= 1 << i,
                _ => return Err(Error::Dimension(format!("Boolean entry {b} is not 0 or 1"))),
            }
        }
        Self::from_bits(v.len(), bits)
    }

    #[inline]
    fn check_same(&self, other: &Self) {
        assert_eq!(self.omega, other.omega, "Boolean elements over different Ω");
    }
}

/// Symmetric difference.
impl Add for BoolElem {
    type Output = BoolElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: BoolElem) -> BoolElem {
        self.check_same(&rhs);
        BoolElem {
            bits: self.bits ^ rhs.bits,
            omega: self.omega,
        }
    }
}

/// Meet.
impl Mul for BoolElem {
    type Output = BoolElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: BoolElem) -> BoolElem {
        self.check_same(&rhs);
        BoolElem {
            bits: self.bits & rhs.bits,
            omega: self.omega,
        }
    }
}

impl BitOr for BoolElem {
    type Output = BoolElem;
    fn bitor(self, rhs: BoolElem) -> BoolElem {
        self.join(&rhs)
    }
}

impl Not for BoolElem {
    type Output = BoolElem;
    fn not(self) -> BoolElem {
        self.complement()
    }
}

impl fmt::Debug for BoolElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.atoms().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}/{}", self.omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Add,
    Mul,
    Join,
    Leq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOutcome {
    Elem(BoolElem),
    Truth(bool),
}

/// Checked binary operation on `B`.
pub fn bool_arith(a: BoolElem, b: BoolElem, op: BoolOp) -> Result<BoolOutcome> {
    if a.omega != b.omega {
        return Err(dim_err("|Ω|", a.omega(), b.omega()));
    }
    Ok(match op {
        BoolOp::Add => BoolOutcome::Elem(a + b),
        BoolOp::Mul => BoolOutcome::Elem(a * b),
        BoolOp::Join => BoolOutcome::Elem(a | b),
        BoolOp::Leq => BoolOutcome::Truth(a.leq(&b)),
    })
}

pub fn bool_complement(a: BoolElem) -> BoolElem {
    a.complement()
}

/// Join of a finite family, `0` when empty.
pub fn join_all<'a>(omega: usize, items: impl IntoIterator<Item = &'a BoolElem>) -> BoolElem {
    items.into_iter().fold(BoolElem::zero(omega), |acc, x| acc | *x)
}

/// A pairwise-disjoint family `a₁ ⊕ … ⊕ a_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<BoolElem>,
    complete: bool,
}

impl Partition {
    /// Validates disjointness and, if `require_complete`, that the join is `1`.
    pub fn new(parts: Vec<BoolElem>, require_complete: bool) -> Result<Self> {
        let omega = parts.first().map(|p| p.omega()).unwrap_or(0);
        if parts.iter().any(|p| p.omega() != omega) {
            return Err(Error::Dimension("partition parts over different Ω".into()));
        }
        if !is_partition(&parts, require_complete)? {
            return Err(Error::Partition(format!("{parts:?}")));
        }
        let complete = require_complete || join_all(omega, &parts).is_one();
        Ok(Partition { parts, complete })
    }

    pub fn parts(&self) -> &[BoolElem] {
        &self.parts
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Pairwise products vanish and, if required, the join is `1`.
///
/// An empty family is never complete; over `|Ω| = 0` the answer is
/// vacuous and the empty family is accepted.
pub fn is_partition(parts: &[BoolElem], require_complete: bool) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Ok(!require_complete);
    };
    let omega = first.omega();
    if let Some(bad) = parts.iter().find(|p| p.omega() != omega) {
        return Err(dim_err("|Ω|", omega, bad.omega()));
    }
    let mut seen = BoolElem::zero(omega);
    for p in parts {
        if !p.is_disjoint(&seen) {
            return Ok(false);
        }
        seen = seen | *p;
    }
    Ok(!require_complete || seen.is_one())
}
