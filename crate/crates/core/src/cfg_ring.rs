//! The CFG-ring `A = GF(p)^Ω` with componentwise arithmetic.
//!
//! `B(A)` is identified with `2^Ω` through [`idempotent_of`] and
//! [`embed`]; ring values and distances stay type-distinct.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::boolean_ring::{BoolElem, MAX_OMEGA};
use crate::error::{dim_err, Error, Result};

/// Prime modulus and atom count of `GF(p)^Ω`.
///
/// Residue arithmetic lives on this type so that a different field
/// backend only has to replace these few methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u32,
    pub omega: usize,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingSpec {
    pub fn new(p: u32, omega: usize) -> Result<Self> {
        let spec = RingSpec { p, omega };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::InvalidRing(format!("{} is not prime", self.p)));
        }
        if self.omega == 0 || self.omega > MAX_OMEGA {
            return Err(Error::InvalidRing(format!(
                "|Ω| = {} must lie in 1..={MAX_OMEGA}",
                self.omega
            )));
        }
        Ok(())
    }

    /// The Boolean ring `B(A)` of the same `Ω`, viewed as the 2-ring `GF(2)^Ω`.
    pub fn boolean(&self) -> RingSpec {
        RingSpec {
            p: 2,
            omega: self.omega,
        }
    }

    /// Number of elements `p^|Ω|`, saturating.
    pub fn cardinality(&self) -> u128 {
        (self.p as u128).checked_pow(self.omega as u32).unwrap_or(u128::MAX)
    }

    #[inline]
    pub fn add_res(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub_res(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul_res(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow_res(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_res(acc, a);
            }
            a = self.mul_res(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue by Fermat.
    pub fn inv_res(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow_res(a, self.p as u64 - 2))
        }
    }

    pub fn reduce_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

/// An element of `GF(p)^Ω`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    spec: RingSpec,
    comps: Vec<u32>,
}

impl PartialOrd for RingSpec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingSpec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.p, self.omega).cmp(&(other.p, other.omega))
    }
}

impl RingElem {
    pub fn new(spec: RingSpec, comps: Vec<u32>) -> Result<Self> {
        if comps.len() != spec.omega {
            return Err(dim_err("ring element length", spec.omega, comps.len()));
        }
        if let Some(c) = comps.iter().find(|&&c| c >= spec.p) {
            return Err(Error::Dimension(format!("residue {c} not below p = {}", spec.p)));
        }
        Ok(RingElem { spec, comps })
    }

    /// Reduces arbitrary integers mod `p`.
    pub fn from_ints(spec: RingSpec, comps: &[i64]) -> Result<Self> {
        if comps.len() != spec.omega {
            return Err(dim_err("ring element length", spec.omega, comps.len()));
        }
        Ok(RingElem {
            spec,
            comps: comps.iter().map(|&c| spec.reduce_int(c)).collect(),
        })
    }

    pub fn constant(spec: RingSpec, c: i64) -> Self {
        RingElem {
            spec,
            comps: vec![spec.reduce_int(c); spec.omega],
        }
    }

    pub fn zero(spec: RingSpec) -> Self {
        Self::constant(spec, 0)
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::constant(spec, 1)
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn comps(&self) -> &[u32] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|&c| c == 0)
    }

    fn zip_with(&self, other: &RingElem, f: impl Fn(&RingSpec, u32, u32) -> u32) -> RingElem {
        assert_eq!(self.spec, other.spec, "ring elements over different rings");
        RingElem {
            spec: self.spec,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(&a, &b)| f(&self.spec, a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        self.zip_with(other, RingSpec::add_res)
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.zip_with(other, RingSpec::sub_res)
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        self.zip_with(other, RingSpec::mul_res)
    }

    pub fn neg(&self) -> RingElem {
        RingElem {
            spec: self.spec,
            comps: self.comps.iter().map(|&a| self.spec.sub_res(0, a)).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> RingElem {
        RingElem {
            spec: self.spec,
            comps: self.comps.iter().map(|&a| self.spec.pow_res(a, e)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> RingElem {
        let k = self.spec.reduce_int(k);
        RingElem {
            spec: self.spec,
            comps: self.comps.iter().map(|&a| self.spec.mul_res(a, k)).collect(),
        }
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.comps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// Checked arithmetic; `Neg` ignores `y` apart from the ring check.
pub fn ring_arith(x: &RingElem, y: &RingElem, op: RingOp) -> Result<RingElem> {
    if x.spec != y.spec {
        return Err(dim_err("ring", x.spec, y.spec));
    }
    Ok(match op {
        RingOp::Add => x.add(y),
        RingOp::Sub => x.sub(y),
        RingOp::Mul => x.mul(y),
        RingOp::Neg => x.neg(),
    })
}

/// `e(x)`: the idempotent generating `xA`; atom `i` is on iff `x_i ≠ 0`.
pub fn idempotent_of(x: &RingElem) -> BoolElem {
    let bits = x
        .comps
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    BoolElem::from_bits(x.spec.omega, bits).expect("bits within Ω")
}

/// The idempotent of `A` with 0/1 components given by `a`.
pub fn embed(spec: RingSpec, a: BoolElem) -> RingElem {
    assert_eq!(spec.omega, a.omega(), "Boolean element over a different Ω");
    RingElem {
        spec,
        comps: (0..spec.omega).map(|i| a.contains_atom(i) as u32).collect(),
    }
}

/// Module action of `B(A)` on `A`: keep components on `a`, zero elsewhere.
pub fn scalar_act(a: BoolElem, x: &RingElem) -> Result<RingElem> {
    if a.omega() != x.spec.omega {
        return Err(dim_err("|Ω|", x.spec.omega, a.omega()));
    }
    Ok(mask(a, x))
}

pub(crate) fn mask(a: BoolElem, x: &RingElem) -> RingElem {
    RingElem {
        spec: x.spec,
        comps: x
            .comps
            .iter()
            .enumerate()
            .map(|(i, &c)| if a.contains_atom(i) { c } else { 0 })
            .collect(),
    }
}

pub fn unit_inverse(x: &RingElem) -> Result<RingElem> {
    let comps = x
        .comps
        .iter()
        .map(|&c| x.spec.inv_res(c))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::NotAUnit(format!("{x:?}")))?;
    Ok(RingElem { spec: x.spec, comps })
}

/// The nonzero constant tuples `(c,…,c)`, `c = 1…p−1`.
pub fn canonical_generators(spec: RingSpec) -> Vec<RingElem> {
    (1..spec.p as i64).map(|c| RingElem::constant(spec, c)).collect()
}

/// Every element of `A`, lexicographic in the components.
pub fn all_elements(spec: RingSpec) -> impl Iterator<Item = RingElem> {
    let total = spec.cardinality();
    (0..total).map(move |mut k| {
        let mut comps = vec![0u32; spec.omega];
        for c in comps.iter_mut().rev() {
            *c = (k % spec.p as u128) as u32;
            k /= spec.p as u128;
        }
        RingElem { spec, comps }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z3x2() -> RingSpec {
        RingSpec::new(3, 2).unwrap()
    }

    fn r(spec: RingSpec, c: &[u32]) -> RingElem {
        RingElem::new(spec, c.to_vec()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(RingSpec::new(4, 1).is_err());
        assert!(RingSpec::new(1, 1).is_err());
        assert!(RingSpec::new(3, 0).is_err());
        assert!(RingSpec::new(5, 2).is_ok());
    }

    #[test]
    fn arithmetic_examples() {
        let s = z3x2();
        assert_eq!(
            ring_arith(&r(s, &[2, 0]), &r(s, &[2, 1]), RingOp::Add).unwrap(),
            r(s, &[1, 1])
        );
        assert_eq!(
            ring_arith(&r(s, &[1, 2]), &r(s, &[2, 2]), RingOp::Mul).unwrap(),
            r(s, &[2, 1])
        );
        let other = RingSpec::new(5, 2).unwrap();
        assert!(ring_arith(&r(s, &[1, 2]), &r(other, &[1, 2]), RingOp::Add).is_err());
    }

    #[test]
    fn idempotent_examples() {
        let s = z3x2();
        let e = idempotent_of(&r(s, &[2, 0]));
        assert_eq!(e, BoolElem::from_atoms(2, [0]).unwrap());
        assert_eq!(embed(s, e), r(s, &[1, 0]));
        assert!(idempotent_of(&r(s, &[0, 0])).is_zero());
        let x = r(s, &[1, 2]);
        assert!(idempotent_of(&x).is_one());
        assert_eq!(embed(s, idempotent_of(&x)), x.pow(2));
    }

    #[test]
    fn scalar_action_examples() {
        let s = z3x2();
        let x = r(s, &[1, 2]);
        let a = BoolElem::from_atoms(2, [1]).unwrap();
        assert_eq!(scalar_act(a, &x).unwrap(), r(s, &[0, 2]));
        assert_eq!(scalar_act(BoolElem::one(2), &x).unwrap(), x);
        assert!(scalar_act(BoolElem::zero(2), &x).unwrap().is_zero());
        assert!(scalar_act(BoolElem::zero(3), &x).is_err());
    }

    #[test]
    fn unit_inverse_examples() {
        let s = z3x2();
        assert_eq!(unit_inverse(&r(s, &[2, 2])).unwrap(), r(s, &[2, 2]));
        assert_eq!(unit_inverse(&r(s, &[1, 1])).unwrap(), r(s, &[1, 1]));
        assert!(matches!(unit_inverse(&r(s, &[2, 0])), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn canonical_generator_examples() {
        assert_eq!(
            canonical_generators(z3x2()),
            vec![r(z3x2(), &[1, 1]), r(z3x2(), &[2, 2])]
        );
        let s = RingSpec::new(2, 1).unwrap();
        assert_eq!(canonical_generators(s), vec![r(s, &[1])]);
    }

    #[test]
    fn idempotent_generates_principal_ideal() {
        // e(x) is the only idempotent with xA = e(x)A
        let s = z3x2();
        let ideal = |g: &RingElem| {
            let mut v: Vec<_> = all_elements(s).map(|y| g.mul(&y)).collect();
            v.sort();
            v.dedup();
            v
        };
        for x in all_elements(s) {
            let xa = ideal(&x);
            let matching: Vec<_> = BoolElem::all(2).filter(|b| ideal(&embed(s, *b)) == xa).collect();
            assert_eq!(matching, vec![idempotent_of(&x)]);
        }
    }

    fn elem(p: u32, omega: usize) -> impl Strategy<Value = RingElem> {
        let spec = RingSpec::new(p, omega).unwrap();
        proptest::collection::vec(0..p, omega).prop_map(move |c| RingElem::new(spec, c).unwrap())
    }

    proptest! {
        #[test]
        fn p_ring_axioms(x in elem(5, 3)) {
            prop_assert_eq!(x.pow(5), x.clone());
            prop_assert!(x.scale(5).is_zero());
            prop_assert!(x.sub(&x).is_zero());
            let e = embed(x.spec(), idempotent_of(&x));
            prop_assert_eq!(e, x.pow(4));
            prop_assert_eq!(x.mul(&embed(x.spec(), idempotent_of(&x))), x);
        }

        #[test]
        fn idempotent_multiplicative(x in elem(3, 4), y in elem(3, 4)) {
            prop_assert_eq!(idempotent_of(&x.mul(&y)), idempotent_of(&x) * idempotent_of(&y));
        }

        #[test]
        fn action_is_idempotent(x in elem(3, 4), bits in 0u64..16) {
            let a = BoolElem::from_bits(4, bits).unwrap();
            let once = scalar_act(a, &x).unwrap();
            prop_assert_eq!(scalar_act(a, &once).unwrap(), once);
        }
    }
}
