//! Points of `A^n`, the `B`-valued modular metric, convex combinations,
//! and the base-point-relative vocabulary of pointed spaces (norm, star,
//! orthogonality).

use std::fmt;

use crate::boolean_ring::{BoolElem, Partition};
use crate::cfg_ring::{canonical_generators, idempotent_of, mask, RingElem, RingSpec};
use crate::error::{dim_err, Error, Result};

/// A point of `A^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    spec: RingSpec,
    coords: Vec<RingElem>,
}

impl Point {
    pub fn new(spec: RingSpec, coords: Vec<RingElem>) -> Result<Self> {
        if let Some(c) = coords.iter().find(|c| c.spec() != spec) {
            return Err(dim_err("coordinate ring", spec, c.spec()));
        }
        Ok(Point { spec, coords })
    }

    /// One row of residues per coordinate.
    pub fn from_rows(spec: RingSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let coords = rows
            .iter()
            .map(|r| RingElem::new(spec, r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Point { spec, coords })
    }

    pub fn zero(spec: RingSpec, n: usize) -> Self {
        Point {
            spec,
            coords: vec![RingElem::zero(spec); n],
        }
    }

    /// `(c,…,c)` in every coordinate.
    pub fn constant(spec: RingSpec, n: usize, c: i64) -> Self {
        Point {
            spec,
            coords: vec![RingElem::constant(spec, c); n],
        }
    }

    /// A point of `B^1` seen as the 2-ring `GF(2)^Ω`.
    pub fn from_bool(a: BoolElem) -> Self {
        let spec = RingSpec { p: 2, omega: a.omega() };
        Point {
            spec,
            coords: vec![crate::cfg_ring::embed(spec, a)],
        }
    }

    /// Inverse of [`Point::from_bool`]: the support of the single coordinate.
    pub fn to_bool(&self) -> BoolElem {
        assert_eq!(self.coords.len(), 1, "not a point of B");
        idempotent_of(&self.coords[0])
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[RingElem] {
        &self.coords
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.coords.iter().map(|c| c.comps().to_vec()).collect()
    }

    pub fn omega(&self) -> usize {
        self.spec.omega
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RingElem::is_zero)
    }

    pub(crate) fn check_compatible(&self, other: &Point) -> Result<()> {
        if self.spec != other.spec {
            return Err(dim_err("ring", self.spec, other.spec));
        }
        if self.dim() != other.dim() {
            return Err(dim_err("ambient dimension", self.dim(), other.dim()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Point, f: impl Fn(&RingElem, &RingElem) -> RingElem) -> Point {
        assert_eq!(self.dim(), other.dim(), "points of different dimension");
        Point {
            spec: self.spec,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Point) -> Point {
        self.zip_with(other, RingElem::add)
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.zip_with(other, RingElem::sub)
    }

    /// Coordinatewise action of an idempotent.
    pub fn masked(&self, a: BoolElem) -> Point {
        Point {
            spec: self.spec,
            coords: self.coords.iter().map(|c| mask(a, c)).collect(),
        }
    }

    /// Join over coordinates of `e(x_i − y_i)`. Panics on incompatible points.
    pub fn distance(&self, other: &Point) -> BoolElem {
        assert_eq!(self.dim(), other.dim(), "points of different dimension");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(BoolElem::zero(self.omega()), |acc, (a, b)| {
                acc | idempotent_of(&a.sub(b))
            })
    }

    /// `(self, other)` as a point of `A^(n+m)`.
    pub fn concat(&self, other: &Point) -> Point {
        assert_eq!(self.spec, other.spec);
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        Point {
            spec: self.spec,
            coords,
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

/// Checked modular distance.
pub fn dist(x: &Point, y: &Point) -> Result<BoolElem> {
    x.check_compatible(y)?;
    Ok(x.distance(y))
}

/// `Σ a_i x_i` for a complete partition `(a_i)`.
pub fn convex_combination(points: &[Point], coeffs: &Partition) -> Result<Point> {
    if points.len() != coeffs.len() {
        return Err(dim_err("number of coefficients", points.len(), coeffs.len()));
    }
    if !coeffs.is_complete() {
        return Err(Error::Partition("coefficients do not join to 1".into()));
    }
    let first = points
        .first()
        .ok_or_else(|| Error::Partition("empty convex combination".into()))?;
    for p in points {
        first.check_compatible(p)?;
    }
    if coeffs.parts()[0].omega() != first.omega() {
        return Err(dim_err("|Ω|", first.omega(), coeffs.parts()[0].omega()));
    }
    Ok(points
        .iter()
        .zip(coeffs.parts())
        .fold(Point::zero(first.spec, first.dim()), |acc, (x, a)| {
            acc.add(&x.masked(*a))
        }))
}

#[derive(Clone, PartialEq, Eq)]
struct Pointed {
    base: Point,
    generators: Vec<Point>,
}

/// `conv({base} ∪ generators)` inside `A^n`, or the empty space.
#[derive(Clone, PartialEq, Eq)]
pub struct PointedSpace {
    spec: RingSpec,
    n: usize,
    inner: Option<Pointed>,
}

impl fmt::Debug for PointedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner {
            None => write!(f, "EMPTY"),
            Some(p) => write!(f, "conv({:?}; {:?})", p.base, p.generators),
        }
    }
}

impl PointedSpace {
    pub fn new(base: Point, generators: Vec<Point>) -> Result<Self> {
        for g in &generators {
            base.check_compatible(g)?;
        }
        Ok(PointedSpace {
            spec: base.spec,
            n: base.dim(),
            inner: Some(Pointed { base, generators }),
        })
    }

    pub fn empty(spec: RingSpec, n: usize) -> Self {
        PointedSpace { spec, n, inner: None }
    }

    /// `conv{0}` in `A^n`.
    pub fn point(spec: RingSpec, n: usize) -> Self {
        Self::new(Point::zero(spec, n), vec![]).expect("compatible")
    }

    /// All of `A^n`, pointed at 0, generated by points whose coordinates
    /// are nonzero-or-zero constant tuples.
    pub fn full(spec: RingSpec, n: usize) -> Self {
        let consts = std::iter::once(RingElem::zero(spec))
            .chain(canonical_generators(spec))
            .collect::<Vec<_>>();
        let mut gens = vec![];
        let mut idx = vec![0usize; n];
        loop {
            let coords: Vec<_> = idx.iter().map(|&k| consts[k].clone()).collect();
            if idx.iter().any(|&k| k != 0) {
                gens.push(Point { spec, coords });
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Self::new(Point::zero(spec, n), gens).expect("compatible");
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < consts.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// `B` over itself: the 2-ring `GF(2)^Ω` with `n = 1`.
    pub fn boolean(omega: usize) -> Self {
        let spec = RingSpec { p: 2, omega };
        Self::full(spec, 1)
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_none()
    }

    pub fn base(&self) -> Option<&Point> {
        self.inner.as_ref().map(|p| &p.base)
    }

    pub fn try_base(&self) -> Result<&Point> {
        self.base().ok_or(Error::EmptySpace)
    }

    pub fn generators(&self) -> &[Point] {
        self.inner.as_ref().map(|p| p.generators.as_slice()).unwrap_or(&[])
    }

    /// Base point followed by the generators.
    pub fn hull_points(&self) -> Vec<Point> {
        match &self.inner {
            None => vec![],
            Some(p) => std::iter::once(p.base.clone())
                .chain(p.generators.iter().cloned())
                .collect(),
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        if x.spec != self.spec {
            return Err(dim_err("ring", self.spec, x.spec));
        }
        if x.dim() != self.n {
            return Err(dim_err("ambient dimension", self.n, x.dim()));
        }
        Ok(())
    }

    /// Same member set, pointed at `base`. The old base point is kept
    /// as a generator. `base` must be a member; that is not checked here.
    pub fn repointed(&self, base: &Point) -> Result<Self> {
        self.check_point(base)?;
        let mut gens = self.hull_points();
        if gens.is_empty() {
            return Err(Error::EmptySpace);
        }
        gens.retain(|g| g != base);
        Self::new(base.clone(), gens)
    }

    /// `ax := a x + ā 0`.
    pub fn act(&self, a: BoolElem, x: &Point) -> Result<Point> {
        let base = self.try_base()?;
        self.check_point(x)?;
        Ok(act_at(base, a, x))
    }

    /// Orthogonal combination `Σ a_i x_i` with `a₀ = complement of the join`
    /// assigned to the base point. Fails unless the `a_i` are disjoint.
    pub fn orthogonal_combination(&self, terms: &[(BoolElem, Point)]) -> Result<Point> {
        let base = self.try_base()?;
        let coeffs: Vec<_> = terms.iter().map(|(a, _)| *a).collect();
        if !crate::boolean_ring::is_partition(&coeffs, false)? {
            return Err(Error::Partition(format!("{coeffs:?}")));
        }
        let mut acc = base.clone();
        for (a, x) in terms {
            self.check_point(x)?;
            acc = acc.add(&x.sub(base).masked(*a));
        }
        Ok(acc)
    }
}

pub(crate) fn act_at(base: &Point, a: BoolElem, x: &Point) -> Point {
    base.add(&x.sub(base).masked(a))
}

/// `|x| := d(0, x)`.
pub fn norm(space: &PointedSpace, x: &Point) -> Result<BoolElem> {
    let base = space.try_base()?;
    space.check_point(x)?;
    Ok(base.distance(x))
}

/// `x ⋆ y := complement(d(x,y)) · x`, relative to the base point.
pub fn star(space: &PointedSpace, x: &Point, y: &Point) -> Result<Point> {
    let base = space.try_base()?;
    space.check_point(x)?;
    space.check_point(y)?;
    Ok(star_at(base, x, y))
}

pub(crate) fn star_at(base: &Point, x: &Point, y: &Point) -> Point {
    act_at(base, !x.distance(y), x)
}

pub fn is_orthogonal(space: &PointedSpace, x: &Point, y: &Point) -> Result<bool> {
    let base = space.try_base()?;
    space.check_point(x)?;
    space.check_point(y)?;
    Ok(orthogonal_at(base, x, y))
}

pub(crate) fn orthogonal_at(base: &Point, x: &Point, y: &Point) -> bool {
    let by_star = star_at(base, x, y) == *base;
    let by_norms = x.distance(y) == base.distance(x) | base.distance(y);
    assert_eq!(by_star, by_norms, "star and norm characterizations of ⊥ disagree");
    by_star
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(p: u32, omega: usize) -> RingSpec {
        RingSpec::new(p, omega).unwrap()
    }

    fn pt(spec: RingSpec, rows: &[&[u32]]) -> Point {
        Point::from_rows(spec, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn b(omega: usize, atoms: &[usize]) -> BoolElem {
        BoolElem::from_atoms(omega, atoms.iter().copied()).unwrap()
    }

    #[test]
    fn dist_examples() {
        let g = s(3, 2);
        assert_eq!(dist(&pt(g, &[&[2, 0]]), &pt(g, &[&[2, 1]])).unwrap(), b(2, &[1]));
        let z = s(3, 1);
        assert!(dist(&pt(z, &[&[1], &[2]]), &pt(z, &[&[1], &[0]])).unwrap().is_one());
        assert!(dist(&pt(g, &[&[1, 1]]), &pt(g, &[&[1, 1], &[0, 0]])).is_err());
    }

    #[test]
    fn norm_examples() {
        let g = s(3, 2);
        let space = PointedSpace::point(g, 1);
        assert_eq!(norm(&space, &pt(g, &[&[2, 0]])).unwrap(), b(2, &[0]));
        assert!(norm(&space, &Point::zero(g, 1)).unwrap().is_zero());
        let shifted = PointedSpace::new(pt(g, &[&[1, 1]]), vec![]).unwrap();
        assert_eq!(norm(&shifted, &pt(g, &[&[2, 1]])).unwrap(), b(2, &[0]));
        assert_eq!(
            norm(&PointedSpace::empty(g, 1), &pt(g, &[&[2, 1]])),
            Err(Error::EmptySpace)
        );
    }

    #[test]
    fn convex_combination_examples() {
        let g = s(3, 2);
        let coeffs = Partition::new(vec![b(2, &[0]), b(2, &[1])], true).unwrap();
        let r = convex_combination(&[pt(g, &[&[1, 1]]), pt(g, &[&[2, 2]])], &coeffs).unwrap();
        assert_eq!(r, pt(g, &[&[1, 2]]));
        let x = pt(g, &[&[2, 1]]);
        let one = Partition::new(vec![BoolElem::one(2)], true).unwrap();
        assert_eq!(convex_combination(std::slice::from_ref(&x), &one).unwrap(), x);
        let partial = Partition::new(vec![b(2, &[0])], false).unwrap();
        assert!(matches!(convex_combination(&[x], &partial), Err(Error::Partition(_))));
    }

    #[test]
    fn star_and_orthogonality_examples() {
        let z = s(3, 1);
        let space = PointedSpace::point(z, 1);
        let one = pt(z, &[&[1]]);
        let two = pt(z, &[&[2]]);
        assert_eq!(star(&space, &one, &two).unwrap(), Point::zero(z, 1));
        assert!(is_orthogonal(&space, &one, &two).unwrap());

        let g = s(3, 2);
        let space = PointedSpace::point(g, 1);
        let x = pt(g, &[&[1, 0]]);
        let y = pt(g, &[&[1, 1]]);
        assert_eq!(star(&space, &x, &y).unwrap(), pt(g, &[&[1, 0]]));
        assert!(!is_orthogonal(&space, &x, &y).unwrap());
        assert!(is_orthogonal(&space, &y, &Point::zero(g, 1)).unwrap());
    }

    #[test]
    fn full_space_generators() {
        let space = PointedSpace::full(s(3, 2), 2);
        assert_eq!(space.generators().len(), 8);
        assert_eq!(PointedSpace::boolean(3).generators().len(), 1);
    }

    fn point(p: u32, omega: usize, n: usize) -> impl Strategy<Value = Point> {
        let spec = s(p, omega);
        proptest::collection::vec(proptest::collection::vec(0..p, omega), n)
            .prop_map(move |rows| Point::from_rows(spec, &rows).unwrap())
    }

    proptest! {
        #[test]
        fn metric_axioms(x in point(3, 2, 2), y in point(3, 2, 2), z in point(3, 2, 2)) {
            let (dxy, dyz, dxz) = (x.distance(&y), y.distance(&z), x.distance(&z));
            prop_assert_eq!(dxy.is_zero(), x == y);
            prop_assert_eq!(dxy, y.distance(&x));
            prop_assert!(dxz.leq(&(dxy | dyz)));
            prop_assert!((dxz * !dyz).leq(&dxy));
            prop_assert!((dxz + z.distance(&y)).leq(&dxy));
        }

        #[test]
        fn distance_of_convex_combination(
            x1 in point(3, 2, 1), x2 in point(3, 2, 1), y in point(3, 2, 1), bits in 0u64..4
        ) {
            let a = BoolElem::from_bits(2, bits).unwrap();
            let coeffs = Partition::new(vec![a, !a], true).unwrap();
            let r = convex_combination(&[x1.clone(), x2.clone()], &coeffs).unwrap();
            prop_assert_eq!(r.distance(&y), a * x1.distance(&y) + !a * x2.distance(&y));
            prop_assert!((a * r.distance(&x1)).is_zero());
            prop_assert!((!a * r.distance(&x2)).is_zero());
            let same = Partition::new(vec![a, !a], true).unwrap();
            prop_assert_eq!(convex_combination(&[x1.clone(), x1.clone()], &same).unwrap(), x1);
        }

        #[test]
        fn product_metric(x in point(3, 2, 3), y in point(3, 2, 3), split in 1usize..3) {
            let head = |p: &Point| Point::new(p.spec(), p.coords()[..split].to_vec()).unwrap();
            let tail = |p: &Point| Point::new(p.spec(), p.coords()[split..].to_vec()).unwrap();
            prop_assert_eq!(x.distance(&y), head(&x).distance(&head(&y)) | tail(&x).distance(&tail(&y)));
            prop_assert_eq!(head(&x).concat(&tail(&x)), x);
        }

        #[test]
        fn star_commutes(x in point(3, 2, 2), y in point(3, 2, 2), base in point(3, 2, 2)) {
            prop_assert_eq!(star_at(&base, &x, &y), star_at(&base, &y, &x));
        }

        #[test]
        fn star_with_self(x in point(3, 2, 1)) {
            let space = PointedSpace::point(x.spec(), 1);
            prop_assert_eq!(star(&space, &x, &x).unwrap(), x);
        }
    }
}
