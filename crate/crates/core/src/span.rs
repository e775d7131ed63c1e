//! Structure of pointed CFG-spaces: referentials, coordinates,
//! membership, maxima of contractive maps, bases, the `α_k` invariants
//! and the isometry classification built on them.

use itertools::Itertools;

use crate::boolean_ring::{join_all, BoolElem};
use crate::cancel::CancelToken;
use crate::contractive_maps::RefMap;
use crate::error::{dim_err, Error, Result};
use crate::metric_space::{act_at, orthogonal_at, Point, PointedSpace};

/// An orthogonal generating system of a pointed space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Referential {
    elements: Vec<Point>,
    space: PointedSpace,
}

impl Referential {
    /// Checks orthogonality and that the base point is absent.
    pub fn new(base: Point, elements: Vec<Point>) -> Result<Self> {
        let space = PointedSpace::new(base.clone(), elements.clone())?;
        if elements.contains(&base) {
            return Err(Error::Partition("referential contains the base point".into()));
        }
        for (x, y) in elements.iter().tuple_combinations() {
            if !orthogonal_at(&base, x, y) {
                return Err(Error::Partition(format!("{x:?} and {y:?} are not orthogonal")));
            }
        }
        Ok(Referential { elements, space })
    }

    fn from_parts_unchecked(base: Point, elements: Vec<Point>) -> Self {
        let space = PointedSpace::new(base, elements.clone()).expect("compatible points");
        Referential { elements, space }
    }

    pub fn elements(&self) -> &[Point] {
        &self.elements
    }

    pub fn base(&self) -> &Point {
        self.space.base().expect("referential spaces are pointed")
    }

    /// `conv({0} ∪ elements)`.
    pub fn space(&self) -> &PointedSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn norms(&self) -> Vec<BoolElem> {
        self.elements.iter().map(|x| self.base().distance(x)).collect()
    }

    /// Closed-form coordinates `a_i = |x_i| · complement(d(x, x_i))`.
    pub fn coordinates(&self, x: &Point) -> Result<Coordinates> {
        self.space.check_point(x)?;
        let base = self.base();
        let coeffs: Vec<_> = self
            .elements
            .iter()
            .map(|xi| base.distance(xi) * !x.distance(xi))
            .collect();
        let remainder = !join_all(x.omega(), &coeffs);
        Ok(Coordinates { coeffs, remainder })
    }

    /// `Σ a_i x_i`, or `None` when the coefficients overlap.
    pub fn reconstruct(&self, coords: &Coordinates) -> Option<Point> {
        if !coords.is_disjoint() {
            return None;
        }
        let base = self.base();
        Some(
            self.elements
                .iter()
                .zip(&coords.coeffs)
                .fold(base.clone(), |acc, (xi, a)| acc.add(&xi.sub(base).masked(*a))),
        )
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        let coords = self.coordinates(x)?;
        Ok(self.reconstruct(&coords).as_ref() == Some(x))
    }

    /// Coordinates of a member, or a membership error.
    pub fn member_coordinates(&self, x: &Point) -> Result<Coordinates> {
        let coords = self.coordinates(x)?;
        match self.reconstruct(&coords) {
            Some(r) if r == *x => Ok(coords),
            _ => Err(Error::NotMember(format!("{x:?}"))),
        }
    }
}

/// Coordinates of a point with respect to a referential, plus the
/// residual coefficient carried by the base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinates {
    pub coeffs: Vec<BoolElem>,
    pub remainder: BoolElem,
}

impl Coordinates {
    pub fn is_disjoint(&self) -> bool {
        crate::boolean_ring::is_partition(&self.coeffs, false).unwrap_or(false)
    }
}

fn non_orthogonal_pairs(base: &Point, xs: &[Point]) -> usize {
    xs.iter()
        .tuple_combinations()
        .filter(|(x, y)| !orthogonal_at(base, x, y))
        .count()
}

/// Lexicographic pair scan: a non-orthogonal `(x_i, x_j)`, `i < j`, has
/// `x_j` replaced by `d(x_i, x_j) x_j`. Orthogonality is preserved by the
/// replacement, so one pass suffices, and an orthogonal prefix is never
/// touched. Elements equal to the base are dropped at the end.
pub(crate) fn orthogonalize_points(base: &Point, mut xs: Vec<Point>) -> Vec<Point> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if orthogonal_at(base, &xs[i], &xs[j]) {
                continue;
            }
            let before = if cfg!(debug_assertions) {
                non_orthogonal_pairs(base, &xs)
            } else {
                0
            };
            let a = xs[i].distance(&xs[j]);
            xs[j] = act_at(base, a, &xs[j]);
            debug_assert!(
                non_orthogonal_pairs(base, &xs) < before,
                "orthogonalization step did not progress"
            );
        }
    }
    xs.retain(|x| x != base);
    xs
}

pub fn orthogonalize(space: &PointedSpace) -> Result<Referential> {
    let base = space.try_base()?;
    let elements = orthogonalize_points(base, space.generators().to_vec());
    Ok(Referential::from_parts_unchecked(base.clone(), elements))
}

pub fn coordinates(referential: &Referential, x: &Point) -> Result<Coordinates> {
    referential.coordinates(x)
}

pub fn contains(space: &PointedSpace, x: &Point) -> Result<bool> {
    if space.is_empty() {
        space.check_point(x)?;
        return Ok(false);
    }
    orthogonalize(space)?.contains(x)
}

/// Equality of member sets, decided by mutual containment of generators.
pub fn same_members(x: &PointedSpace, y: &PointedSpace) -> Result<bool> {
    if x.spec() != y.spec() || x.dim() != y.dim() {
        return Err(dim_err("ambient", (x.spec(), x.dim()), (y.spec(), y.dim())));
    }
    match (x.is_empty(), y.is_empty()) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    Ok(is_subspace(x, y)? && is_subspace(y, x)?)
}

/// `inner ⊆ outer` as member sets.
pub fn is_subspace(inner: &PointedSpace, outer: &PointedSpace) -> Result<bool> {
    if inner.is_empty() {
        return Ok(true);
    }
    if outer.is_empty() {
        return Ok(false);
    }
    let rf = orthogonalize(outer)?;
    for p in inner.hull_points() {
        if !rf.contains(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fold over the generators, moving `u` towards `x` on `c = f̄(u)·f(x)`:
/// `u ← c̄·u + c·x`. Then `f(u)` becomes `f(u) ∨ f(x)`, so the result
/// attains the join of `f` over the generating set, which is the maximum
/// of `f` on the space when `f` is contractive. Atoms where no generator
/// improves keep the base point's value.
pub fn weierstrass_argmax<F>(space: &PointedSpace, f: F) -> Result<Point>
where
    F: Fn(&Point) -> Result<BoolElem>,
{
    let mut u = space.try_base()?.clone();
    for x in space.generators() {
        let c = !f(&u)? * f(x)?;
        u = u.masked(!c).add(&x.masked(c));
    }
    Ok(u)
}

/// `U^⊥` inside `X`, as a pointed space on the common base point.
pub fn orthogonal_complement(u: &PointedSpace, x: &PointedSpace) -> Result<PointedSpace> {
    let xb = x.try_base()?;
    let ub = u.try_base()?;
    x.check_point(ub)?;
    if ub != xb {
        return Err(Error::Pointing);
    }
    if !is_subspace(u, x)? {
        return Err(Error::Containment(format!("{u:?} ⊄ {x:?}")));
    }
    complement_unchecked(u, x)
}

fn complement_unchecked(u: &PointedSpace, x: &PointedSpace) -> Result<PointedSpace> {
    let base = x.try_base()?;
    let prefix = orthogonalize(u)?.elements;
    let k = prefix.len();
    let mut list = prefix;
    list.extend(x.generators().iter().cloned());
    let all = orthogonalize_points(base, list);
    let tail = all[k..].to_vec();
    PointedSpace::new(base.clone(), tail)
}

/// A referential with `|x₁| ≥ |x₂| ≥ …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Base(Referential);

impl Base {
    pub fn referential(&self) -> &Referential {
        &self.0
    }

    pub fn elements(&self) -> &[Point] {
        self.0.elements()
    }

    pub fn norms(&self) -> Vec<BoolElem> {
        self.0.norms()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Greedy construction: each new element maximizes the norm over the
/// orthogonal complement of the ones already chosen; stop at norm 0.
pub fn build_base(space: &PointedSpace) -> Result<Base> {
    let base = space.try_base()?.clone();
    let cap = orthogonalize(space)?.len();
    let mut chosen: Vec<Point> = Vec::new();
    loop {
        let span = PointedSpace::new(base.clone(), chosen.clone())?;
        let rest = complement_unchecked(&span, space)?;
        let u = weierstrass_argmax(&rest, |p| Ok(base.distance(p)))?;
        if base.distance(&u).is_zero() {
            break;
        }
        chosen.push(u);
        assert!(chosen.len() <= cap, "base longer than a referential of the space");
    }
    let rf = Referential::from_parts_unchecked(base, chosen);
    debug_assert!(rf.norms().windows(2).all(|w| w[1].leq(&w[0])));
    Ok(Base(rf))
}

/// The decreasing sequence of nonzero `α_k`, or the empty-space marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum InvariantSeq {
    Empty,
    Alphas(Vec<BoolElem>),
}

impl InvariantSeq {
    fn from_alphas(mut alphas: Vec<BoolElem>) -> Self {
        while alphas.last().is_some_and(BoolElem::is_zero) {
            alphas.pop();
        }
        InvariantSeq::Alphas(alphas)
    }

    pub fn alphas(&self) -> Option<&[BoolElem]> {
        match self {
            InvariantSeq::Empty => None,
            InvariantSeq::Alphas(a) => Some(a),
        }
    }

    /// `α_k` for `k ≥ 1`; zero past the stored entries.
    pub fn alpha(&self, k: usize, omega: usize) -> Option<BoolElem> {
        let a = self.alphas()?;
        Some(a.get(k.checked_sub(1)?).copied().unwrap_or(BoolElem::zero(omega)))
    }
}

pub fn alpha_invariants(space: &PointedSpace) -> Result<InvariantSeq> {
    if space.is_empty() {
        return Ok(InvariantSeq::Empty);
    }
    Ok(InvariantSeq::from_alphas(build_base(space)?.norms()))
}

pub fn alpha_invariants_by_definition(space: &PointedSpace) -> Result<InvariantSeq> {
    alpha_invariants_by_definition_cancellable(space, &CancelToken::new())
}

/// `α_k` as the join of `Π_{i<j} d(u_i, u_j)` over `(k+1)`-subsets of the
/// base point and generators.
pub fn alpha_invariants_by_definition_cancellable(space: &PointedSpace, cancel: &CancelToken) -> Result<InvariantSeq> {
    if space.is_empty() {
        return Ok(InvariantSeq::Empty);
    }
    let omega = space.spec().omega;
    let mut hull = space.hull_points();
    hull.sort();
    hull.dedup();
    let mut alphas = vec![];
    for k in 1..hull.len() {
        cancel.check()?;
        let alpha = hull
            .iter()
            .combinations(k + 1)
            .map(|tuple| {
                tuple
                    .iter()
                    .tuple_combinations()
                    .fold(BoolElem::one(omega), |acc, (a, b)| acc * a.distance(b))
            })
            .fold(BoolElem::zero(omega), |acc, x| acc | x);
        if alpha.is_zero() {
            break;
        }
        alphas.push(alpha);
    }
    Ok(InvariantSeq::from_alphas(alphas))
}

/// A distance-preserving bijection between two pointed CFG-spaces,
/// stored as base-to-base maps in both directions.
#[derive(Debug, Clone)]
pub struct Isometry {
    pub forward: RefMap,
    pub inverse: RefMap,
}

impl Isometry {
    /// Base point and base elements of the source paired with their images.
    pub fn base_pairs(&self) -> Vec<(Point, Point)> {
        let rf = self.forward.referential();
        std::iter::once((rf.base().clone(), self.forward.base_image().clone()))
            .chain(rf.elements().iter().cloned().zip(self.forward.images().iter().cloned()))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub left: InvariantSeq,
    pub right: InvariantSeq,
    pub isometric: bool,
    pub isometry: Option<Isometry>,
}

/// Decides isometry by comparing invariant sequences and, when equal,
/// builds the map sending one base onto the other.
pub fn classify_isometric(x: &PointedSpace, y: &PointedSpace) -> Result<Classification> {
    if x.spec().omega != y.spec().omega {
        return Err(dim_err("|Ω|", x.spec().omega, y.spec().omega));
    }
    let (left, right) = (alpha_invariants(x)?, alpha_invariants(y)?);
    let isometric = left == right;
    let isometry = if isometric && !x.is_empty() {
        let (bx, by) = (build_base(x)?, build_base(y)?);
        let forward = RefMap::new(bx.0.clone(), by.0.base().clone(), by.elements().to_vec())?;
        let inverse = RefMap::new(by.0.clone(), bx.0.base().clone(), bx.elements().to_vec())?;
        Some(Isometry { forward, inverse })
    } else {
        None
    };
    Ok(Classification {
        left,
        right,
        isometric,
        isometry,
    })
}
