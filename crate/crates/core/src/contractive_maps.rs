//! Contractive maps stored by their values on a referential, and the
//! constructions built from them: orthogonal sums, solution sets,
//! kernel maps, intersections and preimages of CFG subspaces.
//!
//! Maps into `B` use the 2-ring `GF(2)^Ω` with `n = 1` as codomain, see
//! [`Point::from_bool`].

use std::collections::HashMap;

use itertools::Itertools;

use crate::boolean_ring::BoolElem;
use crate::error::{dim_err, Error, Result};
use crate::metric_space::{act_at, Point, PointedSpace};
use crate::span::{is_subspace, orthogonalize, orthogonalize_points, same_members, weierstrass_argmax, Referential};

/// A map defined on every member of its domain, assumed contractive.
pub trait ContractiveMap {
    fn domain(&self) -> &PointedSpace;
    fn apply(&self, x: &Point) -> Result<Point>;
}

/// A closure with an explicit domain. Contractivity is the caller's claim.
pub struct FnMap<F> {
    domain: PointedSpace,
    f: F,
}

impl<F> FnMap<F>
where
    F: Fn(&Point) -> Result<Point>,
{
    pub fn new(domain: PointedSpace, f: F) -> Self {
        FnMap { domain, f }
    }
}

impl<F> ContractiveMap for FnMap<F>
where
    F: Fn(&Point) -> Result<Point>,
{
    fn domain(&self) -> &PointedSpace {
        &self.domain
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        (self.f)(x)
    }
}

/// `|f(x_i)| ≤ |x_i|` for every referential element.
pub fn check_extensible(referential: &Referential, base_image: &Point, images: &[Point]) -> Result<bool> {
    if images.len() != referential.len() {
        return Err(dim_err("number of images", referential.len(), images.len()));
    }
    for img in images {
        base_image.check_compatible(img)?;
    }
    let base = referential.base();
    Ok(referential
        .elements()
        .iter()
        .zip(images)
        .all(|(x, fx)| base_image.distance(fx).leq(&base.distance(x))))
}

/// A contractive map given by its values on a referential of its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefMap {
    referential: Referential,
    base_image: Point,
    images: Vec<Point>,
}

impl RefMap {
    pub fn new(referential: Referential, base_image: Point, images: Vec<Point>) -> Result<Self> {
        if base_image.omega() != referential.base().omega() {
            return Err(dim_err("|Ω|", referential.base().omega(), base_image.omega()));
        }
        if !check_extensible(&referential, &base_image, &images)? {
            return Err(Error::Extensibility(format!(
                "norms {:?} do not dominate image norms",
                referential.norms()
            )));
        }
        Ok(RefMap {
            referential,
            base_image,
            images,
        })
    }

    /// Restricts a contractive table to a referential of `domain`.
    pub fn from_table(table: &MapTable, domain: &PointedSpace) -> Result<Self> {
        if !is_contractive_table(table, &table.domain_points())? {
            return Err(Error::NotContractive("table violates d(f(x),f(y)) ≤ d(x,y)".into()));
        }
        let rf = orthogonalize(domain)?;
        let lookup = |p: &Point| {
            table
                .get(p)
                .cloned()
                .ok_or_else(|| Error::Totality(format!("no image for {p:?}")))
        };
        let base_image = lookup(rf.base())?;
        let images = rf.elements().iter().map(lookup).collect::<Result<Vec<_>>>()?;
        Self::new(rf, base_image, images)
    }

    pub fn referential(&self) -> &Referential {
        &self.referential
    }

    pub fn base_image(&self) -> &Point {
        &self.base_image
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    /// `f(x) = a₀ f(0) + Σ a_i f(x_i)` over the coordinates of `x`.
    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        let coords = self.referential.member_coordinates(x)?;
        let b = &self.base_image;
        Ok(self
            .images
            .iter()
            .zip(&coords.coeffs)
            .fold(b.clone(), |acc, (fx, a)| acc.add(&fx.sub(b).masked(*a))))
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &RefMap) -> Result<RefMap> {
        let base_image = outer.evaluate(&self.base_image)?;
        let images = self
            .images
            .iter()
            .map(|y| outer.evaluate(y))
            .collect::<Result<Vec<_>>>()?;
        RefMap::new(self.referential.clone(), base_image, images)
    }

    pub fn to_table(&self, members: &[Point]) -> Result<MapTable> {
        MapTable::from_fn(members, |x| self.evaluate(x))
    }
}

impl ContractiveMap for RefMap {
    fn domain(&self) -> &PointedSpace {
        self.referential.space()
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        self.evaluate(x)
    }
}

/// A total point-to-point map on an enumerated domain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MapTable {
    pairs: Vec<(Point, Point)>,
    index: HashMap<Point, usize>,
}

impl MapTable {
    pub fn new(pairs: Vec<(Point, Point)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(pairs.len());
        for (k, (x, y)) in pairs.iter().enumerate() {
            if let Some((x0, y0)) = pairs.first() {
                x0.check_compatible(x)?;
                y0.check_compatible(y)?;
            }
            if let Some(prev) = index.insert(x.clone(), k) {
                if pairs[prev].1 != *y {
                    return Err(Error::Totality(format!("{x:?} mapped twice")));
                }
            }
        }
        Ok(MapTable { pairs, index })
    }

    pub fn from_fn(domain: &[Point], f: impl Fn(&Point) -> Result<Point>) -> Result<Self> {
        let pairs = domain
            .iter()
            .map(|x| Ok((x.clone(), f(x)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }

    pub fn get(&self, x: &Point) -> Option<&Point> {
        self.index.get(x).map(|&k| &self.pairs[k].1)
    }

    pub fn pairs(&self) -> &[(Point, Point)] {
        &self.pairs
    }

    pub fn domain_points(&self) -> Vec<Point> {
        self.pairs.iter().map(|(x, _)| x.clone()).unique().collect()
    }
}

/// Pairwise check of `d(f(x), f(y)) ≤ d(x, y)` on `domain`.
///
/// A contractive verdict is cross-checked against preservation of binary
/// convex combinations whose result lies in the table.
pub fn is_contractive_table(table: &MapTable, domain: &[Point]) -> Result<bool> {
    let images = domain
        .iter()
        .map(|x| {
            table
                .get(x)
                .ok_or_else(|| Error::Totality(format!("no image for {x:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 0..domain.len() {
        for j in i + 1..domain.len() {
            if !images[i].distance(images[j]).leq(&domain[i].distance(&domain[j])) {
                return Ok(false);
            }
        }
    }
    if let Some(first) = domain.first() {
        let omega = first.omega();
        let scalars: Vec<_> = if omega <= 4 {
            BoolElem::all(omega).collect()
        } else {
            vec![BoolElem::zero(omega), BoolElem::one(omega)]
        };
        for (i, j) in (0..domain.len()).tuple_combinations().take(256) {
            for &a in &scalars {
                let r = domain[i].masked(a).add(&domain[j].masked(!a));
                if let Some(fr) = table.get(&r) {
                    let expected = images[i].masked(a).add(&images[j].masked(!a));
                    assert_eq!(
                        *fr, expected,
                        "contractive table fails to preserve a convex combination"
                    );
                }
            }
        }
    }
    Ok(true)
}

/// `f ⊥ g` on `X = conv(U ∪ U^⊥)`.
pub fn orthogonal_sum(f: &RefMap, g: &RefMap, x: &PointedSpace) -> Result<RefMap> {
    let base = x.try_base()?;
    if f.referential.base() != base || g.referential.base() != base {
        return Err(Error::Pointing);
    }
    if f.base_image != g.base_image {
        return Err(Error::Pointing);
    }
    let mut elements = f.referential.elements().to_vec();
    elements.extend(g.referential.elements().iter().cloned());
    let rf = Referential::new(base.clone(), elements)?;
    if !same_members(rf.space(), x)? {
        return Err(Error::Containment("U and U^⊥ do not generate X".into()));
    }
    let mut images = f.images.clone();
    images.extend(g.images.iter().cloned());
    RefMap::new(rf, f.base_image.clone(), images)
}

/// The solution set `{x : f(x) = target}` as a pointed CFG-space, or EMPTY.
pub fn zero_set(f: &dyn ContractiveMap, target: &Point) -> Result<PointedSpace> {
    let x = f.domain();
    let Some(x0) = x.base() else {
        return Ok(x.clone());
    };
    f.apply(x0)?.check_compatible(target)?;
    let closeness = |p: &Point| -> Result<BoolElem> { Ok(!f.apply(p)?.distance(target)) };
    let root = weierstrass_argmax(x, closeness)?;
    if !closeness(&root)?.is_one() {
        return Ok(PointedSpace::empty(x.spec(), x.dim()));
    }
    let mut gens = Vec::new();
    for h in x.hull_points() {
        let g = act_at(&root, closeness(&h)?, &h);
        if g != root && !gens.contains(&g) {
            gens.push(g);
        }
    }
    PointedSpace::new(root, gens)
}

/// A map `X → B` vanishing exactly on `Y`, pointed at the base of `Y`.
pub fn kernel_map(y: &PointedSpace, x: &PointedSpace) -> Result<RefMap> {
    let y0 = y.base().ok_or(Error::NoKernel)?.clone();
    x.check_point(&y0)?;
    if x.is_empty() || !is_subspace(y, x)? {
        return Err(Error::Containment(format!("{y:?} ⊄ {x:?}")));
    }
    let prefix = orthogonalize(y)?.elements().to_vec();
    let k = prefix.len();
    let mut list = prefix;
    list.extend(x.hull_points());
    let elements = orthogonalize_points(&y0, list);
    let omega = y0.omega();
    let images = elements
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let v = if i < k { BoolElem::zero(omega) } else { y0.distance(u) };
            Point::from_bool(v)
        })
        .collect();
    let rf = Referential::new(y0, elements)?;
    RefMap::new(rf, Point::from_bool(BoolElem::zero(omega)), images)
}

fn bool_zero(omega: usize) -> Point {
    Point::from_bool(BoolElem::zero(omega))
}

/// `Y ∩ Z` as the zero set of the pointwise join of their kernel maps.
pub fn intersect_subspaces(y: &PointedSpace, z: &PointedSpace, x: &PointedSpace) -> Result<PointedSpace> {
    if y.is_empty() || z.is_empty() {
        return Ok(PointedSpace::empty(x.spec(), x.dim()));
    }
    let f = kernel_map(y, x)?;
    let g = kernel_map(z, x)?;
    let join = FnMap::new(f.domain().clone(), |p: &Point| {
        Ok(Point::from_bool(f.evaluate(p)?.to_bool() | g.evaluate(p)?.to_bool()))
    });
    zero_set(&join, &bool_zero(x.spec().omega))
}

/// `f^{-1}(Z)` for `Z ⊆ codomain`, via the kernel map of `Z` composed with `f`.
pub fn preimage_subspace(f: &dyn ContractiveMap, codomain: &PointedSpace, z: &PointedSpace) -> Result<PointedSpace> {
    let domain = f.domain();
    if z.is_empty() {
        return Ok(PointedSpace::empty(domain.spec(), domain.dim()));
    }
    let g = kernel_map(z, codomain)?;
    let composed = FnMap::new(domain.clone(), |p: &Point| g.evaluate(&f.apply(p)?));
    zero_set(&composed, &bool_zero(z.spec().omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg_ring::{all_elements, RingSpec};
    use crate::span::contains;

    fn s(p: u32, omega: usize) -> RingSpec {
        RingSpec::new(p, omega).unwrap()
    }

    fn p1(spec: RingSpec, c: &[u32]) -> Point {
        Point::from_rows(spec, &[c.to_vec()]).unwrap()
    }

    fn line(spec: RingSpec) -> Vec<Point> {
        all_elements(spec).map(|x| Point::new(spec, vec![x]).unwrap()).collect()
    }

    fn conv0(spec: RingSpec, gens: &[&[u32]]) -> PointedSpace {
        PointedSpace::new(Point::zero(spec, 1), gens.iter().map(|g| p1(spec, g)).collect()).unwrap()
    }

    fn members(space: &PointedSpace, universe: &[Point]) -> Vec<Point> {
        universe
            .iter()
            .filter(|p| contains(space, p).unwrap())
            .cloned()
            .collect()
    }

    fn z3_ref() -> Referential {
        let z = s(3, 1);
        Referential::new(Point::zero(z, 1), vec![p1(z, &[1]), p1(z, &[2])]).unwrap()
    }

    #[test]
    fn extensibility_examples() {
        let z = s(3, 1);
        let rf = z3_ref();
        assert!(check_extensible(&rf, &Point::zero(z, 1), &[p1(z, &[1]), p1(z, &[0])]).unwrap());
        assert!(check_extensible(&rf, &Point::zero(z, 1), &[p1(z, &[0]), p1(z, &[0])]).unwrap());
        assert!(check_extensible(&rf, &Point::zero(z, 1), &[p1(z, &[0])]).is_err());

        let g = s(3, 2);
        let narrow = Referential::new(Point::zero(g, 1), vec![p1(g, &[1, 0])]).unwrap();
        assert!(!check_extensible(&narrow, &Point::zero(g, 1), &[p1(g, &[1, 1])]).unwrap());
        assert!(RefMap::new(narrow, Point::zero(g, 1), vec![p1(g, &[1, 1])]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let z = s(3, 1);
        let f = RefMap::new(z3_ref(), Point::zero(z, 1), vec![p1(z, &[1]), p1(z, &[0])]).unwrap();
        assert_eq!(f.evaluate(&p1(z, &[2])).unwrap(), p1(z, &[0]));
        assert_eq!(f.evaluate(&Point::zero(z, 1)).unwrap(), Point::zero(z, 1));

        let g = s(3, 2);
        let rf = orthogonalize(&PointedSpace::full(g, 1)).unwrap();
        let id = RefMap::new(rf.clone(), Point::zero(g, 1), rf.elements().to_vec()).unwrap();
        for x in line(g) {
            assert_eq!(id.evaluate(&x).unwrap(), x);
        }
        let half = RefMap::new(
            Referential::new(Point::zero(g, 1), vec![p1(g, &[1, 0])]).unwrap(),
            Point::zero(g, 1),
            vec![p1(g, &[2, 0])],
        )
        .unwrap();
        assert!(matches!(half.evaluate(&p1(g, &[0, 1])), Err(Error::NotMember(_))));
    }

    #[test]
    fn contractive_table_examples() {
        let z = s(3, 1);
        let dom = line(z);
        let mut count = 0;
        for code in 0..27u32 {
            let table = MapTable::from_fn(&dom, |x| {
                let v = x.coords()[0].comps()[0];
                Ok(p1(z, &[code / 3u32.pow(v) % 3]))
            })
            .unwrap();
            count += is_contractive_table(&table, &dom).unwrap() as usize;
        }
        assert_eq!(count, 27);

        let g = s(3, 2);
        let dom = line(g);
        let swap = MapTable::from_fn(&dom, |x| {
            let c = x.coords()[0].comps();
            Ok(p1(g, &[c[1], c[0]]))
        })
        .unwrap();
        assert!(!is_contractive_table(&swap, &dom).unwrap());
        let constant = MapTable::from_fn(&dom, |_| Ok(p1(g, &[2, 1]))).unwrap();
        assert!(is_contractive_table(&constant, &dom).unwrap());
        let partial = MapTable::new(vec![(dom[0].clone(), dom[0].clone())]).unwrap();
        assert!(matches!(is_contractive_table(&partial, &dom), Err(Error::Totality(_))));
    }

    #[test]
    fn table_round_trip_through_referential() {
        let g = s(3, 2);
        let dom = line(g);
        let sq = MapTable::from_fn(&dom, |x| Ok(Point::new(g, vec![x.coords()[0].pow(2)]).unwrap())).unwrap();
        let f = RefMap::from_table(&sq, &PointedSpace::full(g, 1)).unwrap();
        assert_eq!(f.to_table(&dom).unwrap(), sq);
    }

    #[test]
    fn orthogonal_sum_examples() {
        let g = s(3, 2);
        let x = PointedSpace::full(g, 1);
        let u = conv0(g, &[&[1, 0]]);
        let comp = crate::span::orthogonal_complement(&u, &x).unwrap();
        let f = RefMap::new(orthogonalize(&u).unwrap(), Point::zero(g, 1), vec![p1(g, &[2, 0])]).unwrap();
        let rc = orthogonalize(&comp).unwrap();
        let zero = RefMap::new(rc.clone(), Point::zero(g, 1), vec![Point::zero(g, 1); rc.len()]).unwrap();
        let sum = orthogonal_sum(&f, &zero, &x).unwrap();
        for p in members(&u, &line(g)) {
            assert_eq!(sum.evaluate(&p).unwrap(), f.evaluate(&p).unwrap());
        }
        for p in members(&comp, &line(g)) {
            assert_eq!(sum.evaluate(&p).unwrap(), Point::zero(g, 1));
        }
        // (1,1) has coordinate {0} on (1,0), so its image is (2,0) on atom 0
        assert_eq!(sum.evaluate(&p1(g, &[1, 1])).unwrap(), p1(g, &[2, 0]));

        let trivial = RefMap::new(
            orthogonalize(&PointedSpace::point(g, 1)).unwrap(),
            Point::zero(g, 1),
            vec![],
        )
        .unwrap();
        let rx = orthogonalize(&x).unwrap();
        let id = RefMap::new(rx.clone(), Point::zero(g, 1), rx.elements().to_vec()).unwrap();
        let s2 = orthogonal_sum(&trivial, &id, &x).unwrap();
        for p in line(g) {
            assert_eq!(s2.evaluate(&p).unwrap(), p);
        }
    }

    #[test]
    fn zero_set_examples() {
        let z = s(3, 1);
        let full = PointedSpace::full(z, 1);
        let f = FnMap::new(full.clone(), |p: &Point| {
            let x = &p.coords()[0];
            Ok(Point::new(z, vec![x.mul(x).sub(x)]).unwrap())
        });
        let zs = zero_set(&f, &Point::zero(z, 1)).unwrap();
        assert_eq!(members(&zs, &line(z)), vec![p1(z, &[0]), p1(z, &[1])]);

        let c = FnMap::new(full.clone(), |_: &Point| Ok(p1(z, &[2])));
        assert_eq!(members(&zero_set(&c, &p1(z, &[2])).unwrap(), &line(z)).len(), 3);
        assert!(zero_set(&c, &p1(z, &[1])).unwrap().is_empty());
    }

    #[test]
    fn kernel_map_examples() {
        let z = s(3, 1);
        let full = PointedSpace::full(z, 1);
        let y = conv0(z, &[&[1]]);
        let k = kernel_map(&y, &full).unwrap();
        let bz = |v: bool| Point::from_bool(if v { BoolElem::one(1) } else { BoolElem::zero(1) });
        assert_eq!(k.evaluate(&p1(z, &[0])).unwrap(), bz(false));
        assert_eq!(k.evaluate(&p1(z, &[1])).unwrap(), bz(false));
        assert_eq!(k.evaluate(&p1(z, &[2])).unwrap(), bz(true));

        let all = kernel_map(&full, &full).unwrap();
        assert!(all.images().iter().all(Point::is_zero));

        let g = s(3, 2);
        let origin = kernel_map(&PointedSpace::point(g, 1), &PointedSpace::full(g, 1)).unwrap();
        let zs = zero_set(&origin, &Point::from_bool(BoolElem::zero(2))).unwrap();
        assert_eq!(members(&zs, &line(g)), vec![Point::zero(g, 1)]);

        assert_eq!(kernel_map(&PointedSpace::empty(z, 1), &full), Err(Error::NoKernel));
        let g_line = conv0(g, &[&[1, 0]]);
        assert!(matches!(
            kernel_map(&PointedSpace::full(g, 1), &g_line),
            Err(Error::Containment(_))
        ));
    }

    #[test]
    fn intersection_examples() {
        let z = s(3, 1);
        let full = PointedSpace::full(z, 1);
        let y = conv0(z, &[&[1]]);
        let zz = PointedSpace::new(p1(z, &[1]), vec![p1(z, &[2])]).unwrap();
        assert_eq!(
            members(&intersect_subspaces(&y, &y, &full).unwrap(), &line(z)),
            members(&y, &line(z))
        );
        assert_eq!(
            members(&intersect_subspaces(&y, &zz, &full).unwrap(), &line(z)),
            vec![p1(z, &[1])]
        );
        let only2 = PointedSpace::new(p1(z, &[2]), vec![]).unwrap();
        assert!(intersect_subspaces(&y, &only2, &full).unwrap().is_empty());
        assert!(intersect_subspaces(&PointedSpace::empty(z, 1), &y, &full)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn preimage_examples() {
        let z = s(3, 1);
        let full = PointedSpace::full(z, 1);
        let one = PointedSpace::new(p1(z, &[1]), vec![]).unwrap();
        let sq = FnMap::new(full.clone(), |p: &Point| {
            Ok(Point::new(z, vec![p.coords()[0].pow(2)]).unwrap())
        });
        let pre = preimage_subspace(&sq, &full, &one).unwrap();
        assert_eq!(members(&pre, &line(z)), vec![p1(z, &[1]), p1(z, &[2])]);

        let id = FnMap::new(full.clone(), |p: &Point| Ok(p.clone()));
        let y = conv0(z, &[&[1]]);
        assert_eq!(
            members(&preimage_subspace(&id, &full, &y).unwrap(), &line(z)),
            members(&y, &line(z))
        );

        let c = FnMap::new(full.clone(), |_: &Point| Ok(p1(z, &[1])));
        assert_eq!(members(&preimage_subspace(&c, &full, &y).unwrap(), &line(z)).len(), 3);
    }

    #[test]
    fn composition_matches_pointwise() {
        let g = s(3, 2);
        let rx = orthogonalize(&PointedSpace::full(g, 1)).unwrap();
        let images: Vec<_> = rx
            .elements()
            .iter()
            .map(|e| Point::new(g, vec![e.coords()[0].pow(2)]).unwrap())
            .collect();
        let f = RefMap::new(rx.clone(), Point::zero(g, 1), images).unwrap();
        let shift: Vec<_> = rx
            .elements()
            .iter()
            .map(|e| e.masked(BoolElem::from_atoms(2, [0]).unwrap()))
            .collect();
        let h = RefMap::new(rx, Point::zero(g, 1), shift).unwrap();
        let fh = h.then(&f).unwrap();
        for x in line(g) {
            assert_eq!(fh.evaluate(&x).unwrap(), f.evaluate(&h.evaluate(&x).unwrap()).unwrap());
        }
    }
}
