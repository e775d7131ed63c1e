//! Brute-force ground truth over small rings.
//!
//! Nothing here goes through the closed-form coordinates: membership is
//! decided by closing generating sets under binary convex combinations,
//! contractivity by pairwise distance checks, isometry by search over
//! bijections.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::boolean_ring::{BoolElem, Partition};
use crate::cancel::CancelToken;
use crate::cfg_ring::{embed, idempotent_of, RingElem, RingSpec};
use crate::contractive_maps::{
    intersect_subspaces, is_contractive_table, kernel_map, preimage_subspace, zero_set, MapTable, RefMap,
};
use crate::error::{Error, Result};
use crate::metric_space::{convex_combination, orthogonal_at, Point, PointedSpace};
use crate::polynomials::{
    all_points, e_polynomial, interp_multi, interp_unary, polys_from_space, space_from_polys, Polynomial,
};
use crate::span::{
    alpha_invariants, alpha_invariants_by_definition, classify_isometric, contains, orthogonal_complement,
    orthogonalize, Referential,
};

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Largest `A^n` that may be listed.
    pub points: u128,
    /// Largest table space (or leaf count) a map enumeration may visit.
    pub tables: u128,
    /// Largest `|Ω|` for which `B` is enumerated.
    pub omega: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            points: 1_000_000,
            tables: 1_000_000,
            omega: crate::boolean_ring::DEFAULT_OMEGA_LIMIT,
        }
    }
}

fn point_count(spec: RingSpec, n: usize) -> u128 {
    spec.cardinality().checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// All points of `A^n` in lexicographic order.
pub fn enumerate_points(spec: RingSpec, n: usize, limit: u128) -> Result<Vec<Point>> {
    let size = point_count(spec, n);
    if size > limit {
        return Err(Error::LimitExceeded { size, limit });
    }
    Ok(all_points(spec, n))
}

/// Members of a space by closing its generating set under
/// `a x + ā y`, `a ∈ B`. Sorted.
pub fn closure_members(space: &PointedSpace, limit: u128) -> Result<Vec<Point>> {
    let size = point_count(space.spec(), space.dim());
    if size > limit {
        return Err(Error::LimitExceeded { size, limit });
    }
    let omega = space.spec().omega;
    let scalars: Vec<BoolElem> = BoolElem::all(omega).filter(|a| !a.is_zero() && !a.is_one()).collect();
    let mut seen: HashSet<Point> = HashSet::new();
    let mut all: Vec<Point> = Vec::new();
    for p in space.hull_points() {
        if seen.insert(p.clone()) {
            all.push(p);
        }
    }
    let mut frontier = all.clone();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for x in &frontier {
            for y in &all {
                for &a in &scalars {
                    let r = x.masked(a).add(&y.masked(!a));
                    if seen.insert(r.clone()) {
                        fresh.push(r);
                    }
                }
            }
        }
        all.extend(fresh.iter().cloned());
        frontier = fresh;
    }
    all.sort();
    Ok(all)
}

/// Members by filtering `A^n` through `contains`, cross-checked against
/// [`closure_members`].
pub fn enumerate_members(space: &PointedSpace, limit: u128) -> Result<Vec<Point>> {
    let universe = enumerate_points(space.spec(), space.dim(), limit)?;
    let by_contains: Vec<Point> = if space.is_empty() {
        vec![]
    } else {
        let rf = orthogonalize(space)?;
        universe
            .into_iter()
            .filter(|p| rf.contains(p).unwrap_or(false))
            .collect()
    };
    let by_closure = closure_members(space, limit)?;
    if by_contains != by_closure {
        let diff = by_contains
            .iter()
            .find(|p| !by_closure.contains(p))
            .or_else(|| by_closure.iter().find(|p| !by_contains.contains(p)));
        return Err(Error::OracleFailure(format!(
            "membership of {diff:?} in {space:?}: contains and closure disagree"
        )));
    }
    Ok(by_closure)
}

/// Every tuple satisfying disjointness, `Σ a_i x_i = x` and `a_i ≤ |x_i|`.
pub fn brute_force_coordinates(rf: &Referential, x: &Point) -> Vec<Vec<BoolElem>> {
    let omega = x.omega();
    let k = rf.len();
    let base = rf.base();
    let norms = rf.norms();
    let per = 1u64 << omega;
    let total = per.pow(k as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut coeffs = Vec::with_capacity(k);
        for _ in 0..k {
            coeffs.push(BoolElem::from_bits(omega, c % per).expect("within Ω"));
            c /= per;
        }
        if !coeffs.iter().zip(&norms).all(|(a, n)| a.leq(n)) {
            continue;
        }
        if !crate::boolean_ring::is_partition(&coeffs, false).unwrap_or(false) {
            continue;
        }
        let r = rf
            .elements()
            .iter()
            .zip(&coeffs)
            .fold(base.clone(), |acc, (xi, a)| acc.add(&xi.sub(base).masked(*a)));
        if r == *x {
            out.push(coeffs);
        }
    }
    out
}

/// Backtracking over assignments `domain[i] ↦ codomain[j]` with every
/// pair contractive. Returns the leaf count and up to `keep` tables as
/// codomain indices.
pub fn contractive_tables(
    domain: &[Point],
    codomain: &[Point],
    keep: usize,
    cancel: &CancelToken,
) -> Result<(u128, Vec<Vec<usize>>)> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        domain: &[Point],
        codomain: &[Point],
        current: &mut Vec<usize>,
        count: &mut u128,
        kept: &mut Vec<Vec<usize>>,
        keep: usize,
        cancel: &CancelToken,
    ) -> Result<()> {
        if k == domain.len() {
            *count += 1;
            if kept.len() < keep {
                kept.push(current.clone());
            }
            return Ok(());
        }
        if k <= 1 {
            cancel.check()?;
        }
        for (j, y) in codomain.iter().enumerate() {
            let ok = (0..k).all(|i| codomain[current[i]].distance(y).leq(&domain[i].distance(&domain[k])));
            if ok {
                current.push(j);
                go(k + 1, domain, codomain, current, count, kept, keep, cancel)?;
                current.pop();
            }
        }
        Ok(())
    }
    let mut count = 0;
    let mut kept = Vec::new();
    go(
        0,
        domain,
        codomain,
        &mut Vec::new(),
        &mut count,
        &mut kept,
        keep,
        cancel,
    )?;
    Ok((count, kept))
}

/// A distance-preserving bijection `xs → ys` as indices, if one exists.
pub fn find_isometry(xs: &[Point], ys: &[Point]) -> Option<Vec<usize>> {
    fn go(k: usize, xs: &[Point], ys: &[Point], used: &mut Vec<bool>, cur: &mut Vec<usize>) -> bool {
        if k == xs.len() {
            return true;
        }
        for j in 0..ys.len() {
            if used[j] {
                continue;
            }
            if (0..k).all(|i| ys[cur[i]].distance(&ys[j]) == xs[i].distance(&xs[k])) {
                used[j] = true;
                cur.push(j);
                if go(k + 1, xs, ys, used, cur) {
                    return true;
                }
                cur.pop();
                used[j] = false;
            }
        }
        false
    }
    if xs.len() != ys.len() {
        return None;
    }
    let mut cur = Vec::new();
    go(0, xs, ys, &mut vec![false; ys.len()], &mut cur).then_some(cur)
}

/// `f` restricted to `xs` is injective onto `ys` and preserves distances.
pub fn is_isometric_bijection(xs: &[Point], ys: &[Point], f: impl Fn(&Point) -> Result<Point>) -> bool {
    let Ok(images) = xs.iter().map(&f).collect::<Result<Vec<_>>>() else {
        return false;
    };
    let targets: BTreeSet<&Point> = ys.iter().collect();
    let hit: BTreeSet<&Point> = images.iter().collect();
    if hit != targets || images.len() != ys.len() {
        return false;
    }
    (0..xs.len()).all(|i| (i + 1..xs.len()).all(|j| images[i].distance(&images[j]) == xs[i].distance(&xs[j])))
}

/// Member sets of `conv(S)` for every nonempty `S ⊆ A^n`, plus the empty set.
pub fn cfg_member_sets(spec: RingSpec, n: usize, limits: &Limits) -> Result<BTreeSet<Vec<Point>>> {
    let points = enumerate_points(spec, n, limits.points)?;
    if points.len() > 20 {
        return Err(Error::LimitExceeded {
            size: 1u128 << points.len(),
            limit: 1 << 20,
        });
    }
    let subsets: Vec<u32> = (1u32..1 << points.len()).collect();
    let sets: Vec<Vec<Point>> = subsets
        .par_iter()
        .map(|&mask| {
            let chosen: Vec<Point> = (0..points.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| points[i].clone())
                .collect();
            let space = PointedSpace::new(chosen[0].clone(), chosen[1..].to_vec()).expect("same ring");
            closure_members(&space, limits.points)
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeSet<Vec<Point>> = sets.into_iter().collect();
    out.insert(vec![]);
    Ok(out)
}

/// Zero loci of the polynomials interpolating every contractive map
/// `A^n → B`, closed under pairwise intersection (polynomial lists).
pub fn kernel_polynomial_loci(spec: RingSpec, n: usize, limits: &Limits) -> Result<BTreeSet<Vec<Point>>> {
    let points = enumerate_points(spec, n, limits.points)?;
    let bools: Vec<Point> = BoolElem::all(spec.omega).map(Point::from_bool).collect();
    let expected = (bools.len() as u128)
        .checked_pow(points.len() as u32)
        .unwrap_or(u128::MAX);
    if expected > limits.tables {
        return Err(Error::LimitExceeded {
            size: expected,
            limit: limits.tables,
        });
    }
    let (_, tables) = contractive_tables(&points, &bools, usize::MAX, &CancelToken::new())?;
    let loci: Vec<Vec<Point>> = tables
        .par_iter()
        .map(|t| {
            let table = MapTable::new(
                points
                    .iter()
                    .zip(t)
                    .map(|(x, &j)| {
                        let b = bools[j].to_bool();
                        (x.clone(), Point::new(spec, vec![embed(spec, b)]).expect("same ring"))
                    })
                    .collect(),
            )?;
            let g = interp_multi(&table)?.remove(0);
            points
                .iter()
                .filter_map(|x| match g.eval(x) {
                    Ok(v) if v.is_zero() => Some(Ok(x.clone())),
                    Ok(_) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeSet<Vec<Point>> = loci.into_iter().collect();
    let base: Vec<Vec<Point>> = out.iter().cloned().collect();
    for a in &base {
        for b in &base {
            out.insert(a.iter().filter(|x| b.contains(x)).cloned().collect());
        }
    }
    Ok(out)
}

/// Seeded generators for random test instances.
pub mod random {
    use super::*;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn ring_elem(spec: RingSpec, rng: &mut impl Rng) -> RingElem {
        let comps = (0..spec.omega).map(|_| rng.gen_range(0..spec.p)).collect();
        RingElem::new(spec, comps).expect("residues below p")
    }

    pub fn point(spec: RingSpec, n: usize, rng: &mut impl Rng) -> Point {
        Point::new(spec, (0..n).map(|_| ring_elem(spec, rng)).collect()).expect("same ring")
    }

    pub fn bool_elem(omega: usize, rng: &mut impl Rng) -> BoolElem {
        BoolElem::from_bits(omega, rng.gen_range(0..1u64 << omega)).expect("within Ω")
    }

    /// Base plus `0..=max_gens` generators.
    pub fn space(spec: RingSpec, n: usize, max_gens: usize, rng: &mut impl Rng) -> PointedSpace {
        let k = rng.gen_range(0..=max_gens);
        let base = point(spec, n, rng);
        let gens = (0..k).map(|_| point(spec, n, rng)).collect();
        PointedSpace::new(base, gens).expect("same ring")
    }

    /// A complete partition of `Ω` into `k` (possibly zero) parts.
    pub fn partition(omega: usize, k: usize, rng: &mut impl Rng) -> Partition {
        let mut bits = vec![0u64; k];
        for atom in 0..omega {
            bits[rng.gen_range(0..k)] |= 1 << atom;
        }
        let parts = bits
            .into_iter()
            .map(|b| BoolElem::from_bits(omega, b).expect("within Ω"))
            .collect();
        Partition::new(parts, true).expect("disjoint and complete")
    }

    /// A contractive map on `domain` into `A^m`: images are masked by the
    /// norms of the referential elements.
    pub fn refmap(domain: &PointedSpace, m: usize, rng: &mut impl Rng) -> Result<RefMap> {
        let rf = orthogonalize(domain)?;
        let spec = domain.spec();
        let b = point(spec, m, rng);
        let images = rf
            .norms()
            .into_iter()
            .map(|nx| b.add(&point(spec, m, rng).sub(&b).masked(nx)))
            .collect();
        RefMap::new(rf, b, images)
    }

    pub fn polynomial(spec: RingSpec, n: usize, rng: &mut impl Rng) -> Polynomial {
        let mut terms = vec![];
        let mut exp = vec![0u32; n];
        loop {
            if rng.gen_bool(0.5) {
                terms.push((exp.clone(), ring_elem(spec, rng)));
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return Polynomial::from_terms(spec, n, terms).expect("reduced exponents");
                }
                exp[pos] += 1;
                if exp[pos] < spec.p {
                    break;
                }
                exp[pos] = 0;
                pos += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub ring: RingSpec,
    pub n: usize,
    pub universe: u128,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
#[serde(transparent)]
pub struct OracleReport {
    pub checks: Vec<CheckOutcome>,
}

impl OracleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: OracleReport) {
        self.checks.extend(other.checks);
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub limits: Limits,
    pub seed: u64,
    /// Random instances per sampled check.
    pub samples: usize,
    pub cancel: CancelToken,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            limits: Limits::default(),
            seed: 0x5eed,
            samples: 20,
            cancel: CancelToken::new(),
        }
    }
}

struct Ctx<'a> {
    spec: RingSpec,
    n: usize,
    cfg: &'a SuiteConfig,
    points: Option<Vec<Point>>,
}

/// `(instances checked, first counterexample)`.
type Tally = Result<(u128, Option<String>)>;

type CheckFn = fn(&Ctx, &mut ChaCha8Rng) -> Tally;

/// Exhaustive triple checks stay below this many triples.
const TRIPLE_BUDGET: u128 = 2_000_000;
/// Member enumeration in sampled checks is skipped above this many points.
const MEMBER_BUDGET: u128 = 700;

fn fail(msg: String) -> Tally {
    Ok((0, Some(msg)))
}

impl Ctx<'_> {
    fn members(&self, space: &PointedSpace) -> Result<Vec<Point>> {
        closure_members(space, self.cfg.limits.points)
    }

    fn small_universe(&self) -> Option<&[Point]> {
        self.points.as_deref().filter(|p| (p.len() as u128) <= MEMBER_BUDGET)
    }

    fn filter(&self, pred: impl Fn(&Point) -> Result<bool>) -> Result<Vec<Point>> {
        let pts = self.small_universe().expect("caller checked universe size");
        let mut out = vec![];
        for p in pts {
            if pred(p)? {
                out.push(p.clone());
            }
        }
        Ok(out)
    }
}

fn check_metric_axioms(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    let check = |x: &Point, y: &Point, z: &Point| -> Option<String> {
        let (dxy, dyz, dxz) = (x.distance(y), y.distance(z), x.distance(z));
        let ok = (dxy.is_zero() == (x == y))
            && dxy == y.distance(x)
            && dxz.leq(&(dxy | dyz))
            && (dxz * !dyz).leq(&dxy)
            && (dxz + z.distance(y)).leq(&dxy);
        (!ok).then(|| format!("x={x:?} y={y:?} z={z:?}"))
    };
    match &ctx.points {
        Some(pts) if (pts.len() as u128).pow(3) <= TRIPLE_BUDGET => {
            for x in pts {
                ctx.cfg.cancel.check()?;
                for y in pts {
                    for z in pts {
                        if let Some(c) = check(x, y, z) {
                            return fail(c);
                        }
                    }
                }
            }
            Ok(((pts.len() as u128).pow(3), None))
        }
        _ => {
            let k = 20_000;
            for _ in 0..k {
                let (x, y, z) = (
                    random::point(ctx.spec, ctx.n, rng),
                    random::point(ctx.spec, ctx.n, rng),
                    random::point(ctx.spec, ctx.n, rng),
                );
                if let Some(c) = check(&x, &y, &z) {
                    return fail(c);
                }
            }
            Ok((k, None))
        }
    }
}

fn check_convex_combinations(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    let omega = ctx.spec.omega;
    let samples = ctx.cfg.samples * 10;
    for _ in 0..samples {
        let k = rng.gen_range(1..=3);
        let xs: Vec<Point> = (0..k).map(|_| random::point(ctx.spec, ctx.n, rng)).collect();
        let coeffs = random::partition(omega, k, rng);
        let r = convex_combination(&xs, &coeffs)?;
        let y = random::point(ctx.spec, ctx.n, rng);
        let expected = xs
            .iter()
            .zip(coeffs.parts())
            .fold(BoolElem::zero(omega), |acc, (x, a)| acc + *a * x.distance(&y));
        if r.distance(&y) != expected {
            return fail(format!("d(Σ a_i x_i, y) for xs={xs:?} a={coeffs:?} y={y:?}"));
        }
        if let Some(pts) = ctx.small_universe() {
            let sat: Vec<&Point> = pts
                .iter()
                .filter(|p| {
                    xs.iter()
                        .zip(coeffs.parts())
                        .all(|(x, a)| (*a * p.distance(x)).is_zero())
                })
                .collect();
            if sat != vec![&r] {
                return fail(format!("convex combination not unique for xs={xs:?} a={coeffs:?}"));
            }
        }
    }
    Ok((samples as u128, None))
}

fn check_coordinates(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    if ctx.spec.omega > 2 || ctx.small_universe().is_none() {
        return Ok((0, None));
    }
    let mut count = 0u128;
    for _ in 0..ctx.cfg.samples {
        let space = random::space(ctx.spec, ctx.n, 4, rng);
        let rf = orthogonalize(&space)?;
        for x in ctx.members(&space)? {
            let found = brute_force_coordinates(&rf, &x);
            let closed = rf.coordinates(&x)?.coeffs;
            if found != vec![closed.clone()] {
                return fail(format!("x={x:?} in {space:?}: closed {closed:?}, search {found:?}"));
            }
            count += 1;
        }
    }
    Ok((count, None))
}

fn check_membership(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    if ctx.small_universe().is_none() {
        return Ok((0, None));
    }
    for _ in 0..ctx.cfg.samples {
        let space = random::space(ctx.spec, ctx.n, 4, rng);
        let by_contains = ctx.filter(|p| contains(&space, p))?;
        if by_contains != ctx.members(&space)? {
            return fail(format!("contains vs closure on {space:?}"));
        }
    }
    Ok((ctx.cfg.samples as u128, None))
}

fn check_orthogonalize(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    for _ in 0..ctx.cfg.samples {
        let space = random::space(ctx.spec, ctx.n, 5, rng);
        let rf = orthogonalize(&space)?;
        let base = rf.base();
        for (i, x) in rf.elements().iter().enumerate() {
            if x == base || rf.elements()[i + 1..].iter().any(|y| !orthogonal_at(base, x, y)) {
                return fail(format!("referential of {space:?} not orthogonal: {rf:?}"));
            }
        }
        if ctx.small_universe().is_some() && ctx.members(&space)? != ctx.members(rf.space())? {
            return fail(format!("orthogonalize changed members of {space:?}"));
        }
    }
    Ok((ctx.cfg.samples as u128, None))
}

fn check_alphas(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    for _ in 0..ctx.cfg.samples {
        let mut space = random::space(ctx.spec, ctx.n, 5, rng);
        let by_base = alpha_invariants(&space)?;
        let by_def = alpha_invariants_by_definition(&space)?;
        if by_base != by_def {
            return fail(format!("{space:?}: base {by_base:?} vs definition {by_def:?}"));
        }
        let len = by_base.alphas().map_or(0, <[_]>::len);
        if len > space.generators().len() {
            return fail(format!("{space:?}: {len} invariants from fewer generators"));
        }
        let mut gens = space.generators().to_vec();
        gens.shuffle(rng);
        let base = space.try_base()?.clone();
        let repointed = if let Some(g) = gens.first() {
            space.repointed(&g.clone())?
        } else {
            space.clone()
        };
        space = PointedSpace::new(base, gens)?;
        for other in [&space, &repointed] {
            if alpha_invariants(other)? != by_base {
                return fail(format!("invariants changed under reordering/repointing: {other:?}"));
            }
        }
    }
    Ok((ctx.cfg.samples as u128, None))
}

fn unary_codomain(spec: RingSpec) -> Vec<Point> {
    all_points(spec, 1)
}

fn check_contractive_iff_polynomial(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    let Some(domain) = ctx.points.as_ref().filter(|p| p.len() <= 81) else {
        return Ok((0, None));
    };
    let codomain = unary_codomain(ctx.spec);
    // reduced polynomials in n variables: |A|^(p^n) functions
    let poly_count = (codomain.len() as u128)
        .checked_pow(ctx.spec.p.pow(ctx.n as u32))
        .unwrap_or(u128::MAX);
    let to_table = |t: &[usize]| {
        MapTable::new(
            domain
                .iter()
                .cloned()
                .zip(t.iter().map(|&j| codomain[j].clone()))
                .collect(),
        )
    };
    let mut checked = 0u128;
    if poly_count <= ctx.cfg.limits.tables {
        let (count, kept) = contractive_tables(domain, &codomain, ctx.cfg.samples, &ctx.cfg.cancel)?;
        if count != poly_count {
            return fail(format!("{count} contractive maps vs {poly_count} polynomial functions"));
        }
        for t in kept {
            let table = to_table(&t)?;
            let g = interp_multi(&table)?.remove(0);
            if domain
                .iter()
                .any(|x| g.eval(x).ok().as_ref() != Some(&table.get(x).unwrap().coords()[0]))
            {
                return fail(format!("interpolant {g} misses table {t:?}"));
            }
            checked += 1;
        }
        checked += count;
    }
    for _ in 0..ctx.cfg.samples {
        let f = random::refmap(&PointedSpace::full(ctx.spec, ctx.n), 1, rng)?;
        let table = f.to_table(domain)?;
        let g = interp_multi(&table)?.remove(0);
        if domain
            .iter()
            .any(|x| g.eval(x).ok().as_ref() != Some(&table.get(x).unwrap().coords()[0]))
        {
            return fail(format!("interpolant {g} of {f:?} misses"));
        }
        let p = random::polynomial(ctx.spec, ctx.n, rng);
        let ptable = MapTable::from_fn(domain, |x| Point::new(ctx.spec, vec![p.eval(x)?]))?;
        if !is_contractive_table(&ptable, domain)? {
            return fail(format!("polynomial {p} is not contractive"));
        }
        if interp_multi(&ptable)?.remove(0) != p {
            return fail(format!("reduced form of {p} not recovered"));
        }
        checked += 2;
    }
    Ok((checked, None))
}

fn preserves_binary_combinations(table: &MapTable, domain: &[Point]) -> bool {
    let omega = domain[0].omega();
    let scalars: Vec<BoolElem> = BoolElem::all(omega).collect();
    domain.iter().all(|x| {
        domain.iter().all(|y| {
            scalars.iter().all(|&a| {
                let r = x.masked(a).add(&y.masked(!a));
                let (fx, fy) = (table.get(x).unwrap(), table.get(y).unwrap());
                table.get(&r) == Some(&fx.masked(a).add(&fy.masked(!a)))
            })
        })
    })
}

fn check_convex_iff_contractive(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    let Some(domain) = ctx.points.as_ref().filter(|p| p.len() <= 81) else {
        return Ok((0, None));
    };
    let codomain = unary_codomain(ctx.spec);
    for k in 0..ctx.cfg.samples * 2 {
        let table = if k % 2 == 0 {
            let picks: Vec<Point> = (0..domain.len())
                .map(|_| codomain.choose(rng).unwrap().clone())
                .collect();
            MapTable::new(domain.iter().cloned().zip(picks).collect())?
        } else {
            random::refmap(&PointedSpace::full(ctx.spec, ctx.n), 1, rng)?.to_table(domain)?
        };
        let contractive = is_contractive_table(&table, domain)?;
        if contractive != preserves_binary_combinations(&table, domain) {
            return fail(format!(
                "contractive={contractive} disagrees with convexity on {table:?}"
            ));
        }
    }
    Ok((ctx.cfg.samples as u128 * 2, None))
}

fn check_zero_sets(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    if ctx.small_universe().is_none() {
        return Ok((0, None));
    }
    for _ in 0..ctx.cfg.samples {
        let domain = if rng.gen_bool(0.5) {
            PointedSpace::full(ctx.spec, ctx.n)
        } else {
            random::space(ctx.spec, ctx.n, 4, rng)
        };
        let m = rng.gen_range(1..=2);
        let f = random::refmap(&domain, m, rng)?;
        let members = ctx.members(&domain)?;
        let target = if rng.gen_bool(0.7) {
            f.evaluate(members.choose(rng).unwrap())?
        } else {
            random::point(ctx.spec, m, rng)
        };
        let zs = zero_set(&f, &target)?;
        let mut expected = vec![];
        for x in &members {
            if f.evaluate(x)? == target {
                expected.push(x.clone());
            }
        }
        if ctx.members(&zs)? != expected {
            return fail(format!("zero set of {f:?} at {target:?}"));
        }
    }
    Ok((ctx.cfg.samples as u128, None))
}

fn check_kernels(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    if ctx.small_universe().is_none() {
        return Ok((0, None));
    }
    let full = PointedSpace::full(ctx.spec, ctx.n);
    let zero_b = Point::from_bool(BoolElem::zero(ctx.spec.omega));
    for _ in 0..ctx.cfg.samples {
        let y = random::space(ctx.spec, ctx.n, 3, rng);
        let z = random::space(ctx.spec, ctx.n, 3, rng);
        let (my, mz) = (ctx.members(&y)?, ctx.members(&z)?);
        let k = kernel_map(&y, &full)?;
        if ctx.members(&zero_set(&k, &zero_b)?)? != my {
            return fail(format!("kernel map of {y:?}"));
        }
        let both: Vec<Point> = my.iter().filter(|p| mz.contains(p)).cloned().collect();
        if ctx.members(&intersect_subspaces(&y, &z, &full)?)? != both {
            return fail(format!("intersection of {y:?} and {z:?}"));
        }
        let f = random::refmap(&full, ctx.n, rng)?;
        let pre = preimage_subspace(&f, &full, &z)?;
        let expected = ctx.filter(|x| Ok(mz.contains(&f.evaluate(x)?)))?;
        if ctx.members(&pre)? != expected {
            return fail(format!("preimage of {z:?} under {f:?}"));
        }
        let image_members: BTreeSet<Point> = my.iter().map(|x| f.evaluate(x)).collect::<Result<_>>()?;
        let hull_images = y
            .hull_points()
            .iter()
            .map(|x| f.evaluate(x))
            .collect::<Result<Vec<_>>>()?;
        let image_space = PointedSpace::new(hull_images[0].clone(), hull_images[1..].to_vec())?;
        let closed: BTreeSet<Point> = ctx.members(&image_space)?.into_iter().collect();
        if closed != image_members {
            return fail(format!("image of {y:?} under {f:?} is not conv of generator images"));
        }
    }
    Ok((ctx.cfg.samples as u128, None))
}

fn check_round_trip(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    if ctx.small_universe().is_none() {
        return Ok((0, None));
    }
    for k in 0..ctx.cfg.samples {
        let u = if k == 0 {
            PointedSpace::empty(ctx.spec, ctx.n)
        } else {
            random::space(ctx.spec, ctx.n, 3, rng)
        };
        let g = polys_from_space(&u)?;
        let back = space_from_polys(std::slice::from_ref(&g.poly), ctx.spec, ctx.n)?;
        let locus = ctx.filter(|x| Ok(g.poly.eval(x)?.is_zero()))?;
        let mu = ctx.members(&u)?;
        if ctx.members(&back)? != mu || locus != mu {
            return fail(format!("round trip of {u:?} through {}", g.poly));
        }
    }
    Ok((ctx.cfg.samples as u128, None))
}

fn check_polynomial_convexity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    let samples = ctx.cfg.samples * 5;
    for _ in 0..samples {
        let g = random::polynomial(ctx.spec, ctx.n, rng);
        let k = rng.gen_range(1..=4);
        let xs: Vec<Point> = (0..k).map(|_| random::point(ctx.spec, ctx.n, rng)).collect();
        let coeffs = random::partition(ctx.spec.omega, k, rng);
        let lhs = g.eval(&convex_combination(&xs, &coeffs)?)?;
        let rhs = xs
            .iter()
            .zip(coeffs.parts())
            .try_fold(RingElem::zero(ctx.spec), |acc, (x, a)| {
                Ok::<_, Error>(acc.add(&g.eval(x)?.mul(&embed(ctx.spec, *a))))
            })?;
        if lhs != rhs {
            return fail(format!("{g} on xs={xs:?} a={coeffs:?}"));
        }
    }
    Ok((samples as u128, None))
}

fn check_isometries(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    if ctx.small_universe().is_none() {
        return Ok((0, None));
    }
    let mut checked = 0u128;
    for _ in 0..ctx.cfg.samples {
        let x = random::space(ctx.spec, ctx.n, 3, rng);
        let shift = random::point(ctx.spec, ctx.n, rng);
        let moved: Vec<Point> = x.hull_points().iter().map(|p| p.add(&shift)).collect();
        let y = PointedSpace::new(moved[0].clone(), moved[1..].to_vec())?;
        let c = classify_isometric(&x, &y)?;
        let (mx, my) = (ctx.members(&x)?, ctx.members(&y)?);
        let Some(iso) = c.isometry.filter(|_| c.isometric) else {
            return fail(format!("translate of {x:?} not classified isometric"));
        };
        if !is_isometric_bijection(&mx, &my, |p| iso.forward.evaluate(p))
            || !is_isometric_bijection(&my, &mx, |p| iso.inverse.evaluate(p))
        {
            return fail(format!("constructed isometry {x:?} → {y:?} fails"));
        }
        let z = random::space(ctx.spec, ctx.n, 2, rng);
        let mz = ctx.members(&z)?;
        if mx.len() <= 7 && mz.len() <= 7 {
            let verdict = classify_isometric(&x, &z)?.isometric;
            if verdict != find_isometry(&mx, &mz).is_some() {
                return fail(format!("classification of {x:?} vs {z:?} disagrees with search"));
            }
            checked += 1;
        }
        checked += 1;
    }
    Ok((checked, None))
}

fn check_e_polynomial(ctx: &Ctx, _rng: &mut ChaCha8Rng) -> Tally {
    let table = MapTable::from_fn(&unary_codomain(ctx.spec), |x| {
        Point::new(ctx.spec, vec![embed(ctx.spec, idempotent_of(&x.coords()[0]))])
    })?;
    let g = interp_unary(&table)?;
    if g != e_polynomial(ctx.spec) {
        return fail(format!("idempotent table interpolates to {g}"));
    }
    Ok((1, None))
}

fn check_boolean_alpha(ctx: &Ctx, _rng: &mut ChaCha8Rng) -> Tally {
    let omega = ctx.spec.omega;
    if omega > ctx.cfg.limits.omega.min(6) {
        return Ok((0, None));
    }
    let all: Vec<BoolElem> = BoolElem::all(omega).collect();
    for &x in &all {
        for &y in &all {
            for &z in &all {
                if !((x + y) * (y + z) * (x + z)).is_zero() {
                    return fail(format!("x={x:?} y={y:?} z={z:?}"));
                }
            }
        }
    }
    let b = PointedSpace::boolean(omega);
    let expected = crate::span::InvariantSeq::Alphas(vec![BoolElem::one(omega)]);
    if alpha_invariants(&b)? != expected || alpha_invariants_by_definition(&b)? != expected {
        return fail(format!("α(B) ≠ [1] for |Ω| = {omega}"));
    }
    Ok(((all.len() as u128).pow(3), None))
}

fn check_complements(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Tally {
    if ctx.small_universe().is_none() {
        return Ok((0, None));
    }
    for _ in 0..ctx.cfg.samples {
        let x = random::space(ctx.spec, ctx.n, 4, rng);
        let rf = orthogonalize(&x)?;
        let keep: Vec<Point> = rf.elements().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let u = PointedSpace::new(rf.base().clone(), keep)?;
        let c = orthogonal_complement(&u, &x)?;
        let base = rf.base();
        let mu = ctx.members(&u)?;
        for m in ctx.members(&c)? {
            if mu.iter().any(|v| !orthogonal_at(base, &m, v)) {
                return fail(format!("{m:?} in complement of {u:?} is not orthogonal to U"));
            }
        }
        let mut joint = u.generators().to_vec();
        joint.extend(c.generators().iter().cloned());
        let joint = PointedSpace::new(base.clone(), joint)?;
        let mx = ctx.members(&x)?;
        if ctx.members(&joint)? != mx {
            return fail(format!("conv(U ∪ U^⊥) ≠ X for U={u:?} X={x:?}"));
        }
        let trivial = ctx.members(&c)?.len() == 1;
        if trivial && mu != mx {
            return fail(format!("U^⊥ = {{0}} but U ≠ X for U={u:?} X={x:?}"));
        }
    }
    Ok((ctx.cfg.samples as u128, None))
}

const CHECKS: &[(&str, CheckFn)] = &[
    ("metric axioms and equivalent triangle forms", check_metric_axioms),
    (
        "distance and uniqueness of convex combinations",
        check_convex_combinations,
    ),
    ("closed-form coordinates vs coefficient search", check_coordinates),
    ("membership: coordinates vs convex closure", check_membership),
    (
        "orthogonalize yields a referential of the same space",
        check_orthogonalize,
    ),
    (
        "alpha via base = alpha via I_k; order/base-point independence",
        check_alphas,
    ),
    ("contractive iff polynomial", check_contractive_iff_polynomial),
    (
        "contractive iff preserves convex combinations",
        check_convex_iff_contractive,
    ),
    ("zero_set vs filtered enumeration", check_zero_sets),
    ("kernel maps, intersections, preimages, images", check_kernels),
    ("variety round trip", check_round_trip),
    ("polynomials preserve convex combinations", check_polynomial_convexity),
    ("isometry construction and classification", check_isometries),
    ("idempotent table interpolates to X^(p-1)", check_e_polynomial),
    ("triangle product in B and alpha(B) = [1]", check_boolean_alpha),
    ("orthogonal complements and restricted cancellation", check_complements),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every check over `A^n`; checks are independent and run in parallel.
pub fn run_theorem_suite(spec: RingSpec, n: usize, cfg: &SuiteConfig) -> OracleReport {
    let points = enumerate_points(spec, n, cfg.limits.points.min(100_000)).ok();
    let ctx = Ctx { spec, n, cfg, points };
    let checks = CHECKS
        .par_iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let mut rng = random::rng(
                cfg.seed ^ ((i as u64 + 1) << 32) ^ spec.p as u64 ^ (spec.omega as u64) << 8 ^ (n as u64) << 16,
            );
            let (universe, passed, counterexample) = match f(&ctx, &mut rng) {
                Ok((u, None)) => (u, true, None),
                Ok((u, Some(c))) => (u, false, Some(c)),
                Err(e) => (0, false, Some(format!("error: {e}"))),
            };
            CheckOutcome {
                name: name.to_string(),
                ring: spec,
                n,
                universe,
                passed,
                counterexample,
            }
        })
        .collect();
    OracleReport { checks }
}

/// The default envelope: `p ∈ {2,3,5}`, `|Ω| ≤ 2`, `n ≤ 2`.
pub fn default_envelope() -> Vec<(RingSpec, usize)> {
    let mut out = vec![];
    for p in [2, 3, 5] {
        for omega in 1..=2 {
            for n in 1..=2 {
                out.push((RingSpec::new(p, omega).expect("valid"), n));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u32, omega: usize) -> RingSpec {
        RingSpec::new(p, omega).unwrap()
    }

    fn p1(spec: RingSpec, c: &[u32]) -> Point {
        Point::from_rows(spec, &[c.to_vec()]).unwrap()
    }

    #[test]
    fn enumerate_points_examples() {
        let z = s(3, 1);
        assert_eq!(
            enumerate_points(z, 1, 100).unwrap(),
            vec![p1(z, &[0]), p1(z, &[1]), p1(z, &[2])]
        );
        assert_eq!(enumerate_points(s(3, 2), 1, 100).unwrap().len(), 9);
        assert_eq!(enumerate_points(s(3, 2), 2, 100).unwrap().len(), 81);
        assert!(matches!(
            enumerate_points(s(3, 2), 2, 80),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn enumerate_members_examples() {
        let g = s(3, 2);
        let line = PointedSpace::new(Point::zero(g, 1), vec![p1(g, &[1, 0])]).unwrap();
        assert_eq!(
            enumerate_members(&line, 100).unwrap(),
            vec![p1(g, &[0, 0]), p1(g, &[1, 0])]
        );
        assert_eq!(enumerate_members(&PointedSpace::full(g, 1), 100).unwrap().len(), 9);
        assert_eq!(
            enumerate_members(&PointedSpace::point(g, 1), 100).unwrap(),
            vec![Point::zero(g, 1)]
        );
        assert!(enumerate_members(&PointedSpace::empty(g, 1), 100).unwrap().is_empty());
    }

    #[test]
    fn canonical_generators_span_the_ring() {
        let g = s(3, 2);
        let space = PointedSpace::full(g, 1);
        assert_eq!(closure_members(&space, 100).unwrap(), all_points(g, 1));
    }

    #[test]
    fn contractive_counts() {
        let z = s(3, 1);
        let pts = all_points(z, 1);
        let (count, _) = contractive_tables(&pts, &pts, 0, &CancelToken::new()).unwrap();
        assert_eq!(count, 27);
        let g = s(3, 2);
        let pts = all_points(g, 1);
        let (count, _) = contractive_tables(&pts, &pts, 0, &CancelToken::new()).unwrap();
        assert_eq!(count, 729);
    }

    #[test]
    fn cancelled_enumeration_stops() {
        let token = CancelToken::new();
        token.cancel();
        let pts = all_points(s(3, 2), 1);
        assert_eq!(contractive_tables(&pts, &pts, 0, &token), Err(Error::Cancelled));
    }

    #[test]
    fn isometry_search() {
        let z = s(3, 1);
        let g = s(3, 2);
        let a = vec![p1(z, &[0]), p1(z, &[1])];
        let b = vec![p1(z, &[2]), p1(z, &[0])];
        assert!(find_isometry(&a, &b).is_some());
        let c = vec![p1(g, &[0, 0]), p1(g, &[1, 0])];
        let d = vec![p1(g, &[0, 0]), p1(g, &[1, 1])];
        assert!(find_isometry(&c, &d).is_none());
    }

    #[test]
    fn suite_passes_on_small_rings() {
        let cfg = SuiteConfig {
            samples: 5,
            ..SuiteConfig::default()
        };
        for (spec, n) in [(s(2, 1), 1), (s(3, 1), 1), (s(3, 2), 1), (s(2, 2), 2)] {
            let report = run_theorem_suite(spec, n, &cfg);
            let failures: Vec<_> = report.failures().collect();
            assert!(failures.is_empty(), "{failures:#?}");
            assert_eq!(report.checks.len(), CHECKS.len());
        }
    }
}
