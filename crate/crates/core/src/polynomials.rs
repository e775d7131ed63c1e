//! Reduced multivariate polynomials over `A = GF(p)^Ω`, interpolation of
//! contractive maps, and conversion between varieties and CFG subspaces.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::boolean_ring::BoolElem;
use crate::cfg_ring::{all_elements, canonical_generators, embed, idempotent_of, unit_inverse, RingElem, RingSpec};
use crate::contractive_maps::{
    intersect_subspaces, is_contractive_table, kernel_map, orthogonal_sum, zero_set, ContractiveMap, MapTable, RefMap,
};
use crate::error::{dim_err, Error, Result};
use crate::metric_space::{Point, PointedSpace};
use crate::span::{orthogonal_complement, orthogonalize, Referential};

/// Exponent vector ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `x^p = x`: exponents `e ≥ p` fold to `((e − 1) mod (p − 1)) + 1`.
pub fn reduce_exponent(e: u64, p: u32) -> u32 {
    if e < p as u64 {
        e as u32
    } else {
        ((e - 1) % (p as u64 - 1) + 1) as u32
    }
}

/// A polynomial in canonical reduced form: every exponent below `p`,
/// no zero coefficients. Over `GF(p)^Ω` reduced forms and functions
/// `A^n → A` are in bijection, so data equality is function equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    spec: RingSpec,
    n_vars: usize,
    terms: BTreeMap<Monomial, RingElem>,
}

/// Unreduced input: arbitrary exponents and integer coefficient components.
#[derive(Debug, Clone)]
pub struct RawPolynomial {
    pub spec: RingSpec,
    pub n_vars: usize,
    pub terms: Vec<(Vec<u64>, Vec<i64>)>,
}

pub fn reduce(raw: &RawPolynomial) -> Result<Polynomial> {
    let mut out = Polynomial::zero(raw.spec, raw.n_vars);
    for (exp, coeff) in &raw.terms {
        if exp.len() != raw.n_vars {
            return Err(dim_err("exponent vector length", raw.n_vars, exp.len()));
        }
        let c = RingElem::from_ints(raw.spec, coeff)?;
        let exp = exp.iter().map(|&e| reduce_exponent(e, raw.spec.p)).collect();
        out.add_term(Monomial(exp), c);
    }
    Ok(out)
}

impl Polynomial {
    pub fn zero(spec: RingSpec, n_vars: usize) -> Self {
        Polynomial {
            spec,
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: RingSpec, n_vars: usize, c: RingElem) -> Self {
        let mut p = Self::zero(spec, n_vars);
        p.add_term(Monomial(vec![0; n_vars]), c);
        p
    }

    /// `X_i` (zero-based).
    pub fn var(spec: RingSpec, n_vars: usize, i: usize) -> Self {
        let mut exp = vec![0; n_vars];
        exp[i] = 1;
        let mut p = Self::zero(spec, n_vars);
        p.add_term(Monomial(exp), RingElem::one(spec));
        p
    }

    /// Validated construction from reduced exponents.
    pub fn from_terms(spec: RingSpec, n_vars: usize, terms: Vec<(Vec<u32>, RingElem)>) -> Result<Self> {
        let mut p = Self::zero(spec, n_vars);
        for (exp, c) in terms {
            if exp.len() != n_vars {
                return Err(dim_err("exponent vector length", n_vars, exp.len()));
            }
            if c.spec() != spec {
                return Err(dim_err("coefficient ring", spec, c.spec()));
            }
            let exp = exp.iter().map(|&e| reduce_exponent(e as u64, spec.p)).collect();
            p.add_term(Monomial(exp), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: RingElem) {
        let entry = self.terms.entry(m.clone()).or_insert_with(|| RingElem::zero(c.spec()));
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RingElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Already canonical; kept for symmetry with [`reduce`].
    pub fn reduce(&self) -> Polynomial {
        self.clone()
    }

    pub fn is_reduced(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| !c.is_zero() && m.0.iter().all(|&e| e < self.spec.p))
    }

    fn check_same(&self, other: &Polynomial) {
        assert_eq!(
            (self.spec, self.n_vars),
            (other.spec, other.n_vars),
            "polynomials over different rings"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_same(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&RingElem::constant(self.spec, -1)))
    }

    pub fn scale(&self, c: &RingElem) -> Polynomial {
        let mut out = Polynomial::zero(self.spec, self.n_vars);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_same(other);
        let mut out = Polynomial::zero(self.spec, self.n_vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let exp =
                    m1.0.iter()
                        .zip(&m2.0)
                        .map(|(&a, &b)| reduce_exponent(a as u64 + b as u64, self.spec.p))
                        .collect();
                out.add_term(Monomial(exp), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.spec, self.n_vars, RingElem::one(self.spec));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `a ∨ b = a + b − ab`, meaningful on idempotent-valued polynomials.
    pub fn join(&self, other: &Polynomial) -> Polynomial {
        self.add(other).sub(&self.mul(other))
    }

    pub fn eval(&self, x: &Point) -> Result<RingElem> {
        if x.spec() != self.spec {
            return Err(dim_err("ring", self.spec, x.spec()));
        }
        if x.dim() != self.n_vars {
            return Err(dim_err("number of variables", self.n_vars, x.dim()));
        }
        let mut acc = RingElem::zero(self.spec);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.coords().iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul(&xi.pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

fn coeff_text(c: &RingElem) -> String {
    let first = c.comps()[0];
    if c.comps().iter().all(|&x| x == first) {
        first.to_string()
    } else {
        format!("{:?}", c.comps())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let v = if self.n_vars == 1 {
                            "X".to_string()
                        } else {
                            format!("X{}", i + 1)
                        };
                        if e == 1 {
                            v
                        } else {
                            format!("{v}^{e}")
                        }
                    })
                    .collect();
            let ct = coeff_text(c);
            match (vars.is_empty(), ct.as_str()) {
                (true, _) => write!(f, "{ct}")?,
                (false, "1") => write!(f, "{}", vars.join("·"))?,
                (false, _) => write!(f, "{ct}·{}", vars.join("·"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `e(X) = X^(p−1)`.
pub fn e_polynomial(spec: RingSpec) -> Polynomial {
    Polynomial::var(spec, 1, 0).pow(spec.p - 1)
}

/// A list of polynomials as a map `A^n → A^m`.
#[derive(Debug, Clone)]
pub struct PolyMap {
    polys: Vec<Polynomial>,
    domain: PointedSpace,
}

impl PolyMap {
    pub fn new(polys: Vec<Polynomial>, spec: RingSpec, n: usize) -> Result<Self> {
        for p in &polys {
            if p.spec != spec || p.n_vars != n {
                return Err(dim_err("polynomial ring", (spec, n), (p.spec, p.n_vars)));
            }
        }
        Ok(PolyMap {
            polys,
            domain: PointedSpace::full(spec, n),
        })
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }
}

impl ContractiveMap for PolyMap {
    fn domain(&self) -> &PointedSpace {
        &self.domain
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        let coords = self.polys.iter().map(|p| p.eval(x)).collect::<Result<Vec<_>>>()?;
        Point::new(self.domain.spec(), coords)
    }
}

/// Every point of `A^n`, lexicographic.
pub fn all_points(spec: RingSpec, n: usize) -> Vec<Point> {
    let line: Vec<RingElem> = all_elements(spec).collect();
    let mut out = vec![Point::zero(spec, 0)];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|p| {
                line.iter().map(move |c| {
                    let mut coords = p.coords().to_vec();
                    coords.push(c.clone());
                    Point::new(spec, coords).expect("same ring")
                })
            })
            .collect();
    }
    out
}

fn check_total_contractive(table: &MapTable, spec: RingSpec, n: usize) -> Result<Vec<Point>> {
    let domain = all_points(spec, n);
    if !is_contractive_table(table, &domain)? {
        return Err(Error::NotContractive("table violates d(f(x),f(y)) ≤ d(x,y)".into()));
    }
    Ok(domain)
}

fn table_spec(table: &MapTable) -> Result<(RingSpec, usize, usize)> {
    let (x, y) = table
        .pairs()
        .first()
        .ok_or_else(|| Error::Totality("empty table".into()))?;
    if x.spec() != y.spec() {
        return Err(dim_err("codomain ring", x.spec(), y.spec()));
    }
    Ok((x.spec(), x.dim(), y.dim()))
}

/// One-variable interpolation through `g_i(X) = X Π_{j≠i} (X − x_j)` on the
/// referential of `A` spanned by the constant tuples.
pub fn interp_unary(table: &MapTable) -> Result<Polynomial> {
    let (spec, n, m) = table_spec(table)?;
    if n != 1 || m != 1 {
        return Err(dim_err("unary table shape", (1, 1), (n, m)));
    }
    check_total_contractive(table, spec, 1)?;
    let at = |x: &RingElem| -> Result<RingElem> {
        let p = Point::new(spec, vec![x.clone()])?;
        Ok(table.get(&p).expect("total table").coords()[0].clone())
    };
    let zero = RingElem::zero(spec);
    let c = at(&zero)?;
    let line = PointedSpace::new(
        Point::zero(spec, 1),
        canonical_generators(spec)
            .into_iter()
            .map(|g| Point::new(spec, vec![g]))
            .collect::<Result<_>>()?,
    )?;
    let xs: Vec<RingElem> = orthogonalize(&line)?
        .elements()
        .iter()
        .map(|p| p.coords()[0].clone())
        .collect();
    let x_var = Polynomial::var(spec, 1, 0);
    let mut out = Polynomial::constant(spec, 1, c.clone());
    for (i, xi) in xs.iter().enumerate() {
        let gi = xs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(x_var.clone(), |acc, (_, xj)| {
                acc.mul(&x_var.sub(&Polynomial::constant(spec, 1, xj.clone())))
            });
        let gi_at = gi.eval(&Point::new(spec, vec![xi.clone()])?)?;
        let support = idempotent_of(xi);
        let unit = gi_at.add(&embed(spec, !support));
        assert_eq!(unit.mul(&embed(spec, support)), gi_at, "g_i(x_i) ≠ a_i e(x_i)");
        let coeff = unit_inverse(&unit)?.mul(&at(xi)?.sub(&c));
        out = out.add(&gi.scale(&coeff));
    }
    Ok(out)
}

/// `|X|` and `d(X, v)` as polynomials in `n` variables.
fn distance_poly(spec: RingSpec, n: usize, v: &Point) -> Polynomial {
    let e = spec.p - 1;
    (0..n).fold(Polynomial::zero(spec, n), |acc, l| {
        let diff = Polynomial::var(spec, n, l).sub(&Polynomial::constant(spec, n, v.coords()[l].clone()));
        acc.join(&diff.pow(e))
    })
}

/// Interpolates a contractive `f : A^n → A^m` from its values at `0` and
/// on a referential of `(A^n, 0)`:
/// `G(X) = f(0) + Σ_i (f(x_i) − f(0)) |X| Π_{j≠i} d(X, x_j)`, per output component.
pub fn interp_map<F>(f: F, spec: RingSpec, n: usize) -> Result<Vec<Polynomial>>
where
    F: Fn(&Point) -> Result<Point>,
{
    let origin = Point::zero(spec, n);
    let c = f(&origin)?;
    if c.spec() != spec {
        return Err(dim_err("codomain ring", spec, c.spec()));
    }
    let rf: Referential = orthogonalize(&PointedSpace::full(spec, n))?;
    let norm = distance_poly(spec, n, &origin);
    let dists: Vec<Polynomial> = rf.elements().iter().map(|x| distance_poly(spec, n, x)).collect();
    let values = rf.elements().iter().map(&f).collect::<Result<Vec<_>>>()?;
    let bumps: Vec<Polynomial> = (0..rf.len())
        .map(|i| {
            dists
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(norm.clone(), |acc, (_, d)| acc.mul(d))
        })
        .collect();
    Ok((0..c.dim())
        .map(|k| {
            let ck = &c.coords()[k];
            bumps
                .iter()
                .zip(&values)
                .fold(Polynomial::constant(spec, n, ck.clone()), |acc, (g, v)| {
                    acc.add(&g.scale(&v.coords()[k].sub(ck)))
                })
        })
        .collect())
}

/// Interpolation of a total contractive table `A^n → A^m`.
pub fn interp_multi(table: &MapTable) -> Result<Vec<Polynomial>> {
    let (spec, n, _) = table_spec(table)?;
    check_total_contractive(table, spec, n)?;
    interp_map(
        |x| {
            table
                .get(x)
                .cloned()
                .ok_or_else(|| Error::Totality(format!("no image for {x:?}")))
        },
        spec,
        n,
    )
}

/// Common zero locus of `polys` in `A^n` as a pointed CFG-space.
pub fn space_from_polys(polys: &[Polynomial], spec: RingSpec, n: usize) -> Result<PointedSpace> {
    let ambient = PointedSpace::full(spec, n);
    let target = Point::zero(spec, 1);
    let mut acc: Option<PointedSpace> = None;
    for p in polys {
        let zs = zero_set(&PolyMap::new(vec![p.clone()], spec, n)?, &target)?;
        acc = Some(match acc {
            None => zs,
            Some(prev) => intersect_subspaces(&prev, &zs, &ambient)?,
        });
        if acc.as_ref().is_some_and(PointedSpace::is_empty) {
            break;
        }
    }
    Ok(acc.unwrap_or(ambient))
}

/// A single polynomial whose zero locus is the given subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningPolynomial {
    pub poly: Polynomial,
    /// Set when the subspace was EMPTY and the constant `1` was returned.
    pub empty_extension: bool,
}

/// `A^n → B(A) ↪ A` through the kernel map of `U`, interpolated.
pub fn polys_from_space(u: &PointedSpace) -> Result<DefiningPolynomial> {
    let (spec, n) = (u.spec(), u.dim());
    if u.is_empty() {
        return Ok(DefiningPolynomial {
            poly: Polynomial::constant(spec, n, RingElem::one(spec)),
            empty_extension: true,
        });
    }
    let k = kernel_map(u, &PointedSpace::full(spec, n))?;
    let f = |x: &Point| -> Result<Point> {
        let b: BoolElem = k.evaluate(x)?.to_bool();
        Point::new(spec, vec![embed(spec, b)])
    };
    let mut polys = interp_map(f, spec, n)?;
    Ok(DefiningPolynomial {
        poly: polys.remove(0),
        empty_extension: false,
    })
}

/// Extends a contractive map on a subspace `U ⊆ X` to all of `X` by the
/// orthogonal sum with the constant map on `U^⊥` (pointed at `U`'s base).
pub fn extend_to_ambient(f: &RefMap, ambient: &PointedSpace) -> Result<RefMap> {
    let u = f.referential().space();
    let x = ambient.repointed(f.referential().base())?;
    let comp = orthogonal_complement(u, &x)?;
    let rc = orthogonalize(&comp)?;
    let constant = RefMap::new(
        rc.clone(),
        f.base_image().clone(),
        vec![f.base_image().clone(); rc.len()],
    )?;
    orthogonal_sum(f, &constant, &x)
}
