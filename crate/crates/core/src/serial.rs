//! JSON wire formats. Ring elements carry no modulus on the wire, so
//! decoding takes the ring as context.

use serde_json::{json, Map, Value};

use crate::boolean_ring::BoolElem;
use crate::cfg_ring::{RingElem, RingSpec};
use crate::contractive_maps::RefMap;
use crate::error::{Error, Result};
use crate::metric_space::{Point, PointedSpace};
use crate::polynomials::Polynomial;
use crate::span::{InvariantSeq, Referential};

pub trait Wire: Sized {
    fn to_wire(&self) -> Value;
    fn from_wire(v: &Value, spec: RingSpec) -> Result<Self>;
}

fn bad(what: &str, v: &Value) -> Error {
    Error::Format(format!("expected {what}, found {v}"))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Format(format!("missing field \"{key}\"")))
}

fn uint(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(what, v))
}

impl Wire for BoolElem {
    fn to_wire(&self) -> Value {
        json!(self.to_vec())
    }

    fn from_wire(v: &Value, spec: RingSpec) -> Result<Self> {
        let bits = array(v, "0/1 array")?
            .iter()
            .map(|b| match b.as_u64() {
                Some(x @ (0 | 1)) => Ok(x as u8),
                _ => Err(bad("0 or 1", b)),
            })
            .collect::<Result<Vec<u8>>>()?;
        if bits.len() != spec.omega {
            return Err(crate::error::dim_err("Boolean element length", spec.omega, bits.len()));
        }
        BoolElem::from_slice(&bits)
    }
}

impl Wire for RingSpec {
    fn to_wire(&self) -> Value {
        json!({"p": self.p, "omega": self.omega})
    }

    fn from_wire(v: &Value, _: RingSpec) -> Result<Self> {
        let spec: RingSpec = serde_json::from_value(v.clone()).map_err(|e| Error::Format(format!("ring: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }
}

impl Wire for RingElem {
    fn to_wire(&self) -> Value {
        json!(self.comps())
    }

    fn from_wire(v: &Value, spec: RingSpec) -> Result<Self> {
        let comps = array(v, "residue array")?
            .iter()
            .map(|c| {
                let r = uint(c, "residue")?;
                u32::try_from(r)
                    .ok()
                    .filter(|r| *r < spec.p)
                    .ok_or_else(|| Error::Format(format!("residue {r} out of range for p = {}", spec.p)))
            })
            .collect::<Result<Vec<u32>>>()?;
        RingElem::new(spec, comps)
    }
}

impl Wire for Point {
    fn to_wire(&self) -> Value {
        Value::Array(self.coords().iter().map(Wire::to_wire).collect())
    }

    fn from_wire(v: &Value, spec: RingSpec) -> Result<Self> {
        let coords = array(v, "point")?
            .iter()
            .map(|c| RingElem::from_wire(c, spec))
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::Format("point with no coordinates".into()));
        }
        Point::new(spec, coords)
    }
}

/// `{"empty": true}` decodes with `n = 1` unless an `"n"` field is given.
/// A bare point list is pointed at its first point.
impl Wire for PointedSpace {
    fn to_wire(&self) -> Value {
        match self.base() {
            None => json!({"empty": true, "n": self.dim()}),
            Some(b) => json!({
                "base": b.to_wire(),
                "generators": self.generators().iter().map(Wire::to_wire).collect::<Vec<_>>(),
            }),
        }
    }

    fn from_wire(v: &Value, spec: RingSpec) -> Result<Self> {
        if let Some(list) = v.as_array() {
            let mut pts = list
                .iter()
                .map(|p| Point::from_wire(p, spec))
                .collect::<Result<Vec<_>>>()?;
            if pts.is_empty() {
                return Err(Error::Format("a point list needs at least one point".into()));
            }
            let base = pts.remove(0);
            return PointedSpace::new(base, pts);
        }
        let obj = v.as_object().ok_or_else(|| bad("space object", v))?;
        if obj.get("empty").and_then(Value::as_bool) == Some(true) {
            let n = obj.get("n").map(|n| uint(n, "dimension")).transpose()?.unwrap_or(1);
            return Ok(PointedSpace::empty(spec, n as usize));
        }
        let base = Point::from_wire(field(obj, "base")?, spec)?;
        let generators = match obj.get("generators") {
            None => vec![],
            Some(g) => array(g, "generator list")?
                .iter()
                .map(|p| Point::from_wire(p, spec))
                .collect::<Result<_>>()?,
        };
        PointedSpace::new(base, generators)
    }
}

/// The empty space encodes as `null`.
impl Wire for InvariantSeq {
    fn to_wire(&self) -> Value {
        match self.alphas() {
            None => Value::Null,
            Some(a) => Value::Array(a.iter().map(Wire::to_wire).collect()),
        }
    }

    fn from_wire(v: &Value, spec: RingSpec) -> Result<Self> {
        if v.is_null() {
            return Ok(InvariantSeq::Empty);
        }
        let alphas = array(v, "invariant list")?
            .iter()
            .map(|a| BoolElem::from_wire(a, spec))
            .collect::<Result<Vec<_>>>()?;
        if alphas.windows(2).any(|w| !w[1].leq(&w[0])) || alphas.last().is_some_and(BoolElem::is_zero) {
            return Err(Error::Format("invariants must be decreasing and nonzero".into()));
        }
        Ok(InvariantSeq::Alphas(alphas))
    }
}

impl Wire for Polynomial {
    fn to_wire(&self) -> Value {
        let monomials: Vec<Value> = self
            .terms()
            .map(|(m, c)| json!({"exp": m.exponents(), "coeff": c.to_wire()}))
            .collect();
        json!({"n": self.n_vars(), "monomials": monomials})
    }

    /// Exponents may be any non-negative integers; the result is reduced.
    fn from_wire(v: &Value, spec: RingSpec) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| bad("polynomial object", v))?;
        let n = uint(field(obj, "n")?, "variable count")? as usize;
        let mut acc = Polynomial::zero(spec, n);
        for m in array(field(obj, "monomials")?, "monomial list")? {
            let mo = m.as_object().ok_or_else(|| bad("monomial object", m))?;
            let exp = array(field(mo, "exp")?, "exponent list")?
                .iter()
                .map(|e| uint(e, "exponent"))
                .collect::<Result<Vec<u64>>>()?;
            if exp.len() != n {
                return Err(crate::error::dim_err("exponent vector", n, exp.len()));
            }
            let coeff = RingElem::from_wire(field(mo, "coeff")?, spec)?;
            let mut term = Polynomial::constant(spec, n, coeff);
            for (i, &e) in exp.iter().enumerate() {
                let e = crate::polynomials::reduce_exponent(e, spec.p);
                term = term.mul(&Polynomial::var(spec, n, i).pow(e));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

/// `pairs` lists referential elements with their images; `base` (the
/// referential's base point) defaults to the origin.
impl Wire for RefMap {
    fn to_wire(&self) -> Value {
        let rf = self.referential();
        let pairs: Vec<Value> = rf
            .elements()
            .iter()
            .zip(self.images())
            .map(|(x, y)| json!([x.to_wire(), y.to_wire()]))
            .collect();
        json!({"base": rf.base().to_wire(), "base_image": self.base_image().to_wire(), "pairs": pairs})
    }

    fn from_wire(v: &Value, spec: RingSpec) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| bad("map object", v))?;
        let base_image = Point::from_wire(field(obj, "base_image")?, spec)?;
        let mut xs = vec![];
        let mut ys = vec![];
        for pair in array(field(obj, "pairs")?, "pair list")? {
            match array(pair, "[point, image] pair")?.as_slice() {
                [x, y] => {
                    xs.push(Point::from_wire(x, spec)?);
                    ys.push(Point::from_wire(y, spec)?);
                }
                _ => return Err(bad("[point, image] pair", pair)),
            }
        }
        let base = match obj.get("base") {
            Some(b) => Point::from_wire(b, spec)?,
            None => {
                let n = xs
                    .first()
                    .map(Point::dim)
                    .ok_or_else(|| Error::Format("map without pairs needs an explicit \"base\"".into()))?;
                Point::zero(spec, n)
            }
        };
        RefMap::new(Referential::new(base, xs)?, base_image, ys)
    }
}

pub fn encode<T: Wire>(x: &T) -> Value {
    x.to_wire()
}

pub fn decode<T: Wire>(v: &Value, spec: RingSpec) -> Result<T> {
    T::from_wire(v, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::random;
    use proptest::prelude::*;

    fn g() -> RingSpec {
        RingSpec::new(3, 2).unwrap()
    }

    #[test]
    fn documented_shapes() {
        let spec = g();
        assert_eq!(encode(&BoolElem::from_slice(&[1, 0]).unwrap()), json!([1, 0]));
        assert_eq!(encode(&spec), json!({"p": 3, "omega": 2}));
        assert_eq!(encode(&RingElem::new(spec, vec![2, 0]).unwrap()), json!([2, 0]));
        let x = Point::from_rows(spec, &[vec![2, 0], vec![1, 1]]).unwrap();
        assert_eq!(encode(&x), json!([[2, 0], [1, 1]]));
        let sq = Polynomial::var(spec, 1, 0)
            .pow(2)
            .scale(&RingElem::new(spec, vec![2, 2]).unwrap());
        assert_eq!(
            encode(&sq),
            json!({"n": 1, "monomials": [{"exp": [2], "coeff": [2, 2]}]})
        );
        assert_eq!(encode(&InvariantSeq::Empty), Value::Null);
    }

    #[test]
    fn decoding_errors() {
        let spec = g();
        assert!(matches!(
            decode::<RingElem>(&json!([3, 0]), spec),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            decode::<BoolElem>(&json!([1]), spec),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            decode::<Point>(&json!([[0, 0], [1]]), spec),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            decode::<PointedSpace>(&json!({"generators": []}), spec),
            Err(Error::Format(_))
        ));
        let not_ortho = json!({"base_image": [[0, 0]], "pairs": [[[[1, 0]], [[1, 0]]], [[[1, 1]], [[1, 1]]]]});
        assert!(matches!(decode::<RefMap>(&not_ortho, spec), Err(Error::Partition(_))));
    }

    #[test]
    fn high_exponents_reduce() {
        let spec = RingSpec::new(3, 1).unwrap();
        let v = json!({"n": 1, "monomials": [{"exp": [3], "coeff": [1]}]});
        assert_eq!(decode::<Polynomial>(&v, spec).unwrap(), Polynomial::var(spec, 1, 0));
    }

    #[test]
    fn empty_space_keeps_dimension() {
        let e = PointedSpace::empty(g(), 2);
        assert_eq!(decode::<PointedSpace>(&encode(&e), g()).unwrap(), e);
        assert_eq!(decode::<PointedSpace>(&json!({"empty": true}), g()).unwrap().dim(), 1);
    }

    #[test]
    fn point_list_is_pointed_at_first() {
        let s = decode::<PointedSpace>(&json!([[[1, 0]], [[2, 2]]]), g()).unwrap();
        assert_eq!(s.base(), Some(&Point::from_rows(g(), &[vec![1, 0]]).unwrap()));
        assert_eq!(s.generators().len(), 1);
    }

    fn spec_strategy() -> impl Strategy<Value = (RingSpec, usize, u64)> {
        (
            prop::sample::select(vec![2u32, 3, 5]),
            1usize..=3,
            1usize..=2,
            any::<u64>(),
        )
            .prop_map(|(p, omega, n, seed)| (RingSpec::new(p, omega).unwrap(), n, seed))
    }

    fn round_trip<T: Wire + PartialEq + std::fmt::Debug>(x: &T, spec: RingSpec) {
        let text = serde_json::to_string(&encode(x)).unwrap();
        let back: T = decode(&serde_json::from_str(&text).unwrap(), spec).unwrap();
        assert_eq!(&back, x);
    }

    proptest! {
        #[test]
        fn every_object_round_trips((spec, n, seed) in spec_strategy()) {
            let mut rng = random::rng(seed);
            round_trip(&spec, spec);
            round_trip(&random::bool_elem(spec.omega, &mut rng), spec);
            round_trip(&random::ring_elem(spec, &mut rng), spec);
            round_trip(&random::point(spec, n, &mut rng), spec);
            let space = random::space(spec, n, 3, &mut rng);
            round_trip(&space, spec);
            round_trip(&PointedSpace::empty(spec, n), spec);
            round_trip(&crate::span::alpha_invariants(&space).unwrap(), spec);
            round_trip(&random::polynomial(spec, n, &mut rng), spec);
            round_trip(&random::refmap(&space, 2, &mut rng).unwrap(), spec);
        }
    }
}
