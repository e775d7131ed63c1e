//! Batch front end: one JSON job file in, one JSON report out.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cfg_ring::RingSpec;
use crate::contractive_maps::{MapTable, RefMap};
use crate::metric_space::{Point, PointedSpace};
use crate::oracle::{default_envelope, enumerate_members, run_theorem_suite, Limits, OracleReport, SuiteConfig};
use crate::polynomials::{interp_multi, space_from_polys, Polynomial};
use crate::serial::{encode, Wire};
use crate::span::{alpha_invariants, build_base, classify_isometric, orthogonalize};

#[derive(Debug, Parser)]
#[command(name = "boolmetric", version, about = "Boolean metric spaces over finite p-rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Job file (JSON).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Indented output.
    #[arg(long)]
    pub pretty: bool,
    /// Enumeration cap on the number of ambient points.
    #[arg(long, default_value_t = 1_000_000)]
    pub limit: u128,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of one space, or the isometry verdict for two.
    Classify(Common),
    /// Common zero set of the job's polynomials.
    Solve(Common),
    /// Polynomials reproducing each table.
    Interpolate(Common),
    /// A referential for each space.
    Orthogonalize(Common),
    /// A base (decreasing norms) for each space.
    Base(Common),
    /// Run the oracle suite; exits 1 on any failure.
    Verify(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Classify(c)
            | Command::Solve(c)
            | Command::Interpolate(c)
            | Command::Orthogonalize(c)
            | Command::Base(c)
            | Command::Verify(c) => c,
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawJob {
    ring: Value,
    #[serde(default)]
    objects: BTreeMap<String, Value>,
    #[serde(default)]
    params: Value,
}

#[derive(Debug, Clone)]
pub enum Object {
    Point(Point),
    Space(PointedSpace),
    Polynomial(Polynomial),
    Polynomials(Vec<Polynomial>),
    Table(MapTable),
    RefMap(RefMap),
}

#[derive(Debug, Clone)]
pub struct JobFile {
    pub ring: RingSpec,
    pub objects: BTreeMap<String, Object>,
    pub params: Value,
}

/// 1-based line of the first occurrence of `needle`, for error messages.
fn locate(text: &str, needle: &str) -> Option<usize> {
    let at = text.find(needle)?;
    Some(text[..at].matches('\n').count() + 1)
}

fn decode_object(v: &Value, spec: RingSpec) -> anyhow::Result<Object> {
    let obj = v
        .as_object()
        .filter(|o| o.len() == 1)
        .ok_or_else(|| anyhow!("an object must have exactly one kind key"))?;
    let (kind, body) = obj.iter().next().expect("one entry");
    Ok(match kind.as_str() {
        "point" => Object::Point(Point::from_wire(body, spec)?),
        "space" => Object::Space(PointedSpace::from_wire(body, spec)?),
        "polynomial" => Object::Polynomial(Polynomial::from_wire(body, spec)?),
        "polynomials" => Object::Polynomials(
            body.as_array()
                .ok_or_else(|| anyhow!("\"polynomials\" must be a list"))?
                .iter()
                .map(|p| Polynomial::from_wire(p, spec))
                .collect::<crate::error::Result<_>>()?,
        ),
        "table" => {
            let pairs = body
                .as_array()
                .ok_or_else(|| anyhow!("\"table\" must be a list of [point, image] pairs"))?
                .iter()
                .map(|pair| match pair.as_array().map(Vec::as_slice) {
                    Some([x, y]) => Ok((Point::from_wire(x, spec)?, Point::from_wire(y, spec)?)),
                    _ => Err(anyhow!("table entries must be [point, image] pairs")),
                })
                .collect::<anyhow::Result<_>>()?;
            Object::Table(MapTable::new(pairs)?)
        }
        "refmap" => Object::RefMap(RefMap::from_wire(body, spec)?),
        other => bail!("unknown object kind \"{other}\""),
    })
}

/// Parses a job file; errors carry a line (and column for syntax errors).
pub fn parse_job(text: &str) -> anyhow::Result<JobFile> {
    let raw: RawJob = serde_json::from_str(text)
        .map_err(|e| anyhow!("parse error at line {}, column {}: {e}", e.line(), e.column()))?;
    let ring = RingSpec::from_wire(&raw.ring, RingSpec::new(2, 1)?)
        .with_context(|| format!("in \"ring\" (line {})", locate(text, "\"ring\"").unwrap_or(1)))?;
    let mut objects = BTreeMap::new();
    for (name, v) in &raw.objects {
        let key = format!("\"{name}\"");
        let obj = decode_object(v, ring)
            .with_context(|| format!("in object {key} (line {})", locate(text, &key).unwrap_or(1)))?;
        objects.insert(name.clone(), obj);
    }
    Ok(JobFile {
        ring,
        objects,
        params: raw.params,
    })
}

impl JobFile {
    /// Named objects selected by `params[key]` (a list of names), or every
    /// object accepted by `pick`.
    fn select<'a, T>(&'a self, key: &str, pick: impl Fn(&'a Object) -> Option<T>) -> anyhow::Result<Vec<(String, T)>> {
        match self.params.get(key).and_then(Value::as_array) {
            Some(names) => names
                .iter()
                .map(|n| {
                    let n = n
                        .as_str()
                        .ok_or_else(|| anyhow!("params.{key} must list object names"))?;
                    let obj = self.objects.get(n).ok_or_else(|| anyhow!("no object named \"{n}\""))?;
                    let t = pick(obj).ok_or_else(|| anyhow!("object \"{n}\" has the wrong kind"))?;
                    Ok((n.to_string(), t))
                })
                .collect(),
            None => Ok(self
                .objects
                .iter()
                .filter_map(|(n, o)| pick(o).map(|t| (n.clone(), t)))
                .collect()),
        }
    }

    fn spaces(&self) -> anyhow::Result<Vec<(String, &PointedSpace)>> {
        let out = self.select("spaces", |o| match o {
            Object::Space(s) => Some(s),
            _ => None,
        })?;
        if out.is_empty() {
            bail!("job has no spaces");
        }
        Ok(out)
    }
}

pub fn cmd_classify(job: &JobFile) -> anyhow::Result<Value> {
    let spaces = job.spaces()?;
    let mut invariants = serde_json::Map::new();
    for (name, s) in &spaces {
        invariants.insert(name.clone(), encode(&alpha_invariants(s)?));
    }
    let mut report = json!({ "invariants": invariants });
    match spaces.as_slice() {
        [_] => {}
        [(_, x), (_, y)] => {
            let c = classify_isometric(x, y)?;
            report["isometric"] = json!(c.isometric);
            if let Some(iso) = c.isometry {
                report["mapping"] = json!(iso
                    .base_pairs()
                    .iter()
                    .map(|(a, b)| json!([encode(a), encode(b)]))
                    .collect::<Vec<_>>());
            }
        }
        _ => bail!("classify takes one or two spaces (select them with params.spaces)"),
    }
    Ok(report)
}

fn member_list(space: &PointedSpace, limit: u128) -> anyhow::Result<Option<Value>> {
    match enumerate_members(space, limit) {
        Ok(m) => Ok(Some(json!(m.iter().map(encode).collect::<Vec<_>>()))),
        Err(crate::error::Error::LimitExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_solve(job: &JobFile, limit: u128) -> anyhow::Result<Value> {
    let polys: Vec<Polynomial> = job
        .select("polynomials", |o| match o {
            Object::Polynomial(p) => Some(vec![p.clone()]),
            Object::Polynomials(ps) => Some(ps.clone()),
            _ => None,
        })?
        .into_iter()
        .flat_map(|(_, ps)| ps)
        .collect();
    let n = match job.params.get("n").and_then(Value::as_u64) {
        Some(n) => n as usize,
        None => polys
            .first()
            .map(Polynomial::n_vars)
            .ok_or_else(|| anyhow!("job has no polynomials"))?,
    };
    let variety = space_from_polys(&polys, job.ring, n)?;
    let mut report = json!({
        "polynomials": polys.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "variety": encode(&variety),
    });
    if let Some(m) = member_list(&variety, limit)? {
        report["members"] = m;
    }
    Ok(report)
}

pub fn cmd_interpolate(job: &JobFile) -> anyhow::Result<Value> {
    let tables = job.select("tables", |o| match o {
        Object::Table(t) => Some(t),
        _ => None,
    })?;
    if tables.is_empty() {
        bail!("job has no tables");
    }
    let mut out = serde_json::Map::new();
    for (name, t) in tables {
        let polys = interp_multi(t).with_context(|| format!("table \"{name}\""))?;
        out.insert(
            name,
            json!({
                "polynomials": polys.iter().map(encode).collect::<Vec<_>>(),
                "text": polys.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn referential_report(base: Option<&Point>, elements: &[Point], norms: &[crate::boolean_ring::BoolElem]) -> Value {
    json!({
        "base": base.map(encode),
        "elements": elements.iter().map(encode).collect::<Vec<_>>(),
        "norms": norms.iter().map(encode).collect::<Vec<_>>(),
    })
}

pub fn cmd_orthogonalize(job: &JobFile) -> anyhow::Result<Value> {
    let mut out = serde_json::Map::new();
    for (name, s) in job.spaces()? {
        let v = if s.is_empty() {
            json!({"empty": true})
        } else {
            let rf = orthogonalize(s)?;
            referential_report(Some(rf.base()), rf.elements(), &rf.norms())
        };
        out.insert(name, v);
    }
    Ok(Value::Object(out))
}

pub fn cmd_base(job: &JobFile) -> anyhow::Result<Value> {
    let mut out = serde_json::Map::new();
    for (name, s) in job.spaces()? {
        let v = if s.is_empty() {
            json!({"empty": true})
        } else {
            let b = build_base(s)?;
            referential_report(s.base(), b.elements(), &b.norms())
        };
        out.insert(name, v);
    }
    Ok(Value::Object(out))
}

/// Runs the suite over `params.envelope` (list of `{"p","omega","n"}`),
/// or over the job's ring with `params.n` (default 1), or over the
/// default envelope when no job is given.
pub fn cmd_verify(job: Option<&JobFile>, common: &Common) -> anyhow::Result<OracleReport> {
    let targets: Vec<(RingSpec, usize)> = match job {
        None => default_envelope(),
        Some(job) => match job.params.get("envelope").and_then(Value::as_array) {
            Some(list) => list
                .iter()
                .map(|e| {
                    let spec = RingSpec::from_wire(e, job.ring).context("envelope entry")?;
                    let n = e.get("n").and_then(Value::as_u64).unwrap_or(1) as usize;
                    Ok((spec, n))
                })
                .collect::<anyhow::Result<_>>()?,
            None => vec![(
                job.ring,
                job.params.get("n").and_then(Value::as_u64).unwrap_or(1) as usize,
            )],
        },
    };
    let cfg = SuiteConfig {
        limits: Limits {
            points: common.limit,
            ..Limits::default()
        },
        seed: common.seed,
        ..SuiteConfig::default()
    };
    let mut report = OracleReport::default();
    for (spec, n) in targets {
        report.extend(run_theorem_suite(spec, n, &cfg));
    }
    Ok(report)
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    } else {
        serde_json::to_string(v).expect("JSON values serialize")
    }
}

fn load(common: &Common) -> anyhow::Result<Option<JobFile>> {
    let Some(path) = &common.input else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_job(&text)
        .map(Some)
        .with_context(|| format!("{}", path.display()))
}

/// Executes a parsed command line; returns the report text and exit code.
pub fn run(cli: &Cli) -> anyhow::Result<(String, i32)> {
    let common = cli.command.common();
    let job = load(common)?;
    let need_job = || {
        job.as_ref()
            .ok_or_else(|| anyhow!("--input is required for this command"))
    };
    let report = match &cli.command {
        Command::Classify(_) => cmd_classify(need_job()?)?,
        Command::Solve(c) => cmd_solve(need_job()?, c.limit)?,
        Command::Interpolate(_) => cmd_interpolate(need_job()?)?,
        Command::Orthogonalize(_) => cmd_orthogonalize(need_job()?)?,
        Command::Base(_) => cmd_base(need_job()?)?,
        Command::Verify(c) => {
            let r = cmd_verify(job.as_ref(), c)?;
            let code = if r.all_passed() { 0 } else { 1 };
            return Ok((render(&serde_json::to_value(&r)?, common.pretty), code));
        }
    };
    Ok((render(&report, common.pretty), 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str) -> JobFile {
        parse_job(text).unwrap()
    }

    #[test]
    fn classify_single_space() {
        let j =
            job(r#"{"ring":{"p":3,"omega":1},"objects":{"X":{"space":{"base":[[0]],"generators":[[[1]],[[2]]]}}}}"#);
        assert_eq!(cmd_classify(&j).unwrap(), json!({"invariants": {"X": [[1], [1]]}}));
    }

    #[test]
    fn classify_empty_vs_nonempty() {
        let j =
            job(r#"{"ring":{"p":3,"omega":1},"objects":{"E":{"space":{"empty":true}},"X":{"space":{"base":[[0]]}}}}"#);
        let r = cmd_classify(&j).unwrap();
        assert_eq!(r["isometric"], json!(false));
        assert!(r.get("mapping").is_none());
    }

    #[test]
    fn solve_examples() {
        let z3 = r#""ring":{"p":3,"omega":1}"#;
        let j = job(&format!(
            r#"{{{z3},"objects":{{"f":{{"polynomial":{{"n":1,"monomials":[{{"exp":[2],"coeff":[1]}},{{"exp":[1],"coeff":[2]}}]}}}}}}}}"#
        ));
        assert_eq!(cmd_solve(&j, 1000).unwrap()["members"], json!([[[0]], [[1]]]));
        let one = job(&format!(
            r#"{{{z3},"objects":{{"f":{{"polynomial":{{"n":1,"monomials":[{{"exp":[0],"coeff":[1]}}]}}}}}}}}"#
        ));
        let r = cmd_solve(&one, 1000).unwrap();
        assert_eq!(r["variety"]["empty"], json!(true));
        assert_eq!(r["members"], json!([]));
        let zero = job(r#"{"ring":{"p":3,"omega":2},"objects":{"f":{"polynomial":{"n":1,"monomials":[]}}}}"#);
        assert_eq!(cmd_solve(&zero, 1000).unwrap()["members"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn interpolate_example() {
        let j =
            job(r#"{"ring":{"p":3,"omega":1},"objects":{"t":{"table":[[[[0]],[[0]]],[[[1]],[[1]]],[[[2]],[[1]]]]}}}"#);
        let r = cmd_interpolate(&j).unwrap();
        assert_eq!(r["t"]["text"], json!(["X^2"]));
        assert_eq!(
            r["t"]["polynomials"],
            json!([{"n": 1, "monomials": [{"exp": [2], "coeff": [1]}]}])
        );
    }

    #[test]
    fn base_norms_example() {
        let j = job(
            r#"{"ring":{"p":3,"omega":2},"objects":{"X":{"space":{"base":[[0,0]],"generators":[[[1,1]],[[1,2]]]}}}}"#,
        );
        // first coordinates stay in {0, 1}: six members, not all nine
        let norms = cmd_base(&j).unwrap()["X"]["norms"].clone();
        assert_eq!(norms, json!([[1, 1], [0, 1]]));
        assert_eq!(cmd_classify(&j).unwrap()["invariants"]["X"], norms);
        let Object::Space(x) = &j.objects["X"] else {
            unreachable!()
        };
        assert_eq!(enumerate_members(x, 100).unwrap().len(), 6);
    }

    #[test]
    fn parse_errors_report_position() {
        let err = parse_job("{\n  \"ring\": {\"p\": 3,\n  \"omega\": }\n}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = format!(
            "{:#}",
            parse_job("{\"ring\":{\"p\":3,\"omega\":1},\n\"objects\":{\n\"X\":{\"point\":[[5]]}}}").unwrap_err()
        );
        assert!(err.contains("\"X\" (line 3)") && err.contains("out of range"), "{err}");
        let err = format!("{:#}", parse_job(r#"{"ring":{"p":4,"omega":1}}"#).unwrap_err());
        assert!(err.contains("invalid ring"), "{err}");
    }
}
