//! Canned scenarios and their reports.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filtration::{
    check_hull_coverage, phi_prime_gram_failure, phi_prime_minor_failure, GLWeight,
};
use crate::group::{
    classical_generators, inner_product, inner_product_formula_failure, invariant_monomials_of_degree,
    is_invariant, minimal_monomial_generators, row_degrees, ClassicalKind, GroupSpec, Invariance,
};
use crate::input::RingSpec;
use crate::polarize::{delta_power_level, p_root_level, Caps, LevelSearch, PolarizedAlgebra};
use crate::poly::{parse_poly, Poly};
use crate::ring::{cauchy_binet_failure, combinations, minor, u_invariant_minors, MinorSpec, RingCtx};
use crate::scalar::Field;

/// Where an expected outcome comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// Stated in the literature the scenario reproduces.
    Stated,
    /// Obtained by an independent computation.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub value: Value,
    pub origin: Origin,
}

fn stated(value: Value) -> Option<Expectation> {
    Some(Expectation { value, origin: Origin::Stated })
}

fn computed(value: Value) -> Option<Expectation> {
    Some(Expectation { value, origin: Origin::Computed })
}

/// Generators of the invariant algebra on `M_{n,n}`.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSource {
    /// Minimal invariant monomials of a diagonal group up to a degree.
    DiagonalSieve { max_deg: u32 },
    Classical(ClassicalKind),
    /// All `H`-invariant minors of the square matrix.
    InvariantMinors,
    Explicit(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    /// Count and row-degree profile of the minimal monomial generators on `M_{n,n}`.
    MinimalGenerators { max_deg: u32 },
    Invariant { poly: String },
    Member { poly: String },
    ProotLevel { poly: String, m_max: u32 },
    DeltaPower { poly: String, e_max: u32 },
    /// Invariant and polarized graded dimensions agree (diagonal groups).
    DimensionsAgree { degrees: Vec<u32> },
    /// Every scenario generator, and its classical family on `M_{n,d}`, is invariant.
    GeneratorsInvariant,
    CauchyBinet,
    InnerProductFormula(ClassicalKind),
    PhiPrimeMinors,
    PhiPrimeGram { r: usize },
    Coverage { pairs: Vec<(String, Vec<i64>)> },
    /// Left-initial minors of `M_{n,d}` that are `H`-invariant are members.
    InvariantLeftInitialMinors,
}

impl Query {
    pub fn name(&self) -> &'static str {
        match self {
            Query::MinimalGenerators { .. } => "minimal-generators",
            Query::Invariant { .. } => "invariant",
            Query::Member { .. } => "member",
            Query::ProotLevel { .. } => "proot",
            Query::DeltaPower { .. } => "deltapow",
            Query::DimensionsAgree { .. } => "dimensions",
            Query::GeneratorsInvariant => "generators-invariant",
            Query::CauchyBinet => "cauchy-binet",
            Query::InnerProductFormula(_) => "inner-product-formula",
            Query::PhiPrimeMinors => "phiprime-minors",
            Query::PhiPrimeGram { .. } => "phiprime-gram",
            Query::Coverage { .. } => "coverage",
            Query::InvariantLeftInitialMinors => "left-initial-minors",
        }
    }

    fn args(&self) -> Value {
        match self {
            Query::MinimalGenerators { max_deg } => json!({"maxDeg": max_deg}),
            Query::Invariant { poly } | Query::Member { poly } => json!({"poly": poly}),
            Query::ProotLevel { poly, m_max } => json!({"poly": poly, "mMax": m_max}),
            Query::DeltaPower { poly, e_max } => json!({"poly": poly, "eMax": e_max}),
            Query::DimensionsAgree { degrees } => json!({"degrees": degrees}),
            Query::InnerProductFormula(kind) => json!({"form": kind.to_string()}),
            Query::PhiPrimeGram { r } => json!({"r": r}),
            Query::Coverage { pairs } => json!({
                "pairs": pairs.iter().map(|(a, w)| json!({"a": a, "weight": w})).collect::<Vec<_>>()
            }),
            _ => json!({}),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuerySpec {
    pub query: Query,
    pub expect: Option<Expectation>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    pub ring: RingSpec,
    pub group: GroupSpec,
    pub generators: GeneratorSource,
    pub queries: Vec<QuerySpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
    /// No expectation attached; the outcome is reported only.
    Recorded,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryRecord {
    pub index: usize,
    pub query: String,
    pub args: Value,
    pub verdict: String,
    pub observed: Value,
    pub certificate: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expectation>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub indeterminate: usize,
    pub recorded: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub scenario: String,
    pub ring: String,
    pub group: Value,
    pub caps: Value,
    pub generators: Vec<String>,
    pub queries: Vec<QueryRecord>,
    pub annotations: Vec<String>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {} on {}\n", self.scenario, self.ring);
        out += &format!("generators: {}\n", self.generators.len());
        for q in &self.queries {
            let status = serde_json::to_value(q.status).unwrap();
            out += &format!(
                "[{}] {} {}: {}",
                status.as_str().unwrap_or("?"),
                q.index,
                q.query,
                q.verdict
            );
            if let Some(e) = &q.expected {
                out += &format!(" (expected {}, {:?})", e.value, e.origin);
            }
            if let Some(ms) = q.elapsed_ms {
                out += &format!(" {ms} ms");
            }
            out.push('\n');
        }
        for a in &self.annotations {
            out += &format!("note: {a}\n");
        }
        let s = &self.summary;
        out += &format!(
            "summary: {:?} ({} passed, {} failed, {} indeterminate, {} recorded)\n",
            s.status, s.passed, s.failed, s.indeterminate, s.recorded
        );
        out
    }
}

struct Outcome {
    verdict: String,
    observed: Value,
    certificate: Value,
}

fn poly_list<F: Field>(ps: &[Poly<F>]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn parse<F: Field>(s: &str) -> Result<Poly<F>> {
    Ok(parse_poly::<F>(s)?)
}

/// Generators on `M_{n,n}` for a scenario.
pub fn scenario_generators<F: Field>(s: &Scenario) -> Result<Vec<Poly<F>>> {
    source_generators(&s.generators, &s.group, s.ring.ctx.square())
}

/// The natural generator source for a group, if there is one.
pub fn default_source(group: &GroupSpec, max_deg: u32) -> Option<GeneratorSource> {
    match group {
        GroupSpec::Diagonal { .. } => Some(GeneratorSource::DiagonalSieve { max_deg }),
        GroupSpec::Rooted { kind, .. } => Some(GeneratorSource::Classical(*kind)),
        GroupSpec::BlockUnipotent { .. } => Some(GeneratorSource::InvariantMinors),
        GroupSpec::Generated { .. } => None,
    }
}

/// Materializes a generator source on the square ring `sq`.
pub fn source_generators<F: Field>(source: &GeneratorSource, group: &GroupSpec, sq: RingCtx) -> Result<Vec<Poly<F>>> {
    match source {
        GeneratorSource::DiagonalSieve { max_deg } => Ok(minimal_monomial_generators(group, sq, *max_deg)?
            .into_iter()
            .map(Poly::monomial)
            .collect()),
        GeneratorSource::Classical(kind) => classical_generators(*kind, sq),
        GeneratorSource::InvariantMinors => {
            let mut out = Vec::new();
            for r in 1..=sq.n {
                for rows in combinations(sq.n, r) {
                    for cols in combinations(sq.n, r) {
                        let m = minor::<F>(&MinorSpec::new(rows.clone(), cols), sq)?;
                        if is_invariant(&m, group, sq)?.is_invariant() {
                            out.push(m);
                        }
                    }
                }
            }
            Ok(out)
        }
        GeneratorSource::Explicit(list) => list.iter().map(|t| parse(t)).collect(),
    }
}

fn level_outcome<F: Field>(what: &str, res: LevelSearch<F>, f: Option<&Poly<F>>) -> Outcome {
    match &res {
        LevelSearch::Found { level, certificate } => {
            let mut cert = json!({"level": level, "member": certificate.to_json()});
            let mut ok = true;
            if let (Some(f), Some(rel)) = (f, res.relation()) {
                ok = rel.verify(f);
                cert["integralRelation"] = rel.to_json();
                cert["relationVerified"] = json!(ok);
            }
            Outcome {
                verdict: format!("{what} {level}"),
                observed: json!({"found": ok, "level": level}),
                certificate: cert,
            }
        }
        LevelSearch::NotFound { bound } => Outcome {
            verdict: format!("not found up to {bound}"),
            observed: json!({"found": false}),
            certificate: json!({"bound": bound}),
        },
    }
}

struct Runner<'a, F: Field> {
    s: &'a Scenario,
    ctx: RingCtx,
    gens: Vec<Poly<F>>,
    alg: PolarizedAlgebra<F>,
    caps: Caps,
    annotations: Vec<String>,
}

impl<'a, F: Field> Runner<'a, F> {
    fn run(&mut self, q: &Query) -> Result<Outcome> {
        let ctx = self.ctx;
        match q {
            Query::MinimalGenerators { max_deg } => {
                let gens = minimal_monomial_generators(&self.s.group, ctx.square(), *max_deg)?;
                let mut profiles: Vec<Vec<u32>> = gens.iter().map(|m| row_degrees(m, ctx.n)).collect();
                profiles.sort();
                profiles.dedup();
                Ok(Outcome {
                    verdict: format!("{} generators", gens.len()),
                    observed: json!({"count": gens.len(), "rowDegrees": profiles}),
                    certificate: json!({"generators": gens.iter().map(|m| m.to_string()).collect::<Vec<_>>()}),
                })
            }
            Query::Invariant { poly } => {
                let f = parse::<F>(poly)?;
                let inv = is_invariant(&f, &self.s.group, ctx)?;
                let certificate = match &inv {
                    Invariance::Invariant => json!({"verdict": "invariant"}),
                    Invariance::NotInvariant(w) => json!({"verdict": "not invariant", "witness": w.to_string()}),
                };
                Ok(Outcome {
                    verdict: if inv.is_invariant() { "invariant".into() } else { "not invariant".into() },
                    observed: json!(inv.is_invariant()),
                    certificate,
                })
            }
            Query::Member { poly } => {
                let f = parse::<F>(poly)?;
                let cert = self.alg.is_member(&f)?;
                let verdict = if !cert.verify(&f) {
                    "invalid certificate"
                } else if cert.is_member() {
                    "member"
                } else {
                    "nonmember"
                };
                Ok(Outcome { verdict: verdict.into(), observed: json!(verdict), certificate: cert.to_json() })
            }
            Query::ProotLevel { poly, m_max } => {
                let f = parse::<F>(poly)?;
                let res = p_root_level(&mut self.alg, &f, *m_max)?;
                Ok(level_outcome("level", res, Some(&f)))
            }
            Query::DeltaPower { poly, e_max } => {
                let f = parse::<F>(poly)?;
                let res = delta_power_level(&mut self.alg, &f, *e_max)?;
                Ok(level_outcome("exponent", res, None))
            }
            Query::DimensionsAgree { degrees } => {
                let mut rows = Vec::new();
                let mut all = true;
                for &deg in degrees {
                    let inv = invariant_monomials_of_degree(&self.s.group, ctx, deg)?.len();
                    let pol = self.alg.component_dim(deg)?;
                    all &= inv == pol;
                    rows.push(json!({"degree": deg, "invariants": inv, "polarized": pol}));
                }
                Ok(Outcome {
                    verdict: if all { "dimensions agree".into() } else { "dimensions differ".into() },
                    observed: json!(all),
                    certificate: json!({"dimensions": rows}),
                })
            }
            Query::GeneratorsInvariant => {
                let mut polys = self.gens.clone();
                if let GeneratorSource::Classical(kind) = self.s.generators {
                    polys.extend(classical_generators::<F>(kind, ctx)?);
                }
                let mut failures = Vec::new();
                for p in &polys {
                    if let Invariance::NotInvariant(w) = is_invariant(p, &self.s.group, ctx)? {
                        failures.push(json!({"poly": p.to_string(), "witness": w.to_string()}));
                    }
                }
                Ok(Outcome {
                    verdict: format!("{} of {} invariant", polys.len() - failures.len(), polys.len()),
                    observed: json!(failures.is_empty()),
                    certificate: json!({"checked": polys.len(), "failures": failures}),
                })
            }
            Query::CauchyBinet => {
                let mut fails = Vec::new();
                let mut checked = Vec::new();
                for n in 1..=3usize {
                    for d in n..=4usize {
                        let c = RingCtx::new(n, d)?;
                        checked.push(format!("{n}x{d}"));
                        if let Some(spec) = cauchy_binet_failure::<F>(c)? {
                            fails.push(format!("{n}x{d} {spec}"));
                        }
                    }
                }
                Ok(identity_outcome(checked, fails))
            }
            Query::InnerProductFormula(kind) => {
                let mut fails = Vec::new();
                let mut checked = Vec::new();
                for d in ctx.n..=ctx.d {
                    let c = RingCtx::new(ctx.n, d)?;
                    checked.push(format!("{}x{d}", ctx.n));
                    if let Some((i, j)) = inner_product_formula_failure::<F>(*kind, c)? {
                        fails.push(format!("{}x{d} <x_{i}, x_{j}>", ctx.n));
                    }
                }
                Ok(identity_outcome(checked, fails))
            }
            Query::PhiPrimeMinors => {
                let fails: Vec<String> = phi_prime_minor_failure::<F>(ctx)?.into_iter().map(|s| s.to_string()).collect();
                Ok(identity_outcome(vec![self.s.ring.to_string()], fails))
            }
            Query::PhiPrimeGram { r } => {
                let fails: Vec<String> = phi_prime_gram_failure::<F>(ctx, *r)?
                    .into_iter()
                    .map(|(i, j)| format!("{i:?} {j:?}"))
                    .collect();
                Ok(identity_outcome(vec![format!("{} r={r}", self.s.ring)], fails))
            }
            Query::Coverage { pairs } => {
                let mut u_gens = Vec::new();
                for (a, w) in pairs {
                    u_gens.push((coverage_seed::<F>(a, ctx)?, GLWeight(w.clone())));
                }
                let recs = check_hull_coverage(&u_gens, &self.gens, ctx, 8, self.caps)?;
                let all = recs.iter().all(|r| r.covered);
                if all {
                    self.annotations.push(
                        "every tested a (x) Y'(omega) lies in the image of the polarized algebra; \
                         when the pairs generate the U-invariants this gives equality of the \
                         polarized algebra with the invariant algebra"
                            .into(),
                    );
                }
                Ok(Outcome {
                    verdict: if all { "covered".into() } else { "not covered".into() },
                    observed: json!(all),
                    certificate: serde_json::to_value(&recs)?,
                })
            }
            Query::InvariantLeftInitialMinors => {
                let mut rows = Vec::new();
                let mut all = true;
                for spec in u_invariant_minors(ctx) {
                    let m = minor::<F>(&spec, ctx)?;
                    if !is_invariant(&m, &self.s.group, ctx)?.is_invariant() {
                        continue;
                    }
                    let cert = self.alg.is_member(&m)?;
                    let ok = cert.is_member() && cert.verify(&m);
                    all &= ok;
                    rows.push(json!({"minor": spec.to_string(), "member": ok}));
                }
                Ok(Outcome {
                    verdict: format!("{} invariant left-initial minors, all members: {all}", rows.len()),
                    observed: json!(all && !rows.is_empty()),
                    certificate: json!({"minors": rows}),
                })
            }
        }
    }
}

/// Named seeds for coverage pairs: `delta`, `D1`, `sp12`, `1`, or a polynomial.
pub fn coverage_seed<F: Field>(a: &str, ctx: RingCtx) -> Result<Poly<F>> {
    match a {
        "delta" => Ok(crate::ring::delta(ctx)),
        "D1" => inner_product(ClassicalKind::SOsplit, ctx.n, 1, 1),
        "sp12" => inner_product(ClassicalKind::Spsplit, ctx.n, 1, 2),
        "1" => Ok(Poly::one()),
        other => parse(other),
    }
}

fn identity_outcome(checked: Vec<String>, fails: Vec<String>) -> Outcome {
    Outcome {
        verdict: if fails.is_empty() { "identity holds".into() } else { "identity fails".into() },
        observed: json!(fails.is_empty()),
        certificate: json!({"checked": checked, "failures": fails}),
    }
}

fn run_typed<F: Field>(s: &Scenario, caps: Caps, timings: bool) -> Result<Report> {
    s.ring.check_field::<F>()?;
    let ctx = s.ring.ctx;
    s.group.validate::<F>(ctx)?;
    let gens = scenario_generators::<F>(s)?;
    let alg = PolarizedAlgebra::new(&gens, ctx, caps)?;
    let mut runner = Runner { s, ctx, gens: gens.clone(), alg, caps, annotations: Vec::new() };
    let mut records = Vec::new();
    for (index, spec) in s.queries.iter().enumerate() {
        let start = Instant::now();
        let (verdict, observed, certificate, status) = match runner.run(&spec.query) {
            Ok(o) => {
                let status = match &spec.expect {
                    None => Status::Recorded,
                    Some(e) if expectation_met(&e.value, &o.observed) => Status::Pass,
                    Some(_) => Status::Fail,
                };
                (o.verdict, o.observed, o.certificate, status)
            }
            Err(e) if e.is_indeterminate() => {
                ("indeterminate".into(), Value::Null, json!({"error": e.to_string()}), Status::Indeterminate)
            }
            Err(e) => ("error".into(), Value::Null, json!({"error": e.to_string()}), Status::Fail),
        };
        records.push(QueryRecord {
            index,
            query: spec.query.name().into(),
            args: spec.query.args(),
            verdict,
            observed,
            certificate,
            expected: spec.expect.clone(),
            status,
            elapsed_ms: timings.then(|| start.elapsed().as_millis()),
        });
    }
    let count = |st: Status| records.iter().filter(|r| r.status == st).count();
    let (passed, failed, indeterminate, recorded) =
        (count(Status::Pass), count(Status::Fail), count(Status::Indeterminate), count(Status::Recorded));
    let status = if failed > 0 {
        Status::Fail
    } else if indeterminate > 0 {
        Status::Indeterminate
    } else {
        Status::Pass
    };
    Ok(Report {
        scenario: s.name.into(),
        ring: s.ring.to_string(),
        group: serde_json::to_value(&s.group)?,
        caps: json!({"maxTerms": caps.max_terms, "maxProducts": caps.max_products}),
        generators: poly_list(&gens),
        queries: records,
        annotations: runner.annotations,
        summary: Summary { total: s.queries.len(), passed, failed, indeterminate, recorded, status },
    })
}

/// Every key of an expected object must match; other values compare exactly.
fn expectation_met(expected: &Value, observed: &Value) -> bool {
    match (expected, observed) {
        (Value::Object(e), Value::Object(o)) => e.iter().all(|(k, v)| o.get(k).is_some_and(|ov| expectation_met(v, ov))),
        _ => expected == observed,
    }
}

/// Runs a scenario in the coefficient field of its ring.
pub fn run_scenario(s: &Scenario, caps: Caps, timings: bool) -> Result<Report> {
    crate::with_field!(s.ring.p, F => run_typed::<F>(s, caps, timings))
}

fn ring(spec: &str) -> RingSpec {
    spec.parse().expect("bundled ring spec")
}

fn q(query: Query, expect: Option<Expectation>) -> QuerySpec {
    QuerySpec { query, expect }
}

/// `x(1,1) x(1,2) ... x(1,2p) x(2,2p)`.
pub fn torus_counterexample(p: usize) -> String {
    let mut parts: Vec<String> = (1..=2 * p).map(|j| format!("x(1,{j})")).collect();
    parts.push(format!("x(2,{})", 2 * p));
    parts.join("*")
}

pub const SCENARIO_NAMES: &[&str] = &[
    "torus-p2",
    "torus-p3",
    "mu3-char2-n2",
    "mu3-char2-n3",
    "classical-sl",
    "classical-so",
    "classical-sp",
    "block-unipotent",
];

/// The bundled scenario with this name.
pub fn bundled(name: &str) -> Result<Scenario> {
    let s = match name {
        "torus-p2" | "torus-p3" => {
            let p: usize = if name == "torus-p2" { 2 } else { 3 };
            let f = torus_counterexample(p);
            let mut queries = vec![
                q(
                    Query::MinimalGenerators { max_deg: 8 },
                    if p == 2 {
                        stated(json!({"count": 10, "rowDegrees": [[4, 1]]}))
                    } else {
                        computed(json!({"count": 14, "rowDegrees": [[6, 1]]}))
                    },
                ),
                q(Query::Invariant { poly: f.clone() }, computed(json!(true))),
                q(
                    Query::Member { poly: f.clone() },
                    if p == 2 { stated(json!("nonmember")) } else { computed(json!("nonmember")) },
                ),
                q(Query::Member { poly: format!("x(1,1)^{}*x(2,1)", 2 * p) }, computed(json!("member"))),
            ];
            if p == 2 {
                queries.push(q(Query::ProotLevel { poly: f, m_max: 4 }, stated(json!({"found": true}))));
            }
            Scenario {
                name: if p == 2 { "torus-p2" } else { "torus-p3" },
                summary: "diagonal torus diag(a^-1, a^2p) in characteristic p",
                ring: ring(if p == 2 { "2x4@p2" } else { "2x6@p3" }),
                group: GroupSpec::torus(vec![vec![-1], vec![2 * p as i64]]),
                generators: GeneratorSource::DiagonalSieve { max_deg: 8 },
                queries,
            }
        }
        "mu3-char2-n2" => Scenario {
            name: "mu3-char2-n2",
            summary: "scalar cube roots of unity on k^2 in characteristic 2",
            ring: ring("2x3@p2"),
            group: GroupSpec::scalar_roots_of_unity(3, 2),
            generators: GeneratorSource::DiagonalSieve { max_deg: 6 },
            queries: vec![
                q(Query::MinimalGenerators { max_deg: 6 }, computed(json!({"count": 20, "rowDegrees": [[0, 3], [1, 2], [2, 1], [3, 0]]}))),
                q(Query::Invariant { poly: "x(1,1)*x(1,2)*x(1,3)".into() }, computed(json!(true))),
                q(Query::Member { poly: "x(1,1)*x(1,2)*x(1,3)".into() }, stated(json!("nonmember"))),
                q(Query::ProotLevel { poly: "x(1,1)*x(1,2)*x(1,3)".into(), m_max: 4 }, stated(json!({"found": true}))),
            ],
        },
        "mu3-char2-n3" => Scenario {
            name: "mu3-char2-n3",
            summary: "scalar cube roots of unity on k^3 in characteristic 2",
            ring: ring("3x4@p2"),
            group: GroupSpec::scalar_roots_of_unity(3, 3),
            generators: GeneratorSource::DiagonalSieve { max_deg: 6 },
            queries: vec![q(Query::DimensionsAgree { degrees: vec![3, 6] }, stated(json!(true)))],
        },
        "classical-sl" => Scenario {
            name: "classical-sl",
            summary: "SL_2 on M_{2,3}",
            ring: ring("2x3@p5"),
            group: GroupSpec::Rooted { kind: ClassicalKind::SL, n: 2 },
            generators: GeneratorSource::Classical(ClassicalKind::SL),
            queries: {
                let mut v = vec![
                    q(Query::GeneratorsInvariant, stated(json!(true))),
                    q(Query::CauchyBinet, stated(json!(true))),
                    q(Query::PhiPrimeMinors, stated(json!(true))),
                ];
                for cols in combinations(3, 2) {
                    let spec = MinorSpec::new(vec![1, 2], cols);
                    let poly = minor::<crate::F5>(&spec, RingCtx { n: 2, d: 3 }).expect("valid").to_string();
                    v.push(q(Query::DeltaPower { poly, e_max: 6 }, stated(json!({"found": true, "level": 0}))));
                }
                v.push(q(Query::Coverage { pairs: vec![("delta".into(), vec![1, 1, 0]), ("1".into(), vec![0, 0, 0])] }, computed(json!(true))));
                v
            },
        },
        "classical-so" => Scenario {
            name: "classical-so",
            summary: "split SO_2 on M_{2,3}",
            ring: ring("2x3@p5"),
            group: GroupSpec::Rooted { kind: ClassicalKind::SOsplit, n: 2 },
            generators: GeneratorSource::Classical(ClassicalKind::SOsplit),
            queries: vec![
                q(Query::GeneratorsInvariant, stated(json!(true))),
                q(Query::InnerProductFormula(ClassicalKind::SOsplit), stated(json!(true))),
                q(Query::PhiPrimeGram { r: 1 }, stated(json!(true))),
                q(Query::PhiPrimeGram { r: 2 }, computed(json!(true))),
                q(Query::Coverage { pairs: vec![("D1".into(), vec![2, 0, 0]), ("delta".into(), vec![1, 1, 0])] }, None),
            ],
        },
        "classical-sp" => Scenario {
            name: "classical-sp",
            summary: "split Sp_2 on M_{2,3}",
            ring: ring("2x3@p5"),
            group: GroupSpec::Rooted { kind: ClassicalKind::Spsplit, n: 2 },
            generators: GeneratorSource::Classical(ClassicalKind::Spsplit),
            queries: vec![
                q(Query::GeneratorsInvariant, stated(json!(true))),
                q(Query::InnerProductFormula(ClassicalKind::Spsplit), stated(json!(true))),
                q(Query::Coverage { pairs: vec![("sp12".into(), vec![1, 1, 0])] }, None),
            ],
        },
        "block-unipotent" => Scenario {
            name: "block-unipotent",
            summary: "block unipotent group with blocks (2,1) on M_{3,4}",
            ring: ring("3x4@p5"),
            group: GroupSpec::BlockUnipotent { blocks: vec![2, 1] },
            generators: GeneratorSource::InvariantMinors,
            queries: vec![
                q(Query::GeneratorsInvariant, computed(json!(true))),
                q(Query::InvariantLeftInitialMinors, stated(json!(true))),
                q(Query::Invariant { poly: "x(1,1)".into() }, computed(json!(false))),
            ],
        },
        other => {
            return Err(Error::Input(format!(
                "unknown scenario {other:?}; available: {}",
                SCENARIO_NAMES.join(", ")
            )))
        }
    };
    Ok(s)
}
