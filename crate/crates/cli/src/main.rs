use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vilab_core::filtration::{check_hull_coverage, filtration_level, h_value, phi_prime, GLWeight};
use vilab_core::group::{minimal_monomial_generators, row_degrees, ClassicalKind, GroupSpec};
use vilab_core::input::{parse_inputs, RingSpec};
use vilab_core::polarize::{
    delta_power_level, module_span, p_root_level, Caps, LevelSearch, PolarizedAlgebra, DEFAULT_E_MAX, DEFAULT_M_MAX,
};
use vilab_core::scenario::{
    bundled, coverage_seed, default_source, run_scenario, source_generators, Status, SCENARIO_NAMES,
};
use vilab_core::{with_field, Error, Field, Poly, Result};

#[derive(Parser)]
#[command(name = "vilab", version, about = "Exact computations with vector invariants of matrix groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal invariant monomials of a diagonal group up to a degree.
    Invariants {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        max_deg: u32,
    },
    /// Membership in the polarized algebra, with a certificate.
    Member {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: GenArgs,
    },
    /// Smallest m with f^(p^m) in the polarized algebra.
    Proot {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: GenArgs,
        #[arg(long, default_value_t = DEFAULT_M_MAX)]
        m_max: u32,
    },
    /// Smallest e with Delta^e * f in the polarized algebra.
    Deltapow {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: GenArgs,
        #[arg(long, default_value_t = DEFAULT_E_MAX)]
        e_max: u32,
    },
    /// Weight-graded basis of the GL_d-module spanned by each polynomial.
    Span {
        #[command(flatten)]
        common: Common,
    },
    /// The h-value of a GL_d weight.
    Hweight {
        /// Comma-separated integers, e.g. 2,1,0.
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Filtration level and Phi' image of each polynomial.
    Phiprime {
        #[command(flatten)]
        common: Common,
    },
    /// Probe whether a (x) Y'(omega) lies in the Phi'-image of the polarized algebra.
    Coverage {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gens: GenArgs,
        /// Lines of the form `<poly> @ w1,...,wd`; `delta`, `D1`, `sp12` and `1` are accepted names.
        #[arg(long)]
        ugens: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        degree_cap: u32,
    },
    /// Run a bundled scenario.
    Scenario {
        /// One of the bundled scenario names; `list` prints them.
        name: String,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        #[command(flatten)]
        caps: CapArgs,
        /// Include elapsed time per query.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Ring spec `NxD@pP`; p0 is the rationals.
    #[arg(long)]
    ring: String,
    /// Group JSON file.
    #[arg(long)]
    group: Option<PathBuf>,
    /// Polynomial file, one per line; `-` reads stdin.
    #[arg(long)]
    poly: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct CapArgs {
    #[arg(long, default_value_t = Caps::default().max_terms)]
    max_terms: usize,
    #[arg(long, default_value_t = Caps::default().max_products)]
    max_products: usize,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps { max_terms: self.max_terms, max_products: self.max_products }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Generators on M_{n,n}, one per line; otherwise derived from the group.
    #[arg(long)]
    gens: Option<PathBuf>,
    /// Degree bound for the diagonal-group generator sieve.
    #[arg(long, default_value_t = 8)]
    sieve_deg: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Text,
}

struct Output {
    json: Value,
    text: String,
    status: Status,
}

fn read(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Input(format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_opt(path: &Option<PathBuf>) -> Result<Option<String>> {
    path.as_deref().map(read).transpose()
}

/// Ring, polynomials and group of a command, parsed in the field `F`.
struct Loaded<F: Field> {
    ring: RingSpec,
    polys: Vec<Poly<F>>,
    group: Option<GroupSpec>,
}

fn load<F: Field>(common: &Common, ring: RingSpec, need_poly: bool) -> Result<Loaded<F>> {
    let text = read_opt(&common.poly)?;
    if need_poly && text.is_none() {
        return Err(Error::Input("--poly is required".into()));
    }
    let group = read_opt(&common.group)?;
    let (polys, group) = parse_inputs::<F>(text.as_deref().unwrap_or(""), group.as_deref(), &ring)?;
    if need_poly && polys.is_empty() {
        return Err(Error::Input("the polynomial file is empty".into()));
    }
    Ok(Loaded { ring, polys, group })
}

fn generators<F: Field>(l: &Loaded<F>, g: &GenArgs) -> Result<Vec<Poly<F>>> {
    let sq = l.ring.ctx.square();
    if let Some(path) = &g.gens {
        let (gens, _) = parse_inputs::<F>(&read(path)?, None, &RingSpec { ctx: sq, ..l.ring })?;
        return Ok(gens);
    }
    let group = l.group.as_ref().ok_or_else(|| Error::Input("either --gens or --group is required".into()))?;
    let source = default_source(group, g.sieve_deg)
        .ok_or_else(|| Error::Input("this group has no built-in generator list; pass --gens".into()))?;
    source_generators(&source, group, sq)
}

fn strings<F: Field>(ps: &[Poly<F>]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn all_status(flags: impl IntoIterator<Item = bool>) -> Status {
    if flags.into_iter().all(|b| b) {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn invariants<F: Field>(common: &Common, ring: RingSpec, max_deg: u32) -> Result<Output> {
    let l = load::<F>(common, ring, false)?;
    let group = l.group.ok_or_else(|| Error::Input("--group is required".into()))?;
    let gens = minimal_monomial_generators(&group, ring.ctx, max_deg)?;
    let rows: Vec<Value> = gens
        .iter()
        .map(|m| json!({"monomial": m.to_string(), "rowDegrees": row_degrees(m, ring.ctx.n)}))
        .collect();
    let mut text = format!("{} minimal generators up to degree {max_deg} on {ring}\n", gens.len());
    for m in &gens {
        text += &format!("  {m}\n");
    }
    Ok(Output {
        json: json!({"ring": ring.to_string(), "maxDeg": max_deg, "count": gens.len(), "generators": rows}),
        text,
        status: Status::Pass,
    })
}

fn member<F: Field>(common: &Common, ring: RingSpec, g: &GenArgs) -> Result<Output> {
    let l = load::<F>(common, ring, true)?;
    let gens = generators(&l, g)?;
    let mut alg = PolarizedAlgebra::new(&gens, ring.ctx, common.caps.caps())?;
    let mut results = Vec::new();
    let mut text = String::new();
    let mut ok = Vec::new();
    for f in &l.polys {
        let cert = alg.is_member(f)?;
        let valid = cert.verify(f);
        let verdict = if cert.is_member() { "member" } else { "nonmember" };
        text += &format!("{f}: {verdict} in degree {}{}\n", cert.degree(), if valid { "" } else { " (certificate invalid)" });
        ok.push(cert.is_member() && valid);
        results.push(json!({"poly": f.to_string(), "certificate": cert.to_json(), "verified": valid}));
    }
    Ok(Output {
        json: json!({"ring": ring.to_string(), "generators": strings(&gens), "results": results}),
        text,
        status: all_status(ok),
    })
}

enum LevelKind {
    Proot(u32),
    Deltapow(u32),
}

fn level<F: Field>(common: &Common, ring: RingSpec, g: &GenArgs, kind: LevelKind) -> Result<Output> {
    let l = load::<F>(common, ring, true)?;
    let gens = generators(&l, g)?;
    let mut alg = PolarizedAlgebra::new(&gens, ring.ctx, common.caps.caps())?;
    let (mut results, mut text, mut ok) = (Vec::new(), String::new(), Vec::new());
    for f in &l.polys {
        let res = match kind {
            LevelKind::Proot(m) => p_root_level(&mut alg, f, m)?,
            LevelKind::Deltapow(e) => delta_power_level(&mut alg, f, e)?,
        };
        match &res {
            LevelSearch::Found { level, certificate } => {
                let mut rec = json!({"poly": f.to_string(), "found": true, "level": level, "certificate": certificate.to_json()});
                let mut valid = certificate.is_member();
                if let (LevelKind::Proot(_), Some(rel)) = (&kind, res.relation()) {
                    valid &= rel.verify(f);
                    rec["integralRelation"] = rel.to_json();
                }
                rec["verified"] = json!(valid);
                text += &format!("{f}: level {level}{}\n", if valid { "" } else { " (certificate invalid)" });
                ok.push(valid);
                results.push(rec);
            }
            LevelSearch::NotFound { bound } => {
                text += &format!("{f}: not found up to {bound}\n");
                ok.push(false);
                results.push(json!({"poly": f.to_string(), "found": false, "bound": bound}));
            }
        }
    }
    Ok(Output {
        json: json!({"ring": ring.to_string(), "generators": strings(&gens), "results": results}),
        text,
        status: all_status(ok),
    })
}

fn span<F: Field>(common: &Common, ring: RingSpec) -> Result<Output> {
    let l = load::<F>(common, ring, true)?;
    let (mut results, mut text) = (Vec::new(), String::new());
    for f in &l.polys {
        let m = module_span(f, ring.ctx)?;
        let elems: Vec<Value> = m.elements().map(|(w, p)| json!({"weight": w, "poly": p.to_string()})).collect();
        text += &format!("{f}: module of dimension {}\n", m.dim());
        for (w, p) in m.elements() {
            text += &format!("  {w:?}: {p}\n");
        }
        results.push(json!({"poly": f.to_string(), "dim": m.dim(), "elements": elems}));
    }
    Ok(Output { json: json!({"ring": ring.to_string(), "results": results}), text, status: Status::Pass })
}

fn hweight(weight: &str) -> Result<Output> {
    let parts: std::result::Result<Vec<i64>, _> = weight.split(',').map(|t| t.trim().parse::<i64>()).collect();
    let w = GLWeight(parts.map_err(|_| Error::Input(format!("weight must be comma-separated integers, got {weight:?}")))?);
    if w.d() == 0 {
        return Err(Error::Input("empty weight".into()));
    }
    let h = h_value(&w);
    Ok(Output {
        json: json!({"weight": w.0, "d": w.d(), "h": h, "dominant": w.is_dominant()}),
        text: format!("h{:?} = {h}\n", w.0),
        status: Status::Pass,
    })
}

fn phiprime<F: Field>(common: &Common, ring: RingSpec) -> Result<Output> {
    let l = load::<F>(common, ring, true)?;
    let (mut results, mut text) = (Vec::new(), String::new());
    for f in &l.polys {
        let lvl = filtration_level(f, ring.ctx)?;
        let hull = phi_prime(f, ring.ctx)?;
        let terms: Vec<Value> =
            hull.terms.iter().map(|(u, g)| json!({"u": u.to_string(), "g": g.to_string()})).collect();
        text += &format!("{f}: level {lvl}, Phi' = {hull}\n");
        results.push(json!({"poly": f.to_string(), "level": lvl, "terms": terms, "expanded": hull.as_poly().to_string()}));
    }
    Ok(Output { json: json!({"ring": ring.to_string(), "results": results}), text, status: Status::Pass })
}

/// Pairs `(a, omega)` generating the U-invariants for the groups where they are built in.
fn default_ugens(group: &GroupSpec, ring: RingSpec) -> Result<Vec<(String, Vec<i64>)>> {
    let (n, d) = (ring.ctx.n, ring.ctx.d);
    let fundamental = |r: usize, mult: i64| -> Vec<i64> { (0..d).map(|i| if i < r { mult } else { 0 }).collect() };
    match group {
        GroupSpec::Rooted { kind: ClassicalKind::GL, .. } => Ok(vec![("1".into(), vec![0; d])]),
        GroupSpec::Rooted { kind: ClassicalKind::SL, .. } => {
            Ok(vec![("1".into(), vec![0; d]), ("delta".into(), fundamental(n, 1))])
        }
        GroupSpec::Rooted { kind: ClassicalKind::SOsplit, n: 2 } => {
            Ok(vec![("D1".into(), fundamental(1, 2)), ("delta".into(), fundamental(2, 1))])
        }
        _ => Err(Error::Input("no built-in U-invariant pairs for this group; pass --ugens".into())),
    }
}

fn parse_ugens(text: &str) -> Result<Vec<(String, Vec<i64>)>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let bad = || Error::Input(format!("ugens line {}: expected `<poly> @ w1,...,wd`", k + 1));
        let (a, w) = body.rsplit_once('@').ok_or_else(bad)?;
        let w: std::result::Result<Vec<i64>, _> = w.split(',').map(|t| t.trim().parse::<i64>()).collect();
        out.push((a.trim().to_string(), w.map_err(|_| bad())?));
    }
    Ok(out)
}

fn coverage<F: Field>(
    common: &Common,
    ring: RingSpec,
    g: &GenArgs,
    ugens: &Option<PathBuf>,
    degree_cap: u32,
) -> Result<Output> {
    let l = load::<F>(common, ring, false)?;
    let gens = generators(&l, g)?;
    let pairs = match ugens {
        Some(path) => parse_ugens(&read(path)?)?,
        None => default_ugens(l.group.as_ref().ok_or_else(|| Error::Input("--group or --ugens is required".into()))?, ring)?,
    };
    let mut u_gens = Vec::new();
    for (a, w) in &pairs {
        u_gens.push((coverage_seed::<F>(a, ring.ctx)?, GLWeight(w.clone())));
    }
    let recs = check_hull_coverage(&u_gens, &gens, ring.ctx, degree_cap, common.caps.caps())?;
    let mut text = String::new();
    for (r, (a, _)) in recs.iter().zip(&pairs) {
        text += &format!(
            "pair {} ({a}, {:?}) degree {}: {} ({} tested)\n",
            r.pair,
            r.weight.0,
            r.degree,
            if r.covered { "covered" } else { "not covered" },
            r.tested
        );
    }
    let status = all_status(recs.iter().map(|r| r.covered));
    Ok(Output {
        json: json!({"ring": ring.to_string(), "generators": strings(&gens), "coverage": serde_json::to_value(&recs)?}),
        text,
        status,
    })
}

fn scenario(name: &str, caps: Caps, timings: bool) -> Result<Output> {
    if name == "list" {
        return Ok(Output {
            json: json!({"scenarios": SCENARIO_NAMES}),
            text: SCENARIO_NAMES.iter().map(|s| format!("{s}\n")).collect(),
            status: Status::Pass,
        });
    }
    let s = bundled(name)?;
    let report = run_scenario(&s, caps, timings)?;
    Ok(Output {
        json: serde_json::to_value(&report)?,
        text: report.to_text(),
        status: report.summary.status,
    })
}

fn ring_of(common: &Common) -> Result<RingSpec> {
    common.ring.parse()
}

fn dispatch(cmd: &Command) -> Result<(Output, Emit)> {
    let out = match cmd {
        Command::Invariants { common, max_deg } => {
            let ring = ring_of(common)?;
            (with_field!(ring.p, F => invariants::<F>(common, ring, *max_deg))?, common.emit)
        }
        Command::Member { common, gens } => {
            let ring = ring_of(common)?;
            (with_field!(ring.p, F => member::<F>(common, ring, gens))?, common.emit)
        }
        Command::Proot { common, gens, m_max } => {
            let ring = ring_of(common)?;
            (with_field!(ring.p, F => level::<F>(common, ring, gens, LevelKind::Proot(*m_max)))?, common.emit)
        }
        Command::Deltapow { common, gens, e_max } => {
            let ring = ring_of(common)?;
            (with_field!(ring.p, F => level::<F>(common, ring, gens, LevelKind::Deltapow(*e_max)))?, common.emit)
        }
        Command::Span { common } => {
            let ring = ring_of(common)?;
            (with_field!(ring.p, F => span::<F>(common, ring))?, common.emit)
        }
        Command::Hweight { weight, emit } => (hweight(weight)?, *emit),
        Command::Phiprime { common } => {
            let ring = ring_of(common)?;
            (with_field!(ring.p, F => phiprime::<F>(common, ring))?, common.emit)
        }
        Command::Coverage { common, gens, ugens, degree_cap } => {
            let ring = ring_of(common)?;
            (with_field!(ring.p, F => coverage::<F>(common, ring, gens, ugens, *degree_cap))?, common.emit)
        }
        Command::Scenario { name, emit, caps, timings } => (scenario(name, caps.caps(), *timings)?, *emit),
    };
    Ok(out)
}

fn exit_code(status: Status) -> u8 {
    match status {
        Status::Pass | Status::Recorded => 0,
        Status::Fail => 1,
        Status::Indeterminate => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            // clap's own code for usage errors collides with "indeterminate".
            return ExitCode::from(if usage { 3 } else { 0 });
        }
    };
    match dispatch(&cli.command) {
        Ok((out, emit)) => {
            match emit {
                Emit::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json output")),
                Emit::Text => print!("{}", out.text),
            }
            ExitCode::from(exit_code(out.status))
        }
        Err(e) if e.is_indeterminate() => {
            println!("{}", json!({"verdict": "indeterminate", "reason": e.to_string()}));
            eprintln!("indeterminate: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
