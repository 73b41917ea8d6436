//! The polarized algebra `GL_d * j(R)` for a subalgebra `R` of `k[M_{n,n}]`
//! given by generators.
//!
//! Every graded piece is a direct sum of column-weight spaces, so pieces are
//! built per `(degree, weight)` by the recursion
//! `C(D, w) = sum M(a, w1) * C(D - a, w - w1)`, where `M(a, w1)` is the
//! weight-`w1` part of the module spans of the degree-`a` generators.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{Family, Monomial, Poly};
use crate::ring::{act_column, column_degrees, delta, embed_j, generic_matrix, RingCtx};
use crate::scalar::Field;
use crate::span::{SpanBasis, SpanMembership};

/// Guardrails for the product enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Total terms stored across all computed pieces.
    pub max_terms: usize,
    /// Products formed while answering one query.
    pub max_products: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_terms: 200_000, max_products: 100_000 }
    }
}

pub type Weight = Vec<u32>;

/// Flattened products per `((degree, weight), row)` of a piece.
type FlattenMemo<F> = HashMap<((u32, Weight), usize), BTreeMap<Vec<usize>, F>>;

/// `<GL_d * f>`, split into column-weight spaces.
#[derive(Clone, Debug)]
pub struct ModuleSpan<F: Field> {
    pub seed: Poly<F>,
    pub degree: u32,
    pub basis: SpanBasis<F>,
    pub by_weight: BTreeMap<Weight, Vec<Poly<F>>>,
}

impl<F: Field> ModuleSpan<F> {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Basis elements in weight order.
    pub fn elements(&self) -> impl Iterator<Item = (&Weight, &Poly<F>)> {
        self.by_weight.iter().flat_map(|(w, v)| v.iter().map(move |p| (w, p)))
    }
}

/// Spans the `GL_d`-module generated by a homogeneous `f` from the
/// coefficients of `f(xg)` at the monomials of a generic `g`.
pub fn module_span<F: Field>(f: &Poly<F>, ctx: RingCtx) -> Result<ModuleSpan<F>> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    ctx.check_poly(f)?;
    let image = act_column(f, &generic_matrix(ctx.d), ctx)?;
    let mut per_weight: BTreeMap<Weight, SpanBasis<F>> = BTreeMap::new();
    for (gmono, coeff) in image.collect_by_family(Family::G) {
        // coefficient of a g-monomial has column weight = its g-row degrees
        let mut w = vec![0u32; ctx.d];
        for &(v, e) in gmono.factors() {
            let (s, _) = v.matrix_index().expect("g variable");
            w[s - 1] += e;
        }
        per_weight.entry(w).or_insert_with(SpanBasis::untracked).insert(coeff);
    }
    let mut basis = SpanBasis::untracked();
    let mut by_weight = BTreeMap::new();
    for (w, sb) in per_weight {
        let rows: Vec<Poly<F>> = sb.rows().cloned().collect();
        for r in &rows {
            basis.insert(r.clone());
        }
        by_weight.insert(w, rows);
    }
    Ok(ModuleSpan { seed: f.clone(), degree: f.degree().unwrap_or(0), basis, by_weight })
}

/// One summand of a member certificate: `coeff * prod factors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationTerm<F: Field> {
    pub coeff: F,
    pub factors: Vec<Poly<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipCertificate<F: Field> {
    Member { degree: u32, combination: Vec<CombinationTerm<F>> },
    Nonmember { degree: u32, residual: Poly<F> },
}

impl<F: Field> MembershipCertificate<F> {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipCertificate::Member { .. })
    }

    pub fn degree(&self) -> u32 {
        match self {
            MembershipCertificate::Member { degree, .. } | MembershipCertificate::Nonmember { degree, .. } => *degree,
        }
    }

    /// `sum coeff * prod factors` for a member certificate.
    pub fn expand(&self) -> Option<Poly<F>> {
        let MembershipCertificate::Member { combination, .. } = self else {
            return None;
        };
        Some(expand_combination(combination))
    }

    /// Member certificates must re-expand to `f`; nonmember residuals must be
    /// nonzero.
    pub fn verify(&self, f: &Poly<F>) -> bool {
        match self {
            MembershipCertificate::Member { .. } => self.expand().as_ref() == Some(f),
            MembershipCertificate::Nonmember { residual, .. } => !residual.is_zero(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            MembershipCertificate::Member { degree, combination } => json!({
                "verdict": "member",
                "degree": degree,
                "combination": combination
                    .iter()
                    .map(|t| json!({
                        "coeff": t.coeff.to_string(),
                        "factors": t.factors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            }),
            MembershipCertificate::Nonmember { degree, residual } => json!({
                "verdict": "nonmember",
                "degree": degree,
                "residualTerms": residual
                    .terms()
                    .rev()
                    .map(|(m, c)| json!({"coeff": c.to_string(), "monomial": m.to_string()}))
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

pub fn expand_combination<F: Field>(combination: &[CombinationTerm<F>]) -> Poly<F> {
    let mut acc = Poly::zero();
    for t in combination {
        let mut p = Poly::constant(t.coeff.clone());
        for f in &t.factors {
            p = &p * f;
        }
        acc = &acc + &p;
    }
    acc
}

/// Number of monomials of column weight `w` in `M_{n,d}`, saturating.
pub fn weight_space_dim(w: &[u32], n: usize) -> u128 {
    let mut out: u128 = 1;
    for &e in w {
        // C(e + n - 1, n - 1)
        let mut c: u128 = 1;
        for k in 0..(n as u128 - 1) {
            c = c * (e as u128 + 1 + k) / (k + 1);
        }
        out = out.saturating_mul(c);
    }
    out
}

#[derive(Clone, Debug)]
enum Origin {
    Unit,
    /// module element times row `rest_row` of piece `rest`
    Product { module: usize, rest: (u32, Weight), rest_row: usize },
}

#[derive(Clone, Debug)]
struct Piece<F: Field> {
    span: SpanBasis<F>,
    rows: Vec<Poly<F>>,
    inputs: Vec<Origin>,
}

struct ModuleElement<F: Field> {
    poly: Poly<F>,
}

/// Graded pieces of the polarized algebra, computed on demand and memoized.
pub struct PolarizedAlgebra<F: Field> {
    ctx: RingCtx,
    caps: Caps,
    elements: Vec<ModuleElement<F>>,
    /// degree -> weight -> module element indices
    index: BTreeMap<u32, BTreeMap<Weight, Vec<usize>>>,
    spans: Vec<ModuleSpan<F>>,
    pieces: HashMap<(u32, Weight), Piece<F>>,
    stored_terms: usize,
    products: usize,
}

fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn sub(a: &[u32], b: &[u32]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl<F: Field> PolarizedAlgebra<F> {
    /// `gens` live in `k[M_{n,n}]`; inhomogeneous generators are split into
    /// their homogeneous parts.
    pub fn new(gens: &[Poly<F>], ctx: RingCtx, caps: Caps) -> Result<Self> {
        let embedded = gens.iter().map(|g| embed_j(g, ctx)).collect::<Result<Vec<_>>>()?;
        Self::from_module_seeds(&embedded, ctx, caps)
    }

    /// The algebra generated by the modules `<GL_d * s>` for seeds `s`
    /// anywhere in `k[M_{n,d}]`.
    pub fn from_module_seeds(seeds: &[Poly<F>], ctx: RingCtx, caps: Caps) -> Result<Self> {
        let mut spans = Vec::new();
        for g in seeds {
            for (deg, part) in g.homogeneous_parts() {
                if deg > 0 {
                    spans.push(module_span(&part, ctx)?);
                }
            }
        }
        let mut elements = Vec::new();
        let mut index: BTreeMap<u32, BTreeMap<Weight, Vec<usize>>> = BTreeMap::new();
        for span in &spans {
            for (w, p) in span.elements() {
                index.entry(span.degree).or_default().entry(w.clone()).or_default().push(elements.len());
                elements.push(ModuleElement { poly: p.clone() });
            }
        }
        Ok(PolarizedAlgebra {
            ctx,
            caps,
            elements,
            index,
            spans,
            pieces: HashMap::new(),
            stored_terms: 0,
            products: 0,
        })
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn module_spans(&self) -> &[ModuleSpan<F>] {
        &self.spans
    }

    /// Every module-span basis element, across generators.
    pub fn module_elements(&self) -> impl Iterator<Item = &Poly<F>> {
        self.elements.iter().map(|e| &e.poly)
    }

    fn ensure(&mut self, degree: u32, w: &Weight) -> Result<()> {
        let key = (degree, w.clone());
        if self.pieces.contains_key(&key) {
            return Ok(());
        }
        let mut span = SpanBasis::new();
        let mut inputs = Vec::new();
        if degree == 0 {
            if w.iter().all(|&e| e == 0) {
                span.insert(Poly::one());
                inputs.push(Origin::Unit);
            }
        } else if w.iter().sum::<u32>() == degree {
            let ambient = weight_space_dim(w, self.ctx.n);
            let mut plan: Vec<(usize, (u32, Weight))> = Vec::new();
            for (&a, by_w) in self.index.range(1..=degree) {
                for (w1, ids) in by_w {
                    if !leq(w1, w) {
                        continue;
                    }
                    let rest = (degree - a, sub(w, w1));
                    for &id in ids {
                        plan.push((id, rest.clone()));
                    }
                }
            }
            let mut rests: Vec<(u32, Weight)> = plan.iter().map(|(_, r)| r.clone()).collect();
            rests.sort();
            rests.dedup();
            for (d, rw) in &rests {
                self.ensure(*d, rw)?;
            }
            'outer: for (id, rest) in plan {
                let rest_rows = self.pieces[&rest].rows.len();
                for r in 0..rest_rows {
                    if span.dim() as u128 >= ambient {
                        break 'outer;
                    }
                    self.products += 1;
                    if self.products > self.caps.max_products {
                        return Err(Error::CapExceeded { what: "product count", limit: self.caps.max_products });
                    }
                    let prod = &self.elements[id].poly * &self.pieces[&rest].rows[r];
                    span.insert(prod);
                    inputs.push(Origin::Product { module: id, rest: rest.clone(), rest_row: r });
                }
            }
        }
        let rows: Vec<Poly<F>> = span.rows().cloned().collect();
        self.stored_terms += rows.iter().map(Poly::len).sum::<usize>();
        if self.stored_terms > self.caps.max_terms {
            return Err(Error::CapExceeded { what: "spanned term count", limit: self.caps.max_terms });
        }
        self.pieces.insert(key, Piece { span, rows, inputs });
        Ok(())
    }

    /// The column-weight-`w` part of the degree-`degree` component.
    pub fn piece(&mut self, degree: u32, w: &Weight) -> Result<&SpanBasis<F>> {
        self.products = 0;
        self.ensure(degree, w)?;
        Ok(&self.pieces[&(degree, w.clone())].span)
    }

    /// Dimension of the full degree-`degree` component.
    pub fn component_dim(&mut self, degree: u32) -> Result<usize> {
        let mut total = 0;
        for w in weights_of_degree(self.ctx.d, degree) {
            total += self.piece(degree, &w)?.dim();
        }
        Ok(total)
    }

    /// The full degree-`degree` component as one span.
    pub fn component(&mut self, degree: u32) -> Result<SpanBasis<F>> {
        let mut out = SpanBasis::untracked();
        for w in weights_of_degree(self.ctx.d, degree) {
            for r in self.piece(degree, &w)?.rows() {
                out.insert(r.clone());
            }
        }
        Ok(out)
    }

    /// Products of module elements re-expanding row `row` of a piece.
    fn flatten(
        &self,
        key: &(u32, Weight),
        row: usize,
        memo: &mut FlattenMemo<F>,
    ) -> BTreeMap<Vec<usize>, F> {
        if let Some(v) = memo.get(&(key.clone(), row)) {
            return v.clone();
        }
        let piece = &self.pieces[key];
        let coords = piece.span.row_coords(row).expect("row exists").clone();
        let mut out: BTreeMap<Vec<usize>, F> = BTreeMap::new();
        for (input, c) in coords {
            let part = match &piece.inputs[input] {
                Origin::Unit => BTreeMap::from([(Vec::new(), F::one())]),
                Origin::Product { module, rest, rest_row } => self
                    .flatten(rest, *rest_row, memo)
                    .into_iter()
                    .map(|(mut f, v)| {
                        f.push(*module);
                        f.sort_unstable();
                        (f, v)
                    })
                    .collect(),
            };
            for (f, v) in part {
                let s = out.get(&f).cloned().unwrap_or_else(F::zero) + c.clone() * v;
                if s.is_zero() {
                    out.remove(&f);
                } else {
                    out.insert(f, s);
                }
            }
        }
        memo.insert((key.clone(), row), out.clone());
        out
    }

    /// Graded membership with a certificate. Inhomogeneous input is a
    /// member when every homogeneous part is.
    pub fn is_member(&mut self, f: &Poly<F>) -> Result<MembershipCertificate<F>> {
        self.ctx.check_poly(f)?;
        let top = f.degree().unwrap_or(0);
        let mut combined: BTreeMap<Vec<usize>, F> = BTreeMap::new();
        for (deg, part) in f.homogeneous_parts() {
            let mut by_weight: BTreeMap<Weight, Poly<F>> = BTreeMap::new();
            for (m, c) in part.terms() {
                by_weight
                    .entry(column_degrees(m, self.ctx.d))
                    .or_default()
                    .add_term(m.clone(), c.clone());
            }
            self.products = 0;
            let mut residual = Poly::zero();
            let mut memo = HashMap::new();
            for (w, comp) in &by_weight {
                self.ensure(deg, w)?;
                let key = (deg, w.clone());
                match self.pieces[&key].span.member(comp) {
                    SpanMembership::NonMember(r) => residual = &residual + &r,
                    SpanMembership::Member(_) if !residual.is_zero() => {}
                    SpanMembership::Member(_) => {
                        // coordinates over rows rather than inputs keep the
                        // flattening memo shared across rows
                        let piece = &self.pieces[&key];
                        let mut rest = comp.clone();
                        for (k, (pivot, row)) in piece.span.pivots().zip(&piece.rows).enumerate() {
                            let c = rest.coeff(pivot);
                            if c.is_zero() {
                                continue;
                            }
                            rest.add_scaled(&-c.clone(), row);
                            for (fs, v) in self.flatten(&key, k, &mut memo) {
                                let s = combined.get(&fs).cloned().unwrap_or_else(F::zero) + c.clone() * v;
                                if s.is_zero() {
                                    combined.remove(&fs);
                                } else {
                                    combined.insert(fs, s);
                                }
                            }
                        }
                        debug_assert!(rest.is_zero());
                    }
                }
            }
            if !residual.is_zero() {
                return Ok(MembershipCertificate::Nonmember { degree: deg, residual });
            }
        }
        let combination = combined
            .into_iter()
            .map(|(fs, coeff)| CombinationTerm {
                coeff,
                factors: fs.iter().map(|&i| self.elements[i].poly.clone()).collect(),
            })
            .collect();
        Ok(MembershipCertificate::Member { degree: top, combination })
    }
}

/// All column-weight vectors of total `degree` in `d` columns, lexicographically.
pub fn weights_of_degree(d: usize, degree: u32) -> Vec<Weight> {
    fn rec(d: usize, left: u32, cur: &mut Weight, out: &mut Vec<Weight>) {
        if cur.len() + 1 == d {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(d, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, degree, &mut Vec::new(), &mut out);
    out
}

/// The degree-`degree` component of `GL_d * j(R)` with default caps.
pub fn polarized_component<F: Field>(gens: &[Poly<F>], ctx: RingCtx, degree: u32) -> Result<SpanBasis<F>> {
    PolarizedAlgebra::new(gens, ctx, Caps::default())?.component(degree)
}

pub fn is_member<F: Field>(f: &Poly<F>, gens: &[Poly<F>], ctx: RingCtx) -> Result<MembershipCertificate<F>> {
    PolarizedAlgebra::new(gens, ctx, Caps::default())?.is_member(f)
}

/// Result of a bounded search for the smallest exponent that lands in the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelSearch<F: Field> {
    Found { level: u32, certificate: MembershipCertificate<F> },
    NotFound { bound: u32 },
}

/// `X^{p^m} - r` with `r` the member combination for `f^{p^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralRelation<F: Field> {
    pub exponent: u64,
    pub r: Vec<CombinationTerm<F>>,
}

impl<F: Field> IntegralRelation<F> {
    /// Substituting `X = f` gives zero.
    pub fn verify(&self, f: &Poly<F>) -> bool {
        f.pow(self.exponent) == expand_combination(&self.r)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "relation": format!("X^{} - r", self.exponent),
            "exponent": self.exponent,
            "r": MembershipCertificate::Member { degree: 0, combination: self.r.clone() }.to_json()["combination"],
        })
    }
}

impl<F: Field> LevelSearch<F> {
    pub fn level(&self) -> Option<u32> {
        match self {
            LevelSearch::Found { level, .. } => Some(*level),
            LevelSearch::NotFound { .. } => None,
        }
    }

    /// The integral dependence relation for a p-root level result.
    pub fn relation(&self) -> Option<IntegralRelation<F>> {
        let LevelSearch::Found { level, certificate: MembershipCertificate::Member { combination, .. } } = self else {
            return None;
        };
        Some(IntegralRelation { exponent: F::characteristic().pow(*level), r: combination.clone() })
    }
}

/// Smallest `m <= m_max` with `f^{p^m}` in the algebra.
pub fn p_root_level<F: Field>(alg: &mut PolarizedAlgebra<F>, f: &Poly<F>, m_max: u32) -> Result<LevelSearch<F>> {
    let p = F::characteristic();
    if p == 0 {
        return Err(Error::UnsupportedCharacteristic { what: "p-root closure".into(), characteristic: 0 });
    }
    for m in 0..=m_max {
        let cert = alg.is_member(&f.pow(p.pow(m)))?;
        if cert.is_member() {
            return Ok(LevelSearch::Found { level: m, certificate: cert });
        }
    }
    Ok(LevelSearch::NotFound { bound: m_max })
}

/// Smallest `e <= e_max` with `Delta^e f` in the algebra.
pub fn delta_power_level<F: Field>(alg: &mut PolarizedAlgebra<F>, f: &Poly<F>, e_max: u32) -> Result<LevelSearch<F>> {
    let d = delta::<F>(alg.ctx());
    let mut q = f.clone();
    for e in 0..=e_max {
        let cert = alg.is_member(&q)?;
        if cert.is_member() {
            return Ok(LevelSearch::Found { level: e, certificate: cert });
        }
        q = &q * &d;
    }
    Ok(LevelSearch::NotFound { bound: e_max })
}

pub const DEFAULT_M_MAX: u32 = 4;
pub const DEFAULT_E_MAX: u32 = 6;

/// Whether every monomial of `m` lies in columns `1..=n`.
pub fn in_leading_columns(m: &Monomial, n: usize) -> bool {
    m.factors().iter().all(|(v, _)| v.matrix_index().is_none_or(|(_, c)| c <= n))
}
