//! Column weights, the functional `h`, the filtration `A_m` and the maps
//! `phi` and `Phi'`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polarize::{module_span, Caps, PolarizedAlgebra};
use crate::poly::{Family, Monomial, Poly};
use crate::ring::{act_column, column_degrees, combinations, g_minor, generic_matrix, MinorSpec, RingCtx};
use crate::scalar::Field;
use crate::span::{same_span, SpanBasis};

/// A `T_d`-weight, written as its column-degree vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GLWeight(pub Vec<i64>);

impl GLWeight {
    pub fn zero(d: usize) -> Self {
        GLWeight(vec![0; d])
    }

    pub fn of_monomial(m: &Monomial, d: usize) -> Self {
        GLWeight(column_degrees(m, d).into_iter().map(i64::from).collect())
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &GLWeight) -> GLWeight {
        GLWeight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Weakly decreasing entries.
    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Multiplicities of the fundamental weights: `e_k = w_k - w_{k+1}`
    /// with `w_{d+1} = 0`.
    pub fn fundamental_multiplicities(&self) -> Result<Vec<u32>> {
        if !self.is_dominant() || self.0.last().is_some_and(|&v| v < 0) {
            return Err(Error::Input(format!("{:?} is not a polynomial dominant weight", self.0)));
        }
        let d = self.d();
        Ok((0..d)
            .map(|k| (self.0[k] - if k + 1 < d { self.0[k + 1] } else { 0 }) as u32)
            .collect())
    }

    /// `sum_k e_k omega_k` with `omega_k = (1, ..., 1, 0, ..., 0)`.
    pub fn from_fundamental(e: &[u32]) -> GLWeight {
        let d = e.len();
        GLWeight((0..d).map(|j| e[j..].iter().map(|&v| v as i64).sum()).collect())
    }
}

/// `h(w) = sum_{i<j} (w_i - w_j) = sum_i (d + 1 - 2i) w_i`.
pub fn h_value(w: &GLWeight) -> i64 {
    let d = w.d() as i64;
    w.0.iter().enumerate().map(|(i, &e)| (d - 1 - 2 * i as i64) * e).sum()
}

fn require_x_only<F: Field>(f: &Poly<F>) -> Result<()> {
    if f.mentions_family(Family::G) || f.mentions_family(Family::T) {
        return Err(Error::Input("expected a polynomial in the x variables only".into()));
    }
    Ok(())
}

/// Splits `f` into `T_d`-weight components.
pub fn t_weight_decompose<F: Field>(f: &Poly<F>, ctx: RingCtx) -> Result<BTreeMap<GLWeight, Poly<F>>> {
    require_x_only(f)?;
    ctx.check_poly(f)?;
    let mut out: BTreeMap<GLWeight, Poly<F>> = BTreeMap::new();
    for (m, c) in f.terms() {
        out.entry(GLWeight::of_monomial(m, ctx.d)).or_default().add_term(m.clone(), c.clone());
    }
    Ok(out)
}

/// Largest `h` over the weights of `<GL_d * f>`, so `f` lies in `A_m` exactly
/// for `m` at least this value.
pub fn filtration_level<F: Field>(f: &Poly<F>, ctx: RingCtx) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    require_x_only(f)?;
    let mut best = i64::MIN;
    for (_, part) in f.homogeneous_parts() {
        let span = module_span(&part, ctx)?;
        for w in span.by_weight.keys() {
            let w = GLWeight(w.iter().map(|&v| v as i64).collect());
            best = best.max(h_value(&w));
        }
    }
    Ok(best)
}

/// The weight components of `f` with `h` equal to `level`.
fn project_level<F: Field>(f: &Poly<F>, d: usize, level: i64) -> Poly<F> {
    f.filter_terms(|m| h_value(&GLWeight::of_monomial(m, d)) == level)
}

/// Sum of the weight components of `f` at `h = filtration_level(f)`; zero
/// when no component reaches the level.
pub fn phi_leading<F: Field>(f: &Poly<F>, ctx: RingCtx) -> Result<Poly<F>> {
    let m = filtration_level(f, ctx)?;
    Ok(project_level(f, ctx.d, m))
}

/// An element of `k[M_{n,d}] (x) k[G]`, written as `sum u_k (x) g_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullElement<F: Field> {
    pub terms: Vec<(Poly<F>, Poly<F>)>,
}

impl<F: Field> HullElement<F> {
    pub fn zero() -> Self {
        HullElement { terms: Vec::new() }
    }

    pub fn single(u: Poly<F>, g: Poly<F>) -> Self {
        HullElement { terms: vec![(u, g)] }
    }

    /// The tensor as one polynomial in the `x` and `g` variables, which
    /// identifies the tensor product faithfully.
    pub fn as_poly(&self) -> Poly<F> {
        let mut acc = Poly::zero();
        for (u, g) in &self.terms {
            acc = &acc + &(u * g);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.as_poly().is_zero()
    }

    /// Canonical form: `x`-parts are RREF rows of the span of the
    /// coefficients, paired with the matching `g`-polynomials.
    pub fn from_poly(p: &Poly<F>) -> Self {
        let by_g = p.collect_by_family(Family::G);
        let mut span = SpanBasis::new();
        let keys: Vec<Monomial> = by_g.keys().cloned().collect();
        for c in by_g.values() {
            span.insert(c.clone());
        }
        let rows: Vec<Poly<F>> = span.rows().cloned().collect();
        let mut g_parts = vec![Poly::zero(); rows.len()];
        // coefficient c_G = sum_k lambda_k row_k, read off at the pivots
        let pivots: Vec<Monomial> = span.pivots().cloned().collect();
        for (gm, c) in keys.iter().zip(by_g.values()) {
            for (k, pivot) in pivots.iter().enumerate() {
                let lam = c.coeff(pivot);
                if !lam.is_zero() {
                    g_parts[k].add_term(gm.clone(), lam);
                }
            }
        }
        HullElement { terms: rows.into_iter().zip(g_parts).collect() }
    }

    pub fn mul(&self, other: &HullElement<F>) -> HullElement<F> {
        HullElement::from_poly(&(&self.as_poly() * &other.as_poly()))
    }
}

impl<F: Field> std::fmt::Display for HullElement<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (u, g)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({u}) (x) ({g})")?;
        }
        Ok(())
    }
}

/// `Phi'_m(f)`: the level-`m` weight part of `f(xg)`, with `g` generic and
/// weights taken in the `x` variables.
pub fn phi_prime_at<F: Field>(f: &Poly<F>, ctx: RingCtx, level: i64) -> Result<Poly<F>> {
    let image = act_column(f, &generic_matrix(ctx.d), ctx)?;
    Ok(project_level(&image, ctx.d, level))
}

/// `Phi'(f)` for nonzero homogeneous `f`.
pub fn phi_prime<F: Field>(f: &Poly<F>, ctx: RingCtx) -> Result<HullElement<F>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let m = filtration_level(f, ctx)?;
    Ok(HullElement::from_poly(&phi_prime_at(f, ctx, m)?))
}

/// Standard right tableaux of the shape with `e_k` rows of length `k`
/// (longest rows on top), entries in `1..=d`.
pub fn standard_right_tableaux(omega: &[u32], d: usize) -> Vec<Vec<Vec<usize>>> {
    let mut lengths = Vec::new();
    for (k, &e) in omega.iter().enumerate().rev() {
        lengths.extend(std::iter::repeat_n(k + 1, e as usize));
    }
    fn rec(
        lengths: &[usize],
        d: usize,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let r = cur.len();
        if r == lengths.len() {
            out.push(cur.clone());
            return;
        }
        for row in combinations(d, lengths[r]) {
            // columns weakly increase downwards
            if let Some(above) = cur.last() {
                if row.iter().zip(above).any(|(b, a)| b < a) {
                    continue;
                }
            }
            cur.push(row);
            rec(lengths, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if lengths.iter().all(|&l| l <= d) {
        rec(&lengths, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Basis of `Y'(omega)`: products over the rows `E_r` of a standard right
/// tableau of the left-initial minors `(1..|E_r| | E_r)` of the generic `g`.
pub fn y_prime_basis<F: Field>(omega: &[u32], d: usize) -> Result<Vec<Poly<F>>> {
    if omega.len() > d {
        return Err(Error::Dimension(format!("{} multiplicities for d={d}", omega.len())));
    }
    let mut cache: BTreeMap<Vec<usize>, Poly<F>> = BTreeMap::new();
    let mut out = Vec::new();
    for tab in standard_right_tableaux(omega, d) {
        let mut p = Poly::one();
        for row in tab {
            let m = match cache.get(&row) {
                Some(m) => m.clone(),
                None => {
                    let m = g_minor(&MinorSpec::new((1..=row.len()).collect(), row.clone()), d)?;
                    cache.insert(row, m.clone());
                    m
                }
            };
            p = &p * &m;
        }
        out.push(p);
    }
    Ok(out)
}

fn pad(omega: &[u32], d: usize) -> Vec<u32> {
    let mut v = omega.to_vec();
    v.resize(d, 0);
    v
}

/// Whether `Y'(omega) Y'(omega')` spans `Y'(omega + omega')`.
pub fn product_rule_check<F: Field>(omega: &[u32], omega_prime: &[u32], d: usize, cap: usize) -> Result<bool> {
    let a = y_prime_basis::<F>(omega, d)?;
    let b = y_prime_basis::<F>(omega_prime, d)?;
    if a.len().saturating_mul(b.len()) > cap {
        return Err(Error::CapExceeded { what: "product count", limit: cap });
    }
    let sum: Vec<u32> = pad(omega, d).iter().zip(pad(omega_prime, d)).map(|(x, y)| x + y).collect();
    let target = SpanBasis::from_polys(&y_prime_basis::<F>(&sum, d)?);
    let mut products = SpanBasis::untracked();
    for p in &a {
        for q in &b {
            products.insert(p * q);
        }
    }
    Ok(same_span(&products, &target))
}

/// One line of a coverage report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageRecord {
    pub pair: usize,
    pub weight: GLWeight,
    pub degree: u32,
    pub covered: bool,
    /// Number of `Y'(omega)` basis elements tested.
    pub tested: usize,
    /// 0-based indices of basis elements `y` with `a (x) y` not covered.
    pub missing: Vec<usize>,
}

/// Tests `a_i (x) Y'(omega_i)` against the `Phi'`-image of the polarized
/// algebra's component in the degree of `a_i`, where the algebra is generated
/// by the modules `<GL_d * s>` of the seeds `alg_seeds`.
pub fn check_hull_coverage<F: Field>(
    u_gens: &[(Poly<F>, GLWeight)],
    alg_seeds: &[Poly<F>],
    ctx: RingCtx,
    degree_cap: u32,
    caps: Caps,
) -> Result<Vec<CoverageRecord>> {
    let mut alg = PolarizedAlgebra::from_module_seeds(alg_seeds, ctx, caps)?;
    let mut out = Vec::new();
    for (pair, (a, w)) in u_gens.iter().enumerate() {
        if w.d() != ctx.d {
            return Err(Error::Dimension(format!("weight {:?} has length != d={}", w.0, ctx.d)));
        }
        let omega = w.fundamental_multiplicities()?;
        let degree = if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        } else if !a.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        } else {
            a.degree().unwrap_or(0)
        };
        if degree > degree_cap {
            return Err(Error::CapExceeded { what: "coverage degree", limit: degree_cap as usize });
        }
        let m = h_value(w);
        let image = phi_image_at_level(&mut alg, degree, m, caps)?;
        let ys = y_prime_basis::<F>(&omega, ctx.d)?;
        let missing: Vec<usize> = ys
            .iter()
            .enumerate()
            .filter(|(_, y)| !image.contains(&(a * *y)))
            .map(|(k, _)| k)
            .collect();
        out.push(CoverageRecord { pair, weight: w.clone(), degree, covered: missing.is_empty(), tested: ys.len(), missing });
    }
    Ok(out)
}

/// Span of `Phi'_m(b)` over `b` in the degree-`degree` component with all
/// module weights at level `<= m`.
fn phi_image_at_level<F: Field>(
    alg: &mut PolarizedAlgebra<F>,
    degree: u32,
    m: i64,
    caps: Caps,
) -> Result<SpanBasis<F>> {
    let ctx = alg.ctx();
    let comp: Vec<Poly<F>> = alg.component(degree)?.rows().cloned().collect();
    if comp.len() > caps.max_products {
        return Err(Error::CapExceeded { what: "component size", limit: caps.max_products });
    }
    let g = generic_matrix::<F>(ctx.d);
    // kernel of b -> (parts of g*b above level m) is A_m in this degree
    let mut above = SpanBasis::new();
    let mut level_images = Vec::with_capacity(comp.len());
    let mut kernel: Vec<BTreeMap<usize, F>> = Vec::new();
    for (k, b) in comp.iter().enumerate() {
        let img = act_column(b, &g, ctx)?;
        let hi = img.filter_terms(|mono| h_value(&GLWeight::of_monomial(mono, ctx.d)) > m);
        level_images.push(project_level(&img, ctx.d, m));
        if let Some(rel) = above.insert_reporting(hi) {
            let mut v: BTreeMap<usize, F> = rel.into_iter().map(|(i, c)| (i, -c)).collect();
            v.insert(k, F::one());
            kernel.push(v);
        }
    }
    let mut image = SpanBasis::untracked();
    for v in kernel {
        let mut p = Poly::zero();
        for (i, c) in v {
            p.add_scaled(&c, &level_images[i]);
        }
        image.insert(p);
    }
    Ok(image)
}

/// `D_r`: Gram determinant of the split form on `x_1..x_r`.
pub fn gram_determinant<F: Field>(kind: crate::group::ClassicalKind, n: usize, r: usize) -> Result<Poly<F>> {
    let mut entries = Vec::with_capacity(r * r);
    for i in 1..=r {
        for j in 1..=r {
            entries.push(crate::group::inner_product::<F>(kind, n, i, j)?);
        }
    }
    let pm = crate::matrix::PolyMatrix::from_fn(r, r, |i, j| entries[i * r + j].clone());
    Ok(pm.det())
}

/// `Phi'((1..n | J)) = Delta (x) (1..n | J)_g` for every maximal column set
/// `J`. Returns the first `J` where this fails.
pub fn phi_prime_minor_failure<F: Field>(ctx: RingCtx) -> Result<Option<MinorSpec>> {
    let rows: Vec<usize> = (1..=ctx.n).collect();
    let delta = crate::ring::delta::<F>(ctx);
    for cols in combinations(ctx.d, ctx.n) {
        let spec = MinorSpec::new(rows.clone(), cols);
        let lhs = phi_prime(&crate::ring::minor::<F>(&spec, ctx)?, ctx)?;
        let rhs = HullElement::single(delta.clone(), g_minor(&spec, ctx.d)?);
        if lhs.as_poly() != rhs.as_poly() {
            return Ok(Some(spec));
        }
    }
    Ok(None)
}

/// For the split orthogonal form: `Phi'` of the `r x r` Gram minor on
/// columns `I` and `J` is `D_r (x) (1..r | I)_g (1..r | J)_g`. Returns the
/// first `(I, J)` where this fails.
pub fn phi_prime_gram_failure<F: Field>(ctx: RingCtx, r: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    use crate::group::{inner_product, ClassicalKind};
    let kind = ClassicalKind::SOsplit;
    let d_r = gram_determinant::<F>(kind, ctx.n, r)?;
    let left: Vec<usize> = (1..=r).collect();
    for is in combinations(ctx.d, r) {
        for js in combinations(ctx.d, r) {
            let mut entries = Vec::with_capacity(r * r);
            for &i in &is {
                for &j in &js {
                    entries.push(inner_product::<F>(kind, ctx.n, i, j)?);
                }
            }
            let gram = crate::matrix::PolyMatrix::from_fn(r, r, |a, b| entries[a * r + b].clone());
            let f = gram.det();
            if f.is_zero() {
                continue;
            }
            let lhs = phi_prime(&f, ctx)?;
            let g_part = &g_minor::<F>(&MinorSpec::new(left.clone(), is.clone()), ctx.d)?
                * &g_minor::<F>(&MinorSpec::new(left.clone(), js.clone()), ctx.d)?;
            if lhs.as_poly() != &d_r * &g_part {
                return Ok(Some((is, js)));
            }
        }
    }
    Ok(None)
}
