//! Subgroups `H` of `GL_n` acting on the rows of `x`, `(hF)(x) = F(h^{-1}x)`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, PolyMatrix};
use crate::poly::{Family, Monomial, Poly, Var};
use crate::ring::{combinations, minor, MinorSpec, RingCtx};
use crate::scalar::Field;

/// Default bound on the size of a finite group enumerated by closure.
pub const GROUP_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassicalKind {
    GL,
    SL,
    SOsplit,
    Spsplit,
}

impl fmt::Display for ClassicalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Torsion part of a diagonal character: row `i` carries `weights[i] mod modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Torsion {
    pub modulus: u64,
    pub weights: Vec<i64>,
}

/// A matrix entry in JSON: an integer or a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Int(i64),
    Text(String),
}

impl JsonScalar {
    pub fn to_field<F: Field>(&self) -> Result<F> {
        match self {
            JsonScalar::Int(v) => Ok(F::from_i64(*v)),
            JsonScalar::Text(s) => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (s.trim(), "1"),
                };
                let parse = |t: &str| {
                    t.parse::<BigInt>()
                        .map_err(|_| Error::Input(format!("bad scalar {s:?}")))
                };
                F::from_fraction(&parse(num)?, &parse(den)?)
                    .ok_or_else(|| Error::Input(format!("denominator of {s:?} vanishes")))
            }
        }
    }
}

/// Declarative description of `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "camelCase")]
pub enum GroupSpec {
    /// `H` acts on row `i` by the character with free part `free_weights[i]`
    /// and the `i`-th residue of each torsion factor.
    #[serde(rename_all = "camelCase")]
    Diagonal {
        #[serde(default)]
        free_weights: Vec<Vec<i64>>,
        #[serde(default)]
        torsion: Vec<Torsion>,
    },
    Generated {
        generators: Vec<Vec<Vec<JsonScalar>>>,
        #[serde(default = "default_true")]
        finite: bool,
    },
    Rooted { kind: ClassicalKind, n: usize },
    /// Block upper unitriangular matrices with identity diagonal blocks.
    BlockUnipotent { blocks: Vec<usize> },
}

fn default_true() -> bool {
    true
}

/// The character of a diagonal group on a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterWeight {
    pub free: Vec<i64>,
    pub torsion: Vec<u64>,
}

impl CharacterWeight {
    pub fn is_trivial(&self) -> bool {
        self.free.iter().all(|&v| v == 0) && self.torsion.iter().all(|&v| v == 0)
    }
}

/// Why a polynomial failed an invariance test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness<F: Field> {
    /// A monomial whose diagonal character is nontrivial.
    Character { monomial: Monomial, weight: CharacterWeight },
    /// A monomial with a nonzero weight for the maximal torus.
    TorusWeight { monomial: Monomial, row_degrees: Vec<u32> },
    /// `generator * f - f` for the 0-based generator index.
    Generator { index: usize, difference: Poly<F> },
    /// The root vector `X` with `u(t) = exp(tX)` and the lowest nonzero
    /// `t`-coefficient of `u(t) * f - f`.
    Root { root: Matrix<F>, coefficient: Poly<F> },
    /// Lowest nonzero parameter coefficient of `u * f - f` for the generic
    /// block unipotent `u`.
    Unipotent { parameters: Monomial, coefficient: Poly<F> },
}

impl<F: Field> fmt::Display for Witness<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Character { monomial, weight } => {
                write!(f, "monomial {monomial} has character free={:?} torsion={:?}", weight.free, weight.torsion)
            }
            Witness::TorusWeight { monomial, row_degrees } => {
                write!(f, "monomial {monomial} has torus weight with row degrees {row_degrees:?}")
            }
            Witness::Generator { index, difference } => {
                write!(f, "generator {} moves f by {difference}", index + 1)
            }
            Witness::Root { root, coefficient } => {
                write!(f, "root {root:?} leaves t-coefficient {coefficient}")
            }
            Witness::Unipotent { parameters, coefficient } => {
                write!(f, "coefficient of {parameters} is {coefficient}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariance<F: Field> {
    Invariant,
    NotInvariant(Witness<F>),
}

impl<F: Field> Invariance<F> {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Invariance::Invariant)
    }
}

impl GroupSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let g: GroupSpec = serde_json::from_str(s)?;
        g.check_static()?;
        Ok(g)
    }

    pub fn trivial() -> Self {
        GroupSpec::Diagonal { free_weights: Vec::new(), torsion: Vec::new() }
    }

    pub fn torus(free_weights: Vec<Vec<i64>>) -> Self {
        GroupSpec::Diagonal { free_weights, torsion: Vec::new() }
    }

    /// Scalar action of the cyclic group of order `m` on `k^n`.
    pub fn scalar_roots_of_unity(m: u64, n: usize) -> Self {
        GroupSpec::Diagonal {
            free_weights: Vec::new(),
            torsion: vec![Torsion { modulus: m, weights: vec![1; n] }],
        }
    }

    /// Field-independent well-formedness.
    fn check_static(&self) -> Result<()> {
        match self {
            GroupSpec::Diagonal { free_weights, torsion } => {
                if let Some(r) = free_weights.first().map(Vec::len) {
                    if free_weights.iter().any(|w| w.len() != r) {
                        return Err(Error::InvalidGroup("freeWeights rows differ in length".into()));
                    }
                }
                for t in torsion {
                    if t.modulus < 2 {
                        return Err(Error::InvalidGroup(format!("torsion modulus must be at least 2, got {}", t.modulus)));
                    }
                }
                let mut lens: BTreeSet<usize> = torsion.iter().map(|t| t.weights.len()).collect();
                if !free_weights.is_empty() {
                    lens.insert(free_weights.len());
                }
                if lens.len() > 1 {
                    return Err(Error::InvalidGroup("weight data disagree on n".into()));
                }
            }
            GroupSpec::Generated { generators, .. } => {
                if generators.is_empty() {
                    return Err(Error::InvalidGroup("no generators".into()));
                }
                let n = generators[0].len();
                for g in generators {
                    if g.len() != n || g.iter().any(|r| r.len() != n) {
                        return Err(Error::InvalidGroup("generators must be n x n".into()));
                    }
                }
            }
            GroupSpec::Rooted { kind, n } => {
                if *n == 0 {
                    return Err(Error::InvalidGroup("n must be positive".into()));
                }
                if *kind == ClassicalKind::Spsplit && n % 2 == 1 {
                    return Err(Error::InvalidGroup("Spsplit needs even n".into()));
                }
            }
            GroupSpec::BlockUnipotent { blocks } => {
                if blocks.is_empty() || blocks.contains(&0) {
                    return Err(Error::InvalidGroup("blocks must be a composition of n".into()));
                }
            }
        }
        Ok(())
    }

    /// The `n` this group lives in, when the description fixes it.
    pub fn declared_n(&self) -> Option<usize> {
        match self {
            GroupSpec::Diagonal { free_weights, torsion } => {
                if !free_weights.is_empty() {
                    Some(free_weights.len())
                } else {
                    torsion.first().map(|t| t.weights.len())
                }
            }
            GroupSpec::Generated { generators, .. } => generators.first().map(Vec::len),
            GroupSpec::Rooted { n, .. } => Some(*n),
            GroupSpec::BlockUnipotent { blocks } => Some(blocks.iter().sum()),
        }
    }

    /// Checks the group against a ring and a coefficient field.
    pub fn validate<F: Field>(&self, ctx: RingCtx) -> Result<()> {
        self.check_static()?;
        if let Some(n) = self.declared_n() {
            if n != ctx.n {
                return Err(Error::Dimension(format!("group acts on k^{n} but the ring has n={}", ctx.n)));
            }
        }
        match self {
            GroupSpec::Generated { .. } => {
                for (k, g) in self.generator_matrices::<F>()?.iter().enumerate() {
                    if g.inverse().is_none() {
                        return Err(Error::InvalidGroup(format!("generator {} is singular", k + 1)));
                    }
                }
            }
            GroupSpec::Rooted { kind: ClassicalKind::SOsplit | ClassicalKind::Spsplit, .. }
                if F::characteristic() == 2 =>
            {
                return Err(Error::UnsupportedCharacteristic {
                    what: "orthogonal and symplectic groups".into(),
                    characteristic: 2,
                });
            }
            _ => {}
        }
        Ok(())
    }

    pub fn generator_matrices<F: Field>(&self) -> Result<Vec<Matrix<F>>> {
        let GroupSpec::Generated { generators, .. } = self else {
            return Err(Error::InvalidGroup("not a generated group".into()));
        };
        generators
            .iter()
            .map(|g| {
                let rows = g
                    .iter()
                    .map(|r| r.iter().map(JsonScalar::to_field).collect::<Result<Vec<F>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_rows(rows))
            })
            .collect()
    }

    pub fn from_generators<F: Field>(gens: &[Matrix<F>], finite: bool) -> Self {
        let to_json = |v: &F| match v.to_string().parse::<i64>() {
            Ok(i) => JsonScalar::Int(i),
            Err(_) => JsonScalar::Text(v.to_string()),
        };
        GroupSpec::Generated {
            generators: gens
                .iter()
                .map(|g| g.to_rows().iter().map(|r| r.iter().map(to_json).collect()).collect())
                .collect(),
            finite,
        }
    }

    /// Character of a monomial under a diagonal group.
    pub fn character(&self, m: &Monomial, n: usize) -> Result<CharacterWeight> {
        let GroupSpec::Diagonal { free_weights, torsion } = self else {
            return Err(Error::NotDiagonal);
        };
        Ok(character_of_rows(free_weights, torsion, &row_degrees(m, n)))
    }
}

/// Degree of `m` in each row of `x` (other families are ignored).
pub fn row_degrees(m: &Monomial, n: usize) -> Vec<u32> {
    let mut r = vec![0u32; n];
    for &(v, e) in m.factors() {
        if let Var::X { row, .. } = v {
            let i = row as usize - 1;
            if i < n {
                r[i] += e;
            }
        }
    }
    r
}

fn character_of_rows(free: &[Vec<i64>], torsion: &[Torsion], rows: &[u32]) -> CharacterWeight {
    let rank = free.first().map_or(0, Vec::len);
    let mut fw = vec![0i64; rank];
    for (i, w) in free.iter().enumerate() {
        for (k, &c) in w.iter().enumerate() {
            fw[k] += c * rows[i] as i64;
        }
    }
    let tw = torsion
        .iter()
        .map(|t| {
            let s: i64 = t.weights.iter().zip(rows).map(|(&w, &r)| w * r as i64).sum();
            s.rem_euclid(t.modulus as i64) as u64
        })
        .collect();
    CharacterWeight { free: fw, torsion: tw }
}

/// Row substitution `x(i,j) -> sum_q h(i,q) x(q,j)`, i.e. `F(x) -> F(hx)`.
pub fn act_row<F: Field>(f: &Poly<F>, h: &PolyMatrix<F>) -> Poly<F> {
    let n = h.rows();
    let mut sigma = BTreeMap::new();
    for v in f.variables() {
        let Var::X { row, col } = v else { continue };
        let i = row as usize;
        if i > n {
            continue;
        }
        let mut img = Poly::zero();
        for q in 1..=n {
            let e = h.get(i - 1, q - 1);
            if !e.is_zero() {
                img = &img + &(e * &Poly::x(q, col as usize));
            }
        }
        sigma.insert(v, img);
    }
    f.substitute(&sigma)
}

/// Lowest nonzero `T`-coefficient of `p`, with its parameter monomial.
fn lowest_parameter_coefficient<F: Field>(p: &Poly<F>) -> Option<(Monomial, Poly<F>)> {
    p.collect_by_family(Family::T).into_iter().next()
}

/// Split Gram matrix: antidiagonal ones for `SOsplit`, the antidiagonal
/// form with `+1` in the top half and `-1` below for `Spsplit`.
pub fn gram_matrix<F: Field>(kind: ClassicalKind, n: usize) -> Result<Matrix<F>> {
    let mut m = Matrix::zeros(n, n);
    match kind {
        ClassicalKind::SOsplit => {
            for i in 0..n {
                m.set(i, n - 1 - i, F::one());
            }
        }
        ClassicalKind::Spsplit => {
            if n % 2 == 1 {
                return Err(Error::InvalidGroup("Spsplit needs even n".into()));
            }
            for i in 0..n {
                m.set(i, n - 1 - i, if i < n / 2 { F::one() } else { -F::one() });
            }
        }
        _ => return Err(Error::Input(format!("{kind} has no invariant form"))),
    }
    Ok(m)
}

fn unit<F: Field>(n: usize, i: usize, j: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(n, n);
    m.set(i, j, F::one());
    m
}

fn add<F: Field>(a: &Matrix<F>, b: &Matrix<F>, s: F) -> Matrix<F> {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j).clone() + s.clone() * b.get(i, j).clone());
        }
    }
    out
}

/// Nilpotent root vectors `X` of the Lie algebra, one per root.
///
/// For the orthogonal and symplectic kinds candidates `E_ij +- E_{j'i'}`
/// (with `i' = n+1-i`) are kept when `X^T M + M X = 0` for the Gram matrix `M`.
pub fn root_vectors<F: Field>(kind: ClassicalKind, n: usize) -> Result<Vec<Matrix<F>>> {
    let mut out = Vec::new();
    match kind {
        ClassicalKind::GL | ClassicalKind::SL => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(unit(n, i, j));
                    }
                }
            }
        }
        ClassicalKind::SOsplit | ClassicalKind::Spsplit => {
            if F::characteristic() == 2 {
                return Err(Error::UnsupportedCharacteristic {
                    what: format!("{kind}"),
                    characteristic: 2,
                });
            }
            let gram = gram_matrix::<F>(kind, n)?;
            let bar = |i: usize| n - 1 - i;
            let preserves = |x: &Matrix<F>| {
                let lhs = x.transpose().mul(&gram);
                add(&lhs, &gram.mul(x), F::one()).is_zero()
            };
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let partner = (bar(j), bar(i));
                    if partner == (i, j) {
                        let x = unit(n, i, j);
                        if preserves(&x) {
                            out.push(x);
                        }
                        continue;
                    }
                    if partner < (i, j) {
                        continue;
                    }
                    for s in [-F::one(), F::one()] {
                        let x = add(&unit(n, i, j), &unit(n, partner.0, partner.1), s);
                        if preserves(&x) {
                            out.push(x);
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `exp(tX)` for nilpotent `X`, as a matrix polynomial in `t(param)`.
pub fn root_subgroup<F: Field>(x: &Matrix<F>, param: usize) -> Result<PolyMatrix<F>> {
    let n = x.rows();
    let t = Poly::t(param);
    let mut out = PolyMatrix::identity(n);
    let mut power = x.clone();
    let mut k = 1u64;
    let mut fact = F::one();
    while !power.is_zero() {
        fact = fact * F::from_u64(k);
        let inv = fact.inv().ok_or(Error::UnsupportedCharacteristic {
            what: "exponential of this root vector".into(),
            characteristic: F::characteristic(),
        })?;
        let tk = t.pow(k);
        for i in 0..n {
            for j in 0..n {
                let c = power.get(i, j).clone() * inv.clone();
                if !c.is_zero() {
                    let v = out.get(i, j) + &tk.scale(&c);
                    out.set(i, j, v);
                }
            }
        }
        power = power.mul(x);
        k += 1;
        if k as usize > n + 1 {
            return Err(Error::Input("root vector is not nilpotent".into()));
        }
    }
    Ok(out)
}

/// Torus condition on row degrees for invariance under the maximal torus.
fn torus_ok(kind: ClassicalKind, r: &[u32]) -> bool {
    let n = r.len();
    match kind {
        ClassicalKind::GL => r.iter().all(|&v| v == 0),
        ClassicalKind::SL => r.windows(2).all(|w| w[0] == w[1]),
        ClassicalKind::SOsplit | ClassicalKind::Spsplit => (0..n).all(|i| r[i] == r[n - 1 - i]),
    }
}

/// Generic block unipotent matrix with parameters `t(1), t(2), ...` above
/// the diagonal blocks, row-major.
pub fn generic_block_unipotent<F: Field>(blocks: &[usize]) -> PolyMatrix<F> {
    let n: usize = blocks.iter().sum();
    let mut block_of = Vec::with_capacity(n);
    for (b, &s) in blocks.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, s));
    }
    let mut k = 1;
    PolyMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Poly::one()
        } else if block_of[i] < block_of[j] {
            let p = Poly::t(k);
            k += 1;
            p
        } else {
            Poly::zero()
        }
    })
}

/// Decides whether `f` is fixed by `H`.
pub fn is_invariant<F: Field>(f: &Poly<F>, h: &GroupSpec, ctx: RingCtx) -> Result<Invariance<F>> {
    h.validate::<F>(ctx)?;
    ctx.check_poly(f)?;
    let n = ctx.n;
    match h {
        GroupSpec::Diagonal { .. } => {
            for (m, _) in f.terms() {
                let w = h.character(m, n)?;
                if !w.is_trivial() {
                    return Ok(Invariance::NotInvariant(Witness::Character { monomial: m.clone(), weight: w }));
                }
            }
            Ok(Invariance::Invariant)
        }
        GroupSpec::Generated { .. } => {
            for (index, g) in h.generator_matrices::<F>()?.iter().enumerate() {
                let inv = g.inverse().expect("validated invertible");
                let image = act_row(f, &inv.to_poly());
                let difference = &image - f;
                if !difference.is_zero() {
                    return Ok(Invariance::NotInvariant(Witness::Generator { index, difference }));
                }
            }
            Ok(Invariance::Invariant)
        }
        GroupSpec::Rooted { kind, .. } => {
            for (m, _) in f.terms() {
                let r = row_degrees(m, n);
                if !torus_ok(*kind, &r) {
                    return Ok(Invariance::NotInvariant(Witness::TorusWeight { monomial: m.clone(), row_degrees: r }));
                }
            }
            // u(t) and u(t)^{-1} = u(-t) run over the same subgroup
            for root in root_vectors::<F>(*kind, n)? {
                let u = root_subgroup(&root, 1)?;
                let diff = &act_row(f, &u) - f;
                if let Some((_, coefficient)) = lowest_parameter_coefficient(&diff) {
                    return Ok(Invariance::NotInvariant(Witness::Root { root, coefficient }));
                }
            }
            Ok(Invariance::Invariant)
        }
        GroupSpec::BlockUnipotent { blocks } => {
            let u = generic_block_unipotent::<F>(blocks);
            let diff = &act_row(f, &u) - f;
            match lowest_parameter_coefficient(&diff) {
                Some((parameters, coefficient)) => {
                    Ok(Invariance::NotInvariant(Witness::Unipotent { parameters, coefficient }))
                }
                None => Ok(Invariance::Invariant),
            }
        }
    }
}

/// All monomials of a given degree in the variables of one row.
fn row_monomials(row: usize, d: usize, deg: u32) -> Vec<Monomial> {
    fn rec(row: usize, col: usize, d: usize, left: u32, cur: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_pairs(cur.iter().copied()));
            return;
        }
        if col > d {
            return;
        }
        if col == d {
            cur.push((Var::x(row, col), left));
            out.push(Monomial::from_pairs(cur.iter().copied()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            if e > 0 {
                cur.push((Var::x(row, col), e));
            }
            rec(row, col + 1, d, left - e, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(row, 1, d, deg, &mut Vec::new(), &mut out);
    out
}

/// Row-degree vectors `r` with `|r| = total`.
fn compositions(n: usize, total: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, total, &mut Vec::new(), &mut out);
    out
}

/// Invariant monomials of exactly degree `deg` for a diagonal group, sorted.
pub fn invariant_monomials_of_degree(h: &GroupSpec, ctx: RingCtx, deg: u32) -> Result<Vec<Monomial>> {
    let GroupSpec::Diagonal { free_weights, torsion } = h else {
        return Err(Error::NotDiagonal);
    };
    h.check_static()?;
    if let Some(n) = h.declared_n() {
        if n != ctx.n {
            return Err(Error::Dimension(format!("group acts on k^{n} but the ring has n={}", ctx.n)));
        }
    }
    let mut out = Vec::new();
    for r in compositions(ctx.n, deg) {
        if !character_of_rows(free_weights, torsion, &r).is_trivial() {
            continue;
        }
        let mut acc = vec![Monomial::one()];
        for (i, &ri) in r.iter().enumerate() {
            let row = row_monomials(i + 1, ctx.d, ri);
            acc = acc.iter().flat_map(|a| row.iter().map(move |b| a.mul(b))).collect();
        }
        out.extend(acc);
    }
    out.sort();
    Ok(out)
}

/// All invariant monomials of total degree at most `max_deg`, the constant
/// included, in increasing monomial order.
pub fn invariant_monomials(h: &GroupSpec, ctx: RingCtx, max_deg: u32) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    for deg in 0..=max_deg {
        out.extend(invariant_monomials_of_degree(h, ctx, deg)?);
    }
    Ok(out)
}

/// Invariant monomials that are not products of two nonconstant invariant
/// monomials, complete up to `max_deg`.
pub fn minimal_monomial_generators(h: &GroupSpec, ctx: RingCtx, max_deg: u32) -> Result<Vec<Monomial>> {
    let mut gens: Vec<Monomial> = Vec::new();
    for deg in 1..=max_deg {
        let found: Vec<Monomial> = invariant_monomials_of_degree(h, ctx, deg)?
            .into_iter()
            // a proper invariant divisor always contains a smaller generator,
            // and the cofactor is then invariant as characters are additive
            .filter(|m| !gens.iter().any(|g| m.div(g).is_some()))
            .collect();
        gens.extend(found);
    }
    Ok(gens)
}

/// `<x_i, x_j> = x_i^T M x_j` for the split Gram matrix of `kind`.
pub fn inner_product<F: Field>(kind: ClassicalKind, n: usize, i: usize, j: usize) -> Result<Poly<F>> {
    let m = gram_matrix::<F>(kind, n)?;
    let mut p = Poly::zero();
    for a in 0..n {
        for b in 0..n {
            let c = m.get(a, b);
            if !c.is_zero() {
                p = &p + &(&Poly::x(a + 1, i) * &Poly::x(b + 1, j)).scale(c);
            }
        }
    }
    Ok(p)
}

/// Generators of the invariants of a classical group on `M_{n,d}`.
///
/// `SL`: all `n x n` minors. `SOsplit`: those minors and `<x_i, x_j>` for
/// `i <= j`. `Spsplit`: `<x_i, x_j>` for `i < j`.
pub fn classical_generators<F: Field>(kind: ClassicalKind, ctx: RingCtx) -> Result<Vec<Poly<F>>> {
    let n = ctx.n;
    let minors = || -> Result<Vec<Poly<F>>> {
        combinations(ctx.d, n)
            .into_iter()
            .map(|cols| minor(&MinorSpec::new((1..=n).collect(), cols), ctx))
            .collect()
    };
    if matches!(kind, ClassicalKind::SOsplit | ClassicalKind::Spsplit) && F::characteristic() == 2 {
        return Err(Error::UnsupportedCharacteristic {
            what: format!("{kind} generators"),
            characteristic: 2,
        });
    }
    match kind {
        ClassicalKind::GL => Err(Error::Input("GL has only constant invariants".into())),
        ClassicalKind::SL => minors(),
        ClassicalKind::SOsplit => {
            let mut out = minors()?;
            for i in 1..=ctx.d {
                for j in i..=ctx.d {
                    out.push(inner_product(kind, n, i, j)?);
                }
            }
            Ok(out)
        }
        ClassicalKind::Spsplit => {
            if n % 2 == 1 {
                return Err(Error::InvalidGroup("Spsplit needs even n".into()));
            }
            let mut out = Vec::new();
            for i in 1..=ctx.d {
                for j in i + 1..=ctx.d {
                    out.push(inner_product(kind, n, i, j)?);
                }
            }
            Ok(out)
        }
    }
}

/// `<x_i, x_j>(xg) = sum_{s,t} <x_s, x_t> g(s,i) g(t,j)` for all `i, j`.
/// Returns the first pair where the expansion differs.
pub fn inner_product_formula_failure<F: Field>(kind: ClassicalKind, ctx: RingCtx) -> Result<Option<(usize, usize)>> {
    let g = crate::ring::generic_matrix::<F>(ctx.d);
    let forms: BTreeMap<(usize, usize), Poly<F>> = (1..=ctx.d)
        .flat_map(|i| (1..=ctx.d).map(move |j| (i, j)))
        .map(|(i, j)| inner_product::<F>(kind, ctx.n, i, j).map(|p| ((i, j), p)))
        .collect::<Result<_>>()?;
    for i in 1..=ctx.d {
        for j in 1..=ctx.d {
            let lhs = crate::ring::act_column(&forms[&(i, j)], &g, ctx)?;
            let mut rhs = Poly::zero();
            for s in 1..=ctx.d {
                for t in 1..=ctx.d {
                    rhs = &rhs + &(&forms[&(s, t)] * &(&Poly::g(s, i) * &Poly::g(t, j)));
                }
            }
            if lhs != rhs {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Enumerates a finite matrix group from its generators.
pub fn group_closure<F: Field>(gens: &[Matrix<F>], cap: usize) -> Result<Vec<Matrix<F>>> {
    let n = gens.first().map_or(0, Matrix::rows);
    let id = Matrix::identity(n);
    let mut seen: HashSet<Matrix<F>> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(a) = queue.pop_front() {
        for g in gens {
            let b = a.mul(g);
            if seen.insert(b.clone()) {
                if seen.len() > cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                order.push(b.clone());
                queue.push_back(b);
            }
        }
    }
    Ok(order)
}

/// Coefficients `e_1, ..., e_r` of `prod_i (X + h_i * ell)` over the distinct
/// functionals in the `H`-orbit of `ell` (an `n x d` coefficient matrix).
pub fn orbit_chern<F: Field>(ell: &Matrix<F>, h: &GroupSpec) -> Result<Vec<Poly<F>>> {
    orbit_chern_capped(ell, h, GROUP_CAP)
}

pub fn orbit_chern_capped<F: Field>(ell: &Matrix<F>, h: &GroupSpec, cap: usize) -> Result<Vec<Poly<F>>> {
    let GroupSpec::Generated { finite, .. } = h else {
        return Err(Error::InvalidGroup("orbit Chern classes need a generated finite group".into()));
    };
    if !finite {
        return Err(Error::InvalidGroup("group is not declared finite".into()));
    }
    let gens = h.generator_matrices::<F>()?;
    if gens[0].rows() != ell.rows() {
        return Err(Error::Dimension("functional and group disagree on n".into()));
    }
    let group = group_closure(&gens, cap)?;
    // (h ell)(x) = ell(h^{-1} x) has coefficient matrix (h^{-1})^T c, and
    // h^{-1} runs over the whole group
    let mut orbit: Vec<Matrix<F>> = Vec::new();
    let mut seen = HashSet::new();
    for g in &group {
        let c = g.transpose().mul(ell);
        if seen.insert(c.clone()) {
            orbit.push(c);
        }
    }
    // e_k by the recurrence on prod (X + l_i)
    let mut e: Vec<Poly<F>> = vec![Poly::one()];
    for c in &orbit {
        let l = crate::ring::functional_poly(c);
        let mut next = vec![Poly::zero(); e.len() + 1];
        for (k, ek) in e.iter().enumerate() {
            next[k] = &next[k] + ek;
            next[k + 1] = &next[k + 1] + &(ek * &l);
        }
        e = next;
    }
    Ok(e.into_iter().skip(1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::scalar::Fp;

    type F2 = Fp<2>;
    type F3 = Fp<3>;
    type F5 = Fp<5>;

    fn torus_p2() -> GroupSpec {
        GroupSpec::from_json(r#"{"variant":"diagonal","freeWeights":[[-1],[4]],"torsion":[]}"#).unwrap()
    }

    #[test]
    fn json_forms() {
        let mu3 = GroupSpec::from_json(r#"{"variant":"diagonal","freeWeights":[],"torsion":[{"modulus":3,"weights":[1,1]}]}"#).unwrap();
        assert_eq!(mu3, GroupSpec::scalar_roots_of_unity(3, 2));
        let sl = GroupSpec::from_json(r#"{"variant":"rooted","kind":"SL","n":2}"#).unwrap();
        assert_eq!(sl, GroupSpec::Rooted { kind: ClassicalKind::SL, n: 2 });
        let bu = GroupSpec::from_json(r#"{"variant":"blockUnipotent","blocks":[2,1]}"#).unwrap();
        assert_eq!(bu.declared_n(), Some(3));
        let bad = GroupSpec::from_json(r#"{"variant":"diagonal","freeWeights":[],"torsion":[{"modulus":1,"weights":[1,1]}]}"#);
        assert!(matches!(bad, Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn diagonal_invariance_examples() {
        let c = RingCtx::new(2, 4).unwrap();
        let f: Poly<F2> = parse_poly("x(1,1)^2*x(1,2)^2*x(2,1)").unwrap();
        assert!(is_invariant(&f, &torus_p2(), c).unwrap().is_invariant());
        let f: Poly<F2> = parse_poly("x(1,1)*x(2,1)").unwrap();
        match is_invariant(&f, &torus_p2(), c).unwrap() {
            Invariance::NotInvariant(Witness::Character { weight, .. }) => assert_eq!(weight.free, vec![3]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sl_invariance() {
        let c = RingCtx::new(2, 3).unwrap();
        let sl = GroupSpec::Rooted { kind: ClassicalKind::SL, n: 2 };
        let d: Poly<F5> = crate::ring::delta(c);
        assert!(is_invariant(&d, &sl, c).unwrap().is_invariant());
        let f: Poly<F5> = parse_poly("x(1,1)*x(2,2)").unwrap();
        assert!(!is_invariant(&f, &sl, c).unwrap().is_invariant());
        let f: Poly<F5> = parse_poly("x(1,1)").unwrap();
        assert!(matches!(
            is_invariant(&f, &sl, c).unwrap(),
            Invariance::NotInvariant(Witness::TorusWeight { .. })
        ));
    }

    #[test]
    fn monomial_enumeration_examples() {
        let c = RingCtx::new(2, 2).unwrap();
        let inv = invariant_monomials(&torus_p2(), c, 5).unwrap();
        assert_eq!(inv.len(), 11);
        assert!(inv[0].is_one());
        let triv = invariant_monomials(&GroupSpec::trivial(), c, 1).unwrap();
        assert_eq!(triv.len(), 5);
        let mu3 = GroupSpec::scalar_roots_of_unity(3, 2);
        let inv = invariant_monomials(&mu3, RingCtx::new(2, 3).unwrap(), 2).unwrap();
        assert_eq!(inv, vec![Monomial::one()]);
    }

    #[test]
    fn minimal_generator_examples() {
        let c = RingCtx::new(2, 2).unwrap();
        let gens = minimal_monomial_generators(&torus_p2(), c, 8).unwrap();
        assert_eq!(gens.len(), 10);
        for g in &gens {
            let r = row_degrees(g, 2);
            assert_eq!(r, vec![4, 1]);
        }
        let mu3 = GroupSpec::scalar_roots_of_unity(3, 2);
        let gens = minimal_monomial_generators(&mu3, RingCtx::new(2, 3).unwrap(), 6).unwrap();
        assert_eq!(gens.len(), 56);
        assert!(gens.iter().all(|m| m.degree() == 3));
        let triv = minimal_monomial_generators(&GroupSpec::trivial(), RingCtx::new(2, 3).unwrap(), 3).unwrap();
        assert_eq!(triv.len(), 6);
        assert!(triv.iter().all(|m| m.degree() == 1));
    }

    #[test]
    fn classical_examples() {
        let c = RingCtx::new(2, 3).unwrap();
        let sl = classical_generators::<F5>(ClassicalKind::SL, c).unwrap();
        let expected: Vec<Poly<F5>> = ["(1 2|1 2)", "(1 2|1 3)", "(1 2|2 3)"]
            .iter()
            .map(|s| minor(&s.parse().unwrap(), c).unwrap())
            .collect();
        assert_eq!(sl, expected);

        let c2 = RingCtx::new(2, 2).unwrap();
        let so = classical_generators::<F5>(ClassicalKind::SOsplit, c2).unwrap();
        assert_eq!(so.len(), 4);
        assert_eq!(so[1], parse_poly("2*x(1,1)*x(2,1)").unwrap());
        assert_eq!(so[2], parse_poly("x(1,1)*x(2,2) + x(2,1)*x(1,2)").unwrap());

        let sp = classical_generators::<F5>(ClassicalKind::Spsplit, c).unwrap();
        assert_eq!(sp.len(), 3);
        assert_eq!(sp[0], parse_poly("x(1,1)*x(2,2) - x(2,1)*x(1,2)").unwrap());

        assert!(classical_generators::<F2>(ClassicalKind::SOsplit, c).is_err());
        assert!(classical_generators::<F5>(ClassicalKind::Spsplit, RingCtx::new(3, 3).unwrap()).is_err());
    }

    #[test]
    fn classical_generators_are_invariant() {
        for (kind, n, d) in [
            (ClassicalKind::SL, 2, 3),
            (ClassicalKind::SL, 3, 4),
            (ClassicalKind::SOsplit, 2, 3),
            (ClassicalKind::SOsplit, 3, 3),
            (ClassicalKind::Spsplit, 2, 3),
            (ClassicalKind::Spsplit, 4, 4),
        ] {
            let c = RingCtx::new(n, d).unwrap();
            let h = GroupSpec::Rooted { kind, n };
            for f in classical_generators::<F5>(kind, c).unwrap() {
                assert!(is_invariant(&f, &h, c).unwrap().is_invariant(), "{kind} {f}");
            }
        }
    }

    #[test]
    fn root_counts() {
        assert_eq!(root_vectors::<F5>(ClassicalKind::SL, 3).unwrap().len(), 6);
        // dim so_n - rank: so_4 has 4 roots, so_3 has 2, sp_4 has 8
        assert_eq!(root_vectors::<F5>(ClassicalKind::SOsplit, 4).unwrap().len(), 4);
        assert_eq!(root_vectors::<F5>(ClassicalKind::SOsplit, 3).unwrap().len(), 2);
        assert_eq!(root_vectors::<F5>(ClassicalKind::Spsplit, 4).unwrap().len(), 8);
        assert_eq!(root_vectors::<F5>(ClassicalKind::Spsplit, 2).unwrap().len(), 2);
    }

    #[test]
    fn orbit_chern_examples() {
        let neg = GroupSpec::from_generators(&[Matrix::<F3>::from_i64(&[&[-1]])], true);
        let ell = Matrix::<F3>::from_i64(&[&[1, 0]]);
        let e = orbit_chern(&ell, &neg).unwrap();
        assert_eq!(e, vec![Poly::zero(), parse_poly("-x(1,1)^2").unwrap()]);

        let triv = GroupSpec::from_generators(&[Matrix::<F3>::identity(1)], true);
        assert_eq!(orbit_chern(&ell, &triv).unwrap(), vec![parse_poly("x(1,1)").unwrap()]);

        let swap = GroupSpec::from_generators(&[Matrix::<F5>::from_i64(&[&[0, 1], &[1, 0]])], true);
        let ell = Matrix::<F5>::from_i64(&[&[1, 0], &[0, 0]]);
        let e = orbit_chern(&ell, &swap).unwrap();
        assert_eq!(e, vec![parse_poly("x(1,1)+x(2,1)").unwrap(), parse_poly("x(1,1)*x(2,1)").unwrap()]);
        let c = RingCtx::new(2, 2).unwrap();
        for p in &e {
            assert!(is_invariant(p, &swap, c).unwrap().is_invariant());
        }
    }

    #[test]
    fn closure_cap() {
        let g = Matrix::<F5>::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(group_closure(std::slice::from_ref(&g), 100).unwrap().len(), 5);
        assert!(matches!(group_closure(&[g], 3), Err(Error::GroupTooLarge { cap: 3 })));
    }

    #[test]
    fn block_unipotent_minors() {
        let c = RingCtx::new(3, 4).unwrap();
        let h = GroupSpec::BlockUnipotent { blocks: vec![2, 1] };
        // the last row is fixed; the top 2x2 block mixes in row 3
        let f: Poly<F5> = parse_poly("x(3,2)").unwrap();
        assert!(is_invariant(&f, &h, c).unwrap().is_invariant());
        let f: Poly<F5> = parse_poly("x(1,2)").unwrap();
        assert!(!is_invariant(&f, &h, c).unwrap().is_invariant());
    }
}
