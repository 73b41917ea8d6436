//! The coordinate ring of `n x d` matrices and its structural maps.
//!
//! Variables `x(i,j)` are the entries of a matrix `x` whose columns are the
//! `d` vectors. `GL_d` acts on the right, `(g * F)(x) = F(xg)`, which on
//! variables is the substitution `x(i,j) -> sum_s x(i,s) g(s,j)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, PolyMatrix};
use crate::poly::{Family, Monomial, Poly, Var};
use crate::scalar::Field;

/// Shape of the matrix space `M_{n,d}`, with `1 <= n <= d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingCtx {
    pub n: usize,
    pub d: usize,
}

impl RingCtx {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || n > d {
            return Err(Error::Dimension(format!("need 1 <= n <= d, got n={n}, d={d}")));
        }
        Ok(RingCtx { n, d })
    }

    /// `M_{n,n}`, the source of the embedding `j`.
    pub fn square(&self) -> RingCtx {
        RingCtx { n: self.n, d: self.n }
    }

    pub fn x_vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = (1..=self.d)
            .flat_map(|j| (1..=self.n).map(move |i| Var::x(i, j)))
            .collect();
        v.sort();
        v
    }

    /// The generic point `x` as a polynomial matrix.
    pub fn x_matrix<F: Field>(&self) -> PolyMatrix<F> {
        PolyMatrix::from_fn(self.n, self.d, |i, j| Poly::x(i + 1, j + 1))
    }

    /// Fails unless every `x`-variable of `f` lies inside `M_{n,d}`.
    pub fn check_poly<F: Field>(&self, f: &Poly<F>) -> Result<()> {
        for v in f.variables() {
            if let Var::X { row, col } = v {
                if row as usize > self.n || col as usize > self.d {
                    return Err(Error::InvalidIndex(format!(
                        "{v} is outside M_{{{},{}}}",
                        self.n, self.d
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Column-degree vector of a monomial: entry `j` is the degree in column `j+1`
/// of `x`. Only `x`-variables count.
pub fn column_degrees(m: &Monomial, d: usize) -> Vec<u32> {
    let mut e = vec![0u32; d];
    for &(v, k) in m.factors() {
        if let Var::X { col, .. } = v {
            e[col as usize - 1] += k;
        }
    }
    e
}

/// `j : k[M_{n,n}] -> k[M_{n,d}]`, the identity on variables.
pub fn embed_j<F: Field>(f: &Poly<F>, ctx: RingCtx) -> Result<Poly<F>> {
    for v in f.variables() {
        if let Var::X { row, col } = v {
            if col as usize > ctx.n {
                return Err(Error::ColumnOutOfRange { col: col as usize, n: ctx.n });
            }
            if row as usize > ctx.n {
                return Err(Error::InvalidIndex(format!("row {row} exceeds n={}", ctx.n)));
            }
        }
    }
    Ok(f.clone())
}

/// Right column action `f -> f(xg)` for a `d x d` matrix of polynomials.
pub fn act_column<F: Field>(f: &Poly<F>, g: &PolyMatrix<F>, ctx: RingCtx) -> Result<Poly<F>> {
    if g.rows() != ctx.d || g.cols() != ctx.d {
        return Err(Error::Dimension(format!(
            "column action needs a {d}x{d} matrix, got {}x{}",
            g.rows(),
            g.cols(),
            d = ctx.d
        )));
    }
    let mut sigma = BTreeMap::new();
    for v in f.variables() {
        let Var::X { row, col } = v else { continue };
        let (i, j) = (row as usize, col as usize);
        if j > ctx.d {
            return Err(Error::InvalidIndex(format!("{v} outside {} columns", ctx.d)));
        }
        let mut img = Poly::zero();
        for s in 1..=ctx.d {
            let e = g.get(s - 1, j - 1);
            if !e.is_zero() {
                img = &img + &(&Poly::x(i, s) * e);
            }
        }
        sigma.insert(v, img);
    }
    Ok(f.substitute(&sigma))
}

/// Numeric convenience wrapper for [`act_column`].
pub fn act_column_numeric<F: Field>(f: &Poly<F>, g: &Matrix<F>, ctx: RingCtx) -> Result<Poly<F>> {
    act_column(f, &g.to_poly(), ctx)
}

/// The `d x d` matrix of independent variables `g(s,r)`.
pub fn generic_matrix<F: Field>(d: usize) -> PolyMatrix<F> {
    PolyMatrix::from_fn(d, d, |i, j| Poly::g(i + 1, j + 1))
}

/// Upper unitriangular `d x d` matrix with distinct parameters
/// `t(first), t(first+1), ...` above the diagonal (row-major).
pub fn generic_unitriangular<F: Field>(d: usize, first: usize) -> PolyMatrix<F> {
    let mut k = first;
    PolyMatrix::from_fn(d, d, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Poly::one(),
        std::cmp::Ordering::Less => {
            let p = Poly::t(k);
            k += 1;
            p
        }
        std::cmp::Ordering::Greater => Poly::zero(),
    })
}

/// Lower unitriangular analogue of [`generic_unitriangular`].
pub fn generic_lower_unitriangular<F: Field>(d: usize, first: usize) -> PolyMatrix<F> {
    generic_unitriangular(d, first).transpose()
}

/// All `k`-subsets of `1..=n`, lexicographically.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n - v + 1 < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Row and column index sets of a minor, 1-based and strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        MinorSpec { rows, cols }
    }

    /// The leading `n x n` minor `Delta`.
    pub fn delta(n: usize) -> Self {
        MinorSpec { rows: (1..=n).collect(), cols: (1..=n).collect() }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Checks index ranges against `row_bound x col_bound`.
    pub fn validate(&self, row_bound: usize, col_bound: usize) -> Result<()> {
        let inc = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if self.rows.is_empty() || self.rows.len() != self.cols.len() {
            return Err(Error::InvalidIndex(format!("{self}: row and column sets must be nonempty and of equal size")));
        }
        if !inc(&self.rows) || !inc(&self.cols) {
            return Err(Error::InvalidIndex(format!("{self}: indices must strictly increase")));
        }
        if self.rows[0] == 0 || *self.rows.last().unwrap() > row_bound {
            return Err(Error::InvalidIndex(format!("{self}: rows must lie in 1..={row_bound}")));
        }
        if self.cols[0] == 0 || *self.cols.last().unwrap() > col_bound {
            return Err(Error::InvalidIndex(format!("{self}: columns must lie in 1..={col_bound}")));
        }
        Ok(())
    }
}

impl fmt::Display for MinorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "({} | {})", j(&self.rows), j(&self.cols))
    }
}

impl FromStr for MinorSpec {
    type Err = Error;

    /// Parses `"(1 2 | 1 3)"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Input(format!("minor must look like (1 2 | 1 3), got {s:?}")))?;
        let (r, c) = inner
            .split_once('|')
            .ok_or_else(|| Error::Input(format!("missing '|' in {s:?}")))?;
        let nums = |t: &str| -> Result<Vec<usize>> {
            t.split_whitespace()
                .map(|w| w.parse::<usize>().map_err(|_| Error::Input(format!("bad index {w:?}"))))
                .collect()
        };
        Ok(MinorSpec { rows: nums(r)?, cols: nums(c)? })
    }
}

/// The minor of the generic point `x` of `M_{n,d}`.
pub fn minor<F: Field>(spec: &MinorSpec, ctx: RingCtx) -> Result<Poly<F>> {
    spec.validate(ctx.n, ctx.d)?;
    let rows: Vec<usize> = spec.rows.iter().map(|i| i - 1).collect();
    let cols: Vec<usize> = spec.cols.iter().map(|j| j - 1).collect();
    Ok(ctx.x_matrix::<F>().minor_det(&rows, &cols))
}

/// `Delta`, the determinant of the first `n` columns.
pub fn delta<F: Field>(ctx: RingCtx) -> Poly<F> {
    minor(&MinorSpec::delta(ctx.n), ctx).expect("leading minor is always valid")
}

/// Minor of the generic `d x d` matrix `g`.
pub fn g_minor<F: Field>(spec: &MinorSpec, d: usize) -> Result<Poly<F>> {
    spec.validate(d, d)?;
    let rows: Vec<usize> = spec.rows.iter().map(|i| i - 1).collect();
    let cols: Vec<usize> = spec.cols.iter().map(|j| j - 1).collect();
    Ok(generic_matrix::<F>(d).minor_det(&rows, &cols))
}

/// All minors of size `r` with the given column set.
fn minors_with_cols(ctx: RingCtx, cols: &[usize]) -> Vec<MinorSpec> {
    combinations(ctx.n, cols.len())
        .into_iter()
        .map(|rows| MinorSpec::new(rows, cols.to_vec()))
        .collect()
}

/// Generators of the `U_d`-invariants: minors with arbitrary rows and
/// columns exactly `1..r`, for `r = 1..n`.
pub fn u_invariant_generators<F: Field>(ctx: RingCtx) -> Vec<Poly<F>> {
    u_invariant_minors(ctx)
        .iter()
        .map(|s| minor(s, ctx).expect("valid left-initial minor"))
        .collect()
}

/// Index sets behind [`u_invariant_generators`].
pub fn u_invariant_minors(ctx: RingCtx) -> Vec<MinorSpec> {
    (1..=ctx.n)
        .flat_map(|r| minors_with_cols(ctx, &(1..=r).collect::<Vec<_>>()))
        .collect()
}

/// Solves for the upper unitriangular `u` with `x u = (x_1..x_n, 0..0)`.
///
/// For `j > n`, column `j` of `u` holds the coefficients with
/// `x_j = -(u_{1j} x_1 + ... + u_{nj} x_n)`.
pub fn column_reduce_u<F: Field>(x: &Matrix<F>) -> Result<Matrix<F>> {
    let (n, d) = (x.rows(), x.cols());
    if n > d {
        return Err(Error::Dimension(format!("need n <= d, got {n}x{d}")));
    }
    // [A | -x_{n+1} .. -x_d], reduced, gives A^{-1}(-x_j) in the right block
    let mut aug = Matrix::zeros(n, d);
    for i in 0..n {
        for j in 0..d {
            let v = x.get(i, j).clone();
            aug.set(i, j, if j < n { v } else { -v });
        }
    }
    let (r, pivots) = aug.rref();
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::DependentColumns(n));
    }
    let mut u = Matrix::identity(d);
    for j in n..d {
        for i in 0..n {
            u.set(i, j, r.get(i, j).clone());
        }
    }
    Ok(u)
}

/// `g` and `ell'` with `ell = ell'_pad * g`, where `ell'_pad` is `ell'`
/// followed by `d - n` zero columns. Equivalently, the functional `ell` is
/// the column action of `g^T` on `ell'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalFactor<F: Field> {
    pub g: Matrix<F>,
    pub ell_prime: Matrix<F>,
    /// 0-based indices of the rows of `ell` chosen as independent.
    pub independent_rows: Vec<usize>,
}

impl<F: Field> FunctionalFactor<F> {
    /// `ell'_pad * g`
    pub fn reconstruct(&self) -> Matrix<F> {
        let n = self.ell_prime.rows();
        let d = self.g.rows();
        let mut pad = Matrix::zeros(n, d);
        for i in 0..n {
            for j in 0..n {
                pad.set(i, j, self.ell_prime.get(i, j).clone());
            }
        }
        pad.mul(&self.g)
    }
}

/// A linear functional on `M_{n,d}` viewed as a polynomial `sum c_ij x(i,j)`.
pub fn functional_poly<F: Field>(ell: &Matrix<F>) -> Poly<F> {
    let mut p = Poly::zero();
    for i in 0..ell.rows() {
        for j in 0..ell.cols() {
            p.add_scaled(ell.get(i, j), &Poly::x(i + 1, j + 1));
        }
    }
    p
}

/// Writes a functional on `M_{n,d}` as a column translate of one on `M_{n,n}`.
///
/// Rows are scanned in order and a maximal independent set is selected
/// greedily; these become the leading rows of `g`, which is completed with
/// standard basis vectors in index order.
pub fn factor_functional<F: Field>(ell: &Matrix<F>) -> Result<FunctionalFactor<F>> {
    let (n, d) = (ell.rows(), ell.cols());
    if n > d {
        return Err(Error::Dimension(format!("need n <= d, got {n}x{d}")));
    }
    if ell.is_zero() {
        return Err(Error::ZeroFunctional);
    }
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut rows: Vec<Vec<F>> = chosen.iter().map(|&k| ell.row(k).to_vec()).collect();
        rows.push(ell.row(i).to_vec());
        if Matrix::from_rows(rows).rank() == chosen.len() + 1 {
            chosen.push(i);
        }
    }
    let r = chosen.len();
    let mut g_rows: Vec<Vec<F>> = chosen.iter().map(|&k| ell.row(k).to_vec()).collect();
    for e in 0..d {
        if g_rows.len() == d {
            break;
        }
        let mut unit = vec![F::zero(); d];
        unit[e] = F::one();
        let mut trial = g_rows.clone();
        trial.push(unit.clone());
        if Matrix::from_rows(trial).rank() == g_rows.len() + 1 {
            g_rows.push(unit);
        }
    }
    let g = Matrix::from_rows(g_rows);

    // coefficients of every row of ell in the chosen rows: solve c * B = v_i
    // with B the r x d block of chosen rows, via rref of [B^T | v_i^T]
    let basis = g.column_block(0, d).to_rows()[..r].to_vec();
    let mut ell_prime = Matrix::zeros(n, n);
    for i in 0..n {
        let mut aug = Matrix::zeros(d, r + 1);
        for j in 0..d {
            for (k, b) in basis.iter().enumerate() {
                aug.set(j, k, b[j].clone());
            }
            aug.set(j, r, ell.get(i, j).clone());
        }
        let (red, pivots) = aug.rref();
        debug_assert!(pivots.len() == r && pivots.iter().all(|&p| p < r));
        for (k, &p) in pivots.iter().enumerate() {
            ell_prime.set(i, p, red.get(k, r).clone());
        }
    }
    Ok(FunctionalFactor { g, ell_prime, independent_rows: chosen })
}

/// A pair of tableaux `(D | E)` encoding a product of minors, one per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiTableau {
    #[serde(rename = "D")]
    pub left: Vec<Vec<usize>>,
    #[serde(rename = "E")]
    pub right: Vec<Vec<usize>>,
}

impl BiTableau {
    pub fn new(left: Vec<Vec<usize>>, right: Vec<Vec<usize>>) -> Self {
        BiTableau { left, right }
    }

    /// Equal shapes, weakly decreasing row lengths, strictly increasing rows.
    pub fn check_shape(&self) -> Result<()> {
        if self.left.len() != self.right.len() {
            return Err(Error::Input("D and E must have the same number of rows".into()));
        }
        for (k, (a, b)) in self.left.iter().zip(&self.right).enumerate() {
            if a.len() != b.len() || a.is_empty() {
                return Err(Error::Input(format!("row {} of D and E differ in length", k + 1)));
            }
            if k > 0 && self.left[k - 1].len() < a.len() {
                return Err(Error::Input("row lengths must weakly decrease".into()));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = MinorSpec> + '_ {
        self.left.iter().zip(&self.right).map(|(a, b)| MinorSpec::new(a.clone(), b.clone()))
    }
}

fn tableau_is_standard(t: &[Vec<usize>]) -> bool {
    let rows_ok = t.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
    let cols_ok = t.windows(2).all(|pair| {
        // row lengths weakly decrease, so the lower row is the shorter one
        pair[1].iter().zip(&pair[0]).all(|(lower, upper)| upper <= lower)
    });
    rows_ok && cols_ok
}

/// Rows strictly increase and columns weakly increase, in both tableaux.
pub fn is_standard(bt: &BiTableau) -> bool {
    tableau_is_standard(&bt.left) && tableau_is_standard(&bt.right)
}

/// Product over rows of the minors `(D-row | E-row)`.
pub fn bitableau_poly<F: Field>(bt: &BiTableau, ctx: RingCtx) -> Result<Poly<F>> {
    bt.check_shape()?;
    let mut acc = Poly::one();
    for spec in bt.rows() {
        acc = &acc * &minor(&spec, ctx)?;
    }
    Ok(acc)
}

/// Cauchy-Binet for the maximal minors: for every column set `J`,
/// `(1..n | J)(xg) = sum_I (1..n | I)(x) * (I | J)_g`. Returns the first `J`
/// where the expansion differs.
pub fn cauchy_binet_failure<F: Field>(ctx: RingCtx) -> Result<Option<MinorSpec>> {
    let g = generic_matrix::<F>(ctx.d);
    let rows: Vec<usize> = (1..=ctx.n).collect();
    for cols in combinations(ctx.d, ctx.n) {
        let spec = MinorSpec::new(rows.clone(), cols.clone());
        let lhs = act_column(&minor::<F>(&spec, ctx)?, &g, ctx)?;
        let mut rhs = Poly::zero();
        for inner in combinations(ctx.d, ctx.n) {
            let x_part = minor::<F>(&MinorSpec::new(rows.clone(), inner.clone()), ctx)?;
            let g_part = g_minor::<F>(&MinorSpec::new(inner, cols.clone()), ctx.d)?;
            rhs = &rhs + &(&x_part * &g_part);
        }
        if lhs != rhs {
            return Ok(Some(spec));
        }
    }
    Ok(None)
}

/// True if `f` only involves `x`-variables.
pub fn is_x_only<F: Field>(f: &Poly<F>) -> bool {
    !f.mentions_family(Family::G) && !f.mentions_family(Family::T)
}
