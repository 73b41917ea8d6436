//! Finite-dimensional spans of polynomials in reduced row-echelon form.

use std::collections::BTreeMap;

use crate::poly::{Monomial, Poly};
use crate::scalar::Field;

/// Sparse coordinates over the inputs fed to a [`SpanBasis`], by input index.
pub type Coords<F> = BTreeMap<usize, F>;

/// Reduced row-echelon basis of the span of a sequence of polynomials.
///
/// Each row is monic in its pivot (its leading monomial) and no row has a
/// nonzero coefficient at another row's pivot. Optionally every row records
/// how it was formed from the inserted inputs, which is what membership
/// certificates are built from.
#[derive(Clone, Debug)]
pub struct SpanBasis<F: Field> {
    rows: BTreeMap<Monomial, Row<F>>,
    inputs: usize,
    track: bool,
}

#[derive(Clone, Debug)]
struct Row<F: Field> {
    poly: Poly<F>,
    coords: Coords<F>,
}

/// Outcome of [`SpanBasis::member`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanMembership<F: Field> {
    /// Coordinates over inputs reproducing the query exactly. Empty when
    /// provenance tracking is off.
    Member(Coords<F>),
    /// Reduction of the query modulo the span (never zero).
    NonMember(Poly<F>),
}

impl<F: Field> Default for SpanBasis<F> {
    fn default() -> Self {
        SpanBasis::new()
    }
}

impl<F: Field> SpanBasis<F> {
    /// Empty span that tracks provenance.
    pub fn new() -> Self {
        SpanBasis { rows: BTreeMap::new(), inputs: 0, track: true }
    }

    /// Empty span without provenance; used where only the space matters.
    pub fn untracked() -> Self {
        SpanBasis { rows: BTreeMap::new(), inputs: 0, track: false }
    }

    pub fn from_polys<'a, I>(it: I) -> Self
    where
        I: IntoIterator<Item = &'a Poly<F>>,
    {
        let mut s = SpanBasis::new();
        for p in it {
            s.insert(p.clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn input_count(&self) -> usize {
        self.inputs
    }

    /// Rows in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &Poly<F>> {
        self.rows.values().map(|r| &r.poly)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.keys()
    }

    /// Provenance of the `k`-th row (in pivot order) over the inputs.
    pub fn row_coords(&self, k: usize) -> Option<&Coords<F>> {
        self.rows.values().nth(k).map(|r| &r.coords)
    }

    /// Reduces `v` modulo the span: returns the residual and the multipliers
    /// of the rows that were subtracted, keyed by pivot.
    fn reduce_with_rows(&self, v: &Poly<F>) -> (Poly<F>, Vec<(Monomial, F)>) {
        let mut out = v.clone();
        let mut used = Vec::new();
        // in RREF the pivot entries of v determine the multipliers directly
        for (m, c) in v.terms() {
            if let Some(row) = self.rows.get(m) {
                used.push((m.clone(), c.clone()));
                out.add_scaled(&-c.clone(), &row.poly);
            }
        }
        (out, used)
    }

    pub fn reduce(&self, v: &Poly<F>) -> Poly<F> {
        self.reduce_with_rows(v).0
    }

    pub fn contains(&self, v: &Poly<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Exact membership with coordinates over the inputs.
    pub fn member(&self, v: &Poly<F>) -> SpanMembership<F> {
        let (residual, used) = self.reduce_with_rows(v);
        if !residual.is_zero() {
            return SpanMembership::NonMember(residual);
        }
        let mut coords = Coords::new();
        if self.track {
            for (pivot, c) in used {
                add_coords(&mut coords, &c, &self.rows[&pivot].coords);
            }
        }
        SpanMembership::Member(coords)
    }

    /// Adds `v` as the next input. Returns `true` if the dimension grew.
    pub fn insert(&mut self, v: Poly<F>) -> bool {
        self.insert_reporting(v).is_none()
    }

    /// Like [`insert`](Self::insert), but when `v` is dependent returns the
    /// relation `v = sum coords[i] * input_i` over earlier inputs.
    pub fn insert_reporting(&mut self, v: Poly<F>) -> Option<Coords<F>> {
        let idx = self.inputs;
        self.inputs += 1;
        let (residual, used) = self.reduce_with_rows(&v);
        let mut coords = Coords::new();
        if self.track {
            coords.insert(idx, F::one());
            for (pivot, c) in &used {
                add_coords(&mut coords, &-c.clone(), &self.rows[pivot].coords);
            }
        }
        let (pivot, lead) = match residual.leading() {
            None => {
                // coords now express 0 = v - sum(...); flip to v = sum(...)
                coords.remove(&idx);
                let rel = coords.into_iter().map(|(k, c)| (k, -c)).collect();
                return Some(rel);
            }
            Some((m, c)) => (m.clone(), c.clone()),
        };
        let inv = lead.inv().expect("nonzero leading coefficient");
        let poly = residual.scale(&inv);
        if self.track {
            for c in coords.values_mut() {
                *c = c.clone() * inv.clone();
            }
        }
        // clear the new pivot from existing rows
        for row in self.rows.values_mut() {
            let c = row.poly.coeff(&pivot);
            if !c.is_zero() {
                row.poly.add_scaled(&-c.clone(), &poly);
                if self.track {
                    add_coords(&mut row.coords, &-c, &coords);
                }
            }
        }
        self.rows.insert(pivot, Row { poly, coords });
        None
    }
}

fn add_coords<F: Field>(acc: &mut Coords<F>, c: &F, other: &Coords<F>) {
    for (k, v) in other {
        let s = acc.get(k).cloned().unwrap_or_else(F::zero) + c.clone() * v.clone();
        if s.is_zero() {
            acc.remove(k);
        } else {
            acc.insert(*k, s);
        }
    }
}

/// `sum coords[i] * inputs[i]`
pub fn combine<F: Field>(coords: &Coords<F>, inputs: &[Poly<F>]) -> Poly<F> {
    let mut out = Poly::zero();
    for (k, c) in coords {
        out.add_scaled(c, &inputs[*k]);
    }
    out
}

/// Whether two spans coincide.
pub fn same_span<F: Field>(a: &SpanBasis<F>, b: &SpanBasis<F>) -> bool {
    a.dim() == b.dim() && a.rows().all(|r| b.contains(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(s: &str) -> Poly<Q> {
        parse_poly(s).unwrap()
    }

    fn qi(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    #[test]
    fn member_with_unit_coordinates() {
        let basis = SpanBasis::from_polys(&[q("x(1,1)"), q("x(1,2)")]);
        match basis.member(&q("x(1,1)+x(1,2)")) {
            SpanMembership::Member(c) => {
                assert_eq!(c, Coords::from([(0, qi(1)), (1, qi(1))]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nonmember_residual() {
        let basis = SpanBasis::from_polys(&[q("x(1,1)")]);
        assert_eq!(basis.member(&q("x(1,2)")), SpanMembership::NonMember(q("x(1,2)")));
    }

    #[test]
    fn member_after_elimination() {
        let inputs = [q("x(1,1)+x(1,2)"), q("x(1,2)")];
        let basis = SpanBasis::from_polys(&inputs);
        match basis.member(&q("x(1,1)")) {
            SpanMembership::Member(c) => {
                assert_eq!(c, Coords::from([(0, qi(1)), (1, qi(-1))]));
                assert_eq!(combine(&c, &inputs), q("x(1,1)"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dependent_insert_reports_relation() {
        let mut b = SpanBasis::new();
        assert!(b.insert(q("x(1,1)+x(1,2)")));
        assert!(b.insert(q("x(1,1)-x(1,2)")));
        let rel = b.insert_reporting(q("x(1,1)")).unwrap();
        assert_eq!(rel, Coords::from([(0, Q::new(1.into(), 2.into())), (1, Q::new(1.into(), 2.into()))]));
        assert_eq!(b.dim(), 2);
        assert_eq!(b.input_count(), 3);
    }

    #[test]
    fn rows_are_reduced() {
        let b = SpanBasis::from_polys(&[q("x(1,1)+x(1,2)+x(1,3)"), q("x(1,2)"), q("x(1,1)")]);
        assert_eq!(b.dim(), 3);
        for r in b.rows() {
            assert_eq!(r.len(), 1);
        }
    }
}
