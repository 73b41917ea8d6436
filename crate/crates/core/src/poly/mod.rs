//! Sparse multivariate polynomials over a [`Field`].

mod monomial;
mod parse;
mod var;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use monomial::Monomial;
pub use parse::{parse_poly, parse_poly_list, ParseError};
pub use var::{Family, Var};

use crate::scalar::Field;

/// A polynomial: a map from monomials to nonzero coefficients.
///
/// The zero polynomial is the empty map. Iteration order is ascending in the
/// graded monomial order, which makes every derived structure deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn term(c: F, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly::term(F::one(), m)
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Monomial::var(v))
    }

    pub fn x(row: usize, col: usize) -> Self {
        Poly::var(Var::x(row, col))
    }

    pub fn g(row: usize, col: usize) -> Self {
        Poly::var(Var::g(row, col))
    }

    pub fn t(k: usize) -> Self {
        Poly::var(Var::t(k))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, F> {
        self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Largest monomial in the graded order, with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &F, other: &Poly<F>) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), c.clone() * a.clone());
        }
    }

    pub fn scale(&self, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly<F> {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Homogeneous components keyed by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Poly<F>> {
        let mut out: BTreeMap<u32, Poly<F>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().terms.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn mentions_family(&self, fam: Family) -> bool {
        self.terms.keys().any(|m| m.vars().any(|v| v.family() == fam))
    }

    pub fn pow(&self, mut e: u64) -> Poly<F> {
        let mut acc = Poly::one();
        if e == 0 {
            return acc;
        }
        // a single term powers without expansion
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return Poly::term(c.pow_u64(e), m.pow(e as u32));
        }
        let mut base = self.clone();
        loop {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        acc
    }

    /// Simultaneous substitution of the variables in `sigma`; others are kept.
    pub fn substitute(&self, sigma: &BTreeMap<Var, Poly<F>>) -> Poly<F> {
        let mut power_cache: HashMap<(Var, u32), Poly<F>> = HashMap::new();
        let mut acc: HashMap<Monomial, F> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut prod = Poly::constant(c.clone());
            for &(v, e) in m.factors() {
                match sigma.get(&v) {
                    Some(img) => {
                        let pw = power_cache
                            .entry((v, e))
                            .or_insert_with(|| img.pow(e as u64))
                            .clone();
                        prod = &prod * &pw;
                        if prod.is_zero() {
                            break;
                        }
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial::from_pairs(kept);
            for (pm, pc) in prod.terms {
                accumulate(&mut acc, pm.mul(&kept), pc);
            }
        }
        Poly::from_map(acc)
    }

    /// Evaluates every variable; missing variables are an error reported as `Err(var)`.
    pub fn eval(&self, point: &dyn Fn(Var) -> Option<F>) -> Result<F, Var> {
        let mut total = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let val = point(v).ok_or(v)?;
                t = t * val.pow_u64(e as u64);
            }
            total = total + t;
        }
        Ok(total)
    }

    /// Groups terms by their part in `fam`: `self = sum_k key_k * value_k`,
    /// where each key is a monomial in `fam` and values avoid `fam`.
    pub fn collect_by_family(&self, fam: Family) -> BTreeMap<Monomial, Poly<F>> {
        let mut out: BTreeMap<Monomial, Poly<F>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, rest) = m.split_family(fam);
            out.entry(inside).or_default().terms.insert(rest, c.clone());
        }
        out
    }

    /// Keeps the terms satisfying `pred`.
    pub fn filter_terms(&self, mut pred: impl FnMut(&Monomial) -> bool) -> Poly<F> {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly<F> {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    fn from_map(acc: HashMap<Monomial, F>) -> Poly<F> {
        Poly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

fn accumulate<F: Field>(acc: &mut HashMap<Monomial, F>, m: Monomial, c: F) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get().clone() + c;
            *e.get_mut() = s;
        }
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let mut out = self.clone();
        out.add_scaled(&F::one(), rhs);
        out
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let mut out = self.clone();
        out.add_scaled(&-F::one(), rhs);
        out
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Monomial, F> = HashMap::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                accumulate(&mut acc, ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Poly::from_map(acc)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Poly<F>) -> Poly<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Poly<F>) -> Poly<F> {
        &self - &rhs
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Poly<F>) -> Poly<F> {
        &self * &rhs
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    /// Terms in descending monomial order, in the input grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_repr();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
