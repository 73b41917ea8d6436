use std::cmp::Ordering;
use std::fmt;

use super::var::{Family, Var};

/// A power product, stored as `(variable, exponent)` pairs sorted by
/// variable with every exponent positive.
///
/// Ordering is graded: total degree first, then lexicographic on exponents
/// with the smallest variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::pow_of(v, 1)
    }

    pub fn pow_of(v: Var, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial { factors: vec![(v, e)], degree: e }
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Monomial {
        let mut v: Vec<(Var, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_by_key(|&(var, _)| var);
        let mut factors: Vec<(Var, u32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match factors.last_mut() {
                Some((last, le)) if *last == var => *le += e,
                _ => factors.push((var, e)),
            }
        }
        let degree = factors.iter().map(|&(_, e)| e).sum();
        Monomial { factors, degree }
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .binary_search_by_key(&v, |&(var, _)| var)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn family_degree(&self, fam: Family) -> u32 {
        self.factors
            .iter()
            .filter(|(v, _)| v.family() == fam)
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out, degree: self.degree + other.degree }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self.factors.iter().map(|&(v, x)| (v, x * e)).collect(),
            degree: self.degree * e,
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for &(v, e) in &self.factors {
            if j < other.factors.len() && other.factors[j].0 < v {
                return None;
            }
            if j < other.factors.len() && other.factors[j].0 == v {
                let oe = other.factors[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - oe)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { degree: self.degree - other.degree, factors: out })
    }

    /// Splits into the part in `fam` and the rest.
    pub fn split_family(&self, fam: Family) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) =
            self.factors.iter().partition(|(v, _)| v.family() == fam);
        (Monomial::from_sorted(a), Monomial::from_sorted(b))
    }

    fn from_sorted(factors: Vec<(Var, u32)>) -> Monomial {
        let degree = factors.iter().map(|&(_, e)| e).sum();
        Monomial { factors, degree }
    }

    /// All monomial divisors, including `1` and `self`.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        for &(v, e) in &self.factors {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for m in &out {
                for k in 0..=e {
                    next.push(m.mul(&Monomial::pow_of(v, k)));
                }
            }
            out = next;
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.factors.iter().zip(other.factors.iter()) {
                if a.0 != b.0 {
                    // the monomial containing the smaller variable is larger
                    return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            // equal degree and a common prefix: the lists have equal length
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
