//! Sparse polynomials in `k`, the Todd unknowns `a_j`, `b_j`, the formal
//! Fourier images `FC_j` and `xi`, with `xi^(r+1) = 0` applied eagerly.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{QAlgebra, Rational, Ring};
use crate::error::{Error, Result};
use crate::tautalg::{TautElement, TautMonomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    K,
    Xi,
    A(u32),
    B(u32),
    Fc(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::K => write!(f, "k"),
            Var::Xi => write!(f, "xi"),
            Var::A(j) => write!(f, "a{j}"),
            Var::B(j) => write!(f, "b{j}"),
            Var::Fc(j) => write!(f, "FC({j})"),
        }
    }
}

/// Exponent vector, sorted by variable with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GrrMonomial(Vec<(Var, u32)>);

impl GrrMonomial {
    pub fn one() -> Self {
        GrrMonomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            GrrMonomial::one()
        } else {
            GrrMonomial(vec![(v, e)])
        }
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn vars(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(v, e)), Some(&(w, f))) if v == w => {
                    out.push((v, e + f));
                    i += 1;
                    j += 1;
                }
                (Some(&(v, e)), Some(&(w, _))) if v < w => {
                    out.push((v, e));
                    i += 1;
                }
                (Some(_), Some(&(w, f))) => {
                    out.push((w, f));
                    j += 1;
                }
                (Some(&x), None) => {
                    out.push(x);
                    i += 1;
                }
                (None, Some(&y)) => {
                    out.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        GrrMonomial(out)
    }

    /// Drops variable `v`, returning its exponent.
    pub fn split_off(&self, v: Var) -> (u32, Self) {
        let e = self.exponent(v);
        (
            e,
            GrrMonomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect()),
        )
    }

    /// `xi` counts 1, `FC_j` counts `j+1`, the rest 0.
    pub fn codim(&self) -> u32 {
        self.0
            .iter()
            .map(|&(v, e)| match v {
                Var::Xi => e,
                Var::Fc(j) => (j + 1) * e,
                _ => 0,
            })
            .sum()
    }

    pub fn has_todd(&self) -> bool {
        self.0
            .iter()
            .any(|(v, _)| matches!(v, Var::A(_) | Var::B(_)))
    }

    /// The `FC` part read as a monomial of `R`.
    pub fn fc_part(&self) -> TautMonomial {
        let mut w = Vec::new();
        for &(v, e) in &self.0 {
            if let Var::Fc(j) = v {
                w.extend(std::iter::repeat_n(j, e as usize));
            }
        }
        TautMonomial::new(w)
    }
}

impl fmt::Display for GrrMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
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

#[derive(Clone, Debug, Default)]
pub struct GrrElement {
    /// `Some(r)` imposes `xi^(r+1) = 0`; `None` for constants not yet tied to one.
    xi_nil: Option<u32>,
    terms: BTreeMap<GrrMonomial, Rational>,
}

impl PartialEq for GrrElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl GrrElement {
    pub fn scalar(q: Rational) -> Self {
        Self::monomial(None, GrrMonomial::one(), q)
    }

    pub fn zero_in(r: u32) -> Self {
        GrrElement {
            xi_nil: Some(r),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(xi_nil: Option<u32>, m: GrrMonomial, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        let dead = xi_nil.is_some_and(|r| m.exponent(Var::Xi) > r);
        if !q.is_zero() && !dead {
            terms.insert(m, q);
        }
        GrrElement { xi_nil, terms }
    }

    pub fn var(r: u32, v: Var) -> Self {
        Self::monomial(Some(r), GrrMonomial::var(v, 1), Rational::one())
    }

    pub fn xi_pow(r: u32, e: u32) -> Self {
        Self::monomial(Some(r), GrrMonomial::var(Var::Xi, e), Rational::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GrrMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn xi_nil(&self) -> Option<u32> {
        self.xi_nil
    }

    fn merged(&self, other: &Self) -> Option<u32> {
        match (self.xi_nil, other.xi_nil) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "xi nilpotency orders differ");
                Some(a)
            }
            (a, b) => a.or(b),
        }
    }

    fn insert(terms: &mut BTreeMap<GrrMonomial, Rational>, m: GrrMonomial, q: Rational) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                if !q.is_zero() {
                    e.insert(q);
                }
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&q);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// All terms of codimension `j`.
    pub fn codim_part(&self, j: u32) -> Self {
        self.filter(|m| m.codim() == j)
    }

    pub fn max_codim(&self) -> Option<u32> {
        self.terms.keys().map(GrrMonomial::codim).max()
    }

    pub fn filter(&self, keep: impl Fn(&GrrMonomial) -> bool) -> Self {
        GrrElement {
            xi_nil: self.xi_nil,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
        }
    }

    /// Coefficient of `v^e`, as an element free of `v`.
    pub fn coeff_of(&self, v: Var, e: u32) -> Self {
        let mut out = GrrElement {
            xi_nil: self.xi_nil,
            terms: BTreeMap::new(),
        };
        for (m, q) in &self.terms {
            let (f, rest) = m.split_off(v);
            if f == e {
                Self::insert(&mut out.terms, rest, q.clone());
            }
        }
        out
    }

    /// Groups by the exponent of `v`.
    pub fn by_power(&self, v: Var) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, q) in &self.terms {
            let (e, rest) = m.split_off(v);
            let entry = out.entry(e).or_insert_with(|| GrrElement {
                xi_nil: self.xi_nil,
                terms: BTreeMap::new(),
            });
            Self::insert(&mut entry.terms, rest, q.clone());
        }
        out
    }

    /// Every term carries at least one `xi`.
    pub fn divisible_by_xi(&self) -> bool {
        self.terms.keys().all(|m| m.exponent(Var::Xi) >= 1)
    }

    pub fn has_todd(&self) -> bool {
        self.terms.keys().any(GrrMonomial::has_todd)
    }

    pub fn substitute(&self, v: Var, value: &Rational) -> Self {
        let mut out = GrrElement {
            xi_nil: self.xi_nil,
            terms: BTreeMap::new(),
        };
        for (m, q) in &self.terms {
            let (e, rest) = m.split_off(v);
            Self::insert(&mut out.terms, rest, q.mul(&value.pow(e)));
        }
        out
    }

    /// Reads a `k`-, `xi`- and Todd-free element as an element of `R`,
    /// sending `FC_j` to `C(j)`.
    pub fn to_taut(&self, g: u32) -> Result<TautElement> {
        let mut out = TautElement::zero_in(g);
        for (m, q) in &self.terms {
            if m.vars().iter().any(|(v, _)| !matches!(v, Var::Fc(_))) {
                return Err(Error::InvariantViolation(format!(
                    "term {m} is not a pure FC monomial"
                )));
            }
            let fc = m.fc_part();
            if fc.max_weight().is_some_and(|w| w >= g) {
                return Err(Error::InvariantViolation(format!(
                    "FC index out of range in {m}"
                )));
            }
            out = out.add(&TautElement::from_monomial(Some(g), fc, q.clone()));
        }
        Ok(out)
    }

    pub fn from_taut(r: u32, x: &TautElement) -> Self {
        let mut out = GrrElement::zero_in(r);
        for (m, q) in x.terms() {
            let mut mono = GrrMonomial::one();
            for &j in m.weights() {
                mono = mono.mul(&GrrMonomial::var(Var::Fc(j), 1));
            }
            Self::insert(&mut out.terms, mono, q.clone());
        }
        out
    }
}

impl Ring for GrrElement {
    fn zero() -> Self {
        GrrElement::default()
    }

    fn one() -> Self {
        GrrElement::scalar(Rational::one())
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = GrrElement {
            xi_nil: self.merged(other),
            terms: self.terms.clone(),
        };
        for (m, q) in &other.terms {
            Self::insert(&mut out.terms, m.clone(), q.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let xi_nil = self.merged(other);
        let mut terms = BTreeMap::new();
        for (m, p) in &self.terms {
            for (n, q) in &other.terms {
                let mn = m.mul(n);
                if xi_nil.is_some_and(|r| mn.exponent(Var::Xi) > r) {
                    continue;
                }
                Self::insert(&mut terms, mn, p.mul(q));
            }
        }
        GrrElement { xi_nil, terms }
    }

    fn neg(&self) -> Self {
        GrrElement {
            xi_nil: self.xi_nil,
            terms: self
                .terms
                .iter()
                .map(|(m, q)| (m.clone(), q.neg()))
                .collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn unit_inverse(&self) -> Option<Self> {
        match self.terms.iter().next() {
            Some((m, q)) if self.terms.len() == 1 && m.vars().is_empty() => Some(GrrElement {
                xi_nil: self.xi_nil,
                ..GrrElement::scalar(q.recip().ok()?)
            }),
            _ => None,
        }
    }
}

impl QAlgebra for GrrElement {
    fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return GrrElement {
                xi_nil: self.xi_nil,
                terms: BTreeMap::new(),
            };
        }
        GrrElement {
            xi_nil: self.xi_nil,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(q)))
                .collect(),
        }
    }
}

impl fmt::Display for GrrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            let (neg, mag) = if q.is_negative() {
                (true, q.neg())
            } else {
                (false, q.clone())
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.vars().is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_is_nilpotent() {
        let xi = GrrElement::var(2, Var::Xi);
        let one_plus = GrrElement::one().add(&xi);
        let cube = one_plus.pow(3);
        // (1 + xi)^3 with xi^3 = 0
        assert_eq!(cube.to_string(), "1 + 3*xi + 3*xi^2");
        assert!(xi.pow(3).is_zero());
    }

    #[test]
    fn codim_and_split() {
        let r = 3;
        let x = GrrElement::var(r, Var::Fc(2))
            .mul(&GrrElement::var(r, Var::Xi))
            .mul(&GrrElement::var(r, Var::K));
        let (m, _) = x.terms().next().unwrap();
        assert_eq!(m.codim(), 4);
        assert_eq!(x.coeff_of(Var::K, 1).to_string(), "xi*FC(2)");
        assert!(x.coeff_of(Var::K, 0).is_zero());
        assert!(x.divisible_by_xi());
        assert!(!GrrElement::var(r, Var::K).divisible_by_xi());
    }

    #[test]
    fn taut_round_trip() {
        let g = 4;
        let c = |j| TautElement::generator(g, j).unwrap();
        let x = c(0)
            .mul(&c(2))
            .scale(&Rational::from(12))
            .add(&c(1).mul(&c(1)).scale(&Rational::from(4)));
        let y = GrrElement::from_taut(2, &x);
        assert_eq!(y.to_taut(g).unwrap(), x);
        assert!(GrrElement::var(2, Var::A(1)).to_taut(g).is_err());
        assert!(GrrElement::var(2, Var::Fc(4)).to_taut(g).is_err());
    }
}
