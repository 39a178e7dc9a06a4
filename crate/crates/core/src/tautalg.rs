//! The free bigraded algebra `R` on `C(0), ..., C(g-1)` and the polynomials
//! `G(t)`, `H(u, t)` with coefficients in it.
//!
//! The product is the Pontryagin product, modelled as a free commutative
//! product: a monomial is a multiset of generator weights, stored as a
//! weakly decreasing sequence. `C(j)` has bidegree `(1, j)`. No vanishing
//! beyond freeness is imposed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{DensePoly, QAlgebra, Rational, Ring};
use crate::combinat::{p_poly, PRoute};
use crate::error::{invalid, Error, Result};

/// Multiset of generator weights, kept in weakly decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TautMonomial(Vec<u32>);

impl TautMonomial {
    pub fn new(mut weights: Vec<u32>) -> Self {
        weights.sort_unstable_by(|a, b| b.cmp(a));
        TautMonomial(weights)
    }

    pub fn one() -> Self {
        TautMonomial(Vec::new())
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    /// `(s, w)`: number of factors and total weight.
    pub fn bidegree(&self) -> (u32, u32) {
        (self.0.len() as u32, self.0.iter().sum())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] >= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        TautMonomial(out)
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.0.first().copied()
    }
}

/// Bidegree first, then reverse lexicographic on the weights, so that
/// `C(0)*C(2)` sorts before `C(1)^2`.
impl Ord for TautMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bidegree()
            .cmp(&other.bidegree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for TautMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TautMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = self.0.len();
        while i > 0 {
            let w = self.0[i - 1];
            let mut j = i - 1;
            while j > 0 && self.0[j - 1] == w {
                j -= 1;
            }
            let mult = i - j;
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "C({w})")?;
            if mult > 1 {
                write!(f, "^{mult}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// All monomials of bidegree `(s, w)` with weights in `0..g`, in canonical
/// order.
pub fn monomials_of_bidegree(g: u32, s: u32, w: u32) -> Vec<TautMonomial> {
    fn go(remaining: u32, weight: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<TautMonomial>) {
        if remaining == 0 {
            if weight == 0 {
                out.push(TautMonomial(cur.clone()));
            }
            return;
        }
        if weight > cap * remaining {
            return;
        }
        for j in (0..=cap.min(weight)).rev() {
            cur.push(j);
            go(remaining - 1, weight - j, j, cur, out);
            cur.pop();
        }
    }
    if g == 0 {
        return if s == 0 && w == 0 {
            vec![TautMonomial::one()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    go(s, w, g - 1, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Element of `R`: a finite `Q`-combination of monomials.
///
/// `genus` is unset for elements built without reference to a genus
/// (scalars, the ring zero and one); those combine with any genus.
#[derive(Clone, Debug, Default)]
pub struct TautElement {
    genus: Option<u32>,
    terms: BTreeMap<TautMonomial, Rational>,
}

impl PartialEq for TautElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

fn merge_genus(a: Option<u32>, b: Option<u32>) -> Result<Option<u32>> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::GenusMismatch(x, y)),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
        (None, None) => Ok(None),
    }
}

impl TautElement {
    pub fn generator(g: u32, j: u32) -> Result<Self> {
        if j >= g {
            return Err(invalid(format!("C({j}) does not exist for g = {g}")));
        }
        Ok(Self::from_monomial(
            Some(g),
            TautMonomial(vec![j]),
            Rational::one(),
        ))
    }

    pub fn scalar(q: Rational) -> Self {
        Self::from_monomial(None, TautMonomial::one(), q)
    }

    pub fn zero_in(g: u32) -> Self {
        TautElement {
            genus: Some(g),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(genus: Option<u32>, m: TautMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        TautElement { genus, terms }
    }

    /// Builds an element from `(weights, coefficient)` pairs, validating the
    /// weights against `g`.
    pub fn from_terms(
        g: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero_in(g);
        for (w, c) in terms {
            if let Some(&bad) = w.iter().find(|&&j| j >= g) {
                return Err(invalid(format!("weight {bad} out of range for g = {g}")));
            }
            out.add_term(TautMonomial::new(w), &c);
        }
        Ok(out)
    }

    pub fn genus(&self) -> Option<u32> {
        self.genus
    }

    pub fn with_genus(mut self, g: u32) -> Self {
        self.genus = Some(g);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TautMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &TautMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: TautMonomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let v = e.get().add(c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let genus = merge_genus(self.genus, other.genus)?;
        let mut out = TautElement {
            genus,
            terms: self.terms.clone(),
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let genus = merge_genus(self.genus, other.genus)?;
        let mut out = TautElement {
            genus,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Bidegree, when the element is nonzero and homogeneous.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(TautMonomial::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.is_empty() || self.bidegree().is_some()
    }

    /// Decomposition into homogeneous pieces keyed by bidegree.
    pub fn homogeneous_components(&self) -> BTreeMap<(u32, u32), TautElement> {
        let mut out: BTreeMap<(u32, u32), TautElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bidegree())
                .or_insert_with(|| TautElement {
                    genus: self.genus,
                    terms: BTreeMap::new(),
                })
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Coefficient of the first monomial in canonical order.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next()
    }
}

/// Product in `R`. Elements of different genus cannot be multiplied.
pub fn taut_mul(x: &TautElement, y: &TautElement) -> Result<TautElement> {
    x.try_mul(y)
}

impl Ring for TautElement {
    fn zero() -> Self {
        TautElement::default()
    }
    fn one() -> Self {
        TautElement::scalar(Rational::one())
    }
    /// Panics on elements of different genus.
    fn add(&self, other: &Self) -> Self {
        self.try_add(other)
            .expect("adding elements of different genus")
    }
    /// Panics on elements of different genus.
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other)
            .expect("multiplying elements of different genus")
    }
    fn neg(&self) -> Self {
        TautElement {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn unit_inverse(&self) -> Option<Self> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && m.0.is_empty() => {
                Some(TautElement::scalar(c.recip().ok()?))
            }
            _ => None,
        }
    }
}

impl QAlgebra for TautElement {
    fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return TautElement {
                genus: self.genus,
                terms: BTreeMap::new(),
            };
        }
        TautElement {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(q)))
                .collect(),
        }
    }
}

/// Canonical rendering, e.g. `12*C(0)*C(2) + 4*C(1)^2`.
impl fmt::Display for TautElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.0.is_empty() {
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

/// One `(monomial, coefficient)` pair of the JSON element encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementTerm {
    pub monomial: Vec<u32>,
    pub coeff: Rational,
}

impl TautElement {
    pub fn to_json_terms(&self) -> Vec<ElementTerm> {
        self.terms
            .iter()
            .map(|(m, c)| ElementTerm {
                monomial: m.0.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_json_terms(g: u32, terms: &[ElementTerm]) -> Result<Self> {
        Self::from_terms(
            g,
            terms.iter().map(|t| (t.monomial.clone(), t.coeff.clone())),
        )
    }
}

type UPoly = DensePoly<TautElement>;

/// Polynomial in `t` whose coefficients are polynomials in `u` over `R`.
///
/// `t_order = Some(T)` means coefficients of `t^n` for `n >= T` are unknown;
/// `None` marks an exact polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct BivarPoly {
    coeffs: Vec<UPoly>,
    t_order: Option<usize>,
}

fn min_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl BivarPoly {
    pub fn new(mut coeffs: Vec<UPoly>, t_order: Option<usize>) -> Self {
        if let Some(t) = t_order {
            coeffs.truncate(t);
        }
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        BivarPoly { coeffs, t_order }
    }

    pub fn t_order(&self) -> Option<usize> {
        self.t_order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^n`, a polynomial in `u`.
    pub fn t_coeff(&self, n: usize) -> Result<UPoly> {
        if let Some(t) = self.t_order {
            if n >= t {
                return Err(Error::BeyondTruncation {
                    exponent: n as i64,
                    order: t as i64,
                });
            }
        }
        Ok(self.coeffs.get(n).cloned().unwrap_or_else(UPoly::zero))
    }

    /// Nonzero `t`-coefficients in increasing exponent.
    pub fn t_terms(&self) -> impl Iterator<Item = (usize, &UPoly)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn t_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn u_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(DensePoly::degree).max()
    }

    /// Product, known below `min(natural order, t_order)`.
    pub fn mul(&self, other: &Self, t_order: Option<usize>) -> Self {
        let natural = {
            let va = self.t_valuation();
            let vb = other.t_valuation();
            let a = self.t_order.map(|t| t + vb.unwrap_or(0));
            let b = other.t_order.map(|t| t + va.unwrap_or(0));
            min_order(a, b)
        };
        let order = min_order(natural, t_order);
        if self.is_zero() || other.is_zero() {
            return BivarPoly::new(Vec::new(), order);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(order.unwrap_or(usize::MAX));
        let mut out = vec![UPoly::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BivarPoly::new(out, order)
    }

    /// Substitutes a rational value for `u`, giving a polynomial in `t`.
    pub fn eval_u(&self, u: &Rational) -> DensePoly<TautElement> {
        let u = TautElement::scalar(u.clone());
        DensePoly::new(self.coeffs.iter().map(|c| c.eval(&u)).collect())
    }

    /// The `u^0` part as a polynomial in `t`.
    pub fn u_constant_part(&self) -> DensePoly<TautElement> {
        DensePoly::new(self.coeffs.iter().map(|c| c.coeff(0)).collect())
    }
}

fn check_genus(g: u32) -> Result<()> {
    if g < 1 {
        return Err(invalid(format!("genus must be >= 1, got {g}")));
    }
    Ok(())
}

/// `G(t) = sum_{a < g} (a+1)! C(a) t^(a+2)`.
#[allow(non_snake_case)]
pub fn build_G(g: u32) -> Result<BivarPoly> {
    check_genus(g)?;
    let mut coeffs = vec![UPoly::zero(); g as usize + 2];
    for a in 0..g {
        let c = TautElement::generator(g, a)?.scale(&Rational::factorial(a + 1));
        coeffs[a as usize + 2] = UPoly::constant(c);
    }
    Ok(BivarPoly::new(coeffs, None))
}

/// `H(u, t) = sum_{a < g} P_{a+2}(u) C(a) t^(a+2)`.
#[allow(non_snake_case)]
pub fn build_H(g: u32) -> Result<BivarPoly> {
    check_genus(g)?;
    let mut coeffs = vec![UPoly::zero(); g as usize + 2];
    for a in 0..g {
        let gen = TautElement::generator(g, a)?;
        let p = p_poly(a + 2, PRoute::Stirling)?;
        coeffs[a as usize + 2] = p.coeffs.map(|c| gen.scale(c));
    }
    Ok(BivarPoly::new(coeffs, None))
}

/// `p^s` known below `t^t_order`, truncating after every multiplication.
pub fn poly_power(p: &BivarPoly, s: u32, t_order: usize) -> Result<BivarPoly> {
    if s < 1 {
        return Err(invalid("poly_power needs s >= 1"));
    }
    let base = BivarPoly::new(p.coeffs.clone(), min_order(p.t_order, Some(t_order)));
    let mut acc = base.clone();
    for _ in 1..s {
        acc = acc.mul(p, Some(t_order));
    }
    Ok(acc)
}
