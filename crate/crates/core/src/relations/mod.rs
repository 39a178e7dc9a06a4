//! The relation families on `R` for a curve with a `g^r_d`, and the
//! machinery that compares the ideals they generate.
//!
//! * `theorem1`: `sum_{a_1+..+a_r=N} (a_1+1)!..(a_r+1)! C(a_1)..C(a_r)` for
//!   `N >= d - 2r + 1`.
//! * `vdgk6`: the `t^n` coefficients of `G(t)^s` with `n > d - r + s`.
//! * `herbaut7`: the `t`-coefficients of `[u^(d-r+s)] H(u,t)^s / (1+u)`.
//! * `strong8`: the `u^m t^n` coefficients of `H(u,t)^s` with `m > d - r + s`.

mod chain;
mod epsilon;
mod span;

pub use chain::{
    scalar_checks, verify_implication_chain, ChainOrders, ChainReport, ExtractionCheck,
    ScalarCheck, SeriesCheck,
};
pub use epsilon::{epsilon_series, g_substituted, h_inverse_x, EpsilonReport, TPoly};
pub use span::{
    compare_ideals, BidegreeBound, GradedSpan, IdealComparison, PieceComparison, SpanPiece,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{Rational, Ring};
use crate::error::{invalid, Error, Result};
use crate::tautalg::{
    build_G, build_H, monomials_of_bidegree, poly_power, ElementTerm, TautElement,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    #[serde(rename = "vdgk6")]
    GPowers,
    #[serde(rename = "herbaut7")]
    HQuotient,
    #[serde(rename = "strong8")]
    HPowers,
    #[serde(rename = "theorem1")]
    ClosedForm,
}

impl FamilyId {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::GPowers => "vdgk6",
            FamilyId::HQuotient => "herbaut7",
            FamilyId::HPowers => "strong8",
            FamilyId::ClosedForm => "theorem1",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vdgk6" => Ok(FamilyId::GPowers),
            "herbaut7" => Ok(FamilyId::HQuotient),
            "strong8" => Ok(FamilyId::HPowers),
            "theorem1" => Ok(FamilyId::ClosedForm),
            other => Err(invalid(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationItem {
    pub s: u32,
    pub t_exp: u32,
    /// Source `u`-exponent, for the strengthened family only.
    pub u_exp: Option<u32>,
    pub element: TautElement,
}

impl RelationItem {
    pub fn bidegree(&self) -> (u32, u32) {
        (self.s, self.t_exp - 2 * self.s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationFamily {
    pub family: FamilyId,
    pub g: u32,
    pub d: u32,
    pub r: u32,
    pub items: Vec<RelationItem>,
}

impl RelationFamily {
    /// Items are homogeneous of bidegree `(s, t_exp - 2s)` and respect the
    /// family's degree threshold.
    pub fn check_invariants(&self) -> Result<()> {
        for item in &self.items {
            if item.t_exp < 2 * item.s {
                return Err(Error::InvariantViolation(format!(
                    "item with t_exp < 2s in {}",
                    self.family
                )));
            }
            if item.element.bidegree() != Some(item.bidegree()) {
                return Err(Error::InvariantViolation(format!(
                    "{} item (s={}, t^{}) is not homogeneous of bidegree {:?}: {}",
                    self.family,
                    item.s,
                    item.t_exp,
                    item.bidegree(),
                    item.element
                )));
            }
            let bound = (self.d + item.s) as i64 - self.r as i64;
            let ok = match self.family {
                FamilyId::GPowers | FamilyId::ClosedForm => item.t_exp as i64 > bound,
                FamilyId::HPowers => item.u_exp.is_some_and(|m| m as i64 > bound),
                FamilyId::HQuotient => true,
            };
            if !ok {
                return Err(Error::InvariantViolation(format!(
                    "{} item (s={}, t^{}) violates its degree threshold",
                    self.family, item.s, item.t_exp
                )));
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> impl Iterator<Item = &TautElement> {
        self.items.iter().map(|i| &i.element)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FamilyJson::from(self)).expect("family JSON encoding")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: FamilyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    family: FamilyId,
    g: u32,
    d: u32,
    r: u32,
    items: Vec<ItemJson>,
}

#[derive(Serialize, Deserialize)]
struct ItemJson {
    s: u32,
    t_exp: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u_exp: Option<u32>,
    element: Vec<ElementTerm>,
}

impl From<&RelationFamily> for FamilyJson {
    fn from(f: &RelationFamily) -> Self {
        FamilyJson {
            family: f.family,
            g: f.g,
            d: f.d,
            r: f.r,
            items: f
                .items
                .iter()
                .map(|i| ItemJson {
                    s: i.s,
                    t_exp: i.t_exp,
                    u_exp: i.u_exp,
                    element: i.element.to_json_terms(),
                })
                .collect(),
        }
    }
}

impl TryFrom<FamilyJson> for RelationFamily {
    type Error = Error;
    fn try_from(raw: FamilyJson) -> Result<Self> {
        let items = raw
            .items
            .iter()
            .map(|i| {
                Ok(RelationItem {
                    s: i.s,
                    t_exp: i.t_exp,
                    u_exp: i.u_exp,
                    element: TautElement::from_json_terms(raw.g, &i.element)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RelationFamily {
            family: raw.family,
            g: raw.g,
            d: raw.d,
            r: raw.r,
            items,
        })
    }
}

/// `sum over compositions a_1+..+a_r = N, 0 <= a_i < g` of
/// `prod (a_i+1)! C(a_i)`; zero for `N < 0`.
pub fn closed_form_sum(g: u32, r: u32, n: i64) -> TautElement {
    let mut out = TautElement::zero_in(g);
    if n < 0 {
        return out;
    }
    for m in monomials_of_bidegree(g, r, n as u32) {
        // orderings of the multiset times the factorial weight
        let mut coeff = Rational::factorial(r);
        let w = m.weights();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            coeff = coeff
                .checked_div(&Rational::factorial((j - i) as u32))
                .unwrap();
            i = j;
        }
        for &a in w {
            coeff = coeff.mul(&Rational::factorial(a + 1));
        }
        out = out.add(&TautElement::from_monomial(Some(g), m, coeff));
    }
    out
}

/// The closed-form (`theorem1`) relation of index `N` for a `g^r_d`.
pub fn gen_closed_form(g: u32, d: u32, r: u32, n: i64) -> Result<TautElement> {
    if g < 1 || r < 1 {
        return Err(invalid(format!(
            "need g >= 1 and r >= 1 (got g={g}, r={r})"
        )));
    }
    if n < 0 {
        return Err(invalid(format!("N must be >= 0, got {n}")));
    }
    let threshold = d as i64 - 2 * r as i64 + 1;
    if n < threshold {
        return Err(invalid(format!(
            "N = {n} is below the threshold d - 2r + 1 = {threshold}"
        )));
    }
    Ok(closed_form_sum(g, r, n))
}

pub(crate) fn check_params(g: u32, d: u32, r: u32) -> Result<()> {
    if g < 1 || r < 1 {
        return Err(invalid(format!(
            "need g >= 1 and r >= 1 (got g={g}, r={r})"
        )));
    }
    if d + 1 < r {
        return Err(invalid(format!("need d - r + 1 >= 0 (got d={d}, r={r})")));
    }
    Ok(())
}

/// `t`-order that suffices for every family coefficient.
pub fn default_t_order(g: u32, r: u32) -> usize {
    (r * (g + 1) + 1) as usize
}

pub fn gen_family(family: FamilyId, g: u32, d: u32, r: u32) -> Result<RelationFamily> {
    gen_family_with_order(family, g, d, r, default_t_order(g, r))
}

/// Like [`gen_family`] with an explicit `t`-truncation for the powers of
/// `G` and `H`. Too small an order is reported as insufficient truncation.
pub fn gen_family_with_order(
    family: FamilyId,
    g: u32,
    d: u32,
    r: u32,
    t_order: usize,
) -> Result<RelationFamily> {
    check_params(g, d, r)?;
    let needed = default_t_order(g, r);
    if family != FamilyId::ClosedForm && t_order < needed {
        return Err(Error::InsufficientTruncation(format!(
            "t-order {t_order} cannot resolve t^{} of the s = {r} power",
            needed - 1
        )));
    }
    let mut items = Vec::new();
    match family {
        FamilyId::ClosedForm => {
            let lo = (d as i64 - 2 * r as i64 + 1).max(0);
            for n in lo..=(r * (g - 1)) as i64 {
                let element = gen_closed_form(g, d, r, n)?;
                if !element.is_zero() {
                    items.push(RelationItem {
                        s: r,
                        t_exp: n as u32 + 2 * r,
                        u_exp: None,
                        element,
                    });
                }
            }
        }
        FamilyId::GPowers => {
            let gpoly = build_G(g)?;
            for s in 1..=r {
                let bound = (d + s - r) as usize;
                let pow = poly_power(&gpoly, s, t_order)?;
                for (n, c) in pow.t_terms() {
                    if n > bound {
                        let element = c.coeff(0).with_genus(g);
                        items.push(RelationItem {
                            s,
                            t_exp: n as u32,
                            u_exp: None,
                            element,
                        });
                    }
                }
            }
        }
        FamilyId::HPowers => {
            let h = build_H(g)?;
            for s in 1..=r {
                let bound = (d + s - r) as usize;
                let pow = poly_power(&h, s, t_order)?;
                for (n, c) in pow.t_terms() {
                    for (m, e) in c.iter_terms() {
                        if m > bound {
                            items.push(RelationItem {
                                s,
                                t_exp: n as u32,
                                u_exp: Some(m as u32),
                                element: e.clone().with_genus(g),
                            });
                        }
                    }
                }
            }
        }
        FamilyId::HQuotient => {
            for s in 1..=r {
                for (n, element) in quotient_coefficients(g, d, r, s, t_order)? {
                    if !element.is_zero() {
                        items.push(RelationItem {
                            s,
                            t_exp: n,
                            u_exp: None,
                            element,
                        });
                    }
                }
            }
        }
    }
    items.sort_by_key(|i| (i.s, i.t_exp, i.u_exp));
    let fam = RelationFamily {
        family,
        g,
        d,
        r,
        items,
    };
    fam.check_invariants()?;
    Ok(fam)
}

/// `[t^n] [u^(d-r+s)] H(u,t)^s / (1+u)` for every `t`-exponent `n`,
/// zero entries included. A nonzero remainder in the division signals a bug.
pub(crate) fn quotient_coefficients(
    g: u32,
    d: u32,
    r: u32,
    s: u32,
    t_order: usize,
) -> Result<Vec<(u32, TautElement)>> {
    let h = build_H(g)?;
    let m = (d + s - r) as usize;
    let pow = poly_power(&h, s, t_order)?;
    let minus_one = TautElement::scalar(Rational::from(-1));
    let mut out = Vec::new();
    for (n, c) in pow.t_terms() {
        let q = c.exact_div_by_linear(&minus_one).map_err(|e| match e {
            Error::InvariantViolation(msg) => {
                Error::InvariantViolation(format!("H^{s} at t^{n} is not divisible by 1+u: {msg}"))
            }
            other => other,
        })?;
        out.push((n as u32, q.coeff(m).with_genus(g)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QAlgebra;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn closed_form_examples() {
        let x = gen_closed_form(4, 3, 1, 2).unwrap();
        assert_eq!(x, TautElement::generator(4, 2).unwrap().scale(&q(6)));
        let x = gen_closed_form(4, 5, 2, 2).unwrap();
        assert_eq!(x.to_string(), "12*C(0)*C(2) + 4*C(1)^2");
        for d in 1..=5 {
            let x = gen_closed_form(6, d, 1, d as i64 - 1).unwrap();
            let f = Rational::factorial(d);
            assert_eq!(x, TautElement::generator(6, d - 1).unwrap().scale(&f));
        }
        assert!(gen_closed_form(4, 5, 2, 1).is_err());
        assert!(gen_closed_form(4, 1, 2, -1).is_err());
    }

    #[test]
    fn closed_form_brute_force_compositions() {
        // Sum over ordered compositions directly.
        let (g, r, n) = (4u32, 3u32, 4u32);
        let mut expected = TautElement::zero_in(g);
        for a in 0..g {
            for b in 0..g {
                for c in 0..g {
                    if a + b + c != n {
                        continue;
                    }
                    let coeff = Rational::factorial(a + 1)
                        .mul(&Rational::factorial(b + 1))
                        .mul(&Rational::factorial(c + 1));
                    let m = TautElement::from_terms(g, [(vec![a, b, c], coeff)]).unwrap();
                    expected = expected.add(&m);
                }
            }
        }
        assert_eq!(closed_form_sum(g, r, n as i64), expected);
    }

    #[test]
    fn family6_small() {
        let f = gen_family(FamilyId::GPowers, 3, 3, 1).unwrap();
        assert_eq!(f.items.len(), 1);
        assert_eq!(f.items[0].t_exp, 4);
        assert_eq!(f.items[0].element.to_string(), "6*C(2)");
    }

    #[test]
    fn top_g_power_is_closed_form() {
        let (g, d, r) = (5, 6, 2);
        let f6 = gen_family(FamilyId::GPowers, g, d, r).unwrap();
        for n in (d as i64 - 2 * r as i64 + 1)..=(r * (g - 1)) as i64 {
            let t = n as u32 + 2 * r;
            let item = f6.items.iter().find(|i| i.s == r && i.t_exp == t).unwrap();
            assert_eq!(item.element, gen_closed_form(g, d, r, n).unwrap());
        }
    }

    #[test]
    fn family8_empty_when_bound_exceeds_degree() {
        let f = gen_family(FamilyId::HPowers, 2, 6, 1).unwrap();
        assert!(f.items.is_empty());
    }

    #[test]
    fn family7_r1_is_colombo_van_geemen() {
        let (g, d) = (5, 3);
        let f = gen_family(FamilyId::HQuotient, g, d, 1).unwrap();
        let js: Vec<u32> = f
            .items
            .iter()
            .map(|i| i.element.terms().next().unwrap().0.weights()[0])
            .collect();
        assert_eq!(js, (d - 1..g).collect::<Vec<_>>());
        assert!(f.items.iter().all(|i| i.element.num_terms() == 1));
    }

    #[test]
    fn json_round_trip_bytes() {
        let f = gen_family(FamilyId::HPowers, 3, 4, 2).unwrap();
        let js = f.to_json();
        let back = RelationFamily::from_json(&js).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), js);
        let t1 = gen_family(FamilyId::ClosedForm, 4, 5, 2).unwrap().to_json();
        assert!(t1.starts_with(r#"{"family":"theorem1","g":4,"d":5,"r":2,"items":[{"s":2,"t_exp":6,"element":[{"monomial":[2,0],"coeff":"12"},{"monomial":[1,1],"coeff":"4"}]}"#), "{t1}");
    }

    #[test]
    fn invalid_parameters() {
        assert!(gen_family(FamilyId::GPowers, 0, 3, 1).is_err());
        assert!(gen_family(FamilyId::GPowers, 3, 3, 0).is_err());
        assert!(gen_family(FamilyId::GPowers, 3, 1, 3).is_err());
        assert!(matches!(
            gen_family_with_order(FamilyId::HPowers, 3, 4, 2, 5),
            Err(Error::InsufficientTruncation(_))
        ));
        assert!("nope".parse::<FamilyId>().is_err());
    }

    #[test]
    fn degenerate_genus_one() {
        let f = gen_family(FamilyId::HQuotient, 1, 2, 1).unwrap();
        f.check_invariants().unwrap();
        assert!(f.items.is_empty());
    }
}
