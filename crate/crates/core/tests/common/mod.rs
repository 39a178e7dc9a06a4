//! Strategies and property bodies shared by the property tests and the
//! acceptance harness.
#![allow(dead_code)]

use cycle_relations::arith::{DensePoly, LaurentSeries, Rational, Ring};
use cycle_relations::grr::{GrrElement, GrrMonomial, Var};
use cycle_relations::relations::{gen_family, FamilyId, RelationFamily};
use cycle_relations::tautalg::{TautElement, TautMonomial};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

pub fn dense_poly() -> impl Strategy<Value = DensePoly<Rational>> {
    prop::collection::vec(rational(), 0..5).prop_map(DensePoly::new)
}

pub const GENUS: u32 = 4;

pub fn taut_monomial(g: u32) -> impl Strategy<Value = TautMonomial> {
    prop::collection::vec(0..g, 0..4).prop_map(TautMonomial::new)
}

pub fn taut_element(g: u32) -> impl Strategy<Value = TautElement> {
    prop::collection::vec((prop::collection::vec(0..g, 0..4), rational()), 0..4)
        .prop_map(move |terms| TautElement::from_terms(g, terms).unwrap())
}

/// Homogeneous element of a random bidegree.
pub fn homogeneous_taut(g: u32) -> impl Strategy<Value = TautElement> {
    (1u32..=3, 0u32..=3 * (g - 1)).prop_flat_map(move |(s, w)| {
        let basis = cycle_relations::tautalg::monomials_of_bidegree(g, s, w);
        let n = basis.len().max(1);
        prop::collection::vec(rational(), n).prop_map(move |cs| {
            let mut x = TautElement::zero_in(g);
            for (m, c) in basis.iter().zip(cs) {
                x = x.add(&TautElement::from_monomial(Some(g), m.clone(), c));
            }
            x
        })
    })
}

/// Laurent series with valuation in `-3..3` and a random truncation.
pub fn laurent() -> impl Strategy<Value = LaurentSeries<Rational>> {
    (-3i64..3, prop::collection::vec(rational(), 0..5), 0i64..4).prop_map(|(v, cs, extra)| {
        let order = v + cs.len() as i64 + extra;
        LaurentSeries::new(v, cs, order)
    })
}

pub const XI_NIL: u32 = 2;

fn grr_var() -> impl Strategy<Value = Var> {
    prop_oneof![
        Just(Var::K),
        Just(Var::Xi),
        (1u32..XI_NIL).prop_map(Var::A),
        (0u32..XI_NIL).prop_map(Var::B),
        (0u32..GENUS).prop_map(Var::Fc),
    ]
}

pub fn grr_element() -> impl Strategy<Value = GrrElement> {
    prop::collection::vec(
        (
            prop::collection::vec((grr_var(), 1u32..3), 0..3),
            rational(),
        ),
        0..4,
    )
    .prop_map(|terms| {
        let mut x = GrrElement::zero_in(XI_NIL);
        for (vars, c) in terms {
            let mut m = GrrMonomial::one();
            for (v, e) in vars {
                m = m.mul(&GrrMonomial::var(v, e));
            }
            x = x.add(&GrrElement::monomial(Some(XI_NIL), m, c));
        }
        x
    })
}

pub fn family_params() -> impl Strategy<Value = (FamilyId, u32, u32, u32)> {
    (
        prop_oneof![
            Just(FamilyId::GPowers),
            Just(FamilyId::HQuotient),
            Just(FamilyId::HPowers),
            Just(FamilyId::ClosedForm)
        ],
        1u32..=5,
        1u32..=3,
    )
        .prop_flat_map(|(f, g, r)| (Just(f), Just(g), (r - 1)..=8, Just(r)))
}

fn ensure(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

/// Commutative ring axioms for one triple.
pub fn ring_axioms<R: Ring>(a: &R, b: &R, c: &R) -> Result<(), TestCaseError> {
    ensure(a.add(b) == b.add(a), "addition commutes")?;
    ensure(a.add(b).add(c) == a.add(&b.add(c)), "addition associates")?;
    ensure(a.add(&R::zero()) == *a, "zero is neutral")?;
    ensure(a.add(&a.neg()).is_zero(), "negation is inverse")?;
    ensure(a.mul(b) == b.mul(a), "multiplication commutes")?;
    ensure(
        a.mul(b).mul(c) == a.mul(&b.mul(c)),
        "multiplication associates",
    )?;
    ensure(a.mul(&R::one()) == *a, "one is neutral")?;
    ensure(
        a.mul(&b.add(c)) == a.mul(b).add(&a.mul(c)),
        "distributivity",
    )?;
    Ok(())
}

fn agree_below(x: &LaurentSeries<Rational>, y: &LaurentSeries<Rational>) -> bool {
    let o = x.order().min(y.order());
    x.truncate(o) == y.truncate(o)
}

/// Ring axioms for truncated series, compared on the common known window.
pub fn laurent_axioms(
    a: &LaurentSeries<Rational>,
    b: &LaurentSeries<Rational>,
    c: &LaurentSeries<Rational>,
) -> Result<(), TestCaseError> {
    ensure(a.add(b) == b.add(a), "series addition commutes")?;
    ensure(
        agree_below(&a.add(b).add(c), &a.add(&b.add(c))),
        "series addition associates",
    )?;
    ensure(a.mul(b) == b.mul(a), "series multiplication commutes")?;
    ensure(
        agree_below(&a.mul(b).mul(c), &a.mul(&b.mul(c))),
        "series multiplication associates",
    )?;
    ensure(
        agree_below(&a.mul(&b.add(c)), &a.mul(b).add(&a.mul(c))),
        "series distributivity",
    )?;
    ensure(a.sub(a).is_zero(), "series negation")?;
    Ok(())
}

/// Truncating inputs never changes coefficients below the reported order.
pub fn truncation_sound(
    p: &DensePoly<Rational>,
    q: &DensePoly<Rational>,
    (vp, op): (i64, i64),
    (vq, oq): (i64, i64),
) -> Result<(), TestCaseError> {
    let exact_p = LaurentSeries::from_poly(p, 1000).shift(vp);
    let exact_q = LaurentSeries::from_poly(q, 1000).shift(vq);
    let exact = exact_p.mul(&exact_q);
    let tp = exact_p.truncate(vp + op);
    let tq = exact_q.truncate(vq + oq);
    let prod = tp.mul(&tq);
    ensure(prod.order() <= exact.order(), "order never grows")?;
    ensure(
        prod == exact.truncate(prod.order()),
        "product of truncations agrees below its order",
    )?;
    for e in prod.order()..prod.order() + 3 {
        ensure(prod.coeff(e).is_err(), "beyond-order reads are refused")?;
    }
    if !tp.is_zero() && tp.valuation() == vp && vp + op > vp {
        let inv = tp
            .inverse()
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let one = tp.mul(&inv);
        ensure(
            one == LaurentSeries::one(one.order()),
            "s * s^-1 = 1 below the order",
        )?;
    }
    Ok(())
}

pub fn taut_grading(x: &TautElement, y: &TautElement) -> Result<(), TestCaseError> {
    let p = x.mul(y);
    match (x.bidegree(), y.bidegree(), p.bidegree()) {
        (Some((a, b)), Some((c, d)), Some(bd)) => ensure(bd == (a + c, b + d), "bidegree adds"),
        (_, _, None) => ensure(
            p.is_zero() || !x.is_homogeneous() || !y.is_homogeneous(),
            "product homogeneous",
        ),
        _ => Ok(()),
    }
}

pub fn monomial_grading(m: &TautMonomial, n: &TautMonomial) -> Result<(), TestCaseError> {
    let (a, b) = m.bidegree();
    let (c, d) = n.bidegree();
    ensure(
        m.mul(n).bidegree() == (a + c, b + d),
        "monomial bidegree adds",
    )
}

pub fn grr_grading(x: &GrrElement, y: &GrrElement) -> Result<(), TestCaseError> {
    for (m, _) in x.terms() {
        for (n, _) in y.terms() {
            ensure(
                m.mul(n).codim() == m.codim() + n.codim(),
                "codimension adds",
            )?;
        }
    }
    ensure(
        x.mul(y).terms().all(|(m, _)| m.exponent(Var::Xi) <= XI_NIL),
        "xi nilpotency",
    )?;
    Ok(())
}

pub fn family_round_trip(f: FamilyId, g: u32, d: u32, r: u32) -> Result<(), TestCaseError> {
    let fam = gen_family(f, g, d, r).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let js = fam.to_json();
    let back = RelationFamily::from_json(&js).map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure(back == fam, "family parses back")?;
    ensure(
        back.to_json() == js,
        "family re-serializes to identical bytes",
    )
}

pub fn element_round_trip(x: &TautElement) -> Result<(), TestCaseError> {
    let terms = x.to_json_terms();
    let js = serde_json::to_string(&terms).unwrap();
    let parsed: Vec<cycle_relations::tautalg::ElementTerm> =
        serde_json::from_str(&js).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let back = TautElement::from_json_terms(GENUS, &parsed)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure(back == *x, "element parses back")?;
    ensure(
        serde_json::to_string(&back.to_json_terms()).unwrap() == js,
        "element bytes stable",
    )
}
