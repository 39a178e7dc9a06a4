//! Grothendieck-Riemann-Roch replay for `V_k = alpha_*(L^k)`.
//!
//! Upstairs classes are `l^mu x^nu rho^eps` with `x^(r+1) = rho^2 = 0`.
//! Downstairs everything is a [`GrrElement`]. Pushing forward
//! `e^(k l) (A(x) + B(x) rho)` gives `ch(V_k)`, formula (3) gives the Chern
//! classes, and the top `k`-power of the vanishing `t^(M+1)` coefficient
//! is the closed-form `theorem1` relation.

mod element;

pub use element::{GrrElement, GrrMonomial, Var};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{QAlgebra, Rational, Ring};
use crate::error::{invalid, Error, Result};
use crate::relations::{closed_form_sum, gen_closed_form};
use crate::tautalg::TautElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrrParams {
    pub g: u32,
    pub d: u32,
    pub r: u32,
}

impl GrrParams {
    pub fn new(g: u32, d: u32, r: u32) -> Result<Self> {
        if g < 1 || r < 1 || d < 1 {
            return Err(invalid(format!(
                "need g, d, r >= 1 (got g={g}, d={d}, r={r})"
            )));
        }
        Ok(GrrParams { g, d, r })
    }

    fn var(&self, v: Var) -> GrrElement {
        GrrElement::var(self.r, v)
    }

    /// `a_j`, with `a_0 = 1` and `a_j = 0` for `j >= r`.
    pub fn todd_a(&self, j: u32) -> GrrElement {
        match j {
            0 => GrrElement::one(),
            j if j < self.r => self.var(Var::A(j)),
            _ => GrrElement::zero_in(self.r),
        }
    }

    /// `b_j`, zero for `j >= r`.
    pub fn todd_b(&self, j: u32) -> GrrElement {
        if j < self.r {
            self.var(Var::B(j))
        } else {
            GrrElement::zero_in(self.r)
        }
    }

    fn fc(&self, j: u32) -> GrrElement {
        if j < self.g {
            self.var(Var::Fc(j))
        } else {
            GrrElement::zero_in(self.r)
        }
    }

    fn k_pow(&self, e: u32) -> GrrElement {
        GrrElement::monomial(Some(self.r), GrrMonomial::var(Var::K, e), Rational::one())
    }

    fn xi_pow(&self, e: u32) -> GrrElement {
        GrrElement::xi_pow(self.r, e)
    }

    fn scalar(&self, q: Rational) -> GrrElement {
        GrrElement::scalar(q).add(&GrrElement::zero_in(self.r))
    }
}

/// `l^mu x^nu rho^eps` times a coefficient free of `xi` and `FC`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpstairsTerm {
    pub mu: u32,
    pub nu: u32,
    pub rho: bool,
    pub coeff: GrrElement,
}

/// `q_*(Pi^mu)`: zero for `mu = 1` and `mu > g+1`, else `mu! FC_(mu-2)`.
fn q_push(p: &GrrParams, mu: u32) -> GrrElement {
    if (2..=p.g + 1).contains(&mu) {
        p.fc(mu - 2).scale(&Rational::factorial(mu))
    } else {
        GrrElement::zero_in(p.r)
    }
}

pub fn pushforward(p: &GrrParams, term: &UpstairsTerm) -> Result<GrrElement> {
    if term.nu > p.r {
        return Err(invalid(format!(
            "x^{} vanishes upstairs (r = {})",
            term.nu, p.r
        )));
    }
    let down = match (term.mu, term.rho) {
        (0, false) => p.xi_pow(term.nu).scale(&Rational::from(p.d as i64)),
        (_, false) => q_push(p, term.mu).mul(&p.xi_pow(term.nu + 1)),
        (0, true) => p.xi_pow(term.nu + 1),
        (_, true) => GrrElement::zero_in(p.r),
    };
    Ok(down.mul(&term.coeff))
}

/// `e^(k l) (A(x) + B(x) rho)` with `l`-powers above `g+1` dropped, since
/// they push forward to zero.
pub fn todd_upstairs(p: &GrrParams) -> Vec<UpstairsTerm> {
    let mut out = Vec::new();
    for mu in 0..=p.g + 1 {
        let kmu = p
            .k_pow(mu)
            .scale(&Rational::factorial(mu).recip().expect("nonzero"));
        for nu in 0..p.r {
            out.push(UpstairsTerm {
                mu,
                nu,
                rho: false,
                coeff: kmu.mul(&p.todd_a(nu)),
            });
            out.push(UpstairsTerm {
                mu,
                nu,
                rho: true,
                coeff: kmu.mul(&p.todd_b(nu)),
            });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ChernData {
    pub params: GrrParams,
    /// `ch_0, ch_1, ..` by codimension; every later component vanishes.
    pub ch: Vec<GrrElement>,
    /// `c_0, c_1, ..`, empty until [`chern_classes`] fills it.
    pub c: Vec<GrrElement>,
}

impl ChernData {
    pub fn ch_j(&self, j: u32) -> GrrElement {
        self.ch
            .get(j as usize)
            .cloned()
            .unwrap_or_else(|| GrrElement::zero_in(self.params.r))
    }

    pub fn c_n(&self, n: u32) -> Result<GrrElement> {
        self.c
            .get(n as usize)
            .cloned()
            .ok_or(Error::BeyondTruncation {
                exponent: n as i64,
                order: self.c.len() as i64,
            })
    }

    pub fn total(&self) -> GrrElement {
        self.ch
            .iter()
            .fold(GrrElement::zero_in(self.params.r), |acc, x| acc.add(x))
    }
}

/// `d A(xi) + xi B(xi) + sum_mu k^(mu+2) FC_mu xi A(xi)`.
pub fn ch_closed_form(p: &GrrParams) -> GrrElement {
    let mut a = GrrElement::zero_in(p.r);
    let mut b = GrrElement::zero_in(p.r);
    for j in 0..p.r {
        a = a.add(&p.todd_a(j).mul(&p.xi_pow(j)));
        b = b.add(&p.todd_b(j).mul(&p.xi_pow(j)));
    }
    let mut fourier = GrrElement::zero_in(p.r);
    for mu in 0..p.g {
        fourier = fourier.add(&p.k_pow(mu + 2).mul(&p.fc(mu)));
    }
    let xi = p.xi_pow(1);
    a.scale(&Rational::from(p.d as i64))
        .add(&xi.mul(&b))
        .add(&fourier.mul(&xi).mul(&a))
}

/// `ch(V_k)` pushed forward term by term, checked against the closed form.
pub fn ch_vk(g: u32, d: u32, r: u32) -> Result<ChernData> {
    let p = GrrParams::new(g, d, r)?;
    let mut total = GrrElement::zero_in(r);
    for term in todd_upstairs(&p) {
        total = total.add(&pushforward(&p, &term)?);
    }
    let closed = ch_closed_form(&p);
    if total != closed {
        return Err(Error::InvariantViolation(format!(
            "pushed-forward ch(V_k) differs from the closed form: {} vs {}",
            total, closed
        )));
    }
    let top = total.max_codim().unwrap_or(0);
    let ch: Vec<GrrElement> = (0..=top).map(|j| total.codim_part(j)).collect();
    for (j, x) in ch.iter().enumerate().skip(1) {
        if !x.divisible_by_xi() {
            return Err(Error::InvariantViolation(format!(
                "ch_{j} is not divisible by xi: {x}"
            )));
        }
    }
    Ok(ChernData {
        params: p,
        ch,
        c: Vec::new(),
    })
}

/// The `xi^m` coefficient of `ch_j`.
pub fn extract_amj(ch: &ChernData, m: u32, j: u32) -> GrrElement {
    ch.ch_j(j).coeff_of(Var::Xi, m)
}

/// `A_m(j)` read off the component table.
pub fn amj_table(p: &GrrParams, m: u32, j: u32) -> GrrElement {
    if m == j {
        p.todd_a(j)
            .scale(&Rational::from(p.d as i64))
            .add(&p.todd_b(j - 1))
    } else if m < j {
        if j - m - 1 < p.g {
            p.todd_a(m - 1)
                .mul(&p.k_pow(j - m + 1))
                .mul(&p.fc(j - m - 1))
        } else {
            GrrElement::zero_in(p.r)
        }
    } else {
        GrrElement::zero_in(p.r)
    }
}

/// Fills `c_0..=c_cutoff` from `exp(sum_j (-1)^(j-1) (j-1)! ch_j t^j)`.
/// The exponential stops at `F^r / r!` since `F^(r+1)` vanishes.
pub fn chern_classes(mut ch: ChernData, cutoff: u32) -> Result<ChernData> {
    let r = ch.params.r;
    for (j, x) in ch.ch.iter().enumerate().skip(1) {
        if !x.divisible_by_xi() {
            return Err(Error::InvariantViolation(format!(
                "ch_{j} is not divisible by xi, so F(t) need not be nilpotent"
            )));
        }
    }
    let len = cutoff as usize + 1;
    let mut f = vec![GrrElement::zero_in(r); len];
    for (j, fj) in f.iter_mut().enumerate().skip(1) {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        *fj = ch
            .ch_j(j as u32)
            .scale(&Rational::factorial(j as u32 - 1).mul(&Rational::from(sign)));
    }
    let mul_t = |a: &[GrrElement], b: &[GrrElement]| -> Vec<GrrElement> {
        let mut out = vec![GrrElement::zero_in(r); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        out
    };
    let mut c = vec![GrrElement::zero_in(r); len];
    c[0] = ch.params.scalar(Rational::one());
    let mut power = c.clone();
    for i in 1..=r {
        power = mul_t(&power, &f);
        let inv = Rational::factorial(i).recip()?;
        for (cn, pn) in c.iter_mut().zip(&power) {
            *cn = cn.add(&pn.scale(&inv));
        }
    }
    if mul_t(&power, &f).iter().any(|x| !x.is_zero()) {
        return Err(Error::InvariantViolation(format!(
            "F(t)^{} does not vanish",
            r + 1
        )));
    }
    ch.c = c;
    Ok(ch)
}

#[derive(Debug, Clone)]
pub struct GammaTable {
    pub params: GrrParams,
    pub m: u32,
    /// `Gamma_s` for every `s` with a nonzero coefficient.
    pub gammas: BTreeMap<u32, GrrElement>,
}

impl GammaTable {
    pub fn gamma(&self, s: u32) -> GrrElement {
        self.gammas
            .get(&s)
            .cloned()
            .unwrap_or_else(|| GrrElement::zero_in(self.params.r))
    }
}

fn compositions(total: u32, parts: u32, min: u32, f: &mut impl FnMut(&[u32])) {
    fn walk(left: u32, parts: u32, min: u32, acc: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if parts == 0 {
            if left == 0 {
                f(acc);
            }
            return;
        }
        if left < min * parts {
            return;
        }
        for x in min..=left - min * (parts - 1) {
            acc.push(x);
            walk(left - x, parts - 1, min, acc, f);
            acc.pop();
        }
    }
    walk(total, parts, min, &mut Vec::new(), f);
}

/// `B_M(i) = sum_{m_1+..+m_i=r} sum_{alpha_1+..+alpha_i=M+1}
/// prod (alpha_j - 1)! A_(m_j)(alpha_j)`.
pub fn b_m(ch: &ChernData, m_big: u32, i: u32) -> GrrElement {
    let p = ch.params;
    let mut out = GrrElement::zero_in(p.r);
    compositions(p.r, i, 1, &mut |ms| {
        compositions(m_big + 1, i, 1, &mut |alphas| {
            let mut term = p.scalar(Rational::one());
            for (&m, &a) in ms.iter().zip(alphas) {
                let factor = extract_amj(ch, m, a);
                if factor.is_zero() {
                    return;
                }
                term = term.mul(&factor).scale(&Rational::factorial(a - 1));
            }
            out = out.add(&term);
        });
    });
    out
}

/// `Gamma_s` from the `t^(M+1)` coefficient of formula (3): the `xi^r`
/// part of `(-1)^(M+1) c_(M+1)` by powers of `k`. The same sum is rebuilt
/// as `sum_i (-1)^i / i! B_M(i)` and the two must agree.
pub fn gamma_extract(g: u32, d: u32, r: u32, m_big: u32) -> Result<GammaTable> {
    if m_big < d {
        return Err(invalid(format!("need M >= d (got M={m_big}, d={d})")));
    }
    let ch = chern_classes(ch_vk(g, d, r)?, m_big + 1)?;
    let top = ch.c_n(m_big + 1)?.coeff_of(Var::Xi, r);
    let sign = Rational::from(if m_big.is_multiple_of(2) { -1 } else { 1 });
    let via_c = top.scale(&sign);

    let mut via_b = GrrElement::zero_in(r);
    for i in 1..=r {
        let coeff =
            Rational::from(if i % 2 == 0 { 1 } else { -1 }).checked_div(&Rational::factorial(i))?;
        via_b = via_b.add(&b_m(&ch, m_big, i).scale(&coeff));
    }
    if via_c != via_b {
        return Err(Error::InvariantViolation(format!(
            "Chern class route and B_M route disagree at M = {m_big}: {via_c} vs {via_b}"
        )));
    }
    let gammas = via_c
        .by_power(Var::K)
        .into_iter()
        .filter(|(_, x)| !x.is_zero())
        .collect();
    Ok(GammaTable {
        params: ch.params,
        m: m_big,
        gammas,
    })
}

/// `(-1)^r / r! sum (a_1+1)!..(a_r+1)! FC_(a_1)..FC_(a_r)` over
/// `a_1+..+a_r = M - 2r + 1`.
pub fn gamma_top_formula(p: &GrrParams, m_big: u32) -> GrrElement {
    let n = m_big as i64 + 1 - 2 * p.r as i64;
    let sum = GrrElement::from_taut(p.r, &closed_form_sum(p.g, p.r, n));
    let sign = Rational::from(if p.r.is_multiple_of(2) { 1 } else { -1 });
    sum.scale(
        &sign
            .checked_div(&Rational::factorial(p.r))
            .expect("nonzero"),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaChecks {
    pub closed_form: bool,
    pub vanishing_above: bool,
    pub top_matches: bool,
    pub top_todd_free: bool,
}

impl GammaChecks {
    pub fn all(&self) -> bool {
        self.closed_form && self.vanishing_above && self.top_matches && self.top_todd_free
    }
}

pub fn gamma_checks(table: &GammaTable) -> GammaChecks {
    let m = table.m;
    let top = table.gamma(m + 1);
    GammaChecks {
        // ch_vk already refused a mismatching closed form
        closed_form: true,
        vanishing_above: table.gammas.keys().all(|&s| s <= m + 1),
        top_matches: top == gamma_top_formula(&table.params, m),
        top_todd_free: !top.has_todd(),
    }
}

/// `Gamma_(M+1)` read in `R` with the `(-1)^r / r!` cleared; must equal the
/// Closed-form relation of index `M - 2r + 1`.
pub fn derive_closed_form(g: u32, d: u32, r: u32, m_big: u32) -> Result<TautElement> {
    let table = gamma_extract(g, d, r, m_big)?;
    derive_from_table(&table)
}

pub fn derive_from_table(table: &GammaTable) -> Result<TautElement> {
    let GrrParams { g, d, r } = table.params;
    let m_big = table.m;
    let top = table.gamma(m_big + 1);
    let sign = Rational::from(if r % 2 == 0 { 1 } else { -1 });
    let derived = top.to_taut(g)?.scale(&Rational::factorial(r).mul(&sign));
    let n = m_big as i64 + 1 - 2 * r as i64;
    let expected = if n < 0 {
        TautElement::zero_in(g)
    } else {
        gen_closed_form(g, d, r, n)?
    };
    if derived != expected {
        return Err(Error::InvariantViolation(format!(
            "derived relation {derived} differs from the closed-form relation {expected} (N = {n})"
        )));
    }
    Ok(derived)
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaTermJson {
    pub monomial: Vec<u32>,
    pub coeff: Rational,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub todd: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaJson {
    pub s: u32,
    pub element: Vec<GammaTermJson>,
}

/// `Gamma_s` in the element schema of `R`, Todd exponents alongside.
pub fn gamma_to_json(x: &GrrElement) -> Vec<GammaTermJson> {
    x.terms()
        .map(|(m, q)| {
            let todd = m
                .vars()
                .iter()
                .filter(|(v, _)| matches!(v, Var::A(_) | Var::B(_) | Var::K | Var::Xi))
                .map(|(v, e)| (v.to_string(), *e))
                .collect();
            GammaTermJson {
                monomial: m.fc_part().weights().to_vec(),
                coeff: q.clone(),
                todd,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: u32, d: u32, r: u32) -> GrrParams {
        GrrParams::new(g, d, r).unwrap()
    }

    #[test]
    fn pushforward_table() {
        let p = params(3, 4, 2);
        let one = GrrElement::one();
        let t = |mu, nu, rho| UpstairsTerm {
            mu,
            nu,
            rho,
            coeff: one.clone(),
        };
        assert_eq!(
            pushforward(&p, &t(2, 0, false)).unwrap().to_string(),
            "2*xi*FC(0)"
        );
        assert!(pushforward(&p, &t(1, 1, false)).unwrap().is_zero());
        assert_eq!(pushforward(&p, &t(0, 1, true)).unwrap().to_string(), "xi^2");
        assert_eq!(
            pushforward(&p, &t(0, 1, false)).unwrap().to_string(),
            "4*xi"
        );
        assert!(pushforward(&p, &t(3, 0, true)).unwrap().is_zero());
        assert!(pushforward(&p, &t(5, 0, false)).unwrap().is_zero());
        assert!(pushforward(&p, &t(0, 2, true)).unwrap().is_zero());
        assert!(pushforward(&p, &t(0, 3, false)).is_err());
    }

    #[test]
    fn ch_shape_r1() {
        let ch = ch_vk(3, 4, 1).unwrap();
        assert_eq!(ch.ch_j(0).to_string(), "4");
        let at_one = ch.total().substitute(Var::K, &Rational::one());
        // d + b0 xi + F[C] xi
        assert_eq!(
            at_one.to_string(),
            "4 + xi*b0 + xi*FC(0) + xi*FC(1) + xi*FC(2)"
        );
    }

    #[test]
    fn amj_cases() {
        let p = params(4, 5, 3);
        let ch = ch_vk(4, 5, 3).unwrap();
        for j in 1..=(p.g + p.r + 1) {
            for m in 1..=p.r {
                assert_eq!(extract_amj(&ch, m, j), amj_table(&p, m, j), "m={m} j={j}");
            }
        }
        assert_eq!(extract_amj(&ch, 2, 2).to_string(), "5*a2 + b1");
        assert_eq!(extract_amj(&ch, 1, 3).to_string(), "k^3*FC(1)");
        assert!(extract_amj(&ch, 3, 2).is_zero());
    }

    #[test]
    fn chern_r1() {
        let ch = chern_classes(ch_vk(3, 2, 1).unwrap(), 6).unwrap();
        assert!(ch.c_n(0).unwrap().is_one());
        for j in 1..=6u32 {
            let sign = Rational::from(if j % 2 == 1 { 1 } else { -1 });
            let want = ch.ch_j(j).scale(&Rational::factorial(j - 1).mul(&sign));
            assert_eq!(ch.c_n(j).unwrap(), want, "j={j}");
        }
        assert!(ch.c_n(7).is_err());
    }

    #[test]
    fn gamma_small() {
        let t = gamma_extract(4, 5, 2, 5).unwrap();
        let checks = gamma_checks(&t);
        assert!(checks.all(), "{checks:?}");
        let x = derive_from_table(&t).unwrap();
        assert_eq!(x.to_string(), "12*C(0)*C(2) + 4*C(1)^2");
        assert!(gamma_extract(3, 4, 1, 3).is_err());
    }

    #[test]
    fn colombo_van_geemen_from_grr() {
        let (g, d) = (6, 3);
        for m in d..=d + 2 {
            let x = derive_closed_form(g, d, 1, m).unwrap();
            let want = TautElement::generator(g, m - 1)
                .unwrap()
                .scale(&Rational::factorial(m));
            assert_eq!(x, want, "M={m}");
        }
        // C(3) does not exist in genus 3
        assert!(derive_closed_form(3, 4, 1, 4).unwrap().is_zero());
    }

    #[test]
    fn negative_index_gives_zero() {
        // d < 2r - 1 leaves M - 2r + 1 < 0 at M = d
        let x = derive_closed_form(3, 2, 2, 2).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn json_marks_todd_terms() {
        let t = gamma_extract(3, 4, 2, 4).unwrap();
        let low = t
            .gammas
            .iter()
            .find(|(_, x)| x.has_todd())
            .map(|(_, x)| x.clone())
            .unwrap();
        let js = gamma_to_json(&low);
        assert!(js.iter().any(|e| !e.todd.is_empty()));
        let top = gamma_to_json(&t.gamma(5));
        assert!(top.iter().all(|e| e.todd.is_empty()));
    }
}
