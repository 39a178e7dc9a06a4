//! Command-line front end. Exit codes: 0 pass, 1 verification failure,
//! 2 usage or parameter error, 3 inconclusive because of truncation.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::{LaurentSeries, QAlgebra, Rational, Ring};
use crate::combinat::{b_gen, b_sum, p_at_minus_one, p_poly, verify_identity4, PRoute};
use crate::error::Error;
use crate::grr::{derive_from_table, gamma_checks, gamma_extract, gamma_to_json, GammaJson};
use crate::relations::{
    compare_ideals, gen_closed_form, gen_family_with_order, verify_implication_chain,
    BidegreeBound, ChainOrders, ChainReport, FamilyId, IdealComparison, RelationFamily,
    RelationItem,
};
use crate::tautalg::ElementTerm;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cyclerel",
    version,
    about = "Exact checks of tautological relations on Jacobians"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P_n routes, the 1/log(1+x)^n expansion, P_n(-1) and B_d(a).
    Identities {
        #[arg(long, default_value_t = 10)]
        max_n: u32,
        #[arg(long, default_value_t = 10)]
        order: i64,
    },
    /// Emit a relation family.
    Relations {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        family: String,
        /// Single closed-form index instead of the whole family.
        #[arg(long = "N", allow_negative_numbers = true)]
        n: Option<i64>,
        #[arg(long)]
        t_order: Option<usize>,
    },
    /// Compare the ideals of vdgk6, herbaut7 and strong8 and run the series chain.
    Equivalence {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, allow_negative_numbers = true)]
        x_order: Option<i64>,
        #[arg(long)]
        t_order: Option<usize>,
    },
    /// Replay Grothendieck-Riemann-Roch and rederive the closed-form relations.
    Grr {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long = "M")]
        m: Option<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

impl Outcome {
    fn new(code: i32, report: String) -> Self {
        Outcome { code, report }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::GenusMismatch(..) | Error::Parse(_) => EXIT_USAGE,
        Error::InsufficientTruncation(_) | Error::BeyondTruncation { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_FAIL,
    }
}

fn from_error(e: Error) -> Outcome {
    Outcome::new(exit_code(&e), format!("error: {e}\n"))
}

pub fn run(cfg: &RunConfig) -> Outcome {
    let fmt = cfg.format;
    match &cfg.command {
        Command::Identities { max_n, order } => cmd_identities(*max_n, *order, fmt),
        Command::Relations {
            g,
            d,
            r,
            family,
            n,
            t_order,
        } => cmd_relations(*g, *d, *r, family, *n, *t_order, fmt),
        Command::Equivalence {
            g,
            d,
            r,
            x_order,
            t_order,
        } => {
            let orders = match (x_order, t_order) {
                (None, None) => None,
                (x, t) => {
                    let base = ChainOrders::default_for(*g, *r);
                    Some(ChainOrders {
                        x_order: x.unwrap_or(base.x_order),
                        t_order: t.unwrap_or(base.t_order),
                    })
                }
            };
            cmd_equivalence(*g, *d, *r, orders, fmt)
        }
        Command::Grr { g, d, r, m } => cmd_grr(*g, *d, *r, m.unwrap_or(*d), fmt),
    }
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string(x).expect("report JSON encoding");
    s.push('\n');
    s
}

pub fn render_series(s: &LaurentSeries<Rational>) -> String {
    let mut out = String::new();
    for (e, c) in s.terms() {
        let (neg, mag) = if c.is_negative() {
            (true, c.neg())
        } else {
            (false, c.clone())
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let unit = mag.is_one();
        match e {
            0 => write!(out, "{mag}").unwrap(),
            1 if unit => out.push('x'),
            1 => write!(out, "{mag}*x").unwrap(),
            _ if unit => write!(out, "x^{e}").unwrap(),
            _ => write!(out, "{mag}*x^{e}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    write!(out, " + O(x^{})", s.order()).unwrap();
    out
}

#[derive(Serialize)]
struct CheckLine {
    name: String,
    pass: bool,
    detail: String,
}

fn render_checks(lines: &[CheckLine], fmt: Format, extra: &[(String, String)]) -> String {
    match fmt {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                checks: &'a [CheckLine],
                pass: bool,
            }
            json(&Report {
                checks: lines,
                pass: lines.iter().all(|l| l.pass),
            })
        }
        Format::Text => {
            let mut out = String::new();
            for l in lines {
                let tag = if l.pass { "PASS" } else { "FAIL" };
                writeln!(out, "{tag}  {}", l.name).unwrap();
                if !l.detail.is_empty() {
                    writeln!(out, "      {}", l.detail).unwrap();
                }
            }
            for (k, v) in extra {
                writeln!(out, "{k}: {v}").unwrap();
            }
            out
        }
    }
}

pub fn cmd_identities(max_n: u32, order: i64, fmt: Format) -> Outcome {
    if max_n < 1 {
        return Outcome::new(EXIT_USAGE, "error: --max-n must be >= 1\n".into());
    }
    if order < 1 {
        return Outcome::new(EXIT_USAGE, "error: --order must be >= 1\n".into());
    }
    let mut lines = Vec::new();
    let mut extra = Vec::new();

    let mut first_bad = None;
    for n in 1..=max_n {
        let routes: Result<Vec<_>, _> = [PRoute::Stirling, PRoute::GenFunc, PRoute::Laurent]
            .iter()
            .map(|&rt| p_poly(n, rt))
            .collect();
        match routes {
            Ok(ps) if ps[0].coeffs == ps[1].coeffs && ps[0].coeffs == ps[2].coeffs => {}
            Ok(_) => {
                first_bad = Some(format!("routes disagree at n = {n}"));
                break;
            }
            Err(e) => return from_error(e),
        }
    }
    lines.push(CheckLine {
        name: format!(
            "P_n by Stirling, generating function and Laurent routes agree, n <= {max_n}"
        ),
        pass: first_bad.is_none(),
        detail: first_bad.unwrap_or_default(),
    });

    let mut principal_bad = None;
    let mut remainder_bad = None;
    for n in 1..=max_n {
        let rep = match verify_identity4(n, order) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        if !rep.principal_part_holds && principal_bad.is_none() {
            principal_bad = Some(format!("n = {n}"));
        }
        if !rep.holds && remainder_bad.is_none() {
            remainder_bad = Some(format!(
                "n = {n}: coefficient of x^0 is {}",
                rep.constant_term
            ));
        }
        if n == max_n {
            extra.push((
                format!("(n-1)!/log(1+x)^n at n = {n}"),
                render_series(&rep.expansion),
            ));
        }
    }
    lines.push(CheckLine {
        name: format!("principal part of (n-1)!/log(1+x)^n is P_n(1/x), n <= {max_n}"),
        pass: principal_bad.is_none(),
        detail: principal_bad.unwrap_or_default(),
    });
    lines.push(CheckLine {
        name: format!("(n-1)!/log(1+x)^n = P_n(1/x) + O(x), n <= {max_n}, order {order}"),
        pass: remainder_bad.is_none(),
        detail: remainder_bad.unwrap_or_default(),
    });

    let mut minus_bad = None;
    for n in 2..=max_n {
        match p_at_minus_one(n) {
            Ok(v) if v.is_zero() => {}
            Ok(v) => {
                minus_bad = Some(format!("P_{n}(-1) = {v}"));
                break;
            }
            Err(e) => return from_error(e),
        }
    }
    lines.push(CheckLine {
        name: format!("P_n(-1) = 0 for 2 <= n <= {max_n}"),
        pass: minus_bad.is_none(),
        detail: minus_bad.unwrap_or_default(),
    });

    let max_d = max_n.min(8);
    let mut b_bad = None;
    'grid: for d in 0..=max_d {
        for len in 1..=3usize {
            let mut a = vec![0u32; len];
            loop {
                match (b_sum(d, &a), b_gen(d, &a)) {
                    (Ok(x), Ok(y)) if x == y => {}
                    (Ok(x), Ok(y)) => {
                        b_bad = Some(format!("d = {d}, a = {a:?}: {x} vs {y}"));
                        break 'grid;
                    }
                    (Err(e), _) | (_, Err(e)) => return from_error(e),
                }
                let Some(i) = a.iter().position(|&v| v < 4) else {
                    break;
                };
                a[i] += 1;
                a[..i].iter_mut().for_each(|v| *v = 0);
            }
        }
    }
    lines.push(CheckLine {
        name: format!(
            "B_d(a) sum and generating-function routes agree, d <= {max_d}, |a| <= 3, a_i <= 4"
        ),
        pass: b_bad.is_none(),
        detail: b_bad.unwrap_or_default(),
    });

    let code = if lines.iter().all(|l| l.pass) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    Outcome::new(code, render_checks(&lines, fmt, &extra))
}

pub fn render_family_text(f: &RelationFamily) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "family {}  g={} d={} r={}  ({} items)",
        f.family,
        f.g,
        f.d,
        f.r,
        f.items.len()
    )
    .unwrap();
    for item in &f.items {
        let u = item.u_exp.map(|m| format!("u^{m:<3}")).unwrap_or_default();
        writeln!(
            out,
            "s={:<2} t^{:<3} {u}{}",
            item.s, item.t_exp, item.element
        )
        .unwrap();
    }
    out
}

pub fn cmd_relations(
    g: u32,
    d: u32,
    r: u32,
    family: &str,
    n: Option<i64>,
    t_order: Option<usize>,
    fmt: Format,
) -> Outcome {
    let family_id: FamilyId = match family.parse() {
        Ok(f) => f,
        Err(e) => return from_error(e),
    };
    let fam = match (family_id, n) {
        (FamilyId::ClosedForm, Some(n)) => {
            if let Err(e) = crate::relations::check_params(g, d, r) {
                return from_error(e);
            }
            match gen_closed_form(g, d, r, n) {
                Ok(element) => {
                    let items = if element.is_zero() {
                        Vec::new()
                    } else {
                        vec![RelationItem {
                            s: r,
                            t_exp: (n + 2 * r as i64) as u32,
                            u_exp: None,
                            element,
                        }]
                    };
                    RelationFamily {
                        family: family_id,
                        g,
                        d,
                        r,
                        items,
                    }
                }
                Err(e) => return from_error(e),
            }
        }
        (_, Some(_)) => {
            return Outcome::new(
                EXIT_USAGE,
                "error: --N only applies to --family theorem1\n".into(),
            )
        }
        (f, None) => {
            let t = t_order.unwrap_or_else(|| crate::relations::default_t_order(g, r));
            match gen_family_with_order(f, g, d, r, t) {
                Ok(fam) => fam,
                Err(e) => return from_error(e),
            }
        }
    };
    let report = match fmt {
        Format::Json => {
            let mut s = fam.to_json();
            s.push('\n');
            s
        }
        Format::Text => render_family_text(&fam),
    };
    Outcome::new(EXIT_PASS, report)
}

#[derive(Serialize)]
struct EquivalenceReport {
    g: u32,
    d: u32,
    r: u32,
    versus_quotient: IdealComparison,
    versus_h_powers: IdealComparison,
    chain: ChainReport,
    equivalent: bool,
}

pub fn cmd_equivalence(
    g: u32,
    d: u32,
    r: u32,
    orders: Option<ChainOrders>,
    fmt: Format,
) -> Outcome {
    let t_order = orders.map_or_else(|| crate::relations::default_t_order(g, r), |o| o.t_order);
    let fams: Result<Vec<_>, _> = [FamilyId::GPowers, FamilyId::HQuotient, FamilyId::HPowers]
        .iter()
        .map(|&f| gen_family_with_order(f, g, d, r, t_order))
        .collect();
    let fams = match fams {
        Ok(f) => f,
        Err(e) => return from_error(e),
    };
    let bound = BidegreeBound::for_family(g, r);
    let (versus_quotient, versus_h_powers) = match (
        compare_ideals(&fams[0], &fams[1], Some(bound)),
        compare_ideals(&fams[0], &fams[2], Some(bound)),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return from_error(e),
    };
    let chain = match verify_implication_chain(g, d, r, orders) {
        Ok(c) => c,
        Err(e) => return from_error(e),
    };
    let equivalent = versus_quotient.ideals_equal && versus_h_powers.ideals_equal;
    let code = if equivalent && chain.holds {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    let report = EquivalenceReport {
        g,
        d,
        r,
        versus_quotient,
        versus_h_powers,
        chain,
        equivalent,
    };
    let text = match fmt {
        Format::Json => json(&report),
        Format::Text => render_equivalence(&report, &fams),
    };
    Outcome::new(code, text)
}

fn render_equivalence(rep: &EquivalenceReport, fams: &[RelationFamily]) -> String {
    let mut out = String::new();
    writeln!(out, "g={} d={} r={}", rep.g, rep.d, rep.r).unwrap();
    writeln!(
        out,
        "items: vdgk6 {}, herbaut7 {}, strong8 {}",
        fams[0].items.len(),
        fams[1].items.len(),
        fams[2].items.len()
    )
    .unwrap();
    writeln!(
        out,
        "{:>3} {:>3} {:>5} {:>5} {:>5} {:>5} {:>7}",
        "i", "j", "dim", "vdgk6", "hrbt7", "strg8", "span="
    )
    .unwrap();
    for (a, b) in rep
        .versus_quotient
        .pieces
        .iter()
        .zip(&rep.versus_h_powers.pieces)
    {
        let same = a.ideal_equal && b.ideal_equal;
        let span = if a.span_equal && b.span_equal {
            "yes"
        } else {
            "no"
        };
        writeln!(
            out,
            "{:>3} {:>3} {:>5} {:>5} {:>5} {:>5} {:>7}{}",
            a.i,
            a.j,
            a.dim,
            a.ideal_ranks[0],
            a.ideal_ranks[1],
            b.ideal_ranks[1],
            span,
            if same { "" } else { "  <- ideals differ" }
        )
        .unwrap();
    }
    let differ: Vec<_> = rep
        .versus_quotient
        .views_differ
        .iter()
        .chain(&rep.versus_h_powers.views_differ)
        .collect();
    if !differ.is_empty() {
        writeln!(out, "ideal and span comparisons disagree at {differ:?}").unwrap();
    }
    let c = &rep.chain;
    writeln!(
        out,
        "chain (x-order {}, t-order {}):",
        c.orders.x_order, c.orders.t_order
    )
    .unwrap();
    let ok = |b: bool| if b { "pass" } else { "fail" };
    writeln!(
        out,
        "  H(1/x)^s binomial identity: {}",
        ok(c.binomial.iter().all(|x| x.holds))
    )
    .unwrap();
    writeln!(
        out,
        "  vdgk6 => strong8 pole bound: {}",
        ok(c.pole_bound.iter().all(|x| x.holds))
    )
    .unwrap();
    writeln!(
        out,
        "  Stirling scalars: {}",
        ok(c.scalars.iter().all(|x| x.holds))
    )
    .unwrap();
    writeln!(
        out,
        "  herbaut7 => vdgk6 extraction: {}",
        ok(c.extraction.iter().all(|x| x.in_lower_ideal))
    )
    .unwrap();
    writeln!(
        out,
        "{}",
        if rep.equivalent {
            "equivalent"
        } else {
            "NOT equivalent"
        }
    )
    .unwrap();
    out
}

#[derive(Serialize)]
struct GrrReport {
    g: u32,
    d: u32,
    r: u32,
    #[serde(rename = "M")]
    m: u32,
    closed_form: bool,
    vanishing_above: bool,
    top_matches: bool,
    top_todd_free: bool,
    gammas: Vec<GammaJson>,
    derived: Vec<ElementTerm>,
    matches_closed_form: bool,
}

pub fn cmd_grr(g: u32, d: u32, r: u32, m: u32, fmt: Format) -> Outcome {
    if let Err(e) = crate::grr::GrrParams::new(g, d, r) {
        return from_error(e);
    }
    let table = match gamma_extract(g, d, r, m) {
        Ok(t) => t,
        Err(e) => return from_error(e),
    };
    let checks = gamma_checks(&table);
    let (derived, matches) = match derive_from_table(&table) {
        Ok(x) => (x, true),
        Err(Error::InvariantViolation(_)) => {
            let sign = Rational::from(if r.is_multiple_of(2) { 1 } else { -1 });
            let x = table
                .gamma(m + 1)
                .to_taut(g)
                .map(|x| x.scale(&Rational::factorial(r).mul(&sign)));
            match x {
                Ok(x) => (x, false),
                Err(e) => return from_error(e),
            }
        }
        Err(e) => return from_error(e),
    };
    let pass = checks.all() && matches;
    let code = if pass { EXIT_PASS } else { EXIT_FAIL };
    let text = match fmt {
        Format::Json => json(&GrrReport {
            g,
            d,
            r,
            m,
            closed_form: checks.closed_form,
            vanishing_above: checks.vanishing_above,
            top_matches: checks.top_matches,
            top_todd_free: checks.top_todd_free,
            gammas: table
                .gammas
                .iter()
                .map(|(&s, x)| GammaJson {
                    s,
                    element: gamma_to_json(x),
                })
                .collect(),
            derived: derived.to_json_terms(),
            matches_closed_form: matches,
        }),
        Format::Text => {
            let mut out = String::new();
            let ok = |b: bool| if b { "pass" } else { "fail" };
            writeln!(out, "g={g} d={d} r={r} M={m}").unwrap();
            writeln!(
                out,
                "ch(V_k) by pushforward equals the closed form: {}",
                ok(checks.closed_form)
            )
            .unwrap();
            for (s, x) in &table.gammas {
                writeln!(out, "Gamma_{s} = {x}").unwrap();
            }
            writeln!(
                out,
                "Gamma_s = 0 for s > M+1: {}",
                ok(checks.vanishing_above)
            )
            .unwrap();
            writeln!(
                out,
                "Gamma_(M+1) matches the closed formula: {}",
                ok(checks.top_matches)
            )
            .unwrap();
            writeln!(
                out,
                "Gamma_(M+1) free of Todd unknowns: {}",
                ok(checks.top_todd_free)
            )
            .unwrap();
            writeln!(out, "derived relation: {derived}").unwrap();
            writeln!(
                out,
                "equals the closed form with N = {}: {}",
                m as i64 + 1 - 2 * r as i64,
                ok(matches)
            )
            .unwrap();
            out
        }
    };
    Outcome::new(code, text)
}
