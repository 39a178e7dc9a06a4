//! Graded pieces of ideals in `R`, by exact row reduction.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::RelationFamily;
use crate::arith::{Rational, Ring};
use crate::error::{Error, Result};
use crate::tautalg::{monomials_of_bidegree, TautElement, TautMonomial};

/// The bidegrees `(i, j)` with `1 <= i <= max_first` and
/// `j <= min(max_weight, i (g - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BidegreeBound {
    pub max_first: u32,
    pub max_weight: u32,
}

impl BidegreeBound {
    pub fn for_family(g: u32, r: u32) -> Self {
        BidegreeBound {
            max_first: r,
            max_weight: r * g.saturating_sub(1),
        }
    }

    pub fn bidegrees(&self, g: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 1..=self.max_first {
            for j in 0..=self.max_weight.min(i * g.saturating_sub(1)) {
                out.push((i, j));
            }
        }
        out
    }
}

/// Subspace of one graded piece, kept in reduced row echelon form.
#[derive(Debug, Clone)]
pub struct SpanPiece {
    basis: Vec<TautMonomial>,
    index: HashMap<TautMonomial, usize>,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl SpanPiece {
    pub fn new(g: u32, i: u32, j: u32) -> Self {
        let basis = monomials_of_bidegree(g, i, j);
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, m)| (m, k))
            .collect();
        SpanPiece {
            basis,
            index,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[TautMonomial] {
        &self.basis
    }

    fn coordinates(&self, x: &TautElement) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.basis.len()];
        for (m, c) in x.terms() {
            let k = self.index.get(m).ok_or_else(|| {
                Error::InvariantViolation(format!("monomial {m} lies outside this graded piece"))
            })?;
            v[*k] = c.clone();
        }
        Ok(v)
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (k, rk) in row.iter().enumerate().skip(p) {
                if !rk.is_zero() {
                    v[k] = v[k].sub(&f.mul(rk));
                }
            }
        }
        v
    }

    /// Adds `x` to the span; true when the rank went up.
    pub fn insert(&mut self, x: &TautElement) -> Result<bool> {
        let v = self.reduce(self.coordinates(x)?);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return Ok(false);
        };
        let inv = v[p].recip()?;
        let v: Vec<Rational> = v.iter().map(|c| c.mul(&inv)).collect();
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (k, vk) in v.iter().enumerate().skip(p) {
                if !vk.is_zero() {
                    row[k] = row[k].sub(&f.mul(vk));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        Ok(true)
    }

    pub fn contains(&self, x: &TautElement) -> Result<bool> {
        let v = self.reduce(self.coordinates(x)?);
        Ok(v.iter().all(Ring::is_zero))
    }
}

/// Rows spanning the bidegree `(i, j)` piece: each generator times every
/// monomial of the complementary bidegree (`ideal`), or the generators of
/// that exact bidegree only (`!ideal`).
fn piece_rows(gens: &[TautElement], g: u32, (i, j): (u32, u32), ideal: bool) -> Vec<TautElement> {
    let mut rows = Vec::new();
    for x in gens {
        for (&(s, w), part) in &x.homogeneous_components() {
            if ideal {
                if s > i || w > j {
                    continue;
                }
                for m in monomials_of_bidegree(g, i - s, j - w) {
                    rows.push(part.mul(&TautElement::from_monomial(Some(g), m, Rational::one())));
                }
            } else if (s, w) == (i, j) {
                rows.push(part.clone());
            }
        }
    }
    rows
}

/// A set of graded pieces of the ideal (or linear span) of some elements.
#[derive(Debug, Clone)]
pub struct GradedSpan {
    g: u32,
    pieces: BTreeMap<(u32, u32), SpanPiece>,
}

impl GradedSpan {
    fn build<'a>(
        g: u32,
        gens: impl IntoIterator<Item = &'a TautElement>,
        bidegrees: &[(u32, u32)],
        ideal: bool,
    ) -> Result<Self> {
        let gens: Vec<TautElement> = gens.into_iter().cloned().collect();
        let pieces = bidegrees
            .par_iter()
            .map(|&bd| {
                let mut piece = SpanPiece::new(g, bd.0, bd.1);
                for row in piece_rows(&gens, g, bd, ideal) {
                    piece.insert(&row)?;
                }
                Ok((bd, piece))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(GradedSpan { g, pieces })
    }

    /// Graded pieces of the ideal generated by `gens`.
    pub fn ideal<'a>(
        g: u32,
        gens: impl IntoIterator<Item = &'a TautElement>,
        bound: BidegreeBound,
    ) -> Result<Self> {
        Self::build(g, gens, &bound.bidegrees(g), true)
    }

    /// Ideal pieces at just the listed bidegrees.
    pub fn ideal_at<'a>(
        g: u32,
        gens: impl IntoIterator<Item = &'a TautElement>,
        bidegrees: &[(u32, u32)],
    ) -> Result<Self> {
        Self::build(g, gens, bidegrees, true)
    }

    /// Per-bidegree linear span of `gens`, no multiplication.
    pub fn linear<'a>(
        g: u32,
        gens: impl IntoIterator<Item = &'a TautElement>,
        bound: BidegreeBound,
    ) -> Result<Self> {
        Self::build(g, gens, &bound.bidegrees(g), false)
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn piece(&self, i: u32, j: u32) -> Option<&SpanPiece> {
        self.pieces.get(&(i, j))
    }

    pub fn rank_at(&self, i: u32, j: u32) -> Option<usize> {
        self.piece(i, j).map(SpanPiece::rank)
    }

    /// Membership of every homogeneous component. Components outside the
    /// computed bidegrees are an error rather than a silent pass.
    pub fn contains(&self, x: &TautElement) -> Result<bool> {
        for ((i, j), part) in x.homogeneous_components() {
            let piece = self.piece(i, j).ok_or_else(|| {
                Error::InsufficientTruncation(format!("bidegree ({i},{j}) was not computed"))
            })?;
            if !piece.contains(&part)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceComparison {
    pub i: u32,
    pub j: u32,
    pub dim: usize,
    pub ideal_ranks: [usize; 3],
    pub span_ranks: [usize; 3],
    pub ideal_equal: bool,
    pub span_equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealComparison {
    pub first: String,
    pub second: String,
    pub g: u32,
    pub d: u32,
    pub r: u32,
    pub bound: BidegreeBound,
    pub pieces: Vec<PieceComparison>,
    pub ideals_equal: bool,
    pub spans_equal: bool,
    /// Bidegrees where the two notions of equality disagree.
    pub views_differ: Vec<(u32, u32)>,
}

fn ranks(
    a: &[TautElement],
    b: &[TautElement],
    g: u32,
    bd: (u32, u32),
    ideal: bool,
) -> Result<[usize; 3]> {
    let mut pa = SpanPiece::new(g, bd.0, bd.1);
    for x in piece_rows(a, g, bd, ideal) {
        pa.insert(&x)?;
    }
    let mut pb = SpanPiece::new(g, bd.0, bd.1);
    let rows_b = piece_rows(b, g, bd, ideal);
    for x in &rows_b {
        pb.insert(x)?;
    }
    let mut union = pa.clone();
    for x in &rows_b {
        union.insert(x)?;
    }
    Ok([pa.rank(), pb.rank(), union.rank()])
}

/// Compares the ideals generated by two families piece by piece. Equal iff
/// `rank(A) = rank(B) = rank(A + B)` in every bidegree of the bound.
pub fn compare_ideals(
    a: &RelationFamily,
    b: &RelationFamily,
    bound: Option<BidegreeBound>,
) -> Result<IdealComparison> {
    if a.g != b.g {
        return Err(Error::GenusMismatch(a.g, b.g));
    }
    let g = a.g;
    let bound = bound.unwrap_or_else(|| BidegreeBound::for_family(g, a.r.max(b.r)));
    let ga: Vec<TautElement> = a.elements().cloned().collect();
    let gb: Vec<TautElement> = b.elements().cloned().collect();
    let pieces = bound
        .bidegrees(g)
        .par_iter()
        .map(|&bd| {
            let ideal_ranks = ranks(&ga, &gb, g, bd, true)?;
            let span_ranks = ranks(&ga, &gb, g, bd, false)?;
            let eq = |r: [usize; 3]| r[0] == r[2] && r[1] == r[2];
            Ok(PieceComparison {
                i: bd.0,
                j: bd.1,
                dim: monomials_of_bidegree(g, bd.0, bd.1).len(),
                ideal_ranks,
                span_ranks,
                ideal_equal: eq(ideal_ranks),
                span_equal: eq(span_ranks),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ideals_equal = pieces.iter().all(|p| p.ideal_equal);
    let spans_equal = pieces.iter().all(|p| p.span_equal);
    let views_differ = pieces
        .iter()
        .filter(|p| p.ideal_equal != p.span_equal)
        .map(|p| (p.i, p.j))
        .collect();
    Ok(IdealComparison {
        first: a.family.to_string(),
        second: b.family.to_string(),
        g,
        d: a.d,
        r: a.r,
        bound,
        pieces,
        ideals_equal,
        spans_equal,
        views_differ,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QAlgebra;
    use crate::relations::{gen_family, FamilyId};

    fn c(g: u32, j: u32) -> TautElement {
        TautElement::generator(g, j).unwrap()
    }

    #[test]
    fn rank_and_membership() {
        let g = 4;
        let mut p = SpanPiece::new(g, 2, 2);
        assert_eq!(p.dim(), 2);
        let x = c(g, 0).mul(&c(g, 2)).add(&c(g, 1).mul(&c(g, 1)));
        assert!(p.insert(&x).unwrap());
        assert!(!p.insert(&x.scale(&Rational::from(3))).unwrap());
        assert!(p.contains(&x.scale(&Rational::from(-2))).unwrap());
        assert!(!p.contains(&c(g, 1).mul(&c(g, 1))).unwrap());
        assert!(p.insert(&c(g, 1).mul(&c(g, 1))).unwrap());
        assert_eq!(p.rank(), 2);
        assert!(p.insert(&c(g, 1)).is_err());
    }

    #[test]
    fn ideal_of_a_generator() {
        let g = 3;
        let span = GradedSpan::ideal(
            g,
            [&c(g, 1)],
            BidegreeBound {
                max_first: 2,
                max_weight: 4,
            },
        )
        .unwrap();
        assert_eq!(span.rank_at(1, 1), Some(1));
        assert_eq!(span.rank_at(1, 0), Some(0));
        // C(1) * {C(0), C(1), C(2)}
        assert_eq!(span.rank_at(2, 1), Some(1));
        assert_eq!(span.rank_at(2, 2), Some(1));
        assert_eq!(span.rank_at(2, 3), Some(1));
        assert!(span.contains(&c(g, 1).mul(&c(g, 2))).unwrap());
        assert!(!span.contains(&c(g, 2).mul(&c(g, 2))).unwrap());
        let lin = GradedSpan::linear(
            g,
            [&c(g, 1)],
            BidegreeBound {
                max_first: 2,
                max_weight: 4,
            },
        )
        .unwrap();
        assert_eq!(lin.rank_at(2, 2), Some(0));
    }

    #[test]
    fn families_agree_small() {
        let f6 = gen_family(FamilyId::GPowers, 4, 4, 2).unwrap();
        let f8 = gen_family(FamilyId::HPowers, 4, 4, 2).unwrap();
        let cmp = compare_ideals(&f6, &f8, None).unwrap();
        assert!(cmp.ideals_equal, "{cmp:?}");
    }
}
