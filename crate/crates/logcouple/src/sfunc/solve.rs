//! Solving one-variable conditions over the image set.
//!
//! Every atom is normalized to a piecewise s-function difference; on each
//! piece the sign of the difference at `psi_m` is eventually constant in `m`,
//! with the stability bound `maxsupp(beta) - k_1 + 2`: beyond it the leading
//! coordinates of the value form a fixed pattern independent of `m`. Levels
//! below the bound are decided by direct evaluation. Solution sets are closed
//! under the boolean operations and normalize to disjoint intervals and
//! points.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{term_to_piecewise, PiecewiseSFunction, PsiInterval, SFunction};
use crate::couple::PsiElement;
use crate::term::{Condition, Rel, Term};
use crate::vector::ExtValue;

/// A finite union of intervals and points in the image set, kept in a normal
/// form: maximal disjoint runs of levels, presented as points (single levels)
/// and intervals (everything longer).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PsiSubset {
    /// Disjoint, sorted, non-adjacent half-open level runs.
    runs: Vec<(u32, Option<u32>)>,
}

impl PsiSubset {
    pub fn empty() -> Self {
        PsiSubset::default()
    }

    /// The whole image set.
    pub fn all() -> Self {
        PsiSubset {
            runs: vec![(0, None)],
        }
    }

    pub fn point(level: u32) -> Self {
        PsiSubset {
            runs: vec![(level, Some(level + 1))],
        }
    }

    pub fn interval(lo: u32, hi: Option<u32>) -> Self {
        match hi {
            Some(h) if h <= lo => PsiSubset::empty(),
            _ => PsiSubset {
                runs: vec![(lo, hi)],
            },
        }
    }

    /// Rebuilds the normal form from arbitrary runs: sorts, drops empties,
    /// merges overlapping and adjacent ones.
    fn normalized(mut runs: Vec<(u32, Option<u32>)>) -> Self {
        runs.retain(|(lo, hi)| hi.is_none_or(|h| h > *lo));
        runs.sort_by_key(|(lo, _)| *lo);
        let mut out: Vec<(u32, Option<u32>)> = Vec::with_capacity(runs.len());
        for (lo, hi) in runs {
            match out.last_mut() {
                Some((_, prev_hi)) if prev_hi.is_none_or(|h| h >= lo) => {
                    *prev_hi = match (*prev_hi, hi) {
                        (None, _) | (_, None) => None,
                        (Some(a), Some(b)) => Some(a.max(b)),
                    };
                }
                _ => out.push((lo, hi)),
            }
        }
        PsiSubset { runs: out }
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn contains(&self, level: u32) -> bool {
        self.runs
            .iter()
            .any(|(lo, hi)| level >= *lo && hi.is_none_or(|h| level < h))
    }

    pub fn contains_point(&self, x: PsiElement) -> bool {
        self.contains(x.level())
    }

    pub fn union(&self, other: &PsiSubset) -> PsiSubset {
        let mut runs = self.runs.clone();
        runs.extend(other.runs.iter().copied());
        PsiSubset::normalized(runs)
    }

    pub fn intersect(&self, other: &PsiSubset) -> PsiSubset {
        let mut runs = Vec::new();
        for &(alo, ahi) in &self.runs {
            for &(blo, bhi) in &other.runs {
                let lo = alo.max(blo);
                let hi = match (ahi, bhi) {
                    (None, None) => None,
                    (Some(a), None) | (None, Some(a)) => Some(a),
                    (Some(a), Some(b)) => Some(a.min(b)),
                };
                if hi.is_none_or(|h| h > lo) {
                    runs.push((lo, hi));
                }
            }
        }
        PsiSubset::normalized(runs)
    }

    /// Complement within the image set.
    pub fn complement(&self) -> PsiSubset {
        let mut runs = Vec::new();
        let mut cursor = 0u32;
        for &(lo, hi) in &self.runs {
            if lo > cursor {
                runs.push((cursor, Some(lo)));
            }
            match hi {
                Some(h) => cursor = h,
                None => return PsiSubset::normalized(runs),
            }
        }
        runs.push((cursor, None));
        PsiSubset::normalized(runs)
    }

    /// The normalized presentation: proper intervals (length at least two or
    /// unbounded) and isolated points.
    pub fn parts(&self) -> (Vec<PsiInterval>, Vec<PsiElement>) {
        let mut intervals = Vec::new();
        let mut points = Vec::new();
        for &(lo, hi) in &self.runs {
            match hi {
                Some(h) if h == lo + 1 => points.push(PsiElement(lo)),
                _ => intervals.push(PsiInterval { lo, hi }),
            }
        }
        (intervals, points)
    }
}

impl fmt::Display for PsiSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "{{}}");
        }
        let (intervals, points) = self.parts();
        let mut first = true;
        for iv in intervals {
            if !first {
                write!(f, " u ")?;
            }
            write!(f, "{iv}")?;
            first = false;
        }
        for pt in points {
            if !first {
                write!(f, " u ")?;
            }
            write!(f, "{{{pt}}}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for PsiSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// JSON schema: {"intervals": [{"lo_level", "hi_level"}], "points": [n, ...]}
impl Serialize for PsiSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct IntervalRepr {
            lo_level: u32,
            hi_level: Option<u32>,
        }
        let (intervals, points) = self.parts();
        let intervals: Vec<IntervalRepr> = intervals
            .into_iter()
            .map(|iv| IntervalRepr {
                lo_level: iv.lo,
                hi_level: iv.hi,
            })
            .collect();
        let points: Vec<u32> = points.into_iter().map(|p| p.level()).collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("intervals", &intervals)?;
        map.serialize_entry("points", &points)?;
        map.end()
    }
}

/// Solves a condition over the image set.
pub fn solve(c: &Condition) -> PsiSubset {
    solve_with_bound(c).0
}

/// Solves a condition and also reports the level bound below which anything
/// nonuniform happens: beyond the bound, membership is decided by the final
/// runs. Useful for scan-based cross-checks.
pub fn solve_with_bound(c: &Condition) -> (PsiSubset, u32) {
    match c {
        Condition::Atom(atom) => solve_atom(&atom.lhs, atom.rel, &atom.rhs),
        Condition::And(a, b) => {
            let (sa, ba) = solve_with_bound(a);
            let (sb, bb) = solve_with_bound(b);
            (sa.intersect(&sb), ba.max(bb))
        }
        Condition::Or(a, b) => {
            let (sa, ba) = solve_with_bound(a);
            let (sb, bb) = solve_with_bound(b);
            (sa.union(&sb), ba.max(bb))
        }
        Condition::Not(a) => {
            let (sa, ba) = solve_with_bound(a);
            (sa.complement(), ba)
        }
    }
}

fn solve_atom(lhs: &Term, rel: Rel, rhs: &Term) -> (PsiSubset, u32) {
    let pa = term_to_piecewise(lhs);
    let pb = term_to_piecewise(rhs);
    let mut runs: Vec<(u32, Option<u32>)> = Vec::new();
    let mut bound = 0u32;

    let mut boundaries: Vec<u32> = Vec::new();
    for (iv, _) in pa.pieces().iter().chain(pb.pieces().iter()) {
        boundaries.push(iv.lo);
        if let Some(h) = iv.hi {
            boundaries.push(h);
        }
    }
    boundaries.sort_unstable();
    boundaries.dedup();

    for (idx, &lo) in boundaries.iter().enumerate() {
        let hi = boundaries.get(idx + 1).copied();
        let iv = PsiInterval { lo, hi };
        bound = bound.max(lo);
        let fa = piece_at(&pa, lo);
        let fb = piece_at(&pb, lo);
        // On this segment each side is either the constant inf or
        // group-valued everywhere, so mixed comparisons are uniform.
        match (is_const_inf(fa), is_const_inf(fb)) {
            (true, true) => {
                if rel.holds(Ordering::Equal) {
                    runs.push((iv.lo, iv.hi));
                }
            }
            (true, false) => {
                if rel.holds(Ordering::Greater) {
                    runs.push((iv.lo, iv.hi));
                }
            }
            (false, true) => {
                if rel.holds(Ordering::Less) {
                    runs.push((iv.lo, iv.hi));
                }
            }
            (false, false) => {
                collect_sign_runs(&fa.sub(fb), &iv, rel, &mut runs, &mut bound);
            }
        }
    }
    (PsiSubset::normalized(runs), bound)
}

fn piece_at(p: &PiecewiseSFunction, level: u32) -> &SFunction {
    &p.pieces()
        .iter()
        .find(|(iv, _)| iv.contains(level))
        .expect("pieces tile the image set")
        .1
}

fn is_const_inf(f: &SFunction) -> bool {
    matches!(f, SFunction::Constant(ExtValue::Infinity))
}

/// Collects the sub-runs of `iv` where the finite difference `diff` has the
/// sign requested by `rel`.
fn collect_sign_runs(
    diff: &SFunction,
    iv: &PsiInterval,
    rel: Rel,
    runs: &mut Vec<(u32, Option<u32>)>,
    bound: &mut u32,
) {
    match diff {
        SFunction::Constant(ExtValue::Finite(v)) => {
            if rel.holds(v.cmp(&crate::vector::LogVector::zero())) {
                runs.push((iv.lo, iv.hi));
            }
        }
        SFunction::Constant(ExtValue::Infinity) => {
            unreachable!("difference of group-valued pieces is group-valued")
        }
        SFunction::Linear(lin) => {
            let max_supp = lin.beta().max_support().map(i64::from).unwrap_or(-1);
            let stability = max_supp - lin.min_shift() + 2;
            let tail_start = (i64::from(iv.lo)).max(stability).max(0) as u32;
            *bound = (*bound).max(tail_start);
            let scan_end = match iv.hi {
                Some(h) => h.min(tail_start),
                None => tail_start,
            };
            for m in iv.lo..scan_end {
                if rel.holds(sign_at(lin, m)) {
                    runs.push((m, Some(m + 1)));
                }
            }
            // Beyond the stability bound the sign is constant on the piece.
            let tail_in_piece = match iv.hi {
                Some(h) => tail_start < h,
                None => true,
            };
            if tail_in_piece && rel.holds(sign_at(lin, tail_start)) {
                runs.push((tail_start, iv.hi));
            }
        }
    }
}

fn sign_at(lin: &super::LinearSFunction, m: u32) -> Ordering {
    match lin.eval_level(m) {
        ExtValue::Finite(v) => v.cmp(&crate::vector::LogVector::zero()),
        ExtValue::Infinity => unreachable!("sign queries stay inside the domain"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{eval_condition, parse_condition};

    #[test]
    fn solve_examples() {
        // the membership formula solves to the whole image set
        let c = parse_condition(crate::term::PSI_MEMBERSHIP_FORMULA).unwrap();
        assert_eq!(solve(&c), PsiSubset::all());

        // s(x) < [1,1,1] holds only at s0
        let c = parse_condition("s(x) < [1, 1, 1]").unwrap();
        let s = solve(&c);
        assert_eq!(s, PsiSubset::point(0));
        for m in 0..=10 {
            assert_eq!(s.contains(m), m == 0);
        }

        // x < x is empty
        let c = parse_condition("x < x").unwrap();
        assert!(solve(&c).is_empty());
    }

    #[test]
    fn solve_agrees_with_pointwise_evaluation() {
        let texts = [
            "psi(x) = x",
            "x - s(x) < [0, 0, -1]",
            "p(x) > [1] & x < [1, 1, 1, 1, 1]",
            "!(x = [1, 1]) | s(s(x)) > x + x",
            "d2(x + x) = x",
            "p(p(x)) = inf",
        ];
        for text in texts {
            let c = parse_condition(text).unwrap();
            let (s, bound) = solve_with_bound(&c);
            for m in 0..=(2 * bound + 8) {
                assert_eq!(
                    s.contains(m),
                    eval_condition(&c, &PsiElement(m).to_ext()),
                    "`{text}` disagrees at level {m}"
                );
            }
        }
    }

    #[test]
    fn subset_algebra() {
        let a = PsiSubset::interval(2, Some(6));
        let b = PsiSubset::interval(4, None);
        assert_eq!(a.union(&b), PsiSubset::interval(2, None));
        assert_eq!(a.intersect(&b), PsiSubset::interval(4, Some(6)));
        assert_eq!(
            a.complement(),
            PsiSubset::interval(0, Some(2)).union(&PsiSubset::interval(6, None))
        );
        // adjacent point merges into the interval
        let merged = a.union(&PsiSubset::point(6));
        assert_eq!(merged, PsiSubset::interval(2, Some(7)));
        // double complement is the identity
        let weird = PsiSubset::point(0).union(&PsiSubset::interval(3, Some(9)));
        assert_eq!(weird.complement().complement(), weird);
    }

    #[test]
    fn parts_presentation() {
        let s = PsiSubset::point(1)
            .union(&PsiSubset::interval(3, Some(5)))
            .union(&PsiSubset::interval(8, None));
        let (intervals, points) = s.parts();
        assert_eq!(points, vec![PsiElement(1)]);
        assert_eq!(intervals.len(), 2);
        assert_eq!(intervals[0], PsiInterval::new(3, Some(5)));
        assert_eq!(intervals[1], PsiInterval::unbounded(8));
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["points"], serde_json::json!([1]));
        assert_eq!(json["intervals"][1]["hi_level"], serde_json::Value::Null);
    }
}
