//! The definable-function calculus on the image set.
//!
//! An s-function is either a constant, or
//! `x -> q_1 s^{k_1}(x) + ... + q_n s^{k_n}(x) - beta` with strictly
//! increasing integer shifts and nonzero rational coefficients, where
//! `s^k` for negative `k` means the predecessor iterated `-k` times. Such a
//! function is `inf` on an initial segment `I_F` of the image set (nonempty
//! exactly when `k_1 < 0`) and group-valued on the rest, `D_F`.
//!
//! Every one-variable term restricts to a function on the image set that is
//! given piecewise by s-functions; [`term_to_piecewise`] computes such a
//! decomposition, [`solve`] decomposes the solution set of a condition into
//! intervals and points, and [`eventual_form`] computes the exact eventual
//! behaviour of a term on the whole group.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::couple::PsiElement;
use crate::vector::{ExtValue, LogVector, Rational};

mod compose;
mod eventual;
mod solve;

pub use compose::{compose_p, compose_psi, compose_s, image_in_psi, term_to_piecewise, ImageInPsi};
pub use eventual::{eventual_form, EventualForm, EventualKind};
pub use solve::{solve, solve_with_bound, PsiSubset};

/// The linear shape `sum q_j s^{k_j}(x) - beta`.
///
/// Invariants: the shift list is nonempty with strictly increasing `k` and
/// nonzero `q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearSFunction {
    shifts: Vec<(i64, Rational)>,
    beta: LogVector,
}

impl LinearSFunction {
    /// Builds the linear shape, collecting like shifts and dropping zero
    /// coefficients. Returns `None` when everything cancels (the caller then
    /// has the constant `-beta`).
    pub fn new<I: IntoIterator<Item = (i64, Rational)>>(
        shifts: I,
        beta: LogVector,
    ) -> Option<Self> {
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (k, q) in shifts {
            let slot = map.entry(k).or_insert_with(Rational::zero);
            *slot += q;
            if slot.is_zero() {
                map.remove(&k);
            }
        }
        if map.is_empty() {
            return None;
        }
        Some(LinearSFunction {
            shifts: map.into_iter().collect(),
            beta,
        })
    }

    /// The pure shift `s^k(x)`.
    pub fn shift(k: i64) -> Self {
        LinearSFunction {
            shifts: vec![(k, Rational::one())],
            beta: LogVector::zero(),
        }
    }

    pub fn shifts(&self) -> &[(i64, Rational)] {
        &self.shifts
    }

    pub fn beta(&self) -> &LogVector {
        &self.beta
    }

    pub fn min_shift(&self) -> i64 {
        self.shifts[0].0
    }

    /// Sum of the shift coefficients.
    pub fn coeff_sum(&self) -> Rational {
        self.shifts.iter().map(|(_, q)| q.clone()).sum()
    }

    /// `s^k(x)` with `beta = 0` and coefficient 1.
    pub fn is_pure_shift(&self) -> Option<i64> {
        if self.beta.is_zero() && self.shifts.len() == 1 && self.shifts[0].1.is_one() {
            Some(self.shifts[0].0)
        } else {
            None
        }
    }

    /// Least level of `D_F`; `I_F` is exactly the levels below it.
    pub fn domain_min_level(&self) -> u32 {
        let k1 = self.min_shift();
        if k1 < 0 {
            (-k1) as u32
        } else {
            0
        }
    }

    /// Exact value at `psi_m`, `inf` on `I_F`.
    pub fn eval_level(&self, m: u32) -> ExtValue {
        if m < self.domain_min_level() {
            return ExtValue::Infinity;
        }
        let mut acc = self.beta.neg();
        for (k, q) in &self.shifts {
            let level = i64::from(m) + k;
            debug_assert!(level >= 0);
            acc = acc.add(&LogVector::ones_through(level as u32).scale(q));
        }
        ExtValue::Finite(acc)
    }
}

impl fmt::Display for LinearSFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (k, q)) in self.shifts.iter().enumerate() {
            let mag = q.abs();
            if idx == 0 {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else if q.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            match k {
                0 => write!(f, "x")?,
                1 => write!(f, "s(x)")?,
                -1 => write!(f, "p(x)")?,
                k if *k > 1 => write!(f, "s^{k}(x)")?,
                k => write!(f, "p^{}(x)", -k)?,
            }
        }
        if !self.beta.is_zero() {
            write!(f, " - {}", self.beta)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearSFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A constant, or a linear shape. The building block of every definable
/// one-variable function on the image set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SFunction {
    Constant(ExtValue),
    Linear(LinearSFunction),
}

impl SFunction {
    pub fn constant(v: ExtValue) -> Self {
        SFunction::Constant(v)
    }

    pub fn infinity() -> Self {
        SFunction::Constant(ExtValue::Infinity)
    }

    /// The identity `x`.
    pub fn var() -> Self {
        SFunction::Linear(LinearSFunction::shift(0))
    }

    /// Builds the linear shape, falling back to the constant `-beta` when the
    /// shift list cancels away.
    pub fn linear<I: IntoIterator<Item = (i64, Rational)>>(shifts: I, beta: LogVector) -> Self {
        match LinearSFunction::new(shifts, beta.clone()) {
            Some(lin) => SFunction::Linear(lin),
            None => SFunction::Constant(ExtValue::Finite(beta.neg())),
        }
    }

    /// Exact value at a point of the image set.
    pub fn eval(&self, x: PsiElement) -> ExtValue {
        self.eval_level(x.level())
    }

    pub fn eval_level(&self, m: u32) -> ExtValue {
        match self {
            SFunction::Constant(v) => v.clone(),
            SFunction::Linear(lin) => lin.eval_level(m),
        }
    }

    /// Pointwise sum. Valid wherever both operands are finite or one is the
    /// constant `inf`; the piecewise layer only combines functions on pieces
    /// where that holds.
    pub fn add(&self, other: &SFunction) -> SFunction {
        match (self, other) {
            (SFunction::Constant(ExtValue::Infinity), _)
            | (_, SFunction::Constant(ExtValue::Infinity)) => SFunction::infinity(),
            (
                SFunction::Constant(ExtValue::Finite(a)),
                SFunction::Constant(ExtValue::Finite(b)),
            ) => SFunction::Constant(ExtValue::Finite(a.add(b))),
            (SFunction::Constant(ExtValue::Finite(a)), SFunction::Linear(lin))
            | (SFunction::Linear(lin), SFunction::Constant(ExtValue::Finite(a))) => {
                // sum q_j s^{k_j}(x) - beta + a = sum q_j s^{k_j}(x) - (beta - a)
                SFunction::linear(
                    lin.shifts.iter().map(|(k, q)| (*k, q.clone())),
                    lin.beta.sub(a),
                )
            }
            (SFunction::Linear(a), SFunction::Linear(b)) => SFunction::linear(
                a.shifts
                    .iter()
                    .chain(b.shifts.iter())
                    .map(|(k, q)| (*k, q.clone())),
                a.beta.add(&b.beta),
            ),
        }
    }

    pub fn neg(&self) -> SFunction {
        match self {
            SFunction::Constant(v) => SFunction::Constant(v.neg()),
            SFunction::Linear(lin) => {
                SFunction::linear(lin.shifts.iter().map(|(k, q)| (*k, -q)), lin.beta.neg())
            }
        }
    }

    /// Scaling by a nonzero rational; `scale(1/n)` realizes `d_n`.
    pub fn scale(&self, q: &Rational) -> SFunction {
        assert!(!q.is_zero(), "s-functions are scaled by nonzero rationals");
        match self {
            SFunction::Constant(v) => SFunction::Constant(v.scale(q)),
            SFunction::Linear(lin) => SFunction::linear(
                lin.shifts.iter().map(|(k, c)| (*k, c * q)),
                lin.beta.scale(q),
            ),
        }
    }

    pub fn sub(&self, other: &SFunction) -> SFunction {
        self.add(&other.neg())
    }
}

impl fmt::Display for SFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SFunction::Constant(v) => write!(f, "{v}"),
            SFunction::Linear(lin) => write!(f, "{lin}"),
        }
    }
}

impl fmt::Debug for SFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The interval `[psi_lo, psi_hi)` in the image set; `hi = None` means
/// unbounded above.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PsiInterval {
    #[serde(rename = "lo_level")]
    pub lo: u32,
    #[serde(rename = "hi_level")]
    pub hi: Option<u32>,
}

impl PsiInterval {
    pub fn new(lo: u32, hi: Option<u32>) -> Self {
        if let Some(h) = hi {
            assert!(lo < h, "empty interval [{lo}, {h})");
        }
        PsiInterval { lo, hi }
    }

    pub fn unbounded(lo: u32) -> Self {
        PsiInterval { lo, hi: None }
    }

    pub fn contains(&self, level: u32) -> bool {
        level >= self.lo && self.hi.is_none_or(|h| level < h)
    }

    /// Intersection, when nonempty.
    pub fn intersect(&self, other: &PsiInterval) -> Option<PsiInterval> {
        let lo = self.lo.max(other.lo);
        let hi = match (self.hi, other.hi) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        match hi {
            Some(h) if h <= lo => None,
            _ => Some(PsiInterval { lo, hi }),
        }
    }
}

impl fmt::Display for PsiInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[psi_{}, psi_{})", self.lo, h),
            None => write!(f, "[psi_{}, inf)", self.lo),
        }
    }
}

impl fmt::Debug for PsiInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A total function on the image set, given by one s-function per interval of
/// a finite consecutive partition starting at `psi_0`.
///
/// Invariant: pieces are consecutive (`hi` of one equals `lo` of the next),
/// the first starts at level 0 and the last is unbounded. Each linear piece
/// lies inside the domain `D_F` of its s-function, so it is group-valued on
/// the whole piece; `inf`-valued stretches are explicit `Constant(inf)`
/// pieces. The partition is not guaranteed to have the fewest possible
/// pieces, only adjacent identical functions are merged.
#[derive(Clone, PartialEq, Eq)]
pub struct PiecewiseSFunction {
    pieces: Vec<(PsiInterval, SFunction)>,
}

impl PiecewiseSFunction {
    /// One piece covering everything.
    pub fn constant(f: SFunction) -> Self {
        PiecewiseSFunction {
            pieces: vec![(PsiInterval::unbounded(0), f)],
        }
    }

    /// Lifts an s-function, splitting off the `inf`-valued initial segment of
    /// a linear shape as an explicit constant piece.
    pub fn from_sfunction(f: SFunction) -> Self {
        match &f {
            SFunction::Constant(_) => PiecewiseSFunction::constant(f),
            SFunction::Linear(lin) => {
                let lo0 = lin.domain_min_level();
                let mut pieces = Vec::new();
                if lo0 > 0 {
                    pieces.push((PsiInterval::new(0, Some(lo0)), SFunction::infinity()));
                }
                pieces.push((PsiInterval::unbounded(lo0), f));
                PiecewiseSFunction { pieces }
            }
        }
    }

    /// Builds from pieces that must already tile the image set in order.
    pub fn from_pieces(pieces: Vec<(PsiInterval, SFunction)>) -> Self {
        let out = PiecewiseSFunction { pieces };
        out.debug_check();
        out.merged()
    }

    fn debug_check(&self) {
        debug_assert!(!self.pieces.is_empty());
        debug_assert_eq!(self.pieces[0].0.lo, 0);
        debug_assert_eq!(self.pieces.last().unwrap().0.hi, None);
        for w in self.pieces.windows(2) {
            debug_assert_eq!(w[0].0.hi, Some(w[1].0.lo));
        }
        for (iv, f) in &self.pieces {
            if let SFunction::Linear(lin) = f {
                debug_assert!(
                    iv.lo >= lin.domain_min_level(),
                    "piece {iv} outside domain of {f}"
                );
            }
        }
    }

    pub fn pieces(&self) -> &[(PsiInterval, SFunction)] {
        &self.pieces
    }

    pub fn eval(&self, x: PsiElement) -> ExtValue {
        self.eval_level(x.level())
    }

    pub fn eval_level(&self, m: u32) -> ExtValue {
        let (_, f) = self
            .pieces
            .iter()
            .find(|(iv, _)| iv.contains(m))
            .expect("pieces tile the image set");
        f.eval_level(m)
    }

    /// Merges adjacent pieces carrying identical s-functions.
    fn merged(mut self) -> Self {
        let mut out: Vec<(PsiInterval, SFunction)> = Vec::with_capacity(self.pieces.len());
        for (iv, f) in self.pieces.drain(..) {
            match out.last_mut() {
                Some((prev, pf)) if *pf == f => prev.hi = iv.hi,
                _ => out.push((iv, f)),
            }
        }
        PiecewiseSFunction { pieces: out }
    }

    /// Refines both partitions and combines piecewise.
    pub fn zip_with(
        &self,
        other: &PiecewiseSFunction,
        mut op: impl FnMut(&SFunction, &SFunction) -> SFunction,
    ) -> PiecewiseSFunction {
        let mut bounds: Vec<u32> = Vec::new();
        for (iv, _) in self.pieces.iter().chain(other.pieces.iter()) {
            bounds.push(iv.lo);
            if let Some(h) = iv.hi {
                bounds.push(h);
            }
        }
        bounds.sort_unstable();
        bounds.dedup();
        let mut pieces = Vec::new();
        for (idx, &lo) in bounds.iter().enumerate() {
            let hi = bounds.get(idx + 1).copied();
            let iv = PsiInterval { lo, hi };
            let fa = self.piece_at(lo);
            let fb = other.piece_at(lo);
            pieces.push((iv, op(fa, fb)));
        }
        PiecewiseSFunction::from_pieces(pieces)
    }

    fn piece_at(&self, level: u32) -> &SFunction {
        &self
            .pieces
            .iter()
            .find(|(iv, _)| iv.contains(level))
            .expect("pieces tile the image set")
            .1
    }

    pub fn add(&self, other: &PiecewiseSFunction) -> PiecewiseSFunction {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &PiecewiseSFunction) -> PiecewiseSFunction {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> PiecewiseSFunction {
        self.map(|f| f.neg())
    }

    pub fn scale(&self, q: &Rational) -> PiecewiseSFunction {
        self.map(|f| f.scale(q))
    }

    pub fn map(&self, mut op: impl FnMut(&SFunction) -> SFunction) -> PiecewiseSFunction {
        PiecewiseSFunction::from_pieces(self.pieces.iter().map(|(iv, f)| (*iv, op(f))).collect())
    }

    /// Applies a piecewise-valued composition to every piece: each piece's
    /// function is composed over the whole image set, then clipped back to
    /// the piece.
    pub fn compose_with(
        &self,
        mut op: impl FnMut(&SFunction) -> PiecewiseSFunction,
    ) -> PiecewiseSFunction {
        let mut pieces = Vec::new();
        for (iv, f) in &self.pieces {
            let composed = op(f);
            for (sub_iv, sub_f) in &composed.pieces {
                if let Some(clipped) = sub_iv.intersect(iv) {
                    pieces.push((clipped, sub_f.clone()));
                }
            }
        }
        PiecewiseSFunction::from_pieces(pieces)
    }
}

impl fmt::Display for PiecewiseSFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (iv, fun)) in self.pieces.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "on {iv}: {fun}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PiecewiseSFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// JSON schema: {"pieces": [{"interval": {"lo_level", "hi_level"},
// "fn": {"kind": "const", "value": ...} |
//        {"kind": "linear", "shifts": [[k, "q"], ...], "beta": [...]}}]}
impl Serialize for PiecewiseSFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct IntervalRepr {
            lo_level: u32,
            hi_level: Option<u32>,
        }
        struct FnRepr<'a>(&'a SFunction);
        impl Serialize for FnRepr<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(None)?;
                match self.0 {
                    SFunction::Constant(v) => {
                        map.serialize_entry("kind", "const")?;
                        map.serialize_entry("value", v)?;
                    }
                    SFunction::Linear(lin) => {
                        map.serialize_entry("kind", "linear")?;
                        let shifts: Vec<(i64, String)> = lin
                            .shifts
                            .iter()
                            .map(|(k, q)| (*k, q.to_string()))
                            .collect();
                        map.serialize_entry("shifts", &shifts)?;
                        map.serialize_entry("beta", &lin.beta)?;
                    }
                }
                map.end()
            }
        }
        #[derive(Serialize)]
        struct PieceRepr<'a> {
            interval: IntervalRepr,
            #[serde(rename = "fn")]
            function: FnRepr<'a>,
        }
        let pieces: Vec<PieceRepr> = self
            .pieces
            .iter()
            .map(|(iv, f)| PieceRepr {
                interval: IntervalRepr {
                    lo_level: iv.lo,
                    hi_level: iv.hi,
                },
                function: FnRepr(f),
            })
            .collect();
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("pieces", &pieces)?;
        map.end()
    }
}
