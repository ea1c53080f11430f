//! Composition of s-functions with the structure maps, and the piecewise
//! normalization of terms.
//!
//! For a linear `F(x) = sum q_j s^{k_j}(x) - beta` on its domain, the value
//! `F(psi_m)` expands over the basis `(psi_a)` as
//! `sum q_j psi_{m+k_j} - sum c_i psi_{a_i}` where `c` are the basis
//! coefficients of `beta` (their sum is the first coordinate of `beta`).
//! The coefficient-sum laws then decide the compositions:
//!
//! - `psi` of a combination with coefficient sum != 0 is `s0`; with sum 0 it
//!   is the successor of the least contributing element.
//! - `s` of a combination with coefficient sum != 1 is `s0`; with sum 1 it is
//!   the successor of the least contributing element.
//!
//! The least contributing element is `psi_{m+k_1}` below the threshold level
//! `a_1 - k_1`, and `psi_{a_1}` above it; at the threshold itself the bottom
//! terms may cancel, so that single point is valued by direct evaluation.
//! Condition thresholds `s^{k_1+1}(x) = delta` translate to `x = s^{-k_1-1}(delta)`
//! on the level scale, and a threshold falling below the domain means the
//! comparison is decided uniformly.

use num_traits::{One, Zero};

use super::{LinearSFunction, PiecewiseSFunction, PsiInterval, SFunction};
use crate::couple::{pred, psi, succ, PsiElement};
use crate::term::Term;
use crate::vector::{rat, ExtValue, Rational};

/// Where a linear s-function meets the image set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ImageInPsi {
    /// The whole image lies in the image set: exactly the pure shifts `s^k(x)`.
    AllPsi,
    /// The finitely many domain points whose value lands in the image set
    /// (at most two).
    ExceptionalPoints(Vec<PsiElement>),
}

/// Classifies the image of a linear s-function inside the image set.
///
/// Candidates arise only from aligning a moving index `m + k_j` with a basis
/// index of `beta`; each candidate is confirmed by direct evaluation.
pub fn image_in_psi(f: &LinearSFunction) -> ImageInPsi {
    if f.is_pure_shift().is_some() {
        return ImageInPsi::AllPsi;
    }
    let lo0 = i64::from(f.domain_min_level());
    let mut candidates: Vec<u32> = Vec::new();
    for (a, _) in f.beta().to_psi_basis() {
        for (k, _) in f.shifts() {
            let m = i64::from(a) - k;
            if m >= lo0 && !candidates.contains(&(m as u32)) {
                candidates.push(m as u32);
            }
        }
    }
    candidates.sort_unstable();
    let points: Vec<PsiElement> = candidates
        .into_iter()
        .filter(|&m| crate::couple::in_psi(&f.eval_level(m)))
        .map(PsiElement)
        .collect();
    debug_assert!(
        points.len() <= 2,
        "image meets the image set in more than two points"
    );
    ImageInPsi::ExceptionalPoints(points)
}

/// Shared shape of the psi- and s-composition tables.
///
/// `degenerate_sum` is the coefficient-sum value that makes the composition
/// collapse to the constant `s0` (0 for `psi`, 1 for `s`); `direct` evaluates
/// the composition at a single point.
fn compose_table(
    f: &LinearSFunction,
    degenerate_sum: &Rational,
    direct: impl Fn(u32) -> ExtValue,
) -> PiecewiseSFunction {
    let k1 = f.min_shift();
    let lo0 = f.domain_min_level();
    let s0 = SFunction::Constant(PsiElement(0).to_ext());

    let mut pieces: Vec<(PsiInterval, SFunction)> = Vec::new();
    if lo0 > 0 {
        pieces.push((PsiInterval::new(0, Some(lo0)), SFunction::infinity()));
    }

    let total = f.coeff_sum() - f.beta().coord(0);
    if &total != degenerate_sum {
        pieces.push((PsiInterval::unbounded(lo0), s0));
        return PiecewiseSFunction::from_pieces(pieces);
    }

    let successor_shift = SFunction::Linear(LinearSFunction::shift(k1 + 1));
    match f.beta().to_psi_basis().keys().next().copied() {
        None => {
            // beta = 0: the successor of psi_{m+k_1} throughout the domain.
            pieces.push((PsiInterval::unbounded(lo0), successor_shift));
        }
        Some(a1) => {
            let threshold = i64::from(a1) - k1;
            let plateau = SFunction::Constant(PsiElement(a1 + 1).to_ext());
            if threshold < i64::from(lo0) {
                pieces.push((PsiInterval::unbounded(lo0), plateau));
            } else {
                let t = threshold as u32;
                if t > lo0 {
                    pieces.push((PsiInterval::new(lo0, Some(t)), successor_shift));
                }
                pieces.push((
                    PsiInterval::new(t, Some(t + 1)),
                    SFunction::Constant(direct(t)),
                ));
                pieces.push((PsiInterval::unbounded(t + 1), plateau));
            }
        }
    }
    PiecewiseSFunction::from_pieces(pieces)
}

/// `psi` composed with an s-function, as a total piecewise s-function.
pub fn compose_psi(f: &SFunction) -> PiecewiseSFunction {
    match f {
        SFunction::Constant(c) => PiecewiseSFunction::constant(SFunction::Constant(psi(c))),
        SFunction::Linear(lin) => {
            compose_table(lin, &Rational::zero(), |m| psi(&lin.eval_level(m)))
        }
    }
}

/// `s` composed with an s-function.
pub fn compose_s(f: &SFunction) -> PiecewiseSFunction {
    match f {
        SFunction::Constant(c) => PiecewiseSFunction::constant(SFunction::Constant(succ(c))),
        SFunction::Linear(lin) => {
            compose_table(lin, &Rational::one(), |m| succ(&lin.eval_level(m)))
        }
    }
}

/// `p` composed with an s-function. A pure shift `s^k(x)` drops to
/// `s^{k-1}(x)` away from the bottom of its domain; any other linear shape
/// lands in the image set at most twice, so the composition is `inf` with at
/// most two exceptional points valued directly.
pub fn compose_p(f: &SFunction) -> PiecewiseSFunction {
    let lin = match f {
        SFunction::Constant(c) => {
            return PiecewiseSFunction::constant(SFunction::Constant(pred(c)));
        }
        SFunction::Linear(lin) => lin,
    };
    if let Some(k) = lin.is_pure_shift() {
        let lo0 = lin.domain_min_level();
        let mut pieces: Vec<(PsiInterval, SFunction)> = Vec::new();
        if k <= 0 {
            // inf on I_F and at the bottom point, where s^k(x) = s0.
            pieces.push((PsiInterval::new(0, Some(lo0 + 1)), SFunction::infinity()));
            pieces.push((
                PsiInterval::unbounded(lo0 + 1),
                SFunction::Linear(LinearSFunction::shift(k - 1)),
            ));
        } else {
            pieces.push((
                PsiInterval::unbounded(0),
                SFunction::Linear(LinearSFunction::shift(k - 1)),
            ));
        }
        return PiecewiseSFunction::from_pieces(pieces);
    }

    let points = match image_in_psi(lin) {
        ImageInPsi::AllPsi => unreachable!("pure shifts handled above"),
        ImageInPsi::ExceptionalPoints(points) => points,
    };
    let mut pieces: Vec<(PsiInterval, SFunction)> = Vec::new();
    let mut cursor = 0u32;
    for x in points {
        let value = pred(&lin.eval_level(x.level()));
        if value.is_infinite() {
            continue;
        }
        let m = x.level();
        if m > cursor {
            pieces.push((PsiInterval::new(cursor, Some(m)), SFunction::infinity()));
        }
        pieces.push((PsiInterval::new(m, Some(m + 1)), SFunction::Constant(value)));
        cursor = m + 1;
    }
    pieces.push((PsiInterval::unbounded(cursor), SFunction::infinity()));
    PiecewiseSFunction::from_pieces(pieces)
}

/// Normalizes a one-variable term into a piecewise s-function that agrees
/// with direct evaluation at every point of the image set.
pub fn term_to_piecewise(t: &Term) -> PiecewiseSFunction {
    match t {
        Term::Zero => PiecewiseSFunction::constant(SFunction::Constant(ExtValue::zero())),
        Term::Infty => PiecewiseSFunction::constant(SFunction::infinity()),
        Term::Var => PiecewiseSFunction::constant(SFunction::var()),
        Term::Const(v) => {
            PiecewiseSFunction::constant(SFunction::Constant(ExtValue::Finite(v.clone())))
        }
        Term::Add(a, b) => term_to_piecewise(a).add(&term_to_piecewise(b)),
        Term::Neg(a) => term_to_piecewise(a).neg(),
        Term::Delta(n, a) => term_to_piecewise(a).scale(&rat(1, i64::from(*n))),
        Term::Psi(a) => term_to_piecewise(a).compose_with(compose_psi),
        Term::S(a) => term_to_piecewise(a).compose_with(compose_s),
        Term::P(a) => term_to_piecewise(a).compose_with(compose_p),
    }
}
