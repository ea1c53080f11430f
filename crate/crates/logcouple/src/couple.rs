//! The structure maps of the couple: `psi`, the integral, the successor `s`,
//! the predecessor `p`, the contraction `chi`, and the derived maps
//! `a -> a'` and `a -> a†`.
//!
//! `psi` sends a nonzero vector with leading index `n` to
//! `psi_n = (1,...,1,0,...)` (n+1 ones); `psi(0) = psi(inf) = inf`. The image
//! set `{psi_n : n >= 0}` is written `Psi` and is order-isomorphic to the
//! naturals, with minimum `s0 = psi_0 = (1)`.

use std::fmt;

use num_traits::One;

use crate::vector::{ExtValue, LogVector, Rational};

/// An element `psi_n` of the image set, identified by its level `n`.
///
/// `psi_m < psi_n` iff `m < n`; `s0 = psi_0` is the minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PsiElement(pub u32);

impl PsiElement {
    pub fn level(self) -> u32 {
        self.0
    }

    pub fn to_vector(self) -> LogVector {
        LogVector::ones_through(self.0)
    }

    pub fn to_ext(self) -> ExtValue {
        ExtValue::Finite(self.to_vector())
    }
}

impl fmt::Display for PsiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi_{}", self.0)
    }
}

/// Domain errors for the maps that the structure does not extend through `inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum CoupleError {
    /// `chi` is only defined on negative arguments.
    #[error("chi requires a negative argument")]
    NonNegativeArgument,
    /// `a'` is only defined for nonzero `a`.
    #[error("the map a -> a + psi(a) requires a nonzero argument")]
    ZeroArgument,
}

/// `psi` of a vector: `psi_n` for leading index `n`, `inf` at zero.
pub fn psi_vec(a: &LogVector) -> ExtValue {
    match a.lead_index() {
        None => ExtValue::Infinity,
        Some(n) => PsiElement(n).to_ext(),
    }
}

/// `psi` extended to the whole structure, with `psi(0) = psi(inf) = inf`.
pub fn psi(a: &ExtValue) -> ExtValue {
    match a {
        ExtValue::Finite(v) => psi_vec(v),
        ExtValue::Infinity => ExtValue::Infinity,
    }
}

/// `a† = psi(a)`.
pub fn dagger(a: &LogVector) -> ExtValue {
    psi_vec(a)
}

/// `a' = a + psi(a)` for nonzero `a`.
pub fn prime(a: &LogVector) -> Result<LogVector, CoupleError> {
    match psi_vec(a) {
        ExtValue::Finite(p) => Ok(a.add(&p)),
        ExtValue::Infinity => Err(CoupleError::ZeroArgument),
    }
}

/// Length of the maximal all-ones prefix of `a`: the unique `n` with
/// `r_n != 1` and `r_m = 1` for all `m < n`.
fn ones_prefix_len(a: &LogVector) -> u32 {
    let mut n = 0u32;
    while a.coord(n).is_one() {
        n += 1;
    }
    n
}

/// The integral: the unique nonzero `b` with `b + psi(b) = a`. Total on the
/// group (asymptotic integration). With `n = ones_prefix_len(a)` the result is
/// `(0,...,0, r_n - 1, r_{n+1}, ...)`.
pub fn integral(a: &LogVector) -> LogVector {
    let n = ones_prefix_len(a);
    let mut entries: Vec<(u32, Rational)> = vec![(n, a.coord(n) - Rational::one())];
    for (i, c) in a.support() {
        if i > n {
            entries.push((i, c.clone()));
        }
    }
    LogVector::from_coords(entries)
}

/// Level of `s(a)` for finite `a`: `s(a) = psi_{succ_level(a)}`.
pub fn succ_level(a: &LogVector) -> u32 {
    ones_prefix_len(a)
}

/// The successor map `s(a) = psi(integral(a))`, with `s(inf) = inf`. On the
/// image set it is the immediate-successor map `psi_n -> psi_{n+1}`.
pub fn succ(a: &ExtValue) -> ExtValue {
    match a {
        ExtValue::Finite(v) => PsiElement(succ_level(v)).to_ext(),
        ExtValue::Infinity => ExtValue::Infinity,
    }
}

/// The predecessor map: inverse of `s` on `Psi` above `s0`, and `inf`
/// everywhere else (including at `s0`, at non-`Psi` points, and at `inf`).
pub fn pred(a: &ExtValue) -> ExtValue {
    match psi_level(a) {
        Some(n) if n >= 1 => PsiElement(n - 1).to_ext(),
        _ => ExtValue::Infinity,
    }
}

/// The contraction map `chi(a) = integral(psi(a))` on negative arguments.
pub fn chi(a: &LogVector) -> Result<LogVector, CoupleError> {
    if !a.is_negative() {
        return Err(CoupleError::NonNegativeArgument);
    }
    let lead = a.lead_index().expect("negative vector is nonzero");
    // integral(psi_n) = -e_{n+1}
    Ok(LogVector::unit(lead + 1).neg())
}

/// Level `n` when `a = psi_n`, otherwise `None`.
pub fn psi_level(a: &ExtValue) -> Option<u32> {
    let v = a.as_finite()?;
    let max = v.max_support()?;
    let mut count = 0u32;
    for (_, c) in v.support() {
        if !c.is_one() {
            return None;
        }
        count += 1;
    }
    // Every coordinate is 1; membership also needs them contiguous from 0.
    (count == max + 1).then_some(max)
}

/// Whether `a` lies in the image set `Psi`.
pub fn in_psi(a: &ExtValue) -> bool {
    psi_level(a).is_some()
}
