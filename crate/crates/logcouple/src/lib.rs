//! Exact symbolic computation in the asymptotic couple of logarithmic
//! transseries, over the rational-coefficient value group.
//!
//! The library provides:
//!
//! - [`vector`]: finitely supported rational vectors under the lexicographic
//!   group order, with the extended point `inf`;
//! - [`couple`]: the structure maps `psi`, integral, successor, predecessor
//!   and contraction;
//! - [`term`]: parser, printer and evaluator for one-variable terms and
//!   quantifier-free conditions;
//! - [`sfunc`]: the definable-function calculus on the image set — piecewise
//!   normalization of terms, composition tables, condition solving and
//!   eventual-form analysis at infinity;
//! - [`oracle`]: seeded generators and the executable verification suites.
//!
//! All arithmetic is exact (arbitrary-precision rationals); every map is
//! totalized through `inf` exactly where the structure conventions say so.
//! Values are immutable and the whole API is safe for concurrent use.
//!
//! ```
//! use logcouple::{eval, parse_condition, parse_term, solve, term_to_piecewise};
//! use logcouple::{ExtValue, PsiElement, PsiSubset};
//!
//! // the predecessor of the successor is the identity on the image set
//! let t = parse_term("p(s(x))").unwrap();
//! assert_eq!(eval(&t, &PsiElement(3).to_ext()), PsiElement(3).to_ext());
//!
//! // and the matching condition solves to the whole image set
//! let c = parse_condition("x = p(s(x))").unwrap();
//! assert_eq!(solve(&c), PsiSubset::all());
//!
//! // normalized form of a term, checked at one point
//! let t = parse_term("psi(x + x)").unwrap();
//! let p = term_to_piecewise(&t);
//! assert_eq!(p.eval(PsiElement(7)), ExtValue::Finite(logcouple::LogVector::unit(0)));
//! ```

#![forbid(unsafe_code)]

pub mod couple;
pub mod oracle;
pub mod sfunc;
pub mod term;
pub mod vector;

pub use couple::{
    chi, dagger, in_psi, integral, pred, prime, psi, psi_level, succ, CoupleError, PsiElement,
};
pub use oracle::{
    closure_chain, run_all, run_suite, suite_names, ClosureStep, FailureRecord, Gen, GenConfig,
    SuiteReport, UnknownSuite,
};
pub use sfunc::{
    eventual_form, solve, term_to_piecewise, EventualForm, EventualKind, PiecewiseSFunction,
    PsiInterval, PsiSubset, SFunction,
};
pub use term::{
    eval, eval_condition, parse_condition, parse_term, Condition, ParseError, Term,
    PSI_DIFF_FORMULA, PSI_MEMBERSHIP_FORMULA,
};
pub use vector::{ArchClass, ExtValue, LogVector, Rational};
