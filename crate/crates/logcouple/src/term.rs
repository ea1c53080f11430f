//! Terms and quantifier-free conditions in the language
//! `{0, +, -, <, psi, inf, s, p, d1, d2, ...}` with one free variable `x`
//! and vector constants, evaluated with `inf` as a default value.
//!
//! Concrete syntax (whitespace insignificant):
//!
//! ```text
//! term      := sum
//! sum       := ['-'] prod (('+'|'-') prod)*
//! prod      := atom
//! atom      := '0' | 'inf' | 'x' | vector-literal | func '(' term ')' | '(' term ')'
//! func      := 'psi' | 's' | 'p' | 'd'NAT | '-'
//! condition := disj; disj := conj ('|' conj)*; conj := unit ('&' unit)*
//! unit      := '!' unit | '(' disj ')' | term ('<'|'='|'>') term
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::couple::{pred, psi, succ};
use crate::vector::{rat, ExtValue, LogVector};

mod parse;

pub use parse::{parse_condition, parse_term, ParseError, ParseErrorKind};

/// Quantifier-free definition of the image set `Psi`: `x` lies in it exactly
/// when the predecessor of its successor is `x` itself.
pub const PSI_MEMBERSHIP_FORMULA: &str = "x = p(s(x))";

/// Quantifier-free definition of the set of positive differences of two
/// `Psi`-elements: `p(psi(x))` recovers the subtracted element and
/// `p(s(x + p(psi(x))))` the other one.
pub const PSI_DIFF_FORMULA: &str = "x = -p(psi(x)) + p(s(x + p(psi(x))))";

/// Abstract syntax of a term with at most one free variable.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Zero,
    Infty,
    Var,
    Const(LogVector),
    Add(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Psi(Box<Term>),
    S(Box<Term>),
    P(Box<Term>),
    Delta(u32, Box<Term>),
}

// Constructor shorthands named after the variants; they take the operands by
// value rather than acting on self, so the operator traits do not apply.
#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn add(lhs: Term, rhs: Term) -> Term {
        Term::Add(Box::new(lhs), Box::new(rhs))
    }

    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn psi(t: Term) -> Term {
        Term::Psi(Box::new(t))
    }

    pub fn s(t: Term) -> Term {
        Term::S(Box::new(t))
    }

    pub fn p(t: Term) -> Term {
        Term::P(Box::new(t))
    }

    /// `d_n`, division by `n >= 1`.
    pub fn delta(n: u32, t: Term) -> Term {
        assert!(n >= 1, "delta subscript must be >= 1");
        Term::Delta(n, Box::new(t))
    }

    pub fn sub(lhs: Term, rhs: Term) -> Term {
        Term::add(lhs, Term::neg(rhs))
    }

    /// Whether the free variable occurs.
    pub fn mentions_var(&self) -> bool {
        match self {
            Term::Var => true,
            Term::Zero | Term::Infty | Term::Const(_) => false,
            Term::Add(a, b) => a.mentions_var() || b.mentions_var(),
            Term::Neg(t) | Term::Psi(t) | Term::S(t) | Term::P(t) | Term::Delta(_, t) => {
                t.mentions_var()
            }
        }
    }

    fn is_atomic(&self) -> bool {
        !matches!(self, Term::Add(..) | Term::Neg(..))
    }
}

/// Structural evaluation at `x`, total by the default-value conventions:
/// any operation touching `inf` yields `inf`.
pub fn eval(t: &Term, x: &ExtValue) -> ExtValue {
    match t {
        Term::Zero => ExtValue::zero(),
        Term::Infty => ExtValue::Infinity,
        Term::Var => x.clone(),
        Term::Const(v) => ExtValue::Finite(v.clone()),
        Term::Add(a, b) => eval(a, x).add(&eval(b, x)),
        Term::Neg(a) => eval(a, x).neg(),
        Term::Psi(a) => psi(&eval(a, x)),
        Term::S(a) => succ(&eval(a, x)),
        Term::P(a) => pred(&eval(a, x)),
        Term::Delta(n, a) => eval(a, x).scale(&rat(1, i64::from(*n))),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::Infty => write!(f, "inf"),
            Term::Var => write!(f, "x"),
            Term::Const(v) => write!(f, "{v}"),
            Term::Add(a, b) => {
                // sums read right-folded, so a sum on the left needs parens
                match a.as_ref() {
                    Term::Add(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                match b.as_ref() {
                    Term::Neg(inner) => write!(f, " - {}", Wrapped(inner)),
                    _ => write!(f, " + {b}"),
                }
            }
            Term::Neg(a) => write!(f, "-{}", Wrapped(a)),
            Term::Psi(a) => write!(f, "psi({a})"),
            Term::S(a) => write!(f, "s({a})"),
            Term::P(a) => write!(f, "p({a})"),
            Term::Delta(n, a) => write!(f, "d{n}({a})"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parenthesizes sums (and negations, which print flat) when they appear
/// where the grammar needs a single atom.
struct Wrapped<'a>(&'a Term);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atomic() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

/// Comparison relation of an atomic condition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Rel {
    Lt,
    Eq,
    Gt,
}

impl Rel {
    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        match self {
            Rel::Lt => ord == std::cmp::Ordering::Less,
            Rel::Eq => ord == std::cmp::Ordering::Equal,
            Rel::Gt => ord == std::cmp::Ordering::Greater,
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rel::Lt => write!(f, "<"),
            Rel::Eq => write!(f, "="),
            Rel::Gt => write!(f, ">"),
        }
    }
}

/// An atomic comparison of two terms. The relation symbols never occur inside
/// terms themselves.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub lhs: Term,
    pub rel: Rel,
    pub rhs: Term,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel, self.rhs)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A boolean combination of atomic comparisons.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    Atom(Atom),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
    Not(Box<Condition>),
}

#[allow(clippy::should_implement_trait)]
impl Condition {
    pub fn atom(lhs: Term, rel: Rel, rhs: Term) -> Condition {
        Condition::Atom(Atom { lhs, rel, rhs })
    }

    pub fn and(a: Condition, b: Condition) -> Condition {
        Condition::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Condition, b: Condition) -> Condition {
        Condition::Or(Box::new(a), Box::new(b))
    }

    pub fn not(c: Condition) -> Condition {
        Condition::Not(Box::new(c))
    }
}

/// Evaluates a condition at `x`; atoms compare in the extended order.
pub fn eval_condition(c: &Condition, x: &ExtValue) -> bool {
    match c {
        Condition::Atom(a) => a.rel.holds(eval(&a.lhs, x).cmp(&eval(&a.rhs, x))),
        Condition::And(a, b) => eval_condition(a, x) && eval_condition(b, x),
        Condition::Or(a, b) => eval_condition(a, x) || eval_condition(b, x),
        Condition::Not(a) => !eval_condition(a, x),
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Precedence: '!' > '&' > '|'.
        fn show(c: &Condition, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
            let prec = match c {
                Condition::Or(..) => 0,
                Condition::And(..) => 1,
                Condition::Not(..) | Condition::Atom(..) => 2,
            };
            let needs_parens = prec < parent;
            if needs_parens {
                write!(f, "(")?;
            }
            match c {
                Condition::Atom(a) => write!(f, "{a}")?,
                Condition::And(a, b) => {
                    show(a, f, 1)?;
                    write!(f, " & ")?;
                    show(b, f, 1)?;
                }
                Condition::Or(a, b) => {
                    show(a, f, 0)?;
                    write!(f, " | ")?;
                    show(b, f, 0)?;
                }
                Condition::Not(a) => {
                    write!(f, "!(")?;
                    show(a, f, 0)?;
                    write!(f, ")")?;
                }
            }
            if needs_parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        show(self, f, 0)
    }
}

impl fmt::Debug for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couple::PsiElement;
    use crate::vector::rat_int;

    fn v(coords: &[(u32, i64)]) -> LogVector {
        LogVector::from_coords(coords.iter().map(|&(i, c)| (i, rat_int(c))))
    }

    #[test]
    fn eval_examples() {
        // p(s(x)) is the identity on Psi
        let t = Term::p(Term::s(Term::Var));
        let psi3 = PsiElement(3).to_ext();
        assert_eq!(eval(&t, &psi3), psi3);
        // (2) is not in Psi: s((2)) = s0, p(s0) = inf
        assert_eq!(
            eval(&t, &ExtValue::Finite(v(&[(0, 2)]))),
            ExtValue::Infinity
        );
        // constants ignore x
        let c = Term::delta(2, Term::Const(v(&[(0, 1), (1, 3)])));
        let expected = ExtValue::Finite(LogVector::from_dense(vec![rat(1, 2), rat(3, 2)]));
        assert_eq!(eval(&c, &ExtValue::Infinity), expected);
        assert_eq!(eval(&c, &ExtValue::zero()), expected);
    }

    #[test]
    fn eval_totalizes_through_infinity() {
        let x = ExtValue::Infinity;
        assert_eq!(
            eval(&Term::add(Term::Var, Term::Zero), &x),
            ExtValue::Infinity
        );
        assert_eq!(eval(&Term::neg(Term::Var), &x), ExtValue::Infinity);
        assert_eq!(eval(&Term::delta(3, Term::Var), &x), ExtValue::Infinity);
        assert_eq!(
            eval(&Term::psi(Term::Zero), &ExtValue::zero()),
            ExtValue::Infinity
        );
    }

    #[test]
    fn condition_examples() {
        let c = parse_condition(PSI_MEMBERSHIP_FORMULA).unwrap();
        assert!(eval_condition(&c, &PsiElement(1).to_ext()));
        assert!(!eval_condition(&c, &ExtValue::Finite(v(&[(0, 2)]))));

        let lt_inf = parse_condition("x < inf").unwrap();
        assert!(eval_condition(&lt_inf, &ExtValue::zero()));
        assert!(eval_condition(
            &lt_inf,
            &ExtValue::Finite(v(&[(0, -9), (5, 1)]))
        ));

        // psi(x) = x holds exactly at (1)
        let fixed = parse_condition("psi(x) = x").unwrap();
        assert!(eval_condition(&fixed, &ExtValue::Finite(v(&[(0, 1)]))));
        assert!(!eval_condition(&fixed, &ExtValue::Finite(v(&[(0, 2)]))));
    }

    #[test]
    fn psi_diff_formula_on_members_and_non_members() {
        let c = parse_condition(PSI_DIFF_FORMULA).unwrap();
        // members: psi_b - psi_a = e_{a+1} + ... + e_b for a < b
        for (a, b) in [(0u32, 1u32), (0, 4), (2, 3), (1, 6)] {
            let member = PsiElement(b).to_vector().sub(&PsiElement(a).to_vector());
            assert!(eval_condition(&c, &ExtValue::Finite(member)));
        }
        // non-members
        for bad in [
            v(&[(0, 1)]),         // psi_0 itself
            v(&[(1, 2)]),         // wrong coefficient
            v(&[(1, 1), (3, 1)]), // gap in the block
            v(&[(0, 1), (1, 1)]), // block starting at 0
            LogVector::from_dense(vec![rat_int(0), rat(1, 2)]),
        ] {
            assert!(!eval_condition(&c, &ExtValue::Finite(bad)));
        }
    }

    #[test]
    fn display_round_trips() {
        let t = Term::add(
            Term::Var,
            Term::add(
                Term::delta(2, Term::s(Term::Var)),
                Term::neg(Term::Const(v(&[(1, 1)]))),
            ),
        );
        let printed = t.to_string();
        assert_eq!(parse_term(&printed).unwrap(), t);
    }

    #[test]
    fn json_tags_match_variant_names() {
        let t = Term::psi(Term::add(Term::Var, Term::delta(2, Term::Var)));
        let json = serde_json::to_value(&t).unwrap();
        assert!(json.get("Psi").is_some());
        let inner = &json["Psi"]["Add"];
        assert_eq!(inner[0], serde_json::json!("Var"));
        assert!(inner[1].get("Delta").is_some());
        let back: Term = serde_json::from_value(json).unwrap();
        assert_eq!(back, t);
    }
}
