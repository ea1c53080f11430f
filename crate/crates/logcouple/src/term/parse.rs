//! Recursive-descent parser for terms and conditions.

use std::fmt;
use std::str::FromStr;

use super::{Atom, Condition, Rel, Term};
use crate::vector::{LogVector, Rational};

/// What went wrong while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed input with a human-readable expectation.
    Syntax(String),
    /// A function applied to the wrong number or kind of arguments.
    Arity(String),
    /// An identifier that is not part of the language.
    UnknownSymbol(String),
}

/// A parse failure, carrying the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at {}: {}", self.position, msg),
            ParseErrorKind::Arity(msg) => write!(f, "arity error at {}: {}", self.position, msg),
            ParseErrorKind::UnknownSymbol(name) => {
                write!(f, "unknown symbol `{}` at {}", name, self.position)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(String),
    Plus,
    Minus,
    Slash,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Eq,
    Gt,
    Amp,
    Pipe,
    Bang,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(input: &str) -> Result<Lexer, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => toks.push((Tok::Plus, start)),
            b'-' => toks.push((Tok::Minus, start)),
            b'/' => toks.push((Tok::Slash, start)),
            b',' => toks.push((Tok::Comma, start)),
            b'(' => toks.push((Tok::LParen, start)),
            b')' => toks.push((Tok::RParen, start)),
            b'[' => toks.push((Tok::LBracket, start)),
            b']' => toks.push((Tok::RBracket, start)),
            b'<' => toks.push((Tok::Lt, start)),
            b'=' => toks.push((Tok::Eq, start)),
            b'>' => toks.push((Tok::Gt, start)),
            b'&' => toks.push((Tok::Amp, start)),
            b'|' => toks.push((Tok::Pipe, start)),
            b'!' => toks.push((Tok::Bang, start)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Nat(input[start..i].to_string()), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(input[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{}`", b as char)),
                    position: start,
                });
            }
        }
        i += 1;
    }
    Ok(Lexer {
        toks,
        end: input.len(),
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            kind: ParseErrorKind::Syntax(msg.into()),
            position: self.here(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        // sum := ['-'] prod (('+'|'-') prod)*, folded to the right:
        // a - b + c parses as Add(a, Add(Neg(b), c)).
        let first = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Term::neg(self.atom()?)
        } else {
            self.atom()?
        };
        let mut items = vec![first];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    items.push(self.atom()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    items.push(Term::neg(self.atom()?));
                }
                _ => break,
            }
        }
        let mut acc = items.pop().expect("at least one summand");
        while let Some(item) = items.pop() {
            acc = Term::add(item, acc);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Nat(n)) if n == "0" => Ok(Term::Zero),
            Some(Tok::Nat(n)) => Err(ParseError {
                kind: ParseErrorKind::Syntax(format!(
                    "bare number `{n}` is not a term; write a vector literal like [{n}]"
                )),
                position: pos,
            }),
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Term::Var),
                "inf" => Ok(Term::Infty),
                "psi" => Ok(Term::psi(self.func_arg("psi")?)),
                "s" => Ok(Term::s(self.func_arg("s")?)),
                "p" => Ok(Term::p(self.func_arg("p")?)),
                _ => {
                    if let Some(digits) = name.strip_prefix('d') {
                        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                            let n: u32 = digits.parse().map_err(|_| ParseError {
                                kind: ParseErrorKind::Arity(format!(
                                    "division index `{digits}` out of range"
                                )),
                                position: pos,
                            })?;
                            if n == 0 {
                                return Err(ParseError {
                                    kind: ParseErrorKind::Arity(
                                        "division index must be >= 1".to_string(),
                                    ),
                                    position: pos,
                                });
                            }
                            return Ok(Term::Delta(n, Box::new(self.func_arg(&name)?)));
                        }
                    }
                    Err(ParseError {
                        kind: ParseErrorKind::UnknownSymbol(name),
                        position: pos,
                    })
                }
            },
            Some(Tok::Minus) => {
                // '-' used as a unary function: -(term) or -atom
                Ok(Term::neg(self.atom()?))
            }
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::LBracket) => {
                self.pos -= 1;
                Ok(Term::Const(self.vector_literal()?))
            }
            Some(other) => Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("unexpected token {other:?}")),
                position: pos,
            }),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn func_arg(&mut self, name: &str) -> Result<Term, ParseError> {
        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
        let t = self.term()?;
        if self.peek() == Some(&Tok::Comma) {
            return Err(ParseError {
                kind: ParseErrorKind::Arity(format!("`{name}` takes exactly one argument")),
                position: self.here(),
            });
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(t)
    }

    fn vector_literal(&mut self) -> Result<LogVector, ParseError> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut entries = Vec::new();
        if self.peek() == Some(&Tok::RBracket) {
            self.pos += 1;
            return Ok(LogVector::zero());
        }
        loop {
            entries.push(self.rational()?);
            let save = self.pos;
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBracket) => break,
                _ => {
                    self.pos = save;
                    return self.syntax("expected `,` or `]` in vector literal");
                }
            }
        }
        Ok(LogVector::from_dense(entries))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let save = self.pos;
        let numer = match self.bump() {
            Some(Tok::Nat(n)) => n,
            _ => {
                self.pos = save;
                return self.syntax("expected a number");
            }
        };
        let denom = if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            let save = self.pos;
            match self.bump() {
                Some(Tok::Nat(n)) => Some(n),
                _ => {
                    self.pos = save;
                    return self.syntax("expected a denominator after `/`");
                }
            }
        } else {
            None
        };
        let text = match &denom {
            Some(d) => format!("{numer}/{d}"),
            None => numer,
        };
        let q = Rational::from_str(&text).map_err(|e| ParseError {
            kind: ParseErrorKind::Syntax(format!("bad rational `{text}`: {e}")),
            position: self.here(),
        })?;
        Ok(if negative { -q } else { q })
    }

    fn condition(&mut self) -> Result<Condition, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            acc = Condition::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Condition, ParseError> {
        let mut acc = self.cond_unit()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            acc = Condition::and(acc, self.cond_unit()?);
        }
        Ok(acc)
    }

    fn cond_unit(&mut self) -> Result<Condition, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Condition::not(self.cond_unit()?))
            }
            Some(Tok::LParen) => {
                // Either a parenthesized condition or a term beginning with
                // `(`; try the condition first and backtrack on failure.
                let save = self.pos;
                self.pos += 1;
                if let Ok(c) = self.condition() {
                    if self.peek() == Some(&Tok::RParen) {
                        self.pos += 1;
                        return Ok(c);
                    }
                }
                self.pos = save;
                self.comparison()
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> Result<Condition, ParseError> {
        let lhs = self.term()?;
        let save = self.pos;
        let rel = match self.bump() {
            Some(Tok::Lt) => Rel::Lt,
            Some(Tok::Eq) => Rel::Eq,
            Some(Tok::Gt) => Rel::Gt,
            _ => {
                self.pos = save;
                return self.syntax("expected `<`, `=` or `>`");
            }
        };
        let rhs = self.term()?;
        Ok(Condition::Atom(Atom { lhs, rel, rhs }))
    }

    fn finish<T>(&self, value: T) -> Result<T, ParseError> {
        if self.pos == self.toks.len() {
            Ok(value)
        } else {
            self.syntax("trailing input")
        }
    }
}

/// Parses a term. Returns the unique AST; `parse_term(t.to_string()) == t`.
pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    let lexer = lex(input)?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
        end: lexer.end,
    };
    let t = p.term()?;
    p.finish(t)
}

/// Parses a boolean combination of comparisons.
pub fn parse_condition(input: &str) -> Result<Condition, ParseError> {
    let lexer = lex(input)?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
        end: lexer.end,
    };
    let c = p.condition()?;
    p.finish(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::rat_int;

    #[test]
    fn parses_basic_terms() {
        assert_eq!(parse_term("p(s(x))").unwrap(), Term::p(Term::s(Term::Var)));

        let t = parse_term("psi(x + d2(s(x)) - [0,1])").unwrap();
        let expected = Term::psi(Term::add(
            Term::Var,
            Term::add(
                Term::delta(2, Term::s(Term::Var)),
                Term::neg(Term::Const(LogVector::from_coords([(1, rat_int(1))]))),
            ),
        ));
        assert_eq!(t, expected);

        let err = parse_term("x + +").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(err.position, 4);
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(
            parse_term("foo(x)").unwrap_err().kind,
            ParseErrorKind::UnknownSymbol(name) if name == "foo"
        ));
        assert!(matches!(
            parse_term("d0(x)").unwrap_err().kind,
            ParseErrorKind::Arity(_)
        ));
        assert!(matches!(
            parse_term("psi(x, x)").unwrap_err().kind,
            ParseErrorKind::Arity(_)
        ));
        assert!(matches!(
            parse_term("psi x").unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert!(matches!(
            parse_term("5").unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert!(parse_term("").is_err());
        assert!(parse_term("x x").is_err());
    }

    #[test]
    fn vector_literals() {
        assert_eq!(parse_term("[]").unwrap(), Term::Const(LogVector::zero()));
        assert_eq!(
            parse_term("[0, 0]").unwrap(),
            Term::Const(LogVector::zero())
        );
        let t = parse_term("[1/2, -3]").unwrap();
        assert_eq!(
            t,
            Term::Const(LogVector::from_dense(vec![
                crate::vector::rat(1, 2),
                rat_int(-3)
            ]))
        );
        assert!(parse_term("[1/0]").is_err());
    }

    #[test]
    fn unary_minus_forms() {
        // both -(t) and -atom are accepted
        assert_eq!(parse_term("-(x)").unwrap(), Term::neg(Term::Var));
        assert_eq!(parse_term("-x").unwrap(), Term::neg(Term::Var));
        assert_eq!(
            parse_term("-p(x) + x").unwrap(),
            Term::add(Term::neg(Term::p(Term::Var)), Term::Var)
        );
        // binary minus folds to Add(_, Neg(_))
        assert_eq!(
            parse_term("x - s(x)").unwrap(),
            Term::add(Term::Var, Term::neg(Term::s(Term::Var)))
        );
    }

    #[test]
    fn conditions() {
        let c = parse_condition("x < [1] & !(x = 0) | s(x) > x").unwrap();
        match &c {
            Condition::Or(lhs, _) => assert!(matches!(**lhs, Condition::And(..))),
            other => panic!("expected or at the top, got {other}"),
        }
        // parenthesized sub-conditions vs parenthesized terms
        let c = parse_condition("(x < [1] | x > [2]) & x = x").unwrap();
        assert!(matches!(c, Condition::And(..)));
        let c = parse_condition("(x + x) < [1]").unwrap();
        assert!(matches!(c, Condition::Atom(_)));
    }

    #[test]
    fn condition_display_round_trips() {
        for text in [
            "x < [1] & !(x = 0) | s(x) > x",
            "(x < [1] | x > [2]) & x = x",
            "!(!(x = 0))",
            "x = -p(psi(x)) + p(s(x + p(psi(x))))",
        ] {
            let c = parse_condition(text).unwrap();
            let printed = c.to_string();
            assert_eq!(parse_condition(&printed).unwrap(), c, "via `{printed}`");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_term() -> impl Strategy<Value = Term> {
            let leaf = prop_oneof![
                Just(Term::Zero),
                Just(Term::Infty),
                Just(Term::Var),
                proptest::collection::vec((0u32..6, -9i64..=9), 0..4).prop_map(|cs| {
                    Term::Const(LogVector::from_coords(
                        cs.into_iter().map(|(i, c)| (i, rat_int(c))),
                    ))
                }),
            ];
            leaf.prop_recursive(5, 64, 3, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::add(a, b)),
                    inner.clone().prop_map(Term::neg),
                    inner.clone().prop_map(Term::psi),
                    inner.clone().prop_map(Term::s),
                    inner.clone().prop_map(Term::p),
                    (1u32..9, inner).prop_map(|(n, t)| Term::delta(n, t)),
                ]
            })
        }

        proptest! {
            #[test]
            fn print_parse_round_trip(t in arb_term()) {
                let printed = t.to_string();
                prop_assert_eq!(parse_term(&printed).unwrap(), t);
            }

            #[test]
            fn arbitrary_input_never_panics(s in "[ 0-9a-z+()\\[\\]/<>=&|!,-]{0,40}") {
                let _ = parse_term(&s);
                let _ = parse_condition(&s);
            }

            #[test]
            fn reported_positions_are_in_bounds(s in "\\PC{0,30}") {
                if let Err(e) = parse_term(&s) {
                    prop_assert!(e.position <= s.len());
                }
                if let Err(e) = parse_condition(&s) {
                    prop_assert!(e.position <= s.len());
                }
            }
        }
    }
}
