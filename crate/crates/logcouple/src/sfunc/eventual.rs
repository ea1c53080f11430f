//! Eventual behaviour of a term on the whole group, at the upper end of the
//! order.
//!
//! Every one-variable term is, beyond some explicit threshold, either
//! constant or affine `x -> q x + beta` with a nonzero rational slope. An
//! affine form with nonzero slope eventually dominates every fixed leading
//! coordinate, so applying `psi` or `s` to it eventually yields the constant
//! `s0`, and applying `p` eventually yields `inf`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::term::Term;
use crate::vector::{rat, ExtValue, LogVector, Rational};

/// What a term eventually is.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EventualKind {
    Constant(ExtValue),
    /// `x -> slope * x + offset` with nonzero slope.
    Affine {
        slope: Rational,
        offset: LogVector,
    },
}

/// The eventual form of a term: exact for every argument strictly above the
/// threshold.
#[derive(Clone, PartialEq, Eq)]
pub struct EventualForm {
    pub kind: EventualKind,
    pub threshold: LogVector,
}

impl EventualForm {
    fn constant(v: ExtValue) -> Self {
        EventualForm {
            kind: EventualKind::Constant(v),
            threshold: LogVector::zero(),
        }
    }

    /// Value of the form at `x` (meaningful for `x > threshold`).
    pub fn eval(&self, x: &LogVector) -> ExtValue {
        match &self.kind {
            EventualKind::Constant(v) => v.clone(),
            EventualKind::Affine { slope, offset } => ExtValue::Finite(x.scale(slope).add(offset)),
        }
    }
}

impl fmt::Display for EventualForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EventualKind::Constant(v) => write!(f, "eventually constant {v}")?,
            EventualKind::Affine { slope, offset } => {
                write!(f, "eventually {slope}*x")?;
                if !offset.is_zero() {
                    write!(f, " + {offset}")?;
                }
            }
        }
        write!(f, " (for x > {})", self.threshold)
    }
}

impl fmt::Debug for EventualForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// JSON: {"kind": "constant", "value": ..., "threshold": [...]} |
//       {"kind": "affine", "slope": "q", "offset": [...], "threshold": [...]}
impl Serialize for EventualForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match &self.kind {
            EventualKind::Constant(v) => {
                map.serialize_entry("kind", "constant")?;
                map.serialize_entry("value", v)?;
            }
            EventualKind::Affine { slope, offset } => {
                map.serialize_entry("kind", "affine")?;
                map.serialize_entry("slope", &slope.to_string())?;
                map.serialize_entry("offset", offset)?;
            }
        }
        map.serialize_entry("threshold", &self.threshold)?;
        map.end()
    }
}

/// Lexicographic maximum of two thresholds.
fn max_threshold(a: LogVector, b: LogVector) -> LogVector {
    if a >= b {
        a
    } else {
        b
    }
}

/// A threshold above which `|slope * x_0 + offset_0| > 1`, so that the affine
/// value is neither zero nor of the image-set shape, and its integral keeps
/// leading index 0.
fn domination_threshold(slope: &Rational, offset: &LogVector) -> LogVector {
    let bound = (offset.coord(0).abs() + rat(2, 1)) / slope.abs();
    LogVector::from_coords([(0, bound)])
}

/// Computes the eventual form of a term by structural induction.
pub fn eventual_form(t: &Term) -> EventualForm {
    match t {
        Term::Zero => EventualForm::constant(ExtValue::zero()),
        Term::Infty => EventualForm::constant(ExtValue::Infinity),
        Term::Const(v) => EventualForm::constant(ExtValue::Finite(v.clone())),
        Term::Var => EventualForm {
            kind: EventualKind::Affine {
                slope: Rational::one(),
                offset: LogVector::zero(),
            },
            threshold: LogVector::zero(),
        },
        Term::Add(a, b) => {
            let fa = eventual_form(a);
            let fb = eventual_form(b);
            let threshold = max_threshold(fa.threshold.clone(), fb.threshold.clone());
            let kind = match (fa.kind, fb.kind) {
                (EventualKind::Constant(u), EventualKind::Constant(v)) => {
                    EventualKind::Constant(u.add(&v))
                }
                (EventualKind::Constant(ExtValue::Infinity), EventualKind::Affine { .. })
                | (EventualKind::Affine { .. }, EventualKind::Constant(ExtValue::Infinity)) => {
                    EventualKind::Constant(ExtValue::Infinity)
                }
                (
                    EventualKind::Constant(ExtValue::Finite(u)),
                    EventualKind::Affine { slope, offset },
                )
                | (
                    EventualKind::Affine { slope, offset },
                    EventualKind::Constant(ExtValue::Finite(u)),
                ) => EventualKind::Affine {
                    slope,
                    offset: offset.add(&u),
                },
                (
                    EventualKind::Affine {
                        slope: qa,
                        offset: oa,
                    },
                    EventualKind::Affine {
                        slope: qb,
                        offset: ob,
                    },
                ) => {
                    let slope = qa + qb;
                    let offset = oa.add(&ob);
                    if slope.is_zero() {
                        EventualKind::Constant(ExtValue::Finite(offset))
                    } else {
                        EventualKind::Affine { slope, offset }
                    }
                }
            };
            EventualForm { kind, threshold }
        }
        Term::Neg(a) => {
            let fa = eventual_form(a);
            let kind = match fa.kind {
                EventualKind::Constant(v) => EventualKind::Constant(v.neg()),
                EventualKind::Affine { slope, offset } => EventualKind::Affine {
                    slope: -slope,
                    offset: offset.neg(),
                },
            };
            EventualForm {
                kind,
                threshold: fa.threshold,
            }
        }
        Term::Delta(n, a) => {
            let fa = eventual_form(a);
            let factor = rat(1, i64::from(*n));
            let kind = match fa.kind {
                EventualKind::Constant(v) => EventualKind::Constant(v.scale(&factor)),
                EventualKind::Affine { slope, offset } => EventualKind::Affine {
                    slope: slope * factor.clone(),
                    offset: offset.scale(&factor),
                },
            };
            EventualForm {
                kind,
                threshold: fa.threshold,
            }
        }
        Term::Psi(a) => map_comes_to_rest(a, crate::couple::psi, s0()),
        Term::S(a) => map_comes_to_rest(a, crate::couple::succ, s0()),
        Term::P(a) => map_comes_to_rest(a, crate::couple::pred, ExtValue::Infinity),
    }
}

fn s0() -> ExtValue {
    ExtValue::Finite(LogVector::unit(0))
}

/// `psi`, `s` and `p` of an eventually constant form stay constant; of an
/// eventually affine form they come to rest at `s0`, `s0` and `inf`
/// respectively, past the affine domination threshold.
fn map_comes_to_rest(
    arg: &Term,
    apply: impl Fn(&ExtValue) -> ExtValue,
    rest: ExtValue,
) -> EventualForm {
    let fa = eventual_form(arg);
    match &fa.kind {
        EventualKind::Constant(v) => EventualForm {
            kind: EventualKind::Constant(apply(v)),
            threshold: fa.threshold,
        },
        EventualKind::Affine { slope, offset } => EventualForm {
            kind: EventualKind::Constant(rest),
            threshold: max_threshold(fa.threshold, domination_threshold(slope, offset)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{eval, parse_term};
    use crate::vector::rat_int;

    fn probe(form: &EventualForm, t: &Term, x: &LogVector) {
        assert!(ExtValue::Finite(x.clone()) > ExtValue::Finite(form.threshold.clone()));
        assert_eq!(
            eval(t, &ExtValue::Finite(x.clone())),
            form.eval(x),
            "at {x}"
        );
    }

    #[test]
    fn eventual_examples() {
        let t = parse_term("x").unwrap();
        let f = eventual_form(&t);
        assert_eq!(
            f.kind,
            EventualKind::Affine {
                slope: rat_int(1),
                offset: LogVector::zero()
            }
        );

        let t = parse_term("psi(x)").unwrap();
        let f = eventual_form(&t);
        assert_eq!(f.kind, EventualKind::Constant(s0()));

        let t = parse_term("d2(x) + [0, 1]").unwrap();
        let f = eventual_form(&t);
        assert_eq!(
            f.kind,
            EventualKind::Affine {
                slope: rat(1, 2),
                offset: LogVector::unit(1)
            }
        );
    }

    #[test]
    fn forms_match_evaluation_beyond_threshold() {
        let texts = [
            "x",
            "psi(x)",
            "s(x - [7])",
            "p(d3(x))",
            "x - x + [1, 2]",
            "d2(x) - s(x + x)",
            "psi(p(x) + x)",
            "-x + d4(x + x + x + x)",
        ];
        for text in texts {
            let t = parse_term(text).unwrap();
            let f = eventual_form(&t);
            for n in [1_000i64, 1_000_000] {
                let x = f.threshold.add(&LogVector::from_coords([(0, rat_int(n))]));
                probe(&f, &t, &x);
            }
            // a couple of larger, messier probes
            let x = f.threshold.add(&LogVector::from_dense(vec![
                rat_int(12345),
                rat(-7, 3),
                rat_int(9),
            ]));
            probe(&f, &t, &x);
        }
    }

    #[test]
    fn p_of_cofinal_affine_is_eventually_inf() {
        let t = parse_term("p(x)").unwrap();
        let f = eventual_form(&t);
        assert_eq!(f.kind, EventualKind::Constant(ExtValue::Infinity));
        // even though p(psi_n) is finite for every n >= 1, those points all
        // lie below the threshold in the group order
        let x = f.threshold.add(&LogVector::unit(0));
        assert_eq!(eval(&t, &ExtValue::Finite(x.clone())), ExtValue::Infinity);
        assert_eq!(f.eval(&x), ExtValue::Infinity);
    }
}
