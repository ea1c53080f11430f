//! Seeded generators and the executable verification suites.
//!
//! Each suite checks one law with exact arithmetic over a deterministic
//! sample stream; a report carries every counterexample with enough data to
//! replay it. Suites share no state: any subset may run in any order with
//! identical results.

use std::fmt;
use std::time::Instant;

use num_traits::Signed;
use serde::Serialize;

use crate::couple::{
    chi, in_psi, integral, pred, prime, psi, psi_level, psi_vec, succ, succ_level, PsiElement,
};
use crate::sfunc::{
    compose_p, compose_psi, compose_s, eventual_form, solve_with_bound, term_to_piecewise,
    SFunction,
};
use crate::term::{eval, eval_condition, parse_condition, Term};
use crate::vector::{rat, rat_int, ExtValue, LogVector, Rational};

mod gen;

pub use gen::Gen;

/// Configuration of the deterministic sample streams.
///
/// Identical configurations reproduce identical streams. The bounds are
/// deliberately small: every check is exact, so they cost coverage, not
/// soundness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    /// Vector support lives below this index.
    pub max_support: u32,
    pub max_numerator: u32,
    pub max_denominator: u32,
    /// Cases per suite; structural suites (tables, piecewise, solve,
    /// eventual forms) run a tenth of this.
    pub samples: u64,
    /// Scan depth on the image set for the pointwise oracles.
    pub max_level: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_support: 8,
            max_numerator: 100,
            max_denominator: 20,
            samples: 10_000,
            max_level: 40,
        }
    }
}

/// One replayable counterexample.
#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub case_index: u64,
    pub inputs: Vec<String>,
    pub message: String,
}

/// Outcome of one suite run.
///
/// The elapsed time is kept off the serialized form so that identical
/// invocations print byte-identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: u64,
    pub failures: Vec<FailureRecord>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} cases, {} failures, {}",
            self.suite,
            self.cases,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Requested suite does not exist.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}`; known suites: {}", SUITES.iter().map(|s| s.0).collect::<Vec<_>>().join(", "))]
pub struct UnknownSuite(pub String);

type SuiteFn = fn(&GenConfig) -> SuiteReport;

/// Registry of every verification suite, in reporting order.
const SUITES: &[(&str, SuiteFn)] = &[
    ("ordered-group", suite_ordered_group),
    ("psi-basis", suite_psi_basis),
    ("arch-class", suite_arch_class),
    ("AC1", suite_ac1),
    ("AC2", suite_ac2),
    ("AC3", suite_ac3),
    ("HC", suite_hc),
    ("T0", suite_t0),
    ("integral-identity", suite_integral_identity),
    ("fixed-point", suite_fixed_point),
    ("successor-identity", suite_successor_identity),
    ("successor-plateau", suite_successor_plateau),
    ("s0-unique", suite_s0_unique),
    ("successor-increasing", suite_successor_increasing),
    ("term-closure", suite_term_closure),
    ("qf-psi", suite_qf_psi),
    ("qf-psi-diff", suite_qf_psi_diff),
    ("closure-chain", suite_closure_chain),
    ("coeff-sum-psi", suite_coeff_sum_psi),
    ("coeff-sum-s", suite_coeff_sum_s),
    ("psi-independence", suite_psi_independence),
    ("injectivity", suite_injectivity),
    ("table-psi", suite_table_psi),
    ("table-s", suite_table_s),
    ("table-p", suite_table_p),
    ("piecewise-oracle", suite_piecewise_oracle),
    ("solve-oracle", suite_solve_oracle),
    ("eventual-form", suite_eventual_form),
];

/// Names of all suites, in reporting order.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(name, _)| *name).collect()
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &GenConfig) -> Result<SuiteReport, UnknownSuite> {
    match SUITES.iter().find(|(n, _)| *n == name) {
        Some((_, f)) => Ok(f(cfg)),
        None => Err(UnknownSuite(name.to_string())),
    }
}

/// Runs every suite in registry order.
pub fn run_all(cfg: &GenConfig) -> Vec<SuiteReport> {
    SUITES.iter().map(|(_, f)| f(cfg)).collect()
}

/// Case harness: runs `cases` checks, recording failures with their inputs.
fn harness(
    name: &str,
    cfg: &GenConfig,
    cases: u64,
    mut case: impl FnMut(u64, &mut Gen) -> Result<(), (Vec<String>, String)>,
) -> SuiteReport {
    let start = Instant::now();
    let mut g = Gen::new(cfg, name);
    let mut failures = Vec::new();
    for index in 0..cases {
        if let Err((inputs, message)) = case(index, &mut g) {
            failures.push(FailureRecord {
                case_index: index,
                inputs,
                message,
            });
        }
    }
    SuiteReport {
        suite: name.to_string(),
        cases,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// Structural suites run fewer, heavier cases.
fn structural_cases(cfg: &GenConfig) -> u64 {
    (cfg.samples / 10).max(1)
}

fn fail(inputs: Vec<String>, message: impl Into<String>) -> Result<(), (Vec<String>, String)> {
    Err((inputs, message.into()))
}

fn show(items: &[&dyn fmt::Display]) -> Vec<String> {
    items.iter().map(|x| x.to_string()).collect()
}

fn s0() -> ExtValue {
    PsiElement(0).to_ext()
}

// ---------------------------------------------------------------------------
// vector-level suites

fn suite_ordered_group(cfg: &GenConfig) -> SuiteReport {
    harness("ordered-group", cfg, cfg.samples, |_, g| {
        let a = g.vector();
        let b = g.vector();
        let c = g.vector();
        let inputs = || show(&[&a, &b, &c]);
        if a.add(&b) != b.add(&a) {
            return fail(inputs(), "addition is not commutative");
        }
        if a.add(&b).add(&c) != a.add(&b.add(&c)) {
            return fail(inputs(), "addition is not associative");
        }
        if a < b && a.add(&c) >= b.add(&c) {
            return fail(inputs(), "order is not translation invariant");
        }
        let rebuilt = LogVector::from_coords(a.support().map(|(i, q)| (i, q.clone())));
        if rebuilt != a {
            return fail(inputs(), "canonical form is not idempotent");
        }
        Ok(())
    })
}

fn suite_psi_basis(cfg: &GenConfig) -> SuiteReport {
    harness("psi-basis", cfg, cfg.samples, |_, g| {
        let a = g.vector();
        let back = LogVector::from_psi_basis(&a.to_psi_basis());
        if back != a {
            return fail(show(&[&a, &back]), "basis round trip failed");
        }
        Ok(())
    })
}

fn suite_arch_class(cfg: &GenConfig) -> SuiteReport {
    harness("arch-class", cfg, cfg.samples, |_, g| {
        let a = g.nonzero_vector();
        let b = g.nonzero_vector();
        let inputs = || show(&[&a, &b]);
        let (la, ca) = a.leading().expect("nonzero");
        let (lb, cb) = b.leading().expect("nonzero");
        let ra = ca.abs();
        let rb = cb.abs();
        let ratio = if ra >= rb {
            ra.clone() / rb.clone()
        } else {
            rb.clone() / ra.clone()
        };
        let witness_bound: u32 = {
            let ceiling: i64 = (&ratio.ceil().to_integer()).try_into().unwrap_or(i64::MAX);
            ceiling.saturating_add(1).clamp(1, 1_000_000) as u32
        };
        let abs_a = if a.is_negative() { a.neg() } else { a.clone() };
        let abs_b = if b.is_negative() { b.neg() } else { b.clone() };
        let same_class = (1..=witness_bound).any(|n| {
            let n = rat_int(i64::from(n));
            abs_a <= abs_b.scale(&n) && abs_b <= abs_a.scale(&n)
        });
        if same_class != (la == lb) {
            return fail(
                inputs(),
                "leading-index rule disagrees with the witness scan",
            );
        }
        if la > lb {
            // [a] < [b]: every multiple of |a| stays below |b|
            let scan = witness_bound.min(1000);
            for n in 1..=scan {
                if abs_a.scale(&rat_int(i64::from(n))) >= abs_b {
                    return fail(inputs(), format!("n|a| >= |b| at n = {n}"));
                }
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// axiom suites

fn suite_ac1(cfg: &GenConfig) -> SuiteReport {
    harness("AC1", cfg, cfg.samples, |_, g| {
        let a = g.nonzero_vector();
        let b = g.nonzero_vector();
        let lhs = psi_vec(&a.add(&b));
        let rhs = psi_vec(&a).min(psi_vec(&b));
        if lhs < rhs {
            return fail(show(&[&a, &b]), "psi(a+b) < min(psi(a), psi(b))");
        }
        Ok(())
    })
}

fn suite_ac2(cfg: &GenConfig) -> SuiteReport {
    harness("AC2", cfg, cfg.samples, |_, g| {
        let a = g.nonzero_vector();
        let r = loop {
            let r = g.small_int(-5, 5);
            if r != 0 {
                break r;
            }
        };
        let scaled = a.scale(&rat_int(r));
        if psi_vec(&scaled) != psi_vec(&a) {
            return fail(show(&[&a]), format!("psi({r} a) differs from psi(a)"));
        }
        Ok(())
    })
}

fn suite_ac3(cfg: &GenConfig) -> SuiteReport {
    harness("AC3", cfg, cfg.samples, |_, g| {
        let a = g.positive_vector();
        let b = g.nonzero_vector();
        let lhs = ExtValue::Finite(prime(&a).expect("a is nonzero"));
        if lhs <= psi_vec(&b) {
            return fail(show(&[&a, &b]), "a + psi(a) is not above psi(b)");
        }
        Ok(())
    })
}

fn suite_hc(cfg: &GenConfig) -> SuiteReport {
    harness("HC", cfg, cfg.samples, |_, g| {
        let mut a = g.positive_vector();
        let mut b = g.positive_vector();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if psi_vec(&a) < psi_vec(&b) {
            return fail(show(&[&a, &b]), "psi increases on 0 < a <= b");
        }
        Ok(())
    })
}

fn suite_t0(cfg: &GenConfig) -> SuiteReport {
    let top = 100u64;
    harness("T0", cfg, top + 1, |index, _| {
        let n = index as u32;
        if n == 0 {
            let min = succ(&ExtValue::zero());
            if min != ExtValue::Finite(LogVector::unit(0)) {
                return fail(vec![], "s0 is not (1)");
            }
            if min <= ExtValue::zero() {
                return fail(vec![], "s0 is not positive");
            }
            if pred(&s0()) != ExtValue::Infinity {
                return fail(vec![], "p(s0) should be inf");
            }
        }
        let here = PsiElement(n).to_ext();
        let next = succ(&here);
        let inputs = || show(&[&here]);
        if psi_level(&next) != Some(n + 1) {
            return fail(inputs(), "s(psi_n) is not psi_{n+1}");
        }
        if next <= here {
            return fail(inputs(), "successor does not increase");
        }
        if pred(&next) != here {
            return fail(inputs(), "p does not invert s on the image set");
        }
        if succ(&pred(&next)) != next {
            return fail(inputs(), "s does not invert p above s0");
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// identity suites

fn suite_integral_identity(cfg: &GenConfig) -> SuiteReport {
    harness("integral-identity", cfg, cfg.samples, |_, g| {
        let a = g.vector_varied();
        let s_a = PsiElement(succ_level(&a)).to_vector();
        let int = integral(&a);
        if int != a.sub(&s_a) {
            return fail(show(&[&a]), "integral(a) != a - s(a)");
        }
        if int.is_zero() {
            return fail(show(&[&a]), "integral landed on zero");
        }
        if prime(&int).as_ref() != Ok(&a) {
            return fail(show(&[&a]), "integration does not invert a -> a + psi(a)");
        }
        if !a.is_zero() && integral(&prime(&a).expect("a is nonzero")) != a {
            return fail(show(&[&a]), "a -> a + psi(a) does not invert integration");
        }
        Ok(())
    })
}

fn suite_fixed_point(cfg: &GenConfig) -> SuiteReport {
    harness("fixed-point", cfg, cfg.samples, |_, g| {
        let a = g.vector_varied();
        let sa = PsiElement(succ_level(&a)).to_ext();
        let candidate = if g.chance(50) {
            sa.clone()
        } else {
            g.psi_element().to_ext()
        };
        let b = match &candidate {
            ExtValue::Finite(b) => b.clone(),
            ExtValue::Infinity => unreachable!(),
        };
        let fixed = psi(&ExtValue::Finite(a.sub(&b))) == candidate;
        let is_succ = candidate == sa;
        if fixed != is_succ {
            return fail(
                show(&[&a, &b]),
                format!("b = psi(a-b) is {fixed} but b = s(a) is {is_succ}"),
            );
        }
        Ok(())
    })
}

fn suite_successor_identity(cfg: &GenConfig) -> SuiteReport {
    harness("successor-identity", cfg, cfg.samples, |_, g| {
        let la = g.small_int(0, 4) as u32;
        let lb = (la + 1 + g.small_int(0, 3) as u32).min(la + 4);
        let a = g.vector_with_succ_level(la);
        let b = g.vector_with_succ_level(lb);
        // s(a) < s(b) by construction
        let expected = PsiElement(la).to_ext();
        if psi_vec(&b.sub(&a)) != expected {
            return fail(show(&[&a, &b]), "psi(b - a) != s(a)");
        }
        Ok(())
    })
}

fn suite_successor_plateau(cfg: &GenConfig) -> SuiteReport {
    harness("successor-plateau", cfg, cfg.samples, |_, g| {
        let a = g.vector_varied();
        let sa_level = succ_level(&a);
        let sa = PsiElement(sa_level).to_vector();
        let lo = PsiElement(sa_level + 1).to_vector();
        let hi = lo.sub(&integral(&sa));
        let span = hi.sub(&lo);
        let mut mesh: Vec<Rational> = vec![
            rat_int(0),
            rat(1, 7),
            rat(1, 3),
            rat(1, 2),
            rat(2, 3),
            rat(6, 7),
            rat_int(1),
        ];
        for _ in 0..3 {
            let num = g.small_int(0, 64);
            mesh.push(rat(num, 64));
        }
        for t in mesh {
            let gamma = lo.add(&span.scale(&t));
            if psi_vec(&gamma.sub(&a)) != ExtValue::Finite(sa.clone()) {
                return fail(show(&[&a, &gamma]), "psi(gamma - a) is not constantly s(a)");
            }
        }
        Ok(())
    })
}

fn suite_s0_unique(cfg: &GenConfig) -> SuiteReport {
    harness("s0-unique", cfg, cfg.samples, |index, g| {
        if index == 0 {
            let one = LogVector::unit(0);
            if psi_vec(&one) != ExtValue::Finite(one.clone()) {
                return fail(vec![], "psi((1)) != (1)");
            }
        }
        let a = g.nonzero_vector();
        if a != LogVector::unit(0) && psi_vec(&a) == ExtValue::Finite(a.clone()) {
            return fail(show(&[&a]), "unexpected fixed point of psi");
        }
        Ok(())
    })
}

fn suite_successor_increasing(cfg: &GenConfig) -> SuiteReport {
    harness("successor-increasing", cfg, cfg.samples, |_, g| {
        let a = g.vector_varied();
        let int = integral(&a);
        let sa = PsiElement(succ_level(&a)).to_vector();
        if int.is_negative() && a >= sa {
            return fail(show(&[&a]), "a in (G^<)' but a >= s(a)");
        }
        if int.is_positive() && a <= sa {
            return fail(show(&[&a]), "a in (G^>)' but a <= s(a)");
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// term-language suites

fn suite_term_closure(cfg: &GenConfig) -> SuiteReport {
    harness("term-closure", cfg, cfg.samples, |_, g| {
        let x = if g.chance(20) {
            ExtValue::Infinity
        } else {
            ExtValue::Finite(g.vector())
        };
        let t1 = g.term(4);
        let t2 = g.term(4);
        let v1 = eval(&t1, &x);
        let v2 = eval(&t2, &x);
        let inputs = || show(&[&t1, &t2, &x]);
        // composite evaluation equals the operation on evaluated values
        if eval(&Term::add(t1.clone(), t2.clone()), &x) != v1.add(&v2) {
            return fail(inputs(), "Add does not commute with evaluation");
        }
        if eval(&Term::neg(t1.clone()), &x) != v1.neg() {
            return fail(inputs(), "Neg does not commute with evaluation");
        }
        if eval(&Term::psi(t1.clone()), &x) != psi(&v1) {
            return fail(inputs(), "Psi does not commute with evaluation");
        }
        if eval(&Term::s(t1.clone()), &x) != succ(&v1) {
            return fail(inputs(), "S does not commute with evaluation");
        }
        if eval(&Term::p(t1.clone()), &x) != pred(&v1) {
            return fail(inputs(), "P does not commute with evaluation");
        }
        let n = g.small_int(1, 6) as u32;
        if eval(&Term::delta(n, t1.clone()), &x) != v1.scale(&rat(1, i64::from(n))) {
            return fail(inputs(), "Delta does not commute with evaluation");
        }
        // totality fuzz: deep trees never fail to evaluate
        let deep = g.term(8);
        let _ = eval(&deep, &x);
        // print/parse round trip
        let printed = t1.to_string();
        match crate::term::parse_term(&printed) {
            Ok(back) if back == t1 => Ok(()),
            Ok(back) => fail(
                show(&[&t1, &back]),
                "print/parse round trip changed the term",
            ),
            Err(e) => fail(show(&[&t1]), format!("printed term failed to parse: {e}")),
        }
    })
}

fn suite_qf_psi(cfg: &GenConfig) -> SuiteReport {
    let formula = parse_condition(crate::term::PSI_MEMBERSHIP_FORMULA).expect("formula parses");
    harness("qf-psi", cfg, cfg.samples, |_, g| {
        let v = if g.chance(40) {
            g.psi_element().to_ext()
        } else {
            ExtValue::Finite(g.vector())
        };
        let member = in_psi(&v);
        let by_formula = eval_condition(&formula, &v);
        if member != by_formula {
            return fail(
                show(&[&v]),
                format!("membership {member} but formula {by_formula}"),
            );
        }
        Ok(())
    })
}

/// Ground truth for the positive difference set: a contiguous all-ones block
/// that starts at index 1 or later.
fn is_psi_difference(v: &LogVector) -> bool {
    let (lo, hi) = match (v.lead_index(), v.max_support()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return false,
    };
    if lo == 0 {
        return false;
    }
    let mut count = 0u32;
    for (_, c) in v.support() {
        if c != &rat_int(1) {
            return false;
        }
        count += 1;
    }
    count == hi - lo + 1
}

fn suite_qf_psi_diff(cfg: &GenConfig) -> SuiteReport {
    let formula = parse_condition(crate::term::PSI_DIFF_FORMULA).expect("formula parses");
    harness("qf-psi-diff", cfg, cfg.samples, |index, g| {
        if index == 0 {
            // no image-set point is itself a positive difference
            let (solved, _) = solve_with_bound(&formula);
            if !solved.is_empty() {
                return fail(
                    vec![],
                    "the difference formula should be empty on the image set",
                );
            }
            // differences of consecutive elements accumulate at zero
            for n in 0..50u32 {
                let step = PsiElement(n + 1)
                    .to_vector()
                    .sub(&PsiElement(n).to_vector());
                if step != LogVector::unit(n + 1) {
                    return fail(vec![], "psi_{n+1} - psi_n is not e_{n+1}");
                }
                if !eval_condition(&formula, &ExtValue::Finite(step.clone())) {
                    return fail(show(&[&step]), "consecutive difference rejected");
                }
                for k in 0..=n {
                    let small = LogVector::unit(k).scale(&rat(1, 7));
                    if step >= small {
                        return fail(show(&[&step]), "difference does not shrink below e_k/7");
                    }
                }
            }
        }
        if g.chance(50) {
            let a = g.small_int(0, 20) as u32;
            let b = a + 1 + g.small_int(0, 10) as u32;
            let member = PsiElement(b).to_vector().sub(&PsiElement(a).to_vector());
            if !eval_condition(&formula, &ExtValue::Finite(member.clone())) {
                return fail(show(&[&member]), "member rejected by the formula");
            }
        } else {
            let candidate = match g.small_int(0, 3) {
                // a block scaled away from 1
                0 => {
                    let b = g.small_int(1, 6) as u32;
                    PsiElement(b).to_vector().scale(&rat(2, 1))
                }
                // a block starting at index 0
                1 => PsiElement(g.small_int(0, 6) as u32).to_vector(),
                _ => g.positive_vector(),
            };
            if is_psi_difference(&candidate) {
                // the random positive vector happened to be a member
                return Ok(());
            }
            if eval_condition(&formula, &ExtValue::Finite(candidate.clone())) {
                return fail(show(&[&candidate]), "non-member accepted by the formula");
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// closure chain

/// One step of the integration-closure chain grown from `e_0`.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureStep {
    pub n: u32,
    pub beta: LogVector,
    pub alpha_next: LogVector,
    pub successor_ok: bool,
    pub integral_ok: bool,
    pub psi_ok: bool,
    pub chi_ok: bool,
    pub matches_expected: bool,
}

impl ClosureStep {
    pub fn all_ok(&self) -> bool {
        self.successor_ok && self.integral_ok && self.psi_ok && self.chi_ok && self.matches_expected
    }
}

/// Grows the chain `beta_{n+1} = s(beta_n)`, `alpha_{n+1} = integral(beta_n)`
/// from `beta_0 = e_0` and verifies the four diagram relations at every step.
/// The expected values are `beta_n = psi_n` and `alpha_{n+1} = -e_{n+1}`.
pub fn closure_chain(n_max: u32) -> Vec<ClosureStep> {
    assert!(n_max >= 1);
    let mut steps = Vec::with_capacity(n_max as usize + 1);
    let mut beta = LogVector::unit(0);
    let mut prev_alpha: Option<LogVector> = None;
    for n in 0..=n_max {
        let next_beta = match succ(&ExtValue::Finite(beta.clone())) {
            ExtValue::Finite(v) => v,
            ExtValue::Infinity => unreachable!("successor of a vector is finite"),
        };
        let alpha_next = integral(&beta);
        let successor_ok = psi_level(&ExtValue::Finite(next_beta.clone()))
            == psi_level(&ExtValue::Finite(beta.clone())).map(|l| l + 1);
        let integral_ok = prime(&alpha_next).map(|v| v == beta).unwrap_or(false);
        let psi_ok = psi_vec(&alpha_next) == ExtValue::Finite(next_beta.clone());
        let chi_ok = match &prev_alpha {
            None => true,
            Some(prev) => chi(prev).map(|v| v == alpha_next).unwrap_or(false),
        };
        let matches_expected =
            beta == PsiElement(n).to_vector() && alpha_next == LogVector::unit(n + 1).neg();
        steps.push(ClosureStep {
            n,
            beta: beta.clone(),
            alpha_next: alpha_next.clone(),
            successor_ok,
            integral_ok,
            psi_ok,
            chi_ok,
            matches_expected,
        });
        prev_alpha = Some(alpha_next);
        beta = next_beta;
    }
    steps
}

fn suite_closure_chain(cfg: &GenConfig) -> SuiteReport {
    let n_max = cfg.max_level.max(50);
    harness("closure-chain", cfg, 1, |_, _| {
        for step in closure_chain(n_max) {
            if !step.all_ok() {
                return fail(
                    show(&[&step.beta, &step.alpha_next]),
                    format!("chain relations broken at n = {}", step.n),
                );
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// coefficient-sum and image-set suites

fn suite_coeff_sum_psi(cfg: &GenConfig) -> SuiteReport {
    harness("coeff-sum-psi", cfg, cfg.samples, |_, g| {
        let force = g.chance(50);
        let combo = g.psi_combination(5, force.then(|| rat_int(0)).as_ref());
        let total: Rational = combo.iter().map(|(_, q)| q.clone()).sum();
        let alpha = combo.iter().fold(LogVector::zero(), |acc, (p, q)| {
            acc.add(&p.to_vector().scale(q))
        });
        let expected = if total == rat_int(0) {
            succ(&combo[0].0.to_ext())
        } else {
            s0()
        };
        if psi_vec(&alpha) != expected {
            let combo_text = format!("{combo:?}");
            return fail(
                vec![combo_text],
                "psi of the combination has the wrong value",
            );
        }
        Ok(())
    })
}

fn suite_coeff_sum_s(cfg: &GenConfig) -> SuiteReport {
    harness("coeff-sum-s", cfg, cfg.samples, |_, g| {
        let force = g.chance(50);
        let combo = g.psi_combination(5, force.then(|| rat_int(1)).as_ref());
        let total: Rational = combo.iter().map(|(_, q)| q.clone()).sum();
        let alpha = combo.iter().fold(LogVector::zero(), |acc, (p, q)| {
            acc.add(&p.to_vector().scale(q))
        });
        let expected = if total == rat_int(1) {
            succ(&combo[0].0.to_ext())
        } else {
            s0()
        };
        if succ(&ExtValue::Finite(alpha)) != expected {
            let combo_text = format!("{combo:?}");
            return fail(vec![combo_text], "s of the combination has the wrong value");
        }
        Ok(())
    })
}

fn suite_psi_independence(cfg: &GenConfig) -> SuiteReport {
    harness("psi-independence", cfg, cfg.samples, |_, g| {
        let combo = g.psi_combination(5, None);
        let alpha = combo.iter().fold(LogVector::zero(), |acc, (p, q)| {
            acc.add(&p.to_vector().scale(q))
        });
        if alpha.is_zero() {
            let combo_text = format!("{combo:?}");
            return fail(vec![combo_text], "nontrivial combination vanished");
        }
        Ok(())
    })
}

fn suite_injectivity(cfg: &GenConfig) -> SuiteReport {
    harness("injectivity", cfg, structural_cases(cfg), |_, g| {
        let f = g.linear_sfunction();
        let mut seen = std::collections::BTreeMap::new();
        for m in 0..=30u32 {
            let v = f.eval_level(m);
            if v.is_infinite() {
                continue;
            }
            if let Some(prev) = seen.insert(v, m) {
                return fail(
                    show(&[&f]),
                    format!("collision between levels {prev} and {m}"),
                );
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// table and engine suites

fn table_suite(
    name: &'static str,
    cfg: &GenConfig,
    compose: fn(&SFunction) -> crate::sfunc::PiecewiseSFunction,
    direct: fn(&ExtValue) -> ExtValue,
) -> SuiteReport {
    harness(name, cfg, structural_cases(cfg), |_, g| {
        let f = g.linear_sfunction();
        let composed = compose(&f);
        for m in 0..=30u32 {
            let expected = direct(&f.eval_level(m));
            let got = composed.eval_level(m);
            if got != expected {
                return fail(
                    show(&[&f]),
                    format!("level {m}: table gives {got}, direct composition gives {expected}"),
                );
            }
        }
        Ok(())
    })
}

fn suite_table_psi(cfg: &GenConfig) -> SuiteReport {
    table_suite("table-psi", cfg, compose_psi, psi)
}

fn suite_table_s(cfg: &GenConfig) -> SuiteReport {
    table_suite("table-s", cfg, compose_s, succ)
}

fn suite_table_p(cfg: &GenConfig) -> SuiteReport {
    table_suite("table-p", cfg, compose_p, pred)
}

fn suite_piecewise_oracle(cfg: &GenConfig) -> SuiteReport {
    harness("piecewise-oracle", cfg, structural_cases(cfg), |_, g| {
        let t = g.term(6);
        let p = term_to_piecewise(&t);
        for m in 0..=cfg.max_level {
            let direct = eval(&t, &PsiElement(m).to_ext());
            let normalized = p.eval_level(m);
            if direct != normalized {
                return fail(
                    show(&[&t]),
                    format!("level {m}: piecewise {normalized}, direct {direct}"),
                );
            }
        }
        Ok(())
    })
}

fn suite_solve_oracle(cfg: &GenConfig) -> SuiteReport {
    harness("solve-oracle", cfg, structural_cases(cfg), |index, g| {
        let atoms = if index % 2 == 0 { 1 } else { 3 };
        let c = g.condition(atoms);
        let (solved, bound) = solve_with_bound(&c);
        let scan = 2 * bound + 8;
        for m in 0..=scan {
            let direct = eval_condition(&c, &PsiElement(m).to_ext());
            if solved.contains(m) != direct {
                return fail(
                    show(&[&c]),
                    format!("level {m}: solver {}, direct {direct}", solved.contains(m)),
                );
            }
        }
        // normalization: parts are disjoint and non-adjacent
        let (intervals, points) = solved.parts();
        let mut marks: Vec<(u32, Option<u32>)> = intervals
            .iter()
            .map(|iv| (iv.lo, iv.hi))
            .chain(points.iter().map(|p| (p.level(), Some(p.level() + 1))))
            .collect();
        marks.sort_by_key(|(lo, _)| *lo);
        for w in marks.windows(2) {
            let (_, hi) = w[0];
            let (lo, _) = w[1];
            match hi {
                None => return fail(show(&[&c]), "unbounded run is not last"),
                Some(h) if h >= lo => {
                    return fail(show(&[&c]), "solution parts overlap or touch");
                }
                _ => {}
            }
        }
        Ok(())
    })
}

fn suite_eventual_form(cfg: &GenConfig) -> SuiteReport {
    harness("eventual-form", cfg, structural_cases(cfg), |_, g| {
        let t = g.term(4);
        let form = eventual_form(&t);
        let mut probes: Vec<LogVector> = Vec::new();
        for n in [1_000i64, 1_000_000] {
            let spike = LogVector::from_coords([(0, rat_int(n))]);
            let probe = if spike > form.threshold {
                spike
            } else {
                form.threshold.add(&spike)
            };
            probes.push(probe);
        }
        for _ in 0..8 {
            probes.push(
                form.threshold
                    .add(&g.positive_vector())
                    .add(&LogVector::unit(0)),
            );
        }
        for x in probes {
            debug_assert!(x > form.threshold);
            let direct = eval(&t, &ExtValue::Finite(x.clone()));
            let predicted = form.eval(&x);
            if direct != predicted {
                return fail(
                    show(&[&t, &x]),
                    format!("eventual form predicts {predicted}, evaluation gives {direct}"),
                );
            }
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> GenConfig {
        GenConfig {
            samples: 300,
            ..GenConfig::default()
        }
    }

    #[test]
    fn every_registered_suite_passes_on_a_small_run() {
        for name in suite_names() {
            let report = run_suite(name, &quick_cfg()).unwrap();
            assert!(report.passed(), "{report}\n{:?}", report.failures.first());
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("bogus", &quick_cfg()),
            Err(UnknownSuite(_))
        ));
    }

    #[test]
    fn streams_are_deterministic_and_independent() {
        let cfg = quick_cfg();
        let a = run_suite("AC1", &cfg).unwrap();
        // run another suite in between; AC1 must not care
        let _ = run_suite("HC", &cfg).unwrap();
        let b = run_suite("AC1", &cfg).unwrap();
        assert_eq!(a.cases, b.cases);
        assert_eq!(a.failures.len(), b.failures.len());

        let mut g1 = Gen::new(&cfg, "determinism");
        let mut g2 = Gen::new(&cfg, "determinism");
        for _ in 0..50 {
            assert_eq!(g1.vector(), g2.vector());
            assert_eq!(g1.term(4), g2.term(4));
        }
    }

    #[test]
    fn closure_chain_matches_expected_values() {
        let steps = closure_chain(10);
        assert_eq!(steps.len(), 11);
        for (n, step) in steps.iter().enumerate() {
            assert_eq!(step.n as usize, n);
            assert!(step.all_ok(), "step {n} failed");
            assert_eq!(step.beta, PsiElement(n as u32).to_vector());
            assert_eq!(step.alpha_next, LogVector::unit(n as u32 + 1).neg());
        }
    }

    #[test]
    fn suite_reports_serialize() {
        let report = run_suite("T0", &quick_cfg()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["suite"], "T0");
        assert_eq!(json["failures"], serde_json::json!([]));
    }

    #[test]
    fn failures_carry_replayable_inputs() {
        // A deliberately false check: every recorded failure must carry its
        // inputs and reproduce identically on a rerun.
        let cfg = quick_cfg();
        let run = || {
            harness("deliberate-failure", &cfg, 40, |_, g| {
                let v = g.nonzero_vector();
                if v.is_positive() {
                    return fail(show(&[&v]), "positive vector");
                }
                Ok(())
            })
        };
        let first = run();
        let second = run();
        assert!(
            !first.failures.is_empty(),
            "the deliberate check should trip"
        );
        assert_eq!(first.failures.len(), second.failures.len());
        for (a, b) in first.failures.iter().zip(second.failures.iter()) {
            assert_eq!(a.case_index, b.case_index);
            assert_eq!(a.inputs, b.inputs);
            assert!(!a.inputs.is_empty());
            // the captured input replays: parse it back and re-check
            let v = LogVector::parse_literal(&a.inputs[0]).unwrap();
            assert!(v.is_positive());
        }
    }
}
