//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Every check is exact (zero tolerance). Sample counts follow the library
//! defaults: 10^4 cases for the axiom and identity suites, 10^3 for the
//! structural suites (tables, piecewise normalization, solving, eventual
//! forms), with pointwise scans over the stated level ranges.

use logcouple::oracle::{closure_chain, run_suite, GenConfig, SuiteReport};
use logcouple::term::{parse_condition, PSI_DIFF_FORMULA, PSI_MEMBERSHIP_FORMULA};
use logcouple::vector::LogVector;
use logcouple::{eval_condition, solve, ExtValue, PsiElement, PsiSubset};

fn cfg() -> GenConfig {
    GenConfig {
        seed: 42,
        ..GenConfig::default()
    }
}

fn report(criterion: &str, r: &SuiteReport) {
    println!(
        "[{}] criterion {criterion}: {r}",
        if r.passed() { "PASS" } else { "FAIL" }
    );
    if let Some(first) = r.failures.first() {
        println!("  first counterexample: {:?}", first);
    }
    assert!(r.passed(), "criterion {criterion} failed: {r}");
}

fn run(criterion: &str, suite: &str) {
    let r = run_suite(suite, &cfg()).expect("suite exists");
    assert_eq!(
        r.cases,
        expected_cases(suite),
        "unexpected case count for {suite}"
    );
    report(criterion, &r);
}

fn expected_cases(suite: &str) -> u64 {
    match suite {
        "T0" => 101,
        "closure-chain" => 1,
        "injectivity" | "table-psi" | "table-s" | "table-p" | "piecewise-oracle"
        | "solve-oracle" | "eventual-form" => 1_000,
        _ => 10_000,
    }
}

#[test]
fn criterion_1_axiom_suites() {
    for suite in ["AC1", "AC2", "AC3", "HC"] {
        run("1 (axioms)", suite);
    }
}

#[test]
fn criterion_2_t0_axioms() {
    run("2 (T0)", "T0");
}

#[test]
fn criterion_3_identity_suites() {
    for suite in [
        "integral-identity",
        "fixed-point",
        "successor-identity",
        "successor-plateau",
        "s0-unique",
    ] {
        run("3 (identities)", suite);
    }
    // the monotonicity counterpart of the identity group
    run("3 (identities)", "successor-increasing");
}

#[test]
fn criterion_4_coefficient_sum_suites() {
    run("4 (coefficient sums)", "coeff-sum-psi");
    run("4 (coefficient sums)", "coeff-sum-s");
    run("4 (coefficient sums)", "psi-independence");
    run("4 (coefficient sums)", "injectivity");
}

#[test]
fn criterion_5_table_soundness() {
    for suite in ["table-psi", "table-s", "table-p"] {
        run("5 (composition tables)", suite);
    }
}

#[test]
fn criterion_6_master_oracle() {
    run("6 (piecewise normalization)", "piecewise-oracle");
}

#[test]
fn criterion_7_solve_oracle() {
    run("7 (condition solving)", "solve-oracle");
}

#[test]
fn criterion_8_definable_set_formulas() {
    // the membership formula solves to exactly the image set
    let c = parse_condition(PSI_MEMBERSHIP_FORMULA).expect("formula parses");
    let solved = solve(&c);
    assert_eq!(
        solved,
        PsiSubset::all(),
        "membership formula must define the whole image set"
    );

    // the positive-difference formula: 10^3 members, 10^3 non-members
    let diff = parse_condition(PSI_DIFF_FORMULA).expect("formula parses");
    let mut members = 0u32;
    let mut non_members = 0u32;
    for a in 0..25u32 {
        for b in (a + 1)..=(a + 40) {
            if members == 1_000 {
                break;
            }
            let v = PsiElement(b).to_vector().sub(&PsiElement(a).to_vector());
            assert!(
                eval_condition(&diff, &ExtValue::Finite(v.clone())),
                "member psi_{b} - psi_{a} rejected"
            );
            members += 1;
        }
    }
    assert_eq!(members, 1_000);
    'outer: for a in 0..25u32 {
        for b in (a + 1)..=(a + 40) {
            if non_members == 1_000 {
                break 'outer;
            }
            let block = PsiElement(b).to_vector().sub(&PsiElement(a).to_vector());
            // perturbations that leave the difference set
            let scaled = block.scale(&logcouple::vector::rat(2, 1));
            let halved = block.scale(&logcouple::vector::rat(1, 2));
            let from_zero = PsiElement(b).to_vector();
            let gapped = block.add(&LogVector::unit(b + 2));
            for bad in [scaled, halved, from_zero, gapped] {
                if non_members == 1_000 {
                    break;
                }
                assert!(
                    !eval_condition(&diff, &ExtValue::Finite(bad.clone())),
                    "non-member {bad} accepted"
                );
                non_members += 1;
            }
        }
    }
    assert_eq!(non_members, 1_000);
    run("8 (definable sets)", "qf-psi");
    run("8 (definable sets)", "qf-psi-diff");
    println!("[PASS] criterion 8 (definable sets): membership formula = image set; 1000 members accepted, 1000 non-members rejected");
}

#[test]
fn criterion_9_closure_chain() {
    let steps = closure_chain(50);
    assert_eq!(steps.len(), 51);
    for step in &steps {
        assert!(
            step.all_ok(),
            "chain relations broken at n = {}: {:?}",
            step.n,
            step
        );
        assert_eq!(step.beta, PsiElement(step.n).to_vector());
        assert_eq!(step.alpha_next, LogVector::unit(step.n + 1).neg());
    }
    println!("[PASS] criterion 9 (closure chain): 51 steps, all four relations verified");
}

#[test]
fn criterion_10_eventual_forms() {
    run("10 (eventual forms)", "eventual-form");
}
