//! One test per acceptance criterion. Each prints its verdict line and
//! detail lines; run with `--nocapture` to see them.

use std::sync::OnceLock;

use polybern::acceptance::{self, Context, CriterionResult};

fn ctx() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(Context::new)
}

fn report(r: CriterionResult) {
    println!("{}", r.verdict_line());
    for d in &r.details {
        println!("    {d}");
    }
    assert!(r.passed, "{}", r.verdict_line());
}

#[test]
fn criterion_1_oracle_equivalence() {
    report(acceptance::criterion_1(ctx()));
}

#[test]
fn criterion_2_formula_identities() {
    report(acceptance::criterion_2(ctx()));
}

#[test]
fn criterion_3_saddle_layer() {
    report(acceptance::criterion_3(ctx()));
}

#[test]
fn criterion_4_specialisation() {
    report(acceptance::criterion_4(ctx()));
}

#[test]
fn criterion_5_asymptotic_accuracy() {
    report(acceptance::criterion_5(ctx()));
}

#[test]
fn criterion_6_quadrature() {
    report(acceptance::criterion_6(ctx()));
}

#[test]
fn criterion_7_local_limits() {
    report(acceptance::criterion_7(ctx()));
}

#[test]
fn criterion_8_determinism() {
    let first = acceptance::run_all();
    let second = acceptance::run_all();
    report(acceptance::determinism(&first, &second));
}
