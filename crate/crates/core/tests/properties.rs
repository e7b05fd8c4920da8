//! Generated-case invariants.

mod common;

use common::props;

fn check(prop: fn(u64) -> Result<(), proptest::test_runner::TestCaseError>) {
    if let Err(e) = props::run(prop) {
        panic!("{e}");
    }
}

#[test]
fn acceptance_is_prefix_closed() {
    check(props::prefix_closure);
}

#[test]
fn restriction_is_functorial() {
    check(props::restrict_functoriality);
}

#[test]
fn bot_is_monotone_in_budget() {
    check(props::bot_monotone);
}

#[test]
fn normal_forms_are_idempotent() {
    check(props::normalize_idempotent);
}

#[test]
fn alphabet_edges_have_one_shape() {
    check(props::a_edge_shapes);
}
