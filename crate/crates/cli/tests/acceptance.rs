use oscgauss_cli::criteria::{criterion, Outcome};

/// All seven criteria, one line each; fails if any of them does.
#[test]
fn acceptance_criteria() {
    let outcomes: Vec<Outcome> = (1..=7).map(criterion).collect();
    println!();
    for o in &outcomes {
        println!("{}", o.summary_line());
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
