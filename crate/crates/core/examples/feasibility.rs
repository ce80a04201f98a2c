// Pointwise feasibility of arbitrary constraint systems: a small feasible
// toy with its witness model, the six-state system loaded from JSON, and
// what happens when single constraints are removed.

use std::error::Error;

use contextuality::cli::certificate_text;
use contextuality::nogo::{check_witness, pointwise_feasibility, ConstraintSystem, Verdict};
use contextuality::rational::ratio;

const SIX_STATES: &str = include_str!("data/prep_system.json");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // x and y orthogonal, and ½x + ½y = ½z: z sits over both.
    let toy = ConstraintSystem::new(
        &["x", "y", "z"],
        &[("x", "y")],
        &[vec![("x", ratio(1, 2)), ("y", ratio(1, 2))], vec![("z", ratio(1, 1))]],
    )?;
    let cert = pointwise_feasibility(&toy)?;
    print!("{}", certificate_text(&cert));
    if let Some(model) = &cert.witness {
        check_witness(&toy, model, 1e-12)?;
        println!("witness satisfies every constraint");
    }

    let sys: ConstraintSystem = serde_json::from_str(SIX_STATES)?;
    let cert = pointwise_feasibility(&sys)?;
    println!("six-state system: {}", cert.summary());
    assert_eq!(cert.verdict, Verdict::Infeasible);

    for i in 0..sys.equality_groups().len() {
        let v = pointwise_feasibility(&sys.without_group(i))?.verdict;
        println!("  without group {i}: {v:?}");
    }
    for i in 0..sys.disjoint_pairs().len() {
        let v = pointwise_feasibility(&sys.without_pair(i))?.verdict;
        println!("  without pair {i}: {v:?}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
