// Preparation noncontextuality fails for the six-state instance: every way
// of choosing one forced zero per orthogonal pair leaves only the all-zero
// solution at an ontic point.

use std::error::Error;

use contextuality::cli::certificate_text;
use contextuality::nogo::{build_prep_system, pointwise_feasibility, prep_nogo, Verdict};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cert = prep_nogo()?;
    print!("{}", certificate_text(&cert));
    assert_eq!(cert.verdict, Verdict::Infeasible);

    // Removing one orthogonality constraint is enough to admit a model.
    let sys = build_prep_system();
    for i in 0..sys.disjoint_pairs().len() {
        let (x, y) = sys.disjoint_pairs()[i];
        let relaxed = pointwise_feasibility(&sys.without_pair(i))?;
        println!(
            "without {}·{} = 0: {:?}",
            sys.variables()[x],
            sys.variables()[y],
            relaxed.verdict
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
