// The Beltrametti–Bugajski model: ontic states are rays, indicators are
// Born probabilities. It reproduces quantum statistics, is measurement
// noncontextual, and is preparation contextual.

use std::error::Error;

use contextuality::bbmodel::{
    bb_meas_noncontextuality_property, bb_prep_contextuality_demo, bb_simulate, BBPreparation,
};
use contextuality::operational::pvm;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 20_000;
    for (prep, povm) in [
        ("a", "a"),
        ("1/2*a + 1/2*A", "b"),
        ("b", "a"),
        ("1/3*a + 1/3*b + 1/3*c", "c"),
    ] {
        let prep = BBPreparation::parse(prep)?;
        let report = bb_simulate(&prep, &pvm(povm).ok_or("unknown PVM")?, n, 7)?;
        println!(
            "{:<26} M_{povm}: freq {:?} born {:?} within bounds: {}",
            report.prep,
            report.frequencies.iter().map(|f| format!("{f:.4}")).collect::<Vec<_>>(),
            report.born.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>(),
            report.within_bounds
        );
    }

    let demo = bb_prep_contextuality_demo()?;
    println!(
        "{} vs {}: same density {}, shared ontic states {}, total variation {}",
        demo.first, demo.second, demo.prep_equivalent, demo.support_overlap, demo.total_variation
    );

    let mnc = bb_meas_noncontextuality_property(50, 11)?;
    println!(
        "measurement noncontextuality over {} random decompositions: max gap {:e}",
        mnc.trials, mnc.max_deviation
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
