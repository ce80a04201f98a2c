// Preparation noncontextuality forces outcome determinism for sharp
// measurements. On a two-point model every step of the argument goes
// through; on a model with fractional indicators the report names the
// premise that breaks.

use std::error::Error;

use contextuality::ontomodel::{
    classify_state_view, outcome_determinism_from_prep_nc, Distribution, IndicatorSet, OdReport, OntModel,
};

fn print_report(title: &str, report: &OdReport) {
    println!("{title}");
    for s in &report.steps {
        println!("  {:<22} {:<5} {}", format!("{:?}", s.step), s.passed, s.detail);
    }
    println!("  first failure: {:?}", report.first_failure);
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut two = OntModel::new(2)?;
    two.add_preparation("a", Distribution::point_mass(2, 0))?;
    two.add_preparation("A", Distribution::point_mass(2, 1))?;
    two.add_preparation("mixed", Distribution::new(vec![0.5, 0.5], 1e-12)?)?;
    two.add_measurement("M_a", IndicatorSet::deterministic(2, &[0, 1])?)?;
    let report = outcome_determinism_from_prep_nc(&two, "M_a", &["a", "A"], "mixed", 2, 1e-12)?;
    print_report("two-point model", &report);

    // Ontic states are the rays a, A, b, B; I/2 is prepared as ½b + ½B and
    // M_a answers with Born weights on b and B.
    let mut frac = OntModel::new(4)?;
    frac.add_preparation("a", Distribution::point_mass(4, 0))?;
    frac.add_preparation("A", Distribution::point_mass(4, 1))?;
    frac.add_preparation("mixed", Distribution::new(vec![0.0, 0.0, 0.5, 0.5], 1e-12)?)?;
    frac.add_measurement(
        "M_a",
        IndicatorSet::new(vec![vec![1.0, 0.0, 0.25, 0.75], vec![0.0, 1.0, 0.75, 0.25]], 1e-12)?,
    )?;
    let report = outcome_determinism_from_prep_nc(&frac, "M_a", &["a", "A"], "mixed", 2, 1e-12)?;
    print_report("ray-valued model", &report);

    let orthogonal = |x: &str, y: &str| (x, y) == ("a", "A") || (x, y) == ("A", "a");
    let view = classify_state_view(&two, &["a", "A"], orthogonal, 1e-12)?;
    println!(
        "state view of the two-point model: {:?} (vacuous: {})",
        view.view, view.vacuous
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
