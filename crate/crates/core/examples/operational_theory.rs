// The canonical six-state qubit instance: operational equivalences between
// mixtures, measurement equivalence up to outcome relabeling, and
// coarse-graining. Pass `--json` to print the instance as JSON.

use std::error::Error;

use contextuality::operational::{coarse_grain_povm, meas_equivalent, prep_equivalent, six_state_theory, Measurement};
use contextuality::qmath::Povm;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let theory = six_state_theory();
    println!(
        "{} preparations, {} measurements, {} transformations",
        theory.preparations.len(),
        theory.measurements.len(),
        theory.transformations.len()
    );

    for check in theory.verify_mixtures()? {
        println!("  {:<12} max deviation {:.1e}", check.name, check.max_deviation);
    }

    // Every two-state and three-state decomposition gives the same I/2.
    let p_aa = theory.preparation("P_aA")?;
    for other in ["P_bB", "P_cC", "P_abc", "P_ABC"] {
        let eq = prep_equivalent(p_aa, theory.preparation(other)?, 1e-12)?;
        println!("P_aA ≃ {other}: {eq}");
    }
    println!(
        "P_a ≃ P_b: {}",
        prep_equivalent(theory.preparation("P_a")?, theory.preparation("P_b")?, 1e-9)?
    );

    // {P_a, P_A} and its relabeling are the same measurement.
    let m_a = theory.measurement("M_a")?;
    let mut flipped_effects = m_a.povm.effects().to_vec();
    flipped_effects.reverse();
    let flipped = Measurement::new("M_a flipped", Povm::new(flipped_effects, 1e-9)?);
    println!(
        "M_a vs flipped, relabeling allowed: {:?}",
        meas_equivalent(m_a, &flipped, true, 1e-12)?
    );
    println!(
        "M_a vs flipped, fixed labels:       {:?}",
        meas_equivalent(m_a, &flipped, false, 1e-12)?
    );

    // Merging both outcomes of a PVM gives the one-outcome trivial measurement.
    let merged = coarse_grain_povm(m_a, &[vec![0, 1]])?;
    println!(
        "coarse-grained M_a has {} outcome(s): {}",
        merged.povm.outcome_count(),
        merged.context_note
    );

    let m = theory.measurement("M")?;
    println!(
        "M = ⅓M_a + ⅓M_b + ⅓M_c ≃ M~: {:?}",
        meas_equivalent(m, theory.measurement("M~")?, true, 1e-12)?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    if std::env::args().any(|a| a == "--json") {
        println!("{}", serde_json::to_string_pretty(&six_state_theory())?);
        return Ok(());
    }
    run_example()
}
