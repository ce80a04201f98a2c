// Measurement noncontextuality plus outcome determinism: the mixed
// measurement ⅓M_a + ⅓M_b + ⅓M_c equals the coin flip {½I, ½I}, whose
// indicator is forced to (½, ½), yet no deterministic assignment to the
// three PVMs produces (½, ½).

use std::error::Error;

use contextuality::cli::certificate_text;
use contextuality::nogo::{meas_nogo, od_unsharp_contradiction, trivial_povm_forced_indicator};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let forced = trivial_povm_forced_indicator()?;
    let show = |v: &[contextuality::rational::Coeff]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    println!(
        "coin-flip indicator from state independence: ({})",
        show(&forced.by_independence)
    );
    println!(
        "coin-flip indicator from outcome symmetry:   ({})",
        show(&forced.by_symmetry)
    );

    let cert = meas_nogo()?;
    print!("{}", certificate_text(&cert));

    // Outcome determinism cannot even hold for the coin flip itself.
    let od = od_unsharp_contradiction()?;
    println!("{}", od.conclusion);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
