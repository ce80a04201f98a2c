// Transformation noncontextuality: the projection onto the y axis can be
// written as five different mixtures of y-rotations. Applying them to the
// distribution of σ_a reproduces the preparation constraint system.

use std::error::Error;

use contextuality::cli::certificate_text;
use contextuality::nogo::{build_transf_system, transf_nogo};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{}", build_transf_system());
    let cert = transf_nogo()?;
    print!("{}", certificate_text(&cert));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
