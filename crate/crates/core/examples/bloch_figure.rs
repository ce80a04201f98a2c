// Writes the z–x Bloch disk with the six states and the five
// decompositions of I/2. Pass a path to write a file, otherwise the SVG goes
// to stdout.

use std::error::Error;

use contextuality::figure::bloch_figure_svg;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let svg = bloch_figure_svg()?;
    match std::env::args().nth(1).filter(|a| !a.starts_with('-')) {
        Some(path) => {
            std::fs::write(&path, &svg)?;
            println!("wrote {path} ({} bytes)", svg.len());
        }
        None => print!("{svg}"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
