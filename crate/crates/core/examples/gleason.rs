// If λ fixes the outcome of the projector onto ψ, measurement
// noncontextuality pins ρ_λ = |ψ⟩⟨ψ|, and the projector onto any ψ′ that is
// neither parallel nor orthogonal then gets the fractional value |⟨ψ|ψ′⟩|².

use std::error::Error;

use contextuality::nogo::gleason_named;
use contextuality::operational::STATE_NAMES;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in STATE_NAMES {
        let row: Vec<String> = STATE_NAMES
            .iter()
            .map(|q| match gleason_named(p, q, 1e-9) {
                Ok(r) => format!("{:>6.3}", r.chi_p_prime),
                Err(_) => "     -".to_string(),
            })
            .collect();
        println!("ψ = {p}: {}", row.join(" "));
    }
    let r = gleason_named("a", "b", 1e-9)?;
    println!("(a, b): χ_P′ = {} so χ is not idempotent", r.chi_p_prime);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
