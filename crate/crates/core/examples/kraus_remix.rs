// Unitary remixing of Kraus operators: the projection onto the y axis
// written as two or three rotations, and as the image of random unitaries.

use std::error::Error;
use std::f64::consts::PI;

use contextuality::kraus::{
    kraus_sets_match, pad_with_zeros, random_unitary, remix_kraus, three_rotation_remix, two_rotation_remix,
    verify_k_identities,
};
use contextuality::operational::projection_channel;
use contextuality::qmath::{choi_deviation, unitary_rotation_y};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let t = projection_channel();
    let report = verify_k_identities(1e-12)?;
    for id in &report.identities {
        println!("{:<40} Choi deviation {:e}", id.name, id.choi_dev);
    }
    println!(
        "Bloch ball maps onto the y axis, max deviation {:e}",
        report.bloch_projection_max_dev
    );

    let theta = PI / 5.0;
    let pair = remix_kraus(&t, &two_rotation_remix(theta))?;
    let want: Vec<_> = [theta, theta + PI]
        .iter()
        .map(|&a| unitary_rotation_y(a).scale_real(0.5f64.sqrt()))
        .collect();
    println!(
        "two-rotation remix at θ = π/5 matches: {}",
        kraus_sets_match(pair.kraus_ops(), &want, 1e-12)
    );

    let triple = remix_kraus(&pad_with_zeros(&t, 3)?, &three_rotation_remix(theta))?;
    let want: Vec<_> = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]
        .iter()
        .map(|&a| unitary_rotation_y(theta + a).scale_real((1.0f64 / 3.0).sqrt()))
        .collect();
    println!(
        "three-rotation remix at θ = π/5 matches: {}",
        kraus_sets_match(triple.kraus_ops(), &want, 1e-12)
    );

    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for m in 2..=6 {
        let u = random_unitary(m, &mut rng);
        let x = remix_kraus(&pad_with_zeros(&t, m)?, &u)?;
        worst = worst.max(choi_deviation(&x, &t)?);
    }
    println!("random remixes of sizes 2 to 6: max Choi deviation {worst:e}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
