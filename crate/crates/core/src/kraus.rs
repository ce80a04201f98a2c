//! Unitary freedom in operator-sum representations: `X_ν = Σ_μ u_νμ W_μ`
//! describes the same channel for any unitary `u`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operational::{decomposition_deviation, projection_channel, PROJECTION_DECOMPOSITIONS};
use crate::qmath::{
    apply_channel, bloch_from_density, density_from_bloch, BlochVector, CMatrix, KrausChannel, DEFAULT_TOL,
};

/// Unitary `m × m` matrix used to remix `m` Kraus operators.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RemixMatrix {
    u: CMatrix,
}

impl RemixMatrix {
    pub fn new(u: CMatrix, tol: f64) -> Result<Self> {
        let r = u.unitarity_residual();
        if r > tol {
            return Err(Error::NotUnitary(r));
        }
        Ok(RemixMatrix { u })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    pub fn size(&self) -> usize {
        self.u.dim()
    }

    pub fn adjoint(&self) -> RemixMatrix {
        RemixMatrix { u: self.u.adjoint() }
    }
}

/// Appends zero Kraus operators until there are `count`.
pub fn pad_with_zeros(channel: &KrausChannel, count: usize) -> Result<KrausChannel> {
    let ops = channel.kraus_ops();
    if count < ops.len() {
        return Err(Error::DimensionMismatch {
            expected: ops.len(),
            found: count,
        });
    }
    let mut padded = ops.to_vec();
    padded.resize(count, CMatrix::zeros(channel.dim()));
    KrausChannel::new(padded, DEFAULT_TOL)
}

/// `X_ν = Σ_μ u_νμ W_μ`. The Kraus count must already equal the size of
/// `u`; pad explicitly with [`pad_with_zeros`] first.
pub fn remix_kraus(channel: &KrausChannel, u: &RemixMatrix) -> Result<KrausChannel> {
    let ops = channel.kraus_ops();
    if ops.len() != u.size() {
        return Err(Error::DimensionMismatch {
            expected: u.size(),
            found: ops.len(),
        });
    }
    let remixed = (0..u.size())
        .map(|nu| {
            ops.iter()
                .enumerate()
                .fold(CMatrix::zeros(channel.dim()), |acc, (mu, w)| {
                    &acc + &w.scale(u.u.get(nu, mu))
                })
        })
        .collect();
    KrausChannel::new(remixed, DEFAULT_TOL)
}

/// `[[cos θ/2, sin θ/2], [−sin θ/2, cos θ/2]]`.
pub fn two_rotation_remix(theta: f64) -> RemixMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    RemixMatrix::new(CMatrix::from_real(&[&[c, s], &[-s, c]]).unwrap(), 1e-12).expect("rotation is unitary")
}

/// Rows `(√⅔ cos φ_k, √⅔ sin φ_k, √⅓)` with `φ_k = θ/2 + 2πk/3`.
pub fn three_rotation_remix(theta: f64) -> RemixMatrix {
    let a = (2.0f64 / 3.0).sqrt();
    let b = (1.0f64 / 3.0).sqrt();
    let row = |k: f64| {
        let phi = theta / 2.0 + k * 2.0 * PI / 3.0;
        [a * phi.cos(), a * phi.sin(), b]
    };
    let (r0, r1, r2) = (row(0.0), row(1.0), row(2.0));
    RemixMatrix::new(CMatrix::from_real(&[&r0, &r1, &r2]).unwrap(), 1e-12).expect("trine frame is unitary")
}

/// `x = e^{iφ} y` for some phase, within `tol` entrywise.
pub fn equal_up_to_phase(x: &CMatrix, y: &CMatrix, tol: f64) -> bool {
    if x.dim() != y.dim() {
        return false;
    }
    let overlap = (&y.adjoint() * x).trace();
    if overlap.norm() <= tol {
        return x.max_abs() <= tol && y.max_abs() <= tol;
    }
    let phase = overlap / overlap.norm();
    x.max_abs_diff(&y.scale(phase)) <= tol
}

/// Kraus sets equal as multisets, each operator up to its own phase.
pub fn kraus_sets_match(a: &[CMatrix], b: &[CMatrix], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(
        |x| match (0..b.len()).find(|&j| !used[j] && equal_up_to_phase(x, &b[j], tol)) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        },
    )
}

/// Haar-distributed unitary: Gram–Schmidt on a complex Gaussian matrix,
/// with the usual phase correction.
pub fn random_unitary<R: Rng>(m: usize, rng: &mut R) -> RemixMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for j in 0..m {
        for k in 0..j {
            let proj: Complex64 = (0..m).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..m {
                let delta = proj * cols[k][i];
                cols[j][i] -= delta;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let u = CMatrix::from_fn(m, |i, j| cols[j][i]);
    RemixMatrix::new(u, 1e-10).expect("orthonormalized columns")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub choi_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KIdentityReport {
    pub identities: Vec<IdentityCheck>,
    pub bloch_projection_max_dev: f64,
}

/// Checks the five rotation decompositions of the projection map and that
/// the map sends `(x, y, z)` to `(0, y, 0)` on a Bloch-ball grid.
pub fn verify_k_identities(tol: f64) -> Result<KIdentityReport> {
    let mut identities = Vec::new();
    for (name, parts) in PROJECTION_DECOMPOSITIONS {
        let choi_dev = decomposition_deviation(parts)?;
        if choi_dev > tol {
            return Err(Error::PremiseFailed {
                name: name.to_string(),
                deviation: choi_dev,
            });
        }
        identities.push(IdentityCheck {
            name: name.to_string(),
            choi_dev,
        });
    }
    let t = projection_channel();
    let steps = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut worst = 0.0f64;
    for &x in &steps {
        for &y in &steps {
            for &z in &steps {
                let r = BlochVector::new(x, y, z);
                if r.norm() > 1.0 {
                    continue;
                }
                let out = bloch_from_density(&apply_channel(&t, &density_from_bloch(r)?)?)?;
                worst = worst.max(out.distance(&BlochVector::new(0.0, y, 0.0)));
            }
        }
    }
    if worst > tol {
        return Err(Error::PremiseFailed {
            name: "projection onto the y axis".into(),
            deviation: worst,
        });
    }
    Ok(KIdentityReport {
        identities,
        bloch_projection_max_dev: worst,
    })
}
