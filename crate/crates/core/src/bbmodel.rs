//! The ray-valued ontological model of a qubit: ontic states are pure states
//! up to phase, preparations are finite δ-mixtures of them, and the
//! indicator of effect `Q` at `ψ` is `⟨ψ|Q|ψ⟩`.
//!
//! Sampling uses ChaCha20 seeded from a `u64`; independent shards read
//! separate streams of the same key.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operational::{mix_measurements, prep_equivalent, six_state_theory, state_vector, Measurement, Preparation};
use crate::qmath::{born_probability, pauli_x, pauli_y, pauli_z, CMatrix, DensityOperator, Povm, DEFAULT_TOL};
use crate::rational;

/// Tolerance for deciding that two canonical vectors are the same ray.
pub const RAY_TOL: f64 = 1e-12;

/// Unit vector with its first nonzero component made real and positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PureOnticState {
    psi: [Complex64; 2],
}

impl PureOnticState {
    pub fn new(psi: [Complex64; 2], tol: f64) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > tol {
            return Err(Error::BadTrace(norm2));
        }
        let lead = psi
            .iter()
            .find(|z| z.norm() > RAY_TOL)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = lead.conj() / lead.norm();
        Ok(PureOnticState {
            psi: [psi[0] * phase, psi[1] * phase],
        })
    }

    /// One of the six named states `a, A, b, B, c, C`.
    pub fn named(name: &str) -> Result<Self> {
        let psi = state_vector(name).ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
        Self::new(psi, DEFAULT_TOL)
    }

    pub fn vector(&self) -> [Complex64; 2] {
        self.psi
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::pure(&self.psi).expect("unit vector")
    }

    pub fn same_ray(&self, other: &PureOnticState) -> bool {
        self.psi.iter().zip(&other.psi).all(|(a, b)| (a - b).norm() <= RAY_TOL)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BBComponent {
    pub weight: f64,
    pub state: PureOnticState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Finite δ-mixture over ontic states.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BBPreparation {
    components: Vec<BBComponent>,
}

impl BBPreparation {
    pub fn new(components: Vec<BBComponent>, tol: f64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidWeights("empty mixture".into()));
        }
        if let Some(c) = components.iter().find(|c| !(c.weight >= 0.0)) {
            return Err(Error::InvalidWeights(format!("negative weight {}", c.weight)));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(BBPreparation { components })
    }

    pub fn pure(state: PureOnticState) -> Self {
        BBPreparation {
            components: vec![BBComponent {
                weight: 1.0,
                state,
                label: None,
            }],
        }
    }

    /// Parses `"0.5*a + 0.5*A"`, `"1/3*a+1/3*b+1/3*c"` or a bare `"b"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut components = Vec::new();
        for term in spec.split('+').map(str::trim) {
            let (w, name) = match term.split_once('*') {
                Some((w, n)) => (rational::to_f64(&rational::parse(w.trim())?), n.trim()),
                None => (1.0, term),
            };
            if name.is_empty() {
                return Err(Error::Parse(format!("empty term in `{spec}`")));
            }
            components.push(BBComponent {
                weight: w,
                state: PureOnticState::named(name)?,
                label: Some(name.to_string()),
            });
        }
        Self::new(components, DEFAULT_TOL)
    }

    pub fn components(&self) -> &[BBComponent] {
        &self.components
    }

    pub fn density(&self) -> Result<DensityOperator> {
        let m = self.components.iter().fold(CMatrix::zeros(2), |acc, c| {
            &acc + &c.state.density().matrix().scale_real(c.weight)
        });
        DensityOperator::new(m, DEFAULT_TOL)
    }

    /// E.g. `1/2·a + 1/2·A`; unlabeled states print as `ψ(…)`.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let w = match rational::from_f64(c.weight, 1000, 1e-12) {
                    Some(q) => rational::format(&q),
                    None => c.weight.to_string(),
                };
                let name = c.label.clone().unwrap_or_else(|| {
                    let [x, y] = c.state.psi;
                    format!("ψ({x}, {y})")
                });
                format!("{w}·{name}")
            })
            .collect();
        parts.join(" + ")
    }

    /// Distinct canonical states with their total weights.
    pub fn support(&self) -> Vec<(PureOnticState, f64)> {
        let mut out: Vec<(PureOnticState, f64)> = Vec::new();
        for c in &self.components {
            match out.iter_mut().find(|(s, _)| s.same_ray(&c.state)) {
                Some((_, w)) => *w += c.weight,
                None => out.push((c.state, c.weight)),
            }
        }
        out.retain(|(_, w)| *w > 0.0);
        out
    }
}

/// `ξ_k(ψ) = ⟨ψ|Q_k|ψ⟩`, computed by the Born rule on `|ψ⟩⟨ψ|`.
pub fn bb_indicator(povm: &Povm, psi: &PureOnticState) -> Result<Vec<f64>> {
    if povm.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: povm.dim(),
        });
    }
    let rho = psi.density();
    povm.effects().iter().map(|e| born_probability(&rho, e)).collect()
}

fn inverse_cdf(weights: impl Iterator<Item = f64>, u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

fn stream(seed: u64, shard: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

fn sample_indices(prep: &BBPreparation, n: usize, rng: &mut ChaCha20Rng) -> Vec<usize> {
    (0..n)
        .map(|_| inverse_cdf(prep.components.iter().map(|c| c.weight), rng.random::<f64>()))
        .collect()
}

/// `n` i.i.d. ontic states drawn from the mixture.
pub fn bb_sample(prep: &BBPreparation, n: usize, seed: u64) -> Vec<PureOnticState> {
    bb_sample_sharded(prep, n, seed, 1)
}

/// Splits `n` draws into `shards` contiguous blocks, block `i` drawn from
/// stream `i`. One shard is the default single-stream plan.
pub fn bb_sample_sharded(prep: &BBPreparation, n: usize, seed: u64, shards: usize) -> Vec<PureOnticState> {
    let shards = shards.max(1);
    let base = n / shards;
    let extra = n % shards;
    let mut out = Vec::with_capacity(n);
    for s in 0..shards {
        let len = base + usize::from(s < extra);
        let mut rng = stream(seed, s as u64);
        out.extend(
            sample_indices(prep, len, &mut rng)
                .into_iter()
                .map(|i| prep.components[i].state),
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub prep: String,
    pub povm: Povm,
    pub n: usize,
    pub seed: u64,
    pub frequencies: Vec<f64>,
    pub born: Vec<f64>,
    pub max_abs_dev: f64,
    /// Per-outcome `4·√(p(1−p)/n)`.
    pub bounds: Vec<f64>,
    pub within_bounds: bool,
}

/// Draws an ontic state, then an outcome from its indicator, `n` times.
pub fn bb_simulate(prep: &BBPreparation, povm: &Povm, n: usize, seed: u64) -> Result<SimulationReport> {
    if n == 0 {
        return Err(Error::InvalidWeights("sample count must be at least 1".into()));
    }
    let indicators = prep
        .components
        .iter()
        .map(|c| bb_indicator(povm, &c.state))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = stream(seed, 0);
    let mut counts = vec![0usize; povm.outcome_count()];
    for _ in 0..n {
        let c = inverse_cdf(prep.components.iter().map(|c| c.weight), rng.random::<f64>());
        let k = inverse_cdf(indicators[c].iter().copied(), rng.random::<f64>());
        counts[k] += 1;
    }
    let rho = prep.density()?;
    let born = povm
        .effects()
        .iter()
        .map(|e| born_probability(&rho, e))
        .collect::<Result<Vec<_>>>()?;
    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let bounds: Vec<f64> = born.iter().map(|p| 4.0 * (p * (1.0 - p) / n as f64).sqrt()).collect();
    let within_bounds = frequencies
        .iter()
        .zip(&born)
        .zip(&bounds)
        .all(|((f, p), b)| (f - p).abs() <= b + 1e-12);
    let max_abs_dev = frequencies
        .iter()
        .zip(&born)
        .map(|(f, p)| (f - p).abs())
        .fold(0.0, f64::max);
    Ok(SimulationReport {
        prep: prep.describe(),
        povm: povm.clone(),
        n,
        seed,
        frequencies,
        born,
        max_abs_dev,
        bounds,
        within_bounds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrepContextualityReport {
    pub first: String,
    pub second: String,
    pub prep_equivalent: bool,
    pub support_overlap: usize,
    pub total_variation: f64,
    pub preparation_contextual: bool,
}

fn total_variation(p: &BBPreparation, q: &BBPreparation) -> f64 {
    let (sp, sq) = (p.support(), q.support());
    let mut sum = 0.0;
    for (s, w) in &sp {
        let other = sq.iter().find(|(t, _)| t.same_ray(s)).map_or(0.0, |(_, v)| *v);
        sum += (w - other).abs();
    }
    for (t, v) in &sq {
        if !sp.iter().any(|(s, _)| s.same_ray(t)) {
            sum += v;
        }
    }
    sum / 2.0
}

/// `½a + ½A` and `½b + ½B` share the density operator `I/2` but are
/// represented by distributions with disjoint supports.
pub fn bb_prep_contextuality_demo() -> Result<PrepContextualityReport> {
    let p = BBPreparation::parse("1/2*a + 1/2*A")?;
    let q = BBPreparation::parse("1/2*b + 1/2*B")?;
    let equivalent = prep_equivalent(
        &Preparation::new("p", p.density()?),
        &Preparation::new("q", q.density()?),
        1e-12,
    )?;
    let overlap = p
        .support()
        .iter()
        .filter(|(s, _)| q.support().iter().any(|(t, _)| t.same_ray(s)))
        .count();
    let tv = total_variation(&p, &q);
    Ok(PrepContextualityReport {
        first: p.describe(),
        second: q.describe(),
        prep_equivalent: equivalent,
        support_overlap: overlap,
        total_variation: tv,
        preparation_contextual: equivalent && tv > 0.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasNoncontextualityReport {
    pub trials: usize,
    pub seed: u64,
    pub max_deviation: f64,
    /// `⅓M_a + ⅓M_b + ⅓M_c` against `{½I, ½I}` on the six named states.
    pub mixed_vs_coin_deviation: f64,
}

fn random_unit3(rng: &mut ChaCha20Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn bloch_operator(r: [f64; 3]) -> CMatrix {
    &(&pauli_x().scale_real(r[0]) + &pauli_y().scale_real(r[1])) + &pauli_z().scale_real(r[2])
}

fn two_outcome(e: CMatrix, label: &str) -> Result<Measurement> {
    let rest = &CMatrix::identity(2) - &e;
    Ok(Measurement::new(
        label,
        Povm::from_matrices(vec![e, rest], DEFAULT_TOL)?,
    ))
}

fn random_state(rng: &mut ChaCha20Rng) -> Result<PureOnticState> {
    let r = random_unit3(rng);
    let theta = r[2].acos();
    let phi = r[1].atan2(r[0]);
    let psi = [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ];
    PureOnticState::new(psi, DEFAULT_TOL)
}

fn max_indicator_gap(m: &Povm, n: &Povm, psi: &PureOnticState) -> Result<f64> {
    let (x, y) = (bb_indicator(m, psi)?, bb_indicator(n, psi)?);
    Ok(x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Builds the same two-outcome POVM from two different random convex
/// decompositions and compares the indicators at random ontic states.
pub fn bb_meas_noncontextuality_property(trials: usize, seed: u64) -> Result<MeasNoncontextualityReport> {
    let mut rng = stream(seed, 0);
    let mut worst = 0.0f64;
    for t in 0..trials {
        let p: f64 = rng.random_range(0.1..0.9);
        let effect = |rng: &mut ChaCha20Rng| {
            let alpha = rng.random_range(0.3..0.7);
            let beta = rng.random_range(0.0..0.1);
            &CMatrix::identity(2).scale_real(alpha) + &bloch_operator(random_unit3(rng)).scale_real(beta)
        };
        let (e1, e2) = (effect(&mut rng), effect(&mut rng));
        let gamma = rng.random_range(0.0..0.1) * p.min(1.0 - p);
        let delta = bloch_operator(random_unit3(&mut rng)).scale_real(gamma);
        let e3 = &e1 + &delta.scale_real(1.0 / p);
        let e4 = &e2 - &delta.scale_real(1.0 / (1.0 - p));
        let (m1, m2) = (two_outcome(e1, "m1")?, two_outcome(e2, "m2")?);
        let (m3, m4) = (two_outcome(e3, "m3")?, two_outcome(e4, "m4")?);
        let first = mix_measurements(&[(p, &m1), (1.0 - p, &m2)], "first")?;
        let second = mix_measurements(&[(p, &m3), (1.0 - p, &m4)], "second")?;
        for _ in 0..4 {
            let psi = random_state(&mut rng)?;
            worst = worst.max(max_indicator_gap(&first.povm, &second.povm, &psi)?);
        }
        // Identical decompositions must agree trivially.
        if t == 0 {
            let psi = random_state(&mut rng)?;
            worst = worst.max(max_indicator_gap(&first.povm, &first.povm, &psi)?);
        }
    }

    let theory = six_state_theory();
    let (mixed, coin) = (&theory.measurement("M")?.povm, &theory.measurement("M~")?.povm);
    let mut fixed = 0.0f64;
    for name in crate::operational::STATE_NAMES {
        fixed = fixed.max(max_indicator_gap(mixed, coin, &PureOnticState::named(name)?)?);
    }
    Ok(MeasNoncontextualityReport {
        trials,
        seed,
        max_deviation: worst,
        mixed_vs_coin_deviation: fixed,
    })
}
