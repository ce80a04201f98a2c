//! Operational theories as finite collections of labeled preparations,
//! measurements and transformations, plus the constructions that generate
//! contexts: convex mixtures and coarse-graining.
//!
//! Equivalence is decided by operator equality (density matrix, POVM up to
//! outcome pairing, Choi matrix), never by sampled statistics. Context is
//! recorded in `context_note` and ignored by every equivalence test.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    channels_equal, choi_deviation, choi_matrix, unitary_rotation_y, CMatrix, DensityOperator, Effect, KrausChannel,
    Povm, DEFAULT_TOL, EXACT_TOL,
};
use crate::rational::{self, Coeff, Rational};

/// Largest outcome count accepted by the permutation search.
pub const MAX_PERMUTATION_OUTCOMES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preparation {
    pub label: String,
    pub rho: DensityOperator,
    #[serde(default, rename = "context", skip_serializing_if = "String::is_empty")]
    pub context_note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub label: String,
    #[serde(rename = "effects")]
    pub povm: Povm,
    #[serde(default, rename = "context", skip_serializing_if = "String::is_empty")]
    pub context_note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transformation {
    pub label: String,
    #[serde(rename = "kraus")]
    pub channel: KrausChannel,
    #[serde(default, rename = "context", skip_serializing_if = "String::is_empty")]
    pub context_note: String,
}

impl Preparation {
    pub fn new(label: impl Into<String>, rho: DensityOperator) -> Self {
        Preparation {
            label: label.into(),
            rho,
            context_note: String::new(),
        }
    }
}

impl Measurement {
    pub fn new(label: impl Into<String>, povm: Povm) -> Self {
        Measurement {
            label: label.into(),
            povm,
            context_note: String::new(),
        }
    }
}

impl Transformation {
    pub fn new(label: impl Into<String>, channel: KrausChannel) -> Self {
        Transformation {
            label: label.into(),
            channel,
            context_note: String::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixtureKind {
    Prep,
    Meas,
    Transf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: Coeff,
    pub label: String,
}

/// A declared convex relation `target = Σ weight · component`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mixture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: MixtureKind,
    pub target: String,
    pub components: Vec<MixtureComponent>,
}

impl Mixture {
    pub fn new(kind: MixtureKind, target: &str, components: &[(Rational, &str)]) -> Self {
        Mixture {
            name: None,
            kind,
            target: target.to_string(),
            components: components
                .iter()
                .map(|(w, l)| MixtureComponent {
                    weight: Coeff(w.clone()),
                    label: l.to_string(),
                })
                .collect(),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    /// Display name: explicit name, or `kind:target`.
    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            let kind = match self.kind {
                MixtureKind::Prep => "prep",
                MixtureKind::Meas => "meas",
                MixtureKind::Transf => "transf",
            };
            format!("{kind}:{}", self.target)
        })
    }
}

/// Outcome of numerically checking one declared mixture.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixtureCheck {
    pub name: String,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TheoryDoc")]
pub struct OperationalTheory {
    pub dim: usize,
    pub preparations: Vec<Preparation>,
    pub measurements: Vec<Measurement>,
    pub transformations: Vec<Transformation>,
    pub mixtures: Vec<Mixture>,
}

#[derive(Deserialize)]
struct TheoryDoc {
    dim: usize,
    #[serde(default)]
    preparations: Vec<Preparation>,
    #[serde(default)]
    measurements: Vec<Measurement>,
    #[serde(default)]
    transformations: Vec<Transformation>,
    #[serde(default)]
    mixtures: Vec<Mixture>,
}

impl TryFrom<TheoryDoc> for OperationalTheory {
    type Error = Error;
    fn try_from(doc: TheoryDoc) -> Result<Self> {
        OperationalTheory::new(
            doc.dim,
            doc.preparations,
            doc.measurements,
            doc.transformations,
            doc.mixtures,
            DEFAULT_TOL,
        )
    }
}

fn check_unique<'a>(labels: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel(l.to_string()));
        }
    }
    Ok(())
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_weights(weights: impl Iterator<Item = f64>) -> Result<()> {
    let mut total = 0.0;
    let mut count = 0;
    for w in weights {
        if !(w >= 0.0) {
            return Err(Error::InvalidWeights(format!("negative or NaN weight {w}")));
        }
        total += w;
        count += 1;
    }
    if count == 0 {
        return Err(Error::InvalidWeights("empty mixture".into()));
    }
    if (total - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    Ok(())
}

impl OperationalTheory {
    /// Builds a theory and verifies every declared mixture within `tol`.
    pub fn new(
        dim: usize,
        preparations: Vec<Preparation>,
        measurements: Vec<Measurement>,
        transformations: Vec<Transformation>,
        mixtures: Vec<Mixture>,
        tol: f64,
    ) -> Result<Self> {
        check_unique(preparations.iter().map(|p| p.label.as_str()))?;
        check_unique(measurements.iter().map(|m| m.label.as_str()))?;
        check_unique(transformations.iter().map(|t| t.label.as_str()))?;
        for p in &preparations {
            check_dim(dim, p.rho.dim())?;
        }
        for m in &measurements {
            check_dim(dim, m.povm.dim())?;
        }
        for t in &transformations {
            check_dim(dim, t.channel.dim())?;
        }
        let theory = OperationalTheory {
            dim,
            preparations,
            measurements,
            transformations,
            mixtures,
        };
        for check in theory.verify_mixtures()? {
            if check.max_deviation > tol {
                return Err(Error::PremiseFailed {
                    name: check.name,
                    deviation: check.max_deviation,
                });
            }
        }
        Ok(theory)
    }

    pub fn preparation(&self, label: &str) -> Result<&Preparation> {
        self.preparations
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn measurement(&self, label: &str) -> Result<&Measurement> {
        self.measurements
            .iter()
            .find(|m| m.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn transformation(&self, label: &str) -> Result<&Transformation> {
        self.transformations
            .iter()
            .find(|t| t.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Max entrywise deviation of each declared mixture from its target
    /// (Choi matrices for transformations).
    pub fn verify_mixtures(&self) -> Result<Vec<MixtureCheck>> {
        self.mixtures.iter().map(|m| self.verify_mixture(m)).collect()
    }

    fn verify_mixture(&self, mix: &Mixture) -> Result<MixtureCheck> {
        check_weights(mix.components.iter().map(|c| rational::to_f64(&c.weight.0)))?;
        if mix.components.iter().any(|c| !rational::is_nonnegative(&c.weight.0)) {
            return Err(Error::InvalidWeights(format!(
                "{}: negative weight",
                mix.display_name()
            )));
        }
        let max_deviation = match mix.kind {
            MixtureKind::Prep => {
                let mut sum = CMatrix::zeros(self.dim);
                for c in &mix.components {
                    let p = self.preparation(&c.label)?;
                    sum = &sum + &p.rho.matrix().scale_real(rational::to_f64(&c.weight.0));
                }
                sum.max_abs_diff(self.preparation(&mix.target)?.rho.matrix())
            }
            MixtureKind::Meas => {
                let target = &self.measurement(&mix.target)?.povm;
                let mut sums = vec![CMatrix::zeros(self.dim); target.outcome_count()];
                for c in &mix.components {
                    let povm = &self.measurement(&c.label)?.povm;
                    if povm.outcome_count() != target.outcome_count() {
                        return Err(Error::InvalidWeights(format!(
                            "{}: outcome count mismatch for `{}`",
                            mix.display_name(),
                            c.label
                        )));
                    }
                    let w = rational::to_f64(&c.weight.0);
                    for (s, e) in sums.iter_mut().zip(povm.effects()) {
                        *s = &*s + &e.matrix().scale_real(w);
                    }
                }
                sums.iter()
                    .zip(target.effects())
                    .map(|(s, e)| s.max_abs_diff(e.matrix()))
                    .fold(0.0, f64::max)
            }
            MixtureKind::Transf => {
                let d2 = self.dim * self.dim;
                let mut sum = CMatrix::zeros(d2);
                for c in &mix.components {
                    let t = &self.transformation(&c.label)?.channel;
                    let w = rational::to_f64(&c.weight.0);
                    sum = &sum + &choi_matrix(t).matrix().scale_real(w);
                }
                let target = &self.transformation(&mix.target)?.channel;
                sum.max_abs_diff(choi_matrix(target).matrix())
            }
        };
        Ok(MixtureCheck {
            name: mix.display_name(),
            max_deviation,
        })
    }
}

pub fn prep_equivalent(p: &Preparation, q: &Preparation, tol: f64) -> Result<bool> {
    check_dim(p.rho.dim(), q.rho.dim())?;
    Ok(p.rho.matrix().max_abs_diff(q.rho.matrix()) <= tol)
}

/// Finds an outcome pairing `π` with `E_k = F_{π(k)}`. Without
/// `allow_permutation` only the identity pairing is tried. Permutations are
/// searched in lexicographic order, so the identity wins when it matches.
pub fn meas_equivalent(
    m: &Measurement,
    n: &Measurement,
    allow_permutation: bool,
    tol: f64,
) -> Result<Option<Vec<usize>>> {
    check_dim(m.povm.dim(), n.povm.dim())?;
    let k = m.povm.outcome_count();
    if k != n.povm.outcome_count() {
        return Ok(None);
    }
    let (e, f) = (m.povm.effects(), n.povm.effects());
    let matches = |perm: &[usize]| {
        perm.iter()
            .enumerate()
            .all(|(i, &j)| e[i].matrix().max_abs_diff(f[j].matrix()) <= tol)
    };
    if !allow_permutation {
        let id: Vec<usize> = (0..k).collect();
        return Ok(matches(&id).then_some(id));
    }
    if k > MAX_PERMUTATION_OUTCOMES {
        return Err(Error::TooManyOutcomes(k));
    }
    // close[i] lists the candidates j for outcome i; prune the search with it.
    let close: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| e[i].matrix().max_abs_diff(f[j].matrix()) <= tol)
                .collect()
        })
        .collect();
    let mut perm = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn search(i: usize, close: &[Vec<usize>], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if i == close.len() {
            return true;
        }
        for &j in &close[i] {
            if !used[j] {
                used[j] = true;
                perm.push(j);
                if search(i + 1, close, perm, used) {
                    return true;
                }
                perm.pop();
                used[j] = false;
            }
        }
        false
    }
    Ok(search(0, &close, &mut perm, &mut used).then_some(perm))
}

pub fn transf_equivalent(s: &Transformation, t: &Transformation, tol: f64) -> Result<bool> {
    channels_equal(&s.channel, &t.channel, tol)
}

fn provenance(components: &[(f64, &str)]) -> String {
    let parts: Vec<String> = components
        .iter()
        .map(|(w, l)| match rational::from_f64(*w, 1000, 1e-12) {
            Some(q) => format!("{}·{l}", rational::format(&q)),
            None => format!("{w}·{l}"),
        })
        .collect();
    format!("mixture of {}", parts.join(" + "))
}

/// `ρ = Σ p_k ρ_k`; component labels are recorded in `context_note`.
pub fn mix_preparations(components: &[(f64, &Preparation)], label: &str) -> Result<Preparation> {
    check_weights(components.iter().map(|(w, _)| *w))?;
    let dim = components[0].1.rho.dim();
    let mut sum = CMatrix::zeros(dim);
    for (w, p) in components {
        check_dim(dim, p.rho.dim())?;
        sum = &sum + &p.rho.matrix().scale_real(*w);
    }
    let names: Vec<(f64, &str)> = components.iter().map(|(w, p)| (*w, p.label.as_str())).collect();
    Ok(Preparation {
        label: label.to_string(),
        rho: DensityOperator::new(sum, DEFAULT_TOL)?,
        context_note: provenance(&names),
    })
}

/// Element-wise `E_k = Σ_α p_α F_k^α`.
pub fn mix_measurements(components: &[(f64, &Measurement)], label: &str) -> Result<Measurement> {
    check_weights(components.iter().map(|(w, _)| *w))?;
    let first = &components[0].1.povm;
    let (dim, k) = (first.dim(), first.outcome_count());
    let mut sums = vec![CMatrix::zeros(dim); k];
    for (w, m) in components {
        check_dim(dim, m.povm.dim())?;
        if m.povm.outcome_count() != k {
            return Err(Error::InvalidPartition(format!(
                "`{}` has {} outcomes, expected {k}",
                m.label,
                m.povm.outcome_count()
            )));
        }
        for (s, e) in sums.iter_mut().zip(m.povm.effects()) {
            *s = &*s + &e.matrix().scale_real(*w);
        }
    }
    let names: Vec<(f64, &str)> = components.iter().map(|(w, m)| (*w, m.label.as_str())).collect();
    Ok(Measurement {
        label: label.to_string(),
        povm: Povm::from_matrices(sums, DEFAULT_TOL)?,
        context_note: provenance(&names),
    })
}

/// Sums the effects inside each block of `partition`.
pub fn coarse_grain_povm(m: &Measurement, partition: &[Vec<usize>]) -> Result<Measurement> {
    let k = m.povm.outcome_count();
    let mut seen = vec![false; k];
    for block in partition {
        if block.is_empty() {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        for &j in block {
            if j >= k {
                return Err(Error::InvalidPartition(format!("outcome {j} out of range")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidPartition(format!("outcome {j} appears twice")));
            }
        }
    }
    if let Some(j) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("outcome {j} not covered")));
    }
    let dim = m.povm.dim();
    let effects = partition
        .iter()
        .map(|block| {
            block
                .iter()
                .fold(CMatrix::zeros(dim), |acc, &j| &acc + m.povm.effects()[j].matrix())
        })
        .collect();
    Ok(Measurement {
        label: format!("{}/coarse", m.label),
        povm: Povm::from_matrices(effects, DEFAULT_TOL)?,
        context_note: format!("coarse-graining of {} by {:?}", m.label, partition),
    })
}

/// Union of the `√p`-scaled component Kraus sets.
pub fn mix_channels(components: &[(f64, &Transformation)], label: &str) -> Result<Transformation> {
    check_weights(components.iter().map(|(w, _)| *w))?;
    let dim = components[0].1.channel.dim();
    let mut ops = Vec::new();
    for (w, t) in components {
        check_dim(dim, t.channel.dim())?;
        let s = w.sqrt();
        ops.extend(t.channel.kraus_ops().iter().map(|k| k.scale_real(s)));
    }
    let names: Vec<(f64, &str)> = components.iter().map(|(w, t)| (*w, t.label.as_str())).collect();
    Ok(Transformation {
        label: label.to_string(),
        channel: KrausChannel::new(ops, DEFAULT_TOL)?,
        context_note: provenance(&names),
    })
}

/// The six pure states, in the order `a, A, b, B, c, C`.
pub const STATE_NAMES: [&str; 6] = ["a", "A", "b", "B", "c", "C"];

/// Real state vectors of the six pure qubit states (two interleaved trines
/// on the z–x great circle).
pub fn state_vector(name: &str) -> Option<[Complex64; 2]> {
    let h = 3f64.sqrt() / 2.0;
    let (x, y) = match name {
        "a" => (1.0, 0.0),
        "A" => (0.0, 1.0),
        "b" => (0.5, h),
        "B" => (h, -0.5),
        "c" => (0.5, -h),
        "C" => (h, 0.5),
        _ => return None,
    };
    Some([Complex64::new(x, 0.0), Complex64::new(y, 0.0)])
}

/// Density operator `σ_name` written out entrywise.
pub fn sigma(name: &str) -> Option<DensityOperator> {
    let r = 3f64.sqrt() / 4.0;
    let rows: [[f64; 2]; 2] = match name {
        "a" => [[1.0, 0.0], [0.0, 0.0]],
        "A" => [[0.0, 0.0], [0.0, 1.0]],
        "b" => [[0.25, r], [r, 0.75]],
        "B" => [[0.75, -r], [-r, 0.25]],
        "c" => [[0.25, -r], [-r, 0.75]],
        "C" => [[0.75, r], [r, 0.25]],
        _ => return None,
    };
    let m = CMatrix::from_real(&[&rows[0], &rows[1]]).ok()?;
    DensityOperator::new(m, EXACT_TOL).ok()
}

/// Rotation angles of the six y-axis rotations, as multiples of π/3.
pub const ROTATION_STEPS: [u32; 6] = [0, 1, 2, 3, 4, 5];

pub fn rotation_label(step: u32) -> String {
    match step {
        0 => "T_0".into(),
        1 => "T_pi/3".into(),
        3 => "T_pi".into(),
        s => format!("T_{s}pi/3"),
    }
}

pub fn rotation_channel(step: u32) -> KrausChannel {
    KrausChannel::unitary(unitary_rotation_y(step as f64 * PI / 3.0)).expect("rotations are unitary")
}

/// Kraus set `{√½U_0, √½U_π}` defining the y-axis projection map.
pub fn projection_channel() -> KrausChannel {
    let s = 0.5f64.sqrt();
    KrausChannel::new(
        vec![
            unitary_rotation_y(0.0).scale_real(s),
            unitary_rotation_y(PI).scale_real(s),
        ],
        DEFAULT_TOL,
    )
    .expect("K1 Kraus set is trace preserving")
}

/// The five convex decompositions of the projection map, as
/// `(name, [(weight numerator, weight denominator, rotation step)])`.
pub const PROJECTION_DECOMPOSITIONS: [(&str, &[(i64, i64, u32)]); 5] = [
    ("K1", &[(1, 2, 0), (1, 2, 3)]),
    ("K2", &[(1, 2, 1), (1, 2, 4)]),
    ("K3", &[(1, 2, 2), (1, 2, 5)]),
    ("K4", &[(1, 3, 0), (1, 3, 2), (1, 3, 4)]),
    ("K5", &[(1, 3, 1), (1, 3, 3), (1, 3, 5)]),
];

/// The five decompositions of `I/2` into the six pure states, as
/// `(mixture label, [(weight numerator, denominator, state)])`.
pub const MIXED_DECOMPOSITIONS: [(&str, &[(i64, i64, &str)]); 5] = [
    ("P_aA", &[(1, 2, "a"), (1, 2, "A")]),
    ("P_bB", &[(1, 2, "b"), (1, 2, "B")]),
    ("P_cC", &[(1, 2, "c"), (1, 2, "C")]),
    ("P_abc", &[(1, 3, "a"), (1, 3, "b"), (1, 3, "c")]),
    ("P_ABC", &[(1, 3, "A"), (1, 3, "B"), (1, 3, "C")]),
];

/// Two-outcome PVM `{P_x, P_X}` for `x ∈ {a, b, c}`.
pub fn pvm(lower: &str) -> Option<Povm> {
    let upper = lower.to_uppercase();
    let p = sigma(lower)?;
    let q = sigma(&upper)?;
    Povm::from_matrices(vec![p.matrix().clone(), q.matrix().clone()], DEFAULT_TOL).ok()
}

/// The trivial two-outcome POVM `{½I, ½I}`.
pub fn trivial_povm() -> Povm {
    let half = Effect::new(CMatrix::identity(2).scale_real(0.5), DEFAULT_TOL).unwrap();
    Povm::new(vec![half.clone(), half], DEFAULT_TOL).unwrap()
}

/// The canonical qubit instance: six pure preparations and their five
/// mixtures, the three PVMs with their equal-weight mixture and the coin-flip
/// measurement, and the six y-rotations with the projection map and its five
/// declared decompositions.
pub fn six_state_theory() -> OperationalTheory {
    let mut preparations: Vec<Preparation> = STATE_NAMES
        .iter()
        .map(|n| Preparation::new(format!("P_{n}"), sigma(n).unwrap()))
        .collect();
    let mut mixtures = Vec::new();
    for (label, parts) in MIXED_DECOMPOSITIONS {
        let comps: Vec<(f64, &Preparation)> = parts
            .iter()
            .map(|&(p, q, n)| {
                let l = format!("P_{n}");
                (p as f64 / q as f64, preparations.iter().find(|x| x.label == l).unwrap())
            })
            .collect();
        let mixed = mix_preparations(&comps, label).unwrap();
        let weighted: Vec<(Rational, String)> = parts
            .iter()
            .map(|&(p, q, n)| (rational::ratio(p, q), format!("P_{n}")))
            .collect();
        let refs: Vec<(Rational, &str)> = weighted.iter().map(|(w, l)| (w.clone(), l.as_str())).collect();
        mixtures.push(Mixture::new(MixtureKind::Prep, label, &refs));
        preparations.push(mixed);
    }

    let mut measurements: Vec<Measurement> = ["a", "b", "c"]
        .iter()
        .map(|x| Measurement::new(format!("M_{x}"), pvm(x).unwrap()))
        .collect();
    let third = 1.0 / 3.0;
    let mixed = mix_measurements(
        &[
            (third, &measurements[0]),
            (third, &measurements[1]),
            (third, &measurements[2]),
        ],
        "M",
    )
    .unwrap();
    measurements.push(mixed);
    let mut coin = Measurement::new("M~", trivial_povm());
    coin.context_note = "ignores the system and flips a fair coin".into();
    measurements.push(coin);
    let q3 = rational::ratio(1, 3);
    mixtures.push(
        Mixture::new(
            MixtureKind::Meas,
            "M",
            &[(q3.clone(), "M_a"), (q3.clone(), "M_b"), (q3, "M_c")],
        )
        .named("M"),
    );

    let mut transformations: Vec<Transformation> = ROTATION_STEPS
        .iter()
        .map(|&s| Transformation::new(rotation_label(s), rotation_channel(s)))
        .collect();
    transformations.push(Transformation::new("T", projection_channel()));
    for (name, parts) in PROJECTION_DECOMPOSITIONS {
        let labels: Vec<(Rational, String)> = parts
            .iter()
            .map(|&(p, q, s)| (rational::ratio(p, q), rotation_label(s)))
            .collect();
        let refs: Vec<(Rational, &str)> = labels.iter().map(|(w, l)| (w.clone(), l.as_str())).collect();
        mixtures.push(Mixture::new(MixtureKind::Transf, "T", &refs).named(name));
    }

    OperationalTheory::new(2, preparations, measurements, transformations, mixtures, EXACT_TOL)
        .expect("canonical instance verifies")
}

/// Max Choi deviation between a declared decomposition and the projection map.
pub fn decomposition_deviation(parts: &[(i64, i64, u32)]) -> Result<f64> {
    let transforms: Vec<Transformation> = parts
        .iter()
        .map(|&(_, _, s)| Transformation::new(rotation_label(s), rotation_channel(s)))
        .collect();
    let comps: Vec<(f64, &Transformation)> = parts
        .iter()
        .zip(&transforms)
        .map(|(&(p, q, _), t)| (p as f64 / q as f64, t))
        .collect();
    let mixed = mix_channels(&comps, "mix")?;
    choi_deviation(&mixed.channel, &projection_channel())
}
