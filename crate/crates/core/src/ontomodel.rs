//! Ontological models on a finite ontic space `{0, …, N−1}`.
//!
//! Preparations are distributions over ontic points, measurements are sets
//! of indicator functions (one row per outcome), and transformations are
//! column-stochastic matrices acting as `new = Γ · old`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operational::OperationalTheory;
use crate::qmath::{apply_channel, born_probability, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OnticSpace {
    size: usize,
}

impl OnticSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidModel("ontic space must be nonempty".into()));
        }
        Ok(OnticSpace { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// Probability distribution over ontic points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidModel("empty distribution".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= -tol)) {
            return Err(Error::InvalidModel(format!("negative weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidModel(format!("weights sum to {total}")));
        }
        Ok(Distribution { weights })
    }

    pub fn point_mass(size: usize, at: usize) -> Self {
        let mut weights = vec![0.0; size];
        weights[at] = 1.0;
        Distribution { weights }
    }

    pub fn uniform(size: usize) -> Self {
        Distribution {
            weights: vec![1.0 / size as f64; size],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;
    fn try_from(w: Vec<f64>) -> Result<Self> {
        Distribution::new(w, DEFAULT_TOL)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Self {
        d.weights
    }
}

/// Indicator functions `ξ_k(λ)`, stored as `K × N` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct IndicatorSet {
    values: Vec<Vec<f64>>,
}

impl IndicatorSet {
    pub fn new(values: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let n = values.first().map(Vec::len).unwrap_or(0);
        if n == 0 || values.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidModel("indicator set must be a nonempty K×N array".into()));
        }
        for row in &values {
            if let Some(v) = row.iter().find(|v| !(**v >= -tol && **v <= 1.0 + tol)) {
                return Err(Error::InvalidModel(format!("indicator value {v} outside [0, 1]")));
            }
        }
        for lambda in 0..n {
            let s: f64 = values.iter().map(|r| r[lambda]).sum();
            if (s - 1.0).abs() > tol {
                return Err(Error::InvalidModel(format!("indicators at point {lambda} sum to {s}")));
            }
        }
        Ok(IndicatorSet { values })
    }

    /// The same value pattern at every ontic point.
    pub fn constant(per_outcome: &[f64], size: usize, tol: f64) -> Result<Self> {
        Self::new(per_outcome.iter().map(|&v| vec![v; size]).collect(), tol)
    }

    /// Deterministic set with `outcome_of[λ]` firing at λ.
    pub fn deterministic(outcome_count: usize, outcome_of: &[usize]) -> Result<Self> {
        let values = (0..outcome_count)
            .map(|k| outcome_of.iter().map(|&o| if o == k { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(values, DEFAULT_TOL)
    }

    pub fn outcome_count(&self) -> usize {
        self.values.len()
    }

    pub fn ontic_size(&self) -> usize {
        self.values[0].len()
    }

    pub fn value(&self, outcome: usize, lambda: usize) -> f64 {
        self.values[outcome][lambda]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }
}

impl TryFrom<Vec<Vec<f64>>> for IndicatorSet {
    type Error = Error;
    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        IndicatorSet::new(v, DEFAULT_TOL)
    }
}

impl From<IndicatorSet> for Vec<Vec<f64>> {
    fn from(x: IndicatorSet) -> Self {
        x.values
    }
}

/// Column-stochastic `Γ(λ′, λ)`, stored as `N′ × N` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct TransitionMatrix {
    rows: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidModel(
                "transition matrix must be a nonempty N′×N array".into(),
            ));
        }
        if rows.iter().flatten().any(|v| !(*v >= -tol)) {
            return Err(Error::InvalidModel("negative transition probability".into()));
        }
        for col in 0..n {
            let s: f64 = rows.iter().map(|r| r[col]).sum();
            if (s - 1.0).abs() > tol {
                return Err(Error::InvalidModel(format!("column {col} sums to {s}")));
            }
        }
        Ok(TransitionMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        TransitionMatrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        }
    }

    /// Permutation sending λ to `image[λ]`.
    pub fn from_map(image: &[usize]) -> Result<Self> {
        let n = image.len();
        let mut rows = vec![vec![0.0; n]; n];
        for (from, &to) in image.iter().enumerate() {
            if to >= n {
                return Err(Error::InvalidModel(format!("image {to} out of range")));
            }
            rows[to][from] = 1.0;
        }
        Self::new(rows, DEFAULT_TOL)
    }

    pub fn output_size(&self) -> usize {
        self.rows.len()
    }

    pub fn input_size(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn apply(&self, mu: &Distribution) -> Result<Distribution> {
        check_size(self.input_size(), mu.len())?;
        let weights = self
            .rows
            .iter()
            .map(|r| r.iter().zip(&mu.weights).map(|(g, m)| g * m).sum())
            .collect();
        Ok(Distribution { weights })
    }

    /// `self · first`: apply `first`, then `self`.
    pub fn after(&self, first: &TransitionMatrix) -> Result<TransitionMatrix> {
        check_size(self.input_size(), first.output_size())?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..first.input_size())
                    .map(|j| r.iter().zip(&first.rows).map(|(a, fr)| a * fr[j]).sum())
                    .collect()
            })
            .collect();
        Ok(TransitionMatrix { rows })
    }
}

impl TryFrom<Vec<Vec<f64>>> for TransitionMatrix {
    type Error = Error;
    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        TransitionMatrix::new(v, DEFAULT_TOL)
    }
}

impl From<TransitionMatrix> for Vec<Vec<f64>> {
    fn from(t: TransitionMatrix) -> Self {
        t.rows
    }
}

fn check_size(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Label-keyed representations on one shared ontic space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelDoc", into = "ModelDoc")]
pub struct OntModel {
    space: OnticSpace,
    pub preparations: BTreeMap<String, Distribution>,
    pub measurements: BTreeMap<String, IndicatorSet>,
    pub transformations: BTreeMap<String, TransitionMatrix>,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    ontic_size: usize,
    #[serde(default)]
    preparations: BTreeMap<String, Distribution>,
    #[serde(default)]
    measurements: BTreeMap<String, IndicatorSet>,
    #[serde(default)]
    transformations: BTreeMap<String, TransitionMatrix>,
}

impl TryFrom<ModelDoc> for OntModel {
    type Error = Error;
    fn try_from(d: ModelDoc) -> Result<Self> {
        let mut model = OntModel::new(d.ontic_size)?;
        for (l, mu) in d.preparations {
            model.add_preparation(&l, mu)?;
        }
        for (l, xi) in d.measurements {
            model.add_measurement(&l, xi)?;
        }
        for (l, g) in d.transformations {
            model.add_transformation(&l, g)?;
        }
        Ok(model)
    }
}

impl From<OntModel> for ModelDoc {
    fn from(m: OntModel) -> Self {
        ModelDoc {
            ontic_size: m.space.size,
            preparations: m.preparations,
            measurements: m.measurements,
            transformations: m.transformations,
        }
    }
}

impl OntModel {
    pub fn new(ontic_size: usize) -> Result<Self> {
        Ok(OntModel {
            space: OnticSpace::new(ontic_size)?,
            preparations: BTreeMap::new(),
            measurements: BTreeMap::new(),
            transformations: BTreeMap::new(),
        })
    }

    pub fn space(&self) -> OnticSpace {
        self.space
    }

    pub fn add_preparation(&mut self, label: &str, mu: Distribution) -> Result<()> {
        check_size(self.space.size, mu.len())?;
        self.preparations.insert(label.to_string(), mu);
        Ok(())
    }

    pub fn add_measurement(&mut self, label: &str, xi: IndicatorSet) -> Result<()> {
        check_size(self.space.size, xi.ontic_size())?;
        self.measurements.insert(label.to_string(), xi);
        Ok(())
    }

    pub fn add_transformation(&mut self, label: &str, gamma: TransitionMatrix) -> Result<()> {
        check_size(self.space.size, gamma.input_size())?;
        check_size(self.space.size, gamma.output_size())?;
        self.transformations.insert(label.to_string(), gamma);
        Ok(())
    }

    pub fn preparation(&self, label: &str) -> Result<&Distribution> {
        self.preparations
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn measurement(&self, label: &str) -> Result<&IndicatorSet> {
        self.measurements
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn transformation(&self, label: &str) -> Result<&TransitionMatrix> {
        self.transformations
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

/// `p_k = Σ_{λ′,λ} ξ_k(λ′) Γ(λ′,λ) μ(λ)`, with Γ the identity when absent.
pub fn predict(mu: &Distribution, gamma: Option<&TransitionMatrix>, xi: &IndicatorSet) -> Result<Vec<f64>> {
    let evolved;
    let mu = match gamma {
        Some(g) => {
            evolved = g.apply(mu)?;
            &evolved
        }
        None => mu,
    };
    check_size(xi.ontic_size(), mu.len())?;
    Ok(xi
        .values
        .iter()
        .map(|row| row.iter().zip(&mu.weights).map(|(x, m)| x * m).sum())
        .collect())
}

/// Points with weight strictly above `tol`.
pub fn support(mu: &Distribution, tol: f64) -> BTreeSet<usize> {
    mu.weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > tol)
        .map(|(i, _)| i)
        .collect()
}

pub fn disjoint(mu: &Distribution, nu: &Distribution, tol: f64) -> Result<bool> {
    check_size(mu.len(), nu.len())?;
    Ok(mu.weights.iter().zip(&nu.weights).all(|(a, b)| a * b <= tol))
}

/// Every value within `tol` of 0 or 1.
pub fn is_outcome_deterministic(xi: &IndicatorSet, tol: f64) -> bool {
    xi.values
        .iter()
        .flatten()
        .all(|v| v.abs() <= tol || (v - 1.0).abs() <= tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StateView {
    Ontic,
    Epistemic,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateViewReport {
    pub view: StateView,
    /// No pair of distinct, nonorthogonal preparations to discriminate the
    /// two views; `Epistemic` is returned by convention.
    pub vacuous: bool,
    pub pairs: Vec<PairRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRecord {
    pub first: String,
    pub second: String,
    pub orthogonal: bool,
    pub disjoint: bool,
}

/// Ontic: all distinct pairs disjoint. Epistemic: disjoint exactly when
/// orthogonal. Sets without nonorthogonal pairs are reported as vacuous
/// `Epistemic`.
pub fn classify_state_view(
    model: &OntModel,
    prep_labels: &[&str],
    orthogonal: impl Fn(&str, &str) -> bool,
    tol: f64,
) -> Result<StateViewReport> {
    let dists = prep_labels
        .iter()
        .map(|l| model.preparation(l))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for i in 0..prep_labels.len() {
        for j in i + 1..prep_labels.len() {
            pairs.push(PairRecord {
                first: prep_labels[i].to_string(),
                second: prep_labels[j].to_string(),
                orthogonal: orthogonal(prep_labels[i], prep_labels[j]),
                disjoint: disjoint(dists[i], dists[j], tol)?,
            });
        }
    }
    let vacuous = pairs.iter().all(|p| p.orthogonal);
    let view = if vacuous {
        StateView::Epistemic
    } else if pairs.iter().all(|p| p.disjoint) {
        StateView::Ontic
    } else if pairs.iter().all(|p| p.disjoint == p.orthogonal) {
        StateView::Epistemic
    } else {
        StateView::Neither
    };
    Ok(StateViewReport { view, vacuous, pairs })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleDeviation {
    pub preparation: String,
    pub transformation: Option<String>,
    pub measurement: String,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproductionReport {
    pub triples_checked: usize,
    pub max_deviation: f64,
    pub failures: Vec<TripleDeviation>,
}

impl ReproductionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares the prediction rule with Born probabilities on every
/// (preparation, optional transformation, measurement) triple, in theory
/// label order.
pub fn model_reproduces_theory(model: &OntModel, theory: &OperationalTheory, tol: f64) -> Result<ReproductionReport> {
    let mut report = ReproductionReport {
        triples_checked: 0,
        max_deviation: 0.0,
        failures: Vec::new(),
    };
    let transforms: Vec<Option<&str>> = std::iter::once(None)
        .chain(theory.transformations.iter().map(|t| Some(t.label.as_str())))
        .collect();
    for p in &theory.preparations {
        let mu = model.preparation(&p.label)?;
        for &t in &transforms {
            let (gamma, rho) = match t {
                Some(label) => (
                    Some(model.transformation(label)?),
                    apply_channel(&theory.transformation(label)?.channel, &p.rho)?,
                ),
                None => (None, p.rho.clone()),
            };
            for m in &theory.measurements {
                let xi = model.measurement(&m.label)?;
                let predicted = predict(mu, gamma, xi)?;
                let born = m
                    .povm
                    .effects()
                    .iter()
                    .map(|e| born_probability(&rho, e))
                    .collect::<Result<Vec<_>>>()?;
                check_size(born.len(), predicted.len())?;
                let dev = predicted
                    .iter()
                    .zip(&born)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                report.triples_checked += 1;
                report.max_deviation = report.max_deviation.max(dev);
                if dev > tol {
                    report.failures.push(TripleDeviation {
                        preparation: p.label.clone(),
                        transformation: t.map(str::to_string),
                        measurement: m.label.clone(),
                        deviation: dev,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OdStep {
    /// Supports of the orthogonal preparations are pairwise disjoint.
    DisjointSupports,
    /// Their union is the support of the maximally mixed distribution, which
    /// is the whole ontic space.
    SupportsCoverSpace,
    /// The equal-weight mixture of the preparations equals the maximally
    /// mixed distribution.
    MixtureMatches,
    /// Conclusion: the PVM's indicators are idempotent everywhere.
    IndicatorsIdempotent,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdStepResult {
    pub step: OdStep,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdReport {
    pub steps: Vec<OdStepResult>,
    pub first_failure: Option<OdStep>,
}

impl OdReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

/// Walks the argument that preparation noncontextuality forces outcome
/// determinism for a rank-1 PVM: checks the three premises on `model`, then
/// checks the conclusion. Every step is evaluated and reported.
pub fn outcome_determinism_from_prep_nc(
    model: &OntModel,
    pvm_label: &str,
    prep_labels: &[&str],
    mixed_label: &str,
    d: usize,
    tol: f64,
) -> Result<OdReport> {
    if prep_labels.len() != d {
        return Err(Error::InvalidModel(format!(
            "expected {d} preparations, got {}",
            prep_labels.len()
        )));
    }
    let xi = model.measurement(pvm_label)?;
    if xi.outcome_count() != d {
        return Err(Error::InvalidModel(format!(
            "PVM `{pvm_label}` has {} outcomes, expected {d}",
            xi.outcome_count()
        )));
    }
    let mus = prep_labels
        .iter()
        .map(|l| model.preparation(l))
        .collect::<Result<Vec<_>>>()?;
    let mixed = model.preparation(mixed_label)?;
    let supports: Vec<BTreeSet<usize>> = mus.iter().map(|m| support(m, tol)).collect();

    let mut steps = Vec::new();

    let overlaps: Vec<String> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .filter(|&(i, j)| !supports[i].is_disjoint(&supports[j]))
        .map(|(i, j)| format!("{} ∩ {}", prep_labels[i], prep_labels[j]))
        .collect();
    steps.push(OdStepResult {
        step: OdStep::DisjointSupports,
        passed: overlaps.is_empty(),
        detail: if overlaps.is_empty() {
            "supports pairwise disjoint".into()
        } else {
            format!("overlapping supports: {}", overlaps.join(", "))
        },
    });

    let union: BTreeSet<usize> = supports.iter().flatten().copied().collect();
    let mixed_support = support(mixed, tol);
    let full: BTreeSet<usize> = (0..model.space.size).collect();
    let covers = union == mixed_support && mixed_support == full;
    steps.push(OdStepResult {
        step: OdStep::SupportsCoverSpace,
        passed: covers,
        detail: format!(
            "union of supports {}, support of {mixed_label} {}, ontic space has {} points",
            fmt_set(&union),
            fmt_set(&mixed_support),
            full.len()
        ),
    });

    let mix_dev = (0..model.space.size)
        .map(|l| {
            let avg: f64 = mus.iter().map(|m| m.weights[l]).sum::<f64>() / d as f64;
            (avg - mixed.weights[l]).abs()
        })
        .fold(0.0, f64::max);
    steps.push(OdStepResult {
        step: OdStep::MixtureMatches,
        passed: mix_dev <= tol,
        detail: format!("max |Σ μ_k/d − μ_mixed| = {mix_dev:e}"),
    });

    let idempotent = is_outcome_deterministic(xi, tol);
    steps.push(OdStepResult {
        step: OdStep::IndicatorsIdempotent,
        passed: idempotent,
        detail: if idempotent {
            format!("indicators of {pvm_label} are {{0,1}}-valued on all points")
        } else {
            format!("indicators of {pvm_label} take fractional values")
        },
    });

    let first_failure = steps.iter().find(|s| !s.passed).map(|s| s.step);
    Ok(OdReport { steps, first_failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operational::{sigma, Measurement, Preparation};
    use crate::qmath::EXACT_TOL;

    #[test]
    fn predict_examples() {
        let mu = Distribution::new(vec![0.2, 0.5, 0.3], 1e-12).unwrap();
        let coin = IndicatorSet::constant(&[0.5, 0.5], 3, 1e-12).unwrap();
        assert_eq!(predict(&mu, None, &coin).unwrap(), vec![0.5, 0.5]);

        let det = IndicatorSet::deterministic(2, &[1, 0, 1]).unwrap();
        assert_eq!(
            predict(&Distribution::point_mass(3, 1), None, &det).unwrap(),
            vec![1.0, 0.0]
        );

        let shift = TransitionMatrix::from_map(&[1, 2, 0]).unwrap();
        let id3 = IndicatorSet::deterministic(3, &[0, 1, 2]).unwrap();
        let p = predict(&Distribution::uniform(3), Some(&shift), &id3).unwrap();
        for v in p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn predict_size_mismatch() {
        let xi = IndicatorSet::deterministic(2, &[0, 1]).unwrap();
        assert!(predict(&Distribution::uniform(3), None, &xi).is_err());
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&Distribution::point_mass(5, 2), 1e-12), BTreeSet::from([2]));
        assert_eq!(support(&Distribution::uniform(4), 1e-12), BTreeSet::from([0, 1, 2, 3]));
        let mu = Distribution::new(vec![0.5, 1e-15, 0.5], 1e-9).unwrap();
        assert_eq!(support(&mu, 1e-12), BTreeSet::from([0, 2]));
    }

    #[test]
    fn disjoint_examples() {
        let d0 = Distribution::point_mass(3, 0);
        let d1 = Distribution::point_mass(3, 1);
        assert!(disjoint(&d0, &d1, 1e-12).unwrap());
        let u = Distribution::uniform(3);
        assert!(!disjoint(&u, &u, 1e-12).unwrap());
        let half = Distribution::new(vec![0.5, 0.5, 0.0], 1e-12).unwrap();
        assert!(disjoint(&half, &Distribution::point_mass(3, 2), 1e-12).unwrap());
        assert!(disjoint(&half, &Distribution::uniform(4), 1e-12).is_err());
    }

    #[test]
    fn outcome_determinism_examples() {
        let coin = IndicatorSet::constant(&[0.5, 0.5], 4, 1e-12).unwrap();
        assert!(!is_outcome_deterministic(&coin, 1e-12));
        let det = IndicatorSet::deterministic(3, &[0, 1, 2, 2]).unwrap();
        assert!(is_outcome_deterministic(&det, 1e-12));
        let frac = IndicatorSet::new(vec![vec![1.0, 0.0, 2.0 / 3.0], vec![0.0, 1.0, 1.0 / 3.0]], 1e-12).unwrap();
        assert!(!is_outcome_deterministic(&frac, 1e-12));
    }

    #[test]
    fn invalid_objects_rejected() {
        assert!(Distribution::new(vec![0.5, 0.6], 1e-9).is_err());
        assert!(Distribution::new(vec![1.5, -0.5], 1e-9).is_err());
        assert!(IndicatorSet::new(vec![vec![0.5, 1.0], vec![0.4, 0.0]], 1e-9).is_err());
        assert!(TransitionMatrix::new(vec![vec![0.5, 1.0], vec![0.4, 0.0]], 1e-9).is_err());
        assert!(OnticSpace::new(0).is_err());
    }

    fn delta_model(points: &[&str]) -> OntModel {
        let mut m = OntModel::new(points.len()).unwrap();
        for (i, l) in points.iter().enumerate() {
            m.add_preparation(l, Distribution::point_mass(points.len(), i)).unwrap();
        }
        m
    }

    fn orthogonal(x: &str, y: &str) -> bool {
        let p = sigma(x).unwrap();
        let q = sigma(y).unwrap();
        (p.matrix() * q.matrix()).max_abs() < 1e-9
    }

    #[test]
    fn state_view_ontic() {
        let model = delta_model(&["a", "A", "b", "B"]);
        let r = classify_state_view(&model, &["a", "A", "b", "B"], orthogonal, 1e-12).unwrap();
        assert_eq!(r.view, StateView::Ontic);
        assert!(!r.vacuous);
    }

    #[test]
    fn state_view_epistemic() {
        // a at {0,1}, A at {2}, b at {1,2}: a/b overlap, b/A overlap, a/A disjoint.
        let mut model = OntModel::new(3).unwrap();
        model
            .add_preparation("a", Distribution::new(vec![0.5, 0.5, 0.0], 1e-12).unwrap())
            .unwrap();
        model.add_preparation("A", Distribution::point_mass(3, 2)).unwrap();
        model
            .add_preparation("b", Distribution::new(vec![0.0, 0.5, 0.5], 1e-12).unwrap())
            .unwrap();
        let r = classify_state_view(&model, &["a", "A", "b"], orthogonal, 1e-12).unwrap();
        assert_eq!(r.view, StateView::Epistemic);
        assert!(!r.vacuous);
    }

    #[test]
    fn state_view_neither_and_vacuous() {
        // a and A overlap although orthogonal; a and b disjoint although not.
        let mut model = OntModel::new(3).unwrap();
        model
            .add_preparation("a", Distribution::new(vec![0.5, 0.5, 0.0], 1e-12).unwrap())
            .unwrap();
        model.add_preparation("A", Distribution::point_mass(3, 1)).unwrap();
        model.add_preparation("b", Distribution::point_mass(3, 2)).unwrap();
        let r = classify_state_view(&model, &["a", "A", "b"], orthogonal, 1e-12).unwrap();
        assert_eq!(r.view, StateView::Neither);

        let single = classify_state_view(&model, &["a"], orthogonal, 1e-12).unwrap();
        assert_eq!(single.view, StateView::Epistemic);
        assert!(single.vacuous);
        assert!(classify_state_view(&model, &["zz"], orthogonal, 1e-12).is_err());
    }

    fn two_point_theory() -> OperationalTheory {
        let preps = vec![
            Preparation::new("P_a", sigma("a").unwrap()),
            Preparation::new("P_A", sigma("A").unwrap()),
        ];
        let meas = vec![Measurement::new("M_a", crate::operational::pvm("a").unwrap())];
        OperationalTheory::new(2, preps, meas, vec![], vec![], EXACT_TOL).unwrap()
    }

    #[test]
    fn reproduction_examples() {
        let theory = two_point_theory();
        let mut model = delta_model(&["P_a", "P_A"]);
        model
            .add_measurement("M_a", IndicatorSet::deterministic(2, &[0, 1]).unwrap())
            .unwrap();
        let r = model_reproduces_theory(&model, &theory, 1e-12).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(r.triples_checked, 2);

        model
            .add_measurement("M_a", IndicatorSet::deterministic(2, &[1, 0]).unwrap())
            .unwrap();
        let r = model_reproduces_theory(&model, &theory, 1e-12).unwrap();
        assert_eq!(r.max_deviation, 1.0);
        assert_eq!(r.failures[0].preparation, "P_a");
        assert_eq!(r.failures[0].measurement, "M_a");

        let empty = OperationalTheory::new(2, vec![], vec![], vec![], vec![], 1e-9).unwrap();
        let r = model_reproduces_theory(&OntModel::new(1).unwrap(), &empty, 1e-12).unwrap();
        assert!(r.passed());
        assert_eq!(r.triples_checked, 0);
    }

    #[test]
    fn reproduction_missing_label() {
        let theory = two_point_theory();
        let model = delta_model(&["P_a", "P_A"]);
        assert!(matches!(
            model_reproduces_theory(&model, &theory, 1e-12),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn od_derivation_two_point_model() {
        let mut model = delta_model(&["a", "A"]);
        model.add_preparation("I/2", Distribution::uniform(2)).unwrap();
        model
            .add_measurement("M_a", IndicatorSet::deterministic(2, &[0, 1]).unwrap())
            .unwrap();
        let r = outcome_determinism_from_prep_nc(&model, "M_a", &["a", "A"], "I/2", 2, 1e-12).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.steps.len(), 4);
    }

    #[test]
    fn od_derivation_fractional_model_fails_cover_step() {
        let mut model = delta_model(&["a", "A", "b", "B"]);
        model
            .add_preparation("I/2", Distribution::new(vec![0.5, 0.5, 0.0, 0.0], 1e-12).unwrap())
            .unwrap();
        let xi = IndicatorSet::new(vec![vec![1.0, 0.0, 0.25, 0.75], vec![0.0, 1.0, 0.75, 0.25]], 1e-12).unwrap();
        model.add_measurement("M_a", xi).unwrap();
        let r = outcome_determinism_from_prep_nc(&model, "M_a", &["a", "A"], "I/2", 2, 1e-12).unwrap();
        assert_eq!(r.first_failure, Some(OdStep::SupportsCoverSpace));
        assert!(r.steps[0].passed && !r.steps[1].passed && r.steps[2].passed && !r.steps[3].passed);
    }

    #[test]
    fn od_derivation_degenerate_dimension() {
        let mut model = OntModel::new(1).unwrap();
        model.add_preparation("p", Distribution::point_mass(1, 0)).unwrap();
        model.add_preparation("I", Distribution::point_mass(1, 0)).unwrap();
        model
            .add_measurement("M", IndicatorSet::constant(&[1.0], 1, 1e-12).unwrap())
            .unwrap();
        let r = outcome_determinism_from_prep_nc(&model, "M", &["p"], "I", 1, 1e-12).unwrap();
        assert!(r.passed());
        assert!(outcome_determinism_from_prep_nc(&model, "M", &["zz"], "I", 1, 1e-12).is_err());
    }

    #[test]
    fn model_json_shape() {
        let mut model = delta_model(&["a", "A"]);
        model
            .add_measurement("M", IndicatorSet::deterministic(2, &[0, 1]).unwrap())
            .unwrap();
        model
            .add_transformation("swap", TransitionMatrix::from_map(&[1, 0]).unwrap())
            .unwrap();
        let json = serde_json::to_string(&model).unwrap();
        assert_eq!(
            json,
            r#"{"ontic_size":2,"preparations":{"A":[0.0,1.0],"a":[1.0,0.0]},"measurements":{"M":[[1.0,0.0],[0.0,1.0]]},"transformations":{"swap":[[0.0,1.0],[1.0,0.0]]}}"#
        );
        let back: OntModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, model);
        assert!(serde_json::from_str::<OntModel>(r#"{"ontic_size":2,"preparations":{"x":[1.0]}}"#).is_err());
    }
}
