//! The concrete no-go arguments: each driver checks its physical premises
//! numerically on the canonical qubit instance, then hands the resulting
//! symbolic problem to the certifier (or tabulates it directly).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::certify::{pointwise_feasibility, CaseRow, Certificate, Conclusion, PremiseCheck, Verdict};
use super::system::ConstraintSystem;
use crate::error::{Error, Result};
use crate::ontomodel::{is_outcome_deterministic, IndicatorSet};
use crate::operational::{
    decomposition_deviation, meas_equivalent, rotation_channel, rotation_label, sigma, six_state_theory, state_vector,
    Measurement, MixtureKind, OperationalTheory, MIXED_DECOMPOSITIONS, PROJECTION_DECOMPOSITIONS, STATE_NAMES,
};
use crate::qmath::{
    apply_channel, born_probability, density_from_bloch, BlochVector, CMatrix, DensityOperator, Povm, DEFAULT_TOL,
    EXACT_TOL,
};
use crate::rational::{self, ratio, Coeff, Rational};

/// Six pure-state distributions, the three orthogonal pairs, and the five
/// decompositions of the maximally mixed state as equal linear forms.
pub fn build_prep_system() -> ConstraintSystem {
    let pairs = [("a", "A"), ("b", "B"), ("c", "C")];
    let groups: Vec<Vec<(&str, Rational)>> = MIXED_DECOMPOSITIONS
        .iter()
        .map(|(_, parts)| parts.iter().map(|&(p, q, n)| (n, ratio(p, q))).collect())
        .collect();
    ConstraintSystem::new(&STATE_NAMES, &pairs, &groups).expect("static system is valid")
}

fn trace_product(x: &DensityOperator, y: &DensityOperator) -> f64 {
    (x.matrix() * y.matrix()).trace().norm()
}

fn max_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    a.max_abs_diff(b)
}

/// Orthogonality, perfect distinguishability and the five mixture
/// identities, all at [`EXACT_TOL`].
pub fn prep_premises(theory: &OperationalTheory) -> Result<Vec<PremiseCheck>> {
    let mut checks = Vec::new();
    for (lo, up) in [("a", "A"), ("b", "B"), ("c", "C")] {
        let p = &theory.preparation(&format!("P_{lo}"))?.rho;
        let q = &theory.preparation(&format!("P_{up}"))?.rho;
        checks.push(PremiseCheck::new(format!("Tr(σ_{lo} σ_{up}) = 0"), trace_product(p, q)));
        let m = &theory.measurement(&format!("M_{lo}"))?.povm;
        let e = m.effects();
        let dev = [
            born_probability(p, &e[0])? - 1.0,
            born_probability(p, &e[1])?,
            born_probability(q, &e[0])?,
            born_probability(q, &e[1])? - 1.0,
        ]
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
        checks.push(PremiseCheck::new(
            format!("M_{lo} distinguishes P_{lo} from P_{up}"),
            dev,
        ));
    }
    let mixed = DensityOperator::maximally_mixed(2);
    for (label, _) in MIXED_DECOMPOSITIONS {
        let rho = &theory.preparation(label)?.rho;
        checks.push(PremiseCheck::new(
            format!("{label} = I/2"),
            max_dev(rho.matrix(), mixed.matrix()),
        ));
    }
    for check in theory.verify_mixtures()? {
        let is_prep = theory
            .mixtures
            .iter()
            .any(|m| m.kind == MixtureKind::Prep && m.display_name() == check.name);
        if is_prep {
            checks.push(PremiseCheck::new(
                format!("mixture {}", check.name),
                check.max_deviation,
            ));
        }
    }
    checks.into_iter().map(|c| c.require(EXACT_TOL)).collect()
}

/// Preparation noncontextuality versus the six-state instance.
pub fn prep_nogo() -> Result<Certificate> {
    let premises = prep_premises(&six_state_theory())?;
    let mut cert = pointwise_feasibility(&build_prep_system())?;
    cert.premise_checks = premises;
    Ok(cert)
}

fn deterministic_assignments() -> Vec<[(u8, u8); 3]> {
    (0..8u8)
        .map(|mask| {
            let pick = |k: u8| if mask >> (2 - k) & 1 == 0 { (1, 0) } else { (0, 1) };
            [pick(0), pick(1), pick(2)]
        })
        .collect()
}

/// Measurement noncontextuality plus outcome determinism for the three
/// PVMs: every deterministic assignment gives the mixed measurement a
/// value pair other than `{½, ½}`, which the coin-flip measurement forces.
pub fn meas_nogo() -> Result<Certificate> {
    let theory = six_state_theory();
    let mut checks = Vec::new();
    for lo in ["a", "b", "c"] {
        let povm = &theory.measurement(&format!("M_{lo}"))?.povm;
        let sharp = povm
            .effects()
            .iter()
            .map(|e| max_dev(&(e.matrix() * e.matrix()), e.matrix()))
            .fold(0.0, f64::max);
        checks.push(PremiseCheck::new(format!("M_{lo} is projective"), sharp));
    }
    for check in theory.verify_mixtures()? {
        if theory
            .mixtures
            .iter()
            .any(|m| m.kind == MixtureKind::Meas && m.display_name() == check.name)
        {
            checks.push(PremiseCheck::new(
                format!("mixture {}", check.name),
                check.max_deviation,
            ));
        }
    }
    let m = theory.measurement("M")?;
    let coin = theory.measurement("M~")?;
    let equiv = meas_equivalent(m, coin, false, EXACT_TOL)?;
    let dev = m
        .povm
        .effects()
        .iter()
        .zip(coin.povm.effects())
        .map(|(e, f)| max_dev(e.matrix(), f.matrix()))
        .fold(0.0, f64::max);
    checks.push(PremiseCheck::new(
        "M ≃ M~ = {½I, ½I}",
        if equiv.is_some() { dev } else { dev.max(1.0) },
    ));
    let checks = checks
        .into_iter()
        .map(|c| c.require(EXACT_TOL))
        .collect::<Result<Vec<_>>>()?;

    let forced = trivial_povm_forced_indicator()?;
    let half = ratio(1, 2);
    let third = ratio(1, 3);
    let allowed = [
        (ratio(0, 1), ratio(1, 1)),
        (ratio(1, 1), ratio(0, 1)),
        (ratio(2, 3), ratio(1, 3)),
        (ratio(1, 3), ratio(2, 3)),
    ];
    let mut cases = Vec::new();
    for assignment in deterministic_assignments() {
        let mut pattern = Vec::new();
        for ((lo, up), (x, y)) in [("a", "A"), ("b", "B"), ("c", "C")].iter().zip(assignment) {
            pattern.push(format!("χ_{lo}={x}"));
            pattern.push(format!("χ_{up}={y}"));
        }
        let first: Rational = assignment
            .iter()
            .map(|&(x, _)| &third * Rational::from_integer(x.into()))
            .sum();
        let second: Rational = assignment
            .iter()
            .map(|&(_, y)| &third * Rational::from_integer(y.into()))
            .sum();
        if !allowed.contains(&(first.clone(), second.clone())) || (first == half && second == half) {
            return Err(Error::PremiseFailed {
                name: format!("mixed value pair for {}", pattern.join(",")),
                deviation: 1.0,
            });
        }
        let derivation = vec![
            format!(
                "⅓χ_a + ⅓χ_b + ⅓χ_c = {}, ⅓χ_A + ⅓χ_B + ⅓χ_C = {}",
                rational::pretty(&first),
                rational::pretty(&second)
            ),
            format!("({}, {}) ≠ (½, ½)", rational::pretty(&first), rational::pretty(&second)),
        ];
        cases.push(CaseRow {
            pattern,
            conclusion: Conclusion::Mixed {
                values: vec![Coeff(first), Coeff(second)],
            },
            derivation,
        });
    }
    Ok(Certificate {
        verdict: Verdict::Infeasible,
        system: None,
        witness: None,
        cases,
        premise_checks: checks,
        notes: vec![format!(
            "M~ is represented by ({}, {}) at every ontic point; no deterministic assignment reproduces it",
            forced.by_symmetry[0], forced.by_symmetry[1]
        )],
    })
}

/// The coin-flip measurement's indicator values, derived two ways.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForcedIndicator {
    pub outcome_count: usize,
    /// From λ-independence: the outcome statistics are the same for every
    /// preparation, so the indicator equals them at every point.
    pub by_independence: Vec<Coeff>,
    /// From outcome-relabeling symmetry: `ξ₁ = ξ₂` and `ξ₁ + ξ₂ = 1`.
    pub by_symmetry: Vec<Coeff>,
    pub agree: bool,
    pub indicator: IndicatorSet,
}

pub fn trivial_povm_forced_indicator() -> Result<ForcedIndicator> {
    let theory = six_state_theory();
    let coin = theory.measurement("M~")?;
    let k = coin.povm.outcome_count();

    let mut stats: Option<Vec<f64>> = None;
    for p in &theory.preparations {
        let probs = coin
            .povm
            .effects()
            .iter()
            .map(|e| born_probability(&p.rho, e))
            .collect::<Result<Vec<_>>>()?;
        if let Some(prev) = &stats {
            let dev = prev.iter().zip(&probs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            PremiseCheck::new(format!("M~ statistics on {} are state independent", p.label), dev).require(EXACT_TOL)?;
        } else {
            stats = Some(probs);
        }
    }
    let by_independence = stats
        .unwrap_or_default()
        .iter()
        .map(|&p| {
            rational::from_f64(p, rational::MAX_SNAP_DENOMINATOR, EXACT_TOL)
                .map(Coeff)
                .ok_or_else(|| Error::Parse(format!("probability {p} has no small fraction")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut swapped_effects = coin.povm.effects().to_vec();
    swapped_effects.reverse();
    let swapped = Measurement::new("M~ swapped", Povm::new(swapped_effects, DEFAULT_TOL)?);
    if meas_equivalent(coin, &swapped, false, EXACT_TOL)?.is_none() {
        return Err(Error::PremiseFailed {
            name: "M~ is invariant under swapping its outcomes".into(),
            deviation: 1.0,
        });
    }
    // All outcomes equal and summing to one: each is 1/k.
    let by_symmetry = vec![Coeff(ratio(1, k as i64)); k];

    let agree = by_independence == by_symmetry;
    let values: Vec<f64> = by_symmetry.iter().map(|c| rational::to_f64(&c.0)).collect();
    Ok(ForcedIndicator {
        outcome_count: k,
        by_independence,
        by_symmetry,
        agree,
        indicator: IndicatorSet::constant(&values, 1, EXACT_TOL)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdUnsharpReport {
    pub povm: Povm,
    pub forced_indicator: Vec<Coeff>,
    pub outcome_deterministic: bool,
    pub contradiction: bool,
    pub conclusion: String,
}

/// Outcome determinism for the unsharp `{½I, ½I}` clashes with measurement
/// noncontextuality, which forces the indicator `{½, ½}`.
pub fn od_unsharp_contradiction() -> Result<OdUnsharpReport> {
    let forced = trivial_povm_forced_indicator()?;
    let deterministic = is_outcome_deterministic(&forced.indicator, EXACT_TOL);
    let povm = six_state_theory().measurement("M~")?.povm.clone();
    Ok(OdUnsharpReport {
        povm,
        forced_indicator: forced.by_symmetry,
        outcome_deterministic: deterministic,
        contradiction: !deterministic,
        conclusion: if deterministic {
            "no contradiction: forced indicator is deterministic".into()
        } else {
            "measurement noncontextuality forces {½, ½}, which is not outcome deterministic".into()
        },
    })
}

/// Image of `σ_a` under each rotation, in the order matching `a, A, b, B, c, C`.
pub const TRANSF_STEP_FOR_STATE: [u32; 6] = [0, 3, 2, 5, 4, 1];

pub fn image_variable(step: u32) -> String {
    rotation_label(step).replacen("T_", "mu_", 1)
}

/// Constraint system on the images `Γ_θ μ_a`, built from the rotation
/// decompositions of the projection map.
pub fn build_transf_system() -> ConstraintSystem {
    let names: Vec<String> = TRANSF_STEP_FOR_STATE.iter().map(|&s| image_variable(s)).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let pair_names: Vec<(String, String)> = [0u32, 2, 4]
        .iter()
        .map(|&s| (image_variable(s), image_variable((s + 3) % 6)))
        .collect();
    let pairs: Vec<(&str, &str)> = pair_names.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let group_names: Vec<Vec<(String, Rational)>> = PROJECTION_DECOMPOSITIONS
        .iter()
        .map(|(_, parts)| {
            parts
                .iter()
                .map(|&(p, q, s)| (image_variable(s), ratio(p, q)))
                .collect()
        })
        .collect();
    let groups: Vec<Vec<(&str, Rational)>> = group_names
        .iter()
        .map(|g| g.iter().map(|(n, c)| (n.as_str(), c.clone())).collect())
        .collect();
    ConstraintSystem::new(&refs, &pairs, &groups).expect("static system is valid")
}

/// Pure states on the z–x great circle, `points` evenly spaced.
pub fn zx_grid(points: usize) -> Result<Vec<DensityOperator>> {
    (0..points)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / points as f64;
            density_from_bloch(BlochVector::new(phi.sin(), 0.0, phi.cos()))
        })
        .collect()
}

pub const TRANSF_GRID_POINTS: usize = 36;

/// Transformation noncontextuality versus the y-rotations and the
/// projection map.
pub fn transf_nogo() -> Result<Certificate> {
    let mut checks = Vec::new();
    for (name, parts) in PROJECTION_DECOMPOSITIONS {
        checks.push(PremiseCheck::new(
            format!("{name} Choi deviation"),
            decomposition_deviation(parts)?,
        ));
    }
    let grid = zx_grid(TRANSF_GRID_POINTS)?;
    for s in [0u32, 1, 2] {
        let (t, u) = (rotation_channel(s), rotation_channel(s + 3));
        let mut worst = 0.0f64;
        for rho in &grid {
            let x = apply_channel(&t, rho)?;
            let y = apply_channel(&u, rho)?;
            worst = worst.max(trace_product(&x, &y));
        }
        checks.push(PremiseCheck::new(
            format!(
                "{}(ρ) ⊥ {}(ρ) on {TRANSF_GRID_POINTS} z–x states",
                rotation_label(s),
                rotation_label(s + 3)
            ),
            worst,
        ));
    }
    let sigma_a = sigma("a").expect("known state");
    let mut worst = 0.0f64;
    for (state, &s) in STATE_NAMES.iter().zip(&TRANSF_STEP_FOR_STATE) {
        let img = apply_channel(&rotation_channel(s), &sigma_a)?;
        worst = worst.max(max_dev(img.matrix(), sigma(state).expect("known state").matrix()));
    }
    checks.push(PremiseCheck::new("T_θ(σ_a) = σ_x under the relabeling", worst));

    let sys = build_transf_system();
    let map: BTreeMap<String, String> = STATE_NAMES
        .iter()
        .zip(&TRANSF_STEP_FOR_STATE)
        .map(|(state, &s)| (image_variable(s), state.to_string()))
        .collect();
    let relabeled = sys.renamed(&map)?;
    checks.push(PremiseCheck::new(
        "relabeled system equals the preparation system",
        if relabeled.same_constraints(&build_prep_system()) {
            0.0
        } else {
            1.0
        },
    ));
    let checks = checks
        .into_iter()
        .map(|c| c.require(EXACT_TOL))
        .collect::<Result<Vec<_>>>()?;

    let mut cert = pointwise_feasibility(&sys)?;
    cert.premise_checks = checks;
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GleasonReport {
    /// `χ_{P′}(λ) = |⟨ψ|ψ′⟩|²` when `ρ_λ = |ψ⟩⟨ψ|`.
    pub chi_p_prime: f64,
    pub rho_lambda: CMatrix,
    pub contradiction: bool,
}

/// Measurement noncontextuality makes the indicator of `|ψ′⟩⟨ψ′|` at a
/// point with `χ_P = 1` equal `|⟨ψ|ψ′⟩|²`, which sharp outcome determinism
/// forbids unless the overlap is 0 or 1.
pub fn gleason_contradiction(psi: &[Complex64], psi_prime: &[Complex64], tol: f64) -> Result<GleasonReport> {
    for v in [psi, psi_prime] {
        if v.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: v.len(),
            });
        }
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > tol {
            return Err(Error::BadTrace(norm2));
        }
    }
    let rho = DensityOperator::pure(psi)?;
    let overlap: Complex64 = psi.iter().zip(psi_prime).map(|(a, b)| a.conj() * b).sum();
    let chi = overlap.norm_sqr();
    if chi <= tol {
        return Err(Error::NoContradiction("states are orthogonal".into()));
    }
    if chi >= 1.0 - tol {
        return Err(Error::NoContradiction("states coincide up to phase".into()));
    }
    Ok(GleasonReport {
        chi_p_prime: chi,
        rho_lambda: rho.matrix().clone(),
        contradiction: true,
    })
}

/// `gleason_contradiction` on two of the six named states.
pub fn gleason_named(p: &str, q: &str, tol: f64) -> Result<GleasonReport> {
    let sv = |n: &str| state_vector(n).ok_or_else(|| Error::UnknownLabel(n.to_string()));
    gleason_contradiction(&sv(p)?, &sv(q)?, tol)
}
