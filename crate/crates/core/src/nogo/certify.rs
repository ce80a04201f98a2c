//! Pointwise feasibility: can a family of nonnegative distributions satisfy
//! the disjointness and equality constraints at every ontic point and still
//! normalize?
//!
//! The per-point solution set is a union of polyhedral cones, one per
//! zero-pattern. Stage 1 lists the extreme rays of each pattern cone;
//! stage 2 asks whether nonnegative weights on those rays give every
//! variable total mass 1. Everything is exact rational arithmetic.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{nonneg_solution, nullspace, rank, Matrix};
use super::system::ConstraintSystem;
use crate::error::{Error, Result};
use crate::ontomodel::{Distribution, OntModel};
use crate::qmath::DEFAULT_TOL;
use crate::rational::{self, Coeff, Rational};

pub const MAX_DISJOINT_PAIRS: usize = 20;
pub const MAX_VARIABLES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

/// What a single zero-pattern forces at one ontic point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "conclusion")]
pub enum Conclusion {
    /// The pattern cone is `{0}`.
    #[serde(rename = "all-zero")]
    AllZero,
    /// Extreme rays of the pattern cone, one entry per variable.
    #[serde(rename = "rays")]
    Rays { rays: Vec<Vec<Coeff>> },
    /// An outcome-probability pair computed for the row (measurement tables).
    #[serde(rename = "mixed")]
    Mixed { values: Vec<Coeff> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub pattern: Vec<String>,
    #[serde(flatten)]
    pub conclusion: Conclusion,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PremiseCheck {
    pub name: String,
    pub max_deviation: f64,
}

impl PremiseCheck {
    pub fn new(name: impl Into<String>, max_deviation: f64) -> Self {
        PremiseCheck {
            name: name.into(),
            max_deviation,
        }
    }

    /// Errors with `PremiseFailed` when the deviation exceeds `tol`.
    pub fn require(self, tol: f64) -> Result<Self> {
        if !(self.max_deviation <= tol) {
            return Err(Error::PremiseFailed {
                name: self.name,
                deviation: self.max_deviation,
            });
        }
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub system: Option<ConstraintSystem>,
    pub witness: Option<OntModel>,
    pub cases: Vec<CaseRow>,
    pub premise_checks: Vec<PremiseCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One-line summary, e.g. `Infeasible (8 cases, 14 premise checks)`.
    pub fn summary(&self) -> String {
        format!(
            "{:?} ({} cases, {} premise checks{})",
            self.verdict,
            self.cases.len(),
            self.premise_checks.len(),
            match &self.witness {
                Some(w) => format!(", {}-point witness", w.space().size()),
                None => String::new(),
            }
        )
    }
}

/// Decides the system and returns a certificate for the verdict.
pub fn pointwise_feasibility(sys: &ConstraintSystem) -> Result<Certificate> {
    let n = sys.variables().len();
    if n == 0 {
        return Err(Error::InvalidSystem("degenerate system: no variables".into()));
    }
    let pairs = sys.disjoint_pairs();
    if pairs.len() > MAX_DISJOINT_PAIRS {
        return Err(Error::EnumerationBound(format!(
            "{} disjoint pairs (max {MAX_DISJOINT_PAIRS})",
            pairs.len()
        )));
    }
    if n > MAX_VARIABLES {
        return Err(Error::EnumerationBound(format!("{n} variables (max {MAX_VARIABLES})")));
    }

    let a = equality_matrix(sys);
    let rays = extreme_rays(&a, n);

    let mut cases = Vec::with_capacity(1 << pairs.len());
    let mut admissible: Vec<usize> = Vec::new();
    for zeros in zero_patterns(sys) {
        let here: Vec<usize> = (0..rays.len())
            .filter(|&r| zeros.iter().all(|&z| rays[r][z].is_zero()))
            .collect();
        for &r in &here {
            if !admissible.contains(&r) {
                admissible.push(r);
            }
        }
        let conclusion = if here.is_empty() {
            Conclusion::AllZero
        } else {
            Conclusion::Rays {
                rays: here
                    .iter()
                    .map(|&r| rays[r].iter().cloned().map(Coeff).collect())
                    .collect(),
            }
        };
        cases.push(CaseRow {
            pattern: zeros.iter().map(|&z| sys.variables()[z].clone()).collect(),
            derivation: derive(sys, &zeros),
            conclusion,
        });
    }
    admissible.sort_unstable();

    // Stage 2: Σ_r w_r · ray_r = (1, …, 1), w ≥ 0.
    let r_mat: Matrix = (0..n)
        .map(|v| admissible.iter().map(|&r| rays[r][v].clone()).collect())
        .collect();
    let ones = vec![Rational::one(); n];
    let weights = nonneg_solution(&r_mat, &ones, admissible.len());

    let mut notes = Vec::new();
    let (verdict, witness) = match weights {
        Some(w) => {
            let used: Vec<(usize, &Rational)> = admissible
                .iter()
                .zip(&w)
                .filter(|(_, w)| w.is_positive())
                .map(|(&r, w)| (r, w))
                .collect();
            notes.push(format!(
                "normalization: {} of {} admissible rays carry weight",
                used.len(),
                admissible.len()
            ));
            (Verdict::Feasible, Some(build_witness(sys, &rays, &used)?))
        }
        None => {
            notes.push(if admissible.is_empty() {
                "every zero-pattern forces the all-zero solution".to_string()
            } else {
                format!(
                    "normalization fails: no nonnegative combination of the {} admissible rays gives every variable total weight 1",
                    admissible.len()
                )
            });
            (Verdict::Infeasible, None)
        }
    };

    Ok(Certificate {
        verdict,
        system: Some(sys.clone()),
        witness,
        cases,
        premise_checks: Vec::new(),
        notes,
    })
}

/// Rows `L_0 − L_i`: all forms equal the first one.
fn equality_matrix(sys: &ConstraintSystem) -> Matrix {
    let forms = sys.equality_groups();
    let n = sys.variables().len();
    forms
        .iter()
        .skip(1)
        .map(|f| (0..n).map(|v| forms[0].coeff(v) - f.coeff(v)).collect())
        .collect()
}

/// Forced-zero variable sets in lexicographic order: pair 0 is the most
/// significant digit and digit 0 zeroes the pair's first member.
pub fn zero_patterns(sys: &ConstraintSystem) -> Vec<Vec<usize>> {
    let pairs = sys.disjoint_pairs();
    let p = pairs.len();
    (0..1usize << p)
        .map(|mask| {
            let mut zeros: Vec<usize> = pairs
                .iter()
                .enumerate()
                .map(|(k, &(x, y))| if mask >> (p - 1 - k) & 1 == 0 { x } else { y })
                .collect();
            zeros.sort_unstable();
            zeros.dedup();
            zeros
        })
        .collect()
}

/// Extreme rays of `{x ≥ 0 : Ax = 0}`, scaled so the first nonzero entry is 1.
///
/// A nonzero cone point is extreme exactly when the columns on its support
/// have a one-dimensional nullspace, so supports are enumerated directly.
/// Every pattern cone is a face of this cone, hence its rays are the ones
/// avoiding the pattern's zeros.
pub fn extreme_rays(a: &Matrix, n: usize) -> Vec<Vec<Rational>> {
    let max_support = (rank(a, n) + 1).min(n);
    let mut rays = Vec::new();
    for size in 1..=max_support {
        for support in combinations(n, size) {
            let sub: Matrix = a
                .iter()
                .map(|row| support.iter().map(|&c| row[c].clone()).collect())
                .collect();
            let ns = nullspace(&sub, size);
            if ns.len() != 1 {
                continue;
            }
            let v = &ns[0];
            let positive = v.iter().all(Signed::is_positive);
            let negative = v.iter().all(Signed::is_negative);
            if !(positive || negative) {
                continue;
            }
            let scale = v[0].recip();
            let mut ray = vec![Rational::zero(); n];
            for (&c, x) in support.iter().zip(v) {
                ray[c] = x * &scale;
            }
            rays.push(ray);
        }
    }
    rays
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn build_witness(sys: &ConstraintSystem, rays: &[Vec<Rational>], used: &[(usize, &Rational)]) -> Result<OntModel> {
    let mut model = OntModel::new(used.len())?;
    for (v, name) in sys.variables().iter().enumerate() {
        let weights = used
            .iter()
            .map(|(r, w)| rational::to_f64(&(*w * &rays[*r][v])))
            .collect();
        model.add_preparation(name, Distribution::new(weights, DEFAULT_TOL)?)?;
    }
    Ok(model)
}

/// Human-readable elimination trace for one pattern. The verdict never
/// depends on it; the ray computation is authoritative.
fn derive(sys: &ConstraintSystem, zeros: &[usize]) -> Vec<String> {
    let names = sys.variables();
    let n = names.len();
    let forms = sys.equality_groups();
    let mut zero = vec![false; n];
    let mut lines = Vec::new();
    if !zeros.is_empty() {
        for &z in zeros {
            zero[z] = true;
        }
        let z: Vec<&str> = zeros.iter().map(|&z| names[z].as_str()).collect();
        lines.push(format!("{} = 0", z.join(" = ")));
    }
    let residual = |f: usize, zero: &[bool]| -> Vec<(usize, Rational)> {
        (0..n)
            .filter(|&v| !zero[v] && !forms[f].coeff(v).is_zero())
            .map(|v| (v, forms[f].coeff(v).clone()))
            .collect()
    };
    let uniform = |terms: &[(usize, Rational)]| {
        !terms.is_empty() && (terms.iter().all(|(_, c)| c.is_positive()) || terms.iter().all(|(_, c)| c.is_negative()))
    };
    let show = |terms: Vec<(usize, Rational)>| sys.format_terms(terms.into_iter());
    if forms.len() > 1 {
        let parts: Vec<String> = (0..forms.len()).map(|f| show(residual(f, &zero))).collect();
        lines.push(format!("ν = {}", parts.join(" = ")));
    }

    let mut nu_zero = false;
    loop {
        if !nu_zero && (0..forms.len()).any(|f| residual(f, &zero).is_empty()) {
            nu_zero = true;
        }
        if nu_zero {
            let mut forced = BTreeSet::new();
            for f in 0..forms.len() {
                let r = residual(f, &zero);
                if uniform(&r) {
                    forced.extend(r.iter().map(|(v, _)| *v));
                }
            }
            if !forced.is_empty() {
                let list: Vec<String> = forced.iter().map(|&v| format!("{} = 0", names[v])).collect();
                lines.push(format!("ν = 0 ⇒ {}", list.join(", ")));
                for v in forced {
                    zero[v] = true;
                }
                continue;
            }
        }
        let mut step = None;
        'pairs: for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                let (ri, rj) = (residual(i, &zero), residual(j, &zero));
                let diff: Vec<(usize, Rational)> = (0..n)
                    .filter(|&v| !zero[v])
                    .map(|v| (v, forms[i].coeff(v) - forms[j].coeff(v)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                if uniform(&diff) {
                    step = Some((show(ri), show(rj), diff));
                    break 'pairs;
                }
            }
        }
        match step {
            Some((li, lj, diff)) => {
                let list: Vec<String> = diff.iter().map(|(v, _)| format!("{} = 0", names[*v])).collect();
                lines.push(format!("{li} = {lj} ⇒ {}", list.join(", ")));
                for (v, _) in diff {
                    zero[v] = true;
                }
            }
            None => break,
        }
    }
    if zero.iter().all(|&z| z) {
        lines.push("all-zero solution".into());
    } else {
        let open: Vec<&str> = (0..n).filter(|&v| !zero[v]).map(|v| names[v].as_str()).collect();
        lines.push(format!("free after elimination: {}", open.join(", ")));
    }
    lines
}

/// Re-checks one case row against the system by substitution: all-zero rows
/// by showing `{x ≥ 0, pattern zeros, equalities, Σx = 1}` is empty, ray
/// rows by plugging each ray in.
pub fn verify_case(sys: &ConstraintSystem, row: &CaseRow) -> Result<bool> {
    let n = sys.variables().len();
    let zeros = row
        .pattern
        .iter()
        .map(|p| sys.var_index(p).ok_or_else(|| Error::UnknownLabel(p.clone())))
        .collect::<Result<BTreeSet<usize>>>()?;
    let a = equality_matrix(sys);
    match &row.conclusion {
        Conclusion::AllZero => {
            let free: Vec<usize> = (0..n).filter(|v| !zeros.contains(v)).collect();
            let mut m: Matrix = a.iter().map(|r| free.iter().map(|&c| r[c].clone()).collect()).collect();
            let mut b = vec![Rational::zero(); m.len()];
            m.push(vec![Rational::one(); free.len()]);
            b.push(Rational::one());
            Ok(nonneg_solution(&m, &b, free.len()).is_none())
        }
        Conclusion::Rays { rays } => Ok(!rays.is_empty()
            && rays.iter().all(|ray| {
                ray.len() == n
                    && ray.iter().any(|c| !c.0.is_zero())
                    && ray.iter().all(|c| !c.0.is_negative())
                    && zeros.iter().all(|&z| ray[z].0.is_zero())
                    && a.iter()
                        .all(|r| r.iter().zip(ray).map(|(x, y)| x * &y.0).sum::<Rational>().is_zero())
            })),
        Conclusion::Mixed { values } => {
            let total: Rational = values.iter().map(|c| c.0.clone()).sum();
            let k = values.len() as i64;
            Ok(total.is_one() && !values.iter().all(|c| c.0 == rational::ratio(1, k)))
        }
    }
}

/// Checks a Feasible witness: every variable is a normalized distribution,
/// each disjoint pair never overlaps, and all forms agree at every point.
pub fn check_witness(sys: &ConstraintSystem, model: &OntModel, tol: f64) -> Result<()> {
    let size = model.space().size();
    let mus = sys
        .variables()
        .iter()
        .map(|v| model.preparation(v))
        .collect::<Result<Vec<_>>>()?;
    for lambda in 0..size {
        let at = |v: usize| mus[v].weights()[lambda];
        for &(x, y) in sys.disjoint_pairs() {
            if at(x) > tol && at(y) > tol {
                return Err(Error::InvalidModel(format!(
                    "{} and {} overlap at point {lambda}",
                    sys.variables()[x],
                    sys.variables()[y]
                )));
            }
        }
        let values: Vec<f64> = sys
            .equality_groups()
            .iter()
            .map(|f| {
                f.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(v, c)| rational::to_f64(c) * at(v))
                    .sum()
            })
            .collect();
        if let Some(first) = values.first() {
            if let Some(bad) = values.iter().find(|x| (*x - first).abs() > tol) {
                return Err(Error::InvalidModel(format!(
                    "equality forms disagree at point {lambda}: {first} vs {bad}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn half_pair() -> ConstraintSystem {
        ConstraintSystem::new(
            &["a", "A"],
            &[("a", "A")],
            &[vec![("a", ratio(1, 2)), ("A", ratio(1, 2))]],
        )
        .unwrap()
    }

    #[test]
    fn single_pair_is_feasible_with_two_points() {
        let sys = half_pair();
        let cert = pointwise_feasibility(&sys).unwrap();
        assert_eq!(cert.verdict, Verdict::Feasible);
        let w = cert.witness.as_ref().unwrap();
        assert_eq!(w.space().size(), 2);
        assert_eq!(w.preparation("a").unwrap().weights(), [1.0, 0.0]);
        assert_eq!(w.preparation("A").unwrap().weights(), [0.0, 1.0]);
        check_witness(&sys, w, 1e-12).unwrap();
        assert_eq!(cert.cases.len(), 2);
        assert_eq!(cert.cases[0].pattern, ["a"]);
    }

    #[test]
    fn lone_variable_is_feasible() {
        let sys = ConstraintSystem::new(&["x"], &[], &[]).unwrap();
        let cert = pointwise_feasibility(&sys).unwrap();
        assert_eq!(cert.verdict, Verdict::Feasible);
        assert_eq!(cert.witness.unwrap().space().size(), 1);
        assert_eq!(cert.cases.len(), 1);
    }

    #[test]
    fn errors() {
        let empty = ConstraintSystem::new(&[], &[], &[]).unwrap();
        assert!(matches!(pointwise_feasibility(&empty), Err(Error::InvalidSystem(_))));
        let names: Vec<String> = (0..42).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = refs.chunks(2).map(|c| (c[0], c[1])).collect();
        let big = ConstraintSystem::new(&refs, &pairs, &[]).unwrap();
        assert!(matches!(pointwise_feasibility(&big), Err(Error::EnumerationBound(_))));
    }

    #[test]
    fn conflicting_weights_are_infeasible() {
        // ½c = ⅓c with nothing else forces c = 0.
        let sys = ConstraintSystem::new(&["c"], &[], &[vec![("c", ratio(1, 2))], vec![("c", ratio(1, 3))]]).unwrap();
        let cert = pointwise_feasibility(&sys).unwrap();
        assert_eq!(cert.verdict, Verdict::Infeasible);
        assert_eq!(cert.cases[0].conclusion, Conclusion::AllZero);
        assert!(cert.cases[0].derivation.iter().any(|l| l == "½c = ⅓c ⇒ c = 0"));
        assert!(verify_case(&sys, &cert.cases[0]).unwrap());
    }

    #[test]
    fn rays_of_a_simple_cone() {
        // x − y = 0 over (x, y, z): rays (1,1,0) and (0,0,1).
        let a = vec![vec![ratio(1, 1), ratio(-1, 1), ratio(0, 1)]];
        let rays = extreme_rays(&a, 3);
        assert_eq!(
            rays,
            vec![
                vec![ratio(0, 1), ratio(0, 1), ratio(1, 1)],
                vec![ratio(1, 1), ratio(1, 1), ratio(0, 1)],
            ]
        );
    }

    #[test]
    fn witness_check_rejects_overlap() {
        let sys = half_pair();
        let mut m = OntModel::new(1).unwrap();
        m.add_preparation("a", Distribution::point_mass(1, 0)).unwrap();
        m.add_preparation("A", Distribution::point_mass(1, 0)).unwrap();
        assert!(check_witness(&sys, &m, 1e-12).is_err());
    }

    #[test]
    fn certificate_json_shape() {
        let cert = pointwise_feasibility(&half_pair()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json().unwrap()).unwrap();
        assert_eq!(v["verdict"], "Feasible");
        assert_eq!(v["cases"][0]["conclusion"], "rays");
        assert_eq!(v["cases"][0]["rays"][0], serde_json::json!(["0", "1"]));
        assert!(v["witness"]["preparations"]["a"].is_array());
        let back: Certificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, cert);
    }
}
