//! Dense complex matrices and the finite-dimensional quantum objects built
//! on them: density operators, effects, POVMs, Kraus channels, Bloch
//! vectors and Choi matrices.
//!
//! Everything is double precision. Validity checks use [`DEFAULT_TOL`];
//! algebraic identities between the qubit constants hold to [`EXACT_TOL`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance for validity checks (positivity, normalization, completeness).
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance for identities that hold to machine precision.
pub const EXACT_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape);
        }
        Ok(CMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        CMatrix { dim, data }
    }

    /// The projector `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &[Complex64]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    /// The matrix unit `|i⟩⟨j|`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.data[i * dim + j] = ONE;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference; infinite when dimensions differ.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (m, n) = (self.dim, other.dim);
        Self::from_fn(m * n, |r, c| self.get(r / n, c / n) * other.get(r % n, c % n))
    }

    /// `‖U U† − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (self + &self.adjoint()).scale_real(0.5);
        let m = DMatrix::from_fn(self.dim, self.dim, |i, j| h.get(i, j));
        let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    fn check_same_dim(&self, other: &CMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        CMatrix::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum())
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| {
                    if z.im.abs() < EXACT_TOL {
                        format!("{:+.4}", z.re)
                    } else {
                        format!("{:+.4}{:+.4}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

// Complex numbers are `[re, im]`, matrices row-major nested arrays.
impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self.rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        CMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// Positive, unit-trace operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::BadTrace(tr.re));
        }
        let min = matrix.hermitian_eigenvalues()[0];
        if min < -tol {
            return Err(Error::NotPositive(min));
        }
        Ok(DensityOperator { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Parse("zero state vector".into()));
        }
        let psi: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::projector(&psi), DEFAULT_TOL)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DensityOperator::new(CMatrix::deserialize(d)?, DEFAULT_TOL).map_err(D::Error::custom)
    }
}

/// Positive operator bounded by the identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Effect {
    matrix: CMatrix,
}

impl Effect {
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian(dev));
        }
        let eig = matrix.hermitian_eigenvalues();
        let (lo, hi) = (eig[0], eig[eig.len() - 1]);
        if lo < -tol || hi > 1.0 + tol {
            return Err(Error::EffectOutOfRange(lo, hi));
        }
        Ok(Effect { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }
}

impl<'de> Deserialize<'de> for Effect {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Effect::new(CMatrix::deserialize(d)?, DEFAULT_TOL).map_err(D::Error::custom)
    }
}

/// Ordered effects summing to the identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Povm {
    effects: Vec<Effect>,
}

impl Povm {
    pub fn new(effects: Vec<Effect>, tol: f64) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidPartition("POVM needs at least one outcome".into()))?;
        let dim = first.dim();
        let mut sum = CMatrix::zeros(dim);
        for e in &effects {
            first.matrix.check_same_dim(&e.matrix)?;
            sum = &sum + &e.matrix;
        }
        let dev = sum.max_abs_diff(&CMatrix::identity(dim));
        if dev > tol {
            return Err(Error::NotComplete(dev));
        }
        Ok(Povm { effects })
    }

    /// Validates each matrix as an effect, then completeness.
    pub fn from_matrices(matrices: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let effects = matrices
            .into_iter()
            .map(|m| Effect::new(m, tol))
            .collect::<Result<Vec<_>>>()?;
        Self::new(effects, tol)
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn outcome_count(&self) -> usize {
        self.effects.len()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let effects = Vec::<Effect>::deserialize(d)?;
        Povm::new(effects, DEFAULT_TOL).map_err(D::Error::custom)
    }
}

/// Operator-sum representation `T(ρ) = Σ W ρ W†` of a trace-preserving map.
/// Zero Kraus operators are allowed.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct KrausChannel {
    kraus_ops: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let first = kraus_ops
            .first()
            .ok_or_else(|| Error::InvalidModel("channel needs at least one Kraus operator".into()))?;
        let dim = first.dim;
        let mut sum = CMatrix::zeros(dim);
        for w in &kraus_ops {
            first.check_same_dim(w)?;
            sum = &sum + &(&w.adjoint() * w);
        }
        let dev = sum.max_abs_diff(&CMatrix::identity(dim));
        if dev > tol {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(KrausChannel { kraus_ops })
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel {
            kraus_ops: vec![CMatrix::identity(dim)],
        }
    }

    /// Conjugation by a unitary.
    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u], DEFAULT_TOL)
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus_ops
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].dim
    }

    /// Applies the operator sum to an arbitrary matrix (not just states).
    pub fn apply(&self, m: &CMatrix) -> Result<CMatrix> {
        self.kraus_ops[0].check_same_dim(m)?;
        Ok(self
            .kraus_ops
            .iter()
            .fold(CMatrix::zeros(m.dim), |acc, w| &acc + &(&(w * m) * &w.adjoint())))
    }
}

impl<'de> Deserialize<'de> for KrausChannel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ops = Vec::<CMatrix>::deserialize(d)?;
        KrausChannel::new(ops, DEFAULT_TOL).map_err(D::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Choi matrix in the unnormalized convention `Σ_ij T(|i⟩⟨j|) ⊗ |i⟩⟨j|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ChoiMatrix {
    matrix: CMatrix,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Pauli matrices in the computational basis.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows(vec![
        vec![ZERO, Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), ZERO],
    ])
    .unwrap()
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
}

/// Born rule `Re Tr(ρE)`, snapped into `[0, 1]` when it lands within
/// [`DEFAULT_TOL`] outside.
pub fn born_probability(rho: &DensityOperator, e: &Effect) -> Result<f64> {
    rho.matrix.check_same_dim(&e.matrix)?;
    let tr = (&rho.matrix * &e.matrix).trace();
    if tr.im.abs() > DEFAULT_TOL {
        return Err(Error::ImaginaryProbability(tr.im));
    }
    let p = tr.re;
    Ok(if (-DEFAULT_TOL..0.0).contains(&p) {
        0.0
    } else if p > 1.0 && p <= 1.0 + DEFAULT_TOL {
        1.0
    } else {
        p
    })
}

pub fn is_positive_semidefinite(m: &CMatrix, tol: f64) -> Result<bool> {
    let dev = m.hermiticity_deviation();
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    Ok(m.hermitian_eigenvalues()[0] >= -tol)
}

/// `ρ = ½(I + xX + yY + zZ)`.
pub fn density_from_bloch(r: BlochVector) -> Result<DensityOperator> {
    let norm = r.norm();
    if norm > 1.0 + DEFAULT_TOL {
        return Err(Error::OutsideBlochBall(norm));
    }
    let m = &(&(&CMatrix::identity(2) + &pauli_x().scale_real(r.x)) + &pauli_y().scale_real(r.y))
        + &pauli_z().scale_real(r.z);
    DensityOperator::new(m.scale_real(0.5), DEFAULT_TOL)
}

pub fn bloch_from_density(rho: &DensityOperator) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let m = &rho.matrix;
    Ok(BlochVector {
        x: 2.0 * m.get(1, 0).re,
        y: 2.0 * m.get(1, 0).im,
        z: (m.get(0, 0) - m.get(1, 1)).re,
    })
}

pub fn apply_channel(k: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    DensityOperator::new(k.apply(&rho.matrix)?, DEFAULT_TOL)
}

/// Rotation by `theta` about the Bloch y axis.
pub fn unitary_rotation_y(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    CMatrix::from_real(&[&[c, -s], &[s, c]]).unwrap()
}

pub fn choi_matrix(k: &KrausChannel) -> ChoiMatrix {
    let d = k.dim();
    let mut c = CMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            let e = CMatrix::unit(d, i, j);
            let out = k.apply(&e).expect("unit matrix has channel dimension");
            c = &c + &out.kron(&e);
        }
    }
    ChoiMatrix { matrix: c }
}

/// Maximum entrywise Choi-matrix difference between two channels.
pub fn choi_deviation(a: &KrausChannel, b: &KrausChannel) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(choi_matrix(a).matrix.max_abs_diff(&choi_matrix(b).matrix))
}

pub fn channels_equal(a: &KrausChannel, b: &KrausChannel, tol: f64) -> Result<bool> {
    Ok(choi_deviation(a, b)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sigma_a() -> DensityOperator {
        DensityOperator::new(CMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap(), 1e-12).unwrap()
    }

    fn sigma_cap_a() -> DensityOperator {
        DensityOperator::new(CMatrix::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]).unwrap(), 1e-12).unwrap()
    }

    fn sigma_b() -> DensityOperator {
        let r = 3f64.sqrt() / 4.0;
        DensityOperator::new(CMatrix::from_real(&[&[0.25, r], &[r, 0.75]]).unwrap(), 1e-12).unwrap()
    }

    fn as_effect(rho: &DensityOperator) -> Effect {
        Effect::new(rho.matrix().clone(), DEFAULT_TOL).unwrap()
    }

    #[test]
    fn born_orthogonal_pair_is_zero() {
        assert_eq!(born_probability(&sigma_a(), &as_effect(&sigma_cap_a())).unwrap(), 0.0);
    }

    #[test]
    fn born_half_identity_is_half() {
        let half = Effect::new(CMatrix::identity(2).scale_real(0.5), DEFAULT_TOL).unwrap();
        for rho in [sigma_a(), sigma_b(), DensityOperator::maximally_mixed(2)] {
            assert!((born_probability(&rho, &half).unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn born_a_on_b_is_quarter() {
        let p = born_probability(&sigma_a(), &as_effect(&sigma_b())).unwrap();
        assert!((p - 0.25).abs() < 1e-15);
    }

    #[test]
    fn born_dimension_mismatch() {
        let e = Effect::new(CMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert!(matches!(
            born_probability(&sigma_a(), &e),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psd_examples() {
        assert!(is_positive_semidefinite(&CMatrix::identity(2), 1e-9).unwrap());
        let m = CMatrix::from_real(&[&[1.0, 0.0], &[0.0, -0.1]]).unwrap();
        assert!(!is_positive_semidefinite(&m, 1e-9).unwrap());
        assert!(is_positive_semidefinite(sigma_b().matrix(), 1e-9).unwrap());
    }

    #[test]
    fn psd_rejects_non_hermitian() {
        let m = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            is_positive_semidefinite(&m, 1e-9),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn bloch_round_trip_examples() {
        let up = density_from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!(up.matrix().max_abs_diff(sigma_a().matrix()) < 1e-15);
        let mid = density_from_bloch(BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!(mid.matrix().max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
        let b = bloch_from_density(&sigma_b()).unwrap();
        assert!(b.distance(&BlochVector::new(3f64.sqrt() / 2.0, 0.0, -0.5)) < 1e-15);
    }

    #[test]
    fn bloch_outside_ball_rejected() {
        assert!(matches!(
            density_from_bloch(BlochVector::new(1.0, 1.0, 0.0)),
            Err(Error::OutsideBlochBall(_))
        ));
        let rho3 = DensityOperator::maximally_mixed(3);
        assert!(bloch_from_density(&rho3).is_err());
    }

    #[test]
    fn y_rotation_examples() {
        assert_eq!(unitary_rotation_y(0.0), CMatrix::identity(2));
        let u = unitary_rotation_y(PI);
        let expected = CMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        assert!(u.max_abs_diff(&expected) < 1e-15);
        let full = unitary_rotation_y(2.0 * PI);
        assert!(full.max_abs_diff(&CMatrix::identity(2).scale_real(-1.0)) < 1e-15);
        let k = KrausChannel::unitary(full).unwrap();
        assert!(channels_equal(&k, &KrausChannel::identity(2), 1e-12).unwrap());
    }

    #[test]
    fn channel_examples() {
        let id = KrausChannel::identity(2);
        let out = apply_channel(&id, &sigma_b()).unwrap();
        assert!(out.matrix().max_abs_diff(sigma_b().matrix()) < 1e-15);

        let half = 0.5f64.sqrt();
        let t = KrausChannel::new(
            vec![
                unitary_rotation_y(0.0).scale_real(half),
                unitary_rotation_y(PI).scale_real(half),
            ],
            DEFAULT_TOL,
        )
        .unwrap();
        let mixed = apply_channel(&t, &sigma_a()).unwrap();
        assert!(mixed.matrix().max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);

        let t_pi = KrausChannel::unitary(unitary_rotation_y(PI)).unwrap();
        let flipped = apply_channel(&t_pi, &sigma_a()).unwrap();
        assert!(flipped.matrix().max_abs_diff(sigma_cap_a().matrix()) < 1e-15);
    }

    #[test]
    fn non_trace_preserving_rejected() {
        let w = CMatrix::identity(2).scale_real(0.9);
        assert!(matches!(
            KrausChannel::new(vec![w], DEFAULT_TOL),
            Err(Error::NotTracePreserving(_))
        ));
    }

    #[test]
    fn choi_identity_channel() {
        let c = choi_matrix(&KrausChannel::identity(2));
        let m = c.matrix();
        assert!((m.trace().re - 2.0).abs() < 1e-15);
        // Σ_ij |i⟩⟨j| ⊗ |i⟩⟨j| has ones at (ii, jj) in the 4×4 layout.
        for r in 0..4 {
            for col in 0..4 {
                let expected = if r % 3 == 0 && col % 3 == 0 { 1.0 } else { 0.0 };
                assert_eq!(m.get(r, col).re, expected);
            }
        }
        let eig = m.hermitian_eigenvalues();
        assert!(eig[..3].iter().all(|e| e.abs() < 1e-12) && (eig[3] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn choi_fully_depolarizing() {
        // Kraus set {X, Y, Z, I}/2 sends every state to I/2.
        let ops = vec![
            CMatrix::identity(2).scale_real(0.5),
            pauli_x().scale_real(0.5),
            pauli_y().scale_real(0.5),
            pauli_z().scale_real(0.5),
        ];
        let k = KrausChannel::new(ops, DEFAULT_TOL).unwrap();
        let c = choi_matrix(&k);
        assert!(c.matrix().max_abs_diff(&CMatrix::identity(4).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn zero_kraus_operator_changes_nothing() {
        let u = unitary_rotation_y(0.7);
        let a = KrausChannel::unitary(u.clone()).unwrap();
        let b = KrausChannel::new(vec![u, CMatrix::zeros(2)], DEFAULT_TOL).unwrap();
        assert!(channels_equal(&a, &b, 1e-15).unwrap());
    }

    #[test]
    fn distinct_rotations_differ() {
        let t0 = KrausChannel::identity(2);
        let tpi = KrausChannel::unitary(unitary_rotation_y(PI)).unwrap();
        assert!(!channels_equal(&t0, &tpi, 1e-9).unwrap());
        let a = apply_channel(&t0, &sigma_a()).unwrap();
        let b = apply_channel(&tpi, &sigma_a()).unwrap();
        assert!((a.matrix() * b.matrix()).max_abs() < 1e-15);
    }

    #[test]
    fn povm_requires_completeness() {
        let e = Effect::new(CMatrix::identity(2).scale_real(0.5), DEFAULT_TOL).unwrap();
        assert!(Povm::new(vec![e.clone(), e.clone()], DEFAULT_TOL).is_ok());
        assert!(matches!(Povm::new(vec![e], DEFAULT_TOL), Err(Error::NotComplete(_))));
        assert!(Povm::new(vec![], DEFAULT_TOL).is_err());
    }

    #[test]
    fn json_uses_pairs() {
        let json = serde_json::to_string(&sigma_b()).unwrap();
        assert!(json.starts_with("[[[0.25,0.0],"));
        let back: DensityOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sigma_b());
    }
}
