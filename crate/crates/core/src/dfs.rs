//! Four-spin cluster Hamiltonians, their exact spectra, and the two logical
//! states spanning the J = 0 subspace.
//!
//! Basis: product states |b₃b₂b₁b₀⟩ over 16 indices, bit k set meaning
//! spin k up. The first pair of the logical-state tensor products is
//! (spin 3, spin 2), the second (spin 1, spin 0).

use nalgebra::{DMatrix, SMatrix, SVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub const CLUSTER_DIM: usize = 16;
const N_SPINS: usize = 4;

type Op = SMatrix<Complex64, 16, 16>;
type Vec16 = SVector<Complex64, 16>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DfsError {
    #[error("coupling delta must be positive, got {0:e}")]
    NonPositiveDelta(f64),
    #[error("omega_eff must be nonzero and finite, got {0:e}")]
    ZeroSplitting(f64),
    #[error("interaction u must be finite, got {0:e}")]
    NonFiniteU(f64),
    #[error("eigenlabel assignment ambiguous: {0}")]
    DegeneracyResolution(String),
}

/// Dense 16×16 Hermitian operator over the 4-spin product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterOperator(Op);

impl ClusterOperator {
    pub fn matrix(&self) -> &Op {
        &self.0
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        (self.0 - self.0.adjoint()).norm()
    }

    /// Eigenvalues sorted ascending (dense Hermitian diagonalization).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0)
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn commutator_norm(&self, other: &ClusterOperator) -> f64 {
        (self.0 * other.0 - other.0 * self.0).norm()
    }

    pub fn apply(&self, state: &ClusterState) -> ClusterState {
        ClusterState(self.0 * state.0)
    }
}

/// Normalized 16-component state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterState(Vec16);

impl ClusterState {
    pub fn amplitudes(&self) -> &Vec16 {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn inner(&self, other: &ClusterState) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn expectation(&self, op: &ClusterOperator) -> f64 {
        self.0.dotc(&(op.0 * self.0)).re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

fn single_spin_op(axis: Axis, k: usize) -> Op {
    let mut m = Op::zeros();
    let bit = 1usize << k;
    for n in 0..CLUSTER_DIM {
        match axis {
            Axis::Z => {
                let sign = if n & bit != 0 { 0.5 } else { -0.5 };
                m[(n, n)] += Complex64::new(sign, 0.0);
            }
            Axis::X => {
                m[(n ^ bit, n)] += Complex64::new(0.5, 0.0);
            }
            Axis::Y => {
                if n & bit == 0 {
                    m[(n | bit, n)] += Complex64::new(0.0, -0.5);
                } else {
                    m[(n & !bit, n)] += Complex64::new(0.0, 0.5);
                }
            }
        }
    }
    m
}

fn collective_matrix(axis: Axis) -> Op {
    let mut m = Op::zeros();
    for k in 0..N_SPINS {
        m += single_spin_op(axis, k);
    }
    m
}

/// Total spin component J_α = Σ_k I_α(k).
pub fn collective_spin(axis: Axis) -> ClusterOperator {
    ClusterOperator(collective_matrix(axis))
}

fn j_squared_matrix() -> Op {
    let jx = collective_matrix(Axis::X);
    let jy = collective_matrix(Axis::Y);
    let jz = collective_matrix(Axis::Z);
    jx * jx + jy * jy + jz * jz
}

/// Total spin squared J² = Jx² + Jy² + Jz².
pub fn total_spin_squared() -> ClusterOperator {
    ClusterOperator(j_squared_matrix())
}

fn xxx_matrix(delta: f64) -> Op {
    let id = Op::identity();
    (j_squared_matrix() - id * Complex64::new(3.0, 0.0)) * Complex64::new(delta / 2.0, 0.0)
}

/// Isotropic exchange cluster (Δ/2)(J² - 3·1); spectrum Δ/2·[J(J+1) - 3].
pub fn build_xxx(delta: f64) -> Result<ClusterOperator, DfsError> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(DfsError::NonPositiveDelta(delta));
    }
    Ok(ClusterOperator(xxx_matrix(delta)))
}

fn xx0_matrix(omega_eff: f64, u: f64) -> Op {
    let jz = collective_matrix(Axis::Z);
    let j2 = j_squared_matrix();
    jz * Complex64::new(-omega_eff, 0.0) + (j2 - jz * jz) * Complex64::new(u, 0.0)
}

/// Planar-exchange cluster -ω_eff·Jz + U(J² - Jz²) with its constant shift
/// dropped; spectrum E(J, m) = -|ω_eff|·m + U(J(J+1) - m²).
pub fn build_xx0(omega_eff: f64, u: f64) -> ClusterOperator {
    ClusterOperator(xx0_matrix(omega_eff, u))
}

/// The two J = 0, m = 0 logical states: singlet⊗singlet and the
/// triplet-pair combination, mutually orthogonal and normalized.
pub fn logical_states() -> (ClusterState, ClusterState) {
    let mut zero = Vec16::zeros();
    // ½ (|01⟩-|10⟩)⊗(|01⟩-|10⟩) over (q3 q2)⊗(q1 q0)
    zero[0b0101] = Complex64::new(0.5, 0.0);
    zero[0b0110] = Complex64::new(-0.5, 0.0);
    zero[0b1001] = Complex64::new(-0.5, 0.0);
    zero[0b1010] = Complex64::new(0.5, 0.0);

    let mut one = Vec16::zeros();
    let n3 = 1.0 / 3f64.sqrt();
    one[0b1100] = Complex64::new(n3, 0.0);
    one[0b0011] = Complex64::new(n3, 0.0);
    one[0b0101] = Complex64::new(-0.5 * n3, 0.0);
    one[0b0110] = Complex64::new(-0.5 * n3, 0.0);
    one[0b1001] = Complex64::new(-0.5 * n3, 0.0);
    one[0b1010] = Complex64::new(-0.5 * n3, 0.0);

    (ClusterState(zero), ClusterState(one))
}

/// One analytic spectral entry E(J, m_J) = -|ω_eff|·m_J + U(J(J+1) - m_J²),
/// with the coefficients of |ω_eff| and U kept symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticLevel {
    pub j: u32,
    pub m_j: i32,
    pub energy: f64,
    pub degeneracy: usize,
    /// Coefficient of |ω_eff| in the energy: -m_J.
    pub omega_coeff: i32,
    /// Coefficient of U in the energy: J(J+1) - m_J².
    pub u_coeff: i32,
}

/// J-sector multiplicities of four spins 1/2: J = 0 twice, J = 1 three
/// times, J = 2 once.
const SECTOR_MULTIPLICITY: [usize; 3] = [2, 3, 1];

/// Full analytic (J, m_J) table of [`build_xx0`].
pub fn analytic_levels(omega_eff: f64, u: f64) -> Vec<AnalyticLevel> {
    let mut out = Vec::with_capacity(9);
    for j in 0..=2i32 {
        for m in -j..=j {
            let u_coeff = j * (j + 1) - m * m;
            out.push(AnalyticLevel {
                j: j as u32,
                m_j: m,
                energy: -omega_eff.abs() * m as f64 + u * u_coeff as f64,
                degeneracy: SECTOR_MULTIPLICITY[j as usize],
                omega_coeff: -m,
                u_coeff,
            });
        }
    }
    out.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.j.cmp(&b.j))
            .then(a.m_j.cmp(&b.m_j))
    });
    out
}

/// One numerically resolved level: an energy cluster carrying definite
/// (J, m_J) labels satisfying the analytic energy formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelGroup {
    pub energy: f64,
    pub j: u32,
    pub m_j: i32,
    pub degeneracy: usize,
}

/// Diagonalization report for the planar-exchange cluster.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DfsReport {
    pub omega_eff: f64,
    pub u: f64,
    pub levels: Vec<LevelGroup>,
    pub ground: LevelGroup,
    pub dfs_doublet: LevelGroup,
    /// dfs_doublet.energy - ground.energy.
    pub gap: f64,
    /// 2|ω_eff| - 2U.
    pub gap_formula: f64,
    pub gap_matches_formula: bool,
    /// Projector onto span{|0_L⟩, |1_L⟩} (real entries).
    pub projector: Vec<Vec<f64>>,
    pub projector_trace: f64,
}

fn expectation_labels(
    vectors: &DMatrix<Complex64>,
    op: &Op,
) -> (Vec<f64>, DMatrix<Complex64>) {
    // diagonalize op restricted to the span of `vectors`
    let c = vectors.ncols();
    let op_d = DMatrix::from_fn(16, 16, |i, j| op[(i, j)]);
    let restricted = vectors.adjoint() * &op_d * vectors;
    let herm = (&restricted + restricted.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    let rotated = vectors * eig.eigenvectors;
    let _ = c;
    (vals, rotated)
}

/// Diagonalizes [`build_xx0`], labels each energy cluster with (J, m_J) by
/// near-diagonalizing Jz and J² inside it, and reports the ground level,
/// the J = 0 doublet, and their gap.
pub fn dfs_report(omega_eff: f64, u: f64) -> Result<DfsReport, DfsError> {
    if !(omega_eff != 0.0 && omega_eff.is_finite()) {
        return Err(DfsError::ZeroSplitting(omega_eff));
    }
    if !u.is_finite() {
        return Err(DfsError::NonFiniteU(u));
    }
    let h = xx0_matrix(omega_eff, u);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..CLUSTER_DIM).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let evals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let range = (evals[CLUSTER_DIM - 1] - evals[0]).max(1e-300);
    let cluster_tol = 1e-8 * range;

    let jz = collective_matrix(Axis::Z);
    let j2 = j_squared_matrix();

    let mut levels: Vec<LevelGroup> = Vec::new();
    let mut start = 0usize;
    while start < CLUSTER_DIM {
        let mut end = start + 1;
        while end < CLUSTER_DIM && evals[end] - evals[end - 1] <= cluster_tol {
            end += 1;
        }
        let c = end - start;
        let energy = evals[start..end].iter().sum::<f64>() / c as f64;
        let cols = DMatrix::from_fn(16, c, |i, jc| eig.eigenvectors[(i, order[start + jc])]);

        // split by m first, then by J inside each m block
        let (m_vals, rotated) = expectation_labels(&cols, &jz);
        let mut idx = 0usize;
        while idx < c {
            let m = m_vals[idx];
            let mut idx_end = idx + 1;
            while idx_end < c && (m_vals[idx_end] - m).abs() <= 1e-6 {
                idx_end += 1;
            }
            let m_round = m.round();
            if (m - m_round).abs() > 1e-6 {
                return Err(DfsError::DegeneracyResolution(format!(
                    "Jz expectation {m} is not near an integer"
                )));
            }
            let sub = rotated.columns(idx, idx_end - idx).into_owned();
            let (jj_vals, _) = expectation_labels(&sub, &j2);
            for &jj in &jj_vals {
                let j = 0.5 * ((1.0 + 4.0 * jj).sqrt() - 1.0);
                if (j - j.round()).abs() > 1e-6 {
                    return Err(DfsError::DegeneracyResolution(format!(
                        "J² expectation {jj} is not near J(J+1)"
                    )));
                }
            }
            let mut js: Vec<i64> = jj_vals
                .iter()
                .map(|&jj| (0.5 * ((1.0 + 4.0 * jj).sqrt() - 1.0)).round() as i64)
                .collect();
            js.sort_unstable();
            js.dedup();
            for &j in &js {
                let deg = jj_vals
                    .iter()
                    .filter(|&&jj| {
                        ((0.5 * ((1.0 + 4.0 * jj).sqrt() - 1.0)).round() as i64) == j
                    })
                    .count();
                // label by the analytic formula: for ω < 0 the physical Jz
                // eigenvalue is the negative of the formula's m_J
                let m_phys = m_round as i32;
                let m_j = if omega_eff > 0.0 { m_phys } else { -m_phys };
                levels.push(LevelGroup {
                    energy,
                    j: j as u32,
                    m_j,
                    degeneracy: deg,
                });
            }
            idx = idx_end;
        }
        start = end;
    }

    levels.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.j.cmp(&b.j))
            .then(a.m_j.cmp(&b.m_j))
    });

    let ground = levels[0];
    let dfs_doublet = *levels
        .iter()
        .find(|l| l.j == 0)
        .ok_or_else(|| DfsError::DegeneracyResolution("no J = 0 level found".into()))?;
    if dfs_doublet.degeneracy != 2 {
        return Err(DfsError::DegeneracyResolution(format!(
            "J = 0 level has degeneracy {}, expected 2",
            dfs_doublet.degeneracy
        )));
    }

    let gap = dfs_doublet.energy - ground.energy;
    let gap_formula = 2.0 * omega_eff.abs() - 2.0 * u;
    let gap_matches_formula = (gap - gap_formula).abs() <= 1e-10 * gap_formula.abs().max(1.0);

    let (zero, one) = logical_states();
    let mut projector = vec![vec![0.0f64; 16]; 16];
    for i in 0..16 {
        for j in 0..16 {
            let p = zero.0[i] * zero.0[j].conj() + one.0[i] * one.0[j].conj();
            projector[i][j] = p.re;
        }
    }
    let projector_trace = (0..16).map(|i| projector[i][i]).sum();

    Ok(DfsReport {
        omega_eff,
        u,
        levels,
        ground,
        dfs_doublet,
        gap,
        gap_formula,
        gap_matches_formula,
        projector,
        projector_trace,
    })
}
