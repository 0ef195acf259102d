//! Assembly of semi-discrete systems from 1D operator sets.
//!
//! The free surface condition is built in either strongly (rows, columns and
//! identity-factor entries that touch surface-constrained stress unknowns are
//! zeroed) or weakly (penalty terms folded into the velocity-equation
//! operators). Weak modifications are formed in exact rationals so the
//! modified-operator identity `AN*D~M + (AM*D~N)^T = 0` can be checked
//! bit-exactly before the single conversion to floating point.

mod acoustic;
mod elastic;
mod one_d;
mod ops;

pub use acoustic::{assemble_2d_acoustic, SystemAcoustic2d};
pub use elastic::{
    assemble_2d_elastic, check_elastic_requirements, ElasticSets, RequirementsReport,
    SystemElastic2d,
};
pub use one_d::{assemble_1d, assemble_1d_mcolumn, System1d};
pub use ops::Op1d;

use crate::medium::MediumError;
use crate::operators::{OperatorError, OperatorSet1d, Variant};
use crate::rational::RationalMatrix;
use thiserror::Error;

/// How the free surface is imposed in an assembled system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcMode {
    Strong,
    Weak,
}

/// 1D surface treatments. `MColumn` is the flipped arrangement with the
/// velocity on the N-grid and the stress on the M-grid, closed by the
/// truncated intertwined rows; it needs no reset and no penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bc1d {
    Strong,
    Weak,
    MColumn,
}

impl Bc1d {
    pub fn mode(self) -> BcMode {
        match self {
            Bc1d::Weak => BcMode::Weak,
            _ => BcMode::Strong,
        }
    }
}

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Medium(#[from] MediumError),
    #[error("grid spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error("the M-column arrangement requires the intertwined variant")]
    MColumnVariant,
    #[error("operator sets are incompatible: {0}")]
    Incompatible(String),
}

/// Discrete unknowns across all equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarId {
    V,
    Sigma,
    Vx,
    Vy,
    Sxx,
    Sxy,
    Syy,
}

impl VarId {
    pub fn name(self) -> &'static str {
        match self {
            VarId::V => "v",
            VarId::Sigma => "sigma",
            VarId::Vx => "vx",
            VarId::Vy => "vy",
            VarId::Sxx => "sxx",
            VarId::Sxy => "sxy",
            VarId::Syy => "syy",
        }
    }

    pub fn is_velocity(self) -> bool {
        matches!(self, VarId::V | VarId::Vx | VarId::Vy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisGrid {
    N,
    M,
}

impl AxisGrid {
    pub fn offset(self) -> f64 {
        match self {
            AxisGrid::N => 0.0,
            AxisGrid::M => 0.5,
        }
    }
}

/// Shape and grid placement of one unknown.
#[derive(Debug, Clone)]
pub struct VarDesc {
    pub id: VarId,
    pub nx: usize,
    pub ny: usize,
    pub grid_x: AxisGrid,
    pub grid_y: AxisGrid,
}

impl VarDesc {
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny + iy
    }
}

/// Weak modification of `DN`: `D~N = DN + AM^-1 (PL EL^T - PR ER^T)`,
/// exact. Only the first and last columns change.
pub fn weak_modified_dn(set: &OperatorSet1d) -> Result<RationalMatrix, OperatorError> {
    let (pl, pr) = set.projection_vectors()?;
    let mut dn = set.dn.clone();
    let n = set.n_count;
    for i in 0..set.m_count {
        let inv_am = set.am[i].recip();
        dn.set(i, 0, dn.get(i, 0) + pl[i] * inv_am);
        dn.set(i, n - 1, dn.get(i, n - 1) - pr[i] * inv_am);
    }
    Ok(dn)
}

/// Weak modification of `DM` for the flipped pairing (stress on the M-grid):
/// `D~M = DM + AN^-1 (EL PL^T - ER PR^T)`. Only the first and last rows change.
pub fn weak_modified_dm(set: &OperatorSet1d) -> Result<RationalMatrix, OperatorError> {
    let (pl, pr) = set.projection_vectors()?;
    let mut dm = set.dm.clone();
    let n = set.n_count;
    let inv_an0 = set.an[0].recip();
    let inv_ann = set.an[n - 1].recip();
    for j in 0..set.m_count {
        dm.set(0, j, dm.get(0, j) + pl[j] * inv_an0);
        dm.set(n - 1, j, dm.get(n - 1, j) - pr[j] * inv_ann);
    }
    Ok(dm)
}

/// `AN*DM + (AM*DN)^T` for an arbitrary operator pair sharing `set`'s norms.
pub fn pair_q(
    an: &[crate::rational::Rational],
    am: &[crate::rational::Rational],
    dm: &RationalMatrix,
    dn: &RationalMatrix,
) -> RationalMatrix {
    let n = an.len();
    let m = am.len();
    let mut q = RationalMatrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            q.set(i, j, an[i] * dm.get(i, j) + am[j] * dn.get(j, i));
        }
    }
    q
}

/// One assembled system of any of the three supported equations.
pub enum SemiDiscreteSystem {
    Wave1d(System1d),
    Acoustic2d(SystemAcoustic2d),
    Elastic2d(SystemElastic2d),
}

/// Scratch buffers for rate evaluation; shape depends on the system.
pub struct Scratch {
    pub bufs: Vec<Vec<f64>>,
}

impl SemiDiscreteSystem {
    pub fn velocity_vars(&self) -> Vec<VarDesc> {
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.velocity_vars(),
            SemiDiscreteSystem::Acoustic2d(s) => s.velocity_vars(),
            SemiDiscreteSystem::Elastic2d(s) => s.velocity_vars(),
        }
    }

    pub fn stress_vars(&self) -> Vec<VarDesc> {
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.stress_vars(),
            SemiDiscreteSystem::Acoustic2d(s) => s.stress_vars(),
            SemiDiscreteSystem::Elastic2d(s) => s.stress_vars(),
        }
    }

    pub fn var(&self, id: VarId) -> Option<VarDesc> {
        self.velocity_vars()
            .into_iter()
            .chain(self.stress_vars())
            .find(|v| v.id == id)
    }

    pub fn new_scratch(&self) -> Scratch {
        match self {
            SemiDiscreteSystem::Elastic2d(s) => Scratch {
                bufs: vec![vec![0.0; s.mx * s.my], vec![0.0; s.mx * s.my]],
            },
            _ => Scratch { bufs: Vec::new() },
        }
    }

    /// Velocity rates (time derivatives) from the stress fields.
    pub fn velocity_rates(&self, stress: &[Vec<f64>], out: &mut [Vec<f64>]) {
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.velocity_rate(&stress[0], &mut out[0]),
            SemiDiscreteSystem::Acoustic2d(s) => {
                s.velocity_rates(&stress[0], &mut out[0], &mut out[1])
            }
            SemiDiscreteSystem::Elastic2d(s) => {
                s.velocity_rates(&stress[0], &stress[1], &stress[2], &mut out[0], &mut out[1])
            }
        }
    }

    /// Stress rates from the velocity fields.
    pub fn stress_rates(&self, vel: &[Vec<f64>], out: &mut [Vec<f64>], scratch: &mut Scratch) {
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.stress_rate(&vel[0], &mut out[0]),
            SemiDiscreteSystem::Acoustic2d(s) => s.stress_rate(&vel[0], &vel[1], &mut out[0]),
            SemiDiscreteSystem::Elastic2d(s) => {
                let (x, rest) = scratch.bufs.split_at_mut(1);
                let (sxx, rest_out) = out.split_at_mut(1);
                let (sxy, syy) = rest_out.split_at_mut(1);
                s.stress_rates(
                    &vel[0],
                    &vel[1],
                    &mut sxx[0],
                    &mut sxy[0],
                    &mut syy[0],
                    &mut x[0],
                    &mut rest[0],
                );
            }
        }
    }

    /// Discrete energy of a state, physical scaling included.
    pub fn energy(&self, vel: &[Vec<f64>], stress: &[Vec<f64>]) -> f64 {
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.energy(&vel[0], &stress[0]),
            SemiDiscreteSystem::Acoustic2d(s) => s.energy(vel, stress),
            SemiDiscreteSystem::Elastic2d(s) => s.energy(vel, stress),
        }
    }

    /// `dE/dt` evaluated through the right-hand sides, with the magnitude
    /// scale of its constituent terms for relative comparisons.
    pub fn energy_derivative(&self, vel: &[Vec<f64>], stress: &[Vec<f64>]) -> (f64, f64) {
        let vdesc = self.velocity_vars();
        let sdesc = self.stress_vars();
        let mut vrates: Vec<Vec<f64>> = vdesc.iter().map(|d| vec![0.0; d.len()]).collect();
        let mut srates: Vec<Vec<f64>> = sdesc.iter().map(|d| vec![0.0; d.len()]).collect();
        let mut scratch = self.new_scratch();
        self.velocity_rates(stress, &mut vrates);
        self.stress_rates(vel, &mut srates, &mut scratch);
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.energy_derivative(vel, stress, &vrates, &srates),
            SemiDiscreteSystem::Acoustic2d(s) => s.energy_derivative(vel, stress, &vrates, &srates),
            SemiDiscreteSystem::Elastic2d(s) => s.energy_derivative(vel, stress, &vrates, &srates),
        }
    }

    /// Product of the unit-spacing norm weights at every point of `id`'s grid.
    pub fn norm_weights(&self, id: VarId) -> &[f64] {
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.norm_weights(id),
            SemiDiscreteSystem::Acoustic2d(s) => s.norm_weights(id),
            SemiDiscreteSystem::Elastic2d(s) => s.norm_weights(id),
        }
    }

    /// Material coefficient entering the energy quadratic form for `id`.
    pub fn material(&self, id: VarId) -> &[f64] {
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.material(id),
            SemiDiscreteSystem::Acoustic2d(s) => s.material(id),
            SemiDiscreteSystem::Elastic2d(s) => s.material(id),
        }
    }

    /// dx (1D) or dx*dy (2D).
    pub fn cell_volume(&self) -> f64 {
        match self {
            SemiDiscreteSystem::Wave1d(s) => s.dx,
            SemiDiscreteSystem::Acoustic2d(s) => s.dx * s.dy,
            SemiDiscreteSystem::Elastic2d(s) => s.dx * s.dy,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            SemiDiscreteSystem::Wave1d(_) => 1,
            _ => 2,
        }
    }

    /// True when the unknown at `(ix, iy)` is pinned to zero by a strong
    /// surface treatment and must not carry a source.
    pub fn is_constrained_stress_point(&self, id: VarId, ix: usize, iy: usize) -> bool {
        match self {
            SemiDiscreteSystem::Wave1d(s) => {
                s.bc == Bc1d::Strong && id == VarId::Sigma && (ix == 0 || ix == s.s_len - 1)
            }
            SemiDiscreteSystem::Acoustic2d(s) => {
                s.bc == BcMode::Strong
                    && id == VarId::Sigma
                    && (ix == 0 || ix == s.nx - 1 || iy == 0 || iy == s.ny - 1)
            }
            SemiDiscreteSystem::Elastic2d(s) => {
                s.bc == BcMode::Strong
                    && id == VarId::Sxy
                    && (ix == 0 || ix == s.nx - 1 || iy == 0 || iy == s.ny - 1)
            }
        }
    }

    /// Physical coordinates of the grid point `(ix, iy)` of variable `id`.
    pub fn coords(&self, desc: &VarDesc, ix: usize, iy: usize) -> (f64, f64) {
        match self {
            SemiDiscreteSystem::Wave1d(s) => {
                (s.x_left + (ix as f64 + desc.grid_x.offset()) * s.dx, 0.0)
            }
            SemiDiscreteSystem::Acoustic2d(s) => (
                s.x0 + (ix as f64 + desc.grid_x.offset()) * s.dx,
                s.y0 + (iy as f64 + desc.grid_y.offset()) * s.dy,
            ),
            SemiDiscreteSystem::Elastic2d(s) => (
                s.x0 + (ix as f64 + desc.grid_x.offset()) * s.dx,
                s.y0 + (iy as f64 + desc.grid_y.offset()) * s.dy,
            ),
        }
    }

    /// Variant of the free-surface treatment, reported in manifests.
    pub fn bc_label(&self) -> &'static str {
        match self {
            SemiDiscreteSystem::Wave1d(s) => match s.bc {
                Bc1d::Strong => "strong",
                Bc1d::Weak => "weak",
                Bc1d::MColumn => "mcolumn",
            },
            SemiDiscreteSystem::Acoustic2d(s) => match s.bc {
                BcMode::Strong => "strong",
                BcMode::Weak => "weak",
            },
            SemiDiscreteSystem::Elastic2d(s) => match s.bc {
                BcMode::Strong => "strong",
                BcMode::Weak => "weak",
            },
        }
    }
}

/// Zero-ended identity mask for a strong N-grid axis.
pub(crate) fn strong_mask(n: usize) -> Vec<f64> {
    let mut m = vec![1.0; n];
    m[0] = 0.0;
    m[n - 1] = 0.0;
    m
}

pub(crate) fn to_f64(v: &[crate::rational::Rational]) -> Vec<f64> {
    v.iter().map(|r| r.to_f64()).collect()
}

/// Consistency of Extrapolating/Intertwined pairs used on one axis: shared
/// norms and shared `DN`.
pub(crate) fn check_shared(
    a: &OperatorSet1d,
    b: &OperatorSet1d,
    axis: &str,
) -> Result<(), AssemblyError> {
    if a.n_count != b.n_count {
        return Err(AssemblyError::Incompatible(format!(
            "{axis}: size mismatch {} vs {}",
            a.n_count, b.n_count
        )));
    }
    if a.am != b.am || a.an != b.an {
        return Err(AssemblyError::Incompatible(format!(
            "{axis}: norm matrices differ between flavors"
        )));
    }
    if a.dn != b.dn {
        return Err(AssemblyError::Incompatible(format!(
            "{axis}: DN differs between flavors"
        )));
    }
    Ok(())
}

pub(crate) fn require_variant(
    set: &OperatorSet1d,
    variant: Variant,
    role: &str,
) -> Result<(), AssemblyError> {
    if set.variant != variant {
        return Err(AssemblyError::Incompatible(format!(
            "{role} must use the {variant:?} variant"
        )));
    }
    Ok(())
}
