//! Positivity of the first Chern class of a homogeneous toric bundle.
//!
//! The bundle is Fano exactly when the fiber is Fano and every vertex `Q` of
//! the canonical polytope, pulled back along `τ` and shifted by `h_V`, lands
//! strictly inside the chamber:
//!
//! ```text
//! h_Q = h_V + (B|_{z(k)})⁻¹(τ*Q),      α(h_Q) > 0  for all α ∈ R_m⁺.
//! ```
//!
//! Every quantity is an exact rational; a margin of exactly zero is a failure.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::flagbase::{restricted_gram, FlagError, FlagManifold};
use crate::linalg::QMatrix;
use crate::rational::{is_integer, Rational};
use crate::rootsys::{eval_root, VectorH};
use crate::toricfiber::{Fan, FanError, Polytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("tau has {cols} columns but z(k) has dimension {dim}")]
    TauColumns { cols: usize, dim: usize },
    #[error("tau has {rows} rows but the fiber lattice has rank {fiber}")]
    TauRows { rows: usize, fiber: usize },
    #[error("z(k) basis has {got} vectors, expected {dim}")]
    BasisSize { got: usize, dim: usize },
    #[error("z(k) basis vectors are linearly dependent")]
    DependentBasis,
    #[error("no crossed nodes: a fiber of rank {0} cannot be attached")]
    NoCenter(usize),
    #[error("polytope point has {got} coordinates, fiber lattice has rank {fiber}")]
    PointDimension { got: usize, fiber: usize },
}

/// `τ` at Lie-algebra level: column `j` is the image in `N_ℚ` of `basis[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauMap {
    matrix: QMatrix,
    basis: Vec<VectorH>,
    gram_inv: QMatrix,
}

impl TauMap {
    /// `basis` defaults to the crossed-node basis of `z(k)`.
    pub fn new(
        flag: &FlagManifold,
        matrix: QMatrix,
        basis: Option<Vec<VectorH>>,
    ) -> Result<Self, BundleError> {
        let dim = flag.center_dim();
        let basis = basis.unwrap_or_else(|| flag.default_zk_basis().to_vec());
        if dim == 0 && matrix.rows() > 0 {
            return Err(BundleError::NoCenter(matrix.rows()));
        }
        if basis.len() != dim {
            return Err(BundleError::BasisSize {
                got: basis.len(),
                dim,
            });
        }
        for b in &basis {
            flag.ensure_in_center(b)?;
        }
        if matrix.cols() != dim {
            return Err(BundleError::TauColumns {
                cols: matrix.cols(),
                dim,
            });
        }
        let gram_inv = restricted_gram(flag.root_system(), &basis)
            .inverse()
            .ok_or(BundleError::DependentBasis)?;
        Ok(Self {
            matrix,
            basis,
            gram_inv,
        })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &[VectorH] {
        &self.basis
    }

    /// Rank `m` of the fiber lattice.
    pub fn fiber_rank(&self) -> usize {
        self.matrix.rows()
    }

    /// Surjectivity at Lie-algebra level.
    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.matrix.rows()
    }

    /// Replaces the basis `b` by `b·S` and the matrix `T` by `T·S`; the map is unchanged.
    pub fn change_basis(&self, flag: &FlagManifold, s: &QMatrix) -> Result<TauMap, BundleError> {
        let rank = flag.rank();
        let old = QMatrix::from_columns(
            rank,
            &self.basis.iter().map(|b| b.0.clone()).collect::<Vec<_>>(),
        );
        let new = old.mul(s);
        let basis = (0..new.cols()).map(|j| VectorH(new.column(j))).collect();
        TauMap::new(flag, self.matrix.mul(s), Some(basis))
    }

    /// `τ*Q` on the declared basis: `(τ*Q)(b_j) = ⟨Q, T e_j⟩`.
    fn pull_back_functional(&self, q: &[Rational]) -> Vec<Rational> {
        self.matrix.transpose().mul_vec(q)
    }
}

/// `h_Q = h_V + (B|_{z(k)})⁻¹(τ*Q)`.
pub fn pullback_point(
    flag: &FlagManifold,
    tau: &TauMap,
    q: &[Rational],
) -> Result<VectorH, BundleError> {
    if q.len() != tau.fiber_rank() {
        return Err(BundleError::PointDimension {
            got: q.len(),
            fiber: tau.fiber_rank(),
        });
    }
    let coeffs = tau.gram_inv.mul_vec(&tau.pull_back_functional(q));
    let mut h = flag.h_v().clone();
    for (c, b) in coeffs.iter().zip(&tau.basis) {
        if !c.is_zero() {
            h.add_scaled(c, b);
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Margin {
    /// Index of the polytope vertex.
    pub vertex: usize,
    /// Index into the root list of the flag's root system.
    pub root: usize,
    pub value: Rational,
}

/// `α(h_Q)` for every vertex `Q` and every `α ∈ R_m⁺`, ordered by vertex then root.
pub fn fano_margins(
    flag: &FlagManifold,
    tau: &TauMap,
    polytope: &Polytope,
) -> Result<Vec<Margin>, BundleError> {
    let mut out = Vec::with_capacity(polytope.len() * flag.r_m_plus().len());
    for (vertex, q) in polytope.points().enumerate() {
        let h = pullback_point(flag, tau, q)?;
        for &root in flag.r_m_plus() {
            out.push(Margin {
                vertex,
                root,
                value: eval_root(flag.root(root), &h),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoVerdict {
    pub fiber_fano: bool,
    pub tau_surjective: bool,
    pub polytope: Polytope,
    pub margins: Vec<Margin>,
    pub violations: Vec<Margin>,
    pub is_fano: bool,
}

impl FanoVerdict {
    pub fn min_margin(&self) -> Option<&Rational> {
        self.margins.iter().map(|m| &m.value).min()
    }
}

pub fn fano_check(
    flag: &FlagManifold,
    fan: &Fan,
    tau: &TauMap,
) -> Result<FanoVerdict, BundleError> {
    if fan.dim() != tau.fiber_rank() {
        return Err(BundleError::TauRows {
            rows: tau.fiber_rank(),
            fiber: fan.dim(),
        });
    }
    let fiber_fano = fan.is_fano()?;
    let polytope = fan.canonical_polytope()?;
    let margins = if fan.dim() == 0 {
        Vec::new()
    } else {
        fano_margins(flag, tau, &polytope)?
    };
    let violations: Vec<Margin> = margins
        .iter()
        .filter(|m| !m.value.is_positive())
        .cloned()
        .collect();
    Ok(FanoVerdict {
        fiber_fano,
        tau_surjective: tau.is_surjective(),
        is_fano: fiber_fano && violations.is_empty(),
        polytope,
        margins,
        violations,
    })
}

/// Whether `τ` sends each given generator of the cocharacter lattice of the
/// center into `N`. `None` when no generators are supplied.
pub fn check_tau_integrality(
    flag: &FlagManifold,
    tau: &TauMap,
    cocharacter_basis: Option<&[VectorH]>,
) -> Result<Option<bool>, BundleError> {
    let Some(gens) = cocharacter_basis else {
        return Ok(None);
    };
    for g in gens {
        flag.ensure_in_center(g)?;
    }
    for g in gens {
        let coeffs = flag.express_in_zk(g, tau.basis())?;
        if !tau.matrix.mul_vec(&coeffs).iter().all(is_integer) {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}
