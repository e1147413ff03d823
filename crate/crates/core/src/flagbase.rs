//! Painted Dynkin diagrams and the flag manifolds they describe.
//!
//! A painting crosses some simple nodes. Roots supported on the uncrossed
//! nodes form `R_o` (the roots of the isotropy); the remaining positive roots
//! form `R_m⁺` and fix the invariant complex structure. The center `z(k)` of
//! the isotropy is the common kernel of `R_o`, spanned by the unit evaluation
//! vectors of the crossed nodes.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{QMatrix, SolveError};
use crate::rational::Rational;
use crate::rootsys::{eval_root, FunctionalH, RootSystem, VectorH};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("crossed node index {index} out of range (rank {rank})")]
    NodeOutOfRange { index: usize, rank: usize },
    #[error("vector has {got} coordinates, root system has rank {rank}")]
    RankMismatch { got: usize, rank: usize },
    #[error("vector does not lie in z(k): root {root:?} evaluates to {value}")]
    NotInCenter { root: Vec<i64>, value: String },
    #[error("z(k) basis vectors are linearly dependent")]
    DependentBasis,
    #[error("vector is not in the span of the given basis")]
    OutsideSpan,
}

/// Crossed simple nodes, 0-based global indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Painting {
    crossed: BTreeSet<usize>,
}

impl Painting {
    pub fn new(crossed: impl IntoIterator<Item = usize>) -> Self {
        Self {
            crossed: crossed.into_iter().collect(),
        }
    }

    pub fn crossed(&self) -> &BTreeSet<usize> {
        &self.crossed
    }

    pub fn is_empty(&self) -> bool {
        self.crossed.is_empty()
    }

    pub fn permuted(&self, perm: &[usize]) -> Painting {
        Painting::new(self.crossed.iter().map(|&i| perm[i]))
    }
}

#[derive(Debug, Clone)]
pub struct FlagManifold {
    rs: RootSystem,
    painting: Painting,
    r_o: Vec<usize>,
    r_m_plus: Vec<usize>,
    zk_basis: Vec<VectorH>,
    h_v: VectorH,
    zk_gram: QMatrix,
}

impl FlagManifold {
    pub fn build(rs: RootSystem, painting: Painting) -> Result<Self, FlagError> {
        let rank = rs.rank();
        if let Some(&index) = painting.crossed.iter().find(|&&i| i >= rank) {
            return Err(FlagError::NodeOutOfRange { index, rank });
        }
        let crossed: Vec<usize> = painting.crossed.iter().copied().collect();
        let on_crossed = |r: &[i64]| crossed.iter().any(|&i| r[i] != 0);

        let mut r_o = Vec::new();
        let mut r_m_plus = Vec::new();
        for (i, r) in rs.roots().iter().enumerate() {
            if !on_crossed(r) {
                r_o.push(i);
            } else if rs.is_positive(i) {
                r_m_plus.push(i);
            }
        }

        // Σ H_α = B⁻¹(Σ α) by linearity of the dual.
        let mut sum = vec![Rational::zero(); rank];
        for &i in &r_m_plus {
            for (s, &c) in sum.iter_mut().zip(&rs.roots()[i]) {
                *s += Rational::from_integer(c.into());
            }
        }
        let h_v = rs
            .killing_dual(&FunctionalH(sum))
            .expect("rank checked above");

        let zk_basis: Vec<VectorH> = crossed.iter().map(|&j| VectorH::unit(rank, j)).collect();
        let zk_gram = restricted_gram(&rs, &zk_basis);

        Ok(Self {
            rs,
            painting,
            r_o,
            r_m_plus,
            zk_basis,
            h_v,
            zk_gram,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn painting(&self) -> &Painting {
        &self.painting
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// Indices (into `root_system().roots()`) of `R_o`.
    pub fn r_o(&self) -> &[usize] {
        &self.r_o
    }

    /// Indices (into `root_system().roots()`) of `R_m⁺`, in root order.
    pub fn r_m_plus(&self) -> &[usize] {
        &self.r_m_plus
    }

    pub fn root(&self, idx: usize) -> &[i64] {
        &self.rs.roots()[idx]
    }

    /// `dim z(k)`, the number of crossed nodes.
    pub fn center_dim(&self) -> usize {
        self.zk_basis.len()
    }

    pub fn default_zk_basis(&self) -> &[VectorH] {
        &self.zk_basis
    }

    /// Real model of `Z_V`: `h_V = Σ_{α ∈ R_m⁺} H_α`.
    pub fn h_v(&self) -> &VectorH {
        &self.h_v
    }

    /// Killing form restricted to `z(k)` in the default basis.
    pub fn zk_gram(&self) -> &QMatrix {
        &self.zk_gram
    }

    fn check_rank(&self, h: &VectorH) -> Result<(), FlagError> {
        if h.len() != self.rank() {
            return Err(FlagError::RankMismatch {
                got: h.len(),
                rank: self.rank(),
            });
        }
        Ok(())
    }

    pub fn ensure_in_center(&self, h: &VectorH) -> Result<(), FlagError> {
        self.check_rank(h)?;
        // R_o is spanned by the simple roots on uncrossed nodes.
        for j in 0..self.rank() {
            if !self.painting.crossed.contains(&j) && !h.0[j].is_zero() {
                let mut root = vec![0i64; self.rank()];
                root[j] = 1;
                return Err(FlagError::NotInCenter {
                    root,
                    value: crate::rational::to_string(&h.0[j]),
                });
            }
        }
        Ok(())
    }

    pub fn in_center(&self, h: &VectorH) -> bool {
        self.ensure_in_center(h).is_ok()
    }

    /// `α(h)` for every `α ∈ R_m⁺`; `h` is in the chamber iff all are positive.
    pub fn chamber_margins(&self, h: &VectorH) -> Result<Vec<(usize, Rational)>, FlagError> {
        self.ensure_in_center(h)?;
        Ok(self
            .r_m_plus
            .iter()
            .map(|&i| (i, eval_root(self.root(i), h)))
            .collect())
    }

    pub fn in_chamber(&self, h: &VectorH) -> Result<bool, FlagError> {
        Ok(self
            .chamber_margins(h)?
            .iter()
            .all(|(_, v)| v > &Rational::zero()))
    }

    /// Coefficients of `h` over a basis of (a subspace of) `z(k)`.
    pub fn express_in_zk(
        &self,
        h: &VectorH,
        basis: &[VectorH],
    ) -> Result<Vec<Rational>, FlagError> {
        for b in basis {
            self.ensure_in_center(b)?;
        }
        self.check_rank(h)?;
        let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.0.clone()).collect();
        let a = QMatrix::from_columns(self.rank(), &cols);
        if a.rank() < basis.len() {
            return Err(FlagError::DependentBasis);
        }
        a.solve(h.coords()).map_err(|e| match e {
            SolveError::Dependent => FlagError::DependentBasis,
            SolveError::Inconsistent => FlagError::OutsideSpan,
        })
    }
}

/// Gram matrix `B(b_i, b_j)` of the Killing form on the given vectors.
pub fn restricted_gram(rs: &RootSystem, basis: &[VectorH]) -> QMatrix {
    let k = basis.len();
    let mut g = QMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = rs.killing_form(&basis[i], &basis[j]);
            g[(j, i)] = v.clone();
            g[(i, j)] = v;
        }
    }
    g
}
