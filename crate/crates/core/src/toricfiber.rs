//! Smooth complete toric fibers given by fans, and their canonical polytopes.
//!
//! A ray `v ∈ N` is identified with the compact one-parameter subgroup acting
//! on a coordinate of weight `a` by `e^{i a(v) t}`. At the fixed point of a
//! maximal cone `σ` the isotropy weights are then the basis of `M` dual to the
//! rays of `σ`, and the canonical polytope has the vertex `−Σ u_i` there.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::QMatrix;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {ray} has {got} coordinates, fan has dimension {dim}")]
    RayDimension { ray: usize, got: usize, dim: usize },
    #[error("ray {ray} {coords:?} is not primitive")]
    NonPrimitive { ray: usize, coords: Vec<i64> },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone} refers to ray {index}, but only {rays} rays exist")]
    RayIndex {
        cone: usize,
        index: usize,
        rays: usize,
    },
    #[error("cone {cone} has {got} distinct rays, maximal cones need {dim}")]
    ConeSize { cone: usize, got: usize, dim: usize },
    #[error("cones {first} and {second} coincide")]
    DuplicateCone { first: usize, second: usize },
    #[error("fan is not smooth and complete")]
    NotSmoothComplete,
    #[error("projective space needs dimension at least 1, got {0}")]
    InvalidDimension(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanDiagnostics {
    pub smooth: bool,
    pub complete: bool,
    pub effective: bool,
    /// Maximal cones whose ray matrix is not unimodular.
    pub singular_cones: Vec<usize>,
    /// Facets not shared by exactly two maximal cones on opposite sides.
    pub bad_facets: Vec<Vec<usize>>,
}

impl FanDiagnostics {
    pub fn is_smooth_complete(&self) -> bool {
        self.smooth && self.complete
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeVertex {
    pub coords: Vec<Rational>,
    /// Maximal cone (torus fixed point) this vertex comes from.
    pub cone: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<PolytopeVertex>,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[PolytopeVertex] {
        &self.vertices
    }

    pub fn points(&self) -> impl Iterator<Item = &[Rational]> {
        self.vertices.iter().map(|v| v.coords.as_slice())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Cartesian product; vertex order is lexicographic in (self, other).
    pub fn product(&self, other: &Polytope) -> Polytope {
        let mut vertices = Vec::with_capacity(self.len() * other.len());
        for a in &self.vertices {
            for b in &other.vertices {
                let mut coords = a.coords.clone();
                coords.extend(b.coords.iter().cloned());
                vertices.push(PolytopeVertex {
                    coords,
                    cone: a.cone * other.len() + b.cone,
                });
            }
        }
        Polytope {
            dim: self.dim + other.dim,
            vertices,
        }
    }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

impl Fan {
    pub fn new(
        dim: usize,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Self, FanError> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(FanError::RayDimension {
                    ray: i,
                    got: r.len(),
                    dim,
                });
            }
            if gcd_all(r) != 1 {
                return Err(FanError::NonPrimitive {
                    ray: i,
                    coords: r.clone(),
                });
            }
            if let Some(j) = rays[..i].iter().position(|s| s == r) {
                return Err(FanError::DuplicateRay {
                    first: j,
                    second: i,
                });
            }
        }
        let mut cones: Vec<Vec<usize>> = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.into_iter().enumerate() {
            if let Some(&index) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::RayIndex {
                    cone: c,
                    index,
                    rays: rays.len(),
                });
            }
            let set: BTreeSet<usize> = cone.into_iter().collect();
            if set.len() != dim {
                return Err(FanError::ConeSize {
                    cone: c,
                    got: set.len(),
                    dim,
                });
            }
            let sorted: Vec<usize> = set.into_iter().collect();
            if let Some(j) = cones.iter().position(|s| *s == sorted) {
                return Err(FanError::DuplicateCone {
                    first: j,
                    second: c,
                });
            }
            cones.push(sorted);
        }
        Ok(Self {
            dim,
            rays,
            max_cones: cones,
        })
    }

    /// The rank-0 fan of a point: no rays, one empty maximal cone.
    pub fn point() -> Self {
        Self {
            dim: 0,
            rays: vec![],
            max_cones: vec![vec![]],
        }
    }

    /// Fan of `CP^m`: rays `e_1, …, e_m, −Σ e_i`. Cone `0` omits the last ray,
    /// cone `r ≥ 1` omits `e_r`, so vertex `r` is the fixed point `[e_r]`.
    pub fn projective_space(m: usize) -> Result<Self, FanError> {
        if m < 1 {
            return Err(FanError::InvalidDimension(m));
        }
        let mut rays: Vec<Vec<i64>> = (0..m)
            .map(|i| {
                let mut e = vec![0; m];
                e[i] = 1;
                e
            })
            .collect();
        rays.push(vec![-1; m]);
        let cones = (0..=m)
            .map(|omit| {
                let skip = if omit == 0 { m } else { omit - 1 };
                (0..=m).filter(|&i| i != skip).collect()
            })
            .collect();
        Fan::new(m, rays, cones)
    }

    /// Hirzebruch surface `F_n`.
    pub fn hirzebruch(n: i64) -> Self {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, n], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .expect("Hirzebruch fan is well formed")
    }

    /// Product fan in `N₁ ⊕ N₂`; cones are ordered lexicographically in (self, other).
    pub fn product(&self, other: &Fan) -> Fan {
        let dim = self.dim + other.dim;
        let offset = self.rays.len();
        let mut rays = Vec::with_capacity(offset + other.rays.len());
        for r in &self.rays {
            let mut v = r.clone();
            v.resize(dim, 0);
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; self.dim];
            v.extend_from_slice(r);
            rays.push(v);
        }
        let mut max_cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|i| i + offset));
                max_cones.push(c);
            }
        }
        Fan {
            dim,
            rays,
            max_cones,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Ray matrix of a set of rays, one ray per row.
    fn ray_matrix(&self, idx: &[usize]) -> QMatrix {
        QMatrix::from_rows(
            self.dim,
            idx.iter()
                .map(|&i| self.rays[i].iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    fn cone_det(&self, cone: usize) -> Rational {
        self.ray_matrix(&self.max_cones[cone]).det()
    }

    pub fn validate(&self) -> FanDiagnostics {
        let singular_cones: Vec<usize> = (0..self.max_cones.len())
            .filter(|&c| self.cone_det(c).abs() != int(1))
            .collect();
        let smooth = singular_cones.is_empty();
        let bad_facets = self.bad_facets();
        let complete = if self.dim == 0 {
            self.max_cones.len() == 1
        } else {
            bad_facets.is_empty() && self.covering_degree() == Some(1)
        };
        FanDiagnostics {
            smooth,
            complete,
            effective: self.is_effective(singular_cones.len() < self.max_cones.len()),
            singular_cones,
            bad_facets,
        }
    }

    fn bad_facets(&self) -> Vec<Vec<usize>> {
        if self.dim == 0 {
            return vec![];
        }
        let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for cone in &self.max_cones {
            for &opposite in cone {
                let facet: Vec<usize> = cone.iter().copied().filter(|&i| i != opposite).collect();
                facets.entry(facet).or_default().push(opposite);
            }
        }
        facets
            .into_iter()
            .filter(|(facet, opp)| {
                if opp.len() != 2 {
                    return true;
                }
                // The two cones must lie on opposite sides of the facet hyperplane.
                let side = |o: usize| {
                    let mut idx = facet.clone();
                    idx.push(o);
                    self.ray_matrix(&idx).det()
                };
                let prod = side(opp[0]) * side(opp[1]);
                !prod.is_negative()
            })
            .map(|(facet, _)| facet)
            .collect()
    }

    /// Number of maximal cones containing a generic point in their interior.
    /// `None` if no candidate point avoided all cone boundaries.
    fn covering_degree(&self) -> Option<usize> {
        let inverses: Vec<Option<QMatrix>> = self
            .max_cones
            .iter()
            .map(|c| self.ray_matrix(c).transpose().inverse())
            .collect();
        'candidate: for k in 0..32i64 {
            let t = Rational::new((2 * k + 7).into(), (k + 3).into())
                * if k % 2 == 0 { int(1) } else { int(-1) };
            let mut p = Vec::with_capacity(self.dim);
            let mut x = int(1);
            for _ in 0..self.dim {
                x *= &t;
                p.push(x.clone() + Rational::new(1.into(), (k + 11).into()));
            }
            let mut count = 0;
            for inv in inverses.iter().flatten() {
                let lambda = inv.mul_vec(&p);
                if lambda.iter().any(Zero::is_zero) {
                    continue 'candidate;
                }
                if lambda.iter().all(Signed::is_positive) {
                    count += 1;
                }
            }
            return Some(count);
        }
        None
    }

    fn is_effective(&self, has_unimodular_cone: bool) -> bool {
        if self.dim == 0 || has_unimodular_cone {
            return true;
        }
        if self.rays.len() < self.dim {
            return false;
        }
        // gcd of maximal minors of the ray matrix.
        let mut g = num_bigint::BigInt::zero();
        let mut idx: Vec<usize> = (0..self.dim).collect();
        loop {
            let d = self.ray_matrix(&idx).det();
            g = g.gcd(d.numer());
            if g == 1.into() {
                return true;
            }
            // next combination
            let n = self.rays.len();
            let mut i = self.dim;
            while i > 0 && idx[i - 1] == n - self.dim + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return false;
            }
            idx[i - 1] += 1;
            for j in i..self.dim {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    fn require_smooth_complete(&self) -> Result<(), FanError> {
        if self.validate().is_smooth_complete() {
            Ok(())
        } else {
            Err(FanError::NotSmoothComplete)
        }
    }

    /// Anticanonical support function strictly convex on every pair of cones.
    pub fn is_fano(&self) -> Result<bool, FanError> {
        self.require_smooth_complete()?;
        let minus_one = vec![int(-1); self.dim];
        for cone in &self.max_cones {
            let u = self
                .ray_matrix(cone)
                .solve(&minus_one)
                .map_err(|_| FanError::NotSmoothComplete)?;
            for (i, ray) in self.rays.iter().enumerate() {
                if cone.contains(&i) {
                    continue;
                }
                let pairing = ray
                    .iter()
                    .zip(&u)
                    .fold(Rational::zero(), |acc, (&r, x)| acc + x * int(r));
                if pairing <= int(-1) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Tangent weights at the fixed point of `cone`: the basis of `M` dual to its rays.
    pub fn isotropy_weights(&self, cone: usize) -> Result<Vec<Vec<Rational>>, FanError> {
        let inv = self
            .ray_matrix(&self.max_cones[cone])
            .inverse()
            .ok_or(FanError::NotSmoothComplete)?;
        Ok((0..self.dim).map(|i| inv.column(i)).collect())
    }

    /// One vertex per maximal cone: minus the sum of the isotropy weights there.
    pub fn canonical_polytope(&self) -> Result<Polytope, FanError> {
        self.require_smooth_complete()?;
        let mut vertices = Vec::with_capacity(self.max_cones.len());
        for cone in 0..self.max_cones.len() {
            let mut coords = vec![Rational::zero(); self.dim];
            for w in self.isotropy_weights(cone)? {
                for (c, x) in coords.iter_mut().zip(w) {
                    *c -= x;
                }
            }
            vertices.push(PolytopeVertex { coords, cone });
        }
        Ok(Polytope {
            dim: self.dim,
            vertices,
        })
    }
}
