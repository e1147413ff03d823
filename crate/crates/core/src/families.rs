//! Ready-made bundle families used in tests, scans and the CLI.

use crate::fanobundle::{fano_check, BundleError, FanoVerdict, TauMap};
use crate::flagbase::{FlagManifold, Painting};
use crate::linalg::QMatrix;
use crate::rational::{frac, int, Rational};
use crate::rootsys::{Letter, RootSystem, SimpleType, VectorH};
use crate::toricfiber::Fan;

#[derive(Debug, Clone)]
pub struct BundleInstance {
    pub flag: FlagManifold,
    pub fan: Fan,
    pub tau: TauMap,
}

impl BundleInstance {
    pub fn check(&self) -> Result<FanoVerdict, BundleError> {
        fano_check(&self.flag, &self.fan, &self.tau)
    }
}

/// Hirzebruch surface `F_n = SL(2) ×_{B,τ} CP¹` with `τ(diag(a, 1/a)) = aⁿ`.
///
/// The center is spanned by `Y`, the real avatar of `diag(i, −i)`, which
/// evaluates to `−2` on the simple root.
pub fn hirzebruch(n: Rational) -> BundleInstance {
    let rs = RootSystem::build(&[SimpleType::new(Letter::A, 1).unwrap()]).unwrap();
    let flag = FlagManifold::build(rs, Painting::new([0])).unwrap();
    let tau = TauMap::new(
        &flag,
        QMatrix::from_rows(1, vec![vec![n]]),
        Some(vec![VectorH(vec![int(-2)])]),
    )
    .unwrap();
    BundleInstance {
        flag,
        fan: Fan::projective_space(1).unwrap(),
        tau,
    }
}

/// Evaluation coordinates on the simple roots of `D_r` (Bourbaki numbering)
/// of the vector with orthonormal coordinates `t`.
pub fn d_orthogonal_to_eval(t: &[Rational]) -> VectorH {
    let r = t.len();
    assert!(r >= 2);
    let mut x: Vec<Rational> = (0..r - 1).map(|k| &t[k] - &t[k + 1]).collect();
    x.push(&t[r - 2] + &t[r - 1]);
    VectorH(x)
}

/// Inverse of [`d_orthogonal_to_eval`].
pub fn d_eval_to_orthogonal(h: &VectorH) -> Vec<Rational> {
    let x = h.coords();
    let r = x.len();
    assert!(r >= 2);
    let mut t = vec![int(0); r];
    t[r - 1] = (&x[r - 1] - &x[r - 2]) * frac(1, 2);
    t[r - 2] = (&x[r - 1] + &x[r - 2]) * frac(1, 2);
    for k in (0..r - 2).rev() {
        t[k] = &x[k] + &t[k + 1];
    }
    t
}

/// `E₁ = Σ_{k≤n} e_k` and `E₂ = Σ_{k>n} e_k` in `D_{2n}`, model coordinates.
pub fn so4n_center_basis(n: usize) -> Vec<VectorH> {
    let r = 2 * n;
    let e1: Vec<Rational> = (0..r)
        .map(|k| if k < n { int(1) } else { int(0) })
        .collect();
    let e2: Vec<Rational> = (0..r)
        .map(|k| if k < n { int(0) } else { int(1) })
        .collect();
    vec![d_orthogonal_to_eval(&e1), d_orthogonal_to_eval(&e2)]
}

/// Classical orthonormal index of model index `k` in `D_{2n}`.
///
/// With the fixed base, the complementary roots mixing the two blocks are
/// `e_i − e_j` (`i ≤ n < j`). The classical description lists them as
/// `ω_j − ω_i`, so its `ω`-labels are the model's with the blocks swapped.
pub fn so4n_model_to_classical(n: usize, k: usize) -> usize {
    if k < n {
        k + n
    } else {
        k - n
    }
}

/// Orthonormal coordinates of `h` in the classical `ω`-labelling.
pub fn so4n_classical_coords(n: usize, h: &VectorH) -> Vec<Rational> {
    let t = d_eval_to_orthogonal(h);
    let mut out = vec![int(0); 2 * n];
    for (k, tk) in t.into_iter().enumerate() {
        out[so4n_model_to_classical(n, k)] = tk;
    }
    out
}

/// `SO(4n)/U(n)×U(n)` painted at nodes `n` and `2n`, with fiber `CP²` and
/// `τ = scale · Id` on `{J₁, J₂}`. `J₁` sums the rotation generators of the
/// first `ω`-block, which is the model's second block (see
/// [`so4n_model_to_classical`]). For `n = 1`, `D₂` is realized as `A₁ × A₁` with
/// `α₁ = e₁ − e₂`, `α₂ = e₁ + e₂`.
pub fn so4n(n: usize, scale: Rational) -> BundleInstance {
    assert!(n >= 1);
    let types = if n == 1 {
        vec![SimpleType::new(Letter::A, 1).unwrap(); 2]
    } else {
        vec![SimpleType::new(Letter::D, 2 * n).unwrap()]
    };
    let rs = RootSystem::build(&types).unwrap();
    let flag = FlagManifold::build(rs, Painting::new([n - 1, 2 * n - 1])).unwrap();
    let [e1, e2]: [VectorH; 2] = so4n_center_basis(n).try_into().unwrap();
    let tau = TauMap::new(
        &flag,
        QMatrix::identity(2).scale(&scale),
        Some(vec![e2, e1]),
    )
    .unwrap();
    BundleInstance {
        flag,
        fan: Fan::projective_space(2).unwrap(),
        tau,
    }
}

/// The instance with `τ(J_i) = 3n W_i`.
pub fn so4n_standard(n: usize) -> BundleInstance {
    so4n(n, int(3 * n as i64))
}
