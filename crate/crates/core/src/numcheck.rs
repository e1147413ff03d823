//! Floating-point cross-check of the canonical polytope on `CP^m`.
//!
//! `δ(p)(W) = ½ div_p(J Ŵ)` is evaluated directly on the Fubini–Study
//! metric in an affine chart: the divergence of `X` with respect to `ωᵐ` is
//! `Σ ∂_k X^k + X(log det g)`, and the derivative of `log det g` along the
//! radial field `JŴ` is `tr(g⁻¹ dg)`. Nothing here uses the fan.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::QMatrix;
use crate::rational::{int, to_f64, Rational};
use crate::toricfiber::Fan;

type C64 = Complex<f64>;

/// Grid points per dimension below which quadrature is refused.
pub const MIN_GRID_PER_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumcheckError {
    #[error("point has no nonzero finite homogeneous coordinate")]
    DegeneratePoint,
    #[error("point lives in CP^{got}, expected CP^{expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("fixed point index {index} out of range 0..={m}")]
    BadIndex { index: usize, m: usize },
    #[error(
        "{samples} samples give {per_dim} grid points per dimension in CP^{m}; need at least {min}"
    )]
    ResolutionTooSmall {
        samples: usize,
        m: usize,
        per_dim: usize,
        min: usize,
    },
}

/// A point `[z_0 : … : z_m]` of `CP^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    z: Vec<C64>,
    chart: usize,
}

impl SamplePoint {
    pub fn new(z: Vec<C64>) -> Result<Self, NumcheckError> {
        if z.len() < 2 || z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(NumcheckError::DegeneratePoint);
        }
        let (chart, max) = z
            .iter()
            .map(|c| c.norm())
            .enumerate()
            .fold((0, 0.0), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc });
        if max == 0.0 {
            return Err(NumcheckError::DegeneratePoint);
        }
        Ok(Self { z, chart })
    }

    pub fn real(z: &[f64]) -> Result<Self, NumcheckError> {
        Self::new(z.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Coordinate fixed point `[e_index]`.
    pub fn fixed_point(m: usize, index: usize) -> Self {
        let mut z = vec![C64::new(0.0, 0.0); m + 1];
        z[index] = C64::new(1.0, 0.0);
        Self::new(z).expect("unit vector is a valid point")
    }

    pub fn dim(&self) -> usize {
        self.z.len() - 1
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn coords(&self) -> &[C64] {
        &self.z
    }

    /// `z_j ↦ e^{iθ_j} z_j` for `j = 1..=m`.
    pub fn torus_act(&self, angles: &[f64]) -> SamplePoint {
        let mut z = self.z.clone();
        for (zj, &a) in z[1..].iter_mut().zip(angles) {
            *zj *= C64::from_polar(1.0, a);
        }
        SamplePoint::new(z).expect("torus action preserves validity")
    }
}

/// `δ` evaluated on the generators `W_1, …, W_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaValue(pub Vec<f64>);

impl DeltaValue {
    pub fn distance(&self, other: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

struct Chart {
    w: Vec<C64>,
    /// homogeneous index of each chart coordinate
    index: Vec<usize>,
    base: usize,
}

impl Chart {
    fn at(p: &SamplePoint) -> Chart {
        let base = p.chart;
        let index: Vec<usize> = (0..p.z.len()).filter(|&k| k != base).collect();
        let w = index.iter().map(|&k| p.z[k] / p.z[base]).collect();
        Chart { w, index, base }
    }

    /// Fubini–Study `g_{ab̄} = δ_ab / s − w̄_a w_b / s²`, `s = 1 + |w|²`.
    fn metric(&self) -> DMatrix<C64> {
        let m = self.w.len();
        let s = 1.0 + self.w.iter().map(|c| c.norm_sqr()).sum::<f64>();
        DMatrix::from_fn(m, m, |a, b| {
            let diag = if a == b { 1.0 / s } else { 0.0 };
            C64::new(diag, 0.0) - self.w[a].conj() * self.w[b] / (s * s)
        })
    }

    /// Phase weight of chart coordinate `k` under `W_j`.
    fn weight(&self, k: usize, j: usize) -> f64 {
        (self.index[k] == j) as i32 as f64 - (self.base == j) as i32 as f64
    }
}

fn check_dim(m: usize, p: &SamplePoint) -> Result<(), NumcheckError> {
    if m < 1 {
        return Err(NumcheckError::InvalidDimension);
    }
    if p.dim() != m {
        return Err(NumcheckError::DimensionMismatch {
            expected: m,
            got: p.dim(),
        });
    }
    Ok(())
}

pub fn fs_delta(m: usize, p: &SamplePoint) -> Result<DeltaValue, NumcheckError> {
    check_dim(m, p)?;
    let chart = Chart::at(p);
    let g = chart.metric();
    let g_inv = g
        .clone()
        .try_inverse()
        .expect("Fubini–Study metric is positive definite");
    let s = 1.0 + chart.w.iter().map(|c| c.norm_sqr()).sum::<f64>();

    let delta = (1..=m)
        .map(|j| {
            let a: Vec<f64> = (0..m).map(|k| chart.weight(k, j)).collect();
            // JŴ_j = −Σ a_k (x_k ∂x_k + y_k ∂y_k), i.e. dw_k/dt = −a_k w_k.
            let dw: Vec<C64> = chart.w.iter().zip(&a).map(|(w, &ak)| -ak * w).collect();
            let ds: f64 = chart
                .w
                .iter()
                .zip(&dw)
                .map(|(w, d)| 2.0 * (w.conj() * d).re)
                .sum();
            let dg = DMatrix::from_fn(m, m, |x, y| {
                let diag = if x == y { -ds / (s * s) } else { 0.0 };
                C64::new(diag, 0.0)
                    - (dw[x].conj() * chart.w[y] + chart.w[x].conj() * dw[y]) / (s * s)
                    + chart.w[x].conj() * chart.w[y] * (2.0 * ds / (s * s * s))
            });
            let dlog_det = (&g_inv * dg).trace().re;
            let flat_div = -2.0 * a.iter().sum::<f64>();
            0.5 * (flat_div + dlog_det)
        })
        .collect();
    Ok(DeltaValue(delta))
}

/// `½ Tr(J ∘ A_{W_j})` at the fixed point `[e_index]` from the isotropy
/// representation alone, exactly.
pub fn fixed_point_delta(m: usize, index: usize) -> Result<Vec<Rational>, NumcheckError> {
    if m < 1 {
        return Err(NumcheckError::InvalidDimension);
    }
    if index > m {
        return Err(NumcheckError::BadIndex { index, m });
    }
    // Real tangent coordinates (x_k, y_k) for the chart coordinates w_k = z_k / z_index.
    let coords: Vec<usize> = (0..=m).filter(|&k| k != index).collect();
    let n = 2 * m;
    let mut complex_structure = QMatrix::zeros(n, n);
    for k in 0..m {
        complex_structure[(2 * k + 1, 2 * k)] = int(1);
        complex_structure[(2 * k, 2 * k + 1)] = int(-1);
    }
    Ok((1..=m)
        .map(|j| {
            // The flow of W_j rotates w_k with speed a_k.
            let mut a_z = QMatrix::zeros(n, n);
            for (k, &hk) in coords.iter().enumerate() {
                let ak = int((hk == j) as i64 - (index == j) as i64);
                a_z[(2 * k + 1, 2 * k)] = ak.clone();
                a_z[(2 * k, 2 * k + 1)] = -ak;
            }
            let prod = complex_structure.mul(&a_z);
            let trace = (0..n).fold(int(0), |acc, i| acc + &prod[(i, i)]);
            trace / int(2)
        })
        .collect())
}

fn grid_per_dim(m: usize, samples: usize) -> usize {
    let mut n = (samples as f64).powf(1.0 / m as f64).round() as usize;
    while n > 0 && n.pow(m as u32) > samples {
        n -= 1;
    }
    n
}

/// Fubini–Study average of `δ` by midpoint quadrature over torus orbits,
/// parametrized by `|w_k| = tan θ_k`, `θ_k ∈ (0, π/2)`.
pub fn barycenter_integral(m: usize, samples: usize) -> Result<Vec<f64>, NumcheckError> {
    if m < 1 {
        return Err(NumcheckError::InvalidDimension);
    }
    let per_dim = grid_per_dim(m, samples);
    if per_dim < MIN_GRID_PER_DIM {
        return Err(NumcheckError::ResolutionTooSmall {
            samples,
            m,
            per_dim,
            min: MIN_GRID_PER_DIM,
        });
    }
    let h = FRAC_PI_2 / per_dim as f64;
    let total = per_dim.pow(m as u32);
    let mut moment = vec![0.0; m];
    let mut volume = 0.0;
    let mut z = vec![C64::new(1.0, 0.0); m + 1];
    for flat in 0..total {
        let mut rest = flat;
        let mut jacobian = 1.0;
        for zk in z[1..].iter_mut() {
            let theta = ((rest % per_dim) as f64 + 0.5) * h;
            rest /= per_dim;
            let (r, sec2) = (theta.tan(), 1.0 / theta.cos().powi(2));
            *zk = C64::new(r, 0.0);
            jacobian *= r * sec2;
        }
        let p = SamplePoint::new(z.clone())?;
        let density = Chart {
            w: z[1..].to_vec(),
            index: (1..=m).collect(),
            base: 0,
        }
        .metric()
        .determinant()
        .re;
        let weight = density * jacobian;
        let delta = fs_delta(m, &p)?;
        for (acc, d) in moment.iter_mut().zip(&delta.0) {
            *acc += weight * d;
        }
        volume += weight;
    }
    Ok(moment.into_iter().map(|x| x / volume).collect())
}

/// Exact barycenter of `δ` under the Fubini–Study measure. The measure pushes
/// forward to the uniform measure on the simplex `{t ≥ 0, Σ t ≤ 1}` in the
/// coordinates `t_j = |z_j|²/|z|²`, where `δ_j = (m+1) t_j − 1` and each
/// `t_j` averages to `1/(m+1)`.
pub fn barycenter_exact(m: usize) -> Vec<Rational> {
    let mean_t = Rational::new(1.into(), (m as i64 + 1).into());
    (0..m)
        .map(|_| int(m as i64 + 1) * &mean_t - int(1))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub m: usize,
    /// max over fixed points of |fs_delta − polytope vertex|
    pub fixed_point_error: f64,
    /// fixed_point_delta agrees exactly with the fan vertices
    pub exact_vertices_match: bool,
    pub samples: usize,
    /// max over samples and rays of `−1 − ⟨δ, v⟩`, clipped at 0
    pub halfspace_violation: f64,
    /// max distance from a vertex of δ at points near the fixed point
    pub near_vertex_error: f64,
    pub barycenter: Vec<f64>,
    pub barycenter_norm: f64,
}

pub fn random_point(m: usize, rng: &mut impl Rng) -> SamplePoint {
    loop {
        let z: Vec<C64> = (0..=m)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if let Ok(p) = SamplePoint::new(z) {
            if p.z.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-6 {
                return p;
            }
        }
    }
}

/// Runs every comparison for `CP^m` against the fan-side polytope.
pub fn run_oracle(
    m: usize,
    samples: usize,
    quadrature: usize,
    seed: u64,
) -> Result<OracleReport, NumcheckError> {
    let fan = Fan::projective_space(m).map_err(|_| NumcheckError::InvalidDimension)?;
    let polytope = fan
        .canonical_polytope()
        .expect("projective space is smooth and complete");
    let vertices: Vec<Vec<f64>> = polytope
        .points()
        .map(|v| v.iter().map(to_f64).collect())
        .collect();

    let mut fixed_point_error: f64 = 0.0;
    let mut exact_vertices_match = true;
    for (idx, v) in vertices.iter().enumerate() {
        let d = fs_delta(m, &SamplePoint::fixed_point(m, idx))?;
        fixed_point_error = fixed_point_error.max(d.distance(v));
        exact_vertices_match &= fixed_point_delta(m, idx)? == polytope.vertices()[idx].coords;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut halfspace_violation: f64 = 0.0;
    for _ in 0..samples {
        let d = fs_delta(m, &random_point(m, &mut rng))?;
        for ray in fan.rays() {
            let pairing: f64 = ray.iter().zip(&d.0).map(|(&r, x)| r as f64 * x).sum();
            halfspace_violation = halfspace_violation.max(-1.0 - pairing);
        }
    }

    let mut near_vertex_error: f64 = 0.0;
    for (idx, v) in vertices.iter().enumerate() {
        let mut z = SamplePoint::fixed_point(m, idx).z;
        for c in z.iter_mut() {
            *c += C64::new(rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3));
        }
        let d = fs_delta(m, &SamplePoint::new(z)?)?;
        near_vertex_error = near_vertex_error.max(d.distance(v));
    }

    let barycenter = barycenter_integral(m, quadrature)?;
    let barycenter_norm = barycenter.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(OracleReport {
        m,
        fixed_point_error,
        exact_vertices_match,
        samples,
        halfspace_violation,
        near_vertex_error,
        barycenter,
        barycenter_norm,
    })
}
