//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use toricfano::families::BundleInstance;
use toricfano::flagbase::Painting;
use toricfano::rational::int;
use toricfano::rootsys::permute;
use toricfano::{Fan, FlagManifold, QMatrix, Rational, TauMap, VectorH};

/// Sorted vertices of `{u : ⟨u, v⟩ ≥ −1 for every ray v}` by intersecting every
/// `m`-subset of boundary hyperplanes and keeping the feasible points.
pub fn halfspace_vertices(fan: &Fan) -> Vec<Vec<Rational>> {
    let m = fan.dim();
    let rays = fan.rays();
    let mut out = BTreeSet::new();
    for subset in (0..rays.len()).combinations(m) {
        let a = QMatrix::from_rows(
            m,
            subset
                .iter()
                .map(|&i| rays[i].iter().map(|&x| int(x)).collect())
                .collect(),
        );
        let Some(inv) = a.inverse() else { continue };
        let u = inv.mul_vec(&vec![int(-1); m]);
        let feasible = rays.iter().all(|v| {
            let p = v
                .iter()
                .zip(&u)
                .fold(int(0), |acc, (&x, y)| acc + y * int(x));
            p >= int(-1)
        });
        if feasible {
            out.insert(u);
        }
    }
    out.into_iter().collect()
}

/// Vertex-method points, one per maximal cone, sorted. Repeated points are kept.
pub fn vertex_list(fan: &Fan) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = fan
        .canonical_polytope()
        .unwrap()
        .points()
        .map(|p| p.to_vec())
        .collect();
    out.sort();
    out
}

/// `CP²` blown up at a torus fixed point.
pub fn blowup_cp2() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
    .unwrap()
}

pub fn fano_library() -> Vec<(&'static str, Fan)> {
    let p = |m| Fan::projective_space(m).unwrap();
    vec![
        ("CP1", p(1)),
        ("CP2", p(2)),
        ("CP3", p(3)),
        ("CP1xCP1", p(1).product(&p(1))),
        ("CP1xCP2", p(1).product(&p(2))),
        ("Bl_p CP2", blowup_cp2()),
    ]
}

/// Killing form of `so(2r)` in orthonormal coordinates, summed over the
/// roots `±e_i ± e_j` written out directly.
pub fn d_killing_orthonormal(r: usize) -> QMatrix {
    let mut g = QMatrix::zeros(r, r);
    for i in 0..r {
        for j in i + 1..r {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0i64; r];
                v[i] = si;
                v[j] = sj;
                for a in 0..r {
                    for b in 0..r {
                        g[(a, b)] += int(v[a] * v[b]);
                    }
                }
            }
        }
    }
    g
}

/// Instance obtained by relabeling nodes with a diagram automorphism.
pub fn permuted_instance(inst: &BundleInstance, perm: &[usize]) -> BundleInstance {
    let rs = inst.flag.root_system().clone();
    let painting: Painting = inst.flag.painting().permuted(perm);
    let flag = FlagManifold::build(rs, painting).unwrap();
    let basis: Vec<VectorH> = inst
        .tau
        .basis()
        .iter()
        .map(|b| VectorH(permute(b.coords(), perm)))
        .collect();
    let tau = TauMap::new(&flag, inst.tau.matrix().clone(), Some(basis)).unwrap();
    BundleInstance {
        flag,
        fan: inst.fan.clone(),
        tau,
    }
}

pub fn with_tau(inst: &BundleInstance, matrix: QMatrix) -> BundleInstance {
    let tau = TauMap::new(&inst.flag, matrix, Some(inst.tau.basis().to_vec())).unwrap();
    BundleInstance {
        flag: inst.flag.clone(),
        fan: inst.fan.clone(),
        tau,
    }
}

pub fn sorted_values(v: &toricfano::FanoVerdict) -> Vec<Rational> {
    let mut out: Vec<Rational> = v.margins.iter().map(|m| m.value.clone()).collect();
    out.sort();
    out
}
