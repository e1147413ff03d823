//! Root systems of semisimple Lie algebras in exact arithmetic.
//!
//! Coordinates follow two fixed conventions:
//!
//! * a root (or any functional on the real Cartan subspace) is stored by its
//!   coefficients over the simple roots, see [`FunctionalH`];
//! * an element `h` of the real Cartan subspace is stored by its evaluations
//!   `(α_1(h), …, α_r(h))` against the simple roots, see [`VectorH`].
//!
//! In these coordinates the pairing is the plain dot product and the Killing
//! form is the integer matrix `Σ_β c(β) c(β)ᵀ` summed over all roots.
//!
//! Elements of the compact torus are represented by their real avatar: the
//! compact element `W` corresponds to `h = iW`, so `iα(W) = α(h)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{dot, QMatrix};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("inadmissible Dynkin type {letter}{rank}")]
    Inadmissible { letter: char, rank: usize },
    #[error("root system needs at least one simple component")]
    Empty,
    #[error("rank mismatch: expected {expected} coordinates, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
            Letter::C => 'C',
            Letter::D => 'D',
            Letter::E => 'E',
            Letter::F => 'F',
            Letter::G => 'G',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        Some(match c.to_ascii_uppercase() {
            'A' => Letter::A,
            'B' => Letter::B,
            'C' => Letter::C,
            'D' => Letter::D,
            'E' => Letter::E,
            'F' => Letter::F,
            'G' => Letter::G,
            _ => return None,
        })
    }
}

/// A connected Dynkin type, Bourbaki node numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleType {
    letter: Letter,
    rank: usize,
}

impl SimpleType {
    pub fn new(letter: Letter, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match letter {
            Letter::A => rank >= 1,
            Letter::B | Letter::C => rank >= 2,
            Letter::D => rank >= 3,
            Letter::E => (6..=8).contains(&rank),
            Letter::F => rank == 4,
            Letter::G => rank == 2,
        };
        if ok {
            Ok(Self { letter, rank })
        } else {
            Err(RootSystemError::Inadmissible {
                letter: letter.as_char(),
                rank,
            })
        }
    }

    pub fn letter(&self) -> Letter {
        self.letter
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of roots from the classification table.
    pub fn root_count(&self) -> usize {
        let r = self.rank;
        match self.letter {
            Letter::A => r * (r + 1),
            Letter::B | Letter::C => 2 * r * r,
            Letter::D => 2 * r * (r - 1),
            Letter::E => match r {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Letter::F => 48,
            Letter::G => 12,
        }
    }

    /// Invariant inner products `(α_i, α_j)` of the simple roots, scaled to integers.
    pub fn simple_inner_products(&self) -> Vec<Vec<i64>> {
        let r = self.rank;
        let mut d = vec![vec![0i64; r]; r];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 2;
        }
        let link = |d: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            d[i][j] = v;
            d[j][i] = v;
        };
        match self.letter {
            Letter::A => {
                for i in 1..r {
                    link(&mut d, i - 1, i, -1);
                }
            }
            Letter::B => {
                d[r - 1][r - 1] = 1;
                for i in 1..r {
                    link(&mut d, i - 1, i, -1);
                }
            }
            Letter::C => {
                d[r - 1][r - 1] = 4;
                for i in 1..r - 1 {
                    link(&mut d, i - 1, i, -1);
                }
                link(&mut d, r - 2, r - 1, -2);
            }
            Letter::D => {
                for i in 1..r - 1 {
                    link(&mut d, i - 1, i, -1);
                }
                link(&mut d, r - 3, r - 1, -1);
            }
            Letter::E => {
                link(&mut d, 0, 2, -1);
                link(&mut d, 1, 3, -1);
                for i in 3..r {
                    link(&mut d, i - 1, i, -1);
                }
            }
            Letter::F => {
                d = vec![
                    vec![4, -2, 0, 0],
                    vec![-2, 4, -2, 0],
                    vec![0, -2, 2, -1],
                    vec![0, 0, -1, 2],
                ];
            }
            Letter::G => {
                d = vec![vec![2, -3], vec![-3, 6]];
            }
        }
        d
    }

    /// Cartan matrix `C[i][j] = ⟨α_i^∨, α_j⟩`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let d = self.simple_inner_products();
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| {
                        debug_assert_eq!(2 * d[i][j] % d[i][i], 0);
                        2 * d[i][j] / d[i][i]
                    })
                    .collect()
            })
            .collect()
    }

    /// Non-identity Dynkin diagram automorphisms as node permutations
    /// (`perm[i]` is the image of node `i`, 0-based). Generators only.
    pub fn diagram_automorphisms(&self) -> Vec<Vec<usize>> {
        let r = self.rank;
        let id: Vec<usize> = (0..r).collect();
        match (self.letter, r) {
            (Letter::A, r) if r >= 2 => vec![(0..r).rev().collect()],
            (Letter::D, r) => {
                let mut swap = id.clone();
                swap.swap(r - 2, r - 1);
                let mut out = vec![swap];
                if r == 4 {
                    out.push(vec![2, 1, 3, 0]);
                }
                out
            }
            (Letter::E, 6) => vec![vec![5, 1, 4, 3, 2, 0]],
            _ => vec![],
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.as_char(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let c = chars.next().unwrap_or('?');
        let rank = chars.as_str().parse::<usize>().unwrap_or(0);
        match Letter::from_char(c) {
            Some(l) => SimpleType::new(l, rank),
            None => Err(RootSystemError::Inadmissible { letter: c, rank }),
        }
    }
}

/// Element of the real Cartan subspace, by evaluations against the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorH(pub Vec<Rational>);

/// Functional on the real Cartan subspace, by coefficients over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionalH(pub Vec<Rational>);

impl VectorH {
    pub fn zero(rank: usize) -> Self {
        VectorH(vec![Rational::zero(); rank])
    }

    /// The vector with `α_i(h) = δ_{ij}`.
    pub fn unit(rank: usize, j: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[j] = int(1);
        v
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add_scaled(&mut self, s: &Rational, other: &VectorH) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += s * b;
        }
    }
}

impl FunctionalH {
    pub fn from_root(root: &[i64]) -> Self {
        FunctionalH(root.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }
}

pub fn evaluate(phi: &FunctionalH, h: &VectorH) -> Result<Rational, RootSystemError> {
    if phi.0.len() != h.0.len() {
        return Err(RootSystemError::RankMismatch {
            expected: phi.0.len(),
            got: h.0.len(),
        });
    }
    Ok(dot(&phi.0, &h.0))
}

/// `α(h)` for an integer root vector.
pub fn eval_root(root: &[i64], h: &VectorH) -> Rational {
    debug_assert_eq!(root.len(), h.len());
    root.iter()
        .zip(h.coords())
        .filter(|(&c, x)| c != 0 && !x.is_zero())
        .fold(Rational::zero(), |acc, (&c, x)| acc + x * int(c))
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    components: Vec<SimpleType>,
    offsets: Vec<usize>,
    roots: Vec<Vec<i64>>,
    positive: Vec<bool>,
    gram: QMatrix,
    gram_inv: QMatrix,
}

impl RootSystem {
    pub fn build(types: &[SimpleType]) -> Result<Self, RootSystemError> {
        if types.is_empty() {
            return Err(RootSystemError::Empty);
        }
        let total: usize = types.iter().map(|t| t.rank).sum();
        let mut offsets = Vec::with_capacity(types.len());
        let mut roots = Vec::new();
        let mut offset = 0;
        for t in types {
            offsets.push(offset);
            for local in reflection_closure(&t.cartan_matrix()) {
                let mut r = vec![0i64; total];
                r[offset..offset + t.rank].copy_from_slice(&local);
                roots.push(r);
            }
            offset += t.rank;
        }
        roots.sort();
        let positive = roots.iter().map(|r| r.iter().all(|&c| c >= 0)).collect();

        let mut g = vec![vec![0i64; total]; total];
        for r in &roots {
            for (j, &cj) in r.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                for (k, &ck) in r.iter().enumerate() {
                    g[j][k] += cj * ck;
                }
            }
        }
        let gram = QMatrix::from_rows(
            total,
            g.into_iter()
                .map(|row| row.into_iter().map(int).collect())
                .collect(),
        );
        let gram_inv = gram
            .inverse()
            .expect("Killing form of a semisimple algebra is nondegenerate");

        Ok(Self {
            components: types.to_vec(),
            offsets,
            roots,
            positive,
            gram,
            gram_inv,
        })
    }

    pub fn components(&self) -> &[SimpleType] {
        &self.components
    }

    /// Global index of the first node of each component.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// All roots, sorted lexicographically by simple-root coefficients.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        self.positive[idx]
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = (usize, &[i64])> + '_ {
        self.roots
            .iter()
            .enumerate()
            .filter(|(i, _)| self.positive[*i])
            .map(|(i, r)| (i, r.as_slice()))
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.roots.binary_search_by(|r| r.as_slice().cmp(root)).ok()
    }

    /// Killing form in evaluation coordinates.
    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn killing_form(&self, a: &VectorH, b: &VectorH) -> Rational {
        dot(a.coords(), &self.gram.mul_vec(b.coords()))
    }

    /// The unique `h` with `B(h, ·) = φ`.
    pub fn killing_dual(&self, phi: &FunctionalH) -> Result<VectorH, RootSystemError> {
        if phi.0.len() != self.rank() {
            return Err(RootSystemError::RankMismatch {
                expected: self.rank(),
                got: phi.0.len(),
            });
        }
        Ok(VectorH(self.gram_inv.mul_vec(&phi.0)))
    }

    /// Generators of the diagram automorphism group acting componentwise,
    /// as global node permutations.
    pub fn diagram_automorphisms(&self) -> Vec<Vec<usize>> {
        let rank = self.rank();
        let mut out = Vec::new();
        for (t, &off) in self.components.iter().zip(&self.offsets) {
            for local in t.diagram_automorphisms() {
                let mut perm: Vec<usize> = (0..rank).collect();
                for (i, &j) in local.iter().enumerate() {
                    perm[off + i] = off + j;
                }
                out.push(perm);
            }
        }
        out
    }
}

/// Applies a node permutation to coordinates: `out[perm[i]] = v[i]`.
/// Both root coefficients and evaluation coordinates transform this way.
pub fn permute<T: Clone>(v: &[T], perm: &[usize]) -> Vec<T> {
    let mut out = v.to_vec();
    for (i, x) in v.iter().enumerate() {
        out[perm[i]] = x.clone();
    }
    out
}

fn reflection_closure(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..r {
        let mut e = vec![0i64; r];
        e[i] = 1;
        if seen.insert(e.clone()) {
            queue.push_back(e);
        }
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..r {
            let pairing: i64 = (0..r).map(|j| beta[j] * cartan[i][j]).sum();
            if pairing == 0 {
                continue;
            }
            let mut s = beta.clone();
            s[i] -= pairing;
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn ty(s: &str) -> SimpleType {
        s.parse().unwrap()
    }

    #[test]
    fn a1_and_a2() {
        let a1 = RootSystem::build(&[ty("A1")]).unwrap();
        assert_eq!(a1.roots(), &[vec![-1], vec![1]]);
        assert_eq!(a1.positive_roots().count(), 1);
        assert_eq!(a1.gram()[(0, 0)], int(2));

        let a2 = RootSystem::build(&[ty("A2")]).unwrap();
        assert_eq!(a2.roots().len(), 6);
        assert_eq!(a2.gram()[(0, 0)], int(4));
        assert_eq!(a2.gram()[(0, 1)], int(2));
        assert_eq!(a2.gram()[(1, 1)], int(4));
    }

    #[test]
    fn classical_counts() {
        for s in [
            "A1", "A4", "B2", "B5", "C3", "C5", "D3", "D4", "D5", "E6", "E7", "E8", "F4", "G2",
        ] {
            let t = ty(s);
            let rs = RootSystem::build(&[t]).unwrap();
            assert_eq!(rs.roots().len(), t.root_count(), "{s}");
            assert_eq!(rs.positive_roots().count() * 2, t.root_count(), "{s}");
        }
    }

    #[test]
    fn b_and_c_highest_roots() {
        // B_r highest root α_1 + 2α_2 + … + 2α_r; C_r highest root 2α_1 + … + 2α_{r-1} + α_r.
        let b3 = RootSystem::build(&[ty("B3")]).unwrap();
        assert!(b3.root_index(&[1, 2, 2]).is_some());
        assert!(b3.root_index(&[2, 2, 1]).is_none());
        let c3 = RootSystem::build(&[ty("C3")]).unwrap();
        assert!(c3.root_index(&[2, 2, 1]).is_some());
        let g2 = RootSystem::build(&[ty("G2")]).unwrap();
        assert!(g2.root_index(&[3, 2]).is_some());
    }

    #[test]
    fn inadmissible_types() {
        for s in ["D2", "B1", "C1", "E5", "E9", "F3", "G3", "A0", "X3", "D"] {
            assert!(s.parse::<SimpleType>().is_err(), "{s}");
        }
        assert_eq!(RootSystem::build(&[]).unwrap_err(), RootSystemError::Empty);
    }

    #[test]
    fn killing_dual_a1() {
        let a1 = RootSystem::build(&[ty("A1")]).unwrap();
        let h = a1.killing_dual(&FunctionalH::from_root(&[1])).unwrap();
        assert_eq!(h.0, vec![frac(1, 2)]);
        let z = a1.killing_dual(&FunctionalH(vec![int(0)])).unwrap();
        assert!(z.is_zero());
        assert!(a1.killing_dual(&FunctionalH(vec![int(0), int(1)])).is_err());
    }

    #[test]
    fn evaluate_pairing() {
        let e1 = VectorH::unit(2, 0);
        assert_eq!(
            evaluate(&FunctionalH::from_root(&[1, 0]), &e1).unwrap(),
            int(1)
        );
        assert_eq!(
            evaluate(&FunctionalH::from_root(&[1, 1]), &e1).unwrap(),
            int(1)
        );
        assert_eq!(
            evaluate(&FunctionalH::from_root(&[0, 0]), &e1).unwrap(),
            int(0)
        );
        assert!(evaluate(&FunctionalH::from_root(&[1]), &e1).is_err());
    }

    #[test]
    fn product_components_are_orthogonal() {
        let rs = RootSystem::build(&[ty("A1"), ty("A2")]).unwrap();
        assert_eq!(rs.roots().len(), 8);
        assert_eq!(rs.gram()[(0, 1)], int(0));
        assert_eq!(rs.gram()[(0, 2)], int(0));
        assert_eq!(rs.offsets(), &[0, 1]);
    }
}
