//! Plumbing trees of disk bundles over spheres, the linear configurations
//! `C_p` and the `Ẽ₆` singular fiber inside `CP² # 9·CP̄²`.

use std::collections::VecDeque;
use std::fmt;

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Ambient, HomologyClass, LatticeError};
use crate::ratmath::{rat, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlumbingError {
    #[error("C_p needs p >= 2, got {0}")]
    InvalidP(i64),
    #[error("plumbing graph is not a tree: {0}")]
    NotATree(String),
    #[error("expected {expected} classes, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("classes do not realize the plumbing: {0}")]
    EmbeddingFailed(Mismatch),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Weighted tree; vertex `i` is a disk bundle of Euler number `weight`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlumbingGraph {
    vertices: Vec<(String, i64)>,
    edges: Vec<(usize, usize)>,
}

impl PlumbingGraph {
    pub fn new(vertices: Vec<(String, i64)>, edges: Vec<(usize, usize)>) -> Result<Self, PlumbingError> {
        let n = vertices.len();
        if n == 0 {
            return Err(PlumbingError::NotATree("no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(PlumbingError::NotATree(format!(
                "{} edges on {n} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return Err(PlumbingError::NotATree(format!("bad edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PlumbingError::NotATree("disconnected".into()));
        }
        Ok(Self { vertices, edges })
    }

    /// Linear chain with the given weights, vertex `i` adjacent to `i+1`.
    pub fn chain(names: Vec<String>, weights: &[i64]) -> Result<Self, PlumbingError> {
        let vertices = names.into_iter().zip(weights.iter().copied()).collect();
        let edges = (1..weights.len()).map(|i| (i - 1, i)).collect();
        Self::new(vertices, edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.vertices.iter().map(|(_, w)| *w).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.vertices.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    /// Intersection matrix: weights on the diagonal, `+1` on edges.
    pub fn intersection_matrix(&self) -> Matrix {
        let n = self.len();
        let mut m = Matrix::zeros(n, n);
        for (i, (_, w)) in self.vertices.iter().enumerate() {
            m.set(i, i, rat(*w));
        }
        for &(a, b) in &self.edges {
            m.set(a, b, rat(1));
            m.set(b, a, rat(1));
        }
        m
    }
}

/// Lens space `L(n, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LensSpace {
    pub n: i64,
    pub q: i64,
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}, {})", self.n, self.q)
    }
}

/// Boundary of a negative linear plumbing with weights `−a₁, …, −a_k`
/// (`aᵢ ≥ 2`), read from the continued fraction `[a₁, …, a_k] = n/q`.
/// The orientation follows the `L(n, −q)` convention, so `C_p` read from
/// `u_{p−1}` gives `L(p², 1−p)`.
pub fn chain_boundary(weights: &[i64]) -> LensSpace {
    // [a₁, …, a_k] = a₁ − 1/[a₂, …, a_k], evaluated from the tail.
    let (mut num, mut den) = (1i64, 0i64);
    for &w in weights.iter().rev() {
        let a = -w;
        let next_num = a * num - den;
        den = num;
        num = next_num;
    }
    LensSpace { n: num, q: -den }
}

/// The linear plumbing `C_p`: `u₁ − u₂ − … − u_{p−1}` with weights
/// `(−2, …, −2, −(p+2))`, oriented so that `uᵢ·uᵢ₊₁ = +1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    p: usize,
    graph: PlumbingGraph,
    plumbing_matrix: Matrix,
    dual_form: Matrix,
    boundary: LensSpace,
    embedded: Option<Vec<HomologyClass>>,
}

/// First entry where a candidate Gram matrix disagrees with `P` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    pub expected: i64,
    pub found: i64,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "u{}·u{} = {} but the plumbing requires {} (entry ({}, {}))",
            self.row, self.col, self.found, self.expected, self.row, self.col
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingCheck {
    pub gram: Vec<Vec<i64>>,
    pub mismatch: Option<Mismatch>,
}

impl EmbeddingCheck {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none()
    }
}

pub fn make_cp(p: i64) -> Result<Configuration, PlumbingError> {
    if p < 2 {
        return Err(PlumbingError::InvalidP(p));
    }
    let len = (p - 1) as usize;
    let mut weights = vec![-2; len];
    weights[len - 1] = -(p + 2);
    let names = (1..=len).map(|i| format!("u{i}")).collect();
    let graph = PlumbingGraph::chain(names, &weights)?;
    let plumbing_matrix = graph.intersection_matrix();
    let dual_form = plumbing_matrix
        .invert()
        .expect("C_p plumbing matrix has determinant ±p²");
    Ok(Configuration {
        p: p as usize,
        graph,
        plumbing_matrix,
        dual_form,
        boundary: LensSpace { n: p * p, q: 1 - p },
        embedded: None,
    })
}

impl Configuration {
    pub fn p(&self) -> usize {
        self.p
    }

    /// Rank of `H₂(C_p)`, i.e. `p − 1`.
    pub fn rank(&self) -> usize {
        self.p - 1
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    /// The plumbing matrix `P` in the basis `u₁, …, u_{p−1}`.
    pub fn plumbing_matrix(&self) -> &Matrix {
        &self.plumbing_matrix
    }

    /// `Q = P⁻¹`, the form on `H²(C_p; Q)` in the dual basis `γᵢ`.
    pub fn dual_form(&self) -> &Matrix {
        &self.dual_form
    }

    pub fn boundary(&self) -> LensSpace {
        self.boundary
    }

    pub fn embedded_classes(&self) -> Option<&[HomologyClass]> {
        self.embedded.as_deref()
    }

    pub fn ambient(&self) -> Option<Ambient> {
        self.embedded.as_ref().map(|c| c[0].ambient())
    }

    /// Compares the ambient Gram matrix of `classes` against `P`. Diagonal
    /// (self-intersection) entries are checked before off-diagonal ones, each
    /// in row-major order; the first disagreement is reported.
    pub fn verify_embedding(&self, classes: &[HomologyClass]) -> Result<EmbeddingCheck, PlumbingError> {
        if classes.len() != self.rank() {
            return Err(PlumbingError::LengthMismatch { expected: self.rank(), found: classes.len() });
        }
        let k = classes.len();
        let mut gram = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = classes[i].pair(&classes[j])?;
            }
        }
        let expected = |i: usize, j: usize| -> i64 {
            let v = self.plumbing_matrix.get(i, j);
            v.to_integer().try_into().expect("small integer plumbing entry")
        };
        let diagonal = (0..k).map(|i| (i, i));
        let off_diagonal = (0..k).flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)));
        let mismatch = diagonal.chain(off_diagonal).find_map(|(i, j)| {
            let want = expected(i, j);
            (gram[i][j] != want).then_some(Mismatch {
                row: i + 1,
                col: j + 1,
                expected: want,
                found: gram[i][j],
            })
        });
        Ok(EmbeddingCheck { gram, mismatch })
    }

    /// Attaches ambient classes realizing `u₁, …, u_{p−1}`; fails unless
    /// their Gram matrix is exactly `P`.
    pub fn with_embedding(mut self, classes: Vec<HomologyClass>) -> Result<Self, PlumbingError> {
        let check = self.verify_embedding(&classes)?;
        if let Some(m) = check.mismatch {
            return Err(PlumbingError::EmbeddingFailed(m));
        }
        self.embedded = Some(classes);
        Ok(self)
    }

    /// `|det P|`, which equals `p²`.
    pub fn determinant_abs(&self) -> Rational {
        self.plumbing_matrix.determinant().expect("square").abs()
    }
}

/// The `Ẽ₆` fiber as a plumbing of seven `−2` spheres in `CP² # 9·CP̄²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E6Tilde {
    pub graph: PlumbingGraph,
    /// `S₁, …, S₇` in the ambient `n = 9`.
    pub classes: Vec<HomologyClass>,
    /// Fiber multiplicities of `S₁, …, S₇`.
    pub multiplicities: Vec<i64>,
}

impl E6Tilde {
    /// `Σ mᵢ·Sᵢ`.
    pub fn fiber_sum(&self) -> HomologyClass {
        let ambient = self.classes[0].ambient();
        self.classes
            .iter()
            .zip(&self.multiplicities)
            .fold(ambient.zero(), |acc, (s, &m)| &acc + &(m * s))
    }

    /// Pairwise intersections `Sᵢ·Sⱼ`.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        self.classes
            .iter()
            .map(|a| self.classes.iter().map(|b| a.pair(b).expect("same ambient")).collect())
            .collect()
    }

    /// Re-embeds `S₁, …, S₇` into a larger ambient by zero-extension.
    pub fn classes_in(&self, ambient: Ambient) -> Result<Vec<HomologyClass>, LatticeError> {
        self.classes
            .iter()
            .map(|c| {
                let mut v = c.coeffs().to_vec();
                if ambient.rank() < v.len() {
                    return Err(LatticeError::RankMismatch { expected: v.len(), found: ambient.rank() });
                }
                v.resize(ambient.rank(), 0);
                ambient.class(v)
            })
            .collect()
    }
}

/// Chain `S₁ − S₂ − S₃ − S₄ − S₅` with the stem `S₃ − S₆ − S₇`.
pub fn make_e6_tilde() -> E6Tilde {
    let a = Ambient::new(9);
    let e = |i| a.e(i);
    let classes = vec![
        &e(4) - &e(7),
        &e(1) - &e(4),
        &(&(&a.h() - &e(1)) - &e(2)) - &e(3),
        &e(2) - &e(5),
        &e(5) - &e(9),
        &e(3) - &e(6),
        &e(6) - &e(8),
    ];
    let vertices = (1..=7).map(|i| (format!("S{i}"), -2)).collect();
    let edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)];
    let graph = PlumbingGraph::new(vertices, edges).expect("E6-tilde is a tree");
    E6Tilde { graph, classes, multiplicities: vec![1, 2, 3, 2, 1, 2, 1] }
}
