//! Dynkin diagrams as generalized Cartan matrices.
//!
//! Colors are identified by their index in the diagram; labels only matter
//! for I/O. Entry `theta(a, b)` is the integer the coloring axioms call
//! θ_ab, so `a` is `k`-adjacent to `b` when `theta(a, b) == -k`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a node of a Dynkin diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub usize);

impl Color {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynkinError {
    #[error("theta must be {expected}x{expected}, row {row} has {found} entries")]
    DimensionMismatch {
        expected: usize,
        row: usize,
        found: usize,
    },
    #[error("theta has {found} rows but there are {expected} labels")]
    RowCountMismatch { expected: usize, found: usize },
    #[error("theta[{0}][{0}] must be 2")]
    DiagonalNotTwo(String),
    #[error("theta[{0}][{1}] must be nonpositive")]
    PositiveOffDiagonal(String, String),
    #[error("theta[{0}][{1}] and theta[{1}][{0}] must be zero together")]
    AsymmetricZero(String, String),
    #[error("duplicate color label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown color {0}")]
    UnknownColor(String),
}

/// How two colors relate in the diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AdjacencyKind {
    Equal,
    Distant,
    /// `k_ab = -θ_ab`, `k_ba = -θ_ba`.
    Adjacent { k_ab: i64, k_ba: i64 },
}

/// A validated generalized Cartan matrix with labelled rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    labels: Vec<String>,
    theta: Vec<i64>,
}

impl fmt::Debug for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DynkinDiagram")
            .field("labels", &self.labels)
            .field("theta", &self.matrix())
            .finish()
    }
}

impl DynkinDiagram {
    pub fn new<S: Into<String>>(labels: Vec<S>, theta: Vec<Vec<i64>>) -> Result<Self, DynkinError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        if theta.len() != n {
            return Err(DynkinError::RowCountMismatch {
                expected: n,
                found: theta.len(),
            });
        }
        for (row, r) in theta.iter().enumerate() {
            if r.len() != n {
                return Err(DynkinError::DimensionMismatch {
                    expected: n,
                    row,
                    found: r.len(),
                });
            }
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(DynkinError::DuplicateLabel(l.clone()));
            }
        }
        for a in 0..n {
            if theta[a][a] != 2 {
                return Err(DynkinError::DiagonalNotTwo(labels[a].clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                if theta[a][b] > 0 {
                    return Err(DynkinError::PositiveOffDiagonal(
                        labels[a].clone(),
                        labels[b].clone(),
                    ));
                }
                if (theta[a][b] == 0) != (theta[b][a] == 0) {
                    let (x, y) = if a < b { (a, b) } else { (b, a) };
                    return Err(DynkinError::AsymmetricZero(
                        labels[x].clone(),
                        labels[y].clone(),
                    ));
                }
            }
        }
        Ok(Self {
            labels,
            theta: theta.into_iter().flatten().collect(),
        })
    }

    /// The simply laced diagram on `labels` with a single edge for every
    /// listed pair.
    pub fn simply_laced<S: Into<String>>(
        labels: Vec<S>,
        edges: &[(usize, usize)],
    ) -> Result<Self, DynkinError> {
        let n = labels.len();
        let mut theta = vec![vec![0; n]; n];
        for (i, row) in theta.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in edges {
            theta[a][b] = -1;
            theta[b][a] = -1;
        }
        Self::new(labels, theta)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        (0..self.len()).map(Color)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, c: Color) -> &str {
        &self.labels[c.0]
    }

    pub fn color(&self, label: &str) -> Result<Color, DynkinError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(Color)
            .ok_or_else(|| DynkinError::UnknownColor(label.to_owned()))
    }

    pub fn contains(&self, c: Color) -> bool {
        c.0 < self.len()
    }

    #[inline]
    pub fn theta(&self, a: Color, b: Color) -> i64 {
        self.theta[a.0 * self.len() + b.0]
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.theta.chunks(self.len().max(1)).map(<[i64]>::to_vec).collect()
    }

    /// `a ~ b`: distinct with θ_ab < 0.
    #[inline]
    pub fn adjacent(&self, a: Color, b: Color) -> bool {
        a != b && self.theta(a, b) < 0
    }

    /// Distinct and θ_ab = 0.
    #[inline]
    pub fn distant(&self, a: Color, b: Color) -> bool {
        a != b && self.theta(a, b) == 0
    }

    pub fn adjacency(&self, a: Color, b: Color) -> Result<AdjacencyKind, DynkinError> {
        for c in [a, b] {
            if !self.contains(c) {
                return Err(DynkinError::UnknownColor(c.to_string()));
            }
        }
        Ok(if a == b {
            AdjacencyKind::Equal
        } else if self.theta(a, b) == 0 {
            AdjacencyKind::Distant
        } else {
            AdjacencyKind::Adjacent {
                k_ab: -self.theta(a, b),
                k_ba: -self.theta(b, a),
            }
        })
    }

    pub fn neighbors(&self, a: Color) -> impl Iterator<Item = Color> + '_ {
        self.colors().filter(move |&b| self.adjacent(a, b))
    }

    /// Undirected edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(Color, Color)> {
        let mut out = Vec::new();
        for a in self.colors() {
            for b in self.colors() {
                if a < b && self.adjacent(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Whether the underlying simple graph is a forest.
    pub fn is_acyclic(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in self.edges() {
            let (ra, rb) = (find(&mut parent, a.0), find(&mut parent, b.0));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// The sub-diagram induced on `colors`, in the given order.
    pub fn induced(&self, colors: &[Color]) -> DynkinDiagram {
        let labels = colors.iter().map(|&c| self.labels[c.0].clone()).collect();
        let theta = colors
            .iter()
            .flat_map(|&a| colors.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.theta(a, b))
            .collect();
        DynkinDiagram { labels, theta }
    }

    /// Copy of this diagram with the Γ-edge between `a` and `b` deleted.
    pub fn without_edge(&self, a: Color, b: Color) -> DynkinDiagram {
        let mut out = self.clone();
        let n = self.len();
        out.theta[a.0 * n + b.0] = 0;
        out.theta[b.0 * n + a.0] = 0;
        out
    }

    /// Groups of colors forming the connected components, each sorted and
    /// the groups ordered by their least color.
    pub fn component_colors(&self) -> Vec<Vec<Color>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<Color>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut group = vec![];
            let mut queue = VecDeque::from([start]);
            comp[start] = id;
            while let Some(a) = queue.pop_front() {
                group.push(Color(a));
                for b in self.neighbors(Color(a)) {
                    if comp[b.0] == usize::MAX {
                        comp[b.0] = id;
                        queue.push_back(b.0);
                    }
                }
            }
            group.sort();
            out.push(group);
        }
        out
    }

    /// Connected components as standalone diagrams with maps from component
    /// color index back to the original color.
    pub fn components(&self) -> Vec<(DynkinDiagram, Vec<Color>)> {
        self.component_colors()
            .into_iter()
            .map(|g| (self.induced(&g), g))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_colors().len() <= 1
    }

    /// Positive rationals `d` with `d_a θ_ab = d_b θ_ba` for all `a, b`, if
    /// they exist. Ratios are propagated along a BFS spanning forest, the
    /// root of each component is set to 1, and every entry of the matrix is
    /// then re-checked.
    pub fn symmetrizer(&self) -> Option<Vec<Ratio<i128>>> {
        let n = self.len();
        let mut d: Vec<Option<Ratio<i128>>> = vec![None; n];
        for group in self.component_colors() {
            let root = group[0];
            d[root.0] = Some(Ratio::from_integer(1));
            let mut queue = VecDeque::from([root]);
            while let Some(a) = queue.pop_front() {
                let da = d[a.0].expect("queued colors are assigned");
                for b in self.neighbors(a) {
                    if d[b.0].is_none() {
                        // d_b = d_a θ_ab / θ_ba; both entries negative.
                        let db = da * Ratio::new(self.theta(a, b) as i128, self.theta(b, a) as i128);
                        d[b.0] = Some(db);
                        queue.push_back(b);
                    }
                }
            }
        }
        let d: Vec<Ratio<i128>> = d.into_iter().map(|x| x.expect("every color is reached")).collect();
        for a in self.colors() {
            for b in self.colors() {
                let lhs = d[a.0] * Ratio::from_integer(self.theta(a, b) as i128);
                let rhs = d[b.0] * Ratio::from_integer(self.theta(b, a) as i128);
                if lhs != rhs {
                    return None;
                }
            }
        }
        Some(d)
    }

    pub fn is_symmetrizable(&self) -> bool {
        self.symmetrizer().is_some()
    }
}
