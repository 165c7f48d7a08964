//! Shift-periodic full heaps and their order filters.
//!
//! A heap is given by cells, each carrying a color, and cover templates
//! `(c, c2, δ)`: element `(c, t)` is covered by `(c2, t + δ)` for every
//! integer `t`. Each cell gets a rank `r(c)`, the length of the longest
//! chain of `δ = 0` templates ending at it; with period `p = max r + 1`
//! the element `(c, t)` sits at level `t·p + r(c)`. Levels strictly
//! increase along covers and every cell occurs exactly once in each block
//! of `p` consecutive levels.

mod filter;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::axioms::{check, Property};
use crate::bitset::ElementSet;
use crate::dynkin::{Color, DynkinDiagram, DynkinError};
use crate::poset::{ColoredPoset, PosetError};

pub use filter::{
    ColorCensus, Extension, ExtensionCase, FilterBound, InfiniteCheck, InfiniteReport, Saturation, SaturationStep,
    SemiInfiniteFilter,
};

/// The element `(cell, t)` of a periodic heap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HeapElement {
    pub cell: usize,
    pub t: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeapWitness {
    pub elements: Vec<HeapElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeapError {
    #[error("template ({0}, {1}, {2}) references a missing cell or has a shift outside 0..=1")]
    BadTemplate(usize, usize, i64),
    #[error("cell {cell} has color index {color} outside the diagram")]
    BadCellColor { cell: usize, color: usize },
    #[error("shift-0 templates form a cycle through cell {0}")]
    NotLocallyFinite(usize),
    #[error("{property} fails: {witnesses:?}")]
    AxiomFailure {
        property: String,
        witnesses: Vec<HeapWitness>,
    },
    #[error("color {0} has no cell, so its elements cannot form a copy of the integers")]
    ColorNotZChain(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("window contains no elements")]
    EmptyWindow,
    #[error("a filter needs at least one generator")]
    NoGenerators,
    #[error("generator references missing cell {0}")]
    UnknownCell(usize),
    #[error("no color has lower census 2")]
    NoEligibleColor,
    #[error("downward extension disagrees with the ambient heap: {0}")]
    AmbientMismatch(String),
    #[error("no periodicity detected after {0} steps")]
    NoConvergenceWithinBudget(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Dynkin(#[from] DynkinError),
}

/// Result of validating a periodic heap on its check window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeapValidation {
    pub window_levels: (i64, i64),
    pub ec: bool,
    pub na: bool,
    pub ac: bool,
    pub ice2: bool,
    pub g3: bool,
    pub g4: bool,
}

/// A finite window of a heap, together with the heap element behind each
/// window element id.
#[derive(Clone, Debug)]
pub struct Window {
    pub poset: ColoredPoset,
    pub elements: Vec<HeapElement>,
}

#[derive(Clone, Debug)]
pub struct PeriodicHeap {
    diagram: Arc<DynkinDiagram>,
    cells: Vec<Color>,
    templates: Vec<(usize, usize, u8)>,
    rank: Vec<usize>,
    period: usize,
    validation: HeapValidation,
}

impl PeriodicHeap {
    pub fn new(
        diagram: DynkinDiagram,
        cells: Vec<Color>,
        templates: Vec<(usize, usize, i64)>,
    ) -> Result<Self, HeapError> {
        let diagram = Arc::new(diagram);
        for (cell, &c) in cells.iter().enumerate() {
            if !diagram.contains(c) {
                return Err(HeapError::BadCellColor { cell, color: c.0 });
            }
        }
        let mut checked = Vec::with_capacity(templates.len());
        for &(c, c2, delta) in &templates {
            if c >= cells.len() || c2 >= cells.len() || !(0..=1).contains(&delta) {
                return Err(HeapError::BadTemplate(c, c2, delta));
            }
            checked.push((c, c2, delta as u8));
        }
        let rank = ranks(cells.len(), &checked)?;
        let period = rank.iter().max().map_or(1, |r| r + 1);
        for a in diagram.colors() {
            if !cells.contains(&a) {
                return Err(HeapError::ColorNotZChain(diagram.label(a).to_string()));
            }
        }
        let mut heap = Self {
            diagram,
            cells,
            templates: checked,
            rank,
            period,
            validation: HeapValidation {
                window_levels: (0, 0),
                ec: false,
                na: false,
                ac: false,
                ice2: false,
                g3: false,
                g4: false,
            },
        };
        heap.validation = heap.validate()?;
        Ok(heap)
    }

    /// Bi-infinite chain colored `0, 1, …, n−1, 0, 1, …` over the `n`-cycle.
    pub fn cycle(n: usize) -> Result<Self, HeapError> {
        if n < 3 {
            return Err(HeapError::BadParameter(format!(
                "cycle needs at least 3 colors, got {n}; the 2-node case is alternating_a1"
            )));
        }
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut theta = vec![vec![0i64; n]; n];
        for i in 0..n {
            theta[i][i] = 2;
            let j = (i + 1) % n;
            theta[i][j] = -1;
            theta[j][i] = -1;
        }
        let diagram = DynkinDiagram::new(labels, theta)?;
        let cells = (0..n).map(Color).collect();
        let mut templates: Vec<(usize, usize, i64)> = (0..n - 1).map(|i| (i, i + 1, 0)).collect();
        templates.push((n - 1, 0, 1));
        Self::new(diagram, cells, templates)
    }

    /// Alternating chain `… a < b < a < b …` with θ_ab = θ_ba = −2.
    pub fn alternating_a1() -> Result<Self, HeapError> {
        let diagram = DynkinDiagram::new(vec!["a", "b"], vec![vec![2, -2], vec![-2, 2]])?;
        Self::new(diagram, vec![Color(0), Color(1)], vec![(0, 1, 0), (1, 0, 1)])
    }

    /// `"cycle:N"` or `"alternating_a1"`.
    pub fn builtin(name: &str) -> Result<Self, HeapError> {
        if name == "alternating_a1" || name == "alternating_A1" {
            return Self::alternating_a1();
        }
        if let Some(n) = name.strip_prefix("cycle:") {
            let n = n
                .parse()
                .map_err(|_| HeapError::BadParameter(format!("bad cycle size {n:?}")))?;
            return Self::cycle(n);
        }
        Err(HeapError::BadParameter(format!("unknown builtin heap {name:?}")))
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    pub fn templates(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.templates.iter().map(|&(c, c2, d)| (c, c2, d as i64))
    }

    /// Levels per shift of `t` by one.
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn rank(&self, cell: usize) -> usize {
        self.rank[cell]
    }

    pub fn validation(&self) -> &HeapValidation {
        &self.validation
    }

    pub fn color_of(&self, e: HeapElement) -> Color {
        self.cells[e.cell]
    }

    pub fn level(&self, e: HeapElement) -> i64 {
        e.t * self.period as i64 + self.rank[e.cell] as i64
    }

    /// The element at `level` of the given cell, if the cell occurs there.
    pub fn element_at(&self, cell: usize, level: i64) -> Option<HeapElement> {
        let p = self.period as i64;
        let r = self.rank[cell] as i64;
        ((level - r).rem_euclid(p) == 0).then_some(HeapElement {
            cell,
            t: (level - r).div_euclid(p),
        })
    }

    /// All elements at a level, by cell index.
    pub fn elements_at(&self, level: i64) -> Vec<HeapElement> {
        (0..self.cells.len()).filter_map(|c| self.element_at(c, level)).collect()
    }

    pub fn upper_covers(&self, e: HeapElement) -> Vec<HeapElement> {
        self.templates
            .iter()
            .filter(|&&(c, _, _)| c == e.cell)
            .map(|&(_, c2, d)| HeapElement {
                cell: c2,
                t: e.t + d as i64,
            })
            .collect()
    }

    pub fn lower_covers(&self, e: HeapElement) -> Vec<HeapElement> {
        self.templates
            .iter()
            .filter(|&&(_, c2, _)| c2 == e.cell)
            .map(|&(c, _, d)| HeapElement {
                cell: c,
                t: e.t - d as i64,
            })
            .collect()
    }

    /// Elements with levels in `lo..=hi` and their induced order, over the
    /// full diagram (the coloring may miss colors).
    pub(crate) fn raw_window(&self, lo: i64, hi: i64, keep: impl Fn(HeapElement) -> bool) -> Result<Window, HeapError> {
        let mut elements = Vec::new();
        for level in lo..=hi {
            elements.extend(self.elements_at(level).into_iter().filter(|&e| keep(e)));
        }
        self.window_of(elements)
    }

    /// Induced order on a set of elements closed under betweenness.
    pub(crate) fn window_of(&self, elements: Vec<HeapElement>) -> Result<Window, HeapError> {
        let index: HashMap<HeapElement, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut covers = Vec::new();
        for (i, &e) in elements.iter().enumerate() {
            for u in self.upper_covers(e) {
                if let Some(&j) = index.get(&u) {
                    covers.push((i, j));
                }
            }
        }
        let colors = elements.iter().map(|&e| self.color_of(e)).collect();
        let poset = ColoredPoset::build(self.diagram.clone(), colors, covers)?;
        Ok(Window { poset, elements })
    }

    /// The finite colored poset on levels `lo..=hi`, re-based onto the
    /// colors it uses.
    pub fn window(&self, lo: i64, hi: i64) -> Result<Window, HeapError> {
        if lo >= hi {
            return Err(HeapError::EmptyWindow);
        }
        let w = self.raw_window(lo, hi, |_| true)?;
        if w.elements.is_empty() {
            return Err(HeapError::EmptyWindow);
        }
        let poset = w.poset.induced(&ElementSet::full(w.elements.len())).poset;
        Ok(Window {
            poset,
            elements: w.elements,
        })
    }

    /// Levels used for validation: three periods, and at least three times
    /// the cell count. Every cell occurs once per period, so same-colored
    /// and adjacent-colored elements recur within two periods; comparability
    /// and interval censuses for pairs starting in the first period are then
    /// decided inside the window, and shifts cover all other pairs.
    pub fn validation_levels(&self) -> (i64, i64) {
        let p = self.period;
        let periods = (3 * self.cells.len()).div_ceil(p).max(3);
        (0, (periods * p) as i64 - 1)
    }

    fn validate(&self) -> Result<HeapValidation, HeapError> {
        let (lo, hi) = self.validation_levels();
        let w = self.raw_window(lo, hi, |_| true)?;
        let mut result = HeapValidation {
            window_levels: (lo, hi),
            ec: false,
            na: false,
            ac: false,
            ice2: false,
            g3: false,
            g4: false,
        };
        for prop in [Property::EC, Property::NA, Property::AC, Property::ICE2] {
            let report = check(&w.poset, prop).expect("finite-decidable property");
            if !report.holds {
                return Err(HeapError::AxiomFailure {
                    property: prop.to_string(),
                    witnesses: report
                        .witnesses
                        .into_iter()
                        .map(|wit| HeapWitness {
                            elements: wit.elements.iter().map(|&i| w.elements[i]).collect(),
                            value: wit.value,
                            reason: wit.reason,
                        })
                        .collect(),
                });
            }
        }
        result.ec = true;
        result.na = true;
        result.ac = true;
        result.ice2 = true;
        // EC plus a cell for every color: each color class is a chain that
        // recurs in every period, unbounded both ways, hence a copy of ℤ.
        result.g3 = true;
        let g4 = self.check_g4();
        if !g4.is_empty() {
            return Err(HeapError::AxiomFailure {
                property: "G4".into(),
                witnesses: g4,
            });
        }
        result.g4 = true;
        Ok(result)
    }

    /// Elements of one period with no neighbor of some adjacent color.
    pub fn check_g4(&self) -> Vec<HeapWitness> {
        let d = &self.diagram;
        let mut out = Vec::new();
        for cell in 0..self.cells.len() {
            let e = HeapElement { cell, t: 0 };
            let a = self.cells[cell];
            let neighbors: Vec<HeapElement> = self.upper_covers(e).into_iter().chain(self.lower_covers(e)).collect();
            for b in d.neighbors(a) {
                if !neighbors.iter().any(|&n| self.color_of(n) == b) {
                    out.push(HeapWitness {
                        elements: vec![e],
                        value: None,
                        reason: format!("no neighbor of adjacent color {}", d.label(b)),
                    });
                }
            }
        }
        out
    }

    /// Least `t` with `(cell, t) ≥ from`, for every cell reachable upward
    /// from `from`. Templates are edges weighted by their shift, so this is
    /// a 0-1 shortest-path search.
    pub(crate) fn min_t_above(&self, from: HeapElement) -> Vec<Option<i64>> {
        let mut best: Vec<Option<i64>> = vec![None; self.cells.len()];
        best[from.cell] = Some(from.t);
        let mut queue = VecDeque::from([from.cell]);
        while let Some(c) = queue.pop_front() {
            let t = best[c].expect("queued cells have a distance");
            for &(src, c2, d) in &self.templates {
                if src != c {
                    continue;
                }
                let cand = t + d as i64;
                if best[c2].map_or(true, |b| cand < b) {
                    best[c2] = Some(cand);
                    if d == 0 {
                        queue.push_front(c2);
                    } else {
                        queue.push_back(c2);
                    }
                }
            }
        }
        best
    }
}

/// Longest chain of shift-0 templates ending at each cell.
fn ranks(n: usize, templates: &[(usize, usize, u8)]) -> Result<Vec<usize>, HeapError> {
    let mut indeg = vec![0usize; n];
    for &(_, c2, d) in templates {
        if d == 0 {
            indeg[c2] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&c| indeg[c] == 0).collect();
    let mut rank = vec![0usize; n];
    let mut done = 0;
    while let Some(c) = queue.pop_front() {
        done += 1;
        for &(src, c2, d) in templates {
            if src == c && d == 0 {
                rank[c2] = rank[c2].max(rank[c] + 1);
                indeg[c2] -= 1;
                if indeg[c2] == 0 {
                    queue.push_back(c2);
                }
            }
        }
    }
    if done < n {
        let stuck = (0..n).find(|&c| indeg[c] > 0).expect("a cell is on a cycle");
        return Err(HeapError::NotLocallyFinite(stuck));
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for n in 3..=6 {
            let h = PeriodicHeap::cycle(n).unwrap();
            assert!(h.validation().g4);
            assert_eq!(h.period(), n);
        }
        assert!(PeriodicHeap::alternating_a1().is_ok());
        assert!(matches!(PeriodicHeap::cycle(2), Err(HeapError::BadParameter(_))));
    }

    #[test]
    fn windows() {
        let h = PeriodicHeap::cycle(3).unwrap();
        let w = h.window(0, 5).unwrap();
        assert_eq!(w.poset.len(), 6);
        let labels: Vec<&str> = (0..6).map(|x| w.poset.diagram().label(w.poset.color(x))).collect();
        assert_eq!(labels, ["0", "1", "2", "0", "1", "2"]);
        assert!(w.poset.lt(0, 5));

        let a = PeriodicHeap::alternating_a1().unwrap();
        let w = a.window(0, 2).unwrap();
        let labels: Vec<&str> = (0..3).map(|x| w.poset.diagram().label(w.poset.color(x))).collect();
        assert_eq!(labels, ["a", "b", "a"]);
        assert!(matches!(a.window(4, 4), Err(HeapError::EmptyWindow)));
    }

    #[test]
    fn broken_cycle_is_rejected() {
        let h = PeriodicHeap::cycle(3).unwrap();
        let diagram = h.diagram().clone();
        let r = PeriodicHeap::new(diagram, h.cells().to_vec(), vec![(0, 1, 0), (1, 2, 0)]);
        assert!(matches!(r, Err(HeapError::AxiomFailure { .. })));
        let d = DynkinDiagram::new(vec!["a"], vec![vec![2]]).unwrap();
        let r = PeriodicHeap::new(d, vec![Color(0)], vec![(0, 0, 0)]);
        assert_eq!(r.unwrap_err(), HeapError::NotLocallyFinite(0));
    }

    #[test]
    fn shortest_shift_search() {
        let h = PeriodicHeap::cycle(3).unwrap();
        let best = h.min_t_above(HeapElement { cell: 1, t: 5 });
        assert_eq!(best, vec![Some(6), Some(5), Some(5)]);
    }
}
