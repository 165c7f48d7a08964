//! Finite colored posets.
//!
//! Elements are the dense ids `0..n`. A poset is given by its cover
//! relation; `(x, y)` in the cover list means `x → y`, i.e. `x` is covered
//! by `y`. The strict order is precomputed as one bit row per element.

mod canonical;
pub mod generate;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bitset::ElementSet;
use crate::dynkin::{Color, DynkinDiagram};

pub(crate) use canonical::canonical_form;

/// Default bound on split and linear-extension enumeration.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("cover ({0}, {1}) references an element outside 0..{2}")]
    CoverOutOfRange(usize, usize, usize),
    #[error("element {element} has color index {color} outside the diagram")]
    UnknownColor { element: usize, color: usize },
    #[error("covers contain a cycle through element {0}")]
    CoverCycle(usize),
    #[error("cover ({0}, {1}) is implied by other covers")]
    TransitiveEdge(usize, usize),
    #[error("cover ({0}, {1}) is listed twice")]
    DuplicateCover(usize, usize),
    #[error("color {0} is not used by any element")]
    ColorUnused(String),
    #[error("elements {0} and {1} are not comparable")]
    NotComparable(usize, usize),
    #[error("enumeration exceeded its cap after {0} items")]
    CapExceeded(usize),
    #[error("diagram has {found} colors, poset needs {expected}")]
    DiagramMismatch { expected: usize, found: usize },
}

/// A finite poset whose elements are colored by the nodes of a Dynkin
/// diagram, with a surjective coloring.
#[derive(Clone)]
pub struct ColoredPoset {
    diagram: Arc<DynkinDiagram>,
    colors: Vec<Color>,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    words: usize,
    above: Vec<u64>,
    below: Vec<u64>,
}

impl fmt::Debug for ColoredPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let colors: Vec<&str> = self.colors.iter().map(|&c| self.diagram.label(c)).collect();
        f.debug_struct("ColoredPoset")
            .field("colors", &colors)
            .field("covers", &self.covers)
            .finish()
    }
}

impl PartialEq for ColoredPoset {
    fn eq(&self, other: &Self) -> bool {
        self.diagram == other.diagram && self.colors == other.colors && self.covers == other.covers
    }
}

impl Eq for ColoredPoset {}

/// A filter together with its complementary ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    pub filter: ElementSet,
    pub ideal: ElementSet,
}

impl Split {
    pub fn from_filter(filter: ElementSet) -> Self {
        let ideal = filter.complement();
        Self { filter, ideal }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub open: ElementSet,
    pub closed: ElementSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorChain {
    /// The color class, listed bottom to top.
    Chain(Vec<usize>),
    NonChain { elements: Vec<usize>, witness: (usize, usize) },
}

/// A connected component re-packaged over the sub-diagram of the colors it
/// uses.
#[derive(Clone, Debug)]
pub struct PosetComponent {
    pub poset: ColoredPoset,
    /// `elements[i]` is the original id of component element `i`.
    pub elements: Vec<usize>,
    /// `colors[j]` is the original color of component color `j`.
    pub colors: Vec<Color>,
}

impl ColoredPoset {
    pub fn new(
        diagram: DynkinDiagram,
        colors: Vec<Color>,
        covers: Vec<(usize, usize)>,
    ) -> Result<Self, PosetError> {
        Self::with_shared_diagram(Arc::new(diagram), colors, covers)
    }

    pub fn with_shared_diagram(
        diagram: Arc<DynkinDiagram>,
        colors: Vec<Color>,
        covers: Vec<(usize, usize)>,
    ) -> Result<Self, PosetError> {
        let p = Self::build(diagram, colors, covers)?;
        let mut used = vec![false; p.diagram.len()];
        for &c in &p.colors {
            used[c.0] = true;
        }
        if let Some(a) = used.iter().position(|&u| !u) {
            return Err(PosetError::ColorUnused(p.diagram.labels()[a].clone()));
        }
        Ok(p)
    }

    /// Validates everything except surjectivity of the coloring.
    pub(crate) fn build(
        diagram: Arc<DynkinDiagram>,
        colors: Vec<Color>,
        mut covers: Vec<(usize, usize)>,
    ) -> Result<Self, PosetError> {
        let n = colors.len();
        for (x, &c) in colors.iter().enumerate() {
            if !diagram.contains(c) {
                return Err(PosetError::UnknownColor { element: x, color: c.0 });
            }
        }
        for &(x, y) in &covers {
            if x >= n || y >= n {
                return Err(PosetError::CoverOutOfRange(x, y, n));
            }
            if x == y {
                return Err(PosetError::CoverCycle(x));
            }
        }
        covers.sort_unstable();
        if let Some(w) = covers.windows(2).find(|w| w[0] == w[1]) {
            return Err(PosetError::DuplicateCover(w[0].0, w[0].1));
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(x, y) in &covers {
            up[x].push(y);
            down[y].push(x);
        }
        // Kahn order, top elements first, so `above` rows are complete when used.
        let mut outdeg: Vec<usize> = up.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..n).rev().filter(|&x| outdeg[x] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(x) = stack.pop() {
            topo.push(x);
            for &w in &down[x] {
                outdeg[w] -= 1;
                if outdeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&x| outdeg[x] > 0).expect("some element is on a cycle");
            return Err(PosetError::CoverCycle(stuck));
        }
        let words = n.div_ceil(64).max(1);
        let mut above = vec![0u64; n * words];
        for &x in &topo {
            for &y in &up[x] {
                above[x * words + y / 64] |= 1 << (y % 64);
                for w in 0..words {
                    above[x * words + w] |= above[y * words + w];
                }
            }
        }
        let mut below = vec![0u64; n * words];
        for x in 0..n {
            for y in 0..n {
                if above[x * words + y / 64] >> (y % 64) & 1 == 1 {
                    below[y * words + x / 64] |= 1 << (x % 64);
                }
            }
        }
        let p = Self {
            diagram,
            colors,
            covers,
            up,
            down,
            words,
            above,
            below,
        };
        for &(x, y) in &p.covers {
            if p.up[x].iter().any(|&z| z != y && p.lt(z, y)) {
                return Err(PosetError::TransitiveEdge(x, y));
            }
        }
        Ok(p)
    }

    /// The same ordered, colored structure over another diagram with the
    /// same number of colors.
    pub fn with_diagram(&self, diagram: Arc<DynkinDiagram>) -> Result<Self, PosetError> {
        if diagram.len() != self.diagram.len() {
            return Err(PosetError::DiagramMismatch {
                expected: self.diagram.len(),
                found: diagram.len(),
            });
        }
        let mut p = self.clone();
        p.diagram = diagram;
        Ok(p)
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn shared_diagram(&self) -> &Arc<DynkinDiagram> {
        &self.diagram
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    #[inline]
    pub fn color(&self, x: usize) -> Color {
        self.colors[x]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.above[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.lt(y, x)
    }

    pub fn covers_pair(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(&y)
    }

    fn row(&self, rows: &[u64], x: usize) -> ElementSet {
        ElementSet::from_iter_with_len(
            self.len(),
            (0..self.len()).filter(|&y| rows[x * self.words + y / 64] >> (y % 64) & 1 == 1),
        )
    }

    /// Elements strictly above `x`.
    pub fn strictly_above(&self, x: usize) -> ElementSet {
        self.row(&self.above, x)
    }

    /// Elements strictly below `x`.
    pub fn strictly_below(&self, x: usize) -> ElementSet {
        self.row(&self.below, x)
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        self.down[x].is_empty()
    }

    pub fn is_maximal(&self, x: usize) -> bool {
        self.up[x].is_empty()
    }

    pub fn elements_of_color(&self, a: Color) -> impl Iterator<Item = usize> + '_ {
        self.elements().filter(move |&x| self.colors[x] == a)
    }

    pub fn color_count(&self, a: Color) -> usize {
        self.elements_of_color(a).count()
    }

    /// Open and closed intervals between `x ≤ y`.
    pub fn interval(&self, x: usize, y: usize) -> Result<Interval, PosetError> {
        if !self.le(x, y) {
            return Err(PosetError::NotComparable(x, y));
        }
        let open = ElementSet::from_iter_with_len(
            self.len(),
            self.elements().filter(|&z| self.lt(x, z) && self.lt(z, y)),
        );
        let mut closed = open.clone();
        closed.insert(x);
        closed.insert(y);
        Ok(Interval { open, closed })
    }

    /// `P_a`, sorted bottom to top when it is a chain.
    pub fn color_chain(&self, a: Color) -> ColorChain {
        let mut elems: Vec<usize> = self.elements_of_color(a).collect();
        for (i, &x) in elems.iter().enumerate() {
            for &y in &elems[i + 1..] {
                if !self.comparable(x, y) {
                    return ColorChain::NonChain {
                        elements: elems.clone(),
                        witness: (x, y),
                    };
                }
            }
        }
        elems.sort_by(|&x, &y| {
            if x == y {
                std::cmp::Ordering::Equal
            } else if self.lt(x, y) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        ColorChain::Chain(elems)
    }

    pub fn is_filter(&self, s: &ElementSet) -> bool {
        s.iter().all(|x| self.up[x].iter().all(|&y| s.contains(y)))
    }

    pub fn is_ideal(&self, s: &ElementSet) -> bool {
        s.iter().all(|x| self.down[x].iter().all(|&y| s.contains(y)))
    }

    pub fn up_closure(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        let mut s = ElementSet::empty(self.len());
        for g in gens {
            s.insert(g);
            s.union_with(&self.strictly_above(g));
        }
        s
    }

    pub fn down_closure(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        let mut s = ElementSet::empty(self.len());
        for g in gens {
            s.insert(g);
            s.union_with(&self.strictly_below(g));
        }
        s
    }

    /// Minimal elements of a subset under the induced order.
    pub fn minimal_in(&self, s: &ElementSet) -> Vec<usize> {
        s.iter().filter(|&x| !s.iter().any(|y| self.lt(y, x))).collect()
    }

    pub fn maximal_in(&self, s: &ElementSet) -> Vec<usize> {
        s.iter().filter(|&x| !s.iter().any(|y| self.lt(x, y))).collect()
    }

    /// The subposet induced on `subset` (ids renumbered in increasing order),
    /// over the full diagram. Returns the poset and the map back to `self`.
    /// The coloring may fail to be surjective.
    pub(crate) fn induced_unchecked(&self, subset: &ElementSet) -> (ColoredPoset, Vec<usize>) {
        let elems: Vec<usize> = subset.iter().collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let mut covers = Vec::new();
        for &x in &elems {
            for &y in &elems {
                if self.lt(x, y) && !elems.iter().any(|&z| self.lt(x, z) && self.lt(z, y)) {
                    covers.push((pos[x], pos[y]));
                }
            }
        }
        let colors = elems.iter().map(|&x| self.colors[x]).collect();
        let p = Self::build(self.diagram.clone(), colors, covers)
            .expect("restriction of a valid order is valid");
        (p, elems)
    }

    /// The subposet induced on `subset`, re-based onto the sub-diagram of the
    /// colors it uses (kept in diagram order).
    pub fn induced(&self, subset: &ElementSet) -> PosetComponent {
        let (p, elements) = self.induced_unchecked(subset);
        let mut used: Vec<Color> = p.colors.clone();
        used.sort();
        used.dedup();
        let mut remap = vec![Color(usize::MAX); self.diagram.len()];
        for (j, &c) in used.iter().enumerate() {
            remap[c.0] = Color(j);
        }
        let diagram = Arc::new(self.diagram.induced(&used));
        let colors = p.colors.iter().map(|&c| remap[c.0]).collect();
        let poset = Self::with_shared_diagram(diagram, colors, p.covers)
            .expect("re-based coloring is surjective");
        PosetComponent {
            poset,
            elements,
            colors: used,
        }
    }

    /// Connected components ordered by least element.
    pub fn components(&self) -> Vec<PosetComponent> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut groups: Vec<ElementSet> = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut set = ElementSet::empty(n);
            let mut queue = VecDeque::from([s]);
            comp[s] = id;
            while let Some(x) = queue.pop_front() {
                set.insert(x);
                for &y in self.up[x].iter().chain(&self.down[x]) {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        queue.push_back(y);
                    }
                }
            }
            groups.push(set);
        }
        groups.iter().map(|g| self.induced(g)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// A path from `x` to `y` in the Hasse diagram (covers traversed in
    /// either direction), if one exists.
    pub fn hasse_path(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.len()];
        prev[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(z) = queue.pop_front() {
            if z == y {
                let mut path = vec![y];
                let mut cur = y;
                while cur != x {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in self.up[z].iter().chain(&self.down[z]) {
                if prev[w] == usize::MAX {
                    prev[w] = z;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Order dual: every cover reversed, colors unchanged.
    pub fn dual(&self) -> ColoredPoset {
        let covers = self.covers.iter().map(|&(x, y)| (y, x)).collect();
        Self::build(self.diagram.clone(), self.colors.clone(), covers).expect("dual of a poset is a poset")
    }

    /// Every split, ordered by the filter's membership bitmask read as an
    /// unsigned integer.
    pub fn splits(&self, cap: usize) -> Result<Vec<Split>, PosetError> {
        // Decide membership top-down: an element may join the filter only
        // when all its upper covers already have.
        let mut order = Vec::with_capacity(self.len());
        let mut outdeg: Vec<usize> = self.up.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..self.len()).rev().filter(|&x| outdeg[x] == 0).collect();
        while let Some(x) = stack.pop() {
            order.push(x);
            for &w in &self.down[x] {
                outdeg[w] -= 1;
                if outdeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        let mut filters = Vec::new();
        let mut current = ElementSet::empty(self.len());
        self.filters_rec(&order, 0, &mut current, &mut filters, cap)?;
        filters.sort();
        Ok(filters.into_iter().map(Split::from_filter).collect())
    }

    fn filters_rec(
        &self,
        order: &[usize],
        i: usize,
        current: &mut ElementSet,
        out: &mut Vec<ElementSet>,
        cap: usize,
    ) -> Result<(), PosetError> {
        if i == order.len() {
            if out.len() >= cap {
                return Err(PosetError::CapExceeded(out.len()));
            }
            out.push(current.clone());
            return Ok(());
        }
        let x = order[i];
        self.filters_rec(order, i + 1, current, out, cap)?;
        if self.up[x].iter().all(|&y| current.contains(y)) {
            current.insert(x);
            self.filters_rec(order, i + 1, current, out, cap)?;
            current.remove(x);
        }
        Ok(())
    }

    /// The lexicographically least linear extension, bottom to top.
    pub fn first_linear_extension(&self) -> Vec<usize> {
        let mut indeg: Vec<usize> = self.down.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> = self.elements().filter(|&x| indeg[x] == 0).collect();
        let mut out = Vec::with_capacity(self.len());
        while let Some(x) = ready.pop_first() {
            out.push(x);
            for &y in &self.up[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        out
    }

    /// Linear extensions listed bottom to top, in lexicographic order of the
    /// element sequences.
    pub fn linear_extensions(&self, cap: usize) -> Result<Vec<Vec<usize>>, PosetError> {
        let mut indeg: Vec<usize> = self.down.iter().map(Vec::len).collect();
        let mut prefix = Vec::with_capacity(self.len());
        let mut out = Vec::new();
        self.extensions_rec(&mut indeg, &mut prefix, &mut out, cap)?;
        Ok(out)
    }

    fn extensions_rec(
        &self,
        indeg: &mut [usize],
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<(), PosetError> {
        if prefix.len() == self.len() {
            if out.len() >= cap {
                return Err(PosetError::CapExceeded(out.len()));
            }
            out.push(prefix.clone());
            return Ok(());
        }
        for x in 0..self.len() {
            if indeg[x] != 0 || prefix.contains(&x) {
                continue;
            }
            prefix.push(x);
            for &y in &self.up[x] {
                indeg[y] -= 1;
            }
            let r = self.extensions_rec(indeg, prefix, out, cap);
            for &y in &self.up[x] {
                indeg[y] += 1;
            }
            prefix.pop();
            r?;
        }
        Ok(())
    }

    /// A key that is equal for two posets exactly when there is an order
    /// isomorphism between them preserving color labels. The diagram takes
    /// part in the key with its colors sorted by label, so the order in
    /// which a diagram lists its colors does not matter.
    pub fn canonical_key(&self) -> Vec<u8> {
        let labels = self.diagram.labels();
        let mut by_label: Vec<usize> = (0..labels.len()).collect();
        by_label.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut rank = vec![0u32; labels.len()];
        for (r, &a) in by_label.iter().enumerate() {
            rank[a] = r as u32;
        }
        let mut key = Vec::new();
        key.extend((labels.len() as u32).to_le_bytes());
        for &a in &by_label {
            key.extend((labels[a].len() as u32).to_le_bytes());
            key.extend(labels[a].as_bytes());
        }
        for &a in &by_label {
            for &b in &by_label {
                key.extend((self.diagram.theta(Color(a), Color(b)) as i32).to_le_bytes());
            }
        }
        let ranks: Vec<u32> = self.colors.iter().map(|c| rank[c.0]).collect();
        let canon = canonical_form(&ranks, &self.up);
        for v in canon.code {
            key.extend(v.to_le_bytes());
        }
        key
    }

    /// Lower-case hex of the canonical key, for JSON output.
    pub fn canonical_key_hex(&self) -> String {
        self.canonical_key().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Relabel elements so that `perm[old] = new`.
    pub fn permuted(&self, perm: &[usize]) -> ColoredPoset {
        let n = self.len();
        let mut colors = vec![Color(0); n];
        for x in 0..n {
            colors[perm[x]] = self.colors[x];
        }
        let covers = self.covers.iter().map(|&(x, y)| (perm[x], perm[y])).collect();
        Self::build(self.diagram.clone(), colors, covers).expect("relabelling preserves validity")
    }
}
