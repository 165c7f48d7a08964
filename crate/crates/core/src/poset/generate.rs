//! Exhaustive generation of small colored posets up to isomorphism.
//!
//! Every poset on `n` elements arises from one on `n - 1` elements by
//! adjoining a new maximal element above some antichain, so growing level
//! by level and deduplicating on the canonical code visits each
//! isomorphism class once.

use std::collections::HashSet;
use std::sync::Arc;

use super::{canonical_form, ColoredPoset, PosetError};
use crate::dynkin::{Color, DynkinDiagram};

/// A colored poset shape independent of any diagram: colors are plain
/// indices and elements are numbered in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredShape {
    pub colors: Vec<u32>,
    pub covers: Vec<(usize, usize)>,
}

impl ColoredShape {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn uses_all_colors(&self, num_colors: usize) -> bool {
        let mut used = vec![false; num_colors];
        for &c in &self.colors {
            used[c as usize] = true;
        }
        used.iter().all(|&u| u)
    }

    pub fn poset(&self, diagram: Arc<DynkinDiagram>) -> Result<ColoredPoset, PosetError> {
        let colors = self.colors.iter().map(|&c| Color(c as usize)).collect();
        ColoredPoset::with_shared_diagram(diagram, colors, self.covers.clone())
    }

    fn up_lists(&self) -> Vec<Vec<usize>> {
        let mut up = vec![Vec::new(); self.len()];
        for &(x, y) in &self.covers {
            up[x].push(y);
        }
        up
    }
}

/// All colored posets with at most `max_size` elements and colors drawn
/// from `0..num_colors` (not necessarily all used), up to color-preserving
/// isomorphism. `result[n]` holds the shapes with exactly `n` elements,
/// sorted by canonical code.
pub fn colored_shapes(num_colors: usize, max_size: usize) -> Vec<Vec<ColoredShape>> {
    assert!(max_size < 64, "shapes are tracked with 64-bit masks");
    let mut levels = vec![vec![ColoredShape {
        colors: vec![],
        covers: vec![],
    }]];
    for _ in 0..max_size {
        let prev = levels.last().expect("level 0 exists");
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut next: Vec<(Vec<u32>, ColoredShape)> = Vec::new();
        for shape in prev {
            let n = shape.len();
            let below = strict_down_masks(shape);
            for antichain in antichains(n, &below) {
                for c in 0..num_colors as u32 {
                    let mut colors = shape.colors.clone();
                    colors.push(c);
                    let mut covers = shape.covers.clone();
                    covers.extend(antichain.iter().map(|&x| (x, n)));
                    let grown = ColoredShape { colors, covers };
                    let canon = canonical_form(&grown.colors, &grown.up_lists());
                    if seen.insert(canon.code.clone()) {
                        next.push((canon.code, relabel(&grown, &canon.order)));
                    }
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        levels.push(next.into_iter().map(|(_, s)| s).collect());
    }
    levels
}

/// `below[x]` is the mask of elements strictly below `x`.
fn strict_down_masks(shape: &ColoredShape) -> Vec<u64> {
    let n = shape.len();
    let mut down = vec![Vec::new(); n];
    for &(x, y) in &shape.covers {
        down[y].push(x);
    }
    let mut below = vec![0u64; n];
    // canonical order need not be topological, so iterate to a fixed point
    let mut changed = true;
    while changed {
        changed = false;
        for y in 0..n {
            let mut m = below[y];
            for &x in &down[y] {
                m |= below[x] | 1 << x;
            }
            if m != below[y] {
                below[y] = m;
                changed = true;
            }
        }
    }
    below
}

fn antichains(n: usize, below: &[u64]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    antichain_rec(0, n, below, &mut current, &mut out);
    out
}

fn antichain_rec(i: usize, n: usize, below: &[u64], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == n {
        out.push(current.clone());
        return;
    }
    antichain_rec(i + 1, n, below, current, out);
    let free = current
        .iter()
        .all(|&x| below[x] >> i & 1 == 0 && below[i] >> x & 1 == 0);
    if free {
        current.push(i);
        antichain_rec(i + 1, n, below, current, out);
        current.pop();
    }
}

fn relabel(shape: &ColoredShape, order: &[usize]) -> ColoredShape {
    let mut pos = vec![0; order.len()];
    for (p, &x) in order.iter().enumerate() {
        pos[x] = p;
    }
    let colors = order.iter().map(|&x| shape.colors[x]).collect();
    let mut covers: Vec<(usize, usize)> = shape.covers.iter().map(|&(x, y)| (pos[x], pos[y])).collect();
    covers.sort_unstable();
    ColoredShape { colors, covers }
}
