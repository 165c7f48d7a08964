//! Enumeration of dominant minuscule heaps over a fixed diagram.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use super::{is_d_complete, AxiomError};
use crate::bitset::ElementSet;
use crate::dynkin::{Color, DynkinDiagram};
use crate::poset::ColoredPoset;

/// Every dominant minuscule heap with at most `max_size` elements whose
/// colors come from `d`, each re-based onto the sub-diagram of the colors
/// it uses, up to color-preserving isomorphism. Sorted by size, then by
/// canonical key.
///
/// Heaps are grown one minimal element at a time. Removing a minimal
/// element of a heap leaves a filter, which is again a heap over the colors
/// still present, so every heap is reached. A new minimal element of color
/// `c` must lie below every element of color `c` or of a color adjacent to
/// `c`, and its upper covers must have adjacent colors; that forces its
/// upper covers to be the minimal elements of that set.
pub fn enumerate_heaps(d: &DynkinDiagram, max_size: usize, cap: usize) -> Result<Vec<ColoredPoset>, AxiomError> {
    let full = Arc::new(d.clone());
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut level: Vec<ColoredPoset> = Vec::new();
    let mut out: Vec<(usize, Vec<u8>, ColoredPoset)> = Vec::new();
    if max_size == 0 {
        return Ok(Vec::new());
    }
    for c in d.colors() {
        let p = ColoredPoset::build(full.clone(), vec![c], vec![]).expect("singleton is valid");
        level.push(p);
    }
    for size in 1..=max_size {
        let keyed: Vec<(Vec<u8>, ColoredPoset)> = level.into_par_iter().map(|p| (p.canonical_key(), p)).collect();
        let fresh: Vec<(Vec<u8>, ColoredPoset)> = keyed.into_iter().filter(|(k, _)| seen.insert(k.clone())).collect();
        let heaps: Vec<(Vec<u8>, ColoredPoset)> = fresh.into_par_iter().filter(|(_, p)| is_d_complete(p)).collect();
        if out.len() + heaps.len() > cap {
            return Err(AxiomError::CapExceeded(cap));
        }
        level = if size < max_size {
            heaps
                .par_iter()
                .flat_map_iter(|(_, p)| d.colors().map(move |c| grow(p, c)))
                .collect()
        } else {
            Vec::new()
        };
        for (key, p) in heaps {
            let rebased = p.induced(&ElementSet::full(p.len())).poset;
            out.push((size, key, rebased));
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, p)| p).collect())
}

fn grow(p: &ColoredPoset, c: Color) -> ColoredPoset {
    let d = p.diagram();
    let n = p.len();
    let related = ElementSet::from_iter_with_len(
        n,
        p.elements().filter(|&x| p.color(x) == c || d.adjacent(p.color(x), c)),
    );
    let mut colors = p.colors().to_vec();
    colors.push(c);
    let mut covers = p.covers().to_vec();
    covers.extend(p.minimal_in(&related).into_iter().map(|m| (n, m)));
    ColoredPoset::build(p.shared_diagram().clone(), colors, covers).expect("new minimal element over an antichain")
}
