//! Top trees, slant edges, slant decomposition and slant sums.

use serde::Serialize;
use thiserror::Error;

use super::{check, classify, Property, Witness};
use crate::bitset::ElementSet;
use crate::dynkin::{Color, DynkinDiagram, DynkinError};
use crate::poset::{ColoredPoset, PosetComponent, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlantError {
    #[error("not a connected dominant minuscule heap: {0}")]
    NotAHeap(String),
    #[error("part {part}: the color of element {element} occurs more than once")]
    ColorNotUnique { part: usize, element: usize },
    #[error("part {part}: element {element} is not maximal")]
    NotMaximal { part: usize, element: usize },
    #[error("join would violate UCB1")]
    WouldViolateUCB1(Vec<Witness>),
    #[error("the joined poset is not connected")]
    DisconnectedResult,
    #[error("color label {0:?} occurs in more than one part")]
    LabelClash(String),
    #[error("join theta must be negative, got {0}")]
    BadTheta(i64),
    #[error("colors {0:?} and {1:?} are joined twice")]
    DuplicateJoin(String, String),
    #[error("join references part {part} element {element}, which does not exist")]
    OutOfRange { part: usize, element: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Dynkin(#[from] DynkinError),
}

fn require_connected_heap(p: &ColoredPoset) -> Result<(), SlantError> {
    let c = classify(p);
    if !c.is_dominant_minuscule_heap {
        let failed: Vec<String> = c
            .reports
            .iter()
            .filter(|r| !r.holds)
            .map(|r| r.property.to_string())
            .collect();
        return Err(SlantError::NotAHeap(format!("fails {}", failed.join(", "))));
    }
    if c.component_count != 1 {
        return Err(SlantError::NotAHeap(format!("{} components", c.component_count)));
    }
    Ok(())
}

/// Maximal element of each color.
pub fn top_tree(p: &ColoredPoset) -> Result<ElementSet, SlantError> {
    require_connected_heap(p)?;
    Ok(top_elements(p))
}

fn top_elements(p: &ColoredPoset) -> ElementSet {
    ElementSet::from_iter_with_len(
        p.len(),
        p.elements()
            .filter(|&x| !p.elements_of_color(p.color(x)).any(|y| p.lt(x, y))),
    )
}

/// Covers `x → y` inside the top tree whose upper end is the only element
/// of its color.
pub fn slant_edges(p: &ColoredPoset) -> Result<Vec<(usize, usize)>, SlantError> {
    require_connected_heap(p)?;
    let top = top_elements(p);
    Ok(p.covers()
        .iter()
        .copied()
        .filter(|&(x, y)| top.contains(x) && top.contains(y) && p.color_count(p.color(y)) == 1)
        .collect())
}

/// A removed slant edge, located by part index and element index within
/// the part, with the two diagram entries it carried.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlantJoin {
    pub lower_part: usize,
    pub lower: usize,
    pub upper_part: usize,
    pub upper: usize,
    /// θ between the lower and upper colors.
    pub theta_lower_upper: i64,
    /// θ between the upper and lower colors; always −1 in a heap.
    pub theta_upper_lower: i64,
}

#[derive(Clone, Debug)]
pub struct SlantDecomposition {
    pub parts: Vec<PosetComponent>,
    pub joins: Vec<SlantJoin>,
    /// Whether each part is a slant irreducible heap.
    pub irreducible: Vec<bool>,
}

pub fn slant_decompose(p: &ColoredPoset) -> Result<SlantDecomposition, SlantError> {
    let edges = slant_edges(p)?;
    let mut diagram = p.diagram().clone();
    for &(x, y) in &edges {
        diagram = diagram.without_edge(p.color(x), p.color(y));
    }
    let covers = p.covers().iter().copied().filter(|e| !edges.contains(e)).collect();
    let cut = ColoredPoset::new(diagram, p.colors().to_vec(), covers)?;
    let parts = cut.components();
    let locate = |x: usize| {
        parts
            .iter()
            .enumerate()
            .find_map(|(i, part)| part.elements.iter().position(|&e| e == x).map(|j| (i, j)))
            .expect("every element lies in a part")
    };
    let d = p.diagram();
    let joins = edges
        .iter()
        .map(|&(x, y)| {
            let (lower_part, lower) = locate(x);
            let (upper_part, upper) = locate(y);
            SlantJoin {
                lower_part,
                lower,
                upper_part,
                upper,
                theta_lower_upper: d.theta(p.color(x), p.color(y)),
                theta_upper_lower: d.theta(p.color(y), p.color(x)),
            }
        })
        .collect();
    let irreducible = parts
        .iter()
        .map(|part| slant_edges(&part.poset).is_ok_and(|e| e.is_empty()))
        .collect();
    Ok(SlantDecomposition {
        parts,
        joins,
        irreducible,
    })
}

/// A requested slant join: element `lower` (maximal in its part) becomes
/// covered by `upper`, whose color must occur once in its part. The upper
/// color is made 1-adjacent to the lower one; the reverse entry defaults
/// to −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinSpec {
    pub lower_part: usize,
    pub lower: usize,
    pub upper_part: usize,
    pub upper: usize,
    pub theta_lower_upper: Option<i64>,
}

impl From<&SlantJoin> for JoinSpec {
    fn from(j: &SlantJoin) -> Self {
        Self {
            lower_part: j.lower_part,
            lower: j.lower,
            upper_part: j.upper_part,
            upper: j.upper,
            theta_lower_upper: Some(j.theta_lower_upper),
        }
    }
}

pub fn slant_sum(parts: &[ColoredPoset], joins: &[JoinSpec]) -> Result<ColoredPoset, SlantError> {
    let mut labels: Vec<String> = Vec::new();
    let mut color_offset = Vec::with_capacity(parts.len());
    let mut elem_offset = Vec::with_capacity(parts.len());
    let mut total = 0;
    for part in parts {
        color_offset.push(labels.len());
        elem_offset.push(total);
        total += part.len();
        for l in part.diagram().labels() {
            if labels.contains(l) {
                return Err(SlantError::LabelClash(l.clone()));
            }
            labels.push(l.clone());
        }
    }
    let m = labels.len();
    let mut theta = vec![vec![0i64; m]; m];
    for (i, part) in parts.iter().enumerate() {
        let d = part.diagram();
        for a in d.colors() {
            for b in d.colors() {
                theta[color_offset[i] + a.0][color_offset[i] + b.0] = d.theta(a, b);
            }
        }
    }
    let mut colors = Vec::with_capacity(total);
    let mut covers = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        colors.extend(part.colors().iter().map(|c| Color(c.0 + color_offset[i])));
        covers.extend(part.covers().iter().map(|&(x, y)| (x + elem_offset[i], y + elem_offset[i])));
    }
    for j in joins {
        let get = |part: usize, element: usize| {
            parts
                .get(part)
                .filter(|p| element < p.len())
                .ok_or(SlantError::OutOfRange { part, element })
        };
        let lower_poset = get(j.lower_part, j.lower)?;
        let upper_poset = get(j.upper_part, j.upper)?;
        if !lower_poset.is_maximal(j.lower) {
            return Err(SlantError::NotMaximal {
                part: j.lower_part,
                element: j.lower,
            });
        }
        if upper_poset.color_count(upper_poset.color(j.upper)) != 1 {
            return Err(SlantError::ColorNotUnique {
                part: j.upper_part,
                element: j.upper,
            });
        }
        let t = j.theta_lower_upper.unwrap_or(-1);
        if t >= 0 {
            return Err(SlantError::BadTheta(t));
        }
        let a = lower_poset.color(j.lower).0 + color_offset[j.lower_part];
        let b = upper_poset.color(j.upper).0 + color_offset[j.upper_part];
        if theta[a][b] != 0 {
            return Err(SlantError::DuplicateJoin(labels[a].clone(), labels[b].clone()));
        }
        theta[a][b] = t;
        theta[b][a] = -1;
        covers.push((j.lower + elem_offset[j.lower_part], j.upper + elem_offset[j.upper_part]));
    }
    let diagram = DynkinDiagram::new(labels, theta)?;
    let merged = ColoredPoset::new(diagram, colors, covers)?;
    if !merged.is_connected() {
        return Err(SlantError::DisconnectedResult);
    }
    let ucb = check(&merged, Property::UCB(1)).expect("finite-decidable property");
    if !ucb.holds {
        return Err(SlantError::WouldViolateUCB1(ucb.witnesses));
    }
    require_connected_heap(&merged)?;
    Ok(merged)
}
