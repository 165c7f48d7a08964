//! JSON documents for diagrams, posets, periodic heaps and filters.
//!
//! Errors carry a JSON pointer to the offending value.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dynkin::{Color, DynkinDiagram};
use crate::heap_periodic::{HeapElement, PeriodicHeap, SemiInfiniteFilter};
use crate::poset::ColoredPoset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    pub source: String,
    pub pointer: String,
    pub reason: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pointer = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{}: at {}: {}", self.source, pointer, self.reason)
    }
}

impl std::error::Error for DocError {}

fn err(source: &str, pointer: impl Into<String>, reason: impl fmt::Display) -> DocError {
    DocError {
        source: source.to_string(),
        pointer: pointer.into(),
        reason: reason.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub colors: Vec<String>,
    pub theta: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: usize,
    pub color: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub diagram: DiagramDoc,
    pub elements: Vec<NodeDoc>,
    pub covers: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeapDoc {
    pub diagram: DiagramDoc,
    pub cells: Vec<NodeDoc>,
    pub templates: Vec<[i64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<[i64; 2]>>,
}

/// Generators are `[cell, level]` pairs; the level must be one at which
/// the cell occurs. `isolated` lists colors of extra elements
/// incomparable to everything.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterDoc {
    #[serde(default)]
    pub generators: Vec<[i64; 2]>,
    #[serde(default)]
    pub whole: bool,
    #[serde(default)]
    pub isolated: Vec<String>,
}

/// Parses JSON text, reporting the pointer of the first mismatch.
pub fn parse<T: DeserializeOwned>(source: &str, text: &str) -> Result<T, DocError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        err(source, pointer, e.inner())
    })
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

pub fn read_file(path: &Path) -> Result<String, DocError> {
    std::fs::read_to_string(path).map_err(|e| err(&path.display().to_string(), "", e))
}

impl DiagramDoc {
    pub fn build(&self, source: &str, at: &str) -> Result<DynkinDiagram, DocError> {
        DynkinDiagram::new(self.colors.clone(), self.theta.clone()).map_err(|e| err(source, at, e))
    }

    pub fn of(d: &DynkinDiagram) -> Self {
        Self {
            colors: d.labels().to_vec(),
            theta: d.colors().map(|a| d.colors().map(|b| d.theta(a, b)).collect()).collect(),
        }
    }
}

/// Orders nodes by id, which must run over `0..n`.
fn node_colors(source: &str, field: &str, nodes: &[NodeDoc], d: &DynkinDiagram) -> Result<Vec<Color>, DocError> {
    let mut colors = vec![None; nodes.len()];
    for (i, node) in nodes.iter().enumerate() {
        let at = format!("/{field}/{i}");
        let slot = colors
            .get_mut(node.id)
            .ok_or_else(|| err(source, format!("{at}/id"), format!("id {} is not below {}", node.id, nodes.len())))?;
        if slot.is_some() {
            return Err(err(source, format!("{at}/id"), format!("duplicate id {}", node.id)));
        }
        let c = d
            .color(&node.color)
            .map_err(|e| err(source, format!("{at}/color"), e))?;
        *slot = Some(c);
    }
    Ok(colors.into_iter().map(|c| c.expect("ids cover 0..n")).collect())
}

impl PosetDoc {
    pub fn build(&self, source: &str) -> Result<ColoredPoset, DocError> {
        let d = self.diagram.build(source, "/diagram")?;
        let colors = node_colors(source, "elements", &self.elements, &d)?;
        let covers = self.covers.iter().map(|&[x, y]| (x, y)).collect();
        ColoredPoset::new(d, colors, covers).map_err(|e| err(source, "/covers", e))
    }

    pub fn of(p: &ColoredPoset) -> Self {
        let d = p.diagram();
        Self {
            diagram: DiagramDoc::of(d),
            elements: p
                .elements()
                .map(|x| NodeDoc {
                    id: x,
                    color: d.label(p.color(x)).to_string(),
                })
                .collect(),
            covers: p.covers().iter().map(|&(x, y)| [x, y]).collect(),
        }
    }
}

impl HeapDoc {
    pub fn build(&self, source: &str) -> Result<PeriodicHeap, DocError> {
        let d = self.diagram.build(source, "/diagram")?;
        let cells = node_colors(source, "cells", &self.cells, &d)?;
        let mut templates = Vec::with_capacity(self.templates.len());
        for (i, &[c, c2, delta]) in self.templates.iter().enumerate() {
            let cell = |v: i64| usize::try_from(v).map_err(|_| err(source, format!("/templates/{i}"), "negative cell id"));
            templates.push((cell(c)?, cell(c2)?, delta));
        }
        PeriodicHeap::new(d, cells, templates).map_err(|e| err(source, "/templates", e))
    }
}

pub fn poset_from_str(source: &str, text: &str) -> Result<ColoredPoset, DocError> {
    parse::<PosetDoc>(source, text)?.build(source)
}

pub fn diagram_from_str(source: &str, text: &str) -> Result<DynkinDiagram, DocError> {
    parse::<DiagramDoc>(source, text)?.build(source, "")
}

/// A heap document, or `builtin:cycle:N` / `builtin:alternating_a1`.
/// Generators embedded in the document are returned alongside.
pub fn heap_from_source(source: &str) -> Result<(PeriodicHeap, Option<FilterDoc>), DocError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        let heap = PeriodicHeap::builtin(name).map_err(|e| err(source, "", e))?;
        return Ok((heap, None));
    }
    let text = read_file(Path::new(source))?;
    let doc: HeapDoc = parse(source, &text)?;
    let heap = doc.build(source)?;
    let filter = doc.generators.map(|generators| FilterDoc {
        generators,
        whole: false,
        isolated: Vec::new(),
    });
    Ok((heap, filter))
}

impl FilterDoc {
    pub fn build(&self, source: &str, heap: Arc<PeriodicHeap>) -> Result<SemiInfiniteFilter, DocError> {
        let mut f = if self.whole {
            SemiInfiniteFilter::whole(heap.clone())
        } else {
            let mut gens = Vec::with_capacity(self.generators.len());
            for (i, &[cell, level]) in self.generators.iter().enumerate() {
                let at = format!("/generators/{i}");
                let e = usize::try_from(cell)
                    .ok()
                    .filter(|&c| c < heap.cells().len())
                    .and_then(|c| heap.element_at(c, level))
                    .ok_or_else(|| err(source, at, format!("cell {cell} has no element at level {level}")))?;
                gens.push(e);
            }
            SemiInfiniteFilter::new(heap.clone(), gens).map_err(|e| err(source, "/generators", e))?
        };
        for (i, label) in self.isolated.iter().enumerate() {
            let c = heap
                .diagram()
                .color(label)
                .map_err(|e| err(source, format!("/isolated/{i}"), e))?;
            f = f.with_isolated(c);
        }
        Ok(f)
    }
}

/// `"id:color"` nodes, edges from each covered element to its cover.
pub fn to_dot(p: &ColoredPoset) -> String {
    let d = p.diagram();
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for x in p.elements() {
        out.push_str(&format!("  {x} [label=\"{x}:{}\"];\n", escape(d.label(p.color(x)))));
    }
    for &(x, y) in p.covers() {
        out.push_str(&format!("  {x} -> {y};\n"));
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Heap elements as `{"cell", "t", "level", "color"}` objects.
#[derive(Clone, Debug, Serialize)]
pub struct HeapPoint {
    pub cell: usize,
    pub t: i64,
    pub level: i64,
    pub color: String,
}

impl HeapPoint {
    pub fn of(heap: &PeriodicHeap, e: HeapElement) -> Self {
        Self {
            cell: e.cell,
            t: e.t,
            level: heap.level(e),
            color: heap.diagram().label(heap.color_of(e)).to_string(),
        }
    }
}

/// Color label → value.
pub fn labelled<T: Clone>(d: &DynkinDiagram, values: &[T]) -> BTreeMap<String, T> {
    d.colors().map(|a| (d.label(a).to_string(), values[a.0].clone())).collect()
}
