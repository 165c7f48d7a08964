//! Order filters of periodic heaps, their infinite axioms, downward
//! extension and saturation.

use std::sync::Arc;

use serde::Serialize;

use super::{HeapElement, HeapError, HeapWitness, PeriodicHeap, Window};
use crate::axioms::{check, Property};
use crate::bitset::ElementSet;
use crate::dynkin::Color;
use crate::poset::ColoredPoset;

/// Which elements of each cell a filter contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FilterBound {
    /// The whole heap.
    Whole,
    /// `(cell, t)` belongs to the filter iff `t ≥ thresholds[cell]`; `None`
    /// means the cell is missed entirely.
    Thresholds(Vec<Option<i64>>),
}

/// The up-closure of finitely many generators inside a periodic heap,
/// optionally with extra isolated elements attached (used to exhibit
/// failing inputs).
#[derive(Clone, Debug)]
pub struct SemiInfiniteFilter {
    heap: Arc<PeriodicHeap>,
    generators: Vec<HeapElement>,
    bound: FilterBound,
    isolated: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteCheck {
    pub property: String,
    pub holds: bool,
    pub witnesses: Vec<HeapWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorCensus {
    pub color: String,
    /// Least element of the color inside the filter.
    pub minimum: Option<HeapElement>,
    /// Census of `L(minimum, F)`.
    pub lower_census: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteReport {
    pub checks: Vec<InfiniteCheck>,
    /// Every color unbounded above.
    pub cua: bool,
    /// Every color bounded below.
    pub cbb: bool,
    /// Every color unbounded below.
    pub cub: bool,
    /// UCB1 holds vacuously: no color has a maximal element.
    pub ucb1_vacuous: bool,
    pub lcb1: bool,
    pub lcb2: bool,
    pub censuses: Vec<ColorCensus>,
    pub d_complete: bool,
    /// Unbounded in both directions, hence the whole heap.
    pub full_heap: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtensionCase {
    /// Two elements below, both of 1-adjacent colors.
    TwoSimple,
    /// One element below, of a 2-adjacent color.
    OneDouble,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub color: String,
    pub added: HeapElement,
    pub level: i64,
    /// Upper covers of the new element.
    pub covers: Vec<HeapElement>,
    pub case: ExtensionCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationStep {
    pub extension: Extension,
    /// The poset grown by the construction alone matches the ambient
    /// heap's filter on the same levels.
    pub matches_ambient: bool,
    pub d_complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Saturation {
    pub steps: Vec<SaturationStep>,
    /// Steps between two filters that differ by a uniform shift.
    pub period_steps: usize,
    /// The shift in `t` between those two filters.
    pub shift: i64,
    pub first_repeat: usize,
}

impl SemiInfiniteFilter {
    pub fn new(heap: Arc<PeriodicHeap>, generators: Vec<HeapElement>) -> Result<Self, HeapError> {
        if generators.is_empty() {
            return Err(HeapError::NoGenerators);
        }
        let mut thresholds: Vec<Option<i64>> = vec![None; heap.cells().len()];
        for &g in &generators {
            if g.cell >= heap.cells().len() {
                return Err(HeapError::UnknownCell(g.cell));
            }
            for (slot, t) in thresholds.iter_mut().zip(heap.min_t_above(g)) {
                if let Some(t) = t {
                    *slot = Some(slot.map_or(t, |s| s.min(t)));
                }
            }
        }
        Ok(Self {
            heap,
            generators,
            bound: FilterBound::Thresholds(thresholds),
            isolated: Vec::new(),
        })
    }

    /// The principal filter above one element.
    pub fn ray(heap: Arc<PeriodicHeap>, from: HeapElement) -> Result<Self, HeapError> {
        Self::new(heap, vec![from])
    }

    /// The principal filter above the least-cell element at `level`.
    pub fn ray_at_level(heap: Arc<PeriodicHeap>, level: i64) -> Result<Self, HeapError> {
        let from = *heap.elements_at(level).first().ok_or(HeapError::EmptyWindow)?;
        Self::ray(heap, from)
    }

    pub fn whole(heap: Arc<PeriodicHeap>) -> Self {
        Self {
            heap,
            generators: Vec::new(),
            bound: FilterBound::Whole,
            isolated: Vec::new(),
        }
    }

    /// Adds an element of color `a` incomparable to everything.
    pub fn with_isolated(mut self, a: Color) -> Self {
        self.isolated.push(a);
        self
    }

    pub fn heap(&self) -> &Arc<PeriodicHeap> {
        &self.heap
    }

    pub fn generators(&self) -> &[HeapElement] {
        &self.generators
    }

    pub fn bound(&self) -> &FilterBound {
        &self.bound
    }

    pub fn isolated(&self) -> &[Color] {
        &self.isolated
    }

    pub fn is_proper(&self) -> bool {
        matches!(self.bound, FilterBound::Thresholds(_))
    }

    pub fn contains(&self, e: HeapElement) -> bool {
        match &self.bound {
            FilterBound::Whole => true,
            FilterBound::Thresholds(th) => th[e.cell].is_some_and(|t| e.t >= t),
        }
    }

    fn thresholds(&self) -> Option<&[Option<i64>]> {
        match &self.bound {
            FilterBound::Whole => None,
            FilterBound::Thresholds(th) => Some(th),
        }
    }

    /// Least element of each cell inside the filter.
    fn cell_minima(&self) -> Vec<HeapElement> {
        self.thresholds()
            .map(|th| {
                th.iter()
                    .enumerate()
                    .filter_map(|(cell, t)| t.map(|t| HeapElement { cell, t }))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn minimal_of_color(&self, a: Color) -> Option<HeapElement> {
        self.cell_minima()
            .into_iter()
            .filter(|&e| self.heap.color_of(e) == a)
            .min_by_key(|&e| self.heap.level(e))
    }

    /// Levels of the finite part examined by the checks: from the lowest
    /// element up to three periods above the highest cell minimum, where
    /// the filter already agrees with the heap.
    fn check_levels(&self) -> Option<(i64, i64)> {
        let levels: Vec<i64> = self.cell_minima().iter().map(|&e| self.heap.level(e)).collect();
        let lo = *levels.iter().min()?;
        let hi = *levels.iter().max()?;
        Some((lo, hi + 3 * self.heap.period() as i64))
    }

    fn finite_part(&self, lo: i64, hi: i64) -> Result<Window, HeapError> {
        self.heap.raw_window(lo, hi, |e| self.contains(e))
    }

    /// Elements of `L(y, F)` for `y` inside the finite part `w`.
    fn lower_set(&self, w: &Window, y: HeapElement) -> Vec<HeapElement> {
        let p = &w.poset;
        let yi = w.elements.iter().position(|&e| e == y).expect("minimum lies in the finite part");
        let a = p.color(yi);
        p.elements()
            .filter(|&z| p.lt(z, yi) && p.diagram().adjacent(p.color(z), a))
            .map(|z| w.elements[z])
            .collect()
    }

    fn census_of(&self, members: &[HeapElement], a: Color) -> i64 {
        let d = self.heap.diagram();
        members.iter().map(|&z| -d.theta(self.heap.color_of(z), a)).sum()
    }

    pub fn check_infinite_axioms(&self) -> InfiniteReport {
        let heap = &self.heap;
        let d = heap.diagram();
        let mut checks = Vec::new();
        let minima: Vec<Option<HeapElement>> = d.colors().map(|a| self.minimal_of_color(a)).collect();
        let window = self.check_levels().map(|(lo, hi)| self.finite_part(lo, hi).expect("filters of a valid heap are posets"));
        for prop in [Property::EC, Property::NA, Property::AC, Property::ICE2] {
            let mut witnesses = Vec::new();
            if let Some(w) = &window {
                let report = check(&w.poset, prop).expect("finite-decidable property");
                witnesses.extend(report.witnesses.into_iter().map(|wit| HeapWitness {
                    elements: wit.elements.iter().map(|&i| w.elements[i]).collect(),
                    value: wit.value,
                    reason: wit.reason,
                }));
            }
            if matches!(prop, Property::EC | Property::AC) {
                witnesses.extend(self.isolated_witnesses(prop, &minima));
            }
            checks.push(InfiniteCheck {
                property: prop.to_string(),
                holds: witnesses.is_empty(),
                witnesses,
            });
        }
        let cua = d.colors().all(|a| {
            heap.cells().contains(&a) && (minima[a.0].is_some() || !self.is_proper())
        });
        let (cbb, cub) = if self.is_proper() { (true, false) } else { (false, true) };
        let censuses: Vec<ColorCensus> = d
            .colors()
            .map(|a| {
                let minimum = minima[a.0];
                let lower_census = match (minimum, &window) {
                    (Some(y), Some(w)) => Some(self.census_of(&self.lower_set(w, y), a)),
                    _ => None,
                };
                ColorCensus {
                    color: d.label(a).to_string(),
                    minimum,
                    lower_census,
                }
            })
            .collect();
        let lcb = |k: i64| censuses.iter().all(|c| c.lower_census.map_or(true, |s| s <= k));
        let axioms_hold = checks.iter().all(|c| c.holds);
        InfiniteReport {
            cua,
            cbb,
            cub,
            ucb1_vacuous: cua,
            lcb1: lcb(1),
            lcb2: lcb(2),
            d_complete: axioms_hold && cua,
            full_heap: axioms_hold && cua && cub,
            censuses,
            checks,
        }
    }

    fn isolated_witnesses(&self, prop: Property, minima: &[Option<HeapElement>]) -> Vec<HeapWitness> {
        let d = self.heap.diagram();
        let mut out = Vec::new();
        for (i, &a) in self.isolated.iter().enumerate() {
            for b in d.colors() {
                let clash = match prop {
                    Property::EC => a == b,
                    _ => d.adjacent(a, b),
                };
                if !clash {
                    continue;
                }
                let partner = if self.is_proper() {
                    minima[b.0]
                } else {
                    self.heap.cells().iter().position(|&c| c == b).map(|cell| HeapElement { cell, t: 0 })
                };
                if let Some(e) = partner {
                    out.push(HeapWitness {
                        elements: vec![e],
                        value: None,
                        reason: format!(
                            "isolated element {i} of color {} is incomparable to an element of color {}",
                            d.label(a),
                            d.label(b)
                        ),
                    });
                }
                for (j, &c) in self.isolated.iter().enumerate() {
                    if j > i && c == b {
                        out.push(HeapWitness {
                            elements: vec![],
                            value: None,
                            reason: format!("isolated elements {i} and {j} are incomparable"),
                        });
                    }
                }
            }
        }
        out
    }

    /// Adds one new minimal element below the least color whose minimum
    /// has lower census 2, as in the construction of a full heap from a
    /// filter, and checks that it is the next element of the ambient heap.
    pub fn downward_extend(&self) -> Result<(SemiInfiniteFilter, Extension), HeapError> {
        let Some((lo, hi)) = self.check_levels() else {
            return Err(HeapError::NoEligibleColor);
        };
        let w = self.finite_part(lo, hi)?;
        let heap = &self.heap;
        let d = heap.diagram();
        for a in d.colors() {
            let Some(y) = self.minimal_of_color(a) else { continue };
            let below = self.lower_set(&w, y);
            if self.census_of(&below, a) != 2 {
                continue;
            }
            let case = if below.len() == 2 {
                ExtensionCase::TwoSimple
            } else {
                ExtensionCase::OneDouble
            };
            let mut covers = minimal_elements(&w, &below);
            covers.sort();
            let z = self.ambient_predecessor(y);
            let mut ambient = heap.upper_covers(z);
            ambient.sort();
            if let Some(&outside) = ambient.iter().find(|&&u| !self.contains(u)) {
                return Err(HeapError::AmbientMismatch(format!(
                    "{z:?} is covered by {outside:?}, which is outside the filter"
                )));
            }
            if ambient != covers {
                return Err(HeapError::AmbientMismatch(format!(
                    "construction covers {covers:?}, heap covers {ambient:?}"
                )));
            }
            let mut next = self.clone();
            next.generators.push(z);
            if let FilterBound::Thresholds(th) = &mut next.bound {
                th[z.cell] = Some(th[z.cell].map_or(z.t, |t| t.min(z.t)));
            }
            let extension = Extension {
                color: d.label(a).to_string(),
                added: z,
                level: heap.level(z),
                covers,
                case,
            };
            return Ok((next, extension));
        }
        Err(HeapError::NoEligibleColor)
    }

    /// The element of `y`'s color immediately below `y` in the heap.
    fn ambient_predecessor(&self, y: HeapElement) -> HeapElement {
        let heap = &self.heap;
        let a = heap.color_of(y);
        let p = heap.period() as i64;
        let target = heap.level(y) - 1;
        (0..heap.cells().len())
            .filter(|&c| heap.cells()[c] == a)
            .map(|cell| HeapElement {
                cell,
                t: (target - heap.rank(cell) as i64).div_euclid(p),
            })
            .max_by_key(|&e| heap.level(e))
            .expect("the color has a cell")
    }

    /// Repeats [`downward_extend`](Self::downward_extend) until two filters
    /// differ by a uniform shift. Alongside, the same construction is run on
    /// a finite poset that never consults the heap, and after every step it
    /// is compared with the heap's filter on the same levels.
    pub fn saturate(&self, max_steps: usize) -> Result<Saturation, HeapError> {
        let Some((_, top)) = self.check_levels() else {
            return Err(HeapError::NoEligibleColor);
        };
        let (lo, _) = self.check_levels().expect("proper filter");
        let mut abstract_poset = self.finite_part(lo, top)?.poset;
        let mut history = vec![self.thresholds().expect("proper filter").to_vec()];
        let mut current = self.clone();
        let mut steps = Vec::new();
        for _ in 0..max_steps {
            let (next, extension) = current.downward_extend()?;
            abstract_poset = construction_step(&abstract_poset)?;
            let (next_lo, _) = next.check_levels().expect("proper filter");
            let ambient = next.finite_part(next_lo, top)?;
            let matches_ambient = ambient.poset.canonical_key() == abstract_poset.canonical_key();
            let d_complete = next.check_infinite_axioms().d_complete;
            steps.push(SaturationStep {
                extension,
                matches_ambient,
                d_complete,
            });
            let th = next.thresholds().expect("proper filter").to_vec();
            for (i, old) in history.iter().enumerate() {
                if let Some(shift) = uniform_shift(old, &th) {
                    return Ok(Saturation {
                        period_steps: history.len() - i,
                        shift,
                        first_repeat: i,
                        steps,
                    });
                }
            }
            history.push(th);
            current = next;
        }
        Err(HeapError::NoConvergenceWithinBudget(max_steps))
    }
}

/// `Some(m)` with `m ≥ 1` when `new[c] = old[c] − m` for every cell.
fn uniform_shift(old: &[Option<i64>], new: &[Option<i64>]) -> Option<i64> {
    let mut shift = None;
    for (o, n) in old.iter().zip(new) {
        match (o, n) {
            (Some(o), Some(n)) => {
                let m = o - n;
                if m < 1 || shift.is_some_and(|s| s != m) {
                    return None;
                }
                shift = Some(m);
            }
            (None, None) => {}
            _ => return None,
        }
    }
    shift
}

fn minimal_elements(w: &Window, set: &[HeapElement]) -> Vec<HeapElement> {
    let idx: Vec<usize> = set
        .iter()
        .map(|e| w.elements.iter().position(|f| f == e).expect("element in window"))
        .collect();
    let s = ElementSet::from_iter_with_len(w.poset.len(), idx.iter().copied());
    w.poset.minimal_in(&s).into_iter().map(|i| w.elements[i]).collect()
}

/// One step of the downward construction on a finite poset: pick the least
/// color whose minimum has lower census 2 and put a new element of that
/// color below the minimal members of its lower set.
fn construction_step(p: &ColoredPoset) -> Result<ColoredPoset, HeapError> {
    let d = p.diagram();
    for a in d.colors() {
        let members = ElementSet::from_iter_with_len(p.len(), p.elements_of_color(a));
        let Some(&y) = p.minimal_in(&members).first() else { continue };
        let below = ElementSet::from_iter_with_len(
            p.len(),
            p.elements().filter(|&z| p.lt(z, y) && d.adjacent(p.color(z), a)),
        );
        let census: i64 = below.iter().map(|z| -d.theta(p.color(z), a)).sum();
        if census != 2 {
            continue;
        }
        let n = p.len();
        let mut colors = p.colors().to_vec();
        colors.push(a);
        let mut covers = p.covers().to_vec();
        covers.extend(p.minimal_in(&below).into_iter().map(|m| (n, m)));
        return Ok(ColoredPoset::build(p.shared_diagram().clone(), colors, covers)?);
    }
    Err(HeapError::NoEligibleColor)
}
