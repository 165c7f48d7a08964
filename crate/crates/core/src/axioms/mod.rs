//! Coloring properties, classification and frontier censuses.

mod audit;
mod enumerate;
mod slant;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bitset::ElementSet;
use crate::dynkin::Color;
use crate::poset::{ColorChain, ColoredPoset, PosetError};

pub use audit::{equivalence_audit, AuditReport};
pub use enumerate::enumerate_heaps;
pub use slant::{
    slant_decompose, slant_edges, slant_sum, top_tree, JoinSpec, SlantDecomposition, SlantError, SlantJoin,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    EC,
    NA,
    AC,
    ICE2,
    UCB(u32),
    LCB(u32),
    S1,
    S2,
    S3,
    S4,
    G1,
    G2,
    G3,
    G4,
    G5,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::UCB(k) => write!(f, "UCB{k}"),
            Property::LCB(k) => write!(f, "LCB{k}"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bound = |rest: &str| rest.parse::<u32>().map_err(|_| format!("bad census bound in {s:?}"));
        Ok(match s {
            "EC" => Property::EC,
            "NA" => Property::NA,
            "AC" => Property::AC,
            "ICE2" => Property::ICE2,
            "S1" => Property::S1,
            "S2" => Property::S2,
            "S3" => Property::S3,
            "S4" => Property::S4,
            "G1" => Property::G1,
            "G2" => Property::G2,
            "G3" => Property::G3,
            "G4" => Property::G4,
            "G5" => Property::G5,
            _ if s.starts_with("UCB") => Property::UCB(bound(&s[3..])?),
            _ if s.starts_with("LCB") => Property::LCB(bound(&s[3..])?),
            _ => return Err(format!("unknown property {s:?}")),
        })
    }
}

impl Serialize for Property {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One counterexample to a property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<usize>,
    pub colors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub property: Property,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("{0} is only decidable on periodic heaps")]
    UnsupportedOnFinite(Property),
    #[error("census bound must be at least 1")]
    ZeroBound,
    #[error("the given set is not an ideal")]
    NotAnIdeal,
    #[error("the given set is not a filter")]
    NotAFilter,
    #[error("color {0} does not form a chain")]
    ColorNotChain(String),
    #[error("enumeration exceeded its cap of {0} heaps")]
    CapExceeded(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Stops after `limit` witnesses; witnesses are only materialized when
/// `detailed` is set.
struct Collector {
    limit: usize,
    detailed: bool,
    found: usize,
    witnesses: Vec<Witness>,
}

impl Collector {
    fn new(limit: usize, detailed: bool) -> Self {
        Self {
            limit,
            detailed,
            found: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records a failure; returns true when the caller should stop.
    fn fail(&mut self, make: impl FnOnce() -> Witness) -> bool {
        self.found += 1;
        if self.detailed {
            self.witnesses.push(make());
        }
        self.found >= self.limit
    }
}

fn witness(p: &ColoredPoset, elements: Vec<usize>, value: Option<i64>, reason: String) -> Witness {
    let colors = elements.iter().map(|&x| p.diagram().label(p.color(x)).to_string()).collect();
    Witness {
        elements,
        colors,
        value,
        reason,
    }
}

pub fn check(p: &ColoredPoset, prop: Property) -> Result<CheckReport, AxiomError> {
    let mut c = Collector::new(usize::MAX, true);
    evaluate(p, prop, &mut c)?;
    Ok(CheckReport {
        property: prop,
        holds: c.found == 0,
        witnesses: c.witnesses,
    })
}

/// Like [`check`] but stops at the first failure and builds no witnesses.
pub fn holds(p: &ColoredPoset, prop: Property) -> Result<bool, AxiomError> {
    let mut c = Collector::new(1, false);
    evaluate(p, prop, &mut c)?;
    Ok(c.found == 0)
}

fn holds_finite(p: &ColoredPoset, prop: Property) -> bool {
    holds(p, prop).expect("finite-decidable property")
}

pub fn is_d_complete(p: &ColoredPoset) -> bool {
    [Property::EC, Property::NA, Property::AC, Property::ICE2, Property::UCB(1)]
        .into_iter()
        .all(|q| holds_finite(p, q))
}

pub fn is_dominant_minuscule_heap(p: &ColoredPoset) -> bool {
    [Property::S1, Property::S2, Property::S3, Property::S4]
        .into_iter()
        .all(|q| holds_finite(p, q))
}

fn evaluate(p: &ColoredPoset, prop: Property, c: &mut Collector) -> Result<(), AxiomError> {
    match prop {
        Property::EC => check_ec(p, c),
        Property::NA => check_na(p, c),
        Property::AC => check_ac(p, c),
        Property::ICE2 => check_ice2(p, c),
        Property::UCB(0) | Property::LCB(0) => return Err(AxiomError::ZeroBound),
        Property::UCB(k) => check_frontier(p, k as i64, true, c),
        Property::LCB(k) => check_frontier(p, k as i64, false, c),
        Property::S1 => check_s1(p, c),
        Property::S2 => check_s2(p, c),
        Property::S3 => check_s3(p, c),
        Property::S4 => check_s4(p, c),
        Property::G1 => check_g1(p, c),
        Property::G2 => check_g2(p, c),
        Property::G5 => check_g5(p, c),
        Property::G3 | Property::G4 => return Err(AxiomError::UnsupportedOnFinite(prop)),
    }
    Ok(())
}

fn check_ec(p: &ColoredPoset, c: &mut Collector) {
    for x in p.elements() {
        for y in x + 1..p.len() {
            if p.color(x) == p.color(y)
                && !p.comparable(x, y)
                && c.fail(|| witness(p, vec![x, y], None, "equal colors, incomparable".into()))
            {
                return;
            }
        }
    }
}

fn check_na(p: &ColoredPoset, c: &mut Collector) {
    let d = p.diagram();
    for &(x, y) in p.covers() {
        if !d.adjacent(p.color(x), p.color(y))
            && c.fail(|| witness(p, vec![x, y], None, "cover between non-adjacent colors".into()))
        {
            return;
        }
    }
}

fn check_ac(p: &ColoredPoset, c: &mut Collector) {
    let d = p.diagram();
    for x in p.elements() {
        for y in x + 1..p.len() {
            if d.adjacent(p.color(x), p.color(y))
                && !p.comparable(x, y)
                && c.fail(|| witness(p, vec![x, y], None, "adjacent colors, incomparable".into()))
            {
                return;
            }
        }
    }
}

/// Pairs `x < y` of color `a` with no element of color `a` strictly
/// between them, ordered by `(x, y)`.
fn consecutive_pairs(p: &ColoredPoset) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in p.elements() {
        for y in p.elements() {
            if p.color(x) == p.color(y)
                && p.lt(x, y)
                && !p
                    .elements_of_color(p.color(x))
                    .any(|z| p.lt(x, z) && p.lt(z, y))
            {
                out.push((x, y));
            }
        }
    }
    out
}

/// Σ −θ_{κ(z),a} over the open interval (x, y).
fn open_census(p: &ColoredPoset, x: usize, y: usize, a: Color) -> i64 {
    p.elements()
        .filter(|&z| p.lt(x, z) && p.lt(z, y))
        .map(|z| -p.diagram().theta(p.color(z), a))
        .sum()
}

fn check_ice2(p: &ColoredPoset, c: &mut Collector) {
    for (x, y) in consecutive_pairs(p) {
        let s = open_census(p, x, y, p.color(x));
        if s != 2 && c.fail(|| witness(p, vec![x, y], Some(s), "interval census between consecutive elements is not 2".into())) {
            return;
        }
    }
}

/// Census of `U(x, P)` (upper) or `L(x, P)` (lower) weighted by color `a`.
fn frontier_census(p: &ColoredPoset, x: usize, upper: bool, within: Option<&ElementSet>) -> (i64, Vec<usize>) {
    let a = p.color(x);
    let d = p.diagram();
    let members: Vec<usize> = p
        .elements()
        .filter(|&y| within.map_or(true, |s| s.contains(y)))
        .filter(|&y| if upper { p.lt(x, y) } else { p.lt(y, x) })
        .filter(|&y| d.adjacent(p.color(y), a))
        .collect();
    let sum = members.iter().map(|&y| -d.theta(p.color(y), a)).sum();
    (sum, members)
}

fn extreme_of_color(p: &ColoredPoset, x: usize, upper: bool) -> bool {
    !p
        .elements_of_color(p.color(x))
        .any(|y| if upper { p.lt(x, y) } else { p.lt(y, x) })
}

fn check_frontier(p: &ColoredPoset, k: i64, upper: bool, c: &mut Collector) {
    for x in p.elements() {
        if !extreme_of_color(p, x, upper) {
            continue;
        }
        let (sum, members) = frontier_census(p, x, upper, None);
        if sum > k {
            let side = if upper { "upper" } else { "lower" };
            let stop = c.fail(|| {
                let mut els = vec![x];
                els.extend(members);
                witness(p, els, Some(sum), format!("{side} census at the extreme element of its color exceeds {k}"))
            });
            if stop {
                return;
            }
        }
    }
}

fn check_s1(p: &ColoredPoset, c: &mut Collector) {
    let d = p.diagram();
    for &(x, y) in p.covers() {
        let (a, b) = (p.color(x), p.color(y));
        if a != b
            && !d.adjacent(a, b)
            && c.fail(|| witness(p, vec![x, y], None, "neighbors with distant colors".into()))
        {
            return;
        }
    }
    for x in p.elements() {
        for y in x + 1..p.len() {
            if !p.comparable(x, y)
                && !d.distant(p.color(x), p.color(y))
                && c.fail(|| witness(p, vec![x, y], None, "incomparable elements with non-distant colors".into()))
            {
                return;
            }
        }
    }
}

fn check_s2(p: &ColoredPoset, c: &mut Collector) {
    let d = p.diagram();
    for (x, y) in consecutive_pairs(p) {
        let a = p.color(x);
        let open: Vec<usize> = p.elements().filter(|&z| p.lt(x, z) && p.lt(z, y)).collect();
        let adj: Vec<usize> = open.iter().copied().filter(|&z| d.adjacent(p.color(z), a)).collect();
        let two_simple = adj.len() == 2 && adj.iter().all(|&z| d.theta(p.color(z), a) == -1);
        let one_double = open.len() == 1 && d.theta(p.color(open[0]), a) == -2;
        if !two_simple && !one_double {
            let stop = c.fail(|| {
                let mut els = vec![x, y];
                els.extend(open);
                witness(p, els, None, "interval between consecutive elements matches neither allowed shape".into())
            });
            if stop {
                return;
            }
        }
    }
}

fn check_s3(p: &ColoredPoset, c: &mut Collector) {
    let d = p.diagram();
    for x in p.elements() {
        if !extreme_of_color(p, x, true) {
            continue;
        }
        let ups = p.upper_covers(x);
        let reason = match ups {
            [] => None,
            [y] if d.theta(p.color(*y), p.color(x)) != -1 => {
                Some("covering element's color is not 1-adjacent".to_string())
            }
            [y] if !extreme_of_color(p, *y, true) => Some("covering element is not maximal in its color".to_string()),
            [_] => None,
            _ => Some("maximal element of its color has several covers".to_string()),
        };
        if let Some(reason) = reason {
            let mut els = vec![x];
            els.extend_from_slice(ups);
            if c.fail(|| witness(p, els, None, reason)) {
                return;
            }
        }
    }
}

fn check_s4(p: &ColoredPoset, c: &mut Collector) {
    let d = p.diagram();
    let mut parent: Vec<usize> = (0..d.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in d.edges() {
        let (ra, rb) = (find(&mut parent, a.0), find(&mut parent, b.0));
        if ra == rb {
            c.fail(|| Witness {
                elements: vec![],
                colors: vec![d.label(a).into(), d.label(b).into()],
                value: None,
                reason: "edge closes a cycle in the diagram".into(),
            });
            return;
        }
        parent[ra] = rb;
    }
}

fn check_g1(p: &ColoredPoset, c: &mut Collector) {
    let d = p.diagram();
    for a in d.colors() {
        if let ColorChain::NonChain { witness: (x, y), .. } = p.color_chain(a) {
            if c.fail(|| witness(p, vec![x, y], None, "color class is not a chain".into())) {
                return;
            }
        }
    }
    for (a, b) in d.edges() {
        let members: Vec<usize> = p.elements().filter(|&x| p.color(x) == a || p.color(x) == b).collect();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if !p.comparable(x, y)
                    && c.fail(|| witness(p, vec![x, y], None, "union of two adjacent color classes is not a chain".into()))
                {
                    return;
                }
            }
        }
    }
}

fn check_g2(p: &ColoredPoset, c: &mut Collector) {
    let n = p.len();
    let d = p.diagram();
    let related = |x: usize, y: usize| {
        let (a, b) = (p.color(x), p.color(y));
        a == b || d.adjacent(a, b)
    };
    // reach[x] = elements reachable from x by chain-relation steps
    let mut reach: Vec<ElementSet> = (0..n)
        .map(|x| ElementSet::from_iter_with_len(n, p.elements().filter(|&y| p.lt(x, y) && related(x, y))))
        .collect();
    for k in 0..n {
        for x in 0..n {
            if reach[x].contains(k) {
                let via = reach[k].clone();
                reach[x].union_with(&via);
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if p.lt(x, y)
                && !reach[x].contains(y)
                && c.fail(|| witness(p, vec![x, y], None, "order relation not generated by the color chains".into()))
            {
                return;
            }
        }
    }
}

fn check_g5(p: &ColoredPoset, c: &mut Collector) {
    for (x, y) in consecutive_pairs(p) {
        let a = p.color(x);
        let s: i64 = p
            .elements()
            .filter(|&z| p.le(x, z) && p.le(z, y))
            .map(|z| p.diagram().theta(p.color(z), a))
            .sum();
        if s != 2 && c.fail(|| witness(p, vec![x, y], Some(s), "closed interval sum is not 2".into())) {
            return;
        }
    }
}

/// Upper frontier census `U_b(I)`; `None` when `I` has no element of color `b`.
pub fn census_upper(p: &ColoredPoset, ideal: &ElementSet, b: Color) -> Result<Option<i64>, AxiomError> {
    if !p.is_ideal(ideal) {
        return Err(AxiomError::NotAnIdeal);
    }
    census(p, ideal, b, true)
}

/// Lower frontier census `L_b(F)`; `None` when `F` has no element of color `b`.
pub fn census_lower(p: &ColoredPoset, filter: &ElementSet, b: Color) -> Result<Option<i64>, AxiomError> {
    if !p.is_filter(filter) {
        return Err(AxiomError::NotAFilter);
    }
    census(p, filter, b, false)
}

fn census(p: &ColoredPoset, set: &ElementSet, b: Color, upper: bool) -> Result<Option<i64>, AxiomError> {
    let members = ElementSet::from_iter_with_len(p.len(), p.elements_of_color(b).filter(|&x| set.contains(x)));
    let ends = if upper { p.maximal_in(&members) } else { p.minimal_in(&members) };
    match ends.as_slice() {
        [] => Ok(None),
        [x] => Ok(Some(frontier_census(p, *x, upper, Some(set)).0)),
        _ => Err(AxiomError::ColorNotChain(p.diagram().label(b).into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub elements: Vec<usize>,
    pub colors: Vec<String>,
    pub is_d_complete: bool,
    pub is_minuscule: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_d_complete: bool,
    pub is_minuscule: bool,
    pub is_dominant_minuscule_heap: bool,
    pub is_minuscule_heap: bool,
    /// Whether the coloring-axiom route and the Stembridge route agree.
    pub routes_agree: bool,
    pub component_count: usize,
    pub diagram_component_count: usize,
    pub components: Vec<ComponentVerdict>,
    pub reports: Vec<CheckReport>,
}

const CLASSIFY_PROPERTIES: [Property; 10] = [
    Property::EC,
    Property::NA,
    Property::AC,
    Property::ICE2,
    Property::UCB(1),
    Property::LCB(1),
    Property::S1,
    Property::S2,
    Property::S3,
    Property::S4,
];

pub fn classify(p: &ColoredPoset) -> Classification {
    let reports: Vec<CheckReport> = CLASSIFY_PROPERTIES
        .iter()
        .map(|&q| check(p, q).expect("finite-decidable property"))
        .collect();
    let ok = |q: Property| reports.iter().any(|r| r.property == q && r.holds);
    let is_d_complete = [Property::EC, Property::NA, Property::AC, Property::ICE2, Property::UCB(1)]
        .into_iter()
        .all(ok);
    let is_minuscule = is_d_complete && ok(Property::LCB(1));
    let is_minuscule_heap = ok(Property::S1) && ok(Property::S2);
    let is_dominant_minuscule_heap = is_minuscule_heap && ok(Property::S3) && ok(Property::S4);
    let components: Vec<ComponentVerdict> = p
        .components()
        .into_iter()
        .map(|comp| {
            let d_complete = self::is_d_complete(&comp.poset);
            ComponentVerdict {
                colors: comp.poset.diagram().labels().to_vec(),
                elements: comp.elements,
                is_d_complete: d_complete,
                is_minuscule: d_complete && holds_finite(&comp.poset, Property::LCB(1)),
            }
        })
        .collect();
    Classification {
        is_d_complete,
        is_minuscule,
        is_dominant_minuscule_heap,
        is_minuscule_heap,
        routes_agree: is_d_complete == is_dominant_minuscule_heap,
        component_count: components.len(),
        diagram_component_count: p.diagram().component_colors().len(),
        components,
        reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynkin::DynkinDiagram;
    use std::sync::Arc;

    fn diagram(theta: Vec<Vec<i64>>) -> Arc<DynkinDiagram> {
        let labels: Vec<String> = (0..theta.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        Arc::new(DynkinDiagram::new(labels, theta).unwrap())
    }

    fn poset(d: &Arc<DynkinDiagram>, colors: &[usize], covers: &[(usize, usize)]) -> ColoredPoset {
        ColoredPoset::with_shared_diagram(d.clone(), colors.iter().map(|&c| Color(c)).collect(), covers.to_vec())
            .unwrap()
    }

    #[test]
    fn ice2_examples() {
        let one = diagram(vec![vec![2]]);
        let chain = poset(&one, &[0, 0], &[(0, 1)]);
        let r = check(&chain, Property::ICE2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witnesses[0].value, Some(0));

        let a1 = diagram(vec![vec![2, -2], vec![-2, 2]]);
        let aba = poset(&a1, &[0, 1, 0], &[(0, 1), (1, 2)]);
        assert!(check(&aba, Property::ICE2).unwrap().holds);
    }

    #[test]
    fn ec_witness() {
        let one = diagram(vec![vec![2]]);
        let anti = poset(&one, &[0, 0], &[]);
        let r = check(&anti, Property::EC).unwrap();
        assert_eq!(r.witnesses[0].elements, vec![0, 1]);
        assert!(!holds(&anti, Property::EC).unwrap());
    }

    #[test]
    fn unsupported_and_zero_bound() {
        let one = diagram(vec![vec![2]]);
        let p = poset(&one, &[0], &[]);
        assert_eq!(check(&p, Property::G3), Err(AxiomError::UnsupportedOnFinite(Property::G3)));
        assert_eq!(check(&p, Property::UCB(0)), Err(AxiomError::ZeroBound));
    }

    #[test]
    fn classify_small() {
        let one = diagram(vec![vec![2]]);
        let c = classify(&poset(&one, &[0], &[]));
        assert!(c.is_d_complete && c.is_minuscule && c.is_dominant_minuscule_heap);

        let ab = diagram(vec![vec![2, -1], vec![-1, 2]]);
        let c = classify(&poset(&ab, &[0, 1], &[(0, 1)]));
        assert!(c.is_d_complete && c.is_minuscule);
        assert_eq!(c.component_count, 1);
    }

    #[test]
    fn census_on_singleton() {
        let one = diagram(vec![vec![2]]);
        let p = poset(&one, &[0], &[]);
        let all = ElementSet::full(1);
        assert_eq!(census_upper(&p, &all, Color(0)), Ok(Some(0)));
        assert_eq!(census_upper(&p, &ElementSet::empty(1), Color(0)), Ok(None));
        let chain = poset(&one, &[0, 0, 0], &[(0, 1), (1, 2)]);
        let not_ideal = ElementSet::from_iter_with_len(3, [2]);
        assert_eq!(census_upper(&chain, &not_ideal, Color(0)), Err(AxiomError::NotAnIdeal));
    }

    #[test]
    fn property_names_round_trip() {
        for name in ["EC", "NA", "AC", "ICE2", "UCB1", "LCB2", "S3", "G5"] {
            assert_eq!(name.parse::<Property>().unwrap().to_string(), name);
        }
        assert!("XYZ".parse::<Property>().is_err());
    }
}
