mod common;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use heapkit::axioms::{check, Property};
use heapkit::dynkin::{Color, DynkinDiagram};
use heapkit::heap_periodic::{ExtensionCase, HeapElement, HeapError, PeriodicHeap, SemiInfiniteFilter};
use heapkit::io;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn builtins() -> Vec<(String, Arc<PeriodicHeap>)> {
    let mut out: Vec<(String, Arc<PeriodicHeap>)> = (3..=6)
        .map(|n| (format!("cycle:{n}"), Arc::new(PeriodicHeap::cycle(n).unwrap())))
        .collect();
    out.push(("alternating_a1".into(), Arc::new(PeriodicHeap::alternating_a1().unwrap())));
    out
}

fn zigzag() -> Arc<PeriodicHeap> {
    let path = common::fixture_path("zigzag_a3.json");
    Arc::new(io::heap_from_source(path.to_str().unwrap()).unwrap().0)
}

fn all_heaps() -> Vec<(String, Arc<PeriodicHeap>)> {
    let mut hs = builtins();
    hs.push(("zigzag".into(), zigzag()));
    hs
}

/// Up-closure of the generators, cut off at `top`, by walking covers.
fn closure_up_to(h: &PeriodicHeap, gens: &[HeapElement], top: i64) -> BTreeSet<HeapElement> {
    let mut seen: BTreeSet<HeapElement> = gens.iter().copied().collect();
    let mut queue: VecDeque<HeapElement> = gens.iter().copied().collect();
    while let Some(e) = queue.pop_front() {
        for u in h.upper_covers(e) {
            if h.level(u) <= top && seen.insert(u) {
                queue.push_back(u);
            }
        }
    }
    seen
}

fn random_generators(rng: &mut impl Rng, h: &PeriodicHeap) -> Vec<HeapElement> {
    let k = rng.gen_range(1..=3);
    (0..k)
        .map(|_| HeapElement {
            cell: rng.gen_range(0..h.cells().len()),
            t: rng.gen_range(-4..=4),
        })
        .collect()
}

/// Lower census of the least element of color `a` among `members`,
/// directly from the covers.
fn lower_census_oracle(h: &PeriodicHeap, members: &BTreeSet<HeapElement>, a: Color) -> Option<i64> {
    let y = members.iter().filter(|&&e| h.color_of(e) == a).min_by_key(|&&e| h.level(e))?;
    let below = closure_down(h, *y, members);
    let d = h.diagram();
    Some(
        below
            .iter()
            .filter(|&&z| z != *y && d.adjacent(h.color_of(z), a))
            .map(|&z| -d.theta(h.color_of(z), a))
            .sum(),
    )
}

fn closure_down(h: &PeriodicHeap, y: HeapElement, members: &BTreeSet<HeapElement>) -> BTreeSet<HeapElement> {
    let mut seen = BTreeSet::from([y]);
    let mut queue = VecDeque::from([y]);
    while let Some(e) = queue.pop_front() {
        for l in h.lower_covers(e) {
            if members.contains(&l) && seen.insert(l) {
                queue.push_back(l);
            }
        }
    }
    seen
}

#[test]
fn builtins_and_zigzag_validate() {
    for (name, h) in all_heaps() {
        let v = h.validation();
        assert!(v.ec && v.na && v.ac && v.ice2 && v.g3 && v.g4, "{name}");
        assert!(h.check_g4().is_empty(), "{name}");
        // every cell occurs exactly once per period
        for level in 0..h.period() as i64 {
            let once: usize = (level..level + h.period() as i64).map(|l| h.elements_at(l).len()).sum();
            assert_eq!(once, h.cells().len(), "{name}");
        }
    }
    assert_eq!(zigzag().period(), 2);
}

#[test]
fn windows_are_convex_heap_pieces() {
    for (name, h) in all_heaps() {
        let w = h.window(-3, 3 * h.period() as i64).unwrap();
        for prop in [Property::EC, Property::NA, Property::AC, Property::ICE2] {
            assert!(check(&w.poset, prop).unwrap().holds, "{name} {prop}");
        }
        // covers join consecutive levels' neighbours and go strictly up
        for &(x, y) in w.poset.covers() {
            assert!(h.level(w.elements[x]) < h.level(w.elements[y]));
        }
        let comps = w.poset.components();
        assert_eq!(comps.len(), 1, "{name}");
        let (first, last) = (0, w.elements.len() - 1);
        let path = w.poset.hasse_path(first, last).unwrap();
        assert!(path.windows(2).all(|s| w.poset.covers_pair(s[0], s[1]) || w.poset.covers_pair(s[1], s[0])));
    }
    assert!(matches!(zigzag().window(4, 4), Err(HeapError::EmptyWindow)));
}

#[test]
fn bad_heaps_are_rejected() {
    let a2 = DynkinDiagram::simply_laced(vec!["a", "b"], &[(0, 1)]).unwrap();
    // alternating chain over a simple edge: one b between consecutive a's
    let r = PeriodicHeap::new(a2.clone(), vec![Color(0), Color(1)], vec![(0, 1, 0), (1, 0, 1)]);
    match r {
        Err(HeapError::AxiomFailure { property, witnesses }) => {
            assert_eq!(property, "ICE2");
            assert!(!witnesses.is_empty());
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        PeriodicHeap::new(a2.clone(), vec![Color(0), Color(1)], vec![(0, 1, 0), (1, 0, 0)]),
        Err(HeapError::NotLocallyFinite(_))
    ));
    assert!(matches!(
        PeriodicHeap::new(a2.clone(), vec![Color(0), Color(1)], vec![(0, 1, 2)]),
        Err(HeapError::BadTemplate(0, 1, 2))
    ));
    assert!(matches!(
        PeriodicHeap::new(a2, vec![Color(0)], vec![(0, 0, 1)]),
        Err(HeapError::ColorNotZChain(_))
    ));
    assert!(matches!(PeriodicHeap::builtin("cycle:x"), Err(HeapError::BadParameter(_))));
}

#[test]
fn filter_membership_matches_cover_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (name, h) in all_heaps() {
        for _ in 0..30 {
            let gens = random_generators(&mut rng, &h);
            let f = SemiInfiniteFilter::new(h.clone(), gens.clone()).unwrap();
            let top = 10 * h.period() as i64;
            let walked = closure_up_to(&h, &gens, top);
            for level in -6 * h.period() as i64..=top {
                for e in h.elements_at(level) {
                    assert_eq!(f.contains(e), walked.contains(&e), "{name} {gens:?} {e:?}");
                }
            }
        }
    }
}

#[test]
fn random_filters_classify_forward() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for (name, h) in all_heaps() {
        for _ in 0..50 {
            let gens = random_generators(&mut rng, &h);
            let f = SemiInfiniteFilter::new(h.clone(), gens.clone()).unwrap();
            let r = f.check_infinite_axioms();
            assert!(r.d_complete && r.ucb1_vacuous && r.lcb2 && !r.lcb1, "{name} {gens:?}");
            assert!(r.cbb && !r.cub && !r.full_heap);
            let top = 12 * h.period() as i64;
            let members = closure_up_to(&h, &gens, top);
            for census in &r.censuses {
                let a = h.diagram().color(&census.color).unwrap();
                assert_eq!(census.lower_census, lower_census_oracle(&h, &members, a), "{name} {gens:?}");
                let minimum = members.iter().filter(|&&e| h.color_of(e) == a).min_by_key(|&&e| h.level(e));
                assert_eq!(census.minimum.as_ref(), minimum);
            }
        }
    }
}

#[test]
fn whole_heap_is_full() {
    for (name, h) in all_heaps() {
        let r = SemiInfiniteFilter::whole(h).check_infinite_axioms();
        assert!(r.full_heap && r.d_complete && r.cub && !r.cbb, "{name}");
        assert!(r.censuses.iter().all(|c| c.minimum.is_none()));
    }
}

#[test]
fn isolated_element_breaks_comparability() {
    for (name, h) in all_heaps() {
        let f = SemiInfiniteFilter::ray_at_level(h.clone(), 0).unwrap().with_isolated(Color(0));
        let r = f.check_infinite_axioms();
        let holds = |p: &str| r.checks.iter().find(|c| c.property == p).unwrap().holds;
        assert!(!holds("EC") && !holds("AC"), "{name}");
        assert!(holds("NA") && holds("ICE2"));
        assert!(!r.d_complete);
        let whole = SemiInfiniteFilter::whole(h).with_isolated(Color(0)).check_infinite_axioms();
        assert!(!whole.d_complete && !whole.full_heap);
    }
}

#[test]
fn downward_extension_adds_the_next_heap_element() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, h) in all_heaps() {
        for _ in 0..20 {
            let gens = random_generators(&mut rng, &h);
            let f = SemiInfiniteFilter::new(h.clone(), gens.clone()).unwrap();
            let (g, ext) = f.downward_extend().unwrap();
            let top = 10 * h.period() as i64;
            let before = closure_up_to(&h, &gens, top);
            let mut grown = gens.clone();
            grown.push(ext.added);
            let after = closure_up_to(&h, &grown, top);
            // exactly one new element, and it is minimal
            let new: Vec<_> = after.difference(&before).collect();
            assert_eq!(new, vec![&ext.added], "{name} {gens:?}");
            let mut covers = h.upper_covers(ext.added);
            covers.sort();
            assert_eq!(covers, ext.covers);
            let a = h.color_of(ext.added);
            assert_eq!(lower_census_oracle(&h, &before, a), Some(2));
            // the case follows the lower set of the old minimum, which holds
            // two 1-adjacent elements or one 2-adjacent element
            let y = before.iter().filter(|&&e| h.color_of(e) == a).min_by_key(|&&e| h.level(e)).unwrap();
            let d = h.diagram();
            let lower = closure_down(&h, *y, &before)
                .into_iter()
                .filter(|&z| z != *y && d.adjacent(h.color_of(z), a))
                .count();
            let expected_case = if lower == 2 { ExtensionCase::TwoSimple } else { ExtensionCase::OneDouble };
            assert_eq!(ext.case, expected_case);
            assert!(g.check_infinite_axioms().d_complete);
        }
    }
}

#[test]
fn rays_saturate_to_the_ambient_heap() {
    for (name, h) in all_heaps() {
        let budget = 4 * h.cells().len();
        let mut starts: Vec<HeapElement> = (0..h.cells().len()).map(|cell| HeapElement { cell, t: 0 }).collect();
        starts.shuffle(&mut ChaCha8Rng::seed_from_u64(1));
        for from in starts {
            let f = SemiInfiniteFilter::ray(h.clone(), from).unwrap();
            let s = f.saturate(budget).unwrap();
            assert!(s.steps.len() <= budget, "{name}");
            assert!(s.steps.iter().all(|st| st.matches_ambient && st.d_complete), "{name} {from:?}");
            assert!(s.shift >= 1 && s.period_steps >= 1);
            // each shift of t by one adds one element per cell
            assert_eq!(s.period_steps as i64, s.shift * h.cells().len() as i64, "{name}");
            let added: HashSet<HeapElement> = s.steps.iter().map(|st| st.extension.added).collect();
            assert_eq!(added.len(), s.steps.len());
        }
    }
}

#[test]
fn saturation_budget_is_reported() {
    let h = zigzag();
    let f = SemiInfiniteFilter::ray(h, HeapElement { cell: 0, t: 0 }).unwrap();
    assert_eq!(f.saturate(1).unwrap_err(), HeapError::NoConvergenceWithinBudget(1));
    assert!(matches!(
        SemiInfiniteFilter::new(zigzag(), vec![]),
        Err(HeapError::NoGenerators)
    ));
    assert!(matches!(
        SemiInfiniteFilter::new(zigzag(), vec![HeapElement { cell: 9, t: 0 }]),
        Err(HeapError::UnknownCell(9))
    ));
}

#[test]
fn embedded_generators_and_filter_docs() {
    let path = common::fixture_path("zigzag_a3.json");
    let (heap, doc) = io::heap_from_source(path.to_str().unwrap()).unwrap();
    let heap = Arc::new(heap);
    let f = doc.unwrap().build("zigzag", heap.clone()).unwrap();
    // [1, 3] is b at t = 1, which already lies above a at t = 0
    assert_eq!(f.generators().len(), 2);
    let r = f.check_infinite_axioms();
    assert!(r.d_complete);
    let bad: io::FilterDoc = io::parse("f", r#"{"generators": [[1, 2]]}"#).unwrap();
    let e = bad.build("f", heap.clone()).unwrap_err();
    assert_eq!(e.pointer, "/generators/0");
    let unknown = io::parse::<io::FilterDoc>("f", r#"{"generator": []}"#).unwrap_err();
    assert!(unknown.reason.contains("unknown field"));
}
