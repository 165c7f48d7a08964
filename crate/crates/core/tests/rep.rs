mod common;

use heapkit::axioms::is_d_complete;
use heapkit::dynkin::{Color, DynkinDiagram};
use heapkit::poset::{ColoredPoset, DEFAULT_CAP};
use heapkit::rep::{
    carries_upper_minuscule, raising_operator, solve_diagonals, verify_relations, SparseMatrix, SplitSpace,
};
use heapkit::weyl::solve_lambda;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Dense = Vec<Vec<i64>>;

fn dense(m: &SparseMatrix) -> Dense {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m.entry(i, j)).collect()).collect()
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn bracket(a: &Dense, b: &Dense) -> Dense {
    let (ab, ba) = (mul(a, b), mul(b, a));
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn is_zero(a: &Dense) -> bool {
    a.iter().flatten().all(|&x| x == 0)
}

/// Raising operators straight from the splits: `X_a` sends `F` to `F − x`
/// for each minimal `x` of color `a`.
fn dense_raising(p: &ColoredPoset, s: &SplitSpace, a: Color) -> Dense {
    let n = s.dim();
    let lt = common::closure(p.len(), p.covers());
    let mut m = vec![vec![0; n]; n];
    for (j, sp) in s.splits().iter().enumerate() {
        for x in sp.filter.iter() {
            let minimal = !sp.filter.iter().any(|y| lt[y][x]);
            if minimal && p.color(x) == a {
                let mut smaller = sp.filter.clone();
                smaller.remove(x);
                let i = s.splits().iter().position(|t| t.filter == smaller).unwrap();
                m[i][j] += 1;
            }
        }
    }
    m
}

#[test]
fn heap_suite_carries_with_weight_diagonals() {
    for p in common::heap_suite() {
        let s = SplitSpace::new(p, DEFAULT_CAP).unwrap();
        let d = p.diagram();
        let diag = solve_diagonals(&s).unwrap();
        // the split with filter F has weight λ − Σ_{x ∈ F} α_κ(x)
        let lambda = solve_lambda(p).unwrap();
        for b in d.colors() {
            for (j, sp) in s.splits().iter().enumerate() {
                let expected = lambda.get(b) - sp.filter.iter().map(|x| d.theta(p.color(x), b)).sum::<i64>();
                assert_eq!(diag.values[b.0][j], expected, "{p:?}");
            }
        }
        let cert = carries_upper_minuscule(p, DEFAULT_CAP).unwrap();
        assert!(cert.carries && cert.is_d_complete && cert.agrees_with_classification, "{p:?}");
        assert_eq!(cert.splits.len(), s.dim());
        for a in d.colors() {
            let x = raising_operator(&s, a);
            assert!(x.max_column_support() <= 1);
            if s.dim() <= 40 {
                assert_eq!(dense(&x), dense_raising(p, &s, a));
            }
        }
    }
}

#[test]
fn relations_agree_with_dense_products() {
    for p in common::heap_suite().iter().filter(|p| p.splits(DEFAULT_CAP).unwrap().len() <= 24) {
        let s = SplitSpace::new(p, DEFAULT_CAP).unwrap();
        let d = p.diagram();
        let xs: Vec<Dense> = d.colors().map(|a| dense_raising(p, &s, a)).collect();
        let diag = solve_diagonals(&s).unwrap();
        let hs: Vec<Dense> = d.colors().map(|b| dense(&diag.operator(b))).collect();
        for a in d.colors() {
            assert!(is_zero(&mul(&xs[a.0], &xs[a.0])));
            for b in d.colors() {
                let scaled: Dense = xs[a.0].iter().map(|r| r.iter().map(|v| v * d.theta(a, b)).collect()).collect();
                assert_eq!(bracket(&hs[b.0], &xs[a.0]), scaled);
                assert!(is_zero(&bracket(&hs[a.0], &hs[b.0])));
                if a != b {
                    let mut nested = xs[b.0].clone();
                    for _ in 0..(1 - d.theta(b, a)) {
                        nested = bracket(&xs[a.0], &nested);
                    }
                    assert!(is_zero(&nested), "{p:?}");
                    if d.theta(a, b) == 0 {
                        assert!(is_zero(&bracket(&xs[a.0], &xs[b.0])));
                    }
                }
            }
        }
    }
}

#[test]
fn perturbed_diagonals_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for p in common::heap_suite().iter().step_by(5) {
        let s = SplitSpace::new(p, DEFAULT_CAP).unwrap();
        let d = p.diagram();
        let xs: Vec<SparseMatrix> = d.colors().map(|a| raising_operator(&s, a)).collect();
        let mut values = solve_diagonals(&s).unwrap().values;
        let b = rng.gen_range(0..d.len());
        let j = rng.gen_range(0..s.dim());
        values[b][j] += if rng.gen_bool(0.5) { 1 } else { -1 };
        let hs: Vec<SparseMatrix> = values.iter().map(|v| SparseMatrix::diagonal(v)).collect();
        let report = verify_relations(&s, &xs, &hs).unwrap();
        assert!(!report.all_hold(), "{p:?}");
        assert!(report.failures().any(|f| f.relation == "HX" || f.relation == "iff"));
    }
}

#[test]
fn mismatched_operators_are_an_error() {
    let p = &common::heap_suite()[10];
    let s = SplitSpace::new(p, DEFAULT_CAP).unwrap();
    assert!(verify_relations(&s, &[], &[]).is_err());
}

fn mutate(rng: &mut impl Rng, p: &ColoredPoset) -> Option<ColoredPoset> {
    let n = p.len();
    let d = p.diagram().clone();
    let mut colors: Vec<Color> = p.colors().to_vec();
    let mut covers: Vec<(usize, usize)> = p.covers().to_vec();
    match rng.gen_range(0..3) {
        0 => {
            let lt = common::closure(n, &covers);
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if x == y || lt[x][y] || lt[y][x] {
                return None;
            }
            covers.push((x, y));
            let lt = common::closure(n, &covers);
            covers = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| lt[i][j] && !(0..n).any(|k| lt[i][k] && lt[k][j]))
                .collect();
        }
        1 => {
            if covers.is_empty() {
                return None;
            }
            covers.remove(rng.gen_range(0..covers.len()));
        }
        _ => {
            let x = rng.gen_range(0..n);
            let c = Color(rng.gen_range(0..d.len()));
            if c == colors[x] {
                return None;
            }
            colors[x] = c;
        }
    }
    ColoredPoset::new(d, colors, covers).ok()
}

#[test]
fn corrupted_heaps_fail_verification() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let suite = common::heap_suite();
    let mut rejected = 0;
    let mut attempts = 0;
    while rejected < 300 {
        attempts += 1;
        assert!(attempts < 100_000);
        let p = &suite[rng.gen_range(0..suite.len())];
        let Some(q) = mutate(&mut rng, p) else { continue };
        if is_d_complete(&q) {
            continue;
        }
        let cert = carries_upper_minuscule(&q, DEFAULT_CAP).unwrap();
        assert!(!cert.carries && cert.agrees_with_classification, "{q:?}");
        assert!(cert.failure.is_some());
        rejected += 1;
    }
}

#[test]
fn lower_bound_is_not_needed() {
    // d-complete without the lower bound 1: a over b and c on b-a-c
    let d = DynkinDiagram::simply_laced(vec!["a", "b", "c"], &[(0, 1), (0, 2)]).unwrap();
    let lambda = ColoredPoset::new(d.clone(), vec![Color(0), Color(1), Color(2)], vec![(1, 0), (2, 0)]).unwrap();
    assert!(carries_upper_minuscule(&lambda, DEFAULT_CAP).unwrap().carries);
    // a under b and c breaks the upper bound at a
    let vee = ColoredPoset::new(d, vec![Color(0), Color(1), Color(2)], vec![(0, 1), (0, 2)]).unwrap();
    let cert = carries_upper_minuscule(&vee, DEFAULT_CAP).unwrap();
    assert!(!cert.carries && !cert.is_d_complete);
}

#[test]
fn split_cap_is_reported() {
    let p = common::fixture("two_components.json");
    assert!(carries_upper_minuscule(&p, 100).is_err());
}

fn exhaustive_agreement(max: usize) -> usize {
    let mut checked = 0;
    for k in 1..=3usize {
        let shapes = heapkit::poset::generate::colored_shapes(k, max);
        for d in common::orbit_representatives(common::diagrams(k, &[-1, -2])) {
            let d = std::sync::Arc::new(d);
            for shape in shapes.iter().flatten().filter(|s| s.uses_all_colors(k)) {
                let p = shape.poset(d.clone()).unwrap();
                let cert = carries_upper_minuscule(&p, DEFAULT_CAP).unwrap();
                assert_eq!(cert.carries, is_d_complete(&p), "{p:?}");
                checked += 1;
            }
        }
    }
    checked
}

#[test]
fn carries_exactly_when_d_complete() {
    assert!(exhaustive_agreement(5) > 10_000);
}

#[test]
#[ignore = "several minutes on one core"]
fn carries_exactly_when_d_complete_up_to_six() {
    exhaustive_agreement(6);
}
