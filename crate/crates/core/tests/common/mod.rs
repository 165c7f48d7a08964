//! Shared fixtures, generators and brute-force oracles for the integration
//! tests. Oracles work from the definitions on dense relation matrices and
//! share no code with the library beyond reading a poset's covers.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use heapkit::axioms::enumerate_heaps;
use heapkit::dynkin::{Color, DynkinDiagram};
use heapkit::io;
use heapkit::poset::ColoredPoset;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> ColoredPoset {
    let path = fixture_path(name);
    let text = std::fs::read_to_string(&path).unwrap();
    io::poset_from_str(name, &text).unwrap()
}

pub fn labels(k: usize) -> Vec<String> {
    (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Every generalized Cartan matrix on `k` colors whose off-diagonal entries
/// come from `{0} ∪ nonzero`.
pub fn diagrams(k: usize, nonzero: &[i64]) -> Vec<DynkinDiagram> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut choices: Vec<(i64, i64)> = vec![(0, 0)];
    for &x in nonzero {
        for &y in nonzero {
            choices.push((x, y));
        }
    }
    let mut out = Vec::new();
    let total = choices.len().pow(pairs.len() as u32);
    for mut code in 0..total {
        let mut theta = vec![vec![0i64; k]; k];
        for (i, row) in theta.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j) in &pairs {
            let (x, y) = choices[code % choices.len()];
            code /= choices.len();
            theta[i][j] = x;
            theta[j][i] = y;
        }
        out.push(DynkinDiagram::new(labels(k), theta).unwrap());
    }
    out
}

fn matrix(d: &DynkinDiagram) -> Vec<Vec<i64>> {
    d.colors().map(|a| d.colors().map(|b| d.theta(a, b)).collect()).collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// One diagram per orbit under relabeling the colors. Colored posets over
/// a relabeled diagram are the relabeled colored posets, so sweeping every
/// coloring over one diagram per orbit misses no isomorphism class.
pub fn orbit_representatives(ds: Vec<DynkinDiagram>) -> Vec<DynkinDiagram> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for d in ds {
        let m = matrix(&d);
        let k = m.len();
        let canon = permutations(k)
            .iter()
            .map(|p| {
                (0..k)
                    .map(|i| (0..k).map(|j| m[p[i]][p[j]]).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(d);
        }
    }
    out
}

/// Every dominant minuscule heap with at most 8 elements over the
/// three-color diagrams with entries in {0, −1, −2}, plus A4, D4, the
/// four-cycle, A5, D5 and G2, deduplicated. Computed once per test binary.
pub fn heap_suite() -> &'static [ColoredPoset] {
    static SUITE: OnceLock<Vec<ColoredPoset>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let mut ds = orbit_representatives(diagrams(3, &[-1, -2]));
        ds.push(DynkinDiagram::simply_laced(labels(4), &[(0, 1), (1, 2), (2, 3)]).unwrap());
        ds.push(DynkinDiagram::simply_laced(labels(4), &[(0, 1), (1, 2), (1, 3)]).unwrap());
        ds.push(DynkinDiagram::simply_laced(labels(4), &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap());
        ds.push(DynkinDiagram::simply_laced(labels(5), &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap());
        ds.push(DynkinDiagram::simply_laced(labels(5), &[(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap());
        ds.push(DynkinDiagram::new(labels(2), vec![vec![2, -1], vec![-3, 2]]).unwrap());
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for d in &ds {
            for h in enumerate_heaps(d, 8, 1_000_000).unwrap() {
                if seen.insert(h.canonical_key()) {
                    out.push(h);
                }
            }
        }
        out
    })
}

/// Dense strict order `lt[x][y]` from the covers, by repeated composition.
pub fn closure(n: usize, covers: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut lt = vec![vec![false; n]; n];
    for &(x, y) in covers {
        lt[x][y] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if lt[i][k] {
                for j in 0..n {
                    if lt[k][j] {
                        lt[i][j] = true;
                    }
                }
            }
        }
    }
    lt
}

/// d-completeness straight from the definitions.
pub fn naive_d_complete(p: &ColoredPoset) -> bool {
    let n = p.len();
    let d = p.diagram();
    let lt = closure(n, p.covers());
    let col = |x: usize| p.color(x);
    let adj = |a: Color, b: Color| a != b && d.theta(a, b) < 0;
    let cmp = |x: usize, y: usize| x == y || lt[x][y] || lt[y][x];
    let covers: HashSet<(usize, usize)> = p.covers().iter().copied().collect();
    for x in 0..n {
        for y in 0..n {
            if col(x) == col(y) && !cmp(x, y) {
                return false;
            }
            if adj(col(x), col(y)) && !cmp(x, y) {
                return false;
            }
            if covers.contains(&(x, y)) && !adj(col(x), col(y)) {
                return false;
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if !(lt[x][y] && col(x) == col(y)) {
                continue;
            }
            let a = col(x);
            let consecutive = !(0..n).any(|z| col(z) == a && lt[x][z] && lt[z][y]);
            if !consecutive {
                continue;
            }
            let sum: i64 = (0..n).filter(|&z| lt[x][z] && lt[z][y]).map(|z| -d.theta(col(z), a)).sum();
            if sum != 2 {
                return false;
            }
        }
    }
    for x in 0..n {
        let a = col(x);
        if (0..n).any(|z| col(z) == a && lt[x][z]) {
            continue;
        }
        let sum: i64 = (0..n).filter(|&z| lt[x][z] && adj(col(z), a)).map(|z| -d.theta(col(z), a)).sum();
        if sum > 1 {
            return false;
        }
    }
    true
}

/// A random colored poset: a random strict order from a random upper
/// triangular relation, reduced to covers, with random colors.
pub fn random_poset(rng: &mut impl Rng, d: Arc<DynkinDiagram>, n: usize, density: f64) -> Option<ColoredPoset> {
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rng.gen_bool(density);
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let lt = closure(n, &pairs.iter().copied().filter(|&(i, j)| rel[i][j]).collect::<Vec<_>>());
    let covers: Vec<(usize, usize)> = pairs
        .into_iter()
        .filter(|&(i, j)| lt[i][j] && !(0..n).any(|k| lt[i][k] && lt[k][j]))
        .collect();
    let colors = (0..n).map(|_| Color(rng.gen_range(0..d.len()))).collect();
    ColoredPoset::with_shared_diagram(d, colors, covers).ok()
}
