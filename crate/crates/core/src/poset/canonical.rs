//! Canonical labeling of finite colored DAGs.
//!
//! Individualization-refinement: an isomorphism-invariant ordered partition
//! is refined by neighbour-cell multisets; ties are broken by trying every
//! vertex of the first non-singleton cell, and the lexicographically least
//! adjacency code over all leaves is the canonical form.

/// Canonical code plus the labeling that produces it (`order[pos]` is the
/// original element placed at canonical position `pos`).
pub(crate) struct Canonical {
    pub code: Vec<u32>,
    pub order: Vec<usize>,
}

pub(crate) fn canonical_form(colors: &[u32], up: &[Vec<usize>]) -> Canonical {
    let n = colors.len();
    let mut down = vec![Vec::new(); n];
    for (x, ys) in up.iter().enumerate() {
        for &y in ys {
            down[y].push(x);
        }
    }
    let height = longest_chain(&down, up);
    let depth = longest_chain(up, &down);
    let keys: Vec<(u32, usize, usize, usize, usize)> = (0..n)
        .map(|x| (colors[x], height[x], depth[x], up[x].len(), down[x].len()))
        .collect();
    let mut cell_of = vec![0usize; n];
    let mut sorted: Vec<usize> = (0..n).collect();
    sorted.sort_by_key(|&x| keys[x]);
    let mut idx = 0;
    for i in 0..n {
        if i > 0 && keys[sorted[i]] != keys[sorted[i - 1]] {
            idx = i;
        }
        cell_of[sorted[i]] = idx;
    }
    let ctx = Ctx { colors, up, down: &down };
    let mut best: Option<Canonical> = None;
    ctx.search(cell_of, &mut best);
    best.expect("search visits at least one leaf")
}

/// Longest chain length reaching each vertex along `from` edges, where
/// `from[x]` lists the predecessors of `x`.
fn longest_chain(from: &[Vec<usize>], to: &[Vec<usize>]) -> Vec<usize> {
    let n = from.len();
    let mut indeg: Vec<usize> = from.iter().map(Vec::len).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut out = vec![0; n];
    while let Some(x) = stack.pop() {
        for &y in &to[x] {
            out[y] = out[y].max(out[x] + 1);
            indeg[y] -= 1;
            if indeg[y] == 0 {
                stack.push(y);
            }
        }
    }
    out
}

struct Ctx<'a> {
    colors: &'a [u32],
    up: &'a [Vec<usize>],
    down: &'a [Vec<usize>],
}

impl Ctx<'_> {
    /// `cell_of[x]` is the index of the first position of x's cell; cells
    /// are therefore ordered and their indices encode their sizes.
    fn refine(&self, cell_of: &mut [usize]) {
        let n = cell_of.len();
        loop {
            let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
                .map(|x| {
                    let mut u: Vec<usize> = self.up[x].iter().map(|&y| cell_of[y]).collect();
                    let mut d: Vec<usize> = self.down[x].iter().map(|&y| cell_of[y]).collect();
                    u.sort_unstable();
                    d.sort_unstable();
                    (cell_of[x], u, d)
                })
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
            let mut next = vec![0; n];
            let mut idx = 0;
            for i in 0..n {
                if i > 0 && sigs[order[i]] != sigs[order[i - 1]] {
                    idx = i;
                }
                next[order[i]] = idx;
            }
            let before = count_cells(cell_of);
            cell_of.copy_from_slice(&next);
            if count_cells(cell_of) == before {
                return;
            }
        }
    }

    fn search(&self, mut cell_of: Vec<usize>, best: &mut Option<Canonical>) {
        self.refine(&mut cell_of);
        let n = cell_of.len();
        let mut sizes = vec![0usize; n];
        for &c in &cell_of {
            sizes[c] += 1;
        }
        let target = (0..n).find(|&c| sizes[c] > 1);
        let Some(target) = target else {
            let mut order = vec![0; n];
            for (x, &c) in cell_of.iter().enumerate() {
                order[c] = x;
            }
            let code = self.code(&cell_of, &order);
            if best.as_ref().map_or(true, |b| code < b.code) {
                *best = Some(Canonical { code, order });
            }
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&x| cell_of[x] == target).collect();
        for &v in &members {
            let mut next = cell_of.clone();
            for &w in &members {
                if w != v {
                    next[w] = target + 1;
                }
            }
            self.search(next, best);
        }
    }

    fn code(&self, pos: &[usize], order: &[usize]) -> Vec<u32> {
        let n = order.len();
        let mut code = Vec::with_capacity(2 * n + 1);
        code.push(n as u32);
        code.extend(order.iter().map(|&x| self.colors[x]));
        for &x in order {
            let mut ups: Vec<u32> = self.up[x].iter().map(|&y| pos[y] as u32).collect();
            ups.sort_unstable();
            code.push(ups.len() as u32);
            code.extend(ups);
        }
        code
    }
}

fn count_cells(cell_of: &[usize]) -> usize {
    let mut seen = vec![false; cell_of.len()];
    let mut k = 0;
    for &c in cell_of {
        if !seen[c] {
            seen[c] = true;
            k += 1;
        }
    }
    k
}
