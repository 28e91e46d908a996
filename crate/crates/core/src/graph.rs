//! Undirected graph algorithms on the underlying graph of a quiver.

use std::collections::VecDeque;

use crate::quiver::UnderlyingGraph;

/// Maximum cardinality search. Returns vertices in the order they were
/// numbered; the reverse of that order is a perfect elimination ordering
/// exactly when the graph is chordal.
pub fn maximum_cardinality_search(g: &UnderlyingGraph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut numbered = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        // ties go to the smallest vertex, for determinism
        let v = (0..n)
            .filter(|&v| !numbered[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("unnumbered vertex");
        numbered[v] = true;
        order.push(v);
        for &u in g.neighbours(v) {
            if !numbered[u] {
                weight[u] += 1;
            }
        }
    }
    order
}

/// Checks that `elimination` (first eliminated first) is a perfect
/// elimination ordering: each vertex's later neighbours form a clique.
pub fn is_perfect_elimination_ordering(g: &UnderlyingGraph, elimination: &[usize]) -> bool {
    let n = g.n();
    let mut position = vec![0usize; n];
    for (k, &v) in elimination.iter().enumerate() {
        position[v] = k;
    }
    for &v in elimination {
        let later: Vec<usize> = g.neighbours(v).iter().copied().filter(|&u| position[u] > position[v]).collect();
        // it suffices to check the earliest later neighbour
        let Some(&parent) = later.iter().min_by_key(|&&u| position[u]) else {
            continue;
        };
        if later.iter().any(|&u| u != parent && !g.has_edge(parent, u)) {
            return false;
        }
    }
    true
}

pub fn is_chordal(g: &UnderlyingGraph) -> bool {
    if g.n() <= 3 {
        return true;
    }
    let mut order = maximum_cardinality_search(g);
    order.reverse();
    is_perfect_elimination_ordering(g, &order)
}

/// A shortest induced cycle of length at least four, if one exists.
///
/// For each vertex `a` and each pair of non-adjacent neighbours `b < c`, a
/// shortest `b`-`c` path avoiding the rest of the closed neighbourhood of `a`
/// closes an induced cycle through `a`. Every hole arises this way.
pub fn find_hole(g: &UnderlyingGraph) -> Option<Vec<usize>> {
    if is_chordal(g) {
        return None;
    }
    let n = g.n();
    let mut best: Option<Vec<usize>> = None;
    for a in 0..n {
        let nbrs = g.neighbours(a);
        for (x, &b) in nbrs.iter().enumerate() {
            for &c in &nbrs[x + 1..] {
                if g.has_edge(b, c) {
                    continue;
                }
                let blocked = |u: usize| u == a || (u != b && u != c && g.has_edge(a, u));
                if let Some(path) = shortest_path(g, b, c, blocked) {
                    let mut cycle = vec![a];
                    cycle.extend(path);
                    if best.as_ref().is_none_or(|h| cycle.len() < h.len()) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    best
}

fn shortest_path(g: &UnderlyingGraph, from: usize, to: usize, blocked: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let n = g.n();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &u in g.neighbours(v) {
            if !seen[u] && !blocked(u) {
                seen[u] = true;
                prev[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

/// Maximal cliques by Bron–Kerbosch with pivoting, each sorted, the list
/// sorted lexicographically.
pub fn maximal_cliques(g: &UnderlyingGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let all: Vec<usize> = (0..g.n()).collect();
    bron_kerbosch(g, &mut Vec::new(), all, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    g: &UnderlyingGraph,
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot =
        p.iter().chain(x.iter()).copied().max_by_key(|&u| p.iter().filter(|&&v| g.has_edge(u, v)).count()).unwrap();
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
    for v in candidates {
        let np = p.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        let nx = x.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        r.push(v);
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

/// Every clique with at least `min_size` vertices (not only maximal ones),
/// each sorted, the list sorted and free of duplicates.
pub fn all_cliques(g: &UnderlyingGraph, min_size: usize) -> Vec<Vec<usize>> {
    let mut out = std::collections::BTreeSet::new();
    for clique in maximal_cliques(g) {
        let k = clique.len();
        if k < min_size || k >= usize::BITS as usize {
            continue;
        }
        for mask in 0u64..(1u64 << k) {
            if (mask.count_ones() as usize) < min_size {
                continue;
            }
            let sub: Vec<usize> = (0..k).filter(|&b| mask >> b & 1 == 1).map(|b| clique[b]).collect();
            out.insert(sub);
        }
    }
    out.into_iter().collect()
}

pub fn clique_number(g: &UnderlyingGraph) -> usize {
    maximal_cliques(g).iter().map(Vec::len).max().unwrap_or(0)
}

/// Lexicographically smallest among the longest simple paths.
pub fn longest_path(g: &UnderlyingGraph) -> Vec<usize> {
    let n = g.n();
    let mut best: Vec<usize> = Vec::new();
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for s in 0..n {
        path.push(s);
        on_path[s] = true;
        extend_path(g, &mut path, &mut on_path, &mut best);
        on_path[s] = false;
        path.pop();
        if best.len() == n {
            break;
        }
    }
    best
}

fn extend_path(g: &UnderlyingGraph, path: &mut Vec<usize>, on_path: &mut [bool], best: &mut Vec<usize>) {
    // neighbours are visited in increasing order, so the first path of a
    // given length found is the lexicographically smallest
    if path.len() > best.len() {
        best.clear();
        best.extend_from_slice(path);
    }
    if best.len() == g.n() {
        return;
    }
    let last = *path.last().unwrap();
    for &u in g.neighbours(last) {
        if on_path[u] {
            continue;
        }
        on_path[u] = true;
        path.push(u);
        extend_path(g, path, on_path, best);
        path.pop();
        on_path[u] = false;
        if best.len() == g.n() {
            return;
        }
    }
}
