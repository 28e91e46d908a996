//! Independent oracles shared by the integration tests. Nothing here calls
//! the canonical-form, classification or enumeration code under test.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;

use qml_core::json::quiver_from_str;
use qml_core::ColouredQuiver;
use rand::Rng;

/// Works from either crate's tests; the fixtures live with the core crate.
pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

pub fn fixture(name: &str) -> ColouredQuiver {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    quiver_from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub const A3_M2_MEMBERS: [&str; 7] = [
    "a3_m2_members/line_00.json",
    "a3_m2_members/line_20.json",
    "a3_m2_members/line_10.json",
    "a3_m2_members/line_01.json",
    "a3_m2_members/line_02.json",
    "a3_m2_members/line_11.json",
    "a3_m2_members/triangle.json",
];

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Upper-triangle table `(mult, colour)` of `q` relabelled by `perm`.
fn table(q: &ColouredQuiver, perm: &[usize]) -> Vec<(u32, u32)> {
    let n = q.n();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push(q.arrow(inv[a], inv[b]).map(|(c, k)| (k, c)).unwrap_or((0, 0)));
        }
    }
    out
}

/// Minimum relabelled table over every permutation: equal for two quivers
/// exactly when they are isomorphic.
pub fn brute_canonical(q: &ColouredQuiver) -> (u32, Vec<(u32, u32)>) {
    let best = permutations(q.n()).iter().map(|p| table(q, p)).min().unwrap();
    (q.m(), best)
}

pub fn brute_isomorphic(a: &ColouredQuiver, b: &ColouredQuiver) -> bool {
    a.m() == b.m() && a.n() == b.n() && permutations(a.n()).iter().any(|p| &a.permuted(p) == b)
}

/// Classical exchange-matrix mutation at `k`.
pub fn fz_mutate(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let n = b.len();
    let mut out = b.to_vec();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + (b[i][k].abs() * b[k][j] + b[i][k] * b[k][j].abs()) / 2
            };
        }
    }
    out
}

pub fn fz_canonical(b: &[Vec<i64>]) -> Vec<i64> {
    let n = b.len();
    permutations(n)
        .iter()
        .map(|p| {
            let mut inv = vec![0; n];
            for (v, &x) in p.iter().enumerate() {
                inv[x] = v;
            }
            let mut flat = Vec::with_capacity(n * n);
            for a in 0..n {
                for c in 0..n {
                    flat.push(b[inv[a]][inv[c]]);
                }
            }
            flat
        })
        .min()
        .unwrap()
}

/// Isomorphism classes of exchange matrices mutation equivalent to the
/// linearly oriented `A_n`.
pub fn fz_class_a(n: usize) -> BTreeSet<Vec<i64>> {
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n.saturating_sub(1) {
        b[i][i + 1] = 1;
        b[i + 1][i] = -1;
    }
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::from([b.clone()]);
    let mut queue = VecDeque::from([b]);
    while let Some(cur) = queue.pop_front() {
        for k in 0..n {
            let next = fz_mutate(&cur, k);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.iter().map(|b| fz_canonical(b)).collect()
}

/// Exchange matrix of a 1-coloured quiver: colour-0 arrows `i -> j` count
/// positively in `b[i][j]`.
pub fn exchange_matrix(q: &ColouredQuiver) -> Vec<Vec<i64>> {
    assert_eq!(q.m(), 1);
    let n = q.n();
    (0..n).map(|i| (0..n).map(|j| i64::from(q.mult(i, j, 0)) - i64::from(q.mult(j, i, 0))).collect()).collect()
}

/// Uniformly chosen valid quiver: each pair is empty with probability
/// `p_empty`, otherwise gets a random colour and multiplicity.
pub fn random_valid_quiver(rng: &mut impl Rng, n: usize, m: u32, max_mult: u32, p_empty: f64) -> ColouredQuiver {
    let mut q = ColouredQuiver::new(m, n).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p_empty) {
                continue;
            }
            let c = rng.random_range(0..=m);
            let mult = rng.random_range(1..=max_mult);
            q.add_pair(i, j, c, mult).unwrap();
        }
    }
    assert!(q.is_valid());
    q
}

/// Randomly oriented tree: every arrow has colour 0 one way and `m` the other.
pub fn random_oriented_tree(rng: &mut impl Rng, n: usize, m: u32) -> ColouredQuiver {
    let mut q = ColouredQuiver::new(m, n).unwrap();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        let c = if rng.random_bool(0.5) { 0 } else { m };
        q.add_pair(parent, v, c, 1).unwrap();
    }
    q
}
