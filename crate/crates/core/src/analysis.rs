//! Path weights, clique energies and the colour-0 part of a quiver.

use std::collections::BTreeSet;

use crate::classifier;
use crate::error::{QuiverError, Result};
use crate::graph;
use crate::quiver::ColouredQuiver;

/// Sum of the arrow colours along `path`, as a plain integer.
pub fn path_weight(q: &ColouredQuiver, path: &[usize]) -> Result<u64> {
    q.ensure_simple()?;
    let mut total = 0u64;
    for w in path.windows(2) {
        for &v in w {
            if v >= q.n() {
                return Err(QuiverError::VertexOutOfRange { vertex: v, n: q.n() });
            }
        }
        let c = q
            .colour(w[0], w[1])
            .ok_or_else(|| QuiverError::Precondition(format!("no arrow from {} to {}", w[0] + 1, w[1] + 1)))?;
        total += u64::from(c);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueEnergy {
    pub clique: Vec<usize>,
    /// Smallest weight of a Hamiltonian cycle through the clique.
    pub delta: u64,
    /// A cyclic order attaining `delta`, starting at the smallest vertex.
    pub order: Vec<usize>,
}

fn check_clique(q: &ColouredQuiver, clique: &[usize]) -> Result<Vec<usize>> {
    q.ensure_simple()?;
    let mut k: Vec<usize> = clique.to_vec();
    k.sort_unstable();
    k.dedup();
    if k.len() < 3 {
        return Err(QuiverError::Precondition("energy is defined for cliques of at least 3 vertices".into()));
    }
    if let Some(&v) = k.iter().find(|&&v| v >= q.n()) {
        return Err(QuiverError::VertexOutOfRange { vertex: v, n: q.n() });
    }
    if !q.underlying_graph().is_clique(&k) {
        return Err(QuiverError::Precondition("vertex set is not a clique".into()));
    }
    Ok(k)
}

/// Every Hamiltonian cycle of the clique with its weight. Cycles start at the
/// smallest vertex; both orientations of each cycle are listed.
pub fn hamiltonian_cycles(q: &ColouredQuiver, clique: &[usize]) -> Result<Vec<(Vec<usize>, u64)>> {
    let k = check_clique(q, clique)?;
    let mut out = Vec::new();
    let mut order = vec![k[0]];
    let mut rest: Vec<usize> = k[1..].to_vec();
    permute_cycles(q, &mut order, &mut rest, &mut out);
    Ok(out)
}

fn permute_cycles(q: &ColouredQuiver, order: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, u64)>) {
    if rest.is_empty() {
        let mut w = 0u64;
        for (a, &v) in order.iter().enumerate() {
            let u = order[(a + 1) % order.len()];
            w += u64::from(q.colour(v, u).expect("clique vertices are adjacent"));
        }
        out.push((order.clone(), w));
        return;
    }
    for idx in 0..rest.len() {
        let v = rest.remove(idx);
        order.push(v);
        permute_cycles(q, order, rest, out);
        order.pop();
        rest.insert(idx, v);
    }
}

/// The energy of a clique by brute force over its cyclic orders.
pub fn clique_energy(q: &ColouredQuiver, clique: &[usize]) -> Result<CliqueEnergy> {
    let cycles = hamiltonian_cycles(q, clique)?;
    let mut k: Vec<usize> = clique.to_vec();
    k.sort_unstable();
    k.dedup();
    let (order, delta) = cycles.into_iter().min_by_key(|(_, w)| *w).expect("a clique has cycles");
    Ok(CliqueEnergy { clique: k, delta, order })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCheck {
    pub clique: Vec<usize>,
    pub delta: u64,
    /// `m + 2 - k`, negative if the clique is too large for the class.
    pub expected_delta: i64,
    /// Cycle weights outside `(k-2) {m-1, 2m+1} - (k-3) m`.
    pub stray_weights: Vec<u64>,
}

impl CliqueCheck {
    pub fn passes(&self) -> bool {
        self.delta as i64 == self.expected_delta && self.stray_weights.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyReport {
    pub cliques: Vec<CliqueCheck>,
}

impl EnergyReport {
    pub fn all_pass(&self) -> bool {
        self.cliques.iter().all(CliqueCheck::passes)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CliqueCheck> {
        self.cliques.iter().filter(|c| !c.passes())
    }
}

/// Weights a Hamiltonian cycle of a `k`-clique of a class member may take:
/// sums of `k - 2` values from `{m-1, 2m+1}`, less `(k-3) m`.
pub fn allowed_cycle_weights(k: usize, m: u32) -> BTreeSet<i64> {
    let (m, k) = (i64::from(m), k as i64);
    (0..=k - 2).map(|high| high * (2 * m + 1) + (k - 2 - high) * (m - 1) - (k - 3) * m).collect()
}

/// Checks every clique of at least 3 vertices against the energy and
/// cycle-weight statements, without requiring membership.
pub fn energy_report(q: &ColouredQuiver) -> Result<EnergyReport> {
    q.ensure_simple()?;
    let m = q.m();
    let mut cliques = Vec::new();
    for clique in graph::all_cliques(&q.underlying_graph(), 3) {
        let k = clique.len();
        let allowed = allowed_cycle_weights(k, m);
        let cycles = hamiltonian_cycles(q, &clique)?;
        let delta = cycles.iter().map(|(_, w)| *w).min().expect("a clique has cycles");
        let stray: BTreeSet<u64> = cycles.iter().map(|(_, w)| *w).filter(|&w| !allowed.contains(&(w as i64))).collect();
        cliques.push(CliqueCheck {
            clique,
            delta,
            expected_delta: i64::from(m) + 2 - k as i64,
            stray_weights: stray.into_iter().collect(),
        });
    }
    Ok(EnergyReport { cliques })
}

/// [`energy_report`] for class members.
pub fn verify_energy(q: &ColouredQuiver) -> Result<EnergyReport> {
    classifier::ensure_member(q)?;
    energy_report(q)
}

/// Size of a largest clique of the underlying graph.
pub fn clique_number(q: &ColouredQuiver) -> Result<usize> {
    q.ensure_simple()?;
    Ok(graph::clique_number(&q.underlying_graph()))
}

/// The subquiver of colour-0 arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPart {
    pub n: usize,
    pub arrows: Vec<(usize, usize)>,
}

impl ZeroPart {
    pub fn from_quiver(q: &ColouredQuiver) -> Self {
        let arrows = q.arrows().filter(|&(_, _, c, _)| c == 0).map(|(i, j, _, _)| (i, j)).collect();
        Self { n: q.n(), arrows }
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.n];
        for &(i, j) in &self.arrows {
            succ[i].push(j);
        }
        succ
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|&&(i, _)| i == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|&&(_, j)| j == v).count()
    }

    /// Every simple directed cycle, each listed once starting from its
    /// smallest vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let succ = self.successors();
        let mut out = Vec::new();
        let mut on_path = vec![false; self.n];
        for start in 0..self.n {
            let mut path = vec![start];
            on_path[start] = true;
            extend_cycles(&succ, start, &mut path, &mut on_path, &mut out);
            on_path[start] = false;
        }
        out
    }

    /// Connected components of the underlying undirected graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut g = crate::quiver::UnderlyingGraph::empty(self.n);
        for &(i, j) in &self.arrows {
            g.add_edge(i, j);
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for v in 0..self.n {
            if !seen[v] {
                let comp = g.component_of(v, |_| true);
                for &u in &comp {
                    seen[u] = true;
                }
                out.push(comp);
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph zero_part {\n");
        for v in 0..self.n {
            s.push_str(&format!("  {};\n", v + 1));
        }
        for &(i, j) in &self.arrows {
            s.push_str(&format!("  {} -> {};\n", i + 1, j + 1));
        }
        s.push_str("}\n");
        s
    }
}

fn extend_cycles(
    succ: &[Vec<usize>],
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    for &u in &succ[last] {
        if u == start {
            out.push(path.clone());
        } else if u > start && !on_path[u] {
            on_path[u] = true;
            path.push(u);
            extend_cycles(succ, start, path, on_path, out);
            path.pop();
            on_path[u] = false;
        }
    }
}

pub fn zero_part(q: &ColouredQuiver) -> Result<ZeroPart> {
    q.ensure_valid()?;
    Ok(ZeroPart::from_quiver(q))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    pub cycles: Vec<Vec<usize>>,
    /// Cycles whose length is not `m + 2`.
    pub bad_cycles: Vec<Vec<usize>>,
}

/// Lists the cycles of the colour-0 part of a class member and flags those
/// not of length `m + 2`.
pub fn zero_part_cycles(q: &ColouredQuiver) -> Result<CycleCheck> {
    classifier::ensure_member(q)?;
    let cycles = ZeroPart::from_quiver(q).cycles();
    let len = q.m() as usize + 2;
    let bad_cycles = cycles.iter().filter(|c| c.len() != len).cloned().collect();
    Ok(CycleCheck { cycles, bad_cycles })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValencyCheck {
    /// `(vertex, in-degree, out-degree)` wherever either exceeds 2.
    pub bad_vertices: Vec<(usize, usize, usize)>,
    pub max_in: usize,
    pub max_out: usize,
}

pub fn zero_part_valency(q: &ColouredQuiver) -> Result<ValencyCheck> {
    classifier::ensure_member(q)?;
    let z = ZeroPart::from_quiver(q);
    let mut check = ValencyCheck { bad_vertices: Vec::new(), max_in: 0, max_out: 0 };
    for v in 0..z.n {
        let (i, o) = (z.in_degree(v), z.out_degree(v));
        check.max_in = check.max_in.max(i);
        check.max_out = check.max_out.max(o);
        if i > 2 || o > 2 {
            check.bad_vertices.push((v, i, o));
        }
    }
    Ok(check)
}
