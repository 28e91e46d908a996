//! Membership test for the class of quivers mutation equivalent to a line.
//!
//! A quiver on `n` vertices belongs to the class when it is simple, connected
//! and hole-free, and additionally:
//!
//! 1. the neighbourhood of every vertex `v` splits into at most two cliques
//!    with no arrows between them, each of size at most `m + 1` (so that
//!    together with `v` they are cliques of size at most `m + 2`);
//! 2. around every triangle the colour sum of one orientation is `m - 1`
//!    (the other orientation then sums to `2m + 1`). Sums are plain integers.

use std::fmt;

use crate::error::{QuiverError, Result};
use crate::graph;
use crate::quiver::{ColouredQuiver, UnderlyingGraph};

/// Witness for the clique condition at one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueDecomposition {
    pub vertex: usize,
    /// Contains the smallest neighbour (empty only for an isolated vertex).
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
}

impl CliqueDecomposition {
    /// Size of the clique `part_a + {vertex}`.
    pub fn r(&self) -> usize {
        self.part_a.len() + 1
    }

    /// Size of the clique `part_b + {vertex}`.
    pub fn k(&self) -> usize {
        self.part_b.len() + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    NotSimple,
    NotConnected,
    Hole(Vec<usize>),
    BadVertexSplit(usize),
    /// Vertices and the colour sums of the orientations `v1 v2 v3` and `v1 v3 v2`.
    BadTriangle {
        vertices: [usize; 3],
        sums: (u32, u32),
    },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NotSimple => write!(f, "not simple"),
            Failure::NotConnected => write!(f, "not connected"),
            Failure::Hole(c) => {
                let labels: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
                write!(f, "hole ({})", labels.join(" "))
            }
            Failure::BadVertexSplit(v) => write!(f, "neighbourhood of {} is not two small cliques", v + 1),
            Failure::BadTriangle { vertices: [a, b, c], sums } => {
                write!(f, "triangle ({} {} {}) has colour sums {:?}", a + 1, b + 1, c + 1, sums)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub member: bool,
    pub failures: Vec<Failure>,
}

impl MembershipVerdict {
    fn from_failures(failures: Vec<Failure>) -> Self {
        Self { member: failures.is_empty(), failures }
    }
}

impl fmt::Display for MembershipVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.member {
            return write!(f, "member");
        }
        let parts: Vec<String> = self.failures.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// An induced cycle of length at least four in the underlying graph.
pub fn find_hole(q: &ColouredQuiver) -> Option<Vec<usize>> {
    graph::find_hole(&q.underlying_graph())
}

/// The two-clique split of the neighbourhood of `v`, if it exists.
pub fn vertex_split(q: &ColouredQuiver, v: usize) -> Result<Option<CliqueDecomposition>> {
    q.ensure_simple()?;
    if v >= q.n() {
        return Err(QuiverError::VertexOutOfRange { vertex: v, n: q.n() });
    }
    Ok(split_in_graph(&q.underlying_graph(), v, q.m()))
}

pub(crate) fn split_in_graph(g: &UnderlyingGraph, v: usize, m: u32) -> Option<CliqueDecomposition> {
    let nbrs = g.neighbours(v);
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; g.n()];
    for &start in nbrs {
        if assigned[start] {
            continue;
        }
        let comp = g.component_of(start, |u| nbrs.binary_search(&u).is_ok());
        for &u in &comp {
            assigned[u] = true;
        }
        parts.push(comp);
    }
    if parts.len() > 2 {
        return None;
    }
    let cap = m as usize + 1;
    if parts.iter().any(|p| p.len() > cap || !g.is_clique(p)) {
        return None;
    }
    let mut parts = parts.into_iter();
    let part_a = parts.next().unwrap_or_default();
    let part_b = parts.next().unwrap_or_default();
    Some(CliqueDecomposition { vertex: v, part_a, part_b })
}

/// Colour sums `(s, 3m - s)` where `s` is the sum along `v1 -> v2 -> v3 -> v1`.
pub fn triangle_sums(q: &ColouredQuiver, v1: usize, v2: usize, v3: usize) -> Result<(u32, u32)> {
    q.ensure_simple()?;
    for v in [v1, v2, v3] {
        if v >= q.n() {
            return Err(QuiverError::VertexOutOfRange { vertex: v, n: q.n() });
        }
    }
    let colour = |a: usize, b: usize| {
        q.colour(a, b)
            .ok_or_else(|| QuiverError::Precondition(format!("vertices {} and {} are not adjacent", a + 1, b + 1)))
    };
    let s = colour(v1, v2)? + colour(v2, v3)? + colour(v3, v1)?;
    Ok((s, 3 * q.m() - s))
}

fn triangle_ok(m: u32, sums: (u32, u32)) -> bool {
    let allowed = |s: u32| s + 1 == m || s == 2 * m + 1;
    allowed(sums.0) && allowed(sums.1)
}

/// Full membership check with witnesses for every failed condition.
pub fn is_member(q: &ColouredQuiver) -> Result<MembershipVerdict> {
    q.ensure_valid()?;
    if !q.is_simple() {
        return Ok(MembershipVerdict::from_failures(vec![Failure::NotSimple]));
    }
    let g = q.underlying_graph();
    let mut failures = Vec::new();
    if !g.is_connected() {
        failures.push(Failure::NotConnected);
    }
    if let Some(hole) = graph::find_hole(&g) {
        failures.push(Failure::Hole(hole));
    }
    for v in 0..q.n() {
        if split_in_graph(&g, v, q.m()).is_none() {
            failures.push(Failure::BadVertexSplit(v));
        }
    }
    let n = q.n();
    for a in 0..n {
        for &b in g.neighbours(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbours(b).iter().filter(|&&c| c > b) {
                if !g.has_edge(a, c) {
                    continue;
                }
                let sums = triangle_sums(q, a, b, c)?;
                if !triangle_ok(q.m(), sums) {
                    failures.push(Failure::BadTriangle { vertices: [a, b, c], sums });
                }
            }
        }
    }
    Ok(MembershipVerdict::from_failures(failures))
}

/// Fails with [`QuiverError::NotMember`] unless `q` is a class member.
pub fn ensure_member(q: &ColouredQuiver) -> Result<()> {
    let verdict = is_member(q)?;
    if verdict.member {
        Ok(())
    } else {
        Err(QuiverError::NotMember(Box::new(verdict)))
    }
}

/// Graph-level part of membership: connected, chordal, every neighbourhood
/// at most two small cliques. Colours are not consulted.
pub(crate) fn graph_admissible(g: &UnderlyingGraph, m: u32) -> bool {
    g.is_connected() && graph::is_chordal(g) && (0..g.n()).all(|v| split_in_graph(g, v, m).is_some())
}
