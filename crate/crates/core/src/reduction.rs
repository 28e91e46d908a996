//! Reduction of class members to a linear quiver.
//!
//! A clique `C` is almost extremal when deleting its arrows leaves a path
//! component through one of its vertices, the apex; it is extremal when that
//! path is the apex alone, i.e. the apex has no neighbours outside `C`.
//!
//! * [`shrink_extremal`] mutates at the apex of an extremal clique and splits
//!   one vertex off it, removing at least one edge.
//! * [`make_extremal`] moves an almost extremal clique one step along its
//!   tail: the first tail vertex joins the clique and the clique vertex the
//!   apex sees with the smallest colour is pushed out.
//! * [`reduce_to_line`] alternates the two until the quiver is a path.
//!
//! Tail recolouring uses the fact that mutating at a vertex with exactly two
//! neighbours and equal outgoing colours only rotates its colours.

use std::fmt;

use crate::classifier;
use crate::error::{QuiverError, Result};
use crate::graph;
use crate::mutation::{mutate_unchecked, MutationSequence};
use crate::quiver::{linear_quiver, Colour, ColouredQuiver};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueKind {
    Extremal,
    AlmostExtremal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalWitness {
    /// Sorted vertex set of the clique.
    pub clique: Vec<usize>,
    pub kind: CliqueKind,
    /// The path component left by deleting the clique's arrows, starting at
    /// the apex. A single vertex for extremal cliques.
    pub tail: Vec<usize>,
}

impl ExtremalWitness {
    pub fn apex(&self) -> usize {
        self.tail[0]
    }
}

impl fmt::Display for ExtremalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = |vs: &[usize]| vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(",");
        let kind = match self.kind {
            CliqueKind::Extremal => "extremal",
            CliqueKind::AlmostExtremal => "almost extremal",
        };
        write!(f, "{kind} clique {{{}}} with tail [{}]", labels(&self.clique), labels(&self.tail))
    }
}

/// Mutates `q` in place and records the step.
struct Walker {
    q: ColouredQuiver,
    seq: MutationSequence,
}

impl Walker {
    fn new(q: ColouredQuiver) -> Self {
        Self { q, seq: MutationSequence::new() }
    }

    fn mutate(&mut self, v: usize, power: u32) -> Result<()> {
        let power = power % (self.q.m() + 1);
        for _ in 0..power {
            self.q = mutate_unchecked(&self.q, v)?;
        }
        self.seq.push_normalized(v, u64::from(power), self.q.m());
        Ok(())
    }

    fn colour(&self, i: usize, j: usize) -> Result<Colour> {
        self.q
            .colour(i, j)
            .ok_or_else(|| QuiverError::Internal(format!("expected an arrow between {} and {}", i + 1, j + 1)))
    }

    /// Makes the arrow `path[i] -> path[i+1]` have colour `target` using only
    /// mutations at `path[i+1..]`. Each of those vertices must have no
    /// neighbours besides its path neighbours.
    fn set_edge(&mut self, path: &[usize], i: usize, target: Colour) -> Result<()> {
        let m = self.q.m();
        let (a, b) = (path[i], path[i + 1]);
        let current = self.colour(a, b)?;
        // each mutation at b raises the colour of a -> b by one
        let power = (target + m + 1 - current) % (m + 1);
        if power == 0 {
            return Ok(());
        }
        if i + 2 < path.len() {
            // equal outgoing colours at b keep the mutation a pure rotation
            self.set_edge(path, i + 1, m - current)?;
        }
        self.mutate(b, power)?;
        let got = self.colour(a, b)?;
        if got != target {
            return Err(QuiverError::Internal(format!(
                "recolouring {} -> {} gave colour {got}, wanted {target}",
                a + 1,
                b + 1
            )));
        }
        Ok(())
    }
}

/// Sequence taking the line with every arrow `k+1 -> k` of colour 0 to the
/// line with arrow `k+1 -> k` of colour `target[k-1]` (vertices 1-based).
pub fn recolour_line(n: usize, m: u32, target: &[Colour]) -> Result<MutationSequence> {
    if target.len() + 1 != n.max(1) {
        return Err(QuiverError::Precondition(format!(
            "a line on {n} vertices needs {} colours, got {}",
            n.saturating_sub(1),
            target.len()
        )));
    }
    if let Some(&c) = target.iter().find(|&&c| c > m) {
        return Err(QuiverError::ColourOutOfRange { colour: c, m });
    }
    let start = linear_quiver(n, m, Some(&vec![m; n - 1]))?;
    let mut w = Walker::new(start);
    // anchored at the last vertex, the leaf is vertex 1
    let path: Vec<usize> = (0..n).rev().collect();
    for i in 0..n.saturating_sub(1) {
        w.set_edge(&path, i, target[n - 2 - i])?;
    }
    Ok(w.seq)
}

/// The line [`recolour_line`] starts from.
pub fn recolour_start(n: usize, m: u32) -> Result<ColouredQuiver> {
    linear_quiver(n, m, Some(&vec![m; n.saturating_sub(1)]))
}

/// The line [`recolour_line`] aims at.
pub fn recolour_target(n: usize, m: u32, target: &[Colour]) -> Result<ColouredQuiver> {
    let colours: Vec<Colour> = target.iter().map(|&c| m.saturating_sub(c)).collect();
    linear_quiver(n, m, Some(&colours))
}

/// An almost extremal clique found from a longest path: its first vertex is
/// either simplicial (extremal clique) or a leaf whose degree-two chain ends
/// at the apex of an almost extremal clique.
pub fn find_almost_extremal(q: &ColouredQuiver) -> Result<ExtremalWitness> {
    classifier::ensure_member(q)?;
    let g = q.underlying_graph();
    if g.is_path() || q.n() == 1 {
        return Err(QuiverError::AlreadyLinear);
    }
    let path = graph::longest_path(&g);
    let from_path = witness_from_path(q, &path);
    if let Some(w) = from_path.filter(|w| verify_witness(q, w)) {
        return Ok(w);
    }
    search_witness(q).ok_or_else(|| QuiverError::Internal("no almost extremal clique found".into()))
}

fn witness_from_path(q: &ColouredQuiver, path: &[usize]) -> Option<ExtremalWitness> {
    let g = q.underlying_graph();
    let first = *path.first()?;
    if g.degree(first) >= 2 {
        let mut clique = g.neighbours(first).to_vec();
        clique.push(first);
        clique.sort_unstable();
        return g.is_clique(&clique).then(|| ExtremalWitness { clique, kind: CliqueKind::Extremal, tail: vec![first] });
    }
    let k = path.iter().position(|&v| g.degree(v) >= 3)?;
    if k == 0 {
        return None;
    }
    let apex = path[k];
    let mut clique: Vec<usize> = g.neighbours(apex).iter().copied().filter(|&u| u != path[k - 1]).collect();
    clique.push(apex);
    clique.sort_unstable();
    let tail: Vec<usize> = path[..=k].iter().rev().copied().collect();
    Some(ExtremalWitness { clique, kind: CliqueKind::AlmostExtremal, tail })
}

/// Checks the defining shape: `clique` is a clique of at least 3 vertices,
/// `tail` starts in it at the apex, the apex's only neighbour outside the
/// clique is the next tail vertex, and the remaining tail is a chain ending
/// in a leaf with no other neighbours.
pub fn verify_witness(q: &ColouredQuiver, w: &ExtremalWitness) -> bool {
    let g = q.underlying_graph();
    if w.clique.len() < 3 || !g.is_clique(&w.clique) || w.tail.is_empty() {
        return false;
    }
    let apex = w.tail[0];
    if w.clique.binary_search(&apex).is_err() {
        return false;
    }
    let outside: Vec<usize> =
        g.neighbours(apex).iter().copied().filter(|u| w.clique.binary_search(u).is_err()).collect();
    match w.kind {
        CliqueKind::Extremal => w.tail.len() == 1 && outside.is_empty(),
        CliqueKind::AlmostExtremal => {
            if w.tail.len() < 2 || outside != [w.tail[1]] {
                return false;
            }
            (1..w.tail.len()).all(|i| {
                let v = w.tail[i];
                let mut expected = vec![w.tail[i - 1]];
                if i + 1 < w.tail.len() {
                    expected.push(w.tail[i + 1]);
                }
                expected.sort_unstable();
                g.neighbours(v) == expected.as_slice()
            })
        }
    }
}

/// Exhaustive fallback: any simplicial vertex of degree at least 2, else any
/// leaf chain ending at a vertex whose other neighbours form a clique.
fn search_witness(q: &ColouredQuiver) -> Option<ExtremalWitness> {
    let g = q.underlying_graph();
    for v in 0..q.n() {
        if g.degree(v) >= 2 {
            let mut clique = g.neighbours(v).to_vec();
            clique.push(v);
            clique.sort_unstable();
            if g.is_clique(&clique) {
                return Some(ExtremalWitness { clique, kind: CliqueKind::Extremal, tail: vec![v] });
            }
        }
    }
    for leaf in (0..q.n()).filter(|&v| g.degree(v) == 1) {
        let mut chain = vec![leaf];
        let mut prev = usize::MAX;
        let mut cur = leaf;
        loop {
            let next = g.neighbours(cur).iter().copied().find(|&u| u != prev);
            let Some(next) = next else { break };
            chain.push(next);
            if g.degree(next) >= 3 {
                break;
            }
            prev = cur;
            cur = next;
        }
        let apex = *chain.last().unwrap();
        if chain.len() < 2 || g.degree(apex) < 3 {
            continue;
        }
        let witness = witness_from_path(q, &chain)?;
        if verify_witness(q, &witness) {
            return Some(witness);
        }
    }
    None
}

/// Vertex of the clique the apex sees with the smallest colour, and that colour.
fn smallest_out(q: &ColouredQuiver, apex: usize, clique: &[usize]) -> Result<(usize, Colour)> {
    clique
        .iter()
        .copied()
        .filter(|&u| u != apex)
        .filter_map(|u| q.colour(apex, u).map(|c| (c, u)))
        .min()
        .map(|(c, u)| (u, c))
        .ok_or_else(|| QuiverError::Precondition("apex has no neighbour in the clique".into()))
}

/// Splits the smallest-colour neighbour off the apex of an extremal clique.
pub fn shrink_extremal(q: &ColouredQuiver, witness: &ExtremalWitness) -> Result<(ColouredQuiver, MutationSequence)> {
    if witness.kind != CliqueKind::Extremal || !verify_witness(q, witness) {
        return Err(QuiverError::Precondition(format!("not an extremal clique: {witness}")));
    }
    let apex = witness.apex();
    let (_, c1) = smallest_out(q, apex, &witness.clique)?;
    let mut w = Walker::new(q.clone());
    w.mutate(apex, c1 + 1)?;
    Ok((w.q, w.seq))
}

/// Moves an almost extremal clique one vertex along its tail. Returns the
/// mutated quiver, the sequence used and the witness for the moved clique.
pub fn make_extremal(
    q: &ColouredQuiver,
    witness: &ExtremalWitness,
) -> Result<(ColouredQuiver, MutationSequence, ExtremalWitness)> {
    if witness.kind != CliqueKind::AlmostExtremal || !verify_witness(q, witness) {
        return Err(QuiverError::Precondition(format!("not an almost extremal clique: {witness}")));
    }
    let apex = witness.apex();
    let (pushed, c1) = smallest_out(q, apex, &witness.clique)?;
    let mut w = Walker::new(q.clone());
    // apex -> w1 must match the smallest colour into the clique
    w.set_edge(&witness.tail, 0, c1)?;
    w.mutate(apex, c1 + 1)?;

    let w1 = witness.tail[1];
    let mut clique: Vec<usize> = witness.clique.iter().copied().filter(|&u| u != pushed).collect();
    clique.push(w1);
    clique.sort_unstable();
    let tail = witness.tail[1..].to_vec();
    let kind = if tail.len() == 1 { CliqueKind::Extremal } else { CliqueKind::AlmostExtremal };
    let next = ExtremalWitness { clique, kind, tail };
    if !verify_witness(&w.q, &next) {
        return Err(QuiverError::Internal(format!("walking {witness} did not produce {next}")));
    }
    Ok((w.q, w.seq, next))
}

/// A path quiver mutation equivalent to `q` and a sequence reaching it.
pub fn reduce_to_line(q: &ColouredQuiver) -> Result<(ColouredQuiver, MutationSequence)> {
    reduce_with_trace(q, |_| Ok(()))
}

/// [`reduce_to_line`] calling `inspect` on the quiver after every round.
pub fn reduce_with_trace(
    q: &ColouredQuiver,
    mut inspect: impl FnMut(&ColouredQuiver) -> Result<()>,
) -> Result<(ColouredQuiver, MutationSequence)> {
    classifier::ensure_member(q)?;
    let m = q.m();
    let mut cur = q.clone();
    let mut seq = MutationSequence::new();
    let cap = q.edge_count() + 1;
    for _ in 0..=cap {
        let witness = match find_almost_extremal(&cur) {
            Err(QuiverError::AlreadyLinear) => return Ok((cur, seq)),
            other => other?,
        };
        let mut witness = witness;
        while witness.kind == CliqueKind::AlmostExtremal {
            let (next, steps, moved) = make_extremal(&cur, &witness)?;
            seq.extend_normalized(&steps, m);
            cur = next;
            witness = moved;
        }
        let edges = cur.edge_count();
        let (next, steps) = shrink_extremal(&cur, &witness)?;
        seq.extend_normalized(&steps, m);
        cur = next;
        if cur.edge_count() >= edges {
            return Err(QuiverError::Internal(format!("shrinking {witness} did not remove an edge")));
        }
        inspect(&cur)?;
    }
    Err(QuiverError::Internal(format!("reduction did not finish within {cap} rounds")))
}
