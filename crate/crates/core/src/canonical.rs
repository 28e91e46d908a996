//! Exact canonical forms for coloured quivers up to colour-preserving
//! isomorphism.
//!
//! Vertices are first split into cells by an equitable refinement that only
//! looks at colours, multiplicities and cell membership, so it commutes with
//! relabelling. Non-singleton cells are resolved by individualising each of
//! their vertices in turn; every leaf of that search is a full labelling and
//! the canonical form is the smallest encoding over all leaves. Since every
//! labelling the refinement permits is tried, two quivers get the same form
//! exactly when they are isomorphic.

use std::fmt;

use crate::quiver::ColouredQuiver;

/// Encoding of a quiver under its minimal labelling: `n` and `m`, then for
/// every pair `i < j` in the canonical order the multiplicity and colour of
/// the arrows `i -> j`, each as a big-endian `u32`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    fn words(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.chunks_exact(4).map(|w| u32::from_be_bytes([w[0], w[1], w[2], w[3]]))
    }

    /// The quiver in canonical labelling.
    pub fn to_quiver(&self) -> ColouredQuiver {
        let mut words = self.words();
        let n = words.next().expect("encoded n") as usize;
        let m = words.next().expect("encoded m");
        let mut q = ColouredQuiver::new(m, n).expect("encoded quiver has m, n > 0");
        for i in 0..n {
            for j in i + 1..n {
                let mult = words.next().expect("encoded pair");
                let colour = words.next().expect("encoded pair");
                if mult > 0 {
                    q.add_pair(i, j, colour, mult).expect("encoded arrows are in range");
                }
            }
        }
        q
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({:?})", self.to_quiver())
    }
}

pub fn canonical_form(q: &ColouredQuiver) -> CanonicalForm {
    canonical_labelling(q).0
}

/// The canonical form together with a labelling attaining it: vertex `v` of
/// `q` becomes `perm[v]`.
pub fn canonical_labelling(q: &ColouredQuiver) -> (CanonicalForm, Vec<usize>) {
    let table = PairTable::new(q);
    let cells = refine(&table, vec![(0..q.n()).collect()]);
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    search(&table, cells, &mut best);
    let (bytes, perm) = best.expect("search reaches at least one leaf");
    (CanonicalForm(bytes), perm)
}

/// Per ordered pair, the (multiplicity, colour) of its arrows; (0, 0) if none.
struct PairTable {
    n: usize,
    m: u32,
    entry: Vec<(u32, u32)>,
}

impl PairTable {
    fn new(q: &ColouredQuiver) -> Self {
        let n = q.n();
        let mut entry = vec![(0, 0); n * n];
        for (i, j, c, mult) in q.arrows() {
            // a valid quiver is monochromatic; keep the lowest colour otherwise
            let e = &mut entry[i * n + j];
            if e.0 == 0 {
                *e = (mult, c);
            }
        }
        Self { n, m: q.m(), entry }
    }

    fn get(&self, i: usize, j: usize) -> (u32, u32) {
        self.entry[i * self.n + j]
    }
}

type Cells = Vec<Vec<usize>>;
type Signature = Vec<(usize, u32, u32)>;

/// Splits cells until every vertex in a cell sees the same multiset of
/// (cell, arrow) pairs. New cells are ordered by signature.
fn refine(t: &PairTable, mut cells: Cells) -> Cells {
    let n = t.n;
    loop {
        let mut cell_of = vec![0usize; n];
        for (k, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = k;
            }
        }
        let signature = |v: usize| {
            let mut sig: Signature = (0..n)
                .filter(|&u| u != v && t.get(v, u).0 > 0)
                .map(|u| {
                    let (mult, colour) = t.get(v, u);
                    (cell_of[u], mult, colour)
                })
                .collect();
            sig.sort_unstable();
            sig
        };
        let mut next: Cells = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Signature, usize)> = cell.iter().map(|&v| (signature(v), v)).collect();
            keyed.sort();
            let mut start = 0;
            for k in 1..=keyed.len() {
                if k == keyed.len() || keyed[k].0 != keyed[start].0 {
                    next.push(keyed[start..k].iter().map(|(_, v)| *v).collect());
                    start = k;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn search(t: &PairTable, cells: Cells, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let mut perm = vec![0usize; t.n];
        for (pos, cell) in cells.iter().enumerate() {
            perm[cell[0]] = pos;
        }
        let bytes = encode(t, &perm);
        if best.as_ref().is_none_or(|(b, _)| bytes < *b) {
            *best = Some((bytes, perm));
        }
        return;
    };
    for &v in &cells[target] {
        let mut split = cells.clone();
        let rest: Vec<usize> = cells[target].iter().copied().filter(|&u| u != v).collect();
        split.splice(target..=target, [vec![v], rest]);
        search(t, refine(t, split), best);
    }
}

fn encode(t: &PairTable, perm: &[usize]) -> Vec<u8> {
    let n = t.n;
    let mut inverse = vec![0usize; n];
    for (v, &p) in perm.iter().enumerate() {
        inverse[p] = v;
    }
    let mut out = Vec::with_capacity(8 + 8 * n * n.saturating_sub(1) / 2);
    out.extend_from_slice(&(n as u32).to_be_bytes());
    out.extend_from_slice(&t.m.to_be_bytes());
    for a in 0..n {
        for b in a + 1..n {
            let (mult, colour) = t.get(inverse[a], inverse[b]);
            out.extend_from_slice(&mult.to_be_bytes());
            out.extend_from_slice(&colour.to_be_bytes());
        }
    }
    out
}
