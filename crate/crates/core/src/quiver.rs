//! The coloured quiver data model.
//!
//! A quiver on `n` vertices with colour alphabet `{0, ..., m}` is stored as the
//! full multiplicity table `q[i][j][c]`, both arrow directions explicit. The
//! three structural conditions (no loops, monochromatic, skew-symmetric) are
//! checked by [`ColouredQuiver::validate`] rather than enforced by the storage,
//! so that raw and possibly broken data can be represented and diagnosed.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{QuiverError, Result};

/// Colour of an arrow, an integer in `[0, m]`.
pub type Colour = u32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColouredQuiver {
    m: u32,
    n: usize,
    mult: Vec<u32>,
}

impl ColouredQuiver {
    /// The quiver with `n` vertices and no arrows.
    pub fn new(m: u32, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(QuiverError::Precondition("colour parameter m must be positive".into()));
        }
        if n == 0 {
            return Err(QuiverError::Precondition("a quiver needs at least one vertex".into()));
        }
        Ok(Self { m, n, mult: vec![0; n * n * (m as usize + 1)] })
    }

    /// Builds a simple quiver from `(i, j, c)` triples meaning one arrow `i -> j`
    /// of colour `c` plus its partner `j -> i` of colour `m - c`.
    pub fn from_pairs(m: u32, n: usize, pairs: &[(usize, usize, Colour)]) -> Result<Self> {
        let mut q = Self::new(m, n)?;
        for &(i, j, c) in pairs {
            q.add_pair(i, j, c, 1)?;
        }
        q.ensure_valid()?;
        Ok(q)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, c: Colour) -> usize {
        (i * self.n + j) * (self.m as usize + 1) + c as usize
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(QuiverError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    fn check_colour(&self, c: Colour) -> Result<()> {
        if c > self.m {
            return Err(QuiverError::ColourOutOfRange { colour: c, m: self.m });
        }
        Ok(())
    }

    /// Adds `mult` arrows `i -> j` of colour `c` without touching the reverse
    /// direction. Loops are accepted here and reported by `validate`.
    pub fn add_arrows(&mut self, i: usize, j: usize, c: Colour, mult: u32) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        self.check_colour(c)?;
        let k = self.idx(i, j, c);
        self.mult[k] += mult;
        Ok(())
    }

    /// Adds `mult` arrows `i -> j` of colour `c` and `mult` partners `j -> i`
    /// of colour `m - c`.
    pub fn add_pair(&mut self, i: usize, j: usize, c: Colour, mult: u32) -> Result<()> {
        if i == j {
            return Err(QuiverError::Precondition(format!("loop at vertex {}", i + 1)));
        }
        self.add_arrows(i, j, c, mult)?;
        self.add_arrows(j, i, self.m - c, mult)
    }

    pub(crate) fn set_mult(&mut self, i: usize, j: usize, c: Colour, value: u32) {
        let k = self.idx(i, j, c);
        self.mult[k] = value;
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of arrows `i -> j` of colour `c`.
    #[inline]
    pub fn mult(&self, i: usize, j: usize, c: Colour) -> u32 {
        self.mult[self.idx(i, j, c)]
    }

    /// The colour and multiplicity of the arrows `i -> j`, if any. For a
    /// non-monochromatic pair the smallest colour present is returned.
    pub fn arrow(&self, i: usize, j: usize) -> Option<(Colour, u32)> {
        (0..=self.m).find_map(|c| {
            let q = self.mult(i, j, c);
            (q > 0).then_some((c, q))
        })
    }

    /// Colour of the arrows `i -> j`, if any.
    pub fn colour(&self, i: usize, j: usize) -> Option<Colour> {
        self.arrow(i, j).map(|(c, _)| c)
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.arrow(i, j).is_some()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.is_adjacent(v, u)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.is_adjacent(v, u)).count()
    }

    /// All arrows as `(source, target, colour, multiplicity)`, both directions.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, Colour, u32)> + '_ {
        let n = self.n;
        let m = self.m;
        (0..n).flat_map(move |i| {
            (0..n).flat_map(move |j| {
                (0..=m).filter_map(move |c| {
                    let q = self.mult(i, j, c);
                    (q > 0).then_some((i, j, c, q))
                })
            })
        })
    }

    /// Arrows with `source < target`; with skew-symmetry these determine the quiver.
    pub fn upper_arrows(&self) -> impl Iterator<Item = (usize, usize, Colour, u32)> + '_ {
        self.arrows().filter(|&(i, j, _, _)| i < j)
    }

    pub fn edge_count(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.is_adjacent(i, j) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Lists every violation of the three structural conditions.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for i in 0..self.n {
            for c in 0..=self.m {
                let q = self.mult(i, i, c);
                if q > 0 {
                    violations.push(Violation::Loop { vertex: i, colour: c, mult: q });
                }
            }
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let colours: Vec<Colour> = (0..=self.m).filter(|&c| self.mult(i, j, c) > 0).collect();
                if colours.len() > 1 {
                    violations.push(Violation::Bichromatic { from: i, to: j, colours });
                }
                for c in 0..=self.m {
                    let here = self.mult(i, j, c);
                    let there = self.mult(j, i, self.m - c);
                    if here > 0 && here != there {
                        violations.push(Violation::SkewSymmetry {
                            from: i,
                            to: j,
                            colour: c,
                            mult: here,
                            partner_mult: there,
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_empty() {
            Ok(())
        } else {
            Err(QuiverError::Invalid(report))
        }
    }

    /// At most one arrow between any ordered pair of vertices.
    pub fn is_simple(&self) -> bool {
        self.mult.iter().all(|&q| q <= 1)
            && (0..self.n).all(|i| (0..self.n).all(|j| (0..=self.m).filter(|&c| self.mult(i, j, c) > 0).count() <= 1))
    }

    pub fn ensure_simple(&self) -> Result<()> {
        if self.is_simple() {
            Ok(())
        } else {
            Err(QuiverError::NotSimple)
        }
    }

    pub fn underlying_graph(&self) -> UnderlyingGraph {
        UnderlyingGraph::from_quiver(self)
    }

    pub fn is_connected(&self) -> bool {
        self.underlying_graph().is_connected()
    }

    /// Whether the underlying graph is a path on all `n` vertices.
    pub fn is_line(&self) -> bool {
        self.underlying_graph().is_path()
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> ColouredQuiver {
        assert_eq!(perm.len(), self.n);
        let mut out = ColouredQuiver { m: self.m, n: self.n, mult: vec![0; self.mult.len()] };
        for (i, j, c, q) in self.arrows() {
            out.set_mult(perm[i], perm[j], c, q);
        }
        out
    }

    /// Reverses every arrow; colour `c` from `i` to `j` becomes colour `c` from `j` to `i`.
    pub fn opposite(&self) -> ColouredQuiver {
        let mut out = ColouredQuiver { m: self.m, n: self.n, mult: vec![0; self.mult.len()] };
        for (i, j, c, q) in self.arrows() {
            out.set_mult(j, i, c, q);
        }
        out
    }

    pub fn simple_view(&self) -> Result<SimpleView> {
        SimpleView::from_quiver(self)
    }
}

impl fmt::Debug for ColouredQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColouredQuiver(m={}, n={}; ", self.m, self.n)?;
        let mut first = true;
        for (i, j, c, q) in self.upper_arrows() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}->{}({})", i + 1, j + 1, c)?;
            if q > 1 {
                write!(f, "x{q}")?;
            }
        }
        write!(f, ")")
    }
}

/// The path quiver `1 -> 2 -> ... -> n`, arrow `i -> i+1` of colour
/// `colours[i]` (all 0 when `colours` is `None`).
pub fn linear_quiver(n: usize, m: u32, colours: Option<&[Colour]>) -> Result<ColouredQuiver> {
    let mut q = ColouredQuiver::new(m, n)?;
    if let Some(cs) = colours {
        if cs.len() + 1 != n {
            return Err(QuiverError::Precondition(format!(
                "a line on {n} vertices needs {} colours, got {}",
                n - 1,
                cs.len()
            )));
        }
    }
    for i in 0..n.saturating_sub(1) {
        let c = colours.map_or(0, |cs| cs[i]);
        q.add_pair(i, i + 1, c, 1)?;
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Loop {
        vertex: usize,
        colour: Colour,
        mult: u32,
    },
    Bichromatic {
        from: usize,
        to: usize,
        colours: Vec<Colour>,
    },
    /// `q[from][to][colour] = mult` but `q[to][from][m - colour] = partner_mult`.
    SkewSymmetry {
        from: usize,
        to: usize,
        colour: Colour,
        mult: u32,
        partner_mult: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Loop { vertex, colour, mult } => {
                write!(f, "loop at {} (colour {colour}, x{mult})", vertex + 1)
            }
            Violation::Bichromatic { from, to, colours } => {
                write!(f, "arrows {}->{} carry colours {colours:?}", from + 1, to + 1)
            }
            Violation::SkewSymmetry { from, to, colour, mult, partner_mult } => {
                write!(f, "{} arrow(s) {}->{} of colour {colour} but {partner_mult} partner(s)", mult, from + 1, to + 1)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A simple quiver as one colour per edge: `edges[(i, j)]` with `i < j` is the
/// colour of `i -> j`; the partner `j -> i` has colour `m - c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleView {
    pub m: u32,
    pub n: usize,
    pub edges: BTreeMap<(usize, usize), Colour>,
}

impl SimpleView {
    pub fn from_quiver(q: &ColouredQuiver) -> Result<Self> {
        q.ensure_simple()?;
        let edges = q.upper_arrows().map(|(i, j, c, _)| ((i, j), c)).collect();
        Ok(Self { m: q.m(), n: q.n(), edges })
    }

    pub fn to_quiver(&self) -> Result<ColouredQuiver> {
        let pairs: Vec<_> = self.edges.iter().map(|(&(i, j), &c)| (i, j, c)).collect();
        ColouredQuiver::from_pairs(self.m, self.n, &pairs)
    }
}

/// One undirected edge per pair of adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnderlyingGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    matrix: Vec<bool>,
}

impl UnderlyingGraph {
    pub fn from_quiver(q: &ColouredQuiver) -> Self {
        let n = q.n();
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if q.is_adjacent(i, j) || q.is_adjacent(j, i) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![Vec::new(); n], matrix: vec![false; n * n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i == j || self.matrix[i * self.n + j] {
            return;
        }
        self.matrix[i * self.n + j] = true;
        self.matrix[j * self.n + i] = true;
        let pos = self.adj[i].binary_search(&j).unwrap_err();
        self.adj[i].insert(pos, j);
        let pos = self.adj[j].binary_search(&i).unwrap_err();
        self.adj[j].insert(pos, i);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.n + j]
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        (0..self.n).flat_map(|i| self.adj[i].iter().filter(move |&&j| i < j).map(move |&j| (i, j))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0, |_| true).len() == self.n
    }

    /// Vertices reachable from `start` through vertices accepted by `allowed`.
    pub fn component_of(&self, start: usize, allowed: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(v) = queue.pop_front() {
            out.push(v);
            for &u in &self.adj[v] {
                if !seen[u] && allowed(u) {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether the graph is a path through all vertices (a single vertex counts).
    pub fn is_path(&self) -> bool {
        if self.n == 1 {
            return true;
        }
        self.is_connected() && self.edge_count() == self.n - 1 && self.adj.iter().all(|a| a.len() <= 2)
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(a, &u)| vertices[a + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}
