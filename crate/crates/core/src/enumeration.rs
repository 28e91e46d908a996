//! Mutation classes by breadth-first search up to isomorphism, brute-force
//! generation of the class members, and the comparison of the two.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::canonical::{canonical_form, CanonicalForm};
use crate::classifier::{self, MembershipVerdict};
use crate::error::{QuiverError, Result};
use crate::exec::ExecMode;
use crate::mutation::mutate_unchecked;
use crate::quiver::{linear_quiver, ColouredQuiver, UnderlyingGraph};

pub const DEFAULT_CLASS_LIMIT: usize = 100_000;
pub const DEFAULT_GENERATION_BUDGET: u128 = 50_000_000;

/// `mu_vertex` takes the class member `from` to the member `to` (indices into
/// [`MutationClass::forms`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitEdge {
    pub from: usize,
    pub vertex: usize,
    pub to: usize,
}

#[derive(Debug, Clone)]
pub struct ClassOptions {
    pub limit: usize,
    /// Run the membership test on every quiver the search discovers.
    pub check_membership: bool,
    pub mode: ExecMode,
}

impl Default for ClassOptions {
    fn default() -> Self {
        Self { limit: DEFAULT_CLASS_LIMIT, check_membership: false, mode: ExecMode::default() }
    }
}

#[derive(Debug, Clone)]
pub struct MutationClass {
    pub seed: ColouredQuiver,
    /// Forms in discovery order; `forms[0]` is the seed's.
    pub forms: Vec<CanonicalForm>,
    /// The quiver through which each form was first reached.
    pub representatives: Vec<ColouredQuiver>,
    pub edges: Vec<OrbitEdge>,
    /// Produced quivers that failed the membership test, when it was run,
    /// keyed by the class they fell into.
    pub closure_failures: Vec<(usize, MembershipVerdict)>,
    /// The seed and every mutation result the search produced.
    pub membership_checked: usize,
    index: HashMap<CanonicalForm, usize>,
}

impl MutationClass {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn index_of(&self, form: &CanonicalForm) -> Option<usize> {
        self.index.get(form).copied()
    }

    pub fn contains(&self, q: &ColouredQuiver) -> bool {
        self.index.contains_key(&canonical_form(q))
    }

    pub fn form_set(&self) -> BTreeSet<CanonicalForm> {
        self.forms.iter().cloned().collect()
    }

    /// Target of the orbit edge leaving `from` along `vertex`.
    pub fn step(&self, from: usize, vertex: usize) -> Option<usize> {
        let n = self.seed.n();
        self.edges.get(from * n + vertex).filter(|e| e.from == from && e.vertex == vertex).map(|e| e.to)
    }
}

/// The mutation class of `seed` up to isomorphism.
pub fn mutation_class(seed: &ColouredQuiver, limit: usize) -> Result<MutationClass> {
    mutation_class_with(seed, &ClassOptions { limit, ..ClassOptions::default() })
}

pub fn mutation_class_with(seed: &ColouredQuiver, opts: &ClassOptions) -> Result<MutationClass> {
    seed.ensure_valid()?;
    let n = seed.n();
    let seed_form = canonical_form(seed);
    let mut class = MutationClass {
        seed: seed.clone(),
        forms: vec![seed_form.clone()],
        representatives: vec![seed.clone()],
        edges: Vec::new(),
        closure_failures: Vec::new(),
        membership_checked: 0,
        index: HashMap::from([(seed_form, 0)]),
    };
    if opts.check_membership {
        let verdict = classifier::is_member(seed)?;
        record_membership(&mut class, 0, verdict);
    }
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let jobs: Vec<(usize, usize)> = frontier.iter().flat_map(|&s| (0..n).map(move |j| (s, j))).collect();
        let reps = &class.representatives;
        let check = opts.check_membership;
        let results = opts.mode.map(&jobs, |&(s, j)| {
            let next = mutate_unchecked(&reps[s], j)?;
            let form = canonical_form(&next);
            let verdict = if check { Some(classifier::is_member(&next)?) } else { None };
            Ok((next, form, verdict))
        });
        // commit in job order so indices do not depend on scheduling
        let mut discovered = Vec::new();
        for ((s, j), result) in jobs.into_iter().zip(results) {
            let (next, form, verdict) = result?;
            let to = match class.index.get(&form) {
                Some(&k) => k,
                None => {
                    let k = class.forms.len();
                    if k >= opts.limit {
                        return Err(QuiverError::LimitExceeded { limit: opts.limit, explored: k });
                    }
                    class.index.insert(form.clone(), k);
                    class.forms.push(form);
                    class.representatives.push(next);
                    discovered.push(k);
                    k
                }
            };
            if let Some(verdict) = verdict {
                record_membership(&mut class, to, verdict);
            }
            class.edges.push(OrbitEdge { from: s, vertex: j, to });
        }
        frontier = discovered;
    }
    class.edges.sort_unstable();
    Ok(class)
}

fn record_membership(class: &mut MutationClass, k: usize, verdict: MembershipVerdict) {
    class.membership_checked += 1;
    if !verdict.member {
        class.closure_failures.push((k, verdict));
    }
}

/// Number of distinct labelled quivers reachable from `seed`.
pub fn labelled_class_size(seed: &ColouredQuiver, limit: usize) -> Result<usize> {
    seed.ensure_valid()?;
    let n = seed.n();
    let mut seen: HashSet<ColouredQuiver> = HashSet::from([seed.clone()]);
    let mut frontier = vec![seed.clone()];
    while let Some(q) = frontier.pop() {
        for j in 0..n {
            let next = mutate_unchecked(&q, j)?;
            if !seen.contains(&next) {
                if seen.len() >= limit {
                    return Err(QuiverError::LimitExceeded { limit, explored: seen.len() });
                }
                seen.insert(next.clone());
                frontier.push(next);
            }
        }
    }
    Ok(seen.len())
}

/// Number of candidate colourings the brute-force generation would examine:
/// `(m+1)^e` summed over the connected labelled graphs that pass the
/// graph-level membership conditions. Above 22 vertex pairs the graphs are
/// not listed and the bound `(m+2)^(n(n-1)/2)` over all graphs is returned.
pub fn generation_search_size(n: usize, m: u32) -> u128 {
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs > 22 {
        return u128::from(m + 2).checked_pow(pairs as u32).unwrap_or(u128::MAX);
    }
    admissible_graphs(n, m, ExecMode::default()).iter().map(|g| u128::from(m + 1).pow(g.edge_count() as u32)).sum()
}

fn admissible_graphs(n: usize, m: u32, mode: ExecMode) -> Vec<UnderlyingGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let masks = 1usize << pairs.len();
    mode.map_range(masks, |mask| {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
        let g = UnderlyingGraph::from_edges(n, &edges);
        classifier::graph_admissible(&g, m).then_some(g)
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Every member of the class on `n` vertices, by exhausting the colourings
/// of all connected labelled graphs and keeping those that pass the
/// membership test.
pub fn generate_members(n: usize, m: u32, budget: u128) -> Result<BTreeSet<CanonicalForm>> {
    generate_members_with(n, m, budget, ExecMode::default())
}

pub fn generate_members_with(n: usize, m: u32, budget: u128, mode: ExecMode) -> Result<BTreeSet<CanonicalForm>> {
    if n == 0 || m == 0 {
        return Err(QuiverError::Precondition("n and m must be positive".into()));
    }
    let pairs = n * (n - 1) / 2;
    if pairs > 22 {
        let size = generation_search_size(n, m);
        return Err(QuiverError::BudgetExceeded { size, budget });
    }
    let graphs = admissible_graphs(n, m, mode);
    let size: u128 = graphs.iter().map(|g| u128::from(m + 1).pow(g.edge_count() as u32)).sum();
    if size > budget {
        return Err(QuiverError::BudgetExceeded { size, budget });
    }
    let per_graph = mode.map(&graphs, |g| members_on_graph(g, m));
    let mut out = BTreeSet::new();
    for forms in per_graph {
        out.extend(forms?);
    }
    Ok(out)
}

fn members_on_graph(g: &UnderlyingGraph, m: u32) -> Result<Vec<CanonicalForm>> {
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().into_iter().collect();
    let base = u64::from(m) + 1;
    let total = base.pow(edges.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let mut pairs = Vec::with_capacity(edges.len());
        for &(i, j) in &edges {
            pairs.push((i, j, (rest % base) as u32));
            rest /= base;
        }
        let q = ColouredQuiver::from_pairs(m, n, &pairs)?;
        if classifier::is_member(&q)?.member {
            out.push(canonical_form(&q));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ClassMembersReport {
    pub n: usize,
    pub m: u32,
    pub class_size: usize,
    pub generated_size: usize,
    /// Reached from the line but rejected by the membership test.
    pub only_in_class: Vec<ColouredQuiver>,
    /// Members never reached from the line.
    pub only_generated: Vec<ColouredQuiver>,
}

impl ClassMembersReport {
    pub fn holds(&self) -> bool {
        self.only_in_class.is_empty() && self.only_generated.is_empty()
    }
}

/// Compares the mutation class of the line on `n` vertices with the
/// brute-force list of members.
pub fn verify_class_equals_members(n: usize, m: u32, limit: usize, budget: u128) -> Result<ClassMembersReport> {
    let seed = linear_quiver(n, m, None)?;
    let class = mutation_class(&seed, limit)?;
    let generated = generate_members(n, m, budget)?;
    let reached = class.form_set();
    Ok(ClassMembersReport {
        n,
        m,
        class_size: reached.len(),
        generated_size: generated.len(),
        only_in_class: reached.difference(&generated).map(CanonicalForm::to_quiver).collect(),
        only_generated: generated.difference(&reached).map(CanonicalForm::to_quiver).collect(),
    })
}
