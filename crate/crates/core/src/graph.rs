//! Digraph utilities: strongly connected components, absorbing sets,
//! bipartite perfect matching with a lexicographic tie-break, and cycle
//! reconstruction. All functions are pure and deterministic.

use fixedbitset::FixedBitSet;

/// A directed graph over vertices `0..n` stored as sorted adjacency lists.
/// Loops are allowed, parallel arcs are collapsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { adj: vec![Vec::new(); n] }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Digraph::new(n);
        for (u, v) in arcs {
            assert!(u < n && v < n, "arc endpoint out of range");
            g.adj[u].push(v);
        }
        for out in &mut g.adj {
            out.sort_unstable();
            out.dedup();
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn out(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, out)| out.iter().map(move |&v| (u, v)))
    }

    pub fn arc_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// Partition of the vertices into strongly connected components.
///
/// Component indices form a topological order of the condensation:
/// component `i` has no arc to any component `j < i`.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub condensation: Digraph,
}

struct TarjanState<'a> {
    g: &'a Digraph,
    counter: usize,
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    comps: Vec<Vec<usize>>,
}

fn strongconnect(v: usize, st: &mut TarjanState) {
    st.index[v] = Some(st.counter);
    st.low[v] = st.counter;
    st.counter += 1;
    st.stack.push(v);
    st.on_stack[v] = true;

    for &w in st.g.out(v) {
        if st.index[w].is_none() {
            strongconnect(w, st);
            st.low[v] = st.low[v].min(st.low[w]);
        } else if st.on_stack[w] {
            st.low[v] = st.low[v].min(st.index[w].unwrap());
        }
    }

    if st.low[v] == st.index[v].unwrap() {
        let mut comp = Vec::new();
        loop {
            let w = st.stack.pop().expect("tarjan stack underflow");
            st.on_stack[w] = false;
            comp.push(w);
            if w == v {
                break;
            }
        }
        comp.sort_unstable();
        st.comps.push(comp);
    }
}

/// Tarjan's algorithm. Components are re-indexed so that condensation arcs
/// only point from lower to higher component indices.
pub fn scc(g: &Digraph) -> SccDecomposition {
    let n = g.vertex_count();
    let mut st = TarjanState {
        g,
        counter: 0,
        index: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            strongconnect(v, &mut st);
        }
    }
    // Tarjan pops sink components first; reverse so arcs go low -> high.
    st.comps.reverse();
    let components = st.comps;
    let mut component_of = vec![usize::MAX; n];
    for (ci, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = ci;
        }
    }
    let mut cond_arcs = Vec::new();
    for (u, v) in g.arcs() {
        let (cu, cv) = (component_of[u], component_of[v]);
        if cu != cv {
            cond_arcs.push((cu, cv));
        }
    }
    let condensation = Digraph::from_arcs(components.len(), cond_arcs);
    debug_assert!(condensation.arcs().all(|(u, v)| u < v));
    SccDecomposition { component_of, components, condensation }
}

/// Strongly connected components that are not left by any arc.
pub fn absorbing_sets(g: &Digraph) -> Vec<Vec<usize>> {
    let dec = scc(g);
    dec.components
        .iter()
        .enumerate()
        .filter(|(ci, _)| dec.condensation.out(*ci).is_empty())
        .map(|(_, comp)| comp.clone())
        .collect()
}

/// One-per-agent assignment on an agent subset: a set of arcs giving every
/// listed agent exactly one outgoing and one incoming arc, using only
/// `allowed` arcs. Reduces to bipartite perfect matching between the agents
/// and copies of themselves.
///
/// When several perfect matchings exist, the lexicographically least one
/// under (tail, head) ordering is returned; `None` if none exists.
pub fn perfect_matching_allocation(
    agents: &[usize],
    allowed: &[(usize, usize)],
) -> Option<Vec<(usize, usize)>> {
    let mut sorted = agents.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let k = sorted.len();
    debug_assert_eq!(sorted.len(), agents.len(), "agent list must not contain duplicates");
    if k == 0 {
        return Some(Vec::new());
    }

    let local = |v: usize| sorted.binary_search(&v).ok();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(u, v) in allowed {
        let (lu, lv) = (local(u), local(v));
        debug_assert!(lu.is_some() && lv.is_some(), "allowed arc outside agent set");
        if let (Some(lu), Some(lv)) = (lu, lv) {
            adj[lu].push(lv);
        }
    }
    for out in &mut adj {
        out.sort_unstable();
        out.dedup();
    }

    let mut matcher = Matcher::new(&adj);
    if !matcher.perfect() {
        return None;
    }
    matcher.lexicographic_refine();
    Some(
        (0..k)
            .map(|t| (sorted[t], sorted[matcher.head_of[t]]))
            .collect(),
    )
}

struct Matcher<'a> {
    adj: &'a [Vec<usize>],
    head_of: Vec<usize>, // tail -> head, usize::MAX if unmatched
    tail_of: Vec<usize>, // head -> tail, usize::MAX if unmatched
}

impl<'a> Matcher<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let k = adj.len();
        Matcher { adj, head_of: vec![usize::MAX; k], tail_of: vec![usize::MAX; k] }
    }

    /// Augmenting search from `t`; only tails with index above `frozen` may
    /// be re-routed.
    fn augment(&mut self, t: usize, frozen: usize, visited: &mut FixedBitSet) -> bool {
        for i in 0..self.adj[t].len() {
            let h = self.adj[t][i];
            if visited.contains(h) {
                continue;
            }
            visited.insert(h);
            let owner = self.tail_of[h];
            if owner == usize::MAX
                || ((frozen == usize::MAX || owner > frozen) && self.augment(owner, frozen, visited))
            {
                self.head_of[t] = h;
                self.tail_of[h] = t;
                return true;
            }
        }
        false
    }

    fn perfect(&mut self) -> bool {
        let k = self.adj.len();
        let mut visited = FixedBitSet::with_capacity(k);
        for t in 0..k {
            visited.clear();
            if !self.augment(t, usize::MAX, &mut visited) {
                return false;
            }
        }
        true
    }

    /// Rewrite a perfect matching into the lexicographically least one by
    /// fixing tails in order, moving each to its smallest feasible head.
    fn lexicographic_refine(&mut self) {
        let k = self.adj.len();
        let mut visited = FixedBitSet::with_capacity(k);
        for t in 0..k {
            let current = self.head_of[t];
            for i in 0..self.adj[t].len() {
                let h = self.adj[t][i];
                if h >= current {
                    break;
                }
                let displaced = self.tail_of[h];
                debug_assert_ne!(displaced, usize::MAX);
                if displaced <= t {
                    continue; // earlier tails are frozen
                }
                // Tentatively give h to t and try to re-route the displaced tail.
                self.tail_of[current] = usize::MAX;
                self.head_of[t] = h;
                self.tail_of[h] = t;
                self.head_of[displaced] = usize::MAX;
                visited.clear();
                visited.insert(h);
                if self.augment(displaced, t, &mut visited) {
                    break;
                }
                // Revert.
                self.head_of[displaced] = h;
                self.tail_of[h] = displaced;
                self.head_of[t] = current;
                self.tail_of[current] = t;
            }
        }
    }
}

/// Every allocation of the agent set within `allowed`, in lexicographic
/// order of the assignment vector. Intended for desk-scale enumeration.
pub fn all_perfect_matchings(
    agents: &[usize],
    allowed: &[(usize, usize)],
) -> Vec<Vec<(usize, usize)>> {
    let mut sorted = agents.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let k = sorted.len();
    let local = |v: usize| sorted.binary_search(&v).ok();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(u, v) in allowed {
        if let (Some(lu), Some(lv)) = (local(u), local(v)) {
            adj[lu].push(lv);
        }
    }
    for out in &mut adj {
        out.sort_unstable();
        out.dedup();
    }

    fn rec(
        t: usize,
        adj: &[Vec<usize>],
        used: &mut [bool],
        pick: &mut [usize],
        found: &mut Vec<Vec<usize>>,
    ) {
        if t == adj.len() {
            found.push(pick.to_vec());
            return;
        }
        for &h in &adj[t] {
            if !used[h] {
                used[h] = true;
                pick[t] = h;
                rec(t + 1, adj, used, pick, found);
                used[h] = false;
            }
        }
    }

    let mut used = vec![false; k];
    let mut pick = vec![0usize; k];
    let mut raw = Vec::new();
    rec(0, &adj, &mut used, &mut pick, &mut raw);
    raw.into_iter()
        .map(|assignment| {
            assignment
                .iter()
                .enumerate()
                .map(|(t, &h)| (sorted[t], sorted[h]))
                .collect()
        })
        .collect()
}

/// A simple cycle through the given arc, or `None` when the head cannot
/// reach the tail. The cycle is returned in traversal order starting with
/// the arc itself; a loop yields just itself.
pub fn cycle_through(g: &Digraph, arc: (usize, usize)) -> Option<Vec<(usize, usize)>> {
    cycle_through_in(g, arc, |_| true)
}

/// Like [`cycle_through`] but the return path may only visit vertices
/// satisfying `allowed`. Both endpoints of `arc` must satisfy it.
pub fn cycle_through_in(
    g: &Digraph,
    arc: (usize, usize),
    allowed: impl Fn(usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let (u, v) = arc;
    debug_assert!(g.has_arc(u, v), "cycle_through: arc not present");
    if u == v {
        return Some(vec![(u, u)]);
    }
    // BFS from v back to u over sorted adjacency: shortest, deterministic.
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut seen = FixedBitSet::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    seen.insert(v);
    queue.push_back(v);
    'bfs: while let Some(x) = queue.pop_front() {
        for &y in g.out(x) {
            if !seen.contains(y) && allowed(y) {
                seen.insert(y);
                parent[y] = x;
                if y == u {
                    break 'bfs;
                }
                queue.push_back(y);
            }
        }
    }
    if !seen.contains(u) {
        return None;
    }
    let mut rev = Vec::new();
    let mut x = u;
    while x != v {
        let p = parent[x];
        rev.push((p, x));
        x = p;
    }
    let mut cycle = vec![(u, v)];
    cycle.extend(rev.into_iter().rev());
    Some(cycle)
}
