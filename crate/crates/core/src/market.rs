//! Housing-market model: agents, strict partial-order preferences,
//! allocations, and instances with forbidden/forced trades.
//!
//! Preferences are stored transitively closed, one relation per agent.
//! Acceptability and the underlying digraph are always derived, never
//! stored, so they cannot drift out of sync with the relations.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::graph::{self, Digraph};

/// Dense agent index, `0..n`. Display names live on the market.
pub type AgentId = usize;

/// A directed trade `(tail, head)`: tail receives the house of head.
pub type Arc = (AgentId, AgentId);

#[derive(Debug, thiserror::Error)]
pub enum MarketError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("strict relation of agent `{agent}` is not a partial order (cycle or symmetric pair)")]
    CycleInStrictRelation { agent: String },
    #[error("conflicting restriction: {0}")]
    ConflictingRestriction(String),
    #[error("restricted arc ({tail}, {head}) is not an arc of the underlying graph")]
    NonEdgeRestriction { tail: String, head: String },
    #[error("cannot restrict a market to an empty agent set")]
    EmptySubset,
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
}

/// One agent's strict partial order over the houses (identified with their
/// owners), stored transitively closed over the whole agent set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceRelation {
    owner: AgentId,
    n: usize,
    /// rows[b] holds the set { c : b is strictly preferred to c }.
    rows: Vec<FixedBitSet>,
}

impl PreferenceRelation {
    /// Build from raw strict pairs `(better, worse)`, computing the
    /// transitive closure and rejecting anything that is not a strict
    /// partial order.
    pub fn from_pairs(
        owner: AgentId,
        n: usize,
        pairs: impl IntoIterator<Item = (AgentId, AgentId)>,
        owner_name: &str,
    ) -> Result<Self, MarketError> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (b, c) in pairs {
            assert!(b < n && c < n, "preference pair out of range");
            if b == c {
                return Err(MarketError::CycleInStrictRelation { agent: owner_name.to_string() });
            }
            edges.push((b, c));
        }
        edges.sort_unstable();
        edges.dedup();

        // Any cycle in the pair digraph collapses to a non-singleton SCC.
        let g = Digraph::from_arcs(n, edges.iter().copied());
        let dec = graph::scc(&g);
        if dec.components.iter().any(|c| c.len() > 1) {
            return Err(MarketError::CycleInStrictRelation { agent: owner_name.to_string() });
        }

        // Close over the DAG, sinks first: component indices are a
        // topological order, so walk them backwards.
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by_key(|&v| dec.component_of[v]);
        for &b in order.iter().rev() {
            for &c in g.out(b) {
                let crow = rows[c].clone();
                rows[b].union_with(&crow);
                rows[b].insert(c);
            }
        }
        let rel = PreferenceRelation { owner, n, rows };
        debug_assert!(rel.validate().is_ok());
        Ok(rel)
    }

    /// Build from rows that are already transitively closed (generators
    /// construct relations closed). Validated in debug builds.
    pub(crate) fn from_closed_rows(owner: AgentId, n: usize, rows: Vec<FixedBitSet>) -> Self {
        let rel = PreferenceRelation { owner, n, rows };
        debug_assert!(rel.validate().is_ok(), "relation not a closed partial order");
        rel
    }

    fn validate(&self) -> Result<(), ()> {
        for b in 0..self.n {
            if self.rows[b].contains(b) {
                return Err(());
            }
            for c in self.rows[b].ones() {
                if self.rows[c].contains(b) {
                    return Err(());
                }
                // transitivity: everything below c is below b
                if !self.rows[c].is_subset(&self.rows[b]) {
                    return Err(());
                }
            }
        }
        Ok(())
    }

    pub fn owner(&self) -> AgentId {
        self.owner
    }

    /// b is strictly preferred to c.
    #[inline]
    pub fn prefers(&self, b: AgentId, c: AgentId) -> bool {
        self.rows[b].contains(c)
    }

    /// b is weakly preferred to c (c is not strictly preferred to b).
    #[inline]
    pub fn weakly_prefers(&self, b: AgentId, c: AgentId) -> bool {
        !self.prefers(c, b)
    }

    /// b and c are incomparable (or equal, since the relation is irreflexive).
    #[inline]
    pub fn incomparable(&self, b: AgentId, c: AgentId) -> bool {
        !self.prefers(b, c) && !self.prefers(c, b)
    }

    /// All strict pairs `(better, worse)`, sorted.
    pub fn strict_pairs(&self) -> Vec<(AgentId, AgentId)> {
        let mut out = Vec::new();
        for b in 0..self.n {
            for c in self.rows[b].ones() {
                out.push((b, c));
            }
        }
        out
    }

    /// True when every pair of distinct houses is comparable.
    pub fn is_total(&self) -> bool {
        let comparable: usize = self.rows.iter().map(|r| r.count_ones(..)).sum();
        comparable == self.n * (self.n - 1) / 2
    }

    /// True when incomparability is transitive, i.e. the relation is a weak
    /// order. Uses the down-set count: in a weak order, b is preferred to c
    /// exactly when b has strictly more houses below it.
    pub fn is_weak_order(&self) -> bool {
        let down: Vec<usize> = self.rows.iter().map(|r| r.count_ones(..)).collect();
        for b in 0..self.n {
            for c in 0..self.n {
                if b != c && self.prefers(b, c) != (down[b] > down[c]) {
                    return false;
                }
            }
        }
        true
    }

    fn restricted(&self, keep: &[AgentId], new_owner: AgentId) -> Self {
        let k = keep.len();
        let mut rows = vec![FixedBitSet::with_capacity(k); k];
        for (bi, &b) in keep.iter().enumerate() {
            for (ci, &c) in keep.iter().enumerate() {
                if self.prefers(b, c) {
                    rows[bi].insert(ci);
                }
            }
        }
        PreferenceRelation { owner: new_owner, n: k, rows }
    }
}

/// A set of agents with one preference relation each.
#[derive(Debug, Clone)]
pub struct HousingMarket {
    names: Vec<String>,
    index: HashMap<String, AgentId>,
    prefs: Vec<PreferenceRelation>,
}

impl PartialEq for HousingMarket {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.prefs == other.prefs
    }
}
impl Eq for HousingMarket {}

impl HousingMarket {
    pub fn new(names: Vec<String>, prefs: Vec<PreferenceRelation>) -> Self {
        assert_eq!(names.len(), prefs.len());
        for (a, rel) in prefs.iter().enumerate() {
            assert_eq!(rel.owner, a, "preference relation owner mismatch");
            assert_eq!(rel.n, names.len());
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        HousingMarket { names, index, prefs }
    }

    pub fn builder<S: Into<String>>(names: impl IntoIterator<Item = S>) -> MarketBuilder {
        MarketBuilder::new(names)
    }

    pub fn agent_count(&self) -> usize {
        self.names.len()
    }

    pub fn agents(&self) -> std::ops::Range<AgentId> {
        0..self.names.len()
    }

    pub fn name(&self, a: AgentId) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<AgentId> {
        self.index.get(name).copied()
    }

    pub fn preference(&self, a: AgentId) -> &PreferenceRelation {
        &self.prefs[a]
    }

    /// b is strictly preferred to c by agent a.
    #[inline]
    pub fn prefers(&self, a: AgentId, b: AgentId, c: AgentId) -> bool {
        self.prefs[a].prefers(b, c)
    }

    #[inline]
    pub fn weakly_prefers(&self, a: AgentId, b: AgentId, c: AgentId) -> bool {
        self.prefs[a].weakly_prefers(b, c)
    }

    #[inline]
    pub fn incomparable(&self, a: AgentId, b: AgentId, c: AgentId) -> bool {
        self.prefs[a].incomparable(b, c)
    }

    /// b's house is acceptable to a: a does not strictly prefer its own.
    #[inline]
    pub fn acceptable(&self, a: AgentId, b: AgentId) -> bool {
        !self.prefs[a].prefers(a, b)
    }

    /// The acceptability set A(a), sorted; always contains a itself.
    pub fn acceptability(&self, a: AgentId) -> Vec<AgentId> {
        (0..self.agent_count()).filter(|&b| self.acceptable(a, b)).collect()
    }

    /// The underlying digraph: an arc (a, b) for every acceptable b,
    /// including the loop at every agent.
    pub fn underlying_graph(&self) -> Digraph {
        Digraph::from_arcs(self.agent_count(), self.arcs_within_all())
    }

    fn arcs_within_all(&self) -> Vec<Arc> {
        let mut arcs = Vec::new();
        for a in self.agents() {
            for b in self.agents() {
                if self.acceptable(a, b) {
                    arcs.push((a, b));
                }
            }
        }
        arcs
    }

    /// Arcs of the underlying graph of the submarket induced by `alive`.
    pub(crate) fn arcs_within(&self, alive: &[AgentId]) -> Vec<Arc> {
        let mut arcs = Vec::new();
        for &a in alive {
            for &b in alive {
                if self.acceptable(a, b) {
                    arcs.push((a, b));
                }
            }
        }
        arcs
    }

    /// Undominated arcs of the full market, sorted. An arc (a, b) is
    /// undominated when no acceptable b' is strictly preferred to b by a.
    pub fn undominated_arcs(&self) -> Vec<Arc> {
        let alive: Vec<AgentId> = self.agents().collect();
        self.undominated_within(&alive)
    }

    /// Undominated arcs of the submarket induced by `alive`. Domination is
    /// judged inside the submarket only.
    pub(crate) fn undominated_within(&self, alive: &[AgentId]) -> Vec<Arc> {
        let mut arcs = Vec::new();
        for &a in alive {
            let acc: Vec<AgentId> = alive.iter().copied().filter(|&b| self.acceptable(a, b)).collect();
            for &b in &acc {
                if !acc.iter().any(|&c| self.prefers(a, c, b)) {
                    arcs.push((a, b));
                }
            }
        }
        arcs
    }

    /// The submarket induced by `subset`: agents are re-indexed densely in
    /// ascending order of their old ids, names carried over.
    pub fn restrict(&self, subset: &[AgentId]) -> Result<HousingMarket, MarketError> {
        if subset.is_empty() {
            return Err(MarketError::EmptySubset);
        }
        let mut keep = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        assert!(*keep.last().unwrap() < self.agent_count(), "subset member out of range");
        let names: Vec<String> = keep.iter().map(|&a| self.names[a].clone()).collect();
        let prefs: Vec<PreferenceRelation> = keep
            .iter()
            .enumerate()
            .map(|(i, &a)| self.prefs[a].restricted(&keep, i))
            .collect();
        Ok(HousingMarket::new(names, prefs))
    }

    fn resolve(&self, name: &str) -> Result<AgentId, MarketError> {
        self.index_of(name).ok_or_else(|| MarketError::UnknownAgent(name.to_string()))
    }

    fn arc_names(&self, arc: Arc) -> (String, String) {
        (self.names[arc.0].clone(), self.names[arc.1].clone())
    }
}

/// Builder for programmatic market construction; mirrors the JSON format.
pub struct MarketBuilder {
    names: Vec<String>,
    // (owner, better, worse) by name
    pairs: Vec<(String, String, String)>,
}

impl MarketBuilder {
    fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        MarketBuilder { names: names.into_iter().map(Into::into).collect(), pairs: Vec::new() }
    }

    /// Record `better` strictly preferred to `worse` by `owner`. Passing the
    /// owner itself as `worse` puts `better` above the owner's own house.
    pub fn prefer(mut self, owner: &str, better: &str, worse: &str) -> Self {
        self.pairs.push((owner.to_string(), better.to_string(), worse.to_string()));
        self
    }

    /// Mark `other`'s house unacceptable to `owner` (the owner's own house
    /// is preferred to it).
    pub fn unacceptable(mut self, owner: &str, other: &str) -> Self {
        let own = owner.to_string();
        self.pairs.push((own.clone(), own, other.to_string()));
        self
    }

    pub fn build(self) -> Result<HousingMarket, MarketError> {
        let n = self.names.len();
        if n == 0 {
            return Err(MarketError::MalformedDocument("no agents".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in self.names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(MarketError::MalformedDocument(format!("duplicate agent `{name}`")));
            }
        }
        let mut per_agent: Vec<Vec<(AgentId, AgentId)>> = vec![Vec::new(); n];
        for (owner, better, worse) in &self.pairs {
            let o = *index.get(owner).ok_or_else(|| MarketError::UnknownAgent(owner.clone()))?;
            let b = *index.get(better).ok_or_else(|| MarketError::UnknownAgent(better.clone()))?;
            let w = *index.get(worse).ok_or_else(|| MarketError::UnknownAgent(worse.clone()))?;
            per_agent[o].push((b, w));
        }
        let prefs = per_agent
            .into_iter()
            .enumerate()
            .map(|(a, pairs)| PreferenceRelation::from_pairs(a, n, pairs, &self.names[a]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HousingMarket::new(self.names, prefs))
    }
}

/// A permutation of the agents realized as one trade arc per agent, each
/// arc lying in the underlying graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation {
    assignment: Vec<AgentId>,
}

impl Allocation {
    pub fn new(market: &HousingMarket, assignment: Vec<AgentId>) -> Result<Self, MarketError> {
        let n = market.agent_count();
        if assignment.len() != n {
            return Err(MarketError::InvalidAllocation(format!(
                "expected {n} assignments, got {}",
                assignment.len()
            )));
        }
        let mut seen = vec![false; n];
        for (a, &b) in assignment.iter().enumerate() {
            if b >= n {
                return Err(MarketError::InvalidAllocation(format!("target {b} out of range")));
            }
            if seen[b] {
                return Err(MarketError::InvalidAllocation(format!(
                    "agent `{}` receives two houses",
                    market.name(b)
                )));
            }
            seen[b] = true;
            if !market.acceptable(a, b) {
                return Err(MarketError::InvalidAllocation(format!(
                    "arc ({}, {}) is not in the underlying graph",
                    market.name(a),
                    market.name(b)
                )));
            }
        }
        Ok(Allocation { assignment })
    }

    /// Assemble from one arc per agent; arcs may come in any order.
    pub fn from_arcs(market: &HousingMarket, arcs: &[Arc]) -> Result<Self, MarketError> {
        let n = market.agent_count();
        let mut assignment = vec![usize::MAX; n];
        for &(a, b) in arcs {
            if a >= n {
                return Err(MarketError::InvalidAllocation(format!("tail {a} out of range")));
            }
            if assignment[a] != usize::MAX {
                return Err(MarketError::InvalidAllocation(format!(
                    "agent `{}` has two outgoing arcs",
                    market.name(a)
                )));
            }
            assignment[a] = b;
        }
        if let Some(a) = assignment.iter().position(|&b| b == usize::MAX) {
            return Err(MarketError::InvalidAllocation(format!(
                "agent `{}` has no outgoing arc",
                market.name(a)
            )));
        }
        Allocation::new(market, assignment)
    }

    #[inline]
    pub fn get(&self, a: AgentId) -> AgentId {
        self.assignment[a]
    }

    pub fn assignment(&self) -> &[AgentId] {
        &self.assignment
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.assignment.iter().enumerate().map(|(a, &b)| (a, b))
    }

    pub fn to_json(&self, market: &HousingMarket) -> serde_json::Value {
        let map: BTreeMap<&str, &str> = self
            .arcs()
            .map(|(a, b)| (market.name(a), market.name(b)))
            .collect();
        serde_json::json!({ "assignment": map })
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (a, &b) in self.assignment.iter().enumerate() {
            if a > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        write!(f, "}}")
    }
}

/// A market together with forbidden and forced trade arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    market: HousingMarket,
    forbidden: Vec<Arc>,
    forced: Vec<Arc>,
}

impl Instance {
    pub fn new(
        market: HousingMarket,
        mut forbidden: Vec<Arc>,
        mut forced: Vec<Arc>,
    ) -> Result<Self, MarketError> {
        forbidden.sort_unstable();
        forbidden.dedup();
        forced.sort_unstable();
        forced.dedup();
        for &(a, b) in forbidden.iter().chain(forced.iter()) {
            if a >= market.agent_count() || b >= market.agent_count() {
                return Err(MarketError::MalformedDocument(format!(
                    "restriction endpoint ({a}, {b}) out of range"
                )));
            }
            if !market.acceptable(a, b) {
                let (t, h) = market.arc_names((a, b));
                return Err(MarketError::NonEdgeRestriction { tail: t, head: h });
            }
        }
        for f in &forced {
            if forbidden.binary_search(f).is_ok() {
                let (t, h) = market.arc_names(*f);
                return Err(MarketError::ConflictingRestriction(format!(
                    "arc ({t}, {h}) is both forced and forbidden"
                )));
            }
        }
        for w in forced.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(MarketError::ConflictingRestriction(format!(
                    "agent `{}` has two forced outgoing arcs",
                    market.name(w[0].0)
                )));
            }
        }
        Ok(Instance { market, forbidden, forced })
    }

    pub fn unrestricted(market: HousingMarket) -> Self {
        Instance { market, forbidden: Vec::new(), forced: Vec::new() }
    }

    pub fn market(&self) -> &HousingMarket {
        &self.market
    }

    pub fn forbidden(&self) -> &[Arc] {
        &self.forbidden
    }

    pub fn forced(&self) -> &[Arc] {
        &self.forced
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m = &self.market;
        let mut preferences = BTreeMap::new();
        for a in m.agents() {
            let mut unacceptable = Vec::new();
            let mut strict = Vec::new();
            for (b, c) in m.preference(a).strict_pairs() {
                if b == a {
                    unacceptable.push(m.name(c));
                } else {
                    strict.push(vec![m.name(b), m.name(c)]);
                }
            }
            preferences.insert(
                m.name(a),
                serde_json::json!({ "unacceptable": unacceptable, "strict": strict }),
            );
        }
        let arclist = |arcs: &[Arc]| -> Vec<Vec<&str>> {
            arcs.iter().map(|&(a, b)| vec![m.name(a), m.name(b)]).collect()
        };
        serde_json::json!({
            "agents": m.names(),
            "preferences": preferences,
            "forbidden": arclist(&self.forbidden),
            "forced": arclist(&self.forced),
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serialization");
        s.push('\n');
        s
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    agents: Vec<String>,
    #[serde(default)]
    preferences: BTreeMap<String, RawPreferences>,
    #[serde(default)]
    forbidden: Vec<(String, String)>,
    #[serde(default)]
    forced: Vec<(String, String)>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreferences {
    #[serde(default)]
    unacceptable: Vec<String>,
    #[serde(default)]
    strict: Vec<(String, String)>,
}

/// Parse and fully validate a JSON instance document.
pub fn parse_instance(text: &str) -> Result<Instance, MarketError> {
    let raw: RawInstance =
        serde_json::from_str(text).map_err(|e| MarketError::MalformedDocument(e.to_string()))?;
    if raw.agents.is_empty() {
        return Err(MarketError::MalformedDocument("no agents".into()));
    }
    let mut builder = HousingMarket::builder(raw.agents.clone());
    for (owner, prefs) in &raw.preferences {
        for u in &prefs.unacceptable {
            builder = builder.unacceptable(owner, u);
        }
        for (better, worse) in &prefs.strict {
            builder = builder.prefer(owner, better, worse);
        }
    }
    // Reject preference blocks for agents that do not exist.
    for owner in raw.preferences.keys() {
        if !raw.agents.contains(owner) {
            return Err(MarketError::UnknownAgent(owner.clone()));
        }
    }
    let market = builder.build()?;
    let resolve_arcs = |list: &[(String, String)]| -> Result<Vec<Arc>, MarketError> {
        list.iter()
            .map(|(t, h)| Ok((market.resolve(t)?, market.resolve(h)?)))
            .collect()
    };
    let forbidden = resolve_arcs(&raw.forbidden)?;
    let forced = resolve_arcs(&raw.forced)?;
    Instance::new(market, forbidden, forced)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAllocation {
    assignment: BTreeMap<String, String>,
}

/// Parse an allocation document `{"assignment": {"a": "b", ...}}` against a
/// market, validating that it is a permutation within the underlying graph.
pub fn parse_allocation(market: &HousingMarket, text: &str) -> Result<Allocation, MarketError> {
    let raw: RawAllocation =
        serde_json::from_str(text).map_err(|e| MarketError::MalformedDocument(e.to_string()))?;
    let mut arcs = Vec::new();
    for (t, h) in &raw.assignment {
        arcs.push((market.resolve(t)?, market.resolve(h)?));
    }
    Allocation::from_arcs(market, &arcs)
}

/// Serialize a set of arcs as name pairs, for certificates and traces.
pub fn arcs_to_json(market: &HousingMarket, arcs: &[Arc]) -> serde_json::Value {
    let list: Vec<Vec<&str>> = arcs.iter().map(|&(a, b)| vec![market.name(a), market.name(b)]).collect();
    serde_json::Value::from(serde_json::to_value(list).expect("serialization"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> HousingMarket {
        // agents a,b,c,d; A(a)=A(b)=N, A(c)={a,b,c}, A(d)={c,d};
        // every acceptable house is above the own one, plus c above d for a and b
        HousingMarket::builder(["a", "b", "c", "d"])
            .prefer("a", "b", "a")
            .prefer("a", "c", "a")
            .prefer("a", "d", "a")
            .prefer("a", "c", "d")
            .prefer("b", "a", "b")
            .prefer("b", "c", "b")
            .prefer("b", "d", "b")
            .prefer("b", "c", "d")
            .prefer("c", "a", "c")
            .prefer("c", "b", "c")
            .unacceptable("c", "d")
            .prefer("d", "c", "d")
            .unacceptable("d", "a")
            .unacceptable("d", "b")
            .build()
            .unwrap()
    }

    const H1_JSON: &str = r#"{
        "agents": ["a", "b", "c", "d"],
        "preferences": {
            "a": {"strict": [["b","a"],["c","a"],["d","a"],["c","d"]]},
            "b": {"strict": [["a","b"],["c","b"],["d","b"],["c","d"]]},
            "c": {"strict": [["a","c"],["b","c"]], "unacceptable": ["d"]},
            "d": {"strict": [["c","d"]], "unacceptable": ["a","b"]}
        }
    }"#;

    #[test]
    fn parse_h1_counts() {
        let inst = parse_instance(H1_JSON).unwrap();
        let m = inst.market();
        assert_eq!(m.agent_count(), 4);
        let e = m.underlying_graph();
        assert_eq!(e.arc_count(), 13); // 4 loops + 9 non-loop arcs
        assert_eq!(m, &h1());
    }

    #[test]
    fn symmetric_pair_is_rejected() {
        let doc = r#"{
            "agents": ["a", "b", "c"],
            "preferences": {"a": {"strict": [["b","c"],["c","b"]]}}
        }"#;
        match parse_instance(doc) {
            Err(MarketError::CycleInStrictRelation { agent }) => assert_eq!(agent, "a"),
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn closure_cycle_is_rejected() {
        let doc = r#"{
            "agents": ["a", "b", "c"],
            "preferences": {"a": {"strict": [["a","b"],["b","c"],["c","a"]]}}
        }"#;
        assert!(matches!(
            parse_instance(doc),
            Err(MarketError::CycleInStrictRelation { .. })
        ));
    }

    #[test]
    fn unknown_agents_are_rejected() {
        let doc = r#"{"agents": ["a"], "preferences": {"a": {"unacceptable": ["z"]}}}"#;
        assert!(matches!(parse_instance(doc), Err(MarketError::UnknownAgent(_))));
        let doc = r#"{"agents": ["a"], "preferences": {"z": {}}}"#;
        assert!(matches!(parse_instance(doc), Err(MarketError::UnknownAgent(_))));
    }

    #[test]
    fn restriction_validation() {
        let doc = r#"{"agents": ["a","b"],
            "preferences": {"a": {"strict": [["b","a"]]}, "b": {"strict": [["a","b"]]}},
            "forbidden": [["a","b"]], "forced": [["a","b"]]}"#;
        assert!(matches!(parse_instance(doc), Err(MarketError::ConflictingRestriction(_))));

        let doc = r#"{"agents": ["a","b"],
            "preferences": {"a": {"unacceptable": ["b"]}},
            "forbidden": [["a","b"]]}"#;
        assert!(matches!(parse_instance(doc), Err(MarketError::NonEdgeRestriction { .. })));

        let doc = r#"{"agents": ["a","b"],
            "preferences": {"a": {"strict": [["b","a"]]}, "b": {"strict": [["a","b"]]}},
            "forced": [["a","b"],["a","a"]]}"#;
        assert!(matches!(parse_instance(doc), Err(MarketError::ConflictingRestriction(_))));
    }

    #[test]
    fn transitive_closure_is_computed_and_idempotent() {
        // b > c, c > d implies b > d
        let m = HousingMarket::builder(["a", "b", "c", "d"])
            .prefer("a", "b", "c")
            .prefer("a", "c", "d")
            .build()
            .unwrap();
        assert!(m.prefers(0, 1, 3));
        // round-trip through JSON reproduces the identical instance
        let inst = Instance::unrestricted(m);
        let text = inst.to_json_string();
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn closure_implied_unacceptability_is_folded() {
        // own > u and u > v forces own > v: v is unacceptable too
        let m = HousingMarket::builder(["a", "u", "v"])
            .unacceptable("a", "u")
            .prefer("a", "u", "v")
            .build()
            .unwrap();
        assert!(!m.acceptable(0, 1));
        assert!(!m.acceptable(0, 2));
        let text = Instance::unrestricted(m.clone()).to_json_string();
        assert_eq!(parse_instance(&text).unwrap().market(), &m);
    }

    #[test]
    fn underlying_graph_single_agent_is_one_loop() {
        let m = HousingMarket::builder(["a"]).build().unwrap();
        let g = m.underlying_graph();
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn undominated_arcs_of_h1() {
        let m = h1();
        // {(a,b),(a,c),(b,a),(b,c),(c,a),(c,b),(d,c)} with ids a=0,b=1,c=2,d=3
        assert_eq!(
            m.undominated_arcs(),
            vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (3, 2)]
        );
    }

    #[test]
    fn empty_relation_leaves_every_outgoing_arc_undominated() {
        let m = HousingMarket::builder(["a", "b"]).build().unwrap();
        assert_eq!(m.undominated_arcs(), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn restrict_to_singleton_keeps_the_loop_only() {
        let m = h1();
        let sub = m.restrict(&[3]).unwrap();
        assert_eq!(sub.agent_count(), 1);
        assert_eq!(sub.names(), ["d"]);
        assert_eq!(sub.underlying_graph().arcs().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn restrict_to_all_is_identity() {
        let m = h1();
        assert_eq!(m.restrict(&[0, 1, 2, 3]).unwrap(), m);
        assert!(matches!(m.restrict(&[]), Err(MarketError::EmptySubset)));
    }

    #[test]
    fn allocation_validation() {
        let m = h1();
        // a<->b swap, c and d keep
        assert!(Allocation::new(&m, vec![1, 0, 2, 3]).is_ok());
        // d cannot take a's house
        assert!(Allocation::new(&m, vec![3, 1, 2, 0]).is_err());
        // not a permutation
        assert!(Allocation::new(&m, vec![1, 1, 2, 3]).is_err());
    }

    #[test]
    fn allocation_document_round_trip() {
        let m = h1();
        let x = Allocation::new(&m, vec![1, 0, 2, 3]).unwrap();
        let text = serde_json::to_string(&x.to_json(&m)).unwrap();
        assert_eq!(parse_allocation(&m, &text).unwrap(), x);
    }

    #[test]
    fn preference_class_predicates() {
        let m = h1();
        assert!(!m.preference(0).is_total());
        assert!(!m.preference(0).is_weak_order()); // b ~ c, c > d, b ~ d
        let total = HousingMarket::builder(["a", "b"]).prefer("a", "b", "a").build().unwrap();
        assert!(total.preference(0).is_total());
        assert!(total.preference(0).is_weak_order());
        let empty = HousingMarket::builder(["a", "b"]).build().unwrap();
        assert!(!empty.preference(0).is_total());
        assert!(empty.preference(0).is_weak_order());
    }
}
