//! Repair graphs: acyclic graphs on the coordinates in which every inner
//! node's in-neighbours form one of its repair sets.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{in_span, BitVec, LinearCode};
use crate::repair::RepairIndex;
use crate::report::{ValidationReport, Witness};
use crate::subsets::{binomial, full_mask, items_of, mask_of, subsets_up_to, Combinations, Mask};

/// Directed edge `(tail, head)`.
pub type Edge = (usize, usize);

/// Nodes are `0..n`; a node with an empty in-set is a source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairGraph {
    in_sets: Vec<Vec<usize>>,
    out_sets: Vec<Vec<usize>>,
}

impl RepairGraph {
    /// Rejects out-of-range nodes, self-loops and cycles.
    pub fn new(in_sets: Vec<Vec<usize>>) -> Result<Self> {
        let n = in_sets.len();
        let mut out_sets = vec![Vec::new(); n];
        let mut cleaned = Vec::with_capacity(n);
        for (v, set) in in_sets.into_iter().enumerate() {
            let set: Vec<usize> = set.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
            if let Some(&u) = set.iter().find(|&&u| u >= n) {
                return Err(Error::Coordinate { coord: u, len: n });
            }
            if set.contains(&v) {
                return Err(Error::Invalid(format!("node {} lists itself as in-neighbour", v + 1)));
            }
            for &u in &set {
                out_sets[u].push(v);
            }
            cleaned.push(set);
        }
        let g = RepairGraph {
            in_sets: cleaned,
            out_sets,
        };
        if let Some(v) = g.cycle_node() {
            return Err(Error::Invalid(format!("graph has a cycle through node {}", v + 1)));
        }
        Ok(g)
    }

    pub fn edgeless(n: usize) -> Self {
        RepairGraph::new(vec![Vec::new(); n]).expect("edgeless graph is acyclic")
    }

    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        let mut in_sets = vec![Vec::new(); n];
        for &(tail, head) in edges {
            if head >= n {
                return Err(Error::Coordinate { coord: head, len: n });
            }
            in_sets[head].push(tail);
        }
        RepairGraph::new(in_sets)
    }

    fn cycle_node(&self) -> Option<usize> {
        let n = self.n();
        let mut indegree: Vec<usize> = self.in_sets.iter().map(Vec::len).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = ready.pop() {
            seen += 1;
            for &v in &self.out_sets[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    ready.push(v);
                }
            }
        }
        (seen < n).then(|| (0..n).find(|&v| indegree[v] > 0).expect("some node on a cycle"))
    }

    pub fn n(&self) -> usize {
        self.in_sets.len()
    }

    pub fn in_set(&self, v: usize) -> &[usize] {
        &self.in_sets[v]
    }

    pub fn in_sets(&self) -> &[Vec<usize>] {
        &self.in_sets
    }

    /// Out-neighbours of `v`, ascending.
    pub fn out(&self, v: usize) -> &[usize] {
        &self.out_sets[v]
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.in_sets[v].is_empty()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.is_source(v)).collect()
    }

    /// All edges ordered by tail, then head.
    pub fn edges(&self) -> Vec<Edge> {
        (0..self.n())
            .flat_map(|u| self.out_sets[u].iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.in_sets.iter().map(Vec::len).sum()
    }
}

/// True iff every inner node's in-set has at most `r` members and spans the
/// node's generator column.
pub fn validate_repair_graph(code: &LinearCode, g: &RepairGraph, r: usize) -> Result<bool> {
    if g.n() != code.n() {
        return Err(Error::Dimension(format!(
            "graph has {} nodes, code has length {}",
            g.n(),
            code.n()
        )));
    }
    for v in 0..g.n() {
        let set = g.in_set(v);
        if set.is_empty() {
            continue;
        }
        if set.len() > r {
            return Ok(false);
        }
        let cols: Vec<BitVec> = set.iter().map(|&u| code.column(u).clone()).collect();
        if !in_span(code.column(v), &cols)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Out(V)`: out-neighbours of members of `V` that are not in `V`.
pub fn out_set(g: &RepairGraph, nodes: &[usize]) -> Vec<usize> {
    let inside: BTreeSet<usize> = nodes.iter().copied().collect();
    let out: BTreeSet<usize> = nodes
        .iter()
        .flat_map(|&v| g.out(v).iter().copied())
        .filter(|u| !inside.contains(u))
        .collect();
    out.into_iter().collect()
}

/// `Out²(v)`: out-neighbours of `Out(v)` that are not themselves in `Out(v)`.
pub fn out2(g: &RepairGraph, v: usize) -> Vec<usize> {
    let first = g.out(v);
    let out: BTreeSet<usize> = first
        .iter()
        .flat_map(|&u| g.out(u).iter().copied())
        .filter(|w| !first.contains(w))
        .collect();
    out.into_iter().collect()
}

/// A repair graph with the fewest sources among all repair graphs of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalGraph {
    pub delta_star: usize,
    pub sources: Vec<usize>,
    pub graph: RepairGraph,
}

/// Repeatedly adds the lowest node with a repair set inside the current set.
/// Returns the in-sets used when the closure reaches every node.
fn closure(index: &RepairIndex, start: Mask) -> Option<Vec<Vec<usize>>> {
    let n = index.n();
    let full = full_mask(n);
    let mut current = start;
    let mut in_sets = vec![Vec::new(); n];
    'grow: while current != full {
        for (v, slot) in in_sets.iter_mut().enumerate() {
            if current >> v & 1 == 0 {
                // A zero column can only ever be a source.
                if let Some(set) = index.first_within(v, current).filter(|&s| s != 0) {
                    current |= 1 << v;
                    *slot = items_of(set);
                    continue 'grow;
                }
            }
        }
        return None;
    }
    Some(in_sets)
}

/// Fewest sources over all repair graphs of `code` with locality `r`,
/// searching source-set sizes upward from `k`. A set generates a repair
/// graph exactly when its closure is everything, and the closure only grows
/// with the set, so the first full closure found is optimal. Within a size
/// sets are tried lexicographically.
pub fn minimal_source_count(code: &LinearCode, r: usize, budget: u64) -> Result<MinimalGraph> {
    minimal_source_count_from(code, r, budget, code.k())
}

/// [`minimal_source_count`] starting the size search at `floor` instead of
/// `k`.
pub fn minimal_source_count_from(code: &LinearCode, r: usize, budget: u64, floor: usize) -> Result<MinimalGraph> {
    let n = code.n();
    let index = RepairIndex::build(code, r)?;
    let mut spent: u64 = 0;
    for size in floor..=n {
        let cost = binomial(n, size).saturating_mul(n as u64);
        spent = spent.saturating_add(cost);
        if spent > budget {
            return Err(Error::Budget { needed: spent, budget });
        }
        let candidates: Vec<Vec<usize>> = Combinations::new(n, size).collect();
        let found = candidates
            .par_iter()
            .find_map_first(|s| closure(&index, mask_of(s)).map(|ins| (s.clone(), ins)));
        if let Some((sources, in_sets)) = found {
            return Ok(MinimalGraph {
                delta_star: size,
                sources,
                graph: RepairGraph::new(in_sets)?,
            });
        }
    }
    unreachable!("the full coordinate set is its own closure")
}

/// Checks `|Out(E)| >= |E ∩ S|` for every nonempty `E` with `|E| <= t`.
pub fn check_out_lemma(g: &RepairGraph, t: usize) -> ValidationReport {
    let failures = subsets_up_to(g.n(), t)
        .filter_map(|e| {
            let out = out_set(g, &e).len();
            let sources = e.iter().filter(|&&v| g.is_source(v)).count();
            (out < sources).then(|| Witness::new(e, format!("|Out(E)| = {out} < {sources} sources in E")))
        })
        .collect();
    let mut report = ValidationReport::new();
    report.push("out", "|Out(E)| >= |E ∩ S| for all |E| <= t", failures);
    report
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Evaluates the structural consequences of the out-set inequality on the
/// sources of `g`. Clause ids are `cor1-1`..`cor1-5` and `cor2-1`..`cor2-3`;
/// clauses needing a larger `t` are reported as skipped. Each witness is the
/// erasure set that violates the out-set inequality.
pub fn check_structural_corollaries(g: &RepairGraph, t: usize) -> ValidationReport {
    let sources = g.sources();
    let single = |v: usize| -> Option<usize> { (g.out(v).len() == 1).then(|| g.out(v)[0]) };
    let mut report = ValidationReport::new();
    let mut clause = |id: &str, min_t: usize, desc: &str, f: &dyn Fn() -> Vec<Witness>| {
        if t >= min_t {
            report.push(id, desc, f());
        } else {
            report.skip(id, desc);
        }
    };

    clause("cor1-1", 1, "every source has an out-neighbour", &|| {
        sources
            .iter()
            .filter(|&&v| g.out(v).is_empty())
            .map(|&v| Witness::new(vec![v], "source without out-neighbours"))
            .collect()
    });
    clause(
        "cor1-2",
        2,
        "the unique out-neighbour of a source has an out-neighbour",
        &|| {
            sources
                .iter()
                .filter_map(|&v| single(v).map(|w| (v, w)))
                .filter(|&(_, w)| g.out(w).is_empty())
                .map(|(v, w)| Witness::new(sorted(vec![v, w]), "unique out-neighbour is a sink"))
                .collect()
        },
    );
    clause(
        "cor1-3",
        3,
        "a chain v -> v1 -> v2 of unique out-neighbours continues",
        &|| {
            let mut bad = Vec::new();
            for &v in &sources {
                let Some(v1) = single(v) else { continue };
                let Some(v2) = single(v1) else { continue };
                if g.out(v2).is_empty() {
                    bad.push(Witness::new(sorted(vec![v, v1, v2]), "chain ends in a sink"));
                }
            }
            bad
        },
    );
    clause(
        "cor1-4",
        3,
        "sources feeding the end of a unique-out chain have two out-neighbours",
        &|| {
            let mut bad = Vec::new();
            for &v in &sources {
                let Some(v1) = single(v) else { continue };
                let Some(v2) = single(v1) else { continue };
                for &u in g.in_set(v2) {
                    if g.is_source(u) && g.out(u).len() < 2 {
                        bad.push(Witness::new(
                            sorted(vec![v, v1, u]),
                            format!("source {} feeds {} alone", u + 1, v2 + 1),
                        ));
                    }
                }
            }
            bad
        },
    );
    clause(
        "cor1-5",
        2,
        "sources with one out-neighbour have distinct out-neighbours",
        &|| {
            let mut bad = Vec::new();
            for (x, &v) in sources.iter().enumerate() {
                for &w in &sources[x + 1..] {
                    if let (Some(a), Some(b)) = (single(v), single(w)) {
                        if a == b {
                            bad.push(Witness::new(vec![v, w], format!("both feed only {}", a + 1)));
                        }
                    }
                }
            }
            bad
        },
    );

    // Sources with exactly two out-neighbours, as (v, v1, v2).
    let pairs: Vec<(usize, usize, usize)> = sources
        .iter()
        .filter(|&&v| g.out(v).len() == 2)
        .map(|&v| (v, g.out(v)[0], g.out(v)[1]))
        .collect();
    // Sources whose only out-neighbour is `x`.
    let feeders_only = |x: usize| -> Vec<usize> { sources.iter().copied().filter(|&u| single(u) == Some(x)).collect() };
    clause("cor2-1", 3, "a source with two out-neighbours reaches further", &|| {
        pairs
            .iter()
            .filter(|&&(_, a, b)| g.out(a).is_empty() && g.out(b).is_empty())
            .map(|&(v, a, b)| Witness::new(sorted(vec![v, a, b]), "both out-neighbours are sinks"))
            .collect()
    });
    clause(
        "cor2-2",
        3,
        "if one out-neighbour is another source's only one, the other continues",
        &|| {
            let mut bad = Vec::new();
            for &(v, p, q) in &pairs {
                for (a, b) in [(p, q), (q, p)] {
                    if g.out(b).is_empty() {
                        for u in feeders_only(a) {
                            bad.push(Witness::new(sorted(vec![u, v, b]), format!("{} is a sink", b + 1)));
                        }
                    }
                }
            }
            bad
        },
    );
    clause(
        "cor2-3",
        3,
        "then sources feeding the other out-neighbour have two out-neighbours",
        &|| {
            let mut bad = Vec::new();
            for &(v, p, q) in &pairs {
                for (a, b) in [(p, q), (q, p)] {
                    for u in feeders_only(a) {
                        for &w in g.in_set(b) {
                            if g.is_source(w) && g.out(w).len() < 2 {
                                bad.push(Witness::new(
                                    sorted(vec![u, v, w]),
                                    format!("source {} feeds {} alone", w + 1, b + 1),
                                ));
                            }
                        }
                    }
                }
            }
            bad
        },
    );
    report
}

/// Source classes and red/green/blue edges of a repair graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub n: usize,
    pub r: usize,
    /// Sources with at least three out-neighbours.
    pub a: Vec<usize>,
    /// Sources with exactly two out-neighbours.
    pub b: Vec<usize>,
    /// One out-neighbour, one node at distance two.
    pub c1: Vec<usize>,
    /// One out-neighbour, at least two nodes at distance two.
    pub c2: Vec<usize>,
    /// Sources fitting none of the classes (no out-neighbour, or a unique
    /// out-neighbour that is a sink).
    pub unclassified: Vec<usize>,
    pub red: Vec<Edge>,
    pub green: Vec<Edge>,
    pub blue: Vec<Edge>,
    /// Green edges per `C1 ∪ C2` source.
    pub green_of: BTreeMap<usize, Vec<Edge>>,
    /// Blue edges per `B ∪ C1` source.
    pub blue_of: BTreeMap<usize, Vec<Edge>>,
    pub edge_count: usize,
    pub source_count: usize,
}

/// Classifies sources and edges of `g`. Red edges leave a source; green
/// edges leave the unique out-neighbour of a `C1 ∪ C2` source; a remaining
/// edge is blue for `v ∈ B` when its tail is in `Out(v)` and for `v ∈ C1`
/// when its tail is in `Out²(v)`.
pub fn classify_edges(g: &RepairGraph, r: usize) -> EdgeColoring {
    let sources = g.sources();
    let (mut a, mut b, mut c1, mut c2, mut unclassified) = (vec![], vec![], vec![], vec![], vec![]);
    for &v in &sources {
        match g.out(v).len() {
            0 => unclassified.push(v),
            1 => match out2(g, v).len() {
                0 => unclassified.push(v),
                1 => c1.push(v),
                _ => c2.push(v),
            },
            2 => b.push(v),
            _ => a.push(v),
        }
    }
    let edges = g.edges();
    let red: Vec<Edge> = edges.iter().copied().filter(|&(u, _)| g.is_source(u)).collect();

    let mut green_of = BTreeMap::new();
    let mut green_tails = BTreeSet::new();
    for &v in c1.iter().chain(&c2) {
        let tail = g.out(v)[0];
        green_tails.insert(tail);
        green_of.insert(v, edges.iter().copied().filter(|&(u, _)| u == tail).collect::<Vec<_>>());
    }
    let green: Vec<Edge> = edges
        .iter()
        .copied()
        .filter(|&(u, _)| !g.is_source(u) && green_tails.contains(&u))
        .collect();

    let plain: Vec<Edge> = edges
        .iter()
        .copied()
        .filter(|&(u, _)| !g.is_source(u) && !green_tails.contains(&u))
        .collect();
    let mut blue_of = BTreeMap::new();
    for &v in &b {
        let tails = g.out(v);
        blue_of.insert(
            v,
            plain
                .iter()
                .copied()
                .filter(|(u, _)| tails.contains(u))
                .collect::<Vec<_>>(),
        );
    }
    for &v in &c1 {
        let tails = out2(g, v);
        blue_of.insert(
            v,
            plain
                .iter()
                .copied()
                .filter(|(u, _)| tails.contains(u))
                .collect::<Vec<_>>(),
        );
    }
    let blue: Vec<Edge> = blue_of
        .values()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    EdgeColoring {
        n: g.n(),
        r,
        a,
        b,
        c1,
        c2,
        unclassified,
        red,
        green,
        blue,
        green_of,
        blue_of,
        edge_count: g.edge_count(),
        source_count: sources.len(),
    }
}

impl EdgeColoring {
    /// Checks the counting inequalities. With `δ` the number of sources:
    ///
    /// * `partition`: every source lies in `A ∪ B ∪ C1 ∪ C2`;
    /// * `red`: `|red| >= 3|A| + 2|B| + |C1| + |C2|`;
    /// * `green`: `|green| >= |C1| + 2|C2|`;
    /// * `blue-each`: every `v ∈ B ∪ C1` owns a blue edge;
    /// * `blue-share`: every blue edge belongs to at most `r` sources;
    /// * `blue`: `r |blue| >= |B| + |C1|`;
    /// * `edges-upper`: `(n - δ) r >= |E|`;
    /// * `edges-lower`: `|E| >= 2δ + ceil(δ / r)`.
    pub fn ledger(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let r = self.r;
        let count = |ok: bool, detail: String| -> Vec<Witness> {
            if ok {
                vec![]
            } else {
                vec![Witness::new(vec![], detail)]
            }
        };
        report.push(
            "partition",
            "every source is in A, B, C1 or C2",
            self.unclassified
                .iter()
                .map(|&v| Witness::new(vec![v], "unclassified source"))
                .collect(),
        );
        let need = 3 * self.a.len() + 2 * self.b.len() + self.c1.len() + self.c2.len();
        report.push(
            "red",
            "|red| >= 3|A| + 2|B| + |C1| + |C2|",
            count(self.red.len() >= need, format!("{} red edges < {need}", self.red.len())),
        );
        let need = self.c1.len() + 2 * self.c2.len();
        report.push(
            "green",
            "|green| >= |C1| + 2|C2|",
            count(
                self.green.len() >= need,
                format!("{} green edges < {need}", self.green.len()),
            ),
        );
        report.push(
            "blue-each",
            "every source in B or C1 owns a blue edge",
            self.blue_of
                .iter()
                .filter(|(_, e)| e.is_empty())
                .map(|(&v, _)| Witness::new(vec![v], "no blue edge"))
                .collect(),
        );
        let mut owners: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (&v, es) in &self.blue_of {
            for &e in es {
                owners.entry(e).or_default().push(v);
            }
        }
        report.push(
            "blue-share",
            "every blue edge belongs to at most r sources",
            owners
                .iter()
                .filter(|(_, vs)| vs.len() > r)
                .map(|(&(u, w), vs)| {
                    Witness::new(vs.clone(), format!("edge ({},{}) shared by {}", u + 1, w + 1, vs.len()))
                })
                .collect(),
        );
        let need = self.b.len() + self.c1.len();
        report.push(
            "blue",
            "r * |blue| >= |B| + |C1|",
            count(
                r * self.blue.len() >= need,
                format!("{r} * {} blue edges < {need}", self.blue.len()),
            ),
        );
        let (n, d, e) = (self.n, self.source_count, self.edge_count);
        report.push(
            "edges-upper",
            "(n - delta) r >= |E|",
            count((n - d) * r >= e, format!("({n} - {d}) * {r} < {e} edges")),
        );
        let need = 2 * d + d.div_ceil(r.max(1));
        report.push(
            "edges-lower",
            "|E| >= 2 delta + ceil(delta / r)",
            count(e >= need, format!("{e} edges < {need}")),
        );
        report
    }
}

/// Formats edges 1-based, e.g. `{(8,11),(10,12)}`.
pub fn format_edges(edges: &[Edge]) -> String {
    let inner: Vec<String> = edges.iter().map(|(u, v)| format!("({},{})", u + 1, v + 1)).collect();
    format!("{{{}}}", inner.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BinaryMatrix;

    fn code(cols: usize, rows: &[&str]) -> LinearCode {
        LinearCode::new(BinaryMatrix::from_strs(cols, rows).unwrap(), None).unwrap()
    }

    #[test]
    fn rejects_cycles() {
        assert!(RepairGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(RepairGraph::new(vec![vec![0]]).is_err());
    }

    #[test]
    fn validate_examples() {
        let c = code(4, &["1010", "0101"]);
        assert!(validate_repair_graph(&c, &RepairGraph::edgeless(4), 1).unwrap());
        let g = RepairGraph::new(vec![vec![], vec![], vec![0], vec![1]]).unwrap();
        assert!(validate_repair_graph(&c, &g, 1).unwrap());
        let g = RepairGraph::new(vec![vec![], vec![], vec![1], vec![]]).unwrap();
        assert!(!validate_repair_graph(&c, &g, 1).unwrap());
        assert!(validate_repair_graph(&c, &RepairGraph::edgeless(3), 1).is_err());
    }

    #[test]
    fn out_examples() {
        let g = RepairGraph::from_edges(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(out_set(&g, &[0, 1]), vec![2]);
        assert_eq!(out_set(&g, &[0, 1, 2, 3]), Vec::<usize>::new());
        let g = RepairGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(out2(&g, 0), vec![2]);
        assert_eq!(out2(&RepairGraph::edgeless(2), 0), Vec::<usize>::new());
    }

    #[test]
    fn minimal_sources_examples() {
        let c = code(4, &["1010", "0101"]);
        let m = minimal_source_count(&c, 1, u64::MAX).unwrap();
        assert_eq!((m.delta_star, m.sources.clone()), (2, vec![0, 1]));
        assert!(validate_repair_graph(&c, &m.graph, 1).unwrap());

        let c = code(3, &["101", "011"]);
        assert_eq!(minimal_source_count(&c, 1, u64::MAX).unwrap().delta_star, 3);
        assert!(matches!(minimal_source_count(&c, 1, 1), Err(Error::Budget { .. })));
    }

    #[test]
    fn out_lemma_examples() {
        let g = RepairGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(check_out_lemma(&g, 1).passed());
        let rep = check_out_lemma(&RepairGraph::edgeless(3), 1);
        assert_eq!(rep.check("out").failures[0].elements, vec![0]);
    }

    #[test]
    fn corollary_examples() {
        let rep = check_structural_corollaries(&RepairGraph::edgeless(2), 1);
        assert_eq!(rep.check("cor1-1").failures.len(), 2);
        assert!(!rep.check("cor1-5").applicable);

        let g = RepairGraph::from_edges(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        let rep = check_structural_corollaries(&g, 2);
        assert_eq!(rep.failed_ids(), vec!["cor1-5"]);
        assert_eq!(rep.check("cor1-5").failures[0].elements, vec![0, 1]);
    }

    #[test]
    fn coloring_edgeless() {
        let col = classify_edges(&RepairGraph::edgeless(3), 2);
        assert!(col.red.is_empty() && col.green.is_empty() && col.blue.is_empty());
        assert_eq!(col.unclassified, vec![0, 1, 2]);
        let ledger = col.ledger();
        assert!(!ledger.passed());
        assert!(!ledger.check("edges-lower").passed());
    }
}
