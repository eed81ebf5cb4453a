//! Stallings subgroup graphs.
//!
//! A [`SubgroupGraph`] is a labelled directed graph: an edge `u → v` with
//! generator `g` reads `g` forward and `g⁻¹` backward. Graphs handed out by
//! this module are always folded (no two edges at a vertex read the same
//! signed letter) and core (every non-base vertex has degree at least two).

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub generator: usize,
}

/// Order in which folding scans vertices. Folding is confluent, so every
/// order yields the same graph up to isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FoldOrder {
    #[default]
    Forward,
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupGraph {
    ambient_rank: usize,
    vertex_count: usize,
    edges: Vec<Edge>,
    base: Option<usize>,
}

/// Walk of an input word through a folded graph: `(edge index, reversed)`.
pub type EdgePath = Vec<(usize, bool)>;

/// Output of a tracked fold: the graph, and for each input generator the
/// closed edge path it traces from the base.
#[derive(Debug, Clone)]
pub struct FoldedRose {
    pub graph: SubgroupGraph,
    pub petal_paths: Vec<EdgePath>,
    /// Per edge of `graph`, a word in the input generators (generator `i`
    /// standing for input word `i`) whose image equals the element read
    /// along any based loop, edge by edge. See [`Folder`].
    pub tags: Vec<Word>,
}

impl SubgroupGraph {
    /// Folds the rose of `gens` (trivial words dropped) into a based core
    /// graph for `⟨gens⟩`.
    pub fn from_generators(ambient_rank: usize, gens: &[Word]) -> Result<Self> {
        Self::from_generators_with_order(ambient_rank, gens, FoldOrder::Forward)
    }

    pub fn from_generators_with_order(
        ambient_rank: usize,
        gens: &[Word],
        order: FoldOrder,
    ) -> Result<Self> {
        let nontrivial: Vec<Word> = gens.iter().filter(|w| !w.is_empty()).cloned().collect();
        if nontrivial.is_empty() {
            return Err(Error::TrivialSubgroup);
        }
        Ok(fold_rose(ambient_rank, &nontrivial, order)?.graph)
    }

    /// Folds an arbitrary labelled graph and trims it to its core. When a
    /// base is given it is kept even if it has degree one.
    pub fn from_raw(
        ambient_rank: usize,
        vertex_count: usize,
        edges: Vec<Edge>,
        base: Option<usize>,
        order: FoldOrder,
    ) -> Result<Self> {
        for e in &edges {
            if e.generator >= ambient_rank {
                return Err(Error::GeneratorOutOfRange {
                    generator: e.generator,
                    rank: ambient_rank,
                });
            }
        }
        let mut folder = Folder::new(vertex_count, base.unwrap_or(usize::MAX), false);
        for e in edges {
            folder.push_edge(e.source, e.target, e.generator, Word::identity());
        }
        folder.fold(order);
        Ok(folder.finish(ambient_rank, base.is_some()).0)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn base(&self) -> Option<usize> {
        self.base
    }

    /// First Betti number `|E| − |V| + 1`; 0 for the empty graph.
    pub fn rank(&self) -> usize {
        if self.vertex_count == 0 {
            return 0;
        }
        (self.edges.len() + 1).saturating_sub(self.vertex_count)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.source == v) as usize + (e.target == v) as usize)
            .sum()
    }

    /// `table[v][slot]` is the `(neighbour, edge)` reached from `v` by reading
    /// the signed letter with that slot.
    pub fn neighbour_table(&self) -> Vec<Vec<Option<(usize, usize)>>> {
        let mut table = vec![vec![None; 2 * self.ambient_rank]; self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            table[e.source][Letter::pos(e.generator).slot()] = Some((e.target, i));
            table[e.target][Letter::neg(e.generator).slot()] = Some((e.source, i));
        }
        table
    }

    /// End vertex of the lift of `w` starting at `v`, if it exists.
    pub fn lift_from(&self, v: usize, w: &Word) -> Option<usize> {
        let table = self.neighbour_table();
        lift_with(&table, v, w)
    }

    /// Based graphs: `w` is a closed loop at the base. Baseless graphs: `w`
    /// lifts to a path from some vertex.
    pub fn accepts(&self, w: &Word) -> bool {
        let table = self.neighbour_table();
        match self.base {
            Some(b) => lift_with(&table, b, w) == Some(b),
            None => (0..self.vertex_count).any(|v| lift_with(&table, v, w).is_some()),
        }
    }

    /// True iff `w` lifts to a path starting at some vertex (regardless of
    /// base).
    pub fn lifts_somewhere(&self, w: &Word) -> bool {
        let table = self.neighbour_table();
        (0..self.vertex_count).any(|v| lift_with(&table, v, w).is_some())
    }

    /// True iff `w` reads a closed loop at some vertex.
    pub fn has_loop(&self, w: &Word) -> bool {
        let table = self.neighbour_table();
        (0..self.vertex_count).any(|v| lift_with(&table, v, w) == Some(v))
    }

    /// Baseless core: forgets the base and trims hanging trees. Empty for
    /// trivial subgroups.
    pub fn core(&self) -> SubgroupGraph {
        let mut folder = Folder::new(self.vertex_count, usize::MAX, false);
        for e in &self.edges {
            folder.push_edge(e.source, e.target, e.generator, Word::identity());
        }
        folder.finish(self.ambient_rank, false).0
    }

    pub fn is_folded(&self) -> bool {
        let mut seen = vec![vec![false; 2 * self.ambient_rank]; self.vertex_count];
        for e in &self.edges {
            for (v, slot) in [
                (e.source, Letter::pos(e.generator).slot()),
                (e.target, Letter::neg(e.generator).slot()),
            ] {
                if seen[v][slot] {
                    return false;
                }
                seen[v][slot] = true;
            }
        }
        true
    }

    pub fn is_core(&self) -> bool {
        (0..self.vertex_count).all(|v| Some(v) == self.base || self.degree(v) >= 2)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let comps = components(self.vertex_count, &self.edges);
        comps.iter().all(|&c| c == comps[0])
    }

    /// Free basis read off a BFS spanning tree rooted at the base (or vertex
    /// 0). Non-canonical.
    pub fn generators(&self) -> Vec<Word> {
        if self.vertex_count == 0 {
            return Vec::new();
        }
        let root = self.base.unwrap_or(0);
        let table = self.neighbour_table();
        let mut to_root: Vec<Option<Word>> = vec![None; self.vertex_count];
        let mut tree_edge = vec![false; self.edges.len()];
        to_root[root] = Some(Word::identity());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for slot in 0..2 * self.ambient_rank {
                if let Some((u, e)) = table[v][slot] {
                    if to_root[u].is_none() {
                        let path = to_root[v]
                            .as_ref()
                            .unwrap()
                            .mul(&Word::letter(Letter::from_slot(slot)));
                        to_root[u] = Some(path);
                        tree_edge[e] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !tree_edge[*i])
            .map(|(_, e)| {
                let p = to_root[e.source].as_ref().unwrap();
                let q = to_root[e.target].as_ref().unwrap();
                p.mul(&Word::generator(e.generator)).mul(&q.inverse())
            })
            .collect()
    }

    pub fn to_dot(&self, alphabet: &Alphabet) -> String {
        let mut out = String::from("digraph subgroup {\n");
        for v in 0..self.vertex_count {
            let shape = if Some(v) == self.base {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  v{v} [shape={shape}];");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"{}\"];",
                e.source,
                e.target,
                alphabet.name(e.generator)
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertex_count,
            "base": self.base,
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "source": e.source,
                "target": e.target,
                "label": alphabet.name(e.generator),
            })).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn lift_with(table: &[Vec<Option<(usize, usize)>>], start: usize, w: &Word) -> Option<usize> {
    let mut v = start;
    for l in w {
        v = table[v][l.slot()]?.0;
    }
    Some(v)
}

/// Folds the petal rose of `gens`, tracking where each petal goes and the
/// generator tags used to invert automorphisms.
pub fn fold_rose(ambient_rank: usize, gens: &[Word], order: FoldOrder) -> Result<FoldedRose> {
    for w in gens {
        if let Some(g) = w.max_generator() {
            if g >= ambient_rank {
                return Err(Error::GeneratorOutOfRange {
                    generator: g,
                    rank: ambient_rank,
                });
            }
        }
    }
    let mut folder = Folder::new(1, 0, true);
    let mut raw_paths: Vec<EdgePath> = Vec::with_capacity(gens.len());
    for (i, w) in gens.iter().enumerate() {
        let mut path = Vec::with_capacity(w.len());
        let mut prev = 0;
        for (j, l) in w.iter().enumerate() {
            let next = if j + 1 == w.len() {
                0
            } else {
                folder.new_vertex()
            };
            let tag = if j == 0 {
                Word::generator(i)
            } else {
                Word::identity()
            };
            // The tag of a backward-read edge is inverted so that reading the
            // petal multiplies out to X_i.
            let e = if l.negative {
                folder.push_edge(next, prev, l.generator, tag.inverse())
            } else {
                folder.push_edge(prev, next, l.generator, tag)
            };
            path.push((e, l.negative));
            prev = next;
        }
        raw_paths.push(path);
    }
    folder.fold(order);
    let (graph, edge_map, tags) = folder.finish(ambient_rank, true);
    let petal_paths = raw_paths
        .into_iter()
        .map(|p| {
            p.into_iter()
                .map(|(e, rev)| (edge_map[e].expect("petal edge trimmed"), rev))
                .collect()
        })
        .collect();
    Ok(FoldedRose {
        graph,
        petal_paths,
        tags,
    })
}

#[derive(Debug, Clone)]
struct FoldEdge {
    source: usize,
    target: usize,
    generator: usize,
    tag: Word,
    alive: bool,
}

/// Mutable graph used during folding.
///
/// With tag tracking on, every edge carries a word in the abstract input
/// generators such that along any closed path at the base, the product of
/// tags maps (under `X_i ↦ gens[i]`) to the word read. Identifying two
/// vertices first re-gauges the non-base one so the two folded edges carry
/// equal tags; this keeps the invariant and never touches the base.
struct Folder {
    vertex_alive: Vec<bool>,
    edges: Vec<FoldEdge>,
    edge_parent: Vec<usize>,
    base: usize,
    track_tags: bool,
}

impl Folder {
    fn new(vertex_count: usize, base: usize, track_tags: bool) -> Self {
        Folder {
            vertex_alive: vec![true; vertex_count],
            edges: Vec::new(),
            edge_parent: Vec::new(),
            base,
            track_tags,
        }
    }

    fn new_vertex(&mut self) -> usize {
        self.vertex_alive.push(true);
        self.vertex_alive.len() - 1
    }

    fn push_edge(&mut self, source: usize, target: usize, generator: usize, tag: Word) -> usize {
        let tag = if self.track_tags { tag } else { Word::identity() };
        self.edges.push(FoldEdge {
            source,
            target,
            generator,
            tag,
            alive: true,
        });
        self.edge_parent.push(self.edges.len() - 1);
        self.edges.len() - 1
    }

    fn find_edge(&self, mut e: usize) -> usize {
        while self.edge_parent[e] != e {
            e = self.edge_parent[e];
        }
        e
    }

    /// First pair of edges violating the immersion condition, scanning
    /// vertices in the requested order.
    fn find_violation(&self, order: FoldOrder, slots: usize) -> Option<(usize, usize, usize, bool)> {
        let n = self.vertex_alive.len();
        let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            if !e.alive {
                continue;
            }
            incident[e.source].push((2 * e.generator, i));
            incident[e.target].push((2 * e.generator + 1, i));
        }
        let mut seen = vec![usize::MAX; slots];
        let vertices: Box<dyn Iterator<Item = usize>> = match order {
            FoldOrder::Forward => Box::new(0..n),
            FoldOrder::Reverse => Box::new((0..n).rev()),
        };
        for v in vertices {
            if !self.vertex_alive[v] || incident[v].len() < 2 {
                continue;
            }
            let mut list = incident[v].clone();
            if order == FoldOrder::Reverse {
                list.reverse();
            }
            let mut touched = Vec::new();
            let mut hit = None;
            for &(slot, e) in &list {
                if slot >= seen.len() {
                    seen.resize(slot + 1, usize::MAX);
                }
                if seen[slot] != usize::MAX && seen[slot] != e {
                    hit = Some((v, seen[slot], e, slot % 2 == 0));
                    break;
                }
                seen[slot] = e;
                touched.push(slot);
            }
            for s in touched {
                seen[s] = usize::MAX;
            }
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    fn fold(&mut self, order: FoldOrder) {
        let slots = 2 * self.edges.iter().map(|e| e.generator + 1).max().unwrap_or(0);
        while let Some((_, e1, e2, forward)) = self.find_violation(order, slots) {
            self.fold_pair(e1, e2, forward);
        }
    }

    /// Identifies `e2` with `e1`; both leave (forward) or enter (backward) a
    /// common vertex with the same label.
    fn fold_pair(&mut self, mut e1: usize, mut e2: usize, forward: bool) {
        let far = |f: &Folder, e: usize| {
            if forward {
                f.edges[e].target
            } else {
                f.edges[e].source
            }
        };
        let (mut a, mut b) = (far(self, e1), far(self, e2));
        if a != b {
            if b == self.base {
                std::mem::swap(&mut e1, &mut e2);
                std::mem::swap(&mut a, &mut b);
            }
            if self.track_tags {
                let t1 = self.edges[e1].tag.clone();
                let t2 = self.edges[e2].tag.clone();
                let c = if forward {
                    t1.inverse().mul(&t2)
                } else {
                    t1.mul(&t2.inverse())
                };
                self.gauge(b, &c);
                debug_assert_eq!(self.edges[e1].tag, self.edges[e2].tag);
            }
            for e in self.edges.iter_mut() {
                if e.source == b {
                    e.source = a;
                }
                if e.target == b {
                    e.target = a;
                }
            }
            self.vertex_alive[b] = false;
        }
        self.edges[e2].alive = false;
        self.edge_parent[e2] = e1;
    }

    fn gauge(&mut self, v: usize, c: &Word) {
        if c.is_empty() {
            return;
        }
        let c_inv = c.inverse();
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            match (e.source == v, e.target == v) {
                (true, true) => e.tag = c.mul(&e.tag).mul(&c_inv),
                (true, false) => e.tag = c.mul(&e.tag),
                (false, true) => e.tag = e.tag.mul(&c_inv),
                (false, false) => {}
            }
        }
    }

    /// Trims to the core, compacts vertex ids (base first) and returns the
    /// graph, the map from every pushed edge to its surviving edge, and the
    /// tags of surviving edges.
    fn finish(
        mut self,
        ambient_rank: usize,
        keep_base: bool,
    ) -> (SubgroupGraph, Vec<Option<usize>>, Vec<Word>) {
        let n = self.vertex_alive.len();
        let keep_base = keep_base && self.base < n && self.vertex_alive[self.base];
        // Trim degree ≤ 1 vertices (other than the base).
        loop {
            let mut degree = vec![0usize; n];
            for e in self.edges.iter().filter(|e| e.alive) {
                degree[e.source] += 1;
                degree[e.target] += 1;
            }
            let mut changed = false;
            for v in 0..n {
                if self.vertex_alive[v] && degree[v] <= 1 && !(keep_base && v == self.base) {
                    self.vertex_alive[v] = false;
                    changed = true;
                    for e in self.edges.iter_mut() {
                        if e.alive && (e.source == v || e.target == v) {
                            e.alive = false;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut new_id = vec![usize::MAX; n];
        let mut count = 0;
        if keep_base {
            new_id[self.base] = 0;
            count = 1;
        }
        for v in 0..n {
            if self.vertex_alive[v] && new_id[v] == usize::MAX {
                new_id[v] = count;
                count += 1;
            }
        }
        let mut edge_id = vec![None; self.edges.len()];
        let mut edges = Vec::new();
        let mut tags = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.alive {
                edge_id[i] = Some(edges.len());
                edges.push(Edge {
                    source: new_id[e.source],
                    target: new_id[e.target],
                    generator: e.generator,
                });
                tags.push(e.tag.clone());
            }
        }
        let mut edge_map = vec![None; self.edges.len()];
        for (i, slot) in edge_map.iter_mut().enumerate() {
            let root = self.find_edge(i);
            *slot = if self.edges[root].alive {
                edge_id[root]
            } else {
                None
            };
        }
        (
            SubgroupGraph {
                ambient_rank,
                vertex_count: count,
                edges,
                base: if keep_base { Some(0) } else { None },
            },
            edge_map,
            tags,
        )
    }
}

fn components(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in edges {
        let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
        if a != b {
            parent[a] = b;
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// One conjugacy class of a nontrivial intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionComponent {
    pub graph: SubgroupGraph,
    pub rank: usize,
    pub generators: Vec<Word>,
}

/// Nontrivial intersections `H₁ ∩ gH₂g⁻¹`, one per conjugacy class found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionResult {
    pub components: Vec<IntersectionComponent>,
}

impl IntersectionResult {
    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    /// A cyclically reduced word lies in both subgroups up to conjugacy iff
    /// this returns true.
    pub fn traces_loop(&self, w: &Word) -> bool {
        self.components.iter().any(|c| c.graph.has_loop(w))
    }
}

/// Pullback of the baseless cores of two folded graphs. Rank-0 pieces are
/// dropped.
pub fn conjugacy_intersection(g1: &SubgroupGraph, g2: &SubgroupGraph) -> IntersectionResult {
    assert_eq!(g1.ambient_rank, g2.ambient_rank, "ambient ranks differ");
    let c1 = g1.core();
    let c2 = g2.core();
    let n2 = c2.vertex_count;
    let mut by_gen: BTreeMap<usize, Vec<&Edge>> = BTreeMap::new();
    for e in &c2.edges {
        by_gen.entry(e.generator).or_default().push(e);
    }
    let mut edges = Vec::new();
    for e1 in &c1.edges {
        if let Some(list) = by_gen.get(&e1.generator) {
            for e2 in list {
                edges.push(Edge {
                    source: e1.source * n2 + e2.source,
                    target: e1.target * n2 + e2.target,
                    generator: e1.generator,
                });
            }
        }
    }
    let total = c1.vertex_count * n2;
    let comp = components(total, &edges);
    let mut grouped: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
    for e in edges {
        grouped.entry(comp[e.source]).or_default().push(e);
    }
    let mut components_out = Vec::new();
    for (_, es) in grouped {
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &es {
            let k = ids.len();
            ids.entry(e.source).or_insert(k);
            let k = ids.len();
            ids.entry(e.target).or_insert(k);
        }
        let local: Vec<Edge> = es
            .iter()
            .map(|e| Edge {
                source: ids[&e.source],
                target: ids[&e.target],
                generator: e.generator,
            })
            .collect();
        let graph = SubgroupGraph::from_raw(g1.ambient_rank, ids.len(), local, None, FoldOrder::Forward)
            .expect("labels already validated");
        if graph.rank() >= 1 {
            let generators = graph.generators();
            components_out.push(IntersectionComponent {
                rank: graph.rank(),
                generators,
                graph,
            });
        }
    }
    IntersectionResult {
        components: components_out,
    }
}

/// Label-preserving map `g1 → g2` sending `start` to `image`, if one exists.
/// With `injective`, the map must be injective on vertices.
fn extend_morphism(
    g1: &SubgroupGraph,
    t1: &[Vec<Option<(usize, usize)>>],
    t2: &[Vec<Option<(usize, usize)>>],
    start: usize,
    image: usize,
    injective: bool,
    n2: usize,
) -> bool {
    let mut map = vec![usize::MAX; g1.vertex_count];
    let mut used = vec![false; n2];
    map[start] = image;
    used[image] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for slot in 0..t1[v].len() {
            if let Some((u, _)) = t1[v][slot] {
                let Some((u2, _)) = t2[map[v]][slot] else {
                    return false;
                };
                if map[u] == usize::MAX {
                    if injective && used[u2] {
                        return false;
                    }
                    map[u] = u2;
                    used[u2] = true;
                    queue.push_back(u);
                } else if map[u] != u2 {
                    return false;
                }
            }
        }
    }
    map.iter().all(|&m| m != usize::MAX)
}

/// Label- and direction-preserving isomorphism of connected folded graphs,
/// ignoring bases.
pub fn cores_isomorphic(g1: &SubgroupGraph, g2: &SubgroupGraph) -> bool {
    if g1.vertex_count != g2.vertex_count || g1.edges.len() != g2.edges.len() {
        return false;
    }
    if g1.vertex_count == 0 {
        return true;
    }
    let mut l1: Vec<usize> = g1.edges.iter().map(|e| e.generator).collect();
    let mut l2: Vec<usize> = g2.edges.iter().map(|e| e.generator).collect();
    l1.sort_unstable();
    l2.sort_unstable();
    if l1 != l2 {
        return false;
    }
    let t1 = g1.neighbour_table();
    let t2 = g2.neighbour_table();
    (0..g2.vertex_count).any(|img| extend_morphism(g1, &t1, &t2, 0, img, true, g2.vertex_count))
}

/// Isomorphism of based graphs carrying base to base.
pub fn based_isomorphic(g1: &SubgroupGraph, g2: &SubgroupGraph) -> bool {
    let (Some(b1), Some(b2)) = (g1.base, g2.base) else {
        return false;
    };
    if g1.vertex_count != g2.vertex_count || g1.edges.len() != g2.edges.len() {
        return false;
    }
    let t1 = g1.neighbour_table();
    let t2 = g2.neighbour_table();
    extend_morphism(g1, &t1, &t2, b1, b2, true, g2.vertex_count)
}

/// True iff the subgroup of the connected core `sub` is conjugate into the
/// subgroup of `sup` (a label-preserving graph map `core(sub) → core(sup)`
/// exists).
pub fn conjugate_into(sub: &SubgroupGraph, sup: &SubgroupGraph) -> bool {
    let c1 = sub.core();
    let c2 = sup.core();
    if c1.vertex_count == 0 {
        return true;
    }
    let t1 = c1.neighbour_table();
    let t2 = c2.neighbour_table();
    (0..c2.vertex_count).any(|img| extend_morphism(&c1, &t1, &t2, 0, img, false, c2.vertex_count))
}

/// Whether two components lists agree up to reordering and isomorphism.
pub fn same_components(a: &IntersectionResult, b: &IntersectionResult) -> bool {
    if a.components.len() != b.components.len() {
        return false;
    }
    let mut used = vec![false; b.components.len()];
    a.components.iter().all(|ca| {
        let hit = b
            .components
            .iter()
            .enumerate()
            .find(|(j, cb)| !used[*j] && cores_isomorphic(&ca.graph, &cb.graph));
        match hit {
            Some((j, _)) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}
