//! Certificates in petals of a folded rose, and the two generator-dropping
//! reductions built on them.
//!
//! Both reductions only fire when a soundness argument goes through on the
//! actual graphs:
//!
//! * the dropped piece `τ` is a *chain* of the folded graph (its interior
//!   vertices have degree two), so every cyclic geodesic using one of its
//!   edges reads all of `τ` or `τ⁻¹`;
//! * loops avoiding `τ` are handled by a residual check: every core
//!   component of the graph with `τ` deleted must be conjugate into the
//!   reduced subgroup, or meet the other subgroup only inside it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stallings::{
    conjugacy_intersection, conjugate_into, fold_rose, lift_with, Edge, EdgePath, FoldOrder,
    FoldedRose, SubgroupGraph,
};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub petal_index: usize,
    /// Offset of the subword inside the petal.
    pub offset: usize,
    pub subword: Word,
    pub path: EdgePath,
    pub uncancellable: bool,
}

/// One checked hypothesis of a dropping reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropReport {
    /// Reduced generator list when every required condition holds.
    pub reduced: Option<Vec<Word>>,
    pub dropped: usize,
    pub tau: Option<Word>,
    pub followups: Vec<Word>,
    pub conditions: Vec<ConditionCheck>,
}

impl DropReport {
    pub fn applicable(&self) -> bool {
        self.reduced.is_some()
    }

    /// First failing condition, if any.
    pub fn failure(&self) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| !c.holds)
    }
}

fn check(name: &str, holds: bool, detail: impl Into<String>) -> ConditionCheck {
    ConditionCheck {
        name: name.to_string(),
        holds,
        detail: detail.into(),
    }
}

fn read_path(graph: &SubgroupGraph, path: &[(usize, bool)]) -> Word {
    Word::reduce(path.iter().map(|&(e, rev)| {
        let g = graph.edges()[e].generator;
        if rev {
            Letter::neg(g)
        } else {
            Letter::pos(g)
        }
    }))
}

fn step_ends(edge: &Edge, reversed: bool) -> (usize, usize) {
    if reversed {
        (edge.target, edge.source)
    } else {
        (edge.source, edge.target)
    }
}

fn path_vertices(graph: &SubgroupGraph, path: &[(usize, bool)]) -> Vec<usize> {
    let mut vs = Vec::with_capacity(path.len() + 1);
    for (k, &(e, rev)) in path.iter().enumerate() {
        let (s, t) = step_ends(&graph.edges()[e], rev);
        if k == 0 {
            vs.push(s);
        }
        vs.push(t);
    }
    vs
}

/// Simple path, or simple cycle.
fn is_embedded(graph: &SubgroupGraph, path: &[(usize, bool)]) -> bool {
    let vs = path_vertices(graph, path);
    let inner = if vs.len() > 1 && vs[0] == vs[vs.len() - 1] {
        &vs[..vs.len() - 1]
    } else {
        &vs[..]
    };
    let distinct: BTreeSet<usize> = inner.iter().copied().collect();
    let edges: BTreeSet<usize> = path.iter().map(|&(e, _)| e).collect();
    distinct.len() == inner.len() && edges.len() == path.len()
}

/// Edges used by every petal other than `i`.
fn foreign_edges(rose: &FoldedRose, i: usize) -> BTreeSet<usize> {
    rose.petal_paths
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .flat_map(|(_, p)| p.iter().map(|&(e, _)| e))
        .collect()
}

/// Splits `path[range]` greedily into embedded pieces.
fn embedded_pieces(graph: &SubgroupGraph, path: &[(usize, bool)], from: usize, to: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = from;
    while start < to {
        let mut end = start + 1;
        while end < to && is_embedded(graph, &path[start..end + 1]) {
            end += 1;
        }
        out.push((start, end));
        start = end;
    }
    out
}

/// Maximal uncancellable certificates of petal `i`: runs of the petal's
/// path through edges no other petal uses, cut so each run is embedded.
pub fn find_certificates(rank: usize, gens: &[Word], i: usize) -> Result<Vec<Certificate>> {
    if i >= gens.len() {
        return Err(Error::GeneratorOutOfRange {
            generator: i,
            rank: gens.len(),
        });
    }
    let nontrivial: Vec<Word> = gens.to_vec();
    if nontrivial.iter().all(Word::is_empty) {
        return Err(Error::TrivialSubgroup);
    }
    let rose = fold_rose(rank, &nontrivial, FoldOrder::Forward)?;
    Ok(certificates_in(&rose, i))
}

fn certificates_in(rose: &FoldedRose, i: usize) -> Vec<Certificate> {
    let foreign = foreign_edges(rose, i);
    let path = &rose.petal_paths[i];
    let mut out = Vec::new();
    let mut k = 0;
    while k < path.len() {
        if foreign.contains(&path[k].0) {
            k += 1;
            continue;
        }
        let mut end = k;
        while end < path.len() && !foreign.contains(&path[end].0) {
            end += 1;
        }
        for (s, t) in embedded_pieces(&rose.graph, path, k, end) {
            out.push(Certificate {
                petal_index: i,
                offset: s,
                subword: read_path(&rose.graph, &path[s..t]),
                path: path[s..t].to_vec(),
                uncancellable: true,
            });
        }
        k = end;
    }
    out
}

/// A certificate at a chosen subword occurrence, if its path is embedded.
pub fn certificate_at(rank: usize, gens: &[Word], i: usize, offset: usize, len: usize) -> Result<Option<Certificate>> {
    let rose = fold_rose(rank, gens, FoldOrder::Forward)?;
    let path = &rose.petal_paths[i];
    if offset + len > path.len() || len == 0 {
        return Ok(None);
    }
    let piece = &path[offset..offset + len];
    if !is_embedded(&rose.graph, piece) {
        return Ok(None);
    }
    let foreign = foreign_edges(&rose, i);
    Ok(Some(Certificate {
        petal_index: i,
        offset,
        subword: read_path(&rose.graph, piece),
        path: piece.to_vec(),
        uncancellable: piece.iter().all(|(e, _)| !foreign.contains(e)),
    }))
}

/// True iff `w` labels no path of `graph`.
pub fn is_impossible(w: &Word, graph: &SubgroupGraph) -> bool {
    !graph.lifts_somewhere(w)
}

fn degrees(graph: &SubgroupGraph) -> Vec<usize> {
    let mut d = vec![0; graph.vertex_count()];
    for e in graph.edges() {
        d[e.source] += 1;
        d[e.target] += 1;
    }
    d
}

/// Pieces of petal `i` between vertices of degree other than two (and the
/// base), each embedded. These are the candidate `τ`.
fn chain_pieces(rose: &FoldedRose, i: usize) -> Vec<(usize, usize)> {
    let g = &rose.graph;
    let deg = degrees(g);
    let path = &rose.petal_paths[i];
    let vs = path_vertices(g, path);
    let breaks: Vec<usize> = (0..=path.len())
        .filter(|&k| k == 0 || k == path.len() || deg[vs[k]] != 2 || Some(vs[k]) == g.base())
        .collect();
    breaks
        .windows(2)
        .flat_map(|w| embedded_pieces(g, path, w[0], w[1]))
        .collect()
}

fn without_edges(graph: &SubgroupGraph, drop: &BTreeSet<usize>) -> SubgroupGraph {
    let edges: Vec<Edge> = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, e)| *e)
        .collect();
    SubgroupGraph::from_raw(graph.ambient_rank(), graph.vertex_count(), edges, None, FoldOrder::Forward)
        .expect("labels already valid")
}

/// Splits a graph into its connected pieces (each renumbered).
fn split_components(graph: &SubgroupGraph) -> Vec<SubgroupGraph> {
    let n = graph.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let table = graph.neighbour_table();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(u, _) in table[v].iter().flatten() {
                if comp[u] == usize::MAX {
                    comp[u] = count;
                    stack.push(u);
                }
            }
        }
        count += 1;
    }
    (0..count)
        .filter_map(|c| {
            let ids: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
            let local = |v: usize| ids.iter().position(|&x| x == v).unwrap();
            let edges: Vec<Edge> = graph
                .edges()
                .iter()
                .filter(|e| comp[e.source] == c)
                .map(|e| Edge {
                    source: local(e.source),
                    target: local(e.target),
                    generator: e.generator,
                })
                .collect();
            let g = SubgroupGraph::from_raw(graph.ambient_rank(), ids.len(), edges, None, FoldOrder::Forward)
                .ok()?;
            (g.rank() > 0).then_some(g)
        })
        .collect()
}

/// Every loop of `residual` lies, up to conjugacy, in `reduced`, or meets
/// `other` only inside `reduced`.
fn residual_ok(residual: &SubgroupGraph, reduced: Option<&SubgroupGraph>, other: &SubgroupGraph) -> (bool, String) {
    let mut notes = Vec::new();
    for (k, comp) in split_components(residual).iter().enumerate() {
        if reduced.is_some_and(|r| conjugate_into(comp, r)) {
            continue;
        }
        let meet = conjugacy_intersection(comp, other);
        let inside = meet
            .components
            .iter()
            .all(|c| reduced.is_some_and(|r| conjugate_into(&c.graph, r)));
        if !inside {
            return (
                false,
                format!("residual component {k} meets the other subgroup outside the reduced one"),
            );
        }
        notes.push(format!("component {k} checked against the other subgroup"));
    }
    (true, notes.join("; "))
}

fn reduced_graph(rank: usize, gens: &[Word], drop: usize) -> Option<SubgroupGraph> {
    let rest: Vec<Word> = gens
        .iter()
        .enumerate()
        .filter(|(j, w)| *j != drop && !w.is_empty())
        .map(|(_, w)| w.clone())
        .collect();
    SubgroupGraph::from_generators(rank, &rest).ok()
}

fn without(gens: &[Word], drop: usize) -> Vec<Word> {
    gens.iter()
        .enumerate()
        .filter(|(j, _)| *j != drop)
        .map(|(_, w)| w.clone())
        .collect()
}

/// Drops generator `drop` of `A` when one of its chain pieces is impossible
/// in `b`.
pub fn drop_easy(rank: usize, a_gens: &[Word], drop: usize, b: &SubgroupGraph) -> Result<DropReport> {
    if drop >= a_gens.len() {
        return Err(Error::GeneratorOutOfRange {
            generator: drop,
            rank: a_gens.len(),
        });
    }
    let mut report = DropReport {
        reduced: None,
        dropped: drop,
        tau: None,
        followups: Vec::new(),
        conditions: Vec::new(),
    };
    if a_gens[drop].is_empty() {
        report.reduced = Some(without(a_gens, drop));
        report.conditions.push(check("trivial", true, "dropped generator is trivial"));
        return Ok(report);
    }
    let rose = fold_rose(rank, a_gens, FoldOrder::Forward)?;
    let foreign = foreign_edges(&rose, drop);
    let reduced = reduced_graph(rank, a_gens, drop);
    let path = &rose.petal_paths[drop];
    let mut last: Option<Vec<ConditionCheck>> = None;
    for (s, t) in chain_pieces(&rose, drop) {
        let piece = &path[s..t];
        let tau = read_path(&rose.graph, piece);
        let uncancellable = piece.iter().all(|(e, _)| !foreign.contains(e));
        let mut conds = vec![check(
            "certificate",
            true,
            format!(
                "chain at offset {s}, length {}, {}",
                t - s,
                if uncancellable { "uncancellable" } else { "shared with other petals" }
            ),
        )];
        let impossible = is_impossible(&tau, b);
        conds.push(check("impossible", impossible, if impossible { "no lift in B" } else { "lifts in B" }));
        if !impossible {
            last.get_or_insert(conds);
            continue;
        }
        let drop_edges: BTreeSet<usize> = piece.iter().map(|&(e, _)| e).collect();
        let residual = without_edges(&rose.graph, &drop_edges);
        let (ok, detail) = residual_ok(&residual, reduced.as_ref(), b);
        conds.push(check("residual", ok, detail));
        if ok {
            report.reduced = Some(without(a_gens, drop));
            report.tau = Some(tau);
            report.conditions = conds;
            return Ok(report);
        }
        last = Some(conds);
        report.tau = Some(tau);
    }
    report.conditions = last.unwrap_or_else(|| vec![check("certificate", false, "no chain piece in petal")]);
    Ok(report)
}

/// Drops generator `drop` of `B` using a unique-followup argument against
/// `A`.
pub fn drop_hard(rank: usize, a_gens: &[Word], b_gens: &[Word], drop: usize) -> Result<DropReport> {
    if drop >= b_gens.len() {
        return Err(Error::GeneratorOutOfRange {
            generator: drop,
            rank: b_gens.len(),
        });
    }
    let a_rose = fold_rose(rank, a_gens, FoldOrder::Forward)?;
    let b_rose = fold_rose(rank, b_gens, FoldOrder::Forward)?;
    let a_core = a_rose.graph.core();
    let a_table = a_core.neighbour_table();
    let a_deg = degrees(&a_core);
    let b_table = b_rose.graph.neighbour_table();
    let foreign = foreign_edges(&b_rose, drop);
    let reduced = reduced_graph(rank, b_gens, drop);
    let path = &b_rose.petal_paths[drop];
    let mut last: Option<(Vec<ConditionCheck>, Word, Vec<Word>)> = None;

    for (s, t) in chain_pieces(&b_rose, drop) {
        let piece = &path[s..t];
        let tau = read_path(&b_rose.graph, piece);
        let uncancellable = piece.iter().all(|(e, _)| !foreign.contains(e));
        let mut conds = vec![check(
            "certificate",
            uncancellable,
            format!("chain at offset {s}, length {}", t - s),
        )];
        if !uncancellable {
            last.get_or_insert((conds, tau, Vec::new()));
            continue;
        }

        // Every lift of τ in the core of Γ_A; each must be followed by a
        // forced continuation.
        let lifts: Vec<Vec<(usize, bool)>> = (0..a_core.vertex_count())
            .filter_map(|v| lift_edges(&a_table, v, &tau))
            .collect();
        conds.push(check(
            "lifts",
            true,
            match lifts.len() {
                0 => "τ does not lift in A".to_string(),
                1 => "single lift in A".to_string(),
                k => format!("{k} lifts in A"),
            },
        ));

        // Forced continuation after each lift.
        let mut followups = Vec::new();
        let mut forced = true;
        for p in &lifts {
            let f = forced_followup(&a_core, &a_deg, p);
            if f.is_empty() {
                forced = false;
            }
            followups.push(f);
        }
        conds.push(check(
            "followup",
            forced,
            if forced { "forced continuation after every lift" } else { "lift ends at a branch vertex" },
        ));
        if !forced {
            last = Some((conds, tau, followups));
            continue;
        }

        // The continuation cannot follow τ in Γ_B.
        let end = *path_vertices(&b_rose.graph, piece).last().unwrap();
        let blocked = followups.iter().all(|f| lift_with(&b_table, end, f).is_none());
        conds.push(check(
            "no-continuation",
            blocked,
            if blocked { "followup does not lift after τ in B" } else { "followup lifts after τ in B" },
        ));
        if !blocked {
            last = Some((conds, tau, followups));
            continue;
        }

        let drop_edges: BTreeSet<usize> = piece.iter().map(|&(e, _)| e).collect();
        let residual = without_edges(&b_rose.graph, &drop_edges);
        let (ok, detail) = residual_ok(&residual, reduced.as_ref(), &a_core);
        conds.push(check("residual", ok, detail));
        if ok {
            return Ok(DropReport {
                reduced: Some(without(b_gens, drop)),
                dropped: drop,
                tau: Some(tau),
                followups,
                conditions: conds,
            });
        }
        last = Some((conds, tau, followups));
    }
    let (conditions, tau, followups) = last.unwrap_or_else(|| {
        (vec![check("certificate", false, "no chain piece in petal")], Word::identity(), Vec::new())
    });
    Ok(DropReport {
        reduced: None,
        dropped: drop,
        tau: (!tau.is_empty()).then_some(tau),
        followups,
        conditions,
    })
}

fn lift_edges(table: &[Vec<Option<(usize, usize)>>], start: usize, w: &Word) -> Option<Vec<(usize, bool)>> {
    let mut v = start;
    let mut out = Vec::with_capacity(w.len());
    for l in w {
        let (u, e) = table[v][l.slot()]?;
        out.push((e, l.negative));
        v = u;
    }
    Some(out)
}

/// Letters any loop must read after traversing `path`: follow the unique
/// other edge while the current vertex has degree two.
fn forced_followup(graph: &SubgroupGraph, deg: &[usize], path: &[(usize, bool)]) -> Word {
    let Some(&(mut e, mut rev)) = path.last() else {
        return Word::identity();
    };
    let mut letters = Vec::new();
    let mut v = step_ends(&graph.edges()[e], rev).1;
    for _ in 0..graph.edges().len() {
        if deg[v] != 2 {
            break;
        }
        // The other end-slot at v.
        let next = graph.edges().iter().enumerate().find_map(|(i, ed)| {
            if i == e {
                // A loop at v uses both slots; it cannot occur at degree 2
                // together with another edge.
                return None;
            }
            if ed.source == v {
                Some((i, false))
            } else if ed.target == v {
                Some((i, true))
            } else {
                None
            }
        });
        let Some((ne, nrev)) = next else { break };
        let g = graph.edges()[ne].generator;
        letters.push(if nrev { Letter::neg(g) } else { Letter::pos(g) });
        e = ne;
        rev = nrev;
        v = step_ends(&graph.edges()[e], rev).1;
    }
    Word::reduce(letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A1: usize = 0;
    const A2: usize = 1;
    const A3: usize = 2;

    fn w(pairs: &[(usize, i8)]) -> Word {
        Word::from_signed(pairs)
    }

    #[test]
    fn disjoint_petals_are_certificates() {
        let certs = find_certificates(3, &[Word::generator(A1), Word::generator(A2)], 0).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].subword, Word::generator(A1));
        assert!(certs[0].uncancellable);
    }

    #[test]
    fn shared_prefix_is_excluded() {
        let gens = [w(&[(A1, 1), (A2, 1)]), w(&[(A1, 1), (A3, 1)])];
        let certs = find_certificates(3, &gens, 0).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].subword, Word::generator(A2));
    }

    #[test]
    fn drop_easy_removes_impossible_letter() {
        let b = SubgroupGraph::from_generators(3, &[Word::generator(A2)]).unwrap();
        let r = drop_easy(3, &[Word::generator(A1), Word::generator(A2)], 0, &b).unwrap();
        assert_eq!(r.reduced, Some(vec![Word::generator(A2)]));
        assert_eq!(r.tau, Some(Word::generator(A1)));
    }

    #[test]
    fn drop_easy_not_applicable_when_possible() {
        let b = SubgroupGraph::from_generators(3, &[Word::generator(A1)]).unwrap();
        let r = drop_easy(3, &[Word::generator(A1), Word::generator(A2)], 0, &b).unwrap();
        assert!(!r.applicable());
        assert_eq!(r.failure().unwrap().name, "impossible");
    }

    #[test]
    fn drop_hard_rejects_continuing_followup() {
        // τ = a1 lifts in both petals of A; the followup a2 also follows a1
        // in B.
        let a = [w(&[(A1, 1), (A2, 1)]), w(&[(A3, 1), (A1, 1), (A3, 1)])];
        let b = [Word::generator(A1), w(&[(A2, 1), (A3, 1)])];
        let r = drop_hard(3, &a, &b, 0).unwrap();
        assert!(!r.applicable());
        assert_eq!(r.failure().unwrap().name, "no-continuation");
    }
}
