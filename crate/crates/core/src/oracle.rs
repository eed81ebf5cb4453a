//! Brute-force check of conjugacy intersections.
//!
//! Subgroups are folded again here by a plain quadratic procedure that shares
//! no code with [`crate::stallings`]. A cyclically reduced word lies in both
//! subgroups up to conjugacy iff it reads a closed path in both naive graphs;
//! the intersection result must trace a loop for exactly those words. Words
//! are enumerated depth first, pruning a prefix only when no extension can
//! lie in both subgroups and no extension lifts to the intersection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::stallings::{conjugacy_intersection, IntersectionResult, SubgroupGraph};
use crate::words::{Letter, Word};

/// Folded graph of a subgroup, built without union-find or worklists.
#[derive(Debug, Clone)]
pub struct NaiveGraph {
    rank: usize,
    vertex_count: usize,
    /// `(source, target, generator)`.
    edges: Vec<(usize, usize, usize)>,
}

impl NaiveGraph {
    pub fn fold(rank: usize, gens: &[Word]) -> Self {
        let mut edges = Vec::new();
        let mut next_vertex = 1;
        for w in gens.iter().filter(|w| !w.is_empty()) {
            let mut v = 0;
            for (i, l) in w.iter().enumerate() {
                let u = if i + 1 == w.len() {
                    0
                } else {
                    next_vertex += 1;
                    next_vertex - 1
                };
                if l.negative {
                    edges.push((u, v, l.generator));
                } else {
                    edges.push((v, u, l.generator));
                }
                v = u;
            }
        }
        loop {
            let mut found = None;
            'scan: for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    let (e, f) = (edges[i], edges[j]);
                    if e.2 != f.2 {
                        continue;
                    }
                    if e.0 == f.0 {
                        found = Some((e.1, f.1, j));
                        break 'scan;
                    }
                    if e.1 == f.1 {
                        found = Some((e.0, f.0, j));
                        break 'scan;
                    }
                }
            }
            let Some((keep, gone, j)) = found else { break };
            edges.remove(j);
            if keep != gone {
                for e in &mut edges {
                    if e.0 == gone {
                        e.0 = keep;
                    }
                    if e.1 == gone {
                        e.1 = keep;
                    }
                }
            }
        }
        NaiveGraph {
            rank,
            vertex_count: next_vertex,
            edges,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn table(&self) -> Vec<Vec<Option<usize>>> {
        let mut t = vec![vec![None; 2 * self.rank]; self.vertex_count];
        for &(s, e, g) in &self.edges {
            t[s][Letter::pos(g).slot()] = Some(e);
            t[e][Letter::neg(g).slot()] = Some(s);
        }
        t
    }

    /// Whether `w` reads a closed path at some vertex.
    pub fn has_loop(&self, w: &Word) -> bool {
        let t = self.table();
        (0..self.vertex_count).any(|v| {
            let mut cur = Some(v);
            for l in w {
                cur = cur.and_then(|c| t[c][l.slot()]);
            }
            cur == Some(v)
        })
    }
}

/// Lifting state of a prefix in one graph: all `(start, current)` pairs.
struct Tracker {
    table: Vec<Vec<Option<usize>>>,
    states: Vec<Vec<(usize, usize)>>,
}

impl Tracker {
    fn new(table: Vec<Vec<Option<usize>>>) -> Self {
        let start = (0..table.len())
            .filter(|&v| table[v].iter().any(Option::is_some))
            .map(|v| (v, v))
            .collect();
        Tracker {
            table,
            states: vec![start],
        }
    }

    fn push(&mut self, l: Letter) {
        let top = self.states.last().expect("tracker has a base state");
        let next = top
            .iter()
            .filter_map(|&(s, c)| self.table[c][l.slot()].map(|d| (s, d)))
            .collect();
        self.states.push(next);
    }

    fn pop(&mut self) {
        self.states.pop();
    }

    fn alive(&self) -> bool {
        !self.states.last().map_or(true, Vec::is_empty)
    }

    fn closed(&self) -> bool {
        self.states.last().map_or(false, |s| s.iter().any(|&(a, b)| a == b))
    }
}

fn stallings_table(g: &SubgroupGraph) -> Vec<Vec<Option<usize>>> {
    g.neighbour_table()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.map(|(v, _)| v)).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    /// Components of the checked intersection.
    pub components: usize,
    pub words_checked: u64,
    /// Words on which the intersection and the brute-force test disagree;
    /// at most ten are kept.
    pub disagreements: Vec<Word>,
    pub disagreement_count: u64,
}

impl PairCheck {
    pub fn agrees(&self) -> bool {
        self.disagreement_count == 0
    }
}

/// Compares `result` against brute force for all cyclically reduced words of
/// length at most `max_len`.
pub fn check_result(
    rank: usize,
    a: &[Word],
    b: &[Word],
    result: &IntersectionResult,
    max_len: usize,
) -> PairCheck {
    let mut ta = Tracker::new(NaiveGraph::fold(rank, a).table());
    let mut tb = Tracker::new(NaiveGraph::fold(rank, b).table());
    let mut tc: Vec<Tracker> = result
        .components
        .iter()
        .map(|c| Tracker::new(stallings_table(&c.graph)))
        .collect();
    let mut out = PairCheck {
        components: result.components.len(),
        words_checked: 0,
        disagreements: Vec::new(),
        disagreement_count: 0,
    };
    let mut prefix = Vec::with_capacity(max_len);
    dfs(rank, max_len, &mut prefix, &mut ta, &mut tb, &mut tc, &mut out);
    out
}

fn dfs(
    rank: usize,
    max_len: usize,
    prefix: &mut Vec<Letter>,
    ta: &mut Tracker,
    tb: &mut Tracker,
    tc: &mut [Tracker],
    out: &mut PairCheck,
) {
    if let (Some(&first), Some(&last)) = (prefix.first(), prefix.last()) {
        if !first.cancels(last) {
            out.words_checked += 1;
            let both = ta.closed() && tb.closed();
            let traced = tc.iter().any(Tracker::closed);
            if both != traced {
                out.disagreement_count += 1;
                if out.disagreements.len() < 10 {
                    out.disagreements.push(Word::reduce(prefix.iter().copied()));
                }
            }
        }
    }
    if prefix.len() == max_len {
        return;
    }
    for slot in 0..2 * rank {
        let l = Letter::from_slot(slot);
        if prefix.last().is_some_and(|&p| p.cancels(l)) {
            continue;
        }
        ta.push(l);
        tb.push(l);
        for t in tc.iter_mut() {
            t.push(l);
        }
        let may_be_both = ta.alive() && tb.alive();
        let may_trace = tc.iter().any(Tracker::alive);
        prefix.push(l);
        if may_be_both || may_trace {
            dfs(rank, max_len, prefix, ta, tb, tc, out);
        }
        prefix.pop();
        ta.pop();
        tb.pop();
        for t in tc.iter_mut() {
            t.pop();
        }
    }
}

/// Builds both subgroup graphs, intersects them and checks the result.
pub fn check_pair(rank: usize, a: &[Word], b: &[Word], max_len: usize) -> Result<PairCheck> {
    let ga = SubgroupGraph::from_generators(rank, a)?;
    let gb = SubgroupGraph::from_generators(rank, b)?;
    let result = conjugacy_intersection(&ga, &gb);
    Ok(check_result(rank, a, b, &result, max_len))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OraclePair {
    pub rank: usize,
    pub a: Vec<Word>,
    pub b: Vec<Word>,
}

/// A random nontrivial word of length 1 to `max_len` after reduction.
pub fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    loop {
        let len = rng.gen_range(1..=max_len);
        let w = Word::reduce((0..len).map(|_| Letter::new(rng.gen_range(0..rank), if rng.gen() { 1 } else { -1 })));
        if !w.is_empty() {
            return w;
        }
    }
}

/// Ambient rank 2 to 4, each side 1 to 3 generators of length at most 5.
pub fn random_pair<R: Rng>(rng: &mut R) -> OraclePair {
    let rank = rng.gen_range(2..=4);
    let side = |rng: &mut R| {
        let k = rng.gen_range(1..=3);
        (0..k).map(|_| random_word(rng, rank, 5)).collect::<Vec<_>>()
    };
    let a = side(rng);
    let b = side(rng);
    OraclePair { rank, a, b }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleFailure {
    pub pair: OraclePair,
    pub check: PairCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub samples: usize,
    pub max_len: usize,
    pub seed: u64,
    pub words_checked: u64,
    /// Pairs whose intersection is nontrivial.
    pub nontrivial: usize,
    pub agreeing: usize,
    pub failures: Vec<OracleFailure>,
}

impl OracleSummary {
    pub fn all_agree(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `samples` random pairs drawn from `seed`.
pub fn run_oracle(samples: usize, max_len: usize, seed: u64) -> Result<OracleSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<OraclePair> = (0..samples).map(|_| random_pair(&mut rng)).collect();
    let checks: Vec<Result<PairCheck>> = std::thread::scope(|scope| {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
        let chunk = pairs.len().div_ceil(workers).max(1);
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|p| check_pair(p.rank, &p.a, &p.b, max_len))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("oracle worker panicked"))
            .collect()
    });
    let mut summary = OracleSummary {
        samples,
        max_len,
        seed,
        words_checked: 0,
        nontrivial: 0,
        agreeing: 0,
        failures: Vec::new(),
    };
    for (pair, check) in pairs.into_iter().zip(checks) {
        let check = check?;
        summary.words_checked += check.words_checked;
        summary.nontrivial += (check.components > 0) as usize;
        if check.agrees() {
            summary.agreeing += 1;
        } else {
            summary.failures.push(OracleFailure { pair, check });
        }
    }
    Ok(summary)
}
