//! Standard geometric bases of surfaces with one boundary component, their
//! boundary words, bad-subgroup tables and the Whitehead-graph test.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::automorphisms::{MoveDescriptor, MoveKind};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Orientable,
    Nonorientable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterRole {
    pub name: String,
    /// Block number `i` of `a_i`/`â_i`; 0 for `n`.
    pub block: usize,
    pub hatted: bool,
    pub one_sided: bool,
    /// Linked with the one-sided letter.
    pub linked: bool,
    /// Hat partner (`a_i ↔ â_i`).
    pub partner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub genus: usize,
    alphabet: Alphabet,
    roles: Vec<LetterRole>,
    boundary: Word,
    /// Offset of each block in the boundary word, indexed by block number.
    block_offsets: Vec<usize>,
}

impl SurfaceModel {
    pub fn new(kind: SurfaceKind, genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::RankTooSmall("genus must be at least 1".into()));
        }
        let one_sided = kind == SurfaceKind::Nonorientable;
        let alphabet = Alphabet::surface(genus, one_sided);
        let shift = one_sided as usize;
        let mut roles = Vec::with_capacity(alphabet.rank());
        if one_sided {
            roles.push(LetterRole {
                name: "n".into(),
                block: 0,
                hatted: false,
                one_sided: true,
                linked: false,
                partner: None,
            });
        }
        for i in 1..=genus {
            let hat = shift + 2 * (i - 1);
            for (idx, hatted) in [(hat, true), (hat + 1, false)] {
                roles.push(LetterRole {
                    name: alphabet.name(idx).to_string(),
                    block: i,
                    hatted,
                    one_sided: false,
                    linked: one_sided && i == 1,
                    partner: Some(if hatted { idx + 1 } else { idx - 1 }),
                });
            }
        }
        let mut model = SurfaceModel {
            kind,
            genus,
            alphabet,
            roles,
            boundary: Word::identity(),
            block_offsets: vec![0; genus + 1],
        };
        let mut letters = Vec::new();
        for i in 1..=genus {
            model.block_offsets[i] = letters.len();
            let (ha, a) = (model.ha(i), model.a(i));
            if one_sided && i == 1 {
                let n = 0;
                letters.extend([
                    Letter::pos(n),
                    Letter::pos(ha),
                    Letter::pos(a),
                    Letter::neg(ha),
                    Letter::pos(n),
                    Letter::pos(a),
                ]);
            } else {
                letters.extend([Letter::pos(ha), Letter::neg(a), Letter::neg(ha), Letter::pos(a)]);
            }
        }
        model.boundary = Word::reduce(letters);
        Ok(model)
    }

    pub fn orientable(genus: usize) -> Result<Self> {
        Self::new(SurfaceKind::Orientable, genus)
    }

    pub fn nonorientable(genus: usize) -> Result<Self> {
        Self::new(SurfaceKind::Nonorientable, genus)
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn roles(&self) -> &[LetterRole] {
        &self.roles
    }

    pub fn role(&self, letter: usize) -> &LetterRole {
        &self.roles[letter]
    }

    pub fn boundary(&self) -> &Word {
        &self.boundary
    }

    fn shift(&self) -> usize {
        (self.kind == SurfaceKind::Nonorientable) as usize
    }

    /// Index of `a_i` (1-based block).
    pub fn a(&self, i: usize) -> usize {
        self.shift() + 2 * (i - 1) + 1
    }

    /// Index of `â_i`.
    pub fn ha(&self, i: usize) -> usize {
        self.shift() + 2 * (i - 1)
    }

    /// Index of the one-sided letter.
    pub fn n(&self) -> Option<usize> {
        (self.kind == SurfaceKind::Nonorientable).then_some(0)
    }

    pub fn letter(&self, name: &str) -> Result<usize> {
        self.alphabet.index(name).ok_or_else(|| Error::UnknownLetter {
            token: name.to_string(),
            position: 0,
        })
    }

    pub fn partner(&self, letter: usize) -> Option<usize> {
        self.roles[letter].partner
    }

    /// Intersecting pairs: `(a_i, â_i)`, and `(n, a_1)`, `(n, â_1)` in the
    /// nonorientable case.
    pub fn intersecting(&self, x: usize, y: usize) -> bool {
        let (rx, ry) = (&self.roles[x], &self.roles[y]);
        rx.partner == Some(y) || (rx.one_sided && ry.linked) || (ry.one_sided && rx.linked)
    }

    /// Boundary word rotated to begin at `start`.
    pub fn rotation(&self, start: Letter) -> Result<Word> {
        cyclic_permutation(&self.boundary, start)
    }

    /// Boundary word rotated to start after block `i` (wrapping).
    pub fn rotation_after_block(&self, i: usize) -> Word {
        let offset = if i >= self.genus {
            0
        } else {
            self.block_offsets[i + 1]
        };
        self.boundary.rotate(offset)
    }

    pub fn classify(&self, m: &MoveDescriptor) -> Result<MoveCase> {
        m.validate(self.rank())?;
        let x = &self.roles[m.x];
        let x_role = if x.one_sided {
            XRole::OneSided
        } else if x.linked {
            if x.hatted {
                XRole::LinkedHatted
            } else {
                XRole::LinkedUnhatted
            }
        } else if x.hatted {
            XRole::Hatted
        } else {
            XRole::Unhatted
        };
        let y_role = match m.y {
            None => YRole::None,
            Some(y) => {
                if self.intersecting(m.x, y) {
                    return Err(Error::Unclassifiable(format!(
                        "{} and {} are an intersecting pair",
                        self.alphabet.name(m.x),
                        self.alphabet.name(y)
                    )));
                }
                let r = &self.roles[y];
                if r.one_sided || r.linked {
                    YRole::Linked
                } else {
                    YRole::General
                }
            }
        };
        let bad_combo = match (m.kind, x_role, y_role) {
            (MoveKind::Invert, XRole::Unhatted | XRole::Hatted, _) => false,
            (MoveKind::Invert, _, _) => true,
            (_, XRole::Unhatted | XRole::Hatted, _) => false,
            (_, _, YRole::General) => false,
            _ => true,
        };
        if bad_combo {
            return Err(Error::Unclassifiable(format!(
                "no table row for {:?} with x {:?} and y {:?}",
                m.kind, x_role, y_role
            )));
        }
        Ok(MoveCase {
            mv: *m,
            x_role,
            y_role,
        })
    }

    /// Generators of the bad subgroup of a basic move. The exponent of the
    /// move is ignored.
    pub fn bad_subgroup(&self, m: &MoveDescriptor) -> Result<Vec<Word>> {
        let case = self.classify(m)?;
        let table = BadSubgroupTable::builtin();
        let row = table.lookup(&case).ok_or_else(|| {
            Error::Unclassifiable(format!("no table row for {case:?}"))
        })?;
        let mut roles = Roles::new(self);
        roles.letter("x", m.x);
        if let Some(y) = m.y {
            roles.letter("y", y);
        }
        if let Some(n) = self.n() {
            roles.letter("n", n);
            roles.letter("a", self.a(1));
        }
        roles.next_block = Some(self.roles[m.x].block);
        if case.y_role == YRole::Linked {
            let y = m.y.expect("linked y");
            let key = if self.roles[y].one_sided {
                "n"
            } else if self.roles[y].hatted {
                "ha"
            } else {
                "a"
            };
            let aux = table
                .aux
                .iter()
                .find(|a| a.y == key)
                .ok_or_else(|| Error::Fixture(format!("missing aux row for y = {key}")))?;
            let g1 = roles.eval(&aux.g1)?;
            let g2 = roles.eval(&aux.g2)?;
            roles.word("g1", g1);
            roles.word("g2", g2);
        }
        row.generators.iter().map(|t| roles.eval(t)).collect()
    }
}

pub fn boundary_word(kind: SurfaceKind, genus: usize) -> Result<Word> {
    Ok(SurfaceModel::new(kind, genus)?.boundary)
}

/// Rotation of the cyclic word `d` starting at the first occurrence of the
/// signed letter `start`.
pub fn cyclic_permutation(d: &Word, start: Letter) -> Result<Word> {
    let pos = d
        .iter()
        .position(|&l| l == start)
        .ok_or(Error::LetterAbsent)?;
    Ok(d.rotate(pos))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XRole {
    Unhatted,
    Hatted,
    LinkedUnhatted,
    LinkedHatted,
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YRole {
    General,
    Linked,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCase {
    pub mv: MoveDescriptor,
    pub x_role: XRole,
    pub y_role: YRole,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TableRow {
    pub heading: String,
    #[serde(rename = "move")]
    pub kind: String,
    pub x: String,
    pub y: String,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AuxRow {
    pub y: String,
    pub g1: String,
    pub g2: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BadSubgroupTable {
    pub version: u32,
    pub row: Vec<TableRow>,
    pub aux: Vec<AuxRow>,
}

const TABLE_SOURCE: &str = include_str!("../fixtures/bad_subgroups.toml");

impl BadSubgroupTable {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Fixture(e.to_string()))
    }

    pub fn builtin() -> &'static BadSubgroupTable {
        static TABLE: OnceLock<BadSubgroupTable> = OnceLock::new();
        TABLE.get_or_init(|| BadSubgroupTable::parse(TABLE_SOURCE).expect("bundled table parses"))
    }

    pub fn lookup(&self, case: &MoveCase) -> Option<&TableRow> {
        let kind = match case.mv.kind {
            MoveKind::RightMult => "r",
            MoveKind::LeftMult => "l",
            MoveKind::Invert => "i",
        };
        let x = match case.x_role {
            XRole::Unhatted => "unhatted",
            XRole::Hatted => "hatted",
            XRole::LinkedUnhatted => "a",
            XRole::LinkedHatted => "ha",
            XRole::OneSided => "n",
        };
        let y = match case.y_role {
            YRole::General => "general",
            YRole::Linked => "linked",
            YRole::None => "none",
        };
        self.row
            .iter()
            .find(|r| r.kind == kind && r.x == x && r.y == y)
    }
}

/// Placeholder bindings for word templates. A bound letter `x` also binds
/// `hx` to its hat partner. Unbound tokens fall back to the surface
/// alphabet.
#[derive(Debug, Clone)]
pub struct Roles<'a> {
    model: &'a SurfaceModel,
    words: BTreeMap<String, Word>,
    /// Block whose end `D[next]` starts after.
    pub next_block: Option<usize>,
}

impl<'a> Roles<'a> {
    pub fn new(model: &'a SurfaceModel) -> Self {
        Roles {
            model,
            words: BTreeMap::new(),
            next_block: None,
        }
    }

    /// Binds `name`, `hname` (partner), and for two-sided letters below the
    /// last block `name+` / `hname+` (same / opposite type in the next block).
    pub fn letter(&mut self, name: &str, index: usize) {
        self.words.insert(name.to_string(), Word::generator(index));
        if let Some(p) = self.model.partner(index) {
            self.words.insert(format!("h{name}"), Word::generator(p));
        }
        let role = &self.model.roles[index];
        if !role.one_sided && role.block < self.model.genus {
            let (same, other) = if role.hatted {
                (self.model.ha(role.block + 1), self.model.a(role.block + 1))
            } else {
                (self.model.a(role.block + 1), self.model.ha(role.block + 1))
            };
            self.words.insert(format!("{name}+"), Word::generator(same));
            self.words.insert(format!("h{name}+"), Word::generator(other));
        }
    }

    pub fn word(&mut self, name: &str, w: Word) {
        self.words.insert(name.to_string(), w);
    }

    pub fn get(&self, name: &str) -> Option<&Word> {
        self.words.get(name)
    }

    fn token(&self, tok: &str, position: usize) -> Result<Word> {
        let (base, inverse) = match tok.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let w = match self.words.get(base) {
            Some(w) => w.clone(),
            None => match self.model.alphabet.index(base) {
                Some(i) => Word::generator(i),
                None => {
                    return Err(Error::UnknownLetter {
                        token: tok.to_string(),
                        position,
                    })
                }
            },
        };
        Ok(if inverse { w.inverse() } else { w })
    }

    /// Evaluates a whitespace-separated template (see the table fixture for
    /// the token grammar).
    pub fn eval(&self, text: &str) -> Result<Word> {
        let mut acc = Word::identity();
        for (position, tok) in text.split_whitespace().enumerate() {
            let w = if tok == "1" {
                Word::identity()
            } else if let Some(inner) = tok.strip_prefix("D[").and_then(|t| t.strip_suffix(']')) {
                if inner == "next" {
                    let block = self.next_block.ok_or_else(|| {
                        Error::Fixture("D[next] used without a reference block".into())
                    })?;
                    self.model.rotation_after_block(block)
                } else {
                    let start = self.token(inner, position)?;
                    if start.len() != 1 {
                        return Err(Error::Fixture(format!(
                            "rotation start `{inner}` is not a single letter"
                        )));
                    }
                    self.model.rotation(start.letters()[0])?
                }
            } else {
                self.token(tok, position)?
            };
            acc = acc.mul(&w);
        }
        Ok(acc)
    }
}

/// Whitehead graph of a cyclic word: vertex `slot(l)` per signed letter and
/// one edge `{u, v⁻¹}` for each cyclic adjacency `u·v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhiteheadGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl WhiteheadGraph {
    pub fn new(w: &Word, rank: usize) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(g) = w.max_generator() {
            if g >= rank {
                return Err(Error::GeneratorOutOfRange { generator: g, rank });
            }
        }
        let ls = w.letters();
        let edges = (0..ls.len())
            .map(|i| {
                let u = ls[i];
                let v = ls[(i + 1) % ls.len()];
                (u.slot(), v.inverse().slot())
            })
            .collect();
        Ok(WhiteheadGraph {
            vertex_count: 2 * rank,
            edges,
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    fn adjacency(&self, skip: Option<usize>) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            if Some(a) == skip || Some(b) == skip {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn connected_without(&self, skip: Option<usize>) -> bool {
        let adj = self.adjacency(skip);
        let Some(start) = (0..self.vertex_count).find(|&v| Some(v) != skip) else {
            return true;
        };
        let mut seen = vec![false; self.vertex_count];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        (0..self.vertex_count).all(|v| seen[v] || Some(v) == skip)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(None)
    }

    /// Articulation points (Hopcroft–Tarjan lowpoints).
    pub fn cut_vertices(&self) -> Vec<usize> {
        let n = self.vertex_count;
        let adj = self.adjacency(None);
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut is_cut = vec![false; n];
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent, next neighbour index)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
                if *next < adj[v].len() {
                    let u = adj[v][*next];
                    *next += 1;
                    if disc[u] == usize::MAX {
                        disc[u] = timer;
                        low[u] = timer;
                        timer += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((u, v, 0));
                    } else if u != parent {
                        low[v] = low[v].min(disc[u]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if parent != root && low[v] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    /// Every vertex has an edge, the graph is connected, and no vertex
    /// disconnects it.
    pub fn passes(&self) -> bool {
        (0..self.vertex_count).all(|v| self.degree(v) > 0)
            && self.is_connected()
            && self.cut_vertices().is_empty()
    }
}

/// True iff the cyclic reduction of `w` has a connected Whitehead graph on
/// all `2·rank` vertices with no cut vertex.
pub fn whitehead_no_cut_vertex(w: &Word, rank: usize) -> Result<bool> {
    let (core, _) = w.cyclic_reduce();
    Ok(WhiteheadGraph::new(&core, rank)?.passes())
}
