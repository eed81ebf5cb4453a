//! Relations among basic moves, with the per-step intersection checks run
//! against bad subgroups, short-relation conjugations and the algebraic
//! side of containment relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::automorphisms::{parse_moves_with, product, Automorphism, Convention, MoveDescriptor};
use crate::certificates::{drop_easy, drop_hard, ConditionCheck};
use crate::error::{Error, Result};
use crate::stallings::{
    conjugacy_intersection, conjugate_into, cores_isomorphic, IntersectionResult, SubgroupGraph,
};
use crate::surfaces::{whitehead_no_cut_vertex, Roles, SurfaceKind, SurfaceModel};
use crate::words::{AbelianVector, Alphabet, IntegerLattice, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    Trivial,
    Cyclic,
    Subgroup,
    AtMost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimSource {
    /// Exact value written next to the argument.
    Stated,
    /// Upper bound written next to the argument.
    StatedBound,
    /// Transcribed by analogy with a worked case.
    Inferred,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    WithinAtMost,
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "match",
            Verdict::WithinAtMost => "within-at-most",
            Verdict::Mismatch => "mismatch",
        })
    }
}

// ---------------------------------------------------------------------------
// Fixtures

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimFixture {
    pub claim: ClaimKind,
    #[serde(default)]
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFixture {
    pub label: String,
    pub claim: ClaimKind,
    #[serde(default)]
    pub generators: Vec<String>,
    pub source: ClaimSource,
    pub sharper: Option<ClaimFixture>,
    pub stated_bad: Option<Vec<String>>,
    /// Variant the written lists refer to; absent means every variant.
    pub written_for: Option<String>,
    #[serde(default)]
    pub drops: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantFixture {
    pub name: String,
    pub relation: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFixture {
    pub id: String,
    pub kind: SurfaceKind,
    pub genus: usize,
    pub min_genus: usize,
    pub separation: String,
    pub roles: BTreeMap<String, String>,
    pub target: String,
    pub stated_b: Option<Vec<String>>,
    pub variant: Vec<VariantFixture>,
    pub step: Vec<StepFixture>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseFile {
    version: u32,
    case: Vec<CaseFixture>,
}

/// A known discrepancy with its resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerEntry {
    pub case: String,
    pub kind: String,
    pub step: Option<String>,
    pub variant: Option<String>,
    pub note: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LedgerFile {
    version: u32,
    #[serde(default)]
    entry: Vec<LedgerEntry>,
}

pub fn parse_cases(text: &str) -> Result<Vec<CaseFixture>> {
    let file: CaseFile = toml::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
    if file.version != 1 {
        return Err(Error::Fixture(format!("unsupported case file version {}", file.version)));
    }
    Ok(file.case)
}

pub fn parse_ledger(text: &str) -> Result<Vec<LedgerEntry>> {
    let file: LedgerFile = toml::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
    if file.version != 1 {
        return Err(Error::Fixture(format!("unsupported ledger version {}", file.version)));
    }
    Ok(file.entry)
}

pub fn builtin_cases() -> &'static [CaseFixture] {
    static CASES: OnceLock<Vec<CaseFixture>> = OnceLock::new();
    CASES.get_or_init(|| {
        parse_cases(include_str!("../fixtures/cases.toml")).expect("built-in case fixture parses")
    })
}

pub fn builtin_ledger() -> &'static [LedgerEntry] {
    static LEDGER: OnceLock<Vec<LedgerEntry>> = OnceLock::new();
    LEDGER.get_or_init(|| {
        parse_ledger(include_str!("../fixtures/ledger.toml")).expect("built-in ledger parses")
    })
}

pub fn case_ids() -> Vec<&'static str> {
    builtin_cases().iter().map(|c| c.id.as_str()).collect()
}

pub fn case_fixture(id: &str) -> Result<&'static CaseFixture> {
    builtin_cases()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCase(id.to_string()))
}

/// The surface a case is instantiated on by default.
pub fn default_model(id: &str) -> Result<SurfaceModel> {
    let f = case_fixture(id)?;
    SurfaceModel::new(f.kind, f.genus)
}

/// Surface of the case's kind with the given rank.
pub fn model_for_rank(id: &str, rank: usize) -> Result<SurfaceModel> {
    let f = case_fixture(id)?;
    let genus = match f.kind {
        SurfaceKind::Orientable if rank % 2 == 0 => rank / 2,
        SurfaceKind::Nonorientable if rank % 2 == 1 => rank / 2,
        _ => {
            return Err(Error::RankTooSmall(format!(
                "rank {rank} is not the rank of a {:?} surface with one boundary component",
                f.kind
            )))
        }
    };
    SurfaceModel::new(f.kind, genus)
}

// ---------------------------------------------------------------------------
// Templates

/// A basic move, optionally conjugated: the automorphism is `c⁻¹ ∘ φ ∘ c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub mv: MoveDescriptor,
    pub conjugator: Option<Automorphism>,
}

impl Factor {
    pub fn basic(mv: MoveDescriptor) -> Self {
        Factor { mv, conjugator: None }
    }

    pub fn automorphism(&self, rank: usize) -> Result<Automorphism> {
        let b = Automorphism::basic(rank, &self.mv)?;
        Ok(match &self.conjugator {
            None => b,
            Some(c) => c.inverse().compose(&b).compose(c),
        })
    }

    pub fn bad_subgroup(&self, model: &SurfaceModel) -> Result<Vec<Word>> {
        let gens = model.bad_subgroup(&self.mv)?;
        Ok(match &self.conjugator {
            None => gens,
            Some(c) => gens.iter().map(|w| c.apply_inverse(w)).collect(),
        })
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        match &self.conjugator {
            None => self.mv.format(alphabet),
            Some(_) => format!("conj[{}]", self.mv.format(alphabet)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedIntersection {
    pub kind: ClaimKind,
    pub generators: Vec<Word>,
    /// Role-level spelling of the generators.
    pub templates: Vec<String>,
}

impl ExpectedIntersection {
    pub fn trivial() -> Self {
        ExpectedIntersection {
            kind: ClaimKind::Trivial,
            generators: Vec::new(),
            templates: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    Easy,
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The factor's bad subgroup.
    Bad,
    /// The translated target bad subgroup.
    Translated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropStep {
    pub lemma: Lemma,
    pub side: Side,
    pub generator: usize,
}

impl DropStep {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Fixture(format!("malformed drop `{text}`"));
        let parts: Vec<&str> = text.split_whitespace().collect();
        let [lemma, side, generator] = parts.as_slice() else {
            return Err(bad());
        };
        let lemma = match *lemma {
            "easy" => Lemma::Easy,
            "hard" => Lemma::Hard,
            _ => return Err(bad()),
        };
        let side = match *side {
            "bad" => Side::Bad,
            "translated" => Side::Translated,
            _ => return Err(bad()),
        };
        let generator = generator.parse().map_err(|_| bad())?;
        Ok(DropStep { lemma, side, generator })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedStep {
    pub label: String,
    pub claim: ExpectedIntersection,
    pub source: ClaimSource,
    pub sharper: Option<ExpectedIntersection>,
    pub stated_bad: Option<Vec<Word>>,
    pub written_for: Option<String>,
    pub drops: Vec<DropStep>,
}

impl ExpectedStep {
    /// Neutral one-line statement of the claim in role notation.
    pub fn claim_text(&self) -> String {
        let body = match self.claim.kind {
            ClaimKind::Trivial => "trivial".to_string(),
            ClaimKind::Cyclic => format!("cyclic <{}>", self.claim.templates.join(", ")),
            ClaimKind::Subgroup => format!("subgroup <{}>", self.claim.templates.join(", ")),
            ClaimKind::AtMost => format!("at most <{}>", self.claim.templates.join(", ")),
        };
        let source = match self.source {
            ClaimSource::Stated => "stated",
            ClaimSource::StatedBound => "stated bound",
            ClaimSource::Inferred => "inferred by analogy",
        };
        format!("{}) {} [{}]", self.label, body, source)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTemplate {
    pub case: String,
    pub variant: String,
    pub model: SurfaceModel,
    pub target: MoveDescriptor,
    /// Leftmost first; the rightmost factor acts first.
    pub factors: Vec<Factor>,
    pub steps: Vec<ExpectedStep>,
    pub stated_b: Option<Vec<Word>>,
    /// Role name to basis letter.
    pub roles: BTreeMap<String, usize>,
}

impl RelationTemplate {
    pub fn rank(&self) -> usize {
        self.model.rank()
    }

    /// Template with a single factor equal to the target and no step claims.
    pub fn singleton(model: &SurfaceModel, target: MoveDescriptor) -> Self {
        RelationTemplate {
            case: "singleton".into(),
            variant: "singleton".into(),
            model: model.clone(),
            target,
            factors: vec![Factor::basic(target)],
            steps: Vec::new(),
            stated_b: None,
            roles: BTreeMap::new(),
        }
    }

    pub fn relation_text(&self) -> String {
        let a = self.model.alphabet();
        self.factors.iter().map(|f| f.format(a)).collect::<Vec<_>>().join(" ")
    }

    pub fn factor_automorphisms(&self) -> Result<Vec<Automorphism>> {
        self.factors.iter().map(|f| f.automorphism(self.rank())).collect()
    }

    pub fn target_bad_subgroup(&self) -> Result<Vec<Word>> {
        self.model.bad_subgroup(&self.target)
    }
}

fn bind_roles<'a>(f: &CaseFixture, model: &'a SurfaceModel) -> Result<(Roles<'a>, BTreeMap<String, usize>)> {
    let mut roles = Roles::new(model);
    let mut bound = BTreeMap::new();
    if let Some(n) = model.n() {
        roles.letter("n", n);
        roles.letter("a", model.a(1));
    }
    for (role, letter) in &f.roles {
        let idx = model.letter(letter)?;
        if let Some((other, _)) = bound.iter().find(|(_, &v)| v == idx) {
            return Err(Error::RoleCollision(format!("{role} and {other} are both {letter}")));
        }
        roles.letter(role, idx);
        bound.insert(role.clone(), idx);
    }
    Ok((roles, bound))
}

fn resolve_role(roles: &Roles<'_>, name: &str) -> Option<usize> {
    let w = roles.get(name)?;
    match w.letters() {
        [l] if !l.negative => Some(l.generator),
        _ => None,
    }
}

fn eval_all(roles: &Roles<'_>, templates: &[String]) -> Result<Vec<Word>> {
    templates.iter().map(|t| roles.eval(t)).collect()
}

fn expected(roles: &Roles<'_>, kind: ClaimKind, templates: &[String]) -> Result<ExpectedIntersection> {
    let generators = eval_all(roles, templates)?;
    let ok = match kind {
        ClaimKind::Trivial => generators.is_empty(),
        ClaimKind::Cyclic => generators.len() == 1,
        ClaimKind::Subgroup | ClaimKind::AtMost => !generators.is_empty(),
    };
    if !ok || generators.iter().any(Word::is_empty) {
        return Err(Error::Fixture(format!("claim {kind:?} has generators {templates:?}")));
    }
    Ok(ExpectedIntersection {
        kind,
        generators,
        templates: templates.to_vec(),
    })
}

/// All relation variants of a case, in fixture order.
pub fn case_variants(id: &str, model: &SurfaceModel) -> Result<Vec<RelationTemplate>> {
    let f = case_fixture(id)?;
    instantiate(f, model)
}

/// Instantiates a case fixture on `model`.
pub fn instantiate(f: &CaseFixture, model: &SurfaceModel) -> Result<Vec<RelationTemplate>> {
    if model.kind != f.kind {
        return Err(Error::Fixture(format!(
            "case {} needs a {:?} surface, got {:?}",
            f.id, f.kind, model.kind
        )));
    }
    if model.genus < f.min_genus {
        let min_rank = match f.kind {
            SurfaceKind::Orientable => 2 * f.min_genus,
            SurfaceKind::Nonorientable => 2 * f.min_genus + 1,
        };
        return Err(Error::RankTooSmall(format!(
            "case {} needs genus at least {} (rank at least {min_rank}): {}",
            f.id, f.min_genus, f.separation
        )));
    }
    let (roles, bound) = bind_roles(f, model)?;
    let resolve = |name: &str| resolve_role(&roles, name);
    let target = match parse_moves_with(&f.target, resolve)?.as_slice() {
        [m] => *m,
        _ => return Err(Error::Fixture(format!("case {} target must be one move", f.id))),
    };
    let mut steps = Vec::with_capacity(f.step.len());
    for s in &f.step {
        steps.push(ExpectedStep {
            label: s.label.clone(),
            claim: expected(&roles, s.claim, &s.generators)?,
            source: s.source,
            sharper: s
                .sharper
                .as_ref()
                .map(|c| expected(&roles, c.claim, &c.generators))
                .transpose()?,
            stated_bad: s.stated_bad.as_ref().map(|t| eval_all(&roles, t)).transpose()?,
            written_for: s.written_for.clone(),
            drops: s.drops.iter().map(|d| DropStep::parse(d)).collect::<Result<_>>()?,
        });
    }
    let stated_b = f.stated_b.as_ref().map(|t| eval_all(&roles, t)).transpose()?;
    let mut out = Vec::with_capacity(f.variant.len());
    for v in &f.variant {
        let moves = parse_moves_with(&v.relation, resolve)?;
        if moves.len() != steps.len() {
            return Err(Error::Fixture(format!(
                "case {} variant {}: {} factors but {} steps",
                f.id,
                v.name,
                moves.len(),
                steps.len()
            )));
        }
        for m in &moves {
            m.validate(model.rank())?;
        }
        out.push(RelationTemplate {
            case: f.id.clone(),
            variant: v.name.clone(),
            model: model.clone(),
            target,
            factors: moves.into_iter().map(Factor::basic).collect(),
            steps: steps.clone(),
            stated_b: stated_b.clone(),
            roles: bound.clone(),
        });
    }
    Ok(out)
}

/// The first listed variant of a case.
pub fn case_template(id: &str, model: &SurfaceModel) -> Result<RelationTemplate> {
    case_variants(id, model)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Fixture(format!("case {id} has no variants")))
}

// ---------------------------------------------------------------------------
// Composition

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub ok: bool,
    pub convention: Convention,
    /// Whether the other convention yields the target.
    pub other_convention_ok: bool,
    /// Letters on which the product and the target disagree.
    pub differing_letters: Vec<String>,
    /// Images of the product when it differs from the target.
    pub product_images: Vec<String>,
}

pub fn relation_product(t: &RelationTemplate, convention: Convention) -> Result<Automorphism> {
    Ok(product(t.rank(), &t.factor_automorphisms()?, convention))
}

/// True iff the rightmost-first product of the factors is the target move.
pub fn verify_composition(t: &RelationTemplate) -> Result<bool> {
    Ok(composition_report(t, Convention::RightmostFirst)?.ok)
}

pub fn composition_report(t: &RelationTemplate, convention: Convention) -> Result<CompositionReport> {
    let target = Automorphism::basic(t.rank(), &t.target)?;
    let p = relation_product(t, convention)?;
    let q = relation_product(t, convention.other())?;
    let a = t.model.alphabet();
    let ok = p == target;
    let differing_letters = (0..t.rank())
        .filter(|&i| p.image(i) != target.image(i))
        .map(|i| a.name(i).to_string())
        .collect();
    let product_images = if ok {
        Vec::new()
    } else {
        (0..t.rank())
            .map(|i| format!("{} -> {}", a.name(i), a.format_word(p.image(i))))
            .collect()
    };
    Ok(CompositionReport {
        ok,
        convention,
        other_convention_ok: q == target,
        differing_letters,
        product_images,
    })
}

/// Conjugates every factor by `c`: the new product is `c⁻¹ ∘ (old) ∘ c`.
pub fn conjugate_relation(t: &RelationTemplate, c: &Automorphism) -> RelationTemplate {
    let mut out = t.clone();
    for f in &mut out.factors {
        f.conjugator = Some(match &f.conjugator {
            None => c.clone(),
            Some(k) => k.compose(c),
        });
    }
    out
}

// ---------------------------------------------------------------------------
// Steps

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimJson {
    pub kind: ClaimKind,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub rank: usize,
    pub generators: Vec<String>,
}

/// One dropping reduction attempted inside a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortcutRecord {
    pub lemma: Lemma,
    pub side: Side,
    pub generator: usize,
    pub word: String,
    pub applicable: bool,
    pub failed_condition: Option<String>,
    pub tau: Option<String>,
    pub followups: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub index: usize,
    pub label: String,
    pub factor: String,
    pub claim_quote: String,
    pub claim: ClaimJson,
    pub source: ClaimSource,
    pub verdict: Verdict,
    /// Every computed class conjugates into the claimed group.
    pub within_claim: bool,
    pub computed_components: Vec<ComponentJson>,
    pub sharper: Option<ClaimJson>,
    pub sharper_verdict: Option<Verdict>,
    pub bad_subgroup: Vec<String>,
    pub translated_b: Vec<String>,
    pub certificates_used: Vec<ShortcutRecord>,
    /// Whether the intersection after the applicable reductions agrees with
    /// the direct one; absent when no reduction is listed.
    pub shortcut_agrees: Option<bool>,
}

fn claim_json(alphabet: &Alphabet, claim: &ExpectedIntersection) -> ClaimJson {
    ClaimJson {
        kind: claim.kind,
        generators: claim.generators.iter().map(|w| alphabet.format_word(w)).collect(),
    }
}

fn components_json(alphabet: &Alphabet, r: &IntersectionResult) -> Vec<ComponentJson> {
    r.components
        .iter()
        .map(|c| ComponentJson {
            rank: c.rank,
            generators: c.generators.iter().map(|w| alphabet.format_word(w)).collect(),
        })
        .collect()
}

fn graph_or_none(rank: usize, gens: &[Word]) -> Result<Option<SubgroupGraph>> {
    match SubgroupGraph::from_generators(rank, gens) {
        Ok(g) => Ok(Some(g)),
        Err(Error::TrivialSubgroup) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Conjugacy intersection of two finitely generated subgroups given by
/// generators. Empty generator lists give the trivial group.
pub fn intersect_gens(rank: usize, a: &[Word], b: &[Word]) -> Result<IntersectionResult> {
    match (graph_or_none(rank, a)?, graph_or_none(rank, b)?) {
        (Some(ga), Some(gb)) => Ok(conjugacy_intersection(&ga, &gb)),
        _ => Ok(IntersectionResult { components: Vec::new() }),
    }
}

/// Compares one conjugacy-intersection result with a claim. Components are
/// connected cores; a claimed group matches when one component is its core
/// and every component conjugates into it.
pub fn evaluate(rank: usize, claim: &ExpectedIntersection, components: &[SubgroupGraph]) -> Result<Verdict> {
    if claim.kind == ClaimKind::Trivial {
        return Ok(if components.is_empty() {
            Verdict::Match
        } else {
            Verdict::Mismatch
        });
    }
    let expected = SubgroupGraph::from_generators(rank, &claim.generators)?.core();
    let all_inside = components.iter().all(|c| conjugate_into(c, &expected));
    Ok(match claim.kind {
        ClaimKind::AtMost => {
            if all_inside {
                Verdict::WithinAtMost
            } else {
                Verdict::Mismatch
            }
        }
        _ => {
            let hit = components.iter().any(|c| cores_isomorphic(&c.core(), &expected));
            if hit && all_inside {
                Verdict::Match
            } else {
                Verdict::Mismatch
            }
        }
    })
}

/// Whether every component conjugates into the claimed group.
pub fn within_claim(rank: usize, claim: &ExpectedIntersection, components: &[SubgroupGraph]) -> Result<bool> {
    if claim.kind == ClaimKind::Trivial {
        return Ok(components.is_empty());
    }
    let expected = SubgroupGraph::from_generators(rank, &claim.generators)?.core();
    Ok(components.iter().all(|c| conjugate_into(c, &expected)))
}

fn component_cores(r: &IntersectionResult) -> Vec<SubgroupGraph> {
    r.components.iter().map(|c| c.graph.core()).collect()
}

/// `B` pulled back through the first `i - 1` factors:
/// `(φ_1 ∘ … ∘ φ_{i-1})⁻¹ B`.
pub fn translated_b(t: &RelationTemplate, i: usize, convention: Convention) -> Result<Vec<Word>> {
    check_step(t, i)?;
    let autos = t.factor_automorphisms()?;
    let prefix = product(t.rank(), &autos[..i - 1], convention);
    Ok(t.target_bad_subgroup()?.iter().map(|w| prefix.apply_inverse(w)).collect())
}

fn check_step(t: &RelationTemplate, i: usize) -> Result<()> {
    if i == 0 || i > t.factors.len() {
        return Err(Error::StepOutOfRange {
            step: i,
            count: t.factors.len(),
        });
    }
    Ok(())
}

/// The raw intersection of step `i` (1-based).
pub fn step_components(t: &RelationTemplate, i: usize, convention: Convention) -> Result<IntersectionResult> {
    check_step(t, i)?;
    let bad = t.factors[i - 1].bad_subgroup(&t.model)?;
    let tb = translated_b(t, i, convention)?;
    intersect_gens(t.rank(), &bad, &tb)
}

/// Same intersection computed forward: `φ_1…φ_{i-1}(B_i) ∩ B`, with each
/// component pulled back by the prefix.
pub fn forward_step_components(
    t: &RelationTemplate,
    i: usize,
    convention: Convention,
) -> Result<IntersectionResult> {
    check_step(t, i)?;
    let autos = t.factor_automorphisms()?;
    let prefix = product(t.rank(), &autos[..i - 1], convention);
    let bad: Vec<Word> = t.factors[i - 1]
        .bad_subgroup(&t.model)?
        .iter()
        .map(|w| prefix.apply(w))
        .collect();
    let forward = intersect_gens(t.rank(), &bad, &t.target_bad_subgroup()?)?;
    let mut components = Vec::with_capacity(forward.components.len());
    for c in forward.components {
        let gens: Vec<Word> = c.generators.iter().map(|w| prefix.apply_inverse(w)).collect();
        let graph = SubgroupGraph::from_generators(t.rank(), &gens)?.core();
        components.push(crate::stallings::IntersectionComponent {
            rank: graph.rank(),
            generators: graph.generators(),
            graph,
        });
    }
    Ok(IntersectionResult { components })
}

/// Steps `i` and `n + 1 - i` whose factors are mutually inverse basic
/// moves, as are all factors outside them. When the relation composes, the
/// later intersection is the image of the earlier one under the later factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorCheck {
    pub steps: String,
    pub components_agree: bool,
    /// Whether the later claim is the image of the earlier one; absent when
    /// either claim is only a bound.
    pub claims_agree: Option<bool>,
}

fn image_result(rank: usize, r: &IntersectionResult, phi: &Automorphism) -> Result<IntersectionResult> {
    let mut components = Vec::with_capacity(r.components.len());
    for c in &r.components {
        let gens: Vec<Word> = c.generators.iter().map(|w| phi.apply(w)).collect();
        let graph = SubgroupGraph::from_generators(rank, &gens)?.core();
        components.push(crate::stallings::IntersectionComponent {
            rank: graph.rank(),
            generators: graph.generators(),
            graph,
        });
    }
    Ok(IntersectionResult { components })
}

fn claims_agree(rank: usize, earlier: &ExpectedIntersection, later: &ExpectedIntersection, phi: &Automorphism) -> Result<Option<bool>> {
    if earlier.kind == ClaimKind::AtMost || later.kind == ClaimKind::AtMost {
        return Ok(None);
    }
    match (earlier.kind == ClaimKind::Trivial, later.kind == ClaimKind::Trivial) {
        (true, true) => return Ok(Some(true)),
        (true, false) | (false, true) => return Ok(Some(false)),
        _ => {}
    }
    let image: Vec<Word> = earlier.generators.iter().map(|w| phi.apply(w)).collect();
    let a = SubgroupGraph::from_generators(rank, &image)?.core();
    let b = SubgroupGraph::from_generators(rank, &later.generators)?.core();
    Ok(Some(cores_isomorphic(&a, &b)))
}

pub fn mirror_checks(t: &RelationTemplate, convention: Convention) -> Result<Vec<MirrorCheck>> {
    let n = t.factors.len();
    let rank = t.rank();
    let mut out = Vec::new();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let (fi, fj) = (&t.factors[i], &t.factors[j]);
        if fi.conjugator.is_some() || fj.conjugator.is_some() || fi.mv.inverse() != fj.mv {
            break;
        }
        let phi = fj.automorphism(rank)?;
        let earlier = step_components(t, i + 1, convention)?;
        let later = step_components(t, j + 1, convention)?;
        let predicted = image_result(rank, &earlier, &phi)?;
        let label = |k: usize| t.steps.get(k).map(|s| s.label.clone()).unwrap_or_else(|| (k + 1).to_string());
        let claims = match (t.steps.get(i), t.steps.get(j)) {
            (Some(a), Some(b)) => claims_agree(rank, &a.claim, &b.claim, &phi)?,
            _ => None,
        };
        out.push(MirrorCheck {
            steps: format!("{}/{}", label(i), label(j)),
            components_agree: crate::stallings::same_components(&predicted, &later),
            claims_agree: claims,
        });
    }
    Ok(out)
}

fn run_drops(
    t: &RelationTemplate,
    bad: &[Word],
    translated: &[Word],
    drops: &[DropStep],
    direct: &IntersectionResult,
) -> Result<(Vec<ShortcutRecord>, Option<bool>)> {
    if drops.is_empty() {
        return Ok((Vec::new(), None));
    }
    let rank = t.rank();
    let a = t.model.alphabet();
    let mut lists = [bad.to_vec(), translated.to_vec()];
    let mut ids: [Vec<usize>; 2] = [(0..bad.len()).collect(), (0..translated.len()).collect()];
    let mut records = Vec::with_capacity(drops.len());
    for d in drops {
        let (own, other) = match d.side {
            Side::Bad => (0, 1),
            Side::Translated => (1, 0),
        };
        let word = match d.side {
            Side::Bad => bad.get(d.generator),
            Side::Translated => translated.get(d.generator),
        }
        .ok_or_else(|| Error::Fixture(format!("drop index {} out of range", d.generator)))?;
        let mut record = ShortcutRecord {
            lemma: d.lemma,
            side: d.side,
            generator: d.generator,
            word: a.format_word(word),
            applicable: false,
            failed_condition: None,
            tau: None,
            followups: Vec::new(),
        };
        let Some(pos) = ids[own].iter().position(|&k| k == d.generator) else {
            record.failed_condition = Some("generator already dropped".into());
            records.push(record);
            continue;
        };
        let report = match d.lemma {
            Lemma::Easy => match graph_or_none(rank, &lists[other])? {
                Some(g) => drop_easy(rank, &lists[own], pos, &g)?,
                None => {
                    record.applicable = true;
                    lists[own].remove(pos);
                    ids[own].remove(pos);
                    records.push(record);
                    continue;
                }
            },
            Lemma::Hard => drop_hard(rank, &lists[other], &lists[own], pos)?,
        };
        record.tau = report.tau.as_ref().map(|w| a.format_word(w));
        record.followups = report.followups.iter().map(|w| a.format_word(w)).collect();
        record.failed_condition = report.failure().map(|c| format!("{}: {}", c.name, c.detail));
        if let Some(reduced) = report.reduced {
            record.applicable = true;
            record.failed_condition = None;
            lists[own] = reduced;
            ids[own].remove(pos);
        }
        records.push(record);
    }
    let shortcut = intersect_gens(rank, &lists[0], &lists[1])?;
    Ok((records, Some(crate::stallings::same_components(&shortcut, direct))))
}

/// Computes step `i` (1-based) and compares it with the transcribed claim.
pub fn step_intersection(t: &RelationTemplate, i: usize, convention: Convention) -> Result<StepReport> {
    check_step(t, i)?;
    let a = t.model.alphabet();
    let rank = t.rank();
    let factor = &t.factors[i - 1];
    let bad = factor.bad_subgroup(&t.model)?;
    let tb = translated_b(t, i, convention)?;
    let result = intersect_gens(rank, &bad, &tb)?;
    let cores = component_cores(&result);
    let step = t.steps.get(i - 1).cloned().unwrap_or_else(|| ExpectedStep {
        label: format!("{i}"),
        claim: ExpectedIntersection::trivial(),
        source: ClaimSource::Inferred,
        sharper: None,
        stated_bad: None,
        written_for: None,
        drops: Vec::new(),
    });
    let verdict = evaluate(rank, &step.claim, &cores)?;
    let within = within_claim(rank, &step.claim, &cores)?;
    let sharper_verdict = step
        .sharper
        .as_ref()
        .map(|s| evaluate(rank, s, &cores))
        .transpose()?;
    let (certificates_used, shortcut_agrees) = run_drops(t, &bad, &tb, &step.drops, &result)?;
    Ok(StepReport {
        index: i,
        label: step.label.clone(),
        factor: factor.format(a),
        claim_quote: step.claim_text(),
        claim: claim_json(a, &step.claim),
        source: step.source,
        verdict,
        within_claim: within,
        computed_components: components_json(a, &result),
        sharper: step.sharper.as_ref().map(|s| claim_json(a, s)),
        sharper_verdict,
        bad_subgroup: bad.iter().map(|w| a.format_word(w)).collect(),
        translated_b: tb.iter().map(|w| a.format_word(w)).collect(),
        certificates_used,
        shortcut_agrees,
    })
}

/// Recomputes a step verdict from the words embedded in a report.
pub fn recompute_verdict(model: &SurfaceModel, step: &StepReport) -> Result<Verdict> {
    let a = model.alphabet();
    let parse = |v: &[String]| v.iter().map(|s| a.parse_word(s)).collect::<Result<Vec<_>>>();
    let claim = ExpectedIntersection {
        kind: step.claim.kind,
        generators: parse(&step.claim.generators)?,
        templates: Vec::new(),
    };
    let cores = step
        .computed_components
        .iter()
        .map(|c| Ok(SubgroupGraph::from_generators(model.rank(), &parse(&c.generators)?)?.core()))
        .collect::<Result<Vec<_>>>()?;
    evaluate(model.rank(), &claim, &cores)
}

// ---------------------------------------------------------------------------
// Case reports

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub variant: Option<String>,
    pub step: Option<String>,
    pub kind: String,
    pub detail: String,
    /// Ledger note when the discrepancy is known.
    pub ledger: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantReport {
    pub name: String,
    pub relation: String,
    pub composition: CompositionReport,
    pub steps: Vec<StepReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: String,
    pub kind: SurfaceKind,
    pub genus: usize,
    pub rank: usize,
    pub convention: Convention,
    pub composition_ok: bool,
    /// Variant whose steps are listed in `steps`.
    pub variant: String,
    pub steps: Vec<StepReport>,
    pub variants: Vec<VariantReport>,
    /// Mirror-step checks on the selected variant.
    pub mirrors: Vec<MirrorCheck>,
    pub discrepancies: Vec<Discrepancy>,
    /// No unexplained mismatch of a stated claim on the selected variant.
    pub passed: bool,
}

impl CaseReport {
    pub fn model(&self) -> Result<SurfaceModel> {
        SurfaceModel::new(self.kind, self.genus)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Fixture(e.to_string()))
    }

    /// Unexplained mismatches of stated claims on the selected variant.
    pub fn gating_failures(&self) -> Vec<&Discrepancy> {
        self.discrepancies
            .iter()
            .filter(|d| {
                d.kind == "claim-mismatch" && d.ledger.is_none() && d.variant.as_deref() == Some(&self.variant)
            })
            .collect()
    }

    pub fn summary_table(&self) -> String {
        let mut out = format!(
            "case {} ({:?}, genus {}, rank {}), {}, variant {}: composition {}\n",
            self.case,
            self.kind,
            self.genus,
            self.rank,
            self.convention,
            self.variant,
            if self.composition_ok { "ok" } else { "FAILS" }
        );
        for s in &self.steps {
            let comps: Vec<String> = s
                .computed_components
                .iter()
                .map(|c| format!("<{}>", c.generators.join(", ")))
                .collect();
            out.push_str(&format!(
                "  {:<2} {:<16} {:<15} {:<44} {}\n",
                s.label,
                s.factor,
                s.verdict.to_string(),
                truncate(&s.claim_quote, 44),
                if comps.is_empty() { "trivial".to_string() } else { truncate(&comps.join(" "), 60) }
            ));
        }
        for v in &self.variants {
            if v.name != self.variant {
                out.push_str(&format!(
                    "  variant {}: composition {}{}\n",
                    v.name,
                    if v.composition.ok { "ok" } else { "fails" },
                    if !v.composition.ok && v.composition.other_convention_ok {
                        " (holds under the other convention)"
                    } else {
                        ""
                    }
                ));
            }
        }
        for m in &self.mirrors {
            out.push_str(&format!(
                "  mirror {}: components {}, claims {}\n",
                m.steps,
                if m.components_agree { "agree" } else { "differ" },
                match m.claims_agree {
                    Some(true) => "agree",
                    Some(false) => "differ",
                    None => "bounds only",
                }
            ));
        }
        for d in &self.discrepancies {
            out.push_str(&format!(
                "  discrepancy [{}{}{}] {}{}\n",
                d.kind,
                d.variant.as_ref().map(|v| format!(" {v}")).unwrap_or_default(),
                d.step.as_ref().map(|s| format!(" {s})")).unwrap_or_default(),
                d.detail,
                d.ledger.as_ref().map(|l| format!(" -- known: {l}")).unwrap_or_default()
            ));
        }
        out.push_str(&format!("  result: {}\n", if self.passed { "pass" } else { "FAIL" }));
        out
    }
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        let head: String = s.chars().take(n - 3).collect();
        head + "..."
    }
}

/// Whether two generator lists generate the same subgroup.
pub fn same_subgroup(rank: usize, a: &[Word], b: &[Word]) -> Result<bool> {
    let (Some(ga), Some(gb)) = (graph_or_none(rank, a)?, graph_or_none(rank, b)?) else {
        return Ok(a.iter().chain(b).all(Word::is_empty));
    };
    Ok(a.iter().all(|w| gb.accepts(w)) && b.iter().all(|w| ga.accepts(w)))
}

fn acknowledge(ledger: &[LedgerEntry], case: &str, d: &mut Discrepancy) {
    d.ledger = ledger
        .iter()
        .find(|e| {
            e.case == case
                && e.kind == d.kind
                && (e.step.is_none() || e.step == d.step)
                && (e.variant.is_none() || e.variant == d.variant)
        })
        .map(|e| e.note.clone());
}

fn invariance_note(rank: usize, written: &[Word], table: &[Word], phi: &Automorphism) -> Result<String> {
    let preserved = |gens: &[Word]| -> Result<bool> {
        let image: Vec<Word> = gens.iter().map(|w| phi.apply(w)).collect();
        same_subgroup(rank, gens, &image)
    };
    let yes_no = |b: bool| if b { "preserved" } else { "not preserved" };
    Ok(format!(
        "the move leaves the written list {} and the table list {}",
        yes_no(preserved(written)?),
        yes_no(preserved(table)?)
    ))
}

fn list_text(a: &Alphabet, gens: &[Word]) -> String {
    format!("<{}>", gens.iter().map(|w| a.format_word(w)).collect::<Vec<_>>().join(", "))
}

/// Runs composition and every step on every variant of a case.
pub fn verify_case(id: &str, model: &SurfaceModel, convention: Convention) -> Result<CaseReport> {
    verify_case_with_ledger(id, model, convention, builtin_ledger())
}

pub fn verify_case_with_ledger(
    id: &str,
    model: &SurfaceModel,
    convention: Convention,
    ledger: &[LedgerEntry],
) -> Result<CaseReport> {
    let variants = case_variants(id, model)?;
    let rank = model.rank();
    let a = model.alphabet();
    let mut discrepancies = Vec::new();
    let first = variants.first().ok_or_else(|| Error::Fixture(format!("case {id} has no variants")))?;

    let table_b = first.target_bad_subgroup()?;
    if let Some(stated) = &first.stated_b {
        if !same_subgroup(rank, stated, &table_b)? {
            let phi = Automorphism::basic(rank, &first.target)?;
            discrepancies.push(Discrepancy {
                variant: None,
                step: None,
                kind: "stated-target-bad-subgroup".into(),
                detail: format!(
                    "written {} but the table gives {}; {}",
                    list_text(a, stated),
                    list_text(a, &table_b),
                    invariance_note(rank, stated, &table_b, &phi)?
                ),
                ledger: None,
            });
        }
    }

    let mut reports = Vec::with_capacity(variants.len());
    for t in &variants {
        let composition = composition_report(t, convention)?;
        if !composition.ok {
            discrepancies.push(Discrepancy {
                variant: Some(t.variant.clone()),
                step: None,
                kind: "composition".into(),
                detail: format!(
                    "product differs from the target on {}{}",
                    composition.differing_letters.join(", "),
                    if composition.other_convention_ok {
                        "; it holds under the other convention"
                    } else {
                        ""
                    }
                ),
                ledger: None,
            });
        }
        let mut steps = Vec::with_capacity(t.factors.len());
        for i in 1..=t.factors.len() {
            let s = step_intersection(t, i, convention)?;
            let expected = &t.steps[i - 1];
            let written_here = expected.written_for.as_ref().map_or(true, |v| *v == t.variant);
            if let (Some(stated), true) = (&expected.stated_bad, written_here) {
                let table = t.factors[i - 1].bad_subgroup(model)?;
                if !same_subgroup(rank, stated, &table)? {
                    let phi = t.factors[i - 1].automorphism(rank)?;
                    discrepancies.push(Discrepancy {
                        variant: Some(t.variant.clone()),
                        step: Some(s.label.clone()),
                        kind: "stated-bad-subgroup".into(),
                        detail: format!(
                            "{}: written {} but the table gives {}; {}",
                            s.factor,
                            list_text(a, stated),
                            list_text(a, &table),
                            invariance_note(rank, stated, &table, &phi)?
                        ),
                        ledger: None,
                    });
                }
            }
            if s.verdict == Verdict::Mismatch {
                let kind = if expected.source == ClaimSource::Inferred {
                    "inferred-claim-mismatch"
                } else {
                    "claim-mismatch"
                };
                let computed = if s.computed_components.is_empty() {
                    "trivial".to_string()
                } else {
                    s.computed_components
                        .iter()
                        .map(|c| format!("<{}>", c.generators.join(", ")))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                discrepancies.push(Discrepancy {
                    variant: Some(t.variant.clone()),
                    step: Some(s.label.clone()),
                    kind: kind.into(),
                    detail: format!("{}: claim {} but computed {}", s.factor, s.claim_quote, computed),
                    ledger: None,
                });
            }
            if s.sharper_verdict == Some(Verdict::Mismatch) {
                discrepancies.push(Discrepancy {
                    variant: Some(t.variant.clone()),
                    step: Some(s.label.clone()),
                    kind: "sharper-mismatch".into(),
                    detail: format!("{}: sharper value does not hold", s.factor),
                    ledger: None,
                });
            }
            if s.shortcut_agrees == Some(false) {
                discrepancies.push(Discrepancy {
                    variant: Some(t.variant.clone()),
                    step: Some(s.label.clone()),
                    kind: "shortcut-disagrees".into(),
                    detail: format!("{}: reductions change the intersection", s.factor),
                    ledger: None,
                });
            }
            for r in s.certificates_used.iter().filter(|r| !r.applicable) {
                discrepancies.push(Discrepancy {
                    variant: Some(t.variant.clone()),
                    step: Some(s.label.clone()),
                    kind: "shortcut-not-applicable".into(),
                    detail: format!(
                        "{:?} drop of {} generator {} ({}): {}",
                        r.lemma,
                        match r.side {
                            Side::Bad => "bad",
                            Side::Translated => "translated",
                        },
                        r.generator,
                        truncate(&r.word, 40),
                        r.failed_condition.as_deref().unwrap_or("not applicable")
                    ),
                    ledger: None,
                });
            }
            steps.push(s);
        }
        reports.push(VariantReport {
            name: t.variant.clone(),
            relation: t.relation_text(),
            composition,
            steps,
        });
    }
    for d in &mut discrepancies {
        acknowledge(ledger, id, d);
    }
    let selected = reports
        .iter()
        .position(|v| v.composition.ok)
        .unwrap_or(0);
    let composition_ok = reports[selected].composition.ok;
    let mirrors = mirror_checks(&variants[selected], convention)?;
    for m in &mirrors {
        let mut push = |kind: &str, detail: String| {
            let mut d = Discrepancy {
                variant: Some(reports[selected].name.clone()),
                step: Some(m.steps.clone()),
                kind: kind.into(),
                detail,
                ledger: None,
            };
            acknowledge(ledger, id, &mut d);
            discrepancies.push(d);
        };
        if composition_ok && !m.components_agree {
            push("mirror-components", format!("steps {} are not related by the later factor", m.steps));
        }
        if m.claims_agree == Some(false) {
            push(
                "mirror-claims",
                format!("the claims at steps {} are not related by the later factor", m.steps),
            );
        }
    }
    let mut report = CaseReport {
        case: id.to_string(),
        kind: model.kind,
        genus: model.genus,
        rank,
        convention,
        composition_ok,
        variant: reports[selected].name.clone(),
        steps: reports[selected].steps.clone(),
        variants: reports,
        mirrors,
        discrepancies,
        passed: false,
    };
    report.passed = composition_ok && report.gating_failures().is_empty();
    Ok(report)
}

/// Every built-in case on its default surface, sorted by case id.
pub fn verify_all(convention: Convention) -> Result<Vec<CaseReport>> {
    let ids = case_ids();
    let results: Vec<Result<CaseReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ids
            .iter()
            .map(|id| scope.spawn(move || verify_case(id, &default_model(id)?, convention)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("case worker panicked")).collect()
    });
    let mut reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.case.cmp(&b.case));
    Ok(reports)
}

// ---------------------------------------------------------------------------
// Short relations

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterCheck {
    pub word: String,
    pub against: String,
    /// True when the cyclic subgroup meets the bad subgroup trivially.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortRelationReport {
    pub step: String,
    pub factor: String,
    pub conjugating_move: String,
    pub commutes: bool,
    pub intersected_with: Vec<String>,
    pub intersection: Vec<ComponentJson>,
    pub expected: ClaimJson,
    pub source: ClaimSource,
    pub verdict: Verdict,
    /// Whitehead test on the surviving boundary rotation, when it applies.
    pub whitehead_certificate: Option<bool>,
    /// Intersection of the supplied factor `E` with the surviving group.
    pub e_intersection: Vec<ComponentJson>,
    pub letter_checks: Vec<LetterCheck>,
}

impl ShortRelationReport {
    pub fn holds(&self) -> bool {
        self.commutes
            && self.verdict != Verdict::Mismatch
            && self.whitehead_certificate != Some(false)
            && self.letter_checks.iter().all(|c| c.trivial)
    }
}

fn check_factor_rank(model: &SurfaceModel, e_gens: &[Word]) -> Result<()> {
    let r = match graph_or_none(model.rank(), e_gens)? {
        Some(g) => g.rank(),
        None => 0,
    };
    if r >= model.rank() {
        return Err(Error::NotProperFactor { rank: r, ambient: model.rank() });
    }
    Ok(())
}

/// Conjugating-move check for steps a, c and f of case 1. `w` is the last
/// block's unhatted letter.
pub fn short_relation_check(model: &SurfaceModel, step: &str, e_gens: &[Word]) -> Result<ShortRelationReport> {
    let t = case_template("1", model)?;
    check_factor_rank(model, e_gens)?;
    let rank = model.rank();
    let a = model.alphabet();
    let role = |r: &str| t.roles[r];
    let (x, y) = (role("x"), role("y"));
    let hx = model.partner(x).expect("two-sided");
    let hy = model.partner(y).expect("two-sided");
    let w = model.a(model.genus);
    let (index, conj, claim, source, with, whitehead) = match step {
        "a" | "f" => {
            let index = if step == "a" { 0 } else { 5 };
            let d_y = model.rotation(crate::words::Letter::neg(y))?;
            let (with, claim, source) = if step == "a" {
                (
                    vec![Word::generator(y), d_y.clone()],
                    ExpectedIntersection {
                        kind: ClaimKind::Cyclic,
                        generators: vec![d_y.clone()],
                        templates: vec!["D[y']".into()],
                    },
                    ClaimSource::Stated,
                )
            } else {
                (vec![Word::generator(y)], ExpectedIntersection::trivial(), ClaimSource::Inferred)
            };
            let wh = Some(whitehead_no_cut_vertex(&d_y, rank)?);
            (index, MoveDescriptor::left(y, w), claim, source, with, wh)
        }
        "c" => (
            2,
            MoveDescriptor::right(hx, w),
            ExpectedIntersection::trivial(),
            ClaimSource::Stated,
            vec![Word::generator(hx)],
            None,
        ),
        "b" | "d" | "e" => {
            return Err(Error::NotApplicable(format!("step {step} needs no conjugating move")))
        }
        _ => return Err(Error::NotApplicable(format!("case 1 has no step {step}"))),
    };
    let factor = &t.factors[index];
    let f_auto = factor.automorphism(rank)?;
    let c_auto = Automorphism::basic(rank, &conj)?;
    let commutes = f_auto.compose(&c_auto) == c_auto.compose(&f_auto);
    let conj_bad = model.bad_subgroup(&conj)?;
    let result = intersect_gens(rank, &conj_bad, &with)?;
    let verdict = evaluate(rank, &claim, &component_cores(&result))?;
    let factor_bad = factor.bad_subgroup(model)?;
    let letter_check = |word: Word, bad: &[Word], against: &MoveDescriptor| -> Result<LetterCheck> {
        Ok(LetterCheck {
            word: a.format_word(&word),
            against: against.format(a),
            trivial: intersect_gens(rank, &[word], bad)?.is_trivial(),
        })
    };
    let letter_checks = match step {
        "c" => vec![
            letter_check(Word::generator(hx), &conj_bad, &conj)?,
            letter_check(Word::generator(hx).mul(&Word::generator(w)), &factor_bad, &factor.mv)?,
        ],
        _ => vec![letter_check(Word::generator(y).mul(&Word::generator(w)), &factor_bad, &factor.mv)?],
    };
    let _ = hy;
    let survivor: Vec<Word> = match claim.kind {
        ClaimKind::Trivial => Vec::new(),
        _ => claim.generators.clone(),
    };
    let e_intersection = components_json(a, &intersect_gens(rank, e_gens, &survivor)?);
    Ok(ShortRelationReport {
        step: step.to_string(),
        factor: factor.format(a),
        conjugating_move: conj.format(a),
        commutes,
        intersected_with: with.iter().map(|v| a.format_word(v)).collect(),
        intersection: components_json(a, &result),
        expected: claim_json(a, &claim),
        source,
        verdict,
        whitehead_certificate: whitehead,
        e_intersection,
        letter_checks,
    })
}

// ---------------------------------------------------------------------------
// Containment relations

/// Basis letters named in a containment relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentRoles {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub w: usize,
    pub e: usize,
    pub a: usize,
    pub ha: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub checks: Vec<ConditionCheck>,
    /// `φ⁻¹ ∘ θ⁻¹ ∘ φ ∘ θ`.
    pub d_w: Vec<String>,
    pub d_w_is_identity: bool,
}

impl ContainmentReport {
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

fn cond(name: &str, holds: bool, detail: impl Into<String>) -> ConditionCheck {
    ConditionCheck {
        name: name.to_string(),
        holds,
        detail: detail.into(),
    }
}

/// Checks the algebraic properties of an auxiliary move `theta` used to
/// remove a containment problem of `E` for `phi`.
pub fn containment_checks(
    model: &SurfaceModel,
    theta: &Automorphism,
    phi: &MoveDescriptor,
    e_gens: &[Word],
    roles: &ContainmentRoles,
) -> Result<ContainmentReport> {
    let rank = model.rank();
    if theta.rank() != rank {
        return Err(Error::RankMismatch { left: theta.rank(), right: rank });
    }
    phi.validate(rank)?;
    let r = *roles;
    for v in [r.x, r.y, r.z, r.w, r.e, r.a, r.ha] {
        if v >= rank {
            return Err(Error::GeneratorOutOfRange { generator: v, rank });
        }
    }
    let named = [("x", r.x), ("y", r.y), ("w", r.w), ("e", r.e), ("a", r.a), ("ha", r.ha)];
    for (i, (n1, v1)) in named.iter().enumerate() {
        for (n2, v2) in &named[i + 1..] {
            if v1 == v2 {
                return Err(Error::RoleCollision(format!("{n1} and {n2} are the same letter")));
            }
        }
    }
    for (n, v) in [("w", r.w), ("e", r.e), ("a", r.a), ("ha", r.ha)] {
        if v == r.z {
            return Err(Error::RoleCollision(format!("z and {n} are the same letter")));
        }
    }
    if phi.x != r.x || phi.y != Some(r.y) {
        return Err(Error::RoleCollision("the move does not act on x by y".into()));
    }
    if model.partner(r.a) != Some(r.ha) {
        return Err(Error::RoleCollision("a and ha are not hat partners".into()));
    }
    check_factor_rank(model, e_gens)?;
    let alphabet = model.alphabet();
    let name = |i: usize| alphabet.name(i).to_string();
    let mut checks = Vec::new();

    let moved: BTreeSet<usize> = (0..rank).filter(|i| *i != r.w).filter(|i| theta.image(*i) != &Word::generator(*i)).collect();
    checks.push(cond(
        "1-fixes-all-but-w",
        moved.is_empty(),
        if moved.is_empty() {
            "every other letter is fixed".to_string()
        } else {
            format!("moves {}", moved.iter().map(|&i| name(i)).collect::<Vec<_>>().join(", "))
        },
    ));

    let used = theta.letters_used(r.w);
    checks.push(cond(
        "2-no-e-in-theta-w",
        !used.contains(&r.e),
        format!("theta({}) = {}", name(r.w), alphabet.format_word(theta.image(r.w))),
    ));

    let v = theta.image(r.w).abelianize(rank);
    let want = Word::generator(r.w).mul(&Word::generator(r.z)).abelianize(rank);
    checks.push(cond(
        "3-homology",
        v == want,
        format!("[theta(w)] = {:?}, [w] + [z] = {:?}", v.coords(), want.coords()),
    ));
    let lattice = IntegerLattice::new(
        rank,
        e_gens.iter().map(|g| g.abelianize(rank)).collect::<Vec<AbelianVector>>(),
    )?;
    let inside = lattice.contains(&v)?;
    checks.push(cond(
        "3-outside-e",
        !inside,
        if inside { "[theta(w)] lies in H1(E)" } else { "[theta(w)] is not in H1(E)" },
    ));

    let phi_auto = Automorphism::basic(rank, phi)?;
    let d_w = phi_auto
        .inverse()
        .compose(&theta.inverse())
        .compose(&phi_auto)
        .compose(theta);
    let moved: Vec<usize> = (0..rank).filter(|i| *i != r.w).filter(|i| d_w.image(*i) != &Word::generator(*i)).collect();
    checks.push(cond(
        "5-defect-fixes-all-but-w",
        moved.is_empty(),
        if moved.is_empty() {
            "defect only moves w".to_string()
        } else {
            format!("defect moves {}", moved.iter().map(|&i| name(i)).collect::<Vec<_>>().join(", "))
        },
    ));

    let rel1 = theta.compose(&phi_auto).compose(&d_w).compose(&theta.inverse());
    checks.push(cond(
        "relation-1",
        rel1 == phi_auto,
        "theta phi D_w theta^-1 against phi",
    ));

    let lam = Automorphism::basic(rank, &MoveDescriptor::left(r.e, r.z))?;
    let commute = lam.compose(&d_w) == d_w.compose(&lam);
    let rel2 = theta
        .compose(&phi_auto)
        .compose(&lam)
        .compose(&d_w)
        .compose(&lam.inverse())
        .compose(&theta.inverse());
    checks.push(cond(
        "relation-2",
        commute && rel2 == phi_auto,
        if commute {
            "D_w commutes with l(e,z)"
        } else {
            "D_w does not commute with l(e,z)"
        },
    ));

    Ok(ContainmentReport {
        checks,
        d_w: (0..rank)
            .map(|i| format!("{} -> {}", name(i), alphabet.format_word(d_w.image(i))))
            .collect(),
        d_w_is_identity: d_w.is_identity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case1() -> RelationTemplate {
        case_template("1", &default_model("1").unwrap()).unwrap()
    }

    #[test]
    fn fixtures_load() {
        assert_eq!(
            case_ids(),
            vec!["1", "2", "2a", "2b", "2c", "3", "3a", "3b", "3c", "4", "5", "5a"]
        );
        let _ = builtin_ledger();
    }

    #[test]
    fn case1_has_six_factors() {
        let t = case1();
        assert_eq!(t.factors.len(), 6);
        assert_eq!(t.steps.len(), 6);
        assert_eq!(t.relation_text(), "r(ha2,a4)^-1 r(a2,a6)^-1 r(a1,a2) r(a1,a6) r(a2,a6) r(ha2,a4)");
    }

    #[test]
    fn case1_composes() {
        assert!(verify_composition(&case1()).unwrap());
    }

    #[test]
    fn flipped_exponent_breaks_composition() {
        let mut t = case1();
        t.factors[1].mv = t.factors[1].mv.inverse();
        assert!(!verify_composition(&t).unwrap());
    }

    #[test]
    fn singleton_composes() {
        let m = SurfaceModel::orientable(2).unwrap();
        let t = RelationTemplate::singleton(&m, MoveDescriptor::right(0, 2));
        assert!(verify_composition(&t).unwrap());
    }

    #[test]
    fn genus_floor_is_enforced() {
        let m = SurfaceModel::orientable(6).unwrap();
        match case_template("1", &m) {
            Err(Error::RankTooSmall(msg)) => assert!(msg.contains("a5")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_out_of_range() {
        let t = case1();
        assert!(matches!(
            step_intersection(&t, 7, Convention::RightmostFirst),
            Err(Error::StepOutOfRange { .. })
        ));
    }

    #[test]
    fn drop_step_grammar() {
        let d = DropStep::parse("hard bad 1").unwrap();
        assert_eq!(d, DropStep { lemma: Lemma::Hard, side: Side::Bad, generator: 1 });
        assert!(DropStep::parse("soft bad 1").is_err());
    }

    #[test]
    fn identity_conjugation_keeps_product() {
        let t = case1();
        let c = conjugate_relation(&t, &Automorphism::identity(t.rank()));
        assert_eq!(
            relation_product(&c, Convention::RightmostFirst).unwrap(),
            relation_product(&t, Convention::RightmostFirst).unwrap()
        );
    }
}
