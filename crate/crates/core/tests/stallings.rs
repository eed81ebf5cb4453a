use fgroup::automorphisms::MoveDescriptor;
use fgroup::oracle::{check_pair, NaiveGraph};
use fgroup::stallings::{
    based_isomorphic, conjugacy_intersection, conjugate_into, cores_isomorphic, same_components,
    FoldOrder, SubgroupGraph,
};
use fgroup::surfaces::SurfaceModel;
use fgroup::words::{Alphabet, Letter, Word};
use proptest::prelude::*;

fn alpha() -> Alphabet {
    Alphabet::surface(2, false)
}

fn w(text: &str) -> Word {
    alpha().parse_word(text).unwrap()
}

fn graph(gens: &[&str]) -> SubgroupGraph {
    let words: Vec<Word> = gens.iter().map(|g| w(g)).collect();
    SubgroupGraph::from_generators(4, &words).unwrap()
}

#[test]
fn graph_shapes() {
    let g = graph(&["a1"]);
    assert_eq!((g.vertex_count(), g.edges().len(), g.rank()), (1, 1, 1));
    // a1 a2 and a1 ha2, standing in for a1 a2 and a1 a3.
    let g = graph(&["a1 a2", "a1 ha2"]);
    assert_eq!((g.vertex_count(), g.edges().len(), g.rank()), (2, 3, 2));
    let g = graph(&["a1 a1"]);
    assert_eq!((g.vertex_count(), g.edges().len(), g.rank()), (2, 2, 1));
    assert!(g.accepts(&w("a1 a1")));
    assert!(!g.accepts(&w("a1")));
    let rose = graph(&["ha1", "a1", "ha2", "a2"]);
    assert_eq!(rose.rank(), 4);
}

#[test]
fn membership_examples() {
    let g = graph(&["a1"]);
    assert!(g.accepts(&w("a1")));
    assert!(!g.accepts(&w("a2")));
    assert!(g.lifts_somewhere(&w("a1 a1 a1'")));
}

#[test]
fn trivial_generators_are_rejected() {
    assert!(SubgroupGraph::from_generators(4, &[Word::identity()]).is_err());
    assert!(SubgroupGraph::from_generators(4, &[w("a1 a1'")]).is_err());
}

#[test]
fn small_intersections() {
    let r = conjugacy_intersection(&graph(&["a1"]), &graph(&["a2"]));
    assert!(r.is_trivial());
    let r = conjugacy_intersection(&graph(&["ha1", "a1"]), &graph(&["a1", "ha2"]));
    assert_eq!(r.components.len(), 1);
    assert_eq!(r.components[0].rank, 1);
    assert!(cores_isomorphic(&r.components[0].graph, &graph(&["a1"]).core()));
}

#[test]
fn core_comparisons() {
    assert!(cores_isomorphic(&graph(&["a1 a2 a1'"]).core(), &graph(&["a2"]).core()));
    assert!(!cores_isomorphic(&graph(&["a1"]).core(), &graph(&["a1 a1"]).core()));
    let g = graph(&["a1 ha2", "a2' a1"]).core();
    assert!(cores_isomorphic(&g, &g));
    assert!(!based_isomorphic(&graph(&["a1 a2 a1'"]), &graph(&["a2"])));
    assert!(conjugate_into(&graph(&["a1 a1"]), &graph(&["a1"])));
    assert!(!conjugate_into(&graph(&["a1"]), &graph(&["a1 a1"])));
}

fn case_one_model() -> (SurfaceModel, [usize; 5]) {
    let m = SurfaceModel::orientable(7).unwrap();
    let l = |n: &str| m.letter(n).unwrap();
    let roles = [l("a1"), l("a2"), l("ha2"), l("a6"), l("a4")];
    (m, roles)
}

#[test]
fn case_one_step_a_intersection() {
    let (m, [x, y, hy, _z, u]) = case_one_model();
    let a = m.bad_subgroup(&MoveDescriptor::right(hy, u)).unwrap();
    let b = m.bad_subgroup(&MoveDescriptor::right(x, y)).unwrap();
    let r = conjugacy_intersection(
        &SubgroupGraph::from_generators(14, &a).unwrap(),
        &SubgroupGraph::from_generators(14, &b).unwrap(),
    );
    assert_eq!(r.components.len(), 1);
    assert_eq!(r.components[0].rank, 2);
    let expected = [Word::generator(y), m.rotation(Letter::neg(y)).unwrap()];
    let expected = SubgroupGraph::from_generators(14, &expected).unwrap();
    assert!(cores_isomorphic(&r.components[0].graph, &expected.core()));
}

#[test]
fn case_one_step_b_word_is_impossible() {
    let (m, [_x, y, hy, z, u]) = case_one_model();
    let a2 = m.bad_subgroup(&MoveDescriptor::right(y, z)).unwrap();
    let g = SubgroupGraph::from_generators(14, &a2).unwrap();
    let word = Word::reduce([Letter::pos(hy), Letter::pos(u)]);
    assert!(!g.lifts_somewhere(&word));
    assert!(g.lifts_somewhere(&Word::generator(z)));
}

#[test]
fn exports_name_letters() {
    let g = graph(&["a1 ha2"]);
    let dot = g.to_dot(&alpha());
    assert!(dot.contains("digraph") && dot.contains("ha2"), "{dot}");
    let json = g.to_json(&alpha());
    assert!(json["edges"].is_array());
}

fn gens_strategy(rank: usize) -> impl Strategy<Value = Vec<Word>> {
    let word = prop::collection::vec((0..rank, any::<bool>()), 1..=6).prop_map(|v| {
        Word::reduce(v.into_iter().map(|(g, n)| Letter { generator: g, negative: n }))
    });
    prop::collection::vec(word, 1..=3)
        .prop_filter("nontrivial", |gs| gs.iter().any(|g| !g.is_empty()))
}

proptest! {
    #[test]
    fn folding_is_idempotent(gens in gens_strategy(3)) {
        let g = SubgroupGraph::from_generators(3, &gens).unwrap();
        prop_assert!(g.is_folded() && g.is_connected());
        let again = SubgroupGraph::from_raw(
            3, g.vertex_count(), g.edges().to_vec(), g.base(), FoldOrder::Reverse,
        ).unwrap();
        prop_assert_eq!(again.edges().len(), g.edges().len());
        prop_assert!(based_isomorphic(&again, &g));
    }

    #[test]
    fn folding_keeps_generators(gens in gens_strategy(3)) {
        let g = SubgroupGraph::from_generators(3, &gens).unwrap();
        for w in &gens {
            prop_assert!(g.accepts(w));
        }
        let naive = NaiveGraph::fold(3, &gens);
        prop_assert_eq!(naive.edge_count(), g.edges().len());
    }

    #[test]
    fn folding_order_does_not_matter(gens in gens_strategy(3)) {
        let f = SubgroupGraph::from_generators_with_order(3, &gens, FoldOrder::Forward).unwrap();
        let r = SubgroupGraph::from_generators_with_order(3, &gens, FoldOrder::Reverse).unwrap();
        prop_assert!(based_isomorphic(&f, &r));
    }

    #[test]
    fn nielsen_moves_keep_the_core(gens in gens_strategy(3), extra in gens_strategy(3)) {
        let mut a = vec![gens[0].clone(), extra[0].clone()];
        a.extend(gens[1..].iter().cloned());
        let mut b = vec![gens[0].mul(&extra[0]), extra[0].clone()];
        b.extend(gens[1..].iter().cloned());
        prop_assume!(a.iter().any(|w| !w.is_empty()));
        let ga = SubgroupGraph::from_generators(3, &a).unwrap();
        let gb = SubgroupGraph::from_generators(3, &b).unwrap();
        prop_assert!(based_isomorphic(&ga, &gb));
    }

    #[test]
    fn generators_rebuild_the_graph(gens in gens_strategy(3)) {
        let g = SubgroupGraph::from_generators(3, &gens).unwrap();
        let basis = g.generators();
        prop_assert_eq!(basis.len(), g.rank());
        let rebuilt = SubgroupGraph::from_generators(3, &basis).unwrap();
        prop_assert!(based_isomorphic(&rebuilt, &g));
    }

    #[test]
    fn intersection_is_symmetric_and_well_formed(a in gens_strategy(3), b in gens_strategy(3)) {
        let ga = SubgroupGraph::from_generators(3, &a).unwrap();
        let gb = SubgroupGraph::from_generators(3, &b).unwrap();
        let ab = conjugacy_intersection(&ga, &gb);
        let ba = conjugacy_intersection(&gb, &ga);
        prop_assert!(same_components(&ab, &ba));
        for c in &ab.components {
            prop_assert!(c.rank >= 1);
            prop_assert!(c.graph.is_folded() && c.graph.is_core() && c.graph.is_connected());
            prop_assert!(c.graph.base().is_none());
            prop_assert!(conjugate_into(&c.graph, &ga) && conjugate_into(&c.graph, &gb));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn intersection_agrees_with_enumeration(a in gens_strategy(3), b in gens_strategy(3)) {
        let check = check_pair(3, &a, &b, 6).unwrap();
        prop_assert!(check.agrees(), "{:?}", check.disagreements);
    }
}
