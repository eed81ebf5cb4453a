use fgroup::oracle::{check_pair, check_result, random_pair, run_oracle, NaiveGraph};
use fgroup::stallings::{conjugacy_intersection, SubgroupGraph};
use fgroup::words::{Letter, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gens(text: &[&[(usize, i8)]]) -> Vec<Word> {
    text.iter()
        .map(|w| Word::reduce(w.iter().map(|&(g, e)| Letter::new(g, e))))
        .collect()
}

#[test]
fn runs_are_reproducible() {
    let a = run_oracle(30, 6, 9).unwrap();
    let b = run_oracle(30, 6, 9).unwrap();
    assert_eq!(a, b);
    assert!(a.all_agree(), "{:?}", a.failures);
    assert_eq!(a.agreeing, 30);
    let mut r1 = ChaCha8Rng::seed_from_u64(3);
    let mut r2 = ChaCha8Rng::seed_from_u64(3);
    assert_eq!(random_pair(&mut r1), random_pair(&mut r2));
}

#[test]
fn naive_graph_loops() {
    let g = NaiveGraph::fold(2, &gens(&[&[(0, 1), (1, 1)], &[(0, 1), (1, -1)]]));
    assert_eq!(g.edge_count(), 3);
    assert!(g.has_loop(&gens(&[&[(0, 1), (1, 1), (1, 1), (0, -1)]])[0]));
    assert!(!g.has_loop(&gens(&[&[(0, 1)]])[0]));
}

#[test]
fn a_wrong_result_is_caught() {
    let a = gens(&[&[(0, 1)], &[(1, 1)]]);
    let b = gens(&[&[(0, 1), (0, 1)], &[(2, 1)]]);
    assert!(check_pair(3, &a, &b, 5).unwrap().agrees());
    let ga = SubgroupGraph::from_generators(3, &a).unwrap();
    let wrong = conjugacy_intersection(&ga, &ga);
    let check = check_result(3, &a, &b, &wrong, 5);
    assert!(!check.agrees());
    assert!(check.disagreement_count > 0);
    assert!(check.disagreements.len() <= 10);
}
