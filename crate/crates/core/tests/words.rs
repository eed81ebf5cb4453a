use fgroup::words::{AbelianVector, Alphabet, IntegerLattice, Letter, Word};
use proptest::prelude::*;

const RANK: usize = 4;

fn letter() -> impl Strategy<Value = Letter> {
    (0..RANK, any::<bool>()).prop_map(|(g, neg)| Letter { generator: g, negative: neg })
}

fn raw() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 0..24)
}

fn surface() -> Alphabet {
    Alphabet::surface(3, false)
}

fn w(text: &str) -> Word {
    surface().parse_word(text).unwrap()
}

fn v(c: &[i64]) -> AbelianVector {
    AbelianVector::new(c.to_vec())
}

#[test]
fn reduce_examples() {
    let a1 = Letter::pos(1);
    let ha1 = Letter::pos(0);
    assert!(Word::reduce([a1, a1.inverse()]).is_empty());
    assert_eq!(Word::reduce([a1, ha1]).letters(), &[a1, ha1]);
    let a2 = Letter::pos(3);
    let nested = [a1, ha1, ha1.inverse(), a2, a2.inverse(), a1.inverse()];
    assert!(Word::reduce(nested).is_empty());
}

#[test]
fn cyclic_reduce_examples() {
    let (core, conj) = w("a1 a2 a1'").cyclic_reduce();
    assert_eq!((core, conj), (w("a2"), w("a1")));
    let (core, conj) = w("a1 a2").cyclic_reduce();
    assert_eq!((core, conj), (w("a1 a2"), Word::identity()));
    let (core, conj) = w("a1' a2 a2 a1").cyclic_reduce();
    assert_eq!((core, conj), (w("a2 a2"), w("a1'")));
}

#[test]
fn abelianize_examples() {
    assert!(Word::identity().abelianize(3).is_zero());
    let xyz = Alphabet::new(["x", "y", "z"]);
    let xy = xyz.parse_word("x y").unwrap();
    assert_eq!(xy.abelianize(3), v(&[1, 1, 0]));
    let c = Word::commutator(&w("ha1"), &w("a1'"));
    assert!(c.abelianize(6).is_zero());
}

#[test]
fn text_format_round_trips() {
    let alpha = surface();
    let word = w("a1 ha1' a3 ha2");
    assert_eq!(alpha.format_word(&word), "a1 ha1' a3 ha2");
    assert_eq!(alpha.format_word(&Word::identity()), "1");
    assert!(alpha.parse_word("1").unwrap().is_empty());
    assert!(alpha.parse_word("a1 b2").is_err());
}

#[test]
fn unknown_token_reports_position() {
    let err = surface().parse_word("a1 a2 q a3").unwrap_err();
    assert!(err.to_string().contains("token 2"), "{err}");
}

#[test]
fn lattice_examples() {
    let l1 = IntegerLattice::new(3, vec![v(&[1, 1, 0]), v(&[0, -1, -1])]).unwrap();
    let l2 = IntegerLattice::new(3, vec![v(&[-1, 1, -1]), v(&[0, 1, 0])]).unwrap();
    // Two planes in three dimensions always meet: the pair shares (1,2,1).
    let common = l1.intersection(&l2).unwrap();
    assert_eq!(common.rank(), 1);
    assert!(common.contains(&v(&[1, 2, 1])).unwrap());
    assert!(!common.contains(&v(&[0, 1, 0])).unwrap());
    assert!(l1.contains(&AbelianVector::zero(3)).unwrap());
    let l = IntegerLattice::new(2, vec![v(&[1, 1]), v(&[1, -1])]).unwrap();
    assert!(l.contains(&v(&[2, 0])).unwrap());
    assert!(!l.contains(&v(&[1, 0])).unwrap());
    assert!(l.contains(&v(&[1, 0, 0])).is_err());
}

#[test]
fn lattice_rank_deficient_input() {
    let l = IntegerLattice::new(3, vec![v(&[2, 4, 0]), v(&[1, 2, 0]), v(&[3, 6, 0])]).unwrap();
    assert_eq!(l.rank(), 1);
    assert!(l.contains(&v(&[-1, -2, 0])).unwrap());
    assert!(!l.contains(&v(&[0, 0, 1])).unwrap());
}

fn brute_force(basis: &[Vec<i64>], target: &[i64], bound: i64) -> bool {
    let k = basis.len();
    let mut coeffs = vec![-bound; k];
    loop {
        let ok = (0..target.len())
            .all(|j| (0..k).map(|i| coeffs[i] * basis[i][j]).sum::<i64>() == target[j]);
        if ok {
            return true;
        }
        let mut i = 0;
        while i < k && coeffs[i] == bound {
            coeffs[i] = -bound;
            i += 1;
        }
        if i == k {
            return false;
        }
        coeffs[i] += 1;
    }
}

proptest! {
    #[test]
    fn reduce_is_idempotent(s in raw()) {
        let once = Word::reduce(s);
        prop_assert_eq!(Word::reduce(once.letters().iter().copied()), once);
    }

    #[test]
    fn word_times_inverse_is_trivial(s in raw()) {
        let word = Word::reduce(s);
        prop_assert!(word.mul(&word.inverse()).is_empty());
    }

    #[test]
    fn reduced_words_have_no_cancelling_neighbours(s in raw()) {
        let word = Word::reduce(s);
        prop_assert!(word.letters().windows(2).all(|p| !p[0].cancels(p[1])));
    }

    #[test]
    fn abelianize_is_a_homomorphism(a in raw(), b in raw()) {
        let (u, v) = (Word::reduce(a), Word::reduce(b));
        let lhs = u.mul(&v).abelianize(RANK);
        prop_assert_eq!(lhs, &u.abelianize(RANK) + &v.abelianize(RANK));
    }

    #[test]
    fn cyclic_reduce_recovers_the_word(s in raw()) {
        let word = Word::reduce(s);
        let (core, conj) = word.cyclic_reduce();
        prop_assert!(core.len() <= word.len());
        prop_assert!(core.is_cyclically_reduced());
        if let (Some(f), Some(l)) = (core.first(), core.last()) {
            prop_assert!(core.len() == 1 || !f.cancels(l));
        }
        prop_assert_eq!(Word::product([&conj, &core, &conj.inverse()]), word);
    }

    #[test]
    fn lattice_membership_matches_brute_force(
        basis in prop::collection::vec(prop::collection::vec(-6i64..=6, 2), 1..=2),
        coeffs in prop::collection::vec(-2i64..=2, 2),
        noise in prop::collection::vec(-1i64..=1, 2),
        perturb in any::<bool>(),
    ) {
        let mut target = vec![0i64; 2];
        for (b, c) in basis.iter().zip(&coeffs) {
            for j in 0..2 {
                target[j] += b[j] * c;
            }
        }
        if perturb {
            for j in 0..2 {
                target[j] += noise[j];
            }
        }
        let lattice = IntegerLattice::new(2, basis.iter().map(|b| v(b)).collect()).unwrap();
        let fast = lattice.contains(&v(&target)).unwrap();
        // Any solution can be chosen with coefficients below 12 * max|t| + 1.
        let bound = 12 * target.iter().map(|t| t.abs()).max().unwrap() + 1;
        prop_assert_eq!(fast, brute_force(&basis, &target, bound));
    }
}
