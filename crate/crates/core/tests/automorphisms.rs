use fgroup::automorphisms::{
    parse_moves, product, product_of_moves, Automorphism, Convention, MoveDescriptor,
};
use fgroup::words::{Alphabet, Letter, Word};
use proptest::prelude::*;

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

fn xyz() -> Alphabet {
    Alphabet::new(["x", "y", "z", "w", "u"])
}

fn w(text: &str) -> Word {
    xyz().parse_word(text).unwrap()
}

fn basic(rank: usize, m: MoveDescriptor) -> Automorphism {
    Automorphism::basic(rank, &m).unwrap()
}

#[test]
fn basic_move_images() {
    let rho = basic(3, MoveDescriptor::right(X, Y));
    assert_eq!(rho.apply(&w("x")), w("x y"));
    assert_eq!(rho.apply(&w("z")), w("z"));
    let lam = basic(3, MoveDescriptor::left(X, Y));
    assert_eq!(lam.apply(&w("x")), w("y x"));
    let iota = basic(3, MoveDescriptor::invert(X));
    assert_eq!(iota.apply(&w("x")), w("x'"));
    assert_eq!(iota.apply(&w("x z")), w("x' z"));
}

#[test]
fn apply_reduces() {
    let rho = basic(3, MoveDescriptor::right(X, Y));
    assert_eq!(rho.apply(&w("x y'")), w("x"));
    let id = Automorphism::identity(3);
    assert_eq!(id.apply(&w("x z' y")), w("x z' y"));
}

#[test]
fn degenerate_move_is_rejected() {
    assert!(Automorphism::basic(3, &MoveDescriptor::right(X, X)).is_err());
    assert!(parse_moves(&xyz(), "r(x,x)").is_err());
}

#[test]
fn inverse_examples() {
    let rho = basic(3, MoveDescriptor::right(X, Y));
    assert_eq!(rho.inverse().apply(&w("x")), w("x y'"));
    assert!(Automorphism::identity(3).inverse().is_identity());
    let iota = basic(3, MoveDescriptor::invert(X));
    assert_eq!(iota.inverse(), iota);
    let back = basic(3, MoveDescriptor::right(X, Y).inverse());
    assert_eq!(back, rho.inverse());
}

#[test]
fn non_generating_images_are_rejected() {
    let images = vec![w("x x"), w("y"), w("z")];
    assert!(Automorphism::from_images(images).is_err());
    let images = vec![w("x y"), w("x y"), w("z")];
    assert!(Automorphism::from_images(images).is_err());
    let images = vec![w("x y z"), w("y z"), w("z")];
    assert!(Automorphism::from_images(images).is_ok());
}

#[test]
fn case_one_relation_sends_x_to_xy() {
    // x=a1, y=a2, hy=ha2, z=a6, u=a4 in the genus 7 alphabet.
    let alpha = Alphabet::surface(7, false);
    let moves = parse_moves(
        &alpha,
        "r(ha2,a4)^-1 r(a2,a6)^-1 r(a1,a2) r(a1,a6) r(a2,a6) r(ha2,a4)",
    )
    .unwrap();
    let p = product_of_moves(14, &moves, Convention::RightmostFirst).unwrap();
    let x = alpha.parse_word("a1").unwrap();
    assert_eq!(p.apply(&x), alpha.parse_word("a1 a2").unwrap());
    let target = basic(14, MoveDescriptor::right(alpha.index("a1").unwrap(), alpha.index("a2").unwrap()));
    assert_eq!(p, target);
    let q = product_of_moves(14, &moves, Convention::LeftmostFirst).unwrap();
    assert_ne!(q, target);
}

#[test]
fn generation_identity_on_a() {
    // a=x, hat a=y, z=z.
    let r = |a, b| basic(3, MoveDescriptor::right(a, b));
    let rhs = product(
        3,
        &[r(Z, Y).inverse(), r(X, Z).inverse(), r(Z, Y), r(X, Z)],
        Convention::RightmostFirst,
    );
    assert_eq!(rhs.apply(&w("x")), w("x y"));
    assert_eq!(rhs, r(X, Y));
}

#[test]
fn generation_identity_all_triples_rank_six() {
    let r = |a, b| basic(6, MoveDescriptor::right(a, b));
    for a in 0..6 {
        for ha in 0..6 {
            for z in 0..6 {
                if a == ha || a == z || ha == z {
                    continue;
                }
                let rhs = product(
                    6,
                    &[r(z, ha).inverse(), r(a, z).inverse(), r(z, ha), r(a, z)],
                    Convention::RightmostFirst,
                );
                assert_eq!(rhs, r(a, ha), "a={a} ha={ha} z={z}");
            }
        }
    }
}

#[test]
fn fixed_and_used_letters() {
    let rho = basic(5, MoveDescriptor::right(X, Y));
    assert_eq!(rho.fixed_letters().into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    assert_eq!(rho.letters_used(X).into_iter().collect::<Vec<_>>(), vec![X, Y]);
    let id = Automorphism::identity(5);
    assert_eq!(id.fixed_letters().len(), 5);
    assert_eq!(id.letters_used(Z).into_iter().collect::<Vec<_>>(), vec![Z]);
    // theta = lambda_{w,z}; e = u is not involved.
    let theta = basic(5, MoveDescriptor::left(3, Z));
    assert!(!theta.fixed_letters().contains(&3));
    assert_eq!(theta.fixed_letters().len(), 4);
    let used = theta.letters_used(3);
    assert_eq!(used.into_iter().collect::<Vec<_>>(), vec![Z, 3]);
}

#[test]
fn move_text_round_trips() {
    let alpha = Alphabet::surface(7, false);
    let text = "r(ha2,a4)^-1 r(a2,a6)^-1 l(a1,a2) i(a3)";
    let moves = parse_moves(&alpha, text).unwrap();
    let back: Vec<String> = moves.iter().map(|m| m.format(&alpha)).collect();
    assert_eq!(back.join(" "), text);
}

#[test]
fn malformed_moves_report_position() {
    let alpha = Alphabet::surface(3, false);
    let err = parse_moves(&alpha, "r(a1,a2) q(a1) r(a2,a3)").unwrap_err();
    assert!(err.to_string().contains("token 1"), "{err}");
    let err = parse_moves(&alpha, "r(a1,a2) r(a1,b9)").unwrap_err();
    assert!(err.to_string().contains("b9"), "{err}");
    assert!(parse_moves(&alpha, "i(a1,a2)").is_err());
    assert!(parse_moves(&alpha, "r(a1,a2").is_err());
}

fn move_strategy(rank: usize) -> impl Strategy<Value = MoveDescriptor> {
    (0..3u8, 0..rank, 1..rank, any::<bool>()).prop_map(move |(k, x, off, inv)| {
        let y = (x + off) % rank;
        let m = match k {
            0 => MoveDescriptor::right(x, y),
            1 => MoveDescriptor::left(x, y),
            _ => MoveDescriptor::invert(x),
        };
        if inv {
            m.inverse()
        } else {
            m
        }
    })
}

fn word_strategy(rank: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..12)
        .prop_map(|v| Word::reduce(v.into_iter().map(|(g, n)| Letter { generator: g, negative: n })))
}

fn automorphism_strategy(rank: usize) -> impl Strategy<Value = Automorphism> {
    prop::collection::vec(move_strategy(rank), 0..=12)
        .prop_map(move |ms| product_of_moves(rank, &ms, Convention::RightmostFirst).unwrap())
}

proptest! {
    #[test]
    fn compose_agrees_with_apply(
        f in automorphism_strategy(4),
        g in automorphism_strategy(4),
        word in word_strategy(4),
    ) {
        prop_assert_eq!(f.compose(&g).apply(&word), f.apply(&g.apply(&word)));
    }

    #[test]
    fn inverse_round_trips(f in automorphism_strategy(5), word in word_strategy(5)) {
        prop_assert_eq!(f.inverse().apply(&f.apply(&word)), word.clone());
        prop_assert_eq!(f.apply_inverse(&f.apply(&word)), word);
        prop_assert!(f.compose(&f.inverse()).is_identity());
        prop_assert!(f.inverse().compose(&f).is_identity());
    }

    #[test]
    fn compose_is_associative(
        f in automorphism_strategy(4),
        g in automorphism_strategy(4),
        h in automorphism_strategy(4),
    ) {
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
    }

    #[test]
    fn disjoint_moves_commute(
        perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        left in any::<bool>(),
    ) {
        let (a, b) = (perm[0], perm[1]);
        let (c, d) = (perm[2], perm[3]);
        let m = if left { MoveDescriptor::left(a, b) } else { MoveDescriptor::right(a, b) };
        let f = basic(6, m);
        let g = basic(6, MoveDescriptor::right(c, d));
        prop_assert_eq!(f.compose(&g), g.compose(&f));
    }

    #[test]
    fn general_images_survive_the_rank_test(f in automorphism_strategy(4)) {
        let rebuilt = Automorphism::from_images(f.images().to_vec()).unwrap();
        prop_assert_eq!(rebuilt, f);
    }
}
