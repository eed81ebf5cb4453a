use std::collections::BTreeSet;

use fgroup::automorphisms::{Automorphism, MoveDescriptor};
use fgroup::relations::same_subgroup;
use fgroup::surfaces::{
    boundary_word, cyclic_permutation, whitehead_no_cut_vertex, SurfaceKind, SurfaceModel,
    WhiteheadGraph,
};
use fgroup::words::{Letter, Word};

fn parse(m: &SurfaceModel, text: &str) -> Word {
    m.alphabet().parse_word(text).unwrap()
}

fn fmt(m: &SurfaceModel, gens: &[Word]) -> Vec<String> {
    gens.iter().map(|w| m.alphabet().format_word(w)).collect()
}

#[test]
fn boundary_examples() {
    let o = SurfaceModel::orientable(2).unwrap();
    assert_eq!(o.boundary(), &parse(&o, "ha1 a1' ha1' a1 ha2 a2' ha2' a2"));
    let n = SurfaceModel::nonorientable(2).unwrap();
    assert_eq!(n.boundary(), &parse(&n, "n ha1 a1 ha1' n a1 ha2 a2' ha2' a2"));
    for g in 1..=8 {
        assert_eq!(boundary_word(SurfaceKind::Orientable, g).unwrap().len(), 4 * g);
    }
}

#[test]
fn boundary_homology() {
    for g in 1..=6 {
        let o = SurfaceModel::orientable(g).unwrap();
        assert!(o.boundary().is_cyclically_reduced());
        assert!(o.boundary().abelianize(o.rank()).is_zero());
        let n = SurfaceModel::nonorientable(g).unwrap();
        assert!(n.boundary().is_cyclically_reduced());
        let h = n.boundary().abelianize(n.rank());
        let coords = h.coords();
        assert_eq!(coords[n.n().unwrap()], 2);
        assert_eq!(coords[n.a(1)], 2);
        assert_eq!(coords.iter().filter(|c| **c != 0).count(), 2);
    }
}

#[test]
fn rotations() {
    let m = SurfaceModel::orientable(3).unwrap();
    let hy = m.letter("ha2").unwrap();
    let d = m.rotation(Letter::pos(hy)).unwrap();
    assert_eq!(d, parse(&m, "ha2 a2' ha2' a2 ha3 a3' ha3' a3 ha1 a1' ha1' a1"));
    let first = m.boundary().first().unwrap();
    assert_eq!(&cyclic_permutation(m.boundary(), first).unwrap(), m.boundary());
    let y = m.letter("a2").unwrap();
    let d = m.rotation(Letter::neg(y)).unwrap();
    assert_eq!(d, parse(&m, "a2' ha2' a2 ha3 a3' ha3' a3 ha1 a1' ha1' a1 ha2"));
    let n = SurfaceModel::nonorientable(2).unwrap();
    assert!(n.rotation(Letter::neg(n.n().unwrap())).is_err());
}

#[test]
fn rotations_share_a_cyclic_core() {
    let m = SurfaceModel::orientable(3).unwrap();
    let d = m.boundary().clone();
    let start = d.first().unwrap();
    for k in 0..d.len() {
        let r = d.rotate(k);
        assert_eq!(cyclic_permutation(&d, r.first().unwrap()).unwrap(), r);
        assert_eq!(cyclic_permutation(&r, start).unwrap(), d);
        assert!(r.is_cyclically_reduced());
    }
}

#[test]
fn table_examples() {
    let m = SurfaceModel::orientable(4).unwrap();
    let (x, hx) = (m.a(2), m.ha(2));
    let y = m.a(4);
    let hy = m.ha(4);
    let rho = m.bad_subgroup(&MoveDescriptor::right(x, y)).unwrap();
    let expected = vec![
        Word::generator(y),
        Word::generator(hy),
        Word::product([&Word::letter(Letter::neg(x)), &Word::generator(hx), &Word::generator(x)]),
        m.rotation(Letter::pos(m.ha(3))).unwrap(),
    ];
    assert!(same_subgroup(m.rank(), &rho, &expected).unwrap(), "{:?}", fmt(&m, &rho));
    let iota = m.bad_subgroup(&MoveDescriptor::invert(x)).unwrap();
    let expected = vec![
        Word::generator(x),
        Word::generator(hx),
        m.rotation(Letter::pos(m.ha(3))).unwrap(),
    ];
    assert!(same_subgroup(m.rank(), &iota, &expected).unwrap(), "{:?}", fmt(&m, &iota));
}

#[test]
fn one_sided_row() {
    let m = SurfaceModel::nonorientable(4).unwrap();
    let n = m.n().unwrap();
    let (b, hb) = (m.a(3), m.ha(3));
    let got = m.bad_subgroup(&MoveDescriptor::right(n, b)).unwrap();
    let (a, ha) = (m.a(1), m.ha(1));
    let expected = vec![
        Word::generator(b),
        Word::generator(hb),
        Word::generator(ha),
        Word::product([&Word::generator(a), &Word::letter(Letter::neg(ha)), &Word::generator(n)]),
        m.rotation(Letter::pos(ha)).unwrap(),
    ];
    assert!(same_subgroup(m.rank(), &got, &expected).unwrap(), "{:?}", fmt(&m, &got));
}

#[test]
fn intersecting_pairs_are_unclassifiable() {
    let o = SurfaceModel::orientable(3).unwrap();
    assert!(o.bad_subgroup(&MoveDescriptor::right(o.a(2), o.ha(2))).is_err());
    let n = SurfaceModel::nonorientable(3).unwrap();
    let nn = n.n().unwrap();
    assert!(n.bad_subgroup(&MoveDescriptor::right(nn, n.a(1))).is_err());
    assert!(n.bad_subgroup(&MoveDescriptor::left(n.ha(1), nn)).is_err());
}

fn all_moves(m: &SurfaceModel) -> Vec<MoveDescriptor> {
    let r = m.rank();
    let mut out = Vec::new();
    for x in 0..r {
        out.push(MoveDescriptor::invert(x));
        for y in 0..r {
            if x != y {
                out.push(MoveDescriptor::right(x, y));
                out.push(MoveDescriptor::left(x, y));
            }
        }
    }
    out
}

#[test]
fn every_table_row_is_preserved_by_its_move() {
    for m in [SurfaceModel::orientable(4).unwrap(), SurfaceModel::nonorientable(4).unwrap()] {
        let mut rows = 0;
        for mv in all_moves(&m) {
            let Ok(bad) = m.bad_subgroup(&mv) else { continue };
            rows += 1;
            let phi = Automorphism::basic(m.rank(), &mv).unwrap();
            let image: Vec<Word> = bad.iter().map(|w| phi.apply(w)).collect();
            assert!(
                same_subgroup(m.rank(), &bad, &image).unwrap(),
                "{} moves {:?}",
                mv.format(m.alphabet()),
                fmt(&m, &bad)
            );
        }
        assert!(rows > m.rank() * 4, "{rows}");
    }
}

#[test]
fn table_rows_stay_near_the_move() {
    let m = SurfaceModel::nonorientable(5).unwrap();
    let d = m.boundary().clone();
    let is_rotation = |w: &Word| (0..d.len()).any(|k| &d.rotate(k) == w);
    for mv in all_moves(&m) {
        let Ok(bad) = m.bad_subgroup(&mv) else { continue };
        let mut near: BTreeSet<usize> = mv.letters().into_iter().collect();
        for l in mv.letters() {
            near.extend(m.partner(l));
            if m.role(l).linked || m.role(l).one_sided {
                near.extend([m.n().unwrap(), m.a(1), m.ha(1)]);
            }
        }
        for w in bad.iter().filter(|w| !is_rotation(w)) {
            assert!(
                w.support().is_subset(&near),
                "{}: {}",
                mv.format(m.alphabet()),
                m.alphabet().format_word(w)
            );
        }
    }
}

#[test]
fn whitehead_boundaries_are_single_cycles() {
    for g in 1..=8 {
        for kind in [SurfaceKind::Orientable, SurfaceKind::Nonorientable] {
            if kind == SurfaceKind::Nonorientable && g < 2 {
                continue;
            }
            let m = SurfaceModel::new(kind, g).unwrap();
            assert!(whitehead_no_cut_vertex(m.boundary(), m.rank()).unwrap());
            let wg = WhiteheadGraph::new(m.boundary(), m.rank()).unwrap();
            assert!((0..wg.vertex_count).all(|v| wg.degree(v) == 2));
            assert_eq!(wg.edges.len(), m.boundary().len());
        }
    }
}

#[test]
fn whitehead_rejects_basis_letters_and_empty_words() {
    for rank in 2..=6 {
        for g in 0..rank {
            assert!(!whitehead_no_cut_vertex(&Word::generator(g), rank).unwrap());
        }
    }
    assert!(whitehead_no_cut_vertex(&Word::identity(), 3).is_err());
}
