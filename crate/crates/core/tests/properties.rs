mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::sample::select;
use twistcolor_core::algebra::{
    check_biquandle, check_quandle, is_homomorphism, Biquandle, ElementMap, FiniteQuandle, PairEncoding, PairMap,
};
use twistcolor_core::coloring::{
    check_product_formula, count_colorings, delta_set, CountOptions,
};
use twistcolor_core::diagram::{fm_edges, make_fm, EditSite, KinkEntry, NodeGraph, Sign, TwistedDiagram};
use twistcolor_core::moves::{boundary_profile, Endpoint, Over, Piece, Planar};
use twistcolor_core::structures::{standard_twisted_product, twisted_product, VtStructure};
use twistcolor_core::Limits;

use common::{from_matching, naive_count, small_structures, Kind};

fn count(d: &TwistedDiagram, s: &VtStructure) -> BigUint {
    count_colorings(d, s, &CountOptions::default()).unwrap().count
}

fn quandle() -> impl Strategy<Value = FiniteQuandle> {
    prop_oneof![
        (1usize..=9).prop_map(|n| FiniteQuandle::dihedral(n).unwrap()),
        (2usize..=9, -4i64..=6).prop_filter_map("t must be a unit", |(n, t)| FiniteQuandle::alexander(n, t).ok()),
    ]
}

fn small_quandle() -> impl Strategy<Value = FiniteQuandle> {
    prop_oneof![
        (1usize..=5).prop_map(|n| FiniteQuandle::dihedral(n).unwrap()),
        (2usize..=5, 1i64..=4).prop_filter_map("t must be a unit", |(n, t)| FiniteQuandle::alexander(n, t).ok()),
    ]
}

/// A closed diagram with `kinds` wired by a random perfect matching.
fn diagram_from(kinds: Vec<Kind>) -> impl Strategy<Value = TwistedDiagram> {
    let ports: usize = kinds.iter().map(|k| if *k == Kind::Bar { 1 } else { 2 }).sum();
    (Just((0..ports).collect::<Vec<_>>()).prop_shuffle(), 0usize..=1)
        .prop_map(move |(matching, loops)| from_matching(&kinds, &matching, loops))
}

fn diagram(max_nodes: usize, kinds: &'static [Kind]) -> impl Strategy<Value = TwistedDiagram> {
    prop::collection::vec(select(kinds), 1..=max_nodes).prop_flat_map(diagram_from)
}

const ALL_KINDS: &[Kind] = &[Kind::Pos, Kind::Neg, Kind::Virt, Kind::Bar];
const VIRTUAL_KINDS: &[Kind] = &[Kind::Pos, Kind::Neg, Kind::Virt];

fn structure() -> impl Strategy<Value = VtStructure> {
    let mut all: Vec<VtStructure> = small_structures().into_iter().map(|(_, s)| s).collect();
    all.push(standard_twisted_product(&FiniteQuandle::dihedral(3).unwrap()));
    all.push(standard_twisted_product(&FiniteQuandle::alexander(3, 2).unwrap()));
    let d4 = Biquandle::derived(&FiniteQuandle::dihedral(4).unwrap());
    let f = ElementMap::from_fn(4, |x| (x + 2) % 4);
    all.push(twisted_product(&d4, &f, &ElementMap::identity(4)).unwrap());
    select(all)
}

fn permutation(n: usize) -> impl Strategy<Value = ElementMap> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |v| ElementMap::new(n, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_quandles_satisfy_their_axioms(q in quandle()) {
        prop_assert!(check_quandle(&q.rows()).unwrap().all_passed());
        prop_assert!(check_quandle(&q.dual().rows()).unwrap().all_passed());
    }

    #[test]
    fn derived_and_its_variants_are_biquandles(q in quandle()) {
        let b = Biquandle::derived(&q);
        prop_assert!(check_biquandle(b.r()).all_passed());
        prop_assert!(check_biquandle(b.inverse().r()).all_passed());
        prop_assert!(check_biquandle(b.conjugate_by_tau().r()).all_passed());
        // Derived form: R(x, y) = (y, x ∗ y).
        for x in 0..q.n() {
            for y in 0..q.n() {
                prop_assert_eq!(b.r().apply(x, y), (y, q.op(x, y)));
            }
        }
    }

    #[test]
    fn direct_products_are_biquandles(p in small_quandle(), q in small_quandle()) {
        let b = Biquandle::derived(&p).direct_product(&Biquandle::derived(&q).inverse());
        prop_assert_eq!(b.n(), p.n() * q.n());
        prop_assert!(check_biquandle(b.r()).all_passed());
    }

    #[test]
    fn conjugating_by_a_bijection_gives_an_isomorphic_biquandle(
        (q, h) in quandle().prop_flat_map(|q| { let n = q.n(); (Just(q), permutation(n)) })
    ) {
        let b = Biquandle::derived(&q);
        let h_inv = h.inverse().unwrap();
        let moved = PairMap::from_fn(q.n(), |x, y| {
            let (a, c) = b.r().apply(h_inv.apply(x), h_inv.apply(y));
            (h.apply(a), h.apply(c))
        });
        prop_assert!(check_biquandle(&moved).all_passed());
        prop_assert!(is_homomorphism(b.r(), &moved, &h));
        prop_assert!(is_homomorphism(&moved, b.r(), &h_inv));
        prop_assert_eq!(b.is_automorphism(&h), moved == *b.r());
    }

    #[test]
    fn twisted_products_of_dihedral_automorphisms(n in 3usize..=6, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let x0 = Biquandle::derived(&FiniteQuandle::dihedral(n).unwrap());
        let autos = x0.automorphisms(8).unwrap();
        let (f, g) = (i.get(&autos), j.get(&autos));
        let result = twisted_product(&x0, f, g);
        let admissible = f.compose(f).is_identity() && f.compose(g) == g.compose(f);
        prop_assert_eq!(result.is_ok(), admissible);
        if let Ok(s) = result {
            prop_assert!(s.is_verified());
        }
    }

    #[test]
    fn text_round_trip(d in diagram(5, ALL_KINDS)) {
        let text = d.serialize();
        let back = TwistedDiagram::parse(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(back.serialize(), text);
    }

    #[test]
    fn removing_bars_is_idempotent(d in diagram(5, ALL_KINDS)) {
        let once = d.remove_bars();
        prop_assert!(!once.has_bars());
        prop_assert_eq!(once.remove_bars(), once.clone());
        prop_assert_eq!(once.classical_count(), d.classical_count());
        prop_assert_eq!(once.virtual_count(), d.virtual_count());
    }

    #[test]
    fn relabeling_keeps_counts(d in diagram(4, ALL_KINDS), s in structure()) {
        prop_assert_eq!(count(&d.canonical_relabel(), &s), count(&d, &s));
    }

    #[test]
    fn free_loop_multiplies_by_carrier_size(d in diagram(4, ALL_KINDS), s in structure()) {
        prop_assert_eq!(count(&d.with_free_loop(), &s), count(&d, &s) * BigUint::from(s.n()));
    }

    #[test]
    fn local_moves_keep_counts(
        d in diagram(4, ALL_KINDS),
        s in structure(),
        pick in any::<prop::sample::Index>(),
        edit in 0usize..4,
        second in any::<bool>(),
    ) {
        let site = if d.edges().is_empty() {
            EditSite::FreeLoop
        } else {
            EditSite::Edge(pick.get(d.edges()).clone())
        };
        if site == EditSite::FreeLoop && d.free_loops() == 0 {
            return Ok(());
        }
        let entry = if second { KinkEntry::Second } else { KinkEntry::First };
        let edited = match edit {
            0 => d.with_kink(&site, Sign::Positive, entry),
            1 => d.with_kink(&site, Sign::Negative, entry),
            2 => d.with_virtual_kink(&site, entry),
            _ => d.with_bar_pair(&site),
        }
        .unwrap();
        prop_assert_eq!(count(&edited, &s), count(&d, &s));
    }

    #[test]
    fn solver_matches_naive_enumeration(d in diagram(4, ALL_KINDS), s in structure()) {
        prop_assume!(s.n() <= 4 || d.edge_count() + d.free_loops() <= 5);
        prop_assert_eq!(count(&d, &s), BigUint::from(naive_count(&d, &s)));
    }

    #[test]
    fn product_of_upper_and_lower(d in diagram(5, VIRTUAL_KINDS), q in small_quandle()) {
        let c = check_product_formula(&d, &q, &Limits::default()).unwrap();
        prop_assert!(c.equal, "{} != {} * {}", c.lhs, c.upper, c.lower);
    }

    #[test]
    fn fm_colorings_project_onto_delta(q in small_quandle(), m in 1usize..=4) {
        let d = make_fm(m).unwrap();
        let s = standard_twisted_product(&q);
        let options = CountOptions { emit: true, ..Default::default() };
        let result = count_colorings(&d, &s, &options).unwrap();
        let enc = PairEncoding::new(q.n(), q.n());
        let (x, y) = (d.edge_index(fm_edges::X).unwrap(), d.edge_index(fm_edges::Y).unwrap());
        let firsts: BTreeSet<(usize, usize)> = result
            .colorings
            .unwrap()
            .iter()
            .map(|c| (enc.decode(c.edges[x]).0, enc.decode(c.edges[y]).0))
            .collect();
        let delta = delta_set(&q, m).unwrap();
        prop_assert_eq!(result.count, BigUint::from(delta.len()));
        prop_assert_eq!(firsts, delta.members);
    }

    #[test]
    fn dihedral_delta_matches_closed_form(n in 1usize..=12, m in 1usize..=6) {
        let delta = delta_set(&FiniteQuandle::dihedral(n).unwrap(), m).unwrap();
        for a in 0..n {
            for b in 0..n {
                let expected = common::dihedral_alternating(n, a, b, m) == a && common::dihedral_alternating(n, b, a, m) == b;
                prop_assert_eq!(delta.contains(a, b), expected);
            }
        }
    }
}

/// Braid-like pieces on `width` positions: crossings, virtual crossings, bars.
fn braid(width: usize, len: usize) -> impl Strategy<Value = Vec<Piece>> {
    prop::collection::vec((0..width - 1, 0usize..4, 0..width), 0..=len).prop_map(|raw| {
        raw.into_iter()
            .map(|(at, kind, bar_at)| match kind {
                0 => Piece::Cross { at, over: Over::A },
                1 => Piece::Cross { at, over: Over::B },
                2 => Piece::Virt { at },
                _ => Piece::Bar { at: bar_at },
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn profiles_compose_along_stacked_pictures(
        (width, lower, upper) in (2usize..=3).prop_flat_map(|w| (Just(w), braid(w, 3), braid(w, 3))),
        s in structure(),
    ) {
        let up = (1u32 << width) - 1;
        let limits = Limits::default();
        let profile = |pieces: Vec<Piece>| {
            let side = Planar::new(width, pieces).compile(up);
            assert_eq!(side.inputs, (0..width).map(Endpoint::Bottom).collect::<Vec<_>>());
            assert_eq!(side.outputs, (0..width).map(Endpoint::Top).collect::<Vec<_>>());
            boundary_profile(&side.tangle, &s, &limits).unwrap()
        };
        let stacked: Vec<Piece> = lower.iter().chain(&upper).copied().collect();
        let whole = profile(stacked);
        let composed = profile(lower).compose(&profile(upper));
        prop_assert_eq!(whole, composed);
    }
}
