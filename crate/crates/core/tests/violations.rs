//! Deliberately broken structures: the move oracle must catch each defect
//! in the family the defect belongs to.

use twistcolor_core::algebra::{check_biquandle, Biquandle, ElementMap, FiniteQuandle, PairEncoding, PairMap};
use twistcolor_core::coloring::{count_colorings, ColoringError, CountOptions};
use twistcolor_core::diagram::make_fm;
use twistcolor_core::moves::{check_family, check_move_invariance, MoveFamily};
use twistcolor_core::structures::{
    remark_counterexample, remark_structure, standard_twisted_product, swap_map, twist_map, twisted_product_biquandle,
    VtStructure,
};
use twistcolor_core::Limits;

fn fails(s: &VtStructure, family: MoveFamily) -> bool {
    !check_family(family, s, &Limits::default()).unwrap().passed()
}

/// `V(a, b) = (h⁻¹ b, h a)` with `h` acting coordinatewise on pairs.
fn lifted_v(h: &ElementMap) -> PairMap {
    let n = h.len();
    let hh = h.product(h);
    let hh_inv = hh.inverse().unwrap();
    PairMap::from_fn(n * n, |x, y| (hh_inv.apply(y), hh.apply(x)))
}

#[test]
fn non_involutive_t_breaks_t2() {
    let s = standard_twisted_product(&FiniteQuandle::dihedral(3).unwrap());
    // Swap coordinates, then rotate three pair elements.
    let mut images = swap_map(3).as_slice().to_vec();
    let (a, b, c) = (images[1], images[2], images[3]);
    images[1] = b;
    images[2] = c;
    images[3] = a;
    let t = ElementMap::new(9, images).unwrap();
    assert!(!t.is_involution());
    let broken = VtStructure::from_tables(s.r().clone(), s.v().clone(), t).unwrap();
    assert!(!broken.is_verified());
    assert!(fails(&broken, MoveFamily::T2));
    assert!(!fails(&broken, MoveFamily::R2));
}

#[test]
fn v_from_a_non_automorphism_breaks_the_mixed_move() {
    let x0 = Biquandle::derived(&FiniteQuandle::dihedral(4).unwrap());
    let h = ElementMap::new(4, vec![1, 0, 2, 3]).unwrap();
    assert!(!x0.is_automorphism(&h));
    let base = twisted_product_biquandle(&x0);
    let s = VtStructure::from_tables(base.r().clone(), lifted_v(&h), twist_map(&ElementMap::identity(4))).unwrap();
    assert!(fails(&s, MoveFamily::V4));
    assert!(!fails(&s, MoveFamily::R3));
}

#[test]
fn non_commuting_twist_breaks_t1() {
    let x0 = Biquandle::derived(&FiniteQuandle::dihedral(3).unwrap());
    let f = ElementMap::from_fn(3, |x| (3 - x) % 3);
    let g = ElementMap::from_fn(3, |x| (x + 1) % 3);
    assert!(x0.is_automorphism(&f) && x0.is_automorphism(&g));
    assert_ne!(f.compose(&g), g.compose(&f));
    let base = twisted_product_biquandle(&x0);
    let s = VtStructure::from_tables(base.r().clone(), lifted_v(&f), twist_map(&g)).unwrap();
    assert!(fails(&s, MoveFamily::T1));
    for family in [MoveFamily::R1, MoveFamily::R2, MoveFamily::R3, MoveFamily::V2, MoveFamily::V4] {
        assert!(!fails(&s, family), "{family} should hold");
    }
}

#[test]
fn non_commuting_permutation_pair_breaks_r3() {
    let sigma = ElementMap::new(3, vec![1, 0, 2]).unwrap();
    let tau = ElementMap::new(3, vec![0, 2, 1]).unwrap();
    assert_ne!(sigma.compose(&tau), tau.compose(&sigma));
    let r = PairMap::from_fn(3, |x, y| (sigma.apply(y), tau.apply(x)));
    assert!(!check_biquandle(&r).all_passed());
    let s = VtStructure::from_tables(r, PairMap::transposition(3), ElementMap::identity(3)).unwrap();
    assert!(fails(&s, MoveFamily::R3));
}

#[test]
fn unverified_structures_are_refused_unless_forced() {
    let s = remark_structure(&FiniteQuandle::alexander(5, 3).unwrap());
    let d = make_fm(1).unwrap();
    let refused = count_colorings(&d, &s, &CountOptions::default());
    assert!(matches!(refused, Err(ColoringError::Unverified(_))));
    let forced = CountOptions { force: true, ..Default::default() };
    assert!(count_colorings(&d, &s, &forced).is_ok());
}

#[test]
fn remark_construction_fails_only_the_twist_move() {
    let q = FiniteQuandle::alexander(5, 3).unwrap();
    assert!(!q.is_involutory());
    let outcome = remark_counterexample(&q);
    assert!(!outcome.equal);
    let (x, y) = outcome.witness.unwrap();
    assert_ne!(outcome.lhs.apply(x, y), outcome.rhs.apply(x, y));
    let report = check_move_invariance(&remark_structure(&q), &Limits::default()).unwrap();
    assert_eq!(report.failing_families(), [MoveFamily::T3]);
}

#[test]
fn remark_construction_is_fine_for_involutory_quandles() {
    let q = FiniteQuandle::dihedral(3).unwrap();
    assert!(q.is_involutory());
    assert!(remark_counterexample(&q).equal);
    let s = remark_structure(&q);
    assert!(s.is_verified());
    assert!(!fails(&s, MoveFamily::T3));
    // For an involutory quandle the dual operation is the operation itself.
    let enc = PairEncoding::new(3, 3);
    let standard = standard_twisted_product(&q);
    for x in 0..9 {
        for y in 0..9 {
            assert_eq!(s.r().apply(x, y), standard.r().apply(x, y), "{:?} {:?}", enc.decode(x), enc.decode(y));
        }
    }
}
