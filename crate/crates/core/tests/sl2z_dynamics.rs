use catdyn::sl2z_dynamics::{
    classify_sl2, crosscheck_with_lattice, trichotomy_report, word_to_matrix, Context, Sl2Class, Sl2Element,
    TwistWord,
};
use proptest::prelude::*;

fn word(ctx: Context) -> impl Strategy<Value = TwistWord> {
    (
        prop::collection::vec((1u8..=2, prop::sample::select(vec![-2i64, -1, 1, 2])), 0..10),
        -3i64..=3,
    )
        .prop_map(move |(letters, shift)| TwistWord::new(ctx, letters, shift))
}

#[test]
fn a2_relations() {
    let ctx = Context::A2Cy3;
    let t1 = Sl2Element::from_i64(ctx.generator(1)).unwrap();
    let t2 = Sl2Element::from_i64(ctx.generator(2)).unwrap();
    // braid relation and (T1 T2)^3 = -I
    assert_eq!(t1.mul(&t2).mul(&t1), t2.mul(&t1).mul(&t2));
    let minus = Sl2Element::from_i64([[-1, 0], [0, -1]]).unwrap();
    assert_eq!(t1.mul(&t2).pow(3), minus);
    assert_eq!(t1.mul(&t2).pow(6), Sl2Element::identity());
}

#[test]
fn parsed_words() {
    let w = TwistWord::parse(Context::A2Cy3, "T1 T2^-1").unwrap();
    let r = trichotomy_report(&w);
    assert_eq!(r.classification, Sl2Class::Hyperbolic);
    assert_eq!(r.trace, 3.into());
    assert!((r.h_cat - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
    assert!(r.pseudo_anosov);
    assert!(TwistWord::parse(Context::A2Cy3, "T3").is_err());
    let p = trichotomy_report(&TwistWord::parse(Context::A2Cy3, "T1^5").unwrap());
    assert_eq!((p.classification, p.h_pol), (Sl2Class::ParabolicNonCentral, 1));
}

#[test]
fn shifts_do_not_change_the_matrix() {
    let w = TwistWord::new(Context::A2Cy3, [], 4);
    assert_eq!(word_to_matrix(&w), Sl2Element::identity());
    assert_eq!(classify_sl2(&word_to_matrix(&w)), Sl2Class::EllipticOrCentral);
}

proptest! {
    #[test]
    fn homomorphism(a in word(Context::A2Cy3), b in word(Context::A2Cy3)) {
        prop_assert_eq!(word_to_matrix(&a.concat(&b)), word_to_matrix(&a).mul(&word_to_matrix(&b)));
    }

    #[test]
    fn inverse_law(w in word(Context::A2Cy3)) {
        let g = word_to_matrix(&w);
        prop_assert_eq!(word_to_matrix(&w.inverse()), g.inverse());
        let a = trichotomy_report(&w);
        let b = trichotomy_report(&w.inverse());
        prop_assert_eq!(a.classification, b.classification);
        prop_assert_eq!(a.h_pol, b.h_pol);
        prop_assert!((a.h_cat - b.h_cat).abs() < 1e-12);
    }

    #[test]
    fn class_is_a_conjugacy_invariant(w in word(Context::Elliptic), c in word(Context::Elliptic)) {
        let conj = c.concat(&w).concat(&c.inverse());
        let a = trichotomy_report(&w);
        let b = trichotomy_report(&conj);
        prop_assert_eq!(a.classification, b.classification);
        prop_assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn trace_rule_matches_lattice(w in word(Context::A2Cy3)) {
        let x = crosscheck_with_lattice(&w).unwrap();
        prop_assert!(x.consistent, "{}", x.details);
    }

    #[test]
    fn powers_scale_entropy(w in word(Context::Elliptic), m in 1usize..=4) {
        let a = trichotomy_report(&w);
        let b = trichotomy_report(&w.pow(m));
        prop_assert!((b.h_cat - m as f64 * a.h_cat).abs() <= 1e-9 * b.h_cat.max(1.0));
    }
}
