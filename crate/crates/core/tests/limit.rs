use hypgrowth::limit::*;
use hypgrowth::{GeneratingSet, Group, Homomorphism};

#[test]
fn conjugation_sequence_never_factors() {
    let f2 = Group::new("f2".parse().unwrap()).unwrap();
    let seq = HomomorphismSequence::from_templates(&f2, &["a", "a^n b A^n"]).unwrap();
    let r = factoring_check(&seq, &["abAB", "aabAAB"], 64).unwrap();
    assert_eq!(r.n0, None);
    assert_eq!(r.samples.last(), Some(&64));
}

#[test]
fn quotient_onto_baumslag_solitar() {
    let source = Group::new("f2".parse().unwrap()).unwrap();
    let bs = Group::new("bs:1,2".parse().unwrap()).unwrap();
    let s = GeneratingSet::standard(&source);
    let h = Homomorphism::new(&bs, bs.generators());
    let c = image_ball_comparison(&source, &s, &h, 7, 1 << 20, 2).unwrap();
    assert!(c.holds);
    // the relator t a T A A has length 5, so the first collision is at radius 3
    assert_eq!(c.source[2], c.image[2]);
    assert!(c.image[3] < c.source[3]);
}

#[test]
fn trivial_images_have_singleton_balls() {
    let f2 = Group::new("f2".parse().unwrap()).unwrap();
    let h = Homomorphism::new(&f2, vec![f2.identity(), f2.identity()]);
    let c = image_ball_comparison(&f2, &GeneratingSet::standard(&f2), &h, 3, 1000, 1).unwrap();
    assert_eq!(c.image, vec![1, 1, 1, 1]);
}
