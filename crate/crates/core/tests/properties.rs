use hypgrowth::experiments::canonical_set;
use hypgrowth::{enumerate_balls, Element, GeneratingSet, Group, Letter, Space, Word};
use proptest::prelude::*;

const MODELS: [&str; 3] = ["f2", "fp:2,3", "bs:2,3,1"];

fn group(i: usize) -> Group {
    Group::new(MODELS[i].parse().unwrap()).unwrap()
}

fn word(rank: u8, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..max)
        .prop_map(|v| Word(v.into_iter().map(|(i, inv)| Letter::new(i, inv)).collect()))
}

fn element(g: &Group, w: &Word) -> Element {
    g.from_word(w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws(m in 0..3usize, x in word(3, 10), y in word(3, 10), z in word(3, 10)) {
        let g = group(m);
        let r = g.rank() as u8;
        let clip = |w: &Word| Word(w.0.iter().map(|l| Letter::new(l.index % r, l.inverse)).collect());
        let (a, b, c) = (element(&g, &clip(&x)), element(&g, &clip(&y)), element(&g, &clip(&z)));
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
        prop_assert!(g.mul(&a, &g.inv(&a)).is_identity());
        // normal forms are canonical
        prop_assert_eq!(g.from_word(&g.to_word(&a)).unwrap(), a.clone());
        prop_assert_eq!(g.parse(&g.format(&a)).unwrap(), a);
    }

    #[test]
    fn tree_action_is_isometric(m in 0..3usize, x in word(3, 8), y in word(3, 8), h in word(3, 8)) {
        let g = group(m);
        let r = g.rank() as u8;
        let clip = |w: &Word| Word(w.0.iter().map(|l| Letter::new(l.index % r, l.inverse)).collect());
        let sp = Space::new(&g).unwrap();
        let o = sp.basepoint();
        let (p, q) = (sp.act(&element(&g, &clip(&x)), &o), sp.act(&element(&g, &clip(&y)), &o));
        let hh = element(&g, &clip(&h));
        prop_assert_eq!(sp.dist(&sp.act(&hh, &p), &sp.act(&hh, &q)), sp.dist(&p, &q));
        prop_assert!(sp.dist(&p, &q) <= sp.dist(&p, &o) + sp.dist(&o, &q));
        prop_assert_eq!(sp.four_point_delta_halves(&[o, p, q, sp.act(&hh, &sp.basepoint())]), 0);
    }

    #[test]
    fn translation_length_is_a_class_function(m in 0..2usize, x in word(2, 8), h in word(2, 6), n in 1i64..5) {
        let g = group(m);
        let sp = Space::new(&g).unwrap();
        let a = element(&g, &x);
        let c = element(&g, &h);
        let l = sp.translation_length(&a);
        prop_assert_eq!(sp.translation_length(&g.conj(&c, &a)), l);
        prop_assert_eq!(sp.translation_length(&g.pow(&a, n)), n as u64 * l);
    }

    #[test]
    fn balls_are_submultiplicative_and_shard_independent(m in 0..3usize, x in word(3, 4), y in word(3, 4)) {
        let g = group(m);
        let r = g.rank() as u8;
        let clip = |w: &Word| Word(w.0.iter().map(|l| Letter::new(l.index % r, l.inverse)).collect());
        let Ok(s) = GeneratingSet::new(&g, [element(&g, &clip(&x)), element(&g, &clip(&y))]) else {
            return Ok(());
        };
        let t = enumerate_balls(&g, &s, 6, 1 << 20, 1);
        prop_assert_eq!(&t, &enumerate_balls(&g, &s, 6, 1 << 20, 4));
        for a in 0..=t.radius() {
            for b in 0..=t.radius() - a {
                prop_assert!(t.balls[a + b] <= t.balls[a] * t.balls[b]);
            }
        }
    }

    #[test]
    fn canonical_sets_keep_their_growth(x in word(2, 4), y in word(2, 4)) {
        let g = group(0);
        let Ok(s) = GeneratingSet::new(&g, [element(&g, &x), element(&g, &y)]) else {
            return Ok(());
        };
        let c = canonical_set(&g, &s.representatives(), 64);
        let t = GeneratingSet::new(&g, c).unwrap();
        prop_assert_eq!(enumerate_balls(&g, &s, 5, 1 << 20, 1).balls, enumerate_balls(&g, &t, 5, 1 << 20, 1).balls);
    }
}

#[test]
fn free_group_ball_oracle() {
    let g = group(0);
    let t = enumerate_balls(&g, &GeneratingSet::standard(&g), 10, 1 << 20, 1);
    for n in 0..=10u32 {
        assert_eq!(t.balls[n as usize], 2 * 3u64.pow(n) - 1);
    }
}

#[test]
fn free_product_sphere_oracle() {
    // spheres of Z/2 * Z/3 in {s, t, T}: 1, 3, 4, 6, 8, 12, 16, ... doubling every two steps
    let g = group(1);
    let t = enumerate_balls(&g, &GeneratingSet::standard(&g), 9, 1 << 20, 1);
    assert_eq!(t.spheres, vec![1, 3, 4, 6, 8, 12, 16, 24, 32, 48]);
}
