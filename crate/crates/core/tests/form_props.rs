use proptest::prelude::*;
use rand::Rng;
use ribbon_moduli::enumerate::{automorphisms, canonical_key};
use ribbon_moduli::random;
use ribbon_moduli::rational::q;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), n in 1usize..=4, k in 0usize..=2) {
        let mut rng = random::rng(seed);
        let w = random::form(&mut rng, n, k.min(n), 3);
        prop_assert!(w.d().d().is_zero());
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = random::rng(seed);
        let k = rng.gen_range(0..n);
        let a = random::form(&mut rng, n, k, 2);
        let j = rng.gen_range(0..n - k);
        let b = random::form(&mut rng, n, j, 2);
        let sign = if k % 2 == 0 { q(1) } else { q(-1) };
        let rhs = a.d().wedge(&b).add(&a.wedge(&b.d()).scale(&sign));
        prop_assert_eq!(a.wedge(&b).d(), rhs);
    }

    #[test]
    fn pullback_commutes_with_d(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let map: Vec<_> = (0..n).map(|_| random::poly(&mut rng, m, 2, 3)).collect();
        let k = rng.gen_range(0..n);
        let w = random::form(&mut rng, n, k, 2);
        prop_assert_eq!(w.pullback(&map).d(), w.d().pullback(&map));
    }

    #[test]
    fn face_relabeling_keeps_genus_and_aut(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::stable_graph(&mut rng, 6);
        let h = random::shuffle_face_labels(&mut rng, &g);
        prop_assert_eq!(g.genus(), h.genus());
        prop_assert_eq!(g.face_count(), h.face_count());
        prop_assert_eq!(automorphisms(&g).order, automorphisms(&h).order);
        if g.face_label_of() == h.face_label_of() {
            prop_assert_eq!(canonical_key(&g), canonical_key(&h));
        }
    }
}
