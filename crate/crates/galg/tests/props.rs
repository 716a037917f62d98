//! Property tests over randomly drawn structures.

use galg::abelian;
use galg::groupoid::{gamma_groupoid, FiniteGroup};
use galg::instances;
use galg::ring::FiniteRing;
use galg::skewring::SkewRing;
use proptest::prelude::*;

fn small_ring() -> impl Strategy<Value = std::sync::Arc<FiniteRing>> {
    prop_oneof![
        (2u64..=9).prop_map(|n| FiniteRing::zmod(n).unwrap()),
        prop_oneof![Just((2u64, 2u32)), Just((3, 2)), Just((2, 3)), Just((5, 2))]
            .prop_map(|(p, k)| FiniteRing::gf(p, k).unwrap()),
        (2u64..=4, 2u64..=4).prop_map(|(a, b)| {
            FiniteRing::product(vec![
                FiniteRing::zmod(a).unwrap(),
                FiniteRing::zmod(b).unwrap(),
            ])
            .unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn element_names_round_trip(ring in small_ring(), idx in 0usize..4096) {
        let e = galg::ring::El((idx % ring.len()) as u16);
        let name = ring.name(e).to_string();
        prop_assert_eq!(ring.parse(&name).unwrap(), e);
    }

    #[test]
    fn smith_form_diagonalizes(entries in proptest::collection::vec(-9i128..=9, 9)) {
        let a: Vec<Vec<i128>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let s = abelian::smith(&a);
        let uav = abelian::mat_mul(&abelian::mat_mul(&s.left, &a), &s.right);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diag[i] } else { 0 };
                prop_assert_eq!(uav[i][j], want);
            }
        }
        // divisibility chain over the nonzero prefix
        for i in 0..s.rank.saturating_sub(1) {
            prop_assert_eq!(s.diag[i + 1] % s.diag[i], 0);
        }
    }

    #[test]
    fn subgroup_spans_are_closed(coords in proptest::collection::vec(0i128..6, 6)) {
        let moduli = [2i128, 3, 6];
        let gens: Vec<Vec<i128>> = coords.chunks(3).map(|c| c.to_vec()).collect();
        let sub = abelian::Subgroup::new(&moduli, &gens);
        // the sum of any two generators stays inside
        let sum: Vec<i128> = gens[0].iter().zip(&gens[1]).map(|(&a, &b)| a + b).collect();
        prop_assert!(sub.contains(&sum));
        prop_assert!(sub.contains(&[0, 0, 0]));
    }

    #[test]
    fn gamma_groupoids_always_validate(n in 1usize..=4, m in 1usize..=3) {
        let gd = gamma_groupoid(&FiniteGroup::cyclic(n), m, 1).unwrap();
        prop_assert_eq!(gd.len(), n * m * m);
        prop_assert!(gd.is_connected());
    }

    #[test]
    fn skew_product_distributes(picks in proptest::collection::vec((0usize..4, 0usize..9), 6)) {
        let inst = instances::pair_swap();
        let skew = SkewRing::new(inst.action.clone()).unwrap();
        let gd = skew.groupoid().clone();
        let mk = |sel: &[(usize, usize)]| {
            let mut acc = skew.zero_elem();
            for &(gi, ai) in sel {
                let g = galg::groupoid::Morph(gi as u16);
                let ideal = skew.action().ideal(g);
                let a = ideal.members()[ai % ideal.len()];
                acc = acc.add(&skew.monomial(g, a).unwrap()).unwrap();
            }
            acc
        };
        let x = mk(&picks[0..2]);
        let y = mk(&picks[2..4]);
        let z = mk(&picks[4..6]);
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs2 = y.add(&z).unwrap().mul(&x).unwrap();
        let rhs2 = y.mul(&x).unwrap().add(&z.mul(&x).unwrap()).unwrap();
        prop_assert_eq!(lhs2, rhs2);
        let _ = gd;
    }
}
