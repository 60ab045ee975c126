use ducci::dynamics::*;
use ducci::{RingParams, Tuple};
use proptest::prelude::*;

fn params_and_tuple() -> impl Strategy<Value = Tuple> {
    (1usize..=9, 2u64..=40).prop_flat_map(|(n, m)| {
        proptest::collection::vec(0..m, n)
            .prop_map(move |v| Tuple::new(RingParams::new(n, m).unwrap(), &v).unwrap())
    })
}

fn tuple_pair() -> impl Strategy<Value = (Tuple, Tuple)> {
    (1usize..=9, 2u64..=40).prop_flat_map(|(n, m)| {
        let params = RingParams::new(n, m).unwrap();
        (
            proptest::collection::vec(0..m, n),
            proptest::collection::vec(0..m, n),
        )
            .prop_map(move |(a, b)| {
                (
                    Tuple::new(params, &a).unwrap(),
                    Tuple::new(params, &b).unwrap(),
                )
            })
    })
}

proptest! {
    #[test]
    fn shift_commutes_with_step(u in params_and_tuple(), beta in -20i64..20) {
        prop_assert_eq!(shift(&ducci_step(&u), beta), ducci_step(&shift(&u, beta)));
    }

    #[test]
    fn step_is_identity_plus_shift(u in params_and_tuple()) {
        prop_assert_eq!(ducci_step(&u), add(&u, &shift(&u, 1)).unwrap());
    }

    #[test]
    fn step_is_linear((u, v) in tuple_pair(), c in 0u64..1000) {
        prop_assert_eq!(
            ducci_step(&add(&u, &v).unwrap()),
            add(&ducci_step(&u), &ducci_step(&v)).unwrap()
        );
        prop_assert_eq!(ducci_step(&scale(c, &u)), scale(c, &ducci_step(&u)));
    }

    #[test]
    fn shift_inverse(u in params_and_tuple(), beta in -20i64..20) {
        prop_assert_eq!(shift(&shift(&u, beta), -beta), u.clone());
        prop_assert_eq!(shift(&u, u.params().n() as i64), u);
    }

    #[test]
    fn apply_power_equals_iterate(u in params_and_tuple(), r in 0u64..300) {
        prop_assert_eq!(apply_power(&u, r), iterate(&u, r).unwrap());
    }

    #[test]
    fn decomposition_reconstructs(u in params_and_tuple()) {
        let terms = basis_decompose(&u);
        prop_assert_eq!(basis_reconstruct(u.params(), &terms), u);
    }

    #[test]
    fn basic_sequence_bounds_every_orbit(u in params_and_tuple()) {
        let basic = basic_info(u.params()).unwrap();
        let info = cycle_info(&u).unwrap();
        prop_assert!(info.len <= basic.len);
        prop_assert_eq!(basic.per % info.per, 0);
        // cycle invariant: minimal pair, base on the cycle
        prop_assert_eq!(apply_power(&info.cycle_base, info.per), info.cycle_base.clone());
        prop_assert_eq!(apply_power(&u, info.len), info.cycle_base.clone());
        if info.len > 0 {
            let before = apply_power(&u, info.len - 1);
            prop_assert_ne!(apply_power(&before, info.per), before);
        }
    }

    #[test]
    fn powers_of_two_collapse(ln in 0u32..4, lm in 1u32..6, seed in proptest::collection::vec(0u64..64, 8)) {
        let (n, m) = (1usize << ln, 1u64 << lm);
        let params = RingParams::new(n, m).unwrap();
        let entries: Vec<u64> = seed.iter().take(n).map(|v| v % m).collect();
        let info = cycle_info(&Tuple::new(params, &entries).unwrap()).unwrap();
        prop_assert!(info.cycle_base.is_zero());
        prop_assert_eq!(info.per, 1);
    }

    #[test]
    fn absolute_cycle_entries(start in proptest::collection::vec(0u64..50, 2..8)) {
        let cycle = abs_ducci_cycle(&start, 1_000_000).unwrap();
        let nonzero: std::collections::BTreeSet<u64> =
            entry_values(&cycle).into_iter().filter(|&v| v != 0).collect();
        prop_assert!(nonzero.len() <= 1, "cycle entries {:?}", nonzero);
    }
}

#[test]
fn worked_sequence_listing() {
    let params = RingParams::new(3, 6).unwrap();
    let printed = [
        "0,1,4", "1,5,4", "0,3,5", "3,2,5", "5,1,2", "0,3,1", "3,4,1", "1,5,4",
    ];
    let mut cur = Tuple::parse(params, "0,1,4").unwrap();
    for expected in printed {
        assert_eq!(cur.to_string(), expected);
        cur = ducci_step(&cur);
    }
}

#[test]
fn large_power_closes_cycle() {
    let params = RingParams::new(11, 17).unwrap();
    let info = basic_info(params).unwrap();
    assert_eq!(info.per, 709_928 * 11);
    let e = Tuple::basic(params);
    let w = apply_power(&e, info.len);
    assert_eq!(apply_power(&w, 709_928 * 11), w);
    assert_eq!(apply_power(&e, info.len + 709_928 * 11), info.cycle_base);
}
