mod common;

use common::{brute_pair_dim, lower_star_values, rng};
use lagsheaf::flathomology::{relative_dim, CellComplex, PLFunction, Persistence};
use lagsheaf::rational::{q, qi, Ext, Q};
use proptest::prelude::*;
use rand::Rng;

fn builtins() -> Vec<(&'static str, CellComplex, Vec<usize>)> {
    vec![
        ("point", CellComplex::point(), vec![1]),
        ("circle", CellComplex::circle(7).unwrap(), vec![1, 1]),
        ("torus", CellComplex::torus(4, 5).unwrap(), vec![1, 2, 1]),
        ("sphere2", CellComplex::sphere2(2).unwrap(), vec![1, 0, 1]),
        (
            "two circles",
            CellComplex::circle(3).unwrap().disjoint_union(&CellComplex::circle(4).unwrap()),
            vec![2, 2],
        ),
    ]
}

fn endpoint(v: Option<i64>, inf: Ext) -> Ext {
    v.map_or(inf, |v| Ext::Finite(q(v, 2)))
}

#[test]
fn builtin_betti_numbers() {
    for (name, cx, betti) in builtins() {
        assert_eq!(cx.betti_numbers(), betti, "{name}");
        let euler: i64 = betti
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum();
        assert_eq!(cx.euler_characteristic(), euler, "{name}");
    }
}

#[test]
fn window_dims_match_dense_pair_cohomology() {
    let mut r = rng(31);
    for (name, cx, _) in builtins() {
        for _ in 0..25 {
            let values: Vec<Q> = (0..cx.num_vertices()).map(|_| qi(r.gen_range(-3..=3))).collect();
            let f = PLFunction::new(&cx, values.clone()).unwrap();
            let p = Persistence::compute(&cx, &f);
            let cells = lower_star_values(&cx, &values);
            for _ in 0..5 {
                let a = endpoint(r.gen_bool(0.8).then(|| r.gen_range(-8..=8)), Ext::NegInf);
                let b = match &a {
                    Ext::Finite(v) if r.gen_bool(0.8) => Ext::Finite(v + q(r.gen_range(1..=8), 2)),
                    _ => Ext::PosInf,
                };
                for k in 0..=cx.dimension().unwrap() {
                    assert_eq!(
                        p.window(&a, &b, k).unwrap(),
                        brute_pair_dim(&cx, &cells, &a, &b, k),
                        "{name} [{a},{b}) k={k} values {values:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn full_window_recovers_betti_numbers() {
    let mut r = rng(32);
    for (name, cx, betti) in builtins() {
        let values: Vec<Q> = (0..cx.num_vertices()).map(|_| qi(r.gen_range(-3..=3))).collect();
        let f = PLFunction::new(&cx, values).unwrap();
        for (k, b) in betti.iter().enumerate() {
            assert_eq!(relative_dim(&cx, &f, &Ext::NegInf, &Ext::PosInf, k).unwrap(), *b, "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn barcode_matches_dense_ranks_on_the_circle(
        values in proptest::collection::vec(-4i64..=4, 9),
        a in -9i64..=9,
        len in 1i64..=10,
    ) {
        let cx = CellComplex::circle(9).unwrap();
        let values: Vec<Q> = values.into_iter().map(qi).collect();
        let f = PLFunction::new(&cx, values.clone()).unwrap();
        let p = Persistence::compute(&cx, &f);
        let cells = lower_star_values(&cx, &values);
        let (a, b) = (Ext::Finite(q(a, 2)), Ext::Finite(q(a + len, 2)));
        for k in 0..=1 {
            prop_assert_eq!(p.window(&a, &b, k).unwrap(), brute_pair_dim(&cx, &cells, &a, &b, k));
        }
    }
}
