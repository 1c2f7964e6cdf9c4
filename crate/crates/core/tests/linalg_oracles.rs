mod common;

use common::{descartes_inertia, rng, sturm_inertia};
use lagsheaf::matrix::QMatrix;
use lagsheaf::rational::{qi, Q};
use lagsheaf::sample;
use lagsheaf::symplinalg::{
    fiber, graph_of_symmetric, inertia_index, signature_of_symmetric, zero_section,
    LagrangianFrame, SymplecticSpace,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

/// `σ(u, v) = ⟨u_ξ, v_x⟩ − ⟨v_ξ, u_x⟩` on raw coordinate vectors.
fn sigma(n: usize, u: &[Q], v: &[Q]) -> Q {
    let mut s = Q::zero();
    for i in 0..n {
        s += &u[n + i] * &v[i] - &v[n + i] * &u[i];
    }
    s
}

/// Gram matrix of `σ(v₁,v₂)+σ(v₂,v₃)+σ(v₃,v₁)` assembled entry by entry.
fn triple_form(frames: [&LagrangianFrame; 3]) -> QMatrix {
    let n = frames[0].space().half_dim();
    let cols: Vec<Vec<Vec<Q>>> = frames
        .iter()
        .map(|f| (0..n).map(|j| f.columns().column(j)).collect())
        .collect();
    QMatrix::from_fn(3 * n, 3 * n, |r, c| {
        let (a, i) = (r / n, r % n);
        let (b, j) = (c / n, c % n);
        if (a + 1) % 3 == b {
            sigma(n, &cols[a][i], &cols[b][j])
        } else if (b + 1) % 3 == a {
            sigma(n, &cols[b][j], &cols[a][i])
        } else {
            Q::zero()
        }
    })
}

#[test]
fn signature_matches_sturm_and_descartes() {
    let mut r = rng(1);
    for _ in 0..300 {
        let n = r.gen_range(1..=6);
        let a = if r.gen_bool(0.3) {
            sample::symmetric_low_rank(&mut r, n, 3)
        } else {
            sample::symmetric(&mut r, n, 5)
        };
        let fast = signature_of_symmetric(&a).unwrap();
        let sturm = sturm_inertia(&a);
        assert_eq!((fast.pos, fast.neg, fast.zero), sturm, "{a:?}");
        assert_eq!(sturm, descartes_inertia(&a), "{a:?}");
    }
}

#[test]
fn inertia_index_matches_hand_built_form() {
    let mut r = rng(2);
    for _ in 0..200 {
        let n = r.gen_range(1..=3);
        let space = SymplecticSpace::new(n).unwrap();
        let l: Vec<LagrangianFrame> = (0..3).map(|_| sample::lagrangian(&mut r, space)).collect();
        let (pos, neg, _) = sturm_inertia(&triple_form([&l[0], &l[1], &l[2]]));
        assert_eq!(
            inertia_index(&l[0], &l[1], &l[2]).unwrap(),
            pos as i64 - neg as i64
        );
    }
}

#[test]
fn graph_anchor_on_a_fixed_diagonal() {
    let space = SymplecticSpace::new(3).unwrap();
    let a = QMatrix::diagonal(&[qi(1), qi(-1), qi(2)]);
    let g = graph_of_symmetric(space, &a).unwrap();
    assert_eq!(inertia_index(&fiber(space), &zero_section(space), &g).unwrap(), -1);
    assert_eq!(inertia_index(&g, &zero_section(space), &fiber(space)).unwrap(), 1);
}

#[test]
fn degenerate_triples_have_zero_index() {
    let mut r = rng(3);
    for _ in 0..50 {
        let space = SymplecticSpace::new(r.gen_range(1..=3)).unwrap();
        let l = sample::lagrangian(&mut r, space);
        let m = sample::lagrangian(&mut r, space);
        assert_eq!(inertia_index(&l, &l, &m).unwrap(), 0);
        assert_eq!(inertia_index(&l, &m, &m).unwrap(), 0);
    }
}

proptest! {
    #[test]
    fn signature_is_a_congruence_invariant(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = sample::symmetric(&mut r, n, 4);
        let p = sample::invertible(&mut r, n);
        let b = &(&p.transpose() * &a) * &p;
        prop_assert_eq!(signature_of_symmetric(&a).unwrap(), signature_of_symmetric(&b).unwrap());
    }
}
