mod common;

use common::{convolution_stalk, derived_hom_dim, grid6, probe_points, random_sheaf, rng, stalk};
use lagsheaf::intervalsheaves::{
    convolve, global_sections, hom_star, windowed_sections, DecoratedInterval, IntervalSheaf,
};
use lagsheaf::rational::{qi, Ext, Q};
use rand::Rng;

#[test]
fn convolution_matches_stalks_on_grid() {
    let mut r = rng(11);
    let grid = grid6();
    for _ in 0..150 {
        let f = random_sheaf(&mut r, &grid, 2);
        let g = random_sheaf(&mut r, &grid, 2);
        let fg = convolve(&f, &g).unwrap();
        let mut pts = fg.breakpoints();
        for a in &grid {
            for b in &grid {
                pts.push(a + b);
            }
        }
        for t in probe_points(pts) {
            assert_eq!(stalk(&fg, &t), convolution_stalk(&f, &g, &t), "{f} ⋆ {g} at {t}");
        }
    }
}

#[test]
fn hom_star_is_right_adjoint() {
    let mut r = rng(12);
    let grid = grid6();
    let probe_grid: Vec<Q> = (-8..=8).map(|v| Q::new(v.into(), 2.into())).collect();
    let mut nonzero = 0;
    for _ in 0..60 {
        let g = random_sheaf(&mut r, &grid, 2);
        let h = random_sheaf(&mut r, &grid, 2);
        let internal = hom_star(&g, &h).unwrap();
        for _ in 0..6 {
            let f = random_sheaf(&mut r, &probe_grid, 1);
            let fg = convolve(&f, &g).unwrap();
            for k in -3..=3 {
                let lhs = derived_hom_dim(&fg, &h, k);
                nonzero += usize::from(lhs > 0);
                assert_eq!(
                    lhs,
                    derived_hom_dim(&f, &internal, k),
                    "k={k} F={f} G={g} H={h} Hom⋆={internal}"
                );
            }
        }
    }
    assert!(nonzero > 50, "only {nonzero} nonzero Hom groups exercised");
}

#[test]
fn sections_match_quiver_hom() {
    let mut r = rng(13);
    let grid = grid6();
    let ends: Vec<Ext> = std::iter::once(Ext::NegInf)
        .chain((-7..=9).map(|v| Ext::Finite(Q::new(v.into(), 2.into()))))
        .chain(std::iter::once(Ext::PosInf))
        .collect();
    for _ in 0..80 {
        let f = random_sheaf(&mut r, &grid, 3);
        let whole = IntervalSheaf::single(
            DecoratedInterval::open(Ext::NegInf, Ext::PosInf).unwrap(),
            0,
        );
        let gs = global_sections(&f);
        for k in -3..=3 {
            assert_eq!(gs.get(k), derived_hom_dim(&whole, &f, k), "{f}");
        }
        for _ in 0..6 {
            let i = r.gen_range(0..ends.len() - 1);
            let j = r.gen_range(i + 1..ends.len());
            let (a, b) = (ends[i].clone(), ends[j].clone());
            let window = match (&a, &b) {
                (Ext::NegInf, _) => DecoratedInterval::new(a.clone(), b.clone(), false, false),
                _ => DecoratedInterval::new(a.clone(), b.clone(), true, false),
            }
            .unwrap();
            let probe = IntervalSheaf::single(window, 0);
            let ws = windowed_sections(&f, &a, &b).unwrap();
            for k in -3..=3 {
                assert_eq!(ws.get(k), derived_hom_dim(&probe, &f, k), "{f} on [{a},{b})");
            }
        }
    }
}

#[test]
fn quiver_oracle_sanity() {
    // k_[0,1) is a subsheaf of k_[0,∞), not a quotient.
    let ray = IntervalSheaf::bar(qi(0), None);
    let seg = IntervalSheaf::bar(qi(0), Some(qi(1)));
    assert_eq!(derived_hom_dim(&seg, &ray, 0), 1);
    assert_eq!(derived_hom_dim(&ray, &seg, 0), 0);
    // Ext¹(k_[1,∞), k_[0,1)) = k: the extension 0 → k_[0,1) → k_[0,∞) → k_[1,∞) → 0.
    assert_eq!(derived_hom_dim(&IntervalSheaf::bar(qi(1), None), &seg, 1), 1);
}
