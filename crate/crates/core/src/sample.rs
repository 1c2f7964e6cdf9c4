//! Seeded random generators for rational matrices, Lagrangians and path lifts.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::maslov::PathLift;
use crate::matrix::QMatrix;
use crate::rational::{q, Q};
use crate::symplinalg::{
    cograph_of_symmetric, fiber, graph_of_symmetric, intersection_dim, zero_section,
    LagrangianFrame, SymplecticSpace,
};

/// Small rational with numerator in `[-range, range]` and denominator in `1..=3`.
pub fn small_q<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Q {
    q(rng.gen_range(-range..=range), rng.gen_range(1..=3))
}

pub fn symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, range: i64) -> QMatrix {
    let mut a = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = small_q(rng, range);
            a[(i, j)] = v.clone();
            a[(j, i)] = v;
        }
    }
    a
}

/// Symmetric matrix of low rank, to exercise degenerate configurations.
pub fn symmetric_low_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, range: i64) -> QMatrix {
    let rank = rng.gen_range(0..n.max(1));
    let mut a = QMatrix::zeros(n, n);
    for _ in 0..rank {
        let v: Vec<Q> = (0..n).map(|_| small_q(rng, range)).collect();
        let s = if rng.gen_bool(0.5) { q(1, 1) } else { q(-1, 1) };
        for i in 0..n {
            for j in 0..n {
                let add = &s * &v[i] * &v[j];
                a[(i, j)] += add;
            }
        }
    }
    a
}

pub fn nondegenerate_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, range: i64) -> QMatrix {
    loop {
        let a = symmetric(rng, n, range);
        if !a.det().is_zero() {
            return a;
        }
    }
}

/// Unit lower-triangular integer matrix times a random permutation: invertible over ℤ.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix {
    let mut l = QMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = q(rng.gen_range(-2..=2), 1);
        }
    }
    let mut u = QMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] = q(rng.gen_range(-2..=2), 1);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = QMatrix::identity(n).select_rows(&perm);
    &(&l * &u) * &p
}

/// Product of random elementary symplectic matrices (shears and `diag(A, A^{-T})`).
pub fn symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix {
    let mut t = QMatrix::identity(2 * n);
    for _ in 0..3 {
        let factor = match rng.gen_range(0..3) {
            0 => {
                let s = symmetric(rng, n, 2);
                let mut m = QMatrix::identity(2 * n);
                m.set_block(n, 0, &s);
                m
            }
            1 => {
                let s = symmetric(rng, n, 2);
                let mut m = QMatrix::identity(2 * n);
                m.set_block(0, n, &s);
                m
            }
            _ => {
                let a = invertible(rng, n);
                let a_inv_t = a.inverse().expect("invertible").transpose();
                QMatrix::block_diag(&[&a, &a_inv_t])
            }
        };
        t = &t * &factor;
    }
    t
}

/// A random Lagrangian: graphs, cographs, coordinate planes, low-rank graphs,
/// optionally moved by a symplectic map, presented in a random basis.
pub fn lagrangian<R: Rng + ?Sized>(rng: &mut R, space: SymplecticSpace) -> LagrangianFrame {
    let n = space.half_dim();
    let base = match rng.gen_range(0..6) {
        0 => graph_of_symmetric(space, &symmetric(rng, n, 3)).unwrap(),
        1 => cograph_of_symmetric(space, &symmetric(rng, n, 3)).unwrap(),
        2 => graph_of_symmetric(space, &symmetric_low_rank(rng, n, 2)).unwrap(),
        3 => {
            // Mixed coordinate plane: fiber directions on a random subset.
            let mut f = QMatrix::zeros(2 * n, n);
            for i in 0..n {
                if rng.gen_bool(0.5) {
                    f[(n + i, i)] = q(1, 1);
                } else {
                    f[(i, i)] = q(1, 1);
                }
            }
            LagrangianFrame::new(space, f).unwrap()
        }
        4 => {
            if rng.gen_bool(0.5) {
                fiber(space)
            } else {
                zero_section(space)
            }
        }
        _ => {
            let t = symplectic(rng, n);
            let l = graph_of_symmetric(space, &symmetric(rng, n, 2)).unwrap();
            LagrangianFrame::new(space, &t * l.columns()).unwrap()
        }
    };
    let basis = invertible(rng, n);
    LagrangianFrame::new(space, base.columns() * &basis).unwrap()
}

/// A random Lagrangian transverse to every frame in `avoid`.
pub fn transverse_lagrangian<R: Rng + ?Sized>(
    rng: &mut R,
    space: SymplecticSpace,
    avoid: &[&LagrangianFrame],
) -> LagrangianFrame {
    loop {
        let n = space.half_dim();
        let cand = if rng.gen_bool(0.5) {
            graph_of_symmetric(space, &symmetric(rng, n, 4)).unwrap()
        } else {
            let t = symplectic(rng, n);
            LagrangianFrame::new(space, &t * fiber(space).columns()).unwrap()
        };
        if avoid
            .iter()
            .all(|l| intersection_dim(&cand, l).unwrap() == 0)
        {
            return cand;
        }
    }
}

/// A random lift starting at the fiber: `steps` chart segments, each ending at
/// a random Lagrangian and drawn in a random chart containing both ends.
pub fn path_lift<R: Rng + ?Sized>(rng: &mut R, space: SymplecticSpace, steps: usize) -> PathLift {
    let mut lift = PathLift::constant(space);
    for _ in 0..steps {
        let start = lift.endpoint();
        let end = lagrangian(rng, space);
        let theta = transverse_lagrangian(rng, space, &[&start, &end]);
        lift = lift.then(theta, end).expect("chart contains both ends");
    }
    if rng.gen_bool(0.3) {
        lift = lift.deck(rng.gen_range(-2..=2));
    }
    lift
}
