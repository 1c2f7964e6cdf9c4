//! Independent oracles shared by the integration tests. Nothing here calls
//! the library routine it is used to check.
#![allow(dead_code)]

use lagsheaf::flathomology::CellComplex;
use lagsheaf::intervalsheaves::{DecoratedInterval, IntervalSheaf};
use lagsheaf::matrix::QMatrix;
use lagsheaf::rational::{qi, Ext, Q};
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Signature via the characteristic polynomial and Sturm sequences.

/// Coefficients, lowest degree first.
type Poly = Vec<Q>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    if p.is_empty() {
        p.push(Q::zero());
    }
    p
}

fn is_zero_poly(p: &Poly) -> bool {
    p.iter().all(Zero::is_zero)
}

fn deg(p: &Poly) -> usize {
    trim(p.clone()).len() - 1
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * qi(i as i64))
            .collect(),
    )
}

fn poly_divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![Q::zero()], r);
    }
    let mut quot = vec![Q::zero(); r.len() - db];
    while !is_zero_poly(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let c = &r[dr] / &lead;
        quot[dr - db] = c.clone();
        for i in 0..=db {
            let v = &c * &b[i];
            r[dr - db + i] -= v;
        }
        r = trim(r);
        if dr == 0 {
            break;
        }
    }
    (trim(quot), r)
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !is_zero_poly(&y) {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().unwrap().clone();
    x.iter().map(|c| c / &lead).collect()
}

fn eval(p: &Poly, x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn sign_changes(values: &[i32]) -> usize {
    let nz: Vec<i32> = values.iter().copied().filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sgn(q: &Q) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Distinct roots of a squarefree polynomial in `(0, ∞)` and `(−∞, 0)`.
fn sturm_counts(p: &Poly) -> (usize, usize) {
    let mut seq = vec![trim(p.clone()), derivative(p)];
    while !is_zero_poly(seq.last().unwrap()) {
        let n = seq.len();
        let (_, r) = poly_divmod(&seq[n - 2], &seq[n - 1]);
        seq.push(r.iter().map(|c| -c.clone()).collect());
    }
    seq.pop();
    let at_zero: Vec<i32> = seq.iter().map(|s| sgn(&eval(s, &Q::zero()))).collect();
    let at_pos_inf: Vec<i32> = seq.iter().map(|s| sgn(s.last().unwrap())).collect();
    let at_neg_inf: Vec<i32> = seq
        .iter()
        .map(|s| {
            let d = deg(s);
            let l = sgn(s.last().unwrap());
            if d % 2 == 0 {
                l
            } else {
                -l
            }
        })
        .collect();
    let v0 = sign_changes(&at_zero);
    (
        v0 - sign_changes(&at_pos_inf),
        sign_changes(&at_neg_inf) - v0,
    )
}

/// `det(xI − A)` by Faddeev–LeVerrier.
pub fn char_poly(a: &QMatrix) -> Poly {
    let n = a.rows();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = QMatrix::zeros(n, n);
    let id = QMatrix::identity(n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale(&coeffs[n - k + 1]);
        let am = a * &m;
        coeffs[n - k] = -am.trace() / qi(k as i64);
    }
    coeffs
}

/// `(pos, neg, zero)` eigenvalue counts of a symmetric matrix, with
/// multiplicity, via Yun's squarefree factorization and Sturm sequences.
pub fn sturm_inertia(a: &QMatrix) -> (usize, usize, usize) {
    let n = a.rows();
    if n == 0 {
        return (0, 0, 0);
    }
    let mut p = char_poly(a);
    let mut zero = 0;
    while p[0].is_zero() && p.len() > 1 {
        p.remove(0);
        zero += 1;
    }
    let (mut pos, mut neg) = (0, 0);
    // Yun: p = Π a_i^i
    let dp = derivative(&p);
    let mut b = gcd(&p, &dp);
    let mut c = poly_divmod(&p, &b).0;
    let mut d = {
        let (q, _) = poly_divmod(&dp, &b);
        let dc = derivative(&c);
        q.iter()
            .zip(dc.iter().chain(std::iter::repeat(&Q::zero())))
            .map(|(x, y)| x - y)
            .collect::<Poly>()
    };
    let mut i = 1;
    while deg(&c) > 0 {
        let a_i = gcd(&c, &d);
        if deg(&a_i) > 0 {
            let (pp, nn) = sturm_counts(&a_i);
            pos += i * pp;
            neg += i * nn;
        }
        c = poly_divmod(&c, &a_i).0;
        let (q, _) = poly_divmod(&d, &a_i);
        let dc = derivative(&c);
        let len = q.len().max(dc.len());
        d = (0..len)
            .map(|k| q.get(k).cloned().unwrap_or_else(Q::zero) - dc.get(k).cloned().unwrap_or_else(Q::zero))
            .collect();
        d = trim(d);
        i += 1;
        b = trim(b);
    }
    let _ = b;
    (pos, neg, zero)
}

/// Descartes' rule on the characteristic polynomial (exact for real-rooted ones).
pub fn descartes_inertia(a: &QMatrix) -> (usize, usize, usize) {
    let p = char_poly(a);
    let zero = p.iter().take_while(|c| c.is_zero()).count();
    let signs: Vec<i32> = p.iter().map(sgn).collect();
    let alt: Vec<i32> = p
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 0 { sgn(c) } else { -sgn(c) })
        .collect();
    (sign_changes(&signs), sign_changes(&alt), zero)
}

// ---------------------------------------------------------------------------
// 𝔽₂ homology of pairs by dense elimination on byte matrices.

fn dense_rank_f2(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] == 1 {
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Lower-star value of every cell, computed from the facet structure.
pub fn lower_star_values(cx: &CellComplex, vertex_values: &[Q]) -> Vec<Q> {
    let mut vals: Vec<Q> = Vec::with_capacity(cx.len());
    for (i, c) in cx.cells().iter().enumerate() {
        let v = if c.dim == 0 {
            vertex_values[cx.vertex_ordinal(i).unwrap()].clone()
        } else {
            c.facets.iter().map(|&f| vals[f].clone()).max().unwrap()
        };
        vals.push(v);
    }
    vals
}

/// `dim H_k({φ<b}, {φ<a}; 𝔽₂)` by dense rank computations.
pub fn brute_pair_dim(cx: &CellComplex, cell_values: &[Q], a: &Ext, b: &Ext, k: usize) -> usize {
    let rel: Vec<bool> = cell_values
        .iter()
        .map(|v| {
            let v = Ext::Finite(v.clone());
            v < *b && !(v < *a)
        })
        .collect();
    let cells_in = |d: usize| -> Vec<usize> {
        (0..cx.len())
            .filter(|&i| rel[i] && cx.cells()[i].dim == d)
            .collect()
    };
    let boundary_rank = |d: usize| -> usize {
        if d == 0 {
            return 0;
        }
        let lower = cells_in(d - 1);
        let rows: Vec<Vec<u8>> = cells_in(d)
            .iter()
            .map(|&c| {
                lower
                    .iter()
                    .map(|&l| {
                        (cx.cells()[c].facets.iter().filter(|&&f| f == l).count() % 2) as u8
                    })
                    .collect()
            })
            .collect();
        if lower.is_empty() {
            0
        } else {
            dense_rank_f2(rows)
        }
    };
    cells_in(k).len() - boundary_rank(k) - boundary_rank(k + 1)
}

// ---------------------------------------------------------------------------
// Sheaves on ℝ as representations of the zigzag exit-path quiver.

/// A constructible sheaf on ℝ for the stratification by `points`, as a
/// representation `e₀ ← v₁ → e₁ ← … ← v_m → e_m` with every arrow the
/// restriction from a point to a neighbouring open interval.
pub struct ZigzagRep {
    /// Dimensions at `e₀, v₁, e₁, …, v_m, e_m`.
    pub dims: Vec<usize>,
    /// For each vertex `v_i`, matrices to `e_{i−1}` and to `e_i`.
    pub maps: Vec<(QMatrix, QMatrix)>,
    /// Cohomological degree of each summand (used for shifts).
    pub degree_blocks: Vec<(usize, i64)>,
}

/// Position of each node of the zigzag for a sheaf summand `k_I`:
/// `node 2j` is the open edge `e_j`, `node 2j−1` is the point `p_j`.
fn interval_support(iv: &DecoratedInterval, points: &[Q]) -> Vec<bool> {
    let m = points.len();
    let mut out = Vec::with_capacity(2 * m + 1);
    for j in 0..=m {
        // sample point inside e_j
        let t = if m == 0 {
            qi(0)
        } else if j == 0 {
            &points[0] - qi(1)
        } else if j == m {
            &points[m - 1] + qi(1)
        } else {
            (&points[j - 1] + &points[j]) / qi(2)
        };
        out.push(iv.contains(&t));
        if j < m {
            out.push(iv.contains(&points[j]));
        }
    }
    out
}

/// Representation of a sheaf, with one block per summand; `degree` picks
/// out the summands sitting in a given cohomological degree.
pub fn zigzag_of(f: &IntervalSheaf, points: &[Q], degree: i64) -> (Vec<usize>, Vec<Vec<bool>>) {
    let supports: Vec<Vec<bool>> = f
        .summands()
        .iter()
        .filter(|s| s.degree == degree)
        .map(|s| interval_support(&s.interval, points))
        .collect();
    let nodes = 2 * points.len() + 1;
    let dims = (0..nodes)
        .map(|n| supports.iter().filter(|s| s[n]).count())
        .collect();
    (dims, supports)
}

/// Dimension of `Hom` between direct sums of interval representations.
fn rep_hom_dim(src: &[Vec<bool>], dst: &[Vec<bool>], nodes: usize) -> usize {
    // Unknowns: one scalar per (node, src block, dst block) with both supported.
    let mut index = std::collections::HashMap::new();
    for n in 0..nodes {
        for (i, s) in src.iter().enumerate() {
            for (j, d) in dst.iter().enumerate() {
                if s[n] && d[n] {
                    let k = index.len();
                    index.insert((n, i, j), k);
                }
            }
        }
    }
    let unknowns = index.len();
    if unknowns == 0 {
        return 0;
    }
    // Commutativity along each arrow vertex v (odd node) → edge e (even node):
    // f_e ∘ M(v→e) = N(v→e) ∘ f_v, entrywise for (dst block j, src block i).
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for v in (1..nodes).step_by(2) {
        for e in [v - 1, v + 1] {
            for (i, s) in src.iter().enumerate() {
                for (j, d) in dst.iter().enumerate() {
                    let mut row = vec![Q::zero(); unknowns];
                    // (f_e ∘ M)_{j,i}: M maps block i at v to block i at e
                    if s[v] && s[e] {
                        if let Some(&k) = index.get(&(e, i, j)) {
                            row[k] += Q::one();
                        }
                    }
                    if d[v] && d[e] {
                        if let Some(&k) = index.get(&(v, i, j)) {
                            row[k] -= Q::one();
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let rank = if rows.is_empty() {
        0
    } else {
        QMatrix::from_rows(&rows).rank()
    };
    unknowns - rank
}

/// Euler form `Σ_nodes dim M dim N − Σ_arrows dim M_s dim N_t`.
fn euler_form(src: &[usize], dst: &[usize]) -> i64 {
    let nodes = src.len();
    let mut e: i64 = (0..nodes).map(|n| (src[n] * dst[n]) as i64).sum();
    for v in (1..nodes).step_by(2) {
        for t in [v - 1, v + 1] {
            e -= (src[v] * dst[t]) as i64;
        }
    }
    e
}

/// `dim Hom_{D(ℝ)}(F, G[k])` for sums of interval sheaves.
pub fn derived_hom_dim(f: &IntervalSheaf, g: &IntervalSheaf, k: i64) -> usize {
    let mut points: Vec<Q> = f.breakpoints();
    points.extend(g.breakpoints());
    points.sort();
    points.dedup();
    let nodes = 2 * points.len() + 1;
    let degrees = |x: &IntervalSheaf| -> Vec<i64> {
        let mut d: Vec<i64> = x.summands().iter().map(|s| s.degree).collect();
        d.sort();
        d.dedup();
        d
    };
    let mut total = 0;
    // Hom(M[−d], N[−e][k]) = Ext^{k+d−e}(M, N), hereditary: only Ext⁰, Ext¹.
    for d in degrees(f) {
        for e in degrees(g) {
            let ext = k + d - e;
            if ext != 0 && ext != 1 {
                continue;
            }
            let (md, ms) = zigzag_of(f, &points, d);
            let (nd, ns) = zigzag_of(g, &points, e);
            let hom = rep_hom_dim(&ms, &ns, nodes) as i64;
            total += if ext == 0 {
                hom
            } else {
                hom - euler_form(&md, &nd)
            };
        }
    }
    total as usize
}

/// Stalk cohomology `RΓ_c(S; k)` of a bounded decorated interval `S`,
/// computed from its cellular compactly supported cochains.
pub fn compact_cohomology(left: &Q, right: &Q, left_in: bool, right_in: bool) -> (usize, usize) {
    if left == right {
        return if left_in && right_in { (1, 0) } else { (0, 0) };
    }
    // cochains: included end vertices in degree 0, the open edge in degree 1;
    // δ sends each included vertex to the edge.
    let c0 = left_in as usize + right_in as usize;
    let rank = usize::from(c0 > 0);
    (c0 - rank, 1 - rank)
}

/// Stalk dimensions `(degree ↦ dim)` of `F ⋆ G` at `t` via proper base change.
pub fn convolution_stalk(f: &IntervalSheaf, g: &IntervalSheaf, t: &Q) -> std::collections::BTreeMap<i64, usize> {
    let mut out = std::collections::BTreeMap::new();
    for s in f.summands() {
        for r in g.summands() {
            // {x ∈ I : t − x ∈ J}
            let (i, j) = (&s.interval, &r.interval);
            let lo_i = (i.left().clone(), i.left_closed());
            let hi_i = (i.right().clone(), i.right_closed());
            let lo_j = (
                match j.right() {
                    Ext::Finite(v) => Ext::Finite(t - v),
                    Ext::PosInf => Ext::NegInf,
                    Ext::NegInf => Ext::PosInf,
                },
                j.right_closed(),
            );
            let hi_j = (
                match j.left() {
                    Ext::Finite(v) => Ext::Finite(t - v),
                    Ext::NegInf => Ext::PosInf,
                    Ext::PosInf => Ext::NegInf,
                },
                j.left_closed(),
            );
            let lo = if lo_i.0 > lo_j.0 || (lo_i.0 == lo_j.0 && !lo_i.1) { lo_i } else { lo_j };
            let hi = if hi_i.0 < hi_j.0 || (hi_i.0 == hi_j.0 && !hi_i.1) { hi_i } else { hi_j };
            let (Ext::Finite(l), Ext::Finite(h)) = (&lo.0, &hi.0) else {
                panic!("convolution fibres of normal forms are bounded");
            };
            if l > h {
                continue;
            }
            let (h0, h1) = compact_cohomology(l, h, lo.1, hi.1);
            let deg = s.degree + r.degree;
            if h0 > 0 {
                *out.entry(deg).or_default() += h0;
            }
            if h1 > 0 {
                *out.entry(deg + 1).or_default() += h1;
            }
        }
    }
    out
}

/// Stalk dimensions of a sheaf in normal form at `t`.
pub fn stalk(f: &IntervalSheaf, t: &Q) -> std::collections::BTreeMap<i64, usize> {
    let mut out = std::collections::BTreeMap::new();
    for s in f.summands() {
        if s.interval.contains(t) {
            *out.entry(s.degree).or_default() += 1;
        }
    }
    out
}

/// Sample points: every breakpoint, midpoints, and points beyond both ends.
pub fn probe_points(mut pts: Vec<Q>) -> Vec<Q> {
    pts.sort();
    pts.dedup();
    let mut out = pts.clone();
    for w in pts.windows(2) {
        out.push((&w[0] + &w[1]) / qi(2));
    }
    if let (Some(f), Some(l)) = (pts.first(), pts.last()) {
        out.push(f - qi(1));
        out.push(l + qi(1));
    }
    out.sort();
    out
}

/// Random sum of normal-form interval sheaves with endpoints on a grid.
pub fn random_sheaf<R: rand::Rng>(rng: &mut R, grid: &[Q], max_summands: usize) -> IntervalSheaf {
    let n = rng.gen_range(1..=max_summands);
    IntervalSheaf::new((0..n).map(|_| {
        let i = rng.gen_range(0..grid.len());
        let a = grid[i].clone();
        let b = if i + 1 < grid.len() && rng.gen_bool(0.7) {
            Some(grid[rng.gen_range(i + 1..grid.len())].clone())
        } else {
            None
        };
        (
            DecoratedInterval::closed_open(a, b).unwrap(),
            rng.gen_range(-1..=1),
        )
    }))
}

pub fn grid6() -> Vec<Q> {
    [-3, -1, 0, 1, 2, 4].iter().map(|&v| qi(v)).collect()
}
