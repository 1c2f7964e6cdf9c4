//! Maslov indices of path lifts in the Lagrangian Grassmannian.
//!
//! A path is a chain of chart segments. Inside the chart of Lagrangians
//! transverse to `θ` the index of a segment against `ν` only depends on its
//! endpoints, `½[τ(ν, end, θ) − τ(ν, start, θ)]`, so no crossing detection in
//! continuous time is needed.
//!
//! The generator of `π₁(ℒ(E))` is oriented so that prepending it to the first
//! argument of [`maslov_index`] raises the index by one.

use num_traits::Zero;

use crate::matrix::QMatrix;
use crate::rational::{qi, HalfInt, Q};
use crate::symplinalg::{
    cograph_of_symmetric, direct_sum, fiber, graph_of_symmetric, inertia_index,
    intersection_dim, signature_of_symmetric, zero_section, LagrangianFrame, SymplecticError,
    SymplecticSpace,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaslovError {
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error("segment {segment}: endpoint is not transverse to the chart reference")]
    ChartViolation { segment: usize },
    #[error("segment {segment} does not start where the previous one ends")]
    Discontinuous { segment: usize },
    #[error("path lift does not start at the fiber")]
    BaseMismatch,
}

pub type Result<T> = std::result::Result<T, MaslovError>;

/// A path inside the chart of Lagrangians transverse to `theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartSegment {
    theta: LagrangianFrame,
    start: LagrangianFrame,
    end: LagrangianFrame,
}

impl ChartSegment {
    pub fn new(
        theta: LagrangianFrame,
        start: LagrangianFrame,
        end: LagrangianFrame,
    ) -> Result<Self> {
        if intersection_dim(&theta, &start)? != 0 || intersection_dim(&theta, &end)? != 0 {
            return Err(MaslovError::ChartViolation { segment: 0 });
        }
        Ok(ChartSegment { theta, start, end })
    }

    pub fn constant(theta: LagrangianFrame, at: LagrangianFrame) -> Result<Self> {
        Self::new(theta, at.clone(), at)
    }

    pub fn theta(&self) -> &LagrangianFrame {
        &self.theta
    }

    pub fn start(&self) -> &LagrangianFrame {
        &self.start
    }

    pub fn end(&self) -> &LagrangianFrame {
        &self.end
    }

    pub fn reversed(&self) -> ChartSegment {
        ChartSegment {
            theta: self.theta.clone(),
            start: self.end.clone(),
            end: self.start.clone(),
        }
    }

    /// Chart coordinate `S` of `l` relative to the complement `start`:
    /// `l = span(R + Θ S)` where `R`, `Θ` are the frames of `start` and `theta`.
    fn chart_coordinate(&self, l: &LagrangianFrame) -> QMatrix {
        let n = self.start.space().half_dim();
        let basis = self.start.columns().hstack(self.theta.columns());
        let coeffs = basis
            .solve(l.columns())
            .expect("start and theta span the whole space");
        let x = coeffs.block(0, 0, n, n);
        let y = coeffs.block(n, 0, n, n);
        &y * &x.inverse().expect("l is transverse to theta")
    }

    /// The point at parameter `t` of the chart-linear interpolation.
    pub fn point_at(&self, t: &Q) -> LagrangianFrame {
        let s = self.chart_coordinate(&self.end).scale(t);
        let frame = self.start.columns() + &(self.theta.columns() * &s);
        LagrangianFrame::new(self.start.space(), frame).expect("chart points are Lagrangian")
    }

    /// Splits at parameter `t` into two segments of the same chart.
    pub fn split_at(&self, t: &Q) -> (ChartSegment, ChartSegment) {
        let mid = self.point_at(t);
        (
            ChartSegment {
                theta: self.theta.clone(),
                start: self.start.clone(),
                end: mid.clone(),
            },
            ChartSegment {
                theta: self.theta.clone(),
                start: mid,
                end: self.end.clone(),
            },
        )
    }
}

/// `½[τ(ν, end, θ) − τ(ν, start, θ)]`.
pub fn segment_index(seg: &ChartSegment, nu: &LagrangianFrame) -> Result<HalfInt> {
    let a = inertia_index(nu, &seg.end, &seg.theta)?;
    let b = inertia_index(nu, &seg.start, &seg.theta)?;
    Ok(HalfInt::from_twice(a - b))
}

/// A lift to the universal cover: a chain of chart segments starting at the fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathLift {
    space: SymplecticSpace,
    segments: Vec<ChartSegment>,
}

impl PathLift {
    pub fn new(space: SymplecticSpace, segments: Vec<ChartSegment>) -> Result<Self> {
        let base = fiber(space);
        let mut prev = base;
        for (i, seg) in segments.iter().enumerate() {
            if seg.theta.space() != space || seg.start.space() != space {
                return Err(SymplecticError::SpaceMismatch(
                    space.half_dim(),
                    seg.theta.space().half_dim(),
                )
                .into());
            }
            if intersection_dim(&seg.theta, &seg.start)? != 0
                || intersection_dim(&seg.theta, &seg.end)? != 0
            {
                return Err(MaslovError::ChartViolation { segment: i });
            }
            if seg.start != prev {
                return Err(if i == 0 {
                    MaslovError::BaseMismatch
                } else {
                    MaslovError::Discontinuous { segment: i }
                });
            }
            prev = seg.end.clone();
        }
        Ok(PathLift { space, segments })
    }

    /// The constant lift `λ̃_∞`.
    pub fn constant(space: SymplecticSpace) -> Self {
        PathLift {
            space,
            segments: Vec::new(),
        }
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn segments(&self) -> &[ChartSegment] {
        &self.segments
    }

    pub fn endpoint(&self) -> LagrangianFrame {
        self.segments
            .last()
            .map(|s| s.end.clone())
            .unwrap_or_else(|| fiber(self.space))
    }

    /// `self` followed by `other`, which must start where `self` ends.
    pub fn concat(&self, other: &[ChartSegment]) -> Result<PathLift> {
        let mut segs = self.segments.clone();
        segs.extend_from_slice(other);
        PathLift::new(self.space, segs)
    }

    /// Appends a segment to `end` inside the chart of `theta`.
    pub fn then(&self, theta: LagrangianFrame, end: LagrangianFrame) -> Result<PathLift> {
        let seg = ChartSegment::new(theta, self.endpoint(), end)?;
        self.concat(&[seg])
    }

    /// Prepends `k` copies of the generator loop (its reverse when `k < 0`).
    pub fn deck(&self, k: i64) -> PathLift {
        let lp = generator_loop(self.space);
        let piece: Vec<ChartSegment> = if k >= 0 {
            lp.segments.clone()
        } else {
            lp.segments.iter().rev().map(ChartSegment::reversed).collect()
        };
        let mut segs = Vec::new();
        for _ in 0..k.unsigned_abs() {
            segs.extend(piece.iter().cloned());
        }
        segs.extend(self.segments.iter().cloned());
        PathLift {
            space: self.space,
            segments: segs,
        }
    }

    /// Splits every segment at its midpoint.
    pub fn refined(&self) -> PathLift {
        let half = Q::new(1.into(), 2.into());
        let segs = self
            .segments
            .iter()
            .flat_map(|s| {
                let (a, b) = s.split_at(&half);
                [a, b]
            })
            .collect();
        PathLift {
            space: self.space,
            segments: segs,
        }
    }
}

/// Sum of [`segment_index`] over the segments of the path.
pub fn path_index(path: &PathLift, nu: &LagrangianFrame) -> Result<HalfInt> {
    if nu.space() != path.space {
        return Err(SymplecticError::SpaceMismatch(path.space.half_dim(), nu.space().half_dim()).into());
    }
    path.segments
        .iter()
        .map(|s| segment_index(s, nu))
        .sum::<Result<HalfInt>>()
}

/// Embeds a line of `ℝ²` as `line ⊕ fiber` in the first coordinate plane.
fn embed_line(space: SymplecticSpace, x: i64, xi: i64, rest_fiber: bool) -> LagrangianFrame {
    let n = space.half_dim();
    let mut f = QMatrix::zeros(2 * n, n);
    f[(0, 0)] = qi(x);
    f[(n, 0)] = qi(xi);
    for i in 1..n {
        if rest_fiber {
            f[(n + i, i)] = qi(1);
        } else {
            f[(i, i)] = qi(1);
        }
    }
    LagrangianFrame::new(space, f).expect("embedded line is Lagrangian")
}

/// The generator loop: the line in the first coordinate plane turning once
/// through `(0,1) → (−1,1) → (1,1) → (0,1)`, the other directions fixed at the fiber.
pub fn generator_loop(space: SymplecticSpace) -> PathLift {
    let line = |x, xi| embed_line(space, x, xi, true);
    let chart = |x, xi| embed_line(space, x, xi, false);
    let segs = vec![
        ChartSegment::new(chart(1, 0), line(0, 1), line(-1, 1)),
        ChartSegment::new(chart(0, 1), line(-1, 1), line(1, 1)),
        ChartSegment::new(chart(1, 0), line(1, 1), line(0, 1)),
    ];
    PathLift {
        space,
        segments: segs.into_iter().collect::<Result<_>>().expect("generator charts"),
    }
}

fn reflect(l: &LagrangianFrame) -> LagrangianFrame {
    let n = l.space().half_dim();
    let mut f = l.columns().clone();
    for i in n..2 * n {
        for j in 0..n {
            f[(i, j)] = -f[(i, j)].clone();
        }
    }
    LagrangianFrame::new(l.space(), f).expect("reflection preserves Lagrangians up to sign")
}

/// The graph of `R(x, ξ) = (x, −ξ)` in `E ⊕ E`, i.e. the diagonal of `E ⊕ Ē`.
fn twisted_diagonal(space: SymplecticSpace) -> LagrangianFrame {
    let n = space.half_dim();
    let big = space.direct_sum(&space);
    let mut f = QMatrix::zeros(4 * n, 2 * n);
    for i in 0..n {
        // (e_x, e_x) and (e_ξ, −e_ξ)
        f[(i, i)] = qi(1);
        f[(n + i, i)] = qi(1);
        f[(2 * n + i, n + i)] = qi(1);
        f[(3 * n + i, n + i)] = qi(-1);
    }
    LagrangianFrame::new(big, f).expect("graph of an anti-symplectic involution")
}

fn product_segment(a: &ChartSegment, b: &ChartSegment) -> ChartSegment {
    ChartSegment {
        theta: direct_sum(&a.theta, &reflect(&b.theta)),
        start: direct_sum(&a.start, &reflect(&b.start)),
        end: direct_sum(&a.end, &reflect(&b.end)),
    }
}

fn padding(at: &LagrangianFrame) -> ChartSegment {
    let space = at.space();
    let theta = if intersection_dim(at, &zero_section(space)).unwrap() == 0 {
        zero_section(space)
    } else {
        fiber(space)
    };
    let theta = if intersection_dim(at, &theta).unwrap() == 0 {
        theta
    } else {
        transverse_coordinate_plane(at)
    };
    ChartSegment::constant(theta, at.clone()).expect("transverse by construction")
}

/// A coordinate Lagrangian transverse to `l` (one always exists).
fn transverse_coordinate_plane(l: &LagrangianFrame) -> LagrangianFrame {
    let space = l.space();
    let n = space.half_dim();
    for mask in 0u32..(1 << n) {
        let mut f = QMatrix::zeros(2 * n, n);
        for i in 0..n {
            if mask & (1 << i) != 0 {
                f[(n + i, i)] = qi(1);
            } else {
                f[(i, i)] = qi(1);
            }
        }
        let cand = LagrangianFrame::new(space, f).unwrap();
        if intersection_dim(&cand, l).unwrap() == 0 {
            return cand;
        }
    }
    unreachable!("some coordinate Lagrangian is transverse to any Lagrangian")
}

/// `μ(λ̃₁, λ̃₂)`, computed as the index of `t ↦ λ₁(t) × λ₂(t)` in `E ⊕ Ē`
/// against the diagonal.
pub fn maslov_index(lift1: &PathLift, lift2: &PathLift) -> Result<HalfInt> {
    if lift1.space != lift2.space {
        return Err(SymplecticError::SpaceMismatch(
            lift1.space.half_dim(),
            lift2.space.half_dim(),
        )
        .into());
    }
    let len = lift1.segments.len().max(lift2.segments.len());
    let pad = |p: &PathLift| {
        let mut segs = p.segments.clone();
        let tail = padding(&p.endpoint());
        segs.resize(len, tail);
        segs
    };
    let (s1, s2) = (pad(lift1), pad(lift2));
    let diag = twisted_diagonal(lift1.space);
    let mut total = HalfInt::ZERO;
    for (a, b) in s1.iter().zip(&s2) {
        total = total + segment_index(&product_segment(a, b), &diag)?;
    }
    Ok(-total)
}

/// `μ(λ̃₁, λ̃₂)` through the fiber: `½τ(λ₁,λ₂,λ_∞) + μ(λ̃_∞,λ̃₂) − μ(λ̃_∞,λ̃₁)`.
pub fn maslov_index_via_fiber(lift1: &PathLift, lift2: &PathLift) -> Result<HalfInt> {
    let base = fiber(lift1.space);
    let tau = inertia_index(&lift1.endpoint(), &lift2.endpoint(), &base)?;
    Ok(HalfInt::from_twice(tau) + path_index(lift2, &base)? - path_index(lift1, &base)?)
}

/// A lift from the fiber to `{ξ = A x}`.
///
/// For invertible `A` this is one segment in the chart of the zero section,
/// through the cographs `{x = s A⁻¹ ξ}`. Otherwise the path first goes to the
/// graph of `A + εI` (invertible, same negative index) and then slides to
/// `A` inside the chart of the fiber. In both cases
/// `μ(λ̃_∞, lift) = n/2 − neg(A)`.
pub fn canonical_graph_lift(space: SymplecticSpace, a: &QMatrix) -> Result<PathLift> {
    let target = graph_of_symmetric(space, a)?;
    let n = space.half_dim();
    let zero = zero_section(space);
    let base = PathLift::constant(space);
    if !a.det().is_zero() {
        let inv = a.inverse().expect("nonzero determinant");
        let end = cograph_of_symmetric(space, &inv)?;
        return base.then(zero, end);
    }
    let neg = signature_of_symmetric(a)?.neg;
    let mut eps = qi(1);
    let shifted = loop {
        let cand = a + &QMatrix::identity(n).scale(&eps);
        if !cand.det().is_zero() && signature_of_symmetric(&cand)?.neg == neg {
            break cand;
        }
        eps = eps / qi(2);
    };
    let mid = graph_of_symmetric(space, &shifted)?;
    base.then(zero, mid)?.then(fiber(space), target)
}
