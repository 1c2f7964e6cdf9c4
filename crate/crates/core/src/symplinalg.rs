//! Exact linear symplectic algebra over ℚ.
//!
//! Coordinates on the 2n-dimensional space are `(x_1..x_n, ξ_1..ξ_n)` and the
//! form is `σ((u_x,u_ξ),(v_x,v_ξ)) = ⟨u_ξ,v_x⟩ − ⟨v_ξ,u_x⟩`, i.e. `ω = dα` for
//! the Liouville form `α = ⟨ξ,dx⟩`. With this convention
//! `τ({x=0}, {ξ=0}, {ξ=Ax}) = −sgn(A)`.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};

use crate::matrix::QMatrix;
use crate::rational::{qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymplecticError {
    #[error("half-dimension must be positive")]
    ZeroDimension,
    #[error("frame has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("frame columns are linearly dependent (rank {rank} < {n})")]
    RankDeficient { rank: usize, n: usize },
    #[error("symplectic form does not vanish on the span of the frame")]
    NotIsotropic,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("operands live in symplectic spaces of different dimension ({0} vs {1})")]
    SpaceMismatch(usize, usize),
    #[error("matrix does not preserve the symplectic form")]
    NotSymplectic,
}

pub type Result<T> = std::result::Result<T, SymplecticError>;

/// `(ℚ^{2n}, σ)` with the standard form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    n: usize,
}

impl SymplecticSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(SymplecticError::ZeroDimension);
        }
        Ok(SymplecticSpace { n })
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// The Gram matrix `J` with `σ(u,v) = uᵀ J v`.
    pub fn form_matrix(&self) -> QMatrix {
        let n = self.n;
        let mut j = QMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = qi(-1);
            j[(n + i, i)] = qi(1);
        }
        j
    }

    pub fn pairing(&self, u: &[Q], v: &[Q]) -> Q {
        let n = self.n;
        assert!(u.len() == 2 * n && v.len() == 2 * n);
        let mut s = Q::zero();
        for i in 0..n {
            s += &u[n + i] * &v[i];
            s -= &v[n + i] * &u[i];
        }
        s
    }

    /// `Aᵀ J B`: the matrix of σ between the column spans of `a` and `b`.
    pub fn cross_form(&self, a: &QMatrix, b: &QMatrix) -> QMatrix {
        let n = self.n;
        QMatrix::from_fn(a.cols(), b.cols(), |i, j| {
            let mut s = Q::zero();
            for k in 0..n {
                s += &a[(n + k, i)] * &b[(k, j)];
                s -= &b[(n + k, j)] * &a[(k, i)];
            }
            s
        })
    }

    /// `E ⊕ E'` with coordinates `(x, x'; ξ, ξ')`.
    pub fn direct_sum(&self, other: &SymplecticSpace) -> SymplecticSpace {
        SymplecticSpace {
            n: self.n + other.n,
        }
    }

    pub fn is_symplectic_matrix(&self, t: &QMatrix) -> bool {
        let d = self.dim();
        if t.rows() != d || t.cols() != d {
            return false;
        }
        let j = self.form_matrix();
        &(&t.transpose() * &j) * t == j
    }
}

/// A Lagrangian subspace, given by a `2n×n` frame of full rank.
///
/// Equality and hashing are by column span.
#[derive(Clone)]
pub struct LagrangianFrame {
    space: SymplecticSpace,
    columns: QMatrix,
    canonical: QMatrix,
}

impl LagrangianFrame {
    /// Validates a frame: shape `2n×n`, rank `n`, isotropic.
    pub fn new(space: SymplecticSpace, columns: QMatrix) -> Result<Self> {
        let n = space.half_dim();
        if columns.rows() != 2 * n || columns.cols() != n {
            return Err(SymplecticError::Shape {
                rows: columns.rows(),
                cols: columns.cols(),
                expected_rows: 2 * n,
                expected_cols: n,
            });
        }
        let canonical = columns.column_space_canonical();
        if canonical.cols() < n {
            return Err(SymplecticError::RankDeficient {
                rank: canonical.cols(),
                n,
            });
        }
        if !space.cross_form(&columns, &columns).is_zero() {
            return Err(SymplecticError::NotIsotropic);
        }
        Ok(LagrangianFrame {
            space,
            columns,
            canonical,
        })
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn columns(&self) -> &QMatrix {
        &self.columns
    }

    /// The `x`-block (top `n` rows) of the frame.
    pub fn x_block(&self) -> QMatrix {
        let n = self.space.half_dim();
        self.columns.block(0, 0, n, n)
    }

    /// The `ξ`-block (bottom `n` rows) of the frame.
    pub fn xi_block(&self) -> QMatrix {
        let n = self.space.half_dim();
        self.columns.block(n, 0, n, n)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let col = QMatrix::from_columns(&[v.to_vec()]);
        self.columns.hstack(&col).rank() == self.space.half_dim()
    }
}

impl PartialEq for LagrangianFrame {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.canonical == other.canonical
    }
}

impl Eq for LagrangianFrame {}

impl Hash for LagrangianFrame {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.space.hash(state);
        self.canonical.hash(state);
    }
}

impl fmt::Debug for LagrangianFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lagrangian{:?}", self.canonical)
    }
}

pub fn lagrangian_from_frame(space: SymplecticSpace, columns: QMatrix) -> Result<LagrangianFrame> {
    LagrangianFrame::new(space, columns)
}

/// `λ_∞ = {x = 0}`.
pub fn fiber(space: SymplecticSpace) -> LagrangianFrame {
    let n = space.half_dim();
    let mut m = QMatrix::zeros(2 * n, n);
    m.set_block(n, 0, &QMatrix::identity(n));
    LagrangianFrame::new(space, m).expect("fiber is Lagrangian")
}

/// `{ξ = 0}`.
pub fn zero_section(space: SymplecticSpace) -> LagrangianFrame {
    let n = space.half_dim();
    let mut m = QMatrix::zeros(2 * n, n);
    m.set_block(0, 0, &QMatrix::identity(n));
    LagrangianFrame::new(space, m).expect("zero section is Lagrangian")
}

fn check_symmetric(space: SymplecticSpace, a: &QMatrix) -> Result<()> {
    let n = space.half_dim();
    if a.rows() != n || a.cols() != n {
        return Err(SymplecticError::Shape {
            rows: a.rows(),
            cols: a.cols(),
            expected_rows: n,
            expected_cols: n,
        });
    }
    if !a.is_symmetric() {
        return Err(SymplecticError::NotSymmetric);
    }
    Ok(())
}

/// The plane `{ξ = A x}` for symmetric `A`.
pub fn graph_of_symmetric(space: SymplecticSpace, a: &QMatrix) -> Result<LagrangianFrame> {
    check_symmetric(space, a)?;
    let n = space.half_dim();
    let mut m = QMatrix::zeros(2 * n, n);
    m.set_block(0, 0, &QMatrix::identity(n));
    m.set_block(n, 0, a);
    LagrangianFrame::new(space, m)
}

/// The plane `{x = C ξ}` for symmetric `C`.
pub fn cograph_of_symmetric(space: SymplecticSpace, c: &QMatrix) -> Result<LagrangianFrame> {
    check_symmetric(space, c)?;
    let n = space.half_dim();
    let mut m = QMatrix::zeros(2 * n, n);
    m.set_block(0, 0, c);
    m.set_block(n, 0, &QMatrix::identity(n));
    LagrangianFrame::new(space, m)
}

fn same_space(a: &LagrangianFrame, b: &LagrangianFrame) -> Result<()> {
    if a.space != b.space {
        return Err(SymplecticError::SpaceMismatch(
            a.space.half_dim(),
            b.space.half_dim(),
        ));
    }
    Ok(())
}

/// `dim(λ₁ ∩ λ₂) = 2n − rank[F₁ | F₂]`.
pub fn intersection_dim(l1: &LagrangianFrame, l2: &LagrangianFrame) -> Result<usize> {
    same_space(l1, l2)?;
    Ok(l1.space.dim() - l1.columns.hstack(&l2.columns).rank())
}

/// Positive, negative and zero counts of a real symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.pos as i64 - self.neg as i64
    }

    pub fn size(&self) -> usize {
        self.pos + self.neg + self.zero
    }
}

/// Inertia of a symmetric rational matrix by congruence diagonalization.
///
/// A zero diagonal with a nonzero off-diagonal entry `a` is eliminated as the
/// hyperbolic block `[[0,a],[a,0]]`, which contributes one positive and one
/// negative square.
pub fn signature_of_symmetric(a: &QMatrix) -> Result<Inertia> {
    if !a.is_symmetric() {
        return Err(SymplecticError::NotSymmetric);
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut out = Inertia::default();
    let mut k = 0;
    let swap = |m: &mut QMatrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        m.swap_rows(i, j);
        for r in 0..n {
            let tmp = m[(r, i)].clone();
            m[(r, i)] = m[(r, j)].clone();
            m[(r, j)] = tmp;
        }
    };
    while k < n {
        if let Some(p) = (k..n).find(|&i| !m[(i, i)].is_zero()) {
            swap(&mut m, k, p);
            let d = m[(k, k)].clone();
            if d > Q::zero() {
                out.pos += 1;
            } else {
                out.neg += 1;
            }
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &d;
                for j in k + 1..n {
                    let v = &f * &m[(k, j)];
                    m[(i, j)] -= v;
                }
            }
            for i in k + 1..n {
                m[(i, k)] = Q::zero();
                m[(k, i)] = Q::zero();
            }
            k += 1;
            continue;
        }
        let off = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !m[(i, j)].is_zero());
        let Some((i, j)) = off else {
            out.zero += n - k;
            break;
        };
        swap(&mut m, k, i);
        swap(&mut m, k + 1, j);
        let a = m[(k, k + 1)].clone();
        out.pos += 1;
        out.neg += 1;
        for p in k + 2..n {
            for r in k + 2..n {
                let corr = (&m[(p, k)] * &m[(r, k + 1)] + &m[(p, k + 1)] * &m[(r, k)]) / &a;
                m[(p, r)] -= corr;
            }
        }
        for p in k + 2..n {
            for c in [k, k + 1] {
                m[(p, c)] = Q::zero();
                m[(c, p)] = Q::zero();
            }
        }
        k += 2;
    }
    Ok(out)
}

/// Gram matrix (scaled by 2) of `q(v₁,v₂,v₃) = σ(v₁,v₂)+σ(v₂,v₃)+σ(v₃,v₁)`
/// on `λ₁ ⊕ λ₂ ⊕ λ₃`.
pub fn inertia_form(
    l1: &LagrangianFrame,
    l2: &LagrangianFrame,
    l3: &LagrangianFrame,
) -> Result<QMatrix> {
    same_space(l1, l2)?;
    same_space(l1, l3)?;
    let sp = l1.space;
    let n = sp.half_dim();
    let b12 = sp.cross_form(&l1.columns, &l2.columns);
    let b23 = sp.cross_form(&l2.columns, &l3.columns);
    let b31 = sp.cross_form(&l3.columns, &l1.columns);
    let mut q = QMatrix::zeros(3 * n, 3 * n);
    q.set_block(0, n, &b12);
    q.set_block(n, 0, &b12.transpose());
    q.set_block(n, 2 * n, &b23);
    q.set_block(2 * n, n, &b23.transpose());
    q.set_block(2 * n, 0, &b31);
    q.set_block(0, 2 * n, &b31.transpose());
    Ok(q)
}

/// Kashiwara inertia index `τ(λ₁,λ₂,λ₃)`: the signature of `q` on `λ₁⊕λ₂⊕λ₃`.
pub fn inertia_index(
    l1: &LagrangianFrame,
    l2: &LagrangianFrame,
    l3: &LagrangianFrame,
) -> Result<i64> {
    let form = inertia_form(l1, l2, l3)?;
    Ok(signature_of_symmetric(&form)?.signature())
}

pub fn apply_symplectic(t: &QMatrix, l: &LagrangianFrame) -> Result<LagrangianFrame> {
    if !l.space.is_symplectic_matrix(t) {
        return Err(SymplecticError::NotSymplectic);
    }
    LagrangianFrame::new(l.space, t * &l.columns)
}

/// `λ ⊕ λ'` inside `E ⊕ E'` (coordinates `(x, x'; ξ, ξ')`).
pub fn direct_sum(a: &LagrangianFrame, b: &LagrangianFrame) -> LagrangianFrame {
    let (n, m) = (a.space.half_dim(), b.space.half_dim());
    let sp = a.space.direct_sum(&b.space);
    let mut f = QMatrix::zeros(2 * (n + m), n + m);
    f.set_block(0, 0, &a.x_block());
    f.set_block(n, n, &b.x_block());
    f.set_block(n + m, 0, &a.xi_block());
    f.set_block(2 * n + m, n, &b.xi_block());
    LagrangianFrame::new(sp, f).expect("direct sum of Lagrangians is Lagrangian")
}

/// Block-diagonal symplectic map `T ⊕ T'` in the `(x, x'; ξ, ξ')` ordering.
pub fn direct_sum_map(t: &QMatrix, n: usize, s: &QMatrix, m: usize) -> QMatrix {
    let mut out = QMatrix::zeros(2 * (n + m), 2 * (n + m));
    let place = |out: &mut QMatrix, src: &QMatrix, k: usize, off_x: usize, off_xi: usize| {
        for (bi, ro) in [(0, off_x), (1, off_xi)] {
            for (bj, co) in [(0, off_x), (1, off_xi)] {
                out.set_block(ro, co, &src.block(bi * k, bj * k, k, k));
            }
        }
    };
    place(&mut out, t, n, 0, n + m);
    place(&mut out, s, m, n, 2 * n + m);
    out
}

/// Tangent data at a point `p = (x; ξ)` of an exact Lagrangian `L ⊂ T*M`.
#[derive(Debug, Clone)]
pub struct ConifiedPointData {
    pub xi: Vec<Q>,
    pub tangent: LagrangianFrame,
}

impl ConifiedPointData {
    pub fn new(xi: Vec<Q>, tangent: LagrangianFrame) -> Result<Self> {
        let m = tangent.space().half_dim();
        if xi.len() != m {
            return Err(SymplecticError::Shape {
                rows: xi.len(),
                cols: 1,
                expected_rows: m,
                expected_cols: 1,
            });
        }
        Ok(ConifiedPointData { xi, tangent })
    }

    pub fn base_dim(&self) -> usize {
        self.xi.len()
    }

    /// The symplectic space `T_{p'}T*(M×ℝ)`, coordinates `(x, t; ξ, τ)`.
    pub fn output_space(&self) -> SymplecticSpace {
        SymplecticSpace::new(self.base_dim() + 1).expect("positive dimension")
    }
}

/// Tangent plane of the conification at `p' = (p, −f(p); 1)`.
///
/// Spanned by `(0,0; ξ,1)` and `(v_x, −⟨ξ,v_x⟩; v_ξ, 0)` for `(v_x,v_ξ) ∈ T_pL`,
/// using `df = α|_L`.
pub fn conify_tangent(data: &ConifiedPointData) -> Result<LagrangianFrame> {
    let m = data.base_dim();
    let big = data.output_space();
    let cols = m + 1;
    let mut f = QMatrix::zeros(2 * cols, cols);
    for (i, xi) in data.xi.iter().enumerate() {
        f[(cols + i, 0)] = xi.clone();
    }
    f[(2 * cols - 1, 0)] = Q::one();
    let tan = data.tangent.columns();
    for c in 0..m {
        let mut pairing = Q::zero();
        for i in 0..m {
            f[(i, c + 1)] = tan[(i, c)].clone();
            f[(cols + i, c + 1)] = tan[(m + i, c)].clone();
            pairing += &data.xi[i] * &tan[(i, c)];
        }
        f[(m, c + 1)] = -pairing;
    }
    LagrangianFrame::new(big, f)
}
