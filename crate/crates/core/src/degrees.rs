//! Degrees of clean intersection components: the shift formula, the
//! Morse–Bott index route and the Floer grading.

use serde::{Deserialize, Serialize};

use crate::maslov::{canonical_graph_lift, maslov_index, MaslovError, PathLift};
use crate::matrix::QMatrix;
use crate::rational::{HalfInt, Q};
use crate::symplinalg::{
    conify_tangent, fiber, graph_of_symmetric, inertia_index, intersection_dim,
    signature_of_symmetric, ConifiedPointData, LagrangianFrame, SymplecticError,
    SymplecticSpace,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DegreeError {
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Maslov(#[from] MaslovError),
    #[error("degree {0} is not an integer; the input shifts are inconsistent")]
    NonIntegralDegree(HalfInt),
    #[error("tangent planes meet in dimension {found}, component has dimension {expected}")]
    CleanViolation { expected: usize, found: usize },
    #[error("germs are based at different points")]
    PointMismatch,
    #[error("stored action value does not equal f2(p) - f1(p)")]
    ActionMismatch,
    #[error("normal Hessian is degenerate")]
    DegenerateNormalHessian,
    #[error("normal Hessian has size {found}, expected {expected}")]
    NormalHessianSize { expected: usize, found: usize },
    #[error("germ carries no grading")]
    MissingGrading,
    #[error("germ carries neither a shift nor a grading")]
    MissingShift,
    #[error("grading lives in a space of half-dimension {found}, expected {expected}")]
    BaseMismatch { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, DegreeError>;

/// Shift of the epigraph quantization `k_{φ(x)+t ≥ 0}` at every point of its
/// Lagrangian. Obtained from the grading `epigraph_grading` below.
pub const EPIGRAPH_SHIFT: HalfInt = HalfInt::from_twice(1);

/// Germ of a graded exact Lagrangian at a point `p = (x; ξ)`.
#[derive(Debug, Clone)]
pub struct LagrangianGerm {
    pub x: Vec<Q>,
    pub xi: Vec<Q>,
    pub tangent: LagrangianFrame,
    pub primitive_value: Q,
    pub shift: Option<HalfInt>,
    pub grading: Option<PathLift>,
}

impl LagrangianGerm {
    pub fn m(&self) -> usize {
        self.tangent.space().half_dim()
    }

    /// The germ of the graph of `dφ` where `φ` has Hessian `hessian` at `x`,
    /// carrying the epigraph shift and grading.
    pub fn epigraph(x: Vec<Q>, xi: Vec<Q>, hessian: &QMatrix, value: Q) -> Result<Self> {
        let space = SymplecticSpace::new(x.len())?;
        let tangent = graph_of_symmetric(space, hessian)?;
        Ok(LagrangianGerm {
            x,
            xi,
            tangent,
            primitive_value: value,
            shift: Some(EPIGRAPH_SHIFT),
            grading: Some(epigraph_grading(space, hessian)?),
        })
    }

    /// The stored shift, or the one induced by the grading.
    pub fn shift(&self) -> Result<HalfInt> {
        match (&self.shift, &self.grading) {
            (Some(d), _) => Ok(*d),
            (None, Some(g)) => shift_from_grading(g, self.m()),
            (None, None) => Err(DegreeError::MissingShift),
        }
    }
}

/// A connected component `C` of `L₁ ∩ L₂` with germs at a representative point.
#[derive(Debug, Clone)]
pub struct CleanComponentRecord {
    pub dim_c: usize,
    pub betti: Vec<usize>,
    pub germ1: LagrangianGerm,
    pub germ2: LagrangianGerm,
    pub f21: Q,
    pub s: i64,
}

impl CleanComponentRecord {
    /// Checks the common base point, the action value and cleanness at `p`.
    pub fn validate(&self) -> Result<()> {
        if self.germ1.x != self.germ2.x || self.germ1.xi != self.germ2.xi {
            return Err(DegreeError::PointMismatch);
        }
        if self.f21 != action_value(self) {
            return Err(DegreeError::ActionMismatch);
        }
        let found = intersection_dim(&self.germ1.tangent, &self.germ2.tangent)?;
        if found != self.dim_c {
            return Err(DegreeError::CleanViolation {
                expected: self.dim_c,
                found,
            });
        }
        Ok(())
    }
}

pub fn action_value(comp: &CleanComponentRecord) -> Q {
    &comp.germ2.primitive_value - &comp.germ1.primitive_value
}

fn integral(h: HalfInt) -> Result<i64> {
    h.to_integer().ok_or(DegreeError::NonIntegralDegree(h))
}

fn degree_with_tau(comp: &CleanComponentRecord, tau: i64) -> Result<i64> {
    comp.validate()?;
    let m = comp.germ1.m() as i64;
    let d = comp.germ2.shift()? - comp.germ1.shift()?;
    integral(d + HalfInt::from_twice(m - comp.dim_c as i64) - HalfInt::from_twice(tau))
}

/// `s = d₂ − d₁ + ½(dim M − dim C) − ½τ(T_pL₂, T_pL₁, λ_∞)`.
pub fn degree_s(comp: &CleanComponentRecord) -> Result<i64> {
    let l2 = &comp.germ2.tangent;
    let tau = inertia_index(l2, &comp.germ1.tangent, &fiber(l2.space()))?;
    degree_with_tau(comp, tau)
}

/// Same as [`degree_s`] with the τ-term evaluated after conification, in
/// `T_{p'}T*(M×ℝ)` against its full fiber.
pub fn degree_s_conified(comp: &CleanComponentRecord) -> Result<i64> {
    let c1 = conify_tangent(&ConifiedPointData::new(
        comp.germ1.xi.clone(),
        comp.germ1.tangent.clone(),
    )?)?;
    let c2 = conify_tangent(&ConifiedPointData::new(
        comp.germ2.xi.clone(),
        comp.germ2.tangent.clone(),
    )?)?;
    let tau = inertia_index(&c2, &c1, &fiber(c2.space()))?;
    degree_with_tau(comp, tau)
}

/// Morse–Bott index: the number of negative eigenvalues of the normal Hessian.
pub fn degree_s_morse_bott(m: usize, dim_c: usize, hessian_normal: &QMatrix) -> Result<i64> {
    let expected = m.saturating_sub(dim_c);
    if hessian_normal.rows() != expected || hessian_normal.cols() != expected {
        return Err(DegreeError::NormalHessianSize {
            expected,
            found: hessian_normal.rows(),
        });
    }
    let inertia = signature_of_symmetric(hessian_normal)?;
    if inertia.zero != 0 {
        return Err(DegreeError::DegenerateNormalHessian);
    }
    Ok(inertia.neg as i64)
}

/// `d = μ(λ̃_∞, λ̃) + ½(m + 1)` for a grading in the base space `T_pT*M`.
pub fn shift_from_grading(grading: &PathLift, m: usize) -> Result<HalfInt> {
    let found = grading.space().half_dim();
    if found != m {
        return Err(DegreeError::BaseMismatch { expected: m, found });
    }
    let base = PathLift::constant(grading.space());
    Ok(maslov_index(&base, grading)? + HalfInt::from_twice(m as i64 + 1))
}

/// Whether the stored shift agrees with the stored grading.
pub fn grading_consistent(germ: &LagrangianGerm) -> Result<bool> {
    let (Some(d), Some(g)) = (&germ.shift, &germ.grading) else {
        return Err(DegreeError::MissingGrading);
    };
    Ok(shift_from_grading(g, germ.m())? == *d)
}

/// Grading of the epigraph quantization of `φ` at a point where
/// `Hess φ = hessian`: the fiber is carried to the zero section by the
/// canonical lift, slid to `{ξ = Hess φ · x}` inside the chart of the fiber,
/// and shifted by `m` deck loops.
pub fn epigraph_grading(space: SymplecticSpace, hessian: &QMatrix) -> Result<PathLift> {
    let m = space.half_dim();
    let zero = QMatrix::zeros(m, m);
    let target = graph_of_symmetric(space, hessian)?;
    let lift = canonical_graph_lift(space, &zero)?;
    let lift = if *hessian == zero {
        lift
    } else {
        lift.then(fiber(space), target)?
    };
    Ok(lift.deck(m as i64))
}

/// `gr(L₂, L₁; C) = ½(dim M − dim C) − μ(λ̃₂(p), λ̃₁(p))`.
pub fn floer_grading(comp: &CleanComponentRecord) -> Result<i64> {
    let (Some(g1), Some(g2)) = (&comp.germ1.grading, &comp.germ2.grading) else {
        return Err(DegreeError::MissingGrading);
    };
    let m = comp.germ1.m() as i64;
    let mu = maslov_index(g2, g1)?;
    integral(HalfInt::from_twice(m - comp.dim_c as i64) - mu)
}

/// Serializable summary of a component, as it appears in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    #[serde(with = "crate::rational::serde_q")]
    pub f21: Q,
    pub dim: usize,
    pub betti: Vec<usize>,
    pub s: i64,
}
