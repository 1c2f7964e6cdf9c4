//! Scenario evaluation: the windowed intersection inequality, its summed
//! corollary, stabilized Hom dimensions, the degenerate plateau examples and
//! the randomized property suites.

mod appendix_a;
mod report;
mod scenario;
mod suites;
mod verify;

pub use appendix_a::{appendix_a_model, verify_appendix_a, AppendixExample};
pub use report::{
    AppendixALine, CohlagrLine, ComponentLine, CorollaryLine, DegreeLine, DegreeSource,
    LevelLine, Report, SuiteLine, Verdict, WindowReport,
};
pub use scenario::{
    pl_cos_value, ComponentSpec, CosTerm, FunctionSpec, GermSpec, GraphSpec, LevelHessian, Mode,
    Scenario, ScenarioFile, Task, WindowSpec,
};
pub use suites::{run_property_suites, run_suite, suite_names, SuiteOptions, SuiteSizes};
pub use verify::{
    lhs_count, perturb_window, resolve_components, rhs_count, verify_clean, verify_cohlagr,
    ResolvedComponent,
};

use crate::degrees::DegreeError;
use crate::flathomology::HomologyError;
use crate::intervalsheaves::SheafError;
use crate::maslov::MaslovError;
use crate::rational::Q;
use crate::symplinalg::SymplecticError;

/// Version written into, and required from, scenario and report files.
pub const FORMAT_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Maslov(#[from] MaslovError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error("component {index}: supplied s = {supplied}, recomputed s = {recomputed}")]
    InconsistentComponentData {
        index: usize,
        supplied: i64,
        recomputed: i64,
    },
    #[error("level component at {level} is not Morse–Bott: local homology {local:?}, betti {betti:?}")]
    NotMorseBott {
        level: String,
        local: Vec<usize>,
        betti: Vec<usize>,
    },
    #[error("Hom dimensions did not stabilize below the cap {cap}")]
    NoStabilization { cap: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::NoStabilization { .. } => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        }
    }

    pub(crate) fn no_stabilization(cap: &Q) -> Self {
        HarnessError::NoStabilization {
            cap: crate::rational::format_q(cap),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_VIOLATION
        }
    }
}
