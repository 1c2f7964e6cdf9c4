//! Scenario files: a manifold, either two PL functions (graph mode) or a list
//! of clean components (component mode), windows and tasks.

use serde::{Deserialize, Serialize};

use super::{HarnessError, Result, FORMAT_VERSION};
use crate::degrees::{CleanComponentRecord, LagrangianGerm};
use crate::flathomology::{CellComplex, ComplexSpec, PLFunction};
use crate::matrix::QMatrix;
use crate::rational::{qi, Ext, HalfInt, Q};
use crate::symplinalg::{LagrangianFrame, SymplecticSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// The windowed inequality and its summed corollary.
    Clean,
    /// Equality of both sides on a thin window around each critical value.
    Levels,
    /// Stabilized Hom dimensions against the Betti numbers of `M`.
    Cohlagr,
}

fn default_tasks() -> Vec<Task> {
    vec![Task::Clean]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosTerm {
    pub axis: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub amplitude: Q,
}

/// A PL function given by its vertex values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Constant {
        #[serde(with = "crate::rational::serde_q")]
        value: Q,
    },
    Values {
        #[serde(with = "crate::rational::serde_q_vec")]
        values: Vec<Q>,
    },
    /// `Σ amplitude·(1 − 4·min(k, n−k)/n)` where `k` is the vertex coordinate
    /// along `axis` of a product of circles and `n` its period.
    PlCos { terms: Vec<CosTerm> },
    /// `offset + Σ wᵢ·xᵢ` on the vertex coordinates.
    Linear {
        #[serde(with = "crate::rational::serde_q_vec")]
        weights: Vec<Q>,
        #[serde(default = "zero_q", with = "crate::rational::serde_q")]
        offset: Q,
    },
}

fn zero_q() -> Q {
    qi(0)
}

/// A PL cosine sample: `1` at `k = 0`, `−1` at `k = n/2`, linear in between.
pub fn pl_cos_value(k: i64, n: usize) -> Q {
    let n = n as i64;
    let k = k.rem_euclid(n);
    Q::new((n - 4 * k.min(n - k)).into(), n.into())
}

impl FunctionSpec {
    pub fn build(&self, complex: &CellComplex, manifold: &ComplexSpec) -> Result<PLFunction> {
        let nv = complex.num_vertices();
        let values = match self {
            FunctionSpec::Constant { value } => vec![value.clone(); nv],
            FunctionSpec::Values { values } => values.clone(),
            FunctionSpec::PlCos { terms } => {
                let periods = manifold.circle_periods().ok_or_else(|| {
                    HarnessError::Input("pl_cos needs a product of circles".into())
                })?;
                let coords = vertex_coords(complex)?;
                coords
                    .iter()
                    .map(|c| {
                        terms.iter().try_fold(qi(0), |acc, t| {
                            let n = *periods.get(t.axis).ok_or_else(|| {
                                HarnessError::Input(format!("no circle axis {}", t.axis))
                            })?;
                            Ok(acc + &t.amplitude * pl_cos_value(c[t.axis], n))
                        })
                    })
                    .collect::<Result<Vec<Q>>>()?
            }
            FunctionSpec::Linear { weights, offset } => {
                let coords = vertex_coords(complex)?;
                coords
                    .iter()
                    .map(|c| {
                        if c.len() != weights.len() {
                            return Err(HarnessError::Input(format!(
                                "linear function has {} weights for {}-dim coordinates",
                                weights.len(),
                                c.len()
                            )));
                        }
                        Ok(c.iter()
                            .zip(weights)
                            .fold(offset.clone(), |acc, (&x, w)| acc + w * qi(x)))
                    })
                    .collect::<Result<Vec<Q>>>()?
            }
        };
        Ok(PLFunction::new(complex, values)?)
    }
}

fn vertex_coords(complex: &CellComplex) -> Result<&[Vec<i64>]> {
    complex
        .coords()
        .ok_or_else(|| HarnessError::Input("complex has no vertex coordinates".into()))
}

/// Analytic normal Hessian for the components at a critical level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelHessian {
    #[serde(with = "crate::rational::serde_q")]
    pub level: Q,
    #[serde(with = "crate::rational::serde_q_matrix")]
    pub normal: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub phi1: FunctionSpec,
    pub phi2: FunctionSpec,
    #[serde(default)]
    pub hessians: Vec<LevelHessian>,
}

/// One germ: a point, a tangent plane given as the graph of a symmetric
/// matrix or by an explicit `2m × m` frame, a primitive value and a shift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermSpec {
    #[serde(with = "crate::rational::serde_q_vec")]
    pub x: Vec<Q>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub xi: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_matrix")]
    pub hessian: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_matrix")]
    pub frame: Option<Vec<Vec<Q>>>,
    #[serde(with = "crate::rational::serde_q")]
    pub primitive: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<HalfInt>,
}

mod opt_matrix {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Option<Vec<Vec<Q>>>, s: S) -> Result<S::Ok, S::Error> {
        match m {
            Some(rows) => crate::rational::serde_q_matrix::serialize(rows, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<Q>>>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "crate::rational::serde_q_matrix")] Vec<Vec<Q>>);
        Ok(Some(Wrap::deserialize(d)?.0))
    }
}

impl GermSpec {
    pub fn build(&self) -> Result<LagrangianGerm> {
        let m = self.x.len();
        if self.xi.len() != m {
            return Err(HarnessError::Input("x and xi lengths differ".into()));
        }
        let mut germ = match (&self.hessian, &self.frame) {
            (Some(h), None) => LagrangianGerm::epigraph(
                self.x.clone(),
                self.xi.clone(),
                &QMatrix::from_rows(h),
                self.primitive.clone(),
            )?,
            (None, Some(f)) => {
                let space = SymplecticSpace::new(m)?;
                LagrangianGerm {
                    x: self.x.clone(),
                    xi: self.xi.clone(),
                    tangent: LagrangianFrame::new(space, QMatrix::from_rows(f))?,
                    primitive_value: self.primitive.clone(),
                    shift: None,
                    grading: None,
                }
            }
            _ => {
                return Err(HarnessError::Input(
                    "a germ needs exactly one of `hessian` and `frame`".into(),
                ))
            }
        };
        if let Some(d) = self.shift {
            germ.shift = Some(d);
        }
        if germ.shift.is_none() {
            return Err(HarnessError::Input("a germ given by a frame needs a shift".into()));
        }
        Ok(germ)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub dim_c: usize,
    pub betti: Vec<usize>,
    #[serde(with = "crate::rational::serde_q")]
    pub f21: Q,
    pub s: i64,
    pub germ1: GermSpec,
    pub germ2: GermSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub a: Ext,
    pub b: Ext,
}

/// The on-disk form of a scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format_version: u32,
    #[serde(default)]
    pub name: String,
    pub manifold: ComplexSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub windows: Vec<WindowSpec>,
    #[serde(default = "default_tasks")]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| HarnessError::Input(e.to_string()))?;
        if file.format_version != FORMAT_VERSION {
            return Err(HarnessError::Input(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                file.format_version
            )));
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }
}

#[derive(Debug, Clone)]
pub enum Mode {
    Graph {
        phi1: PLFunction,
        phi2: PLFunction,
        hessians: Vec<(Q, QMatrix)>,
    },
    Component {
        records: Vec<CleanComponentRecord>,
    },
}

/// A resolved scenario, ready for evaluation.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub complex: CellComplex,
    pub mode: Mode,
    pub windows: Vec<(Ext, Ext)>,
    pub tasks: Vec<Task>,
    pub seed: u64,
}

impl Scenario {
    pub fn from_file(file: &ScenarioFile) -> Result<Self> {
        let complex = file.manifold.build()?;
        let mode = match (&file.graph, file.components.is_empty()) {
            (Some(g), true) => Mode::Graph {
                phi1: g.phi1.build(&complex, &file.manifold)?,
                phi2: g.phi2.build(&complex, &file.manifold)?,
                hessians: g
                    .hessians
                    .iter()
                    .map(|h| (h.level.clone(), QMatrix::from_rows(&h.normal)))
                    .collect(),
            },
            (None, false) => Mode::Component {
                records: file
                    .components
                    .iter()
                    .map(|c| {
                        Ok(CleanComponentRecord {
                            dim_c: c.dim_c,
                            betti: c.betti.clone(),
                            germ1: c.germ1.build()?,
                            germ2: c.germ2.build()?,
                            f21: c.f21.clone(),
                            s: c.s,
                        })
                    })
                    .collect::<Result<_>>()?,
            },
            _ => {
                return Err(HarnessError::Input(
                    "a scenario needs exactly one of `graph` and `components`".into(),
                ))
            }
        };
        let windows = if file.windows.is_empty() {
            vec![(Ext::NegInf, Ext::PosInf)]
        } else {
            file.windows.iter().map(|w| (w.a.clone(), w.b.clone())).collect()
        };
        for (a, b) in &windows {
            if a >= b || *a == Ext::PosInf || *b == Ext::NegInf {
                return Err(HarnessError::Input(format!("empty window [{a}, {b})")));
            }
        }
        Ok(Scenario {
            name: file.name.clone(),
            complex,
            mode,
            windows,
            tasks: file.tasks.clone(),
            seed: file.seed,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_file(&ScenarioFile::from_toml(text)?)
    }

    /// `ψ = φ₂ − φ₁` in graph mode.
    pub fn difference(&self) -> Option<PLFunction> {
        match &self.mode {
            Mode::Graph { phi1, phi2, .. } => Some(phi2.sub(phi1)),
            Mode::Component { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pl_cos_samples() {
        assert_eq!(pl_cos_value(0, 8), qi(1));
        assert_eq!(pl_cos_value(4, 8), qi(-1));
        assert_eq!(pl_cos_value(2, 8), qi(0));
        assert_eq!(pl_cos_value(7, 8), pl_cos_value(1, 8));
        assert_eq!(pl_cos_value(-1, 8), pl_cos_value(1, 8));
    }

    #[test]
    fn parses_graph_scenario() {
        let text = r#"
format_version = 1
name = "circle"
tasks = ["clean", "levels"]

[manifold]
kind = "circle"
n = 8

[graph.phi1]
kind = "constant"
value = 0

[graph.phi2]
kind = "pl_cos"
terms = [{ axis = 0, amplitude = "1/2" }]

[[windows]]
a = "-inf"
b = "+inf"
"#;
        let s = Scenario::from_toml(text).unwrap();
        let psi = s.difference().unwrap();
        assert_eq!(psi.values()[0], Q::new(1.into(), 2.into()));
        assert_eq!(psi.values()[4], Q::new((-1).into(), 2.into()));
        assert_eq!(s.tasks, vec![Task::Clean, Task::Levels]);
    }

    #[test]
    fn rejects_wrong_version_and_mixed_modes() {
        let bad = "format_version = 7\n[manifold]\nkind = \"point\"\n";
        assert!(matches!(ScenarioFile::from_toml(bad), Err(HarnessError::Input(_))));
        let neither = "format_version = 1\n[manifold]\nkind = \"point\"\n";
        assert!(matches!(Scenario::from_toml(neither), Err(HarnessError::Input(_))));
    }
}
