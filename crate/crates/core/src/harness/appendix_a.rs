//! The two degenerate-component examples on the circle: a plateau of
//! `ψ = φ₂ − φ₁` that is a local minimum (closed stalk model) and one that
//! `ψ` passes through monotonically (half-open stalk model).

use std::str::FromStr;

use super::report::{AppendixALine, Report, Verdict};
use super::{HarnessError, Result};
use crate::flathomology::{level_components, CellComplex, PLFunction};
use crate::intervalsheaves::{degenerate_contribution, DegenerateModel};
use crate::rational::{q, qi, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppendixExample {
    One,
    Two,
}

impl FromStr for AppendixExample {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "1" => Ok(AppendixExample::One),
            "two" | "2" => Ok(AppendixExample::Two),
            other => Err(HarnessError::Input(format!("unknown example {other:?}"))),
        }
    }
}

impl AppendixExample {
    fn name(self) -> &'static str {
        match self {
            AppendixExample::One => "one",
            AppendixExample::Two => "two",
        }
    }
}

/// The PL model on `circle(16)`: the complex, `ψ`, the plateau as an interval
/// of vertex coordinates, and the stalk model of the plateau.
pub fn appendix_a_model(
    example: AppendixExample,
) -> (CellComplex, PLFunction, (Q, Q), DegenerateModel) {
    let cx = CellComplex::circle(16).expect("circle");
    let (values, plateau, model): (Vec<Q>, _, _) = match example {
        // Plateau on 0..=3 with ψ rising on both sides; one transverse maximum.
        AppendixExample::One => (
            [0, 0, 0, 0, 2, 4, 6, 8, 10, 12, 10, 8, 6, 4, 2, 1]
                .iter()
                .map(|&v| q(v, 2))
                .collect(),
            (qi(0), qi(3)),
            DegenerateModel::ClosedClosed,
        ),
        // Plateau on 4..=7 crossed monotonically; a transverse minimum and maximum.
        AppendixExample::Two => (
            [-8, -6, -4, -2, 0, 0, 0, 0, 2, 4, 6, 5, 3, 1, -1, -3]
                .iter()
                .map(|&v| q(v, 2))
                .collect(),
            (qi(4), qi(7)),
            DegenerateModel::ClosedOpen,
        ),
    };
    let psi = PLFunction::new(&cx, values).expect("16 values");
    (cx, psi, plateau, model)
}

pub fn verify_appendix_a(example: AppendixExample) -> Result<Report> {
    let (cx, psi, (a, b), model) = appendix_a_model(example);
    let plateau_vertex = a
        .to_integer()
        .try_into()
        .map_err(|_| HarnessError::Input("plateau start is not a vertex".into()))?;
    let mut transverse = 0;
    let mut from_homology = 0;
    for c in psi.distinct_values() {
        for comp in level_components(&cx, &psi, &c) {
            if comp.vertices.contains(&plateau_vertex) {
                from_homology = comp.local.iter().sum();
            } else if comp.is_critical() {
                transverse += 1;
            }
        }
    }
    let contribution: usize = degenerate_contribution(model, &a, &b)?
        .iter()
        .map(|(_, d)| d)
        .sum();
    let betti_sum: usize = cx.betti_numbers().iter().sum();
    let total = transverse + contribution;
    let mut report = Report::new(format!("appendix-a {}", example.name()));
    report.appendix_a = Some(AppendixALine {
        example: example.name().to_string(),
        transverse_count: transverse,
        contribution,
        contribution_from_homology: from_homology,
        total,
        betti_sum,
        lower_bound: betti_sum.saturating_sub(contribution),
        verdict: Verdict::from_bool(total >= betti_sum && contribution == from_homology),
    });
    Ok(report)
}
