use num_traits::Signed;

use super::report::{
    CohlagrLine, ComponentLine, CorollaryLine, DegreeLine, DegreeSource, LevelLine, Report,
    Verdict, WindowReport,
};
use super::scenario::{Mode, Scenario, Task};
use super::{HarnessError, Result};
use crate::degrees::{degree_s, degree_s_morse_bott};
use crate::flathomology::{level_components, CellComplex, PLFunction, Persistence};
use crate::rational::{format_q, qi, Ext, Q};

/// A connected component of the intersection with its action value and degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedComponent {
    pub level: Q,
    pub dim: usize,
    pub betti: Vec<usize>,
    pub s: i64,
    pub source: DegreeSource,
}

fn top_dim(complex: &CellComplex) -> usize {
    complex.dimension().unwrap_or(0)
}

/// Components of `L₁ ∩ L₂` with their degrees: level components of
/// `ψ = φ₂ − φ₁` in graph mode, the supplied records in component mode.
pub fn resolve_components(scenario: &Scenario) -> Result<Vec<ResolvedComponent>> {
    match &scenario.mode {
        Mode::Graph { hessians, .. } => {
            let psi = scenario.difference().expect("graph mode");
            let m = top_dim(&scenario.complex);
            let persistence = Persistence::compute(&scenario.complex, &psi);
            let mut out = Vec::new();
            for c in persistence.critical_values() {
                let hessian = hessians.iter().find(|(level, _)| *level == c);
                for comp in level_components(&scenario.complex, &psi, &c) {
                    if !comp.is_critical() {
                        continue;
                    }
                    let s = comp.morse_bott_degree().ok_or_else(|| HarnessError::NotMorseBott {
                        level: format_q(&c),
                        local: comp.local.clone(),
                        betti: comp.betti.clone(),
                    })? as i64;
                    let mut dim = comp.betti.iter().rposition(|&b| b > 0).unwrap_or(0);
                    let mut source = DegreeSource::LocalHomology;
                    if let Some((_, h)) = hessian {
                        let dim_c = m.checked_sub(h.rows()).ok_or_else(|| {
                            HarnessError::Input(format!(
                                "normal Hessian at level {} is larger than the manifold",
                                format_q(&c)
                            ))
                        })?;
                        let s_h = degree_s_morse_bott(m, dim_c, h)?;
                        if s_h != s {
                            return Err(HarnessError::InconsistentComponentData {
                                index: out.len(),
                                supplied: s_h,
                                recomputed: s,
                            });
                        }
                        dim = dim_c;
                        source = DegreeSource::Hessian;
                    }
                    out.push(ResolvedComponent {
                        level: c.clone(),
                        dim,
                        betti: comp.betti,
                        s,
                        source,
                    });
                }
            }
            Ok(out)
        }
        Mode::Component { records } => records
            .iter()
            .enumerate()
            .map(|(index, r)| {
                let s = degree_s(r)?;
                if s != r.s {
                    return Err(HarnessError::InconsistentComponentData {
                        index,
                        supplied: r.s,
                        recomputed: s,
                    });
                }
                Ok(ResolvedComponent {
                    level: r.f21.clone(),
                    dim: r.dim_c,
                    betti: r.betti.clone(),
                    s,
                    source: DegreeSource::Germs,
                })
            })
            .collect(),
    }
}

fn in_window(level: &Q, a: &Ext, b: &Ext) -> bool {
    let v = Ext::Finite(level.clone());
    *a <= v && v < *b
}

/// `Σ_{a ≤ f₂₁(C) < b} b_{k−s(C)}(C)`.
pub fn lhs_count(components: &[ResolvedComponent], a: &Ext, b: &Ext, k: usize) -> usize {
    components
        .iter()
        .filter(|c| in_window(&c.level, a, b))
        .map(|c| {
            let j = k as i64 - c.s;
            if j < 0 {
                0
            } else {
                c.betti.get(j as usize).copied().unwrap_or(0)
            }
        })
        .sum()
}

/// The right-hand side for the window `[a, b)`: the sublevel pair dimension
/// of `ψ` in graph mode; in component mode only covering windows have one.
pub fn rhs_count(
    scenario: &Scenario,
    components: &[ResolvedComponent],
    a: &Ext,
    b: &Ext,
    k: usize,
) -> Result<Option<usize>> {
    match &scenario.mode {
        Mode::Graph { .. } => {
            let psi = scenario.difference().expect("graph mode");
            Ok(Some(crate::flathomology::relative_dim(
                &scenario.complex,
                &psi,
                a,
                b,
                k,
            )?))
        }
        Mode::Component { .. } => {
            let covering = components.iter().all(|c| in_window(&c.level, a, b));
            Ok(covering.then(|| scenario.complex.betti(k)))
        }
    }
}

/// Moves finite endpoints that coincide with a value in `values` down by half
/// the minimal gap between distinct values. For strict sublevel sets this
/// does not change `{ψ < a}`.
pub fn perturb_window(a: &Ext, b: &Ext, values: &[Q]) -> (Ext, Ext, bool) {
    let mut sorted = values.to_vec();
    sorted.sort();
    sorted.dedup();
    let gap = sorted
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(|| qi(1));
    let half = gap / qi(2);
    let mut moved = false;
    let mut fix = |e: &Ext| match e {
        Ext::Finite(v) if sorted.binary_search(v).is_ok() => {
            moved = true;
            Ext::Finite(v - &half)
        }
        other => other.clone(),
    };
    let (a2, b2) = (fix(a), fix(b));
    (a2, b2, moved)
}

fn critical_levels(scenario: &Scenario, components: &[ResolvedComponent]) -> Vec<Q> {
    match scenario.difference() {
        Some(psi) => psi.distinct_values(),
        None => components.iter().map(|c| c.level.clone()).collect(),
    }
}

fn window_report(
    scenario: &Scenario,
    components: &[ResolvedComponent],
    persistence: Option<&Persistence>,
    window: &(Ext, Ext),
) -> Result<WindowReport> {
    let levels = critical_levels(scenario, components);
    let (a, b, moved) = perturb_window(&window.0, &window.1, &levels);
    let top = top_dim(&scenario.complex);
    let mut degrees = Vec::new();
    for k in 0..=top {
        let lhs = lhs_count(components, &a, &b, k);
        let rhs = match persistence {
            Some(p) => Some(p.window(&a, &b, k)?),
            None => rhs_count(scenario, components, &a, &b, k)?,
        };
        let verdict = match rhs {
            Some(r) => Verdict::from_bool(lhs >= r),
            None => Verdict::Unavailable,
        };
        if lhs > 0 || rhs.is_none_or(|r| r > 0) {
            degrees.push(DegreeLine { k, lhs, rhs, verdict });
        }
    }
    Ok(WindowReport {
        a,
        b,
        requested: moved.then(|| window.clone()),
        degrees,
    })
}

/// Per-level equality on `[c − ε, c + ε)` for every critical value `c`.
fn level_lines(
    psi: &PLFunction,
    persistence: &Persistence,
    components: &[ResolvedComponent],
    top: usize,
) -> Result<Vec<LevelLine>> {
    let values = psi.distinct_values();
    let mut levels: Vec<Q> = components.iter().map(|c| c.level.clone()).collect();
    levels.extend(persistence.critical_values());
    levels.sort();
    levels.dedup();
    let mut out = Vec::new();
    for c in levels {
        let i = values.binary_search(&c).expect("critical values are vertex values");
        let mut eps = qi(1);
        if i > 0 {
            eps = eps.min(&c - &values[i - 1]);
        }
        if i + 1 < values.len() {
            eps = eps.min(&values[i + 1] - &c);
        }
        let eps = eps / qi(2);
        let (a, b) = (Ext::Finite(&c - &eps), Ext::Finite(&c + &eps));
        for k in 0..=top {
            let lhs = lhs_count(components, &a, &b, k);
            let rhs = persistence.window(&a, &b, k)?;
            if lhs > 0 || rhs > 0 {
                out.push(LevelLine {
                    level: c.clone(),
                    k,
                    lhs,
                    rhs,
                    verdict: Verdict::from_bool(lhs == rhs),
                });
            }
        }
    }
    Ok(out)
}

/// Evaluates every window in every degree, the summed corollary, and the
/// tasks requested by the scenario.
pub fn verify_clean(scenario: &Scenario) -> Result<Report> {
    let components = resolve_components(scenario)?;
    let mut report = Report::new(scenario.name.clone());
    report.components = components
        .iter()
        .map(|c| ComponentLine {
            f21: c.level.clone(),
            dim: c.dim,
            betti: c.betti.clone(),
            s: c.s,
            source: c.source,
        })
        .collect();
    let psi = scenario.difference();
    let persistence = psi
        .as_ref()
        .map(|psi| Persistence::compute(&scenario.complex, psi));
    let top = top_dim(&scenario.complex);

    if scenario.tasks.contains(&Task::Clean) {
        for w in &scenario.windows {
            let wr = window_report(scenario, &components, persistence.as_ref(), w)?;
            if let Some((a, b)) = &wr.requested {
                report.notes.push(format!(
                    "window [{a}, {b}) has an endpoint on a value of ψ; evaluated on [{}, {})",
                    wr.a, wr.b
                ));
            }
            if wr.degrees.iter().any(|d| d.verdict == Verdict::Unavailable) {
                report.notes.push(format!(
                    "window [{}, {}): no right-hand side in component mode unless the window covers every component",
                    wr.a, wr.b
                ));
            }
            report.windows.push(wr);
        }
        let lhs_total: usize = components.iter().map(|c| c.betti.iter().sum::<usize>()).sum();
        let rhs_total: usize = scenario.complex.betti_numbers().iter().sum();
        report.corollary = Some(CorollaryLine {
            lhs_total,
            rhs_total,
            verdict: Verdict::from_bool(lhs_total >= rhs_total),
        });
    }
    if scenario.tasks.contains(&Task::Levels) {
        let (Some(psi), Some(p)) = (&psi, &persistence) else {
            return Err(HarnessError::Input("the levels task needs graph mode".into()));
        };
        report.levels = level_lines(psi, p, &components, top)?;
    }
    if scenario.tasks.contains(&Task::Cohlagr) {
        report.cohlagr = Some(verify_cohlagr(scenario, None)?);
    }
    Ok(report)
}

/// Hom dimensions on the windows `[−c, +∞)` as `c → +∞`, compared with the
/// Betti numbers of `M`. `cap` bounds the admissible threshold; by default it
/// is `max |ψ| + 1`.
pub fn verify_cohlagr(scenario: &Scenario, cap: Option<Q>) -> Result<CohlagrLine> {
    let psi = scenario
        .difference()
        .ok_or_else(|| HarnessError::Input("stabilized Hom needs graph mode".into()))?;
    let persistence = Persistence::compute(&scenario.complex, &psi);
    let top = top_dim(&scenario.complex);
    let betti: Vec<usize> = (0..=top).map(|k| scenario.complex.betti(k)).collect();
    let crit = persistence.critical_values();
    let cap = cap.unwrap_or_else(|| {
        let lo = psi.min().cloned().unwrap_or_else(|| qi(0));
        let hi = psi.max().cloned().unwrap_or_else(|| qi(0));
        lo.abs().max(hi.abs()) + qi(1)
    });
    let dims_at = |a: Q| -> Result<Vec<usize>> {
        (0..=top)
            .map(|k| Ok(persistence.window(&Ext::Finite(a.clone()), &Ext::PosInf, k)?))
            .collect()
    };
    // One probe below all critical values and one between each consecutive pair.
    let mut probes = Vec::new();
    if let Some(first) = crit.first() {
        probes.push(first - qi(1));
    } else {
        probes.push(qi(0));
    }
    for w in crit.windows(2) {
        probes.push((&w[0] + &w[1]) / qi(2));
    }
    let mut stable = 0;
    let mut dims = Vec::new();
    for (i, a) in probes.iter().enumerate() {
        let d = dims_at(a.clone())?;
        if i == 0 {
            dims = d.clone();
        }
        if d != betti {
            break;
        }
        stable = i + 1;
    }
    // {ψ < a} is constant for a in (v_{i−1}, v_i], so the last stable probe
    // extends up to the next critical value.
    let threshold = if stable == 0 {
        return Err(HarnessError::no_stabilization(&cap));
    } else {
        -crit.get(stable - 1).cloned().unwrap_or_else(|| &probes[0] + qi(1))
    };
    if threshold > cap {
        return Err(HarnessError::no_stabilization(&cap));
    }
    Ok(CohlagrLine {
        verdict: Verdict::from_bool(dims == betti),
        dims,
        betti,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn perturbation_moves_down_only_on_values() {
        let values = vec![qi(0), qi(1), qi(3)];
        let (a, b, moved) = perturb_window(&Ext::Finite(qi(1)), &Ext::PosInf, &values);
        assert!(moved);
        assert_eq!(a, Ext::Finite(q(1, 2)));
        assert_eq!(b, Ext::PosInf);
        let (_, _, moved) = perturb_window(&Ext::Finite(q(1, 3)), &Ext::Finite(qi(2)), &values);
        assert!(!moved);
    }

    #[test]
    fn lhs_counts_shifted_betti() {
        let comps = vec![
            ResolvedComponent {
                level: qi(-1),
                dim: 0,
                betti: vec![1],
                s: 0,
                source: DegreeSource::LocalHomology,
            },
            ResolvedComponent {
                level: qi(1),
                dim: 1,
                betti: vec![1, 1],
                s: 1,
                source: DegreeSource::LocalHomology,
            },
        ];
        let all = (Ext::NegInf, Ext::PosInf);
        assert_eq!(lhs_count(&comps, &all.0, &all.1, 0), 1);
        assert_eq!(lhs_count(&comps, &all.0, &all.1, 1), 1);
        assert_eq!(lhs_count(&comps, &all.0, &all.1, 2), 1);
        assert_eq!(lhs_count(&comps, &Ext::Finite(qi(0)), &Ext::Finite(qi(1)), 1), 0);
        assert_eq!(lhs_count(&comps, &Ext::Finite(qi(5)), &Ext::PosInf, 0), 0);
    }
}
