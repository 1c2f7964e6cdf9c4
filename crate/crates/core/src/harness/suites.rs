//! Randomized invariant suites for every module, deterministic in the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{Report, SuiteLine, Verdict};
use crate::degrees::{
    degree_s, degree_s_conified, degree_s_morse_bott, floer_grading, CleanComponentRecord,
    LagrangianGerm,
};
use crate::flathomology::{
    relative_dim, relative_dim_by_rank, sublevel, CellComplex, PLFunction,
};
use crate::intervalsheaves::{
    convolve, global_sections, hom_star, tamarkin_hom, torsion_bound, translate,
    windowed_sections, DecoratedInterval, IntervalSheaf,
};
use crate::maslov::{maslov_index, maslov_index_via_fiber, path_index, PathLift};
use crate::matrix::QMatrix;
use crate::rational::{format_q, q, qi, Ext, HalfInt, Q};
use crate::sample;
use crate::symplinalg::{
    apply_symplectic, conify_tangent, direct_sum, fiber, graph_of_symmetric, inertia_index,
    intersection_dim, signature_of_symmetric, zero_section, ConifiedPointData,
    LagrangianFrame, SymplecticSpace,
};

/// Number of random cases per suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSizes {
    pub inertia: usize,
    pub anchor: usize,
    pub conification: usize,
    pub maslov: usize,
    pub degrees: usize,
    pub point_case: usize,
    pub barcode_circle: usize,
    pub barcode_torus: usize,
    pub sheaves: usize,
    pub homology: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes {
            inertia: 500,
            anchor: 100,
            conification: 200,
            maslov: 200,
            degrees: 200,
            point_case: 100,
            barcode_circle: 50,
            barcode_torus: 10,
            sheaves: 100,
            homology: 20,
        }
    }
}

impl SuiteSizes {
    pub fn tiny() -> Self {
        SuiteSizes {
            inertia: 5,
            anchor: 5,
            conification: 5,
            maslov: 3,
            degrees: 5,
            point_case: 5,
            barcode_circle: 2,
            barcode_torus: 1,
            sheaves: 5,
            homology: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub sizes: SuiteSizes,
    /// Flips the sign of every inertia index the suites compare against;
    /// used to check that the suites can fail.
    pub negate_tau: bool,
}

const MAX_DUMPS: usize = 5;

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    dumps: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            dumps: Vec::new(),
        }
    }

    /// Records one case; `outcome` is `Ok(None)` on success, `Ok(Some(msg))`
    /// on a violated property and `Err` when a computation failed.
    fn case<E: std::fmt::Display>(&mut self, outcome: Result<Option<String>, E>) {
        self.cases += 1;
        let msg = match outcome {
            Ok(None) => return,
            Ok(Some(m)) => m,
            Err(e) => format!("error: {e}"),
        };
        self.failures += 1;
        if self.dumps.len() < MAX_DUMPS {
            self.dumps.push(msg);
        }
    }

    fn finish(self) -> SuiteLine {
        SuiteLine {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
            counterexamples: self.dumps,
            verdict: Verdict::from_bool(self.failures == 0),
        }
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

fn fail_if(bad: bool, msg: impl FnOnce() -> String) -> Option<String> {
    bad.then(msg)
}

fn mat_str(m: &QMatrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(format_q).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn frame_str(l: &LagrangianFrame) -> String {
    mat_str(l.columns())
}

struct Tau {
    negate: bool,
}

impl Tau {
    fn of(
        &self,
        a: &LagrangianFrame,
        b: &LagrangianFrame,
        c: &LagrangianFrame,
    ) -> Result<i64, crate::symplinalg::SymplecticError> {
        let t = inertia_index(a, b, c)?;
        Ok(if self.negate { -t } else { t })
    }
}

fn inertia_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 1);
    let tau = Tau { negate: opts.negate_tau };
    let mut tally = Tally::new("inertia_axioms");
    for _ in 0..opts.sizes.inertia {
        let n = rng.gen_range(1..=4);
        let space = SymplecticSpace::new(n).unwrap();
        let l: Vec<LagrangianFrame> = (0..4).map(|_| sample::lagrangian(&mut rng, space)).collect();
        let t = sample::symplectic(&mut rng, n);
        let n2 = rng.gen_range(1..=2);
        let space2 = SymplecticSpace::new(n2).unwrap();
        let m: Vec<LagrangianFrame> = (0..3).map(|_| sample::lagrangian(&mut rng, space2)).collect();
        let outcome = (|| -> Result<Option<String>, crate::symplinalg::SymplecticError> {
            let t123 = tau.of(&l[0], &l[1], &l[2])?;
            let ctx = || format!("n={n} frames {} {} {}", frame_str(&l[0]), frame_str(&l[1]), frame_str(&l[2]));
            if t123 != -tau.of(&l[1], &l[0], &l[2])? || t123 != -tau.of(&l[0], &l[2], &l[1])? {
                return Ok(Some(format!("antisymmetry fails, τ={t123}; {}", ctx())));
            }
            let rhs = tau.of(&l[0], &l[1], &l[3])? + tau.of(&l[1], &l[2], &l[3])? + tau.of(&l[2], &l[0], &l[3])?;
            if t123 != rhs {
                return Ok(Some(format!("cocycle fails: {t123} vs {rhs}; {}", ctx())));
            }
            if t123.unsigned_abs() as usize > 3 * n {
                return Ok(Some(format!("|τ| = {} exceeds 3n; {}", t123.abs(), ctx())));
            }
            let moved: Vec<LagrangianFrame> = l[..3]
                .iter()
                .map(|x| apply_symplectic(&t, x))
                .collect::<Result<_, _>>()?;
            let tm = tau.of(&moved[0], &moved[1], &moved[2])?;
            if tm != t123 {
                return Ok(Some(format!("Sp-invariance fails: {t123} vs {tm}; {}", ctx())));
            }
            let sum = tau.of(
                &direct_sum(&l[0], &m[0]),
                &direct_sum(&l[1], &m[1]),
                &direct_sum(&l[2], &m[2]),
            )?;
            let parts = t123 + tau.of(&m[0], &m[1], &m[2])?;
            Ok(fail_if(sum != parts, || {
                format!("direct-sum additivity fails: {sum} vs {parts}; {}", ctx())
            }))
        })();
        tally.case(outcome);
    }
    tally.finish()
}

fn anchor_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 2);
    let tau = Tau { negate: opts.negate_tau };
    let mut tally = Tally::new("graph_anchor");
    for _ in 0..opts.sizes.anchor {
        let n = rng.gen_range(1..=4);
        let space = SymplecticSpace::new(n).unwrap();
        let a = if rng.gen_bool(0.3) {
            sample::symmetric_low_rank(&mut rng, n, 3)
        } else {
            sample::symmetric(&mut rng, n, 4)
        };
        let outcome = (|| -> Result<Option<String>, crate::symplinalg::SymplecticError> {
            let t = tau.of(&fiber(space), &zero_section(space), &graph_of_symmetric(space, &a)?)?;
            let sgn = signature_of_symmetric(&a)?.signature();
            Ok(fail_if(t != -sgn, || format!("τ = {t}, sgn(A) = {sgn}, A = {}", mat_str(&a))))
        })();
        tally.case(outcome);
    }
    tally.finish()
}

fn conification_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 3);
    let tau = Tau { negate: opts.negate_tau };
    let mut tally = Tally::new("conification");
    for _ in 0..opts.sizes.conification {
        let m = rng.gen_range(1..=3);
        let space = SymplecticSpace::new(m).unwrap();
        let xi: Vec<Q> = (0..m).map(|_| sample::small_q(&mut rng, 3)).collect();
        let l1 = sample::lagrangian(&mut rng, space);
        let l2 = sample::lagrangian(&mut rng, space);
        let outcome = (|| -> Result<Option<String>, crate::symplinalg::SymplecticError> {
            let c1 = conify_tangent(&ConifiedPointData::new(xi.clone(), l1.clone())?)?;
            let c2 = conify_tangent(&ConifiedPointData::new(xi.clone(), l2.clone())?)?;
            let big = tau.of(&c2, &c1, &fiber(c2.space()))?;
            // The base-space value is the reference and is never negated.
            let small = inertia_index(&l2, &l1, &fiber(space))?;
            Ok(fail_if(big != small, || {
                format!("conified τ = {big}, base τ = {small}; L1 {} L2 {}", frame_str(&l1), frame_str(&l2))
            }))
        })();
        tally.case(outcome);
    }
    tally.finish()
}

fn maslov_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 4);
    let tau = Tau { negate: opts.negate_tau };
    let mut tally = Tally::new("maslov_axioms");
    for _ in 0..opts.sizes.maslov {
        let n = if rng.gen_bool(0.6) { 1 } else { rng.gen_range(2..=3) };
        let space = SymplecticSpace::new(n).unwrap();
        let lifts: Vec<PathLift> = (0..3)
            .map(|_| {
                let steps = rng.gen_range(0..=2);
                sample::path_lift(&mut rng, space, steps)
            })
            .collect();
        let (dn, dm) = (rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64));
        let nu = sample::lagrangian(&mut rng, space);
        let outcome = (|| -> Result<Option<String>, crate::maslov::MaslovError> {
            let mu = |a: &PathLift, b: &PathLift| maslov_index(a, b);
            let (l1, l2, l3) = (&lifts[0], &lifts[1], &lifts[2]);
            let m12 = mu(l1, l2)?;
            if m12 != -mu(l2, l1)? {
                return Ok(Some(format!("antisymmetry fails at n={n}")));
            }
            let lhs = m12 + mu(l2, l3)? + mu(l3, l1)?;
            let t = tau.of(&l1.endpoint(), &l2.endpoint(), &l3.endpoint())?;
            if lhs.twice() != t {
                return Ok(Some(format!("coboundary fails: Σμ = {lhs}, ½τ = {}/2, n={n}", t)));
            }
            let k = intersection_dim(&l1.endpoint(), &l2.endpoint())?;
            if !(m12 - HalfInt::from_twice((k + n) as i64)).is_integer() {
                return Ok(Some(format!("parity fails: μ = {m12}, dim ∩ = {k}, n = {n}")));
            }
            let shifted = mu(&l1.deck(dn), &l2.deck(dm))?;
            if shifted != m12 + HalfInt::from_int(dn - dm) {
                return Ok(Some(format!("deck shift fails: {shifted} vs {m12} + {dn} − {dm}")));
            }
            if path_index(&l1.refined(), &nu)? != path_index(l1, &nu)? {
                return Ok(Some("refinement changes path_index".into()));
            }
            let via = maslov_index_via_fiber(l1, l2)?;
            Ok(fail_if(via != m12, || format!("product route {m12} vs fiber route {via}")))
        })();
        tally.case(outcome);
    }
    tally.finish()
}

fn fiber_preserving_symplectic<R: Rng>(rng: &mut R, m: usize) -> QMatrix {
    // (x, ξ) ↦ (Px, P⁻ᵀξ + S P x)
    let p = sample::invertible(rng, m);
    let p_inv_t = p.inverse().expect("invertible").transpose();
    let s = sample::symmetric(rng, m, 2);
    let mut t = QMatrix::zeros(2 * m, 2 * m);
    t.set_block(0, 0, &p);
    t.set_block(m, 0, &(&s * &p));
    t.set_block(m, m, &p_inv_t);
    t
}

fn degree_suite(opts: &SuiteOptions) -> SuiteLine {
    degree_cases(opts, false)
}

/// Clean but not transverse pairs: `A₂ − A₁` singular.
fn degree_clean_suite(opts: &SuiteOptions) -> SuiteLine {
    degree_cases(opts, true)
}

fn degree_cases(opts: &SuiteOptions, clean: bool) -> SuiteLine {
    let (salt, name, count) = if clean {
        (11, "degree_clean", opts.sizes.degrees.div_ceil(4))
    } else {
        (5, "degree_consistency", opts.sizes.degrees)
    };
    let mut rng = rng_for(opts.seed, salt);
    let mut tally = Tally::new(name);
    for _ in 0..count {
        let m = rng.gen_range(1..=3);
        let a1 = sample::symmetric(&mut rng, m, 3);
        let diff = if clean {
            sample::symmetric_low_rank(&mut rng, m, 3)
        } else {
            sample::nondegenerate_symmetric(&mut rng, m, 3)
        };
        let a2 = &a1 + &diff;
        let x: Vec<Q> = (0..m).map(|_| sample::small_q(&mut rng, 2)).collect();
        let xi: Vec<Q> = (0..m).map(|_| sample::small_q(&mut rng, 2)).collect();
        let (v1, v2) = (sample::small_q(&mut rng, 3), sample::small_q(&mut rng, 3));
        let t = fiber_preserving_symplectic(&mut rng, m);
        let outcome = (|| -> Result<Option<String>, crate::degrees::DegreeError> {
            let g1 = LagrangianGerm::epigraph(x.clone(), xi.clone(), &a1, v1.clone())?;
            let g2 = LagrangianGerm::epigraph(x.clone(), xi.clone(), &a2, v2.clone())?;
            let inertia = signature_of_symmetric(&diff)?;
            let rec = CleanComponentRecord {
                dim_c: inertia.zero,
                betti: vec![1],
                germ1: g1.clone(),
                germ2: g2.clone(),
                f21: &v2 - &v1,
                s: 0,
            };
            let ctx = || format!("A1 = {}, A2 = {}", mat_str(&a1), mat_str(&a2));
            let s = degree_s(&rec)?;
            let gr = floer_grading(&rec)?;
            if s != gr {
                return Ok(Some(format!("degree_s {s} ≠ floer_grading {gr}; {}", ctx())));
            }
            let sc = degree_s_conified(&rec)?;
            if sc != s {
                return Ok(Some(format!("conified degree {sc} ≠ {s}; {}", ctx())));
            }
            if !clean {
                let morse = inertia.neg as i64;
                let mb = degree_s_morse_bott(m, 0, &diff)?;
                if s != morse || mb != morse {
                    return Ok(Some(format!("degree_s {s}, Morse–Bott {mb}, index {morse}; {}", ctx())));
                }
            }
            let mut moved = rec.clone();
            moved.germ1.tangent = apply_symplectic(&t, &g1.tangent)?;
            moved.germ2.tangent = apply_symplectic(&t, &g2.tangent)?;
            let sm = degree_s(&moved)?;
            Ok(fail_if(sm != s, || format!("coordinate change moves s from {s} to {sm}; {}", ctx())))
        })();
        tally.case(outcome);
    }
    tally.finish()
}

fn point_case_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 6);
    let mut tally = Tally::new("point_case");
    for _ in 0..opts.sizes.point_case {
        let f1 = sample::small_q(&mut rng, 5);
        let f2 = sample::small_q(&mut rng, 5);
        let a = sample::small_q(&mut rng, 6);
        let b = if rng.gen_bool(0.25) {
            Ext::PosInf
        } else {
            Ext::Finite(&a + Q::new(rng.gen_range(1..=12).into(), 2.into()))
        };
        let outcome = (|| -> Result<Option<String>, crate::intervalsheaves::SheafError> {
            let h = hom_star(&IntervalSheaf::bar(-&f2, None), &IntervalSheaf::bar(-&f1, None))?;
            let sections = windowed_sections(&h, &Ext::Finite(a.clone()), &b)?;
            let f21 = Ext::Finite(&f2 - &f1);
            let lhs = usize::from(Ext::Finite(a.clone()) <= f21 && f21 < b);
            let total: usize = sections.iter().map(|(_, d)| d).sum();
            Ok(fail_if(sections.get(0) != lhs || total != lhs, || {
                format!("f1={f1} f2={f2} window [{a},{b}): sheaf {sections}, count {lhs}")
            }))
        })();
        tally.case(outcome);
    }
    tally.finish()
}

fn random_values<R: Rng>(rng: &mut R, n: usize) -> Vec<Q> {
    (0..n).map(|_| qi(rng.gen_range(-4..=4))).collect()
}

fn random_window<R: Rng>(rng: &mut R) -> (Ext, Ext) {
    let a = if rng.gen_bool(0.15) {
        Ext::NegInf
    } else {
        Ext::Finite(q(2 * rng.gen_range(-5..=4) + 1, 2))
    };
    let b = match &a {
        _ if rng.gen_bool(0.2) => Ext::PosInf,
        Ext::Finite(v) => Ext::Finite(v + qi(rng.gen_range(1..=6))),
        _ => Ext::Finite(q(2 * rng.gen_range(-5..=4) + 1, 2)),
    };
    (a, b)
}

fn barcode_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 7);
    let mut tally = Tally::new("barcode_completeness");
    let circle = CellComplex::circle(16).unwrap();
    let torus = CellComplex::torus(8, 8).unwrap();
    let jobs = std::iter::repeat_n(&circle, opts.sizes.barcode_circle)
        .chain(std::iter::repeat_n(&torus, opts.sizes.barcode_torus));
    for cx in jobs {
        let f = PLFunction::new(cx, random_values(&mut rng, cx.num_vertices())).unwrap();
        let windows: Vec<(Ext, Ext)> = (0..8).map(|_| random_window(&mut rng)).collect();
        let outcome = (|| -> Result<Option<String>, crate::flathomology::HomologyError> {
            for (a, b) in &windows {
                for k in 0..=cx.dimension().unwrap_or(0) {
                    let bar = relative_dim(cx, &f, a, b, k)?;
                    let rank = relative_dim_by_rank(cx, &f, a, b, k)?;
                    if bar != rank {
                        return Ok(Some(format!("window [{a},{b}) k={k}: barcode {bar}, rank {rank}")));
                    }
                }
            }
            Ok(None)
        })();
        tally.case(outcome);
    }
    tally.finish()
}

fn homology_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 8);
    let mut tally = Tally::new("homology_invariants");
    let builtins = vec![
        CellComplex::point(),
        CellComplex::circle(5).unwrap(),
        CellComplex::torus(4, 5).unwrap(),
        CellComplex::sphere2(2).unwrap(),
    ];
    for _ in 0..opts.sizes.homology {
        let cx = &builtins[rng.gen_range(0..builtins.len())];
        let f = PLFunction::new(cx, random_values(&mut rng, cx.num_vertices())).unwrap();
        let (c1, c2) = (qi(rng.gen_range(-4..=4)), qi(rng.gen_range(-4..=5)));
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let euler_ok = |x: &CellComplex| {
            let from_betti: i64 = x
                .betti_numbers()
                .iter()
                .enumerate()
                .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            from_betti == x.euler_characteristic()
        };
        let (sub_lo, map_lo) = sublevel(cx, &f, &lo);
        let (_, map_hi) = sublevel(cx, &f, &hi);
        let outcome: Result<Option<String>, std::convert::Infallible> = Ok(if !euler_ok(cx) {
            Some("Euler characteristic mismatch on a built-in".into())
        } else if !euler_ok(&sub_lo) {
            Some(format!("Euler characteristic mismatch on sublevel {lo}"))
        } else {
            fail_if(!map_lo.iter().all(|c| map_hi.binary_search(c).is_ok()), || {
                format!("sublevel {lo} not contained in sublevel {hi}")
            })
        });
        tally.case(outcome);
    }
    tally.finish()
}

fn random_sheaf<R: Rng>(rng: &mut R, grid: &[Q], max: usize) -> IntervalSheaf {
    let count = rng.gen_range(1..=max);
    IntervalSheaf::new((0..count).map(|_| {
        let i = rng.gen_range(0..grid.len());
        let b = (i + 1 < grid.len() && rng.gen_bool(0.6))
            .then(|| grid[rng.gen_range(i + 1..grid.len())].clone());
        (
            DecoratedInterval::closed_open(grid[i].clone(), b).expect("nonempty"),
            rng.gen_range(-1..=1),
        )
    }))
}

fn sheaf_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 9);
    let mut tally = Tally::new("sheaf_invariants");
    let grid: Vec<Q> = [-3, -1, 0, 1, 2, 4].iter().map(|&v| qi(v)).collect();
    let p = IntervalSheaf::bar(qi(0), None);
    for _ in 0..opts.sizes.sheaves {
        let f = random_sheaf(&mut rng, &grid, 3);
        let g = random_sheaf(&mut rng, &grid, 2);
        let h = random_sheaf(&mut rng, &grid, 2);
        let c = sample::small_q(&mut rng, 4);
        let outcome = (|| -> Result<Option<String>, crate::intervalsheaves::SheafError> {
            let pf = convolve(&p, &f)?;
            if convolve(&p, &pf)? != pf {
                return Ok(Some(format!("projector not idempotent on {f}")));
            }
            if convolve(&f, &g)? != convolve(&g, &f)? {
                return Ok(Some(format!("⋆ not commutative on {f}, {g}")));
            }
            if convolve(&convolve(&f, &g)?, &h)? != convolve(&f, &convolve(&g, &h)?)? {
                return Ok(Some(format!("⋆ not associative on {f}, {g}, {h}")));
            }
            let euler_sum: i64 = f
                .summands()
                .iter()
                .map(|s| global_sections(&IntervalSheaf::single(s.interval.clone(), s.degree)).euler())
                .sum();
            let euler = global_sections(&f).euler();
            if euler != euler_sum || global_sections(&translate(&f, &c)).euler() != euler {
                return Ok(Some(format!("Euler characteristic not additive/invariant on {f}")));
            }
            for k in -2..=2 {
                let base = tamarkin_hom(&f, &g, k)?;
                if tamarkin_hom(&translate(&f, &c), &g, k)? != base
                    || tamarkin_hom(&f, &translate(&g, &c), k)? != base
                {
                    return Ok(Some(format!("tamarkin_hom({f}, {g}, {k}) moves under translation by {c}")));
                }
            }
            let all_finite = f.summands().iter().all(|s| s.interval.length().is_some());
            Ok(fail_if(all_finite && torsion_bound(&f)?.is_none(), || {
                format!("finite barcode {f} has no torsion bound")
            }))
        })();
        tally.case(outcome);
    }
    tally.finish()
}

type SuiteFn = fn(&SuiteOptions) -> SuiteLine;

const SUITES: [(&str, SuiteFn); 11] = [
    ("inertia_axioms", inertia_suite),
    ("graph_anchor", anchor_suite),
    ("conification", conification_suite),
    ("maslov_axioms", maslov_suite),
    ("degree_consistency", degree_suite),
    ("degree_clean", degree_clean_suite),
    ("grading_consistency", grading_suite),
    ("point_case", point_case_suite),
    ("barcode_completeness", barcode_suite),
    ("homology_invariants", homology_suite),
    ("sheaf_invariants", sheaf_suite),
];

/// Names accepted by [`run_suite`], in the order [`run_property_suites`] runs them.
pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _)| *n)
}

/// Runs a single suite by name.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Option<SuiteLine> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, f)| f(opts))
}

/// Runs every suite and collects one line per suite.
pub fn run_property_suites(opts: &SuiteOptions) -> Report {
    let mut report = Report::new(format!("property suites (seed {})", opts.seed));
    report.suites = SUITES.iter().map(|(_, f)| f(opts)).collect();
    if opts.negate_tau {
        report.notes.push("inertia index sign flipped".into());
    }
    report
}

/// Shift consistency under deck transformations of the grading.
fn grading_suite(opts: &SuiteOptions) -> SuiteLine {
    let mut rng = rng_for(opts.seed, 10);
    let mut tally = Tally::new("grading_consistency");
    for _ in 0..opts.sizes.degrees.min(50) {
        let m = rng.gen_range(1..=2);
        let a = sample::symmetric(&mut rng, m, 3);
        let k = rng.gen_range(-2..=2i64);
        let outcome = (|| -> Result<Option<String>, crate::degrees::DegreeError> {
            let mut germ = LagrangianGerm::epigraph(vec![qi(0); m], vec![qi(0); m], &a, qi(0))?;
            if !crate::degrees::grading_consistent(&germ)? {
                return Ok(Some(format!("epigraph germ inconsistent for A = {}", mat_str(&a))));
            }
            let d = germ.shift.expect("epigraph shift");
            germ.grading = germ.grading.map(|g| g.deck(k));
            germ.shift = Some(d - HalfInt::from_int(k));
            Ok(fail_if(!crate::degrees::grading_consistent(&germ)?, || {
                format!("deck {k} with shift d − {k} inconsistent for A = {}", mat_str(&a))
            }))
        })();
        tally.case(outcome);
    }
    tally.finish()
}
