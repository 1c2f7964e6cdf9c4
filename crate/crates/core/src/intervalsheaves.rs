//! Constructible sheaves on ℝ as finite sums of decorated intervals, with
//! Tamarkin convolution `⋆`, its right adjoint `ℋom⋆`, translations and
//! Hom in the Tamarkin category.
//!
//! A summand `(I, d)` stands for `k_I[−d]`, so its cohomology sits in degree `d`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_q, qi, Ext, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SheafError {
    #[error("empty interval {0}")]
    EmptyInterval(String),
    #[error("cannot parse interval `{0}`")]
    Parse(String),
    #[error("summand {0} is not of the form [a,b) or [a,+inf)")]
    NotNormalForm(String),
    #[error("window [{a}, {b}) is empty or reversed")]
    BadWindow { a: String, b: String },
    #[error("interval endpoints {a} > {b}")]
    BadInterval { a: String, b: String },
}

pub type Result<T> = std::result::Result<T, SheafError>;

/// An interval of ℝ with each end open or closed. Infinite ends are stored as closed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedInterval {
    left: Ext,
    right: Ext,
    left_closed: bool,
    right_closed: bool,
}

impl DecoratedInterval {
    pub fn new(left: Ext, right: Ext, left_closed: bool, right_closed: bool) -> Result<Self> {
        let left_closed = left_closed || !left.is_finite();
        let right_closed = right_closed || !right.is_finite();
        let iv = DecoratedInterval {
            left,
            right,
            left_closed,
            right_closed,
        };
        let ok = match iv.left.cmp(&iv.right) {
            std::cmp::Ordering::Less => iv.left != Ext::PosInf && iv.right != Ext::NegInf,
            std::cmp::Ordering::Equal => iv.left.is_finite() && left_closed && right_closed,
            std::cmp::Ordering::Greater => false,
        };
        if !ok {
            return Err(SheafError::EmptyInterval(iv.to_string()));
        }
        Ok(iv)
    }

    /// `[a, b)`, or `[a, +∞)` when `b` is `None`.
    pub fn closed_open(a: Q, b: Option<Q>) -> Result<Self> {
        match b {
            Some(b) => Self::new(Ext::Finite(a), Ext::Finite(b), true, false),
            None => Self::new(Ext::Finite(a), Ext::PosInf, true, true),
        }
    }

    pub fn closed(a: Q, b: Q) -> Result<Self> {
        Self::new(Ext::Finite(a), Ext::Finite(b), true, true)
    }

    pub fn open(a: Ext, b: Ext) -> Result<Self> {
        Self::new(a, b, false, false)
    }

    pub fn left(&self) -> &Ext {
        &self.left
    }

    pub fn right(&self) -> &Ext {
        &self.right
    }

    pub fn left_closed(&self) -> bool {
        self.left_closed
    }

    pub fn right_closed(&self) -> bool {
        self.right_closed
    }

    pub fn contains(&self, t: &Q) -> bool {
        let t = Ext::Finite(t.clone());
        let above = if self.left_closed { self.left <= t } else { self.left < t };
        let below = if self.right_closed { t <= self.right } else { t < self.right };
        above && below
    }

    /// `(a, b)` with `b = None` for `+∞`, when the interval is `[a,b)` or `[a,+∞)`.
    pub fn normal_form(&self) -> Option<(Q, Option<Q>)> {
        let a = self.left.finite()?.clone();
        if !self.left_closed {
            return None;
        }
        match &self.right {
            Ext::PosInf => Some((a, None)),
            Ext::Finite(b) if !self.right_closed => Some((a, Some(b.clone()))),
            _ => None,
        }
    }

    pub fn translate(&self, c: &Q) -> DecoratedInterval {
        DecoratedInterval {
            left: self.left.add_q(c),
            right: self.right.add_q(c),
            left_closed: self.left_closed,
            right_closed: self.right_closed,
        }
    }

    /// Length, `None` when unbounded.
    pub fn length(&self) -> Option<Q> {
        Some(self.right.finite()? - self.left.finite()?)
    }
}

impl fmt::Display for DecoratedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.left_closed && self.left.is_finite() { '[' } else { '(' };
        let r = if self.right_closed && self.right.is_finite() { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.left, self.right)
    }
}

impl FromStr for DecoratedInterval {
    type Err = SheafError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let err = || SheafError::Parse(s.to_string());
        let mut chars = t.chars();
        let open = chars.next().ok_or_else(err)?;
        let close = chars.next_back().ok_or_else(err)?;
        let inner = chars.as_str();
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        let left: Ext = a.parse().map_err(|_| err())?;
        let right: Ext = b.parse().map_err(|_| err())?;
        let lc = match open {
            '[' => true,
            '(' => false,
            _ => return Err(err()),
        };
        let rc = match close {
            ']' => true,
            ')' => false,
            _ => return Err(err()),
        };
        DecoratedInterval::new(left, right, lc, rc)
    }
}

impl Serialize for DecoratedInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DecoratedInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Finitely supported dimension vector `k ↦ dim`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedDim(BTreeMap<i64, usize>);

impl GradedDim {
    pub fn zero() -> Self {
        GradedDim::default()
    }

    pub fn single(degree: i64) -> Self {
        GradedDim(BTreeMap::from([(degree, 1)]))
    }

    pub fn get(&self, k: i64) -> usize {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_assign(&mut self, other: &GradedDim) {
        for (k, v) in &other.0 {
            *self.0.entry(*k).or_default() += v;
        }
        self.0.retain(|_, v| *v > 0);
    }

    /// The dimension vector of `X[−by]`, i.e. degrees raised by `by`.
    pub fn shifted(&self, by: i64) -> GradedDim {
        GradedDim(self.0.iter().map(|(k, v)| (k + by, *v)).collect())
    }

    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .map(|(k, v)| if k % 2 == 0 { *v as i64 } else { -(*v as i64) })
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }
}

impl fmt::Display for GradedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Summand {
    pub interval: DecoratedInterval,
    #[serde(default)]
    pub degree: i64,
}

/// `⊕ k_I[−d]`, kept sorted so that equality is multiset equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSheaf {
    summands: Vec<Summand>,
}

impl IntervalSheaf {
    pub fn zero() -> Self {
        IntervalSheaf::default()
    }

    pub fn new(summands: impl IntoIterator<Item = (DecoratedInterval, i64)>) -> Self {
        let mut s: Vec<Summand> = summands
            .into_iter()
            .map(|(interval, degree)| Summand { interval, degree })
            .collect();
        s.sort();
        IntervalSheaf { summands: s }
    }

    pub fn single(interval: DecoratedInterval, degree: i64) -> Self {
        Self::new([(interval, degree)])
    }

    /// `k_{[a,b)}` in degree 0, or `k_{[a,+∞)}` when `b` is `None`.
    pub fn bar(a: Q, b: Option<Q>) -> Self {
        Self::single(
            DecoratedInterval::closed_open(a, b).expect("nonempty bar"),
            0,
        )
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn direct_sum(&self, other: &IntervalSheaf) -> IntervalSheaf {
        Self::new(
            self.summands
                .iter()
                .chain(&other.summands)
                .map(|s| (s.interval.clone(), s.degree)),
        )
    }

    /// `F[−d]`: every summand's degree raised by `d`.
    pub fn shift(&self, d: i64) -> IntervalSheaf {
        Self::new(self.summands.iter().map(|s| (s.interval.clone(), s.degree + d)))
    }

    /// `T_c F`: every endpoint moved by `c`.
    pub fn translate(&self, c: &Q) -> IntervalSheaf {
        Self::new(self.summands.iter().map(|s| (s.interval.translate(c), s.degree)))
    }

    fn normal_summands(&self) -> Result<Vec<(Q, Option<Q>, i64)>> {
        self.summands
            .iter()
            .map(|s| {
                s.interval
                    .normal_form()
                    .map(|(a, b)| (a, b, s.degree))
                    .ok_or_else(|| SheafError::NotNormalForm(s.interval.to_string()))
            })
            .collect()
    }

    /// Finite endpoints of all summands.
    pub fn breakpoints(&self) -> Vec<Q> {
        let mut out: Vec<Q> = self
            .summands
            .iter()
            .flat_map(|s| [s.interval.left.finite().cloned(), s.interval.right.finite().cloned()])
            .flatten()
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for IntervalSheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                if s.degree == 0 {
                    format!("k{}", s.interval)
                } else {
                    format!("k{}[{}]", s.interval, -s.degree)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `RΓ(ℝ; k_I)`: closed or unbounded-closed intervals have one section, open
/// bounded ones one class in degree 1, half-open ones nothing.
fn interval_sections(left_closed: bool, right_closed: bool) -> GradedDim {
    match (left_closed, right_closed) {
        (true, true) => GradedDim::single(0),
        (false, false) => GradedDim::single(1),
        _ => GradedDim::zero(),
    }
}

pub fn global_sections(f: &IntervalSheaf) -> GradedDim {
    let mut out = GradedDim::zero();
    for s in &f.summands {
        out.add_assign(
            &interval_sections(s.interval.left_closed, s.interval.right_closed).shifted(s.degree),
        );
    }
    out
}

/// `RΓ((−∞, upper); k_I)`. An end of `I ∩ (−∞, upper)` that reaches `upper`
/// behaves like a closed end.
fn sections_below(iv: &DecoratedInterval, upper: &Ext) -> GradedDim {
    if iv.left >= *upper {
        return GradedDim::zero();
    }
    let right_closed = if iv.right >= *upper { true } else { iv.right_closed };
    interval_sections(iv.left_closed, right_closed)
}

/// `RΓ_{[a,b)}((−∞, b); F)`.
pub fn windowed_sections(f: &IntervalSheaf, a: &Ext, b: &Ext) -> Result<GradedDim> {
    if a >= b || *a == Ext::PosInf || *b == Ext::NegInf {
        return Err(SheafError::BadWindow {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let mut out = GradedDim::zero();
    for s in &f.summands {
        let whole = sections_below(&s.interval, b);
        let outside = sections_below(&s.interval, a);
        // When both sides are nonzero they sit in the same degree and the
        // restriction is an isomorphism.
        if whole != outside {
            out.add_assign(&whole.shifted(s.degree));
            out.add_assign(&outside.shifted(s.degree + 1));
        }
    }
    Ok(out)
}

fn push_bar(out: &mut Vec<(DecoratedInterval, i64)>, a: Q, b: Option<Q>, degree: i64) {
    if let Some(b) = &b {
        if *b <= a {
            return;
        }
    }
    out.push((DecoratedInterval::closed_open(a, b).expect("nonempty"), degree));
}

/// Tamarkin convolution of sheaves in barcode normal form.
pub fn convolve(f: &IntervalSheaf, g: &IntervalSheaf) -> Result<IntervalSheaf> {
    let (fs, gs) = (f.normal_summands()?, g.normal_summands()?);
    let mut out = Vec::new();
    for (a, b, d1) in &fs {
        for (c, e, d2) in &gs {
            let deg = d1 + d2;
            match (b, e) {
                (None, None) => push_bar(&mut out, a + c, None, deg),
                (Some(b), None) => push_bar(&mut out, a + c, Some(b + c), deg),
                (None, Some(e)) => push_bar(&mut out, a + c, Some(a + e), deg),
                (Some(b), Some(e)) => {
                    let (x, y) = (a + e, b + c);
                    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                    push_bar(&mut out, a + c, Some(lo), deg);
                    push_bar(&mut out, hi, Some(b + e), deg + 1);
                }
            }
        }
    }
    Ok(IntervalSheaf::new(out))
}

/// `ℋom⋆(G, H)`, the right adjoint of `− ⋆ G`, on barcode normal forms.
pub fn hom_star(g: &IntervalSheaf, h: &IntervalSheaf) -> Result<IntervalSheaf> {
    let (gs, hs) = (g.normal_summands()?, h.normal_summands()?);
    let mut out = Vec::new();
    for (a, b, dg) in &gs {
        for (c, d, dh) in &hs {
            let deg = dh - dg;
            match (b, d) {
                (None, None) => push_bar(&mut out, c - a, None, deg),
                (None, Some(d)) => push_bar(&mut out, c - a, Some(d - a), deg),
                (Some(b), None) => push_bar(&mut out, c - b, Some(c - a), deg - 1),
                (Some(b), Some(d)) => {
                    let (x, y) = (c - a, d - b);
                    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                    push_bar(&mut out, hi, Some(d - a), deg);
                    push_bar(&mut out, c - b, Some(lo), deg - 1);
                }
            }
        }
    }
    Ok(IntervalSheaf::new(out))
}

/// Least `c ≥ 0` with `F → T_c F` zero: the longest bar, `None` for `+∞`.
pub fn torsion_bound(f: &IntervalSheaf) -> Result<Option<Q>> {
    let mut best = qi(0);
    for (a, b, _) in f.normal_summands()? {
        match b {
            None => return Ok(None),
            Some(b) => {
                let len = b - a;
                if len > best {
                    best = len;
                }
            }
        }
    }
    Ok(Some(best))
}

pub fn translate(f: &IntervalSheaf, c: &Q) -> IntervalSheaf {
    f.translate(c)
}

/// `dim Hom_𝒯(F, G[k])`: `RΓ_{[0,∞)}(ℝ; ℋom⋆(F, T_c G))` in degree `k`, for
/// `c` past every breakpoint difference, where it no longer depends on `c`.
pub fn tamarkin_hom(f: &IntervalSheaf, g: &IntervalSheaf, k: i64) -> Result<usize> {
    let at = |c: &Q| -> Result<usize> {
        let h = hom_star(f, &g.translate(c))?;
        Ok(windowed_sections(&h, &Ext::Finite(qi(0)), &Ext::PosInf)?.get(k))
    };
    let spread = f
        .breakpoints()
        .iter()
        .chain(g.breakpoints().iter())
        .map(|v| if *v < qi(0) { -v.clone() } else { v.clone() })
        .max()
        .unwrap_or_else(|| qi(0));
    let c = spread * qi(2) + qi(1);
    let v = at(&c)?;
    debug_assert_eq!(v, at(&(c + qi(1)))?);
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegenerateModel {
    /// A plateau closed on both sides: `k_{[a,b]×(0,∞)}`.
    ClosedClosed,
    /// A plateau open on the right: `k_{[a,b)×(0,∞)}`.
    ClosedOpen,
}

/// Contribution of a degenerate component modeled on `[a,b]` or `[a,b)`.
pub fn degenerate_contribution(model: DegenerateModel, a: &Q, b: &Q) -> Result<GradedDim> {
    let bad = || SheafError::BadInterval {
        a: format_q(a),
        b: format_q(b),
    };
    let iv = match model {
        DegenerateModel::ClosedClosed if a <= b => DecoratedInterval::closed(a.clone(), b.clone())?,
        DegenerateModel::ClosedOpen if a < b => {
            DecoratedInterval::closed_open(a.clone(), Some(b.clone()))?
        }
        _ => return Err(bad()),
    };
    Ok(global_sections(&IntervalSheaf::single(iv, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn iv(s: &str) -> DecoratedInterval {
        s.parse().unwrap()
    }

    fn sheaf(parts: &[(&str, i64)]) -> IntervalSheaf {
        IntervalSheaf::new(parts.iter().map(|(s, d)| (iv(s), *d)))
    }

    fn fin(v: i64) -> Ext {
        Ext::Finite(qi(v))
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(iv("[0,1)").to_string(), "[0,1)");
        assert_eq!(iv("[1/2,+inf)").to_string(), "[1/2,+inf)");
        assert_eq!(iv("(-inf, 2]").to_string(), "(-inf,2]");
        assert!("[1,0)".parse::<DecoratedInterval>().is_err());
        assert!("[1,1)".parse::<DecoratedInterval>().is_err());
        assert!("[1,1]".parse::<DecoratedInterval>().is_ok());
        assert!("{0,1}".parse::<DecoratedInterval>().is_err());
    }

    #[test]
    fn global_sections_table() {
        assert_eq!(global_sections(&sheaf(&[("[0,1]", 0)])), GradedDim::single(0));
        assert_eq!(global_sections(&sheaf(&[("[0,1)", 0)])), GradedDim::zero());
        assert_eq!(global_sections(&sheaf(&[("(0,1)", 0)])), GradedDim::single(1));
        assert_eq!(global_sections(&sheaf(&[("[0,+inf)", 2)])), GradedDim::single(2));
        assert_eq!(global_sections(&sheaf(&[("(0,+inf)", 0)])), GradedDim::zero());
        assert_eq!(global_sections(&sheaf(&[("(-inf,+inf)", 0)])), GradedDim::single(0));
    }

    #[test]
    fn windowed_sections_of_bars() {
        let f = IntervalSheaf::bar(qi(2), None);
        assert_eq!(windowed_sections(&f, &fin(1), &fin(3)).unwrap(), GradedDim::single(0));
        assert_eq!(windowed_sections(&f, &fin(3), &fin(5)).unwrap(), GradedDim::zero());
        assert_eq!(windowed_sections(&f, &fin(-1), &fin(1)).unwrap(), GradedDim::zero());
        assert_eq!(windowed_sections(&f, &fin(2), &Ext::PosInf).unwrap(), GradedDim::single(0));
        let closed = sheaf(&[("[0,1]", 0)]);
        assert_eq!(
            windowed_sections(&closed, &Ext::NegInf, &Ext::PosInf).unwrap(),
            GradedDim::single(0)
        );
        // finite bar inside the window and a bar alive at a that dies in the window
        let bar = IntervalSheaf::bar(qi(0), Some(qi(1)));
        assert_eq!(windowed_sections(&bar, &fin(-1), &fin(3)).unwrap(), GradedDim::zero());
        assert_eq!(windowed_sections(&bar, &fin(-1), &q(1, 2).into()).unwrap(), GradedDim::single(0));
        assert_eq!(windowed_sections(&bar, &q(1, 2).into(), &fin(2)).unwrap(), GradedDim::single(1));
        assert!(windowed_sections(&bar, &fin(2), &fin(1)).is_err());
    }

    #[test]
    fn convolution_examples() {
        let p = IntervalSheaf::bar(qi(0), None);
        assert_eq!(convolve(&p, &p).unwrap(), p);
        let ab = IntervalSheaf::bar(q(1, 2), Some(qi(3)));
        assert_eq!(convolve(&p, &ab).unwrap(), ab);
        let u = IntervalSheaf::bar(qi(0), Some(qi(1)));
        assert_eq!(
            convolve(&u, &u).unwrap(),
            sheaf(&[("[0,1)", 0), ("[1,2)", 1)])
        );
        assert!(matches!(
            convolve(&sheaf(&[("[0,1]", 0)]), &p),
            Err(SheafError::NotNormalForm(_))
        ));
    }

    #[test]
    fn hom_star_examples() {
        let p = IntervalSheaf::bar(qi(0), None);
        assert_eq!(hom_star(&p, &p).unwrap(), p);
        let a = IntervalSheaf::bar(qi(2), None);
        let c = IntervalSheaf::bar(qi(5), None);
        assert_eq!(hom_star(&a, &c).unwrap(), IntervalSheaf::bar(qi(3), None));
    }

    #[test]
    fn torsion_and_translation() {
        let u = IntervalSheaf::bar(qi(0), Some(qi(1)));
        assert_eq!(torsion_bound(&u).unwrap(), Some(qi(1)));
        assert_eq!(torsion_bound(&IntervalSheaf::bar(qi(0), None)).unwrap(), None);
        assert_eq!(torsion_bound(&IntervalSheaf::zero()).unwrap(), Some(qi(0)));
        assert_eq!(translate(&u, &qi(2)), IntervalSheaf::bar(qi(2), Some(qi(3))));
    }

    #[test]
    fn tamarkin_hom_examples() {
        let p = IntervalSheaf::bar(qi(0), None);
        assert_eq!(tamarkin_hom(&p, &p, 0).unwrap(), 1);
        assert_eq!(tamarkin_hom(&p, &p, 1).unwrap(), 0);
        assert_eq!(tamarkin_hom(&p, &p, -1).unwrap(), 0);
        let u = IntervalSheaf::bar(qi(0), Some(qi(1)));
        for k in -2..=2 {
            assert_eq!(tamarkin_hom(&u, &p, k).unwrap(), 0);
        }
        let five = IntervalSheaf::bar(qi(5), None);
        assert_eq!(tamarkin_hom(&five, &p, 0).unwrap(), 1);
    }

    #[test]
    fn appendix_models() {
        let (a, b) = (qi(-1), qi(1));
        assert_eq!(
            degenerate_contribution(DegenerateModel::ClosedClosed, &a, &b).unwrap(),
            GradedDim::single(0)
        );
        assert_eq!(
            degenerate_contribution(DegenerateModel::ClosedOpen, &a, &b).unwrap(),
            GradedDim::zero()
        );
        assert_eq!(
            degenerate_contribution(DegenerateModel::ClosedClosed, &a, &a).unwrap(),
            GradedDim::single(0)
        );
        assert!(degenerate_contribution(DegenerateModel::ClosedOpen, &b, &a).is_err());
    }

    #[test]
    fn serde_literals() {
        let f: IntervalSheaf = serde_json::from_str(
            r#"[{"interval": "[0,1)", "degree": 1}, {"interval": "[2,+inf)"}]"#,
        )
        .unwrap();
        assert_eq!(f, sheaf(&[("[0,1)", 1), ("[2,+inf)", 0)]));
        assert_eq!(f.to_string(), "k[0,1)[-1] ⊕ k[2,+inf)");
    }
}
