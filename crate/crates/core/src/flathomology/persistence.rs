use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CellComplex, HomologyError, Result};
use crate::rational::{format_q, Ext, Q};

/// A function on the vertices of a complex, extended to cells by the maximum
/// over their vertices (lower-star convention).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    values: Vec<Q>,
}

impl PLFunction {
    pub fn new(complex: &CellComplex, values: Vec<Q>) -> Result<Self> {
        if values.len() != complex.num_vertices() {
            return Err(HomologyError::ValueCount {
                expected: complex.num_vertices(),
                got: values.len(),
            });
        }
        Ok(PLFunction { values })
    }

    pub fn constant(complex: &CellComplex, c: Q) -> Self {
        PLFunction {
            values: vec![c; complex.num_vertices()],
        }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn cell_value<'a>(&'a self, complex: &CellComplex, cell: usize) -> &'a Q {
        complex
            .vertices_of(cell)
            .iter()
            .map(|&v| &self.values[v])
            .max()
            .expect("every cell has a vertex")
    }

    pub fn cell_values(&self, complex: &CellComplex) -> Vec<Q> {
        (0..complex.len())
            .map(|i| self.cell_value(complex, i).clone())
            .collect()
    }

    pub fn min(&self) -> Option<&Q> {
        self.values.iter().min()
    }

    pub fn max(&self) -> Option<&Q> {
        self.values.iter().max()
    }

    pub fn sub(&self, other: &PLFunction) -> PLFunction {
        PLFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Sorted distinct vertex values.
    pub fn distinct_values(&self) -> Vec<Q> {
        let mut v = self.values.clone();
        v.sort();
        v.dedup();
        v
    }
}

/// `[birth, death)` with `death` finite or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub birth: Q,
    pub death: Ext,
}

impl Bar {
    pub fn is_infinite(&self) -> bool {
        self.death == Ext::PosInf
    }

    /// Whether the class is present in the strict sublevel set `{φ < c}`.
    pub fn alive_at(&self, c: &Ext) -> bool {
        Ext::Finite(self.birth.clone()) < *c && *c <= self.death
    }
}

impl std::fmt::Display for Bar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {})", format_q(&self.birth), self.death)
    }
}

/// Bars of the lower-star filtration, per degree, each list sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Barcode {
    bars: BTreeMap<usize, Vec<Bar>>,
}

impl Barcode {
    pub fn degree(&self, k: usize) -> &[Bar] {
        self.bars.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degrees(&self) -> impl Iterator<Item = (usize, &[Bar])> {
        self.bars.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.bars.values().all(Vec::is_empty)
    }

    pub fn to_records(&self) -> Vec<BarRecord> {
        self.degrees()
            .flat_map(|(k, bars)| {
                bars.iter().map(move |b| BarRecord {
                    degree: k,
                    birth: Ext::Finite(b.birth.clone()),
                    death: b.death.clone(),
                })
            })
            .collect()
    }
}

/// Flat serializable form of one bar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarRecord {
    pub degree: usize,
    pub birth: Ext,
    pub death: Ext,
}

/// Persistence data of a function on a complex, for repeated window queries.
#[derive(Debug, Clone)]
pub struct Persistence {
    barcode: Barcode,
    cell_values: Vec<Q>,
}

impl Persistence {
    pub fn compute(complex: &CellComplex, f: &PLFunction) -> Self {
        let cell_values = f.cell_values(complex);
        let mut order: Vec<usize> = (0..complex.len()).collect();
        order.sort_by(|&i, &j| {
            (&cell_values[i], complex.dim_of(i), i).cmp(&(&cell_values[j], complex.dim_of(j), j))
        });
        let mut position = vec![0; complex.len()];
        for (p, &c) in order.iter().enumerate() {
            position[c] = p;
        }
        // Column reduction over 𝔽₂; columns are sorted position lists and the
        // pivot is the largest entry.
        let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
        let mut owner_of_low: Vec<Option<usize>> = vec![None; order.len()];
        let mut paired = vec![false; order.len()];
        let mut bars: BTreeMap<usize, Vec<Bar>> = BTreeMap::new();
        for (j, &cell) in order.iter().enumerate() {
            let mut col: Vec<usize> = complex.boundary(cell).iter().map(|&f| position[f]).collect();
            col.sort_unstable();
            while let Some(&low) = col.last() {
                match owner_of_low[low] {
                    Some(o) => col = xor_sorted(&col, &reduced[o]),
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                owner_of_low[low] = Some(j);
                paired[low] = true;
                paired[j] = true;
                let birth = &cell_values[order[low]];
                let death = &cell_values[cell];
                if birth < death {
                    bars.entry(complex.dim_of(order[low])).or_default().push(Bar {
                        birth: birth.clone(),
                        death: Ext::Finite(death.clone()),
                    });
                }
            }
            reduced[j] = col;
        }
        for (p, &cell) in order.iter().enumerate() {
            if !paired[p] && reduced[p].is_empty() {
                bars.entry(complex.dim_of(cell)).or_default().push(Bar {
                    birth: cell_values[cell].clone(),
                    death: Ext::PosInf,
                });
            }
        }
        for v in bars.values_mut() {
            v.sort();
        }
        Persistence {
            barcode: Barcode { bars },
            cell_values,
        }
    }

    pub fn barcode(&self) -> &Barcode {
        &self.barcode
    }

    pub fn cell_values(&self) -> &[Q] {
        &self.cell_values
    }

    pub fn window(&self, a: &Ext, b: &Ext, k: usize) -> Result<usize> {
        check_window(a, b)?;
        Ok(barcode_window_count(&self.barcode, a, b, k))
    }

    /// Sorted distinct values at which a bar starts or ends.
    pub fn critical_values(&self) -> Vec<Q> {
        let mut out: Vec<Q> = self
            .barcode
            .bars
            .values()
            .flatten()
            .flat_map(|b| {
                let mut v = vec![b.birth.clone()];
                if let Ext::Finite(d) = &b.death {
                    v.push(d.clone());
                }
                v
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn check_window(a: &Ext, b: &Ext) -> Result<()> {
    if a >= b || *a == Ext::PosInf || *b == Ext::NegInf {
        return Err(HomologyError::BadWindow {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    Ok(())
}

pub fn barcode(complex: &CellComplex, f: &PLFunction) -> Barcode {
    Persistence::compute(complex, f).barcode
}

/// `dim H_k({φ<b}, {φ<a})` read off a barcode: degree-`k` bars born in
/// `[a, b)` and alive at `b`, plus degree-`(k−1)` bars alive at `a` that die
/// before `b`.
pub fn barcode_window_count(bc: &Barcode, a: &Ext, b: &Ext, k: usize) -> usize {
    let born_inside = bc
        .degree(k)
        .iter()
        .filter(|bar| {
            let birth = Ext::Finite(bar.birth.clone());
            *a <= birth && bar.alive_at(b)
        })
        .count();
    let killed_inside = if k == 0 {
        0
    } else {
        bc.degree(k - 1)
            .iter()
            .filter(|bar| bar.alive_at(a) && bar.death < *b)
            .count()
    };
    born_inside + killed_inside
}

/// `dim H_k({φ<b}, {φ<a}; 𝔽₂)`, via the barcode.
pub fn relative_dim(complex: &CellComplex, f: &PLFunction, a: &Ext, b: &Ext, k: usize) -> Result<usize> {
    Persistence::compute(complex, f).window(a, b, k)
}

/// Same as [`relative_dim`], by rank computations on the pair.
pub fn relative_dim_by_rank(
    complex: &CellComplex,
    f: &PLFunction,
    a: &Ext,
    b: &Ext,
    k: usize,
) -> Result<usize> {
    check_window(a, b)?;
    let values = f.cell_values(complex);
    let below = |c: &Ext, i: usize| Ext::Finite(values[i].clone()) < *c;
    Ok(complex.pair_homology_dim(k, &|i| below(b, i), &|i| below(a, i)))
}

/// The full subcomplex `{φ < c}` and its cell map into `complex`.
pub fn sublevel(complex: &CellComplex, f: &PLFunction, c: &Q) -> (CellComplex, Vec<usize>) {
    let values = f.cell_values(complex);
    complex
        .subcomplex(&|i| values[i] < *c)
        .expect("sublevel sets are subcomplexes")
}

pub fn critical_values(complex: &CellComplex, f: &PLFunction) -> Vec<Q> {
    Persistence::compute(complex, f).critical_values()
}

/// A connected piece of the level set `{φ = c}` together with its local
/// contribution `H_*(X_{<c} ∪ St_c(C), X_{<c})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelComponent {
    pub level: Q,
    pub vertices: Vec<usize>,
    /// Betti numbers of the full subcomplex on `vertices`.
    pub betti: Vec<usize>,
    /// Local relative homology dimensions, degrees `0..=dim M`.
    pub local: Vec<usize>,
}

impl LevelComponent {
    pub fn is_critical(&self) -> bool {
        self.local.iter().any(|&d| d > 0)
    }

    /// The shift `s` with `local_k = b_{k−s}(C)` for all `k`, if any.
    pub fn morse_bott_degree(&self) -> Option<usize> {
        let s = self.local.iter().position(|&d| d > 0)?;
        let shifted_ok = (0..self.local.len()).all(|k| {
            let expected = k
                .checked_sub(s)
                .and_then(|j| self.betti.get(j).copied())
                .unwrap_or(0);
            self.local[k] == expected
        });
        let fits = self.betti.iter().enumerate().all(|(j, &b)| b == 0 || j + s < self.local.len());
        (shifted_ok && fits).then_some(s)
    }
}

/// Components of `{φ = c}`: level vertices are joined when they share a cell of value `c`.
pub fn level_components(complex: &CellComplex, f: &PLFunction, c: &Q) -> Vec<LevelComponent> {
    let values = f.cell_values(complex);
    let nv = complex.num_vertices();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let on_level = |v: usize| f.values()[v] == *c;
    for i in 0..complex.len() {
        if values[i] != *c {
            continue;
        }
        let lv: Vec<usize> = complex.vertices_of(i).iter().copied().filter(|&v| on_level(v)).collect();
        for w in lv.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in (0..nv).filter(|&v| on_level(v)) {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let top = complex.dimension().unwrap_or(0);
    let mut root_of = vec![usize::MAX; nv];
    for (r, vs) in &groups {
        for &v in vs {
            root_of[v] = *r;
        }
    }
    groups
        .into_iter()
        .map(|(root, vertices)| {
            let touches = |i: usize| {
                complex
                    .vertices_of(i)
                    .iter()
                    .any(|&v| root_of[v] == root)
            };
            let in_b = |i: usize| values[i] < *c;
            let in_a = |i: usize| in_b(i) || (values[i] == *c && touches(i));
            let local = (0..=top)
                .map(|k| complex.pair_homology_dim(k, &in_a, &in_b))
                .collect();
            let inside = |i: usize| complex.vertices_of(i).iter().all(|&v| root_of[v] == root);
            let (sub, _) = complex
                .subcomplex(&inside)
                .expect("full subcomplexes are closed");
            let mut betti = sub.betti_numbers();
            while betti.len() > 1 && betti.last() == Some(&0) {
                betti.pop();
            }
            LevelComponent {
                level: c.clone(),
                vertices,
                betti,
                local,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn pl_cos(n: usize) -> Vec<Q> {
        (0..n)
            .map(|k| {
                let d = k.min(n - k) as i64;
                qi(1) - q(4 * d, n as i64)
            })
            .collect()
    }

    #[test]
    fn constant_function_bars_match_betti() {
        let t = CellComplex::torus(4, 4).unwrap();
        let f = PLFunction::constant(&t, q(1, 2));
        let bc = barcode(&t, &f);
        for k in 0..3 {
            assert!(bc.degree(k).iter().all(|b| b.birth == q(1, 2) && b.is_infinite()));
            assert_eq!(bc.degree(k).len(), t.betti(k));
        }
        assert_eq!(critical_values(&t, &f), vec![q(1, 2)]);
    }

    #[test]
    fn circle_cosine() {
        let c = CellComplex::circle(64).unwrap();
        let f = PLFunction::new(&c, pl_cos(64)).unwrap();
        let bc = barcode(&c, &f);
        assert_eq!(bc.degree(0), &[Bar { birth: qi(-1), death: Ext::PosInf }]);
        assert_eq!(bc.degree(1), &[Bar { birth: qi(1), death: Ext::PosInf }]);
        assert_eq!(critical_values(&c, &f), vec![qi(-1), qi(1)]);
        let (sub, _) = sublevel(&c, &f, &qi(0));
        assert_eq!(sub.betti_numbers(), vec![1, 0]);
        let zero = Ext::Finite(qi(0));
        assert_eq!(relative_dim(&c, &f, &zero, &Ext::PosInf, 1).unwrap(), 1);
        assert_eq!(relative_dim(&c, &f, &zero, &Ext::PosInf, 0).unwrap(), 0);
        assert_eq!(relative_dim_by_rank(&c, &f, &zero, &Ext::PosInf, 1).unwrap(), 1);
        assert!(relative_dim(&c, &f, &Ext::PosInf, &zero, 0).is_err());
    }

    #[test]
    fn point_windows() {
        let p = CellComplex::point();
        let f = PLFunction::new(&p, vec![qi(2)]).unwrap();
        let w = |a: i64, b: i64| relative_dim(&p, &f, &Ext::Finite(qi(a)), &Ext::Finite(qi(b)), 0).unwrap();
        assert_eq!(w(1, 3), 1);
        assert_eq!(w(3, 5), 0);
        assert_eq!(w(-1, 1), 0);
    }

    #[test]
    fn finite_bars_appear() {
        // two minima on a circle of 6 vertices
        let c = CellComplex::circle(6).unwrap();
        let vals = [0, 2, 1, 3, 4, 2].iter().map(|&v| qi(v)).collect();
        let f = PLFunction::new(&c, vals).unwrap();
        let bc = barcode(&c, &f);
        assert_eq!(
            bc.degree(0),
            &[
                Bar { birth: qi(0), death: Ext::PosInf },
                Bar { birth: qi(1), death: Ext::Finite(qi(2)) }
            ]
        );
        assert_eq!(bc.degree(1), &[Bar { birth: qi(4), death: Ext::PosInf }]);
        // window straddling the death of the second minimum
        let a = Ext::Finite(q(3, 2));
        let b = Ext::Finite(q(5, 2));
        assert_eq!(relative_dim(&c, &f, &a, &b, 1).unwrap(), 1);
        assert_eq!(relative_dim_by_rank(&c, &f, &a, &b, 1).unwrap(), 1);
    }

    #[test]
    fn level_components_of_torus_function() {
        let t = CellComplex::torus(8, 8).unwrap();
        let vals: Vec<Q> = t.coords().unwrap().iter().map(|p| pl_cos(8)[p[0] as usize].clone()).collect();
        let f = PLFunction::new(&t, vals).unwrap();
        let top = level_components(&t, &f, &qi(1));
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].betti, vec![1, 1]);
        assert_eq!(top[0].local, vec![0, 1, 1]);
        assert_eq!(top[0].morse_bott_degree(), Some(1));
        let bottom = level_components(&t, &f, &qi(-1));
        assert_eq!(bottom[0].morse_bott_degree(), Some(0));
        let regular = level_components(&t, &f, &qi(0));
        assert!(regular.iter().all(|c| !c.is_critical()));
    }
}
