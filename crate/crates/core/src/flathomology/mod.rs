//! Finite cell complexes over 𝔽₂, sublevel sets of PL functions and
//! persistence barcodes.

pub mod f2;
mod persistence;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use persistence::{
    barcode, barcode_window_count, critical_values, level_components, relative_dim, BarRecord,
    relative_dim_by_rank, sublevel, Bar, Barcode, LevelComponent, PLFunction, Persistence,
};

use f2::BitRow;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("boundary of the boundary of cell {0} is nonzero")]
    BoundaryNotSquareZero(usize),
    #[error("cell {cell} has facet {facet} of dimension {facet_dim}, expected {expected}")]
    FacetDimension {
        cell: usize,
        facet: usize,
        facet_dim: usize,
        expected: usize,
    },
    #[error("cell {cell} refers to facet {facet}, which is not an earlier cell")]
    FacetIndex { cell: usize, facet: usize },
    #[error("vertex cell {0} has facets")]
    VertexWithFacets(usize),
    #[error("{what} needs at least {min} subdivisions, got {got}")]
    TooCoarse {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("function has {got} vertex values, complex has {expected} vertices")]
    ValueCount { expected: usize, got: usize },
    #[error("window [{a}, {b}) is empty or reversed")]
    BadWindow { a: String, b: String },
    #[error("cells kept by a subcomplex must include their facets")]
    NotClosed,
}

pub type Result<T> = std::result::Result<T, HomologyError>;

/// A cell and the list of its facets (indices of earlier cells).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub dim: usize,
    #[serde(default)]
    pub facets: Vec<usize>,
}

/// A finite regular cell complex. Cells are listed so that facets precede
/// the cells they bound; the 𝔽₂ boundary of a cell is the sum of its facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    cells: Vec<Cell>,
    vertex_ordinal: Vec<Option<usize>>,
    vertex_cells: Vec<usize>,
    cell_vertices: Vec<Vec<usize>>,
    coords: Option<Vec<Vec<i64>>>,
}

impl CellComplex {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        Self::with_coords(cells, None)
    }

    /// Like [`CellComplex::new`] with integer coordinates attached to vertices.
    pub fn with_coords(cells: Vec<Cell>, coords: Option<Vec<Vec<i64>>>) -> Result<Self> {
        let mut vertex_ordinal = vec![None; cells.len()];
        let mut vertex_cells = Vec::new();
        let mut cell_vertices: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if c.dim == 0 {
                if !c.facets.is_empty() {
                    return Err(HomologyError::VertexWithFacets(i));
                }
                vertex_ordinal[i] = Some(vertex_cells.len());
                cell_vertices.push(vec![vertex_cells.len()]);
                vertex_cells.push(i);
                continue;
            }
            let mut verts = BTreeSet::new();
            for &f in &c.facets {
                if f >= i {
                    return Err(HomologyError::FacetIndex { cell: i, facet: f });
                }
                if cells[f].dim + 1 != c.dim {
                    return Err(HomologyError::FacetDimension {
                        cell: i,
                        facet: f,
                        facet_dim: cells[f].dim,
                        expected: c.dim - 1,
                    });
                }
                verts.extend(cell_vertices[f].iter().copied());
            }
            cell_vertices.push(verts.into_iter().collect());
        }
        if let Some(cs) = &coords {
            if cs.len() != vertex_cells.len() {
                return Err(HomologyError::ValueCount {
                    expected: vertex_cells.len(),
                    got: cs.len(),
                });
            }
        }
        let cx = CellComplex {
            cells,
            vertex_ordinal,
            vertex_cells,
            cell_vertices,
            coords,
        };
        for i in 0..cx.cells.len() {
            let mut parity = BTreeSet::new();
            for f in cx.boundary(i) {
                for g in cx.boundary(f) {
                    if !parity.insert(g) {
                        parity.remove(&g);
                    }
                }
            }
            if !parity.is_empty() {
                return Err(HomologyError::BoundaryNotSquareZero(i));
            }
        }
        Ok(cx)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dim_of(&self, cell: usize) -> usize {
        self.cells[cell].dim
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_cells.len()
    }

    /// Cell index of the vertex with the given ordinal.
    pub fn vertex_cell(&self, ordinal: usize) -> usize {
        self.vertex_cells[ordinal]
    }

    pub fn vertex_ordinal(&self, cell: usize) -> Option<usize> {
        self.vertex_ordinal[cell]
    }

    /// Ordinals of the vertices in the closure of a cell.
    pub fn vertices_of(&self, cell: usize) -> &[usize] {
        &self.cell_vertices[cell]
    }

    pub fn coords(&self) -> Option<&[Vec<i64>]> {
        self.coords.as_deref()
    }

    /// The 𝔽₂ boundary: facets occurring an odd number of times.
    pub fn boundary(&self, cell: usize) -> Vec<usize> {
        let mut odd = BTreeSet::new();
        for &f in &self.cells[cell].facets {
            if !odd.insert(f) {
                odd.remove(&f);
            }
        }
        odd.into_iter().collect()
    }

    pub fn count_in_dim(&self, k: usize) -> usize {
        self.cells.iter().filter(|c| c.dim == k).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Rank of `∂_k : C_k → C_{k−1}` restricted to the cells selected by `keep`,
    /// with boundary terms outside `keep` dropped (i.e. in the quotient by the
    /// complement).
    pub(crate) fn boundary_rank(&self, k: usize, keep: &dyn Fn(usize) -> bool) -> usize {
        if k == 0 {
            return 0;
        }
        let mut index = vec![usize::MAX; self.cells.len()];
        let mut width = 0;
        for (i, c) in self.cells.iter().enumerate() {
            if c.dim == k - 1 && keep(i) {
                index[i] = width;
                width += 1;
            }
        }
        let rows = self
            .cells
            .iter()
            .enumerate()
            .filter(|(i, c)| c.dim == k && keep(*i))
            .map(|(i, _)| {
                let mut r = BitRow::zeros(width);
                for f in self.boundary(i) {
                    if index[f] != usize::MAX {
                        r.flip(index[f]);
                    }
                }
                r
            });
        f2::rank(rows, width)
    }

    /// `dim H_k(A, B; 𝔽₂)` for subcomplexes `B ⊆ A` given by membership tests.
    pub fn pair_homology_dim(
        &self,
        k: usize,
        in_a: &dyn Fn(usize) -> bool,
        in_b: &dyn Fn(usize) -> bool,
    ) -> usize {
        let rel = |i: usize| in_a(i) && !in_b(i);
        let cells = (0..self.cells.len())
            .filter(|&i| self.cells[i].dim == k && rel(i))
            .count();
        cells - self.boundary_rank(k, &rel) - self.boundary_rank(k + 1, &rel)
    }

    pub fn betti(&self, k: usize) -> usize {
        self.pair_homology_dim(k, &|_| true, &|_| false)
    }

    /// Betti numbers in degrees `0..=dim`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        match self.dimension() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.betti(k)).collect(),
        }
    }

    /// The subcomplex on the cells selected by `keep`, which must be closed
    /// under taking facets. Returns it with the map from new to old cell indices.
    pub fn subcomplex(&self, keep: &dyn Fn(usize) -> bool) -> Result<(CellComplex, Vec<usize>)> {
        let mut new_index = vec![usize::MAX; self.cells.len()];
        let mut old = Vec::new();
        let mut cells = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            if !keep(i) {
                continue;
            }
            let mut facets = Vec::with_capacity(c.facets.len());
            for &f in &c.facets {
                if new_index[f] == usize::MAX {
                    return Err(HomologyError::NotClosed);
                }
                facets.push(new_index[f]);
            }
            new_index[i] = cells.len();
            old.push(i);
            cells.push(Cell { dim: c.dim, facets });
        }
        let coords = self.coords.as_ref().map(|cs| {
            old.iter()
                .filter_map(|&i| self.vertex_ordinal[i].map(|v| cs[v].clone()))
                .collect()
        });
        Ok((CellComplex::with_coords(cells, coords)?, old))
    }

    /// A single vertex.
    pub fn point() -> Self {
        CellComplex::with_coords(vec![Cell { dim: 0, facets: vec![] }], Some(vec![vec![]]))
            .expect("point")
    }

    /// The circle with `n` vertices and `n` edges; vertex `i` has coordinate `i`.
    pub fn circle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(HomologyError::TooCoarse {
                what: "circle",
                min: 3,
                got: n,
            });
        }
        let mut cells: Vec<Cell> = (0..n).map(|_| Cell { dim: 0, facets: vec![] }).collect();
        for i in 0..n {
            cells.push(Cell {
                dim: 1,
                facets: vec![i, (i + 1) % n],
            });
        }
        let coords = (0..n as i64).map(|i| vec![i]).collect();
        CellComplex::with_coords(cells, Some(coords))
    }

    /// Cartesian product with cells `(σ, τ)` ordered `σ`-major; vertex
    /// `(u, v)` gets ordinal `u · |V(other)| + v`.
    pub fn product(&self, other: &CellComplex) -> Self {
        let nb = other.cells.len();
        let idx = |a: usize, b: usize| a * nb + b;
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(self.cells.len() * nb);
        for a in 0..self.cells.len() {
            for b in 0..nb {
                pairs.push((a, b));
            }
        }
        // Facets may come later in σ-major order; order cells by total dimension.
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.sort_by_key(|&p| {
            let (a, b) = pairs[p];
            (self.cells[a].dim + other.cells[b].dim, p)
        });
        let mut position = vec![0; pairs.len()];
        for (new, &p) in order.iter().enumerate() {
            position[p] = new;
        }
        let cells = order
            .iter()
            .map(|&p| {
                let (a, b) = pairs[p];
                let mut facets: Vec<usize> = self.cells[a]
                    .facets
                    .iter()
                    .map(|&f| position[idx(f, b)])
                    .collect();
                facets.extend(other.cells[b].facets.iter().map(|&g| position[idx(a, g)]));
                Cell {
                    dim: self.cells[a].dim + other.cells[b].dim,
                    facets,
                }
            })
            .collect();
        let coords = match (&self.coords, &other.coords) {
            (Some(ca), Some(cb)) => Some(
                ca.iter()
                    .flat_map(|x| {
                        cb.iter().map(move |y| {
                            let mut z = x.clone();
                            z.extend_from_slice(y);
                            z
                        })
                    })
                    .collect(),
            ),
            _ => None,
        };
        CellComplex::with_coords(cells, coords).expect("product of valid complexes")
    }

    pub fn torus(n1: usize, n2: usize) -> Result<Self> {
        Ok(Self::circle(n1)?.product(&Self::circle(n2)?))
    }

    pub fn disjoint_union(&self, other: &CellComplex) -> Self {
        let off = self.cells.len();
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().map(|c| Cell {
            dim: c.dim,
            facets: c.facets.iter().map(|f| f + off).collect(),
        }));
        let coords = match (&self.coords, &other.coords) {
            (Some(a), Some(b)) if a.first().map(Vec::len) == b.first().map(Vec::len) => {
                Some(a.iter().chain(b).cloned().collect())
            }
            _ => None,
        };
        CellComplex::with_coords(cells, coords).expect("disjoint union of valid complexes")
    }

    /// The boundary of the cube `[0, s]³` with its unit-cube structure.
    pub fn sphere2(s: usize) -> Result<Self> {
        if s < 1 {
            return Err(HomologyError::TooCoarse {
                what: "sphere2",
                min: 1,
                got: s,
            });
        }
        let s = s as i64;
        // a cell is an anchor point p and a set of axes S (bit mask);
        // it spans p + [0,1]^S and lies on the surface iff some axis outside
        // S has p_c ∈ {0, s}.
        let on_surface = |p: [i64; 3], mask: u8| {
            (0..3).any(|c| mask & (1 << c) == 0 && (p[c] == 0 || p[c] == s))
        };
        let mut keys: Vec<([i64; 3], u8)> = Vec::new();
        for dim in 0..=2u32 {
            for mask in 0u8..8 {
                if mask.count_ones() != dim {
                    continue;
                }
                for x in 0..=s {
                    for y in 0..=s {
                        for z in 0..=s {
                            let p = [x, y, z];
                            let fits = (0..3).all(|c| mask & (1 << c) == 0 || p[c] < s);
                            if fits && on_surface(p, mask) {
                                keys.push((p, mask));
                            }
                        }
                    }
                }
            }
        }
        let lookup: std::collections::HashMap<([i64; 3], u8), usize> =
            keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut coords = Vec::new();
        let cells = keys
            .iter()
            .map(|&(p, mask)| {
                if mask == 0 {
                    coords.push(p.to_vec());
                }
                let mut facets = Vec::new();
                for a in 0..3 {
                    if mask & (1 << a) != 0 {
                        let m = mask & !(1 << a);
                        let mut q = p;
                        facets.push(lookup[&(p, m)]);
                        q[a] += 1;
                        facets.push(lookup[&(q, m)]);
                    }
                }
                Cell {
                    dim: mask.count_ones() as usize,
                    facets,
                }
            })
            .collect();
        CellComplex::with_coords(cells, Some(coords))
    }
}

/// Declarative description of a built-in complex, as used in scenario files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplexSpec {
    Point,
    Circle { n: usize },
    Torus { n1: usize, n2: usize },
    Sphere2 { subdiv: usize },
    Product { factors: Vec<ComplexSpec> },
    DisjointUnion { parts: Vec<ComplexSpec> },
    Explicit { cells: Vec<Cell> },
}

impl ComplexSpec {
    pub fn build(&self) -> Result<CellComplex> {
        match self {
            ComplexSpec::Point => Ok(CellComplex::point()),
            ComplexSpec::Circle { n } => CellComplex::circle(*n),
            ComplexSpec::Torus { n1, n2 } => CellComplex::torus(*n1, *n2),
            ComplexSpec::Sphere2 { subdiv } => CellComplex::sphere2(*subdiv),
            ComplexSpec::Product { factors } => {
                let mut acc = CellComplex::point();
                for f in factors {
                    acc = acc.product(&f.build()?);
                }
                Ok(acc)
            }
            ComplexSpec::DisjointUnion { parts } => {
                let mut it = parts.iter();
                let Some(first) = it.next() else {
                    return CellComplex::new(Vec::new());
                };
                let mut acc = first.build()?;
                for p in it {
                    acc = acc.disjoint_union(&p.build()?);
                }
                Ok(acc)
            }
            ComplexSpec::Explicit { cells } => CellComplex::new(cells.clone()),
        }
    }

    /// Periods of the vertex coordinates when the complex is a product of circles.
    pub fn circle_periods(&self) -> Option<Vec<usize>> {
        match self {
            ComplexSpec::Circle { n } => Some(vec![*n]),
            ComplexSpec::Torus { n1, n2 } => Some(vec![*n1, *n2]),
            ComplexSpec::Point => Some(Vec::new()),
            ComplexSpec::Product { factors } => {
                let mut out = Vec::new();
                for f in factors {
                    out.extend(f.circle_periods()?);
                }
                Some(out)
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_have_expected_homology() {
        assert_eq!(CellComplex::point().betti_numbers(), vec![1]);
        let c3 = CellComplex::circle(3).unwrap();
        assert_eq!((c3.count_in_dim(0), c3.count_in_dim(1)), (3, 3));
        assert_eq!(CellComplex::circle(8).unwrap().betti_numbers(), vec![1, 1]);
        let t = CellComplex::torus(8, 8).unwrap();
        assert_eq!(t.betti_numbers(), vec![1, 2, 1]);
        assert_eq!(t.euler_characteristic(), 0);
        for s in 1..=3 {
            let sph = CellComplex::sphere2(s).unwrap();
            assert_eq!(sph.euler_characteristic(), 2);
            assert_eq!(sph.betti_numbers(), vec![1, 0, 1]);
        }
        let two = CellComplex::circle(4)
            .unwrap()
            .disjoint_union(&CellComplex::point());
        assert_eq!(two.betti_numbers(), vec![2, 1]);
        assert!(matches!(
            CellComplex::circle(2),
            Err(HomologyError::TooCoarse { .. })
        ));
    }

    #[test]
    fn product_vertex_ordinals() {
        let t = CellComplex::torus(3, 4).unwrap();
        let coords = t.coords().unwrap();
        assert_eq!(coords.len(), 12);
        assert_eq!(coords[4 + 2], vec![1, 2]);
    }

    #[test]
    fn invalid_complexes_are_rejected() {
        let v = || Cell { dim: 0, facets: vec![] };
        let bad_dim = vec![v(), v(), Cell { dim: 2, facets: vec![0, 1] }];
        assert!(matches!(
            CellComplex::new(bad_dim),
            Err(HomologyError::FacetDimension { .. })
        ));
        // a "disk" whose boundary is a single open edge: ∂∂ ≠ 0
        let open = vec![v(), v(), Cell { dim: 1, facets: vec![0, 1] }, Cell { dim: 2, facets: vec![2] }];
        assert_eq!(
            CellComplex::new(open),
            Err(HomologyError::BoundaryNotSquareZero(3))
        );
        let forward = vec![Cell { dim: 1, facets: vec![1, 2] }, v(), v()];
        assert!(matches!(
            CellComplex::new(forward),
            Err(HomologyError::FacetIndex { .. })
        ));
    }

    #[test]
    fn spec_round_trip() {
        let spec: ComplexSpec = toml::from_str("kind = \"torus\"\nn1 = 4\nn2 = 5\n").unwrap();
        assert_eq!(spec.circle_periods(), Some(vec![4, 5]));
        assert_eq!(spec.build().unwrap().num_vertices(), 20);
    }
}
