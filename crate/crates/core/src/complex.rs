//! Simplicial complexes: downward-closed simplex lists with fixed indexing,
//! plus the permutation/reorientation variants the equivariance suites use.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Result, ScError};
use crate::incidence::{boundary_condition_holds, IncidenceMatrix};
use crate::signal::SimplicialSignal;
use crate::simplex::Simplex;

/// One dimension level of a complex: its simplices in a fixed order, the
/// reverse lookup used to resolve faces, and a ±1 orientation flag per simplex.
///
/// Canonical constructors sort each level lexicographically and set every sign
/// to +1; `permute`/`reorient` produce the only non-canonical variants.
#[derive(Clone, Debug)]
struct Level {
    simplices: Vec<Simplex>,
    signs: Vec<i8>,
    index: HashMap<Simplex, usize>,
}

impl Level {
    fn new(simplices: Vec<Simplex>, signs: Vec<i8>) -> Self {
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            simplices,
            signs,
            index,
        }
    }

    fn canonical(simplices: Vec<Simplex>) -> Self {
        let signs = vec![1; simplices.len()];
        Self::new(simplices, signs)
    }
}

/// A simplicial complex of order `K`: levels of simplices, each level in a
/// fixed order that defines every matrix index used downstream.
///
/// The boundary operators are assembled once at construction; the structure is
/// immutable afterwards and safe to share across threads.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    order: usize,
    levels: Vec<Level>,
    /// `incidences[k - 1]` holds `B_k`, for `k` in `1..=order`.
    incidences: Vec<IncidenceMatrix>,
}

impl SimplicialComplex {
    /// Builds the downward closure of an explicit simplex list, declared to
    /// have order `order`.
    ///
    /// Input sets may be unsorted; each must hold between 1 and `order + 1`
    /// distinct vertices. The result deduplicates, closes under faces, and
    /// sorts every level lexicographically. Degenerate inputs are rejected:
    /// an empty list, a missing top-level simplex, or (for `order >= 1`) a
    /// vertex contained in no edge.
    pub fn build(simplices: &[Vec<usize>], order: usize) -> Result<Self> {
        if simplices.is_empty() {
            return Err(ScError::EmptyInput);
        }
        let mut by_level: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); order + 1];
        let mut frontier = Vec::new();
        for raw in simplices {
            let s = Simplex::new(raw.clone())?;
            if s.dim() > order {
                return Err(ScError::OrderExceeded {
                    simplex: s.vertices().to_vec(),
                    dim: s.dim(),
                    order,
                });
            }
            if by_level[s.dim()].insert(s.clone()) {
                frontier.push(s);
            }
        }
        // Downward closure: faces of anything stored are stored too.
        while let Some(s) = frontier.pop() {
            for (face, _) in s.faces() {
                if by_level[face.dim()].insert(face.clone()) {
                    frontier.push(face);
                }
            }
        }
        let levels: Vec<Level> = by_level
            .into_iter()
            .map(|set| Level::canonical(set.into_iter().collect()))
            .collect();
        Self::from_levels(order, levels)
    }

    /// Builds the clique complex of a simple undirected graph: every
    /// `(j + 1)`-clique with `j <= order` becomes a `j`-simplex.
    pub fn clique_complex(edges: &[(usize, usize)], order: usize) -> Result<Self> {
        if order < 1 {
            return Err(ScError::InvalidOrder { got: order, min: 1 });
        }
        if edges.is_empty() {
            return Err(ScError::EmptyInput);
        }
        let mut adjacency: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        for &(u, v) in edges {
            if u == v {
                return Err(ScError::SelfLoop(u));
            }
            adjacency.entry(u).or_default().insert(v);
            adjacency.entry(v).or_default().insert(u);
        }
        let vertices: BTreeSet<usize> = adjacency.keys().copied().collect();
        let mut levels: Vec<Vec<Simplex>> = Vec::with_capacity(order + 1);
        levels.push(
            vertices
                .iter()
                .map(|&v| Simplex::new(vec![v]).expect("vertex simplex"))
                .collect(),
        );
        let edge_set: BTreeSet<Simplex> = edges
            .iter()
            .map(|&(u, v)| Simplex::new(vec![u, v]))
            .collect::<Result<_>>()?;
        levels.push(edge_set.into_iter().collect());
        // Extend j-cliques by common neighbors above their last vertex.
        for j in 2..=order {
            let mut next = Vec::new();
            for clique in &levels[j - 1] {
                let vs = clique.vertices();
                let last = *vs.last().expect("nonempty clique");
                let mut candidates: Option<BTreeSet<usize>> = None;
                for &v in vs {
                    let neighbors = &adjacency[&v];
                    candidates = Some(match candidates {
                        None => neighbors.clone(),
                        Some(c) => c.intersection(neighbors).copied().collect(),
                    });
                }
                for &w in candidates.as_ref().expect("candidate set") {
                    if w > last {
                        let mut v = vs.to_vec();
                        v.push(w);
                        next.push(Simplex::new(v).expect("clique simplex"));
                    }
                }
            }
            next.sort_unstable();
            levels.push(next);
        }
        Self::from_levels(order, levels.into_iter().map(Level::canonical).collect())
    }

    /// Shared validation + incidence assembly for all construction paths.
    fn from_levels(order: usize, levels: Vec<Level>) -> Result<Self> {
        if levels[order].simplices.is_empty() {
            return Err(ScError::NoTopSimplex { order });
        }
        if order >= 1 {
            let mut covered = vec![false; levels[0].simplices.len()];
            for edge in &levels[1].simplices {
                for v in edge.vertices() {
                    let vx = Simplex::new(vec![*v]).expect("vertex simplex");
                    if let Some(&i) = levels[0].index.get(&vx) {
                        covered[i] = true;
                    }
                }
            }
            if let Some(i) = covered.iter().position(|&c| !c) {
                return Err(ScError::IsolatedVertex(
                    levels[0].simplices[i].vertices()[0],
                ));
            }
        }
        let mut incidences = Vec::with_capacity(order);
        for k in 1..=order {
            let (below, here) = (&levels[k - 1], &levels[k]);
            let mut cols = Vec::with_capacity(here.simplices.len());
            for (c, s) in here.simplices.iter().enumerate() {
                let mut col = Vec::with_capacity(k + 1);
                for (i, (face, base_sign)) in s.faces().into_iter().enumerate() {
                    let r = *below
                        .index
                        .get(&face)
                        .unwrap_or_else(|| panic!("closure violated: missing face of {s}"));
                    debug_assert_eq!(base_sign, if i % 2 == 0 { 1 } else { -1 });
                    col.push((r, base_sign * here.signs[c] * below.signs[r]));
                }
                cols.push(col);
            }
            incidences.push(IncidenceMatrix::from_cols(
                k,
                below.simplices.len(),
                cols,
            )?);
        }
        Ok(Self {
            order,
            levels,
            incidences,
        })
    }

    /// The declared order `K`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `N_k`, the number of `k`-simplices.
    pub fn len(&self, k: usize) -> usize {
        self.levels.get(k).map_or(0, |l| l.simplices.len())
    }

    pub fn is_empty(&self) -> bool {
        false // a valid complex always has at least one simplex
    }

    /// Simplex counts `N_0..N_K`.
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.simplices.len()).collect()
    }

    /// The level-`k` simplex list, in index order.
    pub fn simplices(&self, k: usize) -> Result<&[Simplex]> {
        self.levels
            .get(k)
            .map(|l| l.simplices.as_slice())
            .ok_or(ScError::LevelOutOfRange {
                op: "simplices",
                k,
                order: self.order,
            })
    }

    /// Index of a simplex within its level, if present.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.levels.get(s.dim()).and_then(|l| l.index.get(s)).copied()
    }

    /// The boundary operator `B_k`, `1 <= k <= K`.
    pub fn incidence(&self, k: usize) -> Result<&IncidenceMatrix> {
        if k == 0 || k > self.order {
            return Err(ScError::LevelOutOfRange {
                op: "incidence",
                k,
                order: self.order,
            });
        }
        Ok(&self.incidences[k - 1])
    }

    /// Checks `B_k B_{k+1} = 0` exactly, for every composable pair.
    /// Vacuously true when `K <= 1`.
    pub fn verify_boundary(&self) -> bool {
        self.incidences
            .windows(2)
            .all(|pair| boundary_condition_holds(&pair[0], &pair[1]))
    }

    /// Reindexes every level by the given permutations.
    ///
    /// `perms[k][i]` names the original index of the simplex placed at
    /// position `i`; the record converts signals between the two indexings.
    /// The resulting complex has boundary operators equal to the originals
    /// with rows and columns permuted accordingly.
    pub fn permute(&self, perms: &[Vec<usize>]) -> Result<(Self, PermutationRecord)> {
        if perms.len() != self.order + 1 {
            return Err(ScError::MalformedPermutation(perms.len().saturating_sub(1)));
        }
        for (k, p) in perms.iter().enumerate() {
            let n = self.len(k);
            let mut seen = vec![false; n];
            if p.len() != n {
                return Err(ScError::MalformedPermutation(k));
            }
            for &old in p {
                if old >= n || seen[old] {
                    return Err(ScError::MalformedPermutation(k));
                }
                seen[old] = true;
            }
        }
        let levels = self
            .levels
            .iter()
            .zip(perms)
            .map(|(level, p)| {
                let simplices = p.iter().map(|&old| level.simplices[old].clone()).collect();
                let signs = p.iter().map(|&old| level.signs[old]).collect();
                Level::new(simplices, signs)
            })
            .collect();
        let permuted = Self::from_levels(self.order, levels)?;
        Ok((
            permuted,
            PermutationRecord {
                maps: perms.to_vec(),
            },
        ))
    }

    /// Flips the orientation of selected simplices.
    ///
    /// `flips[k][i]` is ±1; level 0 must be all ones since vertex signals
    /// carry no orientation. The resulting boundary operators equal the
    /// originals conjugated by the corresponding sign matrices.
    pub fn reorient(&self, flips: &[Vec<i8>]) -> Result<(Self, OrientationRecord)> {
        if flips.len() != self.order + 1 {
            return Err(ScError::DimensionMismatch {
                what: "orientation levels".into(),
                expected: self.order + 1,
                got: flips.len(),
            });
        }
        for (k, d) in flips.iter().enumerate() {
            if d.len() != self.len(k) {
                return Err(ScError::DimensionMismatch {
                    what: format!("orientation vector at level {k}"),
                    expected: self.len(k),
                    got: d.len(),
                });
            }
            if d.iter().any(|&s| s != 1 && s != -1) {
                return Err(ScError::Numerical(format!(
                    "orientation entries at level {k} must be ±1"
                )));
            }
            if k == 0 && d.iter().any(|&s| s != 1) {
                return Err(ScError::VertexOrientationFlip);
            }
        }
        let levels = self
            .levels
            .iter()
            .zip(flips)
            .map(|(level, d)| {
                let signs = level
                    .signs
                    .iter()
                    .zip(d)
                    .map(|(&s, &f)| s * f)
                    .collect();
                Level::new(level.simplices.clone(), signs)
            })
            .collect();
        let reoriented = Self::from_levels(self.order, levels)?;
        Ok((
            reoriented,
            OrientationRecord {
                signs: flips.to_vec(),
            },
        ))
    }
}

/// Per-level index maps recording a permutation, with the signal transforms
/// matching the permuted complex's indexing.
#[derive(Clone, Debug)]
pub struct PermutationRecord {
    maps: Vec<Vec<usize>>,
}

impl PermutationRecord {
    /// Reindexes a signal into the permuted complex's ordering.
    pub fn apply(&self, x: &SimplicialSignal) -> SimplicialSignal {
        let map = &self.maps[x.level()];
        let values = map.iter().map(|&old| x.values()[old]).collect();
        SimplicialSignal::from_vec(x.level(), values)
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }
}

/// Per-level sign vectors recording a reorientation.
#[derive(Clone, Debug)]
pub struct OrientationRecord {
    signs: Vec<Vec<i8>>,
}

impl OrientationRecord {
    /// Flips signal entries to match the reoriented complex.
    pub fn apply(&self, x: &SimplicialSignal) -> SimplicialSignal {
        let d = &self.signs[x.level()];
        let values = x
            .values()
            .iter()
            .zip(d)
            .map(|(v, &s)| v * f64::from(s))
            .collect();
        SimplicialSignal::from_vec(x.level(), values)
    }

    pub fn signs(&self) -> &[Vec<i8>] {
        &self.signs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn filled_triangle() -> SimplicialComplex {
        SimplicialComplex::build(&[vec![1, 2, 3]], 2).unwrap()
    }

    #[test]
    fn two_disjoint_triangles_counts() {
        let sc = SimplicialComplex::build(&[vec![1, 2, 3], vec![4, 5, 6]], 2).unwrap();
        assert_eq!(sc.counts(), vec![6, 6, 2]);
    }

    #[test]
    fn single_vertex_order_zero() {
        let sc = SimplicialComplex::build(&[vec![1]], 0).unwrap();
        assert_eq!(sc.counts(), vec![1]);
        assert!(sc.incidence(1).is_err());
    }

    #[test]
    fn triangle_closure() {
        let sc = filled_triangle();
        assert_eq!(sc.counts(), vec![3, 3, 1]);
        let edges: Vec<_> = sc
            .simplices(1)
            .unwrap()
            .iter()
            .map(|s| s.vertices().to_vec())
            .collect();
        assert_eq!(edges, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn build_rejects_degenerate_inputs() {
        assert!(matches!(
            SimplicialComplex::build(&[], 1),
            Err(ScError::EmptyInput)
        ));
        assert!(matches!(
            SimplicialComplex::build(&[vec![1, 1]], 1),
            Err(ScError::DuplicateVertex(_))
        ));
        assert!(matches!(
            SimplicialComplex::build(&[vec![1, 2, 3]], 1),
            Err(ScError::OrderExceeded { .. })
        ));
        assert!(matches!(
            SimplicialComplex::build(&[vec![1, 2]], 2),
            Err(ScError::NoTopSimplex { order: 2 })
        ));
        assert!(matches!(
            SimplicialComplex::build(&[vec![1, 2], vec![3]], 1),
            Err(ScError::IsolatedVertex(3))
        ));
    }

    #[test]
    fn clique_complex_of_triangle_graph() {
        let sc = SimplicialComplex::clique_complex(&[(1, 2), (1, 3), (2, 3)], 2).unwrap();
        assert_eq!(sc.counts(), vec![3, 3, 1]);
    }

    #[test]
    fn clique_complex_errors() {
        assert!(matches!(
            SimplicialComplex::clique_complex(&[(1, 2), (2, 3)], 2),
            Err(ScError::NoTopSimplex { order: 2 })
        ));
        assert!(matches!(
            SimplicialComplex::clique_complex(&[(1, 1)], 2),
            Err(ScError::SelfLoop(1))
        ));
        assert!(matches!(
            SimplicialComplex::clique_complex(&[(1, 2)], 0),
            Err(ScError::InvalidOrder { .. })
        ));
    }

    #[test]
    fn four_clique_has_all_triangles_no_tetrahedron() {
        // Brute-force oracle: the 2-simplices of the clique complex of K4
        // are exactly the 3-subsets of {1,2,3,4}.
        let edges = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
        let sc = SimplicialComplex::clique_complex(&edges, 2).unwrap();
        assert_eq!(sc.counts(), vec![4, 6, 4]);
        let mut expected = Vec::new();
        for a in 1..=4usize {
            for b in (a + 1)..=4 {
                for c in (b + 1)..=4 {
                    expected.push(vec![a, b, c]);
                }
            }
        }
        let got: Vec<_> = sc
            .simplices(2)
            .unwrap()
            .iter()
            .map(|s| s.vertices().to_vec())
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn incidence_matches_hand_signs() {
        let sc = filled_triangle();
        let b1 = sc.incidence(1).unwrap().to_dense_int();
        assert_eq!(
            b1,
            nalgebra::DMatrix::from_row_slice(3, 3, &[-1, -1, 0, 1, 0, -1, 0, 1, 1])
        );
        let b2 = sc.incidence(2).unwrap().to_dense_int();
        assert_eq!(b2, nalgebra::DMatrix::from_row_slice(3, 1, &[1, -1, 1]));
    }

    #[test]
    fn disjoint_triangles_block_diagonal_b2() {
        let sc = SimplicialComplex::build(&[vec![1, 2, 3], vec![4, 5, 6]], 2).unwrap();
        let b2 = sc.incidence(2).unwrap().to_dense_int();
        let expected = nalgebra::DMatrix::from_row_slice(
            6,
            2,
            &[1, 0, -1, 0, 1, 0, 0, 1, 0, -1, 0, 1],
        );
        assert_eq!(b2, expected);
    }

    #[test]
    fn boundary_condition_holds_on_fixtures() {
        assert!(filled_triangle().verify_boundary());
        let k1 = SimplicialComplex::build(&[vec![1, 2], vec![2, 3]], 1).unwrap();
        assert!(k1.verify_boundary()); // vacuous: no composable pair
    }

    #[test]
    fn identity_permutation_and_orientation_are_noops() {
        let sc = filled_triangle();
        let perms: Vec<Vec<usize>> = sc.counts().iter().map(|&n| (0..n).collect()).collect();
        let (p, _) = sc.permute(&perms).unwrap();
        assert_eq!(
            p.incidence(1).unwrap().to_dense_int(),
            sc.incidence(1).unwrap().to_dense_int()
        );
        let flips: Vec<Vec<i8>> = sc.counts().iter().map(|&n| vec![1; n]).collect();
        let (r, _) = sc.reorient(&flips).unwrap();
        assert_eq!(
            r.incidence(2).unwrap().to_dense_int(),
            sc.incidence(2).unwrap().to_dense_int()
        );
    }

    #[test]
    fn edge_flip_conjugates_incidence() {
        // Flipping edge (1,2) negates row 0 of B_2 and column 0 of B_1.
        let sc = filled_triangle();
        let (r, _) = sc
            .reorient(&[vec![1, 1, 1], vec![-1, 1, 1], vec![1]])
            .unwrap();
        let b1 = r.incidence(1).unwrap().to_dense_int();
        assert_eq!(
            b1,
            nalgebra::DMatrix::from_row_slice(3, 3, &[1, -1, 0, -1, 0, -1, 0, 1, 1])
        );
        let b2 = r.incidence(2).unwrap().to_dense_int();
        assert_eq!(b2, nalgebra::DMatrix::from_row_slice(3, 1, &[-1, -1, 1]));
        assert!(r.verify_boundary());
    }

    #[test]
    fn swap_disjoint_triangles_swaps_b2_columns() {
        let sc = SimplicialComplex::build(&[vec![1, 2, 3], vec![4, 5, 6]], 2).unwrap();
        let perms = vec![
            (0..6).collect::<Vec<_>>(),
            (0..6).collect::<Vec<_>>(),
            vec![1, 0],
        ];
        let (p, _) = sc.permute(&perms).unwrap();
        let orig = sc.incidence(2).unwrap().to_dense_int();
        let swapped = p.incidence(2).unwrap().to_dense_int();
        assert_eq!(swapped.column(0), orig.column(1));
        assert_eq!(swapped.column(1), orig.column(0));
    }

    #[test]
    fn malformed_transforms_are_rejected() {
        let sc = filled_triangle();
        assert!(matches!(
            sc.permute(&[vec![0, 0, 1], (0..3).collect(), vec![0]]),
            Err(ScError::MalformedPermutation(0))
        ));
        assert!(matches!(
            sc.reorient(&[vec![-1, 1, 1], vec![1, 1, 1], vec![1]]),
            Err(ScError::VertexOrientationFlip)
        ));
    }
}
