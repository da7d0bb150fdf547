//! Simplices: sets of vertices in canonical ascending order.

use crate::error::{Result, ScError};

/// A `k`-simplex stored as its `k + 1` vertices, strictly ascending.
///
/// The ascending order is the canonical orientation used by the whole crate:
/// boundary signs, incidence matrices, and flows are all defined relative to it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    /// Builds a simplex from a vertex list, sorting it into canonical order.
    /// Rejects empty lists and repeated vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(ScError::EmptySimplex);
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ScError::DuplicateVertex(vertices));
        }
        Ok(Self { vertices })
    }

    /// Dimension `k`: one less than the vertex count.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// The face obtained by removing the `i`-th vertex (0-based, in sorted order).
    ///
    /// The boundary sign attached to this face is `(-1)^i`.
    pub fn face_omitting(&self, i: usize) -> Simplex {
        debug_assert!(i < self.vertices.len());
        let mut v = Vec::with_capacity(self.vertices.len() - 1);
        v.extend_from_slice(&self.vertices[..i]);
        v.extend_from_slice(&self.vertices[i + 1..]);
        Simplex { vertices: v }
    }

    /// All `(k-1)`-faces, paired with their boundary sign `(-1)^i`.
    /// A vertex has no faces.
    pub fn faces(&self) -> Vec<(Simplex, i8)> {
        if self.dim() == 0 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| (self.face_omitting(i), if i % 2 == 0 { 1 } else { -1 }))
            .collect()
    }
}

impl std::fmt::Display for Simplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let s = Simplex::new(vec![3, 1, 2]).unwrap();
        assert_eq!(s.vertices(), &[1, 2, 3]);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(matches!(
            Simplex::new(vec![1, 1, 2]),
            Err(ScError::DuplicateVertex(_))
        ));
        assert!(matches!(Simplex::new(vec![]), Err(ScError::EmptySimplex)));
    }

    #[test]
    fn faces_alternate_signs() {
        let s = Simplex::new(vec![1, 2, 3]).unwrap();
        let faces = s.faces();
        assert_eq!(faces.len(), 3);
        assert_eq!(faces[0].0.vertices(), &[2, 3]);
        assert_eq!(faces[0].1, 1);
        assert_eq!(faces[1].0.vertices(), &[1, 3]);
        assert_eq!(faces[1].1, -1);
        assert_eq!(faces[2].0.vertices(), &[1, 2]);
        assert_eq!(faces[2].1, 1);
    }

    #[test]
    fn vertex_has_no_faces() {
        let s = Simplex::new(vec![7]).unwrap();
        assert!(s.faces().is_empty());
    }
}
