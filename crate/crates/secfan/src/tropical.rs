//! Dual (tropical) complexes of triangulations and stable complexes of
//! flips.

use crate::circuit::circuits;
use crate::config::PointConfiguration;
use crate::matrix::primitive;
use crate::prelude::*;
use crate::triang::{flip, TriangError, Triangulation};

/// One cell of the dual complex, indexed by the face of the triangulation it
/// is dual to (faces of dimension >= 1 only, since the complex is dual to a
/// hypersurface).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DualCell {
    /// Sorted vertex indices of the dual face of the triangulation.
    pub face: Vec<usize>,
    /// Dimension of this cell (`config.dim - (|face| - 1)`).
    pub cell_dim: usize,
    /// Bounded iff the dual face does not lie on the hull boundary.
    pub bounded: bool,
    /// Normalized lattice volume of the dual face; the tropical weight for
    /// maximal cells (those dual to edges).
    pub weight: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalComplex {
    pub cells: Vec<DualCell>,
}

impl TropicalComplex {
    /// Cells whose dual faces contain the given face (the closure relation
    /// of the complex runs opposite to face inclusion in the triangulation).
    pub fn boundary_of(&self, face: &[usize]) -> Vec<&DualCell> {
        self.cells
            .iter()
            .filter(|c| c.face != face && face.iter().all(|v| c.face.contains(v)))
            .collect()
    }
}

fn face_volume(config: &PointConfiguration, face: &[usize]) -> Int {
    if face.len() < 2 {
        return Int::one();
    }
    // normalized volume inside the face's own affine span; for an edge this
    // is the lattice length (gcd of the difference vector)
    if face.len() == 2 {
        let diff: Vec<Int> = config.points[face[1]]
            .iter()
            .zip(&config.points[face[0]])
            .map(|(a, b)| a - b)
            .collect();
        let mut g = Int::zero();
        for x in &diff {
            g = num_integer::Integer::gcd(&g, x);
        }
        return g;
    }
    if face.len() == config.dim + 1 {
        return config.simplex_volume(face);
    }
    Int::one()
}

fn on_hull_boundary(config: &PointConfiguration, face: &[usize]) -> bool {
    match config.dim {
        1 => {
            // only the two extreme vertices lie on the boundary; edges never do
            face.len() == 1
                && config
                    .hull_vertices
                    .iter()
                    .any(|&h| config.points[h] == config.points[face[0]])
        }
        2 => {
            let hv = &config.hull_vertices;
            for k in 0..hv.len() {
                let a = hv[k];
                let b = hv[(k + 1) % hv.len()];
                if face.iter().all(|&p| config.orient(a, b, p).is_zero()) {
                    return true;
                }
            }
            false
        }
        _ => false,
    }
}

/// The polyhedral complex dual to a triangulation: one cell per face of
/// dimension >= 1, with a vertex per maximal simplex and an unbounded cell
/// per boundary face.
pub fn dual_complex(config: &PointConfiguration, t: &Triangulation) -> TropicalComplex {
    let mut cells = Vec::new();
    for face in t.faces() {
        if face.len() < 2 {
            continue;
        }
        let cell_dim = config.dim - (face.len() - 1);
        cells.push(DualCell {
            bounded: !on_hull_boundary(config, &face),
            cell_dim,
            weight: face_volume(config, &face),
            face,
        });
    }
    cells.sort();
    TropicalComplex { cells }
}

/// The stable complex of a flip: cells of the destination's dual complex
/// whose dual faces are new (absent from the source triangulation). Swap the
/// arguments for the unstable complex.
pub fn stable_complex(
    config: &PointConfiguration,
    t_from: &Triangulation,
    t_to: &Triangulation,
) -> Result<Vec<DualCell>, TriangError> {
    let adjacent = circuits(config)
        .map_err(TriangError::Config)?
        .iter()
        .any(|c| matches!(flip(config, t_from, c), Ok(t) if t.simplices == t_to.simplices));
    if !adjacent {
        return Err(TriangError::NotAdjacent);
    }
    let old = t_from.faces();
    Ok(dual_complex(config, t_to)
        .cells
        .into_iter()
        .filter(|c| !old.contains(&c.face))
        .collect())
}

/// Primitive direction of an edge of the configuration (used by reporting).
pub fn edge_direction(config: &PointConfiguration, a: usize, b: usize) -> Vec<Int> {
    let diff: Vec<Int> =
        config.points[b].iter().zip(&config.points[a]).map(|(x, y)| x - y).collect();
    primitive(&diff).expect("distinct points")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triang::regular_triangulations;

    fn cfg(ps: &[&[i64]], origin: Option<usize>) -> PointConfiguration {
        let pts: Vec<Vec<Int>> =
            ps.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect();
        PointConfiguration::new(pts, origin).unwrap()
    }

    #[test]
    fn triangle_dual() {
        let c = cfg(&[&[0, 0], &[1, 0], &[0, 1]], None);
        let t = Triangulation::new(vec![vec![0, 1, 2]]);
        let dc = dual_complex(&c, &t);
        // one vertex (dual to the triangle) and three unbounded rays
        let verts: Vec<_> = dc.cells.iter().filter(|x| x.cell_dim == 0).collect();
        let rays: Vec<_> =
            dc.cells.iter().filter(|x| x.cell_dim == 1 && !x.bounded).collect();
        assert_eq!(verts.len(), 1);
        assert_eq!(rays.len(), 3);
        assert_eq!(dc.cells.len(), 4);
    }

    #[test]
    fn square_dual_and_stable() {
        let c = cfg(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], None);
        let ts = regular_triangulations(&c).unwrap();
        assert_eq!(ts.len(), 2);
        for t in &ts {
            let dc = dual_complex(&c, t);
            let verts = dc.cells.iter().filter(|x| x.cell_dim == 0).count();
            let bounded_edges =
                dc.cells.iter().filter(|x| x.cell_dim == 1 && x.bounded).count();
            let rays = dc.cells.iter().filter(|x| x.cell_dim == 1 && !x.bounded).count();
            assert_eq!((verts, bounded_edges, rays), (2, 1, 4));
        }
        // the stable complex of the flip is the new diagonal's dual edge plus
        // the two new dual vertices
        let sc = stable_complex(&c, &ts[0], &ts[1]).unwrap();
        let faces: Vec<Vec<usize>> = sc.iter().map(|x| x.face.clone()).collect();
        let diag: Vec<Vec<usize>> =
            sc.iter().filter(|x| x.cell_dim == 1).map(|x| x.face.clone()).collect();
        assert_eq!(diag.len(), 1);
        assert!(faces.len() == 3);
        // not adjacent to itself
        assert!(matches!(
            stable_complex(&c, &ts[0], &ts[0]),
            Err(TriangError::NotAdjacent)
        ));
    }

    #[test]
    fn interior_point_stable() {
        // (1,3) circuit: triangle with an interior point
        let c = cfg(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]], None);
        let coarse = Triangulation::new(vec![vec![0, 1, 2]]);
        let fine =
            Triangulation::new(vec![vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3]]);
        let sc = stable_complex(&c, &coarse, &fine).unwrap();
        // three new internal dual edges and three new dual vertices
        assert_eq!(sc.iter().filter(|x| x.cell_dim == 1).count(), 3);
        assert!(sc.iter().filter(|x| x.cell_dim == 1).all(|x| x.bounded));
        assert_eq!(sc.iter().filter(|x| x.cell_dim == 0).count(), 3);
        // the unstable complex is the single old dual vertex
        let us = stable_complex(&c, &fine, &coarse).unwrap();
        assert_eq!(us.len(), 1);
        assert_eq!(us[0].cell_dim, 0);
    }
}
