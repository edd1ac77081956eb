//! Marked lattice point configurations and their convex hulls.

use crate::matrix::IntMatrix;
use crate::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    DuplicatePoint(usize, usize),
    NotFullDimensional,
    TooFewPoints,
    MixedDimension,
}

impl core::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ConfigError::DuplicatePoint(i, j) => write!(f, "points {i} and {j} coincide"),
            ConfigError::NotFullDimensional => {
                write!(f, "points do not affinely span the lattice")
            }
            ConfigError::TooFewPoints => write!(f, "need at least dim+1 points"),
            ConfigError::MixedDimension => write!(f, "points of mixed dimension"),
        }
    }
}

/// An ordered list of distinct lattice points spanning the lattice affinely,
/// with an optional marked origin and (in dimension at most 2) the facet
/// description of the convex hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    pub dim: usize,
    pub points: Vec<Vec<Int>>,
    pub origin_index: Option<usize>,
    /// Hull vertex indices: a counterclockwise cycle in dimension 2, the two
    /// extremes in dimension 1, empty in higher dimension.
    pub hull_vertices: Vec<usize>,
    /// Normalized lattice volume of the hull (dim! times Euclidean volume);
    /// zero when the hull was not computed (dimension above 2).
    pub volume: Int,
}

fn orient2(a: &[Int], b: &[Int], c: &[Int]) -> Int {
    let ab0 = &b[0] - &a[0];
    let ab1 = &b[1] - &a[1];
    let ac0 = &c[0] - &a[0];
    let ac1 = &c[1] - &a[1];
    &ab0 * &ac1 - &ab1 * &ac0
}

/// Counterclockwise convex hull (monotone chain) of distinct 2d points.
fn hull2(points: &[Vec<Int>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].cmp(&points[b]));
    let half = |ids: &[usize]| -> Vec<usize> {
        let mut h: Vec<usize> = Vec::new();
        for &i in ids {
            while h.len() >= 2
                && !orient2(&points[h[h.len() - 2]], &points[h[h.len() - 1]], &points[i])
                    .is_positive()
            {
                h.pop();
            }
            h.push(i);
        }
        h
    };
    let lo = half(&idx);
    let rev: Vec<usize> = idx.iter().rev().copied().collect();
    let hi = half(&rev);
    let mut out: Vec<usize> = lo[..lo.len() - 1].to_vec();
    out.extend_from_slice(&hi[..hi.len() - 1]);
    out
}

impl PointConfiguration {
    pub fn new(
        points: Vec<Vec<Int>>,
        origin_index: Option<usize>,
    ) -> Result<Self, ConfigError> {
        if points.is_empty() {
            return Err(ConfigError::TooFewPoints);
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(ConfigError::MixedDimension);
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(ConfigError::DuplicatePoint(i, j));
                }
            }
        }
        if points.len() < dim + 1 {
            return Err(ConfigError::TooFewPoints);
        }
        // affine span check: rank of differences to the first point
        let diffs: Vec<Vec<Int>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
            .collect();
        if IntMatrix::from_rows(&diffs).rank() != dim {
            return Err(ConfigError::NotFullDimensional);
        }
        let (hull_vertices, volume) = match dim {
            1 => {
                let mut lo = 0usize;
                let mut hi = 0usize;
                for (i, p) in points.iter().enumerate() {
                    if p[0] < points[lo][0] {
                        lo = i;
                    }
                    if p[0] > points[hi][0] {
                        hi = i;
                    }
                }
                let vol = &points[hi][0] - &points[lo][0];
                (vec![lo, hi], vol)
            }
            2 => {
                let hv = hull2(&points);
                // shoelace: 2 * area = normalized volume
                let mut two_area = Int::zero();
                for k in 1..hv.len() - 1 {
                    two_area += orient2(&points[hv[0]], &points[hv[k]], &points[hv[k + 1]]);
                }
                (hv, two_area)
            }
            _ => (Vec::new(), Int::zero()),
        };
        Ok(PointConfiguration { dim, points, origin_index, hull_vertices, volume })
    }

    /// Configuration of a complete fan: the origin (index 0) followed by the
    /// primitive ray generators (indices 1..).
    pub fn from_rays(rays: &[Vec<Int>]) -> Result<Self, ConfigError> {
        let dim = if rays.is_empty() { 0 } else { rays[0].len() };
        let mut points = Vec::with_capacity(rays.len() + 1);
        points.push(vec![Int::zero(); dim]);
        points.extend(rays.iter().cloned());
        PointConfiguration::new(points, Some(0))
    }

    /// Normalized lattice volume |det of edge vectors| of a (dim+1)-point
    /// simplex; zero iff degenerate.
    pub fn simplex_volume(&self, simplex: &[usize]) -> Int {
        assert_eq!(simplex.len(), self.dim + 1);
        let base = &self.points[simplex[0]];
        let edges: Vec<Vec<Int>> = simplex[1..]
            .iter()
            .map(|&i| self.points[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        IntMatrix::from_rows(&edges).det().expect("square edge matrix").abs()
    }

    /// Barycentric (affine) coordinates of `p` with respect to the
    /// nondegenerate simplex `sigma`; entries sum to 1.
    pub fn affine_coords(&self, sigma: &[usize], p: &[Int]) -> Option<Vec<Rat>> {
        assert_eq!(sigma.len(), self.dim + 1);
        // solve sum_i c_i * (sigma_i, 1) = (p, 1)
        let n = self.dim + 1;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|row| {
                let mut r: Vec<Rat> = sigma
                    .iter()
                    .map(|&i| {
                        if row < self.dim {
                            rat_int(&self.points[i][row])
                        } else {
                            Rat::one()
                        }
                    })
                    .collect();
                r.push(if row < self.dim { rat_int(&p[row]) } else { Rat::one() });
                r
            })
            .collect();
        // Gaussian elimination
        for col in 0..n {
            let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
            a.swap(col, piv);
            let inv = a[col][col].clone();
            for v in a[col].iter_mut() {
                *v = &*v / &inv;
            }
            for i in 0..n {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for k in 0..n + 1 {
                        let sub = &f * &a[col][k];
                        a[i][k] = &a[i][k] - &sub;
                    }
                }
            }
        }
        Some((0..n).map(|i| a[i][n].clone()).collect())
    }

    pub(crate) fn orient(&self, a: usize, b: usize, c: usize) -> Int {
        orient2(&self.points[a], &self.points[b], &self.points[c])
    }
}
