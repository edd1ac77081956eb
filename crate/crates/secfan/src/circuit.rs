//! Affine circuits of a point configuration.

use crate::config::{ConfigError, PointConfiguration};
use crate::matrix::{primitive, IntMatrix};
use crate::prelude::*;

/// A minimal affinely dependent subset with its primitive relation.
///
/// `support` is sorted; `relation[k]` is the coefficient of
/// `support[k]` in the primitive affine relation (coefficients sum to zero,
/// all nonzero, first one positive).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit {
    pub support: Vec<usize>,
    pub relation: Vec<Int>,
}

impl Circuit {
    pub fn positive_part(&self) -> Vec<usize> {
        self.support
            .iter()
            .zip(&self.relation)
            .filter(|(_, c)| c.is_positive())
            .map(|(&i, _)| i)
            .collect()
    }

    pub fn negative_part(&self) -> Vec<usize> {
        self.support
            .iter()
            .zip(&self.relation)
            .filter(|(_, c)| c.is_negative())
            .map(|(&i, _)| i)
            .collect()
    }

    /// Signature (|A+|, |A-|; |A0|) where A0 is the set of configuration
    /// points outside the support.
    pub fn signature(&self, config: &PointConfiguration) -> (usize, usize, usize) {
        let p = self.positive_part().len();
        let m = self.negative_part().len();
        (p, m, config.points.len() - self.support.len())
    }

    /// Coefficient of a configuration point, zero off the support.
    pub fn coefficient(&self, point: usize) -> Int {
        match self.support.binary_search(&point) {
            Ok(k) => self.relation[k].clone(),
            Err(_) => Int::zero(),
        }
    }
}

/// All circuits of the configuration, in deterministic (sorted) order.
pub fn circuits(config: &PointConfiguration) -> Result<Vec<Circuit>, ConfigError> {
    let n = config.points.len();
    let d = config.dim;
    if n < d + 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    // circuits have support size between 3 and d+2 (distinct points)
    for size in 3..=d + 2 {
        if size > n {
            break;
        }
        for subset in combinations(n, size) {
            if let Some(c) = circuit_of(config, &subset) {
                out.push(c);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        while i > 0 {
            i -= 1;
            if cur[i] != i + n - k {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
        if k == 0 {
            return out;
        }
    }
}

/// The circuit supported exactly on `subset`, if any: the homogenized points
/// must have a one-dimensional kernel with all coordinates nonzero.
fn circuit_of(config: &PointConfiguration, subset: &[usize]) -> Option<Circuit> {
    let d = config.dim;
    // matrix with columns (point, 1)
    let mut m = IntMatrix::zero(d + 1, subset.len());
    for (j, &idx) in subset.iter().enumerate() {
        for i in 0..d {
            *m.at_mut(i, j) = config.points[idx][i].clone();
        }
        *m.at_mut(d, j) = Int::one();
    }
    let kernel = m.kernel_basis();
    if kernel.len() != 1 {
        return None;
    }
    let rel = &kernel[0];
    if rel.iter().any(|c| c.is_zero()) {
        return None;
    }
    let mut rel = primitive(rel).ok()?;
    if rel[0].is_negative() {
        for c in rel.iter_mut() {
            let v = -c.clone();
            *c = v;
        }
    }
    Some(Circuit { support: subset.to_vec(), relation: rel })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(ps: &[&[i64]]) -> Vec<Vec<Int>> {
        ps.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn unit_square() {
        let c =
            PointConfiguration::new(pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), None).unwrap();
        let cs = circuits(&c).unwrap();
        assert_eq!(cs.len(), 1);
        let sig = cs[0].signature(&c);
        assert_eq!((sig.0.min(sig.1), sig.0.max(sig.1), sig.2), (2, 2, 0));
    }

    #[test]
    fn collinear_midpoint() {
        let c = PointConfiguration::new(pts(&[&[0], &[1], &[2]]), None).unwrap();
        let cs = circuits(&c).unwrap();
        assert_eq!(cs.len(), 1);
        let sig = cs[0].signature(&c);
        assert_eq!((sig.0.min(sig.1), sig.0.max(sig.1)), (1, 2));
        // relation is p0 - 2 p1 + p2 = 0 up to sign
        assert_eq!(cs[0].relation, vec![int(1), int(-2), int(1)]);
    }

    #[test]
    fn blowup_count() {
        let c = PointConfiguration::from_rays(&pts(&[
            &[-1, -1],
            &[1, 0],
            &[0, 1],
            &[1, 1],
            &[2, 1],
            &[1, 2],
        ]))
        .unwrap();
        assert_eq!(circuits(&c).unwrap().len(), 26);
    }

    #[test]
    fn minimality() {
        // every proper subset of a circuit support is affinely independent
        let c = PointConfiguration::from_rays(&pts(&[&[1, 0], &[0, 1], &[-1, 0], &[-3, -1]]))
            .unwrap();
        for circ in circuits(&c).unwrap() {
            for drop in 0..circ.support.len() {
                let sub: Vec<usize> = circ
                    .support
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != drop)
                    .map(|(_, &i)| i)
                    .collect();
                assert!(circuit_of(&c, &sub).is_none());
            }
        }
    }
}
