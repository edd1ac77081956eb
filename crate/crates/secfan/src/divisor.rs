//! The divisor-class exact sequence `0 -> M -> Z^n -> Ghat -> 0` of a toric
//! GIT problem, computed from the ray generators by Smith normal form.

use crate::matrix::{primitive, IntMatrix, MatrixError};
use crate::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisorError {
    ZeroRay(usize),
    NonPrimitiveRay(usize),
    Matrix(MatrixError),
}

impl core::fmt::Display for DivisorError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DivisorError::ZeroRay(i) => write!(f, "ray {i} is zero"),
            DivisorError::NonPrimitiveRay(i) => {
                write!(f, "ray {i} is not primitive; normalize it explicitly")
            }
            DivisorError::Matrix(e) => write!(f, "{e}"),
        }
    }
}

/// Exact sequence `0 -> M -> Z^n -> Ghat -> 0` determined by `n` primitive
/// rays in a rank-`rank_m` lattice.
///
/// `Ghat` is split (by a deterministic Smith-normal-form basis choice) into a
/// free part of rank `rank_ghat` and torsion given by `torsion` invariant
/// factors; `gamma` maps onto the free part and `gamma_torsion` onto the
/// torsion coordinates (to be read modulo the matching factor). `beta[i]` is
/// the free-part image of the `i`-th standard basis vector and
/// `anticanonical` is the sum of all `beta[i]`.
#[derive(Clone, Debug)]
pub struct DivisorSequence {
    pub rays: Vec<Vec<Int>>,
    pub rank_m: usize,
    pub rank_ghat: usize,
    pub torsion: Vec<Int>,
    pub gamma: IntMatrix,
    pub gamma_torsion: IntMatrix,
    pub delta: IntMatrix,
    pub beta: Vec<Vec<Int>>,
    pub anticanonical: Vec<Int>,
}

/// Build the divisor sequence of a primitive ray list.
pub fn build_divisor_sequence(rays: &[Vec<Int>]) -> Result<DivisorSequence, DivisorError> {
    let n = rays.len();
    let d = if n == 0 { 0 } else { rays[0].len() };
    for (i, r) in rays.iter().enumerate() {
        assert_eq!(r.len(), d, "rays of mixed dimension");
        if r.iter().all(|x| x.is_zero()) {
            return Err(DivisorError::ZeroRay(i));
        }
        let p = primitive(r).map_err(DivisorError::Matrix)?;
        if &p != r {
            return Err(DivisorError::NonPrimitiveRay(i));
        }
    }
    // delta: M = Z^d -> Z^n, m |-> (<ray_i, m>)_i; as a matrix the i-th row
    // is ray_i.
    let delta = IntMatrix::from_rows(rays);
    let snf = delta.smith_normal_form();
    let mut rank_delta = 0usize;
    for i in 0..snf.d.rows.min(snf.d.cols) {
        if !snf.d.at(i, i).is_zero() {
            rank_delta += 1;
        }
    }
    // In the basis given by the rows of U, the image of delta is spanned by
    // d_i * e_i for i < rank; the cokernel splits into torsion (d_i > 1) and
    // free (rows past the rank) coordinates.
    let mut torsion = Vec::new();
    let mut torsion_rows = Vec::new();
    for i in 0..rank_delta {
        let di = snf.d.at(i, i).clone();
        if di > Int::one() {
            torsion.push(di);
            torsion_rows.push(snf.u.row(i));
        }
    }
    let free_rows: Vec<Vec<Int>> = (rank_delta..n).map(|i| snf.u.row(i)).collect();
    let rank_ghat = free_rows.len();
    let gamma = if rank_ghat == 0 {
        IntMatrix::zero(0, n)
    } else {
        IntMatrix::from_rows(&free_rows)
    };
    let gamma_torsion = if torsion_rows.is_empty() {
        IntMatrix::zero(0, n)
    } else {
        IntMatrix::from_rows(&torsion_rows)
    };
    let beta: Vec<Vec<Int>> = (0..n).map(|i| gamma.col(i)).collect();
    let mut anticanonical = vec![Int::zero(); rank_ghat];
    for b in &beta {
        for (a, x) in anticanonical.iter_mut().zip(b) {
            *a += x;
        }
    }
    Ok(DivisorSequence {
        rays: rays.to_vec(),
        rank_m: d,
        rank_ghat,
        torsion,
        gamma,
        gamma_torsion,
        delta,
        beta,
        anticanonical,
    })
}

impl DivisorSequence {
    /// Change-of-basis matrix from the internal free-part coordinates of
    /// `Ghat` to the basis given by `beta[i]` for the chosen ray indices.
    ///
    /// Succeeds only when the chosen classes form a lattice basis of the
    /// free part (and torsion is absent); coordinates of a class `v` in the
    /// new basis are then `result * v`.
    pub fn basis_change(&self, indices: &[usize]) -> Result<IntMatrix, MatrixError> {
        if !self.torsion.is_empty() || indices.len() != self.rank_ghat {
            return Err(MatrixError::ShapeMismatch);
        }
        let k = self.rank_ghat;
        // columns of b are the chosen beta classes
        let mut b = IntMatrix::zero(k, k);
        for (j, &idx) in indices.iter().enumerate() {
            for i in 0..k {
                *b.at_mut(i, j) = self.beta[idx][i].clone();
            }
        }
        let det = b.det()?;
        if det.abs() != Int::one() {
            return Err(MatrixError::Singular);
        }
        // integer inverse via adjugate: inv = adj / det with det = +-1
        let mut inv = IntMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                // cofactor C_{j,i}
                let mut minor = IntMatrix::zero(k - 1, k - 1);
                let mut mi = 0;
                for r in 0..k {
                    if r == j {
                        continue;
                    }
                    let mut mj = 0;
                    for c in 0..k {
                        if c == i {
                            continue;
                        }
                        *minor.at_mut(mi, mj) = b.at(r, c).clone();
                        mj += 1;
                    }
                    mi += 1;
                }
                let mut cof = minor.det()?;
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                *inv.at_mut(i, j) = cof;
            }
        }
        if det.is_negative() {
            for i in 0..k {
                for j in 0..k {
                    let v = -inv.at(i, j).clone();
                    *inv.at_mut(i, j) = v;
                }
            }
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rays(rs: &[&[i64]]) -> Vec<Vec<Int>> {
        rs.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn p2() {
        let s = build_divisor_sequence(&rays(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert_eq!(s.rank_ghat, 1);
        assert!(s.torsion.is_empty());
        // beta all equal, anticanonical = 3 * beta_0
        assert_eq!(s.beta[0], s.beta[1]);
        assert_eq!(s.beta[1], s.beta[2]);
        assert_eq!(s.anticanonical[0].abs(), int(3));
        assert!(s.gamma.mul(&s.delta).is_zero());
    }

    #[test]
    fn p11n() {
        for n in 2..6i64 {
            let s = build_divisor_sequence(&rays(&[&[1, 0], &[0, 1], &[-n, -1]])).unwrap();
            assert_eq!(s.rank_ghat, 1);
            assert!(s.torsion.is_empty());
            let mut degs: Vec<Int> = s.beta.iter().map(|b| b[0].abs()).collect();
            degs.sort();
            assert_eq!(degs, vec![int(1), int(1), int(n)]);
        }
    }

    #[test]
    fn blowup_example() {
        let s = build_divisor_sequence(&rays(&[
            &[-1, -1],
            &[1, 0],
            &[0, 1],
            &[1, 1],
            &[2, 1],
            &[1, 2],
        ]))
        .unwrap();
        assert_eq!(s.rank_ghat, 4);
        assert!(s.torsion.is_empty());
        assert!(s.gamma.mul(&s.delta).is_zero());
        assert_eq!(s.delta.rank() + s.gamma.rank(), 6);
        // anticanonical in the (D0, D3, D4, D5) basis
        let cb = s.basis_change(&[0, 3, 4, 5]).unwrap();
        let k = cb.mul_vec(&s.anticanonical);
        assert_eq!(k, vec![int(3), int(-1), int(-2), int(-2)]);
        for (j, expect) in [
            (1usize, vec![int(1), int(-1), int(-2), int(-1)]),
            (2usize, vec![int(1), int(-1), int(-1), int(-2)]),
        ] {
            // D1 = D0 - D3 - 2 D4 - D5, D2 = D0 - D3 - D4 - 2 D5
            assert_eq!(cb.mul_vec(&s.beta[j]), expect);
        }
        // the chosen classes themselves become the standard basis
        for (j, &idx) in [0usize, 3, 4, 5].iter().enumerate() {
            let coords = cb.mul_vec(&s.beta[idx]);
            for (i, c) in coords.iter().enumerate() {
                assert_eq!(*c, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            build_divisor_sequence(&rays(&[&[0, 0]])),
            Err(DivisorError::ZeroRay(0))
        ));
        assert!(matches!(
            build_divisor_sequence(&rays(&[&[2, 4]])),
            Err(DivisorError::NonPrimitiveRay(0))
        ));
    }
}
