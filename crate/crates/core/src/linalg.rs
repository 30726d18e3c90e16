//! Dense complex LU factorization with partial pivoting.

use num_complex::Complex64;

use crate::system::CoupledMatrix;

/// `P·A = L·U` packed in place (unit lower `L` below the diagonal).
#[derive(Debug, Clone)]
pub struct Lu {
    dim: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn new(m: &CoupledMatrix) -> Self {
        let n = m.dim();
        let mut lu = m.entries().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, _) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[k * n + k];
            if pivot == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= factor * u;
                }
            }
        }
        Lu {
            dim: n,
            lu,
            perm,
            swaps,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let prod: Complex64 = (0..n).map(|i| self.lu[i * n + i]).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    /// Smallest pivot magnitude; zero means exactly singular.
    pub fn min_pivot(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|i| self.lu[i * n + i].norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves `A·x = b`. Zero pivots must be handled by the caller
    /// (see [`Lu::min_pivot`]).
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

/// `det(m)` via LU.
pub fn determinant(m: &CoupledMatrix) -> Complex64 {
    Lu::new(m).determinant()
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat(dim: usize, e: Vec<Complex64>) -> CoupledMatrix {
        CoupledMatrix::from_row_major(dim, e).unwrap()
    }

    #[test]
    fn two_by_two_determinant() {
        // (1+i)(4) − (2)(3i) = 4 − 2i
        let m = mat(2, vec![c(1., 1.), c(2., 0.), c(0., 3.), c(4., 0.)]);
        assert!((determinant(&m) - c(4., -2.)).norm() < 1e-14);
    }

    #[test]
    fn pivoting_sign() {
        // permutation matrix with one swap
        let m = mat(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        assert_eq!(determinant(&m), c(-1., 0.));
    }

    #[test]
    fn three_by_three_against_cofactors() {
        #[rustfmt::skip]
        let e = vec![
            c(2., 1.), c(0., -1.), c(3., 0.),
            c(1., 0.), c(1., 1.), c(0., 2.),
            c(-1., 0.5), c(4., 0.), c(1., -1.),
        ];
        let a = |i: usize, j: usize| e[i * 3 + j];
        let cof = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        let m = mat(3, e.clone());
        assert!((determinant(&m) - cof).norm() < 1e-12);

        let b = vec![c(1., 0.), c(0., 1.), c(2., -1.)];
        let x = Lu::new(&m).solve(&b);
        let back = m.apply(&x).unwrap();
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_has_zero_pivot() {
        let m = mat(2, vec![c(1., 0.), c(2., 0.), c(2., 0.), c(4., 0.)]);
        let lu = Lu::new(&m);
        assert_eq!(lu.min_pivot(), 0.0);
        assert_eq!(lu.determinant(), c(0., 0.));
    }
}
