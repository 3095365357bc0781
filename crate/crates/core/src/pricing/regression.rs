//! Least-squares fitting of continuation values on a bivariate monomial basis.

use crate::scalar::Real;

/// Number of monomials `s^i v^j` with `i + j <= degree`.
pub fn basis_size(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Writes the monomials ordered by total degree, `s` powers first:
/// `1, s, v, s^2, s v, v^2, ...`.
pub fn evaluate_basis<T: Real>(s: T, v: T, degree: usize, out: &mut [T]) {
    debug_assert_eq!(out.len(), basis_size(degree));
    out[0] = T::one();
    let mut k = 1;
    let mut start = 0;
    for d in 1..=degree {
        // Monomials of degree d are s * (degree d-1 terms) plus v * v^(d-1).
        let prev_len = d;
        for j in 0..prev_len {
            out[k] = out[start + j] * s;
            k += 1;
        }
        out[k] = out[start + prev_len - 1] * v;
        k += 1;
        start += prev_len;
    }
}

/// Adds the lower triangle of `x x^T` to a row-major `n x n` matrix.
#[inline]
pub(crate) fn add_outer<T: Real>(xtx: &mut [T], x: &[T]) {
    let n = x.len();
    for i in 0..n {
        let xi = x[i];
        let row = &mut xtx[i * n..i * n + i + 1];
        for (a, &xj) in row.iter_mut().zip(&x[..=i]) {
            *a += xi * xj;
        }
    }
}

/// Accumulates the normal equations `X^T X beta = X^T y`.
pub(crate) struct NormalEquations<T> {
    dim: usize,
    xtx: Vec<T>,
    xty: Vec<T>,
}

impl<T: Real> NormalEquations<T> {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            dim,
            xtx: vec![T::zero(); dim * dim],
            xty: vec![T::zero(); dim],
        }
    }

    /// Starts from a precomputed `X^T X` (lower triangle, row-major) and an
    /// empty right-hand side.
    pub(crate) fn start_from(&mut self, xtx: &[T]) {
        self.xtx.copy_from_slice(xtx);
        self.xty.fill(T::zero());
    }

    #[cfg(test)]
    pub(crate) fn push(&mut self, x: &[T], y: T) {
        add_outer(&mut self.xtx, x);
        self.add_rhs(x, y);
    }

    #[inline]
    pub(crate) fn add_gram(&mut self, x: &[T]) {
        add_outer(&mut self.xtx, x);
    }

    #[inline]
    pub(crate) fn add_rhs(&mut self, x: &[T], y: T) {
        for (a, &xi) in self.xty.iter_mut().zip(x) {
            *a += xi * y;
        }
    }

    /// Solves by an LDL^T factorisation that drops every column whose
    /// residual norm, after projecting out the kept columns before it, falls
    /// below `RANK_TOL` of its own norm. Dropped columns get a zero
    /// coefficient, which is the least-squares fit on the remaining basis.
    pub(crate) fn solve(&self, coef: &mut [T]) {
        let n = self.dim;
        let a = |i: usize, j: usize| {
            if j <= i {
                self.xtx[i * n + j]
            } else {
                self.xtx[j * n + i]
            }
        };
        let tol = T::lit(T::RANK_TOL);
        let mut l = vec![T::zero(); n * n];
        let mut d = vec![T::zero(); n];
        let mut kept = vec![false; n];
        for j in 0..n {
            let ajj = a(j, j);
            let mut djj = ajj;
            for k in (0..j).filter(|&k| kept[k]) {
                djj -= l[j * n + k] * l[j * n + k] * d[k];
            }
            // Negated so that a NaN pivot is dropped too.
            if !(ajj > T::zero() && djj > tol * ajj) {
                continue;
            }
            kept[j] = true;
            d[j] = djj;
            for i in j + 1..n {
                let mut v = a(i, j);
                for k in (0..j).filter(|&k| kept[k]) {
                    v -= l[i * n + k] * l[j * n + k] * d[k];
                }
                l[i * n + j] = v / djj;
            }
        }

        let mut y = vec![T::zero(); n];
        for j in (0..n).filter(|&j| kept[j]) {
            let mut v = self.xty[j];
            for k in (0..j).filter(|&k| kept[k]) {
                v -= l[j * n + k] * y[k];
            }
            y[j] = v;
        }
        for j in (0..n).rev() {
            if !kept[j] {
                coef[j] = T::zero();
                continue;
            }
            let mut v = y[j] / d[j];
            for i in (j + 1..n).filter(|&i| kept[i]) {
                v -= l[i * n + j] * coef[i];
            }
            coef[j] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_layout() {
        assert_eq!(basis_size(1), 3);
        assert_eq!(basis_size(2), 6);
        assert_eq!(basis_size(3), 10);
        let mut out = [0.0; 10];
        evaluate_basis(2.0, 3.0, 3, &mut out);
        assert_eq!(out, [1.0, 2.0, 3.0, 4.0, 6.0, 9.0, 8.0, 12.0, 18.0, 27.0]);
        let mut out = [0.0; 6];
        evaluate_basis(2.0, 3.0, 2, &mut out);
        assert_eq!(out, [1.0, 2.0, 3.0, 4.0, 6.0, 9.0]);
    }

    #[test]
    fn recovers_exact_polynomial() {
        let beta = [0.5, -1.0, 2.0, 0.25, 3.0, -4.0];
        let mut ne = NormalEquations::new(6);
        let mut x = [0.0; 6];
        for i in 0..50 {
            let s = 0.7 + 0.01 * i as f64;
            let v = 0.02 + 0.001 * ((i * 7) % 13) as f64;
            evaluate_basis(s, v, 2, &mut x);
            let y: f64 = x.iter().zip(&beta).map(|(a, b)| a * b).sum();
            ne.push(&x, y);
        }
        let mut coef = [0.0; 6];
        ne.solve(&mut coef);
        for (c, b) in coef.iter().zip(&beta) {
            assert!((c - b).abs() < 1e-6, "{coef:?}");
        }
    }

    #[test]
    fn drops_collinear_columns() {
        // v is constant: the v, s v and v^2 columns duplicate 1 and s.
        let mut ne = NormalEquations::new(6);
        let mut x = [0.0; 6];
        for i in 0..40 {
            let s = 0.8 + 0.01 * i as f64;
            evaluate_basis(s, 0.04, 2, &mut x);
            ne.push(&x, 1.0 - 2.0 * s + s * s);
        }
        let mut coef = [0.0; 6];
        ne.solve(&mut coef);
        assert!(coef.iter().all(|c| c.is_finite()));
        assert_eq!(&coef[2..3], &[0.0]);
        for i in 0..40 {
            let s = 0.8 + 0.01 * i as f64;
            evaluate_basis(s, 0.04, 2, &mut x);
            let fit: f64 = x.iter().zip(&coef).map(|(a, b)| a * b).sum();
            assert!((fit - (1.0 - 2.0 * s + s * s)).abs() < 1e-9);
        }
    }
}
