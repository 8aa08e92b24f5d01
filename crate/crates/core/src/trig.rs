//! Trigonometric polynomials in `ξ`, written in the band convention
//! `p(ξ) = Σ_l p_l exp(-2πi l ξ)`.
//!
//! Exponent `l` corresponds to time band `a^l[1, a)` and to scale index
//! `j = -l` of the coefficient form.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::dft::unit_root_exact;
use crate::types::{DilationBase, GridShape, ThetaGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    /// Exponent of `coeffs[0]`.
    pub offset: i64,
    pub coeffs: Vec<Complex64>,
}

impl TrigPoly {
    pub fn new(offset: i64, coeffs: Vec<Complex64>) -> Self {
        Self { offset, coeffs }
    }

    /// Real taps `c_0, c_1, …` starting at exponent 0.
    pub fn from_real(taps: &[f64]) -> Self {
        Self::new(0, taps.iter().map(|t| Complex64::new(*t, 0.0)).collect())
    }

    pub fn constant(value: Complex64) -> Self {
        Self::new(0, vec![value])
    }

    /// Coefficient of `exp(-2πi l ξ)`.
    pub fn coeff(&self, l: i64) -> Complex64 {
        let i = l - self.offset;
        if i < 0 || i as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Inclusive exponent range carrying nonzero coefficients.
    pub fn support(&self) -> Option<(i64, i64)> {
        let nz = |c: &Complex64| c.norm() != 0.0;
        let first = self.coeffs.iter().position(nz)?;
        let last = self.coeffs.iter().rposition(nz)?;
        Some((self.offset + first as i64, self.offset + last as i64))
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let l = self.offset + i as i64;
                c * Complex64::from_polar(1.0, -TAU * (l as f64 * xi).rem_euclid(1.0))
            })
            .sum()
    }

    /// Value at grid node `ξ_n = n / n_xi`, using exact roots of unity.
    pub fn eval_node(&self, n: usize, n_xi: usize) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * unit_root_exact(-(self.offset + i as i64) * n as i64, n_xi))
            .sum()
    }

    /// Θ-grid constant in `x`.
    pub fn to_grid(&self, base: DilationBase, shape: GridShape) -> ThetaGrid {
        let column: Vec<Complex64> = (0..shape.n_xi)
            .map(|n| self.eval_node(n, shape.n_xi))
            .collect();
        ThetaGrid::from_index_fn(base, shape, |_, n| column[n])
    }

    /// `p̄(ξ)` as a polynomial: exponents flip sign.
    pub fn conj(&self) -> Self {
        let hi = self.offset + self.coeffs.len() as i64 - 1;
        Self::new(-hi, self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_and_point_evaluation_agree() {
        let p = TrigPoly::new(
            -1,
            vec![
                Complex64::new(0.5, 0.1),
                Complex64::new(-0.2, 0.0),
                Complex64::new(0.0, 0.3),
            ],
        );
        for n in 0..12 {
            let d = p.eval_node(n, 12) - p.eval(n as f64 / 12.0);
            assert!(d.norm() < 1e-14);
        }
    }

    #[test]
    fn conj_matches_pointwise_conjugate() {
        let p = TrigPoly::new(2, vec![Complex64::new(0.5, 0.1), Complex64::new(0.0, -0.7)]);
        let q = p.conj();
        assert_eq!(q.offset, -3);
        for xi in [0.0, 0.13, 0.5, 0.77] {
            assert!((q.eval(xi) - p.eval(xi).conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn support_skips_zero_padding() {
        let p = TrigPoly::new(
            -2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert_eq!(p.support(), Some((-1, -1)));
        assert_eq!(TrigPoly::from_real(&[0.0]).support(), None);
    }
}
