//! Direct DFT kernels with exact index reduction.
//!
//! Every twiddle factor is looked up from a table of the `N`-th roots of unity
//! after reducing the integer exponent modulo `N`, so large modulation indices
//! never lose phase accuracy. Sums are compensated and run in ascending index
//! order.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::sum::ComplexSum;

/// Table of `exp(2πi r / n)` for `r = 0..n`.
#[derive(Debug, Clone)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(n: usize) -> Self {
        assert!(n > 0);
        let roots = (0..n)
            .map(|r| unit_root_exact(r as i64, n))
            .collect::<Vec<_>>();
        Self { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    /// `exp(2πi e / n)` for any integer exponent `e`.
    #[inline]
    pub fn pow(&self, e: i64) -> Complex64 {
        let n = self.roots.len() as i64;
        self.roots[e.rem_euclid(n) as usize]
    }
}

/// `exp(2πi r / n)` evaluated so that the quarter-turn points are exact.
pub fn unit_root_exact(r: i64, n: usize) -> Complex64 {
    let n_i = n as i64;
    let r = r.rem_euclid(n_i);
    // Exact values at multiples of a quarter turn.
    if (4 * r) % n_i == 0 {
        return match (4 * r) / n_i {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * r as f64 / n as f64)
}

/// `Σ_t values[t] · ω^{sign · freq · t}` with `ω = exp(2πi/N)`, `N = roots.len()`.
pub fn mode_sum(values: &[Complex64], roots: &RootTable, freq: i64, sign: i64) -> Complex64 {
    debug_assert_eq!(values.len(), roots.len());
    let mut acc = ComplexSum::new();
    for (t, v) in values.iter().enumerate() {
        acc.add(v * roots.pow(sign * freq * t as i64));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Σ_f coeffs[f - f_min] · ω^{sign · f · t}` evaluated at every `t = 0..N`.
    fn synth_modes(
        coeffs: &[Complex64],
        f_min: i64,
        roots: &RootTable,
        sign: i64,
    ) -> Vec<Complex64> {
        (0..roots.len() as i64)
            .map(|t| {
                let mut acc = ComplexSum::new();
                for (i, c) in coeffs.iter().enumerate() {
                    if *c != Complex64::new(0.0, 0.0) {
                        acc.add(c * roots.pow(sign * (f_min + i as i64) * t));
                    }
                }
                acc.value()
            })
            .collect()
    }

    #[test]
    fn quarter_turns_are_exact() {
        let t = RootTable::new(8);
        assert_eq!(t.pow(2), Complex64::new(0.0, 1.0));
        assert_eq!(t.pow(-2), Complex64::new(0.0, -1.0));
        assert_eq!(t.pow(12), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn mode_sum_inverts_synth_modes() {
        let n = 12;
        let roots = RootTable::new(n);
        let coeffs: Vec<_> = (0..5)
            .map(|i| Complex64::new(i as f64 - 1.5, 0.25 * i as f64))
            .collect();
        let samples = synth_modes(&coeffs, -2, &roots, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let back = mode_sum(&samples, &roots, i as i64 - 2, -1) / n as f64;
            assert!((back - c).norm() < 1e-14);
        }
    }
}
