//! Frame diagnostics through the spectral density `w = Σ_l |Θ_a ψ_l|²`.
//!
//! In the Θ-domain the frame operator `S` acts as multiplication by `w`, so
//! frame bounds are the essential infimum and supremum of `w`. Both are
//! estimated by the grid minimum and maximum.

use crate::error::{MdError, Result};
use crate::sum::NeumaierSum;
use crate::types::{DilationBase, FrameReport, GridShape, ThetaGrid, WindowFamily};

/// Default positivity threshold for frame decisions.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Real, nonnegative samples of `w` on a Θ-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    base: DilationBase,
    shape: GridShape,
    values: Vec<f64>,
}

impl SpectralDensity {
    pub fn from_vec(base: DilationBase, shape: GridShape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.len() {
            return Err(MdError::Dimension(format!(
                "{} density samples for a {}x{} grid",
                values.len(),
                shape.n_x,
                shape.n_xi
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(MdError::Domain(format!(
                "spectral density must be >= 0, got {v}"
            )));
        }
        Ok(Self {
            base,
            shape,
            values,
        })
    }

    pub fn base(&self) -> DilationBase {
        self.base
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, k: usize, n: usize) -> f64 {
        self.values[k * self.shape.n_xi + n]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    fn check_matches(&self, grid: &ThetaGrid) -> Result<()> {
        if grid.shape() != self.shape || grid.base() != self.base {
            return Err(MdError::Dimension(format!(
                "density on {}x{} grid, signal on {}x{}",
                self.shape.n_x,
                self.shape.n_xi,
                grid.n_x(),
                grid.n_xi()
            )));
        }
        Ok(())
    }
}

/// `w[k][n] = Σ_l |Θ_a ψ_l(x_k, ξ_n)|²`.
pub fn spectral_density(family: &WindowFamily) -> SpectralDensity {
    let shape = family.shape();
    let values = (0..shape.len())
        .map(|i| {
            family
                .windows()
                .iter()
                .map(|g| g.values()[i].norm_sqr())
                .collect::<NeumaierSum>()
                .value()
        })
        .collect();
    SpectralDensity {
        base: family.base(),
        shape,
        values,
    }
}

/// Frame-bound estimates from the grid extrema of `w`.
///
/// On a finite grid the supremum is always finite, so `bessel` holds and the
/// Bessel bound is reported as `upper`.
pub fn frame_report(w: &SpectralDensity, tol: f64) -> FrameReport {
    let lower = w.min();
    let upper = w.max();
    FrameReport {
        lower,
        upper,
        complete: lower > 0.0,
        bessel: upper.is_finite(),
        frame: lower > tol && upper.is_finite(),
        tol,
        nodes: w.values.len(),
    }
}

/// Θ-domain action of the frame operator: `w · F`.
pub fn apply_frame_operator(grid: &ThetaGrid, w: &SpectralDensity) -> Result<ThetaGrid> {
    w.check_matches(grid)?;
    let mut i = 0;
    Ok(grid.map(|z| {
        let out = z * w.values[i];
        i += 1;
        out
    }))
}

/// Θ-domain action of `S^{-1}`: `F / w`, refused unless `min w > tol`.
pub fn invert_frame_operator(grid: &ThetaGrid, w: &SpectralDensity, tol: f64) -> Result<ThetaGrid> {
    w.check_matches(grid)?;
    let min = w.min();
    if !(min > tol) {
        return Err(MdError::NotAFrame { min, tol });
    }
    let mut i = 0;
    Ok(grid.map(|z| {
        let out = z / w.values[i];
        i += 1;
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::covariance_apply;
    use crate::types::{CoefArray, IndexWindow};
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    fn base() -> DilationBase {
        DilationBase::new(2.0).unwrap()
    }

    fn shape() -> GridShape {
        GridShape::new(8, 16).unwrap()
    }

    fn fir_grid(taps: &[f64]) -> ThetaGrid {
        ThetaGrid::from_fn(base(), shape(), |_, xi| {
            taps.iter()
                .enumerate()
                .map(|(l, c)| Complex64::from_polar(*c, -TAU * l as f64 * xi))
                .sum()
        })
    }

    #[test]
    fn indicator_window_has_unit_density() {
        let family = WindowFamily::single(ThetaGrid::constant(
            base(),
            shape(),
            Complex64::new(1.0, 0.0),
        ));
        let w = spectral_density(&family);
        assert!(w.values().iter().all(|v| *v == 1.0));
        let r = frame_report(&w, DEFAULT_TOL);
        assert_eq!((r.lower, r.upper), (1.0, 1.0));
        assert!(r.frame && r.complete && r.bessel);
    }

    #[test]
    fn fir_three_quarter_bounds() {
        // |3/4 + 1/4 e^{-2πiξ}|² has min 1/4 at ξ = 1/2, max 1 at ξ = 0
        let w = spectral_density(&WindowFamily::single(fir_grid(&[0.75, 0.25])));
        let r = frame_report(&w, DEFAULT_TOL);
        assert!((r.lower - 0.25).abs() < 1e-15);
        assert!((r.upper - 1.0).abs() < 1e-15);
        assert!(r.frame);
        // dense scan oracle
        let dense = (0..10_000)
            .map(|i| {
                let xi = i as f64 / 10_000.0;
                (Complex64::new(0.75, 0.0) + Complex64::from_polar(0.25, -TAU * xi)).norm_sqr()
            })
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        assert!((dense.0 - r.lower).abs() < 1e-12 && (dense.1 - r.upper).abs() < 1e-12);
    }

    #[test]
    fn grid_zero_breaks_completeness() {
        let mut g = ThetaGrid::constant(base(), shape(), Complex64::new(1.0, 0.0));
        g.set(3, 5, Complex64::new(0.0, 0.0));
        let r = frame_report(&spectral_density(&WindowFamily::single(g)), DEFAULT_TOL);
        assert!(!r.complete);
        assert!(!r.frame);
        assert_eq!(r.lower, 0.0);
    }

    #[test]
    fn mismatched_family_rejected() {
        let a = ThetaGrid::zeros(base(), shape());
        let b = ThetaGrid::zeros(base(), GridShape::new(8, 8).unwrap());
        assert!(matches!(
            WindowFamily::new(vec![a, b]),
            Err(MdError::Dimension(_))
        ));
    }

    #[test]
    fn frame_operator_unit_density_is_identity() {
        let f = fir_grid(&[0.3, -0.2, 0.9]);
        let w = spectral_density(&WindowFamily::single(ThetaGrid::constant(
            base(),
            shape(),
            Complex64::new(0.0, 1.0),
        )));
        assert_eq!(apply_frame_operator(&f, &w).unwrap(), f);
        assert_eq!(invert_frame_operator(&f, &w, DEFAULT_TOL).unwrap(), f);
    }

    #[test]
    fn invert_undoes_apply() {
        let f = fir_grid(&[0.3, -0.2, 0.9]);
        let w = spectral_density(&WindowFamily::single(fir_grid(&[0.75, 0.25])));
        let back =
            invert_frame_operator(&apply_frame_operator(&f, &w).unwrap(), &w, DEFAULT_TOL).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn invert_refuses_non_frame() {
        let f = fir_grid(&[1.0]);
        let w = spectral_density(&WindowFamily::single(fir_grid(&[0.5, 0.5])));
        // 1/2 + 1/2 e^{-2πiξ} vanishes at ξ = 1/2, a grid node
        assert!(matches!(
            invert_frame_operator(&f, &w, DEFAULT_TOL),
            Err(MdError::NotAFrame { .. })
        ));
    }

    #[test]
    fn frame_operator_commutes_with_covariance() {
        let f = crate::theta::coef_to_grid(
            &CoefArray::from_fn(base(), IndexWindow::new(-1, 1, -1, 1).unwrap(), |m, j| {
                Complex64::new(m as f64 + 0.5, j as f64)
            }),
            shape(),
        )
        .unwrap();
        let w = spectral_density(&WindowFamily::single(fir_grid(&[0.75, 0.25])));
        for (m, j) in [(0, 0), (2, -1), (-3, 4)] {
            let lhs = apply_frame_operator(&covariance_apply(&f, m, j), &w).unwrap();
            let rhs = covariance_apply(&apply_frame_operator(&f, &w).unwrap(), m, j);
            // equal up to the rounding of reordered products
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-14);
        }
    }

    #[test]
    fn frame_operator_is_self_adjoint_and_bounded_below() {
        let f = fir_grid(&[0.3, -0.2, 0.9]);
        let g = fir_grid(&[0.1, 0.7]).map(|z| z * Complex64::new(0.2, -1.0));
        let w = spectral_density(&WindowFamily::single(fir_grid(&[0.75, 0.25])));
        let wf = apply_frame_operator(&f, &w).unwrap();
        let wg = apply_frame_operator(&g, &w).unwrap();
        assert!((wf.inner(&g).unwrap() - f.inner(&wg).unwrap()).norm() < 1e-14);
        let r = frame_report(&w, DEFAULT_TOL);
        assert!(wf.inner(&f).unwrap().re >= r.lower * f.norm_sqr() - 1e-14);
        for (i, v) in w.values().iter().enumerate() {
            let (k, n) = (i / 16, i % 16);
            assert_eq!(*v, w.get(k, n));
            assert!(r.lower <= *v && *v <= r.upper);
        }
    }
}
