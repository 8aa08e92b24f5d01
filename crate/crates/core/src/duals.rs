//! Dual windows of an MD frame.
//!
//! Two Bessel families `Ψ`, `Φ` form a dual pair exactly when
//! `Σ_l Θφ_l · conj(Θψ_l) = 1` almost everywhere. Every dual of a frame `Ψ`
//! has the form
//!
//! ```text
//! Θφ_l = Θψ_l (1 - Σ_l' conj(Θψ_l') X_l') / w + X_l
//! ```
//!
//! for bounded `X_l`; `X = 0` gives the canonical dual `Θψ_l / w`.

use num_complex::Complex64;

use crate::error::{MdError, Result};
use crate::frame::{frame_report, spectral_density, SpectralDensity};
use crate::sum::ComplexSum;
use crate::synthesis::analyze;
use crate::theta::covariance_apply;
use crate::types::{FrameReport, IndexWindow, ThetaGrid, WindowFamily};

fn require_frame(family: &WindowFamily, tol: f64) -> Result<SpectralDensity> {
    let w = spectral_density(family);
    let report = frame_report(&w, tol);
    if !report.frame {
        return Err(MdError::NotAFrame {
            min: report.lower,
            tol,
        });
    }
    Ok(w)
}

/// `Θ S^{-1} ψ_l = Θψ_l / w` for every window.
pub fn canonical_dual(family: &WindowFamily, tol: f64) -> Result<WindowFamily> {
    let w = require_frame(family, tol)?;
    let windows = family
        .windows()
        .iter()
        .map(|psi| divide_by_density(psi, &w))
        .collect();
    WindowFamily::new(windows)
}

fn divide_by_density(grid: &ThetaGrid, w: &SpectralDensity) -> ThetaGrid {
    let mut i = 0;
    grid.map(|z| {
        let out = z / w.values()[i];
        i += 1;
        out
    })
}

/// The dual selected by the bounded free functions `xs` (one grid per
/// window).
pub fn parametrized_dual(
    family: &WindowFamily,
    xs: &[ThetaGrid],
    tol: f64,
) -> Result<WindowFamily> {
    if xs.len() != family.len() {
        return Err(MdError::Dimension(format!(
            "{} free functions for {} windows",
            xs.len(),
            family.len()
        )));
    }
    for x in xs {
        family.window(0).check_same_grid(x)?;
        if let Some(bad) = x
            .values()
            .iter()
            .find(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(MdError::Domain(format!(
                "free function takes non-finite value {bad}"
            )));
        }
    }
    let w = require_frame(family, tol)?;
    let shape = family.shape();
    let psis = family.windows();

    // 1 - Σ_l conj(Θψ_l) X_l
    let defect: Vec<Complex64> = (0..shape.len())
        .map(|i| {
            let mut acc = ComplexSum::new();
            for (psi, x) in psis.iter().zip(xs) {
                acc.add(psi.values()[i].conj() * x.values()[i]);
            }
            Complex64::new(1.0, 0.0) - acc.value()
        })
        .collect();

    let windows = psis
        .iter()
        .zip(xs)
        .map(|(psi, x)| {
            let data = (0..shape.len())
                .map(|i| psi.values()[i] * defect[i] / w.values()[i] + x.values()[i])
                .collect();
            ThetaGrid::from_vec(family.base(), shape, data)
        })
        .collect::<Result<Vec<_>>>()?;
    WindowFamily::new(windows)
}

/// `max_{k,n} |Σ_l Θφ_l · conj(Θψ_l) - 1|`.
pub fn duality_check(psi: &WindowFamily, phi: &WindowFamily) -> Result<f64> {
    psi.check_compatible(phi)?;
    let shape = psi.shape();
    let mut worst = 0.0f64;
    for i in 0..shape.len() {
        let mut acc = ComplexSum::new();
        for (p, f) in psi.windows().iter().zip(phi.windows()) {
            acc.add(f.values()[i] * p.values()[i].conj());
        }
        worst = worst.max((acc.value() - 1.0).norm());
    }
    Ok(worst)
}

/// Duality deviation reported with the Bessel bounds of both families; the
/// deviation certifies duality only when both are Bessel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub deviation: f64,
    pub psi: FrameReport,
    pub phi: FrameReport,
}

impl DualityReport {
    /// Both families Bessel and the deviation below `tol`.
    pub fn is_dual_pair(&self, tol: f64) -> bool {
        self.psi.bessel && self.phi.bessel && self.deviation <= tol
    }
}

pub fn verify_duality(psi: &WindowFamily, phi: &WindowFamily, tol: f64) -> Result<DualityReport> {
    let deviation = duality_check(psi, phi)?;
    Ok(DualityReport {
        deviation,
        psi: frame_report(&spectral_density(psi), tol),
        phi: frame_report(&spectral_density(phi), tol),
    })
}

/// Two duals obtained from different free functions, and their distance.
#[derive(Debug, Clone, PartialEq)]
pub struct NonuniquenessWitness {
    /// The canonical dual (`X = 0`).
    pub canonical: WindowFamily,
    /// The dual for `X_1 ≡ 1`, `X_l ≡ 0` otherwise.
    pub alternative: WindowFamily,
    /// `sqrt(Σ_l ‖φ_l - φ'_l‖²_grid)`.
    pub distance: f64,
}

impl NonuniquenessWitness {
    /// True when the two duals differ by more than `tol`.
    pub fn is_redundant(&self, tol: f64) -> bool {
        self.distance > tol
    }
}

/// Evaluates the dual formula at `X = 0` and at `X = (1, 0, …, 0)`.
///
/// For `L ≥ 2` frames the duals differ; for `L = 1` the formula collapses
/// to `1 / conj(Θψ)` and the distance is at rounding level.
pub fn dual_nonuniqueness_witness(family: &WindowFamily, tol: f64) -> Result<NonuniquenessWitness> {
    let canonical = canonical_dual(family, tol)?;
    let (base, shape) = (family.base(), family.shape());
    let xs: Vec<ThetaGrid> = (0..family.len())
        .map(|l| {
            let v = if l == 0 { 1.0 } else { 0.0 };
            ThetaGrid::constant(base, shape, Complex64::new(v, 0.0))
        })
        .collect();
    let alternative = parametrized_dual(family, &xs, tol)?;
    let distance = canonical.distance(&alternative)?;
    Ok(NonuniquenessWitness {
        canonical,
        alternative,
        distance,
    })
}

/// `max |G - I|` for the Gram matrix
/// `G[(m,j),(m',j')] = ⟨Λ_m D_{a^j} ψ, Λ_{m'} D_{a^{j'}} ψ⟩` over `index_window`.
pub fn orthonormality_check(family: &WindowFamily, index_window: IndexWindow) -> Result<f64> {
    if family.len() != 1 {
        return Err(MdError::Domain(format!(
            "orthonormality check needs a single window, got {}",
            family.len()
        )));
    }
    index_window.check_fits(family.shape())?;
    let psi = family.window(0);
    let mut worst = 0.0f64;
    for (m, j) in index_window.indices() {
        let shifted = covariance_apply(psi, m, j);
        // row (m, j): ⟨shifted, Λ_{m'} D_{a^{j'}} ψ⟩ for all (m', j')
        let row = analyze(&shifted, psi, index_window)?;
        for ((mp, jp), g) in row.iter() {
            let target = if (m, j) == (mp, jp) { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::DEFAULT_TOL;
    use crate::trig::TrigPoly;
    use crate::types::{DilationBase, GridShape};
    use std::f64::consts::TAU;

    fn base() -> DilationBase {
        DilationBase::new(2.0).unwrap()
    }

    fn shape() -> GridShape {
        GridShape::new(8, 16).unwrap()
    }

    fn one() -> ThetaGrid {
        ThetaGrid::constant(base(), shape(), Complex64::new(1.0, 0.0))
    }

    fn fir(taps: &[f64]) -> ThetaGrid {
        TrigPoly::from_real(taps).to_grid(base(), shape())
    }

    fn cos_sin_pair() -> WindowFamily {
        WindowFamily::new(vec![
            ThetaGrid::from_fn(base(), shape(), |_, xi| {
                Complex64::new((TAU * xi).cos(), 0.0)
            }),
            ThetaGrid::from_fn(base(), shape(), |_, xi| {
                Complex64::new((TAU * xi).sin(), 0.0)
            }),
        ])
        .unwrap()
    }

    #[test]
    fn indicator_is_its_own_dual() {
        let family = WindowFamily::single(one());
        let dual = canonical_dual(&family, DEFAULT_TOL).unwrap();
        assert_eq!(dual, family);
        assert_eq!(duality_check(&family, &family).unwrap(), 0.0);
    }

    #[test]
    fn fir_dual_is_reciprocal_conjugate() {
        let family = WindowFamily::single(fir(&[0.75, 0.25]));
        let dual = canonical_dual(&family, DEFAULT_TOL).unwrap();
        let g = dual.window(0);
        for k in 0..8 {
            for n in 0..16 {
                let xi = n as f64 / 16.0;
                let chat = Complex64::new(0.75, 0.0) + Complex64::from_polar(0.25, -TAU * xi);
                assert!((g.get(k, n) - 1.0 / chat.conj()).norm() < 1e-14);
            }
        }
        assert!(duality_check(&family, &dual).unwrap() < 1e-12);
    }

    #[test]
    fn canonical_dual_refuses_non_frame() {
        let family = WindowFamily::single(fir(&[0.5, 0.5]));
        assert!(matches!(
            canonical_dual(&family, DEFAULT_TOL),
            Err(MdError::NotAFrame { .. })
        ));
        assert!(parametrized_dual(&family, &[one()], DEFAULT_TOL).is_err());
        assert!(dual_nonuniqueness_witness(&family, DEFAULT_TOL).is_err());
    }

    #[test]
    fn zero_free_function_gives_canonical_dual() {
        let family = cos_sin_pair();
        let zero = ThetaGrid::zeros(base(), shape());
        let p = parametrized_dual(&family, &[zero.clone(), zero], DEFAULT_TOL).unwrap();
        let c = canonical_dual(&family, DEFAULT_TOL).unwrap();
        assert!(p.distance(&c).unwrap() <= 1e-15);
    }

    #[test]
    fn scaled_dual_deviates_by_one() {
        let family = WindowFamily::single(fir(&[0.75, 0.25]));
        let dual = canonical_dual(&family, DEFAULT_TOL).unwrap();
        let doubled = WindowFamily::single(dual.window(0).map(|z| z * 2.0));
        assert!((duality_check(&family, &doubled).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duality_check_is_symmetric() {
        let family = cos_sin_pair();
        let x = vec![
            ThetaGrid::from_fn(base(), shape(), |x, xi| Complex64::new(x - 1.0, xi)),
            ThetaGrid::constant(base(), shape(), Complex64::new(0.2, -0.5)),
        ];
        let phi = parametrized_dual(&family, &x, DEFAULT_TOL).unwrap();
        let scaled = WindowFamily::new(
            phi.windows()
                .iter()
                .map(|g| g.map(|z| z * Complex64::new(1.1, 0.3)))
                .collect(),
        )
        .unwrap();
        for other in [&phi, &scaled] {
            let a = duality_check(&family, other).unwrap();
            let b = duality_check(other, &family).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn substituting_a_dual_reproduces_it() {
        let family = WindowFamily::new(vec![fir(&[0.75, 0.25]), fir(&[0.0, 0.5])]).unwrap();
        let dual = canonical_dual(&family, DEFAULT_TOL).unwrap();
        let again = parametrized_dual(&family, dual.windows(), DEFAULT_TOL).unwrap();
        assert!(again.distance(&dual).unwrap() < 1e-13);
    }

    #[test]
    fn single_window_dual_ignores_free_function() {
        let family = WindowFamily::single(one());
        let five = ThetaGrid::constant(base(), shape(), Complex64::new(5.0, 0.0));
        let p = parametrized_dual(&family, &[five], DEFAULT_TOL).unwrap();
        assert!(p.distance(&family).unwrap() < 1e-15);
        let witness = dual_nonuniqueness_witness(&family, DEFAULT_TOL).unwrap();
        assert!(witness.distance < 1e-12);
        assert!(!witness.is_redundant(1e-12));
    }

    #[test]
    fn two_window_witness_differs_where_second_window_lives() {
        let family = cos_sin_pair();
        let witness = dual_nonuniqueness_witness(&family, DEFAULT_TOL).unwrap();
        assert!(witness.is_redundant(1e-3));
        // window 1 changes by 1 - |ψ_1|² = sin², window 2 by -ψ_2 ψ_1
        let diff = witness
            .alternative
            .window(0)
            .zip_with(witness.canonical.window(0), |u, v| u - v)
            .unwrap();
        for n in 0..16 {
            let xi = n as f64 / 16.0;
            let expected = (TAU * xi).sin().powi(2);
            assert!((diff.get(0, n).re - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn tight_frame_dual_is_involutive() {
        let family = WindowFamily::new(vec![
            ThetaGrid::from_fn(base(), shape(), |_, xi| {
                Complex64::new((TAU * xi).cos(), 0.0) * 0.5
            }),
            ThetaGrid::from_fn(base(), shape(), |_, xi| {
                Complex64::new((TAU * xi).sin(), 0.0) * 0.5
            }),
        ])
        .unwrap();
        let dual = canonical_dual(&family, DEFAULT_TOL).unwrap();
        let back = canonical_dual(&dual, DEFAULT_TOL).unwrap();
        let rel = back.distance(&family).unwrap()
            / family
                .distance(&WindowFamily::new(vec![ThetaGrid::zeros(base(), shape()); 2]).unwrap())
                .unwrap();
        assert!(rel < 1e-12);
    }

    #[test]
    fn orthonormality_of_indicator_and_unimodular() {
        let w = IndexWindow::new(-2, 2, -2, 2).unwrap();
        let dev = orthonormality_check(&WindowFamily::single(one()), w).unwrap();
        assert!(dev < 1e-12);
        let phase = ThetaGrid::from_fn(base(), shape(), |x, xi| {
            Complex64::from_polar(1.0, x * x + 4.0 * xi)
        });
        let dev = orthonormality_check(&WindowFamily::single(phase), w).unwrap();
        assert!(dev < 1e-12);
        let dev = orthonormality_check(&WindowFamily::single(fir(&[0.75, 0.25])), w).unwrap();
        assert!(dev > 0.1);
    }

    #[test]
    fn orthonormality_needs_single_window() {
        let w = IndexWindow::new(-1, 1, -1, 1).unwrap();
        assert!(matches!(
            orthonormality_check(&cos_sin_pair(), w),
            Err(MdError::Domain(_))
        ));
    }

    #[test]
    fn verify_reports_bessel_bounds() {
        let family = cos_sin_pair();
        let dual = canonical_dual(&family, DEFAULT_TOL).unwrap();
        let r = verify_duality(&family, &dual, DEFAULT_TOL).unwrap();
        assert!(r.is_dual_pair(1e-12));
        assert!(r.psi.bessel && r.phi.bessel);
        assert!((r.psi.upper - 1.0).abs() < 1e-14);
    }
}
