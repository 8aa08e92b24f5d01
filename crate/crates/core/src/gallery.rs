//! Ready-made window families with closed-form frame properties.
//!
//! * [`example_fir`]: one window with `Θψ(x, ξ) = ĉ(ξ)` for a finite tap
//!   sequence `c`; a step function on finitely many bands.
//! * [`example_poly_pu`]: `L` windows `Θψ_l = m_l(ξ)` with `Σ|m_l|² = 1`.
//! * [`example_support_pu`]: `L` windows supported in `[1, a)` with
//!   `Σ|ψ_l(x)|² = 1`.
//! * [`example_two_window`]: the real-valued pair built from two functions
//!   `c₀`, `c₁` on `[1, a]` with `|Θψ₁|² + |Θψ₂|² = (|c₀| + |c₁|)²`.

use num_complex::Complex64;

use crate::dft::RootTable;
use crate::error::{MdError, Result};
use crate::frame::DEFAULT_TOL;
use crate::sum::{ComplexSum, NeumaierSum};
use crate::theta::{node_x, BandSamples};
use crate::trig::TrigPoly;
use crate::types::{CoefArray, DilationBase, GridShape, IndexWindow, ThetaGrid, WindowFamily};

/// Single-window family from a finite tap sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct FirWindow {
    pub family: WindowFamily,
    /// `(J, ψ(a^J x))` for every band `a^J[1, a)` where `ψ` is nonzero;
    /// `ψ` is constant on each band.
    pub band_values: Vec<(i64, Complex64)>,
}

/// `Θψ(x, ξ) = ĉ(ξ) = Σ_l c_l exp(-2πi l ξ)`.
///
/// Rejects taps whose symbol vanishes at a grid node.
pub fn example_fir(taps: &TrigPoly, base: DilationBase, shape: GridShape) -> Result<FirWindow> {
    let scale: f64 = taps.coeffs.iter().map(|c| c.norm()).sum();
    let floor = 16.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    for n in 0..shape.n_xi {
        if taps.eval_node(n, shape.n_xi).norm() <= floor {
            return Err(MdError::SymbolZero {
                node: n,
                xi: n as f64 / shape.n_xi as f64,
            });
        }
    }
    let grid = taps.to_grid(base, shape);
    let band_values: Vec<(i64, Complex64)> = taps
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() != 0.0)
        .map(|(i, c)| {
            let band = taps.offset + i as i64;
            (band, c * base.half_power(-band))
        })
        .collect();
    let family = match taps.support() {
        Some((lo, hi)) => {
            // c_{0,-l} = (a-1)^{1/2} c_l
            let window = IndexWindow::new(0, 0, -hi, -lo)?;
            let coefs =
                CoefArray::from_fn(base, window, |_, j| taps.coeff(-j) * base.span().sqrt());
            WindowFamily::single(grid).with_coefs(vec![coefs])?
        }
        None => WindowFamily::single(grid),
    };
    Ok(FirWindow {
        family,
        band_values,
    })
}

/// Max over grid nodes of `|Σ_l |g_l|² - 1|`.
fn unit_sum_deviation(grids: &[ThetaGrid]) -> f64 {
    let len = grids[0].values().len();
    (0..len)
        .map(|i| {
            let s = grids
                .iter()
                .map(|g| g.values()[i].norm_sqr())
                .collect::<NeumaierSum>()
                .value();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// `Θψ_l(x, ξ) = m_l(ξ)` for trigonometric polynomials with `Σ|m_l|² = 1`.
pub fn example_poly_pu(
    polys: &[TrigPoly],
    base: DilationBase,
    shape: GridShape,
    tol: f64,
) -> Result<WindowFamily> {
    if polys.is_empty() {
        return Err(MdError::Dimension(
            "at least one polynomial required".into(),
        ));
    }
    let grids: Vec<ThetaGrid> = polys.iter().map(|p| p.to_grid(base, shape)).collect();
    let max_deviation = unit_sum_deviation(&grids);
    if max_deviation > tol {
        return Err(MdError::UnitSumViolation { max_deviation, tol });
    }
    let coefs = polys
        .iter()
        .map(|p| {
            let (lo, hi) = p.support().unwrap_or((0, 0));
            let window = IndexWindow::new(0, 0, -hi, -lo)?;
            Ok(CoefArray::from_fn(base, window, |_, j| {
                p.coeff(-j) * base.span().sqrt()
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    WindowFamily::new(grids)?.with_coefs(coefs)
}

/// Windows supported in `[1, a)` with samples `ψ_l(x_k)` and
/// `Σ_l |ψ_l(x_k)|² = 1`; `Θψ_l(x, ξ) = ψ_l(x)`.
pub fn example_support_pu(
    samples: &[Vec<Complex64>],
    base: DilationBase,
    shape: GridShape,
    tol: f64,
) -> Result<WindowFamily> {
    if samples.is_empty() {
        return Err(MdError::Dimension("at least one window required".into()));
    }
    for s in samples {
        if s.len() != shape.n_x {
            return Err(MdError::Dimension(format!(
                "{} samples on a grid with {} x-nodes",
                s.len(),
                shape.n_x
            )));
        }
    }
    let grids: Vec<ThetaGrid> = samples
        .iter()
        .map(|s| ThetaGrid::from_index_fn(base, shape, |k, _| s[k]))
        .collect();
    let max_deviation = unit_sum_deviation(&grids);
    if max_deviation > tol {
        return Err(MdError::PartitionViolation { max_deviation, tol });
    }
    WindowFamily::new(grids)
}

/// Samples `f(x_k)` on the grid's x-nodes.
pub fn sample_on_nodes(
    base: DilationBase,
    n_x: usize,
    f: impl Fn(f64) -> Complex64,
) -> Vec<Complex64> {
    (0..n_x).map(|k| f(node_x(base, n_x, k))).collect()
}

/// The two-window family built from `c₀`, `c₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoWindow {
    pub family: WindowFamily,
    pub c0: Vec<f64>,
    pub c1: Vec<f64>,
    /// `min_k (|c₀| + |c₁|)`.
    pub lower: f64,
    /// `max_k (|c₀| + |c₁|)`.
    pub upper: f64,
}

/// `Θψ₁ = c₀ + c₁ e^{-4πiξ}` and `Θψ₂ = 2i√(c₀c₁) sin 2πξ` where
/// `c₀c₁ ≥ 0`, `2√(-c₀c₁) cos 2πξ` elsewhere.
pub fn example_two_window(
    c0: &[f64],
    c1: &[f64],
    base: DilationBase,
    shape: GridShape,
) -> Result<TwoWindow> {
    if c0.len() != shape.n_x || c1.len() != shape.n_x {
        return Err(MdError::Dimension(format!(
            "c0/c1 have {}/{} samples, grid has {} x-nodes",
            c0.len(),
            c1.len(),
            shape.n_x
        )));
    }
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    for (k, (u, v)) in c0.iter().zip(c1).enumerate() {
        let s = u.abs() + v.abs();
        if !(s > DEFAULT_TOL) || !s.is_finite() {
            return Err(MdError::LowerBoundFailure { node: k, value: s });
        }
        lower = lower.min(s);
        upper = upper.max(s);
    }
    let roots = RootTable::new(shape.n_xi);
    let psi1 =
        ThetaGrid::from_index_fn(base, shape, |k, n| c0[k] + c1[k] * roots.pow(-2 * n as i64));
    let psi2 = ThetaGrid::from_index_fn(base, shape, |k, n| {
        let p = c0[k] * c1[k];
        let e = roots.pow(n as i64);
        if p >= 0.0 {
            // 2i sin 2πξ = e^{2πiξ} - e^{-2πiξ}
            (e - e.conj()) * p.sqrt()
        } else {
            // 2 cos 2πξ = e^{2πiξ} + e^{-2πiξ}
            (e + e.conj()) * (-p).sqrt()
        }
    });
    Ok(TwoWindow {
        family: WindowFamily::new(vec![psi1, psi2])?,
        c0: c0.to_vec(),
        c1: c1.to_vec(),
        lower,
        upper,
    })
}

/// [`example_two_window`] with `c₀`, `c₁` given as functions on `[1, a]`.
pub fn example_two_window_fn(
    c0: impl Fn(f64) -> f64,
    c1: impl Fn(f64) -> f64,
    base: DilationBase,
    shape: GridShape,
) -> Result<TwoWindow> {
    let xs: Vec<f64> = (0..shape.n_x).map(|k| node_x(base, shape.n_x, k)).collect();
    let s0: Vec<f64> = xs.iter().map(|x| c0(*x)).collect();
    let s1: Vec<f64> = xs.iter().map(|x| c1(*x)).collect();
    example_two_window(&s0, &s1, base, shape)
}

impl TwoWindow {
    /// Time-domain samples of `ψ₁` and `ψ₂` on the grid nodes of every band
    /// they occupy, from the piecewise formulas.
    pub fn band_samples(&self) -> Result<[BandSamples; 2]> {
        let base = self.family.base();
        let n_x = self.c0.len();
        let a = base.a();
        let mut psi1 = BandSamples::new(base, n_x);
        psi1.insert(0, self.c0.iter().map(|v| Complex64::new(*v, 0.0)).collect())?;
        psi1.insert(
            2,
            self.c1.iter().map(|v| Complex64::new(v / a, 0.0)).collect(),
        )?;

        let mut psi2 = BandSamples::new(base, n_x);
        let products: Vec<f64> = self.c0.iter().zip(&self.c1).map(|(u, v)| u * v).collect();
        psi2.insert(
            -1,
            products
                .iter()
                .map(|p| Complex64::new(a.sqrt() * p.abs().sqrt(), 0.0))
                .collect(),
        )?;
        psi2.insert(
            1,
            products
                .iter()
                .map(|p| {
                    let v = p.abs().sqrt() / a.sqrt();
                    Complex64::new(if *p >= 0.0 { -v } else { v }, 0.0)
                })
                .collect(),
        )?;
        Ok([psi1, psi2])
    }
}

/// Closed-form time values `(ψ₁(y), ψ₂(y))` of the two-window pair at any
/// `y > 0`, with bands taken left-closed.
pub fn two_window_time(
    base: DilationBase,
    c0: impl Fn(f64) -> f64,
    c1: impl Fn(f64) -> f64,
    y: f64,
) -> Result<(f64, f64)> {
    let (band, x) = base.reduce(y)?;
    let a = base.a();
    let psi1 = match band {
        0 => c0(x),
        2 => c1(x) / a,
        _ => 0.0,
    };
    let psi2 = match band {
        -1 => a.sqrt() * (c0(x) * c1(x)).abs().sqrt(),
        1 => {
            let p = c0(x) * c1(x);
            let v = p.abs().sqrt() / a.sqrt();
            if p >= 0.0 {
                -v
            } else {
                v
            }
        }
        _ => 0.0,
    };
    Ok((psi1, psi2))
}

/// Coefficients `p_l` of the ξ-series `F(x_k, ξ) = Σ_l p_l e^{-2πilξ}` of row
/// `k`, for `l` in `bands`. For a window constant in `x` these are the band
/// values `a^{l/2} ψ(a^l x)`.
pub fn xi_coefficients(
    grid: &ThetaGrid,
    k: usize,
    bands: std::ops::RangeInclusive<i64>,
) -> Vec<Complex64> {
    let n_xi = grid.n_xi();
    let roots = RootTable::new(n_xi);
    let row = grid.row(k);
    bands
        .map(|l| {
            let mut acc = ComplexSum::new();
            for (n, v) in row.iter().enumerate() {
                acc.add(v * roots.pow(l * n as i64));
            }
            acc.value() / n_xi as f64
        })
        .collect()
}

/// Exponent range (in the `e^{-2πilξ}` convention) of the duals
/// `ψ_l (1 - Σ conj(ψ_l') X_l') + X_l` when windows and free functions are
/// trigonometric polynomials in `ξ` with the given exponent ranges and the
/// spectral density is constant.
pub fn predicted_dual_bands(windows: &[(i64, i64)], free: &[(i64, i64)]) -> (i64, i64) {
    let mut lo = 0i64;
    let mut hi = 0i64;
    // Σ conj(ψ_l') X_l' and the constant 1
    for (w, x) in windows.iter().zip(free) {
        lo = lo.min(x.0 - w.1);
        hi = hi.max(x.1 - w.0);
    }
    let mut out_lo = i64::MAX;
    let mut out_hi = i64::MIN;
    for (w, x) in windows.iter().zip(free) {
        out_lo = out_lo.min(w.0 + lo).min(x.0);
        out_hi = out_hi.max(w.1 + hi).max(x.1);
    }
    (out_lo, out_hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{frame_report, spectral_density};
    use crate::theta::theta_from_time;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn base() -> DilationBase {
        DilationBase::new(2.0).unwrap()
    }

    fn shape() -> GridShape {
        GridShape::new(16, 16).unwrap()
    }

    #[test]
    fn fir_single_tap_is_indicator() {
        let w = example_fir(&TrigPoly::from_real(&[1.0]), base(), shape()).unwrap();
        assert!(w
            .family
            .window(0)
            .values()
            .iter()
            .all(|z| *z == c(1.0, 0.0)));
        assert_eq!(w.band_values, vec![(0, c(1.0, 0.0))]);
    }

    #[test]
    fn fir_band_values_reproduce_grid() {
        let b = DilationBase::new(1.5).unwrap();
        let taps = TrigPoly::new(-1, vec![c(0.2, 0.1), c(0.9, 0.0), c(0.0, -0.3)]);
        let w = example_fir(&taps, b, shape()).unwrap();
        let mut s = BandSamples::new(b, 16);
        for (band, v) in &w.band_values {
            s.insert(*band, vec![*v; 16]).unwrap();
        }
        let g = theta_from_time(&s, 16).unwrap();
        assert!(g.max_abs_diff(w.family.window(0)).unwrap() < 1e-14);
        let from_coefs =
            crate::theta::coef_to_grid(&w.family.coefs().unwrap()[0], shape()).unwrap();
        assert!(from_coefs.max_abs_diff(w.family.window(0)).unwrap() < 1e-14);
    }

    #[test]
    fn fir_bounds_three_quarter() {
        let w = example_fir(&TrigPoly::from_real(&[0.75, 0.25]), base(), shape()).unwrap();
        let r = frame_report(&spectral_density(&w.family), DEFAULT_TOL);
        assert!((r.lower - 0.25).abs() < 1e-15 && (r.upper - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fir_rejects_grid_zero() {
        let err = example_fir(&TrigPoly::from_real(&[0.5, 0.5]), base(), shape()).unwrap_err();
        assert_eq!(err, MdError::SymbolZero { node: 8, xi: 0.5 });
    }

    fn cos_sin() -> Vec<TrigPoly> {
        vec![
            TrigPoly::new(-1, vec![c(0.5, 0.0), c(0.0, 0.0), c(0.5, 0.0)]),
            // sin 2πξ = (e^{2πiξ} - e^{-2πiξ}) / 2i
            TrigPoly::new(-1, vec![c(0.0, -0.5), c(0.0, 0.0), c(0.0, 0.5)]),
        ]
    }

    #[test]
    fn poly_pu_cos_sin_is_tight() {
        let f = example_poly_pu(&cos_sin(), base(), shape(), 1e-12).unwrap();
        for n in 0..16 {
            let xi = n as f64 / 16.0;
            assert!((f.window(0).get(0, n) - c((TAU * xi).cos(), 0.0)).norm() < 1e-15);
            assert!((f.window(1).get(3, n) - c((TAU * xi).sin(), 0.0)).norm() < 1e-15);
        }
        let w = spectral_density(&f);
        assert!(w.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn poly_pu_single_constant_and_violation() {
        assert!(example_poly_pu(&[TrigPoly::from_real(&[1.0])], base(), shape(), 1e-12).is_ok());
        let err = example_poly_pu(
            &[TrigPoly::from_real(&[1.0]), TrigPoly::from_real(&[1.0])],
            base(),
            shape(),
            1e-12,
        )
        .unwrap_err();
        assert!(
            matches!(err, MdError::UnitSumViolation { max_deviation, .. } if (max_deviation - 1.0).abs() < 1e-15)
        );
    }

    #[test]
    fn support_pu_square_roots() {
        let b = DilationBase::new(3.0).unwrap();
        let a = b.a();
        let s1 = sample_on_nodes(b, 16, |x| c(((x - 1.0) / (a - 1.0)).sqrt(), 0.0));
        let s2 = sample_on_nodes(b, 16, |x| c(((a - x) / (a - 1.0)).sqrt(), 0.0));
        let f = example_support_pu(&[s1.clone(), s2], b, shape(), 1e-12).unwrap();
        assert_eq!(f.window(0).get(5, 9), s1[5]);
        assert_eq!(f.window(0).get(5, 0), s1[5]);
        let single = example_support_pu(&[vec![c(1.0, 0.0); 16]], b, shape(), 1e-12).unwrap();
        assert!(single.window(0).values().iter().all(|z| *z == c(1.0, 0.0)));
    }

    #[test]
    fn support_pu_rejects_perturbation() {
        let tol: f64 = 1e-9;
        let mut s = vec![c(1.0, 0.0); 16];
        s[4] = c((1.0 + 2.0 * tol).sqrt(), 0.0);
        assert!(matches!(
            example_support_pu(&[s], base(), shape(), tol),
            Err(MdError::PartitionViolation { .. })
        ));
    }

    #[test]
    fn two_window_tight_pair() {
        let t = example_two_window_fn(|x| 2.0 - x, |x| x - 1.0, base(), shape()).unwrap();
        let w = spectral_density(&t.family);
        assert!(w.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert_eq!((t.lower, t.upper), (1.0, 1.0));
    }

    #[test]
    fn two_window_rejects_vanishing_sum() {
        let mut c0 = vec![1.0; 16];
        let c1 = vec![0.0; 16];
        c0[7] = 0.0;
        assert_eq!(
            example_two_window(&c0, &c1, base(), shape()).unwrap_err(),
            MdError::LowerBoundFailure {
                node: 7,
                value: 0.0
            }
        );
    }

    #[test]
    fn two_window_time_formulas_round_trip() {
        for (a, c0, c1) in [
            (
                2.0,
                (|x: f64| 2.0 - x) as fn(f64) -> f64,
                (|x: f64| x - 1.0) as fn(f64) -> f64,
            ),
            (1.5, |x: f64| 1.0 + x, |x: f64| -0.5 * x * x),
        ] {
            let b = DilationBase::new(a).unwrap();
            let t = example_two_window_fn(c0, c1, b, shape()).unwrap();
            let [s1, s2] = t.band_samples().unwrap();
            let g1 = theta_from_time(&s1, 16).unwrap();
            let g2 = theta_from_time(&s2, 16).unwrap();
            assert!(g1.max_abs_diff(t.family.window(0)).unwrap() < 1e-12);
            assert!(g2.max_abs_diff(t.family.window(1)).unwrap() < 1e-12);
            // closed-form evaluator agrees with the band samples
            for k in 0..16 {
                let x = 1.0 + k as f64 * (a - 1.0) / 16.0;
                let (p1, _) = two_window_time(b, c0, c1, a * a * x).unwrap();
                let (_, p2) = two_window_time(b, c0, c1, x / a).unwrap();
                assert!((p1 - s1.band(2).unwrap()[k].re).abs() < 1e-14);
                assert!((p2 - s2.band(-1).unwrap()[k].re).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn two_window_continuity_at_inner_band_edges() {
        // c0(1)c1(1) = c0(a)c1(a) = 0 with √(c0 c1) smooth up to the ends
        let b = base();
        let a = b.a();
        let c0 = |x: f64| (std::f64::consts::FRAC_PI_2 * (x - 1.0)).cos().powi(2);
        let c1 = |x: f64| (std::f64::consts::FRAC_PI_2 * (x - 1.0)).sin().powi(2);
        for &edge in &[1.0 / a, a, a * a] {
            let mut prev = f64::INFINITY;
            for eps in [1e-4, 1e-6, 1e-9] {
                let (l1, l2) = two_window_time(b, c0, c1, edge * (1.0 - eps)).unwrap();
                let (r1, r2) = two_window_time(b, c0, c1, edge * (1.0 + eps)).unwrap();
                let jump = (l1 - r1).abs().max((l2 - r2).abs());
                assert!(jump <= prev + 1e-15);
                prev = jump;
            }
            assert!(prev < 1e-8, "edge {edge}: jump {prev}");
        }
        // ψ₁ jumps by c₀(1) at 1 and by c₁(a)/a at a³; |c₀| + |c₁| > 0 at both
        // ends forces one of these whenever the other vanishes
        let jump_at = |y: f64| {
            let (l, _) = two_window_time(b, c0, c1, y * (1.0 - 1e-12)).unwrap();
            let (r, _) = two_window_time(b, c0, c1, y).unwrap();
            (r - l).abs()
        };
        assert!((jump_at(1.0) - 1.0).abs() < 1e-9);
        assert!((jump_at(a * a * a) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn two_window_smooth_inside_bands() {
        // central differences converge at second order inside (a^{-1}, 1)
        let b = base();
        let c0 = |x: f64| (std::f64::consts::PI * (x - 1.0) / 2.0).cos().powi(2);
        let c1 = |x: f64| (std::f64::consts::PI * (x - 1.0) / 2.0).sin().powi(2);
        let y = 0.7;
        let deriv = |h: f64| {
            let (_, p) = two_window_time(b, c0, c1, y + h).unwrap();
            let (_, m) = two_window_time(b, c0, c1, y - h).unwrap();
            (p - m) / (2.0 * h)
        };
        let exact = {
            // ψ₂(y) = √2 · sin(π(2y-1)/2) cos(π(2y-1)/2) = (√2/2) sin(π(2y-1))
            2f64.sqrt() / 2.0
                * std::f64::consts::PI
                * 2.0
                * (std::f64::consts::PI * (2.0 * y - 1.0)).cos()
        };
        let e1 = (deriv(1e-2) - exact).abs();
        let e2 = (deriv(5e-3) - exact).abs();
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn two_window_time_values_are_real() {
        let t = example_two_window_fn(|x| 2.0 - x, |x| x - 1.0, base(), shape()).unwrap();
        for s in t.band_samples().unwrap() {
            for (_, row) in s.bands() {
                assert!(row.iter().all(|z| z.im == 0.0));
            }
        }
    }

    #[test]
    fn xi_coefficients_of_fir() {
        let w = example_fir(&TrigPoly::from_real(&[0.75, 0.25]), base(), shape()).unwrap();
        let p = xi_coefficients(w.family.window(0), 3, -1..=2);
        let expected = [0.0, 0.75, 0.25, 0.0];
        for (z, e) in p.iter().zip(expected) {
            assert!((z - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn predicted_bands_of_cos_sin_dual() {
        // windows on exponents [-1, 1], X_1 on [0, 2], X_2 = 0 on [0, 0]
        let (lo, hi) = predicted_dual_bands(&[(-1, 1), (-1, 1)], &[(0, 2), (0, 0)]);
        assert_eq!((lo, hi), (-2, 4));
    }
}
