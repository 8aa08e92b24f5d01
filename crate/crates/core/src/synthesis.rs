//! Analysis and synthesis operators of an MD system, and reconstruction
//! with a dual family.
//!
//! The analysis coefficients `⟨f, Λ_m D_{a^j} ψ⟩` are the Fourier
//! coefficients of `Θ_a f · conj(Θ_a ψ)` against `e_{m,j}`. Over the full
//! grid capacity they are exact in the discrete model; matching the
//! continuous coefficients additionally needs a grid of at least
//! [`GridShape::for_product`] nodes per axis.

use num_complex::Complex64;

use crate::error::{MdError, Result};
use crate::sum::{ComplexSum, NeumaierSum};
use crate::theta::{coef_to_grid, grid_to_coef};
use crate::types::{CoefArray, GridShape, IndexWindow, ThetaGrid, WindowFamily};

/// Analysis coefficients together with the energy they leave out.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub coefs: CoefArray,
    /// `‖Θf · conj Θψ‖²_grid - Σ |d_{m,j}|²`, the energy outside the
    /// requested window.
    pub tail_mass: f64,
}

/// `d_{m,j} = ⟨f, Λ_m D_{a^j} ψ⟩` over `out_window`.
pub fn analyze(
    signal: &ThetaGrid,
    window: &ThetaGrid,
    out_window: IndexWindow,
) -> Result<CoefArray> {
    let product = signal.zip_with(window, |f, psi| f * psi.conj())?;
    grid_to_coef(&product, out_window)
}

/// [`analyze`] plus the energy that falls outside `out_window`.
pub fn analyze_with_tail(
    signal: &ThetaGrid,
    window: &ThetaGrid,
    out_window: IndexWindow,
) -> Result<Analysis> {
    let product = signal.zip_with(window, |f, psi| f * psi.conj())?;
    let coefs = grid_to_coef(&product, out_window)?;
    let tail_mass = (product.norm_sqr() - coefs.norm_sqr()).max(0.0);
    Ok(Analysis { coefs, tail_mass })
}

/// Analysis against every window of `family`.
pub fn analyze_family(
    signal: &ThetaGrid,
    family: &WindowFamily,
    out_window: IndexWindow,
) -> Result<Vec<CoefArray>> {
    family
        .windows()
        .iter()
        .map(|psi| analyze(signal, psi, out_window))
        .collect()
}

/// Output window for analysing a signal supported on `signal` against a
/// window supported on `window`: their Minkowski sum (with the window
/// reflected by conjugation), clipped to the grid capacity on any axis where
/// it does not fit.
pub fn default_output_window(
    signal: &IndexWindow,
    window: &IndexWindow,
    shape: GridShape,
) -> IndexWindow {
    let sum = signal.minkowski_sum(&window.reflected());
    let cap = IndexWindow::capacity(shape);
    let (m_min, m_max) = if sum.m_width() <= shape.n_x {
        (sum.m_min, sum.m_max)
    } else {
        (cap.m_min, cap.m_max)
    };
    let (j_min, j_max) = if sum.j_width() <= shape.n_xi {
        (sum.j_min, sum.j_max)
    } else {
        (cap.j_min, cap.j_max)
    };
    IndexWindow {
        m_min,
        m_max,
        j_min,
        j_max,
    }
}

/// `Σ_l (Σ_{m,j} d^{(l)}_{m,j} e_{m,j}) · Θ_a ψ_l`, the Θ-image of
/// `Σ_{l,m,j} d^{(l)}_{m,j} Λ_m D_{a^j} ψ_l`.
pub fn synthesize(coeffs: &[CoefArray], family: &WindowFamily) -> Result<ThetaGrid> {
    if coeffs.len() != family.len() {
        return Err(MdError::Dimension(format!(
            "{} coefficient arrays for {} windows",
            coeffs.len(),
            family.len()
        )));
    }
    let shape = family.shape();
    let series = coeffs
        .iter()
        .map(|d| coef_to_grid(d, shape))
        .collect::<Result<Vec<_>>>()?;
    let mut out = ThetaGrid::zeros(family.base(), shape);
    for k in 0..shape.n_x {
        for n in 0..shape.n_xi {
            let mut acc = ComplexSum::new();
            for (d, psi) in series.iter().zip(family.windows()) {
                acc.add(d.get(k, n) * psi.get(k, n));
            }
            out.set(k, n, acc.value());
        }
    }
    Ok(out)
}

/// Output of [`reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Reconstructed coefficients on the input window.
    pub coefs: CoefArray,
    /// `‖f̃ - f‖ / ‖f‖`.
    pub rel_error: f64,
    /// Relative energy of the reconstruction falling outside the input
    /// window.
    pub residue: f64,
    /// `Σ_{l,m,j} |⟨f, Λ_m D_{a^j} φ_l⟩|²`.
    pub analysis_energy: f64,
}

/// Analyses `f` against `phi`, synthesises against `psi`, and compares the
/// result with `f`.
pub fn reconstruct(
    f: &CoefArray,
    psi: &WindowFamily,
    phi: &WindowFamily,
) -> Result<Reconstruction> {
    psi.check_compatible(phi)?;
    if f.base() != psi.base() {
        return Err(MdError::Dimension(format!(
            "signal base {} vs window base {}",
            f.base().a(),
            psi.base().a()
        )));
    }
    let shape = psi.shape();
    let grid = coef_to_grid(f, shape)?;
    let full = IndexWindow::capacity(shape);
    let coeffs = analyze_family(&grid, phi, full)?;
    let analysis_energy = coeffs
        .iter()
        .map(CoefArray::norm_sqr)
        .collect::<NeumaierSum>()
        .value();
    let out = synthesize(&coeffs, psi)?;
    let coefs = grid_to_coef(&out, f.window())?;
    let norm = f.norm();
    let denom = if norm > 0.0 { norm } else { 1.0 };
    let rel_error = coefs.distance(f) / denom;
    let residue = (out.norm_sqr() - coefs.norm_sqr()).max(0.0).sqrt() / denom;
    Ok(Reconstruction {
        coefs,
        rel_error,
        residue,
        analysis_energy,
    })
}

/// `Σ_l ‖d^{(l)}‖²` for a list of coefficient arrays.
pub fn coefficient_energy(coeffs: &[CoefArray]) -> f64 {
    coeffs
        .iter()
        .map(CoefArray::norm_sqr)
        .collect::<NeumaierSum>()
        .value()
}

/// `α·d + β·d'` applied window by window.
pub fn combine_coefficients(
    first: &[CoefArray],
    alpha: Complex64,
    second: &[CoefArray],
    beta: Complex64,
) -> Vec<CoefArray> {
    first
        .iter()
        .zip(second)
        .map(|(u, v)| u.combine(alpha, v, beta))
        .collect()
}
