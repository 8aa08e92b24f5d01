//! The Θ_a transform and conversions between the three signal forms:
//! coefficient tables, Θ-grids, and per-band time samples.
//!
//! With `x_k = 1 + k(a-1)/N_x` every `Λ_m` samples to a pure DFT mode, so
//! `coef_to_grid` and `grid_to_coef` are exact discrete Fourier pairs as long
//! as the index window fits the grid.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::dft::{mode_sum, RootTable};
use crate::error::{Axis, MdError, Result};
use crate::sum::ComplexSum;
use crate::types::{
    lambda_on_fundamental, CoefArray, DilationBase, GridShape, IndexWindow, ThetaGrid,
};

/// Time-domain samples `f(a^J x_k)` of a finitely supported signal, one
/// row of `N_x` values per occupied band `J`. Missing bands are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSamples {
    base: DilationBase,
    n_x: usize,
    bands: BTreeMap<i64, Vec<Complex64>>,
}

impl BandSamples {
    pub fn new(base: DilationBase, n_x: usize) -> Self {
        Self {
            base,
            n_x,
            bands: BTreeMap::new(),
        }
    }

    /// Inserts the samples of band `J`, replacing any previous row.
    pub fn insert(&mut self, band: i64, values: Vec<Complex64>) -> Result<()> {
        if values.len() != self.n_x {
            return Err(MdError::Dimension(format!(
                "band {band} has {} samples, expected {}",
                values.len(),
                self.n_x
            )));
        }
        self.bands.insert(band, values);
        Ok(())
    }

    /// Samples a time-domain function `f(y)` at `y = a^J x_k` for every band
    /// in `bands`.
    pub fn from_time_fn(
        base: DilationBase,
        n_x: usize,
        bands: std::ops::RangeInclusive<i64>,
        f: impl Fn(f64) -> Complex64,
    ) -> Self {
        let mut out = Self::new(base, n_x);
        for band in bands {
            let scale = base.a().powi(band as i32);
            let row = (0..n_x).map(|k| f(scale * node_x(base, n_x, k))).collect();
            out.bands.insert(band, row);
        }
        out
    }

    pub fn base(&self) -> DilationBase {
        self.base
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn band(&self, band: i64) -> Option<&[Complex64]> {
        self.bands.get(&band).map(Vec::as_slice)
    }

    pub fn bands(&self) -> impl Iterator<Item = (i64, &[Complex64])> + '_ {
        self.bands.iter().map(|(b, v)| (*b, v.as_slice()))
    }

    /// Inclusive band range holding every stored row.
    pub fn band_range(&self) -> Option<(i64, i64)> {
        let lo = *self.bands.keys().next()?;
        let hi = *self.bands.keys().next_back()?;
        Some((lo, hi))
    }
}

#[inline]
pub(crate) fn node_x(base: DilationBase, n_x: usize, k: usize) -> f64 {
    1.0 + k as f64 * base.span() / n_x as f64
}

/// `Θ_a f(x_k, ξ_n) = Σ_l a^{l/2} f(a^l x_k) exp(-2πi l n / N_ξ)`.
///
/// Refuses band ranges wider than `N_ξ`, which would fold distinct bands onto
/// the same frequency.
pub fn theta_from_time(samples: &BandSamples, n_xi: usize) -> Result<ThetaGrid> {
    let base = samples.base();
    let shape = GridShape::new(samples.n_x(), n_xi)?;
    let Some((lo, hi)) = samples.band_range() else {
        return Ok(ThetaGrid::zeros(base, shape));
    };
    let width = (hi - lo + 1) as usize;
    if width > n_xi {
        return Err(MdError::Aliasing {
            axis: Axis::Xi,
            width,
            capacity: n_xi,
        });
    }
    let roots = RootTable::new(n_xi);
    let weighted: Vec<(i64, f64, &[Complex64])> = samples
        .bands()
        .map(|(l, row)| (l, base.half_power(l), row))
        .collect();
    Ok(ThetaGrid::from_index_fn(base, shape, |k, n| {
        let mut acc = ComplexSum::new();
        for (l, w, row) in &weighted {
            acc.add(row[k] * *w * roots.pow(-l * n as i64));
        }
        acc.value()
    }))
}

/// `F[k][n] = Σ_{m,j} c_{m,j} Λ_m(x_k) exp(2πi j n / N_ξ)`.
pub fn coef_to_grid(c: &CoefArray, shape: GridShape) -> Result<ThetaGrid> {
    let window = c.window();
    window.check_fits(shape)?;
    let base = c.base();
    let roots_x = RootTable::new(shape.n_x);
    let roots_xi = RootTable::new(shape.n_xi);

    // partial[j][k] = Σ_m c_{m,j} ω_x^{mk}
    let mut partial = Vec::with_capacity(window.j_width());
    for j in window.j_min..=window.j_max {
        let column: Vec<Complex64> = (window.m_min..=window.m_max).map(|m| c.get(m, j)).collect();
        let row = (0..shape.n_x as i64)
            .map(|k| {
                let mut acc = ComplexSum::new();
                for (i, z) in column.iter().enumerate() {
                    acc.add(z * roots_x.pow((window.m_min + i as i64) * k));
                }
                acc.value()
            })
            .collect::<Vec<_>>();
        partial.push(row);
    }

    let scale = base.lambda_scale();
    Ok(ThetaGrid::from_index_fn(base, shape, |k, n| {
        let mut acc = ComplexSum::new();
        for (i, row) in partial.iter().enumerate() {
            acc.add(row[k] * roots_xi.pow((window.j_min + i as i64) * n as i64));
        }
        acc.value() * scale
    }))
}

/// `c_{m,j} = ⟨F, e_{m,j}⟩_grid` for every index of `window`.
///
/// Exact inverse of [`coef_to_grid`] on grids built from the same window;
/// otherwise the orthogonal projection onto the window's span.
pub fn grid_to_coef(grid: &ThetaGrid, window: IndexWindow) -> Result<CoefArray> {
    let shape = grid.shape();
    window.check_fits(shape)?;
    let base = grid.base();
    let roots_x = RootTable::new(shape.n_x);
    let roots_xi = RootTable::new(shape.n_xi);

    // per_row[k][j] = Σ_n F[k][n] ω_ξ^{-jn}
    let per_row: Vec<Vec<Complex64>> = (0..shape.n_x)
        .map(|k| {
            let row = grid.row(k);
            (window.j_min..=window.j_max)
                .map(|j| mode_sum(row, &roots_xi, j, -1))
                .collect()
        })
        .collect();

    let scale = base.span().sqrt() / shape.len() as f64;
    Ok(CoefArray::from_fn(base, window, |m, j| {
        let col = (j - window.j_min) as usize;
        let mut acc = ComplexSum::new();
        for (k, row) in per_row.iter().enumerate() {
            acc.add(row[col] * roots_x.pow(-m * k as i64));
        }
        acc.value() * scale
    }))
}

/// Values `f(a^J x)` for each `x ∈ [1, a)` in `xs`, read off coefficient
/// column `-J`.
pub fn time_samples(c: &CoefArray, band: i64, xs: &[f64]) -> Result<Vec<Complex64>> {
    let base = c.base();
    if let Some(bad) = xs.iter().find(|x| !(1.0..base.a()).contains(*x)) {
        return Err(MdError::Domain(format!(
            "x = {bad} outside [1, {})",
            base.a()
        )));
    }
    let window = c.window();
    let j = -band;
    if !(window.j_min..=window.j_max).contains(&j) {
        return Ok(vec![Complex64::new(0.0, 0.0); xs.len()]);
    }
    let scale = base.half_power(-band);
    Ok(xs
        .iter()
        .map(|&x| {
            let mut acc = ComplexSum::new();
            for m in window.m_min..=window.m_max {
                let cm = c.get(m, j);
                if cm != Complex64::new(0.0, 0.0) {
                    acc.add(cm * lambda_on_fundamental(base, m, x));
                }
            }
            acc.value() * scale
        })
        .collect())
}

/// Band samples of `c` on the grid nodes `x_k`, one row per occupied scale.
pub fn coef_to_time(c: &CoefArray, n_x: usize) -> Result<BandSamples> {
    let base = c.base();
    let xs: Vec<f64> = (0..n_x).map(|k| node_x(base, n_x, k)).collect();
    let mut out = BandSamples::new(base, n_x);
    let w = c.window();
    for j in w.j_min..=w.j_max {
        out.insert(-j, time_samples(c, -j, &xs)?)?;
    }
    Ok(out)
}

/// `Θ_a f(a^j x_k, ξ_n + m) = exp(2πi j ξ_n) a^{-j/2} F[k][n]`.
pub fn quasi_extend(grid: &ThetaGrid, j: i64, m: i64, k: usize, n: usize) -> Complex64 {
    // ξ-periodicity: the integer shift m drops out
    let _ = m;
    let phase = crate::dft::unit_root_exact(j * n as i64, grid.n_xi());
    phase * grid.base().half_power(-j) * grid.get(k, n)
}

/// Θ-grid of `Λ_m D_{a^j} f`, i.e. `e_{m,j} · F` pointwise.
pub fn covariance_apply(grid: &ThetaGrid, m: i64, j: i64) -> ThetaGrid {
    let e = ThetaGrid::basis(grid.base(), grid.shape(), m, j);
    grid.zip_with(&e, |u, v| u * v)
        .expect("basis grid shares the shape of its source")
}
