//! Domain types shared by every module: the dilation base, index windows,
//! coefficient tables, Θ-grids and window families, plus the basis
//! evaluators `Λ_m` and `e_{m,j}`.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::dft::unit_root_exact;
use crate::error::{Axis, MdError, Result};
use crate::sum::{ComplexSum, NeumaierSum};

/// The dilation factor `a > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationBase {
    a: f64,
}

impl DilationBase {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 1.0 {
            Ok(Self { a })
        } else {
            Err(MdError::InvalidBase(a))
        }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Length `a - 1` of the fundamental interval `[1, a)`.
    #[inline]
    pub fn span(&self) -> f64 {
        self.a - 1.0
    }

    /// `(a - 1)^{-1/2}`, the modulus of every `Λ_m`.
    #[inline]
    pub fn lambda_scale(&self) -> f64 {
        1.0 / self.span().sqrt()
    }

    /// `a^{p/2}`.
    #[inline]
    pub fn half_power(&self, p: i64) -> f64 {
        self.a.powf(p as f64 / 2.0)
    }

    /// Splits `x > 0` into its band index `J` and representative
    /// `x̃ ∈ [1, a)` with `x = a^J x̃`. Bands are left-closed.
    pub fn reduce(&self, x: f64) -> Result<(i64, f64)> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(MdError::Domain(format!("x must be positive, got {x}")));
        }
        let mut band = (x.ln() / self.a.ln()).floor() as i64;
        let mut rep = x / self.a.powi(band as i32);
        // log rounding can land one band off near the edges
        while rep >= self.a {
            rep /= self.a;
            band += 1;
        }
        while rep < 1.0 {
            rep *= self.a;
            band -= 1;
        }
        Ok((band, rep))
    }

    /// Same as [`reduce`](Self::reduce) but snaps representatives that sit
    /// within a few ulps below `a` onto the next band's left edge.
    fn reduce_snapped(&self, x: f64) -> Result<(i64, f64)> {
        let (band, rep) = self.reduce(x)?;
        if self.a - rep <= 8.0 * f64::EPSILON * self.a {
            Ok((band + 1, 1.0))
        } else {
            Ok((band, rep))
        }
    }
}

/// `Λ_m(x) = (a-1)^{-1/2} exp(2πi m (x̃-1)/(a-1))` with `x̃` the
/// representative of `x` in `[1, a)`.
pub fn lambda_eval(base: DilationBase, m: i64, x: f64) -> Result<Complex64> {
    let (_, rep) = base.reduce_snapped(x)?;
    Ok(lambda_on_fundamental(base, m, rep))
}

pub(crate) fn lambda_on_fundamental(base: DilationBase, m: i64, rep: f64) -> Complex64 {
    let t = (rep - 1.0) / base.span();
    let phase = (m as f64 * t).rem_euclid(1.0);
    Complex64::from_polar(base.lambda_scale(), TAU * phase)
}

/// `e_{m,j}(x, ξ) = Λ_m(x) exp(2πi j ξ)` on `[1, a) × [0, 1)`.
pub fn basis_eval(base: DilationBase, m: i64, j: i64, x: f64, xi: f64) -> Result<Complex64> {
    if !(1.0..base.a()).contains(&x) {
        return Err(MdError::Domain(format!(
            "x = {x} outside [1, {})",
            base.a()
        )));
    }
    if !(0.0..1.0).contains(&xi) {
        return Err(MdError::Domain(format!("xi = {xi} outside [0, 1)")));
    }
    let phase = (j as f64 * xi).rem_euclid(1.0);
    Ok(lambda_on_fundamental(base, m, x) * Complex64::from_polar(1.0, TAU * phase))
}

/// A finite rectangle of modulation indices `m` and scale indices `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexWindow {
    pub m_min: i64,
    pub m_max: i64,
    pub j_min: i64,
    pub j_max: i64,
}

impl IndexWindow {
    pub fn new(m_min: i64, m_max: i64, j_min: i64, j_max: i64) -> Result<Self> {
        if m_min > m_max {
            return Err(MdError::InvalidWindow {
                min: m_min,
                max: m_max,
            });
        }
        if j_min > j_max {
            return Err(MdError::InvalidWindow {
                min: j_min,
                max: j_max,
            });
        }
        Ok(Self {
            m_min,
            m_max,
            j_min,
            j_max,
        })
    }

    /// The single index `(m, j)`.
    pub fn point(m: i64, j: i64) -> Self {
        Self {
            m_min: m,
            m_max: m,
            j_min: j,
            j_max: j,
        }
    }

    /// The widest window a grid of the given size resolves without aliasing,
    /// centred on zero (`-⌊N/2⌋ ..= N - 1 - ⌊N/2⌋` on each axis).
    pub fn capacity(shape: GridShape) -> Self {
        let half_x = (shape.n_x / 2) as i64;
        let half_xi = (shape.n_xi / 2) as i64;
        Self {
            m_min: -half_x,
            m_max: shape.n_x as i64 - 1 - half_x,
            j_min: -half_xi,
            j_max: shape.n_xi as i64 - 1 - half_xi,
        }
    }

    pub fn m_width(&self) -> usize {
        (self.m_max - self.m_min + 1) as usize
    }

    pub fn j_width(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.m_width() * self.j_width()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: i64, j: i64) -> bool {
        (self.m_min..=self.m_max).contains(&m) && (self.j_min..=self.j_max).contains(&j)
    }

    /// Iterates `(m, j)` in storage order (m-major, j-minor).
    pub fn indices(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (j_min, j_max) = (self.j_min, self.j_max);
        (self.m_min..=self.m_max).flat_map(move |m| (j_min..=j_max).map(move |j| (m, j)))
    }

    /// Index set of a product of two expansions over `self` and `other`.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        Self {
            m_min: self.m_min + other.m_min,
            m_max: self.m_max + other.m_max,
            j_min: self.j_min + other.j_min,
            j_max: self.j_max + other.j_max,
        }
    }

    /// Index set of the complex conjugate of an expansion over `self`.
    pub fn reflected(&self) -> Self {
        Self {
            m_min: -self.m_max,
            m_max: -self.m_min,
            j_min: -self.j_max,
            j_max: -self.j_min,
        }
    }

    /// Clips to `other`, returning `None` when the intersection is empty.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        Self::new(
            self.m_min.max(other.m_min),
            self.m_max.min(other.m_max),
            self.j_min.max(other.j_min),
            self.j_max.min(other.j_max),
        )
        .ok()
    }

    /// Errors unless both widths fit the grid.
    pub fn check_fits(&self, shape: GridShape) -> Result<()> {
        if self.m_width() > shape.n_x {
            return Err(MdError::Aliasing {
                axis: Axis::X,
                width: self.m_width(),
                capacity: shape.n_x,
            });
        }
        if self.j_width() > shape.n_xi {
            return Err(MdError::Aliasing {
                axis: Axis::Xi,
                width: self.j_width(),
                capacity: shape.n_xi,
            });
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn offset(&self, m: i64, j: i64) -> usize {
        (m - self.m_min) as usize * self.j_width() + (j - self.j_min) as usize
    }
}

/// Number of nodes per axis of a Θ-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridShape {
    pub n_x: usize,
    pub n_xi: usize,
}

impl GridShape {
    pub fn new(n_x: usize, n_xi: usize) -> Result<Self> {
        if n_x == 0 || n_xi == 0 {
            return Err(MdError::InvalidGrid { n_x, n_xi });
        }
        Ok(Self { n_x, n_xi })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    /// Smallest shape for which a pointwise product of expansions over the
    /// two windows keeps exact Fourier coefficients (`W₁ + W₂ - 1` per axis).
    pub fn for_product(first: &IndexWindow, second: &IndexWindow) -> Self {
        Self {
            n_x: first.m_width() + second.m_width() - 1,
            n_xi: first.j_width() + second.j_width() - 1,
        }
    }

    pub fn len(&self) -> usize {
        self.n_x * self.n_xi
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for GridShape {
    fn default() -> Self {
        Self { n_x: 64, n_xi: 64 }
    }
}

/// Finite coefficient table `c_{m,j}` of `f` with `Θ_a f = Σ c_{m,j} e_{m,j}`.
///
/// Scale index `j` populates the time band `a^{-j}[1, a)`:
/// `f(a^J x) = a^{-J/2} Σ_m c_{m,-J} Λ_m(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefArray {
    base: DilationBase,
    window: IndexWindow,
    c: Vec<Complex64>,
}

impl CoefArray {
    pub fn zeros(base: DilationBase, window: IndexWindow) -> Self {
        Self {
            base,
            window,
            c: vec![Complex64::new(0.0, 0.0); window.len()],
        }
    }

    /// Builds from values in storage order (m-major, j-minor).
    pub fn from_vec(base: DilationBase, window: IndexWindow, c: Vec<Complex64>) -> Result<Self> {
        if c.len() != window.len() {
            return Err(MdError::Dimension(format!(
                "{} coefficients for a window of {} entries",
                c.len(),
                window.len()
            )));
        }
        Ok(Self { base, window, c })
    }

    pub fn from_fn(
        base: DilationBase,
        window: IndexWindow,
        mut f: impl FnMut(i64, i64) -> Complex64,
    ) -> Self {
        let c = window.indices().map(|(m, j)| f(m, j)).collect();
        Self { base, window, c }
    }

    /// A single unit coefficient at `(m, j)`.
    pub fn unit(base: DilationBase, m: i64, j: i64) -> Self {
        Self {
            base,
            window: IndexWindow::point(m, j),
            c: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn base(&self) -> DilationBase {
        self.base
    }

    pub fn window(&self) -> IndexWindow {
        self.window
    }

    pub fn values(&self) -> &[Complex64] {
        &self.c
    }

    /// `c_{m,j}`, zero outside the window.
    pub fn get(&self, m: i64, j: i64) -> Complex64 {
        if self.window.contains(m, j) {
            self.c[self.window.offset(m, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, m: i64, j: i64, value: Complex64) -> Result<()> {
        if !self.window.contains(m, j) {
            return Err(MdError::Domain(format!("index ({m}, {j}) outside window")));
        }
        let off = self.window.offset(m, j);
        self.c[off] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        self.window.indices().zip(self.c.iter().copied())
    }

    /// `Σ |c_{m,j}|²`, which equals `‖f‖²` by orthonormality.
    pub fn norm_sqr(&self) -> f64 {
        self.c
            .iter()
            .map(|z| z.norm_sqr())
            .collect::<NeumaierSum>()
            .value()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Re-indexes onto `window`, zero-filling and dropping as needed.
    pub fn restrict(&self, window: IndexWindow) -> Self {
        Self::from_fn(self.base, window, |m, j| self.get(m, j))
    }

    /// `‖self - other‖₂` over the union of both windows.
    pub fn distance(&self, other: &Self) -> f64 {
        let hull = IndexWindow {
            m_min: self.window.m_min.min(other.window.m_min),
            m_max: self.window.m_max.max(other.window.m_max),
            j_min: self.window.j_min.min(other.window.j_min),
            j_max: self.window.j_max.max(other.window.j_max),
        };
        hull.indices()
            .map(|(m, j)| (self.get(m, j) - other.get(m, j)).norm_sqr())
            .collect::<NeumaierSum>()
            .value()
            .sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            base: self.base,
            window: self.window,
            c: self.c.iter().map(|z| z * factor).collect(),
        }
    }

    /// `α·self + β·other` over the union of both windows.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        let hull = IndexWindow {
            m_min: self.window.m_min.min(other.window.m_min),
            m_max: self.window.m_max.max(other.window.m_max),
            j_min: self.window.j_min.min(other.window.j_min),
            j_max: self.window.j_max.max(other.window.j_max),
        };
        Self::from_fn(self.base, hull, |m, j| {
            alpha * self.get(m, j) + beta * other.get(m, j)
        })
    }
}

/// Samples `F[k][n] = F(x_k, ξ_n)` of a function on `[1, a) × [0, 1)` with
/// `x_k = 1 + k(a-1)/N_x` and `ξ_n = n/N_ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGrid {
    base: DilationBase,
    shape: GridShape,
    data: Vec<Complex64>,
}

impl ThetaGrid {
    pub fn zeros(base: DilationBase, shape: GridShape) -> Self {
        Self {
            base,
            shape,
            data: vec![Complex64::new(0.0, 0.0); shape.len()],
        }
    }

    pub fn constant(base: DilationBase, shape: GridShape, value: Complex64) -> Self {
        Self {
            base,
            shape,
            data: vec![value; shape.len()],
        }
    }

    /// Builds from values in storage order (k-major, n-minor).
    pub fn from_vec(base: DilationBase, shape: GridShape, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(MdError::Dimension(format!(
                "{} samples for a {}x{} grid",
                data.len(),
                shape.n_x,
                shape.n_xi
            )));
        }
        Ok(Self { base, shape, data })
    }

    /// Fills node `(k, n)` with `f(k, n)`.
    pub fn from_index_fn(
        base: DilationBase,
        shape: GridShape,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut data = Vec::with_capacity(shape.len());
        for k in 0..shape.n_x {
            for n in 0..shape.n_xi {
                data.push(f(k, n));
            }
        }
        Self { base, shape, data }
    }

    /// Fills node `(k, n)` with `f(x_k, ξ_n)`.
    pub fn from_fn(
        base: DilationBase,
        shape: GridShape,
        mut f: impl FnMut(f64, f64) -> Complex64,
    ) -> Self {
        let span = base.span();
        Self::from_index_fn(base, shape, |k, n| {
            f(
                1.0 + k as f64 * span / shape.n_x as f64,
                n as f64 / shape.n_xi as f64,
            )
        })
    }

    pub fn base(&self) -> DilationBase {
        self.base
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn n_x(&self) -> usize {
        self.shape.n_x
    }

    pub fn n_xi(&self) -> usize {
        self.shape.n_xi
    }

    /// `x_k = 1 + k(a-1)/N_x`.
    pub fn x(&self, k: usize) -> f64 {
        1.0 + k as f64 * self.base.span() / self.shape.n_x as f64
    }

    /// `ξ_n = n/N_ξ`.
    pub fn xi(&self, n: usize) -> f64 {
        n as f64 / self.shape.n_xi as f64
    }

    #[inline]
    pub fn get(&self, k: usize, n: usize) -> Complex64 {
        self.data[k * self.shape.n_xi + n]
    }

    #[inline]
    pub fn set(&mut self, k: usize, n: usize, value: Complex64) {
        self.data[k * self.shape.n_xi + n] = value;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    /// Row `k` (all `ξ_n` at fixed `x_k`).
    pub fn row(&self, k: usize) -> &[Complex64] {
        let w = self.shape.n_xi;
        &self.data[k * w..(k + 1) * w]
    }

    /// Quadrature weight `(a-1)/(N_x N_ξ)` of a single node.
    pub fn cell_weight(&self) -> f64 {
        self.base.span() / (self.shape.n_x * self.shape.n_xi) as f64
    }

    /// Weighted inner product `⟨self, other⟩_grid`, linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let mut acc = ComplexSum::new();
        for (u, v) in self.data.iter().zip(&other.data) {
            acc.add(u * v.conj());
        }
        Ok(acc.value() * self.cell_weight())
    }

    pub fn norm_sqr(&self) -> f64 {
        let s = self
            .data
            .iter()
            .map(|z| z.norm_sqr())
            .collect::<NeumaierSum>()
            .value();
        s * self.cell_weight()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `max |self - other|` over all nodes.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max))
    }

    /// Grid norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.zip_with(other, |u, v| u - v).map(|d| d.norm())
    }

    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self {
            base: self.base,
            shape: self.shape,
            data: self.data.iter().map(|z| f(*z)).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &Self,
        mut f: impl FnMut(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            base: self.base,
            shape: self.shape,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(u, v)| f(*u, *v))
                .collect(),
        })
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(MdError::Dimension(format!(
                "grid {}x{} vs {}x{}",
                self.shape.n_x, self.shape.n_xi, other.shape.n_x, other.shape.n_xi
            )));
        }
        if self.base != other.base {
            return Err(MdError::Dimension(format!(
                "dilation base {} vs {}",
                self.base.a(),
                other.base.a()
            )));
        }
        Ok(())
    }

    /// `e_{m,j}` sampled on this grid shape; exact roots of unity on both axes.
    pub fn basis(base: DilationBase, shape: GridShape, m: i64, j: i64) -> Self {
        let scale = base.lambda_scale();
        Self::from_index_fn(base, shape, |k, n| {
            unit_root_exact(m * k as i64, shape.n_x)
                * unit_root_exact(j * n as i64, shape.n_xi)
                * scale
        })
    }
}

/// The window set `Ψ = {ψ_1, …, ψ_L}` held as Θ-grids on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowFamily {
    base: DilationBase,
    shape: GridShape,
    windows: Vec<ThetaGrid>,
    coefs: Option<Vec<CoefArray>>,
}

impl WindowFamily {
    pub fn new(windows: Vec<ThetaGrid>) -> Result<Self> {
        let first = windows
            .first()
            .ok_or_else(|| MdError::Dimension("window family needs at least one window".into()))?;
        for w in &windows[1..] {
            first.check_same_grid(w)?;
        }
        Ok(Self {
            base: first.base(),
            shape: first.shape(),
            windows,
            coefs: None,
        })
    }

    pub fn single(window: ThetaGrid) -> Self {
        Self {
            base: window.base(),
            shape: window.shape(),
            windows: vec![window],
            coefs: None,
        }
    }

    /// Attaches the coefficient form of each window.
    pub fn with_coefs(mut self, coefs: Vec<CoefArray>) -> Result<Self> {
        if coefs.len() != self.windows.len() {
            return Err(MdError::Dimension(format!(
                "{} coefficient arrays for {} windows",
                coefs.len(),
                self.windows.len()
            )));
        }
        self.coefs = Some(coefs);
        Ok(self)
    }

    pub fn base(&self) -> DilationBase {
        self.base
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn windows(&self) -> &[ThetaGrid] {
        &self.windows
    }

    pub fn window(&self, l: usize) -> &ThetaGrid {
        &self.windows[l]
    }

    pub fn coefs(&self) -> Option<&[CoefArray]> {
        self.coefs.as_deref()
    }

    pub fn into_windows(self) -> Vec<ThetaGrid> {
        self.windows
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(MdError::Dimension(format!(
                "families of {} and {} windows",
                self.len(),
                other.len()
            )));
        }
        self.windows[0].check_same_grid(&other.windows[0])
    }

    /// `sqrt(Σ_l ‖self_l - other_l‖²_grid)`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let mut acc = NeumaierSum::new();
        for (u, v) in self.windows.iter().zip(&other.windows) {
            acc.add(u.distance(v)?.powi(2));
        }
        Ok(acc.value().sqrt())
    }
}

/// Lower/upper frame-bound estimates and the derived verdicts.
///
/// Completeness is a semi-decision at grid resolution: a zero of the
/// spectral density between nodes is invisible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameReport {
    pub lower: f64,
    pub upper: f64,
    pub complete: bool,
    pub bessel: bool,
    pub frame: bool,
    pub tol: f64,
    /// Nodes sampled to produce the estimate.
    pub nodes: usize,
}
