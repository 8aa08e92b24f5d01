//! On-disk formats: `mdframe/1` window files and `mdframe-report/1` reports.

use std::path::Path;

use mdframe_core::{
    coef_to_grid, grid_to_coef, CoefArray, Complex64, DilationBase, FrameReport, GridShape,
    IndexWindow, ThetaGrid, WindowFamily,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const WINDOW_SCHEMA: &str = "mdframe/1";
pub const REPORT_SCHEMA: &str = "mdframe-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_x: usize,
    pub n_xi: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub m_min: i64,
    pub m_max: i64,
    pub j_min: i64,
    pub j_max: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    ThetaGrid,
    CoefArray,
}

/// One stored function. `payload` is `n_x` rows of `n_xi` pairs for a
/// Θ-grid, or `m_width` rows of `j_width` pairs for a coefficient array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowEntry {
    pub label: String,
    pub data_kind: DataKind,
    pub payload: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_window: Option<WindowSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowFileV1 {
    pub schema_version: String,
    pub a: f64,
    pub grid: GridSpec,
    pub windows: Vec<WindowEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFileV1 {
    pub schema_version: String,
    pub lower: f64,
    pub upper: f64,
    pub complete: bool,
    pub frame: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction_error: Option<f64>,
    pub tol: f64,
}

impl ReportFileV1 {
    pub fn from_frame_report(r: &FrameReport) -> Self {
        Self {
            schema_version: REPORT_SCHEMA.to_string(),
            lower: r.lower,
            upper: r.upper,
            complete: r.complete,
            frame: r.frame,
            duality_deviation: None,
            reconstruction_error: None,
            tol: r.tol,
        }
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn check_pair(p: &[f64; 2]) -> Result<Complex64, CliError> {
    if !(p[0].is_finite() && p[1].is_finite()) {
        return Err(CliError::Data(format!("non-finite payload value {p:?}")));
    }
    Ok(Complex64::new(p[0], p[1]))
}

impl WindowEntry {
    pub fn from_grid(label: impl Into<String>, grid: &ThetaGrid) -> Self {
        let payload = (0..grid.n_x())
            .map(|k| grid.row(k).iter().map(|z| pair(*z)).collect())
            .collect();
        Self {
            label: label.into(),
            data_kind: DataKind::ThetaGrid,
            payload,
            index_window: None,
        }
    }

    pub fn from_coefs(label: impl Into<String>, c: &CoefArray) -> Self {
        let w = c.window();
        let payload = (w.m_min..=w.m_max)
            .map(|m| (w.j_min..=w.j_max).map(|j| pair(c.get(m, j))).collect())
            .collect();
        Self {
            label: label.into(),
            data_kind: DataKind::CoefArray,
            payload,
            index_window: Some(WindowSpec {
                m_min: w.m_min,
                m_max: w.m_max,
                j_min: w.j_min,
                j_max: w.j_max,
            }),
        }
    }

    fn rows_of(&self, rows: usize, cols: usize) -> Result<Vec<Complex64>, CliError> {
        if self.payload.len() != rows || self.payload.iter().any(|r| r.len() != cols) {
            return Err(CliError::Data(format!(
                "window {:?}: payload is not {rows}x{cols}",
                self.label
            )));
        }
        self.payload.iter().flatten().map(check_pair).collect()
    }

    /// The stored coefficient array; a Θ-grid entry is converted over the
    /// full grid capacity, which is exact.
    pub fn to_coefs(&self, base: DilationBase, shape: GridShape) -> Result<CoefArray, CliError> {
        match self.data_kind {
            DataKind::ThetaGrid => {
                let grid = self.to_grid(base, shape)?;
                Ok(grid_to_coef(&grid, IndexWindow::capacity(shape))?)
            }
            DataKind::CoefArray => {
                let spec = self.index_window.ok_or_else(|| {
                    CliError::Data(format!(
                        "window {:?}: coef_array without index_window",
                        self.label
                    ))
                })?;
                let w = IndexWindow::new(spec.m_min, spec.m_max, spec.j_min, spec.j_max)
                    .map_err(|e| CliError::Data(e.to_string()))?;
                let c = self.rows_of(w.m_width(), w.j_width())?;
                CoefArray::from_vec(base, w, c).map_err(|e| CliError::Data(e.to_string()))
            }
        }
    }

    pub fn to_grid(&self, base: DilationBase, shape: GridShape) -> Result<ThetaGrid, CliError> {
        match self.data_kind {
            DataKind::ThetaGrid => {
                if self.index_window.is_some() {
                    return Err(CliError::Data(format!(
                        "window {:?}: theta_grid must not carry index_window",
                        self.label
                    )));
                }
                let data = self.rows_of(shape.n_x, shape.n_xi)?;
                ThetaGrid::from_vec(base, shape, data).map_err(|e| CliError::Data(e.to_string()))
            }
            DataKind::CoefArray => {
                let c = self.to_coefs(base, shape)?;
                coef_to_grid(&c, shape).map_err(|e| CliError::Data(e.to_string()))
            }
        }
    }
}

impl WindowFileV1 {
    pub fn new(base: DilationBase, shape: GridShape, windows: Vec<WindowEntry>) -> Self {
        Self {
            schema_version: WINDOW_SCHEMA.to_string(),
            a: base.a(),
            grid: GridSpec {
                n_x: shape.n_x,
                n_xi: shape.n_xi,
            },
            windows,
        }
    }

    /// Stores every window of `family` as a Θ-grid labelled `prefix1`, `prefix2`, ...
    pub fn from_family(family: &WindowFamily, prefix: &str) -> Self {
        let entries = family
            .windows()
            .iter()
            .enumerate()
            .map(|(l, g)| WindowEntry::from_grid(format!("{prefix}{}", l + 1), g))
            .collect();
        Self::new(family.base(), family.shape(), entries)
    }

    pub fn base(&self) -> Result<DilationBase, CliError> {
        DilationBase::new(self.a).map_err(|e| CliError::Data(e.to_string()))
    }

    pub fn shape(&self) -> Result<GridShape, CliError> {
        GridShape::new(self.grid.n_x, self.grid.n_xi).map_err(|e| CliError::Data(e.to_string()))
    }

    /// Checks the schema tag, base, grid and every payload's dimensions.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != WINDOW_SCHEMA {
            return Err(CliError::Data(format!(
                "schema_version {:?}, expected {WINDOW_SCHEMA:?}",
                self.schema_version
            )));
        }
        let base = self.base()?;
        let shape = self.shape()?;
        if self.windows.is_empty() {
            return Err(CliError::Data("file holds no windows".into()));
        }
        for w in &self.windows {
            w.to_grid(base, shape)?;
        }
        Ok(())
    }

    pub fn family(&self) -> Result<WindowFamily, CliError> {
        self.validate()?;
        let (base, shape) = (self.base()?, self.shape()?);
        let grids = self
            .windows
            .iter()
            .map(|w| w.to_grid(base, shape))
            .collect::<Result<Vec<_>, _>>()?;
        WindowFamily::new(grids).map_err(|e| CliError::Data(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        let file: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("window file serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        write(path, &self.to_json())
    }
}

impl ReportFileV1 {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        let r: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        if r.schema_version != REPORT_SCHEMA {
            return Err(CliError::Data(format!(
                "schema_version {:?}, expected {REPORT_SCHEMA:?}",
                r.schema_version
            )));
        }
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        write(path, &self.to_json())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> DilationBase {
        DilationBase::new(2.0).unwrap()
    }

    #[test]
    fn grid_round_trip_is_bit_exact() {
        let shape = GridShape::new(4, 6).unwrap();
        let g = ThetaGrid::from_fn(base(), shape, |x, xi| {
            Complex64::new((x * 7.1).sin() / 3.0, xi.exp() * 1e-17)
        });
        let file = WindowFileV1::new(base(), shape, vec![WindowEntry::from_grid("psi1", &g)]);
        let json = file.to_json();
        let back: WindowFileV1 = serde_json::from_str(&json).unwrap();
        assert_eq!(back.family().unwrap().window(0), &g);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn coef_entry_round_trip() {
        let w = IndexWindow::new(-1, 2, 0, 1).unwrap();
        let c = CoefArray::from_fn(base(), w, |m, j| Complex64::new(m as f64 / 3.0, j as f64));
        let shape = GridShape::square(8).unwrap();
        let e = WindowEntry::from_coefs("f", &c);
        assert_eq!(e.to_coefs(base(), shape).unwrap(), c);
        assert_eq!(e.payload.len(), 4);
    }

    #[test]
    fn rejects_bad_files() {
        let shape = GridShape::new(2, 2).unwrap();
        let g = ThetaGrid::zeros(base(), shape);
        let mut file = WindowFileV1::new(base(), shape, vec![WindowEntry::from_grid("w", &g)]);
        file.schema_version = "mdframe/2".into();
        assert!(matches!(file.validate(), Err(CliError::Data(_))));
        file.schema_version = WINDOW_SCHEMA.into();
        file.a = 1.0;
        assert!(matches!(file.validate(), Err(CliError::Data(_))));
        file.a = 2.0;
        file.windows[0].payload.pop();
        assert!(matches!(file.validate(), Err(CliError::Data(_))));
        assert!(serde_json::from_str::<WindowFileV1>(r#"{"schema_version":"mdframe/1"}"#).is_err());
    }

    #[test]
    fn optional_report_fields_are_omitted() {
        let r = ReportFileV1 {
            schema_version: REPORT_SCHEMA.into(),
            lower: 0.25,
            upper: 1.0,
            complete: true,
            frame: true,
            duality_deviation: None,
            reconstruction_error: Some(1e-16),
            tol: 1e-10,
        };
        let json = r.to_json();
        assert!(!json.contains("duality_deviation"));
        assert_eq!(serde_json::from_str::<ReportFileV1>(&json).unwrap(), r);
    }
}
