//! Subcommand definitions and their implementations.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdframe_core::gallery::{
    example_fir, example_poly_pu, example_support_pu, example_two_window, sample_on_nodes,
};
use mdframe_core::{
    analyze_family, canonical_dual, coef_to_grid, coef_to_time, duality_check, frame_report,
    parametrized_dual, reconstruct, spectral_density, verify_duality, CoefArray, Complex64,
    DilationBase, GridShape, IndexWindow, ThetaGrid, TrigPoly, WindowFamily, DEFAULT_TOL,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::CliError;
use crate::expr::{parse_complex, Expr};
use crate::files::{write, ReportFileV1, WindowFileV1};

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "MDFRAME_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "mdframe",
    version,
    about = "Dilation-and-modulation frames on L2(R+)"
)]
pub struct Cli {
    /// Positivity / acceptance tolerance (default: $MDFRAME_TOL or 1e-10)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a gallery window family and write it as a window file
    Make(MakeArgs),
    /// Frame bounds of a window file
    Report(ReportArgs),
    /// Canonical or parametrized dual of a window file
    Dual(DualArgs),
    /// Analyse a signal with the duals and synthesise with the windows
    Reconstruct(ReconstructArgs),
    /// Check that two window files form a dual pair
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Fir,
    PolyPu,
    SupportPu,
    TwoWindow,
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long, default_value_t = 64)]
    pub nx: usize,
    #[arg(long, default_value_t = 64)]
    pub nxi: usize,
    /// fir: comma-separated coefficients c_l of sum c_l e^{-2 pi i l xi}
    #[arg(long, allow_hyphen_values = true)]
    pub taps: Option<String>,
    /// fir: index of the first tap
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub offset: i64,
    /// poly-pu: polynomials separated by ';', each "[offset:]c0,c1,..."
    #[arg(long, allow_hyphen_values = true)]
    pub polys: Option<String>,
    /// support-pu: expressions in x and a separated by ';'
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
    /// support-pu: CSV with a header row and one column per window
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// two-window: real expression in x
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Option<String>,
    /// two-window: real expression in x
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub windows: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DualArgs {
    #[arg(long)]
    pub windows: PathBuf,
    /// Free functions, e.g. "l=1: 0.3*exp(-2pi i xi); l=2: x-1"
    #[arg(long = "X", allow_hyphen_values = true)]
    pub x_spec: Option<String>,
    /// Output path for the dual window file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional report with the duality deviation
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub windows: PathBuf,
    #[arg(long)]
    pub duals: PathBuf,
    /// Window file whose first entry is the signal
    #[arg(long, conflicts_with = "random")]
    pub signal: Option<PathBuf>,
    /// Seed for a random complex Gaussian signal
    #[arg(long)]
    pub random: Option<u64>,
    /// Index window of the random signal, "m_min:m_max,j_min:j_max"
    #[arg(long, default_value = "-3:3,-3:3", allow_hyphen_values = true)]
    pub signal_window: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV of analysis coefficients (window, m, j, re, im)
    #[arg(long)]
    pub csv_coeffs: Option<PathBuf>,
    /// CSV of reconstructed time samples (band_j, x, re, im)
    #[arg(long)]
    pub csv_time: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub windows: PathBuf,
    #[arg(long)]
    pub duals: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `--tol`, then `$MDFRAME_TOL`, then the library default.
pub fn resolve_tol(flag: Option<f64>) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{TOL_ENV}={s:?} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(tol)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = resolve_tol(cli.tol)?;
    match cli.command {
        Command::Make(args) => cmd_make(&args, tol, out),
        Command::Report(args) => cmd_report(&args, tol, out),
        Command::Dual(args) => cmd_dual(&args, tol, out),
        Command::Reconstruct(args) => cmd_reconstruct(&args, tol, out),
        Command::Verify(args) => cmd_verify(&args, tol, out),
    }
}

fn say(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))
}

fn emit_window_file(
    file: &WindowFileV1,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match path {
        Some(p) => file.save(p),
        None => say(out, &file.to_json()),
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str, kind: &str) -> Result<&'a str, CliError> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("--kind {kind} needs {flag}")))
}

fn parse_expr(src: &str, flag: &str) -> Result<Expr, CliError> {
    src.parse()
        .map_err(|e| CliError::Usage(format!("{flag} {src:?}: {e}")))
}

fn parse_list(src: &str, flag: &str) -> Result<Vec<Complex64>, CliError> {
    src.split(',')
        .map(|t| parse_complex(t.trim()).map_err(|e| CliError::Usage(format!("{flag}: {e}"))))
        .collect()
}

/// `"[offset:]c0,c1,..."`.
fn parse_poly(src: &str) -> Result<TrigPoly, CliError> {
    let (offset, body) = match src.split_once(':') {
        Some((o, rest)) => (
            o.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("--polys: bad offset {o:?}")))?,
            rest,
        ),
        None => (0, src),
    };
    Ok(TrigPoly::new(offset, parse_list(body, "--polys")?))
}

/// Samples a real-valued expression in `x` on the grid's x-nodes.
fn real_samples(
    expr: &Expr,
    flag: &str,
    base: DilationBase,
    n_x: usize,
) -> Result<Vec<f64>, CliError> {
    if !expr.is_x_only() {
        return Err(CliError::Usage(format!("{flag} must not depend on xi")));
    }
    sample_on_nodes(base, n_x, |x| expr.eval(x, 0.0, base.a()))
        .into_iter()
        .map(|z| {
            if z.im.abs() > 1e-12 * z.re.abs().max(1.0) || !z.re.is_finite() {
                Err(CliError::Usage(format!(
                    "{flag} {:?} is not real-valued ({z})",
                    expr.source()
                )))
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

fn read_samples_csv(path: &Path, n_x: usize) -> Result<Vec<Vec<Complex64>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Data(format!("{}: empty", path.display())))?;
    let cols = header.split(',').count();
    let mut columns = vec![Vec::with_capacity(n_x); cols];
    for (row, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != cols {
            return Err(CliError::Data(format!(
                "{}: row {} has {} cells, header has {cols}",
                path.display(),
                row + 1,
                cells.len()
            )));
        }
        for (c, cell) in cells.iter().enumerate() {
            let v = parse_complex(cell.trim())
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            columns[c].push(v);
        }
    }
    if columns.iter().any(|c| c.len() != n_x) {
        return Err(CliError::Data(format!(
            "{}: expected {n_x} sample rows",
            path.display()
        )));
    }
    Ok(columns)
}

pub fn cmd_make(args: &MakeArgs, tol: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let base = DilationBase::new(args.a)?;
    let shape = GridShape::new(args.nx, args.nxi)?;
    let family = match args.kind {
        Kind::Fir => {
            let taps = parse_list(required(&args.taps, "--taps", "fir")?, "--taps")?;
            example_fir(&TrigPoly::new(args.offset, taps), base, shape)?.family
        }
        Kind::PolyPu => {
            let polys = required(&args.polys, "--polys", "poly-pu")?
                .split(';')
                .map(parse_poly)
                .collect::<Result<Vec<_>, _>>()?;
            example_poly_pu(&polys, base, shape, tol)?
        }
        Kind::SupportPu => {
            let samples = match (&args.psi, &args.samples) {
                (Some(src), None) => src
                    .split(';')
                    .map(|s| {
                        let e = parse_expr(s.trim(), "--psi")?;
                        if !e.is_x_only() {
                            return Err(CliError::Usage("--psi must not depend on xi".into()));
                        }
                        Ok(sample_on_nodes(base, shape.n_x, |x| {
                            e.eval(x, 0.0, base.a())
                        }))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                (None, Some(path)) => read_samples_csv(path, shape.n_x)?,
                _ => {
                    return Err(CliError::Usage(
                        "--kind support-pu needs exactly one of --psi, --samples".into(),
                    ))
                }
            };
            example_support_pu(&samples, base, shape, tol)?
        }
        Kind::TwoWindow => {
            let c0 = parse_expr(required(&args.c0, "--c0", "two-window")?, "--c0")?;
            let c1 = parse_expr(required(&args.c1, "--c1", "two-window")?, "--c1")?;
            let s0 = real_samples(&c0, "--c0", base, shape.n_x)?;
            let s1 = real_samples(&c1, "--c1", base, shape.n_x)?;
            example_two_window(&s0, &s1, base, shape)?.family
        }
    };
    let file = WindowFileV1::from_family(&family, "psi");
    emit_window_file(&file, args.out.as_deref(), out)?;
    if let Some(p) = &args.out {
        say(
            out,
            &format!("wrote {} window(s) to {}\n", family.len(), p.display()),
        )?;
    }
    Ok(())
}

fn summary(r: &ReportFileV1) -> String {
    let mut s = format!(
        "lower={:e}\nupper={:e}\ncomplete={}\nframe={}\n",
        r.lower, r.upper, r.complete, r.frame
    );
    if let Some(d) = r.duality_deviation {
        let _ = writeln!(s, "duality_deviation={d:e}");
    }
    if let Some(e) = r.reconstruction_error {
        let _ = writeln!(s, "reconstruction_error={e:e}");
    }
    s
}

fn family_report(family: &WindowFamily, tol: f64) -> ReportFileV1 {
    ReportFileV1::from_frame_report(&frame_report(&spectral_density(family), tol))
}

pub fn cmd_report(args: &ReportArgs, tol: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let family = WindowFileV1::load(&args.windows)?.family()?;
    let report = family_report(&family, tol);
    if let Some(p) = &args.out {
        report.save(p)?;
    }
    say(out, &summary(&report))
}

/// Parses `"l=1: expr; l=2: expr"` into one grid per window; windows not
/// named get `X_l = 0`.
pub fn parse_x_spec(
    spec: &str,
    base: DilationBase,
    shape: GridShape,
    count: usize,
) -> Result<Vec<ThetaGrid>, CliError> {
    let mut xs = vec![ThetaGrid::zeros(base, shape); count];
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (lhs, body) = part.split_once(':').ok_or_else(|| {
            CliError::Usage(format!("--X: expected \"l=<n>: expr\", got {part:?}"))
        })?;
        let l = lhs
            .trim()
            .strip_prefix("l")
            .and_then(|r| r.trim().strip_prefix('='))
            .and_then(|r| r.trim().parse::<usize>().ok())
            .ok_or_else(|| CliError::Usage(format!("--X: bad window selector {lhs:?}")))?;
        if l == 0 || l > count {
            return Err(CliError::Usage(format!(
                "--X: window l={l} outside 1..={count}"
            )));
        }
        let e = parse_expr(body.trim(), "--X")?;
        let g = ThetaGrid::from_fn(base, shape, |x, xi| e.eval(x, xi, base.a()));
        if g.values()
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(CliError::Usage(format!(
                "--X l={l}: not finite on the grid"
            )));
        }
        xs[l - 1] = g;
    }
    Ok(xs)
}

pub fn cmd_dual(args: &DualArgs, tol: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let family = WindowFileV1::load(&args.windows)?.family()?;
    let dual = match &args.x_spec {
        None => canonical_dual(&family, tol)?,
        Some(spec) => {
            let xs = parse_x_spec(spec, family.base(), family.shape(), family.len())?;
            parametrized_dual(&family, &xs, tol)?
        }
    };
    let deviation = duality_check(&family, &dual)?;
    emit_window_file(
        &WindowFileV1::from_family(&dual, "phi"),
        args.out.as_deref(),
        out,
    )?;
    if let Some(p) = &args.report {
        let mut r = family_report(&family, tol);
        r.duality_deviation = Some(deviation);
        r.save(p)?;
    }
    if args.out.is_some() {
        say(out, &format!("duality_deviation={deviation:e}\n"))?;
    }
    Ok(())
}

/// `"m_min:m_max,j_min:j_max"`.
pub fn parse_index_window(src: &str) -> Result<IndexWindow, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--signal-window {src:?}: expected m_min:m_max,j_min:j_max"
        ))
    };
    let (m, j) = src.split_once(',').ok_or_else(bad)?;
    let range = |s: &str| -> Result<(i64, i64), CliError> {
        let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
        Ok((
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        ))
    };
    let (m_min, m_max) = range(m)?;
    let (j_min, j_max) = range(j)?;
    Ok(IndexWindow::new(m_min, m_max, j_min, j_max)?)
}

/// Complex Gaussian coefficients: ChaCha8 seeded with `seed`, visiting the
/// window m-major, drawing real then imaginary part from N(0, 1/2) each.
pub fn random_signal(base: DilationBase, window: IndexWindow, seed: u64) -> CoefArray {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = window
        .indices()
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * s, im * s)
        })
        .collect();
    CoefArray::from_vec(base, window, c).expect("length matches window")
}

pub fn cmd_reconstruct(
    args: &ReconstructArgs,
    tol: f64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let psi = WindowFileV1::load(&args.windows)?.family()?;
    let phi = WindowFileV1::load(&args.duals)?.family()?;
    psi.check_compatible(&phi)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let (base, shape) = (psi.base(), psi.shape());
    let f = match (&args.signal, args.random) {
        (Some(path), None) => {
            let file = WindowFileV1::load(path)?;
            if file.base()? != base || file.shape()? != shape {
                return Err(CliError::Data(format!(
                    "signal {} is not on the window grid",
                    path.display()
                )));
            }
            file.windows[0].to_coefs(base, shape)?
        }
        (None, Some(seed)) => {
            let window = parse_index_window(&args.signal_window)?;
            window
                .check_fits(shape)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            random_signal(base, window, seed)
        }
        _ => {
            return Err(CliError::Usage(
                "reconstruct needs exactly one of --signal, --random".into(),
            ))
        }
    };
    let rec = reconstruct(&f, &psi, &phi)?;
    let mut report = family_report(&psi, tol);
    report.duality_deviation = Some(duality_check(&psi, &phi)?);
    report.reconstruction_error = Some(rec.rel_error);
    if let Some(p) = &args.out {
        report.save(p)?;
    }
    if let Some(p) = &args.csv_coeffs {
        let grid = coef_to_grid(&f, shape)?;
        let coeffs = analyze_family(&grid, &phi, IndexWindow::capacity(shape))?;
        write(p, &coefficients_csv(&coeffs))?;
    }
    if let Some(p) = &args.csv_time {
        write(p, &time_csv(&rec.coefs, shape.n_x)?)?;
    }
    say(out, &summary(&report))
}

/// Columns `window,m,j,re,im`; `window` counts from 1.
pub fn coefficients_csv(coeffs: &[CoefArray]) -> String {
    let mut s = String::from("window,m,j,re,im\n");
    for (l, c) in coeffs.iter().enumerate() {
        for ((m, j), z) in c.iter() {
            let _ = writeln!(s, "{},{m},{j},{:?},{:?}", l + 1, z.re, z.im);
        }
    }
    s
}

/// Columns `band_j,x,re,im`: `f(y)` at `y = a^J x_k` for every occupied
/// band `J`; `x` is the time point `y`.
pub fn time_csv(c: &CoefArray, n_x: usize) -> Result<String, CliError> {
    let base = c.base();
    let samples = coef_to_time(c, n_x)?;
    let mut s = String::from("band_j,x,re,im\n");
    for (band, row) in samples.bands() {
        let scale = base.a().powi(band as i32);
        for (k, z) in row.iter().enumerate() {
            let x = 1.0 + k as f64 * base.span() / n_x as f64;
            let _ = writeln!(s, "{band},{:?},{:?},{:?}", scale * x, z.re, z.im);
        }
    }
    Ok(s)
}

pub fn cmd_verify(args: &VerifyArgs, tol: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let psi = WindowFileV1::load(&args.windows)?.family()?;
    let phi = WindowFileV1::load(&args.duals)?.family()?;
    psi.check_compatible(&phi)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let v = verify_duality(&psi, &phi, tol)?;
    let mut report = ReportFileV1::from_frame_report(&v.psi);
    report.duality_deviation = Some(v.deviation);
    if let Some(p) = &args.out {
        report.save(p)?;
    }
    say(out, &summary(&report))?;
    if !v.is_dual_pair(tol) {
        return Err(CliError::Rejected(format!(
            "not a dual pair: deviation {:e} > {tol:e}",
            v.deviation
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_window_syntax() {
        let w = parse_index_window("-2:3,0:1").unwrap();
        assert_eq!((w.m_min, w.m_max, w.j_min, w.j_max), (-2, 3, 0, 1));
        assert!(parse_index_window("1:0,0:0").is_err());
        assert!(parse_index_window("-2:3").is_err());
    }

    #[test]
    fn poly_syntax() {
        let p = parse_poly("-1:0.5,0,0.5i").unwrap();
        assert_eq!(p.offset, -1);
        assert_eq!(p.coeff(1), Complex64::new(0.0, 0.5));
        assert!(parse_poly("x").is_err());
    }

    #[test]
    fn x_spec_selects_windows() {
        let base = DilationBase::new(2.0).unwrap();
        let shape = GridShape::new(4, 8).unwrap();
        let xs = parse_x_spec("l=2: 0.3*exp(-2pi i xi)", base, shape, 2).unwrap();
        assert!(xs[0].values().iter().all(|z| z.norm() == 0.0));
        let expected = Complex64::from_polar(0.3, -std::f64::consts::TAU * 0.125);
        assert!((xs[1].get(0, 1) - expected).norm() < 1e-15);
        assert!(parse_x_spec("l=3: 1", base, shape, 2).is_err());
        assert!(parse_x_spec("k=1: 1", base, shape, 2).is_err());
    }

    #[test]
    fn random_signal_is_seeded() {
        let base = DilationBase::new(2.0).unwrap();
        let w = IndexWindow::new(-1, 1, -1, 1).unwrap();
        assert_eq!(random_signal(base, w, 7), random_signal(base, w, 7));
        assert_ne!(random_signal(base, w, 7), random_signal(base, w, 8));
    }

    #[test]
    fn csv_layout() {
        let base = DilationBase::new(2.0).unwrap();
        let c = CoefArray::unit(base, 0, 1);
        let text = time_csv(&c, 2).unwrap();
        // column j = 1 populates band -1 with height a^{1/2}
        assert_eq!(
            text,
            "band_j,x,re,im\n-1,0.5,1.4142135623730951,0.0\n-1,0.75,1.4142135623730951,0.0\n"
        );
        let coeffs = coefficients_csv(&[c]);
        assert_eq!(coeffs, "window,m,j,re,im\n1,0,1,1.0,0.0\n");
    }
}
