//! Parameter sweeps over c1, threshold-crossing detection, and the CSV/JSON
//! dataset emitters behind the command-line driver.
//!
//! Determinism contract: a sweep's rows depend only on their own grid point,
//! so any worker-thread count produces byte-identical output files. All
//! reals are serialized with 17 significant digits (`{:.16e}`), which
//! round-trips f64 exactly; divergent spectroscopic parameters serialize as
//! the literal token `inf`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::{
    composite_uncertainties_closed, entropy_report, mean_spin_norm_closed, squeezing_report,
};
use crate::state::BipartiteParams;
use crate::tol;

/// The local-basis constants (c3, c4) and (c5, c6), each pair normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisConstants {
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

impl BasisConstants {
    /// Full four-constant form; accepts signed values.
    pub fn new(c3: f64, c4: f64, c5: f64, c6: f64) -> Result<Self> {
        // Reuse the parameter validation with a trivial Schmidt pair.
        BipartiteParams::new(1.0, 0.0, c3, c4, c5, c6)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(Self { c3, c4, c5, c6 })
    }

    /// Derive nonnegative companions: c4 = +√(1-c3²), c6 = +√(1-c5²).
    pub fn from_c3_c5(c3: f64, c5: f64) -> Result<Self> {
        if !c3.is_finite() || !c5.is_finite() || c3.abs() > 1.0 || c5.abs() > 1.0 {
            return Err(Error::InvalidConfig(format!(
                "basis constants c3 = {c3}, c5 = {c5} must lie in [-1, 1]"
            )));
        }
        let c4 = (1.0 - c3 * c3).max(0.0).sqrt();
        let c6 = (1.0 - c5 * c5).max(0.0).sqrt();
        Self::new(c3, c4, c5, c6)
    }

    /// The symmetric choice c3 = c4 = c5 = c6 = 1/√2.
    pub fn symmetric() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            c3: s,
            c4: s,
            c5: s,
            c6: s,
        }
    }
}

/// Output file format for sweep datasets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown output format `{other}` (expected csv or json)"
            ))),
        }
    }
}

/// Selectable report columns for reduced output files.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Djx,
    Djy,
    SA,
    SB,
    XiSX,
    XiSY,
    XiRX,
    XiRY,
    NormJ,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::Djx,
        Quantity::Djy,
        Quantity::SA,
        Quantity::SB,
        Quantity::XiSX,
        Quantity::XiSY,
        Quantity::XiRX,
        Quantity::XiRY,
        Quantity::NormJ,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Djx => "djx",
            Quantity::Djy => "djy",
            Quantity::SA => "s_a",
            Quantity::SB => "s_b",
            Quantity::XiSX => "xi_s_x",
            Quantity::XiSY => "xi_s_y",
            Quantity::XiRX => "xi_r_x",
            Quantity::XiRY => "xi_r_y",
            Quantity::NormJ => "norm_j",
        }
    }

    pub fn of(&self, row: &AnalysisReport) -> f64 {
        match self {
            Quantity::Djx => row.djx,
            Quantity::Djy => row.djy,
            Quantity::SA => row.s_a,
            Quantity::SB => row.s_b,
            Quantity::XiSX => row.xi_s_x,
            Quantity::XiSY => row.xi_s_y,
            Quantity::XiRX => row.xi_r_x,
            Quantity::XiRY => row.xi_r_y,
            Quantity::NormJ => row.mean_spin_norm,
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .iter()
            .find(|q| q.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownQuantity(s.to_string()))
    }
}

/// One parameter sweep: grid over c1, fixed basis constants, output target.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub c1_start: f64,
    pub c1_end: f64,
    pub c1_step: f64,
    pub basis: BasisConstants,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Restrict emitted columns to c1, c2 plus this subset; `None` emits the
    /// full schema.
    pub quantities: Option<Vec<Quantity>>,
    pub threads: usize,
}

impl SweepConfig {
    pub fn new(c1_start: f64, c1_end: f64, c1_step: f64, basis: BasisConstants) -> Self {
        Self {
            c1_start,
            c1_end,
            c1_step,
            basis,
            output: None,
            format: OutputFormat::Csv,
            quantities: None,
            threads: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b, h) = (self.c1_start, self.c1_end, self.c1_step);
        if !(a.is_finite() && b.is_finite() && h.is_finite()) {
            return Err(Error::InvalidConfig("grid bounds must be finite".into()));
        }
        if !(0.0 < a && a <= b && b < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "require 0 < c1_start ≤ c1_end < 1, got [{a}, {b}]"
            )));
        }
        if h <= 0.0 {
            return Err(Error::InvalidConfig(format!("c1_step = {h} must be > 0")));
        }
        if self.threads == 0 {
            return Err(Error::InvalidConfig("threads must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Step-quantized closed grid: start, start + step, …, with the last
    /// point clamped to `c1_end`. A step larger than the range yields the
    /// single point `c1_start`.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.c1_end - self.c1_start;
        let intervals = (span / self.c1_step).round() as usize;
        let mut points: Vec<f64> = (0..=intervals)
            .map(|i| self.c1_start + i as f64 * self.c1_step)
            .collect();
        if intervals >= 1 {
            if let Some(last) = points.last_mut() {
                if (*last - self.c1_end).abs() <= 0.5 * self.c1_step {
                    *last = self.c1_end;
                }
            }
        }
        points.retain(|&c1| c1 < 1.0);
        points
    }
}

/// All plotted quantities at one parameter point; the row type of every
/// sweep dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub c1: f64,
    pub c2: f64,
    pub djx: f64,
    pub djy: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_composite: f64,
    pub xi_s_x: f64,
    pub xi_s_y: f64,
    pub xi_r_x: f64,
    pub xi_r_y: f64,
    pub mean_spin_norm: f64,
    pub degenerate_frame: bool,
}

/// Column names in AnalysisReport field order; this is the CSV schema.
pub const REPORT_COLUMNS: [&str; 13] = [
    "c1",
    "c2",
    "djx",
    "djy",
    "s_a",
    "s_b",
    "s_composite",
    "xi_s_x",
    "xi_s_y",
    "xi_r_x",
    "xi_r_y",
    "mean_spin_norm",
    "degenerate_frame",
];

/// Evaluate the full report at one grid point with c2 = +√(1-c1²).
pub fn evaluate_point(c1: f64, basis: &BasisConstants) -> Result<AnalysisReport> {
    if !(0.0 < c1 && c1 < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "grid point c1 = {c1} outside (0, 1)"
        )));
    }
    let params = BipartiteParams::new(
        c1,
        (1.0 - c1 * c1).sqrt(),
        basis.c3,
        basis.c4,
        basis.c5,
        basis.c6,
    )?;
    let uncertainties = composite_uncertainties_closed(&params);
    let entropies = entropy_report(&params)?;
    let squeezing = squeezing_report(&params);
    let norm = mean_spin_norm_closed(&params);
    Ok(AnalysisReport {
        c1,
        c2: params.c2(),
        djx: uncertainties.djx,
        djy: uncertainties.djy,
        s_a: entropies.s_a,
        s_b: entropies.s_b,
        s_composite: entropies.s_composite,
        xi_s_x: squeezing.xi_s_x,
        xi_s_y: squeezing.xi_s_y,
        xi_r_x: squeezing.xi_r_x,
        xi_r_y: squeezing.xi_r_y,
        mean_spin_norm: norm,
        degenerate_frame: norm < tol::DEGENERATE_MEAN_SPIN,
    })
}

/// Run the sweep, optionally writing the configured output file atomically
/// (temp file in the target directory, then rename).
///
/// Rows are computed in parallel across `config.threads` workers and
/// collected in grid order, so output is identical for any thread count.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<AnalysisReport>> {
    config.validate()?;
    let grid = config.grid();
    let rows = evaluate_grid(&grid, &config.basis, config.threads)?;

    if let Some(path) = &config.output {
        let quantities = config.quantities.as_deref();
        let contents = match config.format {
            OutputFormat::Csv => csv_string(&rows, quantities),
            OutputFormat::Json => json_string(&rows, quantities),
        };
        write_atomic(path, &contents)?;
    }
    Ok(rows)
}

fn evaluate_grid(
    grid: &[f64],
    basis: &BasisConstants,
    threads: usize,
) -> Result<Vec<AnalysisReport>> {
    if threads <= 1 || grid.len() < 2 {
        return grid.iter().map(|&c1| evaluate_point(c1, basis)).collect();
    }
    let chunk = grid.len().div_ceil(threads);
    let mut results: Vec<Result<Vec<AnalysisReport>>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|slice| scope.spawn(move || slice.iter().map(|&c1| evaluate_point(c1, basis)).collect()))
            .collect();
        results = handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect();
    });
    let mut rows = Vec::with_capacity(grid.len());
    for chunk_rows in results {
        rows.extend(chunk_rows?);
    }
    Ok(rows)
}

/// Maximal c1 intervals on which `quantity` exceeds `level`.
///
/// Rows must be sorted by c1. Interval endpoints interior to the grid are
/// linearly interpolated between the adjacent points; endpoints at the grid
/// boundary use the boundary c1 itself.
pub fn find_crossings(rows: &[AnalysisReport], quantity: Quantity, level: f64) -> Vec<(f64, f64)> {
    debug_assert!(rows.windows(2).all(|w| w[0].c1 <= w[1].c1), "rows not sorted by c1");
    let mut intervals = Vec::new();
    let mut open: Option<f64> = None;
    for pair in rows.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let (ql, qh) = (quantity.of(lo), quantity.of(hi));
        if open.is_none() && ql > level && lo.c1 == rows[0].c1 {
            open = Some(lo.c1);
        }
        let crosses = (ql > level) != (qh > level);
        if crosses && qh.is_finite() && ql.is_finite() {
            let t = (level - ql) / (qh - ql);
            let x = lo.c1 + t * (hi.c1 - lo.c1);
            match open.take() {
                Some(start) => intervals.push((start, x)),
                None => open = Some(x),
            }
        } else if crosses {
            // A divergent endpoint: fall back to the grid point itself.
            let x = if ql > level { hi.c1 } else { lo.c1 };
            match open.take() {
                Some(start) => intervals.push((start, x)),
                None => open = Some(x),
            }
        }
    }
    if let (Some(start), Some(last)) = (open, rows.last()) {
        if quantity.of(last) > level {
            intervals.push((start, last.c1));
        }
    }
    if rows.len() == 1 && quantity.of(&rows[0]) > level {
        intervals.push((rows[0].c1, rows[0].c1));
    }
    intervals
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn selected_columns(quantities: Option<&[Quantity]>) -> Vec<&'static str> {
    match quantities {
        None => REPORT_COLUMNS.to_vec(),
        Some(qs) => {
            let mut cols = vec!["c1", "c2"];
            cols.extend(qs.iter().map(|q| q.name()));
            cols
        }
    }
}

fn column_value(row: &AnalysisReport, name: &str) -> String {
    match name {
        "c1" => fmt_real(row.c1),
        "c2" => fmt_real(row.c2),
        "djx" => fmt_real(row.djx),
        "djy" => fmt_real(row.djy),
        "s_a" => fmt_real(row.s_a),
        "s_b" => fmt_real(row.s_b),
        "s_composite" => fmt_real(row.s_composite),
        "xi_s_x" => fmt_real(row.xi_s_x),
        "xi_s_y" => fmt_real(row.xi_s_y),
        "xi_r_x" => fmt_real(row.xi_r_x),
        "xi_r_y" => fmt_real(row.xi_r_y),
        "norm_j" | "mean_spin_norm" => fmt_real(row.mean_spin_norm),
        "degenerate_frame" => row.degenerate_frame.to_string(),
        other => unreachable!("unknown column {other}"),
    }
}

/// Render rows as CSV with a header naming the columns.
pub fn csv_string(rows: &[AnalysisReport], quantities: Option<&[Quantity]>) -> String {
    let cols = selected_columns(quantities);
    let mut out = String::new();
    out.push_str(&cols.join(","));
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = cols.iter().map(|c| column_value(row, c)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// One report as a JSON object. Divergent (infinite) values are encoded as
/// the JSON string `"inf"` since JSON has no infinity literal.
pub fn json_row_string(row: &AnalysisReport, quantities: Option<&[Quantity]>) -> String {
    let cols = selected_columns(quantities);
    let mut out = String::from("{");
    for (k, col) in cols.iter().enumerate() {
        let value = column_value(row, col);
        let rendered = if value == "inf" || value == "-inf" {
            format!("\"{value}\"")
        } else {
            value
        };
        let _ = write!(out, "\"{col}\": {rendered}");
        if k + 1 < cols.len() {
            out.push_str(", ");
        }
    }
    out.push('}');
    out
}

/// Render rows as a JSON array of objects.
pub fn json_string(rows: &[AnalysisReport], quantities: Option<&[Quantity]>) -> String {
    let mut out = String::from("[\n");
    for (i, row) in rows.iter().enumerate() {
        out.push_str("  ");
        out.push_str(&json_row_string(row, quantities));
        if i + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Parse a CSV file produced by [`run_sweep`] with the full schema back into
/// reports. The 17-digit serialization makes this an exact round trip.
pub fn read_csv(path: &Path) -> Result<Vec<AnalysisReport>> {
    let text = fs::read_to_string(path)?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<Vec<AnalysisReport>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedFile("empty file".into()))?;
    let expected = REPORT_COLUMNS.join(",");
    if header != expected {
        return Err(Error::MalformedFile(format!(
            "header mismatch: got `{header}`"
        )));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != REPORT_COLUMNS.len() {
            return Err(Error::MalformedFile(format!(
                "line {}: expected {} fields, got {}",
                lineno + 2,
                REPORT_COLUMNS.len(),
                fields.len()
            )));
        }
        let real = |i: usize| -> Result<f64> {
            fields[i].parse::<f64>().map_err(|_| {
                Error::MalformedFile(format!("line {}: bad number `{}`", lineno + 2, fields[i]))
            })
        };
        let degenerate_frame = match fields[12] {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::MalformedFile(format!(
                    "line {}: bad boolean `{other}`",
                    lineno + 2
                )))
            }
        };
        rows.push(AnalysisReport {
            c1: real(0)?,
            c2: real(1)?,
            djx: real(2)?,
            djy: real(3)?,
            s_a: real(4)?,
            s_b: real(5)?,
            s_composite: real(6)?,
            xi_s_x: real(7)?,
            xi_s_y: real(8)?,
            xi_r_x: real(9)?,
            xi_r_y: real(10)?,
            mean_spin_norm: real(11)?,
            degenerate_frame,
        });
    }
    Ok(rows)
}

/// Write a gnuplot script that plots a full-schema CSV dataset. The second
/// plot squares the squeezing parameters, matching the convention of
/// plotting ξ² against c1.
pub fn write_gnuplot_stub(script_path: &Path, data_path: &Path) -> Result<()> {
    let data = data_path.display();
    let contents = format!(
        "set datafile separator ','\n\
         set xlabel 'c1'\n\
         set key left top\n\
         plot '{data}' skip 1 using 1:3 with lines title 'dJx_prime', \\\n\
         \x20    '{data}' skip 1 using 1:4 with lines title 'dJy_prime', \\\n\
         \x20    '{data}' skip 1 using 1:5 with lines title 'S_a'\n\
         pause -1 'press enter for squared squeezing parameters'\n\
         set yrange [0:4]\n\
         plot '{data}' skip 1 using 1:($9**2) with lines title 'xi_sy^2', \\\n\
         \x20    '{data}' skip 1 using 1:($11**2) with lines title 'xi_Ry^2', \\\n\
         \x20    '{data}' skip 1 using 1:5 with lines title 'S_a'\n\
         pause -1\n"
    );
    write_atomic(script_path, &contents)
}
