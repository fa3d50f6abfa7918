//! CSV emission for experiment records: fixed column set, floats rendered
//! to six significant digits so identical configs produce identical bytes.

use std::io::Write;

use densedp_core::{Error, Result};

use crate::runner::ExperimentRecord;

pub const CSV_HEADER: [&str; 12] = [
    "dataset",
    "n",
    "m",
    "algorithm",
    "epsilon",
    "seed",
    "d_star",
    "true_density",
    "set_size",
    "baseline_density",
    "ratio",
    "wall_time_s",
];

/// Formats `x` with `digits` significant digits. Positional notation while
/// the rounding stays readable, scientific once the magnitude exceeds the
/// digit budget. Zero, NaN and infinities pass through Display.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if mag >= digits as i32 || mag < -4 {
        format!("{:.*e}", digits - 1, x)
    } else {
        let decimals = (digits as i32 - 1 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn map_csv_err(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::State(format!("csv write failed: {other:?}")),
        }
    } else {
        Error::State(format!("csv write failed: {e}"))
    }
}

/// Writes the header and one row per record. An empty slice still writes
/// the header so downstream readers always see the schema.
pub fn write_csv<W: Write>(out: W, records: &[ExperimentRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(map_csv_err)?;
    for r in records {
        w.write_record([
            r.dataset.as_str(),
            &r.n.to_string(),
            &r.m.to_string(),
            r.algorithm,
            &fmt_sig(r.epsilon, 6),
            &r.seed.to_string(),
            &fmt_sig(r.d_star, 6),
            &fmt_sig(r.true_density, 6),
            &r.set_size.to_string(),
            &fmt_sig(r.baseline_density, 6),
            &fmt_sig(r.ratio, 6),
            &fmt_sig(r.wall_time_s, 6),
        ])
        .map_err(map_csv_err)?;
    }
    w.flush()?;
    Ok(())
}
