//! CSV, plot script and manifest writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::montecarlo::CampaignResult;

pub const CSV_HEADER: &str = "axis,mean_secrecy_bps_hz,mean_ee_bits_hz_mw,trials,failures";

/// `printf("%.9g")`.
pub fn format_g9(x: f64) -> String {
    const P: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    // Exponent after rounding to P significant digits.
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= P {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_string(result: &CampaignResult) -> String {
    let adaptive = result.points.iter().any(|p| p.mean_cycles.is_some());
    let mut out = String::from(CSV_HEADER);
    if adaptive {
        out.push_str(",cycles,final_pb_db");
    }
    out.push('\n');
    for p in &result.points {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            format_g9(p.axis_value),
            format_g9(p.mean_secrecy),
            format_g9(p.mean_energy_efficiency),
            p.trials,
            p.failures
        );
        if adaptive {
            let _ = write!(
                out,
                ",{},{}",
                format_g9(p.mean_cycles.unwrap_or(f64::NAN)),
                format_g9(p.mean_final_pb_db.unwrap_or(f64::NAN))
            );
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn write_csv(result: &CampaignResult, path: &Path) -> Result<()> {
    write_file(path, &csv_string(result))
}

/// Gnuplot script drawing secrecy and energy efficiency for each CSV.
pub fn plot_script(axis_label: &str, curves: &[(String, String)]) -> String {
    let xlabel = match axis_label {
        "snr_db" => "SNR (dB)",
        "users" => "Number of users",
        _ => "Point",
    };
    let plot = |column: usize| {
        curves
            .iter()
            .map(|(file, title)| format!("'{file}' using 1:{column} with linespoints title '{title}'"))
            .collect::<Vec<_>>()
            .join(", \\\n     ")
    };
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set terminal pngcairo size 800,600");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s);
    let _ = writeln!(s, "set output 'secrecy.png'");
    let _ = writeln!(s, "set ylabel 'Average secrecy capacity (bits/s/Hz)'");
    let _ = writeln!(s, "plot {}", plot(2));
    let _ = writeln!(s);
    let _ = writeln!(s, "set output 'energy_efficiency.png'");
    let _ = writeln!(s, "set ylabel 'Energy efficiency (bits/Hz/mW)'");
    let _ = writeln!(s, "plot {}", plot(3));
    s
}
