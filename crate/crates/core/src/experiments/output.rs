//! Report files: a CSV table, a JSON sidecar with the full structured
//! result, and a gnuplot script that plots the CSV.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

/// One plotted column.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    /// 1-based CSV column.
    pub column: usize,
    pub title: String,
    /// gnuplot style, e.g. `points` or `lines`.
    pub style: String,
}

impl Series {
    pub fn new(column: usize, title: &str, style: &str) -> Self {
        Series {
            column,
            title: title.into(),
            style: style.into(),
        }
    }
}

/// What the gnuplot script draws.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub x_column: usize,
    pub series: Vec<Series>,
    pub log_x: bool,
}

/// Paths of the three files.
#[derive(Clone, Debug, PartialEq)]
pub struct Written {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub gnuplot: PathBuf,
}

/// CSV text with a header row taken from the field names.
pub fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Script plotting `csv_name` into `<stem>.png`.
pub fn gnuplot_script(spec: &PlotSpec, csv_name: &str, stem: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output '{stem}.png'");
    let _ = writeln!(s, "set title '{}'", spec.title.replace('\'', "''"));
    let _ = writeln!(s, "set xlabel '{}'", spec.xlabel);
    let _ = writeln!(s, "set ylabel '{}'", spec.ylabel);
    let _ = writeln!(s, "set key outside right");
    if spec.log_x {
        let _ = writeln!(s, "set logscale x");
    }
    let plots: Vec<String> = spec
        .series
        .iter()
        .enumerate()
        .map(|(i, se)| {
            let file = if i == 0 {
                format!("'{csv_name}'")
            } else {
                "''".to_string()
            };
            format!(
                "{file} every ::1 using {}:{} with {} title '{}'",
                spec.x_column, se.column, se.style, se.title
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

/// Writes `<dir>/<stem>.csv`, `<stem>.json` and `<stem>.gp`.
pub fn write_bundle<T: Serialize, J: Serialize>(
    dir: impl AsRef<Path>,
    stem: &str,
    rows: &[T],
    sidecar: &J,
    plot: &PlotSpec,
) -> Result<Written> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let written = Written {
        csv: dir.join(format!("{stem}.csv")),
        json: dir.join(format!("{stem}.json")),
        gnuplot: dir.join(format!("{stem}.gp")),
    };
    std::fs::write(&written.csv, csv_string(rows)?)?;
    std::fs::write(&written.json, serde_json::to_string_pretty(sidecar)? + "\n")?;
    std::fs::write(&written.gnuplot, gnuplot_script(plot, &format!("{stem}.csv"), stem))?;
    Ok(written)
}

/// Ratio and bound per instance id, for [`super::ReportRow`] tables.
pub fn ratio_plot(title: &str) -> PlotSpec {
    PlotSpec {
        title: title.into(),
        xlabel: "instance".into(),
        ylabel: "cost / OPT".into(),
        x_column: 1,
        series: vec![
            Series::new(7, "ratio", "points pt 7 ps 0.6"),
            Series::new(8, "bound", "points pt 1"),
        ],
        log_x: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct R {
        a: u32,
        b: f64,
    }

    #[test]
    fn bundle_files() {
        let dir = std::env::temp_dir().join(format!("resched-output-{}", std::process::id()));
        let rows = [R { a: 1, b: 0.5 }, R { a: 2, b: 1.5 }];
        let spec = PlotSpec {
            title: "t".into(),
            xlabel: "a".into(),
            ylabel: "b".into(),
            x_column: 1,
            series: vec![Series::new(2, "b", "lines")],
            log_x: true,
        };
        let w = write_bundle(&dir, "demo", &rows, &serde_json::json!({"n": 2}), &spec).unwrap();
        assert_eq!(std::fs::read_to_string(&w.csv).unwrap(), "a,b\n1,0.5\n2,1.5\n");
        let gp = std::fs::read_to_string(&w.gnuplot).unwrap();
        assert!(gp.contains("plot 'demo.csv' every ::1 using 1:2 with lines title 'b'"));
        assert!(gp.contains("set logscale x"));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
