//! CSV and plot-data emission. Numbers use 17 significant digits so they
//! read back bit-exactly; lines end in `\n`.

use std::fmt::Write as _;

use crate::tracker::BranchSet;

/// `x` with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated table with a header row.
pub fn table_csv(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// `t,branch_0,...[,dbranch_0,...]`, one row per grid point.
pub fn branch_csv(set: &BranchSet<f64>, with_derivs: bool) -> String {
    let n = set.len();
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|j| format!("branch_{j}")));
    if with_derivs {
        header.extend((0..n).map(|j| format!("dbranch_{j}")));
    }
    let rows: Vec<Vec<f64>> = set
        .grid
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut row = vec![t];
            row.extend(&set.values[k]);
            if with_derivs {
                row.extend(&set.derivs[k]);
            }
            row
        })
        .collect();
    table_csv(&header, &rows)
}

/// Reads a table written by [`table_csv`].
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or("empty file")?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>().map_err(|e| format!("row {}: {e}", i + 2)))
            .collect::<Result<Vec<f64>, _>>()?;
        if row.len() != header.len() {
            return Err(format!("row {} has {} columns, expected {}", i + 2, row.len(), header.len()));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Gnuplot-style data: one `# name` block of `x y` lines per series,
/// blocks separated by two blank lines.
pub fn plot_data(x: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let mut s = String::new();
    for (i, (name, ys)) in series.iter().enumerate() {
        if i > 0 {
            s.push_str("\n\n");
        }
        let _ = writeln!(s, "# {name}");
        for (&xv, &yv) in x.iter().zip(ys) {
            let _ = writeln!(s, "{} {}", fmt_num(xv), fmt_num(yv));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 2f64.powi(-144), std::f64::consts::PI] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn csv_round_trip() {
        let text = table_csv(&["t".into(), "a".into()], &[vec![0.0, 1.5], vec![0.25, -2.0]]);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let (h, rows) = parse_csv(&text).unwrap();
        assert_eq!(h, vec!["t", "a"]);
        assert_eq!(rows, vec![vec![0.0, 1.5], vec![0.25, -2.0]]);
        assert!(parse_csv("t,a\n1\n").is_err());
    }

    #[test]
    fn plot_blocks() {
        let s = plot_data(&[0.0, 1.0], &[("a".into(), vec![1.0, 2.0]), ("b".into(), vec![3.0, 4.0])]);
        assert_eq!(s.matches("# ").count(), 2);
        assert!(s.contains("\n\n\n# b"));
    }
}
