//! CSV emission and parsing.

use std::io::{Read, Write};

use crate::error::CliError;
use crate::run::RunOutput;

/// Decimal notation, 12 significant digits, trailing zeros dropped.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let mut out = if exp >= 11 {
        format!("{digits}{}", "0".repeat((exp - 11) as usize))
    } else if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    if out.contains('.') {
        let trimmed = out.trim_end_matches('0').trim_end_matches('.').len();
        out.truncate(trimmed);
    }
    if x < 0.0 {
        out.insert(0, '-');
    }
    out
}

fn header(out: &RunOutput) -> Vec<&'static str> {
    match (&out.caputo, &out.cf) {
        (Some(_), Some(_)) => vec![
            "t", "S_caputo", "I_caputo", "N_caputo", "S_cf", "I_cf", "N_cf",
        ],
        _ => vec!["t", "S", "I", "N"],
    }
}

/// One row per grid node: `t,S,I,N`, or both models side by side for compare runs.
pub fn emit_csv<W: Write>(writer: W, out: &RunOutput) -> Result<(), CliError> {
    let io =
        |e: csv::Error| CliError::io(format!("writing CSV for {}", out.member.label), e.into());
    let trajs: Vec<_> = out.caputo.iter().chain(out.cf.iter()).collect();
    let first = trajs
        .first()
        .ok_or_else(|| CliError::Input(format!("{}: nothing to emit", out.member.label)))?;

    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header(out)).map_err(io)?;
    for k in 0..first.len() {
        let mut row = vec![format_sig(first.times[k])];
        for tr in &trajs {
            row.extend([tr.s[k], tr.i[k], tr.total(k)].map(format_sig));
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io("flushing CSV", e))
}

/// Header and numeric rows of a CSV produced by [`emit_csv`].
pub fn parse_csv<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let bad = |e: String| CliError::Input(format!("CSV: {e}"));
    let mut r = csv::Reader::from_reader(reader);
    let header = r
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| bad(format!("{f:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::run_scenario;
    use crate::scenario::Scenario;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(8.0), "8");
        assert_eq!(format_sig(10.0), "10");
        assert_eq!(format_sig(0.01), "0.01");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0 * 1e-5), "0.00000666666666667");
        assert_eq!(format_sig(123456789012345.0), "123456789012000");
        assert_eq!(format_sig(9.9999999999999), "10");
    }

    proptest::proptest! {
        #[test]
        fn format_parses_back_to_twelve_digits(m in 1.0..10.0_f64, e in -20i32..20, neg: bool) {
            let x = if neg { -m } else { m } * 10f64.powi(e);
            let back: f64 = format_sig(x).parse().unwrap();
            proptest::prop_assert!((back - x).abs() <= 5e-12 * x.abs());
            proptest::prop_assert!(!format_sig(x).contains('e'));
        }
    }

    fn run(model: &str, extra: &str) -> Vec<RunOutput> {
        let sc = Scenario::from_json(&format!(
            r#"{{"label": "s", "model": "{model}",
                "params": {{"beta": 0.7, "gamma": 0.2, "s0": 8, "i0": 2}},
                "grid": {{"t_end": 20, "n_steps": 200}} {extra}}}"#
        ))
        .unwrap();
        run_scenario(&sc).unwrap()
    }

    fn emit(out: &RunOutput) -> String {
        let mut buf = Vec::new();
        emit_csv(&mut buf, out).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn layout_and_round_trip() {
        let out = &run(
            "caputo",
            r#", "caputo_orders": {"alpha1": 0.9, "alpha2": 0.5}"#,
        )[0];
        let text = emit(out);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,S,I,N"));
        assert_eq!(lines.next(), Some("0,8,2,10"));
        assert!(text.ends_with('\n'));

        let (header, rows) = parse_csv(text.as_bytes()).unwrap();
        assert_eq!(header, ["t", "S", "I", "N"]);
        assert_eq!(rows.len(), 201);
        let tr = out.caputo.as_ref().unwrap();
        for (k, row) in rows.iter().enumerate() {
            for (got, want) in row.iter().zip([tr.times[k], tr.s[k], tr.i[k], tr.total(k)]) {
                assert!((got - want).abs() <= 5e-12 * want.abs());
            }
        }
    }

    #[test]
    fn compare_header() {
        let text = emit(&run("compare", r#", "cf_order": {"alpha": 0.5}"#)[0]);
        assert!(text.starts_with("t,S_caputo,I_caputo,N_caputo,S_cf,I_cf,N_cf\n0,8,2,10,8,2,10\n"));
        assert_eq!(text.lines().count(), 202);
    }

    #[test]
    fn deterministic_bytes() {
        let extra = r#", "cf_order": {"alpha": 0.4}"#;
        assert_eq!(
            emit(&run("compare", extra)[0]),
            emit(&run("compare", extra)[0])
        );
    }
}
