//! Report serialization. Numbers are written by hand so every value carries 17
//! significant digits and non-finite values become `null`.

use std::fmt::Write;

use hyperscale::verify::{FueterRow, Report};

fn num(out: &mut String, x: f64) {
    if x.is_finite() {
        write!(out, "{x:.16e}").unwrap();
    } else {
        out.push_str("null");
    }
}

fn string(out: &mut String, s: &str) {
    out.push_str(&serde_json::Value::from(s).to_string());
}

fn report(out: &mut String, r: &Report) {
    out.push_str("  {\"suite\": ");
    string(out, &r.suite);
    out.push_str(", \"t\": ");
    num(out, r.t);
    out.push_str(", \"entries\": [");
    for (i, e) in r.entries.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str("    {\"name\": ");
        string(out, &e.name);
        out.push_str(", \"tolerance\": ");
        num(out, e.tolerance);
        out.push_str(", \"observed\": ");
        num(out, e.observed);
        write!(out, ", \"pass\": {}}}", e.pass).unwrap();
    }
    out.push_str("\n  ], \"wall_time\": ");
    num(out, r.wall_time);
    out.push('}');
}

pub fn reports(rs: &[Report]) -> String {
    let mut out = String::from("[\n");
    for (i, r) in rs.iter().enumerate() {
        if i > 0 {
            out.push_str(",\n");
        }
        report(&mut out, r);
    }
    out.push_str("\n]\n");
    out
}

pub fn fueter_rows(rows: &[FueterRow]) -> String {
    let mut out = String::from("[\n");
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            out.push_str(",\n");
        }
        out.push_str("  {\"test\": ");
        string(&mut out, &r.test);
        out.push_str(", \"t\": ");
        num(&mut out, r.t);
        out.push_str(", \"alpha_or_n\": ");
        string(&mut out, &r.alpha_or_n);
        out.push_str(", \"max_residual\": ");
        num(&mut out, r.max_residual);
        write!(out, ", \"pass\": {}}}", r.pass).unwrap();
    }
    out.push_str("\n]\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperscale::verify::Entry;

    #[test]
    fn output_parses_and_keeps_seventeen_digits() {
        let r = Report {
            suite: "ring".into(),
            t: -0.5,
            entries: vec![Entry {
                name: "x\"y".into(),
                tolerance: 1e-12,
                observed: f64::INFINITY,
                pass: false,
            }],
            wall_time: 0.1,
        };
        let text = reports(&[r]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v[0]["entries"][0]["observed"], serde_json::Value::Null);
        assert_eq!(v[0]["entries"][0]["name"], "x\"y");
        assert!(text.contains("9.9999999999999998e-13"));
        assert_eq!(v[0]["entries"][0]["tolerance"].as_f64(), Some(1e-12));
        assert_eq!(v[0]["wall_time"].as_f64(), Some(0.1));
    }
}
