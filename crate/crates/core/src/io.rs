//! File formats: sample CSV (`x_0,...,x_{D-1},f`), smoothness-profile JSON,
//! environment-config JSON, and check-report JSON lines.
//!
//! Readers are total over arbitrary bytes: malformed input comes back as
//! [`Error`], never a panic. When a sample file carries no explicit domain,
//! the bounding box of the points (degenerate axes padded) stands in.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Point};
use crate::riverswim::RiverswimConfig;
use crate::smoothness::{Observation, SampleSet, SmoothnessProfile};
use crate::theory::CheckReport;

/// Fixed float formatting for text output: 12 significant digits, enough to
/// round-trip distinct doubles we care about while keeping files diffable.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn parse_float(field: &str, what: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{what}: unparsable number {field:?}")))?;
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!(
            "{what}: non-finite number {field:?}"
        )));
    }
    Ok(v)
}

/// Reads observations from CSV with header `x_0,...,x_{D-1},f` and wraps
/// them in a Euclidean space inferred from the bounding box.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<SampleSet> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv.headers()?.clone();
    if headers.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "sample header needs at least x_0 and f (got {} columns)",
            headers.len()
        )));
    }
    let dim = headers.len() - 1;
    for (i, name) in headers.iter().enumerate() {
        let expected = if i < dim {
            format!("x_{i}")
        } else {
            "f".to_string()
        };
        if name != expected {
            return Err(Error::InvalidInput(format!(
                "sample header column {i} must be {expected:?} (got {name:?})"
            )));
        }
    }
    let mut observations = Vec::new();
    for (row, record) in csv.records().enumerate() {
        let record = record?;
        if record.len() != dim + 1 {
            return Err(Error::InvalidInput(format!(
                "sample row {row} has {} fields, expected {}",
                record.len(),
                dim + 1
            )));
        }
        let coords = (0..dim)
            .map(|i| parse_float(&record[i], &format!("sample row {row} column x_{i}")))
            .collect::<Result<Vec<_>>>()?;
        let f = parse_float(&record[dim], &format!("sample row {row} column f"))?;
        observations.push(Observation {
            x: Point::new(coords)?,
            f,
        });
    }
    if observations.is_empty() {
        return Err(Error::InsufficientData(
            "sample file has no data rows".into(),
        ));
    }
    let mut lower = observations[0].x.coords().to_vec();
    let mut upper = lower.clone();
    for obs in &observations {
        for (i, &c) in obs.x.coords().iter().enumerate() {
            lower[i] = lower[i].min(c);
            upper[i] = upper[i].max(c);
        }
    }
    for (lo, hi) in lower.iter_mut().zip(upper.iter_mut()) {
        if *lo >= *hi {
            let pad = 0.5 * lo.abs().max(1.0);
            *lo -= pad;
            *hi += pad;
        }
    }
    SampleSet::new(MetricSpace::euclidean(lower, upper)?, observations)
}

/// Writes observations as CSV with header `x_0,...,x_{D-1},f`.
pub fn write_samples_csv<W: Write>(writer: W, samples: &SampleSet) -> Result<()> {
    let dim = samples.space().dim();
    let mut csv = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..dim).map(|i| format!("x_{i}")).collect();
    header.push("f".to_string());
    csv.write_record(&header)?;
    for obs in samples.observations() {
        let mut row: Vec<String> = obs.x.coords().iter().map(|&c| fmt_float(c)).collect();
        row.push(fmt_float(obs.f));
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn load_samples(path: impl AsRef<Path>) -> Result<SampleSet> {
    read_samples_csv(BufReader::new(File::open(path)?))
}

pub fn save_samples(path: impl AsRef<Path>, samples: &SampleSet) -> Result<()> {
    write_samples_csv(BufWriter::new(File::create(path)?), samples)
}

/// Parses and validates a smoothness profile from JSON of the form
/// `{"L": 2.0, "pairs": [[0.1, 1.5], [0.2, 1.0]]}` (`L` may be null).
pub fn read_profile_json<R: Read>(reader: R) -> Result<SmoothnessProfile> {
    let profile: SmoothnessProfile = serde_json::from_reader(reader)?;
    profile.validate()?;
    Ok(profile)
}

pub fn write_profile_json<W: Write>(mut writer: W, profile: &SmoothnessProfile) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, profile)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn load_profile(path: impl AsRef<Path>) -> Result<SmoothnessProfile> {
    read_profile_json(BufReader::new(File::open(path)?))
}

pub fn save_profile(path: impl AsRef<Path>, profile: &SmoothnessProfile) -> Result<()> {
    write_profile_json(BufWriter::new(File::create(path)?), profile)
}

/// Parses and validates an environment config from JSON. Unknown fields are
/// rejected so typos fail loudly rather than silently taking defaults.
pub fn read_riverswim_config<R: Read>(reader: R) -> Result<RiverswimConfig> {
    let cfg: RiverswimConfig = serde_json::from_reader(reader)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_riverswim_config(path: impl AsRef<Path>) -> Result<RiverswimConfig> {
    read_riverswim_config(BufReader::new(File::open(path)?))
}

/// Writes one JSON object per line, in input order.
pub fn write_reports_jsonl<W: Write>(mut writer: W, reports: &[CheckReport]) -> Result<()> {
    for report in reports {
        writer.write_all(report.to_json_line().as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn samples_round_trip() {
        let space = MetricSpace::euclidean(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        let obs = vec![
            Observation {
                x: Point::new(vec![0.25, -0.5]).unwrap(),
                f: 1.5,
            },
            Observation {
                x: Point::new(vec![0.75, 0.5]).unwrap(),
                f: -2.0,
            },
        ];
        let samples = SampleSet::new(space, obs).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &samples).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x_0,x_1,f\n"));
        let back = read_samples_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in back.observations().iter().zip(samples.observations()) {
            assert_relative_eq!(a.f, b.f, max_relative = 1e-10);
            for (ca, cb) in a.x.coords().iter().zip(b.x.coords()) {
                assert_relative_eq!(ca, cb, max_relative = 1e-10);
            }
        }
        // inferred box is the bounding box of the points
        assert_relative_eq!(back.space().lower()[0], 0.25);
        assert_relative_eq!(back.space().upper()[1], 0.5);
    }

    #[test]
    fn degenerate_axis_is_padded() {
        let csv = "x_0,x_1,f\n1.0,3.0,0.0\n2.0,3.0,1.0\n";
        let samples = read_samples_csv(csv.as_bytes()).unwrap();
        assert!(samples.space().lower()[1] < 3.0 && samples.space().upper()[1] > 3.0);
    }

    #[test]
    fn bad_samples_are_rejected() {
        for bad in [
            "x_0,g\n0.0,1.0\n",  // wrong header name
            "x_1,f\n0.0,1.0\n",  // wrong index
            "x_0,f\n",           // no rows
            "x_0,f\n0.0\n",      // missing field
            "x_0,f\nzero,1.0\n", // unparsable number
            "x_0,f\nNaN,1.0\n",  // non-finite number
            "x_0,f\ninf,1.0\n",  // non-finite number
            "f\n1.0\n",          // no coordinate columns
        ] {
            assert!(
                read_samples_csv(bad.as_bytes()).is_err(),
                "accepted {bad:?}"
            );
        }
    }

    #[test]
    fn profile_round_trip_and_null_l() {
        let profile = SmoothnessProfile::new(Some(2.0), vec![(0.1, 1.5), (0.2, 1.0)]).unwrap();
        let mut buf = Vec::new();
        write_profile_json(&mut buf, &profile).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"L\": 2.0"));
        assert_eq!(read_profile_json(buf.as_slice()).unwrap(), profile);

        let from_null =
            read_profile_json(r#"{"L": null, "pairs": [[0.1, 1.0]]}"#.as_bytes()).unwrap();
        assert_eq!(from_null.l, None);
        // omitting L entirely reads as null
        let from_missing = read_profile_json(r#"{"pairs": [[0.1, 1.0]]}"#.as_bytes()).unwrap();
        assert_eq!(from_missing, from_null);
    }

    #[test]
    fn bad_profiles_are_rejected() {
        for bad in [
            "",                                                 // empty
            "{",                                                // truncated
            r#"{"L": 1.0, "pairs": [[0.2, 1.0], [0.1, 1.0]]}"#, // unordered alphas
            r#"{"L": 1.0, "pairs": [[0.1, 2.0]]}"#,             // L_alpha above L
            r#"{"L": 1.0, "pairs": [[-0.1, 0.5]]}"#,            // negative alpha
        ] {
            assert!(
                read_profile_json(bad.as_bytes()).is_err(),
                "accepted {bad:?}"
            );
        }
    }

    #[test]
    fn riverswim_config_parsing() {
        let cfg = read_riverswim_config(r#"{"gamma": 0.9}"#.as_bytes()).unwrap();
        assert_relative_eq!(cfg.gamma, 0.9);
        assert_relative_eq!(cfg.a_max, 1.0);
        assert!(read_riverswim_config(r#"{"gamma": 1.5}"#.as_bytes()).is_err());
        assert!(read_riverswim_config(r#"{"gamm": 0.9}"#.as_bytes()).is_err());
        assert!(read_riverswim_config(b"not json".as_slice()).is_err());
    }

    #[test]
    fn reports_jsonl_layout() {
        let reports = vec![
            CheckReport::new("a", 1, 0, 0.0, 0.5),
            CheckReport::new("b", 2, 1, 0.25, 0.5),
        ];
        let mut buf = Vec::new();
        write_reports_jsonl(&mut buf, &reports).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with(r#"{"name":"a""#));
        assert!(lines[1].ends_with(r#""passed":false}"#));
    }
}
