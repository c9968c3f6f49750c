//! Two-column curve files.
//!
//! The grammar is a `delta,rho` header followed by one `delta,rho` row per
//! line, '.' as decimal separator, each line newline-terminated. Values are
//! written at 12 significant digits in their shortest round-tripping form.

use std::fmt;

pub const CURVE_HEADER: &str = "delta,rho";
pub const RATIO_HEADER: &str = "delta,ratio";

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal that reads back as `round12(x)`, switching to
/// exponent notation for very large or small magnitudes.
pub fn format_number(x: f64) -> String {
    format!("{:?}", round12(x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for CsvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for CsvError {}

pub fn emit(header: &str, points: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(24 * (points.len() + 1));
    out.push_str(header);
    out.push('\n');
    for &(a, b) in points {
        out.push_str(&format_number(a));
        out.push(',');
        out.push_str(&format_number(b));
        out.push('\n');
    }
    out
}

pub fn emit_curve(points: &[(f64, f64)]) -> String {
    emit(CURVE_HEADER, points)
}

fn field(text: &str, line: usize, name: &str) -> Result<f64, CsvError> {
    let err = |message: String| CsvError { line, message };
    if text.is_empty() || text.trim() != text {
        return Err(err(format!("malformed {name} field {text:?}")));
    }
    let v: f64 = text
        .parse()
        .map_err(|_| err(format!("cannot parse {name} field {text:?}")))?;
    if !v.is_finite() {
        return Err(err(format!("non-finite {name} {text:?}")));
    }
    Ok(v)
}

/// Parses a curve file: δ strictly increasing in (0, 1], ρ in (0, 1).
pub fn parse_curve(text: &str) -> Result<Vec<(f64, f64)>, CsvError> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    match lines.next() {
        Some((_, CURVE_HEADER)) => {}
        Some((_, other)) => {
            return Err(CsvError {
                line: 1,
                message: format!("expected header {CURVE_HEADER:?}, found {other:?}"),
            })
        }
        None => unreachable!("split yields at least one item"),
    }
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut trailing_blank = None;
    for (line, content) in lines {
        if let Some(blank) = trailing_blank {
            return Err(CsvError {
                line: blank,
                message: "empty line".into(),
            });
        }
        if content.is_empty() {
            trailing_blank = Some(line);
            continue;
        }
        let mut parts = content.split(',');
        let (Some(d), Some(r), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(CsvError {
                line,
                message: format!("expected two fields, found {content:?}"),
            });
        };
        let delta = field(d, line, "delta")?;
        let rho = field(r, line, "rho")?;
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(CsvError {
                line,
                message: format!("delta={delta} outside (0, 1]"),
            });
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(CsvError {
                line,
                message: format!("rho={rho} outside (0, 1)"),
            });
        }
        if let Some(&(prev, _)) = points.last() {
            if delta <= prev {
                return Err(CsvError {
                    line,
                    message: format!("delta={delta} does not increase (previous {prev})"),
                });
            }
        }
        points.push((delta, rho));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(1e-9), "1e-9");
        assert_eq!(format_number(123_456_789.123_456_79), "123456789.123");
        assert_eq!(format_number(2.0), "2.0");
        assert_eq!(format_number(-3.25e-300), "-3.25e-300");
    }

    #[test]
    fn round_trip() {
        let pts = vec![(0.39, 1.0 / 7.0), (0.5, 0.123456789012345), (0.99, 0.5)];
        let text = emit_curve(&pts);
        let back = parse_curve(&text).unwrap();
        for (a, b) in pts.iter().zip(&back) {
            assert_eq!(round12(a.0), b.0);
            assert_eq!(round12(a.1), b.1);
        }
        assert_eq!(emit_curve(&back), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_curve("delta,rho\n0.5,0.1\n0.4,0.1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_curve("delta,rho\n0.5,1.2\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_curve("d,r\n0.5,0.1\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_curve("delta,rho\n0.5,0.1,3\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_curve("delta,rho\n0.5,0.1\n\n0.6,0.2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_curve("delta,rho\n0.5,NaN\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_curve("delta,rho\n0.5, 0.1\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn accepts_crlf_and_missing_final_newline() {
        assert_eq!(
            parse_curve("delta,rho\r\n0.5,0.1\r\n0.6,0.2").unwrap(),
            vec![(0.5, 0.1), (0.6, 0.2)]
        );
        assert!(parse_curve("delta,rho\n").unwrap().is_empty());
    }
}
