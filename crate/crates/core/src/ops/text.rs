//! Plain-text operator format.
//!
//! One term per line, `<coeff> : <factor> <factor> ...`. Factors are `3^` (creation on mode 3),
//! `3` (annihilation), `g5` (Majorana 5) and `x2`, `y2`, `z2` (Pauli on qubit 2). Coefficients
//! are real (`-0.5`) or complex (`0.5+0.25i`, `2i`). Everything after `#` is a comment, except
//! the directives `# family: <name>` and `# modes: <N>`.

use std::fmt::Write as _;

use super::poly::OperatorPolynomial;
use super::string::{Axis, Factor, Family};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Cplx, Real};

/// Parses a polynomial. Explicit `family`/`modes` override the file directives; when neither is
/// given the family comes from the first factor and the mode count from the largest index.
pub fn parse_polynomial<T: Real>(
    src: &str,
    family: Option<Family>,
    modes: Option<usize>,
) -> Result<OperatorPolynomial<T>> {
    let mut fam = family;
    let mut declared = modes;
    let mut terms: Vec<(usize, Cplx<T>, Vec<Factor>)> = Vec::new();

    for (n, raw) in src.lines().enumerate() {
        let line_no = n + 1;
        let (body, comment) = match raw.find('#') {
            Some(k) => (&raw[..k], Some(&raw[k + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if body.trim().is_empty() {
                directive(c, line_no, &mut fam, family.is_some(), &mut declared, modes.is_some())?;
            }
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (coeff_src, factors_src) = body.split_once(':').ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected `<coeff> : <factors>`".into(),
        })?;
        let coeff = parse_coefficient::<T>(coeff_src.trim()).ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("bad coefficient `{}`", coeff_src.trim()),
        })?;
        let mut factors = Vec::new();
        for tok in factors_src.split_whitespace() {
            let f = parse_factor(tok).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("bad factor `{tok}`"),
            })?;
            match fam {
                None => fam = Some(f.family()),
                Some(existing) if existing != f.family() => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("{} factor `{tok}` in a {existing} polynomial", f.family()),
                    })
                }
                _ => {}
            }
            if f.index() == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "indices start at 1".into(),
                });
            }
            factors.push(f);
        }
        terms.push((line_no, coeff, factors));
    }

    let fam = fam.unwrap_or(Family::Fermionic);
    let max_index = terms
        .iter()
        .flat_map(|t| t.2.iter().map(Factor::index))
        .max()
        .unwrap_or(0);
    let n_modes = match declared {
        Some(n) => n,
        None => match fam {
            Family::Majorana => max_index.div_ceil(2),
            _ => max_index,
        },
    };
    let mut p = OperatorPolynomial::zero(fam, n_modes);
    for (line, coeff, factors) in terms {
        if let Some(f) = factors.iter().find(|f| f.index() > fam.max_index(n_modes)) {
            return Err(Error::Parse {
                line,
                message: format!("index {} exceeds the declared {n_modes} modes", f.index()),
            });
        }
        p.add_word(&factors, coeff).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
    }
    Ok(p)
}

fn directive(
    comment: &str,
    line: usize,
    fam: &mut Option<Family>,
    fam_fixed: bool,
    modes: &mut Option<usize>,
    modes_fixed: bool,
) -> Result<()> {
    let Some((key, value)) = comment.split_once(':') else {
        return Ok(());
    };
    let value = value.trim();
    match key.trim().to_ascii_lowercase().as_str() {
        "family" if !fam_fixed => {
            let f = value.parse::<Family>().map_err(|message| Error::Parse { line, message })?;
            *fam = Some(f);
        }
        "modes" | "qubits" if !modes_fixed => {
            let n = value.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("bad mode count `{value}`"),
            })?;
            *modes = Some(n);
        }
        _ => {}
    }
    Ok(())
}

fn parse_factor(tok: &str) -> Option<Factor> {
    let digits = |s: &str| -> Option<usize> {
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            s.parse().ok()
        } else {
            None
        }
    };
    if let Some(rest) = tok.strip_suffix('^') {
        return digits(rest).map(Factor::create);
    }
    if let Some(i) = digits(tok) {
        return Some(Factor::annihilate(i));
    }
    let (head, rest) = tok.split_at(1);
    let idx = digits(rest)?;
    match head {
        "g" => Some(Factor::Majorana(idx)),
        "x" => Some(Factor::Pauli { qubit: idx, axis: Axis::X }),
        "y" => Some(Factor::Pauli { qubit: idx, axis: Axis::Y }),
        "z" => Some(Factor::Pauli { qubit: idx, axis: Axis::Z }),
        _ => None,
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_coefficient<T: Real>(s: &str) -> Option<Cplx<T>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        let re: f64 = s.parse().ok()?;
        return Some(Cplx::new(lit(re), T::zero()));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => t.parse().ok(),
        }
    };
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, imag(&body[k..])?),
        None => (0.0, imag(body)?),
    };
    if !re.is_finite() || !im.is_finite() {
        return None;
    }
    Some(Cplx::new(lit(re), lit(im)))
}

/// Shortest round-trip rendering of a coefficient.
pub fn format_coefficient<T: Real>(c: Cplx<T>) -> String {
    let re = to_f64(c.re) + 0.0;
    let im = to_f64(c.im) + 0.0;
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

/// Renders a polynomial with its family and mode directives, one canonical term per line.
pub fn format_polynomial<T: Real>(p: &OperatorPolynomial<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# family: {}", p.family());
    let _ = writeln!(out, "# modes: {}", p.modes());
    for (s, c) in p.terms() {
        if s.is_identity() {
            let _ = writeln!(out, "{} :", format_coefficient(*c));
        } else {
            let _ = writeln!(out, "{} : {s}", format_coefficient(*c));
        }
    }
    out
}

/// Splits a multi-polynomial document on lines consisting of `---`.
pub fn parse_polynomial_list<T: Real>(
    src: &str,
    family: Option<Family>,
    modes: Option<usize>,
) -> Result<Vec<OperatorPolynomial<T>>> {
    // Directives in the preamble apply to every block.
    let mut preamble = String::new();
    let mut blocks: Vec<(usize, String)> = vec![(0, String::new())];
    for (n, line) in src.lines().enumerate() {
        if line.trim() == "---" {
            blocks.push((n + 1, String::new()));
            continue;
        }
        let trimmed = line.trim_start();
        if blocks.len() == 1 && trimmed.starts_with('#') {
            preamble.push_str(line);
            preamble.push('\n');
        }
        let block = &mut blocks.last_mut().expect("non-empty").1;
        block.push_str(line);
        block.push('\n');
    }
    let mut out = Vec::new();
    let mut fam = family;
    let mut n_modes = modes;
    if fam.is_none() || n_modes.is_none() {
        let head: OperatorPolynomial<T> = parse_polynomial(&preamble, fam, n_modes)?;
        if fam.is_none() && preamble.to_ascii_lowercase().contains("family") {
            fam = Some(head.family());
        }
        if n_modes.is_none() && preamble.to_ascii_lowercase().contains("modes") {
            n_modes = Some(head.modes());
        }
    }
    for (offset, block) in blocks {
        if block.lines().all(|l| {
            let t = l.trim();
            t.is_empty() || t.starts_with('#')
        }) {
            continue;
        }
        let p = parse_polynomial(&block, fam, n_modes).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse {
                line: line + offset,
                message,
            },
            other => other,
        })?;
        out.push(p);
    }
    // Bring every block to a common mode count.
    let n = out.iter().map(OperatorPolynomial::modes).max().unwrap_or(0);
    out.into_iter().map(|p| p.with_modes(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_forms() {
        let c = |s| parse_coefficient::<f64>(s).unwrap();
        assert_eq!(c("1.5"), Cplx::new(1.5, 0.0));
        assert_eq!(c("0.5+0.25i"), Cplx::new(0.5, 0.25));
        assert_eq!(c("0.5-0.25i"), Cplx::new(0.5, -0.25));
        assert_eq!(c("-i"), Cplx::new(0.0, -1.0));
        assert_eq!(c("2i"), Cplx::new(0.0, 2.0));
        assert_eq!(c("1e-3-2e-4i"), Cplx::new(1e-3, -2e-4));
        assert!(parse_coefficient::<f64>("abc").is_none());
    }

    #[test]
    fn malformed_factor_reports_line() {
        let err = parse_polynomial::<f64>("# comment\n0.5 : 3^^\n", None, None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn empty_source_is_zero() {
        let p = parse_polynomial::<f64>("", None, None).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn declared_modes_are_enforced() {
        let err = parse_polynomial::<f64>("# modes: 2\n1 : 3^ 1\n", None, None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn print_parse_round_trip() {
        let src = "# family: fermionic\n# modes: 3\n0.25 :\n-1.5+2i : 2^ 1\n11 : 2^ 1^ 2 1\n";
        let p = parse_polynomial::<f64>(src, None, None).unwrap();
        let printed = format_polynomial(&p);
        let q = parse_polynomial::<f64>(&printed, None, None).unwrap();
        assert_eq!(p, q);
        assert_eq!(printed, format_polynomial(&q));
    }

    #[test]
    fn polynomial_list_blocks() {
        let src = "# family: pauli\n0+1i : z1\n---\n0+1i : x1\n";
        let ps = parse_polynomial_list::<f64>(src, None, None).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[1].family(), Family::Pauli);
    }
}
