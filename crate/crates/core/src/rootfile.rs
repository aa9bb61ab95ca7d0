//! Root-list files: one real root per line, complex pairs as `c: re,im`.
//! Blank lines and `#` comments are ignored.

use thiserror::Error;

use crate::exact::{parse_rational, ExactError, ExactPair, ExactRootSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootFileError {
    #[error("line {line}: {source}")]
    Value { line: usize, source: ExactError },
    #[error("line {line}: expected `c: re,im`")]
    PairSyntax { line: usize },
    #[error("line {line}: imaginary part must be positive")]
    NonPositiveImaginary { line: usize },
    #[error("line {line}: zero root")]
    ZeroRoot { line: usize },
    #[error("no roots given")]
    Empty,
}

/// Parses a root list exactly, keeping the decimals as written.
pub fn parse_root_list(text: &str) -> Result<ExactRootSpec, RootFileError> {
    let mut spec = ExactRootSpec::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let value = |s: &str| parse_rational(s.trim()).map_err(|source| RootFileError::Value { line, source });
        if let Some(rest) = content.strip_prefix("c:") {
            let (re, im) = rest.split_once(',').ok_or(RootFileError::PairSyntax { line })?;
            let (re, im) = (value(re)?, value(im)?);
            if im <= num_traits::Zero::zero() {
                return Err(RootFileError::NonPositiveImaginary { line });
            }
            let norm_sqr = &re * &re + &im * &im;
            spec.complex_pairs.push(ExactPair { re, norm_sqr });
        } else {
            let r = value(content)?;
            if num_traits::Zero::is_zero(&r) {
                return Err(RootFileError::ZeroRoot { line });
            }
            spec.real_roots.push(r);
        }
    }
    if spec.degree() == 0 {
        return Err(RootFileError::Empty);
    }
    Ok(spec)
}

pub fn format_root_list(spec: &crate::poly::RootSpec) -> String {
    let mut out = String::new();
    for r in &spec.real_roots {
        out.push_str(&format!("{r}\n"));
    }
    for p in &spec.complex_pairs {
        out.push_str(&format!("c: {},{}\n", p.re, p.im));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational as q;

    #[test]
    fn parses_reals_and_pairs() {
        let s = parse_root_list("# witness\n-0.19\n0.13  # small\n\nc: 0.5, 2\n").unwrap();
        assert_eq!(s.real_roots, vec![q("-0.19").unwrap(), q("0.13").unwrap()]);
        assert_eq!(s.complex_pairs[0].re, q("0.5").unwrap());
        assert_eq!(s.complex_pairs[0].norm_sqr, q("4.25").unwrap());
        assert_eq!(s.degree(), 4);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(parse_root_list("1\nabc\n"), Err(RootFileError::Value { line: 2, .. })));
        assert_eq!(parse_root_list("c: 1\n"), Err(RootFileError::PairSyntax { line: 1 }));
        assert_eq!(parse_root_list("c: 1,-2\n"), Err(RootFileError::NonPositiveImaginary { line: 1 }));
        assert_eq!(parse_root_list("0\n"), Err(RootFileError::ZeroRoot { line: 1 }));
        assert_eq!(parse_root_list("# nothing\n"), Err(RootFileError::Empty));
    }

    #[test]
    fn round_trip() {
        let spec = crate::poly::RootSpec::new(vec![0.25, -3.0], vec![crate::poly::ComplexPair::new(-1.5, 0.5)]);
        let back = parse_root_list(&format_root_list(&spec)).unwrap().to_float();
        assert_eq!(back, spec);
    }
}
