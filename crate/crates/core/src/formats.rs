//! Text formats: sequence files, generator spec files, spectrum CSV and
//! `r/m` residue tokens.

use crate::combiner::{AnfFunction, GeneratorSpec};
use crate::error::{Error, Result};
use crate::galois::{BinaryPoly, Field};
use crate::sequences::{bits_to_string, parse_bits, LfsrConfig};
use crate::spectra::Spectrum;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Content lines with 1-based numbers; blank lines and `#` comments skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// `period <n>` header followed by a line of bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceFile {
    pub period: u64,
    pub bits: Vec<bool>,
}

impl SequenceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "missing `period` header"))?;
        let period = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["period", n] => n.parse::<u64>().map_err(|e| parse_err(ln, format!("bad period: {e}")))?,
            _ => return Err(parse_err(ln, "expected `period <n>`")),
        };
        let bits = match lines.next() {
            Some((ln, l)) => parse_bits(l).map_err(|e| parse_err(ln, e.to_string()))?,
            None => Vec::new(),
        };
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "unexpected extra line"));
        }
        Ok(Self { period, bits })
    }

    pub fn render(&self) -> String {
        format!("period {}\n{}\n", self.period, bits_to_string(&self.bits))
    }
}

/// Parses a generator spec: `lfsr <poly-hex> <fill>` lines, then an optional
/// `anf <hex masks>` line. Without `anf` a single register is output as is.
pub fn parse_generator(text: &str) -> Result<GeneratorSpec> {
    parse_generator_with_limit(text, crate::combiner::DEFAULT_PERIOD_LIMIT)
}

pub fn parse_generator_with_limit(text: &str, period_limit: u64) -> Result<GeneratorSpec> {
    let mut lfsrs = Vec::new();
    let mut anf: Option<(usize, Vec<u64>)> = None;
    let mut last_line = 0;
    for (ln, line) in content_lines(text) {
        last_line = ln;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[..] {
            ["lfsr", poly, fill] => {
                if anf.is_some() {
                    return Err(parse_err(ln, "`lfsr` after `anf`"));
                }
                let poly = parse_hex_poly(poly).map_err(|e| parse_err(ln, e.to_string()))?;
                let init = parse_bits(fill).map_err(|e| parse_err(ln, e.to_string()))?;
                lfsrs.push(LfsrConfig::new(poly, init).map_err(|e| parse_err(ln, e.to_string()))?);
            }
            ["anf", masks] => {
                if anf.is_some() {
                    return Err(parse_err(ln, "duplicate `anf` line"));
                }
                let masks = masks
                    .split(',')
                    .map(|m| u64::from_str_radix(m.trim(), 16))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| parse_err(ln, format!("bad mask: {e}")))?;
                anf = Some((ln, masks));
            }
            _ => return Err(parse_err(ln, format!("unrecognised line `{line}`"))),
        }
    }
    if lfsrs.is_empty() {
        return Err(parse_err(last_line.max(1), "no `lfsr` lines"));
    }
    let (ln, f) = match anf {
        Some((ln, masks)) => (ln, AnfFunction::new(lfsrs.len(), masks).map_err(|e| parse_err(ln, e.to_string()))?),
        None if lfsrs.len() == 1 => (last_line, AnfFunction::new(1, [1])?),
        None => return Err(parse_err(last_line, "several registers need an `anf` line")),
    };
    GeneratorSpec::with_period_limit(lfsrs, f, period_limit).map_err(|e| parse_err(ln, e.to_string()))
}

pub fn render_generator(spec: &GeneratorSpec) -> String {
    let mut out = String::new();
    for l in spec.lfsrs() {
        out.push_str(&format!("lfsr {} {}\n", l.feedback().to_hex(), bits_to_string(l.init())));
    }
    out.push_str(&format!("anf {}\n", spec.function().to_mask_list()));
    out
}

/// Hex coefficient bitset only (no exponent lists).
fn parse_hex_poly(s: &str) -> Result<BinaryPoly> {
    if s.contains(',') {
        return Err(Error::Invalid(format!("expected a hex polynomial, got `{s}`")));
    }
    s.parse()
}

/// CSV: `n,<n>,modulus,<hex>` then `k,<exponent>` for each non-zero value.
/// Exponents are relative to `Field::order_n_element(n)` of that modulus;
/// any other base is named by a trailing `,base,<hex>` in the header.
pub fn render_spectrum(spec: &Spectrum) -> Result<String> {
    let field = spec.field();
    let n = spec.len() as u64;
    let mut out = format!("n,{n},modulus,{}", field.modulus().to_hex());
    if &field.order_n_element(n)? != spec.base() {
        out.push_str(&format!(",base,{:X}", spec.base().repr()));
    }
    out.push('\n');
    for (k, d) in spec.exponents()? {
        out.push_str(&format!("{k},{d}\n"));
    }
    Ok(out)
}

pub fn parse_spectrum(text: &str) -> Result<Spectrum> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let fields: Vec<&str> = header.split(',').map(str::trim).collect();
    let (n, modulus, base) = match fields[..] {
        ["n", n, "modulus", m] => (n, m, None),
        ["n", n, "modulus", m, "base", b] => (n, m, Some(b)),
        _ => return Err(parse_err(ln, "expected `n,<n>,modulus,<hex>`")),
    };
    let n = n.parse::<u64>().map_err(|e| parse_err(ln, format!("bad n: {e}")))?;
    let modulus = parse_hex_poly(modulus).map_err(|e| parse_err(ln, e.to_string()))?;
    let field = Field::new(modulus).map_err(|e| parse_err(ln, e.to_string()))?;
    let base = match base {
        Some(b) => u64::from_str_radix(b, 16)
            .map_err(|e| parse_err(ln, format!("bad base: {e}")))
            .and_then(|r| field.elt(r).map_err(|e| parse_err(ln, e.to_string())))?,
        None => field.order_n_element(n).map_err(|e| parse_err(ln, e.to_string()))?,
    };
    if base.order().map_err(|e| parse_err(ln, e.to_string()))? != n {
        return Err(parse_err(ln, format!("base does not have order {n}")));
    }
    let mut values = vec![field.zero(); n as usize];
    for (ln, line) in lines {
        let (k, d) = match line.split(',').map(str::trim).collect::<Vec<_>>()[..] {
            [k, d] => (
                k.parse::<usize>().map_err(|e| parse_err(ln, format!("bad index: {e}")))?,
                d.parse::<u64>().map_err(|e| parse_err(ln, format!("bad exponent: {e}")))?,
            ),
            _ => return Err(parse_err(ln, "expected `k,<exponent>`")),
        };
        if k >= n as usize {
            return Err(parse_err(ln, format!("index {k} out of range for n = {n}")));
        }
        values[k] = base.pow_u(d);
    }
    Spectrum::new(base, values)
}

/// Parses `r/m` into `(r, m)`; `r` may be negative.
pub fn parse_residue(token: &str) -> Result<(i64, u64)> {
    let bad = || Error::Invalid(format!("expected `r/m`, got `{token}`"));
    let (r, m) = token.split_once('/').ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::PeriodicSequence;
    use crate::spectra::dft;

    const MAJORITY: &str = "lfsr 7 01\nlfsr B 001\nlfsr 25 00001\nanf 3,6,5\n";

    #[test]
    fn sequence_file_round_trip() {
        let f = SequenceFile { period: 7, bits: parse_bits("0010111").unwrap() };
        assert_eq!(f.render(), "period 7\n0010111\n");
        assert_eq!(SequenceFile::parse(&f.render()).unwrap(), f);
        let empty = SequenceFile::parse("period 7\n").unwrap();
        assert!(empty.bits.is_empty());
        assert_eq!(
            SequenceFile::parse("perio 7\n"),
            Err(Error::Parse { line: 1, msg: "expected `period <n>`".into() })
        );
        assert!(matches!(SequenceFile::parse("period 7\n0102\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn generator_file() {
        let spec = parse_generator(MAJORITY).unwrap();
        assert_eq!(bits_to_string(&spec.generate(16)), "0010110101110110");
        assert_eq!(parse_generator(&render_generator(&spec)).unwrap(), spec);
        let single = parse_generator("# one register\nlfsr B 001\n").unwrap();
        assert_eq!(bits_to_string(&single.generate(7)), "0010111");
    }

    #[test]
    fn generator_file_errors() {
        let err = |text: &str| match parse_generator(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(err("lfsr 7 01\nlfsr B 0x1\nanf 3\n"), 2);
        assert_eq!(err("lfsr 7 01\nlfsr B 001\nanf 3,G\n"), 3);
        assert_eq!(err("lfsr 7 01\nlfsr B 001\nanf 4\n"), 3);
        assert_eq!(err("lfsr 7 01\nlfsr 13 0001\nanf 3\n"), 3);
        assert_eq!(err("lfsr 7 01\nbogus\n"), 2);
        assert_eq!(err("lfsr 7 01\nlfsr B 001\n"), 2);
        assert_eq!(err(""), 1);
        assert_eq!(err("lfsr 7 00\n"), 1);
    }

    #[test]
    fn spectrum_csv_round_trip() {
        let f3 = Field::new("B".parse().unwrap()).unwrap();
        let s = dft(&PeriodicSequence::new(parse_bits("0010111").unwrap()).unwrap(), &f3.x()).unwrap();
        let csv = render_spectrum(&s).unwrap();
        assert_eq!(csv, "n,7,modulus,B\n3,4\n5,2\n6,1\n");
        assert_eq!(parse_spectrum(&csv).unwrap(), s);
        assert!(matches!(parse_spectrum("n,7,modulus,B\n3,4\n"), Err(Error::NotConjugate(_))));
        assert!(matches!(parse_spectrum("n,7,modulus,B\n9,4\n"), Err(Error::Parse { line: 2, .. })));
        let other = dft(&PeriodicSequence::new(parse_bits("0010111").unwrap()).unwrap(), &f3.x().pow(3)).unwrap();
        let csv = render_spectrum(&other).unwrap();
        assert!(csv.starts_with("n,7,modulus,B,base,3\n"));
        assert_eq!(parse_spectrum(&csv).unwrap(), other);
        assert!(matches!(parse_spectrum("n,7,modulus,B,base,1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn residues() {
        assert_eq!(parse_residue("15/31").unwrap(), (15, 31));
        assert_eq!(parse_residue("-2/3").unwrap(), (-2, 3));
        assert!(parse_residue("15").is_err());
        assert!(parse_residue("a/3").is_err());
    }
}
