//! Text formats for arrays (`.moa`), difference schemes (`.ds`), and
//! states (`.qst`).
//!
//! `.moa`: line 1 `r N k`, line 2 the `N` column levels, then `r` symbol
//! rows. `.ds`: line 1 `s N d t`, then `s` rows. `.qst`: line 1 `N`,
//! line 2 the dimensions, then one `j_1 … j_N re im` line per amplitude.
//! Floats are written in shortest round-trip form, so write-then-read
//! reproduces every object exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::arrays::MixedArray;
use crate::error::{Error, Result};
use crate::matrix::SymbolMatrix;
use crate::schemes::DifferenceScheme;
use crate::states::PureState;

/// Entry convention of an imported Hadamard/scheme file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeForm {
    /// Entries are already symbols in `0..d`.
    Symbols,
    /// Entries are `+1`/`-1`; `-1` maps to 0 (only meaningful for `d = 2`).
    PlusMinusOne,
}

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what}: {tok:?}")))
}

/// Lines with content, paired with their 1-based line numbers; `#` starts a
/// comment.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

pub fn parse_moa(text: &str) -> Result<MixedArray> {
    let lines = content_lines(text);
    if lines.is_empty() {
        return Err(Error::parse(1, "empty array file"));
    }
    let (hline, header) = lines[0];
    let h = tokens(header);
    if h.len() != 3 {
        return Err(Error::parse(hline, "header must be `r N k`"));
    }
    let r: usize = parse_num(h[0], hline, "row count")?;
    let n: usize = parse_num(h[1], hline, "column count")?;
    let k: u32 = parse_num(h[2], hline, "strength")?;
    if lines.len() < 2 {
        return Err(Error::parse(hline, "missing levels line"));
    }
    let (lline, levels_line) = lines[1];
    let level_toks = tokens(levels_line);
    if level_toks.len() != n {
        return Err(Error::parse(
            lline,
            format!("expected {n} levels, found {}", level_toks.len()),
        ));
    }
    let levels: Vec<u32> = level_toks
        .iter()
        .map(|t| parse_num(t, lline, "level"))
        .collect::<Result<_>>()?;
    if lines.len() != 2 + r {
        return Err(Error::parse(
            lines.last().map(|&(l, _)| l).unwrap_or(lline),
            format!("expected {r} rows, found {}", lines.len() - 2),
        ));
    }
    let mut data = Vec::with_capacity(r * n);
    for (i, &(lnum, row_line)) in lines[2..].iter().enumerate() {
        let toks = tokens(row_line);
        if toks.len() != n {
            return Err(Error::parse(
                lnum,
                format!("expected {n} symbols, found {}", toks.len()),
            ));
        }
        for (j, tok) in toks.iter().enumerate() {
            let s: u32 = parse_num(tok, lnum, "symbol")?;
            if s >= levels[j] {
                return Err(Error::parse(
                    lnum,
                    format!(
                        "symbol {s} out of range for level {} (row {}, column {})",
                        levels[j],
                        i + 1,
                        j + 1
                    ),
                ));
            }
            data.push(s);
        }
    }
    MixedArray::new(&levels, data, k)
}

pub fn write_moa(array: &MixedArray) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {}",
        array.row_count(),
        array.column_count(),
        array.claimed_strength()
    );
    let levels: Vec<String> = array
        .signature()
        .levels()
        .iter()
        .map(u32::to_string)
        .collect();
    let _ = writeln!(out, "{}", levels.join(" "));
    for row in array.rows_iter() {
        let syms: Vec<String> = row.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", syms.join(" "));
    }
    out
}

pub fn parse_scheme(text: &str, form: SchemeForm) -> Result<DifferenceScheme> {
    let lines = content_lines(text);
    if lines.is_empty() {
        return Err(Error::parse(1, "empty scheme file"));
    }
    let (hline, header) = lines[0];
    let h = tokens(header);
    if h.len() != 4 {
        return Err(Error::parse(hline, "header must be `s N d t`"));
    }
    let s: usize = parse_num(h[0], hline, "row count")?;
    let n: usize = parse_num(h[1], hline, "column count")?;
    let d: u32 = parse_num(h[2], hline, "modulus")?;
    let t: u32 = parse_num(h[3], hline, "strength")?;
    if form == SchemeForm::PlusMinusOne && d != 2 {
        return Err(Error::parse(
            hline,
            "plus/minus-one form requires modulus 2",
        ));
    }
    if lines.len() != 1 + s {
        return Err(Error::parse(
            lines.last().map(|&(l, _)| l).unwrap_or(hline),
            format!("expected {s} rows, found {}", lines.len() - 1),
        ));
    }
    let mut data = Vec::with_capacity(s * n);
    for &(lnum, row_line) in &lines[1..] {
        let toks = tokens(row_line);
        if toks.len() != n {
            return Err(Error::parse(
                lnum,
                format!("expected {n} entries, found {}", toks.len()),
            ));
        }
        for tok in toks {
            let entry = match form {
                SchemeForm::Symbols => {
                    let v: u32 = parse_num(tok, lnum, "entry")?;
                    if v >= d {
                        return Err(Error::parse(
                            lnum,
                            format!("entry {v} out of range for Z_{d}"),
                        ));
                    }
                    v
                }
                SchemeForm::PlusMinusOne => match parse_num::<i64>(tok, lnum, "entry")? {
                    1 => 1,
                    -1 => 0,
                    other => {
                        return Err(Error::parse(
                            lnum,
                            format!("entry {other} is neither +1 nor -1"),
                        ))
                    }
                },
            };
            data.push(entry);
        }
    }
    DifferenceScheme::new(d, SymbolMatrix::new(s, n, data)?, t)
}

pub fn write_scheme(scheme: &DifferenceScheme) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {}",
        scheme.rows(),
        scheme.cols(),
        scheme.modulus(),
        scheme.strength()
    );
    for row in scheme.matrix().row_iter() {
        let syms: Vec<String> = row.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", syms.join(" "));
    }
    out
}

pub fn parse_state(text: &str) -> Result<PureState> {
    let lines = content_lines(text);
    if lines.len() < 3 {
        return Err(Error::parse(1, "state file needs N, dims, and amplitudes"));
    }
    let (hline, header) = lines[0];
    let n: usize = parse_num(
        tokens(header)
            .first()
            .ok_or_else(|| Error::parse(hline, "missing party count"))?,
        hline,
        "party count",
    )?;
    let (dline, dims_line) = lines[1];
    let dim_toks = tokens(dims_line);
    if dim_toks.len() != n {
        return Err(Error::parse(
            dline,
            format!("expected {n} dimensions, found {}", dim_toks.len()),
        ));
    }
    let dims: Vec<u32> = dim_toks
        .iter()
        .map(|t| parse_num(t, dline, "dimension"))
        .collect::<Result<_>>()?;
    let mut amps = Vec::new();
    for &(lnum, line) in &lines[2..] {
        let toks = tokens(line);
        if toks.len() != n + 2 {
            return Err(Error::parse(
                lnum,
                format!("expected {} fields, found {}", n + 2, toks.len()),
            ));
        }
        let mut tuple = Vec::with_capacity(n);
        for (j, tok) in toks[..n].iter().enumerate() {
            let x: u32 = parse_num(tok, lnum, "index")?;
            if x >= dims[j] {
                return Err(Error::parse(
                    lnum,
                    format!("index {x} out of range for dimension {} (column {})", dims[j], j + 1),
                ));
            }
            tuple.push(x);
        }
        let re: f64 = parse_num(toks[n], lnum, "real part")?;
        let im: f64 = parse_num(toks[n + 1], lnum, "imaginary part")?;
        amps.push((tuple, Complex64::new(re, im)));
    }
    PureState::new(dims, amps)
}

pub fn write_state(state: &PureState) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", state.party_count());
    let dims: Vec<String> = state.dims().iter().map(u32::to_string).collect();
    let _ = writeln!(out, "{}", dims.join(" "));
    for (tuple, amp) in state.amplitudes() {
        let idx: Vec<String> = tuple.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{} {} {}", idx.join(" "), amp.re, amp.im);
    }
    out
}

pub fn read_moa_file(path: impl AsRef<Path>) -> Result<MixedArray> {
    parse_moa(&std::fs::read_to_string(path)?)
}

pub fn read_scheme_file(path: impl AsRef<Path>, form: SchemeForm) -> Result<DifferenceScheme> {
    parse_scheme(&std::fs::read_to_string(path)?, form)
}

pub fn read_state_file(path: impl AsRef<Path>) -> Result<PureState> {
    parse_state(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::hadamard;
    use crate::testdata;

    #[test]
    fn moa_round_trip_is_exact() {
        for m in [testdata::moa_8(), testdata::moa_12(), testdata::moa_18()] {
            let text = write_moa(&m);
            let back = parse_moa(&text).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn scheme_round_trip_is_exact() {
        let h4 = hadamard(4).unwrap();
        let back = parse_scheme(&write_scheme(&h4), SchemeForm::Symbols).unwrap();
        assert_eq!(back.matrix(), h4.matrix());
        assert_eq!(back.strength(), h4.strength());
    }

    #[test]
    fn state_round_trip_is_exact() {
        let psi = testdata::state_42222();
        let back = parse_state(&write_state(&psi)).unwrap();
        assert_eq!(back.dims(), psi.dims());
        for (tuple, amp) in psi.amplitudes() {
            assert_eq!(back.amplitude(tuple), *amp);
        }
    }

    #[test]
    fn plus_minus_one_import_maps_to_binary() {
        let text = "2 2 2 2\n1 1\n1 -1\n";
        let scheme = parse_scheme(text, SchemeForm::PlusMinusOne).unwrap();
        assert_eq!(scheme.matrix().data(), &[1, 1, 1, 0]);
    }

    #[test]
    fn out_of_range_symbol_has_line_and_column() {
        let text = "2 2 1\n2 2\n0 0\n0 2\n";
        match parse_moa(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("column 2"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn truncated_file_is_rejected() {
        assert!(parse_moa("8 5 2\n4 2 2 2 2\n0 0 0 0 0\n").is_err());
        assert!(parse_moa("").is_err());
    }
}
