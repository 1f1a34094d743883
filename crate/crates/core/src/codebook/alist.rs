//! Reader and writer for the alist sparse-matrix text format.

use super::{CodeKind, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self {
            inner: it.peekable(),
            last: 0,
        }
    }

    /// Next non-empty line parsed as unsigned integers.
    fn numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        let (ln, line) = self
            .inner
            .next()
            .ok_or_else(|| parse_err(self.last + 1, format!("unexpected end of input, expected {what}")))?;
        self.last = ln;
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("not an integer: {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok((ln, nums))
    }

    fn exact(&mut self, count: usize, what: &str) -> Result<(usize, Vec<usize>)> {
        let (ln, nums) = self.numbers(what)?;
        if nums.len() != count {
            return Err(parse_err(ln, format!("expected {count} values for {what}, found {}", nums.len())));
        }
        Ok((ln, nums))
    }
}

/// Parses an alist parity-check matrix. The row lists must agree with the
/// column lists; zero entries are treated as padding.
pub fn parse_alist_matrix(text: &str) -> Result<BitMatrix> {
    let mut lines = Lines::new(text);
    let (_, dims) = lines.exact(2, "\"n m\" header")?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(parse_err(1, "matrix dimensions must be positive"));
    }
    let (ln, maxdeg) = lines.exact(2, "maximum degrees")?;
    let (max_col, max_row) = (maxdeg[0], maxdeg[1]);
    let (ln_c, col_deg) = lines.exact(n, "column degrees")?;
    let (ln_r, row_deg) = lines.exact(m, "row degrees")?;
    if let Some(&d) = col_deg.iter().find(|&&d| d > max_col) {
        return Err(parse_err(ln_c, format!("column degree {d} exceeds declared maximum {max_col}")));
    }
    if let Some(&d) = row_deg.iter().find(|&&d| d > max_row) {
        return Err(parse_err(ln_r, format!("row degree {d} exceeds declared maximum {max_row}")));
    }
    let _ = ln;

    let mut h = BitMatrix::zeros(m, n);
    for (c, &deg) in col_deg.iter().enumerate() {
        let (ln, entries) = lines.numbers("column index list")?;
        let idx: Vec<usize> = entries.into_iter().filter(|&e| e != 0).collect();
        if idx.len() != deg {
            return Err(parse_err(ln, format!("column {} lists {} entries, degree is {deg}", c + 1, idx.len())));
        }
        for r in idx {
            if r > m {
                return Err(parse_err(ln, format!("row index {r} out of range 1..={m}")));
            }
            if h.get(r - 1, c) {
                return Err(parse_err(ln, format!("duplicate row index {r}")));
            }
            h.set(r - 1, c, true);
        }
    }
    for (r, &deg) in row_deg.iter().enumerate() {
        let (ln, entries) = lines.numbers("row index list")?;
        let idx: Vec<usize> = entries.into_iter().filter(|&e| e != 0).collect();
        if idx.len() != deg {
            return Err(parse_err(ln, format!("row {} lists {} entries, degree is {deg}", r + 1, idx.len())));
        }
        for c in idx {
            if c > n {
                return Err(parse_err(ln, format!("column index {c} out of range 1..={n}")));
            }
            if !h.get(r, c - 1) {
                return Err(parse_err(ln, format!("row {} entry {c} absent from column lists", r + 1)));
            }
        }
    }
    Ok(h)
}

/// Loads a code from an alist parity-check matrix.
pub fn load_alist(text: &str) -> Result<LinearCode> {
    let h = parse_alist_matrix(text)?;
    LinearCode::from_parity_check(h, CodeKind::FromFile)
}

/// Serializes a parity-check matrix in alist format (no zero padding).
pub fn write_alist(h: &BitMatrix) -> String {
    let (m, n) = (h.nrows(), h.ncols());
    let t = h.transpose();
    let cols: Vec<Vec<usize>> = (0..n).map(|c| t.row(c).ones()).collect();
    let rows: Vec<Vec<usize>> = (0..m).map(|r| h.row(r).ones()).collect();
    let join = |v: &[usize], off: usize| v.iter().map(|x| (x + off).to_string()).collect::<Vec<_>>().join(" ");
    let degs = |v: &[Vec<usize>]| v.iter().map(Vec::len).collect::<Vec<_>>();
    let mut out = format!("{n} {m}\n");
    let (cd, rd) = (degs(&cols), degs(&rows));
    out += &format!("{} {}\n", cd.iter().max().unwrap_or(&0), rd.iter().max().unwrap_or(&0));
    out += &(join(&cd, 0) + "\n");
    out += &(join(&rd, 0) + "\n");
    // Lists are zero-padded to the maximum degree so no line is empty.
    let padded = |v: &[usize], width: usize| {
        let mut s = join(v, 1);
        for _ in v.len()..width {
            s += if s.is_empty() { "0" } else { " 0" };
        }
        s + "\n"
    };
    let (cmax, rmax) = (cd.iter().max().copied().unwrap_or(0), rd.iter().max().copied().unwrap_or(0));
    for c in &cols {
        out += &padded(c, cmax);
    }
    for r in &rows {
        out += &padded(r, rmax);
    }
    out
}
