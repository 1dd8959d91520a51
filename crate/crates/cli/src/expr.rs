//! Operator expressions: Pauli sums such as `1.0*XI + 0.5*ZZ`, matrix
//! literals such as `[[1, 0], [0, [0, -1]]]` (entries are reals or
//! `[re, im]` pairs) and direct sums of those joined by `++`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::Value;

pub type CMatrix = DMatrix<Complex64>;

/// Error at a byte offset of the expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

impl ExprError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset,
            message: message.into(),
        }
    }
}

pub fn parse_operator(src: &str) -> Result<CMatrix, ExprError> {
    let mut blocks = Vec::new();
    for (start, part) in split_direct_sum(src) {
        let lead = part.len() - part.trim_start().len();
        let body = part.trim();
        if body.is_empty() {
            return Err(ExprError::new(start + lead, "empty block"));
        }
        let offset = start + lead;
        let m = if body.starts_with('[') {
            parse_matrix_literal(body).map_err(|msg| ExprError::new(offset, msg))?
        } else {
            parse_pauli_sum(body).map_err(|e| ExprError::new(offset + e.offset, e.message))?
        };
        blocks.push(m);
    }
    Ok(direct_sum(&blocks))
}

/// Splits on `++` outside brackets, keeping the byte offset of each part.
fn split_direct_sum(src: &str) -> Vec<(usize, &str)> {
    let bytes = src.as_bytes();
    let mut parts = Vec::new();
    let (mut depth, mut start, mut i) = (0i32, 0usize, 0usize);
    while i < bytes.len() {
        match bytes[i] {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b'+' if depth == 0 && bytes.get(i + 1) == Some(&b'+') => {
                parts.push((start, &src[start..i]));
                i += 2;
                start = i;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push((start, &src[start..]));
    parts
}

fn direct_sum(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.nrows();
    }
    out
}

fn parse_matrix_literal(src: &str) -> Result<CMatrix, String> {
    let value: Value = serde_json::from_str(src).map_err(|e| format!("bad matrix literal: {e}"))?;
    let rows = value.as_array().ok_or("matrix literal must be an array of rows")?;
    let n = rows.len();
    if n == 0 {
        return Err("matrix literal is empty".into());
    }
    let mut m = CMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| format!("row {i} is not an array"))?;
        if row.len() != n {
            return Err(format!("row {i} has {} entries, expected {n}", row.len()));
        }
        for (j, entry) in row.iter().enumerate() {
            m[(i, j)] = entry_value(entry).ok_or_else(|| format!("entry ({i}, {j}) is not a number or [re, im]"))?;
        }
    }
    Ok(m)
}

fn entry_value(v: &Value) -> Option<Complex64> {
    if let Some(x) = v.as_f64() {
        return Some(Complex64::new(x, 0.0));
    }
    match v.as_array()?.as_slice() {
        [re, im] => Some(Complex64::new(re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

fn pauli(c: char) -> Option<CMatrix> {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let entries = match c {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        _ => return None,
    };
    Some(CMatrix::from_row_slice(2, 2, &entries))
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn sign(&mut self) -> Option<f64> {
        let s = match self.peek()? {
            '+' => 1.0,
            '-' | '\u{2212}' => -1.0,
            _ => return None,
        };
        self.pos += self.peek().map_or(0, char::len_utf8);
        Some(s)
    }

    fn number(&mut self) -> Result<Option<f64>, ExprError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end == start {
            return Ok(None);
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            let digits = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            if k > digits {
                end = k;
            }
        }
        let text = &self.src[start..end];
        let x = text
            .parse::<f64>()
            .map_err(|_| ExprError::new(start, format!("bad coefficient `{text}`")))?;
        self.pos = end;
        Ok(Some(x))
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !c.is_alphanumeric() {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }
}

/// `[sign] [coef "*"] STRING { sign [coef "*"] STRING }` over `{I,X,Y,Z}^N`.
fn parse_pauli_sum(src: &str) -> Result<CMatrix, ExprError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut total: Option<CMatrix> = None;
    let mut width: Option<usize> = None;
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            if first {
                return Err(ExprError::new(cur.pos, "empty expression"));
            }
            break;
        }
        let sign = match cur.sign() {
            Some(s) => s,
            None if first => 1.0,
            None => return Err(ExprError::new(cur.pos, "expected `+` or `-` between terms")),
        };
        first = false;
        cur.skip_ws();
        let coef = match cur.number()? {
            Some(c) => {
                cur.skip_ws();
                if cur.peek() != Some('*') {
                    return Err(ExprError::new(cur.pos, "expected `*` after coefficient"));
                }
                cur.pos += 1;
                cur.skip_ws();
                c
            }
            None => 1.0,
        };
        let at = cur.pos;
        let word = cur.word();
        if word.is_empty() {
            return Err(ExprError::new(at, "expected a Pauli string"));
        }
        let mut op: Option<CMatrix> = None;
        for (k, c) in word.char_indices() {
            let p = pauli(c).ok_or_else(|| ExprError::new(at + k, format!("`{c}` is not one of I, X, Y, Z")))?;
            op = Some(match op {
                None => p,
                Some(acc) => acc.kronecker(&p),
            });
        }
        let n = word.chars().count();
        if *width.get_or_insert(n) != n {
            return Err(ExprError::new(at, format!("Pauli string of length {n}, expected {}", width.unwrap())));
        }
        let term = op.expect("non-empty word") * Complex64::new(sign * coef, 0.0);
        total = Some(match total {
            None => term,
            Some(t) => t + term,
        });
    }
    Ok(total.expect("at least one term"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_sum_matches_kronecker_products() {
        let m = parse_operator("1.0*XI + 0.5*ZZ").unwrap();
        let x = pauli('X').unwrap();
        let z = pauli('Z').unwrap();
        let id = pauli('I').unwrap();
        let expected = x.kronecker(&id) + z.kronecker(&z) * c(0.5, 0.0);
        assert!((m - expected).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn signs_and_implicit_coefficients() {
        let m = parse_operator("-Z + 2e-1*X").unwrap();
        assert_eq!(m[(0, 0)], c(-1.0, 0.0));
        assert_eq!(m[(0, 1)], c(0.2, 0.0));
        let m = parse_operator("X \u{2212} Y").unwrap();
        assert_eq!(m[(0, 1)], c(1.0, 1.0));
    }

    #[test]
    fn bad_letter_is_located() {
        let e = parse_operator("1.0*XQ").unwrap_err();
        assert_eq!(e.offset, 5);
    }

    #[test]
    fn mixed_lengths_are_rejected() {
        assert!(parse_operator("XX + Z").is_err());
        assert!(parse_operator("2.0 X").is_err());
        assert!(parse_operator("X Z").is_err());
    }

    #[test]
    fn direct_sum_of_pauli_and_literal() {
        let m = parse_operator("Z ++ [[1]]").unwrap();
        assert_eq!(m.nrows(), 3);
        assert_eq!(m[(1, 1)], c(-1.0, 0.0));
        assert_eq!(m[(2, 2)], c(1.0, 0.0));
        assert_eq!(m[(0, 2)], c(0.0, 0.0));
    }

    #[test]
    fn complex_literal_entries() {
        let m = parse_operator("[[0, [0, -1]], [[0, 1], 0]]").unwrap();
        assert_eq!(m, pauli('Y').unwrap());
        let e = parse_operator("X ++ [[1, 2]]").unwrap_err();
        assert_eq!(e.offset, 5);
    }
}
