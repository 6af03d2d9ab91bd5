//! Parser for witness polynomials given on the command line, e.g.
//! "x1*y4 - x2*y3" or "2*x1^2 - 3". Variables are x1..xn and y1..yn with
//! 1-based indices; coefficients are integers.

use largeness::poly::Monomial;
use largeness::ring::{Rationals, Ring};
use largeness::PolyQ;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Var(usize),
    Star,
    Caret,
    Plus,
    Minus,
}

fn tokenize(text: &str, n: usize) -> Result<Vec<Tok>, String> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'*' => {
                out.push(Tok::Star);
                i += 1;
            }
            b'^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            b'+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            b'-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: i64 = text[start..i]
                    .parse()
                    .map_err(|_| format!("number out of range at byte {start}"))?;
                out.push(Tok::Num(v));
            }
            c @ (b'x' | b'y') => {
                let start = i;
                i += 1;
                let digits = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits {
                    return Err(format!(
                        "variable at byte {start} needs an index (x1..x{n}, y1..y{n})"
                    ));
                }
                let idx: usize = text[digits..i]
                    .parse()
                    .map_err(|_| format!("variable index out of range at byte {start}"))?;
                if idx == 0 || idx > n {
                    return Err(format!(
                        "{}{idx} is out of range (indices run 1..{n})",
                        c as char
                    ));
                }
                let base = if c == b'x' { 0 } else { n };
                out.push(Tok::Var(base + idx - 1));
            }
            c => return Err(format!("unexpected character `{}` at byte {i}", c as char)),
        }
    }
    Ok(out)
}

/// Parse an integer polynomial in x1..xn, y1..yn into 2n variables
/// (x block first).
pub fn parse_witness(text: &str, n: usize) -> Result<PolyQ, String> {
    let ring = Rationals;
    let toks = tokenize(text, n)?;
    let mut poly = PolyQ::zero(2 * n);
    let mut pos = 0;
    if toks.is_empty() {
        return Err("empty witness".into());
    }
    while pos < toks.len() {
        let mut sign = 1i64;
        match toks[pos] {
            Tok::Plus => pos += 1,
            Tok::Minus => {
                sign = -1;
                pos += 1;
            }
            _ if pos == 0 => {}
            _ => return Err("expected `+` or `-` between terms".into()),
        }
        let mut coef = ring.from_i64(sign);
        let mut exps = vec![0u16; 2 * n];
        loop {
            match toks.get(pos) {
                Some(&Tok::Num(v)) => {
                    coef = ring.mul(&coef, &ring.from_i64(v));
                    pos += 1;
                }
                Some(&Tok::Var(j)) => {
                    pos += 1;
                    let mut e = 1u16;
                    if toks.get(pos) == Some(&Tok::Caret) {
                        pos += 1;
                        match toks.get(pos) {
                            Some(&Tok::Num(v)) if (1..=u16::MAX as i64).contains(&v) => {
                                e = v as u16;
                                pos += 1;
                            }
                            _ => return Err("`^` must be followed by a positive integer".into()),
                        }
                    }
                    exps[j] = exps[j]
                        .checked_add(e)
                        .ok_or("exponent overflow in witness")?;
                }
                _ => return Err("expected a number or a variable".into()),
            }
            if toks.get(pos) == Some(&Tok::Star) {
                pos += 1;
            } else {
                break;
            }
        }
        poly.add_term(Monomial::from_exps(&exps), coef, &ring);
    }
    if poly.is_zero() {
        return Err("witness is the zero polynomial".into());
    }
    Ok(poly)
}
