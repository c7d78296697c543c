use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraContext, AlgebraElement, Mono, Q};
use crate::error::{Error, Result};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small(&mut self) -> Result<usize> {
        let n = self.number()?;
        usize::try_from(n).map_err(|_| self.err("index too large"))
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at byte {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }
}

impl AlgebraElement {
    /// Parses the dataset grammar, e.g. `1 - 1/3*x2*d1_1 + d1_1*d2_2`. Displacement
    /// factors may come in any order and are sign-normalized; `x1^2` is accepted as a
    /// shorthand for `x1*x1`.
    pub fn parse(ctx: AlgebraContext, text: &str) -> Result<AlgebraElement> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut raw: Vec<(Mono, Q)> = Vec::new();
        let mut first = true;
        loop {
            let sign = match lx.peek() {
                None if first => return Err(lx.err("empty polynomial")),
                None => break,
                Some(b'+') => {
                    lx.bump();
                    false
                }
                Some(b'-') => {
                    lx.bump();
                    true
                }
                Some(_) if first => false,
                Some(_) => return Err(lx.err("expected '+' or '-'")),
            };
            first = false;
            let (m, mut c) = parse_term(&mut lx, ctx)?;
            if sign {
                c = -c;
            }
            if let Some(m) = m {
                raw.push((m, c));
            }
        }
        Ok(AlgebraElement::from_terms(ctx, raw))
    }
}

/// One product of factors. Returns `None` for the monomial when the product vanishes
/// in the algebra (repeated slot or axis).
fn parse_term(lx: &mut Lexer<'_>, ctx: AlgebraContext) -> Result<(Option<Mono>, Q)> {
    let mut coeff = Q::one();
    let mut mono = Some(Mono::ONE);
    let mut neg = false;
    let mut exps = vec![0u8; ctx.base_dim()];
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = lx.number()?;
                let mut v = Q::from_integer(n);
                if lx.peek() == Some(b'/') {
                    lx.bump();
                    let den = lx.number()?;
                    if den.is_zero() {
                        return Err(lx.err("zero denominator"));
                    }
                    v /= Q::from_integer(den);
                }
                coeff *= v;
            }
            Some(b'x') => {
                lx.bump();
                let a = lx.small()?;
                if a == 0 || a > ctx.base_dim() {
                    return Err(lx.err(&format!("base coordinate x{a} out of range")));
                }
                let mut e = 1;
                if lx.peek() == Some(b'^') {
                    lx.bump();
                    e = lx.small()?;
                }
                let total = exps[a - 1] as usize + e;
                if total > 15 {
                    return Err(lx.err("exponent too large"));
                }
                exps[a - 1] = total as u8;
            }
            Some(b'd') => {
                lx.bump();
                let s = lx.small()?;
                if lx.bump() != Some(b'_') {
                    return Err(lx.err("expected '_' in displacement"));
                }
                let a = lx.small()?;
                if s > ctx.order() {
                    return Err(lx.err(&format!("slot {s} exceeds simplex order {}", ctx.order())));
                }
                if a == 0 || a > ctx.base_dim() {
                    return Err(lx.err(&format!("axis {a} out of range")));
                }
                if s == 0 {
                    mono = None;
                } else if let Some(m) = mono {
                    mono = m.mul(Mono::d(s, a)).map(|(p, flip)| {
                        neg ^= flip;
                        p
                    });
                }
            }
            _ => return Err(lx.err("expected a factor")),
        }
        if lx.peek() == Some(b'*') {
            lx.bump();
            continue;
        }
        break;
    }
    let deg: usize = exps.iter().map(|&e| e as usize).sum();
    if deg > 15 {
        return Err(lx.err("degree too large"));
    }
    let base = Mono::from_parts(&exps, 0, 0);
    let mono = mono.map(|m| m.mul(base).expect("base commutes").0);
    if neg {
        coeff = -coeff;
    }
    Ok((mono, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = AlgebraContext::new(2, 2, 2).unwrap();
        let a = AlgebraElement::parse(c, "1 - 1/3*x2*d1_1 + d1_1*d2_2").unwrap();
        assert_eq!(a.to_string(), "1 - 1/3*x2*d1_1 + d1_1*d2_2");
        assert_eq!(AlgebraElement::parse(c, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn normalizes_signs_and_powers() {
        let c = AlgebraContext::new(2, 2, 2).unwrap();
        let a = AlgebraElement::parse(c, "d1_2*d2_1").unwrap();
        assert_eq!(a.to_string(), "-d1_1*d2_2");
        assert_eq!(AlgebraElement::parse(c, "d2_2*d1_1").unwrap().to_string(), "d1_1*d2_2");
        assert_eq!(AlgebraElement::parse(c, "x1^2").unwrap().to_string(), "x1*x1");
        assert!(AlgebraElement::parse(c, "d1_1*d1_2").unwrap().is_zero());
        assert!(AlgebraElement::parse(c, "0").unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        let c = AlgebraContext::new(2, 1, 2).unwrap();
        for bad in ["", "x3", "d2_1", "d1_3", "1/0", "x1 x2", "+", "d1", "y"] {
            assert!(AlgebraElement::parse(c, bad).is_err(), "{bad}");
        }
    }
}
