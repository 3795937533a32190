//! Text form of [`Scalar`].
//!
//! ```text
//! expr := term (('+'|'-') term)*
//! term := rat ('*' atom)? | atom
//! atom := 'w' | 'w^2' | 'i' | 'z' | 'z^' int
//! rat  := int ('/' posint)?
//! ```
//!
//! `w` is j, `i` the imaginary unit and `z` the primitive 12th root ζ.
//! Formatting is canonical: elements of ℚ(j) are written over {1, w, w²}
//! with the fewest terms, everything else over {1, z, z², z³}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Ring, Scalar, ScalarError};

pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ScalarError {
        ScalarError::Syntax {
            pos: self.pos,
            msg: msg.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'w' | b'i' | b'z') => self.atom(),
            Some(b'-') if matches!(self.src.get(self.pos + 1), Some(b'w' | b'i' | b'z')) => {
                self.pos += 1;
                Ok(-&self.atom()?)
            }
            Some(_) => {
                let r = Scalar::from_rational(self.rat()?);
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let a = self.atom()?;
                    Ok(&r * &a)
                } else {
                    Ok(r)
                }
            }
            None => Err(self.error("expected a term")),
        }
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                if self.src.get(self.pos) == Some(&b'^') {
                    self.pos += 1;
                    if self.src.get(self.pos) == Some(&b'2') {
                        self.pos += 1;
                        return Ok(Scalar::j2());
                    }
                    return Err(self.error("only w^2 is allowed"));
                }
                Ok(Scalar::j())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Scalar::i())
            }
            Some(b'z') => {
                self.pos += 1;
                if self.src.get(self.pos) == Some(&b'^') {
                    self.pos += 1;
                    let e = self.int()?;
                    let e: i64 = (e % BigInt::from(12))
                        .try_into()
                        .expect("residue mod 12 fits in i64");
                    return Ok(Scalar::zeta_pow(e));
                }
                Ok(Scalar::zeta())
            }
            _ => Err(self.error("expected one of w, w^2, i, z, z^n")),
        }
    }

    fn rat(&mut self) -> Result<BigRational, ScalarError> {
        let num = self.int()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let start = self.pos;
            let den = self.int()?;
            if !den.is_positive() || self.src[start] == b'-' || self.src[start] == b'+' {
                self.pos = start;
                return Err(self.error("denominator must be a positive integer"));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn int(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<BigInt>().map_err(|_| self.error("bad integer"))
    }
}

pub fn format_scalar(a: &Scalar) -> String {
    if a.is_zero() {
        return "0".to_owned();
    }
    let c = a.coords();
    let terms: Vec<(BigRational, &str)> = if a.in_eisenstein_field() {
        w_form(&c[0], &c[2])
    } else {
        ["", "z", "z^2", "z^3"]
            .into_iter()
            .zip(c.iter())
            .filter(|(_, v)| !v.is_zero())
            .map(|(atom, v)| (v.clone(), atom))
            .collect()
    };
    let mut out = String::new();
    for (k, (coef, atom)) in terms.iter().enumerate() {
        let neg = coef.is_negative();
        let mag = coef.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        if atom.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() && !(k == 0 && neg) {
            out.push_str(atom);
        } else {
            out.push_str(&mag.to_string());
            out.push('*');
            out.push_str(atom);
        }
    }
    out
}

/// a + b·ζ² written over {1, w, w²}: pick the representation with one
/// coefficient zero and the fewest terms.
fn w_form(a: &BigRational, b: &BigRational) -> Vec<(BigRational, &'static str)> {
    let zero = BigRational::zero();
    let apb = a + b;
    // ζ² = 1 + w and 1 + w + w² = 0
    let candidates = [
        [apb.clone(), b.clone(), zero.clone()],
        [a.clone(), zero.clone(), -b],
        [zero, -a, -apb],
    ];
    let best = candidates
        .iter()
        .min_by_key(|cand| cand.iter().filter(|v| !v.is_zero()).count())
        .expect("three candidates");
    ["", "w", "w^2"]
        .into_iter()
        .zip(best.iter())
        .filter(|(_, v)| !v.is_zero())
        .map(|(atom, v)| (v.clone(), atom))
        .collect()
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(self))
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }
}
