//! Inline specs for functions, kernels and weights.
//!
//! ```text
//! function := "poly:[" coeff ("," coeff)* "]" | "cayley:" rho
//!           | "blaschke:" n "," N "," rho | "geometric-image:" n "," N "," rho
//! coeff    := real | "(" real "," real ")"
//! kernel   := "geometric:" n "," N | "monomial:" n | "roots:" n "," N ["," rotation]
//! weights  := "geometric:" rho "," start "," end | "[" real ("," real)* "]@" start
//! ```

use std::fmt;

use hardy_bap::kernels::DiscreteMeasure;
use hardy_bap::{
    kernel_from_measure, ClosedForm, ExtremalFamily, KernelSpec, PowerSeries, PsiWeights,
    TestFunction, C64,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// Zero-based character offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

type Parsed<T> = Result<T, ParseError>;

fn err<T>(position: usize, message: impl Into<String>) -> Parsed<T> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, pos: usize) -> Self {
        Cursor { text, pos }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> Parsed<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            err(self.pos, format!("expected '{c}'"))
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn number(&mut self) -> Parsed<f64> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_digit() || "+-.eE".contains(c)))
            .unwrap_or(self.rest().len());
        let token = &self.rest()[..len];
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos += len;
                Ok(v)
            }
            _ => err(start, format!("expected a number, found {:?}", first_token(self.rest()))),
        }
    }

    fn integer(&mut self) -> Parsed<usize> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        self.rest()[..len]
            .parse::<usize>()
            .inspect(|_| {
                self.pos += len;
            })
            .or_else(|_| err(start, format!("expected a nonnegative integer, found {:?}", first_token(self.rest()))))
    }

    fn end(&mut self) -> Parsed<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            err(self.pos, format!("unexpected trailing input {:?}", self.rest()))
        }
    }
}

fn first_token(s: &str) -> &str {
    let end = s.find([',', ']', ')', ' ']).unwrap_or(s.len());
    &s[..end.max(1).min(s.len())]
}

/// Splits `tag:body`, returning the tag and the offset of the body.
fn split_tag(text: &str) -> Parsed<(&str, usize)> {
    match text.find(':') {
        Some(i) => Ok((text[..i].trim(), i + 1)),
        None => err(0, "expected 'tag:arguments'"),
    }
}

fn wrap<T>(position: usize, r: hardy_bap::Result<T>) -> Parsed<T> {
    r.or_else(|e| err(position, e.to_string()))
}

fn coefficient(cur: &mut Cursor) -> Parsed<C64> {
    if cur.peek() == Some('(') {
        cur.eat('(')?;
        let re = cur.number()?;
        cur.eat(',')?;
        let im = cur.number()?;
        cur.eat(')')?;
        Ok(C64::new(re, im))
    } else {
        Ok(C64::new(cur.number()?, 0.0))
    }
}

fn real_list(cur: &mut Cursor) -> Parsed<Vec<f64>> {
    cur.eat('[')?;
    let mut out = vec![cur.number()?];
    while cur.peek() == Some(',') {
        cur.eat(',')?;
        out.push(cur.number()?);
    }
    cur.eat(']')?;
    Ok(out)
}

pub fn parse_function_spec(text: &str) -> Parsed<TestFunction> {
    let (tag, body) = split_tag(text)?;
    let mut cur = Cursor::new(text, body);
    let f: TestFunction = match tag {
        "poly" => {
            cur.eat('[')?;
            let mut coeffs = vec![coefficient(&mut cur)?];
            while cur.peek() == Some(',') {
                cur.eat(',')?;
                coeffs.push(coefficient(&mut cur)?);
            }
            cur.eat(']')?;
            PowerSeries::polynomial(coeffs).into()
        }
        "cayley" => {
            let rho = cur.number()?;
            wrap(body, ExtremalFamily::cayley(rho))?.into()
        }
        "blaschke" | "geometric-image" => {
            let n = cur.integer()?;
            cur.eat(',')?;
            let big_n = cur.integer()?;
            cur.eat(',')?;
            let rho = cur.number()?;
            if tag == "blaschke" {
                wrap(body, ExtremalFamily::blaschke_shift(n, big_n, rho))?.into()
            } else {
                wrap(body, ClosedForm::geometric_image(n, big_n, rho))?.into()
            }
        }
        other => return err(0, format!("unknown function tag {other:?}")),
    };
    cur.end()?;
    Ok(f)
}

pub fn parse_kernel_spec(text: &str) -> Parsed<KernelSpec> {
    let (tag, body) = split_tag(text)?;
    let mut cur = Cursor::new(text, body);
    let kernel = match tag {
        "monomial" => KernelSpec::monomial(cur.integer()?),
        "geometric" | "roots" => {
            let n = cur.integer()?;
            cur.eat(',')?;
            let big_n_pos = cur.pos;
            let big_n = cur.integer()?;
            if tag == "geometric" {
                wrap(big_n_pos, KernelSpec::geometric(n, big_n))?
            } else {
                let rotation = if cur.peek() == Some(',') {
                    cur.eat(',')?;
                    cur.number()?
                } else {
                    0.0
                };
                let mu = wrap(big_n_pos, DiscreteMeasure::roots_of_unity(big_n, rotation))?;
                wrap(body, kernel_from_measure(n, mu))?
            }
        }
        other => return err(0, format!("unknown kernel tag {other:?}")),
    };
    cur.end()?;
    Ok(kernel)
}

pub fn parse_weights(text: &str) -> Parsed<PsiWeights> {
    let mut cur = Cursor::new(text, 0);
    let weights = if cur.peek() == Some('[') {
        let values = real_list(&mut cur)?;
        cur.eat('@')?;
        let start = cur.integer()?;
        wrap(0, PsiWeights::new(start, values))?
    } else {
        let (tag, body) = split_tag(text)?;
        if tag != "geometric" {
            return err(0, format!("unknown weight tag {tag:?}"));
        }
        cur.pos = body;
        let rho = cur.number()?;
        cur.eat(',')?;
        let start = cur.integer()?;
        cur.eat(',')?;
        let end = cur.integer()?;
        if end < start {
            return err(body, "weight range end precedes start");
        }
        wrap(body, PsiWeights::geometric(rho, start, end))?
    };
    cur.end()?;
    Ok(weights)
}

/// Comma-separated reals.
pub fn parse_real_list(text: &str) -> Parsed<Vec<f64>> {
    let mut cur = Cursor::new(text, 0);
    let mut out = vec![cur.number()?];
    while cur.peek() == Some(',') {
        cur.eat(',')?;
        out.push(cur.number()?);
    }
    cur.end()?;
    Ok(out)
}
