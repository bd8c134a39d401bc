//! Plain-text `key = value` configuration and a small arithmetic reader
//! for numbers written in terms of pi (`2pi/3`, `pi / 5`, `0.25*pi`).

use std::collections::BTreeMap;
use std::path::Path;

use crate::chain::ModelParams;
use crate::error::{Error, Result};

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1)))?;
        let key = key.trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err(Error::Parse(format!("line {}: empty key", lineno + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Applies the model keys of a configuration map on top of `params`.
/// Keys that do not name a model parameter are left for the caller.
pub fn apply_model_keys(params: &mut ModelParams, cfg: &BTreeMap<String, String>) -> Result<()> {
    for (key, value) in cfg {
        set_model_param(params, key, value)?;
    }
    Ok(())
}

/// Sets one model parameter from its textual value. Returns `false` when
/// `key` is not a model parameter.
pub fn set_model_param(params: &mut ModelParams, key: &str, value: &str) -> Result<bool> {
    let v = || parse_number(value);
    match key {
        "eta" => params.eta = v()?,
        "gamma" => params.gamma = v()?,
        "alpha" => params.alpha = v()?,
        "lambda" => params.lambda = v()?,
        "g" => params.g = v()?,
        "beta" => params.beta = v()?,
        "n" => params.n = parse_count(value)?,
        _ => return Ok(false),
    }
    Ok(true)
}

/// Parses a non-negative integer, also accepting integral expressions.
pub fn parse_count(text: &str) -> Result<usize> {
    let x = parse_number(text)?;
    if x < 0.0 || x.fract() != 0.0 || x > u32::MAX as f64 {
        return Err(Error::Parse(format!("`{text}` is not a non-negative integer")));
    }
    Ok(x as usize)
}

/// Evaluates `+ - * /`, parentheses, decimal literals and the constant
/// `pi` (or `π`). A number directly followed by `pi` multiplies it.
pub fn parse_number(text: &str) -> Result<f64> {
    let mut p = ExprParser {
        chars: text.chars().collect(),
        pos: 0,
        src: text,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    if !v.is_finite() {
        return Err(p.error("value is not finite"));
    }
    Ok(v)
}

struct ExprParser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl ExprParser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("`{}`: {what} at position {}", self.src, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if c == '+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        loop {
            match self.peek() {
                Some(c @ ('*' | '/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    v = if c == '*' { v * rhs } else { v / rhs };
                }
                // implicit product: `2pi`, `3(1+pi)`
                Some('p' | 'π' | '(') => v *= self.unary()?,
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> Result<f64> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('π') => {
                self.pos += 1;
                Ok(std::f64::consts::PI)
            }
            Some('p') => {
                if self.chars.get(self.pos + 1) == Some(&'i') {
                    self.pos += 2;
                    Ok(std::f64::consts::PI)
                } else {
                    Err(self.error("unknown identifier"))
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit() || *c == '.')
                {
                    self.pos += 1;
                }
                // exponent, but not the `p` of a following `pi`
                if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
                    let mut end = self.pos + 1;
                    if matches!(self.chars.get(end), Some('+' | '-')) {
                        end += 1;
                    }
                    if self.chars.get(end).is_some_and(|c| c.is_ascii_digit()) {
                        self.pos = end;
                        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                            self.pos += 1;
                        }
                    }
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                s.parse::<f64>().map_err(|_| self.error("malformed number"))
            }
            _ => Err(self.error("expected a number")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pi_expressions() {
        assert_eq!(parse_number("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_number("pi/5").unwrap(), PI / 5.0);
        assert_eq!(parse_number(" 4 * pi / 5 ").unwrap(), 4.0 * PI / 5.0);
        assert_eq!(parse_number("π").unwrap(), PI);
        assert_eq!(parse_number("-0.5").unwrap(), -0.5);
        assert_eq!(parse_number("1e-3").unwrap(), 1e-3);
        assert_eq!(parse_number("2.5E+1").unwrap(), 25.0);
        assert_eq!(parse_number("(1+2)*3").unwrap(), 9.0);
        assert_eq!(parse_number("2(1+1)").unwrap(), 4.0);
        assert_eq!(parse_number("1 - 2 - 3").unwrap(), -4.0);
        assert_eq!(parse_number("8/4/2").unwrap(), 1.0);
    }

    #[test]
    fn malformed_expressions() {
        for bad in ["", "pie", "2pi/", "1/0", "(1", "abc", "1 2", "e5"] {
            assert!(parse_number(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("501").unwrap(), 501);
        assert!(parse_count("2.5").is_err());
        assert!(parse_count("-1").is_err());
    }

    #[test]
    fn config_file() {
        let text = "# preset\neta = 2pi/3\n  beta=pi/5  # inline\n\nN = 101\nworkers = 4\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.len(), 4);
        let mut p = ModelParams::default();
        assert!(!set_model_param(&mut p, "workers", "4").unwrap());
        apply_model_keys(&mut p, &cfg).unwrap();
        assert_eq!(p.eta, 2.0 * PI / 3.0);
        assert_eq!(p.beta, PI / 5.0);
        assert_eq!(p.n, 101);
        assert!(parse_config("no equals sign").is_err());
        assert!(parse_config(" = 3").is_err());
    }
}
