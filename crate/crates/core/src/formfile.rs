//! Form records (`{"field":"GF(3)","dim":2,"upper":[1,0,1]}`) and a small
//! parser for polynomial notation such as `a1^2 + a1*a2 - x2^2`.
//!
//! Coefficients are written as integers `0..p−1` for prime fields, as the
//! strings `"0"`, `"1"`, `"t"`, `"t+1"` for GF(4), and as integers or `"a/b"`
//! strings for ℚ. Either integers or strings are accepted on input.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::quadform::{QForm, Vars};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormRecord {
    pub field: String,
    pub dim: usize,
    pub upper: Vec<Value>,
}

fn coefficient_value(c: &Scalar) -> Value {
    match c.field() {
        FieldSpec::Prime(_) => Value::from(c.index().expect("finite")),
        FieldSpec::Gf4 => Value::from(c.to_string()),
        FieldSpec::Rational => {
            let r = c.as_rational().expect("rational");
            match (r.is_integer(), i64::try_from(r.numer())) {
                (true, Ok(v)) => Value::from(v),
                _ => Value::from(c.to_string()),
            }
        }
    }
}

fn coefficient_from(field: FieldSpec, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| Error::Parse(format!("coefficient {n} is not an integer")))?;
            match field {
                FieldSpec::Prime(p) if !(0..p as i64).contains(&i) => {
                    Err(Error::Parse(format!("coefficient {i} out of range for {field}")))
                }
                FieldSpec::Gf4 if !(0..=1).contains(&i) => {
                    Err(Error::Parse(format!("coefficient {i} is not an element of GF(4); use \"t\" or \"t+1\"")))
                }
                _ => Ok(field.from_int(i)),
            }
        }
        Value::String(s) => field.parse_scalar(s),
        other => Err(Error::Parse(format!("coefficient {other} must be a number or string"))),
    }
}

impl FormRecord {
    pub fn from_form(q: &QForm) -> Self {
        FormRecord {
            field: q.field().to_string(),
            dim: q.dim(),
            upper: q.upper().iter().map(coefficient_value).collect(),
        }
    }

    pub fn to_form(&self) -> Result<QForm> {
        let field: FieldSpec = self.field.parse()?;
        let upper = self.upper.iter().map(|v| coefficient_from(field, v)).collect::<Result<Vec<_>>>()?;
        QForm::new(field, self.dim, upper)
    }
}

/// Compact single-line JSON record of a form.
pub fn to_json(q: &QForm) -> String {
    serde_json::to_string(&FormRecord::from_form(q)).expect("serializable")
}

pub fn from_json(text: &str) -> Result<QForm> {
    let rec: FormRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    rec.to_form()
}

/// Parses a polynomial in `x1..xn` (`Vars::X`) or `a0..a(n-1)` (`Vars::A`).
///
/// Terms are `[coeff*]var^2` or `[coeff*]var*var`, joined by `+` or `-`;
/// `coeff` may be parenthesised (`(t+1)*x1^2`). `"0"` is the zero form.
pub fn parse_poly(field: FieldSpec, dim: usize, vars: Vars, text: &str) -> Result<QForm> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut w = crate::matrix::Mat::zeros(field, dim, dim);
    if compact == "0" {
        return QForm::from_matrix(&w);
    }
    for (negative, term) in split_terms(&compact)? {
        let factors = split_factors(&term);
        let vars_in_mono = if factors.last().is_some_and(|f| f.ends_with("^2")) { 1 } else { 2 };
        if factors.len() < vars_in_mono || factors.len() > vars_in_mono + 1 {
            return Err(Error::Parse(format!("cannot read term `{term}`")));
        }
        let (coeff, mono) = factors.split_at(factors.len() - vars_in_mono);
        let mut c = match coeff.first() {
            Some(c) => field.parse_scalar(c.trim_start_matches('(').trim_end_matches(')'))?,
            None => field.one(),
        };
        if negative {
            c = -c;
        }
        let (i, j) = monomial(mono, vars, dim)?;
        let v = w.get(i, j) + &c;
        w.set(i, j, v);
    }
    QForm::from_matrix(&w)
}

fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    let mut negative = false;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            if !current.is_empty() {
                out.push((negative, std::mem::take(&mut current)));
            } else if !out.is_empty() || ch == '+' {
                return Err(Error::Parse(format!("unexpected `{ch}` in `{s}`")));
            }
            negative = ch == '-';
            continue;
        }
        current.push(ch);
    }
    if current.is_empty() {
        return Err(Error::Parse(format!("empty term in `{s}`")));
    }
    out.push((negative, current));
    Ok(out)
}

/// Splits a term at `*` outside parentheses.
fn split_factors(term: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0usize, 0usize);
    for (k, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '*' if depth == 0 => {
                out.push(&term[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&term[start..]);
    out
}

fn variable_index(name: &str, vars: Vars, dim: usize) -> Result<usize> {
    let (prefix, offset) = match vars {
        Vars::X => ('x', 1),
        Vars::A => ('a', 0),
    };
    let k = name
        .strip_prefix(prefix)
        .and_then(|d| d.parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
    if k < offset || k - offset >= dim {
        return Err(Error::Parse(format!("variable `{name}` out of range for dim {dim}")));
    }
    Ok(k - offset)
}

fn monomial(mono: &[&str], vars: Vars, dim: usize) -> Result<(usize, usize)> {
    match mono {
        [sq] => {
            let i = variable_index(sq.trim_end_matches("^2"), vars, dim)?;
            Ok((i, i))
        }
        [a, b] => {
            let (i, j) = (variable_index(a, vars, dim)?, variable_index(b, vars, dim)?);
            Ok((i.min(j), i.max(j)))
        }
        _ => Err(Error::Parse(format!("cannot read monomial `{}`", mono.join("*")))),
    }
}
