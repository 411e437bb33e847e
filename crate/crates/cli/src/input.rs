//! The plain-text input format: a ring description followed by ideal
//! generators, one per line.
//!
//! ```text
//! char: 2
//! vars: x y
//! order: grevlex        # optional, grevlex or lex
//! ideal:
//!   y^2 + x^3
//! c: x^2                # optional test element
//! ```
//!
//! `#` starts a comment; blank lines are ignored.

use std::sync::Arc;

use charp::error::{Error, Result};
use charp::ring::{parse_polynomial_at, MonomialOrder, OrderSpec, Polynomial, RingCtx};
use charp::SubmodulePresentation;

/// A parsed and validated input description.
#[derive(Debug)]
pub struct InputSpec {
    pub ctx: Arc<RingCtx>,
    pub ideal: SubmodulePresentation,
    pub c: Option<Polynomial>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col: 1,
        msg: msg.into(),
    }
}

pub fn parse_input(text: &str) -> Result<InputSpec> {
    let mut char_line: Option<(usize, String)> = None;
    let mut vars_line: Option<(usize, String)> = None;
    let mut order_line: Option<(usize, String)> = None;
    let mut c_line: Option<(usize, String)> = None;
    let mut ideal_lines: Vec<(usize, String)> = Vec::new();
    let mut in_ideal = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let keyed = |key: &str| -> Option<String> {
            trimmed
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix(':'))
                .map(|v| v.trim().to_string())
        };
        if let Some(v) = keyed("char") {
            char_line = Some((lineno, v));
            in_ideal = false;
        } else if let Some(v) = keyed("vars") {
            vars_line = Some((lineno, v));
            in_ideal = false;
        } else if let Some(v) = keyed("order") {
            order_line = Some((lineno, v));
            in_ideal = false;
        } else if let Some(v) = keyed("c") {
            c_line = Some((lineno, v));
            in_ideal = false;
        } else if let Some(v) = keyed("ideal") {
            in_ideal = true;
            if !v.is_empty() {
                ideal_lines.push((lineno, v));
            }
        } else if in_ideal {
            ideal_lines.push((lineno, trimmed.to_string()));
        } else {
            return Err(parse_err(lineno, format!("unexpected line `{trimmed}`")));
        }
    }

    let (char_no, char_val) =
        char_line.ok_or_else(|| parse_err(1, "missing `char:` declaration"))?;
    let p: u32 = char_val
        .parse()
        .map_err(|_| parse_err(char_no, format!("invalid characteristic `{char_val}`")))?;
    let (vars_no, vars_val) =
        vars_line.ok_or_else(|| parse_err(1, "missing `vars:` declaration"))?;
    let vars: Vec<&str> = vars_val.split_whitespace().collect();
    if vars.is_empty() {
        return Err(parse_err(vars_no, "at least one variable is required"));
    }
    let order = match order_line {
        None => OrderSpec::default(),
        Some((no, v)) => match v.as_str() {
            "grevlex" => OrderSpec::default(),
            "lex" => OrderSpec {
                monomial: MonomialOrder::Lex,
                ..OrderSpec::default()
            },
            other => {
                return Err(parse_err(no, format!("unknown order `{other}`")));
            }
        },
    };
    let ctx = RingCtx::new(p, &vars, order)?;

    if ideal_lines.is_empty() {
        return Err(parse_err(1, "the ideal has no generators"));
    }
    let gens: Vec<Polynomial> = ideal_lines
        .iter()
        .map(|(no, s)| parse_polynomial_at(&ctx, s, *no))
        .collect::<Result<Vec<_>>>()?;
    let ideal = SubmodulePresentation::ideal(&ctx, gens);

    let c = match c_line {
        None => None,
        Some((no, s)) => Some(parse_polynomial_at(&ctx, &s, no)?),
    };

    Ok(InputSpec { ctx, ideal, c })
}
