use crate::error::{Error, Result};
use crate::gf2;

/// A point of an abstract data domain.
///
/// Every carrier used by the built-in structures embeds into this one enum so
/// that environments, structural maps, and samplers can be written once.
/// Booleans are the naturals `0` and `1`; polynomials over GF(2) are coefficient
/// bitmasks (bit `i` holds the coefficient of `x^i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Nat(u64),
    List(Vec<u64>),
    Poly(u64),
    Pair(Box<Value>, Box<Value>),
}

impl Value {
    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Value::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[u64]> {
        match self {
            Value::List(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<u64> {
        match self {
            Value::Poly(p) => Some(*p),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Nat(n) => n.to_string(),
            Value::List(l) => {
                let items: Vec<String> = l.iter().map(|e| e.to_string()).collect();
                format!("[{}]", items.join(","))
            }
            Value::Poly(p) => gf2::render(*p),
            Value::Pair(a, b) => format!("({},{})", a.render(), b.render()),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses a value in display syntax: `12`, `[3,1,4]`, `x^2+x+1`, `(a,b)`.
pub fn parse_value(text: &str) -> Result<Value> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty value".into()));
    }
    if let Some(body) = s.strip_prefix('[') {
        let body = body
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unterminated list `{s}`")))?;
        let mut items = Vec::new();
        for part in body.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            items.push(
                part.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad list element `{part}`")))?,
            );
        }
        return Ok(Value::List(items));
    }
    if let Some(body) = s.strip_prefix('(') {
        let body = body
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated pair `{s}`")))?;
        // Split at the top-level comma (components may themselves be pairs).
        let mut depth = 0usize;
        for (i, c) in body.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    let a = parse_value(&body[..i])?;
                    let b = parse_value(&body[i + 1..])?;
                    return Ok(Value::Pair(Box::new(a), Box::new(b)));
                }
                _ => {}
            }
        }
        return Err(Error::Parse(format!("pair without comma `{s}`")));
    }
    if s.contains('x') {
        return Ok(Value::Poly(gf2::parse(s)?));
    }
    s.parse::<u64>()
        .map(Value::Nat)
        .map_err(|_| Error::Parse(format!("bad value `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_display_round_trips() {
        for v in [
            Value::Nat(0),
            Value::Nat(42),
            Value::List(vec![]),
            Value::List(vec![3, 1, 4]),
            Value::Poly(0b1011),
            Value::Pair(Box::new(Value::Nat(5)), Box::new(Value::List(vec![1]))),
        ] {
            let text = v.render();
            assert_eq!(parse_value(&text).unwrap(), v, "round trip of `{text}`");
        }
        // Constant polynomials display as bare digits, which context-free
        // parsing reads as naturals; domain-aware parsing resolves them.
        assert_eq!(parse_value(&Value::Poly(0).render()).unwrap(), Value::Nat(0));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_value("").is_err());
        assert!(parse_value("[1,").is_err());
        assert!(parse_value("(1 2)").is_err());
        assert!(parse_value("-3").is_err());
    }
}
