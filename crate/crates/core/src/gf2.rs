//! Polynomials over GF(2), packed as coefficient bitmasks.
//!
//! Bit `i` of the mask is the coefficient of `x^i`, so `x^2 + 1` is `0b101`.
//! Addition is XOR; multiplication is carry-less; `divmod` is long division
//! and is undefined for a zero divisor.  Degrees stay far below 64 for every
//! built-in sampler, but `mul` still checks the bound.

use crate::error::{Error, Result};

/// Degree of a polynomial, or `None` for the zero polynomial.
pub fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

pub fn add(a: u64, b: u64) -> u64 {
    a ^ b
}

pub fn mul(a: u64, b: u64) -> u64 {
    let (Some(da), Some(db)) = (degree(a), degree(b)) else {
        return 0;
    };
    assert!(da + db < 64, "product degree out of range");
    let mut acc = 0u64;
    for i in 0..=da {
        if a >> i & 1 == 1 {
            acc ^= b << i;
        }
    }
    acc
}

/// Quotient and remainder of long division; `None` when `b` is zero.
pub fn divmod(a: u64, b: u64) -> Option<(u64, u64)> {
    let db = degree(b)?;
    let mut rem = a;
    let mut quo = 0u64;
    while let Some(dr) = degree(rem) {
        if dr < db {
            break;
        }
        let shift = dr - db;
        quo |= 1 << shift;
        rem ^= b << shift;
    }
    Some((quo, rem))
}

pub fn render(p: u64) -> String {
    if p == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for i in (0..=degree(p).unwrap()).rev() {
        if p >> i & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    terms.join("+")
}

pub fn parse(text: &str) -> Result<u64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut mask = 0u64;
    for term in s.split('+') {
        let bit = match term {
            "0" => continue,
            "1" => 0,
            "x" => 1,
            _ => term
                .strip_prefix("x^")
                .and_then(|e| e.parse::<u32>().ok())
                .filter(|e| *e < 64)
                .ok_or_else(|| Error::Parse(format!("bad polynomial term `{term}`")))?,
        };
        mask ^= 1 << bit;
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        // (x + 1)^2 = x^2 + 1 over GF(2).
        assert_eq!(mul(0b11, 0b11), 0b101);
        assert_eq!(mul(0b10, 0b111), 0b1110);
        assert_eq!(mul(0, 0b101), 0);
    }

    #[test]
    fn divmod_recombines() {
        for a in 0..64u64 {
            for b in 1..64u64 {
                let (q, r) = divmod(a, b).unwrap();
                assert_eq!(add(mul(q, b), r), a, "a={a} b={b}");
                if r != 0 {
                    assert!(degree(r) < degree(b));
                }
            }
        }
        assert_eq!(divmod(5, 0), None);
    }

    #[test]
    fn rendering_round_trips() {
        for p in 0..128u64 {
            assert_eq!(parse(&render(p)).unwrap(), p);
        }
        assert_eq!(parse("x^2 + x + 1").unwrap(), 0b111);
        assert!(parse("x^64").is_err());
    }
}
