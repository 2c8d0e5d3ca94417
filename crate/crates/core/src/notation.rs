//! Text form of roots: `m d + c1 a1 - c2 a2`, whitespace-insensitive on input.

use crate::affine::Root;
use crate::cartan::{MAX_RANK, ZERO};
use crate::error::{Error, Result};

/// Formats as `m d ± c ai …`, dropping zero terms and unit coefficients.
pub fn format_root(b: &Root) -> String {
    let mut s = format!("{} d", b.level);
    for (i, &c) in b.finite.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c > 0 { '+' } else { '-' };
        let a = c.abs();
        if a == 1 {
            s.push_str(&format!(" {sign} a{}", i + 1));
        } else {
            s.push_str(&format!(" {sign} {a} a{}", i + 1));
        }
    }
    s
}

/// Parses `m d [± c a<i>]*`. Coefficients default to 1 and the δ term may be omitted.
pub fn parse_root(text: &str, rank: usize) -> Result<Root> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty root".into()));
    }
    let bad = || Error::Parse(format!("cannot parse root '{text}'"));
    let mut level = 0i64;
    let mut finite = ZERO;
    let bytes: Vec<char> = compact.chars().collect();
    let mut pos = 0;
    let mut first = true;
    while pos < bytes.len() {
        let mut sign = 1i64;
        if bytes[pos] == '+' || bytes[pos] == '-' {
            if bytes[pos] == '-' {
                sign = -1;
            }
            pos += 1;
        } else if !first {
            return Err(bad());
        }
        first = false;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coef: i64 =
            if pos == start { 1 } else { bytes[start..pos].iter().collect::<String>().parse().map_err(|_| bad())? };
        match bytes.get(pos) {
            Some('d') => {
                pos += 1;
                level += sign * coef;
            }
            Some('a') => {
                pos += 1;
                let s2 = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let idx: usize = bytes[s2..pos].iter().collect::<String>().parse().map_err(|_| bad())?;
                if idx == 0 || idx > rank || idx > MAX_RANK {
                    return Err(Error::Parse(format!("simple root index a{idx} out of range")));
                }
                finite[idx - 1] += sign * coef;
            }
            _ => return Err(bad()),
        }
    }
    Ok(Root { level, finite })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let b = Root::from_coords(2, &[1, -3]);
        let s = format_root(&b);
        assert_eq!(s, "2 d + a1 - 3 a2");
        assert_eq!(parse_root(&s, 2).unwrap(), b);
        assert_eq!(parse_root("1 d - a1", 2).unwrap(), Root::from_coords(1, &[-1, 0]));
        assert_eq!(parse_root("a2", 2).unwrap(), Root::from_coords(0, &[0, 1]));
        assert_eq!(format_root(&Root::delta(3)), "3 d");
        assert!(parse_root("2 d + a3", 2).is_err());
        assert!(parse_root("2 x", 2).is_err());
        assert!(parse_root("2 d a1", 2).is_err());
    }
}
