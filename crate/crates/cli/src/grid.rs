//! Integer grids: `v`, `a,b,c`, arithmetic `start:stop:step` and geometric `start:stop:Kx`.

use std::fmt;
use std::str::FromStr;

/// Sorted, deduplicated grid points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid(pub Vec<u64>);

/// Accepts integer literals and integral scientific forms such as `1e7`.
pub fn parse_u64(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("not a non-negative integer: {s:?}")),
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',') {
            let fields: Vec<&str> = part.split(':').collect();
            match fields.as_slice() {
                [v] => out.push(parse_u64(v)?),
                [a, b, step] => {
                    let (a, b) = (parse_u64(a)?, parse_u64(b)?);
                    if a > b {
                        return Err(format!("empty range {a}:{b}"));
                    }
                    if let Some(k) = step.trim().strip_suffix('x') {
                        let k: f64 = k.parse().map_err(|_| format!("bad factor {k:?}"))?;
                        if !(k > 1.0) {
                            return Err("geometric factor must exceed 1".into());
                        }
                        if a == 0 {
                            return Err("geometric grid must start above 0".into());
                        }
                        let mut x = a as f64;
                        while x.round() <= b as f64 {
                            out.push(x.round() as u64);
                            x *= k;
                        }
                    } else {
                        let step = parse_u64(step)?;
                        if step == 0 {
                            return Err("step must be positive".into());
                        }
                        out.extend((a..=b).step_by(step as usize));
                    }
                }
                _ => return Err(format!("bad grid {part:?}: use v, a:b:step or a:b:Kx")),
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(Grid(out))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!("256:4096:2x".parse::<Grid>().unwrap().0, vec![256, 512, 1024, 2048, 4096]);
        assert_eq!("50:1600:2x".parse::<Grid>().unwrap().0.len(), 6);
        assert_eq!("10:100:10".parse::<Grid>().unwrap().0.len(), 10);
        assert_eq!("7,3,3,1e3".parse::<Grid>().unwrap().0, vec![3, 7, 1000]);
        assert_eq!("1e7".parse::<Grid>().unwrap().0, vec![10_000_000]);
        assert_eq!("1:10:3x".parse::<Grid>().unwrap().0, vec![1, 3, 9]);
    }

    #[test]
    fn grid_errors() {
        for bad in ["", "5:1:1", "1:5:0", "0:8:2x", "1:8:1x", "1:2:3:4", "2.5", "-3"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }
}
