//! Line-oriented text formats.
//!
//! Complex files start with `dim D` followed by one `s v0 v1 ... vq` line per
//! maximal simplex; faces are added automatically. Cocycle files hold
//! `w i j value` lines. `#` starts a comment in both.

use super::{ComplexError, IntegerOneCocycle, SimplicialComplex};

fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn err(line: usize, msg: impl Into<String>) -> ComplexError {
    ComplexError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, ComplexError> {
    tok.parse()
        .map_err(|_| err(line, format!("bad number `{tok}`")))
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex, ComplexError> {
    let mut declared: Option<usize> = None;
    let mut facets = Vec::new();
    for (line, toks) in tokens(text) {
        match toks[0] {
            "dim" => {
                if declared.is_some() {
                    return Err(err(line, "duplicate dim header"));
                }
                if toks.len() != 2 {
                    return Err(err(line, "expected `dim D`"));
                }
                declared = Some(num(line, toks[1])?);
            }
            "s" => {
                if declared.is_none() {
                    return Err(err(line, "simplex before `dim` header"));
                }
                if toks.len() < 2 {
                    return Err(err(line, "empty simplex"));
                }
                let mut s: Vec<usize> = toks[1..]
                    .iter()
                    .map(|t| num(line, t))
                    .collect::<Result<_, _>>()?;
                s.sort_unstable();
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return Err(err(line, "repeated vertex"));
                }
                facets.push(s);
            }
            other => return Err(err(line, format!("unknown record `{other}`"))),
        }
    }
    let Some(d) = declared else {
        return Err(err(0, "missing `dim` header"));
    };
    let k = SimplicialComplex::from_facets(facets);
    if k.dim() != Some(d) {
        return Err(err(
            0,
            format!("header says dim {d}, simplices give {:?}", k.dim()),
        ));
    }
    Ok(k)
}

pub fn parse_cocycle(text: &str) -> Result<IntegerOneCocycle, ComplexError> {
    let mut xi = IntegerOneCocycle::zero();
    for (line, toks) in tokens(text) {
        if toks[0] != "w" || toks.len() != 4 {
            return Err(err(line, "expected `w i j value`"));
        }
        let (i, j): (usize, usize) = (num(line, toks[1])?, num(line, toks[2])?);
        if i == j {
            return Err(err(line, "degenerate edge"));
        }
        let v: i64 = num(line, toks[3])?;
        if xi.weight(i, j) != 0 {
            return Err(err(line, "edge given twice"));
        }
        xi.set(i, j, v);
    }
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_torus_header_and_closure() {
        let k = parse_complex("dim 1\n# circle\ns 0 1\ns 1 2\ns 2 0\n").unwrap();
        assert_eq!(k.count(1), 3);
        assert_eq!(k.betti_numbers(), vec![1, 1]);
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_complex("s 0 1\n"),
            Err(ComplexError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_complex("dim 1\ns 0 x\n"),
            Err(ComplexError::Parse { line: 2, .. })
        ));
        assert!(parse_complex("dim 2\ns 0 1\n").is_err());
        assert!(parse_cocycle("w 0 1\n").is_err());
    }

    #[test]
    fn cocycle_orientation() {
        let xi = parse_cocycle("w 2 0 5\n").unwrap();
        assert_eq!(xi.weight(0, 2), -5);
    }
}
