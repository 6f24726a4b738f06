use std::path::PathBuf;

use crate::error::{GnepError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum StartPoint {
    Const(f64),
    Vector(Vec<f64>),
    File(PathBuf),
}

fn numbers(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| GnepError::Config(format!("{what}: `{t}` is not a number")))
        })
        .collect()
}

impl StartPoint {
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| GnepError::Config(format!("start point `{spec}` must be const:, vec: or file:")))?;
        match kind {
            "const" => Ok(Self::Const(
                rest.trim()
                    .parse()
                    .map_err(|_| GnepError::Config(format!("const start point `{rest}` is not a number")))?,
            )),
            "vec" => Ok(Self::Vector(numbers(rest, "vec start point")?)),
            "file" => Ok(Self::File(PathBuf::from(rest))),
            _ => Err(GnepError::Config(format!("unknown start point kind `{kind}`"))),
        }
    }

    pub fn resolve(&self, n: usize) -> Result<Vec<f64>> {
        let v = match self {
            Self::Const(c) => vec![*c; n],
            Self::Vector(v) => v.clone(),
            Self::File(p) => numbers(&std::fs::read_to_string(p)?, "start point file")?,
        };
        if v.len() != n {
            return Err(GnepError::DimensionMismatch { expected: n, got: v.len() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(GnepError::Config("start point must be finite".into()));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        assert_eq!(StartPoint::parse("const:0").unwrap().resolve(3).unwrap(), vec![0.0; 3]);
        assert_eq!(StartPoint::parse("vec:2,1").unwrap().resolve(2).unwrap(), vec![2.0, 1.0]);
        assert_eq!(StartPoint::parse("vec:-1,-1").unwrap().resolve(2).unwrap(), vec![-1.0, -1.0]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x0.txt");
        std::fs::write(&p, "1.5\n2.5 3.5\n").unwrap();
        let sp = StartPoint::parse(&format!("file:{}", p.display())).unwrap();
        assert_eq!(sp.resolve(3).unwrap(), vec![1.5, 2.5, 3.5]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(StartPoint::parse("zeros").is_err());
        assert!(StartPoint::parse("const:abc").is_err());
        assert!(StartPoint::parse("vec:1,2").unwrap().resolve(3).is_err());
        assert!(StartPoint::parse("rand:1").is_err());
    }
}
