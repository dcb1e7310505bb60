//! Named algebras: the `sl3,gf5` / `F4,q` style descriptors accepted by the
//! command line, and the matching constructed model.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::chevalley::ChevalleyAlgebra;
use crate::classical::{MatrixAlgebra, MatrixKind};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lie::{Element, LieAlgebra, QuotientMap};
use crate::notation;
use crate::roots::{CartanType, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AlgebraKind {
    Chevalley(CartanType),
    Sl(usize),
    Sp(usize),
    So(usize),
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Chevalley(t) => write!(f, "{t}"),
            AlgebraKind::Sl(n) => write!(f, "sl{n}"),
            AlgebraKind::Sp(n) => write!(f, "sp{n}"),
            AlgebraKind::So(n) => write!(f, "so{n}"),
        }
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<AlgebraKind> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        for (prefix, make) in [("sl", AlgebraKind::Sl as fn(usize) -> AlgebraKind), ("sp", AlgebraKind::Sp), ("so", AlgebraKind::So)] {
            if let Some(rest) = lower.strip_prefix(prefix) {
                let n: usize = rest.trim_start_matches('_').parse().map_err(|_| Error::Unsupported(t.to_string()))?;
                return Ok(make(n));
            }
        }
        Ok(AlgebraKind::Chevalley(t.parse()?))
    }
}

/// An algebra plus the field it lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AlgebraSpec {
    pub kind: AlgebraKind,
    pub field: Field,
    /// Work in `L / Z(L)` instead of `L`.
    pub quotient: bool,
}

/// `gf5`, `GF(5)`, `5`, `q` or `0`.
pub fn parse_field(s: &str) -> Result<Field> {
    let t = s.trim().to_ascii_lowercase();
    if t == "q" || t == "qq" || t == "rational" {
        return Ok(Field::Rational);
    }
    let digits = t.trim_start_matches("gf").trim_start_matches('(').trim_end_matches(')');
    let c: u32 = digits.parse().map_err(|_| Error::Parse(format!("`{s}` is not a field (try gf5 or q)")))?;
    Field::from_characteristic(c)
}

impl AlgebraSpec {
    pub fn new(kind: AlgebraKind, field: Field) -> AlgebraSpec {
        AlgebraSpec { kind, field, quotient: false }
    }

    pub fn with_quotient(mut self, quotient: bool) -> AlgebraSpec {
        self.quotient = quotient;
        self
    }

    pub fn build(&self) -> Result<Model> {
        Model::build(self)
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = match self.field {
            Field::Prime(p) => format!("gf{p}"),
            Field::Rational => "q".to_string(),
        };
        write!(f, "{},{}{}", self.kind, field, if self.quotient { ",quotient" } else { "" })
    }
}

impl FromStr for AlgebraSpec {
    type Err = Error;

    /// `kind,field[,quotient]`, e.g. `sl3,gf5` or `E6,gf3,quotient`.
    fn from_str(s: &str) -> Result<AlgebraSpec> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let (kind, field) = match parts.as_slice() {
            [k, f] | [k, f, _] => (k.parse()?, parse_field(f)?),
            _ => return Err(Error::Parse(format!("`{s}` is not of the form kind,field (e.g. sl3,gf5)"))),
        };
        let quotient = match parts.get(2) {
            None => false,
            Some(&"quotient") | Some(&"q") => true,
            Some(other) => return Err(Error::Parse(format!("unknown algebra flag `{other}`"))),
        };
        Ok(AlgebraSpec { kind, field, quotient })
    }
}

#[derive(Clone, Debug)]
pub enum Construction {
    Chevalley(ChevalleyAlgebra),
    Matrix(MatrixAlgebra),
}

/// A constructed algebra with its basis-symbol conventions.
#[derive(Clone, Debug)]
pub struct Model {
    spec: AlgebraSpec,
    construction: Construction,
    quotient: Option<QuotientMap>,
}

impl Model {
    pub fn build(spec: &AlgebraSpec) -> Result<Model> {
        let construction = match spec.kind {
            AlgebraKind::Chevalley(t) => Construction::Chevalley(ChevalleyAlgebra::new(&RootSystem::new(t), spec.field)?),
            AlgebraKind::Sl(n) => Construction::Matrix(MatrixAlgebra::sl(n, spec.field)?),
            AlgebraKind::Sp(n) => Construction::Matrix(MatrixAlgebra::symplectic(n, spec.field)?),
            AlgebraKind::So(n) => Construction::Matrix(MatrixAlgebra::orthogonal(n, spec.field)?),
        };
        let base = match &construction {
            Construction::Chevalley(c) => c.algebra(),
            Construction::Matrix(m) => m.algebra(),
        };
        let quotient = if spec.quotient { Some(base.simple_quotient()?) } else { None };
        Ok(Model { spec: *spec, construction, quotient })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    /// The algebra before any quotient.
    pub fn base(&self) -> &LieAlgebra {
        match &self.construction {
            Construction::Chevalley(c) => c.algebra(),
            Construction::Matrix(m) => m.algebra(),
        }
    }

    /// The algebra elements are returned in.
    pub fn algebra(&self) -> &LieAlgebra {
        self.quotient.as_ref().map_or_else(|| self.base(), |q| &q.target)
    }

    pub fn root_count(&self) -> Option<usize> {
        match &self.construction {
            Construction::Chevalley(c) => Some(c.root_system().num_roots()),
            Construction::Matrix(_) => None,
        }
    }

    pub fn chevalley(&self) -> Option<&ChevalleyAlgebra> {
        match &self.construction {
            Construction::Chevalley(c) => Some(c),
            Construction::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&MatrixAlgebra> {
        match &self.construction {
            Construction::Matrix(m) => Some(m),
            Construction::Chevalley(_) => None,
        }
    }

    pub fn matrix_kind(&self) -> Option<MatrixKind> {
        self.matrix().map(MatrixAlgebra::kind)
    }

    /// Parse a sum of basis symbols; see [`notation`].
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let x = notation::parse_element(self, text)?;
        match &self.quotient {
            Some(q) => q.project(&x),
            None => Ok(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        for s in ["sl3,gf5", "F4,gf5", "E6,gf3,quotient", "so7,q", "C2,gf3"] {
            let spec: AlgebraSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("sl3,GF(5)".parse::<AlgebraSpec>().unwrap().to_string(), "sl3,gf5");
    }

    #[test]
    fn bad_specs() {
        assert!("sl3".parse::<AlgebraSpec>().is_err());
        assert!("F4,gf4".parse::<AlgebraSpec>().is_err());
        assert!("H3,gf5".parse::<AlgebraSpec>().is_err());
        assert!("sl3,gf5,twisted".parse::<AlgebraSpec>().is_err());
    }

    #[test]
    fn dimensions() {
        let dim = |s: &str| s.parse::<AlgebraSpec>().unwrap().build().unwrap().algebra().dim();
        assert_eq!(dim("C2,gf3"), 10);
        assert_eq!(dim("sp4,gf3"), 10);
        assert_eq!(dim("so7,gf5"), 21);
        assert_eq!(dim("G2,gf5"), 14);
        assert_eq!(dim("E6,gf3"), 78);
        assert_eq!(dim("E6,gf3,quotient"), 77);
    }
}
