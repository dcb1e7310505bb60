//! Element notation: sums of basis symbols with optional coefficients.
//!
//! ```text
//! element := ['+'|'-'] term (('+'|'-') term)*
//! term    := [coeff ['*']] symbol
//! coeff   := int ['/' int]
//! symbol  := basis name | Xa<i> | X-a<i> | X[c1,...,cr] | H<i>
//!          | E<i><j> | E<i>,<j> | Da:<v> | Dab:<v>;<w>
//! ```
//!
//! Basis names print the way they parse (`Xa4`, `X[1,2,2,2]`, `E12`, `D1,3`).
//! `Da:v` is `D_a` and `Dab:v;w` is `D_{a,b}` on the natural module of a
//! symplectic or orthogonal algebra.

use num_rational::BigRational;

use crate::catalog::Model;
use crate::classical::MatrixKind;
use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::lie::Element;
use crate::linalg::Vector;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    negative: bool,
    coeff: Option<String>,
    symbol: String,
}

fn bad(token: &str, why: &str) -> Error {
    Error::Parse(format!("`{token}`: {why}"))
}

/// Split into signed terms. A sign only separates terms outside brackets and
/// when it does not continue a symbol (`X-a1`, `Da:1,-1`).
fn tokenize(text: &str) -> Result<Vec<Term>> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(bad(text, "empty element"));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        // every term after the first starts at a sign
        let mut negative = false;
        if chars[i] == '+' || chars[i] == '-' {
            negative = chars[i] == '-';
            i += 1;
        }
        let start = i;
        let mut depth = 0i32;
        while i < chars.len() {
            let c = chars[i];
            match c {
                '[' => depth += 1,
                ']' => depth -= 1,
                '+' | '-' if depth == 0 => {
                    let prev = if i > start { Some(chars[i - 1]) } else { None };
                    if !matches!(prev, Some('X' | ',' | ':' | ';' | '/')) {
                        break;
                    }
                }
                _ => {}
            }
            i += 1;
        }
        let raw: String = chars[start..i].iter().collect();
        if raw.is_empty() {
            return Err(bad(&chars[start.saturating_sub(1)..i.min(chars.len())].iter().collect::<String>(), "missing term"));
        }
        if depth != 0 {
            return Err(bad(&raw, "unbalanced brackets"));
        }
        let split = raw.find(|c: char| !(c.is_ascii_digit() || c == '/')).unwrap_or(raw.len());
        let (coeff, rest) = raw.split_at(split);
        let symbol = rest.strip_prefix('*').unwrap_or(rest);
        if symbol.is_empty() {
            return Err(bad(&raw, "coefficient without a basis symbol"));
        }
        terms.push(Term {
            negative,
            coeff: if coeff.is_empty() { None } else { Some(coeff.to_string()) },
            symbol: symbol.to_string(),
        });
    }
    Ok(terms)
}

fn parse_scalar(field: Field, token: &str, context: &str) -> Result<FieldScalar> {
    let q: BigRational = token.parse().map_err(|_| bad(context, "bad number"))?;
    let num = i64::try_from(q.numer().clone()).map_err(|_| bad(context, "number too large"))?;
    let den = i64::try_from(q.denom().clone()).map_err(|_| bad(context, "number too large"))?;
    FieldScalar::from_fraction(field, num, den).map_err(|_| bad(context, "denominator vanishes in this field"))
}

fn parse_vector(field: Field, n: usize, body: &str, symbol: &str) -> Result<Vector> {
    let entries: Vec<&str> = body.split(',').collect();
    if entries.len() != n {
        return Err(bad(symbol, &format!("expected {n} entries, found {}", entries.len())));
    }
    let scalars = entries.iter().map(|e| parse_scalar(field, e, symbol)).collect::<Result<Vec<_>>>()?;
    Vector::from_scalars(field, &scalars)
}

fn parse_index(digits: &str, symbol: &str) -> Result<usize> {
    digits.parse().map_err(|_| bad(symbol, "bad index"))
}

fn resolve(model: &Model, symbol: &str) -> Result<Element> {
    let l = model.base();
    if let Some(i) = l.basis_names().iter().position(|n| n == symbol) {
        return Ok(l.basis_element(i));
    }
    if let Some(c) = model.chevalley() {
        let r = c.root_system().rank();
        let map = |e: Error| match e {
            Error::Parse(m) => bad(symbol, &m),
            other => other,
        };
        if let Some(rest) = symbol.strip_prefix("X[").and_then(|s| s.strip_suffix(']')) {
            let coeffs = rest.split(',').map(|t| t.trim().parse::<i64>()).collect::<std::result::Result<Vec<_>, _>>();
            return match coeffs {
                Ok(v) if v.len() == r => c.root_vector(&v).map_err(map),
                _ => Err(bad(symbol, &format!("expected {r} integer root coordinates"))),
            };
        }
        if let Some(rest) = symbol.strip_prefix("X-a") {
            let i = parse_index(rest, symbol)?;
            let mut root = vec![0; r];
            if i == 0 || i > r {
                return Err(bad(symbol, &format!("simple root index out of range 1..={r}")));
            }
            root[i - 1] = -1;
            return c.root_vector(&root).map_err(map);
        }
        if let Some(rest) = symbol.strip_prefix("Xa") {
            return c.simple_root_vector(parse_index(rest, symbol)?).map_err(map);
        }
        if let Some(rest) = symbol.strip_prefix('H') {
            return c.cartan_element(parse_index(rest, symbol)?).map_err(map);
        }
    }
    if let Some(m) = model.matrix() {
        let field = m.field();
        let n = m.n();
        match m.kind() {
            MatrixKind::Special => {
                if let Some(rest) = symbol.strip_prefix('E') {
                    let (i, j) = match rest.split_once(',') {
                        Some((a, b)) => (parse_index(a, symbol)?, parse_index(b, symbol)?),
                        None if rest.len() == 2 => (parse_index(&rest[..1], symbol)?, parse_index(&rest[1..], symbol)?),
                        None => return Err(bad(symbol, "write E<i>,<j> for matrix units")),
                    };
                    return m.matrix_unit(i, j).map_err(|_| bad(symbol, "not an off-diagonal matrix unit"));
                }
            }
            MatrixKind::Symplectic | MatrixKind::Orthogonal => {
                if let Some(rest) = symbol.strip_prefix("Dab:") {
                    let (a, b) = rest.split_once(';').ok_or_else(|| bad(symbol, "Dab needs two vectors separated by ';'"))?;
                    let a = parse_vector(field, n, a, symbol)?;
                    let b = parse_vector(field, n, b, symbol)?;
                    return if m.kind() == MatrixKind::Symplectic { m.d_sympl(&a, &b) } else { m.d_orth(&a, &b) };
                }
                if let Some(rest) = symbol.strip_prefix("Da:") {
                    if m.kind() != MatrixKind::Symplectic {
                        return Err(bad(symbol, "D_a is only defined for an alternating form"));
                    }
                    return m.d_sympl_single(&parse_vector(field, n, rest, symbol)?);
                }
            }
        }
    }
    Err(bad(symbol, &format!("unknown basis symbol for {}", model.spec())))
}

/// Parse `text` in the model's base algebra (before any quotient).
pub fn parse_element(model: &Model, text: &str) -> Result<Element> {
    let l = model.base();
    let mut x = l.zero();
    for term in tokenize(text)? {
        let mut s = match &term.coeff {
            Some(c) => parse_scalar(l.field(), c, &format!("{}{}", c, term.symbol))?,
            None => l.field().one(),
        };
        if term.negative {
            s = -&s;
        }
        x = x.add(&resolve(model, &term.symbol)?.scale(&s)?)?;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::AlgebraSpec;

    fn model(s: &str) -> Model {
        s.parse::<AlgebraSpec>().unwrap().build().unwrap()
    }

    fn msg(r: Result<Element>) -> String {
        match r {
            Err(Error::Parse(m)) => m,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn tokenizer_keeps_signed_symbols() {
        let t = tokenize("Xa1 - 2*X-a3 + 1/2X[1,-1,0]").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[1], Term { negative: true, coeff: Some("2".into()), symbol: "X-a3".into() });
        assert_eq!(t[2].symbol, "X[1,-1,0]");
        assert_eq!(t[2].coeff.as_deref(), Some("1/2"));
        let t = tokenize("Da:1,-1,0,0").unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn chevalley_symbols() {
        let m = model("F4,gf5");
        let c = m.chevalley().unwrap();
        let x = m.parse_element("Xa1+Xa3").unwrap();
        assert_eq!(x, c.simple_root_sum(&[1, 3]).unwrap());
        assert_eq!(m.parse_element("X[1,2,2,2]").unwrap(), c.root_vector(&[1, 2, 2, 2]).unwrap());
        assert_eq!(m.parse_element("X-a2").unwrap(), c.root_vector(&[0, -1, 0, 0]).unwrap());
        assert_eq!(m.parse_element("3H2 - H2").unwrap(), c.cartan_element(2).unwrap().scale_i64(2));
        assert!(m.parse_element("Xa1 - Xa1").unwrap().is_zero());
    }

    #[test]
    fn matrix_symbols() {
        let m = model("sl3,gf5");
        let e12 = m.matrix().unwrap().matrix_unit(1, 2).unwrap();
        assert_eq!(m.parse_element("E12").unwrap(), e12);
        assert_eq!(m.parse_element("E1,2").unwrap(), e12);
        let sp = model("sp4,gf3");
        let spm = sp.matrix().unwrap();
        let a = Vector::from_i64(spm.field(), &[0, 1, 0, 0]);
        assert_eq!(sp.parse_element("Da:0,1,0,0").unwrap(), spm.d_sympl_single(&a).unwrap());
        let b = Vector::from_i64(spm.field(), &[1, 0, 0, -1]);
        assert_eq!(sp.parse_element("Dab:0,1,0,0;1,0,0,-1").unwrap(), spm.d_sympl(&a, &b).unwrap());
        let so = model("so7,q");
        assert!(so.parse_element("1/2D1,2").is_ok());
        assert!(so.parse_element("Dab:1,0,0,0,0,0,0;0,1,0,0,0,0,0").is_ok());
    }

    #[test]
    fn errors_name_the_token() {
        let m = model("F4,gf5");
        assert!(msg(m.parse_element("Xa1+Ya2")).contains("`Ya2`"));
        assert!(msg(m.parse_element("Xa5")).contains("`Xa5`"));
        assert!(msg(m.parse_element("X[1,1,1]")).contains("`X[1,1,1]`"));
        assert!(msg(m.parse_element("Xa1++Xa2")).contains("missing term"));
        assert!(msg(m.parse_element("1/5Xa1")).contains("`1/5Xa1`"));
        assert!(msg(m.parse_element("3")).contains("`3`"));
        let sl = model("sl3,gf5");
        assert!(msg(sl.parse_element("E11")).contains("`E11`"));
        let sp = model("sp4,gf3");
        assert!(msg(sp.parse_element("Da:1,0,0")).contains("expected 4 entries"));
        let so = model("so7,gf5");
        assert!(msg(so.parse_element("Da:1,0,0,0,0,0,0")).contains("alternating"));
    }
}
