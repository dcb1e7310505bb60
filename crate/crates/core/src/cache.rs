//! Structure-constant cache: a canonical text listing of a constructed algebra.
//!
//! ```text
//! extremal-structure-constants 1
//! type F4
//! characteristic 5
//! dim 52
//! ordering <sha256 of the basis names, one per line>
//! simple 1
//! label F4 Chevalley over GF(5)
//! names Xa1 Xa2 ...
//! generators 24
//! 0:1 ...                       (sparse coordinates, one generator per line)
//! constants 512
//! 0 1 4 1                       (i < j, [e_i, e_j] has coefficient c on e_k)
//! ```
//!
//! Values are residues in `[0, p)` or reduced rationals `n/d`. Writing the
//! loaded algebra reproduces the file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::lie::{AlgebraBuilder, JacobiCheck, LieAlgebra};
use crate::linalg::Vector;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "extremal-structure-constants";

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "EXTREMAL_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheHeader {
    pub version: u32,
    pub type_label: String,
    pub characteristic: u32,
    pub dim: usize,
    pub ordering: String,
}

/// SHA-256 of the basis names, newline separated; pins the basis order.
pub fn ordering_hash(names: &[String]) -> String {
    let mut h = Sha256::new();
    for n in names {
        h.update(n.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn scalar_text(c: &FieldScalar) -> String {
    c.to_string()
}

pub fn to_text(l: &LieAlgebra, type_label: &str) -> String {
    let mut out = String::new();
    let names = l.basis_names();
    let _ = writeln!(out, "{MAGIC} {FORMAT_VERSION}");
    let _ = writeln!(out, "type {type_label}");
    let _ = writeln!(out, "characteristic {}", l.field().characteristic());
    let _ = writeln!(out, "dim {}", l.dim());
    let _ = writeln!(out, "ordering {}", ordering_hash(names));
    let _ = writeln!(out, "simple {}", u8::from(l.is_simple_extremal_generated()));
    let _ = writeln!(out, "label {}", l.label());
    let _ = writeln!(out, "names {}", names.join(" "));
    let gens = l.extremal_generators();
    let _ = writeln!(out, "generators {}", gens.len());
    for g in &gens {
        let terms: Vec<String> = g
            .coords()
            .to_scalars()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{k}:{}", scalar_text(c)))
            .collect();
        let _ = writeln!(out, "{}", terms.join(" "));
    }
    let sc = l.structure_constants();
    let _ = writeln!(out, "constants {}", sc.len());
    for (i, j, k, c) in &sc {
        let _ = writeln!(out, "{i} {j} {k} {}", scalar_text(c));
    }
    out
}

fn corrupt(line: usize, why: impl Into<String>) -> Error {
    Error::Cache(format!("line {}: {}", line + 1, why.into()))
}

fn parse_value(field: Field, s: &str, line: usize) -> Result<FieldScalar> {
    match field {
        Field::Prime(p) => {
            let v: u32 = s.parse().map_err(|_| corrupt(line, format!("bad residue `{s}`")))?;
            if v >= p {
                return Err(corrupt(line, format!("residue {v} not reduced mod {p}")));
            }
            Ok(FieldScalar::Residue { value: v, modulus: p })
        }
        Field::Rational => {
            let q: BigRational = s.parse().map_err(|_| corrupt(line, format!("bad rational `{s}`")))?;
            if q.to_string() != s {
                return Err(corrupt(line, format!("rational `{s}` is not in canonical form")));
            }
            Ok(FieldScalar::Rational(q))
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, &'a str)> {
        let (n, s) = self.inner.next().ok_or_else(|| corrupt(self.last + 1, "unexpected end of file"))?;
        self.last = n;
        Ok((n, s))
    }

    fn field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, s) = self.next()?;
        match s.strip_prefix(key).and_then(|r| r.strip_prefix(' ')) {
            Some(v) => Ok((n, v)),
            None if s == key => Ok((n, "")),
            None => Err(corrupt(n, format!("expected `{key}`"))),
        }
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (n, v) = self.field(key)?;
        v.parse().map_err(|_| corrupt(n, format!("bad `{key}` value")))
    }
}

/// Parse a cache listing back into an algebra; Jacobi is rechecked as at construction.
pub fn from_text(text: &str) -> Result<(CacheHeader, LieAlgebra)> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };
    let (n, v) = lines.field(MAGIC)?;
    let version: u32 = v.parse().map_err(|_| corrupt(n, "bad version"))?;
    if version != FORMAT_VERSION {
        return Err(corrupt(n, format!("unsupported format version {version}")));
    }
    let (_, type_label) = lines.field("type")?;
    let characteristic: u32 = lines.number("characteristic")?;
    let field = Field::from_characteristic(characteristic)?;
    let dim: usize = lines.number("dim")?;
    let (_, ordering) = lines.field("ordering")?;
    let simple: u8 = lines.number("simple")?;
    let (_, label) = lines.field("label")?;
    let (n, names) = lines.field("names")?;
    let names: Vec<String> = names.split(' ').filter(|s| !s.is_empty()).map(str::to_string).collect();
    if names.len() != dim {
        return Err(corrupt(n, format!("{} names for dimension {dim}", names.len())));
    }
    if ordering_hash(&names) != ordering {
        return Err(corrupt(n, "basis names do not match the ordering hash"));
    }
    let count: usize = lines.number("generators")?;
    let mut gens = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, s) = lines.next()?;
        let mut v = vec![field.zero(); dim];
        for term in s.split(' ').filter(|t| !t.is_empty()) {
            let (k, c) = term.split_once(':').ok_or_else(|| corrupt(n, format!("bad generator term `{term}`")))?;
            let k: usize = k.parse().map_err(|_| corrupt(n, format!("bad index `{k}`")))?;
            if k >= dim {
                return Err(corrupt(n, format!("index {k} out of range")));
            }
            v[k] = parse_value(field, c, n)?;
        }
        gens.push(Vector::from_scalars(field, &v)?);
    }
    let count: usize = lines.number("constants")?;
    let mut b = AlgebraBuilder::new(field, dim, label).names(names).simple(simple == 1).extremal_generators(gens);
    let mut prev: Option<(usize, usize, usize)> = None;
    for _ in 0..count {
        let (n, s) = lines.next()?;
        let parts: Vec<&str> = s.split(' ').collect();
        let [i, j, k, c] = parts.as_slice() else {
            return Err(corrupt(n, "expected `i j k value`"));
        };
        let idx = |t: &str| t.parse::<usize>().map_err(|_| corrupt(n, format!("bad index `{t}`")));
        let key = (idx(i)?, idx(j)?, idx(k)?);
        if key.0 >= key.1 || prev.is_some_and(|p| p >= key) {
            return Err(corrupt(n, "entries must have i < j and be strictly increasing"));
        }
        prev = Some(key);
        let c = parse_value(field, c, n)?;
        if c.is_zero() {
            return Err(corrupt(n, "zero entries are not listed"));
        }
        b.add(key.0, key.1, key.2, c)?;
    }
    if let Ok((n, _)) = lines.next() {
        return Err(corrupt(n, "trailing data"));
    }
    let algebra = b.jacobi_check(JacobiCheck::default_for(dim)).build()?;
    let header = CacheHeader { version, type_label: type_label.to_string(), characteristic, dim, ordering: ordering.to_string() };
    Ok((header, algebra))
}

/// `<dir>/<type>-<field>.sc`.
pub fn cache_path(dir: &Path, type_label: &str, field: Field) -> PathBuf {
    let f = match field {
        Field::Prime(p) => format!("gf{p}"),
        Field::Rational => "q".to_string(),
    };
    dir.join(format!("{type_label}-{f}.sc"))
}

/// The directory from [`CACHE_DIR_ENV`], if set.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn write(path: &Path, l: &LieAlgebra, type_label: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::Cache(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, to_text(l, type_label)).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

pub fn read(path: &Path) -> Result<(CacheHeader, LieAlgebra)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::AlgebraSpec;

    fn round_trip(spec: &str) {
        let spec: AlgebraSpec = spec.parse().unwrap();
        let l = spec.build().unwrap().algebra().clone();
        let text = to_text(&l, &spec.kind.to_string());
        let (h, back) = from_text(&text).unwrap();
        assert_eq!(h.dim, l.dim());
        assert_eq!(h.characteristic, l.field().characteristic());
        assert_eq!(back.structure_constants(), l.structure_constants());
        assert_eq!(back.basis_names(), l.basis_names());
        assert_eq!(back.extremal_generators().len(), l.extremal_generators().len());
        assert_eq!(to_text(&back, &h.type_label), text);
    }

    #[test]
    fn reload_is_bit_identical() {
        round_trip("G2,gf5");
        round_trip("F4,gf3");
        round_trip("sl3,q");
        round_trip("sp4,gf3");
        round_trip("so7,q");
    }

    #[test]
    fn corruption_is_reported() {
        let l = "sl3,gf5".parse::<AlgebraSpec>().unwrap().build().unwrap().algebra().clone();
        let text = to_text(&l, "sl3");
        let swapped = text.replacen("names E12 E13", "names E13 E12", 1);
        assert!(matches!(from_text(&swapped), Err(Error::Cache(m)) if m.contains("ordering hash")));
        let truncated: String = text.lines().take(12).map(|s| format!("{s}\n")).collect();
        assert!(matches!(from_text(&truncated), Err(Error::Cache(_))));
        let unreduced = text.replacen(" 4\n", " 9\n", 1);
        assert!(from_text(&unreduced).is_err());
        assert!(from_text(&text.replace("-constants 1", "-constants 2")).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("extremal-cache-test-{}", std::process::id()));
        let l = "C2,gf3".parse::<AlgebraSpec>().unwrap().build().unwrap().algebra().clone();
        let path = cache_path(&dir, "C2", l.field());
        write(&path, &l, "C2").unwrap();
        let (_, back) = read(&path).unwrap();
        assert_eq!(back.structure_constants(), l.structure_constants());
        fs::remove_dir_all(&dir).unwrap();
    }
}
