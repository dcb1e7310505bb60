//! Root systems of the simple Lie algebras, with simple roots numbered as in
//! Bourbaki's plates.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<CartanType> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::Unsupported(format!("{:?}{}", family, rank)))
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<CartanType> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::Unsupported(s.to_string())),
        };
        let rank: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| Error::Unsupported(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

/// Tie-break among positive roots of equal height.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub enum RootOrder {
    /// Height, then lexicographic on simple-root coefficients.
    #[default]
    HeightLex,
    /// Height, then reversed lexicographic order.
    HeightReverseLex,
}

/// A reduced root system, roots written in the basis of simple roots.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    order: RootOrder,
    /// `(α_i, α_j)` normalized so the short roots have squared length 2.
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

fn simple_root_gram(t: CartanType) -> Vec<Vec<i64>> {
    let n = t.rank;
    let mut g = vec![vec![0i64; n]; n];
    let edge = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match t.family {
        Family::A => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 0..n.saturating_sub(1) {
                edge(&mut g, i, i + 1, -1);
            }
        }
        Family::B => {
            for i in 0..n - 1 {
                g[i][i] = 4;
            }
            g[n - 1][n - 1] = 2;
            for i in 0..n - 1 {
                edge(&mut g, i, i + 1, -2);
            }
        }
        Family::C => {
            for i in 0..n - 1 {
                g[i][i] = 2;
            }
            g[n - 1][n - 1] = 4;
            for i in 0..n - 2 {
                edge(&mut g, i, i + 1, -1);
            }
            edge(&mut g, n - 2, n - 1, -2);
        }
        Family::D => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 0..n - 2 {
                edge(&mut g, i, i + 1, -1);
            }
            edge(&mut g, n - 3, n - 1, -1);
        }
        Family::E => {
            for i in 0..n {
                g[i][i] = 2;
            }
            // 1-3-4-5-6-7-8 with 2 attached to 4
            edge(&mut g, 0, 2, -1);
            edge(&mut g, 1, 3, -1);
            for i in 2..n - 1 {
                edge(&mut g, i, i + 1, -1);
            }
        }
        Family::F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            edge(&mut g, 0, 1, -2);
            edge(&mut g, 1, 2, -2);
            edge(&mut g, 2, 3, -1);
        }
        Family::G => {
            g[0][0] = 2;
            g[1][1] = 6;
            edge(&mut g, 0, 1, -3);
        }
    }
    g
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> RootSystem {
        RootSystem::with_order(cartan_type, RootOrder::HeightLex)
    }

    pub fn with_order(cartan_type: CartanType, order: RootOrder) -> RootSystem {
        let gram = simple_root_gram(cartan_type);
        let n = cartan_type.rank;
        let cartan: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[j][j]).collect()).collect();
        let mut rs = RootSystem { cartan_type, order, gram, cartan, positive: Vec::new(), index: HashMap::new() };
        rs.generate();
        rs
    }

    pub fn from_label(label: &str) -> Result<RootSystem> {
        Ok(RootSystem::new(label.parse()?))
    }

    /// Grow positive roots one height at a time using root strings through simple roots.
    fn generate(&mut self) {
        let n = self.rank();
        let mut known: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
        let mut layer: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut all = Vec::new();
        while !layer.is_empty() {
            for r in &layer {
                known.insert(r.clone());
            }
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    // p: how far the α_i-string extends below β
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if known.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - self.pairing(beta, i);
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            all.extend(layer);
            layer = next;
        }
        let order = self.order;
        all.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| match order {
                RootOrder::HeightLex => a.cmp(b),
                RootOrder::HeightReverseLex => b.cmp(a),
            })
        });
        self.index.clear();
        let np = all.len();
        for (i, r) in all.iter().enumerate() {
            self.index.insert(r.clone(), i);
            self.index.insert(r.iter().map(|c| -c).collect(), np + i);
        }
        self.positive = all;
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn order(&self) -> RootOrder {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    /// `A_ij = 2(α_i, α_j) / (α_j, α_j)`.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_root_gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    /// Positive roots followed by their negatives, in the same order.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let mut out = self.positive.clone();
        out.extend(self.positive.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()));
        out
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }

    /// Position in [`roots`](Self::roots), if `r` is a root.
    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &[i64]) -> bool {
        self.index.contains_key(r)
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    pub fn norm2(&self, a: &[i64]) -> i64 {
        self.inner(a, a)
    }

    /// `⟨β, α_i^∨⟩ = 2(β, α_i) / (α_i, α_i)`.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        let s: i64 = (0..self.rank()).map(|j| beta[j] * self.gram[j][i]).sum();
        2 * s / self.gram[i][i]
    }

    pub fn height(r: &[i64]) -> i64 {
        r.iter().sum()
    }

    pub fn long_norm2(&self) -> i64 {
        (0..self.rank()).map(|i| self.gram[i][i]).max().unwrap_or(2)
    }

    pub fn is_long(&self, r: &[i64]) -> bool {
        self.norm2(r) == self.long_norm2()
    }

    pub fn is_positive(r: &[i64]) -> bool {
        r.iter().any(|&c| c > 0)
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive.last().expect("nonempty root system")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(label: &str) -> usize {
        RootSystem::from_label(label).unwrap().num_roots()
    }

    #[test]
    fn classical_root_counts() {
        assert_eq!(count("A1"), 2);
        assert_eq!(count("A3"), 12);
        assert_eq!(count("B3"), 18);
        assert_eq!(count("C2"), 8);
        assert_eq!(count("C3"), 18);
        assert_eq!(count("D4"), 24);
        assert_eq!(count("D5"), 40);
    }

    #[test]
    fn exceptional_root_counts() {
        assert_eq!(count("G2"), 12);
        assert_eq!(count("F4"), 48);
        assert_eq!(count("E6"), 72);
        assert_eq!(count("E7"), 126);
        assert_eq!(count("E8"), 240);
    }

    #[test]
    fn g2_has_six_long_and_six_short() {
        let rs = RootSystem::from_label("G2").unwrap();
        let long = rs.roots().iter().filter(|r| rs.is_long(r)).count();
        assert_eq!(long, 6);
        assert!(!rs.is_long(&[1, 0]));
        assert!(rs.is_long(&[0, 1]));
        assert_eq!(rs.highest_root(), &[3, 2]);
    }

    #[test]
    fn f4_numbering() {
        let rs = RootSystem::from_label("F4").unwrap();
        assert!(rs.is_long(&[1, 0, 0, 0]));
        assert!(!rs.is_long(&[0, 0, 0, 1]));
        assert_eq!(rs.highest_root(), &[2, 3, 4, 2]);
        assert_eq!(rs.cartan_matrix()[1][2], -2);
        assert_eq!(rs.cartan_matrix()[2][1], -1);
    }

    #[test]
    fn bourbaki_highest_roots() {
        assert_eq!(RootSystem::from_label("E6").unwrap().highest_root(), &[1, 2, 2, 3, 2, 1]);
        assert_eq!(RootSystem::from_label("E7").unwrap().highest_root(), &[2, 2, 3, 4, 3, 2, 1]);
        assert_eq!(RootSystem::from_label("E8").unwrap().highest_root(), &[2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(RootSystem::from_label("B3").unwrap().highest_root(), &[1, 2, 2]);
        assert_eq!(RootSystem::from_label("C3").unwrap().highest_root(), &[2, 2, 1]);
    }

    #[test]
    fn cartan_entries_from_gram() {
        for label in ["A4", "B3", "C4", "D5", "E6", "F4", "G2"] {
            let rs = RootSystem::from_label(label).unwrap();
            let g = rs.simple_root_gram();
            for i in 0..rs.rank() {
                assert_eq!(rs.cartan_matrix()[i][i], 2);
                for j in 0..rs.rank() {
                    assert_eq!(rs.cartan_matrix()[i][j] * g[j][j], 2 * g[i][j]);
                }
            }
        }
    }

    #[test]
    fn labels_validated() {
        assert!("D3".parse::<CartanType>().is_err());
        assert!("E9".parse::<CartanType>().is_err());
        assert!("X2".parse::<CartanType>().is_err());
        assert_eq!("c2".parse::<CartanType>().unwrap().to_string(), "C2");
    }

    #[test]
    fn reversed_order_permutes_within_heights() {
        let a = RootSystem::with_order("F4".parse().unwrap(), RootOrder::HeightLex);
        let b = RootSystem::with_order("F4".parse().unwrap(), RootOrder::HeightReverseLex);
        let mut pa = a.positive_roots().to_vec();
        let mut pb = b.positive_roots().to_vec();
        assert_ne!(pa, pb);
        pa.sort();
        pb.sort();
        assert_eq!(pa, pb);
    }
}
