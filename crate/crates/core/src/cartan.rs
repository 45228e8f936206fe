//! Affine Cartan data of untwisted type.
//!
//! Node numbering follows Kac's Table Aff 1: the index set is
//! I = {0, 1, ..., l} with 0 the affine vertex, and the finite part
//! I' = {1, ..., l} carries the classical (Bourbaki) numbering. The
//! finite diagram is specified by its symmetrizers and edges; the
//! affine vertex is attached along the highest root, which is found by
//! a Weyl-orbit search rather than read from a table.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite series of the underlying simple Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// Element of the root lattice as a coefficient vector over I = {0,...,l}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(len: usize) -> Self {
        RootVec(vec![0; len])
    }

    pub fn simple(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        RootVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Membership in Q_+ (all coefficients nonnegative).
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> RootVec {
        RootVec(self.0.iter().map(|a| a * k).collect())
    }

    /// Textual form `[1,2,1]` in index order 0..l.
    pub fn bracketed(&self) -> String {
        let inner: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        format!("[{}]", inner.join(","))
    }

    pub fn parse_bracketed(s: &str) -> Result<RootVec> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Argument(format!("root vector {s:?} must look like [1,2,1]")))?;
        if inner.trim().is_empty() {
            return Err(Error::Argument("empty root vector".into()));
        }
        let coeffs = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Argument(format!("bad coefficient {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<i64>>>()?;
        Ok(RootVec(coeffs))
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bracketed())
    }
}

/// Immutable affine Cartan datum: matrix, symmetrizers, delta marks,
/// highest finite root, and the finite positive system used for O(1)
/// root membership tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanSpec {
    family: Family,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    sym: Vec<i64>,
    marks: Vec<i64>,
    theta: RootVec,
    finite_positive: Vec<RootVec>,
    finite_set: HashSet<Vec<i64>>,
}

impl CartanSpec {
    /// Finite rank l; the affine index set is {0, ..., l}.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Number of vertices l + 1.
    pub fn num_vertices(&self) -> usize {
        self.rank + 1
    }

    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    /// Symmetrizer d_i = (alpha_i, alpha_i)/2.
    pub fn sym(&self, i: usize) -> i64 {
        self.sym[i]
    }

    /// Marks a_i of the null root, delta = sum a_i alpha_i.
    pub fn mark(&self, i: usize) -> i64 {
        self.marks[i]
    }

    pub fn is_symmetric(&self) -> bool {
        self.sym.iter().all(|&d| d == 1)
    }

    pub fn delta(&self) -> RootVec {
        RootVec(self.marks.clone())
    }

    pub fn theta(&self) -> &RootVec {
        &self.theta
    }

    pub fn simple_root(&self, i: usize) -> RootVec {
        RootVec::simple(self.num_vertices(), i)
    }

    /// (alpha_i, alpha_j) = d_i c_{ij}, the symmetric product of two
    /// simple roots.
    pub fn form(&self, i: usize, j: usize) -> i64 {
        self.sym[i] * self.cartan[i][j]
    }

    /// The bilinear form (x, y) = sum x_i y_j d_i c_{ij}.
    pub fn pairing(&self, x: &RootVec, y: &RootVec) -> i64 {
        let n = self.num_vertices();
        let mut out = 0;
        for i in 0..n {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                out += x.0[i] * y.0[j] * self.form(i, j);
            }
        }
        out
    }

    /// Coroot pairing <x, alpha_j^vee> = sum_k c_{jk} x_k.
    pub fn coroot_pairing(&self, j: usize, x: &RootVec) -> i64 {
        (0..self.num_vertices()).map(|k| self.cartan[j][k] * x.0[k]).sum()
    }

    /// Simple reflection r_j acting on the root lattice.
    pub fn reflect(&self, j: usize, x: &RootVec) -> RootVec {
        let pairing = self.coroot_pairing(j, x);
        let mut out = x.clone();
        out.0[j] -= pairing;
        out
    }

    /// The positive roots of the finite subsystem on I' = {1,...,l}.
    pub fn finite_positive_roots(&self) -> &[RootVec] {
        &self.finite_positive
    }

    pub fn is_finite_positive(&self, x: &RootVec) -> bool {
        self.finite_set.contains(&x.0)
    }

    /// Type string such as "A2~" ('~' marks the affine extension).
    pub fn type_string(&self) -> String {
        format!("{}{}~", self.family, self.rank)
    }
}

impl fmt::Display for CartanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.type_string())
    }
}

impl FromStr for CartanSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<CartanSpec> {
        let t = s.trim();
        let body = t
            .strip_suffix('~')
            .ok_or_else(|| Error::Config(format!("type {t:?} must end in '~', e.g. \"A2~\"")))?;
        let mut chars = body.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Config("empty type string".into()))?;
        let family = match letter.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            other => return Err(Error::Config(format!("unknown family {other:?}"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Config(format!("bad rank in type {t:?}")))?;
        build_cartan(family, rank)
    }
}

/// Finite diagram data: symmetrizers and edges, Bourbaki numbering on
/// 1..=l. Edge products are (alpha_i, alpha_j) = -max(d_i, d_j).
type Diagram = (Vec<i64>, Vec<(usize, usize)>);

fn finite_diagram(family: Family, l: usize) -> Result<Diagram> {
    let chain = |l: usize| (1..l).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match (family, l) {
        (Family::A, l) if l >= 1 => Ok((vec![1; l], chain(l))),
        (Family::B, l) if l >= 3 => {
            let mut d = vec![2; l];
            d[l - 1] = 1;
            Ok((d, chain(l)))
        }
        (Family::C, l) if l >= 2 => {
            let mut d = vec![1; l];
            d[l - 1] = 2;
            Ok((d, chain(l)))
        }
        (Family::D, l) if l >= 4 => {
            let mut edges = (1..l - 1).map(|i| (i, i + 1)).collect::<Vec<_>>();
            edges.push((l - 2, l));
            Ok((vec![1; l], edges))
        }
        (Family::E, l @ 6..=8) => {
            let mut edges = vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)];
            if l >= 7 {
                edges.push((6, 7));
            }
            if l == 8 {
                edges.push((7, 8));
            }
            Ok((vec![1; l], edges))
        }
        (Family::F, 4) => Ok((vec![2, 2, 1, 1], vec![(1, 2), (2, 3), (3, 4)])),
        (Family::G, 2) => Ok((vec![3, 1], vec![(1, 2)])),
        _ => Err(Error::Config(format!(
            "unsupported untwisted affine type {family}{l}~"
        ))),
    }
}

/// Build the affine Cartan datum for the given untwisted type.
pub fn build_cartan(family: Family, rank: usize) -> Result<CartanSpec> {
    let l = rank;
    let n = l + 1;
    let (dfin, edges) = finite_diagram(family, l)?;

    // Symmetric products b_{ij} = (alpha_i, alpha_j) on the finite part.
    let mut b = vec![vec![0i64; n]; n];
    for i in 1..=l {
        b[i][i] = 2 * dfin[i - 1];
    }
    for &(i, j) in &edges {
        let prod = -dfin[i - 1].max(dfin[j - 1]);
        b[i][j] = prod;
        b[j][i] = prod;
    }

    let mut cartan = vec![vec![0i64; n]; n];
    let mut sym = vec![0i64; n];
    for i in 1..=l {
        sym[i] = dfin[i - 1];
        for j in 1..=l {
            cartan[i][j] = b[i][j] / sym[i];
        }
    }

    // Highest root of the finite system by Weyl-orbit search.
    let finite_positive = finite_orbit(&cartan, l, n);
    let theta = finite_positive
        .iter()
        .max_by_key(|r| (r.height(), r.0.clone()))
        .expect("finite system nonempty")
        .clone();

    // Attach the affine vertex: alpha_0 = delta - theta pairs like -theta.
    let theta_theta: i64 = (1..=l)
        .flat_map(|i| (1..=l).map(move |j| (i, j)))
        .map(|(i, j)| theta.0[i] * theta.0[j] * b[i][j])
        .sum();
    assert!(theta_theta > 0 && theta_theta % 2 == 0);
    sym[0] = theta_theta / 2;
    b[0][0] = theta_theta;
    cartan[0][0] = 2;
    for j in 1..=l {
        let theta_j: i64 = (1..=l).map(|k| theta.0[k] * b[k][j]).sum();
        b[0][j] = -theta_j;
        b[j][0] = -theta_j;
        cartan[0][j] = b[0][j] / sym[0];
        cartan[j][0] = b[j][0] / sym[j];
    }

    let mut marks = vec![0i64; n];
    marks[0] = 1;
    marks[1..=l].copy_from_slice(&theta.0[1..=l]);

    let finite_set: HashSet<Vec<i64>> =
        finite_positive.iter().map(|r| r.0.clone()).collect();
    let spec = CartanSpec {
        family,
        rank,
        cartan,
        sym,
        marks,
        theta,
        finite_positive,
        finite_set,
    };
    validate(&spec)?;
    Ok(spec)
}

/// Closure of the simple roots of the finite subsystem under its Weyl
/// group, filtered to the positive ones.
fn finite_orbit(cartan: &[Vec<i64>], l: usize, n: usize) -> Vec<RootVec> {
    let reflect = |j: usize, x: &RootVec| -> RootVec {
        let pairing: i64 = (1..=l).map(|k| cartan[j][k] * x.0[k]).sum();
        let mut out = x.clone();
        out.0[j] -= pairing;
        out
    };
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<RootVec> = VecDeque::new();
    for i in 1..=l {
        let a = RootVec::simple(n, i);
        seen.insert(a.0.clone());
        queue.push_back(a);
    }
    while let Some(x) = queue.pop_front() {
        for j in 1..=l {
            let y = reflect(j, &x);
            if seen.insert(y.0.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<RootVec> = seen
        .into_iter()
        .filter(|v| v.iter().all(|&c| c >= 0))
        .map(RootVec)
        .collect();
    out.sort_by_key(|r| (r.height(), r.0.clone()));
    out
}

fn validate(spec: &CartanSpec) -> Result<()> {
    let n = spec.num_vertices();
    for i in 0..n {
        if spec.cartan[i][i] != 2 {
            return Err(Error::Config(format!("c_{{{i}{i}}} != 2")));
        }
        for j in 0..n {
            if i != j && spec.cartan[i][j] > 0 {
                return Err(Error::Config(format!("c_{{{i}{j}}} > 0 off-diagonal")));
            }
            if spec.sym[i] * spec.cartan[i][j] != spec.sym[j] * spec.cartan[j][i] {
                return Err(Error::Config(format!("symmetrizer fails at ({i},{j})")));
            }
        }
        // delta is null: sum_j c_{ij} a_j = 0.
        let row: i64 = (0..n).map(|j| spec.cartan[i][j] * spec.marks[j]).sum();
        if row != 0 {
            return Err(Error::Config(format!("delta is not null at row {i}")));
        }
    }
    if spec.marks[0] != 1 {
        return Err(Error::Config("a_0 != 1".into()));
    }
    if spec.sym.iter().min() != Some(&1) {
        return Err(Error::Config("no short simple root with (a,a) = 2".into()));
    }
    // delta - alpha_0 = theta.
    let diff = spec.delta().sub(&spec.simple_root(0));
    if diff != spec.theta {
        return Err(Error::Config("delta - alpha_0 != theta".into()));
    }
    Ok(())
}

/// All implemented types at small rank, for sweep-style tests.
pub fn small_types() -> Vec<CartanSpec> {
    let mut out = Vec::new();
    for (fam, ranks) in [
        (Family::A, vec![1usize, 2, 3, 4, 5]),
        (Family::B, vec![3, 4, 5]),
        (Family::C, vec![2, 3, 4]),
        (Family::D, vec![4, 5, 6]),
        (Family::E, vec![6, 7, 8]),
        (Family::F, vec![4]),
        (Family::G, vec![2]),
    ] {
        for l in ranks {
            out.push(build_cartan(fam, l).expect("standard type"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_affine_matrix() {
        let spec = build_cartan(Family::A, 1).unwrap();
        assert_eq!(spec.cartan_entry(0, 0), 2);
        assert_eq!(spec.cartan_entry(0, 1), -2);
        assert_eq!(spec.cartan_entry(1, 0), -2);
        assert_eq!(spec.mark(0), 1);
        assert_eq!(spec.mark(1), 1);
        assert_eq!(spec.theta(), &RootVec(vec![0, 1]));
    }

    #[test]
    fn a2_marks_and_pairings() {
        let spec = build_cartan(Family::A, 2).unwrap();
        assert_eq!(spec.marks, vec![1, 1, 1]);
        assert_eq!(spec.theta(), &RootVec(vec![0, 1, 1]));
        assert!(spec.is_symmetric());
        let a1 = spec.simple_root(1);
        let a2 = spec.simple_root(2);
        assert_eq!(spec.pairing(&a1, &a1), 2);
        assert_eq!(spec.pairing(&a1, &a2), -1);
    }

    #[test]
    fn delta_is_isotropic_everywhere() {
        for spec in small_types() {
            let d = spec.delta();
            assert_eq!(spec.pairing(&d, &d), 0, "type {spec}");
            for i in 0..spec.num_vertices() {
                assert_eq!(spec.pairing(&d, &spec.simple_root(i)), 0, "type {spec} i={i}");
            }
        }
    }

    #[test]
    fn theta_norm_in_simply_laced() {
        for spec in small_types() {
            if spec.is_symmetric() {
                assert_eq!(spec.pairing(spec.theta(), spec.theta()), 2, "type {spec}");
            }
        }
    }

    #[test]
    fn type_string_round_trip() {
        for spec in small_types() {
            let again: CartanSpec = spec.type_string().parse().unwrap();
            assert_eq!(again, spec);
        }
        assert!("A0~".parse::<CartanSpec>().is_err());
        assert!("B2~".parse::<CartanSpec>().is_err());
        assert!("E9~".parse::<CartanSpec>().is_err());
        assert!("A2".parse::<CartanSpec>().is_err());
        assert!("X4~".parse::<CartanSpec>().is_err());
    }

    #[test]
    fn deterministic_build() {
        let a = build_cartan(Family::D, 4).unwrap();
        let b = build_cartan(Family::D, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn finite_root_counts() {
        let count = |f, l| build_cartan(f, l).unwrap().finite_positive_roots().len();
        assert_eq!(count(Family::A, 2), 3);
        assert_eq!(count(Family::A, 1), 1);
        assert_eq!(count(Family::D, 4), 12);
        assert_eq!(count(Family::G, 2), 6);
        assert_eq!(count(Family::F, 4), 24);
        assert_eq!(count(Family::B, 3), 9);
        assert_eq!(count(Family::C, 3), 9);
        assert_eq!(count(Family::E, 6), 36);
    }

    #[test]
    fn root_vec_text() {
        let r = RootVec(vec![1, 2, 1]);
        assert_eq!(r.bracketed(), "[1,2,1]");
        assert_eq!(RootVec::parse_bracketed("[1, 2, 1]").unwrap(), r);
        assert!(RootVec::parse_bracketed("1,2,1").is_err());
        assert!(RootVec::parse_bracketed("[]").is_err());
    }
}
