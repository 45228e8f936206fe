//! KLR presentation data and symbolic verification that an explicit
//! finite-dimensional action satisfies the defining relations.
//!
//! Everything is checked as an exact integer matrix identity; there is
//! no numerical tolerance anywhere. The grading bookkeeping is part of
//! the report since a wrong entry can satisfy the raw relations while
//! violating the degree of the generator it sits in.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cartan::CartanSpec;
use crate::shuffle::{CharExpr, Word};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The polynomial Q_{ij}(u, v) of the presentation, with the sign
/// convention eps_{ij} = +1 for i < j and -1 for i > j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    /// (u-exponent, v-exponent) -> coefficient
    terms: BTreeMap<(u32, u32), i64>,
}

impl QPoly {
    fn zero() -> Self {
        QPoly { terms: BTreeMap::new() }
    }

    fn add_term(&mut self, u: u32, v: u32, c: i64) {
        let e = self.terms.entry((u, v)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(u, v));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    /// Swap the two variables.
    pub fn swapped(&self) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(&(a, b), &c)| ((b, a), c)).collect(),
        }
    }

    /// Evaluate on a pair of commuting square matrices.
    pub fn eval(&self, u: &IMat, v: &IMat) -> IMat {
        let n = u.n;
        let mut out = IMat::zero(n);
        for (&(a, b), &c) in &self.terms {
            let term = u.pow(a).mul(&v.pow(b)).scale(c);
            out = out.add(&term);
        }
        out
    }
}

/// Q_{ij} per the presentation: 0 on the diagonal, 1 for orthogonal
/// vertices, eps_{ij}(u^{-c_ij} - v^{-c_ji}) along edges, and the
/// special (u - v)(v - u) in rank-one affine type A.
pub fn q_poly(spec: &CartanSpec, i: usize, j: usize) -> QPoly {
    let mut q = QPoly::zero();
    if i == j {
        return q;
    }
    let cij = spec.cartan_entry(i, j);
    if cij == 0 {
        q.add_term(0, 0, 1);
        return q;
    }
    if spec.family() == crate::cartan::Family::A && spec.rank() == 1 {
        // (u - v)(v - u) = -u^2 + 2uv - v^2
        q.add_term(2, 0, -1);
        q.add_term(1, 1, 2);
        q.add_term(0, 2, -1);
        return q;
    }
    let eps = if i < j { 1 } else { -1 };
    let cji = spec.cartan_entry(j, i);
    q.add_term((-cij) as u32, 0, eps);
    q.add_term(0, (-cji) as u32, -eps);
    q
}

/// Dense square matrix over Z with exact arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    pub n: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(n: usize) -> Self {
        IMat { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::from(1);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: impl Into<BigInt>) {
        let n = self.n;
        self.data[r * n + c] = v.into();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &IMat) -> IMat {
        debug_assert_eq!(self.n, other.n);
        IMat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        debug_assert_eq!(self.n, other.n);
        IMat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> IMat {
        IMat { n: self.n, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        let mut out = IMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.data[i * n + j] += a * b;
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> IMat {
        let mut out = IMat::identity(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Zero out the columns whose basis index is not selected.
    pub fn restrict_cols(&self, keep: &[bool]) -> IMat {
        let n = self.n;
        let mut out = self.clone();
        for (c, &kept) in keep.iter().enumerate() {
            if !kept {
                for r in 0..n {
                    out.data[r * n + c] = BigInt::zero();
                }
            }
        }
        out
    }
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IMat {}x{}", self.n, self.n)?;
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// An explicit graded action: one word and degree per basis vector,
/// matrices for the polynomial generators and the intertwiners. The
/// idempotent projectors are the diagonal indicators of the words.
#[derive(Clone, Debug)]
pub struct ActionMatrices {
    pub words: Vec<Word>,
    pub degrees: Vec<i64>,
    pub y: Vec<IMat>,
    pub psi: Vec<IMat>,
}

impl ActionMatrices {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn word_length(&self) -> usize {
        self.words.first().map(|w| w.len()).unwrap_or(0)
    }

    /// Projector support of the basis vectors with the given word.
    fn block(&self, word: &Word) -> Vec<bool> {
        self.words.iter().map(|w| w == word).collect()
    }

    pub fn character(&self, spec: &CartanSpec) -> crate::error::Result<CharExpr> {
        CharExpr::from_terms(
            spec,
            self.words
                .iter()
                .zip(&self.degrees)
                .map(|(w, &d)| (w.clone(), crate::laurent::LaurentInt::q_power(d))),
        )
    }

    /// Direct sum of two actions with the same word length.
    pub fn direct_sum(&self, other: &ActionMatrices) -> ActionMatrices {
        let n1 = self.dim();
        let n2 = other.dim();
        let embed = |a: &IMat, b: &IMat| {
            let mut m = IMat::zero(n1 + n2);
            for r in 0..n1 {
                for c in 0..n1 {
                    m.set(r, c, a.get(r, c).clone());
                }
            }
            for r in 0..n2 {
                for c in 0..n2 {
                    m.set(n1 + r, n1 + c, b.get(r, c).clone());
                }
            }
            m
        };
        ActionMatrices {
            words: self.words.iter().chain(&other.words).cloned().collect(),
            degrees: self.degrees.iter().chain(&other.degrees).copied().collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| embed(a, b)).collect(),
            psi: self.psi.iter().zip(&other.psi).map(|(a, b)| embed(a, b)).collect(),
        }
    }
}

/// One failed identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RelationFailure {
    pub relation: String,
    pub detail: String,
}

impl fmt::Display for RelationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.relation, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, relation: &str, detail: String) {
        self.failures.push(RelationFailure { relation: relation.to_string(), detail });
    }
}

fn s_r(word: &Word, r: usize) -> Word {
    let mut w = word.0.clone();
    w.swap(r, r + 1);
    Word(w)
}

/// Evaluate every defining relation of the presentation, plus the
/// grading bookkeeping, as exact matrix identities.
pub fn verify_relations(spec: &CartanSpec, action: &ActionMatrices) -> RelationReport {
    let mut report = RelationReport::default();
    let n = action.dim();
    let d = action.word_length();

    if action.words.iter().any(|w| w.len() != d) {
        report.fail("shape", "basis words have unequal lengths".into());
        return report;
    }
    if action.degrees.len() != n
        || action.y.len() != d
        || action.psi.len() != d.saturating_sub(1)
        || action.y.iter().chain(&action.psi).any(|m| m.n != n)
    {
        report.fail("shape", "matrix dimensions disagree with the basis".into());
        return report;
    }
    for w in &action.words {
        if w.0.iter().any(|&c| (c as usize) >= spec.num_vertices()) {
            report.fail("shape", format!("letter out of range in {w}"));
            return report;
        }
    }

    let words: std::collections::BTreeSet<Word> = action.words.iter().cloned().collect();

    // grading: an operator of degree g maps degree m to degree m + g
    for (r, mat) in action.y.iter().enumerate() {
        report.checked += 1;
        for b in 0..n {
            let i_r = action.words[b].0[r] as usize;
            let g = 2 * spec.sym(i_r);
            for a in 0..n {
                if !mat.get(a, b).is_zero() && action.degrees[a] != action.degrees[b] + g {
                    report.fail("grading", format!("y_{} entry ({a},{b}) breaks degree", r + 1));
                }
            }
        }
    }
    for (r, mat) in action.psi.iter().enumerate() {
        report.checked += 1;
        for b in 0..n {
            let w = &action.words[b];
            let g = -spec.sym(w.0[r] as usize)
                * spec.cartan_entry(w.0[r] as usize, w.0[r + 1] as usize);
            for a in 0..n {
                if !mat.get(a, b).is_zero() && action.degrees[a] != action.degrees[b] + g {
                    report.fail("grading", format!("psi_{} entry ({a},{b}) breaks degree", r + 1));
                }
            }
        }
    }

    // polynomial generators preserve weight blocks and commute pairwise
    for (r, mat) in action.y.iter().enumerate() {
        report.checked += 1;
        for b in 0..n {
            for a in 0..n {
                if !mat.get(a, b).is_zero() && action.words[a] != action.words[b] {
                    report.fail(
                        "polynomial-commutation",
                        format!("y_{} does not commute with idempotents at ({a},{b})", r + 1),
                    );
                }
            }
        }
    }
    for r in 0..d {
        for t in (r + 1)..d {
            report.checked += 1;
            if action.y[r].mul(&action.y[t]) != action.y[t].mul(&action.y[r]) {
                report.fail("polynomial-commutation", format!("y_{} y_{} != y_{} y_{}", r + 1, t + 1, t + 1, r + 1));
            }
        }
    }

    // intertwiners map each word block onto the transposed block
    for (r, mat) in action.psi.iter().enumerate() {
        report.checked += 1;
        for b in 0..n {
            let target = s_r(&action.words[b], r);
            for a in 0..n {
                if !mat.get(a, b).is_zero() && action.words[a] != target {
                    report.fail(
                        "intertwiner-block",
                        format!(
                            "psi_{} maps word {} outside block {}",
                            r + 1,
                            action.words[b],
                            target
                        ),
                    );
                }
            }
        }
    }

    // per-word relations, independent across words, so parallel
    let word_list: Vec<&Word> = words.iter().collect();
    let results = check_blocks(spec, action, &word_list);
    for (checked, fails) in results {
        report.checked += checked;
        report.failures.extend(fails);
    }

    // distant intertwiners commute
    let npsi = d.saturating_sub(1);
    for r in 0..npsi {
        for t in (r + 2)..npsi {
            report.checked += 1;
            if action.psi[r].mul(&action.psi[t]) != action.psi[t].mul(&action.psi[r]) {
                report.fail(
                    "distant-commutation",
                    format!("psi_{} psi_{} != psi_{} psi_{}", r + 1, t + 1, t + 1, r + 1),
                );
            }
        }
    }

    report.failures.sort();
    report
}

fn check_block_for_word(
    spec: &CartanSpec,
    action: &ActionMatrices,
    word: &Word,
) -> (usize, Vec<RelationFailure>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    let n = action.dim();
    let d = action.word_length();
    let keep = action.block(word);
    let proj = {
        let mut m = IMat::zero(n);
        for (idx, &k) in keep.iter().enumerate() {
            if k {
                m.set(idx, idx, 1);
            }
        }
        m
    };

    // mixed commutation of y and psi, with the unit corrections
    for r in 0..d.saturating_sub(1) {
        for t in 0..d {
            checked += 1;
            let t_swapped = if t == r {
                r + 1
            } else if t == r + 1 {
                r
            } else {
                t
            };
            let lhs = action.y[t]
                .mul(&action.psi[r])
                .sub(&action.psi[r].mul(&action.y[t_swapped]))
                .restrict_cols(&keep);
            let same = word.0[r] == word.0[r + 1];
            let expect = if same && t == r + 1 {
                proj.clone()
            } else if same && t == r {
                proj.scale(-1)
            } else {
                IMat::zero(n)
            };
            if lhs != expect {
                failures.push(RelationFailure {
                    relation: "mixed-commutation".into(),
                    detail: format!("word {word}, r={}, t={}", r + 1, t + 1),
                });
            }
        }
    }

    // psi_r^2 1_i = Q_{i_r, i_{r+1}}(y_r, y_{r+1}) 1_i
    for r in 0..d.saturating_sub(1) {
        checked += 1;
        let lhs = action.psi[r].mul(&action.psi[r]).restrict_cols(&keep);
        let q = q_poly(spec, word.0[r] as usize, word.0[r + 1] as usize);
        let rhs = q.eval(&action.y[r], &action.y[r + 1]).restrict_cols(&keep);
        if lhs != rhs {
            failures.push(RelationFailure {
                relation: "quadratic".into(),
                detail: format!("word {word}, r={}", r + 1),
            });
        }
    }

    // braid deviation with the divided-difference right side
    for r in 0..d.saturating_sub(2) {
        checked += 1;
        let lhs = action.psi[r + 1]
            .mul(&action.psi[r])
            .mul(&action.psi[r + 1])
            .sub(&action.psi[r].mul(&action.psi[r + 1]).mul(&action.psi[r]))
            .restrict_cols(&keep);
        let rhs = if word.0[r] == word.0[r + 2] {
            let q = q_poly(spec, word.0[r] as usize, word.0[r + 1] as usize);
            divided_difference_eval(&q, &action.y[r + 2], &action.y[r], &action.y[r + 1])
                .restrict_cols(&keep)
        } else {
            IMat::zero(n)
        };
        if lhs != rhs {
            failures.push(RelationFailure {
                relation: "braid-deviation".into(),
                detail: format!("word {word}, r={}", r + 1),
            });
        }
    }

    (checked, failures)
}

#[cfg(feature = "parallel")]
fn check_blocks(
    spec: &CartanSpec,
    action: &ActionMatrices,
    words: &[&Word],
) -> Vec<(usize, Vec<RelationFailure>)> {
    words
        .par_iter()
        .map(|w| check_block_for_word(spec, action, w))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn check_blocks(
    spec: &CartanSpec,
    action: &ActionMatrices,
    words: &[&Word],
) -> Vec<(usize, Vec<RelationFailure>)> {
    words
        .iter()
        .map(|w| check_block_for_word(spec, action, w))
        .collect()
}

/// (Q(u', v) - Q(u, v)) / (u' - u) on commuting matrices: each u^a
/// contributes sum_{s<a} u'^s u^{a-1-s}.
fn divided_difference_eval(q: &QPoly, u_prime: &IMat, u: &IMat, v: &IMat) -> IMat {
    let n = u.n;
    let mut out = IMat::zero(n);
    for ((a, b), c) in q.terms() {
        for s in 0..a {
            let term = u_prime.pow(s).mul(&u.pow(a - 1 - s)).mul(&v.pow(b)).scale(c);
            out = out.add(&term);
        }
    }
    out
}

/// Cyclotomic admissibility at character level: head lengths bounded by
/// the weight pairings.
pub fn cyclotomic_check(x: &CharExpr, lambda: &[i64]) -> bool {
    (0..lambda.len()).all(|i| (x.epsilon_star(i as u8) as i64) <= lambda[i])
}

/// Cyclotomic ideal generators on an explicit action: the operators
/// y_1^{<Lambda, alpha_{i_1}^vee>} 1_i must vanish.
pub fn cyclotomic_vanishing(action: &ActionMatrices, lambda: &[i64]) -> RelationReport {
    let mut report = RelationReport::default();
    let n = action.dim();
    let words: std::collections::BTreeSet<Word> = action.words.iter().cloned().collect();
    for word in words {
        report.checked += 1;
        let first = word.0[0] as usize;
        let k = lambda.get(first).copied().unwrap_or(0);
        let keep = action.block(&word);
        let vanishes = if k == 0 {
            !keep.iter().any(|&b| b)
        } else if action.y.is_empty() {
            true
        } else {
            action.y[0].pow(k as u32).restrict_cols(&keep).is_zero()
        };
        if !vanishes {
            report.fail("cyclotomic", format!("y_1^{k} 1_{word} does not vanish"));
        }
    }
    let _ = n;
    report
}
