//! Minimal pairs and the height recursion computing cuspidal characters
//! ch L_rho for the real positive roots, with cuspidality verification.
//!
//! The recursion: simple roots are single letters; delta - alpha_i is a
//! homogeneous module; n delta +/- alpha_i come from commutators with
//! the minuscule character of color i divided by q_i - q_i^{-1}; every
//! other root has a real minimal pair (beta, gamma) and
//!
//!   ch(L_gamma o L_beta) - q^{-(beta,gamma)} ch(L_beta o L_gamma)
//!     = q^{-p} (1 - q^{2(p - (beta,gamma))}) ch L_rho,
//!
//! solved for ch L_rho by exact division. A division leaving a
//! remainder anywhere is a consistency failure, never rounded away.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanSpec, RootVec};
use crate::convex::{Comparison, ConeOracle, ConvexOrder, Side, Weight};
use crate::error::{Error, Result};
use crate::laurent::LaurentInt;
use crate::roots::{is_positive_root, p_value, real_roots_up_to, RootClass};
use crate::shuffle::{shuffle, shuffle_power, CharExpr, ExpWord, Word};
use crate::weyl::minuscule_component;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a table entry was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Simple,
    HomogeneousDeltaMinus,
    MinusculeCommutatorUp,
    MinusculeCommutatorDown,
    MinimalPairFinite,
    MinimalPair,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Simple => "simple",
            Provenance::HomogeneousDeltaMinus => "homogeneous-delta-minus",
            Provenance::MinusculeCommutatorUp => "minuscule-commutator-up",
            Provenance::MinusculeCommutatorDown => "minuscule-commutator-down",
            Provenance::MinimalPairFinite => "minimal-pair-finite",
            Provenance::MinimalPair => "minimal-pair",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "simple" => Provenance::Simple,
            "homogeneous-delta-minus" => Provenance::HomogeneousDeltaMinus,
            "minuscule-commutator-up" => Provenance::MinusculeCommutatorUp,
            "minuscule-commutator-down" => Provenance::MinusculeCommutatorDown,
            "minimal-pair-finite" => Provenance::MinimalPairFinite,
            "minimal-pair" => Provenance::MinimalPair,
            other => return Err(Error::Cache(format!("unknown provenance {other:?}"))),
        })
    }
}

/// A minimal decomposition rho = beta + gamma with beta > gamma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPair {
    pub rho: RootVec,
    pub beta: RootVec,
    pub gamma: RootVec,
    pub real: bool,
}

/// All minimal pairs for a non-simple positive real root: pairs such
/// that every other pair has a strictly larger top or a strictly
/// smaller bottom.
pub fn minimal_pairs(order: &ConvexOrder, rho: &RootVec) -> Result<Vec<MinimalPair>> {
    let spec = order.spec();
    match is_positive_root(spec, rho) {
        Some(RootClass::Real { .. }) => {}
        _ => return Err(Error::Argument(format!("{rho} is not a positive real root"))),
    }
    if rho.height() == 1 {
        return Err(Error::Argument("simple roots have no minimal pairs".into()));
    }
    let mut pairs: Vec<(RootVec, RootVec, bool)> = Vec::new();
    for beta in crate::roots::positive_roots_up_to(spec, rho.height() - 1) {
        if !beta.0.iter().zip(&rho.0).all(|(b, r)| b <= r) {
            continue;
        }
        let gamma = rho.sub(&beta);
        let Some(gamma_class) = is_positive_root(spec, &gamma) else {
            continue;
        };
        if order.compare(&beta, &gamma)? == Comparison::Greater {
            let beta_real =
                matches!(is_positive_root(spec, &beta), Some(RootClass::Real { .. }));
            let gamma_real = matches!(gamma_class, RootClass::Real { .. });
            pairs.push((beta, gamma, beta_real && gamma_real));
        }
    }
    let mut minimal = Vec::new();
    'outer: for (beta, gamma, real) in &pairs {
        for (b2, g2, _) in &pairs {
            if b2 == beta && g2 == gamma {
                continue;
            }
            let top_bigger = order.compare(b2, beta)? == Comparison::Greater;
            let bottom_smaller = order.compare(g2, gamma)? == Comparison::Less;
            if !(top_bigger || bottom_smaller) {
                continue 'outer;
            }
        }
        minimal.push(MinimalPair {
            rho: rho.clone(),
            beta: beta.clone(),
            gamma: gamma.clone(),
            real: *real,
        });
    }
    minimal.sort_by(|a, b| a.beta.cmp(&b.beta));
    Ok(minimal)
}

/// Memoized table of cuspidal characters over a fixed balanced order.
#[derive(Clone, Debug)]
pub struct CuspidalTable {
    order: ConvexOrder,
    entries: BTreeMap<RootVec, (CharExpr, Provenance)>,
    minuscule: BTreeMap<u8, CharExpr>,
}

impl CuspidalTable {
    pub fn new(order: ConvexOrder) -> Self {
        CuspidalTable { order, entries: BTreeMap::new(), minuscule: BTreeMap::new() }
    }

    pub fn order(&self) -> &ConvexOrder {
        &self.order
    }

    pub fn spec(&self) -> &CartanSpec {
        self.order.spec()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&RootVec, &CharExpr, Provenance)> {
        self.entries.iter().map(|(r, (c, p))| (r, c, *p))
    }

    pub fn provenance(&self, rho: &RootVec) -> Option<Provenance> {
        self.entries.get(rho).map(|(_, p)| *p)
    }

    /// ch L_{delta, i}, cached per color.
    pub fn minuscule_char(&mut self, i: u8) -> Result<CharExpr> {
        if let Some(c) = self.minuscule.get(&i) {
            return Ok(c.clone());
        }
        let m = minuscule_component(self.spec(), i)?;
        self.minuscule.insert(i, m.char_minuscule.clone());
        Ok(m.char_minuscule)
    }

    /// The cuspidal character of a positive real root, computed by the
    /// height recursion and cached.
    pub fn cuspidal_char(&mut self, rho: &RootVec) -> Result<CharExpr> {
        if let Some((c, _)) = self.entries.get(rho) {
            return Ok(c.clone());
        }
        let spec = self.spec().clone();
        let class = match is_positive_root(&spec, rho) {
            Some(RootClass::Real { finite_part, n }) => (finite_part, n),
            Some(RootClass::Imaginary { .. }) => {
                return Err(Error::Argument(format!(
                    "{rho} is imaginary; imaginary characters are indexed by multipartitions, not the cuspidal table"
                )))
            }
            None => return Err(Error::Argument(format!("{rho} is not a positive root"))),
        };
        if rho.height() > self.order.verified_height() {
            return Err(Error::HeightBound {
                height: rho.height(),
                bound: self.order.verified_height(),
            });
        }

        let (result, provenance) = self.compute(rho, class)?;
        if result.weight() != Some(rho) {
            return Err(Error::Verification(format!("character of {rho} has wrong weight")));
        }
        if !result.is_effective() {
            return Err(Error::Verification(format!(
                "character of {rho} has a negative coefficient"
            )));
        }
        if !result.is_bar_invariant() {
            return Err(Error::Verification(format!(
                "character of {rho} is not bar-invariant"
            )));
        }
        self.entries.insert(rho.clone(), (result.clone(), provenance));
        Ok(result)
    }

    fn compute(&mut self, rho: &RootVec, class: (RootVec, i64)) -> Result<(CharExpr, Provenance)> {
        let spec = self.spec().clone();
        let (finite_part, n) = class;

        // (a) simple root
        if rho.height() == 1 {
            let i = rho.0.iter().position(|&c| c == 1).expect("height one") as u8;
            return Ok((CharExpr::single(&spec, Word(vec![i])), Provenance::Simple));
        }

        let simple_up = simple_index(&finite_part);
        let simple_down = simple_index(&finite_part.scale(-1));

        // (b) delta - alpha_i: the homogeneous module
        if n == 1 {
            if let Some(i) = simple_down {
                let m = minuscule_component(&spec, i)?;
                return Ok((m.char_delta_minus, Provenance::HomogeneousDeltaMinus));
            }
        }

        // (c) n delta + alpha_i via the minuscule commutator
        if n >= 1 {
            if let Some(i) = simple_up {
                let s = self.minuscule_char(i)?;
                let beta = rho.sub(&spec.delta());
                let ch_beta = self.cuspidal_char(&beta)?;
                let num = shuffle(&spec, &ch_beta, &s).sub(&shuffle(&spec, &s, &ch_beta));
                let result = num.exact_div(&q_i_minus_inverse(&spec, i))?;
                return Ok((result, Provenance::MinusculeCommutatorUp));
            }
        }

        // (c') n delta - alpha_i, n >= 2
        if n >= 2 {
            if let Some(i) = simple_down {
                let s = self.minuscule_char(i)?;
                let beta = rho.sub(&spec.delta());
                let ch_beta = self.cuspidal_char(&beta)?;
                let num = shuffle(&spec, &s, &ch_beta).sub(&shuffle(&spec, &ch_beta, &s));
                let result = num.exact_div(&q_i_minus_inverse(&spec, i))?;
                return Ok((result, Provenance::MinusculeCommutatorDown));
            }
        }

        // (d) real minimal pair; one exists away from n delta +/- alpha_i.
        // A pair with p = (beta, gamma) makes the commutator relation
        // vacuous (zero on both sides), so such pairs carry no
        // information and are skipped in favor of another real pair.
        let pairs = minimal_pairs(&self.order, rho)?;
        let mut degenerate = None;
        let mut chosen = None;
        for pair in pairs.iter().filter(|p| p.real) {
            let pairing = spec.pairing(&pair.beta, &pair.gamma);
            let p = p_value(&spec, &pair.beta, &pair.gamma)?;
            if p == pairing {
                degenerate = Some(pair.clone());
                continue;
            }
            chosen = Some((pair.clone(), pairing, p));
            break;
        }
        let Some((pair, pairing, p)) = chosen else {
            return Err(match degenerate {
                Some(pair) => Error::Verification(format!(
                    "every real minimal pair for {rho} is degenerate (p = (beta,gamma) at ({}, {})); \
                     the commutator relation is vacuous there — rebuild the order with different weights",
                    pair.beta, pair.gamma
                )),
                None => Error::Verification(format!(
                    "no real minimal pair for {rho}; this only happens at n delta +/- alpha_i"
                )),
            });
        };
        let ch_beta = self.cuspidal_char(&pair.beta)?;
        let ch_gamma = self.cuspidal_char(&pair.gamma)?;
        let num = shuffle(&spec, &ch_gamma, &ch_beta)
            .sub(&shuffle(&spec, &ch_beta, &ch_gamma).shift(-pairing));
        // q^{-p} (1 - q^{2(p - (beta,gamma))}) = q^{-p} - q^{p - 2(beta,gamma)}
        let divisor = &LaurentInt::q_power(-p) - &LaurentInt::q_power(p - 2 * pairing);
        let result = num.exact_div(&divisor)?;
        let tag = if n == 0 { Provenance::MinimalPairFinite } else { Provenance::MinimalPair };
        Ok((result, tag))
    }

    /// Compute every real root up to the height bound, verifying each
    /// entry when asked.
    pub fn sweep(&mut self, max_height: i64, verify: bool) -> Result<SweepReport> {
        let spec = self.spec().clone();
        let roots = real_roots_up_to(&spec, max_height);
        for rho in &roots {
            self.cuspidal_char(rho)?;
        }
        let mut report = SweepReport { computed: roots.clone(), failures: Vec::new() };
        if verify {
            let items: Vec<(RootVec, CharExpr)> = roots
                .iter()
                .map(|r| (r.clone(), self.entries[r].0.clone()))
                .collect();
            let order = &self.order;
            let spec_ref = &spec;
            let mut failures = sweep_verify(&items, |(rho, ch)| {
                let mut local = Vec::new();
                if let Err(e) = check_extremal_law(spec_ref, ch) {
                    local.push(format!("{rho}: extremal law: {e}"));
                }
                match verify_cuspidal(order, rho, ch) {
                    Ok(violations) => {
                        for v in violations {
                            local.push(format!("{rho}: {v}"));
                        }
                    }
                    Err(e) => local.push(format!("{rho}: {e}")),
                }
                local
            });
            failures.sort();
            report.failures = failures;
        }
        Ok(report)
    }
}

#[cfg(feature = "parallel")]
fn sweep_verify<T: Sync, F: Sync + Fn(&T) -> Vec<String>>(items: &[T], f: F) -> Vec<String> {
    items.par_iter().flat_map_iter(&f).collect()
}

#[cfg(not(feature = "parallel"))]
fn sweep_verify<T: Sync, F: Sync + Fn(&T) -> Vec<String>>(items: &[T], f: F) -> Vec<String> {
    items.iter().flat_map(|it| f(it)).collect()
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub computed: Vec<RootVec>,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn simple_index(x: &RootVec) -> Option<u8> {
    if x.height() != 1 || !x.is_nonnegative() {
        return None;
    }
    x.0.iter().position(|&c| c == 1).map(|i| i as u8)
}

/// q_i - q_i^{-1} = q^{d_i} - q^{-d_i}.
fn q_i_minus_inverse(spec: &CartanSpec, i: u8) -> LaurentInt {
    let d = spec.sym(i as usize);
    &LaurentInt::q_power(d) - &LaurentInt::q_power(-d)
}

/// Every extremal word of an irreducible character must carry exactly
/// the product of quantum factorials, i.e. multiplicity one.
pub fn check_extremal_law(spec: &CartanSpec, x: &CharExpr) -> Result<()> {
    for w in x.extremal_words() {
        let m = x.extremal_multiplicity(spec, &w)?;
        if m != LaurentInt::one() {
            return Err(Error::Verification(format!(
                "extremal word {} has multiplicity {m}, expected 1",
                crate::shuffle::exp_word_string(&w)
            )));
        }
    }
    Ok(())
}

/// A violated split in the cuspidality test.
#[derive(Clone, Debug)]
pub struct CuspidalViolation {
    pub beta: RootVec,
    pub gamma: RootVec,
    pub below_ok: bool,
    pub above_ok: bool,
}

impl fmt::Display for CuspidalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "split ({}, {}) violates cuspidality (below ok: {}, above ok: {})",
            self.beta, self.gamma, self.below_ok, self.above_ok
        )
    }
}

/// Check the restriction-support condition: whenever a word of x splits
/// at a prefix weight beta, beta must be a sum of roots strictly below
/// rho and the complement a sum of roots strictly above.
pub fn verify_cuspidal(
    order: &ConvexOrder,
    rho: &RootVec,
    x: &CharExpr,
) -> Result<Vec<CuspidalViolation>> {
    let spec = order.spec();
    if x.weight() != Some(rho) {
        return Err(Error::Argument(format!(
            "character weight does not match {rho}"
        )));
    }
    let prefix_sets = prefix_weight_sets(spec, x, rho.height() as usize);
    let mut below = ConeOracle::new(order, rho, Side::Below, rho.height())?;
    let mut above = ConeOracle::new(order, rho, Side::Above, rho.height())?;
    let mut out = Vec::new();
    for beta in enumerate_splits(rho) {
        if !prefix_sets[beta.height() as usize].contains(&beta.0) {
            continue;
        }
        let gamma = rho.sub(&beta);
        let below_ok = below.member(&beta);
        let above_ok = above.member(&gamma);
        if !(below_ok && above_ok) {
            out.push(CuspidalViolation { beta, gamma, below_ok, above_ok });
        }
    }
    Ok(out)
}

/// For each prefix length, the set of prefix weights over supported
/// words; a split (beta, rest) has nonzero restriction iff beta is in
/// the set at its height.
fn prefix_weight_sets(spec: &CartanSpec, x: &CharExpr, ht: usize) -> Vec<HashSet<Vec<i64>>> {
    let mut sets: Vec<HashSet<Vec<i64>>> = vec![HashSet::new(); ht + 1];
    for (w, _) in x.terms() {
        let mut acc = RootVec::zero(spec.num_vertices());
        for (k, &c) in w.0.iter().enumerate() {
            acc.0[c as usize] += 1;
            if k < ht {
                sets[k + 1].insert(acc.0.clone());
            }
        }
    }
    sets
}

/// Nonzero beta <= rho coordinatewise with beta != rho.
fn enumerate_splits(rho: &RootVec) -> Vec<RootVec> {
    let mut out = Vec::new();
    let n = rho.len();
    let mut cur = vec![0i64; n];
    loop {
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if cur[k] < rho.0[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
            k += 1;
        }
        let beta = RootVec(cur.clone());
        if !beta.is_zero() && beta != *rho {
            out.push(beta);
        }
    }
}

/// The distinguished extremal word for n delta + alpha_i built from an
/// extremal word of the minuscule character (whose tail is the single
/// color letter).
pub fn designated_word_up(s_word: &ExpWord, n: i64) -> ExpWord {
    let mut out: ExpWord =
        s_word[..s_word.len() - 1].iter().map(|&(c, a)| (c, n * a)).collect();
    let (i, a) = s_word[s_word.len() - 1];
    debug_assert_eq!(a, 1);
    out.push((i, n + 1));
    out
}

/// Likewise for n delta - alpha_i (n >= 2): the color letter drops to
/// exponent n - 1.
pub fn designated_word_down(s_word: &ExpWord, n: i64) -> ExpWord {
    let mut out: ExpWord =
        s_word[..s_word.len() - 1].iter().map(|&(c, a)| (c, n * a)).collect();
    let (i, a) = s_word[s_word.len() - 1];
    debug_assert_eq!(a, 1);
    out.push((i, n - 1));
    out
}

/// Outcome of recomputing a table entry through the alternating
/// closed-form sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Match,
    Mismatch { recomputed: Box<CharExpr>, stored: Box<CharExpr> },
}

fn binomial(n: i64, k: i64) -> LaurentInt {
    let mut c: i128 = 1;
    for j in 0..k {
        c = c * (n - j) as i128 / (j + 1) as i128;
    }
    LaurentInt::monomial(0, c as i64)
}

/// Closed-form cross-check for n delta + alpha_i: iterating the
/// commutator recursion collapses to the alternating binomial expansion
///
///   (q_i - q_i^{-1})^n ch = sum_m (-1)^m C(n,m) S^m o (i) o S^{n-m},
///
/// which at n = 1 is the plain alternating two-term sum over
/// q_i - q_i^{-1}.
pub fn closed_form_check_up(table: &mut CuspidalTable, i: u8, n: i64) -> Result<ClosedForm> {
    let spec = table.spec().clone();
    let rho = spec.delta().scale(n).add(&spec.simple_root(i as usize));
    let stored = table.cuspidal_char(&rho)?;
    let s = table.minuscule_char(i)?;
    let letter = CharExpr::single(&spec, Word(vec![i]));
    let mut sum = CharExpr::zero();
    for m in 0..=n {
        let left = shuffle_power(&spec, &s, m as usize);
        let right = shuffle_power(&spec, &s, (n - m) as usize);
        let term = shuffle(&spec, &shuffle(&spec, &left, &letter), &right);
        let coeff = if m % 2 == 0 { binomial(n, m) } else { -binomial(n, m) };
        sum = sum.add(&term.scale(&coeff));
    }
    let mut recomputed = sum;
    let z = q_i_minus_inverse(&spec, i);
    for _ in 0..n {
        recomputed = recomputed.exact_div(&z)?;
    }
    if recomputed == stored {
        Ok(ClosedForm::Match)
    } else {
        Ok(ClosedForm::Mismatch { recomputed: Box::new(recomputed), stored: Box::new(stored) })
    }
}

/// Closed-form cross-check for n delta - alpha_i (n >= 2), the same
/// collapsed commutator expansion with the homogeneous delta - alpha_i
/// factor sliding through the minuscule powers. Diagnostic only: the
/// commutator recursion stays normative.
pub fn closed_form_check_down(table: &mut CuspidalTable, i: u8, n: i64) -> Result<ClosedForm> {
    let spec = table.spec().clone();
    if n < 2 {
        return Err(Error::Argument("closed form for n delta - alpha_i needs n >= 2".into()));
    }
    let rho = spec.delta().scale(n).sub(&spec.simple_root(i as usize));
    let stored = table.cuspidal_char(&rho)?;
    let s = table.minuscule_char(i)?;
    let base = minuscule_component(&spec, i)?.char_delta_minus;
    let mut sum = CharExpr::zero();
    for m in 0..n {
        let left = shuffle_power(&spec, &s, m as usize);
        let right = shuffle_power(&spec, &s, (n - 1 - m) as usize);
        let term = shuffle(&spec, &shuffle(&spec, &left, &base), &right);
        let coeff = if (n - 1 - m) % 2 == 0 {
            binomial(n - 1, m)
        } else {
            -binomial(n - 1, m)
        };
        sum = sum.add(&term.scale(&coeff));
    }
    let mut recomputed = sum;
    let z = q_i_minus_inverse(&spec, i);
    for _ in 0..(n - 1) {
        recomputed = recomputed.exact_div(&z)?;
    }
    if recomputed == stored {
        Ok(ClosedForm::Match)
    } else {
        Ok(ClosedForm::Mismatch { recomputed: Box::new(recomputed), stored: Box::new(stored) })
    }
}

/// Derived diagnostic for symmetric types: the two-step filtration of
/// the standard module of a real minimal pair puts the cuspidal
/// character inside it with the shift q^{p - (beta,gamma)}, so
/// subtracting the shifted cuspidal character must leave an effective
/// character (the head). Returns that head character.
pub fn minimal_pair_head_char(table: &mut CuspidalTable, rho: &RootVec) -> Result<CharExpr> {
    let spec = table.spec().clone();
    if !spec.is_symmetric() {
        return Err(Error::NonSymmetric(spec.type_string()));
    }
    let pairs = minimal_pairs(table.order(), rho)?;
    let pair = pairs
        .iter()
        .find(|p| p.real)
        .ok_or_else(|| Error::Argument(format!("{rho} has no real minimal pair")))?
        .clone();
    let ch_beta = table.cuspidal_char(&pair.beta)?;
    let ch_gamma = table.cuspidal_char(&pair.gamma)?;
    let ch_rho = table.cuspidal_char(rho)?;
    let pairing = spec.pairing(&pair.beta, &pair.gamma);
    let p = p_value(&spec, &pair.beta, &pair.gamma)?;
    let standard = shuffle(&spec, &ch_beta, &ch_gamma);
    let head = standard.sub(&ch_rho.shift(p - pairing));
    if !head.is_effective() {
        return Err(Error::Verification(format!(
            "head character at {rho} is not effective; the shift diagnostic fails"
        )));
    }
    Ok(head)
}

/// Character of the imaginary tensor space of color i.
pub fn tensor_space_char(table: &mut CuspidalTable, i: u8, n: usize) -> Result<CharExpr> {
    let spec = table.spec().clone();
    let s = table.minuscule_char(i)?;
    Ok(shuffle_power(&spec, &s, n))
}

/// Colored product of tensor spaces in ascending color order, the
/// character-level shape of the one-color reduction.
pub fn colored_tensor_char(table: &mut CuspidalTable, counts: &[usize]) -> Result<CharExpr> {
    let spec = table.spec().clone();
    if counts.len() != spec.rank() {
        return Err(Error::Argument(format!(
            "expected {} color multiplicities",
            spec.rank()
        )));
    }
    let mut out = CharExpr::unit(&spec);
    for (idx, &n) in counts.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let factor = tensor_space_char(table, (idx + 1) as u8, n)?;
        out = shuffle(&spec, &out, &factor);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct ImaginaryReport {
    pub checked_splits: usize,
    pub failures: Vec<String>,
}

impl ImaginaryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks around the imaginary tensor space of one color: the
/// one-sided-real restriction condition for the minuscule module, and
/// the multiplicity-one law for its induction powers (isotropy of delta
/// makes the graded multiplicity exactly one).
pub fn imaginary_checks(table: &mut CuspidalTable, i: u8, n: usize) -> Result<ImaginaryReport> {
    let spec = table.spec().clone();
    let order = table.order().clone();
    let mut report = ImaginaryReport::default();
    let s = table.minuscule_char(i)?;
    let delta = spec.delta();

    // restriction condition for the minuscule module: non-imaginary
    // split parts must be sums of real roots strictly on either side of
    // delta (strictly-sided roots are never imaginary, so cone
    // membership is exactly that)
    let mut below = ConeOracle::new(&order, &delta, Side::Below, delta.height())?;
    let mut above = ConeOracle::new(&order, &delta, Side::Above, delta.height())?;
    let prefix_sets = prefix_weight_sets(&spec, &s, delta.height() as usize);
    for beta in enumerate_splits(&delta) {
        let gamma = delta.sub(&beta);
        let either_imaginary = [&beta, &gamma].iter().any(|v| {
            matches!(is_positive_root(&spec, v), Some(RootClass::Imaginary { .. }))
        });
        if either_imaginary {
            continue;
        }
        if !prefix_sets[beta.height() as usize].contains(&beta.0) {
            continue;
        }
        report.checked_splits += 1;
        if !below.member(&beta) || !above.member(&gamma) {
            report.failures.push(format!(
                "color {i}: split ({beta}, {gamma}) breaks the imaginary condition"
            ));
        }
    }

    // multiplicity law for the tensor space
    let m_n = shuffle_power(&spec, &s, n);
    let s_ext = s
        .extremal_words()
        .into_iter()
        .next()
        .ok_or_else(|| Error::Verification("minuscule character has no extremal word".into()))?;
    let induced: ExpWord = s_ext.iter().map(|&(c, a)| (c, a * n as i64)).collect();
    match m_n.extremal_multiplicity(&spec, &induced) {
        Ok(m) if m == LaurentInt::one() => {}
        Ok(m) => report.failures.push(format!(
            "color {i}: tensor space multiplicity {m} at {} (expected 1)",
            crate::shuffle::exp_word_string(&induced)
        )),
        Err(e) => report.failures.push(format!("color {i}: {e}")),
    }
    Ok(report)
}

const CACHE_SCHEMA: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    root: RootVec,
    provenance: String,
    character: CharExpr,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: u32,
    cartan_type: String,
    weights: Vec<String>,
    verified_height: i64,
    entries: Vec<CacheEntry>,
}

/// Persist the table, keyed by type, order weights, and height bound.
pub fn save_cache(table: &CuspidalTable, path: &Path) -> Result<()> {
    let file = CacheFile {
        schema: CACHE_SCHEMA,
        cartan_type: table.spec().type_string(),
        weights: table.order().weights().iter().map(|w| w.to_string()).collect(),
        verified_height: table.order().verified_height(),
        entries: table
            .entries
            .iter()
            .map(|(r, (c, p))| CacheEntry {
                root: r.clone(),
                provenance: p.to_string(),
                character: c.clone(),
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Cache(format!("serialize: {e}")))?;
    std::fs::write(path, text).map_err(|e| Error::Cache(format!("write {path:?}: {e}")))?;
    Ok(())
}

/// Load a table for the given order, revalidating every entry: weight,
/// effectivity, bar-invariance, and the extremal multiplicity law. A
/// schema or key mismatch rejects the cache.
pub fn load_cache(order: &ConvexOrder, path: &Path) -> Result<CuspidalTable> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Cache(format!("read {path:?}: {e}")))?;
    let file: CacheFile =
        serde_json::from_str(&text).map_err(|e| Error::Cache(format!("parse: {e}")))?;
    if file.schema != CACHE_SCHEMA {
        return Err(Error::Cache(format!("schema {} != {CACHE_SCHEMA}", file.schema)));
    }
    if file.cartan_type != order.spec().type_string() {
        return Err(Error::Cache(format!(
            "cache type {} does not match {}",
            file.cartan_type,
            order.spec().type_string()
        )));
    }
    let want: Vec<String> = order.weights().iter().map(|w| w.to_string()).collect();
    if file.weights != want {
        return Err(Error::Cache("order weights changed".into()));
    }
    let spec = order.spec();
    let mut table = CuspidalTable::new(order.clone());
    for entry in file.entries {
        let provenance: Provenance = entry.provenance.parse()?;
        let ch = entry.character;
        if ch.weight() != Some(&entry.root) {
            return Err(Error::Cache(format!("entry {} has wrong weight", entry.root)));
        }
        match is_positive_root(spec, &entry.root) {
            Some(RootClass::Real { .. }) => {}
            _ => return Err(Error::Cache(format!("{} is not real positive", entry.root))),
        }
        if !ch.is_effective() || !ch.is_bar_invariant() {
            return Err(Error::Cache(format!("entry {} fails invariants", entry.root)));
        }
        check_extremal_law(spec, &ch)
            .map_err(|e| Error::Cache(format!("entry {}: {e}", entry.root)))?;
        table.entries.insert(entry.root, (ch, provenance));
    }
    Ok(table)
}

/// Parse order weights from the CLI comma form, e.g. "3,2" or "3/2,1".
pub fn parse_weight_list(s: &str) -> Result<Vec<Weight>> {
    s.split(',').map(Weight::parse).collect()
}
