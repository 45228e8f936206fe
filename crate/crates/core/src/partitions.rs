//! Multipartitions, root partitions, the bilexicographic order, shifts,
//! Kostant counts, and standard-module characters.
//!
//! The enumeration indexes real roots through the convex order; the
//! count is checked against an order-free generating-function oracle
//! (multisets of real roots plus an l-colored copy of each imaginary
//! root), which is exactly the weight-space dimension the partition
//! count must reproduce.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanSpec, RootVec};
use crate::convex::ConvexOrder;
use crate::cuspidal::CuspidalTable;
use crate::error::{Error, Result};
use crate::roots::{is_positive_root, positive_roots_up_to, RootClass};
use crate::shuffle::{shuffle, CharExpr};

/// An l-tuple of ordinary partitions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multipartition(pub Vec<Vec<i64>>);

impl Multipartition {
    pub fn empty(l: usize) -> Self {
        Multipartition(vec![Vec::new(); l])
    }

    /// The multipartition of 1 with the single box in component i
    /// (colors are 1-based finite vertices).
    pub fn color_one(l: usize, i: u8) -> Self {
        let mut mp = Multipartition::empty(l);
        mp.0[i as usize - 1] = vec![1];
        mp
    }

    pub fn total(&self) -> i64 {
        self.0.iter().map(|p| p.iter().sum::<i64>()).sum()
    }

    /// For |mu| = 1, the color carrying the box.
    pub fn single_color(&self) -> Option<u8> {
        if self.total() != 1 {
            return None;
        }
        self.0
            .iter()
            .position(|p| p == &vec![1])
            .map(|idx| (idx + 1) as u8)
    }

    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|p| {
            p.iter().all(|&x| x > 0) && p.windows(2).all(|w| w[0] >= w[1])
        })
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self
            .0
            .iter()
            .map(|p| {
                let inner: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect();
        write!(f, "[{}]", comps.join(","))
    }
}

fn partitions_of(m: i64) -> Vec<Vec<i64>> {
    fn go(remaining: i64, max_part: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        let top = remaining.min(max_part);
        for part in (1..=top).rev() {
            acc.push(part);
            go(remaining - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// All l-multipartitions of m, duplicate-free.
pub fn multipartitions(m: i64, l: usize) -> Vec<Multipartition> {
    fn go(
        comp: usize,
        l: usize,
        remaining: i64,
        acc: &mut Vec<Vec<i64>>,
        out: &mut Vec<Multipartition>,
    ) {
        if comp == l {
            if remaining == 0 {
                out.push(Multipartition(acc.clone()));
            }
            return;
        }
        for take in 0..=remaining {
            for p in partitions_of(take) {
                acc.push(p);
                go(comp + 1, l, remaining - take, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if m >= 0 {
        go(0, l, m, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// A root partition: multiplicities of indexed real roots plus an
/// l-multipartition for the imaginary block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPartition {
    /// order index n != 0 -> (rho_n, m_n), all m_n > 0
    pub real: BTreeMap<i64, (RootVec, i64)>,
    pub m0: i64,
    pub mu: Multipartition,
}

impl RootPartition {
    pub fn alpha(&self, spec: &CartanSpec) -> RootVec {
        let mut out = spec.delta().scale(self.m0);
        for (root, m) in self.real.values() {
            out = out.add(&root.scale(*m));
        }
        out
    }

    /// The trivial partition of a real root with known index.
    pub fn trivial(index: i64, rho: RootVec, l: usize) -> Self {
        let mut real = BTreeMap::new();
        real.insert(index, (rho, 1));
        RootPartition { real, m0: 0, mu: Multipartition::empty(l) }
    }

    /// Support sequence in left-to-right reading order: positive
    /// indices ascending, then the imaginary slot, then negative
    /// indices ascending.
    fn reading(&self, support: &[i64]) -> Vec<i64> {
        support
            .iter()
            .map(|&n| {
                if n == 0 {
                    self.m0
                } else {
                    self.real.get(&n).map(|(_, m)| *m).unwrap_or(0)
                }
            })
            .collect()
    }
}

impl fmt::Display for RootPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut pos: Vec<_> = self.real.iter().filter(|(n, _)| **n > 0).collect();
        pos.sort_by_key(|(n, _)| **n);
        for (n, (root, m)) in pos {
            parts.push(format!("rho_{n}={root}^{m}"));
        }
        if self.m0 > 0 {
            parts.push(format!("delta^{} mu={}", self.m0, self.mu));
        }
        let mut neg: Vec<_> = self.real.iter().filter(|(n, _)| **n < 0).collect();
        neg.sort_by_key(|(n, _)| **n);
        for (n, (root, m)) in neg {
            parts.push(format!("rho_{n}={root}^{m}"));
        }
        write!(f, "({})", parts.join(", "))
    }
}

/// Outcome of comparing two root partitions in the bilexicographic
/// partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// Compare in the partial order: left-lex and reversed-right-lex must
/// agree, and equal supports compare by the multipartition.
pub fn compare_partitions(
    spec: &CartanSpec,
    a: &RootPartition,
    b: &RootPartition,
) -> Result<PartitionOrder> {
    if a.alpha(spec) != b.alpha(spec) {
        return Err(Error::Argument("partitions of different weights".into()));
    }
    // union of support in reading order
    let mut pos: Vec<i64> = a
        .real
        .keys()
        .chain(b.real.keys())
        .copied()
        .filter(|&n| n > 0)
        .collect();
    pos.sort_unstable();
    pos.dedup();
    let mut neg: Vec<i64> = a
        .real
        .keys()
        .chain(b.real.keys())
        .copied()
        .filter(|&n| n < 0)
        .collect();
    neg.sort_unstable();
    neg.dedup();
    let mut support = pos;
    support.push(0);
    support.extend(neg);

    let ra = a.reading(&support);
    let rb = b.reading(&support);
    if ra == rb {
        return Ok(if a.mu == b.mu { PartitionOrder::Equal } else { PartitionOrder::Incomparable });
    }
    // Strictly smaller means smaller in both reading directions: the
    // support neither starts higher at the top nor reaches lower at the
    // bottom. This is what makes trivial partitions minimal and puts
    // purely imaginary partitions below two-sided real ones.
    let left = ra.cmp(&rb);
    let right = {
        let rev_a: Vec<i64> = ra.iter().rev().copied().collect();
        let rev_b: Vec<i64> = rb.iter().rev().copied().collect();
        rev_a.cmp(&rev_b)
    };
    Ok(match (left, right) {
        (Ordering::Less, Ordering::Less) => PartitionOrder::Less,
        (Ordering::Greater, Ordering::Greater) => PartitionOrder::Greater,
        _ => PartitionOrder::Incomparable,
    })
}

/// All root partitions of alpha. Real roots that can appear are bounded
/// by the height of alpha, which keeps the index range finite.
pub fn root_partitions(order: &ConvexOrder, alpha: &RootVec) -> Result<Vec<RootPartition>> {
    let spec = order.spec();
    if !alpha.is_nonnegative() {
        return Err(Error::Argument(format!("{alpha} is not in Q_+")));
    }
    if alpha.height() > order.verified_height() {
        return Err(Error::HeightBound {
            height: alpha.height(),
            bound: order.verified_height(),
        });
    }
    let l = spec.rank();
    let delta = spec.delta();
    let e = delta.height();
    let mut candidates: Vec<(i64, RootVec)> = Vec::new();
    for r in positive_roots_up_to(spec, alpha.height()) {
        if !r.0.iter().zip(&alpha.0).all(|(c, a)| c <= a) {
            continue;
        }
        if matches!(is_positive_root(spec, &r), Some(RootClass::Real { .. })) {
            candidates.push((order.index_of(&r)?, r));
        }
    }
    candidates.sort_by_key(|(n, _)| *n);

    let mut out = Vec::new();
    let max_m0 = alpha.height() / e;
    for m0 in 0..=max_m0 {
        let rest = alpha.sub(&delta.scale(m0));
        if !rest.is_nonnegative() {
            continue;
        }
        let mut chosen: Vec<(i64, RootVec, i64)> = Vec::new();
        collect_real_solutions(&candidates, 0, &rest, &mut chosen, &mut |sol| {
            for mu in multipartitions(m0, l) {
                let real: BTreeMap<i64, (RootVec, i64)> = sol
                    .iter()
                    .map(|(n, r, m)| (*n, (r.clone(), *m)))
                    .collect();
                out.push(RootPartition { real, m0, mu });
            }
        });
    }
    out.sort_by(|a, b| {
        let ka: Vec<(i64, i64)> = a.real.iter().map(|(n, (_, m))| (*n, *m)).collect();
        let kb: Vec<(i64, i64)> = b.real.iter().map(|(n, (_, m))| (*n, *m)).collect();
        (ka, a.m0, a.mu.clone()).cmp(&(kb, b.m0, b.mu.clone()))
    });
    Ok(out)
}

fn collect_real_solutions(
    candidates: &[(i64, RootVec)],
    start: usize,
    target: &RootVec,
    chosen: &mut Vec<(i64, RootVec, i64)>,
    emit: &mut impl FnMut(&[(i64, RootVec, i64)]),
) {
    if target.is_zero() {
        emit(chosen);
        return;
    }
    if start == candidates.len() {
        return;
    }
    let (index, root) = &candidates[start];
    // multiplicity 0 first, then as many as fit
    collect_real_solutions(candidates, start + 1, target, chosen, emit);
    let mut m = 0;
    let mut rest = target.clone();
    loop {
        if !root.0.iter().zip(&rest.0).all(|(r, t)| r <= t) {
            break;
        }
        rest = rest.sub(root);
        m += 1;
        chosen.push((*index, root.clone(), m));
        collect_real_solutions(candidates, start + 1, &rest, chosen, emit);
        chosen.pop();
    }
}

/// Order-free Kostant oracle: the number of multisets of positive roots
/// summing to alpha, counting each imaginary root with multiplicity l
/// (one per color).
pub fn kostant_count(spec: &CartanSpec, alpha: &RootVec) -> u128 {
    let mut items: Vec<RootVec> = Vec::new();
    for r in positive_roots_up_to(spec, alpha.height().max(1)) {
        if !r.0.iter().zip(&alpha.0).all(|(c, a)| c <= a) {
            continue;
        }
        match is_positive_root(spec, &r) {
            Some(RootClass::Real { .. }) => items.push(r),
            Some(RootClass::Imaginary { .. }) => {
                for _ in 0..spec.rank() {
                    items.push(r.clone());
                }
            }
            None => {}
        }
    }
    fn count(
        items: &[RootVec],
        start: usize,
        target: &RootVec,
        memo: &mut HashMap<(Vec<i64>, usize), u128>,
    ) -> u128 {
        if target.is_zero() {
            return 1;
        }
        if start == items.len() {
            return 0;
        }
        let key = (target.0.clone(), start);
        if let Some(&hit) = memo.get(&key) {
            return hit;
        }
        let mut total = count(items, start + 1, target, memo);
        let root = &items[start];
        if root.0.iter().zip(&target.0).all(|(r, t)| r <= t) {
            total += count(items, start, &target.sub(root), memo);
        }
        memo.insert(key, total);
        total
    }
    // colored copies are distinguishable, so "multiset over items with
    // each item usable any number of times" is exactly the colored count
    count(&items, 0, alpha, &mut HashMap::new())
}

/// sh(M, mu) = sum over indexed real roots of (rho,rho) m(m-1)/4.
pub fn shift(order: &ConvexOrder, p: &RootPartition) -> i64 {
    let spec = order.spec();
    let mut total = 0;
    for (root, m) in p.real.values() {
        // (rho, rho) is even, so the quarter is an integer
        total += spec.pairing(root, root) / 2 * m * (m - 1) / 2;
    }
    total
}

/// Standard-module character: the ordered shuffle product of cuspidal
/// powers with the imaginary factor in the middle, shifted by q^sh.
/// Imaginary multiplicity at most one: the higher imaginary characters
/// are out of reach of the table (the tensor-space characters are
/// available separately).
pub fn standard_char(table: &mut CuspidalTable, p: &RootPartition) -> Result<CharExpr> {
    let spec = table.spec().clone();
    if p.m0 >= 2 {
        return Err(Error::ImaginaryScope(p.m0 as usize));
    }
    if !p.mu.is_valid() || p.mu.total() != p.m0 {
        return Err(Error::Argument("multipartition does not match the imaginary block".into()));
    }
    let order = table.order().clone();
    let sh = shift(&order, p);

    let mut factors: Vec<CharExpr> = Vec::new();
    let mut pos: Vec<_> = p.real.iter().filter(|(n, _)| **n > 0).collect();
    pos.sort_by_key(|(n, _)| **n);
    for (_, (root, m)) in pos {
        let ch = table.cuspidal_char(root)?;
        for _ in 0..*m {
            factors.push(ch.clone());
        }
    }
    if p.m0 == 1 {
        let color = p
            .mu
            .single_color()
            .ok_or_else(|| Error::Argument("imaginary block needs a single colored box".into()))?;
        factors.push(table.minuscule_char(color)?);
    }
    let mut neg: Vec<_> = p.real.iter().filter(|(n, _)| **n < 0).collect();
    neg.sort_by_key(|(n, _)| **n);
    for (_, (root, m)) in neg {
        let ch = table.cuspidal_char(root)?;
        for _ in 0..*m {
            factors.push(ch.clone());
        }
    }

    let mut out = CharExpr::unit(&spec);
    for f in factors {
        out = shuffle(&spec, &out, &f);
    }
    Ok(out.shift(sh))
}
