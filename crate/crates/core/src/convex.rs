//! Balanced convex preorders on the positive roots, realized by a
//! rational linear functional.
//!
//! A positive weight A(alpha_i) is chosen for each finite vertex;
//! A(alpha_0) is forced by A(delta) = 0. Roots compare by the exact
//! ratio A(rho)/ht(rho): convexity follows from the mediant inequality,
//! balancedness from positivity on the finite part, and the
//! equivalence-iff-proportional axiom from genericity, which is
//! certified exhaustively up to a stated height bound rather than
//! assumed. Ties between non-proportional roots abort: breaking them
//! silently could smuggle in a non-convex order.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cartan::{CartanSpec, RootVec};
use crate::error::{Error, Result};
use crate::roots::{is_positive_root, positive_roots_up_to, RootClass};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Outcome of comparing two positive roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equivalent,
    Greater,
}

/// Which side of a reference root a cone lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// Exact positive rational weight, parsed from "3" or "3/2".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weight {
    pub num: i64,
    pub den: i64,
}

impl Weight {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 || num <= 0 {
            return Err(Error::Argument(format!(
                "order weights must be positive rationals, got {num}/{den}"
            )));
        }
        Ok(Weight { num, den })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: i64 = n
            .parse()
            .map_err(|_| Error::Argument(format!("bad weight {s:?}")))?;
        let den: i64 = d
            .parse()
            .map_err(|_| Error::Argument(format!("bad weight {s:?}")))?;
        Weight::new(num, den)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A balanced convex preorder with its genericity certificate.
#[derive(Clone, Debug)]
pub struct ConvexOrder {
    spec: CartanSpec,
    given: Vec<Weight>,
    /// Integer functional on all of I after clearing denominators;
    /// a[0] is forced by A(delta) = 0.
    a: Vec<i64>,
    verified_height: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl ConvexOrder {
    /// Build from explicit weights A(alpha_i), i in I', verifying
    /// genericity exhaustively up to `verified_height`.
    pub fn build(spec: &CartanSpec, weights: &[Weight], verified_height: i64) -> Result<Self> {
        let l = spec.rank();
        if weights.len() != l {
            return Err(Error::Argument(format!(
                "expected {l} weights for the finite vertices, got {}",
                weights.len()
            )));
        }
        let mut lcm = 1i64;
        for w in weights {
            lcm = lcm / gcd(lcm, w.den) * w.den;
        }
        let mut a = vec![0i64; spec.num_vertices()];
        for (i, w) in weights.iter().enumerate() {
            a[i + 1] = w.num * (lcm / w.den);
        }
        a[0] = -(1..=l).map(|i| spec.mark(i) * a[i]).sum::<i64>();
        let order = ConvexOrder {
            spec: spec.clone(),
            given: weights.to_vec(),
            a,
            verified_height,
        };
        order.certify_genericity(verified_height)?;
        Ok(order)
    }

    /// Random weights from a seeded generator, retrying on genericity
    /// collisions.
    pub fn build_random(spec: &CartanSpec, seed: u64, verified_height: i64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = spec.rank();
        for _ in 0..64 {
            let weights: Vec<Weight> = (0..l)
                .map(|_| Weight::new(rng.gen_range(1..=9973), 1).expect("positive"))
                .collect();
            match ConvexOrder::build(spec, &weights, verified_height) {
                Ok(order) => return Ok(order),
                Err(Error::GenericityTie(..)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Config(
            "could not find generic order weights in 64 attempts".into(),
        ))
    }

    pub fn spec(&self) -> &CartanSpec {
        &self.spec
    }

    pub fn weights(&self) -> &[Weight] {
        &self.given
    }

    pub fn verified_height(&self) -> i64 {
        self.verified_height
    }

    /// The functional value A(x).
    pub fn a_value(&self, x: &RootVec) -> i64 {
        x.0.iter().zip(&self.a).map(|(c, a)| c * a).sum()
    }

    fn certify_genericity(&self, bound: i64) -> Result<()> {
        let roots = positive_roots_up_to(&self.spec, bound);
        let mut seen: HashMap<(i64, i64), RootVec> = HashMap::new();
        for r in roots {
            let num = self.a_value(&r);
            let den = r.height();
            let g = gcd(num, den).max(1);
            let key = (num / g, den / g);
            if let Some(prev) = seen.get(&key) {
                if !proportional(&self.spec, prev, &r) {
                    return Err(Error::GenericityTie(prev.bracketed(), r.bracketed()));
                }
            } else {
                seen.insert(key, r);
            }
        }
        Ok(())
    }

    /// Total preorder on positive roots within the verified height.
    pub fn compare(&self, x: &RootVec, y: &RootVec) -> Result<Comparison> {
        for r in [x, y] {
            if r.height() > self.verified_height {
                return Err(Error::HeightBound {
                    height: r.height(),
                    bound: self.verified_height,
                });
            }
        }
        let lhs = self.a_value(x) as i128 * y.height() as i128;
        let rhs = self.a_value(y) as i128 * x.height() as i128;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => Ok(Comparison::Less),
            std::cmp::Ordering::Greater => Ok(Comparison::Greater),
            std::cmp::Ordering::Equal => {
                if proportional(&self.spec, x, y) {
                    Ok(Comparison::Equivalent)
                } else {
                    Err(Error::GenericityTie(x.bracketed(), y.bracketed()))
                }
            }
        }
    }

    /// True when the root sits strictly above the imaginary class.
    pub fn above_delta(&self, x: &RootVec) -> bool {
        self.a_value(x) > 0
    }

    /// The n-th real root of the enumeration: descending from the top
    /// for n > 0, ascending from the bottom for n < 0. Exact: for any
    /// ratio threshold only finitely many real roots lie beyond it.
    pub fn rho_index(&self, n: i64) -> Result<RootVec> {
        if n == 0 {
            return Err(Error::Argument("rho index 0 does not exist".into()));
        }
        let mut stream = self.rho_stream(n > 0);
        let mut k = 0;
        loop {
            let r = stream.next_root()?;
            k += 1;
            if k == n.abs() {
                return Ok(r);
            }
        }
    }

    /// The signed index of a real positive root in the enumeration.
    pub fn index_of(&self, rho: &RootVec) -> Result<i64> {
        match is_positive_root(&self.spec, rho) {
            Some(RootClass::Real { .. }) => {}
            _ => return Err(Error::Argument(format!("{rho} is not a positive real root"))),
        }
        let positive_side = self.above_delta(rho);
        let mut stream = self.rho_stream(positive_side);
        let mut k = 0i64;
        loop {
            let r = stream.next_root()?;
            k += 1;
            if &r == rho {
                return Ok(if positive_side { k } else { -k });
            }
        }
    }

    fn rho_stream(&self, positive_side: bool) -> RhoStream<'_> {
        let delta = self.spec.delta();
        let mut frontier: Vec<RootVec> = Vec::new();
        for beta in self.spec.finite_positive_roots() {
            if positive_side {
                frontier.push(beta.clone());
            } else {
                frontier.push(delta.sub(beta));
            }
        }
        RhoStream { order: self, delta, frontier, positive_side }
    }

    /// All positive real roots on one side down to (or up to) the given
    /// height, in enumeration order rho_1, rho_2, ... This walks the
    /// same stream as `rho_index`.
    pub fn rho_prefix(&self, positive_side: bool, count: usize) -> Result<Vec<RootVec>> {
        let mut stream = self.rho_stream(positive_side);
        (0..count).map(|_| stream.next_root()).collect()
    }
}

fn proportional(spec: &CartanSpec, x: &RootVec, y: &RootVec) -> bool {
    if x == y {
        return true;
    }
    matches!(
        (is_positive_root(spec, x), is_positive_root(spec, y)),
        (Some(RootClass::Imaginary { .. }), Some(RootClass::Imaginary { .. }))
    )
}

/// K-way merge over the per-finite-root ratio sequences. Each sequence
/// beta + m*delta (or m*delta - beta) is strictly monotone in m, so a
/// tie inside the stream means two non-proportional roots collide and
/// the functional is rejected.
struct RhoStream<'a> {
    order: &'a ConvexOrder,
    delta: RootVec,
    frontier: Vec<RootVec>,
    positive_side: bool,
}

impl RhoStream<'_> {
    fn ratio_cmp(&self, x: &RootVec, y: &RootVec) -> std::cmp::Ordering {
        let lhs = self.order.a_value(x) as i128 * y.height() as i128;
        let rhs = self.order.a_value(y) as i128 * x.height() as i128;
        lhs.cmp(&rhs)
    }

    fn next_root(&mut self) -> Result<RootVec> {
        let mut best: Option<usize> = None;
        for (idx, root) in self.frontier.iter().enumerate() {
            match best {
                None => best = Some(idx),
                Some(b) => {
                    let ord = self.ratio_cmp(root, &self.frontier[b]);
                    let better = if self.positive_side {
                        ord == std::cmp::Ordering::Greater
                    } else {
                        ord == std::cmp::Ordering::Less
                    };
                    if better {
                        best = Some(idx);
                    } else if ord == std::cmp::Ordering::Equal {
                        return Err(Error::GenericityTie(
                            self.frontier[b].bracketed(),
                            root.bracketed(),
                        ));
                    }
                }
            }
        }
        let idx = best.expect("finite system nonempty");
        let root = self.frontier[idx].clone();
        // advancing by delta keeps the finite part and walks the ratio
        // monotonically toward zero on either side
        self.frontier[idx] = root.add(&self.delta);
        Ok(root)
    }
}

/// Decide whether x is a sum (with repetition) of positive roots
/// strictly on one side of rho. Zero is the empty sum. The memo table
/// is confined to the oracle instance.
pub struct ConeOracle<'a> {
    allowed: Vec<RootVec>,
    memo: HashMap<(Vec<i64>, usize), bool>,
    _order: &'a ConvexOrder,
}

impl<'a> ConeOracle<'a> {
    pub fn new(order: &'a ConvexOrder, rho: &RootVec, side: Side, max_height: i64) -> Result<Self> {
        let mut allowed = Vec::new();
        for r in positive_roots_up_to(order.spec(), max_height) {
            let cmp = order.compare(&r, rho)?;
            let keep = match side {
                Side::Below => cmp == Comparison::Less,
                Side::Above => cmp == Comparison::Greater,
            };
            if keep {
                allowed.push(r);
            }
        }
        Ok(ConeOracle { allowed, memo: HashMap::new(), _order: order })
    }

    pub fn member(&mut self, x: &RootVec) -> bool {
        if !x.is_nonnegative() {
            return false;
        }
        self.search(x, 0)
    }

    fn search(&mut self, x: &RootVec, start: usize) -> bool {
        if x.is_zero() {
            return true;
        }
        let key = (x.0.clone(), start);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let mut found = false;
        for idx in start..self.allowed.len() {
            let root = self.allowed[idx].clone();
            if root.0.iter().zip(&x.0).all(|(r, c)| r <= c) && self.search(&x.sub(&root), idx) {
                found = true;
                break;
            }
        }
        self.memo.insert(key, found);
        found
    }
}

/// One-shot cone membership test.
pub fn cone_member(order: &ConvexOrder, x: &RootVec, side: Side, rho: &RootVec) -> Result<bool> {
    if !x.is_nonnegative() {
        return Err(Error::Argument(format!("{x} is not in Q_+")));
    }
    if x.is_zero() {
        return Ok(true);
    }
    let mut oracle = ConeOracle::new(order, rho, side, x.height())?;
    Ok(oracle.member(x))
}

/// Exhaustive convexity verification report.
#[derive(Clone, Debug)]
pub struct ConvexityReport {
    pub height: i64,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl ConvexityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Number of multiset decompositions of `target` into the allowed roots.
fn decomposition_count(
    allowed: &[RootVec],
    target: &RootVec,
    start: usize,
    memo: &mut HashMap<(Vec<i64>, usize), u128>,
) -> u128 {
    if target.is_zero() {
        return 1;
    }
    if start == allowed.len() {
        return 0;
    }
    let key = (target.0.clone(), start);
    if let Some(&hit) = memo.get(&key) {
        return hit;
    }
    let mut total = decomposition_count(allowed, target, start + 1, memo);
    let root = &allowed[start];
    if root.0.iter().zip(&target.0).all(|(r, c)| r <= c) {
        let rest = target.sub(root);
        total += decomposition_count(allowed, &rest, start, memo);
    }
    memo.insert(key, total);
    total
}

fn count_into(allowed: &[RootVec], target: &RootVec) -> u128 {
    let mut memo = HashMap::new();
    decomposition_count(allowed, target, 0, &mut memo)
}

/// Classical partition count, the independent yardstick for (Con3).
fn partition_count(n: i64) -> u128 {
    let n = n as usize;
    let mut table = vec![vec![0u128; n + 1]; n + 1];
    for row in table.iter_mut() {
        row[0] = 1;
    }
    for part in 1..=n {
        for total in 0..=n {
            table[part][total] = table[part - 1][total]
                + if total >= part { table[part][total - part] } else { 0 };
        }
    }
    table[n][n]
}

/// Check (1.1)-(1.3) and (Con1)-(Con3) exhaustively over positive roots
/// of height <= h. Requires the order verified to at least 2h, since
/// betweenness looks at sums of two roots.
pub fn verify_convexity(order: &ConvexOrder, h: i64) -> Result<ConvexityReport> {
    if 2 * h > order.verified_height() {
        return Err(Error::HeightBound { height: 2 * h, bound: order.verified_height() });
    }
    let spec = order.spec();
    let roots = positive_roots_up_to(spec, h);
    let all_for_sums = positive_roots_up_to(spec, 2 * h);
    let mut instances = 0usize;
    let mut failures: Vec<String> = Vec::new();

    // (1.1) totality + (1.3) equivalence = proportionality + balance.
    for (i, x) in roots.iter().enumerate() {
        for y in roots.iter().skip(i) {
            instances += 1;
            match order.compare(x, y)? {
                Comparison::Equivalent if !proportional(spec, x, y) => {
                    failures.push(format!("(1.3) non-proportional equivalents {x} {y}"));
                }
                cmp => {
                    if proportional(spec, x, y) && cmp != Comparison::Equivalent {
                        failures.push(format!("(1.3) proportional but ordered {x} {y}"));
                    }
                }
            }
        }
        let real_up = matches!(
            is_positive_root(spec, x),
            Some(RootClass::Real { finite_part, .. }) if finite_part.is_nonnegative()
        );
        if real_up != order.above_delta(x)
            && matches!(is_positive_root(spec, x), Some(RootClass::Real { .. }))
        {
            failures.push(format!("balance fails at {x}"));
        }
    }

    // (1.2) betweenness over pairs whose sum is again a root.
    for (i, x) in roots.iter().enumerate() {
        for y in roots.iter().skip(i + 1) {
            let sum = x.add(y);
            if is_positive_root(spec, &sum).is_none() {
                continue;
            }
            instances += 1;
            let (lo, hi) = match order.compare(x, y)? {
                Comparison::Greater => (y, x),
                _ => (x, y),
            };
            if order.compare(lo, &sum)? == Comparison::Greater
                || order.compare(&sum, hi)? == Comparison::Greater
            {
                failures.push(format!("(1.2) betweenness fails for {x} + {y}"));
            }
        }
    }

    // (Con1): m*rho splits one-sidedly only as rho repeated m times.
    // The allowed set and knapsack memo are shared across m per side.
    let real_roots: Vec<&RootVec> = roots
        .iter()
        .filter(|r| matches!(is_positive_root(spec, r), Some(RootClass::Real { .. })))
        .collect();
    let con1_results = run_parallel(&real_roots, |rho| {
        let mut local = Vec::new();
        let mut count_checked = 0;
        for side in [Side::Below, Side::Above] {
            let mut allowed: Vec<RootVec> = Vec::new();
            for r in &all_for_sums {
                if r.height() > h {
                    continue;
                }
                let cmp = order.compare(r, rho).expect("within bound");
                let keep = match side {
                    Side::Below => cmp != Comparison::Greater,
                    Side::Above => cmp != Comparison::Less,
                };
                if keep {
                    allowed.push(r.clone());
                }
            }
            let mut memo = HashMap::new();
            let mut m = 1;
            while m * rho.height() <= h {
                let target = rho.scale(m);
                let count = decomposition_count(&allowed, &target, 0, &mut memo);
                count_checked += 1;
                if count != 1 {
                    local.push(format!(
                        "(Con1) {m}*{rho} has {count} one-sided decompositions ({side:?})"
                    ));
                }
                m += 1;
            }
        }
        (count_checked, local)
    });
    for (n, f) in con1_results {
        instances += n;
        failures.extend(f);
    }

    // (Con2): beta < kappa admits no decomposition of beta+kappa below beta.
    // grouped by beta so the allowed set and memo are built once each
    let betas: Vec<&RootVec> = roots.iter().collect();
    let con2_results = run_parallel(&betas, |beta| {
        let mut local = Vec::new();
        let mut count_checked = 0;
        let beta_im = matches!(is_positive_root(spec, beta), Some(RootClass::Imaginary { .. }));
        let allowed: Vec<RootVec> = all_for_sums
            .iter()
            .filter(|r| order.compare(r, beta).expect("within bound") != Comparison::Greater)
            .cloned()
            .collect();
        let mut memo = HashMap::new();
        for kappa in &roots {
            if beta_im
                && matches!(is_positive_root(spec, kappa), Some(RootClass::Imaginary { .. }))
            {
                continue;
            }
            if order.compare(beta, kappa).expect("within bound") != Comparison::Less {
                continue;
            }
            count_checked += 1;
            let target = beta.add(kappa);
            let count = decomposition_count(&allowed, &target, 0, &mut memo);
            if count != 0 {
                local.push(format!(
                    "(Con2) {beta} < {kappa} yet {beta}+{kappa} decomposes below {beta}"
                ));
            }
        }
        (count_checked, local)
    });
    for (n, f) in con2_results {
        instances += n;
        failures.extend(f);
    }

    // (Con3): one-sided decompositions of n*delta are purely imaginary,
    // so each side must count exactly the partitions of n.
    let e = spec.delta().height();
    let mut n = 1;
    while n * e <= h {
        let target = spec.delta().scale(n);
        for side in [Side::Below, Side::Above] {
            instances += 1;
            let mut allowed: Vec<RootVec> = Vec::new();
            for r in &all_for_sums {
                if r.height() > target.height() {
                    continue;
                }
                let cmp = order.compare(r, &target)?;
                let keep = match side {
                    Side::Below => cmp != Comparison::Greater,
                    Side::Above => cmp != Comparison::Less,
                };
                if keep {
                    allowed.push(r.clone());
                }
            }
            let count = count_into(&allowed, &target);
            let expect = partition_count(n);
            if count != expect {
                failures.push(format!(
                    "(Con3) {n}*delta has {count} one-sided decompositions, expected {expect} ({side:?})"
                ));
            }
        }
        n += 1;
    }

    failures.sort();
    Ok(ConvexityReport { height: h, instances, failures })
}

#[cfg(feature = "parallel")]
fn run_parallel<T: Sync, F: Sync + Fn(&T) -> (usize, Vec<String>)>(
    items: &[T],
    f: F,
) -> Vec<(usize, Vec<String>)> {
    items.par_iter().map(&f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<T: Sync, F: Sync + Fn(&T) -> (usize, Vec<String>)>(
    items: &[T],
    f: F,
) -> Vec<(usize, Vec<String>)> {
    items.iter().map(|it| f(it)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, Family};

    fn a1_order() -> ConvexOrder {
        let spec = build_cartan(Family::A, 1).unwrap();
        ConvexOrder::build(&spec, &[Weight::new(1, 1).unwrap()], 30).unwrap()
    }

    #[test]
    fn rank_one_ordering() {
        let order = a1_order();
        let spec = order.spec().clone();
        let a1 = spec.simple_root(1);
        let a0 = spec.simple_root(0);
        let delta = spec.delta();
        assert_eq!(order.compare(&a1, &delta).unwrap(), Comparison::Greater);
        assert_eq!(order.compare(&delta, &a0).unwrap(), Comparison::Greater);
        assert_eq!(
            order.compare(&delta, &delta.scale(2)).unwrap(),
            Comparison::Equivalent
        );
        assert_eq!(order.compare(&a1, &a1).unwrap(), Comparison::Equivalent);
        assert_eq!(
            order.compare(&delta.add(&a1), &delta).unwrap(),
            Comparison::Greater
        );
        assert_eq!(order.rho_index(1).unwrap(), a1);
        assert_eq!(order.rho_index(-1).unwrap(), a0);
        assert_eq!(order.index_of(&a1).unwrap(), 1);
        assert_eq!(order.index_of(&a0).unwrap(), -1);
        // rho_2 = delta + alpha_1, rho_{-2} = 2delta - alpha_1
        assert_eq!(order.rho_index(2).unwrap(), delta.add(&a1));
        assert_eq!(order.rho_index(-2).unwrap(), delta.scale(2).sub(&a1));
    }

    #[test]
    fn a2_finite_root_order() {
        let spec = build_cartan(Family::A, 2).unwrap();
        let order = ConvexOrder::build(
            &spec,
            &[Weight::new(3, 1).unwrap(), Weight::new(2, 1).unwrap()],
            30,
        )
        .unwrap();
        let a1 = spec.simple_root(1);
        let a2 = spec.simple_root(2);
        let sum = a1.add(&a2);
        assert_eq!(order.compare(&a1, &sum).unwrap(), Comparison::Greater);
        assert_eq!(order.compare(&sum, &a2).unwrap(), Comparison::Greater);
    }

    #[test]
    fn rejects_nonpositive_weights() {
        assert!(Weight::new(0, 1).is_err());
        assert!(Weight::new(-2, 1).is_err());
        assert!(Weight::parse("3/2").is_ok());
        assert!(Weight::parse("x").is_err());
    }

    #[test]
    fn rejects_tie() {
        // Equal weights in A2~ make alpha_1 and alpha_2 collide.
        let spec = build_cartan(Family::A, 2).unwrap();
        let w = [Weight::new(1, 1).unwrap(), Weight::new(1, 1).unwrap()];
        assert!(matches!(
            ConvexOrder::build(&spec, &w, 10),
            Err(Error::GenericityTie(..))
        ));
    }

    #[test]
    fn height_bound_is_enforced() {
        let order = a1_order();
        let spec = order.spec().clone();
        let tall = spec.delta().scale(40);
        assert!(matches!(
            order.compare(&tall, &spec.delta()),
            Err(Error::HeightBound { .. })
        ));
    }

    #[test]
    fn rho_enumeration_is_monotone_and_injective() {
        let spec = build_cartan(Family::A, 2).unwrap();
        let order = ConvexOrder::build(
            &spec,
            &[Weight::new(5, 1).unwrap(), Weight::new(3, 1).unwrap()],
            60,
        )
        .unwrap();
        let tops = order.rho_prefix(true, 10).unwrap();
        for w in tops.windows(2) {
            assert_eq!(order.compare(&w[0], &w[1]).unwrap(), Comparison::Greater);
        }
        let bots = order.rho_prefix(false, 10).unwrap();
        for w in bots.windows(2) {
            assert_eq!(order.compare(&w[0], &w[1]).unwrap(), Comparison::Less);
        }
        for (k, r) in tops.iter().enumerate() {
            assert_eq!(order.index_of(r).unwrap(), k as i64 + 1);
            assert_eq!(&order.rho_index(k as i64 + 1).unwrap(), r);
        }
        for (k, r) in bots.iter().enumerate() {
            assert_eq!(order.index_of(r).unwrap(), -(k as i64 + 1));
        }
    }

    #[test]
    fn cone_membership_examples() {
        let order = a1_order();
        let spec = order.spec().clone();
        let a1 = spec.simple_root(1);
        let delta = spec.delta();
        // a root strictly below rho is trivially a one-element sum
        assert!(cone_member(&order, &spec.simple_root(0), Side::Below, &delta).unwrap());
        // alpha_1 > delta + alpha_1, so it is not a sum below it
        let rho = delta.add(&a1);
        assert!(!cone_member(&order, &a1, Side::Below, &rho).unwrap());
        // zero is the empty sum
        let zero = RootVec::zero(2);
        assert!(cone_member(&order, &zero, Side::Below, &delta).unwrap());
        assert!(cone_member(&order, &zero, Side::Above, &delta).unwrap());
    }

    #[test]
    fn convexity_suite_small() {
        let order = a1_order();
        let report = verify_convexity(&order, 10).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(report.instances > 0);
    }

    #[test]
    fn partition_count_matches_euler() {
        let known = [1u128, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &p) in known.iter().enumerate() {
            assert_eq!(partition_count(n as i64), p);
        }
    }
}
