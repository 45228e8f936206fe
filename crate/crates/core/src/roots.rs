//! Positive roots of the affine system: enumeration up to a height
//! bound, real/imaginary classification, and the p-values feeding the
//! minimal-pair recursion.
//!
//! Every positive root is either nδ (imaginary, n > 0) or has the form
//! β + nδ with β in ±Φ'_+; classification goes through that
//! decomposition instead of a set lookup.

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanSpec, RootVec};
use crate::error::{Error, Result};

/// Classification of a positive root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootClass {
    /// beta + n*delta with beta in Φ'_+ and n >= 0, or -beta + n*delta
    /// with n > 0; `finite_part` keeps the sign.
    Real { finite_part: RootVec, n: i64 },
    /// n*delta, n > 0.
    Imaginary { n: i64 },
}

impl RootClass {
    pub fn is_real(&self) -> bool {
        matches!(self, RootClass::Real { .. })
    }
}

/// Classify `x` as a positive root, or return None.
pub fn is_positive_root(spec: &CartanSpec, x: &RootVec) -> Option<RootClass> {
    if x.len() != spec.num_vertices() {
        return None;
    }
    let n = x.0[0]; // a_0 = 1, so the delta degree is the alpha_0 coefficient
    let finite = x.sub(&spec.delta().scale(n));
    debug_assert_eq!(finite.0[0], 0);
    if finite.is_zero() {
        return (n > 0).then_some(RootClass::Imaginary { n });
    }
    if spec.is_finite_positive(&finite) && n >= 0 {
        return Some(RootClass::Real { finite_part: finite, n });
    }
    let neg = finite.scale(-1);
    if spec.is_finite_positive(&neg) && n >= 1 {
        return Some(RootClass::Real { finite_part: finite, n });
    }
    None
}

/// All positive roots of height <= bound, sorted by (height, coeffs).
pub fn positive_roots_up_to(spec: &CartanSpec, bound: i64) -> Vec<RootVec> {
    assert!(bound >= 1);
    let delta = spec.delta();
    let e = delta.height();
    let mut out = Vec::new();
    for beta in spec.finite_positive_roots() {
        let hb = beta.height();
        // beta + n*delta
        let mut n = 0;
        while hb + n * e <= bound {
            out.push(beta.add(&delta.scale(n)));
            n += 1;
        }
        // -beta + n*delta
        let mut n = 1;
        while n * e - hb <= bound {
            out.push(delta.scale(n).sub(beta));
            n += 1;
        }
    }
    let mut n = 1;
    while n * e <= bound {
        out.push(delta.scale(n));
        n += 1;
    }
    out.sort_by_key(|r| (r.height(), r.0.clone()));
    out
}

/// Real positive roots of height <= bound.
pub fn real_roots_up_to(spec: &CartanSpec, bound: i64) -> Vec<RootVec> {
    positive_roots_up_to(spec, bound)
        .into_iter()
        .filter(|r| matches!(is_positive_root(spec, r), Some(RootClass::Real { .. })))
        .collect()
}

/// Membership in the full root system: x or -x is a positive root.
pub fn is_root(spec: &CartanSpec, x: &RootVec) -> bool {
    is_positive_root(spec, x).is_some() || is_positive_root(spec, &x.scale(-1)).is_some()
}

/// p_{beta,gamma} = max { n >= 0 | beta - n*gamma in Φ }: the depth of
/// the gamma-string through beta. The string is walked through the full
/// root system; beta - gamma is often a negative root in the
/// non-simply-laced types and still counts. Strings along a real gamma
/// are finite because root norms are bounded; the null direction would
/// be infinite, so an imaginary gamma is rejected.
pub fn p_value(spec: &CartanSpec, beta: &RootVec, gamma: &RootVec) -> Result<i64> {
    if beta == gamma {
        return Err(Error::Argument("p-value requires beta != gamma".into()));
    }
    if is_positive_root(spec, beta).is_none() {
        return Err(Error::Argument(
            "p-value requires positive roots as arguments".into(),
        ));
    }
    match is_positive_root(spec, gamma) {
        Some(RootClass::Real { .. }) => {}
        Some(RootClass::Imaginary { .. }) => {
            return Err(Error::Argument(
                "the string along an imaginary gamma is infinite; p-values need a real gamma"
                    .into(),
            ))
        }
        None => {
            return Err(Error::Argument(
                "p-value requires positive roots as arguments".into(),
            ))
        }
    }
    let mut n = 0;
    let mut x = beta.sub(gamma);
    while is_root(spec, &x) {
        n += 1;
        x = x.sub(gamma);
    }
    Ok(n)
}
