//! The all-ones polynomial h_k(X) = 1 + X + ... + X^k over GF(q).

use alloc::vec;
use core::fmt;

use crate::arith::gcd;
use crate::gf::{Elem, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyError {
    /// Exhaustive permutation test and the congruence criterion disagree.
    CriterionMismatch { k: u64 },
    HypothesisFailed(&'static str),
    /// No collision although the collision hypotheses hold.
    MissingCollision { k: u64 },
    /// The value-set bound needs `1 ≤ k ≤ q − 1`.
    DegreeOutOfRange { k: u64 },
    EvenCharacteristic,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::CriterionMismatch { k } => write!(f, "internal error: permutation criterion mismatch at k={k}"),
            PolyError::HypothesisFailed(what) => write!(f, "hypothesis failed: {what}"),
            PolyError::MissingCollision { k } => write!(f, "no collision found for k={k} although one must exist"),
            PolyError::DegreeOutOfRange { k } => write!(f, "degree {k} outside 1..=q-1"),
            PolyError::EvenCharacteristic => f.write_str("odd characteristic required"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PolyError {}

/// Horner evaluation of h_k at x.
pub fn hk_eval(field: &Field, k: u64, x: Elem) -> Elem {
    let mut acc = Elem::ONE;
    for _ in 0..k {
        acc = field.add(field.mul(acc, x), Elem::ONE);
    }
    acc
}

/// `(x^(k+1) − 1)/(x − 1)` for x ≠ 1.
pub fn hk_closed(field: &Field, k: u64, x: Elem) -> Option<Elem> {
    let num = field.sub(field.pow(x, k + 1), Elem::ONE);
    field.div(num, field.sub(x, Elem::ONE)).ok()
}

/// The congruence test `k ≡ 1 (mod p(q−1))`.
pub fn matthews(field: &Field, k: u64) -> bool {
    let p = field.characteristic() as u64;
    let q = field.order() as u64;
    k % (p * (q - 1)) == 1 % (p * (q - 1))
}

/// Size of the image h_k(GF(q)).
pub fn value_set_size(field: &Field, k: u64) -> usize {
    let mut seen = vec![false; field.order() as usize];
    for x in field.elements() {
        seen[hk_eval(field, k, x).index()] = true;
    }
    seen.iter().filter(|&&s| s).count()
}

/// Exhaustive permutation test, cross-checked against the congruence
/// criterion.
pub fn hk_is_permutation(field: &Field, k: u64) -> Result<bool, PolyError> {
    if field.characteristic() == 2 {
        return Err(PolyError::EvenCharacteristic);
    }
    let exhaustive = value_set_size(field, k) == field.order() as usize;
    if exhaustive != matthews(field, k) {
        return Err(PolyError::CriterionMismatch { k });
    }
    Ok(exhaustive)
}

/// `⌊q − (q−1)/k⌋`, refused unless `1 ≤ k ≤ q − 1`.
pub fn wan_bound(q: u64, k: u64) -> Result<u64, PolyError> {
    if k == 0 || k > q - 1 {
        return Err(PolyError::DegreeOutOfRange { k });
    }
    Ok((q * k - (q - 1)) / k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HkAnalysis {
    pub q: u32,
    pub k: u64,
    pub is_permutation: bool,
    pub value_set_size: usize,
    /// `None` when k is outside `1..=q−1`.
    pub wan_bound: Option<u64>,
    /// The bound holds, or does not apply.
    pub wan_holds: bool,
    /// Smallest colliding pair in E = GF(q) ∖ {0, 1}.
    pub collision: Option<(Elem, Elem)>,
}

pub fn hk_value_set(field: &Field, k: u64) -> Result<HkAnalysis, PolyError> {
    let is_permutation = hk_is_permutation(field, k)?;
    let size = value_set_size(field, k);
    let q = field.order() as u64;
    let wan = wan_bound(q, k).ok();
    let wan_holds = match wan {
        Some(b) if !is_permutation => size as u64 <= b,
        _ => true,
    };
    Ok(HkAnalysis {
        q: field.order(),
        k,
        is_permutation,
        value_set_size: size,
        wan_bound: wan,
        wan_holds,
        collision: smallest_collision(field, k),
    })
}

fn smallest_collision(field: &Field, k: u64) -> Option<(Elem, Elem)> {
    let q = field.order();
    let values: vec::Vec<Elem> = (0..q).map(|x| hk_eval(field, k, Elem(x))).collect();
    (2..q).find_map(|a| (a + 1..q).find(|&b| values[a as usize] == values[b as usize]).map(|b| (Elem(a), Elem(b))))
}

/// The lexicographically smallest pair `c1 < c2` in E with
/// `h_k(c1) = h_k(c2)`, under `1 < k < q−1` and `gcd(k, q−1) = 1`.
pub fn hk_find_collision(field: &Field, k: u64) -> Result<(Elem, Elem), PolyError> {
    let q = field.order() as u64;
    if !(1 < k && k + 1 < q) {
        return Err(PolyError::HypothesisFailed("1 < k < q-1"));
    }
    if gcd(k, q - 1) != 1 {
        return Err(PolyError::HypothesisFailed("gcd(k, q-1) = 1"));
    }
    smallest_collision(field, k).ok_or(PolyError::MissingCollision { k })
}
