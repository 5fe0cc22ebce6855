//! Dickson regular nearfields N(n, q).
//!
//! The carrier is GF(q^n) with field addition. Nonzero elements are split
//! into the `n` cosets of `C = <γ^n>` with representatives
//! `γ_i = γ^((q^i - 1)/(q - 1))`, and
//!
//! ```text
//! x ⋆ y = x^(q^i) · y   when y ∈ γ_i C,        x ⋆ 0 = 0.
//! ```
//!
//! For `n = 2` the cosets are the squares and the non-squares, which gives
//! the closed form `x ⋆ y = x y` (y square) or `x^q y` (y non-square).

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith;
use crate::exec::Executor;
use crate::gf::{pow_mod, Elem, Field, GfError};

/// Nearfields up to this order carry a dense multiplication table.
const MUL_TABLE_LIMIT: u32 = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NearfieldError {
    Field(GfError),
    InvalidParameters(&'static str),
    DivisionByZero,
    NotHomomorphism { x: Elem, y: Elem },
    NotSurjective,
    DomainMismatch,
    TargetNotCyclic,
    ShapeMismatch { order: usize },
    NoExponent,
    RequiresDegreeTwo,
}

impl fmt::Display for NearfieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NearfieldError::Field(e) => write!(f, "{e}"),
            NearfieldError::InvalidParameters(why) => write!(f, "invalid nearfield parameters: {why}"),
            NearfieldError::DivisionByZero => f.write_str("division by zero"),
            NearfieldError::NotHomomorphism { x, y } => {
                write!(f, "map is not a homomorphism at (#{}, #{})", x.0, y.0)
            }
            NearfieldError::NotSurjective => f.write_str("map is not onto its target"),
            NearfieldError::DomainMismatch => f.write_str("map table does not match the source subgroup"),
            NearfieldError::TargetNotCyclic => f.write_str("target subgroup is not of cyclic shape"),
            NearfieldError::ShapeMismatch { order } => {
                write!(f, "subgroup of order {order} matches neither subgroup shape")
            }
            NearfieldError::NoExponent => f.write_str("no exponent of the claimed form reproduces the map"),
            NearfieldError::RequiresDegreeTwo => f.write_str("operation is defined for N(2, q) only"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NearfieldError {}

impl From<GfError> for NearfieldError {
    fn from(e: GfError) -> Self {
        NearfieldError::Field(e)
    }
}

#[derive(Clone, Debug)]
pub struct Nearfield {
    field: Field,
    n: u32,
    q: u32,
    /// Coset index of every nonzero element (entry 0 unused).
    coset: Vec<u8>,
    /// `q^i mod (q^n - 1)` for each coset index.
    twist: Vec<u64>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl Nearfield {
    /// Builds N(n, q). Requires q odd, every prime divisor of `n` dividing
    /// `q - 1`, and `4 ∤ n` when `q ≡ 3 (mod 4)`.
    pub fn new(n: u32, q: u32) -> Result<Nearfield, NearfieldError> {
        let (p, e) = Self::check(n, q)?;
        Self::with_field(n, q, Field::new(p as u32, e * n)?)
    }

    fn check(n: u32, q: u32) -> Result<(u64, u32), NearfieldError> {
        let (p, e) = arith::prime_power(q as u64).ok_or(NearfieldError::InvalidParameters("q is not a prime power"))?;
        if p == 2 {
            return Err(GfError::OddCharacteristicRequired(2).into());
        }
        if n == 0 {
            return Err(NearfieldError::InvalidParameters("n must be positive"));
        }
        if arith::prime_divisors(n as u64).iter().any(|r| (q as u64 - 1) % r != 0) {
            return Err(NearfieldError::InvalidParameters("a prime divisor of n does not divide q - 1"));
        }
        if q % 4 == 3 && n % 4 == 0 {
            return Err(NearfieldError::InvalidParameters("q ≡ 3 (mod 4) requires n ≢ 0 (mod 4)"));
        }
        Ok((p, e))
    }

    /// Builds N(n, q) on a carrier field obtained elsewhere, e.g. from the
    /// table cache. The field must be GF(q^n).
    pub fn with_field(n: u32, q: u32, field: Field) -> Result<Nearfield, NearfieldError> {
        let (p, e) = Self::check(n, q)?;
        if field.characteristic() as u64 != p || field.degree() != e * n {
            return Err(NearfieldError::InvalidParameters("carrier field is not GF(q^n)"));
        }
        let order = field.order() as u64;
        if (order - 1) % n as u64 != 0 {
            return Err(NearfieldError::InvalidParameters("n does not divide q^n - 1"));
        }
        // residue of the representative exponent (q^i - 1)/(q - 1) mod n
        let mut by_residue = vec![u8::MAX; n as usize];
        for i in 0..n {
            let rep: u64 = (0..i).map(|k| (q as u64).pow(k)).sum();
            let slot = &mut by_residue[(rep % n as u64) as usize];
            if *slot != u8::MAX {
                return Err(NearfieldError::InvalidParameters("coset representatives collide"));
            }
            *slot = i as u8;
        }
        let mut coset = vec![0u8; order as usize];
        for y in field.nonzero() {
            coset[y.index()] = by_residue[(field.log(y).unwrap() % n) as usize];
        }
        let twist = (0..n).map(|i| pow_mod(q as u64, i as u64, order - 1)).collect();
        let mut nf = Nearfield { field, n, q, coset, twist, mul: Vec::new(), inv: Vec::new() };
        nf.inv = nf.field.elements().map(|x| nf.inv_general(x).map_or(0, |y| y.0)).collect();
        if nf.field.order() <= MUL_TABLE_LIMIT {
            let o = nf.field.order();
            let mut table = Vec::with_capacity((o * o) as usize);
            for x in 0..o {
                for y in 0..o {
                    table.push(nf.mul_general(Elem(x), Elem(y)).0);
                }
            }
            nf.mul = table;
        }
        Ok(nf)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The kernel order `q` of N(n, q).
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of elements, `q^n`.
    #[inline]
    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// Coset index `i` of a nonzero `y`, i.e. `y ∈ γ_i C`.
    pub fn coset_of(&self, y: Elem) -> Option<u32> {
        (!y.is_zero()).then(|| self.coset[y.index()] as u32)
    }

    /// `γ_i = γ^((q^i - 1)/(q - 1))` for `i < n`.
    pub fn coset_representatives(&self) -> Vec<Elem> {
        (0..self.n)
            .map(|i| {
                let rep: u64 = (0..i).map(|k| (self.q as u64).pow(k)).sum();
                self.field.exp(rep)
            })
            .collect()
    }

    /// Coset-driven multiplication, without the lookup table.
    pub fn mul_general(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() || y.is_zero() {
            return Elem::ZERO;
        }
        let m = self.field.order() as u64 - 1;
        let lx = self.field.log(x).unwrap() as u64;
        let ly = self.field.log(y).unwrap() as u64;
        self.field.exp(lx * self.twist[self.coset[y.index()] as usize] % m + ly)
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if self.mul.is_empty() {
            self.mul_general(x, y)
        } else {
            Elem(self.mul[x.index() * self.field.order() as usize + y.index()])
        }
    }

    fn inv_general(&self, x: Elem) -> Result<Elem, NearfieldError> {
        let fi = self.field.inv(x).map_err(|_| NearfieldError::DivisionByZero)?;
        // y = x^(-q^i) is the inverse exactly when y itself lies in coset i
        (0..self.n)
            .map(|i| self.field.frobenius(fi, i * self.field.degree() / self.n))
            .enumerate()
            .find(|&(i, y)| self.coset[y.index()] as usize == i)
            .map(|(_, y)| y)
            .ok_or(NearfieldError::DivisionByZero)
    }

    /// The ⋆-inverse; for N(2, q) it is `1/x` on squares and `1/x^q` on
    /// non-squares.
    pub fn inv(&self, x: Elem) -> Result<Elem, NearfieldError> {
        if x.is_zero() {
            return Err(NearfieldError::DivisionByZero);
        }
        Ok(Elem(self.inv[x.index()]))
    }

    /// `x^{⋆k}` for `k ≥ 0`.
    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        let mut acc = Elem::ONE;
        let mut base = x;
        let mut k = k;
        // ⋆ is associative, so square-and-multiply is valid
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order in `<N*, ⋆>`.
    pub fn mult_order(&self, x: Elem) -> Option<u32> {
        if x.is_zero() {
            return None;
        }
        let mut y = x;
        let mut k = 1;
        while y != Elem::ONE {
            y = self.mul(y, x);
            k += 1;
        }
        Some(k)
    }

    /// Exhaustive axiom check.
    pub fn verify_axioms<E: Executor>(&self, exec: &E) -> AxiomReport {
        let f = &self.field;
        let o = f.order() as usize;
        let parts = exec.map_ranges(o, |range| {
            let mut r = AxiomReport::all_true();
            for x in range.map(|v| Elem(v as u32)) {
                for y in f.elements() {
                    if f.add(x, y) != f.add(y, x) {
                        r.additive_abelian.fail([x, y, y]);
                    }
                    if !x.is_zero() && !y.is_zero() && self.mul(x, y).is_zero() {
                        r.mult_closed.fail([x, y, y]);
                    }
                    for z in f.elements() {
                        if f.add(f.add(x, y), z) != f.add(x, f.add(y, z)) {
                            r.additive_abelian.fail([x, y, z]);
                        }
                        if self.mul(f.add(x, y), z) != f.add(self.mul(x, z), self.mul(y, z)) {
                            r.right_distributive.fail([x, y, z]);
                        }
                        if self.mul(z, f.add(x, y)) != f.add(self.mul(z, x), self.mul(z, y)) {
                            r.left_distributive.fail([x, y, z]);
                        }
                        if !(x.is_zero() || y.is_zero() || z.is_zero())
                            && self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z))
                        {
                            r.mult_associative.fail([x, y, z]);
                        }
                    }
                }
                if f.add(x, Elem::ZERO) != x || f.add(x, f.neg(x)) != Elem::ZERO {
                    r.additive_abelian.fail([x, x, x]);
                }
                if self.mul(x, Elem::ONE) != x || self.mul(Elem::ONE, x) != x {
                    r.mult_identity.fail([x, x, x]);
                }
                if !x.is_zero() {
                    let ok = self
                        .inv(x)
                        .map(|y| self.mul(x, y) == Elem::ONE && self.mul(y, x) == Elem::ONE)
                        .unwrap_or(false);
                    if !ok {
                        r.mult_inverses.fail([x, x, x]);
                    }
                }
            }
            r
        });
        parts.into_iter().fold(AxiomReport::all_true(), AxiomReport::merge)
    }

    /// Certifies `<N*, ⋆>` as the metacyclic extension of the cyclic group
    /// of nonzero squares by a non-square (N(2, q) only).
    pub fn metacyclic_presentation(&self) -> Result<Presentation, NearfieldError> {
        if self.n != 2 {
            return Err(NearfieldError::RequiresDegreeTwo);
        }
        let f = &self.field;
        let half = (f.order() as u64 - 1) / 2;
        let a = f.exp(2);
        let b = f.primitive();
        let a_order = self.mult_order(a).unwrap() as u64;
        let b_sq = self.mul(b, b);
        let conj = self.mul(self.mul(self.inv(b)?, a), b);
        let generated = closure(self, &[a, b]).len() as u64;
        let split = f.nonzero().any(|h| !f.is_square(h) && self.mul(h, h) == Elem::ONE);
        Ok(Presentation {
            a,
            b,
            a_order_ok: a_order == half,
            b_squared_in_a: f.is_square(b_sq),
            conjugation_ok: conj == self.pow(a, self.q as u64),
            generates: generated == f.order() as u64 - 1,
            split,
        })
    }

    /// Every subgroup of `<N(2,q)*, ⋆>`, obtained by closing all one- and
    /// two-element generating sets, each tagged with its verified shape.
    pub fn enumerate_mult_subgroups(&self) -> Result<Vec<MultSubgroup>, NearfieldError> {
        if self.n != 2 {
            return Err(NearfieldError::RequiresDegreeTwo);
        }
        let elems: Vec<Elem> = self.field.nonzero().collect();
        let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
        for (i, &x) in elems.iter().enumerate() {
            found.insert(closure(self, &[x]));
            for &y in &elems[i + 1..] {
                found.insert(closure(self, &[x, y]));
            }
        }
        let mut out = found
            .into_iter()
            .map(|s| {
                let shape = self.classify_subgroup(&s)?;
                Ok(MultSubgroup { elements: s, shape })
            })
            .collect::<Result<Vec<_>, NearfieldError>>()?;
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        Ok(out)
    }

    /// Matches a ⋆-subgroup (sorted) against the two admissible shapes:
    /// `<γ^((q²-1)/d)>`, or `S_{d/2} ∪ S_{d/2} h` with `h` a non-square and
    /// `h^(q+1) ∈ S_{d/2}`.
    pub fn classify_subgroup(&self, s: &[Elem]) -> Result<Shape, NearfieldError> {
        let f = &self.field;
        let total = f.order() as u64 - 1;
        let d = s.len() as u64;
        let mismatch = NearfieldError::ShapeMismatch { order: s.len() };
        let squares = s.iter().filter(|&&x| f.is_square(x)).count() as u64;
        let cyclic_power = |order: u64| -> Vec<Elem> {
            let g = f.exp(total / order);
            let mut v: Vec<Elem> = (0..order).map(|k| f.pow(g, k)).collect();
            v.sort_unstable();
            v
        };
        if squares == d {
            if (total / 2) % d != 0 || cyclic_power(d) != s {
                return Err(mismatch);
            }
            return Ok(Shape::Cyclic { d });
        }
        if 2 * squares != d || (total / 2) % (d / 2) != 0 {
            return Err(mismatch);
        }
        let half = cyclic_power(d / 2);
        let h = *s.iter().find(|&&x| !f.is_square(x)).unwrap();
        let hq1 = f.pow(h, self.q as u64 + 1);
        let mut union: Vec<Elem> = half.iter().copied().chain(half.iter().map(|&x| f.mul(x, h))).collect();
        union.sort_unstable();
        if half.binary_search(&hq1).is_err() || union != s {
            return Err(mismatch);
        }
        Ok(Shape::Split { d, h })
    }

    /// Decides which case of the onto-homomorphism structure applies to
    /// `sigma: G → H` (`H` of cyclic shape) and certifies the claimed power
    /// form pointwise.
    pub fn classify_homomorphism(
        &self,
        g: &MultSubgroup,
        h: &MultSubgroup,
        sigma: &[(Elem, Elem)],
    ) -> Result<HomClass, NearfieldError> {
        let f = &self.field;
        if !matches!(h.shape, Shape::Cyclic { .. }) {
            return Err(NearfieldError::TargetNotCyclic);
        }
        let mut table = sigma.to_vec();
        table.sort_unstable();
        if table.len() != g.elements.len() || table.iter().zip(&g.elements).any(|(&(x, _), &y)| x != y) {
            return Err(NearfieldError::DomainMismatch);
        }
        let map = |x: Elem| table[table.binary_search_by_key(&x, |&(a, _)| a).unwrap()].1;
        if table.iter().any(|&(_, y)| !h.contains(y)) {
            return Err(NearfieldError::DomainMismatch);
        }
        for &x in &g.elements {
            for &y in &g.elements {
                if map(self.mul(x, y)) != self.mul(map(x), map(y)) {
                    return Err(NearfieldError::NotHomomorphism { x, y });
                }
            }
        }
        let image: BTreeSet<Elem> = table.iter().map(|&(_, y)| y).collect();
        if image.len() != h.order() {
            return Err(NearfieldError::NotSurjective);
        }
        let oh = h.order() as u64;
        let r = g.order() as u64 / oh;
        let coprime_range = |bound: u64| (1..bound.max(2)).filter(move |&j| arith::gcd(j, bound) == 1 || bound == 1);
        let fits = |domain: &[Elem], e: u64| domain.iter().all(|&x| f.pow(x, e) == map(x));
        match g.shape {
            Shape::Cyclic { .. } => {
                let j = coprime_range(oh).find(|&j| fits(&g.elements, r * j)).ok_or(NearfieldError::NoExponent)?;
                Ok(HomClass { clause: HomClause::Cyclic, r, j, exponent: r * j, kernel_in_half: None })
            }
            Shape::Split { .. } => {
                let half: Vec<Elem> = g.elements.iter().copied().filter(|&x| f.is_square(x)).collect();
                let s_image: BTreeSet<Elem> = half.iter().map(|&x| map(x)).collect();
                let kernel = half.iter().filter(|&&x| map(x) == Elem::ONE).count() as u64;
                if s_image.len() as u64 == oh {
                    if r % 2 != 0 || kernel != r / 2 {
                        return Err(NearfieldError::NoExponent);
                    }
                    let j = coprime_range(oh).find(|&j| fits(&half, r * j / 2)).ok_or(NearfieldError::NoExponent)?;
                    Ok(HomClass { clause: HomClause::SplitOntoFromSquares, r, j, exponent: r * j / 2, kernel_in_half: Some(kernel) })
                } else {
                    if oh % 2 != 0 || kernel != r {
                        return Err(NearfieldError::NoExponent);
                    }
                    // σ(h) generates H over σ(S_l)
                    let hs = g.elements.iter().copied().find(|&x| !f.is_square(x)).unwrap();
                    let sh = map(hs);
                    let mut cover: BTreeSet<Elem> = s_image.clone();
                    cover.extend(s_image.iter().map(|&s| self.mul(s, sh)));
                    if s_image.contains(&sh) || cover.len() as u64 != oh {
                        return Err(NearfieldError::NoExponent);
                    }
                    let j = coprime_range(oh / 2).find(|&j| fits(&half, r * j)).ok_or(NearfieldError::NoExponent)?;
                    Ok(HomClass { clause: HomClause::SplitProperImage, r, j, exponent: r * j, kernel_in_half: Some(kernel) })
                }
            }
        }
    }
}

/// The `n = 2` closed form, with the square test done by exponentiation.
/// Kept independent of the coset tables so the two can be compared.
pub fn closed_form_mul(field: &Field, x: Elem, y: Elem) -> Elem {
    if y.is_zero() {
        return Elem::ZERO;
    }
    let q = field.sub_order().expect("closed form needs GF(q^2)") as u64;
    let square = field.pow(y, (field.order() as u64 - 1) / 2) == Elem::ONE;
    if square {
        field.mul(x, y)
    } else {
        field.mul(field.pow(x, q), y)
    }
}

/// ⋆-closure of a generating set, sorted.
pub fn closure(nf: &Nearfield, gens: &[Elem]) -> Vec<Elem> {
    let mut seen = BTreeSet::new();
    seen.insert(Elem::ONE);
    let mut frontier = vec![Elem::ONE];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = nf.mul(x, g);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// One axiom's outcome with the first witness triple found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub holds: bool,
    pub witness: Option<[Elem; 3]>,
}

impl AxiomCheck {
    fn fail(&mut self, w: [Elem; 3]) {
        if self.holds {
            self.holds = false;
            self.witness = Some(w);
        }
    }

    fn merge(self, other: AxiomCheck) -> AxiomCheck {
        if self.holds {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub additive_abelian: AxiomCheck,
    pub mult_closed: AxiomCheck,
    pub mult_associative: AxiomCheck,
    pub mult_identity: AxiomCheck,
    pub mult_inverses: AxiomCheck,
    pub right_distributive: AxiomCheck,
    /// Recorded only; fails for every proper nearfield.
    pub left_distributive: AxiomCheck,
}

impl AxiomReport {
    fn all_true() -> AxiomReport {
        let ok = AxiomCheck { holds: true, witness: None };
        AxiomReport {
            additive_abelian: ok,
            mult_closed: ok,
            mult_associative: ok,
            mult_identity: ok,
            mult_inverses: ok,
            right_distributive: ok,
            left_distributive: ok,
        }
    }

    fn merge(self, o: AxiomReport) -> AxiomReport {
        AxiomReport {
            additive_abelian: self.additive_abelian.merge(o.additive_abelian),
            mult_closed: self.mult_closed.merge(o.mult_closed),
            mult_associative: self.mult_associative.merge(o.mult_associative),
            mult_identity: self.mult_identity.merge(o.mult_identity),
            mult_inverses: self.mult_inverses.merge(o.mult_inverses),
            right_distributive: self.right_distributive.merge(o.right_distributive),
            left_distributive: self.left_distributive.merge(o.left_distributive),
        }
    }

    /// All axioms of a (right) nearfield hold.
    pub fn is_nearfield(&self) -> bool {
        [
            self.additive_abelian,
            self.mult_closed,
            self.mult_associative,
            self.mult_identity,
            self.mult_inverses,
            self.right_distributive,
        ]
        .iter()
        .all(|c| c.holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub a: Elem,
    pub b: Elem,
    pub a_order_ok: bool,
    pub b_squared_in_a: bool,
    pub conjugation_ok: bool,
    pub generates: bool,
    /// Whether some non-square has ⋆-order 2.
    pub split: bool,
}

impl Presentation {
    pub fn holds(&self) -> bool {
        self.a_order_ok && self.b_squared_in_a && self.conjugation_ok && self.generates
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `<γ^((q²-1)/d)>`, all squares.
    Cyclic { d: u64 },
    /// `S_{d/2} ∪ S_{d/2} h`, half squares.
    Split { d: u64, h: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultSubgroup {
    /// Sorted by encoding.
    pub elements: Vec<Elem>,
    pub shape: Shape,
}

impl MultSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomClause {
    /// Cyclic source: σ(x) = x^(rj).
    Cyclic,
    /// Split source with σ(S_l) = H: σ(x) = x^(rj/2) on S_l.
    SplitOntoFromSquares,
    /// Split source with σ(S_l) ≠ H: σ(x) = x^(rj) on S_l.
    SplitProperImage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomClass {
    pub clause: HomClause,
    pub r: u64,
    pub j: u64,
    /// The certified field exponent.
    pub exponent: u64,
    /// Order of `ker σ ∩ S_l` for split sources.
    pub kernel_in_half: Option<u64>,
}
