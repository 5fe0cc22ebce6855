//! Arithmetic in GF(p^n) through discrete-log tables.
//!
//! An element is stored as its base-p coefficient encoding: `a0 + a1 x + ...`
//! is the integer `a0 + a1 p + a2 p^2 + ...`, so `0` is the zero element and
//! `1` the identity. The modulus is the lexicographically smallest monic
//! irreducible polynomial of degree `n` (coefficient vectors compared constant
//! term first) and the primitive element is the smallest encoding of full
//! multiplicative order. Both choices are deterministic, so every derived
//! constant is reproducible.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith;

/// Largest field order the tables are built for.
pub const TABLE_BUDGET: u64 = 1 << 20;

/// Fields up to this order also get a dense addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfError {
    CompositeCharacteristic(u32),
    Overflow { p: u32, n: u32 },
    ZeroDegree,
    DivisionByZero,
    OddCharacteristicRequired(u32),
    NotQuadratic { degree: u32 },
    NotInSubfield(Elem),
    Parse,
    InvalidTables(&'static str),
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfError::CompositeCharacteristic(p) => write!(f, "characteristic {p} is not prime"),
            GfError::Overflow { p, n } => {
                write!(f, "{p}^{n} exceeds the table budget of {TABLE_BUDGET}")
            }
            GfError::ZeroDegree => f.write_str("extension degree must be at least 1"),
            GfError::DivisionByZero => f.write_str("division by zero"),
            GfError::OddCharacteristicRequired(p) => {
                write!(f, "odd characteristic required, got {p}")
            }
            GfError::NotQuadratic { degree } => {
                write!(f, "degree {degree} field has no index-2 subfield")
            }
            GfError::NotInSubfield(x) => write!(f, "element #{} is not in the subfield", x.0),
            GfError::Parse => f.write_str("cannot parse field element"),
            GfError::InvalidTables(why) => write!(f, "invalid field tables: {why}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GfError {}

/// A field element by integer encoding. The owning [`Field`] is passed to
/// every operation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The distinguished constants of GF(q^2): a primitive element γ,
/// ε = γ^((q+1)/2) with ε^q = −ε, and β = ε^2 = γ^(q+1), a non-square of
/// GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constants {
    pub gamma: Elem,
    pub epsilon: Elem,
    pub beta: Elem,
}

#[derive(Clone)]
pub struct Field {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}

impl Field {
    /// Builds GF(p^n) with the canonical modulus and primitive element.
    pub fn new(p: u32, n: u32) -> Result<Field, GfError> {
        let q = check_parameters(p, n)?;
        let modulus = canonical_modulus(p, n);
        let poly = PolyRing { p, n, modulus: &modulus };
        let gamma = poly.smallest_primitive(q);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut cur = 1u32;
        for _ in 0..q - 1 {
            exp.push(cur);
            cur = poly.mul(cur, gamma);
        }
        Field::assemble(p, n, modulus, exp)
    }

    /// Rebuilds a field from a previously computed exponent table (the
    /// on-disk cache path). The header must describe the canonical field and
    /// the table must be a consistent power sequence of the canonical
    /// primitive element, so a loaded field is indistinguishable from a
    /// freshly built one.
    pub fn from_tables(p: u32, n: u32, modulus: Vec<u32>, exp: Vec<u32>) -> Result<Field, GfError> {
        let q = check_parameters(p, n)?;
        if modulus != canonical_modulus(p, n) {
            return Err(GfError::InvalidTables("modulus is not canonical"));
        }
        if exp.len() != q as usize - 1 || exp.first() != Some(&1) {
            return Err(GfError::InvalidTables("exponent table has the wrong shape"));
        }
        let poly = PolyRing { p, n, modulus: &modulus };
        let gamma = if q > 2 { exp[1] } else { 1 };
        if gamma != poly.smallest_primitive(q) {
            return Err(GfError::InvalidTables("generator is not canonical"));
        }
        let stride = (exp.len() / 97).max(1);
        for k in (0..exp.len()).step_by(stride) {
            let next = exp[(k + 1) % exp.len()];
            if poly.mul(exp[k], gamma) != next {
                return Err(GfError::InvalidTables("exponent table is not a power sequence"));
            }
        }
        Field::assemble(p, n, modulus, exp)
    }

    fn assemble(p: u32, n: u32, modulus: Vec<u32>, exp: Vec<u32>) -> Result<Field, GfError> {
        let q = p.pow(n);
        let mut log = vec![u32::MAX; q as usize];
        for (k, &e) in exp.iter().enumerate() {
            if e == 0 || e >= q || log[e as usize] != u32::MAX {
                return Err(GfError::InvalidTables("exponent table is not a permutation"));
            }
            log[e as usize] = k as u32;
        }
        let neg = (0..q).map(|x| digit_map(p, n, x, |a| (p - a) % p)).collect();
        let mut field = Field { p, n, q, modulus, exp, log, neg, add: Vec::new() };
        if q <= ADD_TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            for x in 0..q {
                for y in 0..q {
                    add.push(field.add_digits(x, y));
                }
            }
            field.add = add;
        }
        Ok(field)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; the leading 1 is included.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The exponent table: `exp_table()[k]` is the encoding of γ^k.
    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q).map(Elem)
    }

    pub fn primitive(&self) -> Elem {
        Elem(self.exp.get(1).copied().unwrap_or(1))
    }

    /// The prime-field element `k mod p`.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.p as i64) as u32)
    }

    /// Base-p coefficients of `x`, constant term first.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn add_digits(&self, x: u32, y: u32) -> u32 {
        let (mut a, mut b, mut out, mut place) = (x, y, 0, 1);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if self.add.is_empty() {
            Elem(self.add_digits(x.0, y.0))
        } else {
            Elem(self.add[(x.0 * self.q + y.0) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        Elem(self.neg[x.index()])
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() || y.is_zero() {
            return Elem::ZERO;
        }
        let s = self.log[x.index()] + self.log[y.index()];
        let m = self.q - 1;
        Elem(self.exp[(if s >= m { s - m } else { s }) as usize])
    }

    pub fn inv(&self, x: Elem) -> Result<Elem, GfError> {
        if x.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let l = self.log[x.index()];
        Ok(Elem(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^k` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, x: Elem, mut k: u64) -> Elem {
        let mut base = x;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Discrete log relative to the primitive element; `None` for zero.
    #[inline]
    pub fn log(&self, x: Elem) -> Option<u32> {
        (!x.is_zero()).then(|| self.log[x.index()])
    }

    /// γ^k for the primitive element γ.
    #[inline]
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    /// `x^(p^i)`.
    #[inline]
    pub fn frobenius(&self, x: Elem, i: u32) -> Elem {
        match self.log(x) {
            None => Elem::ZERO,
            Some(l) => {
                let m = self.q as u64 - 1;
                let pk = pow_mod(self.p as u64, i as u64, m);
                self.exp(l as u64 * pk % m)
            }
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, x: Elem) -> Option<u32> {
        let l = self.log(x)? as u64;
        let m = self.q as u64 - 1;
        Some((m / arith::gcd(l, m)) as u32)
    }

    /// Quadratic-residue test. `is_square(0)` is `true` by convention.
    pub fn is_square(&self, x: Elem) -> bool {
        match self.log(x) {
            None => true,
            Some(l) => self.p == 2 || l % 2 == 0,
        }
    }

    /// Elements of the subfield GF(p^d); `d` must divide the degree.
    pub fn subfield(&self, d: u32) -> Option<Vec<Elem>> {
        if d == 0 || self.n % d != 0 {
            return None;
        }
        let sub = self.p.pow(d);
        let step = (self.q - 1) / (sub - 1);
        let mut out: Vec<Elem> =
            core::iter::once(Elem::ZERO).chain((0..sub - 1).map(|k| self.exp((k * step) as u64))).collect();
        out.sort_unstable();
        Some(out)
    }

    /// Order of the index-2 subfield, i.e. `q` when this field is GF(q^2).
    pub fn sub_order(&self) -> Result<u32, GfError> {
        if self.n % 2 != 0 {
            return Err(GfError::NotQuadratic { degree: self.n });
        }
        Ok(self.p.pow(self.n / 2))
    }

    fn half(&self) -> u64 {
        debug_assert!(self.n % 2 == 0, "trace and norm need an even degree");
        self.p.pow(self.n / 2) as u64
    }

    /// `Tr(x) = x^q + x` onto the index-2 subfield.
    pub fn trace(&self, x: Elem) -> Elem {
        self.add(self.frobenius(x, self.n / 2), x)
    }

    /// `Nm(x) = x^(q+1)` onto the index-2 subfield.
    pub fn norm(&self, x: Elem) -> Elem {
        match self.log(x) {
            None => Elem::ZERO,
            Some(l) => self.exp(l as u64 * (self.half() + 1)),
        }
    }

    /// Whether `x` lies in the index-2 subfield.
    pub fn in_subfield(&self, x: Elem) -> bool {
        match self.log(x) {
            None => true,
            Some(l) => l as u64 % (self.half() + 1) == 0,
        }
    }

    /// Quadratic residuosity inside the index-2 subfield GF(q).
    pub fn is_square_in_subfield(&self, x: Elem) -> Result<bool, GfError> {
        if !self.in_subfield(x) {
            return Err(GfError::NotInSubfield(x));
        }
        Ok(match self.log(x) {
            None => true,
            Some(l) => (l as u64 / (self.half() + 1)) % 2 == 0,
        })
    }

    /// Canonical γ, ε, β for GF(q^2), q odd.
    pub fn constants(&self) -> Result<Constants, GfError> {
        let q = self.sub_order()? as u64;
        if self.p == 2 {
            return Err(GfError::OddCharacteristicRequired(self.p));
        }
        let gamma = self.primitive();
        Ok(Constants { gamma, epsilon: self.pow(gamma, (q + 1) / 2), beta: self.pow(gamma, q + 1) })
    }

    /// Renders `x` as a polynomial in `i`, the class of the modulus root,
    /// e.g. `1+2i` or `2+i^2`.
    pub fn format(&self, x: Elem) -> String {
        use core::fmt::Write;
        if x.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (k, c) in self.coefficients(x).into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('+');
            }
            let _ = match (k, c) {
                (0, c) => write!(s, "{c}"),
                (1, 1) => write!(s, "i"),
                (1, c) => write!(s, "{c}i"),
                (k, 1) => write!(s, "i^{k}"),
                (k, c) => write!(s, "{c}i^{k}"),
            };
        }
        s
    }

    /// Inverse of [`Field::format`]. Also accepts `#<encoding>`.
    pub fn parse(&self, text: &str) -> Result<Elem, GfError> {
        let text = text.trim();
        if let Some(raw) = text.strip_prefix('#') {
            let v: u32 = raw.parse().map_err(|_| GfError::Parse)?;
            return if v < self.q { Ok(Elem(v)) } else { Err(GfError::Parse) };
        }
        let mut coeffs = vec![0u32; self.n as usize];
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(GfError::Parse);
            }
            let (coef, power) = match term.find('i') {
                None => (term, 0usize),
                Some(pos) => {
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').and_then(|r| r.parse().ok()).ok_or(GfError::Parse)?
                    };
                    (&term[..pos], power)
                }
            };
            let c: u32 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| GfError::Parse)? };
            if power >= self.n as usize {
                return Err(GfError::Parse);
            }
            coeffs[power] = (coeffs[power] + c) % self.p;
        }
        Ok(Elem(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)))
    }
}

fn check_parameters(p: u32, n: u32) -> Result<u32, GfError> {
    if !arith::is_prime(p as u64) {
        return Err(GfError::CompositeCharacteristic(p));
    }
    if n == 0 {
        return Err(GfError::ZeroDegree);
    }
    match (p as u64).checked_pow(n) {
        Some(q) if q <= TABLE_BUDGET => Ok(q as u32),
        _ => Err(GfError::Overflow { p, n }),
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn digit_map(p: u32, n: u32, x: u32, f: impl Fn(u32) -> u32) -> u32 {
    let (mut v, mut out, mut place) = (x, 0, 1);
    for _ in 0..n {
        out += f(v % p) * place;
        v /= p;
        place *= p;
    }
    out
}

/// Lexicographically smallest monic irreducible of degree `n` over GF(p),
/// comparing (a0, a1, ..., a_{n-1}) with the constant term most significant.
/// Coefficients are returned constant term first, leading 1 included.
pub fn canonical_modulus(p: u32, n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(n);
    for idx in 0..count {
        // idx enumerates coefficient vectors with a0 as the most significant digit
        let mut low = vec![0u32; n as usize];
        let mut v = idx;
        for k in (0..n as usize).rev() {
            low[k] = (v % p as u64) as u32;
            v /= p as u64;
        }
        if low[0] == 0 {
            continue;
        }
        let mut f = low;
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g: Vec<u32> = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m`, both constant term first.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    for k in (dm..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for j in 0..=dm {
            let t = r[k - dm + j] + (p - c) * m[j] % p;
            r[k - dm + j] = t % p;
        }
    }
    r.truncate(dm);
    r
}

/// Slow coefficient-level arithmetic modulo the field polynomial, used only
/// to build and validate tables.
struct PolyRing<'a> {
    p: u32,
    n: u32,
    modulus: &'a [u32],
}

impl PolyRing<'_> {
    fn digits(&self, x: u32) -> Vec<u32> {
        let mut v = x;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        let (a, b) = (self.digits(x), self.digits(y));
        let mut prod = vec![0u32; 2 * self.n as usize - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        let r = poly_rem(self.p, &prod, self.modulus);
        r.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn pow(&self, x: u32, mut k: u64) -> u32 {
        let (mut base, mut acc) = (x, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn smallest_primitive(&self, q: u32) -> u32 {
        let m = q as u64 - 1;
        let primes = arith::prime_divisors(m);
        (1..q)
            .find(|&g| primes.iter().all(|&r| self.pow(g, m / r) != 1))
            .expect("the multiplicative group of a field is cyclic")
    }
}
