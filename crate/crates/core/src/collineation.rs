//! Andre's collineations φ(c,d,u,v) and γ(c,d,u,v) of a nearfield plane,
//! optionally preceded by a Frobenius map τ: x ↦ x^(p^i).
//!
//! Composition is a right action: `compose(a, b)` applies `a` first. Results
//! are canonicalised by reading the parameters back off the images of a few
//! probe points and re-checking the probe action.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;

use crate::exec::Executor;
use crate::gf::Elem;
use crate::plane::{Line, LineId, Plane, Point, PointId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// `(x,y,1) ↦ (x⋆c+u, y⋆d+v, 1)`
    Phi,
    /// `(x,y,1) ↦ (y⋆c+u, x⋆d+v, 1)`
    Gamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Collineation {
    pub kind: Kind,
    pub frob: u32,
    pub c: Elem,
    pub d: Elem,
    pub u: Elem,
    pub v: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollineationError {
    /// c or d is zero, or frob is out of range.
    InvalidParameters,
    /// Canonicalisation failed its probe check.
    NotClosed,
    /// Incidence is not preserved.
    NotCollineation,
    BudgetExceeded { budget: usize },
}

impl fmt::Display for CollineationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollineationError::InvalidParameters => f.write_str("invalid collineation parameters"),
            CollineationError::NotClosed => f.write_str("internal error: composed map has no canonical form"),
            CollineationError::NotCollineation => f.write_str("map does not preserve incidence"),
            CollineationError::BudgetExceeded { budget } => write!(f, "group closure exceeded budget of {budget} elements"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CollineationError {}

impl Collineation {
    pub fn phi(c: Elem, d: Elem, u: Elem, v: Elem) -> Collineation {
        Collineation { kind: Kind::Phi, frob: 0, c, d, u, v }
    }

    pub fn gamma(c: Elem, d: Elem, u: Elem, v: Elem) -> Collineation {
        Collineation { kind: Kind::Gamma, frob: 0, c, d, u, v }
    }

    pub fn identity() -> Collineation {
        Collineation::phi(Elem::ONE, Elem::ONE, Elem::ZERO, Elem::ZERO)
    }

    /// The Frobenius collineation x ↦ x^(p^i) on both coordinates.
    pub fn frobenius(i: u32) -> Collineation {
        Collineation { frob: i, ..Collineation::identity() }
    }

    pub fn with_frob(self, i: u32) -> Collineation {
        Collineation { frob: i, ..self }
    }

    pub fn is_identity(&self) -> bool {
        *self == Collineation::identity()
    }

    pub fn is_linear(&self) -> bool {
        self.frob == 0
    }

    /// A member of the translation group T.
    pub fn is_translation(&self) -> bool {
        self.kind == Kind::Phi && self.frob == 0 && self.c == Elem::ONE && self.d == Elem::ONE
    }

    pub fn validate(&self, plane: &Plane) -> Result<(), CollineationError> {
        let m = plane.order();
        let ok = !self.c.is_zero()
            && !self.d.is_zero()
            && self.c.0 < m
            && self.d.0 < m
            && self.u.0 < m
            && self.v.0 < m
            && self.frob < plane.field().degree();
        if ok {
            Ok(())
        } else {
            Err(CollineationError::InvalidParameters)
        }
    }

    #[inline]
    fn tau(&self, plane: &Plane, x: Elem) -> Elem {
        if self.frob == 0 {
            x
        } else {
            plane.field().frobenius(x, self.frob)
        }
    }

    /// Image of a point.
    pub fn apply(&self, plane: &Plane, p: Point) -> Point {
        let f = plane.field();
        let nf = plane.nearfield();
        let cinv = nf.inv(self.c).expect("c is nonzero");
        match (self.kind, p) {
            (Kind::Phi, Point::Affine(x, y)) => Point::Affine(
                f.add(nf.mul(self.tau(plane, x), self.c), self.u),
                f.add(nf.mul(self.tau(plane, y), self.d), self.v),
            ),
            (Kind::Phi, Point::Infinite(y)) => Point::Infinite(nf.mul(nf.mul(cinv, self.tau(plane, y)), self.d)),
            (Kind::Phi, Point::Vertex) => Point::Vertex,
            (Kind::Gamma, Point::Affine(x, y)) => Point::Affine(
                f.add(nf.mul(self.tau(plane, y), self.c), self.u),
                f.add(nf.mul(self.tau(plane, x), self.d), self.v),
            ),
            (Kind::Gamma, Point::Infinite(y)) if y.is_zero() => Point::Vertex,
            (Kind::Gamma, Point::Infinite(y)) => {
                // (1,y,0) is the direction of [-y,1,t]; follow the image slope
                let yinv = nf.inv(self.tau(plane, y)).expect("y is nonzero");
                Point::Infinite(nf.mul(nf.mul(cinv, yinv), self.d))
            }
            (Kind::Gamma, Point::Vertex) => Point::Infinite(Elem::ZERO),
        }
    }

    /// Image of a line.
    pub fn apply_line(&self, plane: &Plane, l: Line) -> Line {
        let f = plane.field();
        let nf = plane.nearfield();
        let (c, d, u, v) = (self.c, self.d, self.u, self.v);
        let cinv = nf.inv(c).expect("c is nonzero");
        let l = match l {
            Line::Oblique(s, t) => Line::Oblique(self.tau(plane, s), self.tau(plane, t)),
            Line::Vertical(t) => Line::Vertical(self.tau(plane, t)),
            Line::AtInfinity => Line::AtInfinity,
        };
        match (self.kind, l) {
            (Kind::Phi, Line::Oblique(s, t)) => {
                let slope = nf.mul(nf.mul(cinv, s), d);
                Line::Oblique(slope, f.sub(f.sub(nf.mul(t, d), nf.mul(u, slope)), v))
            }
            (Kind::Phi, Line::Vertical(t)) => Line::Vertical(f.sub(nf.mul(t, c), u)),
            (Kind::Gamma, Line::Oblique(s, t)) if s.is_zero() => Line::Vertical(f.sub(nf.mul(t, c), u)),
            (Kind::Gamma, Line::Oblique(s, t)) => {
                let sinv = nf.inv(s).expect("s is nonzero");
                let slope = nf.mul(nf.mul(cinv, sinv), d);
                let t2 = f.sub(f.sub(nf.mul(nf.mul(t, sinv), d), nf.mul(u, slope)), v);
                Line::Oblique(slope, t2)
            }
            (Kind::Gamma, Line::Vertical(t)) => Line::Oblique(Elem::ZERO, f.sub(nf.mul(t, d), v)),
            (_, Line::AtInfinity) => Line::AtInfinity,
        }
    }

    #[inline]
    pub fn apply_id(&self, plane: &Plane, p: PointId) -> PointId {
        plane.point_id(self.apply(plane, plane.point(p)))
    }

    #[inline]
    pub fn apply_line_id(&self, plane: &Plane, l: LineId) -> LineId {
        plane.line_id(self.apply_line(plane, plane.line(l)))
    }

    /// `self` followed by `other`.
    pub fn compose(&self, plane: &Plane, other: &Collineation) -> Result<Collineation, CollineationError> {
        from_action(plane, |p| other.apply(plane, self.apply(plane, p)))
    }

    pub fn inverse(&self, plane: &Plane) -> Result<Collineation, CollineationError> {
        let f = plane.field();
        let nf = plane.nearfield();
        let deg = f.degree();
        let back = (deg - self.frob) % deg;
        let tau = |x: Elem| if back == 0 { x } else { f.frobenius(x, back) };
        let inv = |x: Elem| nf.inv(x).map_err(|_| CollineationError::InvalidParameters);
        // x = τ'((X - u) ⋆ c^-1) = τ'(X) ⋆ τ'(c)^-1 - τ'(u) ⋆ τ'(c)^-1
        let c2 = inv(tau(self.c))?;
        let d2 = inv(tau(self.d))?;
        let candidate = match self.kind {
            Kind::Phi => Collineation {
                kind: Kind::Phi,
                frob: back,
                c: c2,
                d: d2,
                u: f.neg(nf.mul(tau(self.u), c2)),
                v: f.neg(nf.mul(tau(self.v), d2)),
            },
            Kind::Gamma => Collineation {
                kind: Kind::Gamma,
                frob: back,
                c: d2,
                d: c2,
                u: f.neg(nf.mul(tau(self.v), d2)),
                v: f.neg(nf.mul(tau(self.u), c2)),
            },
        };
        if self.compose(plane, &candidate)?.is_identity() {
            Ok(candidate)
        } else {
            Err(CollineationError::NotClosed)
        }
    }

    /// Multiplicative order, found by repeated composition.
    pub fn order(&self, plane: &Plane) -> Result<u64, CollineationError> {
        let mut acc = *self;
        let mut k = 1u64;
        while !acc.is_identity() {
            acc = acc.compose(plane, self)?;
            k += 1;
            if k > 1 << 40 {
                return Err(CollineationError::NotClosed);
            }
        }
        Ok(k)
    }

    /// Dense index in `[0, index_bound)`.
    pub fn index(&self, plane: &Plane) -> usize {
        let m = plane.order() as usize;
        let deg = plane.field().degree() as usize;
        let kind = match self.kind {
            Kind::Phi => 0,
            Kind::Gamma => 1,
        };
        let mut i = kind;
        i = i * deg + self.frob as usize;
        i = i * (m - 1) + (self.c.index() - 1);
        i = i * (m - 1) + (self.d.index() - 1);
        i = i * m + self.u.index();
        i * m + self.v.index()
    }

    pub fn from_index(plane: &Plane, mut i: usize) -> Collineation {
        let m = plane.order() as usize;
        let deg = plane.field().degree() as usize;
        let v = Elem((i % m) as u32);
        i /= m;
        let u = Elem((i % m) as u32);
        i /= m;
        let d = Elem((i % (m - 1)) as u32 + 1);
        i /= m - 1;
        let c = Elem((i % (m - 1)) as u32 + 1);
        i /= m - 1;
        let frob = (i % deg) as u32;
        i /= deg;
        let kind = if i == 0 { Kind::Phi } else { Kind::Gamma };
        Collineation { kind, frob, c, d, u, v }
    }

    /// `phi(c,d,u,v)` or `gamma(c,d,u,v)`, with `·frob^i` appended when
    /// τ is not the identity.
    pub fn format(&self, plane: &Plane) -> String {
        let f = plane.field();
        let name = match self.kind {
            Kind::Phi => "phi",
            Kind::Gamma => "gamma",
        };
        let mut s = alloc::format!(
            "{name}({},{},{},{})",
            f.format(self.c),
            f.format(self.d),
            f.format(self.u),
            f.format(self.v)
        );
        if self.frob != 0 {
            s.push_str(&alloc::format!("·frob^{}", self.frob));
        }
        s
    }

    /// Exhaustive incidence-preservation check.
    pub fn preserves_incidence(&self, plane: &Plane) -> bool {
        let pts: Vec<PointId> = plane.point_ids().map(|p| self.apply_id(plane, p)).collect();
        let mut seen = FixedBitSet::with_capacity(plane.size());
        for &p in &pts {
            if seen.contains(p.index()) {
                return false;
            }
            seen.insert(p.index());
        }
        plane.line_ids().all(|l| {
            let image = self.apply_line_id(plane, l);
            plane.points_on(l).iter().all(|&p| plane.incident_ids(pts[p.index()], image))
        })
    }

    /// Action equality on every point.
    pub fn same_action(&self, plane: &Plane, other: &Collineation) -> bool {
        plane.point_ids().all(|p| self.apply_id(plane, p) == other.apply_id(plane, p))
    }
}

/// Upper bound of [`Collineation::index`].
pub fn index_bound(plane: &Plane) -> usize {
    let m = plane.order() as usize;
    2 * plane.field().degree() as usize * (m - 1) * (m - 1) * m * m
}

/// The probe set used to certify canonical forms.
pub fn probe_points(plane: &Plane) -> Vec<Point> {
    let g = plane.field().primitive();
    let (o, e) = (Elem::ZERO, Elem::ONE);
    vec![
        Point::Affine(o, o),
        Point::Affine(e, o),
        Point::Affine(o, e),
        Point::Affine(e, e),
        Point::Vertex,
        Point::Infinite(o),
        Point::Affine(g, o),
        Point::Affine(o, g),
    ]
}

/// Reads the canonical parameters off the images of probe points and
/// checks the result against `action` on the whole probe set.
pub fn from_action<F: Fn(Point) -> Point>(plane: &Plane, action: F) -> Result<Collineation, CollineationError> {
    let f = plane.field();
    let nf = plane.nearfield();
    let g = f.primitive();
    let affine = |p: Point| match action(p) {
        Point::Affine(x, y) => Ok((x, y)),
        _ => Err(CollineationError::NotClosed),
    };
    let kind = match action(Point::Vertex) {
        Point::Vertex => Kind::Phi,
        Point::Infinite(y) if y.is_zero() => Kind::Gamma,
        _ => return Err(CollineationError::NotClosed),
    };
    let (u, v) = affine(Point::Affine(Elem::ZERO, Elem::ZERO))?;
    let (p10, p01, pg) = match kind {
        Kind::Phi => (Point::Affine(Elem::ONE, Elem::ZERO), Point::Affine(Elem::ZERO, Elem::ONE), Point::Affine(g, Elem::ZERO)),
        Kind::Gamma => (Point::Affine(Elem::ZERO, Elem::ONE), Point::Affine(Elem::ONE, Elem::ZERO), Point::Affine(Elem::ZERO, g)),
    };
    let c = f.sub(affine(p10)?.0, u);
    let d = f.sub(affine(p01)?.1, v);
    if c.is_zero() || d.is_zero() {
        return Err(CollineationError::NotClosed);
    }
    // τ(g) ⋆ c = X - u
    let cinv = nf.inv(c).map_err(|_| CollineationError::NotClosed)?;
    let tg = nf.mul(f.sub(affine(pg)?.0, u), cinv);
    let frob = (0..f.degree()).find(|&i| f.frobenius(g, i) == tg).ok_or(CollineationError::NotClosed)?;
    let candidate = Collineation { kind, frob, c, d, u, v };
    if probe_points(plane).into_iter().all(|p| candidate.apply(plane, p) == action(p)) {
        Ok(candidate)
    } else {
        Err(CollineationError::NotClosed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// T = {φ(1,1,u,v)}.
    Translations,
    /// H₀ = {φ(1,1,0,v)}, the elations with centre (0,1,0).
    H0,
    /// H_y = {φ(1,1,u,u⋆y)}.
    Hy(Elem),
    /// T·R̂₀·B₀.
    Linear,
    /// T·R̂₀·Ũ₀·B₀, with every Frobenius power.
    Standard,
    Custom(Vec<Collineation>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollineationGroup {
    /// Sorted by dense index.
    pub elements: Vec<Collineation>,
    pub generators: Vec<Collineation>,
}

impl CollineationGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, plane: &Plane, k: &Collineation) -> bool {
        self.elements.binary_search_by_key(&k.index(plane), |e| e.index(plane)).is_ok()
    }
}

/// Basis of GF(q^n) over GF(p) as field elements `p^k`.
fn additive_basis(plane: &Plane) -> Vec<Elem> {
    let p = plane.field().characteristic();
    (0..plane.field().degree()).map(|k| Elem(p.pow(k))).collect()
}

pub fn generators(plane: &Plane, spec: &GeneratorSpec) -> Vec<Collineation> {
    let f = plane.field();
    let nf = plane.nearfield();
    let (o, e) = (Elem::ZERO, Elem::ONE);
    let basis = additive_basis(plane);
    let translations = || {
        basis
            .iter()
            .flat_map(|&b| [Collineation::phi(e, e, b, o), Collineation::phi(e, e, o, b)])
            .collect::<Vec<_>>()
    };
    let scalings = || {
        // squares form a cyclic ⋆-section generated by γ², and any
        // non-square such as γ adds the other cosets
        let gens = [f.primitive(), f.exp(2)];
        gens.iter()
            .flat_map(|&c| [Collineation::phi(c, e, o, o), Collineation::phi(e, c, o, o)])
            .collect::<Vec<_>>()
    };
    match spec {
        GeneratorSpec::Translations => translations(),
        GeneratorSpec::H0 => basis.iter().map(|&b| Collineation::phi(e, e, o, b)).collect(),
        GeneratorSpec::Hy(y) => basis.iter().map(|&b| Collineation::phi(e, e, b, nf.mul(b, *y))).collect(),
        GeneratorSpec::Linear => {
            let mut g = translations();
            g.extend(scalings());
            g.push(Collineation::gamma(e, e, o, o));
            g
        }
        GeneratorSpec::Standard => {
            let mut g = generators(plane, &GeneratorSpec::Linear);
            g.push(Collineation::frobenius(1 % f.degree()));
            g
        }
        GeneratorSpec::Custom(list) => list.clone(),
    }
}

/// Closure of the generated group by breadth-first right multiplication.
pub fn generate_group(plane: &Plane, spec: &GeneratorSpec, budget: usize) -> Result<CollineationGroup, CollineationError> {
    let gens = generators(plane, spec);
    for g in &gens {
        g.validate(plane)?;
    }
    let mut seen = FixedBitSet::with_capacity(index_bound(plane));
    let id = Collineation::identity();
    seen.insert(id.index(plane));
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head];
        head += 1;
        for g in &gens {
            let y = x.compose(plane, g)?;
            let k = y.index(plane);
            if !seen.contains(k) {
                seen.insert(k);
                elements.push(y);
                if elements.len() > budget {
                    return Err(CollineationError::BudgetExceeded { budget });
                }
            }
        }
    }
    let elements = seen.ones().map(|i| Collineation::from_index(plane, i)).collect();
    Ok(CollineationGroup { elements, generators: gens })
}

/// All φ(c,d,u,v) and γ(c,d,u,v) with τ = id, in index order; this is the
/// linear group T·R̂₀·B₀ without closure.
pub fn linear_count(plane: &Plane) -> usize {
    let m = plane.order() as usize;
    2 * (m - 1) * (m - 1) * m * m
}

pub fn linear_element(plane: &Plane, i: usize) -> Collineation {
    let m = plane.order() as usize;
    let block = (m - 1) * (m - 1) * m * m;
    let deg = plane.field().degree() as usize;
    // skip the frob digit so that index order is preserved
    Collineation::from_index(plane, (i / block) * deg * block + i % block)
}

pub fn enumerate_linear(plane: &Plane) -> CollineationGroup {
    let elements = (0..linear_count(plane)).map(|i| linear_element(plane, i)).collect();
    CollineationGroup { elements, generators: generators(plane, &GeneratorSpec::Linear) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralKind {
    Elation,
    Homology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Central {
    pub center: Point,
    pub axis: Line,
    pub kind: CentralKind,
}

/// Fixed-structure scan: a non-identity collineation is central when some
/// line is fixed pointwise and some point is fixed linewise.
pub fn central_classification(plane: &Plane, k: &Collineation) -> Option<Central> {
    if k.is_identity() {
        return None;
    }
    let fixed_pt: Vec<bool> = plane.point_ids().map(|p| k.apply_id(plane, p) == p).collect();
    let fixed_ln: Vec<bool> = plane.line_ids().map(|l| k.apply_line_id(plane, l) == l).collect();
    let axis = plane.line_ids().find(|&l| plane.points_on(l).iter().all(|p| fixed_pt[p.index()]))?;
    let center = plane.point_ids().find(|&p| plane.lines_through(p).iter().all(|l| fixed_ln[l.index()]))?;
    let kind = if plane.incident_ids(center, axis) { CentralKind::Elation } else { CentralKind::Homology };
    Some(Central { center: plane.point(center), axis: plane.line(axis), kind })
}

/// Membership test for a set given as a bitset over point ids, with the
/// probe order of `order` (most discriminating points first).
fn fixes_set(plane: &Plane, k: &Collineation, set: &FixedBitSet, order: &[PointId]) -> bool {
    order.iter().all(|&p| set.contains(k.apply_id(plane, p).index()))
}

/// A probe order for early exit: a spread-out sample of the set first, then
/// the rest.
fn probe_order(points: &[PointId]) -> Vec<PointId> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let step = (n / 7).max(1);
    let mut head: Vec<PointId> = (0..n).step_by(step).map(|i| points[i]).collect();
    let mut rest: Vec<PointId> = points.iter().copied().filter(|p| !head.contains(p)).collect();
    head.append(&mut rest);
    head
}

/// `{κ ∈ elements : S^κ = S}`. A permutation mapping S into S fixes it, so
/// the membership check over S is exact.
pub fn stabilizer<E: Executor>(plane: &Plane, group: &CollineationGroup, set: &[PointId], exec: &E) -> CollineationGroup {
    let bits = bitset_of(plane, set);
    let order = probe_order(set);
    let chunks = exec.map_ranges(group.elements.len(), |range| {
        group.elements[range].iter().filter(|k| fixes_set(plane, k, &bits, &order)).copied().collect::<Vec<_>>()
    });
    CollineationGroup { elements: chunks.concat(), generators: Vec::new() }
}

/// Stabilizer inside the linear group, streamed over the parameter space
/// without materialising the group.
pub fn linear_stabilizer<E: Executor>(plane: &Plane, set: &[PointId], exec: &E) -> CollineationGroup {
    let bits = bitset_of(plane, set);
    let order = probe_order(set);
    let chunks = exec.map_ranges(linear_count(plane), |range| {
        range
            .map(|i| linear_element(plane, i))
            .filter(|k| fixes_set(plane, k, &bits, &order))
            .collect::<Vec<_>>()
    });
    CollineationGroup { elements: chunks.concat(), generators: Vec::new() }
}

fn bitset_of(plane: &Plane, set: &[PointId]) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(plane.size());
    for p in set {
        bits.insert(p.index());
    }
    bits
}

/// Every element whose order is a power of p lies in T.
pub fn p_elements_in_translations(plane: &Plane, group: &CollineationGroup) -> Result<bool, CollineationError> {
    let p = plane.field().characteristic() as u64;
    for k in &group.elements {
        let mut o = k.order(plane)?;
        while o % p == 0 {
            o /= p;
        }
        if o == 1 && !k.is_translation() {
            return Ok(false);
        }
    }
    Ok(true)
}
