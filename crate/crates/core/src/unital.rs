//! Unital candidates in NP(N(2,q)) and PG(2,q²), design verification and
//! the structure of their linear stabilizers.
//!
//! Constructors never claim unital-hood; [`verify_unital`] decides.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;

use crate::arith::gcd;
use crate::collineation::{self, central_classification, CentralKind, Collineation, Kind};
use crate::exec::Executor;
use crate::gf::{Elem, Field, GfError};
use crate::nearfield::{closure, HomClass, MultSubgroup, NearfieldError};
use crate::plane::{Line, LineId, Plane, Point, PointId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitalError {
    SizeMismatch { expected: usize, found: usize },
    InvalidParameters(&'static str),
    PointInUnital,
    HypothesisFailed(&'static str),
    Field(GfError),
    Nearfield(NearfieldError),
    Collineation(collineation::CollineationError),
}

impl fmt::Display for UnitalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitalError::SizeMismatch { expected, found } => write!(f, "expected {expected} points, found {found}"),
            UnitalError::InvalidParameters(what) => write!(f, "invalid parameters: {what}"),
            UnitalError::PointInUnital => f.write_str("point lies in the unital"),
            UnitalError::HypothesisFailed(what) => write!(f, "hypothesis failed: {what}"),
            UnitalError::Field(e) => write!(f, "{e}"),
            UnitalError::Nearfield(e) => write!(f, "{e}"),
            UnitalError::Collineation(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for UnitalError {}

impl From<GfError> for UnitalError {
    fn from(e: GfError) -> Self {
        UnitalError::Field(e)
    }
}

impl From<NearfieldError> for UnitalError {
    fn from(e: NearfieldError) -> Self {
        UnitalError::Nearfield(e)
    }
}

impl From<collineation::CollineationError> for UnitalError {
    fn from(e: collineation::CollineationError) -> Self {
        UnitalError::Collineation(e)
    }
}

/// A set of plane points: sorted ids plus a membership bitset.
#[derive(Clone, Debug)]
pub struct PointSet {
    ids: Vec<PointId>,
    bits: FixedBitSet,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
    }
}

impl Eq for PointSet {}

impl PointSet {
    pub fn from_ids<I: IntoIterator<Item = PointId>>(plane: &Plane, ids: I) -> PointSet {
        let mut bits = FixedBitSet::with_capacity(plane.size());
        for p in ids {
            bits.insert(p.index());
        }
        let ids = bits.ones().map(|i| PointId(i as u32)).collect();
        PointSet { ids, bits }
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(plane: &Plane, pts: I) -> PointSet {
        PointSet::from_ids(plane, pts.into_iter().map(|p| plane.point_id(p)))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    #[inline]
    pub fn contains(&self, p: PointId) -> bool {
        self.bits.contains(p.index())
    }

    pub fn contains_point(&self, plane: &Plane, p: Point) -> bool {
        self.contains(plane.point_id(p))
    }

    pub fn ids(&self) -> &[PointId] {
        &self.ids
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn points(&self, plane: &Plane) -> Vec<Point> {
        self.ids.iter().map(|&p| plane.point(p)).collect()
    }

    pub fn image(&self, plane: &Plane, k: &Collineation) -> PointSet {
        PointSet::from_ids(plane, self.ids.iter().map(|&p| k.apply_id(plane, p)))
    }

    pub fn union(&self, plane: &Plane, other: &PointSet) -> PointSet {
        PointSet::from_ids(plane, self.ids.iter().chain(other.ids.iter()).copied())
    }

    pub fn intersection(&self, plane: &Plane, other: &PointSet) -> PointSet {
        PointSet::from_ids(plane, self.ids.iter().copied().filter(|&p| other.contains(p)))
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.ids.iter().all(|&p| other.contains(p))
    }

    pub fn count_on(&self, plane: &Plane, l: LineId) -> usize {
        plane.points_on(l).iter().filter(|&&p| self.contains(p)).count()
    }

    pub fn on_line(&self, plane: &Plane, l: LineId) -> Vec<PointId> {
        plane.points_on(l).iter().copied().filter(|&p| self.contains(p)).collect()
    }
}

/// GF(q) inside the coordinate field GF(q²).
struct Sub {
    q: u32,
    elems: Vec<Elem>,
    /// Position of each field element in `elems`, or `u32::MAX`.
    pos: Vec<u32>,
}

impl Sub {
    fn of(field: &Field) -> Result<Sub, UnitalError> {
        let q = field.sub_order()?;
        let elems = field.subfield(field.degree() / 2).ok_or(GfError::NotQuadratic { degree: field.degree() })?;
        let mut pos = vec![u32::MAX; field.order() as usize];
        for (i, e) in elems.iter().enumerate() {
            pos[e.index()] = i as u32;
        }
        Ok(Sub { q, elems, pos })
    }

    fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elems.iter().copied().filter(|e| !e.is_zero())
    }
}

fn epsilon(field: &Field) -> Result<Elem, UnitalError> {
    Ok(field.constants()?.epsilon)
}

/// Order m of a unital in a plane of order m².
fn unital_order(plane: &Plane) -> Result<u32, UnitalError> {
    plane.field().sub_order().map_err(UnitalError::from)
}

/// `(x,y,z)` with `x^(q+1) − y^q z − z^q y = 0`, in PG(2,q²) = NP(N(1,q²)).
pub fn make_hermitian(plane: &Plane) -> Result<PointSet, UnitalError> {
    if plane.nearfield().n() != 1 {
        return Err(UnitalError::InvalidParameters("the Hermitian curve lives in the field plane"));
    }
    let f = plane.field();
    unital_order(plane)?;
    // z = 1: Nm(x) = Tr(y); z = 0 forces x = 0, leaving (0,1,0)
    let pts = f
        .elements()
        .flat_map(|x| f.elements().filter(move |&y| f.norm(x) == f.trace(y)).map(move |y| Point::Affine(x, y)))
        .chain([Point::Vertex]);
    Ok(PointSet::from_points(plane, pts.collect::<Vec<_>>()))
}

/// `{(x, a·x² + b·x^(q+1) + t·ε, 1)} ∪ {(0,1,0)}` in field arithmetic.
pub fn make_wantz(plane: &Plane, a: Elem, b: Elem) -> Result<PointSet, UnitalError> {
    let f = plane.field();
    let sub = Sub::of(f)?;
    let eps = epsilon(f)?;
    let mut pts = vec![Point::Vertex];
    for x in f.elements() {
        let base = f.add(f.mul(a, f.mul(x, x)), f.mul(b, f.norm(x)));
        for &t in &sub.elems {
            pts.push(Point::Affine(x, f.add(base, f.mul(t, eps))));
        }
    }
    Ok(PointSet::from_points(plane, pts))
}

/// `𝒰(b,j) = {(x, b·Nm(x)^j + t·ε, 1)} ∪ {(0,1,0)}` with `b ∈ GF(q)*`.
pub fn make_u(plane: &Plane, b: Elem, j: u64) -> Result<PointSet, UnitalError> {
    let f = plane.field();
    let sub = Sub::of(f)?;
    if b.is_zero() || sub.pos[b.index()] == u32::MAX {
        return Err(UnitalError::InvalidParameters("b must be a nonzero element of GF(q)"));
    }
    if j == 0 {
        return Err(UnitalError::InvalidParameters("j must be positive"));
    }
    let eps = epsilon(f)?;
    let mut pts = vec![Point::Vertex];
    for x in f.elements() {
        let base = f.mul(b, f.pow(f.norm(x), j));
        for &t in &sub.elems {
            pts.push(Point::Affine(x, f.add(base, f.mul(t, eps))));
        }
    }
    Ok(PointSet::from_points(plane, pts))
}

/// `𝒱(j) = {(x, x^(j(q+1)/2) + t·ε, 1) : x a nonzero square}`, q ≡ 3 mod 4.
pub fn make_v(plane: &Plane, j: u64) -> Result<PointSet, UnitalError> {
    let f = plane.field();
    let sub = Sub::of(f)?;
    if sub.q % 4 != 3 {
        return Err(UnitalError::InvalidParameters("q must be 3 mod 4"));
    }
    let eps = epsilon(f)?;
    let e = j * (sub.q as u64 + 1) / 2;
    let mut pts = Vec::new();
    for x in f.nonzero().filter(|&x| f.is_square(x)) {
        let base = f.pow(x, e);
        for &t in &sub.elems {
            pts.push(Point::Affine(x, f.add(base, f.mul(t, eps))));
        }
    }
    Ok(PointSet::from_points(plane, pts))
}

/// `B(a,b) = {(x,y,1) : Nm(x) = a, Tr(y) = b}` with `a, b ∈ GF(q)`.
pub fn make_b(plane: &Plane, a: Elem, b: Elem) -> Result<PointSet, UnitalError> {
    let f = plane.field();
    let sub = Sub::of(f)?;
    if sub.pos[a.index()] == u32::MAX || sub.pos[b.index()] == u32::MAX {
        return Err(UnitalError::InvalidParameters("a and b must lie in GF(q)"));
    }
    let xs: Vec<Elem> = f.elements().filter(|&x| f.norm(x) == a).collect();
    let ys: Vec<Elem> = f.elements().filter(|&y| f.trace(y) == b).collect();
    Ok(PointSet::from_points(plane, xs.iter().flat_map(|&x| ys.iter().map(move |&y| Point::Affine(x, y)))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfinityProfile {
    /// `[0,0,1]` is a tangent touching at this point.
    Parabolic(Point),
    /// `[0,0,1]` is a secant.
    Hyperbolic,
    /// Any other intersection size.
    Neither(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignReport {
    pub m: u32,
    pub size: usize,
    pub is_unital: bool,
    /// `(intersection size, number of lines)`, ascending.
    pub histogram: Vec<(usize, usize)>,
    /// First line, in id order, meeting the set in neither 1 nor m+1 points.
    pub witness: Option<(Line, usize)>,
    /// Every point of the set lies on exactly one tangent.
    pub one_tangent_per_point: bool,
    pub profile: InfinityProfile,
}

/// `|L ∩ S|` for every line, in line-id order.
pub fn line_counts<E: Executor>(plane: &Plane, set: &PointSet, exec: &E) -> Vec<u32> {
    exec.map_ranges(plane.size(), |range| {
        range.map(|l| set.count_on(plane, LineId(l as u32)) as u32).collect::<Vec<_>>()
    })
    .concat()
}

pub fn verify_unital<E: Executor>(plane: &Plane, set: &PointSet, exec: &E) -> Result<DesignReport, UnitalError> {
    let m = unital_order(plane)?;
    let expected = (m as usize).pow(3) + 1;
    if set.len() != expected {
        return Err(UnitalError::SizeMismatch { expected, found: set.len() });
    }
    let counts = line_counts(plane, set, exec);
    let mut hist = BTreeMap::new();
    for &c in &counts {
        *hist.entry(c as usize).or_insert(0usize) += 1;
    }
    let legal = |c: u32| c == 1 || c == m + 1;
    let witness = counts
        .iter()
        .position(|&c| !legal(c))
        .map(|l| (plane.line(LineId(l as u32)), counts[l] as usize));
    let one_tangent_per_point = set
        .ids()
        .iter()
        .all(|&p| plane.lines_through(p).iter().filter(|l| counts[l.index()] == 1).count() == 1);
    let inf = plane.line_id(Line::AtInfinity);
    let profile = match counts[inf.index()] {
        1 => InfinityProfile::Parabolic(plane.point(set.on_line(plane, inf)[0])),
        c if c == m + 1 => InfinityProfile::Hyperbolic,
        c => InfinityProfile::Neither(c as usize),
    };
    Ok(DesignReport {
        m,
        size: set.len(),
        is_unital: witness.is_none() && one_tangent_per_point,
        histogram: hist.into_iter().collect(),
        witness,
        one_tangent_per_point,
        profile,
    })
}

/// The tangent lines through a point off the set, each with its point of
/// contact.
pub fn tangency_points(plane: &Plane, set: &PointSet, p: Point) -> Result<Vec<(Line, Point)>, UnitalError> {
    let pid = plane.point_id(p);
    if set.contains(pid) {
        return Err(UnitalError::PointInUnital);
    }
    Ok(plane
        .lines_through(pid)
        .iter()
        .filter_map(|&l| {
            let on = set.on_line(plane, l);
            (on.len() == 1).then(|| (plane.line(l), plane.point(on[0])))
        })
        .collect())
}

/// Lines meeting a set in at least `min` points, with those points.
#[derive(Clone, Debug)]
pub struct Blocks {
    pub lines: Vec<LineId>,
    pub points: Vec<Vec<PointId>>,
    index: Vec<u32>,
}

impl Blocks {
    pub fn new(plane: &Plane, set: &PointSet, min: usize) -> Blocks {
        let mut lines = Vec::new();
        let mut points = Vec::new();
        let mut index = vec![u32::MAX; plane.size()];
        for l in plane.line_ids() {
            let on = set.on_line(plane, l);
            if on.len() >= min {
                index[l.index()] = lines.len() as u32;
                lines.push(l);
                points.push(on);
            }
        }
        Blocks { lines, points, index }
    }

    /// Keeps the blocks at the given positions.
    pub fn from_subset(plane: &Plane, blocks: &Blocks, keep: &[usize]) -> Blocks {
        let mut index = vec![u32::MAX; plane.size()];
        let mut lines = Vec::with_capacity(keep.len());
        let mut points = Vec::with_capacity(keep.len());
        for &b in keep {
            index[blocks.lines[b].index()] = lines.len() as u32;
            lines.push(blocks.lines[b]);
            points.push(blocks.points[b].clone());
        }
        Blocks { lines, points, index }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn block_of(&self, l: LineId) -> Option<usize> {
        let i = self.index[l.index()];
        (i != u32::MAX).then_some(i as usize)
    }

    /// Blocks through a point, in line-id order.
    pub fn through(&self, plane: &Plane, p: PointId) -> Vec<usize> {
        plane.lines_through(p).iter().filter_map(|&l| self.block_of(l)).collect()
    }
}

/// A certified unital with its blocks materialised.
#[derive(Clone, Debug)]
pub struct Unital {
    pub set: PointSet,
    pub report: DesignReport,
    pub blocks: Blocks,
}

impl Unital {
    pub fn new<E: Executor>(plane: &Plane, set: PointSet, exec: &E) -> Result<Unital, UnitalError> {
        let report = verify_unital(plane, &set, exec)?;
        if !report.is_unital {
            return Err(UnitalError::HypothesisFailed("not a unital"));
        }
        let blocks = Blocks::new(plane, &set, 2);
        Ok(Unital { set, report, blocks })
    }

    pub fn order(&self) -> u32 {
        self.report.m
    }

    /// The block through two distinct points of the unital.
    pub fn block(&self, plane: &Plane, a: PointId, b: PointId) -> Option<usize> {
        plane.line_through_ids(a, b).ok().and_then(|l| self.blocks.block_of(l))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// The point of the unital on `[0,0,1]` is moved to `(0,1,0)`.
    Vertex,
    /// The point is `(1,y,0)` with `y ≠ 0`, moved to `(1,1,0)`.
    OneOneZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub branch: Branch,
    /// Applied in order to reach the normalised unital.
    pub normalization: Vec<Collineation>,
    pub normalized: PointSet,
    pub g: Vec<Collineation>,
    pub h: Vec<Collineation>,
    /// `y` with `H < H_y`.
    pub centre_slope: Option<Elem>,
    pub w: Vec<Elem>,
    pub q0: u32,
    pub g1: Vec<Collineation>,
    pub c: Vec<Elem>,
    pub d: Vec<Elem>,
    pub delta: Vec<(Elem, Elem)>,
    pub r: usize,
    pub hom: Option<HomClass>,
    pub clauses: Vec<Clause>,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn delta_of(&self, c: Elem) -> Option<Elem> {
        self.delta.iter().find(|(x, _)| *x == c).map(|&(_, d)| d)
    }
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Finds the normalising collineations, recomputes the stabilizer and
/// certifies each clause of the restriction theorems.
pub fn structure_report<E: Executor>(plane: &Plane, set: &PointSet, exec: &E) -> Result<StructureReport, UnitalError> {
    let f = plane.field();
    let nf = plane.nearfield();
    let q = unital_order(plane)?;
    let design = verify_unital(plane, set, exec)?;
    if !design.is_unital {
        return Err(UnitalError::HypothesisFailed("the set is a unital"));
    }
    let g0 = collineation::linear_stabilizer(plane, set.ids(), exec);
    if g0.order() % q as usize != 0 {
        return Err(UnitalError::HypothesisFailed("q divides the order of the linear stabilizer"));
    }
    let at_inf = match design.profile {
        InfinityProfile::Parabolic(p) => p,
        _ => return Err(UnitalError::HypothesisFailed("the unital is parabolic")),
    };

    let (o, e) = (Elem::ZERO, Elem::ONE);
    let mut normalization = Vec::new();
    let branch = match at_inf {
        Point::Vertex => Branch::Vertex,
        Point::Infinite(y) if y.is_zero() => {
            normalization.push(Collineation::gamma(e, e, o, o));
            Branch::Vertex
        }
        Point::Infinite(y) => {
            normalization.push(Collineation::phi(e, nf.inv(y)?, o, o));
            Branch::OneOneZero
        }
        Point::Affine(..) => unreachable!("points on [0,0,1] are at infinity"),
    };
    let mut u = set.clone();
    for k in &normalization {
        u = u.image(plane, k);
    }
    let tangents = tangency_points(plane, &u, Point::Infinite(o))?;
    let (a, b) = tangents
        .iter()
        .find_map(|(l, p)| match (l, p) {
            (Line::AtInfinity, _) => None,
            (_, Point::Affine(a, b)) => Some((*a, *b)),
            _ => None,
        })
        .ok_or(UnitalError::HypothesisFailed("an affine tangent through (1,0,0)"))?;
    let shift = Collineation::phi(e, e, f.neg(a), f.neg(b));
    u = u.image(plane, &shift);
    normalization.push(shift);

    let g = collineation::linear_stabilizer(plane, u.ids(), exec).elements;
    let h: Vec<Collineation> = g.iter().copied().filter(|k| k.is_translation()).collect();
    let mut clauses = Vec::new();
    let mut clause = |name: &'static str, holds: bool| clauses.push(Clause { name, holds });

    let profile = verify_unital(plane, &u, exec)?.profile;
    let expected_inf = match branch {
        Branch::Vertex => Point::Vertex,
        Branch::OneOneZero => Point::Infinite(e),
    };
    clause("(i) parabolic, normalised point at infinity", profile == InfinityProfile::Parabolic(expected_inf));

    // H < H_y: every translation is φ(1,1,u,u⋆y) for one y, or φ(1,1,0,v)
    let centre_slope = if h.iter().all(|k| k.u.is_zero()) {
        Some(o)
    } else {
        let k = h.iter().find(|k| !k.u.is_zero()).expect("nonempty");
        let y = nf.mul(nf.inv(k.u)?, k.v);
        h.iter().all(|k| nf.mul(k.u, y) == k.v).then_some(y)
    };
    let w: Vec<Elem> = sorted(match branch {
        Branch::Vertex => h.iter().map(|k| k.v).collect(),
        Branch::OneOneZero => h.iter().map(|k| k.u).collect(),
    });
    let shape_ok = match branch {
        Branch::Vertex => h.iter().all(|k| k.u.is_zero()),
        Branch::OneOneZero => h.iter().all(|k| k.u == k.v),
    };
    let additive = w.iter().all(|&x| w.iter().all(|&y| w.binary_search(&f.add(x, y)).is_ok()));
    let q0 = scalar_field(f, &w);
    let sub_deg = f.degree() / 2;
    let q0_in_fq = (1..=sub_deg).any(|d| sub_deg % d == 0 && f.characteristic().pow(d) == q0);
    clause(
        "(ii) H = {φ(1,1,·,w) : w ∈ W}, |W| = q, scalar field inside GF(q)",
        centre_slope.is_some() && shape_ok && w.len() == q as usize && additive && q0_in_fq,
    );

    let tangency: Vec<Point> = tangency_points(plane, &u, Point::Infinite(o))?
        .into_iter()
        .filter(|(l, _)| *l != Line::AtInfinity)
        .map(|(_, p)| p)
        .collect();
    let (carrier, expect): (Line, Vec<Point>) = match branch {
        Branch::Vertex => (Line::Vertical(o), w.iter().map(|&x| Point::Affine(o, x)).collect()),
        Branch::OneOneZero => (Line::Oblique(f.neg(e), o), w.iter().map(|&x| Point::Affine(x, x)).collect()),
    };
    let mut on_carrier: Vec<Point> = u
        .on_line(plane, plane.line_id(carrier))
        .into_iter()
        .map(|p| plane.point(p))
        .filter(|p| matches!(p, Point::Affine(..)))
        .collect();
    on_carrier.sort_unstable();
    let mut expect_sorted = expect.clone();
    expect_sorted.sort_unstable();
    let mut tangency_sorted = tangency.clone();
    tangency_sorted.sort_unstable();
    clause(
        "(iii) affine points on the carrier line are the W-points and the tangency points of (1,0,0)",
        on_carrier == expect_sorted && tangency_sorted == expect_sorted,
    );

    let mut g1: Vec<Collineation> = Vec::new();
    let mut c_set = Vec::new();
    let mut d_set = Vec::new();
    let mut delta: Vec<(Elem, Elem)> = Vec::new();
    let mut r = 0;
    let mut hom = None;
    match branch {
        Branch::Vertex => {
            g1 = g.iter().copied().filter(|k| k.kind == Kind::Phi && k.u.is_zero() && k.v.is_zero()).collect();
            let qn = q as usize;
            let mut products = FixedBitSet::with_capacity(collineation::index_bound(plane));
            for x in &h {
                for y in &g1 {
                    products.insert(x.compose(plane, y)?.index(plane));
                }
            }
            let g_idx: Vec<usize> = g.iter().map(|k| k.index(plane)).collect();
            let product_ok = products.count_ones(..) == g.len() && g_idx.iter().all(|&i| products.contains(i));
            let total = qn * (qn * qn - 1);
            clause(
                "(iv) G = H·G1, q | o(G), o(G) | q(q²−1)",
                product_ok && g.len() % qn == 0 && total % g.len() == 0,
            );

            let mut h_idx: Vec<usize> = h.iter().map(|k| k.index(plane)).collect();
            h_idx.sort_unstable();
            let mut normal = true;
            for x in &g {
                let xi = x.inverse(plane)?;
                for y in &h {
                    let conj = xi.compose(plane, y)?.compose(plane, x)?;
                    normal &= h_idx.binary_search(&conj.index(plane)).is_ok();
                }
            }
            clause("(v) H is normal in G", normal);
            clause("(vi) o(G1) = o(G)/q", g1.len() * qn == g.len());

            c_set = sorted(g1.iter().map(|k| k.c).collect());
            d_set = sorted(g1.iter().map(|k| k.d).collect());
            let c_closed = closure(nf, &c_set) == c_set;
            clause("(vii) C is a ⋆-subgroup with o(C) = o(G1)", c_set.len() == g1.len() && c_closed);

            let q0_field: Vec<Elem> = (1..=f.degree())
                .filter(|&dd| f.degree() % dd == 0 && f.characteristic().pow(dd) == q0)
                .find_map(|dd| f.subfield(dd))
                .unwrap_or_default();
            let d_in_q0 = d_set.iter().all(|d| q0_field.binary_search(d).is_ok());
            let d_closed = d_set.iter().all(|&x| d_set.iter().all(|&y| d_set.binary_search(&f.mul(x, y)).is_ok()));
            clause("(viii) D is a subgroup of GF(q0)*", d_in_q0 && d_closed && !d_set.is_empty());

            delta = g1.iter().map(|k| (k.c, k.d)).collect();
            delta.sort_unstable();
            let function = delta.windows(2).all(|w| w[0].0 != w[1].0);
            let lookup = |c: Elem| delta.binary_search_by_key(&c, |&(x, _)| x).ok().map(|i| delta[i].1);
            let homomorphism = function
                && c_set.iter().all(|&x| {
                    c_set
                        .iter()
                        .all(|&y| lookup(nf.mul(x, y)) == lookup(x).zip(lookup(y)).map(|(a, b)| f.mul(a, b)))
                });
            r = if d_set.is_empty() { 0 } else { c_set.len() / d_set.len() };
            let fibres_even = d_set.iter().all(|&d| delta.iter().filter(|(_, y)| *y == d).count() == r);
            clause(
                "(ix) δ: C → D is an onto r-to-1 homomorphism with r | q+1",
                homomorphism && fibres_even && r > 0 && (q as usize + 1) % r == 0,
            );
            if homomorphism {
                let sub = |v: &[Elem]| {
                    nf.classify_subgroup(v).ok().map(|shape| MultSubgroup { elements: v.to_vec(), shape })
                };
                hom = sub(&c_set).zip(sub(&d_set)).and_then(|(gc, gd)| nf.classify_homomorphism(&gc, &gd, &delta).ok());
            }
        }
        Branch::OneOneZero => {
            clause("(iv) G = H", g.len() == h.len());
        }
    }

    Ok(StructureReport {
        branch,
        normalization,
        normalized: u,
        g,
        h,
        centre_slope,
        w,
        q0,
        g1,
        c: c_set,
        d: d_set,
        delta,
        r,
        hom,
        clauses,
    })
}

/// Order of the largest subfield whose scalar action fixes `w` setwise.
pub fn scalar_field(field: &Field, w: &[Elem]) -> u32 {
    let p = field.characteristic();
    (1..=field.degree())
        .rev()
        .filter(|&d| field.degree() % d == 0)
        .find(|&d| {
            let sub = field.subfield(d).unwrap_or_default();
            sub.iter().all(|&s| w.iter().all(|&x| w.binary_search(&field.mul(s, x)).is_ok()))
        })
        .map(|d| p.pow(d))
        .unwrap_or(p)
}

/// The explicit form `{(x, b·δ(x) + w, 1)} ∪ {(0,1,0)}` and the
/// equivalence with 𝒰(j) via φ(1,d,0,0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub b: Elem,
    pub h: Elem,
    /// `δ(c) = Nm(c)^j` on all of C, when such a j exists.
    pub j: Option<u64>,
    pub form_holds: bool,
    pub d: Elem,
    /// `U^φ = 𝒰(j)`.
    pub forward: bool,
    /// `𝒰(j)^φ = U`.
    pub backward: bool,
}

impl NormalForm {
    pub fn equivalent(&self) -> bool {
        self.forward || self.backward
    }
}

pub fn normal_form(plane: &Plane, report: &StructureReport) -> Result<NormalForm, UnitalError> {
    let f = plane.field();
    let q = unital_order(plane)? as u64;
    if report.branch != Branch::Vertex || report.c.len() as u64 != q * q - 1 {
        return Err(UnitalError::HypothesisFailed("maximal stabilizer with (0,1,0) in the unital"));
    }
    let u = &report.normalized;
    let b = f
        .nonzero()
        .find(|&y| u.contains_point(plane, Point::Affine(Elem::ONE, y)))
        .ok_or(UnitalError::HypothesisFailed("a point (1,b,1) in the unital"))?;
    let delta = |x: Elem| if x.is_zero() { Some(Elem::ZERO) } else { report.delta_of(x) };
    let mut pts = vec![Point::Vertex];
    for x in f.elements() {
        let dx = delta(x).ok_or(UnitalError::HypothesisFailed("δ defined on every nonzero x"))?;
        for &w in &report.w {
            pts.push(Point::Affine(x, f.add(f.mul(b, dx), w)));
        }
    }
    let form_holds = PointSet::from_points(plane, pts) == *u;
    let h = *report.w.iter().find(|w| !w.is_zero()).ok_or(UnitalError::HypothesisFailed("W nonzero"))?;
    let j = (1..q - 1).find(|&j| report.c.iter().all(|&c| delta(c) == Some(f.pow(f.norm(c), j))));
    // d = (h/2)(b h^-1 − b^q h^-q)
    let half = f.inv(f.from_int(2))?;
    let bh = f.div(b, h)?;
    let d = f.mul(f.mul(h, half), f.sub(bh, f.frobenius(bh, f.degree() / 2)));
    if d.is_zero() {
        return Err(UnitalError::HypothesisFailed("b h^-1 outside GF(q)"));
    }
    let (forward, backward) = match j {
        Some(j) => {
            let target = make_u(plane, Elem::ONE, j)?;
            let phi = Collineation::phi(Elem::ONE, d, Elem::ZERO, Elem::ZERO);
            (u.image(plane, &phi) == target, target.image(plane, &phi) == *u)
        }
        None => (false, false),
    };
    Ok(NormalForm { b, h, j, form_holds, d, forward, backward })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CentralAudit {
    pub central: usize,
    pub elations: usize,
    pub homologies: usize,
    /// Central collineations whose kind disagrees with the axis type.
    pub violations: Vec<Collineation>,
}

/// For each central collineation in `group`: elation iff the axis is a
/// tangent, homology iff it is a secant.
pub fn central_audit<E: Executor>(plane: &Plane, set: &PointSet, group: &[Collineation], exec: &E) -> CentralAudit {
    let m = plane.field().sub_order().unwrap_or(0) as usize;
    let parts = exec.map_ranges(group.len(), |range| {
        let mut audit = CentralAudit::default();
        for k in &group[range] {
            if let Some(c) = central_classification(plane, k) {
                audit.central += 1;
                let n = set.count_on(plane, plane.line_id(c.axis));
                let ok = match c.kind {
                    CentralKind::Elation => {
                        audit.elations += 1;
                        n == 1
                    }
                    CentralKind::Homology => {
                        audit.homologies += 1;
                        n == m + 1
                    }
                };
                if !ok {
                    audit.violations.push(*k);
                }
            }
        }
        audit
    });
    parts.into_iter().fold(CentralAudit::default(), |mut acc, a| {
        acc.central += a.central;
        acc.elations += a.elations;
        acc.homologies += a.homologies;
        acc.violations.extend(a.violations);
        acc
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileViolation {
    pub line: Line,
    pub a: Elem,
    pub b: Elem,
    pub count: usize,
}

/// Intersection sizes of every line with every stratum B(a,b).
pub fn b_profiles<E: Executor>(plane: &Plane, exec: &E) -> Result<Vec<ProfileViolation>, UnitalError> {
    let f = plane.field();
    let sub = Sub::of(f)?;
    let q = sub.q as usize;
    let parts = exec.map_ranges(plane.size(), |range| {
        let mut bad = Vec::new();
        let mut counts = vec![0usize; q * q];
        for l in range {
            let line = plane.line(LineId(l as u32));
            if line == Line::AtInfinity {
                continue;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for &p in plane.points_on(LineId(l as u32)) {
                if let Point::Affine(x, y) = plane.point(p) {
                    let a = sub.pos[f.norm(x).index()] as usize;
                    let b = sub.pos[f.trace(y).index()] as usize;
                    counts[a * q + b] += 1;
                }
            }
            for ai in 0..q {
                for bi in 0..q {
                    let n = counts[ai * q + bi];
                    let a = sub.elems[ai];
                    let ok = match line {
                        Line::Vertical(_) => n == 0 || n == q,
                        Line::Oblique(s, _) if s.is_zero() && !a.is_zero() => n == 0 || n == q + 1,
                        Line::Oblique(s, _) if s.is_zero() => n <= 1,
                        _ => n <= 2,
                    };
                    if !ok {
                        bad.push(ProfileViolation { line, a, b: sub.elems[bi], count: n });
                    }
                }
            }
        }
        bad
    });
    Ok(parts.concat())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub q: u32,
    pub j: u64,
    /// 𝒰(b,j) = {(0,1,0)} ∪ ⋃ B(a, 2a^j b).
    pub strata: bool,
    /// Pairwise intersections are {(0,1,0)} ∪ B(0,0).
    pub intersections: bool,
    /// Whether every 𝒰(b,j) is a unital; (iii) and (iv) are only checked then.
    pub all_unitals: bool,
    pub tangent_once: Option<bool>,
    pub square_split: Option<bool>,
}

/// The 𝒰(b,j) family checks for all b ∈ GF(q)*.
pub fn family_report<E: Executor>(plane: &Plane, j: u64, exec: &E) -> Result<FamilyReport, UnitalError> {
    let f = plane.field();
    let sub = Sub::of(f)?;
    let bs: Vec<Elem> = sub.nonzero().collect();
    let us: Vec<PointSet> = bs.iter().map(|&b| make_u(plane, b, j)).collect::<Result<_, _>>()?;
    let b00 = make_b(plane, Elem::ZERO, Elem::ZERO)?;
    let two = f.from_int(2);

    let mut strata = true;
    for (&b, u) in bs.iter().zip(&us) {
        let mut union = PointSet::from_points(plane, [Point::Vertex]);
        for &a in &sub.elems {
            let t = f.mul(f.mul(two, f.pow(a, j)), b);
            union = union.union(plane, &make_b(plane, a, t)?);
        }
        strata &= union == *u;
    }

    let core = b00.union(plane, &PointSet::from_points(plane, [Point::Vertex]));
    let mut intersections = true;
    for i in 0..us.len() {
        for k in i + 1..us.len() {
            intersections &= us[i].intersection(plane, &us[k]) == core;
        }
    }

    let counts: Vec<Vec<u32>> = us.iter().map(|u| line_counts(plane, u, exec)).collect();
    let m = sub.q;
    let all_unitals = counts.iter().all(|c| c.iter().all(|&n| n == 1 || n == m + 1));
    let (mut tangent_once, mut square_split) = (None, None);
    if all_unitals {
        let candidate = |l: LineId| {
            matches!(plane.line(l), Line::Oblique(s, _) if !s.is_zero()) && b00.count_on(plane, l) == 0
        };
        let lines: Vec<LineId> = plane.line_ids().filter(|&l| candidate(l)).collect();
        tangent_once = Some(lines.iter().all(|l| counts.iter().filter(|c| c[l.index()] == 1).count() == 1));
        let mut split = true;
        for (u, c) in us.iter().zip(&counts) {
            for l in lines.iter().filter(|l| c[l.index()] == m + 1) {
                let (mut sq, mut ns) = (0, 0);
                for p in u.on_line(plane, *l) {
                    if let Point::Affine(x, _) = plane.point(p) {
                        if x.is_zero() {
                            continue;
                        }
                        if f.is_square(x) {
                            sq += 1;
                        } else {
                            ns += 1;
                        }
                    }
                }
                split &= sq >= 2 && ns >= 2;
            }
        }
        square_split = Some(split);
    }
    Ok(FamilyReport { q: sub.q, j, strata, intersections, all_unitals, tangent_once, square_split })
}

/// `j` with `1 ≤ j < q−1` and `gcd(j, q−1) = 1`, the range in which 𝒱(j)
/// arises.
pub fn admissible_v(q: u64) -> Vec<u64> {
    (1..q - 1).filter(|&j| gcd(j, q - 1) == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VProfile {
    pub q: u32,
    pub j: u64,
    /// `(c, d, points, first coordinates)` for every `c, d ∈ GF(q)*`.
    pub counts: Vec<(Elem, Elem, usize, usize)>,
    /// Whether B(0,0) ⊆ 𝒱(j) as literally defined.
    pub b00_inside: bool,
}

impl VProfile {
    /// `(c, d)` is hit when `c = a²` and `d = 2a^j` for some `a ∈ GF(q)*`.
    fn check(&self, plane: &Plane, pick: impl Fn(&(Elem, Elem, usize, usize)) -> usize) -> Vec<(Elem, Elem, usize)> {
        let f = plane.field();
        let two = f.from_int(2);
        let half = (self.q as usize + 1) / 2;
        let sub: Vec<Elem> = self.counts.iter().map(|c| c.0).collect();
        self.counts
            .iter()
            .filter(|row| {
                let (c, d) = (row.0, row.1);
                let hit = sub.iter().any(|&a| f.mul(a, a) == c && f.mul(two, f.pow(a, self.j)) == d);
                pick(row) != if hit { half } else { 0 }
            })
            .map(|row| (row.0, row.1, pick(row)))
            .collect()
    }

    /// Cells whose point count is not `(q+1)/2` resp. 0.
    pub fn point_violations(&self, plane: &Plane) -> Vec<(Elem, Elem, usize)> {
        self.check(plane, |r| r.2)
    }

    /// Same, counting distinct first coordinates instead of points.
    pub fn column_violations(&self, plane: &Plane) -> Vec<(Elem, Elem, usize)> {
        self.check(plane, |r| r.3)
    }
}

/// `|𝒱(j) ∩ B(c,d)|` for all `c, d ∈ GF(q)*`, as points and as first
/// coordinates.
pub fn v_profile(plane: &Plane, j: u64) -> Result<VProfile, UnitalError> {
    let f = plane.field();
    let sub = Sub::of(f)?;
    let v = make_v(plane, j)?;
    let q = sub.q as usize;
    let mut points = vec![0usize; q * q];
    let mut columns = vec![Vec::new(); q * q];
    for p in v.points(plane) {
        if let Point::Affine(x, y) = p {
            let cell = sub.pos[f.norm(x).index()] as usize * q + sub.pos[f.trace(y).index()] as usize;
            points[cell] += 1;
            columns[cell].push(x);
        }
    }
    let mut counts = Vec::new();
    for c in sub.nonzero() {
        for d in sub.nonzero() {
            let cell = sub.pos[c.index()] as usize * q + sub.pos[d.index()] as usize;
            let cols = sorted(core::mem::take(&mut columns[cell])).len();
            counts.push((c, d, points[cell], cols));
        }
    }
    let b00_inside = make_b(plane, Elem::ZERO, Elem::ZERO)?.is_subset(&v);
    Ok(VProfile { q: sub.q, j, counts, b00_inside })
}
