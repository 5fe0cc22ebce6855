//! O'Nan configurations: four lines pairwise meeting in six distinct points
//! of a point set.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::gcd;
use crate::collineation::Collineation;
use crate::exec::Executor;
use crate::gf::Elem;
use crate::nearfield::Nearfield;
use crate::plane::{Line, LineId, Plane, Point, PointId};
use crate::polyfn::hk_eval;
use crate::unital::{make_b, make_u, make_v, Blocks, PointSet, UnitalError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OnanError {
    /// Collinearity test on a repeated point, a vertical pair or a horizontal pair.
    DegenerateTriple,
    HypothesisFailed(&'static str),
    InvalidParameters(&'static str),
    /// The given lines and points do not form an O'Nan configuration in the set.
    NotAConfiguration,
    /// The construction was inapplicable for the given reason (or failed)
    /// and exhaustive search found nothing either.
    NoObstructionFound(Option<&'static str>),
    Unital(UnitalError),
}

impl fmt::Display for OnanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OnanError::DegenerateTriple => f.write_str("degenerate triple"),
            OnanError::HypothesisFailed(what) => write!(f, "hypothesis failed: {what}"),
            OnanError::InvalidParameters(what) => write!(f, "invalid parameters: {what}"),
            OnanError::NotAConfiguration => f.write_str("not an O'Nan configuration"),
            OnanError::NoObstructionFound(Some(why)) => {
                write!(f, "construction inapplicable ({why}); exhaustive search found no configuration")
            }
            OnanError::NoObstructionFound(None) => f.write_str("no obstruction found"),
            OnanError::Unital(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OnanError {}

impl From<UnitalError> for OnanError {
    fn from(e: UnitalError) -> Self {
        OnanError::Unital(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineClass {
    /// `[0,1,z]`
    Horizontal,
    /// `[1,0,z]`
    Vertical,
    /// `[u,1,z]` with `u ≠ 0`
    Oblique,
    AtInfinity,
}

impl LineClass {
    pub fn of(l: Line) -> LineClass {
        match l {
            Line::Oblique(s, _) if s.is_zero() => LineClass::Horizontal,
            Line::Oblique(..) => LineClass::Oblique,
            Line::Vertical(_) => LineClass::Vertical,
            Line::AtInfinity => LineClass::AtInfinity,
        }
    }
}

/// Lines and points sorted by id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OnanConfig {
    pub lines: [LineId; 4],
    pub points: [PointId; 6],
}

impl OnanConfig {
    /// Certifies that the four lines are distinct, meet pairwise in six
    /// distinct points and that those points lie in `set`.
    pub fn from_lines(plane: &Plane, set: &PointSet, lines: [LineId; 4]) -> Result<OnanConfig, OnanError> {
        let mut ls = lines;
        ls.sort_unstable();
        if ls.windows(2).any(|w| w[0] == w[1]) {
            return Err(OnanError::NotAConfiguration);
        }
        let mut pts = [PointId(0); 6];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                pts[k] = plane.meet_ids(ls[i], ls[j]).map_err(|_| OnanError::NotAConfiguration)?;
                k += 1;
            }
        }
        pts.sort_unstable();
        if pts.windows(2).any(|w| w[0] == w[1]) || !pts.iter().all(|&p| set.contains(p)) {
            return Err(OnanError::NotAConfiguration);
        }
        Ok(OnanConfig { lines: ls, points: pts })
    }

    /// Certifies a configuration given by its lines and its six points.
    pub fn certify(plane: &Plane, set: &PointSet, lines: [Line; 4], points: [Point; 6]) -> Result<OnanConfig, OnanError> {
        let c = OnanConfig::from_lines(plane, set, lines.map(|l| plane.line_id(l)))?;
        let mut given = points.map(|p| plane.point_id(p));
        given.sort_unstable();
        if given != c.points {
            return Err(OnanError::NotAConfiguration);
        }
        Ok(c)
    }

    pub fn line_values(&self, plane: &Plane) -> [Line; 4] {
        self.lines.map(|l| plane.line(l))
    }

    pub fn point_values(&self, plane: &Plane) -> [Point; 6] {
        self.points.map(|p| plane.point(p))
    }

    pub fn contains_point(&self, p: PointId) -> bool {
        self.points.contains(&p)
    }

    pub fn has_class(&self, plane: &Plane, class: LineClass) -> bool {
        self.lines.iter().any(|&l| LineClass::of(plane.line(l)) == class)
    }
}

/// The ⋆-ratio test for three affine points on a line `[u,1,z]`, `u ≠ 0`:
/// `(x−x₂)⋆(x−x₁)⁻¹ = (y−y₂)⋆(y−y₁)⁻¹`.
pub fn collinear_oblique(nf: &Nearfield, p: (Elem, Elem), p1: (Elem, Elem), p2: (Elem, Elem)) -> Result<bool, OnanError> {
    let f = nf.field();
    if p == p1 || p == p2 || p1 == p2 || p.0 == p1.0 || p.1 == p1.1 {
        return Err(OnanError::DegenerateTriple);
    }
    let inv = |a: Elem| nf.inv(a).map_err(|_| OnanError::DegenerateTriple);
    let lhs = nf.mul(f.sub(p.0, p2.0), inv(f.sub(p.0, p1.0))?);
    let rhs = nf.mul(f.sub(p.1, p2.1), inv(f.sub(p.1, p1.1))?);
    Ok(lhs == rhs)
}

/// Search restrictions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub must_contain: Option<Point>,
    pub forbid: Option<LineClass>,
    /// Stop after this many configurations, in enumeration order.
    pub limit: Option<usize>,
}

/// Point set and blocks re-indexed locally, with a join table.
struct Index {
    ids: Vec<PointId>,
    local: Vec<u32>,
    join: Vec<u32>,
    block_pts: Vec<Vec<u32>>,
    through: Vec<Vec<u32>>,
    block_lines: Vec<LineId>,
}

const NONE: u32 = u32::MAX;

impl Index {
    fn new(plane: &Plane, set: &PointSet, blocks: &Blocks) -> Index {
        let ids = set.ids().to_vec();
        let n = ids.len();
        let mut local = vec![NONE; plane.size()];
        for (i, p) in ids.iter().enumerate() {
            local[p.index()] = i as u32;
        }
        let mut join = vec![NONE; n * n];
        let mut through = vec![Vec::new(); n];
        let mut block_pts = Vec::with_capacity(blocks.len());
        for (b, pts) in blocks.points.iter().enumerate() {
            let loc: Vec<u32> = pts.iter().map(|p| local[p.index()]).filter(|&i| i != NONE).collect();
            for (k, &i) in loc.iter().enumerate() {
                through[i as usize].push(b as u32);
                for &j in &loc[k + 1..] {
                    join[i as usize * n + j as usize] = b as u32;
                    join[j as usize * n + i as usize] = b as u32;
                }
            }
            block_pts.push(loc);
        }
        Index { ids, local, join, block_pts, through, block_lines: blocks.lines.clone() }
    }

    #[inline]
    fn join(&self, a: u32, b: u32) -> u32 {
        self.join[a as usize * self.ids.len() + b as usize]
    }

    /// The common point of two distinct blocks, if it lies in the set.
    fn common(&self, x: u32, y: u32) -> Option<u32> {
        let (a, b) = (&self.block_pts[x as usize], &self.block_pts[y as usize]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return Some(a[i]),
            }
        }
        None
    }
}

/// Exhaustive search over configurations built from `blocks`.
///
/// Each configuration is visited once: from its smallest point, or from the
/// required point when `must_contain` is set. Output order does not depend
/// on the executor.
pub fn find_onan<E: Executor>(
    plane: &Plane,
    set: &PointSet,
    blocks: &Blocks,
    constraints: &Constraints,
    exec: &E,
) -> Vec<OnanConfig> {
    let idx = Index::new(plane, set, blocks);
    let anchored = constraints.must_contain.map(|p| idx.local[plane.point_id(p).index()]);
    let anchors: Vec<u32> = match anchored {
        Some(NONE) => return Vec::new(),
        Some(a) => vec![a],
        None => (0..idx.ids.len() as u32).collect(),
    };
    let forbidden: Vec<bool> = idx
        .block_lines
        .iter()
        .map(|&l| constraints.forbid == Some(LineClass::of(plane.line(l))))
        .collect();
    let mut tasks = Vec::new();
    for &a in &anchors {
        let th = &idx.through[a as usize];
        for i in 0..th.len() {
            for j in i + 1..th.len() {
                tasks.push((a, th[i], th[j]));
            }
        }
    }
    let min_rule = anchored.is_none();
    let run = |&(a, l1, l2): &(u32, u32, u32)| -> Vec<OnanConfig> {
        let mut out = Vec::new();
        if forbidden[l1 as usize] || forbidden[l2 as usize] {
            return out;
        }
        let keep = |p: &&u32| **p != a && (!min_rule || **p > a);
        let s1: Vec<u32> = idx.block_pts[l1 as usize].iter().filter(keep).copied().collect();
        let s2: Vec<u32> = idx.block_pts[l2 as usize].iter().filter(keep).copied().collect();
        for (k, &b) in s1.iter().enumerate() {
            for &c in &s1[k + 1..] {
                for (m, &d) in s2.iter().enumerate() {
                    for &e in &s2[m + 1..] {
                        for (x, y) in [(idx.join(b, d), idx.join(c, e)), (idx.join(b, e), idx.join(c, d))] {
                            if x == NONE || y == NONE || forbidden[x as usize] || forbidden[y as usize] {
                                continue;
                            }
                            let Some(f) = idx.common(x, y) else { continue };
                            if min_rule && f < a {
                                continue;
                            }
                            let mut lines = [l1, l2, x, y].map(|l| idx.block_lines[l as usize]);
                            lines.sort_unstable();
                            let mut points = [a, b, c, d, e, f].map(|p| idx.ids[p as usize]);
                            points.sort_unstable();
                            out.push(OnanConfig { lines, points });
                        }
                    }
                }
            }
        }
        out
    };
    const BATCH: usize = 1024;
    let mut found = Vec::new();
    for chunk in tasks.chunks(if constraints.limit.is_some() { BATCH } else { tasks.len().max(1) }) {
        let parts = exec.map_ranges(chunk.len(), |r| chunk[r].iter().flat_map(&run).collect::<Vec<_>>());
        found.extend(parts.into_iter().flatten());
        if constraints.limit.is_some_and(|n| found.len() >= n) {
            break;
        }
    }
    if let Some(n) = constraints.limit {
        found.truncate(n);
    }
    found
}

fn elation_subgroup_fixes(plane: &Plane, set: &PointSet) -> Result<bool, OnanError> {
    let f = plane.field();
    let eps = f.constants().map_err(UnitalError::from)?.epsilon;
    let sub = f.subfield(f.degree() / 2).unwrap_or_default();
    Ok(sub
        .iter()
        .all(|&t| set.image(plane, &Collineation::phi(Elem::ONE, Elem::ONE, Elem::ZERO, f.mul(t, eps))) == *set))
}

/// Whether every configuration through `(0,1,0)` uses a line `[0,1,z]`,
/// i.e. the search with horizontals forbidden comes back empty.
pub fn check_forced_line<E: Executor>(plane: &Plane, set: &PointSet, exec: &E) -> Result<bool, OnanError> {
    if !set.contains_point(plane, Point::Vertex) {
        return Err(OnanError::HypothesisFailed("(0,1,0) lies in the set"));
    }
    if !elation_subgroup_fixes(plane, set)? {
        return Err(OnanError::HypothesisFailed("the ε-elations stabilize the set"));
    }
    let blocks = Blocks::new(plane, set, 2);
    let c = Constraints { must_contain: Some(Point::Vertex), forbid: Some(LineClass::Horizontal), limit: Some(1) };
    Ok(find_onan(plane, set, &blocks, &c, exec).is_empty())
}

/// Counts for the trace criterion on labelled configurations through (0,1,0).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraceCriterion {
    pub configs: usize,
    /// Configurations with `Tr(y₁₁) = Tr(y₁₂)`.
    pub hypothesis: usize,
    pub violations: usize,
}

/// Checks, for every labelled configuration through `(0,1,0)` whose
/// non-vertical lines pass through an anchor P = (x,y,1) with nonzero
/// slopes, that `(x−x₂)/(x−x₁) ∈ GF(q)` iff `Tr(y₂₁) = Tr(y₂₂)` whenever
/// `Tr(y₁₁) = Tr(y₁₂)`.
pub fn trace_criterion<E: Executor>(plane: &Plane, anchors: &[(Elem, Elem)], exec: &E) -> TraceCriterion {
    let f = plane.field();
    let nf = plane.nearfield();
    let sub = f.subfield(f.degree() / 2).unwrap_or_default();
    let in_sub = |e: Elem| sub.binary_search(&e).is_ok();
    let slopes: Vec<Elem> = f.nonzero().collect();
    let xs: Vec<Elem> = f.elements().collect();
    let parts = exec.map_ranges(anchors.len() * slopes.len(), |range| {
        let mut acc = TraceCriterion::default();
        for task in range {
            let (x, y) = anchors[task / slopes.len()];
            let s1 = slopes[task % slopes.len()];
            // [s,1,t] through P: x⋆s + y + t = 0; its point above x_i has y_i = −(x_i⋆s) − t
            let on = |s: Elem, xi: Elem| f.add(f.sub(nf.mul(x, s), nf.mul(xi, s)), y);
            for &s2 in slopes.iter().filter(|&&s| s != s1) {
                for &x1 in xs.iter().filter(|&&v| v != x) {
                    let (y11, y12) = (on(s1, x1), on(s2, x1));
                    if f.trace(y11) != f.trace(y12) {
                        acc.configs += xs.len() - 2;
                        continue;
                    }
                    for &x2 in xs.iter().filter(|&&v| v != x && v != x1) {
                        acc.configs += 1;
                        acc.hypothesis += 1;
                        let (y21, y22) = (on(s1, x2), on(s2, x2));
                        let ratio = f.div(f.sub(x, x2), f.sub(x, x1)).expect("x1 ≠ x");
                        if in_sub(ratio) != (f.trace(y21) == f.trace(y22)) {
                            acc.violations += 1;
                        }
                    }
                }
            }
        }
        acc
    });
    parts.into_iter().fold(TraceCriterion::default(), |a, b| TraceCriterion {
        configs: a.configs + b.configs,
        hypothesis: a.hypothesis + b.hypothesis,
        violations: a.violations + b.violations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructionPath {
    /// The explicit six points, certified.
    Construction,
    /// Exhaustive search through `(0,1,0)` with horizontals forbidden.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub q: u32,
    pub j: u64,
    pub config: OnanConfig,
    pub path: ObstructionPath,
    /// Why the construction was skipped, when it was.
    pub fallback_reason: Option<&'static str>,
    /// The pair used by the construction: roots of unity or a collision.
    pub pair: Option<(Elem, Elem)>,
    /// Every oblique line of the configuration passes the ⋆-ratio test.
    pub ratio_certified: bool,
}

fn subfield_order(plane: &Plane) -> Result<(u32, Vec<Elem>), OnanError> {
    let f = plane.field();
    let q = f.sub_order().map_err(UnitalError::from)?;
    Ok((q, f.subfield(f.degree() / 2).unwrap_or_default()))
}

/// The ⋆-ratio test on each oblique line, with the points ordered so the
/// test is defined.
fn ratio_certify(plane: &Plane, c: &OnanConfig) -> bool {
    let nf = plane.nearfield();
    c.lines.iter().all(|&l| {
        if LineClass::of(plane.line(l)) != LineClass::Oblique {
            return true;
        }
        let pts: Vec<(Elem, Elem)> = c
            .points
            .iter()
            .filter(|&&p| plane.incident_ids(p, l))
            .filter_map(|&p| match plane.point(p) {
                Point::Affine(x, y) => Some((x, y)),
                _ => None,
            })
            .collect();
        pts.len() == 3 && collinear_oblique(nf, pts[0], pts[1], pts[2]) == Ok(true)
    })
}

/// The two smallest distinct elements of `dom` with equal `h_k` value.
fn collision(plane: &Plane, k: u64, dom: &[Elem]) -> Option<(Elem, Elem)> {
    let f = plane.field();
    let vals: Vec<Elem> = dom.iter().map(|&x| hk_eval(f, k, x)).collect();
    (0..dom.len()).find_map(|i| (i + 1..dom.len()).find(|&j| vals[i] == vals[j]).map(|j| (dom[i], dom[j])))
}

/// Lines through `(0,0,1)` and the verticals over `c₁, c₂`.
fn roots_config(plane: &Plane, set: &PointSet, c1: Elem, c2: Elem) -> Result<OnanConfig, OnanError> {
    let f = plane.field();
    let eps = f.constants().map_err(UnitalError::from)?.epsilon;
    let one = Elem::ONE;
    let pts = [
        Point::Vertex,
        Point::Affine(Elem::ZERO, Elem::ZERO),
        Point::Affine(c1, c1),
        Point::Affine(c1, f.add(c1, f.mul(c1, eps))),
        Point::Affine(c2, c2),
        Point::Affine(c2, f.add(c2, f.mul(c2, eps))),
    ];
    let lines = [
        Line::Oblique(f.neg(one), Elem::ZERO),
        Line::Oblique(f.sub(f.neg(one), eps), Elem::ZERO),
        Line::Vertical(f.neg(c1)),
        Line::Vertical(f.neg(c2)),
    ];
    OnanConfig::certify(plane, set, lines, pts)
}

/// Lines through `(1,1,1)` and the verticals over a collision pair, with
/// second coordinates `g(c)`, `g(c₁)+ε` and `g(c₂)+tε`.
fn collision_config(
    plane: &Plane,
    set: &PointSet,
    c1: Elem,
    c2: Elem,
    g: impl Fn(Elem) -> Elem,
) -> Result<OnanConfig, OnanError> {
    let f = plane.field();
    let eps = f.constants().map_err(UnitalError::from)?.epsilon;
    let one = Elem::ONE;
    let t = f.div(f.sub(c2, one), f.sub(c1, one)).map_err(|_| OnanError::DegenerateTriple)?;
    let p = Point::Affine(one, one);
    let p11 = Point::Affine(c1, g(c1));
    let p21 = Point::Affine(c2, g(c2));
    let p12 = Point::Affine(c1, f.add(g(c1), eps));
    let p22 = Point::Affine(c2, f.add(g(c2), f.mul(t, eps)));
    let join = |a: Point, b: Point| plane.line_through(a, b).map_err(|_| OnanError::NotAConfiguration);
    let lines = [join(p, p11)?, join(p, p12)?, Line::Vertical(f.neg(c1)), Line::Vertical(f.neg(c2))];
    OnanConfig::certify(plane, set, lines, [Point::Vertex, p, p11, p12, p21, p22])
}

fn search_fallback<E: Executor>(plane: &Plane, set: &PointSet, exec: &E) -> Option<OnanConfig> {
    let blocks = Blocks::new(plane, set, 2);
    let c = Constraints { must_contain: Some(Point::Vertex), forbid: Some(LineClass::Horizontal), limit: Some(1) };
    find_onan(plane, set, &blocks, &c, exec).into_iter().next()
}

fn finish<E: Executor>(
    plane: &Plane,
    set: &PointSet,
    (q, j): (u32, u64),
    built: Result<(OnanConfig, (Elem, Elem)), &'static str>,
    exec: &E,
) -> Result<Obstruction, OnanError> {
    let (config, path, fallback_reason, pair) = match built {
        Ok((c, pair)) if !c.has_class(plane, LineClass::Horizontal) => (c, ObstructionPath::Construction, None, Some(pair)),
        other => {
            let reason = match other {
                Err(r) => r,
                Ok(_) => "constructed configuration uses a line [0,1,z]",
            };
            let c = search_fallback(plane, set, exec).ok_or(OnanError::NoObstructionFound(Some(reason)))?;
            (c, ObstructionPath::Search, Some(reason), None)
        }
    };
    Ok(Obstruction { q, j, ratio_certified: ratio_certify(plane, &config), config, path, fallback_reason, pair })
}

/// A configuration through `(0,1,0)` without `[0,1,z]` lines inside 𝒰(j),
/// showing it is not a unital.
pub fn uj_obstruction<E: Executor>(plane: &Plane, j: u64, exec: &E) -> Result<Obstruction, OnanError> {
    let f = plane.field();
    let (q, sub) = subfield_order(plane)?;
    if q % 2 == 0 {
        return Err(OnanError::InvalidParameters("q must be odd"));
    }
    let set = make_u(plane, Elem::ONE, j)?;
    let (qq, half) = (q as u64, (q as u64 - 1) / 2);
    let built = if !(1 < j && j < qq - 1) {
        Err("j outside 1 < j < q-1")
    } else if j == (qq + 1) / 2 {
        Err("j = (q+1)/2 is excluded by a tangent count, not by a configuration")
    } else if gcd(j, half) != 1 {
        Err("gcd(j, (q-1)/2) > 1")
    } else if gcd(2 * j - 1, qq - 1) != 1 {
        let roots: Vec<Elem> =
            sub.iter().copied().filter(|&c| !c.is_zero() && f.pow(c, 2 * j - 1) == Elem::ONE).collect();
        roots_config(plane, &set, roots[0], roots[1]).map(|c| (c, (roots[0], roots[1]))).map_err(|_| "root construction failed")
    } else {
        let e: Vec<Elem> = sub.iter().copied().filter(|&c| !c.is_zero() && c != Elem::ONE).collect();
        match collision(plane, 2 * j - 1, &e) {
            None => Err("h_{2j-1} is injective on GF(q) minus {0,1}"),
            Some((c1, c2)) => collision_config(plane, &set, c1, c2, |c| f.pow(c, 2 * j))
                .map(|c| (c, (c1, c2)))
                .map_err(|_| "collision construction failed"),
        }
    };
    finish(plane, &set, (q, j), built, exec)
}

/// 𝒱(j) ∪ B(0,0) ∪ {(0,1,0)}: the part of any unital containing 𝒱(j)
/// that the configurations use.
pub fn v_target(plane: &Plane, j: u64) -> Result<PointSet, OnanError> {
    let v = make_v(plane, j)?;
    let b00 = make_b(plane, Elem::ZERO, Elem::ZERO)?;
    Ok(v.union(plane, &b00).union(plane, &PointSet::from_points(plane, [Point::Vertex])))
}

/// A configuration through `(0,1,0)` without `[0,1,z]` lines inside
/// [`v_target`], so no ε-elation-stable unital contains 𝒱(j).
pub fn vj_obstruction<E: Executor>(plane: &Plane, j: u64, exec: &E) -> Result<Obstruction, OnanError> {
    let f = plane.field();
    let (q, sub) = subfield_order(plane)?;
    if q % 4 != 3 {
        return Err(OnanError::InvalidParameters("q must be 3 mod 4"));
    }
    let qq = q as u64;
    if !(1 <= j && j < qq - 1 && gcd(j, qq - 1) == 1) {
        return Err(OnanError::InvalidParameters("j must satisfy 1 <= j < q-1 and gcd(j, q-1) = 1"));
    }
    let set = v_target(plane, j)?;
    let e = j * (qq + 1) / 2;
    let delta = |x: Elem| f.pow(x, e);
    let built = if gcd(e - 1, qq - 1) != 1 {
        let fixed: Vec<Elem> = sub.iter().copied().filter(|&d| !d.is_zero() && delta(d) == d).collect();
        roots_config(plane, &set, fixed[0], fixed[1]).map(|c| (c, (fixed[0], fixed[1]))).map_err(|_| "root construction failed")
    } else {
        // δ(x) = x^k on GF(q)*, and (δ(d)−1)/(d−1) = h_{k−1}(d)
        let k = e % (qq - 1);
        let dom: Vec<Elem> = sub.iter().copied().filter(|&c| !c.is_zero() && c != Elem::ONE).collect();
        if k < 3 || dom.len() < 2 {
            Err("h_{k-1} has degree below 2 or E has fewer than two elements")
        } else {
            match collision(plane, k - 1, &dom) {
                None => Err("h_{k-1} is injective on GF(q) minus {0,1}"),
                Some((d1, d2)) => collision_config(plane, &set, d1, d2, delta)
                    .map(|c| (c, (d1, d2)))
                    .map_err(|_| "collision construction failed"),
            }
        }
    };
    finish(plane, &set, (q, j), built, exec)
}
