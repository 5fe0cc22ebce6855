//! The projective plane NP(F) over a nearfield F.
//!
//! Points are `(x,y,1)`, `(1,y,0)` and `(0,1,0)`; lines are `[s,1,t]`,
//! `[1,0,t]` and `[0,0,1]`; `(x,y,z)` lies on `[s,u,t]` iff
//! `x⋆s + y⋆u + z⋆t = 0`. Points and lines are interned to dense ids:
//! affine `(x,y,1)` is `x·m + y`, `(1,y,0)` is `m² + y`, `(0,1,0)` is
//! `m² + m`, and lines follow the same pattern.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::exec::Executor;
use crate::gf::{Elem, Field};
use crate::nearfield::Nearfield;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineId(pub u32);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LineId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    /// `(x, y, 1)`
    Affine(Elem, Elem),
    /// `(1, y, 0)`
    Infinite(Elem),
    /// `(0, 1, 0)`
    Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Line {
    /// `[s, 1, t]`
    Oblique(Elem, Elem),
    /// `[1, 0, t]`
    Vertical(Elem),
    /// `[0, 0, 1]`, the translation line.
    AtInfinity,
}

impl Line {
    /// `[0, 1, t]`, the oblique lines of slope zero.
    pub fn is_horizontal(self) -> bool {
        matches!(self, Line::Oblique(s, _) if s.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneError {
    SamePoint,
    SameLine,
    /// A computed join or meet failed its incidence post-check.
    Inconsistent,
}

impl fmt::Display for PlaneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlaneError::SamePoint => "the two points coincide",
            PlaneError::SameLine => "the two lines coincide",
            PlaneError::Inconsistent => "internal consistency failure: computed line misses a point",
        })
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PlaneError {}

#[derive(Clone, Debug)]
pub struct Plane {
    nf: Nearfield,
    m: u32,
    line_points: Vec<PointId>,
    point_lines: Vec<LineId>,
}

impl Plane {
    pub fn new(nf: Nearfield) -> Plane {
        let m = nf.order();
        let count = (m * m + m + 1) as usize;
        let per = m as usize + 1;
        let mut plane = Plane { nf, m, line_points: Vec::with_capacity(count * per), point_lines: Vec::new() };
        for l in 0..count as u32 {
            let mut pts = plane.enumerate_line(plane.line(LineId(l)));
            pts.sort_unstable();
            plane.line_points.extend(pts);
        }
        let mut fill = vec![0usize; count];
        plane.point_lines = vec![LineId(0); count * per];
        for l in 0..count {
            for &p in &plane.line_points[l * per..(l + 1) * per] {
                let slot = p.index() * per + fill[p.index()];
                plane.point_lines[slot] = LineId(l as u32);
                fill[p.index()] += 1;
            }
        }
        debug_assert!(fill.iter().all(|&c| c == per));
        plane
    }

    fn enumerate_line(&self, line: Line) -> Vec<PointId> {
        let f = self.field();
        match line {
            Line::Oblique(s, t) => f
                .elements()
                .map(|x| self.point_id(Point::Affine(x, f.neg(f.add(self.nf.mul(x, s), t)))))
                .chain([self.point_id(Point::Infinite(f.neg(s)))])
                .collect(),
            Line::Vertical(t) => f
                .elements()
                .map(|y| self.point_id(Point::Affine(f.neg(t), y)))
                .chain([self.point_id(Point::Vertex)])
                .collect(),
            Line::AtInfinity => f
                .elements()
                .map(|y| self.point_id(Point::Infinite(y)))
                .chain([self.point_id(Point::Vertex)])
                .collect(),
        }
    }

    #[inline]
    pub fn nearfield(&self) -> &Nearfield {
        &self.nf
    }

    #[inline]
    pub fn field(&self) -> &Field {
        self.nf.field()
    }

    /// Order of the plane (the nearfield order).
    #[inline]
    pub fn order(&self) -> u32 {
        self.m
    }

    /// Number of points, equal to the number of lines.
    #[inline]
    pub fn size(&self) -> usize {
        (self.m * self.m + self.m + 1) as usize
    }

    pub fn point_ids(&self) -> impl Iterator<Item = PointId> {
        (0..self.size() as u32).map(PointId)
    }

    pub fn line_ids(&self) -> impl Iterator<Item = LineId> {
        (0..self.size() as u32).map(LineId)
    }

    #[inline]
    pub fn point_id(&self, p: Point) -> PointId {
        let m = self.m;
        PointId(match p {
            Point::Affine(x, y) => x.0 * m + y.0,
            Point::Infinite(y) => m * m + y.0,
            Point::Vertex => m * m + m,
        })
    }

    #[inline]
    pub fn point(&self, id: PointId) -> Point {
        let m = self.m;
        let v = id.0;
        if v < m * m {
            Point::Affine(Elem(v / m), Elem(v % m))
        } else if v < m * m + m {
            Point::Infinite(Elem(v - m * m))
        } else {
            Point::Vertex
        }
    }

    #[inline]
    pub fn line_id(&self, l: Line) -> LineId {
        let m = self.m;
        LineId(match l {
            Line::Oblique(s, t) => s.0 * m + t.0,
            Line::Vertical(t) => m * m + t.0,
            Line::AtInfinity => m * m + m,
        })
    }

    #[inline]
    pub fn line(&self, id: LineId) -> Line {
        let m = self.m;
        let v = id.0;
        if v < m * m {
            Line::Oblique(Elem(v / m), Elem(v % m))
        } else if v < m * m + m {
            Line::Vertical(Elem(v - m * m))
        } else {
            Line::AtInfinity
        }
    }

    /// Points of a line: affine points by `(x, y)` encoding, then the points
    /// at infinity.
    #[inline]
    pub fn points_on(&self, l: LineId) -> &[PointId] {
        let per = self.m as usize + 1;
        &self.line_points[l.index() * per..(l.index() + 1) * per]
    }

    #[inline]
    pub fn lines_through(&self, p: PointId) -> &[LineId] {
        let per = self.m as usize + 1;
        &self.point_lines[p.index() * per..(p.index() + 1) * per]
    }

    /// Evaluates the incidence form class by class.
    pub fn incident(&self, p: Point, l: Line) -> bool {
        let f = self.field();
        match (p, l) {
            (Point::Affine(x, y), Line::Oblique(s, t)) => f.add(f.add(self.nf.mul(x, s), y), t).is_zero(),
            (Point::Affine(x, _), Line::Vertical(t)) => f.add(x, t).is_zero(),
            (Point::Affine(..), Line::AtInfinity) => false,
            (Point::Infinite(y), Line::Oblique(s, _)) => f.add(s, y).is_zero(),
            (Point::Infinite(_), Line::Vertical(_)) => false,
            (Point::Infinite(_), Line::AtInfinity) => true,
            (Point::Vertex, Line::Oblique(..)) => false,
            (Point::Vertex, Line::Vertical(_) | Line::AtInfinity) => true,
        }
    }

    pub fn incident_ids(&self, p: PointId, l: LineId) -> bool {
        self.points_on(l).binary_search(&p).is_ok()
    }

    /// The unique line through two distinct points, verified by incidence.
    pub fn line_through(&self, p1: Point, p2: Point) -> Result<Line, PlaneError> {
        if p1 == p2 {
            return Err(PlaneError::SamePoint);
        }
        let f = self.field();
        let nf = &self.nf;
        let oblique_through = |x: Elem, y: Elem, s: Elem| Line::Oblique(s, f.neg(f.add(nf.mul(x, s), y)));
        let line = match (p1, p2) {
            (Point::Affine(x, y), Point::Affine(x1, y1)) => {
                if x == x1 {
                    Line::Vertical(f.neg(x))
                } else {
                    // s = -(x - x1)^{-1} ⋆ (y - y1)
                    let ratio = nf.mul(nf.inv(f.sub(x, x1)).map_err(|_| PlaneError::Inconsistent)?, f.sub(y, y1));
                    let s = f.neg(ratio);
                    Line::Oblique(s, f.sub(nf.mul(x, ratio), y))
                }
            }
            (Point::Affine(x, y), Point::Infinite(d)) | (Point::Infinite(d), Point::Affine(x, y)) => {
                oblique_through(x, y, f.neg(d))
            }
            (Point::Affine(x, _), Point::Vertex) | (Point::Vertex, Point::Affine(x, _)) => Line::Vertical(f.neg(x)),
            _ => Line::AtInfinity,
        };
        if self.incident(p1, line) && self.incident(p2, line) {
            Ok(line)
        } else {
            Err(PlaneError::Inconsistent)
        }
    }

    pub fn line_through_ids(&self, p1: PointId, p2: PointId) -> Result<LineId, PlaneError> {
        Ok(self.line_id(self.line_through(self.point(p1), self.point(p2))?))
    }

    /// The unique common point of two distinct lines, verified by incidence.
    pub fn meet(&self, l1: Line, l2: Line) -> Result<Point, PlaneError> {
        if l1 == l2 {
            return Err(PlaneError::SameLine);
        }
        let f = self.field();
        let nf = &self.nf;
        let point = match (l1, l2) {
            (Line::Oblique(s, _), Line::Oblique(s2, _)) => {
                if s == s2 {
                    Point::Infinite(f.neg(s))
                } else {
                    // x ⋆ s - x ⋆ s2 is not linear in x, so read the meet off the incidence lists
                    let (a, b) = (self.points_on(self.line_id(l1)), self.points_on(self.line_id(l2)));
                    let common = a.iter().find(|p| b.binary_search(p).is_ok()).ok_or(PlaneError::Inconsistent)?;
                    self.point(*common)
                }
            }
            (Line::Oblique(s, t), Line::Vertical(c)) | (Line::Vertical(c), Line::Oblique(s, t)) => {
                let x = f.neg(c);
                Point::Affine(x, f.neg(f.add(nf.mul(x, s), t)))
            }
            (Line::Oblique(s, _), Line::AtInfinity) | (Line::AtInfinity, Line::Oblique(s, _)) => {
                Point::Infinite(f.neg(s))
            }
            _ => Point::Vertex,
        };
        if self.incident(point, l1) && self.incident(point, l2) {
            Ok(point)
        } else {
            Err(PlaneError::Inconsistent)
        }
    }

    pub fn meet_ids(&self, l1: LineId, l2: LineId) -> Result<PointId, PlaneError> {
        Ok(self.point_id(self.meet(self.line(l1), self.line(l2))?))
    }

    /// Exhaustive projective-plane certificate.
    pub fn verify_axioms<E: Executor>(&self, exec: &E) -> PlaneReport {
        let n = self.size();
        let per = self.m as usize + 1;
        let incidence_ok = self
            .line_ids()
            .all(|l| self.points_on(l).iter().all(|&p| self.incident(self.point(p), self.line(l))));
        let points_ok = exec
            .map_ranges(n, |range| {
                let mut count = vec![0u8; n];
                range.into_iter().all(|p| {
                    count.iter_mut().for_each(|c| *c = 0);
                    for &l in self.lines_through(PointId(p as u32)) {
                        for &q in self.points_on(l) {
                            count[q.index()] = count[q.index()].saturating_add(1);
                        }
                    }
                    count.iter().enumerate().all(|(q, &c)| if q == p { c as usize == per } else { c == 1 })
                })
            })
            .into_iter()
            .all(|ok| ok);
        let lines_ok = exec
            .map_ranges(n, |range| {
                let mut count = vec![0u8; n];
                range.into_iter().all(|l| {
                    count.iter_mut().for_each(|c| *c = 0);
                    for &p in self.points_on(LineId(l as u32)) {
                        for &k in self.lines_through(p) {
                            count[k.index()] = count[k.index()].saturating_add(1);
                        }
                    }
                    count.iter().enumerate().all(|(k, &c)| if k == l { c as usize == per } else { c == 1 })
                })
            })
            .into_iter()
            .all(|ok| ok);
        PlaneReport {
            order: self.m,
            points: n,
            lines: n,
            incidence_ok,
            line_sizes_ok: self.line_ids().all(|l| self.points_on(l).len() == per),
            unique_join: points_ok,
            unique_meet: lines_ok,
            quadrangle: self.find_quadrangle(),
        }
    }

    /// Four points, no three collinear.
    pub fn find_quadrangle(&self) -> Option<[Point; 4]> {
        let f = self.field();
        let candidates: Vec<Point> = f
            .elements()
            .take(3)
            .flat_map(|x| f.elements().take(3).map(move |y| Point::Affine(x, y)))
            .chain([Point::Vertex, Point::Infinite(Elem::ZERO)])
            .collect();
        let collinear = |a: Point, b: Point, c: Point| {
            self.line_through(a, b).map(|l| self.incident(c, l)).unwrap_or(true)
        };
        let k = candidates.len();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    for d in c + 1..k {
                        let pts = [candidates[a], candidates[b], candidates[c], candidates[d]];
                        let ok = (0..4).all(|skip| {
                            let t: Vec<Point> = (0..4).filter(|&i| i != skip).map(|i| pts[i]).collect();
                            !collinear(t[0], t[1], t[2])
                        });
                        if ok {
                            return Some(pts);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn format_point(&self, p: Point) -> String {
        let f = self.field();
        match p {
            Point::Affine(x, y) => alloc::format!("({},{},1)", f.format(x), f.format(y)),
            Point::Infinite(y) => alloc::format!("(1,{},0)", f.format(y)),
            Point::Vertex => String::from("(0,1,0)"),
        }
    }

    pub fn format_line(&self, l: Line) -> String {
        let f = self.field();
        match l {
            Line::Oblique(s, t) => alloc::format!("[{},1,{}]", f.format(s), f.format(t)),
            Line::Vertical(t) => alloc::format!("[1,0,{}]", f.format(t)),
            Line::AtInfinity => String::from("[0,0,1]"),
        }
    }

    /// Homogeneous coordinates as element encodings.
    pub fn coordinates(&self, p: Point) -> [u32; 3] {
        match p {
            Point::Affine(x, y) => [x.0, y.0, 1],
            Point::Infinite(y) => [1, y.0, 0],
            Point::Vertex => [0, 1, 0],
        }
    }

    /// Inverse of [`Plane::coordinates`]; only the three canonical classes
    /// are accepted.
    pub fn from_coordinates(&self, c: [u32; 3]) -> Option<Point> {
        let ok = |v: u32| v < self.m;
        match c {
            [x, y, 1] if ok(x) && ok(y) => Some(Point::Affine(Elem(x), Elem(y))),
            [1, y, 0] if ok(y) => Some(Point::Infinite(Elem(y))),
            [0, 1, 0] => Some(Point::Vertex),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlaneReport {
    pub order: u32,
    pub points: usize,
    pub lines: usize,
    pub incidence_ok: bool,
    pub line_sizes_ok: bool,
    pub unique_join: bool,
    pub unique_meet: bool,
    pub quadrangle: Option<[Point; 4]>,
}

impl PlaneReport {
    pub fn is_projective_plane(&self) -> bool {
        let m = self.order as usize;
        self.points == m * m + m + 1
            && self.lines == self.points
            && self.incidence_ok
            && self.line_sizes_ok
            && self.unique_join
            && self.unique_meet
            && self.quadrangle.is_some()
    }
}
