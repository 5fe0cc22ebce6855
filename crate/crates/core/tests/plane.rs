use unital_core::plane::*;
use unital_core::*;
use unital_core::exec::Serial;

fn np3() -> Plane {
    Plane::new(Nearfield::new(2, 3).unwrap())
}

fn e(v: u32) -> Elem {
    Elem(v)
}

#[test]
fn incidence_examples() {
    let pl = np3();
    assert!(pl.incident(Point::Affine(e(1), e(1)), Line::Oblique(e(2), e(0))));
    assert!(pl.incident(Point::Vertex, Line::AtInfinity));
    for y in pl.field().elements() {
        for t in pl.field().elements() {
            assert!(!pl.incident(Point::Infinite(y), Line::Vertical(t)));
        }
    }
}

#[test]
fn join_examples() {
    let pl = np3();
    let a = Point::Affine(e(0), e(0));
    assert_eq!(pl.line_through(a, Point::Affine(e(1), e(1))), Ok(Line::Oblique(e(2), e(0))));
    assert_eq!(pl.line_through(a, Point::Affine(e(0), e(1))), Ok(Line::Vertical(e(0))));
    assert_eq!(pl.line_through(Point::Vertex, Point::Infinite(e(0))), Ok(Line::AtInfinity));
    assert_eq!(pl.line_through(a, a), Err(PlaneError::SamePoint));
}

#[test]
fn lines_at_infinity_and_vertical() {
    let pl = np3();
    let inf: Vec<Point> = pl.points_on(pl.line_id(Line::AtInfinity)).iter().map(|&p| pl.point(p)).collect();
    assert_eq!(inf.len(), 10);
    assert!(inf[..9].iter().all(|p| matches!(p, Point::Infinite(_))));
    assert_eq!(inf[9], Point::Vertex);
    let vert: Vec<Point> = pl.points_on(pl.line_id(Line::Vertical(e(0)))).iter().map(|&p| pl.point(p)).collect();
    assert_eq!(vert.len(), 10);
    assert!(vert[..9].iter().all(|p| matches!(p, Point::Affine(x, _) if x.is_zero())));
}

#[test]
fn small_plane_axioms() {
    let r = np3().verify_axioms(&Serial);
    assert_eq!(r.points, 91);
    assert!(r.is_projective_plane());
    let pg = Plane::new(Nearfield::new(1, 9).unwrap());
    assert!(pg.verify_axioms(&Serial).is_projective_plane());
}

#[test]
fn join_and_meet_are_symmetric_and_verified() {
    let pl = np3();
    for a in pl.point_ids() {
        for b in pl.point_ids().filter(|&b| b != a) {
            let l = pl.line_through_ids(a, b).unwrap();
            assert_eq!(l, pl.line_through_ids(b, a).unwrap());
            assert!(pl.incident_ids(a, l) && pl.incident_ids(b, l));
        }
    }
    for a in pl.line_ids() {
        for b in pl.line_ids().filter(|&b| b != a) {
            let p = pl.meet_ids(a, b).unwrap();
            assert!(pl.incident_ids(p, a) && pl.incident_ids(p, b));
        }
    }
}

#[test]
fn notation() {
    let pl = np3();
    assert_eq!(pl.format_point(Point::Affine(e(4), e(7))), "(1+i,1+2i,1)");
    assert_eq!(pl.format_line(Line::Vertical(e(0))), "[1,0,0]");
    let p = Point::Infinite(e(5));
    assert_eq!(pl.from_coordinates(pl.coordinates(p)), Some(p));
}
