use unital_core::unital::*;
use unital_core::*;
use unital_core::exec::Serial;
use unital_core::nearfield::Nearfield;

fn np(q: u32) -> Plane {
    Plane::new(Nearfield::new(2, q).unwrap())
}

#[test]
fn hermitian_small() {
    let pg = Plane::new(Nearfield::new(1, 9).unwrap());
    let h = make_hermitian(&pg).unwrap();
    assert_eq!(h.len(), 28);
    assert!(h.contains_point(&pg, Point::Vertex));
    let f = pg.field();
    assert_eq!(f.elements().filter(|&y| h.contains_point(&pg, Point::Affine(Elem::ONE, y))).count(), 3);
    assert!(verify_unital(&pg, &h, &Serial).unwrap().is_unital);
    assert!(make_hermitian(&np(3)).is_err());
}

#[test]
fn wantz_examples() {
    let pl = np(3);
    let f = pl.field();
    let u1 = make_wantz(&pl, Elem::ZERO, Elem::ONE).unwrap();
    assert_eq!(u1, make_u(&pl, Elem::ONE, 1).unwrap());
    assert!(u1.contains_point(&pl, Point::Affine(f.parse("1+i").unwrap(), f.parse("2+2i").unwrap())));
    let r = verify_unital(&pl, &u1, &Serial).unwrap();
    assert!(r.is_unital);
    assert_eq!(r.profile, InfinityProfile::Parabolic(Point::Vertex));
    let bad = verify_unital(&pl, &make_wantz(&pl, Elem::ONE, Elem::ZERO).unwrap(), &Serial).unwrap();
    assert!(!bad.is_unital && bad.witness.is_some());
}

#[test]
fn size_mismatch() {
    let pl = np(3);
    let s = PointSet::from_points(&pl, [Point::Vertex]);
    assert_eq!(verify_unital(&pl, &s, &Serial), Err(UnitalError::SizeMismatch { expected: 28, found: 1 }));
}

#[test]
fn strata_sizes() {
    let pl = np(3);
    let f = pl.field();
    assert_eq!(make_b(&pl, Elem::ZERO, Elem::ZERO).unwrap().len(), 3);
    assert_eq!(make_b(&pl, Elem(2), Elem(1)).unwrap().len(), 12);
    let b21 = make_b(&pl, Elem(2), Elem(1)).unwrap();
    assert!(b21.contains_point(&pl, Point::Affine(f.parse("1+i").unwrap(), f.parse("2+2i").unwrap())));
    assert_eq!(make_v(&np(7), 1).unwrap().len(), 7 * 48 / 2);
    assert!(make_v(&np(5), 1).is_err());
}

#[test]
fn tangents_through_one_zero_zero() {
    let pl = np(3);
    let u = make_u(&pl, Elem::ONE, 1).unwrap();
    let t = tangency_points(&pl, &u, Point::Infinite(Elem::ZERO)).unwrap();
    assert_eq!(t.len(), 4);
    assert!(t.contains(&(Line::AtInfinity, Point::Vertex)));
    assert_eq!(tangency_points(&pl, &u, Point::Vertex), Err(UnitalError::PointInUnital));
}

#[test]
fn structure_of_u1() {
    let pl = np(3);
    let u = make_u(&pl, Elem::ONE, 1).unwrap();
    let r = structure_report(&pl, &u, &Serial).unwrap();
    assert!(r.all_pass(), "{:?}", r.clauses);
    assert_eq!((r.g.len(), r.c.len(), r.d.len(), r.r), (24, 8, 2, 4));
    let f = pl.field();
    assert!(r.delta.iter().all(|&(c, d)| f.norm(c) == d));
    let nfm = normal_form(&pl, &r).unwrap();
    assert!(nfm.form_holds && nfm.j == Some(1) && nfm.equivalent());
}
