use unital_core::onan::*;
use unital_core::unital::{make_u, Blocks};
use unital_core::*;
use unital_core::exec::Serial;

#[test]
fn collinear_examples() {
    let nf = Nearfield::new(2, 3).unwrap();
    let f = nf.field();
    let e = |s: &str| f.parse(s).unwrap();
    let z = Elem::ZERO;
    assert_eq!(collinear_oblique(&nf, (z, z), (e("1"), e("1")), (e("2+i"), e("2+i"))), Ok(true));
    assert_eq!(collinear_oblique(&nf, (z, z), (e("1"), e("1")), (e("1+i"), e("2"))), Ok(false));
    assert_eq!(collinear_oblique(&nf, (z, z), (z, e("1")), (e("1"), e("1"))), Err(OnanError::DegenerateTriple));
}

#[test]
fn u1_small_has_no_config_through_vertex() {
    let pl = Plane::new(Nearfield::new(2, 3).unwrap());
    let u = make_u(&pl, Elem::ONE, 1).unwrap();
    let blocks = Blocks::new(&pl, &u, 2);
    let c = Constraints { must_contain: Some(Point::Vertex), ..Default::default() };
    assert!(find_onan(&pl, &u, &blocks, &c, &Serial).is_empty());
    assert_eq!(check_forced_line(&pl, &u, &Serial), Ok(true));
}
