use unital_core::polyfn::*;
use unital_core::*;

fn gf(p: u32, n: u32) -> Field {
    Field::new(p, n).unwrap()
}

#[test]
fn evaluation() {
    let f = gf(5, 1);
    assert_eq!(hk_eval(&f, 3, Elem(2)), Elem(0));
    assert_eq!(hk_eval(&f, 3, Elem(1)), Elem(4));
    assert_eq!(hk_eval(&f, 7, Elem(0)), Elem(1));
    let f9 = gf(3, 2);
    for k in 0..20 {
        for x in f9.elements().filter(|&x| x != Elem::ONE) {
            assert_eq!(Some(hk_eval(&f9, k, x)), hk_closed(&f9, k, x));
        }
    }
}

#[test]
fn permutation_examples() {
    assert_eq!(hk_is_permutation(&gf(3, 1), 7), Ok(true));
    assert_eq!(hk_is_permutation(&gf(3, 1), 1), Ok(true));
    assert_eq!(hk_is_permutation(&gf(5, 1), 3), Ok(false));
}

#[test]
fn value_sets() {
    let a = hk_value_set(&gf(5, 1), 3).unwrap();
    assert_eq!(a.wan_bound, Some(3));
    assert!(a.value_set_size <= 3 && a.wan_holds);
    let b = hk_value_set(&gf(3, 1), 7).unwrap();
    assert_eq!((b.value_set_size, b.wan_bound), (3, None));
    let c = hk_value_set(&gf(7, 1), 5).unwrap();
    assert_eq!(c.wan_bound, Some(5));
    assert!(c.value_set_size <= 5);
    assert_eq!(wan_bound(7, 7), Err(PolyError::DegreeOutOfRange { k: 7 }));
}

#[test]
fn collisions() {
    assert_eq!(hk_find_collision(&gf(5, 1), 3), Ok((Elem(2), Elem(3))));
    assert_eq!(hk_find_collision(&gf(5, 1), 2), Err(PolyError::HypothesisFailed("gcd(k, q-1) = 1")));
    let (a, b) = hk_find_collision(&gf(7, 1), 5).unwrap();
    assert!(2 <= a.0 && a.0 < b.0 && b.0 <= 5);
}
