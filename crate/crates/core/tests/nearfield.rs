use unital_core::nearfield::*;
use unital_core::*;
use unital_core::exec::Serial;

const I: Elem = Elem(3);
const ONE_PLUS_I: Elem = Elem(4);

fn n23() -> Nearfield {
    Nearfield::new(2, 3).unwrap()
}

#[test]
fn construction_constraints() {
    assert!(matches!(Nearfield::new(4, 3), Err(NearfieldError::InvalidParameters(_))));
    assert!(matches!(Nearfield::new(3, 3), Err(NearfieldError::InvalidParameters(_))));
    assert!(matches!(Nearfield::new(2, 4), Err(NearfieldError::Field(GfError::OddCharacteristicRequired(2)))));
    let n19 = Nearfield::new(1, 9).unwrap();
    let f = n19.field();
    assert!(f.elements().all(|x| f.elements().all(|y| n19.mul(x, y) == f.mul(x, y))));
    let n = n23();
    assert_eq!(n.coset_representatives(), [Elem::ONE, ONE_PLUS_I]);
    for y in n.field().nonzero() {
        assert_eq!(n.coset_of(y) == Some(0), n.field().is_square(y));
    }
}

#[test]
fn n23_examples() {
    let n = n23();
    assert_eq!(n.mul(Elem(2), I), Elem(6));
    assert_eq!(n.mul(I, ONE_PLUS_I), Elem(1 + 3 * 2));
    assert!(n.field().elements().all(|x| n.mul(x, Elem::ZERO) == Elem::ZERO));
    assert_eq!(n.inv(Elem(2)).unwrap(), Elem(2));
    assert_eq!(n.inv(ONE_PLUS_I).unwrap(), Elem(2 + 3 * 2));
    assert_eq!(n.inv(I).unwrap(), Elem(6));
    assert_eq!(n.inv(Elem::ZERO), Err(NearfieldError::DivisionByZero));
}

#[test]
fn axioms_and_left_distributivity_witness() {
    let r = n23().verify_axioms(&Serial);
    assert!(r.is_nearfield());
    assert!(!r.left_distributive.holds);
    let [x, y, z] = r.left_distributive.witness.unwrap();
    let n = n23();
    let f = n.field();
    assert_ne!(n.mul(z, f.add(x, y)), f.add(n.mul(z, x), n.mul(z, y)));
    let field_case = Nearfield::new(1, 9).unwrap().verify_axioms(&Serial);
    assert!(field_case.is_nearfield() && field_case.left_distributive.holds);
}

#[test]
fn quaternion_lattice() {
    let n = n23();
    let subs = n.enumerate_mult_subgroups().unwrap();
    assert_eq!(subs.len(), 6);
    assert_eq!(subs[0].elements, [Elem::ONE]);
    assert_eq!(subs[0].shape, Shape::Cyclic { d: 1 });
    let p = n.metacyclic_presentation().unwrap();
    assert!(p.holds());
    assert!(!p.split);
}

#[test]
fn homomorphism_clauses() {
    let n = n23();
    let f = n.field();
    let subs = n.enumerate_mult_subgroups().unwrap();
    let full = subs.last().unwrap().clone();
    let target = subs.iter().find(|s| s.elements == [Elem(1), Elem(2)]).unwrap().clone();
    let norm: Vec<(Elem, Elem)> = full.elements.iter().map(|&x| (x, f.norm(x))).collect();
    let c = n.classify_homomorphism(&full, &target, &norm).unwrap();
    assert_eq!(c.clause, HomClause::SplitProperImage);
    assert_eq!((c.r, c.j, c.exponent), (4, 1, 4));
    let id: Vec<(Elem, Elem)> = target.elements.iter().map(|&x| (x, x)).collect();
    let c = n.classify_homomorphism(&target, &target, &id).unwrap();
    assert_eq!((c.clause, c.r, c.j), (HomClause::Cyclic, 1, 1));
    let bad: Vec<(Elem, Elem)> = target.elements.iter().map(|&x| (x, Elem(2))).collect();
    assert!(matches!(
        n.classify_homomorphism(&target, &target, &bad),
        Err(NearfieldError::NotHomomorphism { .. })
    ));
}
