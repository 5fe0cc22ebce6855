use unital_core::gf::*;

fn gf9() -> Field {
    Field::new(3, 2).unwrap()
}

// GF(9) = GF(3)[i], i^2 = -1; encoding a + b i -> a + 3b.
const I: Elem = Elem(3);
const ONE_PLUS_I: Elem = Elem(4);

#[test]
fn canonical_choices() {
    let f3 = Field::new(3, 1).unwrap();
    assert_eq!(f3.primitive(), Elem(2));
    let f = gf9();
    assert_eq!(f.modulus(), &[1, 0, 1]);
    assert_eq!(f.primitive(), ONE_PLUS_I);
    assert_eq!(f.mult_order(ONE_PLUS_I), Some(8));
    // p = 2 is accepted by the builder itself
    assert!(Field::new(2, 3).is_ok());
    assert_eq!(Field::new(9, 1).unwrap_err(), GfError::CompositeCharacteristic(9));
    assert!(matches!(Field::new(3, 13), Err(GfError::Overflow { .. })));
}

#[test]
fn gf9_examples() {
    let f = gf9();
    assert_eq!(f.mul(I, I), Elem(2));
    assert_eq!(f.mul(ONE_PLUS_I, ONE_PLUS_I), Elem(6)); // 2i
    assert_eq!(f.inv(Elem(1 + 3 * 2)).unwrap(), Elem(2 + 3 * 2));
    assert_eq!(f.pow(ONE_PLUS_I, 8), Elem::ONE);
    assert_eq!(f.inv(Elem::ZERO), Err(GfError::DivisionByZero));
    assert_eq!(f.trace(I), Elem::ZERO);
    assert_eq!(f.trace(ONE_PLUS_I), Elem(2));
    assert_eq!(f.norm(ONE_PLUS_I), Elem(2));
    assert_eq!(f.norm(Elem::ONE), Elem::ONE);
    assert!(f.is_square(Elem(2)));
    assert!(!f.is_square(ONE_PLUS_I));
    assert!(f.is_square(Elem::ONE));
    let c = f.constants().unwrap();
    assert_eq!(c, Constants { gamma: ONE_PLUS_I, epsilon: Elem(6), beta: Elem(2) });
    assert_eq!(f.mul(c.epsilon, c.epsilon), c.beta);
    assert_eq!(f.frobenius(c.epsilon, 1), f.neg(c.epsilon));
    assert_eq!(f.is_square_in_subfield(c.beta), Ok(false));
}

#[test]
fn p5_modulus_is_lexicographic_constant_first() {
    // x^2 + x + 1 has discriminant -3 = 2, a non-square mod 5
    assert_eq!(Field::new(5, 2).unwrap().modulus(), &[1, 1, 1]);
    assert_eq!(Field::new(7, 2).unwrap().modulus(), &[1, 0, 1]);
}

#[test]
fn formatting_round_trips() {
    let f = Field::new(3, 4).unwrap();
    for x in f.elements() {
        assert_eq!(f.parse(&f.format(x)).unwrap(), x);
    }
    let g = gf9();
    assert_eq!(g.format(Elem(7)), "1+2i");
    assert_eq!(g.format(I), "i");
    assert_eq!(g.parse("2i").unwrap(), Elem(6));
    assert!(g.parse("i^2").is_err());
}

#[test]
fn squares_by_exponent_match_log_parity() {
    for (p, n) in [(3, 2), (5, 2), (7, 2), (11, 2), (3, 4)] {
        let f = Field::new(p, n).unwrap();
        let half = (f.order() as u64 - 1) / 2;
        for x in f.nonzero() {
            assert_eq!(f.is_square(x), f.pow(x, half) == Elem::ONE);
        }
    }
}

#[test]
fn tables_reload() {
    let f = Field::new(5, 2).unwrap();
    let g = Field::from_tables(5, 2, f.modulus().to_vec(), f.exp_table().to_vec()).unwrap();
    assert!(f.elements().all(|x| f.elements().all(|y| f.mul(x, y) == g.mul(x, y))));
    let mut bad = f.exp_table().to_vec();
    bad.swap(3, 4);
    assert!(Field::from_tables(5, 2, f.modulus().to_vec(), bad).is_err());
}
