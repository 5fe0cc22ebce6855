use unital_core::collineation::*;
use unital_core::*;
use unital_core::exec::Serial;
use unital_core::nearfield::Nearfield;

fn np3() -> Plane {
    Plane::new(Nearfield::new(2, 3).unwrap())
}

fn e(v: u32) -> Elem {
    Elem(v)
}

#[test]
fn phi_example_point() {
    let pl = np3();
    let k = Collineation::phi(e(2), e(4), e(0), e(0));
    assert_eq!(k.apply(&pl, Point::Affine(e(1), e(1))), Point::Affine(e(2), e(4)));
}

#[test]
fn gamma_swaps() {
    let pl = np3();
    let g = Collineation::gamma(e(1), e(1), e(0), e(0));
    assert_eq!(g.apply(&pl, Point::Affine(e(1), e(5))), Point::Affine(e(5), e(1)));
    assert_eq!(g.apply(&pl, Point::Vertex), Point::Infinite(e(0)));
    assert_eq!(g.apply(&pl, Point::Infinite(e(0))), Point::Vertex);
    assert!(g.compose(&pl, &g).unwrap().is_identity());
}

#[test]
fn generators_preserve_incidence() {
    let pl = np3();
    for g in generators(&pl, &GeneratorSpec::Standard) {
        assert!(g.preserves_incidence(&pl), "{}", g.format(&pl));
    }
    let odd = Collineation::gamma(e(5), e(7), e(3), e(8)).with_frob(1);
    assert!(odd.preserves_incidence(&pl));
}

#[test]
fn compose_and_inverse() {
    let pl = np3();
    let a = Collineation::phi(e(1), e(1), e(1), e(2));
    let b = Collineation::phi(e(1), e(1), e(4), e(5));
    let ab = a.compose(&pl, &b).unwrap();
    let f = pl.field();
    assert_eq!(ab, Collineation::phi(e(1), e(1), f.add(e(1), e(4)), f.add(e(2), e(5))));
    for k in [Collineation::phi(e(4), e(6), e(0), e(0)), Collineation::gamma(e(5), e(7), e(3), e(8)).with_frob(1)] {
        let inv = k.inverse(&pl).unwrap();
        assert!(k.compose(&pl, &inv).unwrap().is_identity());
        assert!(inv.compose(&pl, &k).unwrap().is_identity());
    }
}

#[test]
fn index_round_trips() {
    let pl = np3();
    for i in (0..index_bound(&pl)).step_by(37) {
        assert_eq!(Collineation::from_index(&pl, i).index(&pl), i);
    }
}

#[test]
fn small_groups() {
    let pl = np3();
    assert_eq!(generate_group(&pl, &GeneratorSpec::Translations, 1 << 20).unwrap().order(), 81);
    assert_eq!(generate_group(&pl, &GeneratorSpec::H0, 1 << 20).unwrap().order(), 9);
    assert_eq!(generate_group(&pl, &GeneratorSpec::Hy(e(4)), 1 << 20).unwrap().order(), 9);
    assert!(matches!(
        generate_group(&pl, &GeneratorSpec::Linear, 100),
        Err(CollineationError::BudgetExceeded { budget: 100 })
    ));
}

#[test]
fn translation_elations() {
    let pl = np3();
    let c = central_classification(&pl, &Collineation::phi(e(1), e(1), e(0), e(2))).unwrap();
    assert_eq!((c.center, c.axis, c.kind), (Point::Vertex, Line::AtInfinity, CentralKind::Elation));
    let y = e(4);
    let u = e(1);
    let k = Collineation::phi(e(1), e(1), u, pl.nearfield().mul(u, y));
    let c = central_classification(&pl, &k).unwrap();
    assert_eq!((c.center, c.axis, c.kind), (Point::Infinite(y), Line::AtInfinity, CentralKind::Elation));
}

#[test]
fn stabilizer_of_everything() {
    let pl = np3();
    let t = generate_group(&pl, &GeneratorSpec::Translations, 1 << 20).unwrap();
    let all: Vec<PointId> = pl.point_ids().collect();
    assert_eq!(stabilizer(&pl, &t, &all, &Serial).order(), 81);
}
