//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria 4, 9 and 12 are checked as written and are known to fail:
//! the printed statements disagree with exhaustive computation. The run
//! succeeds when exactly that set fails.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;
use unital_core::collineation::{from_action, generate_group, linear_stabilizer, p_elements_in_translations, GeneratorSpec};
use unital_core::nearfield::closed_form_mul;
use unital_core::onan::{find_onan, uj_obstruction, vj_obstruction, Constraints, LineClass, ObstructionPath};
use unital_core::polyfn::{hk_find_collision, hk_is_permutation, hk_value_set, matthews};
use unital_core::unital::{
    admissible_v, b_profiles, central_audit, family_report, make_hermitian, make_u, make_wantz, structure_report,
    v_profile, verify_unital, Blocks,
};
use unital_core::{Elem, Field, Nearfield, Plane, Point};
use unital_forge::experiments::{self, wantz_derived, wantz_pairs, wantz_printed, Ctx, Params};
use unital_forge::report::{Fingerprint, Recorder, Report};
use unital_forge::Pool;

const KNOWN_FAILURES: [u32; 3] = [4, 9, 12];

fn np(q: u32) -> Plane {
    Plane::new(Nearfield::new(2, q).unwrap())
}

fn sub_nonzero(f: &Field) -> Vec<Elem> {
    f.subfield(f.degree() / 2).unwrap().into_iter().filter(|x| !x.is_zero()).collect()
}

fn c1(pool: &Pool) -> (bool, String) {
    let mut ok = true;
    let mut d = Vec::new();
    for (q, pts) in [(3, 91), (5, 651), (7, 2451)] {
        let r = np(q).verify_axioms(pool);
        ok &= r.is_projective_plane() && r.points == pts && r.lines == pts;
        d.push(format!("q={q}: {} points", r.points));
    }
    (ok, d.join(", "))
}

fn c2(pool: &Pool) -> (bool, String) {
    let mut ok = true;
    for (n, q) in [(2, 3), (2, 5), (2, 7), (2, 9), (1, 9)] {
        let nf = Nearfield::new(n, q).unwrap();
        ok &= nf.verify_axioms(pool).is_nearfield();
        if n == 2 {
            let f = nf.field();
            ok &= f.elements().all(|x| f.elements().all(|y| closed_form_mul(f, x, y) == nf.mul_general(x, y)));
        }
    }
    (ok, "N(2,3), N(2,5), N(2,7), N(2,9), N(1,9)".into())
}

fn c3() -> (bool, String) {
    let pl = np(3);
    let g = generate_group(&pl, &GeneratorSpec::Linear, 1 << 20).unwrap();
    let canon = g.elements.iter().all(|k| from_action(&pl, |p| k.apply(&pl, p)).map(|c| c.index(&pl)) == Ok(k.index(&pl)));
    let p_in_t = p_elements_in_translations(&pl, &g) == Ok(true);
    (g.order() == 10368 && canon && p_in_t, format!("order {}, canonical {canon}, 3-elements in T {p_in_t}", g.order()))
}

fn c4(pool: &Pool) -> (bool, String) {
    let mut ok = true;
    let mut d = Vec::new();
    for q in [3, 5] {
        let pl = np(q);
        let f = pl.field();
        let pairs = wantz_pairs(f, q);
        let (mut printed, mut derived) = (0, 0);
        for &(a, b) in &pairs {
            let u = verify_unital(&pl, &make_wantz(&pl, a, b).unwrap(), pool).unwrap().is_unital;
            printed += (u != wantz_printed(f, a, b)) as usize;
            derived += (u != wantz_derived(f, a, b)) as usize;
        }
        ok &= printed == 0;
        d.push(format!("q={q}: {} pairs, printed condition wrong on {printed}, trace-norm condition wrong on {derived}", pairs.len()));
    }
    (ok, d.join("; "))
}

fn c5(pool: &Pool) -> (bool, String) {
    let mut ok = true;
    let mut d = Vec::new();
    for (q, want) in [(3, 24), (5, 120)] {
        let pl = np(q);
        let u = make_u(&pl, Elem::ONE, 1).unwrap();
        let n = linear_stabilizer(&pl, u.ids(), pool).order();
        ok &= n == want;
        d.push(format!("q={q}: {n}"));
    }
    (ok, d.join(", "))
}

fn c6(pool: &Pool) -> (bool, String) {
    let mut ok = true;
    for q in [3u32, 5] {
        let pl = np(q);
        let f = pl.field();
        let r = structure_report(&pl, &make_u(&pl, Elem::ONE, 1).unwrap(), pool).unwrap();
        let eps = f.constants().unwrap().epsilon;
        let mut w: Vec<Elem> = f.subfield(1).unwrap().into_iter().map(|t| f.mul(t, eps)).collect();
        w.sort();
        let m = q as usize;
        ok &= r.all_pass()
            && r.c.len() == m * m - 1
            && r.d == sub_nonzero(f)
            && r.w == w
            && r.delta.iter().all(|&(c, d)| f.norm(c) == d)
            && r.r == m + 1;
    }
    (ok, "q=3, q=5".into())
}

fn c7(pool: &Pool) -> (bool, String) {
    let pl = np(3);
    let u = make_u(&pl, Elem::ONE, 1).unwrap();
    let g = linear_stabilizer(&pl, u.ids(), pool);
    let a = central_audit(&pl, &u, &g.elements, pool);
    (a.violations.is_empty() && a.central > 0, format!("{} elations, {} homologies", a.elations, a.homologies))
}

fn c8(pool: &Pool) -> (bool, String) {
    let ok = [3, 5].iter().all(|&q| b_profiles(&np(q), pool).unwrap().is_empty());
    (ok, "q=3, q=5".into())
}

fn c9(pool: &Pool) -> (bool, String) {
    let mut ok = true;
    for q in [3, 5] {
        let r = family_report(&np(q), 1, pool).unwrap();
        ok &= r.strata && r.intersections && r.all_unitals && r.tangent_once == Some(true) && r.square_split == Some(true);
    }
    let first = ok;
    let (mut cols, mut pts, mut b00) = (true, true, true);
    for q in [7u32, 11] {
        let pl = np(q);
        for j in admissible_v(q as u64) {
            let r = v_profile(&pl, j).unwrap();
            cols &= r.column_violations(&pl).is_empty();
            pts &= r.point_violations(&pl).is_empty();
            b00 &= r.b00_inside;
        }
    }
    ok &= pts && b00;
    (ok, format!("(i)-(iv) {first}; (v) point counts {pts}, B(0,0) inside {b00}, first-coordinate counts {cols}"))
}

fn c10(pool: &Pool) -> (bool, String) {
    let mut ok = true;
    let mut d = Vec::new();
    for (q, js) in [(5, vec![3]), (7, vec![2, 4, 5])] {
        let pl = np(q);
        for j in js {
            let r = verify_unital(&pl, &make_u(&pl, Elem::ONE, j).unwrap(), pool).unwrap();
            ok &= !r.is_unital && r.witness.is_some();
            if let Some((l, n)) = r.witness {
                d.push(format!("q={q} j={j}: {} meets in {n}", pl.format_line(l)));
            }
        }
    }
    (ok, d.join(", "))
}

fn c11(pool: &Pool) -> (bool, String) {
    let pg = Plane::new(Nearfield::new(1, 9).unwrap());
    let h = make_hermitian(&pg).unwrap();
    let mut ok = find_onan(&pg, &h, &Blocks::new(&pg, &h, 2), &Constraints::default(), pool).is_empty();
    for q in [3, 5] {
        let pl = np(q);
        let u = make_u(&pl, Elem::ONE, 1).unwrap();
        let c = Constraints { must_contain: Some(Point::Vertex), ..Default::default() };
        ok &= find_onan(&pl, &u, &Blocks::new(&pl, &u, 2), &c, pool).is_empty();
    }
    (ok, "PG(2,9) full search; U(1) through (0,1,0) at q=3,5".into())
}

fn c12(pool: &Pool) -> (bool, String) {
    let mut d = Vec::new();
    let pl = np(5);
    let o = uj_obstruction(&pl, 3, pool).unwrap();
    let built = o.path == ObstructionPath::Construction && o.ratio_certified;
    let no_horizontal = !o.config.has_class(&pl, LineClass::Horizontal);
    d.push(format!("q=5 j=3: from collision {built}, configuration found {no_horizontal}"));
    let mut ok = built && no_horizontal;
    for q in [7u32, 11] {
        let pl = np(q);
        for j in admissible_v(q as u64) {
            let r = vj_obstruction(&pl, j, pool);
            if r.is_err() {
                d.push(format!("V q={q} j={j} fails"));
            }
            ok &= r.is_ok();
        }
    }
    (ok, d.join("; "))
}

fn c13() -> (bool, String) {
    let mut ok = true;
    for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
        let f = Field::new(p, n).unwrap();
        let q = f.order() as u64;
        for k in 1..=2 * p as u64 * (q - 1) {
            ok &= hk_is_permutation(&f, k) == Ok(matthews(&f, k));
        }
        for k in 1..q {
            ok &= hk_value_set(&f, k).map(|a| a.wan_holds) == Ok(true);
        }
    }
    let c = hk_find_collision(&Field::new(5, 1).unwrap(), 3);
    ok &= c == Ok((Elem(2), Elem(3)));
    (ok, format!("collision(5,3) = {c:?}"))
}

fn c14() -> (bool, String) {
    let mut ok = true;
    let mut d = Vec::new();
    for q in [3, 5, 7] {
        let nf = Nearfield::new(2, q).unwrap();
        let subs = nf.enumerate_mult_subgroups().unwrap();
        ok &= subs.iter().all(|s| nf.classify_subgroup(&s.elements) == Ok(s.shape));
        if q == 3 {
            ok &= subs.len() == 6;
        }
        d.push(format!("q={q}: {}", subs.len()));
    }
    (ok, d.join(", "))
}

fn c15() -> (bool, String) {
    let canon = |t: usize| {
        let ctx = Ctx::new(Pool::new(t).unwrap(), None);
        let mut rec = Recorder::new();
        experiments::run(&ctx, "all", &Params::new(3), &mut rec).unwrap();
        Report::new("all", json!({ "q": 3 }), rec.finish(), Fingerprint::current(t, false)).canonical()
    };
    let base = canon(1);
    let ok = [4, 8].iter().all(|&t| canon(t) == base);
    (ok, format!("{} bytes canonical", base.len()))
}

fn main() {
    let pool = Pool::new(4).unwrap();
    let criteria: Vec<(u32, Box<dyn Fn() -> (bool, String) + '_>)> = vec![
        (1, Box::new(|| c1(&pool))),
        (2, Box::new(|| c2(&pool))),
        (3, Box::new(c3)),
        (4, Box::new(|| c4(&pool))),
        (5, Box::new(|| c5(&pool))),
        (6, Box::new(|| c6(&pool))),
        (7, Box::new(|| c7(&pool))),
        (8, Box::new(|| c8(&pool))),
        (9, Box::new(|| c9(&pool))),
        (10, Box::new(|| c10(&pool))),
        (11, Box::new(|| c11(&pool))),
        (12, Box::new(|| c12(&pool))),
        (13, Box::new(c13)),
        (14, Box::new(c14)),
        (15, Box::new(c15)),
    ];
    let mut failed = BTreeSet::new();
    for (n, f) in &criteria {
        let start = Instant::now();
        let (ok, detail) = f();
        let ms = start.elapsed().as_millis();
        println!("criterion {n:>2}: {}  {detail}  ({ms} ms)", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.insert(*n);
        }
    }
    let known: BTreeSet<u32> = KNOWN_FAILURES.into_iter().collect();
    if failed != known {
        eprintln!("failing criteria {failed:?} differ from the known set {known:?}");
        std::process::exit(1);
    }
    println!("{} of {} criteria pass; failures match the known set {known:?}", criteria.len() - failed.len(), criteria.len());
}
