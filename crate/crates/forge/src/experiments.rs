//! Named experiments. Each one records a list of checks; `all` runs every
//! experiment in registry order.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use unital_core::arith::gcd;
use unital_core::collineation::{
    from_action, generate_group, linear_count, linear_stabilizer, p_elements_in_translations,
    GeneratorSpec,
};
use unital_core::gf::{canonical_modulus, is_irreducible};
use unital_core::nearfield::{closed_form_mul, closure};
use unital_core::onan::{
    check_forced_line, find_onan, trace_criterion, uj_obstruction, vj_obstruction, Constraints, LineClass,
    Obstruction, ObstructionPath, OnanError,
};
use unital_core::polyfn::{hk_find_collision, hk_is_permutation, hk_value_set, matthews};
use unital_core::unital::{
    admissible_v, b_profiles, central_audit, family_report, make_hermitian, make_u, make_wantz, normal_form,
    structure_report, v_profile, verify_unital, Blocks, DesignReport,
};
use unital_core::{Elem, Field, Nearfield, Plane, Point};

use crate::cache::TableCache;
use crate::exec::Pool;
use crate::report::{Recorder, Status};

#[derive(Debug)]
pub enum ForgeError {
    UnknownExperiment(String),
    InvalidParameters(String),
    Io(std::io::Error),
}

impl fmt::Display for ForgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForgeError::UnknownExperiment(name) => write!(f, "unknown experiment {name:?}"),
            ForgeError::InvalidParameters(what) => write!(f, "invalid parameters: {what}"),
            ForgeError::Io(e) => write!(f, "io failure: {e}"),
        }
    }
}

impl std::error::Error for ForgeError {}

impl From<std::io::Error> for ForgeError {
    fn from(e: std::io::Error) -> Self {
        ForgeError::Io(e)
    }
}

fn invalid(e: impl fmt::Display) -> ForgeError {
    ForgeError::InvalidParameters(e.to_string())
}

/// `q = p^e` with p odd, or `None`.
pub fn odd_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 3 || q % 2 == 0 {
        return None;
    }
    let p = (3..=q).find(|d| q % d == 0)?;
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub q: u32,
    pub j: Option<u64>,
    /// Field elements in the text form accepted by `Field::parse`.
    pub a: Option<String>,
    pub b: Option<String>,
}

impl Params {
    pub fn new(q: u32) -> Params {
        Params { q, ..Default::default() }
    }

    pub fn to_json(&self) -> Value {
        json!({ "q": self.q, "j": self.j, "a": self.a, "b": self.b })
    }
}

/// Shared state for one run: the executor, the optional table cache and
/// the planes built so far.
pub struct Ctx {
    pub pool: Pool,
    pub cache: Option<TableCache>,
    planes: RefCell<BTreeMap<(u32, u32), Rc<Plane>>>,
}

impl Ctx {
    pub fn new(pool: Pool, cache: Option<TableCache>) -> Ctx {
        Ctx { pool, cache, planes: RefCell::new(BTreeMap::new()) }
    }

    pub fn field(&self, p: u32, n: u32) -> Result<Field, ForgeError> {
        match &self.cache {
            Some(c) => c.field(p, n).map_err(|e| match e {
                crate::cache::CacheError::Io(e) => ForgeError::Io(e),
                other => invalid(other),
            }),
            None => Field::new(p, n).map_err(invalid),
        }
    }

    /// NP(N(n, q)).
    pub fn plane(&self, n: u32, q: u32) -> Result<Rc<Plane>, ForgeError> {
        if let Some(pl) = self.planes.borrow().get(&(n, q)) {
            return Ok(pl.clone());
        }
        let (p, e) = odd_prime_power(q).ok_or_else(|| invalid(format!("q = {q} is not an odd prime power")))?;
        let field = self.field(p, e * n)?;
        let nf = Nearfield::with_field(n, q, field).map_err(invalid)?;
        let pl = Rc::new(Plane::new(nf));
        self.planes.borrow_mut().insert((n, q), pl.clone());
        Ok(pl)
    }

    /// The nearfield plane over N(2, q).
    pub fn np(&self, q: u32) -> Result<Rc<Plane>, ForgeError> {
        self.plane(2, q)
    }

    /// PG(2, q²) as NP(N(1, q²)).
    pub fn pg(&self, q: u32) -> Result<Rc<Plane>, ForgeError> {
        self.plane(1, q * q)
    }
}

type Experiment = fn(&Ctx, &Params, &mut Recorder) -> Result<(), ForgeError>;

pub const REGISTRY: &[(&str, Experiment)] = &[
    ("field-laws", field_laws),
    ("nearfield-axioms", nearfield_axioms),
    ("subgroup-lattice", subgroup_lattice),
    ("plane-axioms", plane_axioms),
    ("andre-linear-group", andre_linear_group),
    ("wantz-criterion", wantz_criterion),
    ("wantz-is-unital", wantz_is_unital),
    ("stabilizer-order", stabilizer_order),
    ("structure-report", structure),
    ("central-collineations", central_collineations),
    ("b-profiles", b_profile),
    ("u-family", u_family),
    ("v-profile", v_profiles),
    ("exclusions", exclusions),
    ("onan-absent-classical", onan_absent_classical),
    ("onan-absent-wantz", onan_absent_wantz),
    ("onan-obstructions", onan_obstructions),
    ("trace-criterion", trace),
    ("poly-suite", poly_suite),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|(n, _)| *n).chain(["all"])
}

/// Runs `name` (or every experiment for `all`) and returns the checks.
pub fn run(ctx: &Ctx, name: &str, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    odd_prime_power(params.q).ok_or_else(|| invalid(format!("q = {} is not an odd prime power", params.q)))?;
    if name == "all" {
        for (n, f) in REGISTRY {
            rec.scope(n);
            f(ctx, params, rec)?;
        }
        rec.scope("");
        return Ok(());
    }
    let (_, f) = REGISTRY.iter().find(|(n, _)| *n == name).ok_or_else(|| ForgeError::UnknownExperiment(name.into()))?;
    f(ctx, params, rec)
}

fn pass_if(ok: bool, witness: impl Into<String>) -> (Status, Option<String>) {
    let w = witness.into();
    (Status::from_bool(ok), (!w.is_empty()).then_some(w))
}

fn inapplicable(why: impl Into<String>) -> (Status, Option<String>) {
    (Status::Inapplicable, Some(why.into()))
}

fn failed(e: impl fmt::Display) -> (Status, Option<String>) {
    (Status::Fail, Some(e.to_string()))
}

fn parse_elem(f: &Field, text: &Option<String>, default: Elem) -> Result<Elem, ForgeError> {
    match text {
        Some(t) => f.parse(t).map_err(|e| invalid(format!("{t:?}: {e}"))),
        None => Ok(default),
    }
}

fn design_witness(plane: &Plane, r: &DesignReport) -> String {
    match r.witness {
        Some((l, n)) => format!("line {} meets the set in {n} points", plane.format_line(l)),
        None => format!("{} points, histogram {:?}", r.size, r.histogram),
    }
}

fn format_points(plane: &Plane, pts: &[Point]) -> String {
    pts.iter().map(|&p| plane.format_point(p)).collect::<Vec<_>>().join(" ")
}

/// The j with 2 ≤ j ≤ q−2 and j ≠ (q−1)/2.
pub fn exclusion_targets(q: u64) -> Vec<u64> {
    (2..q.saturating_sub(1)).filter(|&j| 2 * j != q - 1).collect()
}

fn field_laws(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let f = pl.field();
    let (p, n, q) = (f.characteristic(), f.degree(), params.q);
    rec.run("modulus-canonical", || {
        let m = f.modulus();
        pass_if(is_irreducible(p, m) && m == canonical_modulus(p, n).as_slice(), format!("{m:?}"))
    });
    rec.run("log-exp-inverse", || {
        let bad = f.nonzero().find(|&x| f.log(x).map(|l| f.exp(l as u64)) != Some(x));
        pass_if(bad.is_none(), bad.map(|x| f.format(x)).unwrap_or_default())
    });
    rec.run("primitive-order", || {
        let o = f.mult_order(f.primitive());
        pass_if(o == Some(f.order() - 1), format!("{o:?}"))
    });
    rec.run("subfield-order", || {
        let s = f.subfield(n / 2).map(|s| s.len());
        pass_if(s == Some(q as usize) && f.sub_order() == Ok(q), format!("{s:?}"))
    });
    rec.run("frobenius-automorphism", || {
        let e = n / 2;
        let bad = f.elements().flat_map(|x| f.elements().map(move |y| (x, y))).find(|&(x, y)| {
            f.frobenius(f.add(x, y), e) != f.add(f.frobenius(x, e), f.frobenius(y, e))
                || f.frobenius(f.mul(x, y), e) != f.mul(f.frobenius(x, e), f.frobenius(y, e))
        });
        pass_if(bad.is_none(), bad.map(|(x, y)| format!("x={} y={}", f.format(x), f.format(y))).unwrap_or_default())
    });
    rec.run("norm-trace-in-subfield", || {
        let bad = f.elements().find(|&x| !f.in_subfield(f.norm(x)) || !f.in_subfield(f.trace(x)));
        pass_if(bad.is_none(), bad.map(|x| f.format(x)).unwrap_or_default())
    });
    rec.run("constants", || match f.constants() {
        Ok(c) => {
            let eps_ok = f.frobenius(c.epsilon, n / 2) == f.neg(c.epsilon);
            let beta_ok = f.in_subfield(c.beta) && f.mult_order(c.beta) == Some(q - 1);
            pass_if(
                eps_ok && beta_ok,
                format!("gamma={} epsilon={} beta={}", f.format(c.gamma), f.format(c.epsilon), f.format(c.beta)),
            )
        }
        Err(e) => failed(e),
    });
    Ok(())
}

fn axiom_witness(r: &unital_core::nearfield::AxiomReport) -> String {
    let named = [
        ("additive", r.additive_abelian),
        ("closed", r.mult_closed),
        ("associative", r.mult_associative),
        ("identity", r.mult_identity),
        ("inverses", r.mult_inverses),
        ("right-distributive", r.right_distributive),
    ];
    named
        .iter()
        .find(|(_, c)| !c.holds)
        .map(|(n, c)| format!("{n} fails at {:?}", c.witness))
        .unwrap_or_default()
}

fn nearfield_axioms(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let nf = pl.nearfield();
    let f = pl.field();
    let r = nf.verify_axioms(&ctx.pool);
    rec.run("axioms", || pass_if(r.is_nearfield(), axiom_witness(&r)));
    rec.run("left-distributive-fails", || pass_if(!r.left_distributive.holds, format!("{:?}", r.left_distributive.witness)));
    rec.run("closed-form-matches-dickson", || {
        let bad = f.elements().flat_map(|x| f.elements().map(move |y| (x, y))).find(|&(x, y)| {
            let c = closed_form_mul(f, x, y);
            c != nf.mul_general(x, y) || c != nf.mul(x, y)
        });
        pass_if(bad.is_none(), bad.map(|(x, y)| format!("x={} y={}", f.format(x), f.format(y))).unwrap_or_default())
    });
    rec.run("metacyclic-presentation", || match nf.metacyclic_presentation() {
        Ok(p) => pass_if(p.holds(), format!("a={} b={} split={}", f.format(p.a), f.format(p.b), p.split)),
        Err(e) => failed(e),
    });
    let field_plane = ctx.pg(params.q)?;
    rec.run("field-as-nearfield", || {
        let r = field_plane.nearfield().verify_axioms(&ctx.pool);
        pass_if(r.is_nearfield() && r.left_distributive.holds, axiom_witness(&r))
    });
    Ok(())
}

fn subgroup_lattice(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let nf = pl.nearfield();
    let subs = match nf.enumerate_mult_subgroups() {
        Ok(s) => s,
        Err(e) => {
            rec.run("shapes-certified", || failed(e));
            return Ok(());
        }
    };
    rec.run("shapes-certified", || {
        let bad = subs.iter().find(|s| {
            let closed = s.elements.iter().all(|&x| s.elements.iter().all(|&y| s.contains(nf.mul(x, y))));
            !closed || nf.classify_subgroup(&s.elements) != Ok(s.shape)
        });
        pass_if(bad.is_none(), format!("{} subgroups", subs.len()))
    });
    rec.run("cyclic-subgroups-listed", || {
        let bad = pl.field().nonzero().find(|&x| {
            let mut c = closure(nf, &[x]);
            c.sort();
            !subs.iter().any(|s| s.elements == c)
        });
        pass_if(bad.is_none(), bad.map(|x| pl.field().format(x)).unwrap_or_default())
    });
    Ok(())
}

fn plane_axioms(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    rec.run("projective-plane", || {
        let r = pl.verify_axioms(&ctx.pool);
        let m = pl.order() as usize;
        pass_if(
            r.is_projective_plane() && r.points == m * m + m + 1,
            format!("{} points, {} lines, order {}", r.points, r.lines, r.order),
        )
    });
    Ok(())
}

/// Groups up to this order are closed and audited element by element.
const GROUP_LIMIT: usize = 20_000;

fn andre_linear_group(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let q = params.q as usize;
    let expected = 2 * q.pow(4) * (q * q - 1).pow(2);
    let count = linear_count(&pl);
    rec.run("order-formula", || pass_if(count == expected, format!("{count}")));
    if count > GROUP_LIMIT {
        for name in ["closure-order", "canonical-forms", "p-elements-in-T"] {
            rec.run(name, || inapplicable(format!("group order {count} above {GROUP_LIMIT}")));
        }
        return Ok(());
    }
    let group = match generate_group(&pl, &GeneratorSpec::Linear, 2 * expected) {
        Ok(g) => g,
        Err(e) => {
            rec.run("closure-order", || failed(e));
            return Ok(());
        }
    };
    rec.run("closure-order", || pass_if(group.order() == expected, format!("{}", group.order())));
    rec.run("canonical-forms", || {
        let bad = group.elements.iter().find(|k| match from_action(&pl, |p| k.apply(&pl, p)) {
            Ok(c) => c.index(&pl) != k.index(&pl),
            Err(_) => true,
        });
        pass_if(bad.is_none(), bad.map(|k| k.format(&pl)).unwrap_or_default())
    });
    rec.run("p-elements-in-T", || match p_elements_in_translations(&pl, &group) {
        Ok(ok) => pass_if(ok, ""),
        Err(e) => failed(e),
    });
    Ok(())
}

/// The printed condition: `b² − a²` is a nonzero square of GF(q).
pub fn wantz_printed(f: &Field, a: Elem, b: Elem) -> bool {
    nonzero_square(f, f.sub(f.mul(b, b), f.mul(a, a)))
}

/// `b₀² − Nm(a)` is a nonzero square of GF(q), where `b₀ = (b + b^q)/2`.
/// The ε-part of b is absorbed by `tε`, so only b₀ can matter.
pub fn wantz_derived(f: &Field, a: Elem, b: Elem) -> bool {
    let half = f.inv(f.from_int(2)).expect("odd characteristic");
    let b0 = f.mul(f.add(b, f.frobenius(b, f.degree() / 2)), half);
    nonzero_square(f, f.sub(f.mul(b0, b0), f.norm(a)))
}

fn nonzero_square(f: &Field, d: Elem) -> bool {
    !d.is_zero() && f.in_subfield(d) && f.is_square_in_subfield(d) == Ok(true)
}

/// Exhaustive at q = 3, otherwise 200 seeded pairs: half uniform, half
/// with `b² − a² ∈ GF(q)*` so that both outcomes occur.
pub fn wantz_pairs(f: &Field, q: u32) -> Vec<(Elem, Elem)> {
    if q == 3 {
        return f.elements().flat_map(|a| f.elements().map(move |b| (a, b))).filter(|&(a, b)| !(a.is_zero() && b.is_zero())).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
    let sub: Vec<Elem> = f.subfield(f.degree() / 2).unwrap_or_default().into_iter().filter(|x| !x.is_zero()).collect();
    let mut out = Vec::new();
    while out.len() < 200 {
        let a = Elem(rng.gen_range(0..f.order()));
        if out.len() % 2 == 0 {
            let b = Elem(rng.gen_range(0..f.order()));
            if !(a.is_zero() && b.is_zero()) {
                out.push((a, b));
            }
        } else {
            let t = sub[rng.gen_range(0..sub.len())];
            let target = f.add(f.mul(a, a), t);
            if let Some(b) = f.elements().find(|&b| f.mul(b, b) == target) {
                out.push((a, b));
            }
        }
    }
    out
}

fn wantz_criterion(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let f = pl.field();
    let pairs = wantz_pairs(f, params.q);
    let mut outcomes = Vec::with_capacity(pairs.len());
    rec.run("designs", || {
        for &(a, b) in &pairs {
            match make_wantz(&pl, a, b).and_then(|s| verify_unital(&pl, &s, &ctx.pool)) {
                Ok(r) => outcomes.push(r.is_unital),
                Err(e) => return failed(e),
            }
        }
        let n = outcomes.iter().filter(|&&u| u).count();
        pass_if(true, format!("{} pairs, {n} unitals", pairs.len()))
    });
    if outcomes.len() != pairs.len() {
        return Ok(());
    }
    for (name, cond) in [("printed-condition", wantz_printed as fn(&Field, Elem, Elem) -> bool), ("trace-norm-condition", wantz_derived)] {
        rec.run(name, || {
            let bad: Vec<_> = pairs.iter().zip(&outcomes).filter(|(&(a, b), &u)| cond(f, a, b) != u).collect();
            match bad.first() {
                None => pass_if(true, ""),
                Some((&(a, b), &u)) => failed(format!(
                    "{} of {} pairs disagree; first a={} b={} unital={u}",
                    bad.len(),
                    pairs.len(),
                    f.format(a),
                    f.format(b)
                )),
            }
        });
    }
    Ok(())
}

fn wantz_is_unital(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let f = pl.field();
    let a = parse_elem(f, &params.a, Elem::ZERO)?;
    let b = parse_elem(f, &params.b, Elem::ONE)?;
    let set = make_wantz(&pl, a, b).map_err(invalid)?;
    rec.run("design", || match verify_unital(&pl, &set, &ctx.pool) {
        Ok(r) => pass_if(r.is_unital, design_witness(&pl, &r)),
        Err(e) => failed(e),
    });
    Ok(())
}

fn stabilizer_order(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let u = make_u(&pl, Elem::ONE, 1).map_err(invalid)?;
    let q = params.q as usize;
    rec.run("linear-stabilizer-order", || {
        let g = linear_stabilizer(&pl, u.ids(), &ctx.pool);
        pass_if(g.order() == q * (q * q - 1), format!("order {}", g.order()))
    });
    Ok(())
}

fn structure(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let f = pl.field();
    let q = params.q as usize;
    let u = make_u(&pl, Elem::ONE, 1).map_err(invalid)?;
    let r = match structure_report(&pl, &u, &ctx.pool) {
        Ok(r) => r,
        Err(e) => {
            rec.run("report", || failed(e));
            return Ok(());
        }
    };
    for c in &r.clauses {
        rec.push(&format!("clause-{}", c.name), Status::from_bool(c.holds), None, 0);
    }
    rec.run("C-full", || pass_if(r.c.len() == q * q - 1, format!("|C| = {}", r.c.len())));
    rec.run("D-subfield", || {
        let d: Vec<Elem> = f.subfield(f.degree() / 2).unwrap_or_default().into_iter().filter(|x| !x.is_zero()).collect();
        pass_if(r.d == d, format!("|D| = {}", r.d.len()))
    });
    rec.run("W-line", || match f.constants() {
        Ok(c) => {
            let mut w: Vec<Elem> = f.subfield(f.degree() / 2).unwrap_or_default().into_iter().map(|t| f.mul(t, c.epsilon)).collect();
            w.sort();
            pass_if(r.w == w, "")
        }
        Err(e) => failed(e),
    });
    rec.run("delta-norm", || pass_if(r.delta.iter().all(|&(c, d)| f.norm(c) == d), ""));
    rec.run("r", || pass_if(r.r == q + 1, format!("r = {}", r.r)));
    rec.run("normal-form", || match normal_form(&pl, &r) {
        Ok(n) => pass_if(n.form_holds && n.j == Some(1) && n.backward, format!("j={:?} d={}", n.j, f.format(n.d))),
        Err(e) => failed(e),
    });
    Ok(())
}

fn central_collineations(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let u = make_u(&pl, Elem::ONE, 1).map_err(invalid)?;
    rec.run("axis-type", || {
        let g = linear_stabilizer(&pl, u.ids(), &ctx.pool);
        let a = central_audit(&pl, &u, &g.elements, &ctx.pool);
        let w = match a.violations.first() {
            Some(k) => k.format(&pl),
            None => format!("{} central: {} elations, {} homologies", a.central, a.elations, a.homologies),
        };
        pass_if(a.violations.is_empty() && a.central > 0, w)
    });
    Ok(())
}

fn b_profile(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let f = pl.field();
    rec.run("intersection-sizes", || match b_profiles(&pl, &ctx.pool) {
        Ok(v) => match v.first() {
            None => pass_if(true, ""),
            Some(x) => failed(format!(
                "line {} meets B({},{}) in {}",
                pl.format_line(x.line),
                f.format(x.a),
                f.format(x.b),
                x.count
            )),
        },
        Err(e) => failed(e),
    });
    Ok(())
}

fn u_family(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let j = params.j.unwrap_or(1);
    let r = match family_report(&pl, j, &ctx.pool) {
        Ok(r) => r,
        Err(e) => {
            rec.run("report", || failed(e));
            return Ok(());
        }
    };
    rec.run("strata", || pass_if(r.strata, ""));
    rec.run("intersections", || pass_if(r.intersections, ""));
    rec.run("all-unitals", || pass_if(r.all_unitals, ""));
    for (name, v) in [("tangent-once", r.tangent_once), ("square-split", r.square_split)] {
        rec.run(name, || match v {
            Some(ok) => pass_if(ok, ""),
            None => inapplicable("needs every U(b,j) to be a unital"),
        });
    }
    Ok(())
}

fn v_profiles(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let q = params.q;
    if q % 4 != 3 {
        rec.run("profile", || inapplicable("needs q = 3 mod 4"));
        return Ok(());
    }
    let pl = ctx.np(q)?;
    let f = pl.field();
    let js = match params.j {
        Some(j) => vec![j],
        None => admissible_v(q as u64),
    };
    for j in js {
        let r = match v_profile(&pl, j) {
            Ok(r) => r,
            Err(e) => {
                rec.run(&format!("j={j}"), || failed(e));
                continue;
            }
        };
        let show = |v: Vec<(Elem, Elem, usize)>| {
            v.first().map(|&(c, d, n)| format!("B({},{}) gets {n}", f.format(c), f.format(d))).unwrap_or_default()
        };
        rec.run(&format!("j={j}/first-coordinates"), || {
            let v = r.column_violations(&pl);
            pass_if(v.is_empty(), show(v))
        });
        rec.run(&format!("j={j}/points"), || {
            let v = r.point_violations(&pl);
            pass_if(v.is_empty(), show(v))
        });
    }
    Ok(())
}

fn exclusions(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let js = match params.j {
        Some(j) => vec![j],
        None => exclusion_targets(params.q as u64),
    };
    if js.is_empty() {
        rec.run("not-unital", || inapplicable("no exponent in range"));
    }
    for j in js {
        rec.run(&format!("j={j}/not-unital"), || {
            let set = match make_u(&pl, Elem::ONE, j) {
                Ok(s) => s,
                Err(e) => return failed(e),
            };
            match verify_unital(&pl, &set, &ctx.pool) {
                Ok(r) => pass_if(!r.is_unital && r.witness.is_some(), design_witness(&pl, &r)),
                Err(e) => failed(e),
            }
        });
    }
    Ok(())
}

/// Above this q only configurations through one point are searched.
const FULL_CLASSICAL_SEARCH: u32 = 5;

fn onan_absent_classical(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pg = ctx.pg(params.q)?;
    rec.run("hermitian-search", || {
        let h = match make_hermitian(&pg) {
            Ok(h) => h,
            Err(e) => return failed(e),
        };
        let blocks = Blocks::new(&pg, &h, 2);
        // the unitary group is transitive on the points of the curve, so a
        // configuration anywhere gives one through (0,1,0)
        let full = params.q <= FULL_CLASSICAL_SEARCH;
        let must_contain = (!full).then_some(Point::Vertex);
        let found = find_onan(&pg, &h, &blocks, &Constraints { must_contain, limit: Some(1), ..Default::default() }, &ctx.pool);
        let scope = if full { "full search" } else { "search through (0,1,0)" };
        match found.first() {
            None => pass_if(true, format!("{scope}, {} blocks", blocks.len())),
            Some(c) => failed(format_points(&pg, &c.point_values(&pg))),
        }
    });
    Ok(())
}

fn onan_absent_wantz(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let u = make_u(&pl, Elem::ONE, 1).map_err(invalid)?;
    rec.run("through-vertex", || {
        let blocks = Blocks::new(&pl, &u, 2);
        let c = Constraints { must_contain: Some(Point::Vertex), limit: Some(1), ..Default::default() };
        match find_onan(&pl, &u, &blocks, &c, &ctx.pool).first() {
            None => pass_if(true, ""),
            Some(c) => failed(format_points(&pl, &c.point_values(&pl))),
        }
    });
    rec.run("forced-line", || match check_forced_line(&pl, &u, &ctx.pool) {
        Ok(ok) => pass_if(ok, ""),
        Err(e) => failed(e),
    });
    Ok(())
}

fn obstruction_checks(rec: &mut Recorder, pl: &Plane, tag: &str, o: Result<Obstruction, OnanError>, small: bool) {
    match o {
        Ok(o) => {
            rec.run(&format!("{tag}/configuration"), || {
                let ok = o.config.contains_point(pl.point_id(Point::Vertex)) && !o.config.has_class(pl, LineClass::Horizontal);
                pass_if(ok, format_points(pl, &o.config.point_values(pl)))
            });
            rec.run(&format!("{tag}/construction"), || match o.path {
                ObstructionPath::Construction => pass_if(o.ratio_certified, ""),
                ObstructionPath::Search => inapplicable(o.fallback_reason.unwrap_or("construction failed")),
            });
        }
        Err(OnanError::NoObstructionFound(Some(why))) if small => {
            rec.run(&format!("{tag}/configuration"), || inapplicable(why));
        }
        Err(e) => rec.run(&format!("{tag}/configuration"), || failed(e)),
    }
}

fn onan_obstructions(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let q = params.q;
    let pl = ctx.np(q)?;
    let uj = match params.j {
        Some(j) => vec![j],
        None => exclusion_targets(q as u64),
    };
    if uj.is_empty() {
        rec.run("U/configuration", || inapplicable("no exponent in range"));
    }
    for j in uj {
        obstruction_checks(rec, &pl, &format!("U(j={j})"), uj_obstruction(&pl, j, &ctx.pool), false);
    }
    if q % 4 != 3 {
        rec.run("V/configuration", || inapplicable("needs q = 3 mod 4"));
        return Ok(());
    }
    let vj = match params.j {
        Some(j) => vec![j],
        None => admissible_v(q as u64),
    };
    for j in vj {
        obstruction_checks(rec, &pl, &format!("V(j={j})"), vj_obstruction(&pl, j, &ctx.pool), q < 7);
    }
    Ok(())
}

fn trace(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let pl = ctx.np(params.q)?;
    let f = pl.field();
    let anchors: Vec<(Elem, Elem)> = if params.q == 3 {
        f.elements().flat_map(|x| f.elements().map(move |y| (x, y))).collect()
    } else {
        vec![(Elem::ZERO, Elem::ZERO), (f.primitive(), Elem::ONE)]
    };
    rec.run("ratio-iff-trace", || {
        let r = trace_criterion(&pl, &anchors, &ctx.pool);
        pass_if(
            r.violations == 0 && r.hypothesis > 0,
            format!("{} configurations, {} under the hypothesis, {} violations", r.configs, r.hypothesis, r.violations),
        )
    });
    Ok(())
}

fn poly_suite(ctx: &Ctx, params: &Params, rec: &mut Recorder) -> Result<(), ForgeError> {
    let (p, e) = odd_prime_power(params.q).ok_or_else(|| invalid("q"))?;
    let f = ctx.field(p, e)?;
    let q = params.q as u64;
    let p = p as u64;
    rec.run("matthews", || {
        for k in 1..=2 * p * (q - 1) {
            match hk_is_permutation(&f, k) {
                Ok(perm) if perm == matthews(&f, k) => {}
                Ok(perm) => return failed(format!("k={k}: permutation={perm}")),
                Err(e) => return failed(e),
            }
        }
        pass_if(true, format!("k = 1..={}", 2 * p * (q - 1)))
    });
    rec.run("wan-bound", || {
        for k in 1..q {
            match hk_value_set(&f, k) {
                Ok(a) if a.wan_holds => {}
                Ok(a) => return failed(format!("k={k}: |V|={} bound {:?}", a.value_set_size, a.wan_bound)),
                Err(e) => return failed(e),
            }
        }
        pass_if(true, "")
    });
    let ks: Vec<u64> = (2..q - 1).filter(|&k| gcd(k, q - 1) == 1).collect();
    rec.run("collisions", || {
        if ks.is_empty() {
            return inapplicable("no k with 1 < k < q-1 coprime to q-1");
        }
        let mut found = Vec::new();
        for &k in &ks {
            match hk_find_collision(&f, k) {
                Ok((a, b)) => found.push(format!("k={k}: ({},{})", f.format(a), f.format(b))),
                Err(e) => return failed(e),
            }
        }
        pass_if(true, found.join(", "))
    });
    Ok(())
}
