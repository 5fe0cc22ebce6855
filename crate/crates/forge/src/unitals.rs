//! Building point sets by family name, and the unital JSON file format
//! `{"q", "family", "params", "points": [[x, y, z], ...]}`.

use std::rc::Rc;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use unital_core::unital::{make_b, make_hermitian, make_u, make_v, make_wantz};
use unital_core::{Elem, Plane, PointSet};

use crate::experiments::{Ctx, ForgeError, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Family {
    #[value(name = "hermitian")]
    #[serde(rename = "hermitian")]
    Hermitian,
    #[value(name = "wantz")]
    #[serde(rename = "wantz")]
    Wantz,
    U,
    V,
    B,
}

impl Family {
    /// B(a, b) is a stratum, not a unital candidate.
    pub fn is_candidate(self) -> bool {
        self != Family::B
    }
}

pub struct Built {
    pub plane: Rc<Plane>,
    pub set: PointSet,
    /// The parameters actually used, with defaults filled in.
    pub params: Value,
}

fn elem(plane: &Plane, text: &Option<String>, default: Elem) -> Result<Elem, ForgeError> {
    match text {
        Some(t) => plane.field().parse(t).map_err(|e| ForgeError::InvalidParameters(format!("{t:?}: {e}"))),
        None => Ok(default),
    }
}

pub fn build(ctx: &Ctx, family: Family, params: &Params) -> Result<Built, ForgeError> {
    let bad = |e: unital_core::unital::UnitalError| ForgeError::InvalidParameters(e.to_string());
    let q = params.q;
    let plane = if family == Family::Hermitian { ctx.pg(q)? } else { ctx.np(q)? };
    let f = plane.field();
    let (set, used) = match family {
        Family::Hermitian => (make_hermitian(&plane).map_err(bad)?, json!({})),
        Family::Wantz => {
            let a = elem(&plane, &params.a, Elem::ZERO)?;
            let b = elem(&plane, &params.b, Elem::ONE)?;
            (make_wantz(&plane, a, b).map_err(bad)?, json!({ "a": f.format(a), "b": f.format(b) }))
        }
        Family::U => {
            let b = elem(&plane, &params.b, Elem::ONE)?;
            let j = params.j.unwrap_or(1);
            (make_u(&plane, b, j).map_err(bad)?, json!({ "b": f.format(b), "j": j }))
        }
        Family::V => {
            let j = params.j.unwrap_or(1);
            (make_v(&plane, j).map_err(bad)?, json!({ "j": j }))
        }
        Family::B => {
            let a = elem(&plane, &params.a, Elem::ZERO)?;
            let b = elem(&plane, &params.b, Elem::ZERO)?;
            (make_b(&plane, a, b).map_err(bad)?, json!({ "a": f.format(a), "b": f.format(b) }))
        }
    };
    Ok(Built { plane, set, params: used })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitalFile {
    pub q: u32,
    pub family: Family,
    pub params: Value,
    pub points: Vec<[u32; 3]>,
}

impl UnitalFile {
    pub fn from_built(q: u32, family: Family, built: &Built) -> UnitalFile {
        let pl = &built.plane;
        let points = built.set.points(pl).into_iter().map(|p| pl.coordinates(p)).collect();
        UnitalFile { q, family, params: built.params.clone(), points }
    }

    /// Recovers the build parameters recorded in the file.
    pub fn build_params(&self) -> Params {
        let text = |k: &str| self.params.get(k).and_then(Value::as_str).map(str::to_string);
        Params { q: self.q, j: self.params.get("j").and_then(Value::as_u64), a: text("a"), b: text("b") }
    }

    /// The point set in `plane`; fails on a triple that names no point.
    pub fn point_set(&self, plane: &Plane) -> Result<PointSet, ForgeError> {
        let pts = self
            .points
            .iter()
            .map(|&c| plane.from_coordinates(c).ok_or_else(|| ForgeError::InvalidParameters(format!("no point {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PointSet::from_points(plane, pts))
    }
}
