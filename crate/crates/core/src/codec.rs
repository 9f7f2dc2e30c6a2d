//! JSON descriptors for all exchanged objects. Coefficient arrays are
//! ascending-degree over F_p; ring descriptors carry the modulus so output
//! is bit-reproducible.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::local::LocalShtuka;
use crate::pmat::PolyMat;
use crate::poly::Poly;
use crate::ring::{CoeffRing, RingElem, RingKind};
use crate::shtuka::{FinShtuka, GroupSchemePresentation};
use crate::skew::{SkewMat, SkewPoly};
use crate::tmodule::{TModule, TModuleMorphism};
use crate::tmotive::{MotiveMorphism, TMotive};

fn bad(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}

pub fn elem_to_json(e: &RingElem) -> Value {
    Value::Array(e.coeffs.iter().map(|&c| json!(c)).collect())
}

pub fn elem_from_json(ring: &CoeffRing, v: &Value) -> Result<RingElem> {
    let arr = v.as_array().ok_or_else(|| bad("ring element must be an array"))?;
    let coeffs: Vec<u32> = arr
        .iter()
        .map(|x| {
            x.as_u64()
                .filter(|&c| c < ring.p() as u64)
                .map(|c| c as u32)
                .ok_or_else(|| bad("coordinate out of range"))
        })
        .collect::<Result<_>>()?;
    if coeffs.len() != ring.dim() {
        return Err(bad(&format!(
            "element has {} coordinates, ring needs {}",
            coeffs.len(),
            ring.dim()
        )));
    }
    Ok(RingElem::new(coeffs))
}

pub fn ring_to_json(ring: &CoeffRing) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), json!(ring.p()));
    m.insert("q".into(), json!(ring.q()));
    match ring.kind() {
        RingKind::FiniteField => {
            m.insert("kind".into(), json!("finite_field"));
        }
        RingKind::Truncated { nil_index } => {
            m.insert("kind".into(), json!("truncated"));
            m.insert("nil_index".into(), json!(nil_index));
        }
    }
    m.insert("degree".into(), json!(ring.field_degree()));
    m.insert(
        "modulus".into(),
        Value::Array(ring.modulus().iter().map(|&c| json!(c)).collect()),
    );
    m.insert("theta".into(), elem_to_json(&ring.theta()));
    Value::Object(m)
}

pub fn ring_from_json(v: &Value) -> Result<CoeffRing> {
    let obj = v.as_object().ok_or_else(|| bad("ring descriptor must be an object"))?;
    let p = obj
        .get("p")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| bad("missing prime p"))? as u32;
    let q = obj
        .get("q")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| bad("missing q"))?;
    let modulus: Vec<u32> = obj
        .get("modulus")
        .and_then(|x| x.as_array())
        .ok_or_else(|| bad("missing modulus"))?
        .iter()
        .map(|x| x.as_u64().map(|c| c as u32).ok_or_else(|| bad("bad modulus entry")))
        .collect::<Result<_>>()?;
    let theta: Vec<u32> = obj
        .get("theta")
        .and_then(|x| x.as_array())
        .ok_or_else(|| bad("missing theta"))?
        .iter()
        .map(|x| x.as_u64().map(|c| c as u32).ok_or_else(|| bad("bad theta entry")))
        .collect::<Result<_>>()?;
    let kind = obj
        .get("kind")
        .and_then(|x| x.as_str())
        .ok_or_else(|| bad("missing kind"))?;
    let ring = match kind {
        "finite_field" => CoeffRing::finite_field(p, q, modulus, theta)?,
        "truncated" => {
            let n = obj
                .get("nil_index")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| bad("truncated kind needs nil_index"))? as usize;
            CoeffRing::truncated(p, q, modulus, n, theta)?
        }
        other => return Err(bad(&format!("unknown ring kind '{}'", other))),
    };
    if let Some(d) = obj.get("degree").and_then(|x| x.as_u64()) {
        if d as usize != ring.field_degree() {
            return Err(bad("declared degree does not match the modulus"));
        }
    }
    Ok(ring)
}

pub fn skew_to_json(s: &SkewPoly) -> Value {
    json!({ "coeffs": s.coeffs.iter().map(elem_to_json).collect::<Vec<_>>() })
}

pub fn skew_from_json(ring: &CoeffRing, v: &Value) -> Result<SkewPoly> {
    let arr = v
        .get("coeffs")
        .and_then(|x| x.as_array())
        .ok_or_else(|| bad("skew polynomial needs a coeffs array"))?;
    let coeffs = arr
        .iter()
        .map(|c| elem_from_json(ring, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(SkewPoly::new(ring, coeffs))
}

pub fn skew_mat_to_json(m: &SkewMat) -> Value {
    let mut rows = vec![];
    for i in 0..m.rows {
        let row: Vec<Value> = (0..m.cols).map(|j| skew_to_json(&m[(i, j)])).collect();
        rows.push(Value::Array(row));
    }
    Value::Array(rows)
}

pub fn skew_mat_from_json(ring: &CoeffRing, v: &Value) -> Result<SkewMat> {
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    let nrows = rows.len();
    if nrows == 0 {
        return Err(bad("matrix must be nonempty"));
    }
    let mut data = vec![];
    let mut ncols = None;
    for row in rows {
        let cells = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
        match ncols {
            None => ncols = Some(cells.len()),
            Some(c) if c != cells.len() => return Err(bad("ragged matrix")),
            _ => {}
        }
        for c in cells {
            data.push(skew_from_json(ring, c)?);
        }
    }
    Ok(SkewMat::new(nrows, ncols.unwrap(), data))
}

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs.iter().map(elem_to_json).collect())
}

pub fn poly_from_json(ring: &CoeffRing, v: &Value) -> Result<Poly> {
    let arr = v.as_array().ok_or_else(|| bad("polynomial must be an array"))?;
    let coeffs = arr
        .iter()
        .map(|c| elem_from_json(ring, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(ring, coeffs))
}

pub fn poly_mat_to_json(m: &PolyMat) -> Value {
    let mut rows = vec![];
    for i in 0..m.rows {
        let row: Vec<Value> = (0..m.cols).map(|j| poly_to_json(&m[(i, j)])).collect();
        rows.push(Value::Array(row));
    }
    Value::Array(rows)
}

pub fn poly_mat_from_json(ring: &CoeffRing, v: &Value) -> Result<PolyMat> {
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    let nrows = rows.len();
    if nrows == 0 {
        return Err(bad("matrix must be nonempty"));
    }
    let mut data = vec![];
    let mut ncols = None;
    for row in rows {
        let cells = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
        match ncols {
            None => ncols = Some(cells.len()),
            Some(c) if c != cells.len() => return Err(bad("ragged matrix")),
            _ => {}
        }
        for c in cells {
            data.push(poly_from_json(ring, c)?);
        }
    }
    Ok(PolyMat::new(nrows, ncols.unwrap(), data))
}

pub fn tmodule_to_json(e: &TModule) -> Value {
    json!({
        "ring": ring_to_json(&e.ring),
        "d": e.dim,
        "phi_t": skew_mat_to_json(&e.phi_t),
    })
}

pub fn tmodule_from_json(v: &Value) -> Result<TModule> {
    let ring = ring_from_json(v.get("ring").ok_or_else(|| bad("module needs a ring"))?)?;
    let phi = skew_mat_from_json(
        &ring,
        v.get("phi_t").ok_or_else(|| bad("module needs phi_t"))?,
    )?;
    if let Some(d) = v.get("d").and_then(|x| x.as_u64()) {
        if d as usize != phi.rows {
            return Err(bad("declared dimension does not match phi_t"));
        }
    }
    TModule::new(&ring, phi)
}

pub fn tmodule_morphism_to_json(f: &TModuleMorphism) -> Value {
    json!({
        "from": tmodule_to_json(&f.source),
        "to": tmodule_to_json(&f.target),
        "F": skew_mat_to_json(&f.mat),
    })
}

pub fn tmodule_morphism_from_json(v: &Value) -> Result<TModuleMorphism> {
    let source = tmodule_from_json(v.get("from").ok_or_else(|| bad("morphism needs 'from'"))?)?;
    let target = tmodule_from_json(v.get("to").ok_or_else(|| bad("morphism needs 'to'"))?)?;
    let mat = skew_mat_from_json(
        &source.ring,
        v.get("F").ok_or_else(|| bad("morphism needs F"))?,
    )?;
    TModuleMorphism::new(&source, &target, mat)
}

pub fn tmotive_to_json(m: &TMotive) -> Value {
    json!({
        "ring": ring_to_json(&m.ring),
        "r": m.rank,
        "T": poly_mat_to_json(&m.tmat),
    })
}

pub fn tmotive_from_json(v: &Value) -> Result<TMotive> {
    let ring = ring_from_json(v.get("ring").ok_or_else(|| bad("motive needs a ring"))?)?;
    let tmat = poly_mat_from_json(&ring, v.get("T").ok_or_else(|| bad("motive needs T"))?)?;
    if let Some(r) = v.get("r").and_then(|x| x.as_u64()) {
        if r as usize != tmat.rows {
            return Err(bad("declared rank does not match T"));
        }
    }
    TMotive::new(&ring, tmat)
}

pub fn motive_morphism_to_json(f: &MotiveMorphism) -> Value {
    json!({
        "from": tmotive_to_json(&f.source),
        "to": tmotive_to_json(&f.target),
        "U": poly_mat_to_json(&f.mat),
    })
}

pub fn motive_morphism_from_json(v: &Value) -> Result<MotiveMorphism> {
    let source = tmotive_from_json(v.get("from").ok_or_else(|| bad("morphism needs 'from'"))?)?;
    let target = tmotive_from_json(v.get("to").ok_or_else(|| bad("morphism needs 'to'"))?)?;
    let mat = poly_mat_from_json(
        &source.ring,
        v.get("U").ok_or_else(|| bad("morphism needs U"))?,
    )?;
    MotiveMorphism::new(&source, &target, mat)
}

fn ring_matrix_to_json(n: usize, data: &[RingElem]) -> Value {
    let mut rows = vec![];
    for i in 0..n {
        let row: Vec<Value> = (0..n).map(|j| elem_to_json(&data[i * n + j])).collect();
        rows.push(Value::Array(row));
    }
    Value::Array(rows)
}

fn ring_matrix_from_json(ring: &CoeffRing, v: &Value) -> Result<(usize, Vec<RingElem>)> {
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array"))?;
    let n = rows.len();
    let mut data = vec![];
    for row in rows {
        let cells = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
        if cells.len() != n {
            return Err(bad("matrix must be square"));
        }
        for c in cells {
            data.push(elem_from_json(ring, c)?);
        }
    }
    Ok((n, data))
}

pub fn fin_shtuka_to_json(v: &FinShtuka) -> Value {
    let mut m = Map::new();
    m.insert("ring".into(), ring_to_json(&v.ring));
    m.insert("n".into(), json!(v.dim));
    m.insert("F".into(), ring_matrix_to_json(v.dim, &v.fmat));
    if let Some(t) = &v.t_action {
        m.insert("t_action".into(), ring_matrix_to_json(v.dim, t));
    }
    Value::Object(m)
}

pub fn fin_shtuka_from_json(v: &Value) -> Result<FinShtuka> {
    let ring = ring_from_json(v.get("ring").ok_or_else(|| bad("shtuka needs a ring"))?)?;
    let (n, fmat) = ring_matrix_from_json(&ring, v.get("F").ok_or_else(|| bad("shtuka needs F"))?)?;
    let t_action = match v.get("t_action") {
        None | Some(Value::Null) => None,
        Some(t) => {
            let (nt, tm) = ring_matrix_from_json(&ring, t)?;
            if nt != n {
                return Err(bad("t_action has wrong size"));
            }
            Some(tm)
        }
    };
    if let Some(decl) = v.get("n").and_then(|x| x.as_u64()) {
        if decl as usize != n {
            return Err(bad("declared size does not match F"));
        }
    }
    FinShtuka::new_with_t_action(&ring, n, fmat, t_action)
}

pub fn presentation_to_json(g: &GroupSchemePresentation) -> Value {
    json!({
        "ring": ring_to_json(&g.ring),
        "n": g.n,
        "C": ring_matrix_to_json(g.n, &g.cmat),
    })
}

pub fn presentation_from_json(v: &Value) -> Result<GroupSchemePresentation> {
    let ring = ring_from_json(v.get("ring").ok_or_else(|| bad("presentation needs a ring"))?)?;
    let (n, cmat) =
        ring_matrix_from_json(&ring, v.get("C").ok_or_else(|| bad("presentation needs C"))?)?;
    Ok(GroupSchemePresentation { ring, n, cmat })
}

pub fn local_shtuka_to_json(l: &LocalShtuka) -> Value {
    let mut rows = vec![];
    for i in 0..l.rank {
        let mut row = vec![];
        for j in 0..l.rank {
            let series: Vec<Value> = l.tauhat[(i, j)].coeffs.iter().map(elem_to_json).collect();
            row.push(Value::Array(series));
        }
        rows.push(Value::Array(row));
    }
    json!({
        "ring": ring_to_json(&l.ring),
        "p": poly_to_json(&l.eps),
        "n": l.precision,
        "Mhat_rank": l.rank,
        "Tauhat": Value::Array(rows),
        "omega": Value::Array(l.omega.coeffs.iter().map(elem_to_json).collect()),
    })
}
