//! Workspace files: an algebra, named modules and named certificates in JSON.
//!
//! Field elements are decimal strings (`"3"`, `"-1/2"`). Matrices are
//! `{"rows": r, "cols": c, "data": [...]}` with `data` row-major. Every
//! schema violation is reported with the JSON pointer of the offending value.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraPresentation, LocalAlgebra, Polynomial};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::invariants::canonical_module;
use crate::module::{syzygy, Module};
use crate::reducing::{ReducingSequence, ReducingStep, Target};
use crate::scalar::Scalar;

pub const WORKSPACE_VERSION: &str = "rhdim-workspace/1";

/// Which field a workspace is over, read before anything generic happens.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Fp(u64),
    Q,
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Fp(p) => write!(f, "F{p}"),
            FieldSpec::Q => write!(f, "Q"),
        }
    }
}

fn schema(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.to_string(), message: message.into() }
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

fn child(pointer: &str, token: impl std::fmt::Display) -> String {
    format!("{pointer}/{}", escape(&token.to_string()))
}

fn object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(at, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(&child(at, key), "missing field"))
}

fn uint(v: &Value, at: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema(at, "expected a non-negative integer"))
}

fn string<'a>(v: &'a Value, at: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(at, "expected a string"))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(at, "expected an array"))
}

fn scalar<S: Scalar>(v: &Value, at: &str) -> Result<S> {
    let s = string(v, at)?;
    S::parse_str(s).map_err(|e| schema(at, e.to_string()))
}

/// Read the field of a workspace document.
pub fn field_spec(doc: &Value) -> Result<FieldSpec> {
    let root = object(doc, "")?;
    let alg = object(field(root, "algebra", "")?, "/algebra")?;
    let name = string(field(alg, "field", "/algebra")?, "/algebra/field")?;
    match name {
        "Q" => Ok(FieldSpec::Q),
        "Fp" => {
            let p = field(alg, "p", "/algebra")?
                .as_u64()
                .ok_or_else(|| schema("/algebra/p", "expected a prime"))?;
            Ok(FieldSpec::Fp(p))
        }
        other => Err(schema("/algebra/field", format!("unknown field `{other}`, expected \"Fp\" or \"Q\""))),
    }
}

pub fn matrix_from_json<S: Scalar>(v: &Value, at: &str) -> Result<Matrix<S>> {
    let obj = object(v, at)?;
    let rows = uint(field(obj, "rows", at)?, &child(at, "rows"))?;
    let cols = uint(field(obj, "cols", at)?, &child(at, "cols"))?;
    let data_at = child(at, "data");
    let data = array(field(obj, "data", at)?, &data_at)?;
    if data.len() != rows * cols {
        return Err(schema(&data_at, format!("{} entries for a {rows}x{cols} matrix", data.len())));
    }
    let entries = data
        .iter()
        .enumerate()
        .map(|(i, e)| scalar(e, &child(&data_at, i)))
        .collect::<Result<Vec<S>>>()?;
    Matrix::from_vec(rows, cols, entries)
}

pub fn matrix_to_json<S: Scalar>(m: &Matrix<S>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "data": m.data().iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>(),
    })
}

/// A module in actions form: one `dim x dim` matrix per variable.
pub fn module_to_json<S: Scalar>(m: &Module<S>) -> Value {
    json!({
        "kind": "actions",
        "dim": m.dim(),
        "actions": m.variable_actions().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn certificate_to_json<S: Scalar>(seq: &ReducingSequence<S>) -> Value {
    let steps: Vec<Value> = seq
        .steps
        .iter()
        .map(|s| {
            json!({
                "a": s.a,
                "b": s.b,
                "n": s.n,
                "module": module_to_json(&s.module),
                "alpha": matrix_to_json(&s.alpha),
                "quotient": module_to_json(&s.quotient),
                "beta": matrix_to_json(&s.beta),
                "iso": matrix_to_json(&s.iso),
            })
        })
        .collect();
    json!({
        "target": seq.target.to_string(),
        "base": module_to_json(&seq.base),
        "steps": steps,
    })
}

/// A parsed workspace over a fixed field.
pub struct Workspace<S: Scalar> {
    pub field: FieldSpec,
    pub algebra: Arc<LocalAlgebra<S>>,
    pub relations: Vec<String>,
    pub modules: BTreeMap<String, Module<S>>,
    pub certificates: BTreeMap<String, ReducingSequence<S>>,
}

impl<S: Scalar> Workspace<S> {
    pub fn from_json_str(src: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(src).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
        Self::from_value(&doc)
    }

    pub fn from_value(doc: &Value) -> Result<Self> {
        let root = object(doc, "")?;
        let version = string(field(root, "version", "")?, "/version")?;
        if version != WORKSPACE_VERSION {
            return Err(schema("/version", format!("unsupported version `{version}`, expected `{WORKSPACE_VERSION}`")));
        }
        let field = field_spec(doc)?;
        let expected = match field {
            FieldSpec::Q => 0,
            FieldSpec::Fp(p) => p,
        };
        if S::characteristic() != expected {
            return Err(schema("/algebra/field", format!("workspace is over {field}, requested another field")));
        }
        let (algebra, relations) = parse_algebra::<S>(field_value(root, "algebra")?)?;
        let mut ws = Workspace { field, algebra, relations, modules: BTreeMap::new(), certificates: BTreeMap::new() };
        if let Some(mods) = root.get("modules") {
            let mods = object(mods, "/modules")?;
            let mut building = HashSet::new();
            for name in mods.keys() {
                ws.resolve_module(mods, name, &mut building)?;
            }
        }
        if let Some(certs) = root.get("certificates") {
            for (name, v) in object(certs, "/certificates")? {
                let at = child("/certificates", name);
                let seq = ws.parse_certificate(v, &at)?;
                ws.certificates.insert(name.clone(), seq);
            }
        }
        Ok(ws)
    }

    pub fn module(&self, name: &str) -> Result<&Module<S>> {
        self.modules
            .get(name)
            .ok_or_else(|| schema("/modules", format!("no module named `{name}`")))
    }

    pub fn certificate(&self, name: &str) -> Result<&ReducingSequence<S>> {
        self.certificates
            .get(name)
            .ok_or_else(|| schema("/certificates", format!("no certificate named `{name}`")))
    }

    fn resolve_module(&mut self, mods: &Map<String, Value>, name: &str, building: &mut HashSet<String>) -> Result<Module<S>> {
        if let Some(m) = self.modules.get(name) {
            return Ok(m.clone());
        }
        let at = child("/modules", name);
        let v = mods.get(name).ok_or_else(|| schema(&at, "referenced module is not defined"))?;
        if !building.insert(name.to_string()) {
            return Err(schema(&at, "module definitions form a cycle"));
        }
        let m = self.parse_module(v, &at, &mut |ws, other, at2| {
            if !mods.contains_key(other) {
                return Err(schema(at2, format!("unknown module `{other}`")));
            }
            ws.resolve_module(mods, other, building)
        })?;
        self.modules.insert(name.to_string(), m.clone());
        Ok(m)
    }

    /// Parse a module object; `lookup` resolves names used by `sum` and `syzygy`.
    fn parse_module(
        &mut self,
        v: &Value,
        at: &str,
        lookup: &mut dyn FnMut(&mut Self, &str, &str) -> Result<Module<S>>,
    ) -> Result<Module<S>> {
        let obj = object(v, at)?;
        let kind = string(field(obj, "kind", at)?, &child(at, "kind"))?;
        let a = self.algebra.clone();
        let wrap = |e: Error, at: &str| match e {
            Error::Schema { .. } => e,
            other => schema(at, other.to_string()),
        };
        match kind {
            "free" => {
                let rank = match obj.get("rank") {
                    Some(r) => uint(r, &child(at, "rank"))?,
                    None => 1,
                };
                Ok(Module::free(&a, rank))
            }
            "simple" => Ok(Module::simple(&a)),
            "canonical" => Ok(canonical_module(&a)),
            "cyclic" => {
                let p_at = child(at, "element");
                let f = self.element(field(obj, "element", at)?, &p_at)?;
                Ok(Module::cyclic_quotient(&a, &f))
            }
            "presentation" => {
                let g_at = child(at, "generators");
                let g = uint(field(obj, "generators", at)?, &g_at)?;
                let r_at = child(at, "relations");
                let rels = array(field(obj, "relations", at)?, &r_at)?;
                let mut cols = Vec::with_capacity(rels.len());
                for (j, rel) in rels.iter().enumerate() {
                    let c_at = child(&r_at, j);
                    let entries = array(rel, &c_at)?;
                    if entries.len() != g {
                        return Err(schema(&c_at, format!("relation has {} entries for {g} generators", entries.len())));
                    }
                    cols.push(
                        entries
                            .iter()
                            .enumerate()
                            .map(|(i, e)| self.element(e, &child(&c_at, i)))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                Module::from_presentation(&a, g, &cols).map_err(|e| wrap(e, at))
            }
            "actions" => {
                let d = uint(field(obj, "dim", at)?, &child(at, "dim"))?;
                let acts_at = child(at, "actions");
                let acts = array(field(obj, "actions", at)?, &acts_at)?;
                if acts.len() != a.num_vars() {
                    return Err(schema(&acts_at, format!("{} matrices for {} variables", acts.len(), a.num_vars())));
                }
                let mats = acts
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let m_at = child(&acts_at, i);
                        let mat = matrix_from_json::<S>(m, &m_at)?;
                        if mat.rows() != d || mat.cols() != d {
                            return Err(schema(&m_at, format!("expected a {d}x{d} matrix")));
                        }
                        Ok(mat)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Module::from_variable_actions(&a, d, mats).map_err(|e| wrap(e, at))
            }
            "sum" => {
                let s_at = child(at, "summands");
                let names = array(field(obj, "summands", at)?, &s_at)?;
                let mut parts = Vec::with_capacity(names.len());
                for (i, n) in names.iter().enumerate() {
                    let n_at = child(&s_at, i);
                    parts.push(lookup(self, string(n, &n_at)?, &n_at)?);
                }
                Ok(Module::direct_sum(&a, &parts))
            }
            "syzygy" => {
                let o_at = child(at, "of");
                let base = lookup(self, string(field(obj, "of", at)?, &o_at)?, &o_at)?;
                let n = match obj.get("n") {
                    Some(n) => uint(n, &child(at, "n"))?,
                    None => 1,
                };
                syzygy(&base, n).map_err(|e| wrap(e, at))
            }
            other => Err(schema(
                &child(at, "kind"),
                format!("unknown kind `{other}`, expected free, simple, cyclic, presentation, actions, sum, syzygy or canonical"),
            )),
        }
    }

    fn element(&self, v: &Value, at: &str) -> Result<Vec<S>> {
        let src = string(v, at)?;
        let p = Polynomial::parse(src, self.algebra.var_names()).map_err(|e| schema(at, e.to_string()))?;
        Ok(self.algebra.eval(&p))
    }

    fn parse_certificate(&mut self, v: &Value, at: &str) -> Result<ReducingSequence<S>> {
        let obj = object(v, at)?;
        let t_at = child(at, "target");
        let target: Target = string(field(obj, "target", at)?, &t_at)?
            .parse()
            .map_err(|e: Error| schema(&t_at, e.to_string()))?;
        let b_at = child(at, "base");
        let base = match field(obj, "base", at)? {
            Value::String(name) => self.modules.get(name).cloned().ok_or_else(|| schema(&b_at, format!("unknown module `{name}`")))?,
            other => self.inline_module(other, &b_at)?,
        };
        let s_at = child(at, "steps");
        let steps = array(field(obj, "steps", at)?, &s_at)?;
        let mut out = Vec::with_capacity(steps.len());
        for (i, s) in steps.iter().enumerate() {
            let at = child(&s_at, i);
            let o = object(s, &at)?;
            let num = |k: &str| -> Result<usize> { uint(field(o, k, &at)?, &child(&at, k)) };
            let (a, b, n) = (num("a")?, num("b")?, num("n")?);
            let module = self.inline_module(field(o, "module", &at)?, &child(&at, "module"))?;
            let quotient = self.inline_module(field(o, "quotient", &at)?, &child(&at, "quotient"))?;
            let mat = |k: &str| -> Result<Matrix<S>> { matrix_from_json(field(o, k, &at)?, &child(&at, k)) };
            let (alpha, beta, iso) = (mat("alpha")?, mat("beta")?, mat("iso")?);
            out.push(ReducingStep { a, b, n, module, alpha, quotient, beta, iso });
        }
        Ok(ReducingSequence { base, target, steps: out })
    }

    /// Modules inside certificates may not refer to other modules by name.
    fn inline_module(&mut self, v: &Value, at: &str) -> Result<Module<S>> {
        self.parse_module(v, at, &mut |_, other, at2| {
            Err(schema(at2, format!("certificate modules are self-contained; `{other}` is a reference")))
        })
    }

    /// Serialize back to a workspace document, with every module in actions form.
    pub fn to_json(&self) -> Value {
        let (field, p) = match self.field {
            FieldSpec::Q => ("Q", Value::Null),
            FieldSpec::Fp(p) => ("Fp", json!(p)),
        };
        let mut alg = json!({
            "field": field,
            "vars": self.algebra.var_names(),
            "nilpotency": self.algebra.nilpotency(),
            "relations": self.relations,
        });
        if !p.is_null() {
            alg["p"] = p;
        }
        json!({
            "version": WORKSPACE_VERSION,
            "algebra": alg,
            "modules": self.modules.iter().map(|(k, m)| (k.clone(), module_to_json(m))).collect::<Map<_, _>>(),
            "certificates": self.certificates.iter().map(|(k, c)| (k.clone(), certificate_to_json(c))).collect::<Map<_, _>>(),
        })
    }
}

fn field_value<'a>(root: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    field(root, key, "")
}

fn parse_algebra<S: Scalar>(v: &Value) -> Result<(Arc<LocalAlgebra<S>>, Vec<String>)> {
    let at = "/algebra";
    let obj = object(v, at)?;
    let vars_v = array(field(obj, "vars", at)?, "/algebra/vars")?;
    let vars = vars_v
        .iter()
        .enumerate()
        .map(|(i, x)| string(x, &child("/algebra/vars", i)).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let nil = field(obj, "nilpotency", at)?
        .as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| schema("/algebra/nilpotency", "expected a positive integer"))?;
    let rel_v = match obj.get("relations") {
        Some(r) => array(r, "/algebra/relations")?.clone(),
        None => Vec::new(),
    };
    let mut rels = Vec::with_capacity(rel_v.len());
    let mut polys = Vec::with_capacity(rel_v.len());
    for (i, r) in rel_v.iter().enumerate() {
        let r_at = child("/algebra/relations", i);
        let s = string(r, &r_at)?;
        polys.push(Polynomial::parse(s, &vars).map_err(|e| schema(&r_at, e.to_string()))?);
        rels.push(s.to_string());
    }
    let pres = AlgebraPresentation { var_names: vars, nilpotency: nil, relations: polys };
    let alg = LocalAlgebra::build(&pres).map_err(|e| schema(at, e.to_string()))?;
    Ok((alg, rels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reducing::verify;
    use crate::F2;

    const PLANE: &str = r#"{
        "version": "rhdim-workspace/1",
        "algebra": {"field": "Fp", "p": 2, "vars": ["x", "y"], "nilpotency": 2, "relations": []},
        "modules": {
            "k": {"kind": "simple"},
            "R": {"kind": "free"},
            "C": {"kind": "cyclic", "element": "x"},
            "S": {"kind": "sum", "summands": ["k", "R"]},
            "W": {"kind": "syzygy", "of": "k", "n": 2}
        }
    }"#;

    #[test]
    fn loads_and_round_trips() {
        let ws = Workspace::<F2>::from_json_str(PLANE).unwrap();
        assert_eq!(ws.module("k").unwrap().dim(), 1);
        assert_eq!(ws.module("C").unwrap().dim(), 2);
        assert_eq!(ws.module("S").unwrap().dim(), 4);
        assert_eq!(ws.module("W").unwrap().dim(), 4);
        let again = Workspace::<F2>::from_value(&ws.to_json()).unwrap();
        for (name, m) in &ws.modules {
            assert_eq!(&again.modules[name].variable_actions(), &m.variable_actions());
        }
    }

    #[test]
    fn certificate_round_trip() {
        let mut ws = Workspace::<F2>::from_json_str(PLANE).unwrap();
        let cert = crate::corpus::rebase_certificate(&crate::corpus::plane_certificate().unwrap(), &ws.algebra).unwrap();
        ws.certificates.insert("cert_k".into(), cert);
        let again = Workspace::<F2>::from_value(&ws.to_json()).unwrap();
        assert!(verify(again.certificate("cert_k").unwrap(), 10).unwrap().accepted());
    }

    #[test]
    fn pointers_locate_errors() {
        let bad = PLANE.replace(r#""element": "x""#, r#""element": "z""#);
        match Workspace::<F2>::from_json_str(&bad) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/modules/C/element"),
            other => panic!("{:?}", other.err()),
        }
        let bad = PLANE.replace(r#"["k", "R"]"#, r#"["k", "Q"]"#);
        match Workspace::<F2>::from_json_str(&bad) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/modules/S/summands/1"),
            other => panic!("{:?}", other.err()),
        }
        let bad = PLANE.replace(r#""p": 2"#, r#""p": "two""#);
        assert!(matches!(field_spec(&serde_json::from_str(&bad).unwrap()), Err(Error::Schema { pointer, .. }) if pointer == "/algebra/p"));
        let bad = PLANE.replace(r#""n": 2"#, r#""n": -1"#);
        assert!(matches!(Workspace::<F2>::from_json_str(&bad), Err(Error::Schema { pointer, .. }) if pointer == "/modules/W/n"));
    }

    #[test]
    fn rejects_bad_actions() {
        let src = r#"{
            "version": "rhdim-workspace/1",
            "algebra": {"field": "Fp", "p": 2, "vars": ["x"], "nilpotency": 2},
            "modules": {"M": {"kind": "actions", "dim": 1, "actions": [{"rows": 1, "cols": 1, "data": ["1"]}]}}
        }"#;
        assert!(matches!(Workspace::<F2>::from_json_str(src), Err(Error::Schema { pointer, .. }) if pointer == "/modules/M"));
    }

    #[test]
    fn field_mismatch() {
        assert!(Workspace::<crate::F3>::from_json_str(PLANE).is_err());
    }
}
