//! JSON interchange format for instances and certificates.
//!
//! Instance files look like
//! `{"kind": "collision", "params": {"n": 3}, "functions": {"f": ...}}`
//! where each function is either circuit text or
//! `{"table": [..], "output_width": w}`. Certificate files are
//! `{"kind": "collision", "data": [x, y]}`.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::function::{Body, Circuit, Function, FunctionError, ParseError, MAX_TABLE_INPUT_WIDTH};
use crate::problems::{
    BadColoringInstance, BadKSetInstance, Certificate, CollisionInstance, EkrInstance,
    EmptyInstance, Instance, InstanceError, Kind, KonigInstance, LongChoiceInstance,
    LongChoiceVariant, Ramsey2Instance, RamseyRInstance, ShortChoiceInstance, SunflowerInstance,
    TuranInstance, WeakCollisionInstance, WeakSchurInstance,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Field(String),
    #[error("function {name}: {source}")]
    Circuit { name: String, source: ParseError },
    #[error("function {name}: {source}")]
    Function { name: String, source: FunctionError },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("function {0} is glue code wider than {MAX_TABLE_INPUT_WIDTH} input bits and cannot be written out")]
    Unserializable(String),
}

fn field(msg: impl Into<String>) -> FormatError {
    FormatError::Field(msg.into())
}

pub fn function_to_json(name: &str, f: &Function) -> Result<Value, FormatError> {
    let table = |values: &[u64]| json!({ "table": values, "output_width": f.output_width() });
    Ok(match f.body() {
        Body::Circuit(c) => Value::String(c.to_text()),
        Body::Table(t) => table(t.values()),
        Body::Wrapper(_) => {
            if f.input_width() > MAX_TABLE_INPUT_WIDTH {
                return Err(FormatError::Unserializable(name.into()));
            }
            let values = f.to_table().map_err(|source| FormatError::Function {
                name: name.into(),
                source,
            })?;
            table(&values)
        }
    })
}

/// `output_width` defaults to `expected_out` when the file omits it.
pub fn function_from_json(
    name: &str,
    v: &Value,
    expected_out: usize,
) -> Result<Function, FormatError> {
    match v {
        Value::String(text) => {
            Circuit::parse(text)
                .map(Function::from)
                .map_err(|source| FormatError::Circuit {
                    name: name.into(),
                    source,
                })
        }
        Value::Object(obj) => {
            let values = obj
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| field(format!("function {name}: missing table")))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .ok_or_else(|| field(format!("function {name}: non-integer entry")))
                })
                .collect::<Result<Vec<u64>, _>>()?;
            let width = match obj.get("output_width") {
                None => expected_out,
                Some(w) => w
                    .as_u64()
                    .ok_or_else(|| field(format!("function {name}: bad output_width")))?
                    as usize,
            };
            Function::from_table(width, values).map_err(|source| FormatError::Function {
                name: name.into(),
                source,
            })
        }
        _ => Err(field(format!(
            "function {name}: expected circuit text or a table"
        ))),
    }
}

/// Parameters and named functions of an instance.
fn parts(inst: &Instance) -> (Value, Vec<(String, &Function)>) {
    let one = |name: &str, f| vec![(name.to_string(), f)];
    match inst {
        Instance::Collision(i) => (json!({"n": i.n}), one("f", &i.f)),
        Instance::WeakCollision(i) => (json!({"n": i.n, "m": i.m}), one("f", &i.f)),
        Instance::Empty(i) => (json!({"n": i.n}), one("f", &i.f)),
        Instance::LongChoice(i) => {
            let mut params = json!({"n": i.n});
            let variant = match &i.variant {
                LongChoiceVariant::General => "general",
                LongChoiceVariant::Unary => "unary",
                LongChoiceVariant::Binary(ks) => {
                    params["ks"] = json!(ks);
                    "binary"
                }
                LongChoiceVariant::Constrained(a0) => {
                    params["a0"] = json!(a0);
                    "constrained"
                }
            };
            params["variant"] = json!(variant);
            (params, predicates(&i.predicates))
        }
        Instance::ShortChoice(i) => (json!({"n": i.n}), predicates(&i.predicates)),
        Instance::Ramsey2(i) => (json!({"n": i.n}), one("edge", &i.edge)),
        Instance::RamseyR(i) => (
            json!({"r": i.r, "n": i.n, "node_width": i.node_width}),
            one("color", &i.color),
        ),
        Instance::Sunflower(i) => (
            json!({"k": i.k, "index_width": i.index_width, "element_width": i.element_width}),
            one("F", &i.f),
        ),
        Instance::Konig(i) => (json!({"n": i.n, "root": i.root}), one("parent", &i.parent)),
        Instance::Ekr(i) => (json!({"n": i.n}), one("F", &i.f)),
        Instance::BadColoring(i) => (
            json!({"k": i.k(), "n": i.n()}),
            vec![("E".into(), &i.edges.edges), ("C".into(), &i.coloring)],
        ),
        Instance::Turan(i) => (json!({"k": i.k(), "n": i.n()}), one("E", &i.edges.edges)),
        Instance::BadKSet(i) => (
            json!({"k": i.k, "n": i.n}),
            vec![("F".into(), &i.sets), ("C".into(), &i.coloring)],
        ),
        Instance::WeakSchur(i) => (json!({"r": i.r, "width": i.width}), one("C", &i.coloring)),
    }
}

fn predicates(ps: &[Function]) -> Vec<(String, &Function)> {
    ps.iter()
        .enumerate()
        .map(|(i, p)| (format!("P_{i}"), p))
        .collect()
}

/// Serializes `inst`; `meta`, if given, is stored verbatim under `"meta"`.
pub fn instance_to_json(inst: &Instance, meta: Option<&Value>) -> Result<Value, FormatError> {
    let (params, fns) = parts(inst);
    let mut functions = Map::new();
    for (name, f) in fns {
        functions.insert(name.clone(), function_to_json(&name, f)?);
    }
    let mut out = json!({
        "kind": inst.kind().name(),
        "params": params,
        "functions": functions,
    });
    if let Some(meta) = meta {
        out["meta"] = meta.clone();
    }
    Ok(out)
}

struct Reader<'a> {
    params: &'a Value,
    functions: &'a Value,
}

impl Reader<'_> {
    fn int(&self, key: &str) -> Result<u64, FormatError> {
        self.params
            .get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| field(format!("params.{key}: expected a non-negative integer")))
    }

    fn usize(&self, key: &str) -> Result<usize, FormatError> {
        self.int(key).map(|v| v as usize)
    }

    fn func(&self, name: &str, out: usize) -> Result<Function, FormatError> {
        let v = self
            .functions
            .get(name)
            .ok_or_else(|| field(format!("functions.{name}: missing")))?;
        function_from_json(name, v, out)
    }

    fn predicates(&self, n: usize) -> Result<Vec<Function>, FormatError> {
        (0..n.saturating_sub(1))
            .map(|i| self.func(&format!("P_{i}"), 1))
            .collect()
    }
}

pub fn instance_from_json(v: &Value) -> Result<Instance, FormatError> {
    let kind_name = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| field("kind: expected a string"))?;
    let kind =
        Kind::from_name(kind_name).ok_or_else(|| field(format!("unknown kind {kind_name}")))?;
    let empty = json!({});
    let rd = Reader {
        params: v.get("params").unwrap_or(&empty),
        functions: v.get("functions").unwrap_or(&empty),
    };
    use crate::function::ceil_log2;
    use crate::problems::node_width;
    Ok(match kind {
        Kind::Collision => {
            let n = rd.usize("n")?;
            CollisionInstance::new(n, rd.func("f", n)?)?.into()
        }
        Kind::WeakCollision => {
            let (n, m) = (rd.usize("n")?, rd.usize("m")?);
            WeakCollisionInstance::new(n, m, rd.func("f", m)?)?.into()
        }
        Kind::Empty => {
            let n = rd.usize("n")?;
            EmptyInstance::new(n, rd.func("f", n)?)?.into()
        }
        Kind::LongChoice => {
            let n = rd.usize("n")?;
            let variant = match rd
                .params
                .get("variant")
                .and_then(Value::as_str)
                .unwrap_or("general")
            {
                "general" => LongChoiceVariant::General,
                "unary" => LongChoiceVariant::Unary,
                "binary" => {
                    let ks = rd
                        .params
                        .get("ks")
                        .and_then(Value::as_array)
                        .ok_or_else(|| field("params.ks: expected an array"))?
                        .iter()
                        .map(|k| {
                            k.as_u64()
                                .map(|k| k as usize)
                                .ok_or_else(|| field("params.ks: bad entry"))
                        })
                        .collect::<Result<_, _>>()?;
                    LongChoiceVariant::Binary(ks)
                }
                "constrained" => LongChoiceVariant::Constrained(rd.int("a0")?),
                other => return Err(field(format!("params.variant: unknown variant {other}"))),
            };
            LongChoiceInstance::new(n, variant, rd.predicates(n)?)?.into()
        }
        Kind::ShortChoice => {
            let n = rd.usize("n")?;
            ShortChoiceInstance::new(n, rd.predicates(n)?)?.into()
        }
        Kind::Ramsey2 => Ramsey2Instance::new(rd.usize("n")?, rd.func("edge", 1)?)?.into(),
        Kind::RamseyR => {
            let r = rd.int("r")?;
            let color = rd.func("color", ceil_log2(r.max(1)))?;
            RamseyRInstance::new(r, rd.usize("n")?, rd.usize("node_width")?, color)?.into()
        }
        Kind::Sunflower => {
            let (k, ew) = (rd.usize("k")?, rd.usize("element_width")?);
            SunflowerInstance::new(k, rd.usize("index_width")?, ew, rd.func("F", k * ew)?)?.into()
        }
        Kind::Konig => {
            let n = rd.usize("n")?;
            KonigInstance::new(n, rd.func("parent", n + 1)?, rd.int("root")?)?.into()
        }
        Kind::Ekr => {
            let n = rd.usize("n")?;
            EkrInstance::new(n, rd.func("F", 2 * n)?)?.into()
        }
        Kind::BadColoring => {
            let (k, n) = (rd.usize("k")?, rd.usize("n")?);
            let w = node_width(k.max(1), n);
            BadColoringInstance::new(
                k,
                n,
                rd.func("E", 2 * w)?,
                rd.func("C", ceil_log2(k as u64))?,
            )?
            .into()
        }
        Kind::Turan => {
            let (k, n) = (rd.usize("k")?, rd.usize("n")?);
            TuranInstance::new(k, n, rd.func("E", 2 * node_width(k.max(1), n))?)?.into()
        }
        Kind::BadKSet => {
            let (k, n) = (rd.usize("k")?, rd.usize("n")?);
            let w = node_width(k.max(1), n);
            BadKSetInstance::new(
                k,
                n,
                rd.func("F", k * w)?,
                rd.func("C", ceil_log2(k as u64))?,
            )?
            .into()
        }
        Kind::WeakSchur => {
            let r = rd.int("r")?;
            WeakSchurInstance::new(r, rd.usize("width")?, rd.func("C", ceil_log2(r.max(1)))?)?
                .into()
        }
    })
}

pub fn certificate_to_json(cert: &Certificate) -> Value {
    json!({ "kind": cert.name(), "data": cert.data() })
}

pub fn certificate_from_json(v: &Value) -> Result<Certificate, FormatError> {
    let name = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| field("kind: expected a string"))?;
    let data = v
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| field("data: expected an array"))?
        .iter()
        .map(|x| {
            x.as_u64()
                .ok_or_else(|| field("data: expected non-negative integers"))
        })
        .collect::<Result<Vec<u64>, _>>()?;
    Certificate::from_parts(name, &data).ok_or_else(|| {
        field(format!(
            "certificate {name} does not take {} values",
            data.len()
        ))
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
