//! Deterministic instance generators.

use std::collections::BTreeMap;
use std::fmt;

use longchoice_core::function::{ceil_log2, CircuitBuilder, Function};
use longchoice_core::problems::{
    edge_count, index_width, node_width, BadColoringInstance, BadKSetInstance, CollisionInstance,
    EkrInstance, EmptyInstance, Instance, InstanceError, Kind, KonigInstance, LongChoiceInstance,
    LongChoiceVariant, Ramsey2Instance, RamseyRInstance, ShortChoiceInstance, SunflowerInstance,
    TuranInstance, WeakCollisionInstance, WeakSchurInstance, DESK_SCALE_BITS,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::rng::{Rng, GENERATOR_VERSION};

/// Widest input a generated truth table may have; wider functions become
/// random circuits.
pub const TABLE_BITS: usize = 12;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("{0}")]
    Param(String),
    #[error("{what} of {bits} bits exceeds the desk-scale cap of {DESK_SCALE_BITS}")]
    Cap { what: String, bits: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flavor {
    Random,
    /// A named hand-built construction.
    Adversarial(String),
}

impl Flavor {
    pub fn parse(s: &str) -> Flavor {
        match s {
            "random" => Flavor::Random,
            other => Flavor::Adversarial(other.to_string()),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Random => f.write_str("random"),
            Flavor::Adversarial(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: Kind,
    pub params: BTreeMap<String, u64>,
    pub seed: u64,
    pub flavor: Flavor,
}

impl GeneratorSpec {
    pub fn new(kind: Kind, params: &[(&str, u64)], seed: u64) -> Self {
        GeneratorSpec {
            kind,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            seed,
            flavor: Flavor::Random,
        }
    }

    pub fn flavor(mut self, flavor: &str) -> Self {
        self.flavor = Flavor::parse(flavor);
        self
    }

    /// Recorded in the instance file under `meta`.
    pub fn to_json(&self) -> Value {
        json!({
            "generator_version": GENERATOR_VERSION,
            "kind": self.kind.name(),
            "params": self.params,
            "seed": self.seed,
            "flavor": self.flavor.to_string(),
        })
    }

    pub fn generate(&self) -> Result<Instance, GenError> {
        let p = Params {
            map: &self.params,
            kind: self.kind,
        };
        p.check_known()?;
        let mut rng = Rng::new(self.seed);
        let adv = match &self.flavor {
            Flavor::Random => None,
            Flavor::Adversarial(name) => Some(name.as_str()),
        };
        let unknown =
            |name: &str| GenError::Param(format!("no construction named {name} for {}", self.kind));
        let r = &mut rng;
        Ok(match self.kind {
            Kind::Collision => {
                let n = p.width("n", None)?;
                let f = match adv {
                    None => random_fn(r, n, n),
                    Some("cyclic") => table(n, n, |x| (x + 1) & mask(n))?,
                    Some("identity") => Function::identity(n),
                    Some(other) => return Err(unknown(other)),
                };
                CollisionInstance::new(n, f)?.into()
            }
            Kind::WeakCollision => {
                let n = p.width("n", None)?;
                let m = p.get("m", Some(n as u64 - 1))? as usize;
                let f = match adv {
                    None => random_fn(r, n, m),
                    Some("constant") => Function::constant(n, m, 1),
                    Some(other) => return Err(unknown(other)),
                };
                WeakCollisionInstance::new(n, m, f)?.into()
            }
            Kind::Empty => {
                let n = p.width("n", None)?;
                let f = match adv {
                    None => random_fn_below(r, n, n, (1u64 << n) - 1)?,
                    Some("identity") => Function::identity(n),
                    Some(other) => return Err(unknown(other)),
                };
                EmptyInstance::new(n, f)?.into()
            }
            Kind::LongChoice => {
                let n = p.width("n", None)?;
                let preds = match adv {
                    None => (0..n.saturating_sub(1))
                        .map(|i| random_fn(r, (i + 2) * n, 1))
                        .collect(),
                    Some("zero") => (0..n.saturating_sub(1))
                        .map(|i| Function::constant((i + 2) * n, 1, 0))
                        .collect(),
                    Some(other) => return Err(unknown(other)),
                };
                let variant = match self.params.get("a0") {
                    Some(&a0) => LongChoiceVariant::Constrained(a0),
                    None => LongChoiceVariant::General,
                };
                LongChoiceInstance::new(n, variant, preds)?.into()
            }
            Kind::ShortChoice => {
                let n = p.width("n", None)?;
                let preds = match adv {
                    None => (0..n.saturating_sub(1))
                        .map(|i| random_fn(r, (i + 2) * n, 1))
                        .collect(),
                    Some("zero") => (0..n.saturating_sub(1))
                        .map(|i| Function::constant((i + 2) * n, 1, 0))
                        .collect(),
                    Some(other) => return Err(unknown(other)),
                };
                ShortChoiceInstance::new(n, preds)?.into()
            }
            Kind::Ramsey2 => {
                let n = p.get("n", None)? as usize;
                cap("node width", 2 * n)?;
                let edge = match adv {
                    None => random_fn(r, 4 * n, 1),
                    Some("monochrome") => Function::constant(4 * n, 1, 1),
                    Some(other) => return Err(unknown(other)),
                };
                Ramsey2Instance::new(n, edge)?.into()
            }
            Kind::RamseyR => {
                let rc = p.get("r", Some(2))?;
                let n = p.get("n", None)? as usize;
                let w = p.get(
                    "node_width",
                    Some(RamseyRInstance::default_width(rc, n) as u64),
                )? as usize;
                cap("node width", w)?;
                let cw = ceil_log2(rc);
                let color = match adv {
                    None => random_fn(r, 2 * w, cw),
                    Some("monochrome") => Function::constant(2 * w, cw, 0),
                    Some(other) => return Err(unknown(other)),
                };
                RamseyRInstance::new(rc, n, w, color)?.into()
            }
            Kind::Sunflower => {
                let k = p.get("k", Some(2))? as usize;
                let def = SunflowerInstance::default_width(k) as u64;
                let iw = p.get("index_width", Some(def))? as usize;
                let ew = p.get("element_width", Some(def))? as usize;
                cap("index width", iw)?;
                if k * ew > 64 {
                    return Err(GenError::Param(format!(
                        "{k} elements of {ew} bits exceed 64 bits"
                    )));
                }
                let f = match adv {
                    None => random_fn(r, iw, k * ew),
                    Some("disjoint") => table(iw, k * ew, |i| {
                        (0..k as u64).fold(0, |acc, j| {
                            acc | (((k as u64 * i + j) & mask(ew)) << (j as usize * ew))
                        })
                    })?,
                    Some(other) => return Err(unknown(other)),
                };
                SunflowerInstance::new(k, iw, ew, f)?.into()
            }
            Kind::Konig => {
                let n = p.width("n", None)?;
                let root = p.get("root", Some(0))?;
                let parent = match adv {
                    None => random_fn(r, n, n + 1),
                    Some("heap") => table(n, n + 1, |x| {
                        if x == 0 {
                            0
                        } else {
                            ((x - 1) / 2) | ((x + 1) % 2) << n
                        }
                    })?,
                    Some(other) => return Err(unknown(other)),
                };
                KonigInstance::new(n, parent, root)?.into()
            }
            Kind::Ekr => {
                let n = p.width("n", None)?;
                let f = match adv {
                    None => random_fn(r, n, 2 * n),
                    // every set contains 0
                    Some("star") => table(n, 2 * n, |i| ((i + 1) % (1 << n)) << n)?,
                    Some(other) => return Err(unknown(other)),
                };
                EkrInstance::new(n, f)?.into()
            }
            Kind::BadColoring | Kind::Turan => {
                let k = p.get("k", Some(2))? as usize;
                let n = p.get("n", None)? as usize;
                if k < 2 || n == 0 {
                    return Err(GenError::Param(format!(
                        "need k >= 2 and n >= 1, got k={k}, n={n}"
                    )));
                }
                let count = edge_count(k, n);
                let (iw, w) = (index_width(count), node_width(k, n));
                cap("edge index width", iw)?;
                if let Some(other) = adv {
                    return Err(unknown(other));
                }
                let nodes = (k as u64) << n;
                let edges = if iw <= TABLE_BITS {
                    table(iw, 2 * w, |_| r.below(nodes) | r.below(nodes) << w)?
                } else {
                    random_circuit(r, iw, 2 * w)
                };
                if self.kind == Kind::Turan {
                    TuranInstance::new(k, n, edges)?.into()
                } else {
                    let coloring = random_fn_below(r, w, ceil_log2(k as u64), k as u64)?;
                    BadColoringInstance::new(k, n, edges, coloring)?.into()
                }
            }
            Kind::BadKSet => {
                let k = p.get("k", Some(1))? as usize;
                let n = p.get("n", None)? as usize;
                if k == 0 || n == 0 {
                    return Err(GenError::Param("need k >= 1 and n >= 1".into()));
                }
                let iw = BadKSetInstance::index_width_for(k, n);
                cap("set index width", iw)?;
                if let Some(other) = adv {
                    return Err(unknown(other));
                }
                let w = node_width(k, n);
                let nodes = (k as u64) << n;
                let sets = if iw <= TABLE_BITS {
                    table(iw, k * w, |_| {
                        (0..k).fold(0, |acc, j| acc | r.below(nodes) << (j * w))
                    })?
                } else {
                    random_circuit(r, iw, k * w)
                };
                let coloring = random_fn_below(r, w, ceil_log2(k as u64), k as u64)?;
                BadKSetInstance::new(k, n, sets, coloring)?.into()
            }
            Kind::WeakSchur => {
                let rc = p.get("r", Some(2))?;
                let width = p.get(
                    "width",
                    Some(WeakSchurInstance::default_width(rc).max(1) as u64),
                )? as usize;
                cap("width", width)?;
                let cw = ceil_log2(rc);
                let coloring = match adv {
                    None => random_fn_below(r, width, cw, rc.max(1))?,
                    // integer v is stored at v - 1, so bit 0 of the index is flipped parity
                    Some("parity") if cw == 1 => {
                        let mut b = CircuitBuilder::new(width);
                        let x = b.input(0);
                        let out = b.not(x);
                        b.finish(vec![out]).into()
                    }
                    Some(other) => return Err(unknown(other)),
                };
                WeakSchurInstance::new(rc, width, coloring)?.into()
            }
        })
    }
}

struct Params<'a> {
    map: &'a BTreeMap<String, u64>,
    kind: Kind,
}

impl Params<'_> {
    fn allowed(&self) -> &'static [&'static str] {
        match self.kind {
            Kind::Collision | Kind::Empty | Kind::ShortChoice | Kind::Ramsey2 | Kind::Ekr => &["n"],
            Kind::WeakCollision => &["n", "m"],
            Kind::LongChoice => &["n", "a0"],
            Kind::RamseyR => &["r", "n", "node_width"],
            Kind::Sunflower => &["k", "index_width", "element_width"],
            Kind::Konig => &["n", "root"],
            Kind::BadColoring | Kind::Turan | Kind::BadKSet => &["k", "n"],
            Kind::WeakSchur => &["r", "width"],
        }
    }

    fn check_known(&self) -> Result<(), GenError> {
        match self
            .map
            .keys()
            .find(|k| !self.allowed().contains(&k.as_str()))
        {
            Some(k) => Err(GenError::Param(format!(
                "{} takes parameters {:?}, not {k}",
                self.kind,
                self.allowed()
            ))),
            None => Ok(()),
        }
    }

    fn get(&self, key: &str, default: Option<u64>) -> Result<u64, GenError> {
        self.map
            .get(key)
            .copied()
            .or(default)
            .ok_or_else(|| GenError::Param(format!("{} needs parameter {key}", self.kind)))
    }

    /// A universe width, checked against the cap.
    fn width(&self, key: &str, default: Option<u64>) -> Result<usize, GenError> {
        let n = self.get(key, default)? as usize;
        cap(key, n)?;
        Ok(n)
    }
}

fn cap(what: &str, bits: usize) -> Result<(), GenError> {
    if bits > DESK_SCALE_BITS {
        Err(GenError::Cap {
            what: what.into(),
            bits,
        })
    } else {
        Ok(())
    }
}

fn mask(w: usize) -> u64 {
    longchoice_core::function::low_mask(w)
}

fn table(input: usize, output: usize, mut f: impl FnMut(u64) -> u64) -> Result<Function, GenError> {
    if input > longchoice_core::function::MAX_TABLE_INPUT_WIDTH {
        return Err(GenError::Cap {
            what: "explicit table input".into(),
            bits: input,
        });
    }
    let values = (0..1u64 << input).map(|x| f(x) & mask(output)).collect();
    Function::from_table(output, values).map_err(|e| GenError::Param(e.to_string()))
}

/// Table of uniform values when narrow, random circuit otherwise.
pub fn random_fn(r: &mut Rng, input: usize, output: usize) -> Function {
    if input <= TABLE_BITS {
        let values = (0..1u64 << input).map(|_| r.bits(output)).collect();
        Function::from_table(output, values).expect("values are masked to the output width")
    } else {
        random_circuit(r, input, output)
    }
}

/// Values drawn from `[0, bound)`; only for narrow inputs.
fn random_fn_below(
    r: &mut Rng,
    input: usize,
    output: usize,
    bound: u64,
) -> Result<Function, GenError> {
    if input <= TABLE_BITS {
        table(input, output, |_| r.below(bound))
    } else {
        Ok(random_circuit(r, input, output))
    }
}

/// Each output bit is `(x_a AND x_b) XOR x_c XOR (NOT x_d AND x_e)` over
/// random input positions.
pub fn random_circuit(r: &mut Rng, input: usize, output: usize) -> Function {
    let mut b = CircuitBuilder::new(input);
    let outs = (0..output)
        .map(|_| {
            let mut pick = |b: &mut CircuitBuilder| {
                let pos = r.below(input as u64) as usize;
                b.input(pos)
            };
            let (xa, xb, xc, xd, xe) = (
                pick(&mut b),
                pick(&mut b),
                pick(&mut b),
                pick(&mut b),
                pick(&mut b),
            );
            let ab = b.and(xa, xb);
            let nd = b.not(xd);
            let de = b.and(nd, xe);
            let t = b.xor(ab, xc);
            b.xor(t, de)
        })
        .collect();
    b.finish(outs).into()
}
