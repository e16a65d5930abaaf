//! Gate-level circuits over {CONST, INPUT, NOT, AND, OR, XOR}.
//!
//! Gates are numbered topologically: every reference points at a gate with a
//! smaller index, which makes acyclicity a local check.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::bitvec::BitVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Const(bool),
    Input(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Xor(usize, usize),
}

impl Gate {
    fn refs(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Gate::Const(_) | Gate::Input(_) => (None, None),
            Gate::Not(a) => (Some(a), None),
            Gate::And(a, b) | Gate::Or(a, b) | Gate::Xor(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate g{gate} references g{target}, which is not an earlier gate")]
    ForwardRef { gate: usize, target: usize },
    #[error("gate g{gate} reads input {position} of a {width}-bit circuit")]
    InputOutOfRange {
        gate: usize,
        position: usize,
        width: usize,
    },
    #[error("output references g{target} but the circuit has {gates} gates")]
    BadOutput { target: usize, gates: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message} (at `{token}`)")]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    input_width: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

impl Circuit {
    pub fn new(
        input_width: usize,
        gates: Vec<Gate>,
        outputs: Vec<usize>,
    ) -> Result<Self, CircuitError> {
        for (i, g) in gates.iter().enumerate() {
            if let Gate::Input(position) = *g {
                if position >= input_width {
                    return Err(CircuitError::InputOutOfRange {
                        gate: i,
                        position,
                        width: input_width,
                    });
                }
            }
            if let Some(target) = g.refs().find(|&r| r >= i) {
                return Err(CircuitError::ForwardRef { gate: i, target });
            }
        }
        if let Some(&target) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(CircuitError::BadOutput {
                target,
                gates: gates.len(),
            });
        }
        Ok(Circuit {
            input_width,
            gates,
            outputs,
        })
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn output_width(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Evaluates the circuit. The caller guarantees `x.width() == input_width`.
    pub fn eval(&self, x: &BitVec) -> BitVec {
        debug_assert_eq!(x.width(), self.input_width);
        let mut val: Vec<bool> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Const(b) => b,
                Gate::Input(p) => x.get(p),
                Gate::Not(a) => !val[a],
                Gate::And(a, b) => val[a] & val[b],
                Gate::Or(a, b) => val[a] | val[b],
                Gate::Xor(a, b) => val[a] ^ val[b],
            };
            val.push(v);
        }
        let bits: Vec<bool> = self.outputs.iter().map(|&o| val[o]).collect();
        BitVec::from_bits(&bits)
    }

    /// Gate-level composition `outer ∘ inner`; widths must already agree.
    pub fn compose(outer: &Circuit, inner: &Circuit) -> Circuit {
        assert_eq!(inner.output_width(), outer.input_width);
        let mut gates = inner.gates.clone();
        let base = gates.len();
        let remap = |r: usize| base + r;
        for g in &outer.gates {
            gates.push(match *g {
                // buffer gate so indices stay one-to-one with `outer`
                Gate::Input(p) => Gate::And(inner.outputs[p], inner.outputs[p]),
                Gate::Const(b) => Gate::Const(b),
                Gate::Not(a) => Gate::Not(remap(a)),
                Gate::And(a, b) => Gate::And(remap(a), remap(b)),
                Gate::Or(a, b) => Gate::Or(remap(a), remap(b)),
                Gate::Xor(a, b) => Gate::Xor(remap(a), remap(b)),
            });
        }
        let outputs = outer.outputs.iter().map(|&o| remap(o)).collect();
        Circuit::new(inner.input_width, gates, outputs)
            .expect("composition preserves topological order")
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "circuit {} {}", self.input_width, self.output_width()).unwrap();
        for (i, g) in self.gates.iter().enumerate() {
            match *g {
                Gate::Const(b) => writeln!(s, "g{i} = CONST {}", b as u8),
                Gate::Input(p) => writeln!(s, "g{i} = INPUT {p}"),
                Gate::Not(a) => writeln!(s, "g{i} = NOT g{a}"),
                Gate::And(a, b) => writeln!(s, "g{i} = AND g{a} g{b}"),
                Gate::Or(a, b) => writeln!(s, "g{i} = OR g{a} g{b}"),
                Gate::Xor(a, b) => writeln!(s, "g{i} = XOR g{a} g{b}"),
            }
            .unwrap();
        }
        s.push_str("out");
        for o in &self.outputs {
            write!(s, " g{o}").unwrap();
        }
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Circuit, ParseError> {
        let err = |line: usize, token: &str, message: &str| ParseError {
            line,
            token: token.to_string(),
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (hline, header) = lines.next().ok_or_else(|| err(1, "", "empty input"))?;
        let h: Vec<&str> = header.split(' ').collect();
        if h.len() != 3 || h[0] != "circuit" {
            return Err(err(hline, header, "expected `circuit <inputs> <outputs>`"));
        }
        let number = |line: usize, tok: &str| -> Result<usize, ParseError> {
            tok.parse::<usize>()
                .map_err(|_| err(line, tok, "expected a decimal integer"))
        };
        let input_width = number(hline, h[1])?;
        let output_width = number(hline, h[2])?;

        let gate_ref = |line: usize, tok: &str, own: usize| -> Result<usize, ParseError> {
            let idx = tok
                .strip_prefix('g')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| err(line, tok, "expected a gate reference g<i>"))?;
            if idx >= own {
                return Err(err(line, tok, "reference to a gate that is not earlier"));
            }
            Ok(idx)
        };

        let mut gates = Vec::new();
        let mut outputs = None;
        for (ln, line) in lines {
            if outputs.is_some() {
                return Err(err(ln, line, "content after the `out` line"));
            }
            let toks: Vec<&str> = line.split(' ').collect();
            if toks[0] == "out" {
                let refs = toks[1..]
                    .iter()
                    .map(|t| gate_ref(ln, t, gates.len()))
                    .collect::<Result<Vec<_>, _>>()?;
                if refs.len() != output_width {
                    return Err(err(ln, line, "output count differs from the header"));
                }
                outputs = Some(refs);
                continue;
            }
            let own = gates.len();
            let expected_name = format!("g{own}");
            if toks.len() < 3 || toks[1] != "=" {
                return Err(err(ln, toks[0], "expected `g<i> = OP ...`"));
            }
            if toks[0] != expected_name {
                return Err(err(
                    ln,
                    toks[0],
                    "gates must be numbered consecutively from g0",
                ));
            }
            let args = &toks[3..];
            let want = |n: usize| -> Result<(), ParseError> {
                if args.len() != n {
                    Err(err(ln, toks[2], "wrong number of operands"))
                } else {
                    Ok(())
                }
            };
            let gate = match toks[2] {
                "CONST" => {
                    want(1)?;
                    match args[0] {
                        "0" => Gate::Const(false),
                        "1" => Gate::Const(true),
                        t => return Err(err(ln, t, "CONST takes 0 or 1")),
                    }
                }
                "INPUT" => {
                    want(1)?;
                    let p = number(ln, args[0])?;
                    if p >= input_width {
                        return Err(err(ln, args[0], "input position out of range"));
                    }
                    Gate::Input(p)
                }
                "NOT" => {
                    want(1)?;
                    Gate::Not(gate_ref(ln, args[0], own)?)
                }
                op @ ("AND" | "OR" | "XOR") => {
                    want(2)?;
                    let a = gate_ref(ln, args[0], own)?;
                    let b = gate_ref(ln, args[1], own)?;
                    match op {
                        "AND" => Gate::And(a, b),
                        "OR" => Gate::Or(a, b),
                        _ => Gate::Xor(a, b),
                    }
                }
                t => return Err(err(ln, t, "unknown gate kind")),
            };
            gates.push(gate);
        }
        let last = text.lines().count();
        let outputs = outputs.ok_or_else(|| err(last, "", "missing `out` line"))?;
        Circuit::new(input_width, gates, outputs).map_err(|e| err(last, "", &e.to_string()))
    }

    /// Shannon-expansion synthesis of a truth table, sharing identical
    /// sub-tables. Intended for desk-scale tables only.
    pub fn from_table(input_width: usize, output_width: usize, values: &[u64]) -> Circuit {
        assert_eq!(values.len(), 1usize << input_width);
        let mut b = CircuitBuilder::new(input_width);
        let mut memo: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut outs = Vec::with_capacity(output_width);
        for bit in 0..output_width {
            let column: Vec<bool> = values.iter().map(|v| (v >> bit) & 1 == 1).collect();
            outs.push(synth(&mut b, &mut memo, &column, input_width));
        }
        b.finish(outs)
    }
}

fn synth(
    b: &mut CircuitBuilder,
    memo: &mut HashMap<Vec<bool>, usize>,
    col: &[bool],
    vars: usize,
) -> usize {
    if let Some(&g) = memo.get(col) {
        return g;
    }
    let g = if col.iter().all(|&x| !x) {
        b.constant(false)
    } else if col.iter().all(|&x| x) {
        b.constant(true)
    } else {
        // split on the most significant remaining variable
        let half = col.len() / 2;
        let sel = b.input(vars - 1);
        let lo = synth(b, memo, &col[..half], vars - 1);
        let hi = synth(b, memo, &col[half..], vars - 1);
        b.mux(sel, lo, hi)
    };
    memo.insert(col.to_vec(), g);
    g
}

/// Incremental circuit construction; gate handles are plain indices.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    input_width: usize,
    gates: Vec<Gate>,
    inputs: HashMap<usize, usize>,
    consts: [Option<usize>; 2],
}

impl CircuitBuilder {
    pub fn new(input_width: usize) -> Self {
        CircuitBuilder {
            input_width,
            ..Default::default()
        }
    }

    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn input(&mut self, position: usize) -> usize {
        assert!(position < self.input_width);
        if let Some(&g) = self.inputs.get(&position) {
            return g;
        }
        let g = self.push(Gate::Input(position));
        self.inputs.insert(position, g);
        g
    }

    pub fn constant(&mut self, bit: bool) -> usize {
        if let Some(g) = self.consts[bit as usize] {
            return g;
        }
        let g = self.push(Gate::Const(bit));
        self.consts[bit as usize] = Some(g);
        g
    }

    pub fn not(&mut self, a: usize) -> usize {
        self.push(Gate::Not(a))
    }

    pub fn and(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::And(a, b))
    }

    pub fn or(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Or(a, b))
    }

    pub fn xor(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Xor(a, b))
    }

    /// `sel ? hi : lo`
    pub fn mux(&mut self, sel: usize, lo: usize, hi: usize) -> usize {
        let t = self.and(sel, hi);
        let ns = self.not(sel);
        let f = self.and(ns, lo);
        self.or(t, f)
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn finish(self, outputs: Vec<usize>) -> Circuit {
        Circuit::new(self.input_width, self.gates, outputs)
            .expect("builder only emits backward references")
    }
}
