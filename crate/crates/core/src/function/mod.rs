//! Pure bit-vector functions: the common currency of every instance.

pub mod bitvec;
pub mod circuit;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use bitvec::{bit_length, ceil_log2, low_mask, BitVec};
pub use circuit::{Circuit, CircuitBuilder, CircuitError, Gate, ParseError};

/// Largest input width a truth-table body may have.
pub const MAX_TABLE_INPUT_WIDTH: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FunctionError {
    #[error("width mismatch: expected {expected} bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("truth table length {0} is not a power of two")]
    TableLength(usize),
    #[error("truth table entries have differing widths ({first} and {other})")]
    RaggedTable { first: usize, other: usize },
    #[error("truth table input width {0} exceeds the limit of {MAX_TABLE_INPUT_WIDTH}")]
    TableTooWide(usize),
    #[error("truth table outputs wider than 64 bits are not supported")]
    TableOutputTooWide,
    #[error("truth table value {value} does not fit in {width} bits")]
    TableValue { value: u64, width: usize },
}

/// Explicit output per input; entry `x` is the output for input value `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    values: Vec<u64>,
}

impl TruthTable {
    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

type Glue = dyn Fn(&BitVec) -> BitVec + Send + Sync;

/// Glue logic around other functions, used by reductions.
pub struct Wrapper {
    label: String,
    eval: Box<Glue>,
}

impl Wrapper {
    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for Wrapper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Wrapper({})", self.label)
    }
}

#[derive(Debug, Clone)]
pub enum Body {
    Circuit(Arc<Circuit>),
    Table(Arc<TruthTable>),
    Wrapper(Arc<Wrapper>),
}

/// A pure map from `input_width` bits to `output_width` bits.
#[derive(Debug, Clone)]
pub struct Function {
    input_width: usize,
    output_width: usize,
    body: Body,
}

impl From<Circuit> for Function {
    fn from(c: Circuit) -> Self {
        Function {
            input_width: c.input_width(),
            output_width: c.output_width(),
            body: Body::Circuit(Arc::new(c)),
        }
    }
}

impl Function {
    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn output_width(&self) -> usize {
        self.output_width
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn eval(&self, x: &BitVec) -> Result<BitVec, FunctionError> {
        if x.width() != self.input_width {
            return Err(FunctionError::WidthMismatch {
                expected: self.input_width,
                got: x.width(),
            });
        }
        let y = match &self.body {
            Body::Circuit(c) => c.eval(x),
            Body::Table(t) => {
                let idx = x.to_u64().expect("table inputs fit in 64 bits") as usize;
                BitVec::from_u64(t.values[idx], self.output_width)
            }
            Body::Wrapper(w) => (w.eval)(x),
        };
        assert_eq!(
            y.width(),
            self.output_width,
            "function body produced the wrong width"
        );
        Ok(y)
    }

    /// `eval` for callers that have already matched widths.
    pub fn apply(&self, x: &BitVec) -> BitVec {
        self.eval(x).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Integer view for functions whose widths are both at most 64.
    pub fn call(&self, x: u64) -> u64 {
        if let Body::Table(t) = &self.body {
            return t.values[x as usize];
        }
        self.apply(&BitVec::from_u64(x, self.input_width))
            .to_u64()
            .expect("output wider than 64 bits")
    }

    /// Calls a function whose input is `args.len()` packed arguments of
    /// `arg_width` bits each (argument 0 in the lowest bits).
    pub fn call_args(&self, args: &[u64], arg_width: usize) -> u64 {
        self.apply(&BitVec::pack(args, arg_width))
            .to_u64()
            .expect("output wider than 64 bits")
    }

    pub fn from_truth_table(table: &[BitVec]) -> Result<Function, FunctionError> {
        let Some(first) = table.first() else {
            return Err(FunctionError::TableLength(0));
        };
        if let Some(other) = table.iter().find(|v| v.width() != first.width()) {
            return Err(FunctionError::RaggedTable {
                first: first.width(),
                other: other.width(),
            });
        }
        if first.width() > 64 {
            return Err(FunctionError::TableOutputTooWide);
        }
        let values: Vec<u64> = table.iter().map(|v| v.to_u64().unwrap()).collect();
        Function::from_table(first.width(), values)
    }

    /// Table body from integer outputs; the input width is `log2(values.len())`.
    pub fn from_table(output_width: usize, values: Vec<u64>) -> Result<Function, FunctionError> {
        let len = values.len();
        if !len.is_power_of_two() {
            return Err(FunctionError::TableLength(len));
        }
        let input_width = len.trailing_zeros() as usize;
        if input_width > MAX_TABLE_INPUT_WIDTH {
            return Err(FunctionError::TableTooWide(input_width));
        }
        if output_width > 64 {
            return Err(FunctionError::TableOutputTooWide);
        }
        if let Some(&value) = values.iter().find(|&&v| v & !low_mask(output_width) != 0) {
            return Err(FunctionError::TableValue {
                value,
                width: output_width,
            });
        }
        Ok(Function {
            input_width,
            output_width,
            body: Body::Table(Arc::new(TruthTable { values })),
        })
    }

    /// Tabulates a closure over every input.
    pub fn tabulate(
        input_width: usize,
        output_width: usize,
        f: impl Fn(u64) -> u64,
    ) -> Result<Function, FunctionError> {
        if input_width > MAX_TABLE_INPUT_WIDTH {
            return Err(FunctionError::TableTooWide(input_width));
        }
        let values = (0..1u64 << input_width)
            .map(|x| f(x) & low_mask(output_width))
            .collect();
        Function::from_table(output_width, values)
    }

    pub fn wrapper(
        label: impl Into<String>,
        input_width: usize,
        output_width: usize,
        eval: impl Fn(&BitVec) -> BitVec + Send + Sync + 'static,
    ) -> Function {
        Function {
            input_width,
            output_width,
            body: Body::Wrapper(Arc::new(Wrapper {
                label: label.into(),
                eval: Box::new(eval),
            })),
        }
    }

    /// Wrapper over an integer map; both widths must be at most 64.
    pub fn from_u64_fn(
        label: impl Into<String>,
        input_width: usize,
        output_width: usize,
        f: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Function {
        assert!(input_width <= 64 && output_width <= 64);
        Function::wrapper(label, input_width, output_width, move |x| {
            BitVec::from_u64(
                f(x.to_u64().unwrap()) & low_mask(output_width),
                output_width,
            )
        })
    }

    /// Wrapper over `arity` packed arguments of `arg_width` bits each.
    pub fn from_args_fn(
        label: impl Into<String>,
        arg_width: usize,
        arity: usize,
        output_width: usize,
        f: impl Fn(&[u64]) -> u64 + Send + Sync + 'static,
    ) -> Function {
        assert!(arg_width <= 64 && output_width <= 64);
        Function::wrapper(label, arg_width * arity, output_width, move |x| {
            let args = x.unpack(arg_width);
            BitVec::from_u64(f(&args) & low_mask(output_width), output_width)
        })
    }

    pub fn constant(input_width: usize, output_width: usize, value: u64) -> Function {
        let mut b = CircuitBuilder::new(input_width);
        let outs = (0..output_width)
            .map(|i| b.constant((value >> i) & 1 == 1))
            .collect();
        b.finish(outs).into()
    }

    pub fn identity(width: usize) -> Function {
        let mut b = CircuitBuilder::new(width);
        let outs = (0..width).map(|i| b.input(i)).collect();
        b.finish(outs).into()
    }

    /// `outer ∘ inner`. Two circuits compose at gate level; anything else
    /// becomes a wrapper.
    pub fn compose(outer: &Function, inner: &Function) -> Result<Function, FunctionError> {
        if inner.output_width != outer.input_width {
            return Err(FunctionError::WidthMismatch {
                expected: outer.input_width,
                got: inner.output_width,
            });
        }
        if let (Body::Circuit(o), Body::Circuit(i)) = (&outer.body, &inner.body) {
            return Ok(Circuit::compose(o, i).into());
        }
        let (o, i) = (outer.clone(), inner.clone());
        Ok(Function::wrapper(
            "compose",
            inner.input_width,
            outer.output_width,
            move |x| o.apply(&i.apply(x)),
        ))
    }

    /// Gate-level form: circuits as-is, tables via synthesis. Wrappers have none.
    pub fn to_circuit(&self) -> Option<Circuit> {
        match &self.body {
            Body::Circuit(c) => Some((**c).clone()),
            Body::Table(t) => Some(Circuit::from_table(
                self.input_width,
                self.output_width,
                &t.values,
            )),
            Body::Wrapper(_) => None,
        }
    }

    /// Every output for desk-scale inputs, whatever the body.
    pub fn to_table(&self) -> Result<Vec<u64>, FunctionError> {
        if self.input_width > MAX_TABLE_INPUT_WIDTH {
            return Err(FunctionError::TableTooWide(self.input_width));
        }
        if self.output_width > 64 {
            return Err(FunctionError::TableOutputTooWide);
        }
        if let Body::Table(t) = &self.body {
            return Ok(t.values.clone());
        }
        Ok((0..1u64 << self.input_width)
            .map(|x| self.call(x))
            .collect())
    }
}
