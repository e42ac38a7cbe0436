//! Pattern algebra over binary vector sequences.
//!
//! The library models finite sets of fixed-width binary vectors and sequences
//! thereof, with four operators: OR (set union), AND (set intersection), NOT
//! (complement inside an explicit finite universe) and NEXT (instance
//! concatenation). On top of the sets sits a typed expression language of
//! *X-forms* with a parser and two leaf interpretations, constructive
//! synthesizers that produce a form for any given pattern, and perception
//! machines — predicate-guarded nondeterministic recognizers compiled from
//! forms that accept exactly the form's denotation.
//!
//! ```
//! use xform_core::{parse, Interpretation};
//!
//! let form = parse("#1 -> (#0 + #1)", None)?;
//! let denotation = form.eval(Interpretation::Singleton)?;
//! assert_eq!(denotation.len(), 2);
//!
//! let machine = xform_core::compile(&form, Interpretation::Singleton)?;
//! let input = xform_core::parse_instance_line("1 0", None).unwrap();
//! assert!(machine.run(&input)?.accepted);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

mod ast;
mod error;
mod machine;
mod parse;
mod patfile;
mod pattern;
mod synth;

pub use ast::{Footing, Interpretation, XForm, XFormKind, XFormNode};
pub use error::Error;
pub use machine::{
    compile, BitId, PerceptionMachine, RunTrace, SpatialBit, StateId, TemporalBit, TraceStep,
    Transition,
};
pub use parse::{parse, print, DiagnosticKind, ParseDiagnostic};
pub use patfile::{parse_instance_line, parse_pat, write_pat, PatError};
pub use pattern::{
    enumerate_universe, BasePattern, Dimension, LengthBound, ObjectivePattern, SequenceInstance,
    DEFAULT_ENUMERATION_CAP, MAX_ENUM_DIM,
};
pub use synth::{
    simplify, synth_sx_mask, synth_sx_singleton, synth_tx_projection, synth_x,
    CoordinateGenerators, SynthResult,
};
