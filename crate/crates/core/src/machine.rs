//! Perception machines: operational recognizers compiled from X-forms.
//!
//! A machine holds a registry of perception bits and a guarded
//! nondeterministic automaton. Every spatial subexpression of the source form
//! becomes one [`SpatialBit`] whose supporting set is that subexpression's
//! denotation; the form's OR/NEXT structure over general subexpressions
//! becomes the automaton, with each maximal spatial subtree contributing a
//! single transition guarded by its bit. Every NEXT chain whose elements are
//! all spatial additionally registers a [`TemporalBit`] carrying the ordered
//! sensing chain of those elements' bits.
//!
//! The machine's output bit (`top_bit`) reflects whole-sequence acceptance:
//! its value after consuming a full input equals automaton acceptance, so its
//! supporting set is exactly the compiled form's denotation. Suffix detection
//! is the separate explicit mode [`PerceptionMachine::run_stream`].

use std::collections::BTreeSet;
use std::fmt;

use crate::ast::{Interpretation, XForm, XFormKind, XFormNode};
use crate::error::Error;
use crate::pattern::{
    enumerate_universe, BasePattern, Dimension, LengthBound, ObjectivePattern, SequenceInstance,
};

/// Identifier of a perception bit; unique across spatial and temporal bits of
/// one machine, with the output bit taking the final id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitId(pub usize);

impl fmt::Display for BitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifier of an automaton state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A perception bit over single inputs: fires on exactly its supporting set.
#[derive(Debug, Clone)]
pub struct SpatialBit {
    id: BitId,
    support: ObjectivePattern,
}

impl SpatialBit {
    pub fn id(&self) -> BitId {
        self.id
    }

    /// The spatial pattern of inputs this bit fires on.
    pub fn support(&self) -> &ObjectivePattern {
        &self.support
    }

    pub fn fires(&self, input: &BasePattern) -> bool {
        self.support
            .contains(&SequenceInstance::of_base(input.clone()))
    }
}

/// A perception bit reflecting that a chain of spatial perceptions occurred
/// in order on strictly consecutive steps; it fires at the step consuming the
/// final element of the chain.
#[derive(Debug, Clone)]
pub struct TemporalBit {
    id: BitId,
    chain: Vec<BitId>,
}

impl TemporalBit {
    pub fn id(&self) -> BitId {
        self.id
    }

    /// The ordered spatial bits whose in-order firing this bit reflects.
    pub fn chain(&self) -> &[BitId] {
        &self.chain
    }

    /// Whether this bit fires at step `step` (0-based) of the given trace:
    /// the last `chain.len()` inputs up to and including `step` fired the
    /// chain's bits consecutively and in order.
    pub fn fires_at(&self, trace: &RunTrace, step: usize) -> bool {
        let k = self.chain.len();
        if step + 1 < k {
            return false;
        }
        self.chain
            .iter()
            .enumerate()
            .all(|(j, bit)| trace.steps[step + 1 - k + j].fired.contains(bit))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    pub guard: BitId,
    pub to: StateId,
}

/// One consumed input: the step's input, the spatial bits it fired, and the
/// automaton states active after the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub input: BasePattern,
    pub fired: BTreeSet<BitId>,
    pub states: BTreeSet<StateId>,
}

/// Full record of one run; one step per input, plus the acceptance verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub steps: Vec<TraceStep>,
    pub accepted: bool,
}

fn write_ids<T: fmt::Display>(f: &mut fmt::Formatter<'_>, ids: &BTreeSet<T>) -> fmt::Result {
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", id)?;
    }
    Ok(())
}

impl fmt::Display for RunTrace {
    /// Line-oriented trace text: one step per line as
    /// `t=<k> in=<bits> fired=<id,...> states=<id,...>`, then
    /// `accepted=<true|false>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            write!(f, "t={} in={} fired=", i + 1, step.input)?;
            write_ids(f, &step.fired)?;
            f.write_str(" states=")?;
            write_ids(f, &step.states)?;
            f.write_str("\n")?;
        }
        writeln!(f, "accepted={}", self.accepted)
    }
}

/// A compiled recognizer: perception-bit registry plus a guarded automaton.
#[derive(Debug, Clone)]
pub struct PerceptionMachine {
    dim: Dimension,
    spatial_bits: Vec<SpatialBit>,
    temporal_bits: Vec<TemporalBit>,
    top_bit: BitId,
    num_states: usize,
    initial: StateId,
    accepting: BTreeSet<StateId>,
    transitions: Vec<Transition>,
}

// automaton fragment under construction; the initial state never has
// incoming transitions, which keeps concatenation and union merges safe
struct Frag {
    num_states: usize,
    initial: usize,
    accepting: BTreeSet<usize>,
    transitions: Vec<(usize, BitId, usize)>,
}

impl Frag {
    fn atom(guard: BitId) -> Frag {
        Frag {
            num_states: 2,
            initial: 0,
            accepting: [1].into(),
            transitions: vec![(0, guard, 1)],
        }
    }

    // sequence: self then other, other's initial merged away
    fn concat(self, other: Frag) -> Frag {
        let mut remap = vec![usize::MAX; other.num_states];
        let mut next = self.num_states;
        for (s, slot) in remap.iter_mut().enumerate() {
            if s != other.initial {
                *slot = next;
                next += 1;
            }
        }
        let mut transitions = self.transitions;
        for (from, guard, to) in other.transitions {
            let to = remap[to];
            if from == other.initial {
                for &acc in &self.accepting {
                    transitions.push((acc, guard, to));
                }
            } else {
                transitions.push((remap[from], guard, to));
            }
        }
        Frag {
            num_states: next,
            initial: self.initial,
            accepting: other.accepting.iter().map(|&s| remap[s]).collect(),
            transitions,
        }
    }

    // alternation: both old initials collapse into one fresh initial
    fn union(self, other: Frag) -> Frag {
        let mut remap_a = vec![usize::MAX; self.num_states];
        let mut remap_b = vec![usize::MAX; other.num_states];
        let mut next = 1;
        remap_a[self.initial] = 0;
        remap_b[other.initial] = 0;
        for (s, slot) in remap_a.iter_mut().enumerate() {
            if s != self.initial {
                *slot = next;
                next += 1;
            }
        }
        for (s, slot) in remap_b.iter_mut().enumerate() {
            if s != other.initial {
                *slot = next;
                next += 1;
            }
        }
        let mut transitions = Vec::new();
        for (from, guard, to) in self.transitions {
            transitions.push((remap_a[from], guard, remap_a[to]));
        }
        for (from, guard, to) in other.transitions {
            transitions.push((remap_b[from], guard, remap_b[to]));
        }
        let accepting = self
            .accepting
            .iter()
            .map(|&s| remap_a[s])
            .chain(other.accepting.iter().map(|&s| remap_b[s]))
            .collect();
        Frag {
            num_states: next,
            initial: 0,
            accepting,
            transitions,
        }
    }
}

struct Builder {
    interp: Interpretation,
    spatial_bits: Vec<SpatialBit>,
    temporal_bits: Vec<TemporalBit>,
    next_id: usize,
}

enum Part {
    Spatial(BitId),
    General(Frag, Option<Vec<BitId>>),
}

impl Part {
    fn chain_elements(&self) -> Option<Vec<BitId>> {
        match self {
            Part::Spatial(bit) => Some(vec![*bit]),
            Part::General(_, chain) => chain.clone(),
        }
    }

    fn into_frag(self) -> Frag {
        match self {
            Part::Spatial(bit) => Frag::atom(bit),
            Part::General(frag, _) => frag,
        }
    }
}

impl Builder {
    fn fresh_id(&mut self) -> BitId {
        let id = BitId(self.next_id);
        self.next_id += 1;
        id
    }

    // one bit per spatial node, children before parents
    fn register_spatial(&mut self, e: &XForm) -> Result<BitId, Error> {
        match e.node() {
            XFormNode::Leaf(_) => {}
            XFormNode::Not(c) => {
                self.register_spatial(c)?;
            }
            XFormNode::And(l, r) | XFormNode::Or(l, r) => {
                self.register_spatial(l)?;
                self.register_spatial(r)?;
            }
            XFormNode::Next(_, _) => unreachable!("spatial subtrees contain no NEXT"),
        }
        let support = e.eval(self.interp)?;
        let id = self.fresh_id();
        self.spatial_bits.push(SpatialBit { id, support });
        Ok(id)
    }

    fn build(&mut self, e: &XForm) -> Result<Part, Error> {
        if e.kind() == XFormKind::Spatial {
            return Ok(Part::Spatial(self.register_spatial(e)?));
        }
        match e.node() {
            XFormNode::Or(l, r) => {
                let left = self.build(l)?;
                let right = self.build(r)?;
                let frag = left.into_frag().union(right.into_frag());
                Ok(Part::General(frag, None))
            }
            XFormNode::Next(l, r) => {
                let left = self.build(l)?;
                let right = self.build(r)?;
                let chain = match (left.chain_elements(), right.chain_elements()) {
                    (Some(mut a), Some(b)) => {
                        a.extend(b);
                        let id = self.fresh_id();
                        self.temporal_bits.push(TemporalBit {
                            id,
                            chain: a.clone(),
                        });
                        Some(a)
                    }
                    _ => None,
                };
                let frag = left.into_frag().concat(right.into_frag());
                Ok(Part::General(frag, chain))
            }
            XFormNode::Leaf(_) | XFormNode::Not(_) | XFormNode::And(_, _) => {
                unreachable!("general forms have OR or NEXT at the root")
            }
        }
    }
}

/// Compile a form into a perception machine. Every spatial subexpression
/// contributes one spatial bit (supporting set: its denotation under
/// `interp`), every all-spatial NEXT chain one temporal bit, and the machine
/// gains a final output bit realized by automaton acceptance.
pub fn compile(e: &XForm, interp: Interpretation) -> Result<PerceptionMachine, Error> {
    let mut builder = Builder {
        interp,
        spatial_bits: Vec::new(),
        temporal_bits: Vec::new(),
        next_id: 0,
    };
    let part = builder.build(e)?;
    let frag = part.into_frag();
    let top_bit = builder.fresh_id();
    Ok(PerceptionMachine {
        dim: e.dim(),
        spatial_bits: builder.spatial_bits,
        temporal_bits: builder.temporal_bits,
        top_bit,
        num_states: frag.num_states,
        initial: StateId(frag.initial),
        accepting: frag.accepting.into_iter().map(StateId).collect(),
        transitions: frag
            .transitions
            .into_iter()
            .map(|(from, guard, to)| Transition {
                from: StateId(from),
                guard,
                to: StateId(to),
            })
            .collect(),
    })
}

impl PerceptionMachine {
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn spatial_bits(&self) -> &[SpatialBit] {
        &self.spatial_bits
    }

    pub fn temporal_bits(&self) -> &[TemporalBit] {
        &self.temporal_bits
    }

    /// The output perception bit; its value after a full input sequence
    /// equals automaton acceptance.
    pub fn top_bit(&self) -> BitId {
        self.top_bit
    }

    pub fn state_count(&self) -> usize {
        self.num_states
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn accepting_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    fn check_dim(&self, s: &SequenceInstance) -> Result<(), Error> {
        if s.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.get(),
                right: s.dim().get(),
            });
        }
        Ok(())
    }

    fn fired_bits(&self, input: &BasePattern) -> BTreeSet<BitId> {
        self.spatial_bits
            .iter()
            .filter(|bit| bit.fires(input))
            .map(|bit| bit.id)
            .collect()
    }

    fn step(&self, active: &BTreeSet<StateId>, fired: &BTreeSet<BitId>) -> BTreeSet<StateId> {
        self.transitions
            .iter()
            .filter(|t| active.contains(&t.from) && fired.contains(&t.guard))
            .map(|t| t.to)
            .collect()
    }

    /// Consume the whole sequence; `accepted` is whole-sequence membership in
    /// the compiled form's denotation.
    pub fn run(&self, s: &SequenceInstance) -> Result<RunTrace, Error> {
        self.check_dim(s)?;
        let mut active: BTreeSet<StateId> = [self.initial].into();
        let mut steps = Vec::with_capacity(s.len());
        for input in s.steps() {
            let fired = self.fired_bits(input);
            active = self.step(&active, &fired);
            steps.push(TraceStep {
                input: input.clone(),
                fired,
                states: active.clone(),
            });
        }
        let accepted = active.iter().any(|q| self.accepting.contains(q));
        Ok(RunTrace { steps, accepted })
    }

    /// Suffix detection: output t is true iff some suffix of the first t
    /// inputs is accepted (the machine restarted at every step, run in
    /// superposition).
    pub fn run_stream(&self, s: &SequenceInstance) -> Result<Vec<bool>, Error> {
        self.check_dim(s)?;
        let mut active: BTreeSet<StateId> = BTreeSet::new();
        let mut out = Vec::with_capacity(s.len());
        for input in s.steps() {
            active.insert(self.initial);
            let fired = self.fired_bits(input);
            active = self.step(&active, &fired);
            out.push(active.iter().any(|q| self.accepting.contains(q)));
        }
        Ok(out)
    }

    /// Witness for perception-bit existence on the bounded universe: the
    /// output bit when the machine is non-constant there (accepts some
    /// sequence and rejects some other), absent when constant.
    pub fn find_perception_bit(&self, bound: LengthBound) -> Result<Option<BitId>, Error> {
        let universe = enumerate_universe(self.dim, bound)?;
        let mut seen_accept = false;
        let mut seen_reject = false;
        for s in universe.iter() {
            if self.run(s)?.accepted {
                seen_accept = true;
            } else {
                seen_reject = true;
            }
            if seen_accept && seen_reject {
                return Ok(Some(self.top_bit));
            }
        }
        Ok(None)
    }

    /// A temporal perception bit, present exactly when the source form
    /// contained a NEXT.
    pub fn find_temporal_bit(&self) -> Option<BitId> {
        self.temporal_bits.first().map(|bit| bit.id)
    }
}
