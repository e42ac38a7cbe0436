//! Base patterns, sequences and finite pattern sets.
//!
//! A [`BasePattern`] is one N-dimensional binary vector. A [`SequenceInstance`]
//! is a nonempty ordered list of base patterns sharing one dimension. An
//! [`ObjectivePattern`] is a finite set of such sequences; it is *spatial* when
//! every instance has length 1. The four operators are plain set algebra plus
//! concatenation: [`union`](ObjectivePattern::union),
//! [`intersect`](ObjectivePattern::intersect), complement (spatial or bounded)
//! and [`concat`](ObjectivePattern::concat).
//!
//! The space of all sequences is infinite, so both complements are taken
//! inside an explicit finite universe: the 2^n single-step space for
//! [`complement_spatial`](ObjectivePattern::complement_spatial), and the
//! length-capped universe of [`enumerate_universe`] for
//! [`complement_bounded`](ObjectivePattern::complement_bounded).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Widest dimension for which the full 2^n base-pattern space may be
/// materialized (complements, mask denotations, universe enumeration).
/// Purely set-based operations accept any dimension.
pub const MAX_ENUM_DIM: usize = 24;

/// Default cap on how many instances a bounded enumeration may materialize.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// Number of binary components per base pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Size of the base-pattern space 2^n, or an enumeration-guard error when
    /// the space is too wide to materialize.
    pub fn space_size(self) -> Result<u64, Error> {
        if self.0 > MAX_ENUM_DIM {
            return Err(Error::EnumerationGuard {
                requested: saturating_pow2(self.0),
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        Ok(1u64 << self.0)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn saturating_pow2(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        1u128 << n
    }
}

/// One N-dimensional binary vector; component 1 is the leftmost bit of the
/// textual form, so `#01` has component 1 = 0 and component 2 = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasePattern {
    dim: Dimension,
    // component i+1 lives at bit i of words[i / 64]; unused high bits are 0
    words: Box<[u64]>,
}

impl BasePattern {
    pub fn zeros(dim: Dimension) -> Self {
        let len = dim.get().div_ceil(64);
        BasePattern {
            dim,
            words: vec![0u64; len].into_boxed_slice(),
        }
    }

    /// The coordinate generator u_i: 1 at component `index` (0-based), 0 elsewhere.
    pub fn unit(dim: Dimension, index: usize) -> Self {
        assert!(index < dim.get(), "component index out of range");
        let mut p = Self::zeros(dim);
        p.words[index / 64] |= 1u64 << (index % 64);
        p
    }

    pub fn from_bits(dim: Dimension, bits: &[bool]) -> Result<Self, Error> {
        if bits.len() != dim.get() {
            return Err(Error::DimensionMismatch {
                left: dim.get(),
                right: bits.len(),
            });
        }
        let mut p = Self::zeros(dim);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                p.words[i / 64] |= 1u64 << (i % 64);
            }
        }
        Ok(p)
    }

    /// Decode an index into a base pattern so that counting 0..2^n yields the
    /// patterns in lexicographic bitstring order (component 1 is the most
    /// significant digit). Requires an enumerable dimension.
    pub fn from_index(dim: Dimension, index: u64) -> Self {
        let n = dim.get();
        debug_assert!(n <= MAX_ENUM_DIM && index < (1u64 << n));
        let mut p = Self::zeros(dim);
        for i in 0..n {
            if (index >> (n - 1 - i)) & 1 == 1 {
                p.words[i / 64] |= 1u64 << (i % 64);
            }
        }
        p
    }

    /// Inverse of [`from_index`](Self::from_index).
    pub fn to_index(&self) -> u64 {
        let n = self.dim.get();
        debug_assert!(n <= MAX_ENUM_DIM);
        let mut index = 0u64;
        for i in 0..n {
            if self.bit(i) {
                index |= 1 << (n - 1 - i);
            }
        }
        index
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    /// Component `index + 1`, 0-based.
    pub fn bit(&self, index: usize) -> bool {
        debug_assert!(index < self.dim.get());
        (self.words[index / 64] >> (index % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when every 1-bit of `mask` is also set here (`self AND mask == mask`).
    pub fn covers(&self, mask: &BasePattern) -> bool {
        debug_assert_eq!(self.dim, mask.dim);
        self.words
            .iter()
            .zip(mask.words.iter())
            .all(|(s, m)| s & m == *m)
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.dim.get()).map(move |i| self.bit(i))
    }
}

impl PartialOrd for BasePattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasePattern {
    /// Lexicographic on the bitstring text, component 1 first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.bits().cmp(other.bits()))
    }
}

impl fmt::Display for BasePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BasePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self)
    }
}

impl FromStr for BasePattern {
    type Err = Error;

    /// Parse a bare bitstring such as `01`; the leftmost character is component 1.
    fn from_str(s: &str) -> Result<Self, Error> {
        let dim = Dimension::new(s.len())?;
        let mut p = BasePattern::zeros(dim);
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => p.words[i / 64] |= 1u64 << (i % 64),
                _ => return Err(Error::InvalidBitstring { found: c }),
            }
        }
        Ok(p)
    }
}

/// A nonempty ordered list of base patterns sharing one dimension.
// len() is never 0, so there is no is_empty to offer
#[allow(clippy::len_without_is_empty)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SequenceInstance {
    steps: Vec<BasePattern>,
}

impl SequenceInstance {
    pub fn new(steps: Vec<BasePattern>) -> Result<Self, Error> {
        let first = steps.first().ok_or(Error::EmptySequence)?;
        let dim = first.dim();
        for step in &steps {
            if step.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim.get(),
                    right: step.dim().get(),
                });
            }
        }
        Ok(SequenceInstance { steps })
    }

    /// A base pattern viewed as the length-1 sequence `[b]`.
    pub fn of_base(base: BasePattern) -> Self {
        SequenceInstance { steps: vec![base] }
    }

    pub fn dim(&self) -> Dimension {
        self.steps[0].dim()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[BasePattern] {
        &self.steps
    }

    /// `[self -> other]`: this sequence followed by the other.
    pub fn concat(&self, other: &SequenceInstance) -> Result<SequenceInstance, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim().get(),
                right: other.dim().get(),
            });
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Ok(SequenceInstance { steps })
    }
}

impl PartialOrd for SequenceInstance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SequenceInstance {
    /// Shorter sequences first, then lexicographic over the steps.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.steps.cmp(&other.steps))
    }
}

impl fmt::Display for SequenceInstance {
    /// One `.pat` line: whitespace-separated bitstrings, e.g. `01 10 00`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", step)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SequenceInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str("->")?;
            }
            write!(f, "{}", step)?;
        }
        write!(f, "]")
    }
}

/// Maximum sequence length for bounded-universe operations, together with the
/// cap on how many instances the bounded universe may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthBound {
    l_max: usize,
    cap: u64,
}

impl LengthBound {
    pub fn new(l_max: usize) -> Result<Self, Error> {
        Self::with_cap(l_max, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(l_max: usize, cap: u64) -> Result<Self, Error> {
        if l_max == 0 {
            return Err(Error::ZeroBound);
        }
        Ok(LengthBound { l_max, cap })
    }

    pub fn l_max(self) -> usize {
        self.l_max
    }

    pub fn cap(self) -> u64 {
        self.cap
    }

    /// Number of sequences of length 1..=l_max over the given dimension, or an
    /// enumeration-guard error when it exceeds the cap.
    pub fn universe_size(self, dim: Dimension) -> Result<u64, Error> {
        let space = dim.space_size().map_err(|_| Error::EnumerationGuard {
            requested: saturating_pow2(dim.get()),
            cap: self.cap,
        })? as u128;
        let mut total: u128 = 0;
        let mut term: u128 = 1;
        for _ in 0..self.l_max {
            term *= space; // space <= 2^24 and total <= cap <= u64::MAX: no overflow
            total += term;
            if total > self.cap as u128 {
                return Err(Error::EnumerationGuard {
                    requested: total,
                    cap: self.cap,
                });
            }
        }
        Ok(total as u64)
    }
}

/// A finite set of sequences over one fixed dimension. Set semantics: inputs
/// listing an instance twice collapse silently.
#[derive(Clone, PartialEq, Eq)]
pub struct ObjectivePattern {
    dim: Dimension,
    instances: BTreeSet<SequenceInstance>,
}

impl ObjectivePattern {
    /// The empty pattern still carries a dimension; it is classified spatial.
    pub fn empty(dim: Dimension) -> Self {
        ObjectivePattern {
            dim,
            instances: BTreeSet::new(),
        }
    }

    pub fn from_instances<I>(dim: Dimension, instances: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = SequenceInstance>,
    {
        let mut set = BTreeSet::new();
        for instance in instances {
            if instance.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim.get(),
                    right: instance.dim().get(),
                });
            }
            set.insert(instance);
        }
        Ok(ObjectivePattern {
            dim,
            instances: set,
        })
    }

    pub fn singleton(instance: SequenceInstance) -> Self {
        let dim = instance.dim();
        let mut instances = BTreeSet::new();
        instances.insert(instance);
        ObjectivePattern { dim, instances }
    }

    /// The spatial pattern `{ [b] : b in bases }`.
    pub fn from_bases<I>(dim: Dimension, bases: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = BasePattern>,
    {
        Self::from_instances(dim, bases.into_iter().map(SequenceInstance::of_base))
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn contains(&self, instance: &SequenceInstance) -> bool {
        self.instances.contains(instance)
    }

    /// Instances in deterministic order: shorter first, then lexicographic.
    pub fn iter(&self) -> impl Iterator<Item = &SequenceInstance> {
        self.instances.iter()
    }

    /// True iff every instance has length 1. The empty pattern is spatial.
    pub fn is_spatial(&self) -> bool {
        self.instances.iter().all(|s| s.len() == 1)
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), Error> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.get(),
                right: other.dim.get(),
            });
        }
        Ok(())
    }

    /// OR: set union.
    pub fn union(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_dim(other)?;
        let mut instances = self.instances.clone();
        instances.extend(other.instances.iter().cloned());
        Ok(ObjectivePattern {
            dim: self.dim,
            instances,
        })
    }

    /// AND: set intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_dim(other)?;
        let instances = self
            .instances
            .intersection(&other.instances)
            .cloned()
            .collect();
        Ok(ObjectivePattern {
            dim: self.dim,
            instances,
        })
    }

    /// NOT inside the single-step space: exactly the `[b]` with `b` in 2^n
    /// base patterns and `[b]` not in this pattern.
    pub fn complement_spatial(&self) -> Result<Self, Error> {
        if let Some(longer) = self.instances.iter().find(|s| s.len() > 1) {
            return Err(Error::NotSpatial { len: longer.len() });
        }
        let size = self.dim.space_size()?;
        let mut instances = BTreeSet::new();
        for index in 0..size {
            let candidate = SequenceInstance::of_base(BasePattern::from_index(self.dim, index));
            if !self.instances.contains(&candidate) {
                instances.insert(candidate);
            }
        }
        Ok(ObjectivePattern {
            dim: self.dim,
            instances,
        })
    }

    /// NOT inside the universe of sequences of length 1..=l_max.
    pub fn complement_bounded(&self, bound: LengthBound) -> Result<Self, Error> {
        if let Some(longer) = self.instances.iter().find(|s| s.len() > bound.l_max()) {
            return Err(Error::BoundTooSmall {
                l_max: bound.l_max(),
                len: longer.len(),
            });
        }
        let universe = enumerate_universe(self.dim, bound)?;
        let instances = universe
            .instances
            .difference(&self.instances)
            .cloned()
            .collect();
        Ok(ObjectivePattern {
            dim: self.dim,
            instances,
        })
    }

    /// NEXT: every concatenation of one instance from `self` with one from `other`.
    pub fn concat(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_dim(other)?;
        let mut instances = BTreeSet::new();
        for left in &self.instances {
            for right in &other.instances {
                instances.insert(left.concat(right)?);
            }
        }
        Ok(ObjectivePattern {
            dim: self.dim,
            instances,
        })
    }
}

impl fmt::Debug for ObjectivePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{n={}", self.dim)?;
        for instance in &self.instances {
            write!(f, " {:?}", instance)?;
        }
        write!(f, "}}")
    }
}

/// Every sequence of length 1..=l_max over the given dimension.
pub fn enumerate_universe(dim: Dimension, bound: LengthBound) -> Result<ObjectivePattern, Error> {
    bound.universe_size(dim)?;
    let space = dim.space_size()?;
    let mut instances = BTreeSet::new();
    for len in 1..=bound.l_max() {
        // odometer over base-2^n digits, one digit per step
        let mut digits = vec![0u64; len];
        loop {
            let steps = digits
                .iter()
                .map(|&d| BasePattern::from_index(dim, d))
                .collect();
            instances.insert(SequenceInstance { steps });
            let mut pos = len;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < space {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Ok(ObjectivePattern { dim, instances })
}
