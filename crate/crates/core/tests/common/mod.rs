//! Shared test helpers: an independent naive model of patterns and
//! evaluation, plus seeded random generators for patterns and forms.
//!
//! The naive model stores base patterns as `Vec<bool>`, sequences as vectors
//! of those, and patterns as ordered sets. It shares no code with the library
//! representation, so agreement between the two is meaningful.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;

use xform_core::{
    BasePattern, Dimension, Interpretation, ObjectivePattern, SequenceInstance, XForm, XFormNode,
};

pub type NBase = Vec<bool>;
pub type NSeq = Vec<NBase>;
pub type NPat = BTreeSet<NSeq>;

/// All 2^n base patterns, built by repeated doubling rather than bit
/// arithmetic.
pub fn all_bases(n: usize) -> Vec<NBase> {
    let mut result: Vec<NBase> = vec![Vec::new()];
    for _ in 0..n {
        result = result
            .into_iter()
            .flat_map(|prefix| {
                [false, true].into_iter().map(move |bit| {
                    let mut next = prefix.clone();
                    next.push(bit);
                    next
                })
            })
            .collect();
    }
    result
}

/// All sequences of length 1..=l_max as a naive pattern.
pub fn all_sequences(n: usize, l_max: usize) -> NPat {
    let bases = all_bases(n);
    let mut out = NPat::new();
    let mut current: Vec<NSeq> = vec![Vec::new()];
    for _ in 0..l_max {
        current = current
            .into_iter()
            .flat_map(|prefix| {
                bases.iter().map(move |b| {
                    let mut next = prefix.clone();
                    next.push(b.clone());
                    next
                })
            })
            .collect();
        out.extend(current.iter().cloned());
    }
    out
}

pub fn to_naive_base(b: &BasePattern) -> NBase {
    b.bits().collect()
}

pub fn to_naive_seq(s: &SequenceInstance) -> NSeq {
    s.steps().iter().map(to_naive_base).collect()
}

pub fn to_naive(p: &ObjectivePattern) -> NPat {
    p.iter().map(to_naive_seq).collect()
}

pub fn from_naive(n: usize, p: &NPat) -> ObjectivePattern {
    let dim = Dimension::new(n).unwrap();
    ObjectivePattern::from_instances(
        dim,
        p.iter().map(|s| {
            SequenceInstance::new(
                s.iter()
                    .map(|b| BasePattern::from_bits(dim, b).unwrap())
                    .collect(),
            )
            .unwrap()
        }),
    )
    .unwrap()
}

fn naive_covers(x: &NBase, mask: &NBase) -> bool {
    x.iter().zip(mask.iter()).all(|(&xi, &mi)| !mi || xi)
}

fn naive_complement_spatial(n: usize, p: &NPat) -> NPat {
    all_bases(n)
        .into_iter()
        .map(|b| vec![b])
        .filter(|s| !p.contains(s))
        .collect()
}

fn naive_concat(a: &NPat, b: &NPat) -> NPat {
    let mut out = NPat::new();
    for left in a {
        for right in b {
            let mut joined = left.clone();
            joined.extend(right.iter().cloned());
            out.insert(joined);
        }
    }
    out
}

/// Independent evaluator over the naive model.
pub fn naive_eval(e: &XForm, interp: Interpretation) -> NPat {
    let n = e.dim().get();
    match e.node() {
        XFormNode::Leaf(b) => {
            let mask = to_naive_base(b);
            match interp {
                Interpretation::Singleton => [vec![mask]].into_iter().collect(),
                Interpretation::Mask => all_bases(n)
                    .into_iter()
                    .filter(|x| naive_covers(x, &mask))
                    .map(|x| vec![x])
                    .collect(),
            }
        }
        XFormNode::Not(c) => naive_complement_spatial(n, &naive_eval(c, interp)),
        XFormNode::And(l, r) => naive_eval(l, interp)
            .intersection(&naive_eval(r, interp))
            .cloned()
            .collect(),
        XFormNode::Or(l, r) => naive_eval(l, interp)
            .union(&naive_eval(r, interp))
            .cloned()
            .collect(),
        XFormNode::Next(l, r) => naive_concat(&naive_eval(l, interp), &naive_eval(r, interp)),
    }
}

pub fn random_base(rng: &mut StdRng, dim: Dimension) -> BasePattern {
    let bits: Vec<bool> = (0..dim.get()).map(|_| rng.gen()).collect();
    BasePattern::from_bits(dim, &bits).unwrap()
}

pub fn random_sequence(rng: &mut StdRng, dim: Dimension, max_len: usize) -> SequenceInstance {
    let len = rng.gen_range(1..=max_len);
    SequenceInstance::new((0..len).map(|_| random_base(rng, dim)).collect()).unwrap()
}

/// A random pattern of up to `max_instances` sequences of length
/// 1..=max_len; may be empty.
pub fn random_pattern(
    rng: &mut StdRng,
    dim: Dimension,
    max_len: usize,
    max_instances: usize,
) -> ObjectivePattern {
    let count = rng.gen_range(0..=max_instances);
    ObjectivePattern::from_instances(
        dim,
        (0..count).map(|_| random_sequence(rng, dim, max_len)),
    )
    .unwrap()
}

/// A random nonempty pattern.
pub fn random_nonempty_pattern(
    rng: &mut StdRng,
    dim: Dimension,
    max_len: usize,
    max_instances: usize,
) -> ObjectivePattern {
    let count = rng.gen_range(1..=max_instances);
    ObjectivePattern::from_instances(
        dim,
        (0..count).map(|_| random_sequence(rng, dim, max_len)),
    )
    .unwrap()
}

/// A random kind-correct X-form of the given maximum depth. With
/// `spatial_only` the tree avoids NEXT entirely.
pub fn random_form(rng: &mut StdRng, dim: Dimension, depth: usize, spatial_only: bool) -> XForm {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return XForm::leaf(random_base(rng, dim));
    }
    if spatial_only {
        match rng.gen_range(0..3) {
            0 => XForm::not(random_form(rng, dim, depth - 1, true)).unwrap(),
            1 => XForm::and(
                random_form(rng, dim, depth - 1, true),
                random_form(rng, dim, depth - 1, true),
            )
            .unwrap(),
            _ => XForm::or(
                random_form(rng, dim, depth - 1, true),
                random_form(rng, dim, depth - 1, true),
            )
            .unwrap(),
        }
    } else {
        match rng.gen_range(0..5) {
            0 => XForm::not(random_form(rng, dim, depth - 1, true)).unwrap(),
            1 => XForm::and(
                random_form(rng, dim, depth - 1, true),
                random_form(rng, dim, depth - 1, true),
            )
            .unwrap(),
            2 => XForm::or(
                random_form(rng, dim, depth - 1, false),
                random_form(rng, dim, depth - 1, false),
            )
            .unwrap(),
            _ => XForm::next(
                random_form(rng, dim, depth - 1, false),
                random_form(rng, dim, depth - 1, false),
            )
            .unwrap(),
        }
    }
}

pub fn node_count(e: &XForm) -> usize {
    match e.node() {
        XFormNode::Leaf(_) => 1,
        XFormNode::Not(c) => 1 + node_count(c),
        XFormNode::And(l, r) | XFormNode::Or(l, r) | XFormNode::Next(l, r) => {
            1 + node_count(l) + node_count(r)
        }
    }
}

/// Upper bound on the denotation size under either interpretation. NEXT
/// multiplies its operands' sizes, so unconstrained random trees can denote
/// astronomically large sets; generators reject those.
pub fn denotation_bound(e: &XForm) -> u128 {
    let n = e.dim().get() as u32;
    match e.node() {
        XFormNode::Leaf(b) => 1u128 << (n - b.count_ones() as u32),
        XFormNode::Not(_) => 1u128 << n,
        XFormNode::And(l, r) => denotation_bound(l).min(denotation_bound(r)),
        XFormNode::Or(l, r) => denotation_bound(l).saturating_add(denotation_bound(r)),
        XFormNode::Next(l, r) => denotation_bound(l).saturating_mul(denotation_bound(r)),
    }
}

/// A random kind-correct form whose denotation is guaranteed to stay at or
/// under `limit` instances; resamples until one qualifies.
pub fn random_bounded_form(
    rng: &mut StdRng,
    dim: Dimension,
    depth: usize,
    limit: u128,
) -> XForm {
    loop {
        let e = random_form(rng, dim, depth, false);
        if denotation_bound(&e) <= limit {
            return e;
        }
    }
}
