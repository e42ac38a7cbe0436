//! Constructive synthesis of X-forms for target patterns.
//!
//! Three constructions, one per pattern shape:
//!
//! * [`synth_sx_mask`]: any nonempty spatial pattern becomes a disjunction of
//!   minterms over the n coordinate generators, evaluated under `Mask`. The
//!   footing never exceeds n base patterns.
//! * [`synth_tx_projection`]: a same-length pattern becomes a NEXT-chain of
//!   per-position spatial forms. The chain denotes the product of the
//!   projections, so it is exact precisely when the target is such a product
//!   (a rectangle); otherwise it strictly overapproximates and the result is
//!   flagged inexact rather than returned silently.
//! * [`synth_x`]: any nonempty pattern is partitioned by instance length;
//!   each class goes through the projection chain, falling back to a
//!   disjunction of per-instance chains when the projection is inexact. The
//!   result is always exact.
//!
//! [`simplify`] shrinks a form without changing its denotation: double
//! negation, idempotence, absorption, removal of verified-empty or
//! verified-full subterms, and merging of adjacent minterms in coordinate
//! DNFs (the last under `Mask` only, where cube semantics hold).

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::{Interpretation, XForm, XFormKind, XFormNode};
use crate::error::Error;
use crate::pattern::{BasePattern, Dimension, ObjectivePattern, SequenceInstance};

/// Outcome of a synthesis run: the form, the interpretation it is meant to be
/// evaluated under, whether it denotes the target exactly, and its footing
/// size. `exact` can be false only for [`synth_tx_projection`].
#[derive(Debug, Clone)]
pub struct SynthResult {
    pub form: XForm,
    pub interp: Interpretation,
    pub exact: bool,
    pub footing_size: usize,
}

impl SynthResult {
    fn new(form: XForm, interp: Interpretation, exact: bool) -> Self {
        let footing_size = form.footing().len();
        SynthResult {
            form,
            interp,
            exact,
            footing_size,
        }
    }
}

/// The n unit base patterns u_i (1 at component i, 0 elsewhere). Under `Mask`
/// the generator u_i denotes every base pattern whose component i is 1.
#[derive(Debug, Clone)]
pub struct CoordinateGenerators {
    units: Vec<BasePattern>,
}

impl CoordinateGenerators {
    pub fn new(dim: Dimension) -> Self {
        let units = (0..dim.get()).map(|i| BasePattern::unit(dim, i)).collect();
        CoordinateGenerators { units }
    }

    pub fn units(&self) -> &[BasePattern] {
        &self.units
    }

    pub fn unit(&self, index: usize) -> &BasePattern {
        &self.units[index]
    }
}

fn require_spatial(target: &ObjectivePattern) -> Result<(), Error> {
    if let Some(longer) = target.iter().find(|s| s.len() > 1) {
        return Err(Error::NotSpatial { len: longer.len() });
    }
    Ok(())
}

fn or_all(mut forms: Vec<XForm>) -> XForm {
    let first = forms.remove(0);
    forms.into_iter().fold(first, |acc, f| {
        XForm::or(acc, f).expect("operands share one dimension")
    })
}

fn and_all(mut forms: Vec<XForm>) -> XForm {
    let first = forms.remove(0);
    forms.into_iter().fold(first, |acc, f| {
        XForm::and(acc, f).expect("spatial operands share one dimension")
    })
}

fn next_all(mut forms: Vec<XForm>) -> XForm {
    let first = forms.remove(0);
    forms.into_iter().fold(first, |acc, f| {
        XForm::next(acc, f).expect("operands share one dimension")
    })
}

/// The minterm selecting exactly `base` under `Mask`: for each coordinate,
/// the generator u_i when the bit is 1 and its negation when 0.
fn minterm(base: &BasePattern, generators: &CoordinateGenerators) -> XForm {
    let factors = (0..base.dim().get())
        .map(|i| {
            let unit = XForm::leaf(generators.unit(i).clone());
            if base.bit(i) {
                unit
            } else {
                XForm::not(unit).expect("a leaf is spatial")
            }
        })
        .collect();
    and_all(factors)
}

/// A spatial form denoting exactly `{[base]}` under the given interpretation.
fn sx_for_base(
    base: &BasePattern,
    interp: Interpretation,
    generators: &CoordinateGenerators,
) -> XForm {
    match interp {
        Interpretation::Singleton => XForm::leaf(base.clone()),
        Interpretation::Mask => minterm(base, generators),
    }
}

fn sx_form_for(
    target: &ObjectivePattern,
    interp: Interpretation,
    generators: &CoordinateGenerators,
) -> XForm {
    let members: Vec<XForm> = target
        .iter()
        .map(|s| sx_for_base(&s.steps()[0], interp, generators))
        .collect();
    or_all(members)
}

/// Express a nonempty spatial pattern as a minterm DNF over the coordinate
/// generators, exact under `Mask` with footing at most n. With `allow_empty`
/// the empty pattern yields the contradiction `u_1 . !u_1`; by default it is
/// rejected.
pub fn synth_sx_mask(
    target: &ObjectivePattern,
    allow_empty: bool,
) -> Result<SynthResult, Error> {
    require_spatial(target)?;
    target.dim().space_size()?;
    let generators = CoordinateGenerators::new(target.dim());
    let form = if target.is_empty() {
        if !allow_empty {
            return Err(Error::EmptyTarget);
        }
        let unit = XForm::leaf(generators.unit(0).clone());
        XForm::and(unit.clone(), XForm::not(unit).expect("leaf is spatial"))
            .expect("operands are spatial")
    } else {
        sx_form_for(target, Interpretation::Mask, &generators)
    };
    let denotation = form.eval(Interpretation::Mask)?;
    assert_eq!(
        &denotation, target,
        "minterm DNF must denote its target exactly"
    );
    Ok(SynthResult::new(form, Interpretation::Mask, true))
}

/// Express a nonempty spatial pattern as a disjunction of its own members
/// under `Singleton`. Exact, but the footing is as large as the target, so
/// this is the baseline the mask construction improves on.
pub fn synth_sx_singleton(target: &ObjectivePattern) -> Result<SynthResult, Error> {
    require_spatial(target)?;
    if target.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let generators = CoordinateGenerators::new(target.dim());
    let form = sx_form_for(target, Interpretation::Singleton, &generators);
    let denotation = form.eval(Interpretation::Singleton)?;
    assert_eq!(
        &denotation, target,
        "a disjunction of members denotes its target exactly"
    );
    Ok(SynthResult::new(form, Interpretation::Singleton, true))
}

fn synth_spatial(
    target: &ObjectivePattern,
    interp: Interpretation,
) -> Result<SynthResult, Error> {
    match interp {
        Interpretation::Singleton => synth_sx_singleton(target),
        Interpretation::Mask => synth_sx_mask(target, false),
    }
}

fn uniform_length(target: &ObjectivePattern) -> Result<usize, Error> {
    let mut lengths = target.iter().map(|s| s.len());
    let first = lengths.next().ok_or(Error::EmptyTarget)?;
    for len in lengths {
        if len != first {
            return Err(Error::MixedLengths {
                first,
                second: len,
            });
        }
    }
    Ok(first)
}

/// Per-position projections of a same-length pattern, each a spatial pattern.
fn projections(target: &ObjectivePattern, len: usize) -> Vec<ObjectivePattern> {
    (0..len)
        .map(|i| {
            let bases: BTreeSet<BasePattern> = target
                .iter()
                .map(|s| s.steps()[i].clone())
                .collect();
            ObjectivePattern::from_bases(target.dim(), bases)
                .expect("projection shares the target dimension")
        })
        .collect()
}

/// Express a same-length pattern as the NEXT-chain of its per-position
/// projections. The chain always denotes a superset of the target; `exact` is
/// true iff the target equals the full product of its projections.
pub fn synth_tx_projection(
    target: &ObjectivePattern,
    interp: Interpretation,
) -> Result<SynthResult, Error> {
    let len = uniform_length(target)?;
    let parts: Vec<XForm> = projections(target, len)
        .iter()
        .map(|p| synth_spatial(p, interp).map(|r| r.form))
        .collect::<Result<_, _>>()?;
    let form = next_all(parts);
    let denotation = form.eval(interp)?;
    assert!(
        target.iter().all(|s| denotation.contains(s)),
        "the projection chain must cover its target"
    );
    let exact = denotation == *target;
    Ok(SynthResult::new(form, interp, exact))
}

/// Express any nonempty pattern exactly: partition by instance length, chain
/// the projections of each class, and fall back to a disjunction of
/// per-instance chains for classes the projection overapproximates.
pub fn synth_x(
    target: &ObjectivePattern,
    interp: Interpretation,
) -> Result<SynthResult, Error> {
    if target.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let generators = CoordinateGenerators::new(target.dim());
    let mut classes: BTreeMap<usize, Vec<SequenceInstance>> = BTreeMap::new();
    for instance in target.iter() {
        classes
            .entry(instance.len())
            .or_default()
            .push(instance.clone());
    }

    let mut class_forms = Vec::new();
    for instances in classes.values() {
        let class = ObjectivePattern::from_instances(target.dim(), instances.iter().cloned())
            .expect("instances share the target dimension");
        let projected = synth_tx_projection(&class, interp)?;
        if projected.exact {
            class_forms.push(projected.form);
        } else {
            let chains: Vec<XForm> = class
                .iter()
                .map(|s| {
                    let steps: Vec<XForm> = s
                        .steps()
                        .iter()
                        .map(|b| sx_for_base(b, interp, &generators))
                        .collect();
                    next_all(steps)
                })
                .collect();
            class_forms.push(or_all(chains));
        }
    }
    let form = or_all(class_forms);
    let denotation = form.eval(interp)?;
    assert_eq!(
        &denotation, target,
        "length partition with per-instance fallback must be exact"
    );
    Ok(SynthResult::new(form, interp, true))
}

/// Denotation-preserving shrinking. Applies only double-negation elimination,
/// idempotence, absorption, removal of verified-empty/verified-full subterms,
/// and (under `Mask`) merging of adjacent minterms over unit generators. The
/// node count never increases. Subterm verification falls back to leaving the
/// tree alone when evaluation would trip the enumeration guard.
pub fn simplify(e: &XForm, interp: Interpretation) -> XForm {
    let reduced = simplify_rec(e, interp);
    if interp == Interpretation::Mask {
        merge_pass(&reduced)
    } else {
        reduced
    }
}

fn denotes_empty(e: &XForm, interp: Interpretation) -> bool {
    e.eval(interp).map(|p| p.is_empty()).unwrap_or(false)
}

fn denotes_full_space(e: &XForm, interp: Interpretation) -> bool {
    if e.kind() != XFormKind::Spatial {
        return false;
    }
    let Ok(size) = e.dim().space_size() else {
        return false;
    };
    e.eval(interp)
        .map(|p| p.len() as u64 == size)
        .unwrap_or(false)
}

fn simplify_rec(e: &XForm, interp: Interpretation) -> XForm {
    match e.node() {
        XFormNode::Leaf(_) => e.clone(),
        XFormNode::Not(c) => {
            let child = simplify_rec(c, interp);
            if let XFormNode::Not(inner) = child.node() {
                return (**inner).clone();
            }
            XForm::not(child).expect("child stays spatial")
        }
        XFormNode::And(l, r) => {
            let left = simplify_rec(l, interp);
            let right = simplify_rec(r, interp);
            if left == right {
                return left;
            }
            if denotes_empty(&left, interp) {
                return left;
            }
            if denotes_empty(&right, interp) {
                return right;
            }
            if denotes_full_space(&left, interp) {
                return right;
            }
            if denotes_full_space(&right, interp) {
                return left;
            }
            XForm::and(left, right).expect("children stay spatial")
        }
        XFormNode::Or(l, r) => {
            let left = simplify_rec(l, interp);
            let right = simplify_rec(r, interp);
            if left == right {
                return left;
            }
            if absorbs(&left, &right) {
                return left;
            }
            if absorbs(&right, &left) {
                return right;
            }
            if denotes_empty(&left, interp) {
                return right;
            }
            if denotes_empty(&right, interp) {
                return left;
            }
            if right.kind() == XFormKind::Spatial && denotes_full_space(&left, interp) {
                return left;
            }
            if left.kind() == XFormKind::Spatial && denotes_full_space(&right, interp) {
                return right;
            }
            XForm::or(left, right).expect("dimensions agree")
        }
        XFormNode::Next(l, r) => {
            let left = simplify_rec(l, interp);
            let right = simplify_rec(r, interp);
            if denotes_empty(&left, interp) {
                return left;
            }
            if denotes_empty(&right, interp) {
                return right;
            }
            XForm::next(left, right).expect("dimensions agree")
        }
    }
}

// a absorbs a . b (either operand)
fn absorbs(keeper: &XForm, dropped: &XForm) -> bool {
    match dropped.node() {
        XFormNode::And(a, b) => **a == *keeper || **b == *keeper,
        _ => false,
    }
}

type CubeTerm = BTreeMap<usize, bool>;

fn unit_coordinate(base: &BasePattern) -> Option<usize> {
    if base.count_ones() != 1 {
        return None;
    }
    (0..base.dim().get()).find(|&i| base.bit(i))
}

fn flatten<'a>(e: &'a XForm, want_or: bool, out: &mut Vec<&'a XForm>) {
    match e.node() {
        XFormNode::Or(l, r) if want_or => {
            flatten(l, true, out);
            flatten(r, true, out);
        }
        XFormNode::And(l, r) if !want_or => {
            flatten(l, false, out);
            flatten(r, false, out);
        }
        _ => out.push(e),
    }
}

fn as_cube_term(e: &XForm) -> Option<CubeTerm> {
    let mut literals = Vec::new();
    flatten(e, false, &mut literals);
    let mut term = CubeTerm::new();
    for literal in literals {
        let (coord, positive) = match literal.node() {
            XFormNode::Leaf(b) => (unit_coordinate(b)?, true),
            XFormNode::Not(c) => match c.node() {
                XFormNode::Leaf(b) => (unit_coordinate(b)?, false),
                _ => return None,
            },
            _ => return None,
        };
        if let Some(previous) = term.insert(coord, positive) {
            if previous != positive {
                // contradictory cube; leave it to the eval-based rules
                return None;
            }
        }
    }
    Some(term)
}

fn rebuild_dnf(terms: &BTreeSet<CubeTerm>, dim: Dimension) -> XForm {
    let generators = CoordinateGenerators::new(dim);
    let disjuncts: Vec<XForm> = terms
        .iter()
        .map(|term| {
            let literals: Vec<XForm> = term
                .iter()
                .map(|(&coord, &positive)| {
                    let unit = XForm::leaf(generators.unit(coord).clone());
                    if positive {
                        unit
                    } else {
                        XForm::not(unit).expect("leaf is spatial")
                    }
                })
                .collect();
            and_all(literals)
        })
        .collect();
    or_all(disjuncts)
}

/// Merge adjacent cubes in a DNF over unit generators: two terms identical
/// except for one coordinate's polarity collapse to the term without that
/// coordinate. Sound under `Mask` where u_i / !u_i denote the two half-spaces
/// of coordinate i. Terms are never merged down to the empty cube.
fn try_merge_unit_dnf(e: &XForm) -> Option<XForm> {
    let mut disjuncts = Vec::new();
    flatten(e, true, &mut disjuncts);
    if disjuncts.len() < 2 {
        return None;
    }
    let parsed: Option<Vec<CubeTerm>> = disjuncts.iter().map(|d| as_cube_term(d)).collect();
    let mut terms: BTreeSet<CubeTerm> = parsed?.into_iter().collect();
    let before = terms.len();

    let mut changed = true;
    while changed {
        changed = false;
        'scan: for term in terms.iter().cloned().collect::<Vec<_>>() {
            if term.len() < 2 {
                continue;
            }
            for (&coord, &positive) in &term {
                let mut twin = term.clone();
                twin.insert(coord, !positive);
                if twin != term && terms.contains(&twin) {
                    let mut merged = term.clone();
                    merged.remove(&coord);
                    terms.remove(&term);
                    terms.remove(&twin);
                    terms.insert(merged);
                    changed = true;
                    break 'scan;
                }
            }
        }
    }

    if terms.len() == before && terms.len() == disjuncts.len() {
        return None;
    }
    Some(rebuild_dnf(&terms, e.dim()))
}

fn merge_pass(e: &XForm) -> XForm {
    if let Some(merged) = try_merge_unit_dnf(e) {
        return merged;
    }
    match e.node() {
        XFormNode::Leaf(_) => e.clone(),
        XFormNode::Not(c) => XForm::not(merge_pass(c)).expect("child stays spatial"),
        XFormNode::And(l, r) => {
            XForm::and(merge_pass(l), merge_pass(r)).expect("children stay spatial")
        }
        XFormNode::Or(l, r) => XForm::or(merge_pass(l), merge_pass(r)).expect("dimensions agree"),
        XFormNode::Next(l, r) => {
            XForm::next(merge_pass(l), merge_pass(r)).expect("dimensions agree")
        }
    }
}
