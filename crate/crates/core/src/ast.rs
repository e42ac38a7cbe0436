//! The X-form expression language.
//!
//! An [`XForm`] is a tree over base-pattern leaves with the operators NOT,
//! AND, OR and NEXT. NOT and AND apply only to spatial subtrees; OR applies
//! anywhere; NEXT always yields a general form. Kind correctness is enforced
//! at construction, so every constructed tree evaluates to a finite pattern.
//!
//! A leaf's denotation is chosen by the caller through [`Interpretation`]:
//! under `Singleton` a leaf `b` denotes the one-element pattern `{[b]}`; under
//! `Mask` it denotes every base pattern whose 1-bits include b's 1-bits.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::pattern::{BasePattern, Dimension, ObjectivePattern, SequenceInstance};

/// Syntactic kind of a form: `Spatial` guarantees an all-length-1 denotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XFormKind {
    Spatial,
    General,
}

/// Leaf denotation: the literal singleton, or the set of base patterns
/// covering the leaf's 1-bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpretation {
    Singleton,
    Mask,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XFormNode {
    Leaf(BasePattern),
    Not(Box<XForm>),
    And(Box<XForm>, Box<XForm>),
    Or(Box<XForm>, Box<XForm>),
    Next(Box<XForm>, Box<XForm>),
}

/// A kind-correct expression tree; all leaves share one dimension.
#[derive(Clone, PartialEq, Eq)]
pub struct XForm {
    node: XFormNode,
    dim: Dimension,
    kind: XFormKind,
}

/// The distinct base patterns appearing as leaves of a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Footing(BTreeSet<BasePattern>);

impl Footing {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, base: &BasePattern) -> bool {
        self.0.contains(base)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasePattern> {
        self.0.iter()
    }
}

impl XForm {
    pub fn leaf(base: BasePattern) -> Self {
        let dim = base.dim();
        XForm {
            node: XFormNode::Leaf(base),
            dim,
            kind: XFormKind::Spatial,
        }
    }

    // a fallible constructor alongside or/and/next, not a negation of self
    #[allow(clippy::should_implement_trait)]
    pub fn not(child: XForm) -> Result<Self, Error> {
        if child.kind != XFormKind::Spatial {
            return Err(Error::Kind);
        }
        let dim = child.dim;
        Ok(XForm {
            node: XFormNode::Not(Box::new(child)),
            dim,
            kind: XFormKind::Spatial,
        })
    }

    pub fn and(left: XForm, right: XForm) -> Result<Self, Error> {
        if left.kind != XFormKind::Spatial || right.kind != XFormKind::Spatial {
            return Err(Error::Kind);
        }
        let dim = Self::joint_dim(&left, &right)?;
        Ok(XForm {
            node: XFormNode::And(Box::new(left), Box::new(right)),
            dim,
            kind: XFormKind::Spatial,
        })
    }

    pub fn or(left: XForm, right: XForm) -> Result<Self, Error> {
        let dim = Self::joint_dim(&left, &right)?;
        let kind = if left.kind == XFormKind::Spatial && right.kind == XFormKind::Spatial {
            XFormKind::Spatial
        } else {
            XFormKind::General
        };
        Ok(XForm {
            node: XFormNode::Or(Box::new(left), Box::new(right)),
            dim,
            kind,
        })
    }

    pub fn next(left: XForm, right: XForm) -> Result<Self, Error> {
        let dim = Self::joint_dim(&left, &right)?;
        Ok(XForm {
            node: XFormNode::Next(Box::new(left), Box::new(right)),
            dim,
            kind: XFormKind::General,
        })
    }

    fn joint_dim(left: &XForm, right: &XForm) -> Result<Dimension, Error> {
        if left.dim != right.dim {
            return Err(Error::DimensionMismatch {
                left: left.dim.get(),
                right: right.dim.get(),
            });
        }
        Ok(left.dim)
    }

    pub fn node(&self) -> &XFormNode {
        &self.node
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    /// Purely syntactic kind; `Spatial` implies an all-length-1 denotation.
    pub fn kind(&self) -> XFormKind {
        self.kind
    }

    /// The set of distinct leaf base patterns.
    pub fn footing(&self) -> Footing {
        let mut bases = BTreeSet::new();
        self.collect_footing(&mut bases);
        Footing(bases)
    }

    fn collect_footing(&self, out: &mut BTreeSet<BasePattern>) {
        match &self.node {
            XFormNode::Leaf(b) => {
                out.insert(b.clone());
            }
            XFormNode::Not(c) => c.collect_footing(out),
            XFormNode::And(l, r) | XFormNode::Or(l, r) | XFormNode::Next(l, r) => {
                l.collect_footing(out);
                r.collect_footing(out);
            }
        }
    }

    /// True iff the tree contains no NEXT.
    pub fn is_sx(&self) -> bool {
        match &self.node {
            XFormNode::Leaf(_) => true,
            XFormNode::Not(c) => c.is_sx(),
            XFormNode::And(l, r) | XFormNode::Or(l, r) => l.is_sx() && r.is_sx(),
            XFormNode::Next(_, _) => false,
        }
    }

    /// True iff the form is a NEXT-chain of two or more sX-forms, flattened
    /// under NEXT-associativity regardless of parenthesization.
    pub fn is_tx(&self) -> bool {
        let elements = self.next_chain();
        elements.len() >= 2 && elements.iter().all(|e| e.is_sx())
    }

    /// The maximal flattening of this form under NEXT at the root: `a -> b ->
    /// c` yields `[a, b, c]` however it was parenthesized. A form without a
    /// root NEXT flattens to itself alone.
    pub fn next_chain(&self) -> Vec<&XForm> {
        let mut elements = Vec::new();
        fn walk<'a>(e: &'a XForm, out: &mut Vec<&'a XForm>) {
            match &e.node {
                XFormNode::Next(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                _ => out.push(e),
            }
        }
        walk(self, &mut elements);
        elements
    }

    /// Denotation: structural recursion mapping each operator to its set
    /// counterpart. Complement (and the `Mask` leaf reading) materializes the
    /// 2^n base-pattern space, so those reject oversized dimensions.
    pub fn eval(&self, interp: Interpretation) -> Result<ObjectivePattern, Error> {
        match &self.node {
            XFormNode::Leaf(b) => match interp {
                Interpretation::Singleton => {
                    Ok(ObjectivePattern::singleton(SequenceInstance::of_base(b.clone())))
                }
                Interpretation::Mask => {
                    let size = self.dim.space_size()?;
                    let covering = (0..size)
                        .map(|i| BasePattern::from_index(self.dim, i))
                        .filter(|x| x.covers(b));
                    ObjectivePattern::from_bases(self.dim, covering)
                }
            },
            XFormNode::Not(c) => c.eval(interp)?.complement_spatial(),
            XFormNode::And(l, r) => l.eval(interp)?.intersect(&r.eval(interp)?),
            XFormNode::Or(l, r) => l.eval(interp)?.union(&r.eval(interp)?),
            XFormNode::Next(l, r) => l.eval(interp)?.concat(&r.eval(interp)?),
        }
    }
}

impl fmt::Debug for XForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XForm({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(s: &str) -> BasePattern {
        s.parse().unwrap()
    }

    fn leaf(s: &str) -> XForm {
        XForm::leaf(base(s))
    }

    fn spatial_pat(n: usize, bases: &[&str]) -> ObjectivePattern {
        ObjectivePattern::from_bases(
            Dimension::new(n).unwrap(),
            bases.iter().map(|s| base(s)),
        )
        .unwrap()
    }

    #[test]
    fn kinds_follow_the_operator_rules() {
        let or = XForm::or(leaf("01"), leaf("10")).unwrap();
        assert_eq!(or.kind(), XFormKind::Spatial);

        let next = XForm::next(leaf("0"), leaf("1")).unwrap();
        assert_eq!(next.kind(), XFormKind::General);

        let mixed = XForm::or(XForm::next(leaf("0"), leaf("1")).unwrap(), leaf("0")).unwrap();
        assert_eq!(mixed.kind(), XFormKind::General);
    }

    #[test]
    fn not_and_reject_general_children() {
        let next = XForm::next(leaf("0"), leaf("1")).unwrap();
        assert!(matches!(XForm::not(next.clone()), Err(Error::Kind)));
        assert!(matches!(XForm::and(next, leaf("0")), Err(Error::Kind)));
    }

    #[test]
    fn construction_rejects_mixed_dimensions() {
        assert!(matches!(
            XForm::or(leaf("0"), leaf("00")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn footing_collapses_duplicates() {
        // (#01 . !#10) + #01
        let e = XForm::or(
            XForm::and(leaf("01"), XForm::not(leaf("10")).unwrap()).unwrap(),
            leaf("01"),
        )
        .unwrap();
        let footing = e.footing();
        assert_eq!(footing.len(), 2);
        assert!(footing.contains(&base("01")));
        assert!(footing.contains(&base("10")));

        assert_eq!(leaf("0").footing().len(), 1);
    }

    #[test]
    fn sx_and_tx_classification() {
        // !#0 + (#1 . #1)
        let sx = XForm::or(
            XForm::not(leaf("0")).unwrap(),
            XForm::and(leaf("1"), leaf("1")).unwrap(),
        )
        .unwrap();
        assert!(sx.is_sx());
        assert!(!sx.is_tx());

        // (#0 + #1) -> #1 -> #0, any parenthesization
        let chain = XForm::next(
            XForm::next(XForm::or(leaf("0"), leaf("1")).unwrap(), leaf("1")).unwrap(),
            leaf("0"),
        )
        .unwrap();
        assert!(chain.is_tx());
        assert!(!chain.is_sx());
        let rechain = XForm::next(
            XForm::or(leaf("0"), leaf("1")).unwrap(),
            XForm::next(leaf("1"), leaf("0")).unwrap(),
        )
        .unwrap();
        assert!(rechain.is_tx());

        // (#0 -> #1) + #0: neither purely spatial nor a chain
        let general = XForm::or(XForm::next(leaf("0"), leaf("1")).unwrap(), leaf("0")).unwrap();
        assert!(!general.is_sx());
        assert!(!general.is_tx());
    }

    #[test]
    fn eval_singleton_examples() {
        let or = XForm::or(leaf("01"), leaf("10")).unwrap();
        assert_eq!(
            or.eval(Interpretation::Singleton).unwrap(),
            spatial_pat(2, &["01", "10"])
        );

        // #1 -> (#0 + #1)
        let e = XForm::next(leaf("1"), XForm::or(leaf("0"), leaf("1")).unwrap()).unwrap();
        let result = e.eval(Interpretation::Singleton).unwrap();
        assert_eq!(result.len(), 2);
        let listed: Vec<String> = result.iter().map(|s| s.to_string()).collect();
        assert_eq!(listed, vec!["1 0", "1 1"]);
    }

    #[test]
    fn eval_mask_examples() {
        // oracle: Mask(#10) over PS^0_2 = {10, 11}, so !#10 = {00, 01}
        let mask_leaf = leaf("10").eval(Interpretation::Mask).unwrap();
        assert_eq!(mask_leaf, spatial_pat(2, &["10", "11"]));

        let e = XForm::not(leaf("10")).unwrap();
        assert_eq!(
            e.eval(Interpretation::Mask).unwrap(),
            spatial_pat(2, &["00", "01"])
        );
    }

    #[test]
    fn mask_of_all_ones_is_the_singleton() {
        let m = leaf("111").eval(Interpretation::Mask).unwrap();
        assert_eq!(m, spatial_pat(3, &["111"]));
    }

    #[test]
    fn spatial_kind_implies_spatial_denotation() {
        let e = XForm::or(
            XForm::and(leaf("01"), XForm::not(leaf("10")).unwrap()).unwrap(),
            leaf("11"),
        )
        .unwrap();
        assert_eq!(e.kind(), XFormKind::Spatial);
        for interp in [Interpretation::Singleton, Interpretation::Mask] {
            assert!(e.eval(interp).unwrap().is_spatial());
        }
    }

    #[test]
    fn mask_guard_rejects_wide_dimensions() {
        let d = Dimension::new(30).unwrap();
        let wide = XForm::leaf(BasePattern::zeros(d));
        assert!(matches!(
            wide.eval(Interpretation::Mask),
            Err(Error::EnumerationGuard { .. })
        ));
        assert!(wide.eval(Interpretation::Singleton).is_ok());
    }
}
