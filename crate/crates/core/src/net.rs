//! Place/transition nets with optional inhibitor arcs.
//!
//! Arcs are unweighted: `pre` and `post` hold 0/1 vectors indexed by place in
//! declaration order. A net is *pure* when no transition carries inhibitor
//! entries; analyses that depend on monotonicity reject impure nets.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::omega::{OmegaNat, OmegaVector};

/// Index of a transition in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TransitionId(pub usize);

/// Token vector over the places of a net. Also used for plain vectors of ℕ^k.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Marking(Vec<u32>);

impl Marking {
    pub fn new(tokens: Vec<u32>) -> Self {
        Marking(tokens)
    }

    pub fn zero(dim: usize) -> Self {
        Marking(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Marking) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strict componentwise order: `≤` and not equal.
    pub fn lt(&self, other: &Marking) -> bool {
        self.le(other) && self != other
    }

    pub fn to_omega(&self) -> OmegaVector {
        OmegaVector::from(self)
    }

    /// Comma separated rendering used by the text formats (`1,0,2`).
    pub fn to_plain(&self) -> String {
        self.0.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

impl Deref for Marking {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for Marking {
    fn from(v: Vec<u32>) -> Self {
        Marking(v)
    }
}

impl<const N: usize> From<[u32; N]> for Marking {
    fn from(v: [u32; N]) -> Self {
        Marking(v.to_vec())
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_plain())
    }
}

impl FromStr for Marking {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if s.trim().is_empty() {
            return Ok(Marking(Vec::new()));
        }
        s.split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Marking)
            .map_err(|_| Error::InvalidVector(s.to_string()))
    }
}

/// Finite sequence of transitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FiringWord(Vec<TransitionId>);

impl FiringWord {
    pub fn new(ts: Vec<TransitionId>) -> Self {
        FiringWord(ts)
    }

    pub fn empty() -> Self {
        FiringWord(Vec::new())
    }

    pub fn push(&mut self, t: TransitionId) {
        self.0.push(t);
    }

    pub fn into_inner(self) -> Vec<TransitionId> {
        self.0
    }

    /// Transition names in order.
    pub fn names<'a>(&self, net: &'a Net) -> Vec<&'a str> {
        self.0.iter().map(|&t| net.transition_name(t)).collect()
    }

    pub fn render(&self, net: &Net) -> String {
        if self.0.is_empty() {
            "ε".to_string()
        } else {
            self.names(net).join(" ")
        }
    }
}

impl Deref for FiringWord {
    type Target = [TransitionId];

    fn deref(&self) -> &[TransitionId] {
        &self.0
    }
}

impl FromIterator<TransitionId> for FiringWord {
    fn from_iter<I: IntoIterator<Item = TransitionId>>(iter: I) -> Self {
        FiringWord(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    name: String,
    places: Vec<String>,
    transitions: Vec<String>,
    pre: Vec<Marking>,
    post: Vec<Marking>,
    inhibit: Vec<Vec<usize>>,
    initial: Marking,
}

impl Net {
    pub fn builder(name: impl Into<String>) -> NetBuilder {
        NetBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[String] {
        &self.transitions
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> + Clone {
        (0..self.transitions.len()).map(TransitionId)
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    /// Copy of the net with a different initial marking.
    pub fn with_initial(&self, initial: Marking) -> Result<Net> {
        self.check_marking(&initial)?;
        Ok(Net {
            initial,
            ..self.clone()
        })
    }

    /// `•t` as a 0/1 vector.
    pub fn pre(&self, t: TransitionId) -> &Marking {
        &self.pre[t.0]
    }

    /// `t•` as a 0/1 vector.
    pub fn post(&self, t: TransitionId) -> &Marking {
        &self.post[t.0]
    }

    /// Inhibitor entries `°t` as place indices.
    pub fn inhibitors(&self, t: TransitionId) -> &[usize] {
        &self.inhibit[t.0]
    }

    /// True when the net has no inhibitor arcs, i.e. it is a plain p/t-net.
    pub fn is_pure(&self) -> bool {
        self.inhibit.iter().all(Vec::is_empty)
    }

    pub fn transition(&self, name: &str) -> Result<TransitionId> {
        self.transitions
            .iter()
            .position(|t| t == name)
            .map(TransitionId)
            .ok_or_else(|| Error::UnknownTransition(name.to_string()))
    }

    pub fn place(&self, name: &str) -> Result<usize> {
        self.places
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPlace(name.to_string()))
    }

    pub fn transition_name(&self, t: TransitionId) -> &str {
        &self.transitions[t.0]
    }

    pub fn check_transition(&self, t: TransitionId) -> Result<()> {
        if t.0 < self.transitions.len() {
            Ok(())
        } else {
            Err(Error::TransitionIndex(t.0))
        }
    }

    pub fn check_marking(&self, m: &[u32]) -> Result<()> {
        if m.len() == self.places.len() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.places.len(),
                found: m.len(),
            })
        }
    }

    pub(crate) fn require_pure(&self, what: &'static str) -> Result<()> {
        if self.is_pure() {
            Ok(())
        } else {
            Err(Error::Unsupported(what))
        }
    }

    pub(crate) fn require_distinct(&self, a: TransitionId, b: TransitionId) -> Result<()> {
        self.check_transition(a)?;
        self.check_transition(b)?;
        if a == b {
            Err(Error::SameTransition(self.transition_name(a).to_string()))
        } else {
            Ok(())
        }
    }

    pub(crate) fn enabled_raw(&self, m: &[u32], t: TransitionId) -> bool {
        let pre = &self.pre[t.0];
        pre.iter().zip(m).all(|(&need, &have)| have >= need) && self.inhibit[t.0].iter().all(|&p| m[p] == 0)
    }

    pub(crate) fn fire_raw(&self, m: &[u32], t: TransitionId) -> Marking {
        let pre = &self.pre[t.0];
        let post = &self.post[t.0];
        Marking(
            m.iter()
                .zip(pre.iter().zip(post.iter()))
                .map(|(&x, (&i, &o))| x - i + o)
                .collect(),
        )
    }

    /// Whether `t` may fire at `m`.
    pub fn enabled(&self, m: &Marking, t: TransitionId) -> Result<bool> {
        self.check_transition(t)?;
        self.check_marking(m)?;
        Ok(self.enabled_raw(m, t))
    }

    /// Transitions enabled at `m`, in declaration order.
    pub fn enabled_transitions<'a>(&'a self, m: &'a [u32]) -> impl Iterator<Item = TransitionId> + 'a {
        self.transition_ids().filter(move |&t| self.enabled_raw(m, t))
    }

    /// `(m − •t) + t•`. The input marking is left untouched.
    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking> {
        if !self.enabled(m, t)? {
            return Err(Error::NotEnabled {
                marking: m.clone(),
                transition: self.transition_name(t).to_string(),
            });
        }
        Ok(self.fire_raw(m, t))
    }

    /// Fires `w` left to right; the empty word returns `m`.
    pub fn fire_word(&self, m: &Marking, w: &FiringWord) -> Result<Marking> {
        self.check_marking(m)?;
        let mut cur = m.clone();
        for (position, &t) in w.iter().enumerate() {
            self.check_transition(t)?;
            if !self.enabled_raw(&cur, t) {
                return Err(Error::WordNotFirable {
                    position,
                    transition: self.transition_name(t).to_string(),
                    marking: cur,
                });
            }
            cur = self.fire_raw(&cur, t);
        }
        Ok(cur)
    }

    /// Occurrence count of every transition in `w`.
    pub fn parikh(&self, w: &FiringWord) -> Vec<u32> {
        let mut counts = vec![0; self.transitions.len()];
        for t in w.iter() {
            counts[t.0] += 1;
        }
        counts
    }

    /// Whether firing `a` at `m` disables `b`.
    pub fn disables_at(&self, m: &Marking, a: TransitionId, b: TransitionId) -> Result<bool> {
        self.require_distinct(a, b)?;
        let after = self.fire(m, a)?;
        Ok(self.enabled_raw(m, b) && !self.enabled_raw(&after, b))
    }

    pub(crate) fn enabled_omega(&self, v: &[OmegaNat], t: TransitionId) -> bool {
        self.pre[t.0].iter().zip(v).all(|(&need, x)| *x >= OmegaNat::Nat(need))
            && self.inhibit[t.0].iter().all(|&p| v[p] == OmegaNat::Nat(0))
    }

    pub(crate) fn fire_omega(&self, v: &[OmegaNat], t: TransitionId) -> OmegaVector {
        let pre = &self.pre[t.0];
        let post = &self.post[t.0];
        v.iter()
            .zip(pre.iter().zip(post.iter()))
            .map(|(x, (&i, &o))| *x - i + o)
            .collect()
    }

    /// Incidence column `t• − •t`.
    pub(crate) fn effect(&self, t: TransitionId) -> Vec<i64> {
        self.pre[t.0]
            .iter()
            .zip(self.post[t.0].iter())
            .map(|(&i, &o)| o as i64 - i as i64)
            .collect()
    }
}

/// Incremental constructor that validates identifiers and arcs on `build`.
#[derive(Debug, Clone, Default)]
pub struct NetBuilder {
    name: String,
    places: Vec<(String, u32)>,
    transitions: Vec<TransitionSpec>,
}

#[derive(Debug, Clone)]
struct TransitionSpec {
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    inhibitors: Vec<String>,
}

impl NetBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn set_name(&mut self, name: impl Into<String>) -> &mut Self {
        self.name = name.into();
        self
    }

    pub fn place(mut self, name: impl Into<String>, tokens: u32) -> Self {
        self.add_place(name, tokens);
        self
    }

    pub fn add_place(&mut self, name: impl Into<String>, tokens: u32) -> &mut Self {
        self.places.push((name.into(), tokens));
        self
    }

    pub fn transition(mut self, name: impl Into<String>, inputs: &[&str], outputs: &[&str]) -> Self {
        self.add_transition(name, inputs, outputs, &[]);
        self
    }

    pub fn inhibitor_transition(
        mut self,
        name: impl Into<String>,
        inputs: &[&str],
        outputs: &[&str],
        inhibitors: &[&str],
    ) -> Self {
        self.add_transition(name, inputs, outputs, inhibitors);
        self
    }

    pub fn add_transition<S: AsRef<str>>(
        &mut self,
        name: impl Into<String>,
        inputs: &[S],
        outputs: &[S],
        inhibitors: &[S],
    ) -> &mut Self {
        let own = |xs: &[S]| xs.iter().map(|x| x.as_ref().to_string()).collect();
        self.transitions.push(TransitionSpec {
            name: name.into(),
            inputs: own(inputs),
            outputs: own(outputs),
            inhibitors: own(inhibitors),
        });
        self
    }

    pub fn build(self) -> Result<Net> {
        let mut seen = HashSet::new();
        for name in self
            .places
            .iter()
            .map(|(p, _)| p)
            .chain(self.transitions.iter().map(|t| &t.name))
        {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateIdentifier(name.clone()));
            }
        }
        let places: Vec<String> = self.places.iter().map(|(p, _)| p.clone()).collect();
        let index = |name: &str| {
            places
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| Error::UnknownPlace(name.to_string()))
        };
        let vector = |names: &[String]| -> Result<Marking> {
            let mut v = vec![0; places.len()];
            for n in names {
                v[index(n)?] = 1;
            }
            Ok(Marking(v))
        };

        let mut pre = Vec::with_capacity(self.transitions.len());
        let mut post = Vec::with_capacity(self.transitions.len());
        let mut inhibit = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            pre.push(vector(&t.inputs)?);
            post.push(vector(&t.outputs)?);
            let mut inh = t.inhibitors.iter().map(|n| index(n)).collect::<Result<Vec<_>>>()?;
            inh.sort_unstable();
            inh.dedup();
            inhibit.push(inh);
        }
        Ok(Net {
            name: self.name,
            initial: Marking(self.places.iter().map(|(_, n)| *n).collect()),
            places,
            transitions: self.transitions.into_iter().map(|t| t.name).collect(),
            pre,
            post,
            inhibit,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn t(net: &Net, name: &str) -> TransitionId {
        net.transition(name).unwrap()
    }

    #[test]
    fn enabledness_examples() {
        let n1 = corpus::n1();
        assert!(n1.enabled(&[1].into(), t(&n1, "a")).unwrap());
        let n3 = corpus::n3();
        assert!(!n3.enabled(&[0, 1].into(), t(&n3, "b")).unwrap());
        let n6 = corpus::n6();
        assert!(!n6.enabled(&[1, 1].into(), t(&n6, "b")).unwrap());
        assert!(n6.enabled(&[1, 0].into(), t(&n6, "b")).unwrap());
    }

    #[test]
    fn unknown_transition_is_an_identifier_error() {
        let n1 = corpus::n1();
        assert_eq!(n1.transition("zz"), Err(Error::UnknownTransition("zz".into())));
        assert_eq!(n1.enabled(&[1].into(), TransitionId(9)), Err(Error::TransitionIndex(9)));
    }

    #[test]
    fn firing_examples() {
        let n2 = corpus::n2();
        assert_eq!(n2.fire(&[1, 0].into(), t(&n2, "a")).unwrap(), [0, 1].into());
        let n3 = corpus::n3();
        assert_eq!(n3.fire(&[1, 0].into(), t(&n3, "b")).unwrap(), [1, 0].into());
        let n5 = corpus::n5();
        assert_eq!(n5.fire(&[1, 0].into(), t(&n5, "a")).unwrap(), [1, 1].into());
    }

    #[test]
    fn firing_a_disabled_transition_reports_marking_and_transition() {
        let n2 = corpus::n2();
        let err = n2.fire(&[1, 0].into(), t(&n2, "b")).unwrap_err();
        assert_eq!(
            err,
            Error::NotEnabled {
                marking: [1, 0].into(),
                transition: "b".into()
            }
        );
    }

    #[test]
    fn word_examples() {
        let n2 = corpus::n2();
        let w: FiringWord = [t(&n2, "a"), t(&n2, "b")].into_iter().collect();
        assert_eq!(n2.fire_word(&[1, 0].into(), &w).unwrap(), [1, 0].into());
        assert_eq!(
            n2.fire_word(&[1, 0].into(), &FiringWord::empty()).unwrap(),
            [1, 0].into()
        );

        let n4 = corpus::n4();
        let w: FiringWord = ["a", "c", "d", "e"].iter().map(|x| t(&n4, x)).collect();
        assert_eq!(n4.fire_word(&[1, 0, 0, 0].into(), &w).unwrap(), [1, 0, 0, 0].into());
    }

    #[test]
    fn word_error_names_first_disabled_position() {
        let n2 = corpus::n2();
        let w: FiringWord = [t(&n2, "a"), t(&n2, "a")].into_iter().collect();
        assert_eq!(
            n2.fire_word(&[1, 0].into(), &w).unwrap_err(),
            Error::WordNotFirable {
                position: 1,
                transition: "a".into(),
                marking: [0, 1].into()
            }
        );
    }

    #[test]
    fn parikh_counts() {
        let n2 = corpus::n2();
        let (a, b) = (t(&n2, "a"), t(&n2, "b"));
        assert_eq!(n2.parikh(&FiringWord::new(vec![a, b, a])), vec![2, 1]);
        assert_eq!(n2.parikh(&FiringWord::empty()), vec![0, 0]);
        let n4 = corpus::n4();
        let w: FiringWord = ["a", "c", "d", "e"].iter().map(|x| t(&n4, x)).collect();
        assert_eq!(n4.parikh(&w), vec![1, 0, 1, 1, 1]);
    }

    #[test]
    fn disabling_examples() {
        let n1 = corpus::n1();
        assert!(n1.disables_at(&[1].into(), t(&n1, "a"), t(&n1, "b")).unwrap());
        let n3 = corpus::n3();
        assert!(!n3.disables_at(&[1, 0].into(), t(&n3, "b"), t(&n3, "a")).unwrap());
        let n2 = corpus::n2();
        assert!(!n2.disables_at(&[1, 0].into(), t(&n2, "a"), t(&n2, "b")).unwrap());
        assert_eq!(
            n2.disables_at(&[1, 0].into(), t(&n2, "a"), t(&n2, "a")),
            Err(Error::SameTransition("a".into()))
        );
    }

    #[test]
    fn inhibitor_net_is_not_monotone() {
        let n6 = corpus::n6();
        let b = t(&n6, "b");
        let small: Marking = [1, 0].into();
        let large: Marking = [1, 1].into();
        assert!(small.le(&large));
        assert!(n6.enabled(&small, b).unwrap());
        assert!(!n6.enabled(&large, b).unwrap());
        assert!(!n6.is_pure());
        assert!(corpus::n5().is_pure());
    }

    #[test]
    fn builder_rejects_bad_input() {
        let dup = Net::builder("x").place("p", 0).transition("p", &[], &[]).build();
        assert_eq!(dup, Err(Error::DuplicateIdentifier("p".into())));
        let unknown = Net::builder("x").place("p", 0).transition("t", &["q"], &[]).build();
        assert_eq!(unknown, Err(Error::UnknownPlace("q".into())));
    }

    #[test]
    fn marking_parsing() {
        assert_eq!("1,0,3".parse::<Marking>().unwrap(), [1, 0, 3].into());
        assert_eq!("[2]".parse::<Marking>().unwrap(), [2].into());
        assert!("1,x".parse::<Marking>().is_err());
    }
}
