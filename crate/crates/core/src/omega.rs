//! ω-extended vectors and finite representations of closed subsets of ℕ^k.
//!
//! * [`UpSet`]: right-closed set, stored as the antichain of its minimal elements.
//! * [`DownSet`]: left-closed set, stored as the antichain of maximal ω-bounds;
//!   `z` is a member iff `z ≤ b` for some bound `b`.
//! * [`ConvexSet`]: intersection of an up-set and a down-set.
//!
//! Members are always finite vectors; ω only appears in down-set bounds and in
//! coverability labels.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Deref, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::Marking;

/// Element of ℕ ∪ {ω}. The derived order puts every `Nat` below `Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OmegaNat {
    Nat(u32),
    Omega,
}

impl OmegaNat {
    pub fn is_omega(self) -> bool {
        self == OmegaNat::Omega
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            OmegaNat::Nat(n) => Some(n),
            OmegaNat::Omega => None,
        }
    }
}

/// `ω + n = ω`.
impl Add<u32> for OmegaNat {
    type Output = OmegaNat;

    fn add(self, n: u32) -> OmegaNat {
        match self {
            OmegaNat::Nat(x) => OmegaNat::Nat(x + n),
            OmegaNat::Omega => OmegaNat::Omega,
        }
    }
}

/// `ω − n = ω`. Panics if a finite value would go negative.
impl Sub<u32> for OmegaNat {
    type Output = OmegaNat;

    fn sub(self, n: u32) -> OmegaNat {
        match self {
            OmegaNat::Nat(x) => OmegaNat::Nat(x.checked_sub(n).expect("negative token count")),
            OmegaNat::Omega => OmegaNat::Omega,
        }
    }
}

impl fmt::Display for OmegaNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaNat::Nat(n) => write!(f, "{n}"),
            OmegaNat::Omega => f.write_str("w"),
        }
    }
}

impl FromStr for OmegaNat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "w" | "ω" => Ok(OmegaNat::Omega),
            x => x
                .parse()
                .map(OmegaNat::Nat)
                .map_err(|_| Error::InvalidVector(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OmegaVector(Vec<OmegaNat>);

impl OmegaVector {
    pub fn new(v: Vec<OmegaNat>) -> Self {
        OmegaVector(v)
    }

    /// `(ω, …, ω)`.
    pub fn omega(dim: usize) -> Self {
        OmegaVector(vec![OmegaNat::Omega; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn le(&self, other: &OmegaVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `z ≤ self` for a finite `z`.
    pub fn covers(&self, z: &[u32]) -> bool {
        self.0.len() == z.len() && self.0.iter().zip(z).all(|(b, &x)| OmegaNat::Nat(x) <= *b)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| !x.is_omega())
    }

    pub fn has_omega(&self) -> bool {
        !self.is_finite()
    }

    pub fn to_marking(&self) -> Option<Marking> {
        self.0
            .iter()
            .map(|x| x.finite())
            .collect::<Option<Vec<_>>>()
            .map(Marking::new)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &OmegaVector) -> OmegaVector {
        self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect()
    }

    pub(crate) fn set(&mut self, i: usize, x: OmegaNat) {
        self.0[i] = x;
    }

    pub fn to_plain(&self) -> String {
        self.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

impl Deref for OmegaVector {
    type Target = [OmegaNat];

    fn deref(&self) -> &[OmegaNat] {
        &self.0
    }
}

impl From<&Marking> for OmegaVector {
    fn from(m: &Marking) -> Self {
        m.iter().map(|&x| OmegaNat::Nat(x)).collect()
    }
}

impl From<Marking> for OmegaVector {
    fn from(m: Marking) -> Self {
        OmegaVector::from(&m)
    }
}

impl FromIterator<OmegaNat> for OmegaVector {
    fn from_iter<I: IntoIterator<Item = OmegaNat>>(iter: I) -> Self {
        OmegaVector(iter.into_iter().collect())
    }
}

impl fmt::Display for OmegaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_plain())
    }
}

impl FromStr for OmegaVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if s.trim().is_empty() {
            return Ok(OmegaVector(Vec::new()));
        }
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(OmegaVector)
    }
}

fn check_dims<'a, I>(dim: usize, vs: I) -> Result<()>
where
    I: IntoIterator<Item = usize> + 'a,
{
    for found in vs {
        if found != dim {
            return Err(Error::Dimension { expected: dim, found });
        }
    }
    Ok(())
}

/// The ≤-minimal members of `vs`, deduplicated and sorted.
pub fn min_antichain(vs: &[Marking]) -> Result<Vec<Marking>> {
    if let Some(first) = vs.first() {
        check_dims(first.dim(), vs.iter().map(Marking::dim))?;
    }
    Ok(minimal_elements(vs.to_vec()))
}

fn minimal_elements(mut vs: Vec<Marking>) -> Vec<Marking> {
    vs.sort();
    vs.dedup();
    // after sorting lexicographically, anything below v precedes it
    let mut out: Vec<Marking> = Vec::with_capacity(vs.len());
    for v in vs {
        if !out.iter().any(|g| g.le(&v)) {
            out.push(v);
        }
    }
    out
}

fn maximal_elements(mut vs: Vec<OmegaVector>) -> Vec<OmegaVector> {
    vs.sort_by(|a, b| b.cmp(a));
    vs.dedup();
    let mut out: Vec<OmegaVector> = Vec::with_capacity(vs.len());
    for v in vs {
        if !out.iter().any(|b| v.le(b)) {
            out.push(v);
        }
    }
    out.sort();
    out
}

/// Right-closed subset of ℕ^k given by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpSet {
    dim: usize,
    generators: Vec<Marking>,
}

impl UpSet {
    pub fn new(dim: usize, generators: Vec<Marking>) -> Result<Self> {
        check_dims(dim, generators.iter().map(Marking::dim))?;
        Ok(UpSet {
            dim,
            generators: minimal_elements(generators),
        })
    }

    pub fn empty(dim: usize) -> Self {
        UpSet {
            dim,
            generators: Vec::new(),
        }
    }

    /// `ℕ^k` itself.
    pub fn full(dim: usize) -> Self {
        UpSet {
            dim,
            generators: vec![Marking::zero(dim)],
        }
    }

    /// `g + ℕ^k`.
    pub fn principal(g: Marking) -> Self {
        UpSet {
            dim: g.dim(),
            generators: vec![g],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Marking] {
        &self.generators
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, z: &[u32]) -> bool {
        z.len() == self.dim && self.generators.iter().any(|g| g.iter().zip(z).all(|(a, b)| a <= b))
    }

    pub fn intersect(&self, other: &UpSet) -> Result<UpSet> {
        check_dims(self.dim, [other.dim])?;
        let joins = self
            .generators
            .iter()
            .flat_map(|g| {
                other
                    .generators
                    .iter()
                    .map(move |h| Marking::new(g.iter().zip(h.iter()).map(|(a, b)| *a.max(b)).collect()))
            })
            .collect();
        Ok(UpSet {
            dim: self.dim,
            generators: minimal_elements(joins),
        })
    }

    pub fn union(&self, other: &UpSet) -> Result<UpSet> {
        check_dims(self.dim, [other.dim])?;
        let all = self.generators.iter().chain(&other.generators).cloned().collect();
        Ok(UpSet {
            dim: self.dim,
            generators: minimal_elements(all),
        })
    }

    /// `ℕ^k − self`, as a down-set.
    pub fn complement(&self) -> DownSet {
        let mut acc = DownSet::full(self.dim);
        for g in &self.generators {
            // ℕ^k − (g + ℕ^k) = ⋃_{i : g_i > 0} { z : z_i < g_i }
            let bounds = g
                .iter()
                .enumerate()
                .filter(|(_, &gi)| gi > 0)
                .map(|(i, &gi)| {
                    let mut b = OmegaVector::omega(self.dim);
                    b.set(i, OmegaNat::Nat(gi - 1));
                    b
                })
                .collect();
            let piece = DownSet { dim: self.dim, bounds };
            acc = acc.meet(&piece);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }
}

/// Left-closed subset of ℕ^k given by maximal ω-bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DownSet {
    dim: usize,
    bounds: Vec<OmegaVector>,
}

impl DownSet {
    pub fn new(dim: usize, bounds: Vec<OmegaVector>) -> Result<Self> {
        check_dims(dim, bounds.iter().map(OmegaVector::dim))?;
        Ok(DownSet {
            dim,
            bounds: maximal_elements(bounds),
        })
    }

    pub fn empty(dim: usize) -> Self {
        DownSet {
            dim,
            bounds: Vec::new(),
        }
    }

    /// `ℕ^k`, bounded by `(ω, …, ω)`.
    pub fn full(dim: usize) -> Self {
        DownSet {
            dim,
            bounds: vec![OmegaVector::omega(dim)],
        }
    }

    /// `↓v`.
    pub fn principal(v: OmegaVector) -> Self {
        DownSet {
            dim: v.dim(),
            bounds: vec![v],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &[OmegaVector] {
        &self.bounds
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn contains(&self, z: &[u32]) -> bool {
        z.len() == self.dim && self.bounds.iter().any(|b| b.covers(z))
    }

    pub fn intersect(&self, other: &DownSet) -> Result<DownSet> {
        check_dims(self.dim, [other.dim])?;
        Ok(self.meet(other))
    }

    /// `ℕ^k − self`, as an up-set.
    pub fn complement(&self) -> UpSet {
        let mut acc = UpSet::full(self.dim);
        for b in &self.bounds {
            // ℕ^k − ↓b = ⋃_{i : b_i finite} { z : z_i > b_i }
            let gens = b
                .iter()
                .enumerate()
                .filter_map(|(i, x)| x.finite().map(|n| (i, n)))
                .map(|(i, n)| {
                    let mut g = vec![0; self.dim];
                    g[i] = n + 1;
                    Marking::new(g)
                })
                .collect();
            acc = acc
                .intersect(&UpSet {
                    dim: self.dim,
                    generators: gens,
                })
                .expect("same dimension");
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    fn meet(&self, other: &DownSet) -> DownSet {
        let meets = self
            .bounds
            .iter()
            .flat_map(|b| other.bounds.iter().map(move |c| b.meet(c)))
            .collect();
        DownSet {
            dim: self.dim,
            bounds: maximal_elements(meets),
        }
    }
}

/// Order-convex set `lower ∩ upper`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvexSet {
    lower: UpSet,
    upper: DownSet,
}

impl ConvexSet {
    pub fn new(lower: UpSet, upper: DownSet) -> Result<Self> {
        check_dims(lower.dim(), [upper.dim()])?;
        Ok(ConvexSet { lower, upper })
    }

    pub fn singleton(m: &Marking) -> Self {
        ConvexSet {
            lower: UpSet::principal(m.clone()),
            upper: DownSet::principal(m.to_omega()),
        }
    }

    pub fn from_lower(lower: UpSet) -> Self {
        let upper = DownSet::full(lower.dim());
        ConvexSet { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &UpSet {
        &self.lower
    }

    pub fn upper(&self) -> &DownSet {
        &self.upper
    }

    pub fn contains(&self, z: &[u32]) -> bool {
        self.lower.contains(z) && self.upper.contains(z)
    }

    /// Non-empty boxes `[g, b]` whose union is the set.
    pub fn boxes(&self) -> impl Iterator<Item = (&Marking, &OmegaVector)> + '_ {
        self.lower.generators().iter().flat_map(move |g| {
            self.upper
                .bounds()
                .iter()
                .filter(move |b| b.covers(g))
                .map(move |b| (g, b))
        })
    }

    pub fn is_empty(&self) -> bool {
        self.boxes().next().is_none()
    }
}

pub fn upset_intersect(x: &UpSet, y: &UpSet) -> Result<UpSet> {
    x.intersect(y)
}

pub fn upset_complement(x: &UpSet) -> DownSet {
    x.complement()
}

pub fn downset_intersect(x: &DownSet, y: &DownSet) -> Result<DownSet> {
    x.intersect(y)
}

pub fn convex_member(x: &ConvexSet, z: &Marking) -> Result<bool> {
    check_dims(x.dim(), [z.dim()])?;
    Ok(x.contains(z))
}

/// Partial order comparison of two finite vectors.
pub fn compare(a: &[u32], b: &[u32]) -> Option<Ordering> {
    let le = a.iter().zip(b).all(|(x, y)| x <= y);
    let ge = a.iter().zip(b).all(|(x, y)| x >= y);
    match (le, ge) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const W: OmegaNat = OmegaNat::Omega;

    fn m(v: &[u32]) -> Marking {
        Marking::new(v.to_vec())
    }

    fn ov(s: &str) -> OmegaVector {
        s.parse().unwrap()
    }

    fn up(dim: usize, gens: &[&[u32]]) -> UpSet {
        UpSet::new(dim, gens.iter().map(|g| m(g)).collect()).unwrap()
    }

    fn down(dim: usize, bounds: &[&str]) -> DownSet {
        DownSet::new(dim, bounds.iter().map(|b| ov(b)).collect()).unwrap()
    }

    fn boxed(dim: usize, bound: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=bound).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn omega_arithmetic() {
        assert_eq!(W + 3, W);
        assert_eq!(W - 3, W);
        assert!(OmegaNat::Nat(1_000_000) < W);
        assert_eq!(OmegaNat::Nat(2) + 1 - 3, OmegaNat::Nat(0));
        assert_eq!(ov("1,w").to_string(), "[1,w]");
    }

    #[test]
    fn min_antichain_examples() {
        assert_eq!(
            min_antichain(&[m(&[1, 2]), m(&[2, 1]), m(&[2, 2])]).unwrap(),
            vec![m(&[1, 2]), m(&[2, 1])]
        );
        assert_eq!(min_antichain(&[]).unwrap(), Vec::<Marking>::new());
        assert_eq!(min_antichain(&[m(&[0, 0]), m(&[5, 7])]).unwrap(), vec![m(&[0, 0])]);
        assert!(matches!(
            min_antichain(&[m(&[0]), m(&[5, 7])]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn upset_intersection_examples() {
        assert_eq!(
            up(2, &[&[1, 0]]).intersect(&up(2, &[&[0, 1]])).unwrap(),
            up(2, &[&[1, 1]])
        );
        assert_eq!(
            up(2, &[&[1, 0]]).intersect(&up(2, &[&[1, 0]])).unwrap(),
            up(2, &[&[1, 0]])
        );
        let x = up(2, &[&[2, 0], &[0, 2]]);
        let y = up(2, &[&[1, 1]]);
        let z = x.intersect(&y).unwrap();
        assert_eq!(z.generators(), &[m(&[1, 2]), m(&[2, 1])]);
        for p in boxed(2, 3) {
            assert_eq!(z.contains(&p), x.contains(&p) && y.contains(&p));
        }
        assert!(up(2, &[]).intersect(&up(3, &[])).is_err());
    }

    #[test]
    fn upset_complement_examples() {
        let c = up(2, &[&[1, 1]]).complement();
        assert_eq!(c, down(2, &["0,w", "w,0"]));
        for p in boxed(2, 3) {
            assert_eq!(c.contains(&p), !(p[0] >= 1 && p[1] >= 1));
        }
        assert!(UpSet::full(3).complement().is_empty());
        assert_eq!(UpSet::empty(2).complement(), down(2, &["w,w"]));
    }

    #[test]
    fn downset_intersection_examples() {
        assert_eq!(
            down(2, &["w,2"]).intersect(&down(2, &["3,w"])).unwrap(),
            down(2, &["3,2"])
        );
        let x = down(2, &["2,w", "w,2"]);
        assert_eq!(x.intersect(&DownSet::full(2)).unwrap(), x);
        let y = down(2, &["3,3"]);
        let z = x.intersect(&y).unwrap();
        assert_eq!(z, down(2, &["2,3", "3,2"]));
        for p in boxed(2, 4) {
            assert_eq!(z.contains(&p), x.contains(&p) && y.contains(&p));
        }
    }

    #[test]
    fn convex_membership_examples() {
        let x = ConvexSet::new(up(2, &[&[1, 0]]), down(2, &["2,w"])).unwrap();
        assert!(convex_member(&x, &m(&[1, 5])).unwrap());
        assert!(!convex_member(&x, &m(&[0, 5])).unwrap());
        assert!(!convex_member(&x, &m(&[3, 0])).unwrap());
        assert!(convex_member(&x, &m(&[3])).is_err());
    }

    #[test]
    fn singleton_and_emptiness() {
        let s = ConvexSet::singleton(&m(&[0, 5]));
        assert!(s.contains(&[0, 5]));
        assert!(!s.contains(&[0, 4]) && !s.contains(&[1, 5]));
        let e = ConvexSet::new(up(2, &[&[1, 0]]), down(2, &["0,w"])).unwrap();
        assert!(e.is_empty());
    }

    fn arb_gens(dim: usize) -> impl Strategy<Value = Vec<Marking>> {
        prop::collection::vec(prop::collection::vec(0u32..4, dim).prop_map(Marking::new), 0..4)
    }

    fn arb_bounds(dim: usize) -> impl Strategy<Value = Vec<OmegaVector>> {
        let coord = prop_oneof![3 => (0u32..4).prop_map(OmegaNat::Nat), 1 => Just(OmegaNat::Omega)];
        prop::collection::vec(prop::collection::vec(coord, dim).prop_map(OmegaVector::new), 0..4)
    }

    fn pairwise_incomparable_m(v: &[Marking]) -> bool {
        v.iter()
            .enumerate()
            .all(|(i, a)| v.iter().skip(i + 1).all(|b| compare(a, b).is_none()))
    }

    fn pairwise_incomparable_o(v: &[OmegaVector]) -> bool {
        v.iter()
            .enumerate()
            .all(|(i, a)| v.iter().skip(i + 1).all(|b| !a.le(b) && !b.le(a)))
    }

    proptest! {
        #[test]
        fn boolean_ops_match_pointwise_membership(
            g1 in arb_gens(3), g2 in arb_gens(3), b1 in arb_bounds(3), b2 in arb_bounds(3)
        ) {
            let x = UpSet::new(3, g1).unwrap();
            let y = UpSet::new(3, g2).unwrap();
            let d1 = DownSet::new(3, b1).unwrap();
            let d2 = DownSet::new(3, b2).unwrap();
            let xy = x.intersect(&y).unwrap();
            let cx = x.complement();
            let dd = d1.intersect(&d2).unwrap();
            prop_assert!(pairwise_incomparable_m(xy.generators()));
            prop_assert!(pairwise_incomparable_o(cx.bounds()));
            prop_assert!(pairwise_incomparable_o(dd.bounds()));
            for p in boxed(3, 5) {
                prop_assert_eq!(xy.contains(&p), x.contains(&p) && y.contains(&p));
                prop_assert_eq!(cx.contains(&p), !x.contains(&p));
                prop_assert_eq!(dd.contains(&p), d1.contains(&p) && d2.contains(&p));
            }
        }

        #[test]
        fn double_complement_preserves_membership(g in arb_gens(3)) {
            let x = UpSet::new(3, g).unwrap();
            let back = x.complement().complement();
            prop_assert_eq!(&back, &x);
            for p in boxed(3, 5) {
                prop_assert_eq!(back.contains(&p), x.contains(&p));
            }
        }

        #[test]
        fn omega_add_sub_roundtrip(v in prop::collection::vec(prop_oneof![(0u32..100).prop_map(OmegaNat::Nat), Just(OmegaNat::Omega)], 0..6),
                                  u in prop::collection::vec(0u32..10, 6)) {
            for (x, &d) in v.iter().zip(&u) {
                prop_assert_eq!(*x + d - d, *x);
            }
        }
    }
}
