//! Finite sets, total maps between them, and the finite limits and colimits
//! the rest of the crate is built from.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::token::Token;

/// A finite set of tokens, stored in canonical (sorted) order.
#[derive(Clone, PartialOrd, Ord)]
pub struct FinSet {
    elems: Arc<[Token]>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.elems, &other.elems) || self.elems == other.elems
    }
}

impl Eq for FinSet {}

impl FinSet {
    /// Builds a set from distinct tokens in any order.
    pub fn new<I: IntoIterator<Item = Token>>(items: I) -> Result<Self> {
        let mut elems: Vec<Token> = items.into_iter().collect();
        elems.sort();
        if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].clone()));
        }
        Ok(FinSet { elems: elems.into() })
    }

    pub fn from_atoms<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let tokens = names
            .iter()
            .map(|n| Token::atom(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(tokens)
    }

    /// Builds a set from tokens that may repeat.
    pub fn collect_unique<I: IntoIterator<Item = Token>>(items: I) -> Self {
        let mut elems: Vec<Token> = items.into_iter().collect();
        elems.sort();
        elems.dedup();
        FinSet { elems: elems.into() }
    }

    pub(crate) fn from_sorted(elems: Vec<Token>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        FinSet { elems: elems.into() }
    }

    pub fn empty() -> Self {
        FinSet { elems: Arc::from([]) }
    }

    pub fn singleton(t: Token) -> Self {
        FinSet { elems: Arc::from([t]) }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Token] {
        &self.elems
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Token> {
        self.elems.iter()
    }

    pub fn get(&self, index: usize) -> &Token {
        &self.elems[index]
    }

    pub fn index_of(&self, t: &Token) -> Option<usize> {
        self.elems.binary_search(t).ok()
    }

    pub fn contains(&self, t: &Token) -> bool {
        self.index_of(t).is_some()
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.iter().all(|t| other.contains(t))
    }

    /// Elements satisfying `keep`, as a subset.
    pub fn filter<F: FnMut(&Token) -> bool>(&self, mut keep: F) -> FinSet {
        FinSet::from_sorted(self.iter().filter(|t| keep(t)).cloned().collect())
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = &'a Token;
    type IntoIter = core::slice::Iter<'a, Token>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// A total function between finite sets.
///
/// The table stores, for each domain position, the position of its image in
/// the codomain.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    table: Arc<[usize]>,
}

impl FinMap {
    /// Builds a map from explicit `(input, output)` pairs. Every domain element
    /// must appear exactly once.
    pub fn new<I>(dom: FinSet, cod: FinSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Token, Token)>,
    {
        let mut table = alloc::vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let i = dom.index_of(&x).ok_or(Error::NotAnElement { token: x.clone(), role: "domain" })?;
            let j = cod.index_of(&y).ok_or(Error::NotAnElement { token: y, role: "codomain" })?;
            if table[i] != usize::MAX {
                return Err(Error::DuplicateElement(x));
            }
            table[i] = j;
        }
        if let Some(i) = table.iter().position(|&j| j == usize::MAX) {
            return Err(Error::MissingImage(dom.get(i).clone()));
        }
        Ok(FinMap { dom, cod, table: table.into() })
    }

    pub fn from_fn<F>(dom: FinSet, cod: FinSet, mut f: F) -> Result<Self>
    where
        F: FnMut(&Token) -> Token,
    {
        Self::try_from_fn(dom, cod, |t| Ok(f(t)))
    }

    pub fn try_from_fn<F>(dom: FinSet, cod: FinSet, mut f: F) -> Result<Self>
    where
        F: FnMut(&Token) -> Result<Token>,
    {
        let table = dom
            .iter()
            .map(|x| {
                let y = f(x)?;
                cod.index_of(&y).ok_or(Error::NotAnElement { token: y, role: "codomain" })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap { dom, cod, table: table.into() })
    }

    /// Builds a map from a table of codomain positions.
    pub fn from_indices(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(Error::Shape(format!(
                "table has {} entries for a domain of {} elements",
                table.len(),
                dom.len()
            )));
        }
        if let Some(&j) = table.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::Shape(format!("table entry {j} out of range")));
        }
        Ok(FinMap { dom, cod, table: table.into() })
    }

    pub(crate) fn from_indices_unchecked(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), dom.len());
        FinMap { dom, cod, table: table.into() }
    }

    pub fn identity(set: &FinSet) -> Self {
        FinMap { dom: set.clone(), cod: set.clone(), table: (0..set.len()).collect() }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, value: &Token) -> Result<Self> {
        let j = cod
            .index_of(value)
            .ok_or(Error::NotAnElement { token: value.clone(), role: "codomain" })?;
        Ok(FinMap { dom: dom.clone(), cod: cod.clone(), table: alloc::vec![j; dom.len()].into() })
    }

    /// The inclusion of a subset.
    pub fn inclusion(sub: &FinSet, sup: &FinSet) -> Result<Self> {
        Self::from_fn(sub.clone(), sup.clone(), Token::clone)
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Image position of the domain element at position `i`.
    pub fn index(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, x: &Token) -> Result<&Token> {
        let i = self
            .dom
            .index_of(x)
            .ok_or(Error::NotAnElement { token: x.clone(), role: "domain" })?;
        Ok(self.cod.get(self.table[i]))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Token, &Token)> + '_ {
        self.dom.iter().zip(self.table.iter()).map(move |(x, &j)| (x, self.cod.get(j)))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FinMap) -> Result<FinMap> {
        if self.cod != next.dom {
            return Err(Error::NotComposable(format!(
                "codomain {:?} differs from domain {:?}",
                self.cod, next.dom
            )));
        }
        let table = self.table.iter().map(|&j| next.table[j]).collect();
        Ok(FinMap { dom: self.dom.clone(), cod: next.cod.clone(), table })
    }

    /// Number of preimages of each codomain element.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0; self.cod.len()];
        for &j in self.table.iter() {
            sizes[j] += 1;
        }
        sizes
    }

    pub fn is_injective(&self) -> bool {
        self.fiber_sizes().iter().all(|&n| n <= 1)
    }

    pub fn is_surjective(&self) -> bool {
        self.fiber_sizes().iter().all(|&n| n >= 1)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    pub fn image(&self) -> FinSet {
        let mut hit = alloc::vec![false; self.cod.len()];
        for &j in self.table.iter() {
            hit[j] = true;
        }
        FinSet::from_sorted(
            self.cod.iter().zip(hit).filter(|(_, h)| *h).map(|(t, _)| t.clone()).collect(),
        )
    }

    pub fn inverse(&self) -> Result<FinMap> {
        if !self.is_bijective() {
            return Err(Error::NotBijective);
        }
        let mut table = alloc::vec![0; self.cod.len()];
        for (i, &j) in self.table.iter().enumerate() {
            table[j] = i;
        }
        Ok(FinMap { dom: self.cod.clone(), cod: self.dom.clone(), table: table.into() })
    }

    /// Restriction to a subset of the domain.
    pub fn restrict(&self, sub: &FinSet) -> Result<FinMap> {
        let table = sub
            .iter()
            .map(|x| {
                self.dom
                    .index_of(x)
                    .map(|i| self.table[i])
                    .ok_or(Error::NotAnElement { token: x.clone(), role: "domain" })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap { dom: sub.clone(), cod: self.cod.clone(), table: table.into() })
    }

    /// Same table, read into a larger codomain.
    pub fn corestrict(&self, cod: &FinSet) -> Result<FinMap> {
        FinMap::from_fn(self.dom.clone(), cod.clone(), |x| self.cod.get(self.index_of_token(x)).clone())
    }

    fn index_of_token(&self, x: &Token) -> usize {
        self.table[self.dom.index_of(x).expect("token from own domain")]
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// `g ∘ f`.
pub fn compose(f: &FinMap, g: &FinMap) -> Result<FinMap> {
    f.then(g)
}

/// A set of pairs together with its two projections.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairSet {
    pub carrier: FinSet,
    pub left: FinMap,
    pub right: FinMap,
    lookup: Arc<[((usize, usize), usize)]>,
}

impl PairSet {
    /// Carrier position of the pair whose components sit at positions `(i, j)`.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.lookup
            .binary_search_by(|(key, _)| key.cmp(&(i, j)))
            .ok()
            .map(|k| self.lookup[k].1)
    }

    /// Carrier position of the pair `(a, b)` of tokens.
    pub fn position_of(&self, a: &Token, b: &Token) -> Option<usize> {
        let i = self.left.cod().index_of(a)?;
        let j = self.right.cod().index_of(b)?;
        self.position(i, j)
    }

    /// `(left, right)` component positions of the carrier element at `k`.
    pub fn components(&self, k: usize) -> (usize, usize) {
        (self.left.index(k), self.right.index(k))
    }

    /// A map from `dom` into this pair set, given by component positions.
    pub fn map_from<F>(&self, dom: &FinSet, mut f: F) -> Result<FinMap>
    where
        F: FnMut(usize) -> Result<(usize, usize)>,
    {
        let table = (0..dom.len())
            .map(|k| {
                let (i, j) = f(k)?;
                self.position(i, j).ok_or_else(|| {
                    Error::Shape(format!(
                        "{:?} would map to ({:?}, {:?}), which is not in {:?}",
                        dom.get(k),
                        self.left.cod().get(i),
                        self.right.cod().get(j),
                        self.carrier
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap::from_indices_unchecked(dom.clone(), self.carrier.clone(), table))
    }

    fn build(
        a: &FinSet,
        b: &FinSet,
        mut entries: Vec<(Token, usize, usize)>,
    ) -> Result<PairSet> {
        entries.sort_by(|x, y| x.0.cmp(&y.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Shape(format!("composite token {:?} is ambiguous", w[0].0)));
        }
        let mut lookup: Vec<((usize, usize), usize)> =
            entries.iter().enumerate().map(|(k, (_, i, j))| ((*i, *j), k)).collect();
        lookup.sort_unstable();
        let left_table = entries.iter().map(|e| e.1).collect();
        let right_table = entries.iter().map(|e| e.2).collect();
        let carrier = FinSet::from_sorted(entries.into_iter().map(|e| e.0).collect());
        Ok(PairSet {
            left: FinMap::from_indices_unchecked(carrier.clone(), a.clone(), left_table),
            right: FinMap::from_indices_unchecked(carrier.clone(), b.clone(), right_table),
            carrier,
            lookup: lookup.into(),
        })
    }
}

/// The pullback `{(a, b) : f(a) = g(b)}` with pair tokens `(a,b)`.
pub fn fiber_product(f: &FinMap, g: &FinMap) -> Result<PairSet> {
    fiber_product_with(f, g, Token::pair)
}

/// The pullback of `f` and `g`, naming each matching pair with `combine`.
pub fn fiber_product_with<C>(f: &FinMap, g: &FinMap, combine: C) -> Result<PairSet>
where
    C: Fn(&Token, &Token) -> Token,
{
    if f.cod() != g.cod() {
        return Err(Error::Shape(format!(
            "fiber product over different codomains {:?} and {:?}",
            f.cod(),
            g.cod()
        )));
    }
    let mut buckets: Vec<Vec<usize>> = alloc::vec![Vec::new(); g.cod().len()];
    for (j, &c) in g.table().iter().enumerate() {
        buckets[c].push(j);
    }
    let mut entries = Vec::new();
    for (i, &c) in f.table().iter().enumerate() {
        for &j in &buckets[c] {
            entries.push((combine(f.dom().get(i), g.dom().get(j)), i, j));
        }
    }
    PairSet::build(f.dom(), g.dom(), entries)
}

/// The cartesian product with pair tokens `(a,b)`.
pub fn product(a: &FinSet, b: &FinSet) -> PairSet {
    let entries = (0..a.len())
        .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
        .map(|(i, j)| (Token::pair(a.get(i), b.get(j)), i, j))
        .collect();
    PairSet::build(a, b, entries).expect("pair tokens of distinct elements are distinct")
}

/// `f × g` between cartesian products.
pub fn product_map(f: &FinMap, g: &FinMap) -> FinMap {
    let dom = product(f.dom(), g.dom());
    let cod = product(f.cod(), g.cod());
    let table = (0..dom.carrier.len())
        .map(|k| {
            let (i, j) = dom.components(k);
            cod.position(f.index(i), g.index(j)).expect("product pair")
        })
        .collect();
    FinMap::from_indices_unchecked(dom.carrier, cod.carrier, table)
}

/// A disjoint union with its two injections. Elements are tagged `0#a` and `1#b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coproduct {
    pub carrier: FinSet,
    pub left: FinMap,
    pub right: FinMap,
}

pub fn disjoint_union(a: &FinSet, b: &FinSet) -> Coproduct {
    let elems: Vec<Token> = a
        .iter()
        .map(|x| Token::tag(0, x))
        .chain(b.iter().map(|y| Token::tag(1, y)))
        .collect();
    let carrier = FinSet::from_sorted(elems);
    let left = FinMap::from_indices_unchecked(a.clone(), carrier.clone(), (0..a.len()).collect());
    let right = FinMap::from_indices_unchecked(
        b.clone(),
        carrier.clone(),
        (a.len()..a.len() + b.len()).collect(),
    );
    Coproduct { carrier, left, right }
}

/// `[f, g] : A ⊔ B → C`.
pub fn copair(f: &FinMap, g: &FinMap) -> Result<FinMap> {
    if f.cod() != g.cod() {
        return Err(Error::Shape("copairing into different codomains".into()));
    }
    let sum = disjoint_union(f.dom(), g.dom());
    let table = f.table().iter().chain(g.table().iter()).copied().collect();
    Ok(FinMap::from_indices_unchecked(sum.carrier, f.cod().clone(), table))
}

/// `f ⊔ g : A ⊔ B → C ⊔ D`.
pub fn sum_map(f: &FinMap, g: &FinMap) -> FinMap {
    let dom = disjoint_union(f.dom(), g.dom());
    let cod = disjoint_union(f.cod(), g.cod());
    let offset = f.cod().len();
    let table = f.table().iter().copied().chain(g.table().iter().map(|j| j + offset)).collect();
    FinMap::from_indices_unchecked(dom.carrier, cod.carrier, table)
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Roots are always the least member of their class.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// The quotient of `B` by the equivalence relation generated by
/// `f(a) ~ g(a)`. Each class is named by its least element, so the quotient
/// set is a subset of `B`.
pub fn coequalizer(f: &FinMap, g: &FinMap) -> Result<FinMap> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(Error::Shape("coequalizer of maps with different shapes".into()));
    }
    quotient_by_pairs(f.cod(), f.table().iter().copied().zip(g.table().iter().copied()))
}

/// The quotient of `set` by the equivalence relation generated by index pairs.
pub fn quotient_by_pairs<I>(set: &FinSet, pairs: I) -> Result<FinMap>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut classes = DisjointSets::new(set.len());
    for (a, b) in pairs {
        if a >= set.len() || b >= set.len() {
            return Err(Error::Shape("identification index out of range".into()));
        }
        classes.union(a, b);
    }
    let roots: Vec<usize> = (0..set.len()).map(|i| classes.find(i)).collect();
    let mut position = alloc::vec![usize::MAX; set.len()];
    let mut reps = Vec::new();
    for (i, &r) in roots.iter().enumerate() {
        if r == i {
            position[i] = reps.len();
            reps.push(set.get(i).clone());
        }
    }
    let table = roots.iter().map(|&r| position[r]).collect();
    Ok(FinMap::from_indices_unchecked(set.clone(), FinSet::from_sorted(reps), table))
}

/// A point where two parallel composites disagree.
#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Witness {
    pub element: Token,
    pub left: Token,
    pub right: Token,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommutationReport {
    pub passed: bool,
    pub witness: Option<Witness>,
}

fn compose_path(path: &[FinMap]) -> Result<FinMap> {
    let (first, rest) = path
        .split_first()
        .ok_or_else(|| Error::NotComposable("empty path".into()))?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.then(m))
}

/// Pointwise comparison of two composable paths with common endpoints. Paths
/// are listed in application order.
pub fn commutes(path1: &[FinMap], path2: &[FinMap]) -> Result<CommutationReport> {
    let left = compose_path(path1)?;
    let right = compose_path(path2)?;
    Ok(compare_maps(&left, &right)?)
}

/// Pointwise comparison of two parallel maps.
pub fn compare_maps(left: &FinMap, right: &FinMap) -> Result<CommutationReport> {
    if left.dom() != right.dom() || left.cod() != right.cod() {
        return Err(Error::Shape("paths have different endpoints".into()));
    }
    let witness = left
        .table()
        .iter()
        .zip(right.table().iter())
        .position(|(a, b)| a != b)
        .map(|i| Witness {
            element: left.dom().get(i).clone(),
            left: left.cod().get(left.index(i)).clone(),
            right: right.cod().get(right.index(i)).clone(),
        });
    Ok(CommutationReport { passed: witness.is_none(), witness })
}
