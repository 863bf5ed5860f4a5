//! Fibered semi-groups `(E, X, π, μ)` over finite sets and their morphisms.

use alloc::format;

use crate::error::{Error, Result};
use crate::finset::{fiber_product, fiber_product_with, product, product_map, FinMap, FinSet, PairSet};
use crate::report::{Record, ValidationReport};
use crate::token::Token;

/// A total space `E` fibered over a base `X` by `π`, with an associative
/// multiplication `μ` on pairs lying in a common fiber.
///
/// `μ` is stored on the canonical fiber-product carrier `E ×_π E`, whose
/// elements are the pair tokens `(a,b)` with `π(a) = π(b)`.
#[derive(Clone, Debug)]
pub struct FiberedSemiGroup {
    total: FinSet,
    base: FinSet,
    proj: FinMap,
    mul: FinMap,
    pairs: PairSet,
}

impl PartialEq for FiberedSemiGroup {
    fn eq(&self, other: &Self) -> bool {
        self.total == other.total
            && self.base == other.base
            && self.proj == other.proj
            && self.mul == other.mul
    }
}

impl Eq for FiberedSemiGroup {}

impl FiberedSemiGroup {
    /// Checks shapes only; the two defining diagrams are checked by
    /// [`FiberedSemiGroup::validate`].
    pub fn new(total: FinSet, base: FinSet, proj: FinMap, mul: FinMap) -> Result<Self> {
        if proj.dom() != &total || proj.cod() != &base {
            return Err(Error::Shape("projection must map the total set to the base".into()));
        }
        let pairs = fiber_product(&proj, &proj)?;
        if mul.dom() != &pairs.carrier {
            return Err(Error::Shape(
                "multiplication domain is not the fiber product E ×_π E".into(),
            ));
        }
        if mul.cod() != &total {
            return Err(Error::Shape("multiplication must land in the total set".into()));
        }
        Ok(FiberedSemiGroup { total, base, proj, mul, pairs })
    }

    /// Builds the multiplication from a binary operation on tokens.
    pub fn from_fn<F>(total: FinSet, base: FinSet, proj: FinMap, op: F) -> Result<Self>
    where
        F: Fn(&Token, &Token) -> Token,
    {
        let pairs = fiber_product(&proj, &proj)?;
        let mul = FinMap::from_fn(pairs.carrier.clone(), total.clone(), |p| {
            let ab = p.as_tuple().expect("pair token");
            op(&ab[0], &ab[1])
        })?;
        Self::new(total, base, proj, mul)
    }

    /// Builds the multiplication from a table of positions: `table(i, j)` is
    /// the position of `e_i · e_j`, consulted only for pairs in a common fiber.
    pub fn from_index_fn<F>(total: FinSet, base: FinSet, proj: FinMap, op: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> usize,
    {
        let pairs = fiber_product(&proj, &proj)?;
        let table = (0..pairs.carrier.len())
            .map(|k| {
                let (i, j) = pairs.components(k);
                op(i, j)
            })
            .collect();
        let mul = FinMap::from_indices(pairs.carrier.clone(), total.clone(), table)?;
        Ok(FiberedSemiGroup { total, base, proj, mul, pairs })
    }

    /// `E` fibered over itself by the identity, multiplied by the left
    /// projection of the diagonal.
    pub fn trivial(set: &FinSet) -> Self {
        Self::from_fn(set.clone(), set.clone(), FinMap::identity(set), |a, _| a.clone())
            .expect("diagonal fiber product")
    }

    /// A semigroup viewed as fibered over a one-point base.
    pub fn over_point<F>(elements: &FinSet, point: &Token, op: F) -> Result<Self>
    where
        F: Fn(&Token, &Token) -> Token,
    {
        let base = FinSet::singleton(point.clone());
        let proj = FinMap::constant(elements, &base, point)?;
        Self::from_fn(elements.clone(), base, proj, op)
    }

    pub fn total(&self) -> &FinSet {
        &self.total
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn proj(&self) -> &FinMap {
        &self.proj
    }

    pub fn mul(&self) -> &FinMap {
        &self.mul
    }

    /// The fiber product `E ×_π E` carrying `μ`.
    pub fn pairs(&self) -> &PairSet {
        &self.pairs
    }

    /// Position of `e_i · e_j`, if the two lie in a common fiber.
    pub fn multiply(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.position(i, j).map(|k| self.mul.index(k))
    }

    /// Checks the compatibility square `π∘μ = π∘p` (both projections) and the
    /// associativity square on `E ×_π E ×_π E`.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("fibered semi-group", &["compatibility", "associativity"]);
        let p = &self.pairs;
        report.push(Record::diagram("compatibility", "π∘μ = π∘p_left", || {
            Ok((self.mul.then(&self.proj)?, p.left.then(&self.proj)?))
        }));
        report.push(Record::diagram("compatibility", "π∘μ = π∘p_right", || {
            Ok((self.mul.then(&self.proj)?, p.right.then(&self.proj)?))
        }));
        report.push(Record::diagram("associativity", "μ∘(μ×id) = μ∘(id×μ)", || {
            let triples = self.triples()?;
            let left = p.map_from(&triples.carrier, |t| {
                let (ab, c) = triples.components(t);
                let (a, b) = p.components(ab);
                Ok((self.mul_checked(a, b)?, c))
            })?;
            let right = p.map_from(&triples.carrier, |t| {
                let (ab, c) = triples.components(t);
                let (a, b) = p.components(ab);
                Ok((a, self.mul_checked(b, c)?))
            })?;
            Ok((left.then(&self.mul)?, right.then(&self.mul)?))
        }));
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// `μ` is a bijection `E ×_π E → E`.
    pub fn is_rigid(&self) -> bool {
        self.mul.is_bijective()
    }

    /// The same fibration with the order of multiplication reversed.
    pub fn opposite(&self) -> Self {
        let p = &self.pairs;
        let table = (0..p.carrier.len())
            .map(|k| {
                let (i, j) = p.components(k);
                self.mul.index(p.position(j, i).expect("fiber product is symmetric"))
            })
            .collect();
        FiberedSemiGroup {
            mul: FinMap::from_indices_unchecked(p.carrier.clone(), self.total.clone(), table),
            ..self.clone()
        }
    }

    /// Componentwise product. Total and base elements are pairs `(e,f)`.
    pub fn product(&self, other: &FiberedSemiGroup) -> FiberedSemiGroup {
        let total = product(&self.total, &other.total);
        let base = product(&self.base, &other.base);
        let proj = product_map(&self.proj, &other.proj);
        FiberedSemiGroup::from_index_fn(total.carrier.clone(), base.carrier, proj, |x, y| {
            let (e1, f1) = total.components(x);
            let (e2, f2) = total.components(y);
            let e = self.multiply(e1, e2).expect("common fiber");
            let f = other.multiply(f1, f2).expect("common fiber");
            total.position(e, f).expect("product pair")
        })
        .expect("product of fibered semi-groups")
    }

    /// Transports the structure along bijections of the total set and base.
    pub fn transport(&self, total_bij: &FinMap, base_bij: &FinMap) -> Result<FiberedSemiGroup> {
        if total_bij.dom() != &self.total || base_bij.dom() != &self.base {
            return Err(Error::Shape("transport maps must start at the total set and base".into()));
        }
        let total_inv = total_bij.inverse()?;
        base_bij.inverse()?;
        let proj = total_inv.then(&self.proj)?.then(base_bij)?;
        FiberedSemiGroup::from_index_fn(total_bij.cod().clone(), base_bij.cod().clone(), proj, |x, y| {
            let a = total_inv.index(x);
            let b = total_inv.index(y);
            total_bij.index(self.multiply(a, b).expect("transported pair lies in a fiber"))
        })
    }

    /// `E ×_π E ×_π E` as pairs `((a,b), c)`, tokens `(a,b,c)`.
    fn triples(&self) -> Result<PairSet> {
        let p = &self.pairs;
        fiber_product_with(&p.right.then(&self.proj)?, &self.proj, |ab, c| {
            let ab = ab.as_tuple().expect("pair token");
            Token::triple(&ab[0], &ab[1], c)
        })
    }

    fn mul_checked(&self, i: usize, j: usize) -> Result<usize> {
        self.multiply(i, j).ok_or_else(|| {
            Error::Shape(format!(
                "{:?} and {:?} lie in different fibers",
                self.total.get(i),
                self.total.get(j)
            ))
        })
    }
}

pub fn validate_fsgrp(f: &FiberedSemiGroup) -> ValidationReport {
    f.validate()
}

pub fn is_rigid(f: &FiberedSemiGroup) -> bool {
    f.is_rigid()
}

pub fn opposite(f: &FiberedSemiGroup) -> FiberedSemiGroup {
    f.opposite()
}

pub fn product_fsgrp(f: &FiberedSemiGroup, g: &FiberedSemiGroup) -> FiberedSemiGroup {
    f.product(g)
}

/// A pair `(φ, ψ)` of maps on total sets and bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsgMorphism {
    dom: FiberedSemiGroup,
    cod: FiberedSemiGroup,
    total_map: FinMap,
    base_map: FinMap,
}

impl FsgMorphism {
    pub fn new(
        dom: FiberedSemiGroup,
        cod: FiberedSemiGroup,
        total_map: FinMap,
        base_map: FinMap,
    ) -> Result<Self> {
        if total_map.dom() != dom.total() || total_map.cod() != cod.total() {
            return Err(Error::Shape("total map does not match the total sets".into()));
        }
        if base_map.dom() != dom.base() || base_map.cod() != cod.base() {
            return Err(Error::Shape("base map does not match the bases".into()));
        }
        Ok(FsgMorphism { dom, cod, total_map, base_map })
    }

    pub fn identity(f: &FiberedSemiGroup) -> Self {
        FsgMorphism {
            dom: f.clone(),
            cod: f.clone(),
            total_map: FinMap::identity(f.total()),
            base_map: FinMap::identity(f.base()),
        }
    }

    /// The symmetry `F × G → G × F`.
    pub fn swap(f: &FiberedSemiGroup, g: &FiberedSemiGroup) -> Self {
        let fg = f.product(g);
        let gf = g.product(f);
        let flip = |t: &Token| {
            let p = t.as_tuple().expect("pair token");
            Token::pair(&p[1], &p[0])
        };
        let total_map = FinMap::from_fn(fg.total().clone(), gf.total().clone(), flip).expect("swap");
        let base_map = FinMap::from_fn(fg.base().clone(), gf.base().clone(), flip).expect("swap");
        FsgMorphism { dom: fg, cod: gf, total_map, base_map }
    }

    pub fn dom(&self) -> &FiberedSemiGroup {
        &self.dom
    }

    pub fn cod(&self) -> &FiberedSemiGroup {
        &self.cod
    }

    pub fn total_map(&self) -> &FinMap {
        &self.total_map
    }

    pub fn base_map(&self) -> &FinMap {
        &self.base_map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FsgMorphism) -> Result<FsgMorphism> {
        if self.cod != next.dom {
            return Err(Error::NotComposable("fibered semi-group morphisms".into()));
        }
        Ok(FsgMorphism {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            total_map: self.total_map.then(&next.total_map)?,
            base_map: self.base_map.then(&next.base_map)?,
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.total_map.is_bijective() && self.base_map.is_bijective()
    }

    /// `φ ×_ψ φ : E ×_π E → E' ×_π' E'`.
    pub fn pair_map(&self) -> Result<FinMap> {
        let p = self.dom.pairs();
        self.cod.pairs().map_from(&p.carrier, |k| {
            let (i, j) = p.components(k);
            Ok((self.total_map.index(i), self.total_map.index(j)))
        })
    }

    /// The projection square `π'∘φ = ψ∘π` and the multiplication square
    /// `φ∘μ = μ'∘(φ ×_ψ φ)`.
    pub fn validate(&self) -> ValidationReport {
        let mut report =
            ValidationReport::new("fibered semi-group morphism", &["projection", "multiplication"]);
        report.push(Record::diagram("projection", "π'∘φ = ψ∘π", || {
            Ok((
                self.total_map.then(self.cod.proj())?,
                self.dom.proj().then(&self.base_map)?,
            ))
        }));
        report.push(Record::diagram("multiplication", "φ∘μ = μ'∘(φ×φ)", || {
            Ok((
                self.dom.mul().then(&self.total_map)?,
                self.pair_map()?.then(self.cod.mul())?,
            ))
        }));
        report
    }
}

pub fn validate_morphism(m: &FsgMorphism) -> ValidationReport {
    m.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn a(s: &str) -> Token {
        Token::atom(s).unwrap()
    }

    fn set(names: &[&str]) -> FinSet {
        FinSet::from_atoms(names).unwrap()
    }

    fn cyclic(n: usize, op: impl Fn(usize, usize) -> usize) -> FiberedSemiGroup {
        let names: Vec<_> = (0..n).map(|i| i.to_string()).collect();
        let elems = FinSet::from_atoms(&names).unwrap();
        FiberedSemiGroup::over_point(&elems, &a("*"), |x, y| {
            let x: usize = x.to_string().parse().unwrap();
            let y: usize = y.to_string().parse().unwrap();
            a(&op(x, y).to_string())
        })
        .unwrap()
    }

    #[test]
    fn trivial_fsgrp_is_valid_and_rigid() {
        let f = FiberedSemiGroup::trivial(&set(&["0", "1"]));
        assert!(f.validate().passed());
        assert!(f.is_rigid());
    }

    #[test]
    fn z2_over_point() {
        let z2 = cyclic(2, |x, y| (x + y) % 2);
        assert!(z2.validate().passed());
        assert!(!z2.is_rigid());
        assert_eq!(z2.opposite(), z2);
    }

    #[test]
    fn z3_subtraction_fails_associativity() {
        let sub = cyclic(3, |x, y| (x + 3 - y) % 3);
        let report = sub.validate();
        assert!(report.law_passed("compatibility"));
        assert!(!report.law_passed("associativity"));
        let bad = report.failures().next().unwrap();
        assert!(bad.witness.is_some());
        // (0-1)-2 = 0 while 0-(1-2) = 1
        let m = |x: usize, y: usize| (x + 3 - y) % 3;
        assert_eq!((m(m(0, 1), 2), m(0, m(1, 2))), (0, 1));
    }

    #[test]
    fn singleton_is_rigid() {
        let one = cyclic(1, |_, _| 0);
        assert!(one.is_rigid());
        assert!(one.validate().passed());
    }

    #[test]
    fn opposite_of_left_projection_is_right_projection() {
        let s = set(&["0", "1"]);
        let left = FiberedSemiGroup::over_point(&s, &a("*"), |x, _| x.clone()).unwrap();
        let right = FiberedSemiGroup::over_point(&s, &a("*"), |_, y| y.clone()).unwrap();
        assert!(left.validate().passed());
        assert_eq!(left.opposite(), right);
        assert_eq!(left.opposite().opposite(), left);
    }

    #[test]
    fn product_sizes_and_rigidity() {
        let t = FiberedSemiGroup::trivial(&set(&["0", "1"]));
        let tt = t.product(&t);
        assert_eq!(tt.total().len(), 4);
        assert!(tt.validate().passed());
        assert!(tt.is_rigid());
        let z2 = cyclic(2, |x, y| (x + y) % 2);
        let p = t.product(&z2);
        assert_eq!(p.total().len(), t.total().len() * z2.total().len());
        assert!(p.validate().passed());
        assert!(!p.is_rigid());
    }

    #[test]
    fn product_with_unit_is_isomorphic() {
        let z2 = cyclic(2, |x, y| (x + y) % 2);
        let unit = cyclic(1, |_, _| 0);
        let p = z2.product(&unit);
        let first = |t: &Token| t.as_tuple().unwrap()[0].clone();
        let total = FinMap::from_fn(p.total().clone(), z2.total().clone(), first).unwrap();
        let base = FinMap::from_fn(p.base().clone(), z2.base().clone(), first).unwrap();
        let m = FsgMorphism::new(p.clone(), z2.clone(), total.clone(), base.clone()).unwrap();
        assert!(m.validate().passed());
        assert!(m.is_isomorphism());
        assert_eq!(p.transport(&total, &base).unwrap(), z2);
    }

    #[test]
    fn morphism_checks() {
        let z2 = cyclic(2, |x, y| (x + y) % 2);
        assert!(FsgMorphism::identity(&z2).validate().passed());

        let t = FiberedSemiGroup::trivial(&set(&["0", "1"]));
        let swap = FsgMorphism::swap(&z2, &z2);
        assert!(swap.validate().passed());
        assert!(FsgMorphism::swap(&t, &z2).validate().passed());

        let constant = FinMap::constant(t.total(), t.total(), &a("0")).unwrap();
        let m = FsgMorphism::new(t.clone(), t.clone(), constant, FinMap::identity(t.base())).unwrap();
        let report = m.validate();
        assert!(!report.law_passed("projection"));
        let w = report.failures().next().unwrap().witness.clone().unwrap();
        assert_eq!(w.element, a("1"));
        assert_eq!((w.left, w.right), (a("0"), a("1")));
    }
}
