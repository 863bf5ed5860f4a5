//! Fibered bimodules, equivariant morphisms, horizontal composition and the
//! double-category law suite.
//!
//! Horizontal composites name their elements with flattened chain tokens, so
//! `(A ⊛ B) ⊛ C` and `A ⊛ (B ⊛ C)` are the same value, not merely isomorphic.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::finset::{fiber_product, fiber_product_with, product, product_map, FinMap, FinSet, PairSet};
use crate::fsgrp::{FiberedSemiGroup, FsgMorphism};
use crate::report::{LawReport, Record, ValidationReport};
use crate::token::Token;

pub const BIMODULE_LAWS: [&str; 7] = [
    "left associativity",
    "right associativity",
    "left source",
    "left target",
    "right target",
    "right source",
    "commutation",
];

/// `Ω` with source `s : Ω → X`, target `t : Ω → X'`, a left action of `E`
/// on `E ×_{π,s} Ω` and a right action of `E'` on `Ω ×_{t,π'} E'`.
#[derive(Clone, Debug)]
pub struct FiberedBimodule {
    left: FiberedSemiGroup,
    right: FiberedSemiGroup,
    carrier: FinSet,
    src: FinMap,
    tgt: FinMap,
    lact: FinMap,
    ract: FinMap,
    lpairs: PairSet,
    rpairs: PairSet,
}

impl PartialEq for FiberedBimodule {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier
            && self.src == other.src
            && self.tgt == other.tgt
            && self.lact == other.lact
            && self.ract == other.ract
            && self.left == other.left
            && self.right == other.right
    }
}

impl Eq for FiberedBimodule {}

fn check_ends(
    left: &FiberedSemiGroup,
    right: &FiberedSemiGroup,
    carrier: &FinSet,
    src: &FinMap,
    tgt: &FinMap,
) -> Result<()> {
    if src.dom() != carrier || src.cod() != left.base() {
        return Err(Error::Shape("source must map the carrier to the left base".into()));
    }
    if tgt.dom() != carrier || tgt.cod() != right.base() {
        return Err(Error::Shape("target must map the carrier to the right base".into()));
    }
    Ok(())
}

impl FiberedBimodule {
    /// Checks shapes only; see [`FiberedBimodule::validate`] for the diagrams.
    pub fn new(
        left: FiberedSemiGroup,
        right: FiberedSemiGroup,
        carrier: FinSet,
        src: FinMap,
        tgt: FinMap,
        lact: FinMap,
        ract: FinMap,
    ) -> Result<Self> {
        check_ends(&left, &right, &carrier, &src, &tgt)?;
        let lpairs = fiber_product(left.proj(), &src)?;
        let rpairs = fiber_product(&tgt, right.proj())?;
        if lact.dom() != &lpairs.carrier || lact.cod() != &carrier {
            return Err(Error::Shape("left action must map E ×_{π,s} Ω to Ω".into()));
        }
        if ract.dom() != &rpairs.carrier || ract.cod() != &carrier {
            return Err(Error::Shape("right action must map Ω ×_{t,π'} E' to Ω".into()));
        }
        Ok(FiberedBimodule { left, right, carrier, src, tgt, lact, ract, lpairs, rpairs })
    }

    /// Builds both actions from operations on tokens.
    pub fn from_fns<L, R>(
        left: FiberedSemiGroup,
        right: FiberedSemiGroup,
        carrier: FinSet,
        src: FinMap,
        tgt: FinMap,
        lop: L,
        rop: R,
    ) -> Result<Self>
    where
        L: Fn(&Token, &Token) -> Token,
        R: Fn(&Token, &Token) -> Token,
    {
        let on_pair = |op: &dyn Fn(&Token, &Token) -> Token, p: &Token| {
            let xy = p.as_tuple().expect("pair token");
            op(&xy[0], &xy[1])
        };
        let lpairs = fiber_product(left.proj(), &src)?;
        let rpairs = fiber_product(&tgt, right.proj())?;
        let lact = FinMap::from_fn(lpairs.carrier.clone(), carrier.clone(), |p| on_pair(&lop, p))?;
        let ract = FinMap::from_fn(rpairs.carrier.clone(), carrier.clone(), |p| on_pair(&rop, p))?;
        Self::new(left, right, carrier, src, tgt, lact, ract)
    }

    /// Builds both actions from position-level operations. `lop(e, ω)` and
    /// `rop(ω, e')` are only consulted on the two fiber products.
    pub fn from_index_fns<L, R>(
        left: FiberedSemiGroup,
        right: FiberedSemiGroup,
        carrier: FinSet,
        src: FinMap,
        tgt: FinMap,
        lop: L,
        rop: R,
    ) -> Result<Self>
    where
        L: Fn(usize, usize) -> Result<usize>,
        R: Fn(usize, usize) -> Result<usize>,
    {
        check_ends(&left, &right, &carrier, &src, &tgt)?;
        let lpairs = fiber_product(left.proj(), &src)?;
        let rpairs = fiber_product(&tgt, right.proj())?;
        let table = |pairs: &PairSet, op: &dyn Fn(usize, usize) -> Result<usize>| {
            let t = (0..pairs.carrier.len())
                .map(|k| {
                    let (i, j) = pairs.components(k);
                    op(i, j)
                })
                .collect::<Result<Vec<_>>>()?;
            FinMap::from_indices(pairs.carrier.clone(), carrier.clone(), t)
        };
        let lact = table(&lpairs, &lop)?;
        let ract = table(&rpairs, &rop)?;
        Ok(FiberedBimodule { left, right, carrier, src, tgt, lact, ract, lpairs, rpairs })
    }

    pub fn left_sgrp(&self) -> &FiberedSemiGroup {
        &self.left
    }

    pub fn right_sgrp(&self) -> &FiberedSemiGroup {
        &self.right
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn src(&self) -> &FinMap {
        &self.src
    }

    pub fn tgt(&self) -> &FinMap {
        &self.tgt
    }

    pub fn lact(&self) -> &FinMap {
        &self.lact
    }

    pub fn ract(&self) -> &FinMap {
        &self.ract
    }

    /// `E ×_{π,s} Ω`.
    pub fn left_pairs(&self) -> &PairSet {
        &self.lpairs
    }

    /// `Ω ×_{t,π'} E'`.
    pub fn right_pairs(&self) -> &PairSet {
        &self.rpairs
    }

    /// Position of `e_i · ω_j`, if defined.
    pub fn act_left(&self, e: usize, w: usize) -> Option<usize> {
        self.lpairs.position(e, w).map(|k| self.lact.index(k))
    }

    /// Position of `ω_i · e'_j`, if defined.
    pub fn act_right(&self, w: usize, e: usize) -> Option<usize> {
        self.rpairs.position(w, e).map(|k| self.ract.index(k))
    }

    fn act_left_checked(&self, e: usize, w: usize) -> Result<usize> {
        self.act_left(e, w).ok_or_else(|| {
            Error::Shape(format!(
                "{:?} cannot act on {:?}",
                self.left.total().get(e),
                self.carrier.get(w)
            ))
        })
    }

    fn act_right_checked(&self, w: usize, e: usize) -> Result<usize> {
        self.act_right(w, e).ok_or_else(|| {
            Error::Shape(format!(
                "{:?} cannot act on {:?}",
                self.right.total().get(e),
                self.carrier.get(w)
            ))
        })
    }

    /// The seven bimodule diagrams, evaluated pointwise.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("fibered bimodule", &BIMODULE_LAWS);
        let lp = &self.lpairs;
        let rp = &self.rpairs;

        report.push(Record::diagram("left associativity", "λ∘(μ×id) = λ∘(id×λ)", || {
            let ep = self.left.pairs();
            let triples = fiber_product_with(&ep.right.then(self.left.proj())?, &self.src, |ab, w| {
                let ab = ab.as_tuple().expect("pair token");
                Token::triple(&ab[0], &ab[1], w)
            })?;
            let outer = lp.map_from(&triples.carrier, |t| {
                let (ab, w) = triples.components(t);
                Ok((self.left.mul().index(ab), w))
            })?;
            let inner = lp.map_from(&triples.carrier, |t| {
                let (ab, w) = triples.components(t);
                let (a, b) = ep.components(ab);
                Ok((a, self.act_left_checked(b, w)?))
            })?;
            Ok((outer.then(&self.lact)?, inner.then(&self.lact)?))
        }));

        report.push(Record::diagram("right associativity", "ρ∘(ρ×id) = ρ∘(id×μ')", || {
            let ep = self.right.pairs();
            let triples = fiber_product_with(&self.tgt, &ep.left.then(self.right.proj())?, |w, ab| {
                let ab = ab.as_tuple().expect("pair token");
                Token::triple(w, &ab[0], &ab[1])
            })?;
            let outer = rp.map_from(&triples.carrier, |t| {
                let (w, ab) = triples.components(t);
                let (a, b) = ep.components(ab);
                Ok((self.act_right_checked(w, a)?, b))
            })?;
            let inner = rp.map_from(&triples.carrier, |t| {
                let (w, ab) = triples.components(t);
                Ok((w, self.right.mul().index(ab)))
            })?;
            Ok((outer.then(&self.ract)?, inner.then(&self.ract)?))
        }));

        report.push(Record::diagram("left source", "s∘λ = π∘p_E", || {
            Ok((self.lact.then(&self.src)?, lp.left.then(self.left.proj())?))
        }));
        report.push(Record::diagram("left target", "t∘λ = t∘p_Ω", || {
            Ok((self.lact.then(&self.tgt)?, lp.right.then(&self.tgt)?))
        }));
        report.push(Record::diagram("right target", "t∘ρ = π'∘p_E'", || {
            Ok((self.ract.then(&self.tgt)?, rp.right.then(self.right.proj())?))
        }));
        report.push(Record::diagram("right source", "s∘ρ = s∘p_Ω", || {
            Ok((self.ract.then(&self.src)?, rp.left.then(&self.src)?))
        }));

        report.push(Record::diagram("commutation", "ρ∘(λ×id) = λ∘(id×ρ)", || {
            let triples = fiber_product_with(&lp.right.then(&self.tgt)?, self.right.proj(), |ew, f| {
                let ew = ew.as_tuple().expect("pair token");
                Token::triple(&ew[0], &ew[1], f)
            })?;
            let outer = rp.map_from(&triples.carrier, |t| {
                let (ew, f) = triples.components(t);
                Ok((self.lact.index(ew), f))
            })?;
            let inner = lp.map_from(&triples.carrier, |t| {
                let (ew, f) = triples.components(t);
                let (e, w) = lp.components(ew);
                Ok((e, self.act_right_checked(w, f)?))
            })?;
            Ok((outer.then(&self.ract)?, inner.then(&self.lact)?))
        }));
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// Both actions are bijections.
    pub fn is_rigid(&self) -> bool {
        self.lact.is_bijective() && self.ract.is_bijective()
    }

    /// Componentwise product over `E × F` and `E' × F'`.
    pub fn product(&self, other: &FiberedBimodule) -> Result<FiberedBimodule> {
        let left = self.left.product(&other.left);
        let right = self.right.product(&other.right);
        let lt = product(self.left.total(), other.left.total());
        let rt = product(self.right.total(), other.right.total());
        let c = product(&self.carrier, &other.carrier);
        FiberedBimodule::from_index_fns(
            left,
            right,
            c.carrier.clone(),
            product_map(&self.src, &other.src),
            product_map(&self.tgt, &other.tgt),
            |e, w| {
                let ((e1, e2), (w1, w2)) = (lt.components(e), c.components(w));
                let (x, y) = (self.act_left_checked(e1, w1)?, other.act_left_checked(e2, w2)?);
                Ok(c.position(x, y).expect("product pair"))
            },
            |w, e| {
                let ((w1, w2), (e1, e2)) = (c.components(w), rt.components(e));
                let (x, y) = (self.act_right_checked(w1, e1)?, other.act_right_checked(w2, e2)?);
                Ok(c.position(x, y).expect("product pair"))
            },
        )
    }
}

pub fn validate_bimodule(b: &FiberedBimodule) -> ValidationReport {
    b.validate()
}

pub fn product_bimodule(a: &FiberedBimodule, b: &FiberedBimodule) -> Result<FiberedBimodule> {
    a.product(b)
}

/// `i_E`: `E` acting on itself on both sides, with `s = t = π`.
pub fn identity_bimodule(e: &FiberedSemiGroup) -> FiberedBimodule {
    FiberedBimodule::new(
        e.clone(),
        e.clone(),
        e.total().clone(),
        e.proj().clone(),
        e.proj().clone(),
        e.mul().clone(),
        e.mul().clone(),
    )
    .expect("the identity bimodule has the shape of μ")
}

/// `Ω_A ×_{t,s} Ω_B` with flattened chain tokens.
fn composite_pairs(a: &FiberedBimodule, b: &FiberedBimodule) -> Result<PairSet> {
    if a.right != b.left {
        return Err(Error::NotComposable(
            "the right semi-group of the first bimodule differs from the left semi-group of the second".into(),
        ));
    }
    fiber_product_with(&a.tgt, &b.src, Token::chain)
}

/// `A ⊛ B`, acting on the first and last slots of each chain.
pub fn hcompose(a: &FiberedBimodule, b: &FiberedBimodule) -> Result<FiberedBimodule> {
    let mid = composite_pairs(a, b)?;
    let slot = |x: usize, y: usize| {
        mid.position(x, y).ok_or_else(|| Error::Invalid {
            kind: "horizontal composite",
            detail: format!(
                "acting moves ({:?}, {:?}) out of the fiber product",
                a.carrier.get(x),
                b.carrier.get(y)
            ),
        })
    };
    FiberedBimodule::from_index_fns(
        a.left.clone(),
        b.right.clone(),
        mid.carrier.clone(),
        mid.left.then(&a.src)?,
        mid.right.then(&b.tgt)?,
        |e, w| {
            let (x, y) = mid.components(w);
            slot(a.act_left_checked(e, x)?, y)
        },
        |w, e| {
            let (x, y) = mid.components(w);
            slot(x, b.act_right_checked(y, e)?)
        },
    )
}

/// A triple `(φ, Φ, ψ)` between bimodules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantMorphism {
    dom: FiberedBimodule,
    cod: FiberedBimodule,
    left: FsgMorphism,
    mid: FinMap,
    right: FsgMorphism,
}

impl EquivariantMorphism {
    pub fn new(
        dom: FiberedBimodule,
        cod: FiberedBimodule,
        left: FsgMorphism,
        mid: FinMap,
        right: FsgMorphism,
    ) -> Result<Self> {
        if left.dom() != &dom.left || left.cod() != &cod.left {
            return Err(Error::Shape("left morphism does not match the left semi-groups".into()));
        }
        if right.dom() != &dom.right || right.cod() != &cod.right {
            return Err(Error::Shape("right morphism does not match the right semi-groups".into()));
        }
        if mid.dom() != &dom.carrier || mid.cod() != &cod.carrier {
            return Err(Error::Shape("middle map does not match the carriers".into()));
        }
        Ok(EquivariantMorphism { dom, cod, left, mid, right })
    }

    pub fn identity(a: &FiberedBimodule) -> Self {
        EquivariantMorphism {
            dom: a.clone(),
            cod: a.clone(),
            left: FsgMorphism::identity(&a.left),
            mid: FinMap::identity(&a.carrier),
            right: FsgMorphism::identity(&a.right),
        }
    }

    pub fn dom(&self) -> &FiberedBimodule {
        &self.dom
    }

    pub fn cod(&self) -> &FiberedBimodule {
        &self.cod
    }

    pub fn left(&self) -> &FsgMorphism {
        &self.left
    }

    pub fn mid(&self) -> &FinMap {
        &self.mid
    }

    pub fn right(&self) -> &FsgMorphism {
        &self.right
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &EquivariantMorphism) -> Result<EquivariantMorphism> {
        if self.cod != next.dom {
            return Err(Error::NotComposable("equivariant morphisms".into()));
        }
        Ok(EquivariantMorphism {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            left: self.left.then(&next.left)?,
            mid: self.mid.then(&next.mid)?,
            right: self.right.then(&next.right)?,
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.mid.is_bijective() && self.left.is_isomorphism() && self.right.is_isomorphism()
    }

    /// The boundary morphisms, the source and target squares, and the two
    /// action squares.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new(
            "equivariant morphism",
            &["left morphism", "right morphism", "source", "target", "left action", "right action"],
        );
        report.push(Record::summarize("left morphism", "φ", &self.left.validate()));
        report.push(Record::summarize("right morphism", "ψ", &self.right.validate()));
        report.push(Record::diagram("source", "s'∘Φ = φ∘s", || {
            Ok((self.mid.then(&self.cod.src)?, self.dom.src.then(self.left.base_map())?))
        }));
        report.push(Record::diagram("target", "t'∘Φ = ψ∘t", || {
            Ok((self.mid.then(&self.cod.tgt)?, self.dom.tgt.then(self.right.base_map())?))
        }));
        report.push(Record::diagram("left action", "Φ∘λ = λ'∘(φ×Φ)", || {
            let lp = &self.dom.lpairs;
            let across = self.cod.lpairs.map_from(&lp.carrier, |k| {
                let (e, w) = lp.components(k);
                Ok((self.left.total_map().index(e), self.mid.index(w)))
            })?;
            Ok((self.dom.lact.then(&self.mid)?, across.then(&self.cod.lact)?))
        }));
        report.push(Record::diagram("right action", "Φ∘ρ = ρ'∘(Φ×ψ)", || {
            let rp = &self.dom.rpairs;
            let across = self.cod.rpairs.map_from(&rp.carrier, |k| {
                let (w, e) = rp.components(k);
                Ok((self.mid.index(w), self.right.total_map().index(e)))
            })?;
            Ok((self.dom.ract.then(&self.mid)?, across.then(&self.cod.ract)?))
        }));
        report
    }
}

/// `i_φ = (φ, φ, φ) : i_E → i_F`.
pub fn identity_bimodule_morphism(phi: &FsgMorphism) -> EquivariantMorphism {
    EquivariantMorphism {
        dom: identity_bimodule(phi.dom()),
        cod: identity_bimodule(phi.cod()),
        left: phi.clone(),
        mid: phi.total_map().clone(),
        right: phi.clone(),
    }
}

/// `M₁ ⊛ M₂`, acting slotwise on chains.
pub fn hcompose_mor(m1: &EquivariantMorphism, m2: &EquivariantMorphism) -> Result<EquivariantMorphism> {
    if m1.right != m2.left {
        return Err(Error::NotComposable("the shared semi-group morphisms differ".into()));
    }
    let dom_pairs = composite_pairs(&m1.dom, &m2.dom)?;
    let cod_pairs = composite_pairs(&m1.cod, &m2.cod)?;
    let mid = cod_pairs.map_from(&dom_pairs.carrier, |k| {
        let (x, y) = dom_pairs.components(k);
        Ok((m1.mid.index(x), m2.mid.index(y)))
    })?;
    Ok(EquivariantMorphism {
        dom: hcompose(&m1.dom, &m2.dom)?,
        cod: hcompose(&m1.cod, &m2.cod)?,
        left: m1.left.clone(),
        mid,
        right: m2.right.clone(),
    })
}

/// `L = (id, λ, id) : i_E ⊛ A → A`.
pub fn left_unitor(a: &FiberedBimodule) -> Result<EquivariantMorphism> {
    let unit = identity_bimodule(&a.left);
    let pairs = composite_pairs(&unit, a)?;
    let table = (0..pairs.carrier.len())
        .map(|k| {
            let (e, w) = pairs.components(k);
            a.act_left_checked(e, w)
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMorphism::new(
        hcompose(&unit, a)?,
        a.clone(),
        FsgMorphism::identity(&a.left),
        FinMap::from_indices(pairs.carrier.clone(), a.carrier.clone(), table)?,
        FsgMorphism::identity(&a.right),
    )
}

/// `R = (id, ρ, id) : A ⊛ i_E' → A`.
pub fn right_unitor(a: &FiberedBimodule) -> Result<EquivariantMorphism> {
    let unit = identity_bimodule(&a.right);
    let pairs = composite_pairs(a, &unit)?;
    let table = (0..pairs.carrier.len())
        .map(|k| {
            let (w, e) = pairs.components(k);
            a.act_right_checked(w, e)
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMorphism::new(
        hcompose(a, &unit)?,
        a.clone(),
        FsgMorphism::identity(&a.left),
        FinMap::from_indices(pairs.carrier.clone(), a.carrier.clone(), table)?,
        FsgMorphism::identity(&a.right),
    )
}

/// The interchange bijection `(A × B) ⊛ (C × D) → (A ⊛ C) × (B ⊛ D)`,
/// `[(a,b),(c,d)] ↦ ([a,c],[b,d])`, as a morphism over identities.
pub fn interchange(
    a: &FiberedBimodule,
    b: &FiberedBimodule,
    c: &FiberedBimodule,
    d: &FiberedBimodule,
) -> Result<EquivariantMorphism> {
    let dom = hcompose(&a.product(b)?, &c.product(d)?)?;
    let cod = hcompose(a, c)?.product(&hcompose(b, d)?)?;
    let mid = FinMap::try_from_fn(dom.carrier.clone(), cod.carrier.clone(), |t| {
        let slots = t.chain_items();
        let (ab, cd) = match slots {
            [ab, cd] => (ab.as_tuple(), cd.as_tuple()),
            _ => (None, None),
        };
        match (ab, cd) {
            (Some([a, b]), Some([c, d])) => Ok(Token::pair(&Token::chain(a, c), &Token::chain(b, d))),
            _ => Err(Error::Shape(format!("{t:?} is not a composite of products"))),
        }
    })?;
    EquivariantMorphism::new(
        dom.clone(),
        cod,
        FsgMorphism::identity(&dom.left),
        mid,
        FsgMorphism::identity(&dom.right),
    )
}

pub const DOUBLE_CATEGORY_LAWS: [&str; 6] = [
    "compatibility",
    "associativity",
    "unitor naturality",
    "triangle",
    "monoidality",
    "rigid closure",
];

/// Inputs to [`check_double_category_laws`]. Identity bimodules of every
/// semi-group are added automatically.
#[derive(Clone, Debug, Default)]
pub struct DoubleUniverse {
    pub semigroups: Vec<(String, FiberedSemiGroup)>,
    pub bimodules: Vec<(String, FiberedBimodule)>,
    /// Vertical morphisms, checked against the unitors through `i_φ`.
    pub morphisms: Vec<(String, FsgMorphism)>,
    pub bimodule_morphisms: Vec<(String, EquivariantMorphism)>,
    /// Product monoidality is checked on all pairs of semi-groups with at
    /// most this many total elements.
    pub monoidal_bound: usize,
}

fn check_built<T>(
    report: &mut LawReport,
    law: &str,
    instance: &str,
    built: Result<T>,
) -> Option<T> {
    match built {
        Ok(t) => Some(t),
        Err(e) => {
            report.push(Record::fail(law, instance, format!("construction failed: {e}")));
            None
        }
    }
}

fn mids_agree(
    report: &mut LawReport,
    law: &str,
    instance: &str,
    lhs: Result<EquivariantMorphism>,
    rhs: Result<EquivariantMorphism>,
) {
    report.push(Record::diagram(law, instance, || {
        let (l, r) = (lhs?, rhs?);
        if l.left != r.left || l.right != r.right {
            return Err(Error::Shape("boundary morphisms differ".into()));
        }
        Ok((l.mid, r.mid))
    }));
}

/// Checks the weak double-category structure on a finite universe.
///
/// * compatibility: every semi-group, bimodule, composite and unitor validates;
/// * associativity: `(A ⊛ B) ⊛ C == A ⊛ (B ⊛ C)` as values;
/// * unitor naturality: `L∘(i_φ ⊛ M) = M∘L` and `R∘(M ⊛ i_ψ) = M∘R`;
/// * triangle: `L = R` on `i_E ⊛ i_E`, and `R ⊛ 1 = 1 ⊛ L` on `A ⊛ i ⊛ B`
///   for rigid `A`, `B` over a rigid middle;
/// * monoidality: `i_{E×F} == i_E × i_F` and the interchange bijection is an
///   equivariant isomorphism;
/// * rigid closure: `i_E` rigid iff `E` is, composites of rigid bimodules
///   are rigid, and unitors of rigid bimodules are isomorphisms.
///
/// Unitors that are not invertible and full triangles that fail outside the
/// rigid part are listed in the report notes.
pub fn check_double_category_laws(universe: &DoubleUniverse) -> LawReport {
    let mut report = LawReport::new("double category laws", &DOUBLE_CATEGORY_LAWS);
    let mut lax = Vec::new();

    for (name, e) in &universe.semigroups {
        let rigid = e.is_rigid();
        report.push(Record::summarize("compatibility", name, &e.validate()));
        let i = identity_bimodule(e);
        report.push(Record::summarize("compatibility", &format!("i[{name}]"), &i.validate()));
        report.push(Record::check("rigid closure", &format!("i[{name}] rigid iff {name} rigid"), i.is_rigid() == rigid, || {
            format!("semi-group rigid: {rigid}, identity bimodule rigid: {}", i.is_rigid())
        }));
        let Some(ii) = check_built(&mut report, "compatibility", &format!("i[{name}] ⊛ i[{name}]"), hcompose(&i, &i)) else {
            continue;
        };
        report.push(Record::summarize("compatibility", &format!("i[{name}] ⊛ i[{name}]"), &ii.validate()));
        let assoc = hcompose(&ii, &i).and_then(|l| Ok((l, hcompose(&i, &ii)?)));
        if let Some((l, r)) = check_built(&mut report, "associativity", &format!("i[{name}]³"), assoc) {
            report.push(Record::check("associativity", &format!("i[{name}]³"), l == r, || "bracketings differ".into()));
        }
        let unitors = left_unitor(&i).and_then(|l| Ok((l, right_unitor(&i)?)));
        let Some((l, r)) = check_built(&mut report, "compatibility", &format!("unitors of i[{name}]"), unitors) else {
            continue;
        };
        report.push(Record::summarize("compatibility", &format!("L[i[{name}]]"), &l.validate()));
        report.push(Record::summarize("compatibility", &format!("R[i[{name}]]"), &r.validate()));
        mids_agree(&mut report, "triangle", &format!("L = R on i[{name}] ⊛ i[{name}]"), Ok(l.clone()), Ok(r.clone()));
        if rigid {
            report.push(Record::check("rigid closure", &format!("i[{name}] ⊛ i[{name}] rigid"), ii.is_rigid(), || {
                "composite of rigid bimodules is not rigid".into()
            }));
            report.push(Record::check("rigid closure", &format!("unitors of i[{name}] invertible"), l.is_isomorphism() && r.is_isomorphism(), || {
                "unitor of a rigid bimodule is not invertible".into()
            }));
        } else if !l.is_isomorphism() || !r.is_isomorphism() {
            lax.push(format!("i[{name}]"));
        }
    }

    let mut pool: Vec<(String, FiberedBimodule)> = universe.bimodules.clone();
    for (name, b) in &universe.bimodules {
        for (side, e) in [("left", &b.left), ("right", &b.right)] {
            if !pool.iter().any(|(_, p)| p.left == *e && p.right == *e && *p == identity_bimodule(e)) {
                pool.push((format!("i[{side} of {name}]"), identity_bimodule(e)));
            }
        }
    }

    for (name, b) in &pool {
        report.push(Record::summarize("compatibility", name, &b.validate()));
        let unitors = left_unitor(b).and_then(|l| Ok((l, right_unitor(b)?)));
        if let Some((l, r)) = check_built(&mut report, "compatibility", &format!("unitors of {name}"), unitors) {
            report.push(Record::summarize("compatibility", &format!("L[{name}]"), &l.validate()));
            report.push(Record::summarize("compatibility", &format!("R[{name}]"), &r.validate()));
            let iso = l.is_isomorphism() && r.is_isomorphism();
            if b.is_rigid() && b.left.is_rigid() && b.right.is_rigid() {
                report.push(Record::check("rigid closure", &format!("unitors of {name} invertible"), iso, || {
                    "unitor of a rigid bimodule is not invertible".into()
                }));
            } else if !iso {
                lax.push(name.clone());
            }
        }
    }

    let composable: Vec<(usize, usize)> = (0..pool.len())
        .flat_map(|x| (0..pool.len()).map(move |y| (x, y)))
        .filter(|&(x, y)| pool[x].1.right == pool[y].1.left)
        .collect();
    let (mut loose, mut loose_failed) = (0usize, Vec::new());
    for &(x, y) in &composable {
        let ((na, a), (nb, b)) = (&pool[x], &pool[y]);
        let inst = format!("{na} ⊛ {nb}");
        let Some(ab) = check_built(&mut report, "compatibility", &inst, hcompose(a, b)) else {
            continue;
        };
        report.push(Record::summarize("compatibility", &inst, &ab.validate()));
        let rigid_pair = a.is_rigid() && b.is_rigid() && a.right.is_rigid();
        if rigid_pair && a.left.is_rigid() && b.right.is_rigid() {
            report.push(Record::check("rigid closure", &format!("{inst} rigid"), ab.is_rigid(), || {
                "composite of rigid bimodules is not rigid".into()
            }));
        }
        let triangle = || {
            let lhs = right_unitor(a).and_then(|r| hcompose_mor(&r, &EquivariantMorphism::identity(b)));
            let rhs = left_unitor(b).and_then(|l| hcompose_mor(&EquivariantMorphism::identity(a), &l));
            (lhs, rhs)
        };
        let (lhs, rhs) = triangle();
        if rigid_pair {
            mids_agree(&mut report, "triangle", &format!("R ⊛ 1 = 1 ⊛ L on {na} ⊛ i ⊛ {nb}"), lhs, rhs);
        } else {
            loose += 1;
            let holds = matches!((lhs, rhs), (Ok(l), Ok(r)) if l.mid == r.mid);
            if !holds {
                loose_failed.push(inst.clone());
            }
        }
        for &(y2, z) in composable.iter().filter(|&&(y2, _)| y2 == y) {
            debug_assert_eq!(y2, y);
            let nc = &pool[z].0;
            let inst = format!("({na} ⊛ {nb}) ⊛ {nc}");
            let sides = hcompose(&ab, &pool[z].1)
                .and_then(|l| Ok((l, hcompose(a, &hcompose(b, &pool[z].1)?)?)));
            if let Some((l, r)) = check_built(&mut report, "associativity", &inst, sides) {
                report.push(Record::check("associativity", &inst, l == r, || "bracketings differ".into()));
            }
        }
    }

    for (name, phi) in &universe.morphisms {
        let m = identity_bimodule_morphism(phi);
        report.push(Record::summarize("compatibility", &format!("i[{name}]"), &m.validate()));
        unitor_naturality(&mut report, &format!("i[{name}]"), &m);
    }
    for (name, m) in &universe.bimodule_morphisms {
        report.push(Record::summarize("compatibility", name, &m.validate()));
        unitor_naturality(&mut report, name, m);
    }

    let small: Vec<&(String, FiberedSemiGroup)> = universe
        .semigroups
        .iter()
        .filter(|(_, e)| e.total().len() <= universe.monoidal_bound)
        .collect();
    for (ne, e) in &small {
        for (nf, f) in &small {
            let inst = format!("i[{ne} × {nf}]");
            let prod = identity_bimodule(e).product(&identity_bimodule(f));
            if let Some(p) = check_built(&mut report, "monoidality", &inst, prod) {
                report.push(Record::check("monoidality", &inst, identity_bimodule(&e.product(f)) == p, || {
                    "i of the product differs from the product of i".into()
                }));
            }
            let swap = FsgMorphism::swap(e, f);
            report.push(Record::summarize("monoidality", &format!("swap {ne} × {nf}"), &swap.validate()));
        }
    }
    for &(x, y) in &composable {
        for &(z, w) in &composable {
            let inst = format!("({} × {}) ⊛ ({} × {})", pool[x].0, pool[z].0, pool[y].0, pool[w].0);
            let ex = interchange(&pool[x].1, &pool[z].1, &pool[y].1, &pool[w].1);
            if let Some(m) = check_built(&mut report, "monoidality", &inst, ex) {
                let v = m.validate();
                report.push(Record::summarize("monoidality", &inst, &v));
                report.push(Record::check("monoidality", &format!("{inst} interchange bijective"), m.mid.is_bijective(), || {
                    "interchange is not a bijection".into()
                }));
            }
        }
    }

    if !lax.is_empty() {
        let shown = lax.iter().take(8).cloned().collect::<Vec<_>>().join(", ");
        let more = if lax.len() > 8 { format!(" and {} more", lax.len() - 8) } else { String::new() };
        report.notes.push(format!("lax only: unitors are not invertible for {} bimodules: {shown}{more}", lax.len()));
    }
    if loose > 0 {
        report.notes.push(format!(
            "outside the rigid part R ⊛ 1 = 1 ⊛ L fails on {} of {} composable pairs{}",
            loose_failed.len(),
            loose,
            loose_failed.first().map(|f| format!(", first {f}")).unwrap_or_default()
        ));
    }
    report.sort();
    report
}

fn unitor_naturality(report: &mut LawReport, name: &str, m: &EquivariantMorphism) {
    let phi = identity_bimodule_morphism(&m.left);
    let psi = identity_bimodule_morphism(&m.right);
    let lhs = hcompose_mor(&phi, m).and_then(|x| x.then(&left_unitor(&m.cod)?));
    let rhs = left_unitor(&m.dom).and_then(|l| l.then(m));
    mids_agree(report, "unitor naturality", &format!("L∘(i ⊛ {name}) = {name}∘L"), lhs, rhs);
    let lhs = hcompose_mor(m, &psi).and_then(|x| x.then(&right_unitor(&m.cod)?));
    let rhs = right_unitor(&m.dom).and_then(|r| r.then(m));
    mids_agree(report, "unitor naturality", &format!("R∘({name} ⊛ i) = {name}∘R"), lhs, rhs);
}
