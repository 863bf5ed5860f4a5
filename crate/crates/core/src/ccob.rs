//! Oriented cobordisms at the level of connected components.
//!
//! A hypersurface is a set of oriented components; a cobordism or body is a
//! set of regions with an incidence map from boundary components to regions.
//! Diffeomorphisms are bijections of components compatible with incidence and
//! orientation, so each one stands for its own isotopy class.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::finset::{copair, coequalizer, disjoint_union, quotient_by_pairs, sum_map, FinMap, FinSet};
use crate::report::{Record, ValidationReport};
use crate::token::Token;

fn sign_token(positive: bool) -> Token {
    Token::atom(if positive { "+" } else { "-" }).expect("sign atom")
}

/// `{+, -}`.
pub fn signs() -> FinSet {
    FinSet::new([sign_token(true), sign_token(false)]).expect("two signs")
}

/// A closed oriented hypersurface: components with a sign each.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CobObject {
    components: FinSet,
    orientation: FinMap,
}

impl CobObject {
    pub fn new(components: FinSet, orientation: FinMap) -> Result<Self> {
        if orientation.dom() != &components || orientation.cod() != &signs() {
            return Err(Error::Shape("orientation must map the components to {+,-}".into()));
        }
        Ok(CobObject { components, orientation })
    }

    /// Components named by atoms, `true` meaning positively oriented.
    pub fn from_signs(items: &[(&str, bool)]) -> Result<Self> {
        let components = FinSet::new(items.iter().map(|(n, _)| Token::atom(n)).collect::<Result<Vec<_>>>()?)?;
        let orientation = FinMap::new(
            components.clone(),
            signs(),
            items.iter().map(|(n, s)| (Token::atom(n).expect("checked above"), sign_token(*s))),
        )?;
        Ok(CobObject { components, orientation })
    }

    pub fn positive(names: &[&str]) -> Result<Self> {
        Self::from_signs(&names.iter().map(|n| (*n, true)).collect::<Vec<_>>())
    }

    pub fn empty() -> Self {
        CobObject {
            components: FinSet::empty(),
            orientation: FinMap::from_indices(FinSet::empty(), signs(), Vec::new()).expect("empty map"),
        }
    }

    pub fn components(&self) -> &FinSet {
        &self.components
    }

    pub fn orientation(&self) -> &FinMap {
        &self.orientation
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Whether the component at position `i` is positively oriented.
    pub fn is_positive(&self, i: usize) -> bool {
        self.orientation.index(i) == 0
    }

    /// `-Σ`: every sign flipped.
    pub fn reverse(&self) -> Self {
        let table = self.orientation.table().iter().map(|s| 1 - s).collect();
        CobObject {
            components: self.components.clone(),
            orientation: FinMap::from_indices(self.components.clone(), signs(), table).expect("signs"),
        }
    }

    /// `Σ ⊔ Σ'` with components tagged `0#` and `1#`.
    pub fn disjoint_union(&self, other: &CobObject) -> Self {
        CobObject {
            components: disjoint_union(&self.components, &other.components).carrier,
            orientation: copair(&self.orientation, &other.orientation).expect("common sign set"),
        }
    }

    /// The sub-hypersurface on `sub`.
    pub fn restrict(&self, sub: &FinSet) -> Result<Self> {
        Ok(CobObject { components: sub.clone(), orientation: self.orientation.restrict(sub)? })
    }
}

/// A cobordism `Σ → Λ` with regions and the two incidence maps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cobordism {
    source: CobObject,
    target: CobObject,
    regions: FinSet,
    in_src: FinMap,
    in_tgt: FinMap,
}

impl Cobordism {
    pub fn new(
        source: CobObject,
        target: CobObject,
        regions: FinSet,
        in_src: FinMap,
        in_tgt: FinMap,
    ) -> Result<Self> {
        if in_src.dom() != source.components() || in_src.cod() != &regions {
            return Err(Error::Shape("source incidence must map source components to regions".into()));
        }
        if in_tgt.dom() != target.components() || in_tgt.cod() != &regions {
            return Err(Error::Shape("target incidence must map target components to regions".into()));
        }
        Ok(Cobordism { source, target, regions, in_src, in_tgt })
    }

    /// `Σ × [0,1]`: one region per component.
    pub fn cylinder(sigma: &CobObject) -> Self {
        let id = FinMap::identity(sigma.components());
        Cobordism {
            source: sigma.clone(),
            target: sigma.clone(),
            regions: sigma.components().clone(),
            in_src: id.clone(),
            in_tgt: id,
        }
    }

    pub fn source(&self) -> &CobObject {
        &self.source
    }

    pub fn target(&self) -> &CobObject {
        &self.target
    }

    pub fn regions(&self) -> &FinSet {
        &self.regions
    }

    pub fn in_src(&self) -> &FinMap {
        &self.in_src
    }

    pub fn in_tgt(&self) -> &FinMap {
        &self.in_tgt
    }

    /// The underlying body, with boundary `-Σ ⊔ Λ`: source components are
    /// tagged `0#`, target components `1#`.
    pub fn to_body(&self) -> Body {
        Body {
            regions: self.regions.clone(),
            boundary: self.source.reverse().disjoint_union(&self.target),
            incidence: copair(&self.in_src, &self.in_tgt).expect("common region set"),
        }
    }

    /// `M ⊔ N`, everything tagged `0#` and `1#`.
    pub fn disjoint_union(&self, other: &Cobordism) -> Self {
        Cobordism {
            source: self.source.disjoint_union(&other.source),
            target: self.target.disjoint_union(&other.target),
            regions: disjoint_union(&self.regions, &other.regions).carrier,
            in_src: sum_map(&self.in_src, &other.in_src),
            in_tgt: sum_map(&self.in_tgt, &other.in_tgt),
        }
    }
}

pub fn cylinder(sigma: &CobObject) -> Cobordism {
    Cobordism::cylinder(sigma)
}

pub fn reverse_orientation(sigma: &CobObject) -> CobObject {
    sigma.reverse()
}

pub fn disjoint_union_cob(m: &Cobordism, n: &Cobordism) -> Cobordism {
    m.disjoint_union(n)
}

/// `M ∘ N` together with the quotient `regions(M) ⊔ regions(N) → regions`.
pub fn glue_with_quotient(m: &Cobordism, n: &Cobordism) -> Result<(Cobordism, FinMap)> {
    if m.target != n.source {
        return Err(Error::NotComposable("the target of the first cobordism differs from the source of the second".into()));
    }
    let sum = disjoint_union(&m.regions, &n.regions);
    let q = coequalizer(&m.in_tgt.then(&sum.left)?, &n.in_src.then(&sum.right)?)?;
    let glued = Cobordism {
        source: m.source.clone(),
        target: n.target.clone(),
        regions: q.cod().clone(),
        in_src: m.in_src.then(&sum.left)?.then(&q)?,
        in_tgt: n.in_tgt.then(&sum.right)?.then(&q)?,
    };
    Ok((glued, q))
}

/// Glues `M : Σ → Λ` and `N : Λ → Θ` along `Λ`. Regions are classes of
/// `regions(M) ⊔ regions(N)`, each named by its least element.
pub fn glue(m: &Cobordism, n: &Cobordism) -> Result<Cobordism> {
    Ok(glue_with_quotient(m, n)?.0)
}

/// A compact oriented manifold with boundary, as regions plus incidence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Body {
    regions: FinSet,
    boundary: CobObject,
    incidence: FinMap,
}

impl Body {
    pub fn new(regions: FinSet, boundary: CobObject, incidence: FinMap) -> Result<Self> {
        if incidence.dom() != boundary.components() || incidence.cod() != &regions {
            return Err(Error::Shape("incidence must map boundary components to regions".into()));
        }
        Ok(Body { regions, boundary, incidence })
    }

    pub fn regions(&self) -> &FinSet {
        &self.regions
    }

    pub fn boundary(&self) -> &CobObject {
        &self.boundary
    }

    pub fn incidence(&self) -> &FinMap {
        &self.incidence
    }

    pub fn disjoint_union(&self, other: &Body) -> Body {
        Body {
            regions: disjoint_union(&self.regions, &other.regions).carrier,
            boundary: self.boundary.disjoint_union(&other.boundary),
            incidence: sum_map(&self.incidence, &other.incidence),
        }
    }
}

/// A bijection of components preserving orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectDiffeo {
    dom: CobObject,
    cod: CobObject,
    map: FinMap,
}

impl ObjectDiffeo {
    pub fn new(dom: CobObject, cod: CobObject, map: FinMap) -> Result<Self> {
        if map.dom() != dom.components() || map.cod() != cod.components() {
            return Err(Error::Shape("diffeomorphism does not match the components".into()));
        }
        if !map.is_bijective() {
            return Err(Error::NotBijective);
        }
        if map.then(&cod.orientation)? != dom.orientation {
            return Err(Error::Invalid { kind: "diffeomorphism", detail: "orientation is not preserved".into() });
        }
        Ok(ObjectDiffeo { dom, cod, map })
    }

    pub fn identity(sigma: &CobObject) -> Self {
        ObjectDiffeo { dom: sigma.clone(), cod: sigma.clone(), map: FinMap::identity(sigma.components()) }
    }

    pub fn dom(&self) -> &CobObject {
        &self.dom
    }

    pub fn cod(&self) -> &CobObject {
        &self.cod
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn then(&self, next: &ObjectDiffeo) -> Result<ObjectDiffeo> {
        if self.cod != next.dom {
            return Err(Error::NotComposable("diffeomorphisms".into()));
        }
        Ok(ObjectDiffeo { dom: self.dom.clone(), cod: next.cod.clone(), map: self.map.then(&next.map)? })
    }

    pub fn inverse(&self) -> ObjectDiffeo {
        ObjectDiffeo { dom: self.cod.clone(), cod: self.dom.clone(), map: self.map.inverse().expect("bijective") }
    }

    /// The same map viewed between the reversed hypersurfaces.
    pub fn reverse(&self) -> ObjectDiffeo {
        ObjectDiffeo { dom: self.dom.reverse(), cod: self.cod.reverse(), map: self.map.clone() }
    }

    pub fn disjoint_union(&self, other: &ObjectDiffeo) -> ObjectDiffeo {
        ObjectDiffeo {
            dom: self.dom.disjoint_union(&other.dom),
            cod: self.cod.disjoint_union(&other.cod),
            map: sum_map(&self.map, &other.map),
        }
    }
}

/// A diffeomorphism of bodies: bijections on regions and on boundary
/// components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyDiffeo {
    dom: Body,
    cod: Body,
    regions: FinMap,
    boundary: FinMap,
}

pub const DIFFEO_LAWS: [&str; 3] = ["bijective", "orientation", "incidence"];

impl BodyDiffeo {
    /// Checks shapes only; see [`BodyDiffeo::validate`].
    pub fn new(dom: Body, cod: Body, regions: FinMap, boundary: FinMap) -> Result<Self> {
        if regions.dom() != &dom.regions || regions.cod() != &cod.regions {
            return Err(Error::Shape("region map does not match the regions".into()));
        }
        if boundary.dom() != dom.boundary.components() || boundary.cod() != cod.boundary.components() {
            return Err(Error::Shape("boundary map does not match the boundaries".into()));
        }
        Ok(BodyDiffeo { dom, cod, regions, boundary })
    }

    /// Builds and validates.
    pub fn checked(dom: Body, cod: Body, regions: FinMap, boundary: FinMap) -> Result<Self> {
        let d = Self::new(dom, cod, regions, boundary)?;
        d.ensure_valid()?;
        Ok(d)
    }

    pub fn identity(x: &Body) -> Self {
        BodyDiffeo {
            dom: x.clone(),
            cod: x.clone(),
            regions: FinMap::identity(&x.regions),
            boundary: FinMap::identity(x.boundary.components()),
        }
    }

    pub fn dom(&self) -> &Body {
        &self.dom
    }

    pub fn cod(&self) -> &Body {
        &self.cod
    }

    pub fn regions(&self) -> &FinMap {
        &self.regions
    }

    pub fn boundary(&self) -> &FinMap {
        &self.boundary
    }

    /// The boundary part as a diffeomorphism of hypersurfaces.
    pub fn boundary_diffeo(&self) -> Result<ObjectDiffeo> {
        ObjectDiffeo::new(self.dom.boundary.clone(), self.cod.boundary.clone(), self.boundary.clone())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("body diffeomorphism", &DIFFEO_LAWS);
        report.push(Record::check("bijective", "regions", self.regions.is_bijective(), || "region map is not bijective".into()));
        report.push(Record::check("bijective", "boundary", self.boundary.is_bijective(), || "boundary map is not bijective".into()));
        report.push(Record::diagram("orientation", "o'∘φ = o", || {
            Ok((self.boundary.then(&self.cod.boundary.orientation)?, self.dom.boundary.orientation.clone()))
        }));
        report.push(Record::diagram("incidence", "ι'∘φ = Φ∘ι", || {
            Ok((self.boundary.then(&self.cod.incidence)?, self.dom.incidence.then(&self.regions)?))
        }));
        report
    }

    fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        let failure = report.failures().next().map(|f| format!("{} ({})", f.law, f.instance));
        match failure {
            None => Ok(()),
            Some(detail) => Err(Error::Invalid { kind: "diffeomorphism", detail }),
        }
    }

    pub fn then(&self, next: &BodyDiffeo) -> Result<BodyDiffeo> {
        if self.cod != next.dom {
            return Err(Error::NotComposable("body diffeomorphisms".into()));
        }
        Ok(BodyDiffeo {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            regions: self.regions.then(&next.regions)?,
            boundary: self.boundary.then(&next.boundary)?,
        })
    }

    pub fn inverse(&self) -> Result<BodyDiffeo> {
        Ok(BodyDiffeo {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            regions: self.regions.inverse()?,
            boundary: self.boundary.inverse()?,
        })
    }

    pub fn disjoint_union(&self, other: &BodyDiffeo) -> BodyDiffeo {
        BodyDiffeo {
            dom: self.dom.disjoint_union(&other.dom),
            cod: self.cod.disjoint_union(&other.cod),
            regions: sum_map(&self.regions, &other.regions),
            boundary: sum_map(&self.boundary, &other.boundary),
        }
    }
}

/// A diffeomorphism of cobordisms `M → N`, restricting to diffeomorphisms of
/// the sources and of the targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobDiffeo {
    dom: Cobordism,
    cod: Cobordism,
    regions: FinMap,
    source: ObjectDiffeo,
    target: ObjectDiffeo,
}

impl CobDiffeo {
    /// Checks shapes only; see [`CobDiffeo::validate`].
    pub fn new(
        dom: Cobordism,
        cod: Cobordism,
        regions: FinMap,
        source: ObjectDiffeo,
        target: ObjectDiffeo,
    ) -> Result<Self> {
        if regions.dom() != &dom.regions || regions.cod() != &cod.regions {
            return Err(Error::Shape("region map does not match the regions".into()));
        }
        if source.dom != dom.source || source.cod != cod.source {
            return Err(Error::Shape("source diffeomorphism does not match the sources".into()));
        }
        if target.dom != dom.target || target.cod != cod.target {
            return Err(Error::Shape("target diffeomorphism does not match the targets".into()));
        }
        Ok(CobDiffeo { dom, cod, regions, source, target })
    }

    pub fn checked(
        dom: Cobordism,
        cod: Cobordism,
        regions: FinMap,
        source: ObjectDiffeo,
        target: ObjectDiffeo,
    ) -> Result<Self> {
        let d = Self::new(dom, cod, regions, source, target)?;
        d.to_body_diffeo().ensure_valid()?;
        Ok(d)
    }

    pub fn identity(m: &Cobordism) -> Self {
        CobDiffeo {
            dom: m.clone(),
            cod: m.clone(),
            regions: FinMap::identity(&m.regions),
            source: ObjectDiffeo::identity(&m.source),
            target: ObjectDiffeo::identity(&m.target),
        }
    }

    /// `φ × id_{[0,1]}` on `Σ × [0,1]`.
    pub fn cylinder(phi: &ObjectDiffeo) -> Self {
        CobDiffeo {
            dom: Cobordism::cylinder(&phi.dom),
            cod: Cobordism::cylinder(&phi.cod),
            regions: phi.map.clone(),
            source: phi.clone(),
            target: phi.clone(),
        }
    }

    pub fn dom(&self) -> &Cobordism {
        &self.dom
    }

    pub fn cod(&self) -> &Cobordism {
        &self.cod
    }

    pub fn regions(&self) -> &FinMap {
        &self.regions
    }

    pub fn source(&self) -> &ObjectDiffeo {
        &self.source
    }

    pub fn target(&self) -> &ObjectDiffeo {
        &self.target
    }

    pub fn to_body_diffeo(&self) -> BodyDiffeo {
        BodyDiffeo {
            dom: self.dom.to_body(),
            cod: self.cod.to_body(),
            regions: self.regions.clone(),
            boundary: sum_map(&self.source.map, &self.target.map),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.to_body_diffeo().validate();
        report.title = "cobordism diffeomorphism".into();
        report
    }

    pub fn then(&self, next: &CobDiffeo) -> Result<CobDiffeo> {
        if self.cod != next.dom {
            return Err(Error::NotComposable("cobordism diffeomorphisms".into()));
        }
        Ok(CobDiffeo {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            regions: self.regions.then(&next.regions)?,
            source: self.source.then(&next.source)?,
            target: self.target.then(&next.target)?,
        })
    }

    pub fn inverse(&self) -> Result<CobDiffeo> {
        Ok(CobDiffeo {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            regions: self.regions.inverse()?,
            source: self.source.inverse(),
            target: self.target.inverse(),
        })
    }

    pub fn disjoint_union(&self, other: &CobDiffeo) -> CobDiffeo {
        CobDiffeo {
            dom: self.dom.disjoint_union(&other.dom),
            cod: self.cod.disjoint_union(&other.cod),
            regions: sum_map(&self.regions, &other.regions),
            source: self.source.disjoint_union(&other.source),
            target: self.target.disjoint_union(&other.target),
        }
    }
}

/// `Φ ∘ Ψ` glued along a common middle diffeomorphism.
pub fn glue_diffeo(phi: &CobDiffeo, psi: &CobDiffeo) -> Result<CobDiffeo> {
    if phi.target != psi.source {
        return Err(Error::NotComposable("the diffeomorphisms differ on the common boundary".into()));
    }
    let (dom, q) = glue_with_quotient(&phi.dom, &psi.dom)?;
    let (cod, q2) = glue_with_quotient(&phi.cod, &psi.cod)?;
    let sum = sum_map(&phi.regions, &psi.regions).then(&q2)?;
    // a class maps to the image of any of its members; all agree
    let regions = FinMap::try_from_fn(dom.regions.clone(), cod.regions.clone(), |r| {
        let i = q.dom().index_of(r).expect("representatives are members");
        Ok(sum.cod().get(sum.index(i)).clone())
    })?;
    for i in 0..q.dom().len() {
        if regions.index(q.index(i)) != sum.index(i) {
            return Err(Error::Invalid { kind: "glued diffeomorphism", detail: "classes are not respected".into() });
        }
    }
    CobDiffeo::new(dom, cod, regions, phi.source.clone(), psi.target.clone())
}

fn untag(t: &Token) -> (u32, &Token) {
    t.as_tag().expect("tagged token")
}

/// The collapse `glue(cylinder(Σ), M) → M`.
pub fn left_collapse(m: &Cobordism) -> Result<CobDiffeo> {
    let glued = glue(&Cobordism::cylinder(&m.source), m)?;
    let regions = FinMap::try_from_fn(glued.regions.clone(), m.regions.clone(), |r| match untag(r) {
        (0, c) => Ok(m.in_src.apply(c)?.clone()),
        (_, r) => Ok(r.clone()),
    })?;
    CobDiffeo::checked(glued, m.clone(), regions, ObjectDiffeo::identity(&m.source), ObjectDiffeo::identity(&m.target))
}

/// The collapse `glue(M, cylinder(Λ)) → M`.
pub fn right_collapse(m: &Cobordism) -> Result<CobDiffeo> {
    let glued = glue(m, &Cobordism::cylinder(&m.target))?;
    let regions = FinMap::try_from_fn(glued.regions.clone(), m.regions.clone(), |r| match untag(r) {
        (0, r) => Ok(r.clone()),
        (_, c) => Ok(m.in_tgt.apply(c)?.clone()),
    })?;
    CobDiffeo::checked(glued, m.clone(), regions, ObjectDiffeo::identity(&m.source), ObjectDiffeo::identity(&m.target))
}

/// Renames a region of `glue(glue(M,N),P)` to the same class in
/// `glue(M,glue(N,P))`.
fn reassociate(t: &Token) -> Token {
    match untag(t) {
        (0, inner) => match untag(inner) {
            (0, m) => Token::tag(0, m),
            (_, n) => Token::tag(1, &Token::tag(0, n)),
        },
        (_, p) => Token::tag(1, &Token::tag(1, p)),
    }
}

/// The canonical diffeomorphism `glue(glue(M,N),P) → glue(M,glue(N,P))`.
pub fn glue_associator(m: &Cobordism, n: &Cobordism, p: &Cobordism) -> Result<CobDiffeo> {
    reassociation(&glue(&glue(m, n)?, p)?, &glue(m, &glue(n, p)?)?)
}

/// [`glue_associator`] from the two glued cobordisms.
pub fn reassociation(left: &Cobordism, right: &Cobordism) -> Result<CobDiffeo> {
    let regions = FinMap::from_fn(left.regions.clone(), right.regions.clone(), reassociate)?;
    let (source, target) = (ObjectDiffeo::identity(&left.source), ObjectDiffeo::identity(&left.target));
    CobDiffeo::checked(left.clone(), right.clone(), regions, source, target)
}

/// The symmetry `M ⊔ N → N ⊔ M`.
pub fn symmetry_diffeo(m: &Cobordism, n: &Cobordism) -> Result<CobDiffeo> {
    let flip = |t: &Token| {
        let (i, x) = untag(t);
        Token::tag(1 - i, x)
    };
    let dom = m.disjoint_union(n);
    let cod = n.disjoint_union(m);
    let obj = |a: &CobObject, b: &CobObject| -> Result<ObjectDiffeo> {
        let (d, c) = (a.disjoint_union(b), b.disjoint_union(a));
        let map = FinMap::from_fn(d.components.clone(), c.components.clone(), flip)?;
        ObjectDiffeo::new(d, c, map)
    };
    let source = obj(&m.source, &n.source)?;
    let target = obj(&m.target, &n.target)?;
    let regions = FinMap::from_fn(dom.regions.clone(), cod.regions.clone(), flip)?;
    CobDiffeo::checked(dom, cod, regions, source, target)
}

/// An inclusion of a body as a union of components of another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyEmbedding {
    piece: Body,
    ambient: Body,
    regions: FinMap,
    boundary: FinMap,
}

impl BodyEmbedding {
    pub fn new(piece: Body, ambient: Body, regions: FinMap, boundary: FinMap) -> Result<Self> {
        if regions.dom() != &piece.regions || regions.cod() != &ambient.regions {
            return Err(Error::Shape("region map does not match the regions".into()));
        }
        if boundary.dom() != piece.boundary.components() || boundary.cod() != ambient.boundary.components() {
            return Err(Error::Shape("boundary map does not match the boundaries".into()));
        }
        if !regions.is_injective() || !boundary.is_injective() {
            return Err(Error::Invalid { kind: "embedding", detail: "not injective".into() });
        }
        if boundary.then(&ambient.boundary.orientation)? != piece.boundary.orientation {
            return Err(Error::Invalid { kind: "embedding", detail: "orientation is not preserved".into() });
        }
        if boundary.then(&ambient.incidence)? != piece.incidence.then(&regions)? {
            return Err(Error::Invalid { kind: "embedding", detail: "incidence is not preserved".into() });
        }
        let image = regions.image();
        let covered = ambient
            .incidence
            .table()
            .iter()
            .enumerate()
            .filter(|(_, r)| image.contains(ambient.regions.get(**r)))
            .all(|(i, _)| boundary.table().contains(&i));
        if !covered {
            return Err(Error::Invalid { kind: "embedding", detail: "image regions have extra boundary".into() });
        }
        Ok(BodyEmbedding { piece, ambient, regions, boundary })
    }

    pub fn piece(&self) -> &Body {
        &self.piece
    }

    pub fn ambient(&self) -> &Body {
        &self.ambient
    }

    pub fn regions(&self) -> &FinMap {
        &self.regions
    }

    pub fn boundary(&self) -> &FinMap {
        &self.boundary
    }

    /// The two summand inclusions into `X ⊔ Y`.
    pub fn summands(x: &Body, y: &Body) -> (BodyEmbedding, BodyEmbedding) {
        let ambient = x.disjoint_union(y);
        let r = disjoint_union(&x.regions, &y.regions);
        let b = disjoint_union(x.boundary.components(), y.boundary.components());
        let fix = |m: FinMap, cod: &FinSet| FinMap::from_indices(m.dom().clone(), cod.clone(), m.table().to_vec()).expect("injection");
        (
            BodyEmbedding {
                piece: x.clone(),
                ambient: ambient.clone(),
                regions: fix(r.left, ambient.regions()),
                boundary: fix(b.left, ambient.boundary.components()),
            },
            BodyEmbedding {
                piece: y.clone(),
                regions: fix(r.right, ambient.regions()),
                boundary: fix(b.right, ambient.boundary.components()),
                ambient,
            },
        )
    }
}

/// Corner data for a cornered gluing triple: the corner components lying on
/// `Λ`, on `Σ` and on `-Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corners {
    pub lambda: FinSet,
    pub sigma: FinSet,
    pub sigma_neg: FinSet,
}

/// A body `X` with `∂X = Λ ⊔ Σ ⊔ -Σ` and a pairing `Σ → -Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingTriple {
    body: Body,
    lambda: FinSet,
    sigma: FinSet,
    sigma_neg: FinSet,
    pairing: FinMap,
    corners: Option<Corners>,
}

pub const TRIPLE_LAWS: [&str; 4] = ["partition", "pairing", "orientation", "corners"];

/// `X_gl` with the quotient `regions(X) → regions(X_gl)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedBody {
    pub body: Body,
    pub quotient: FinMap,
}

impl GluingTriple {
    /// Takes `Σ` and `-Σ` from the pairing; `Λ` is the rest of the boundary.
    pub fn new(body: Body, pairing: FinMap) -> Result<Self> {
        let comps = body.boundary.components();
        let sigma = pairing.dom().clone();
        let sigma_neg = pairing.cod().clone();
        if !sigma.is_subset(comps) || !sigma_neg.is_subset(comps) {
            return Err(Error::Shape("pairing must relate boundary components".into()));
        }
        let lambda = comps.filter(|c| !sigma.contains(c) && !sigma_neg.contains(c));
        let t = GluingTriple { body, lambda, sigma, sigma_neg, pairing, corners: None };
        t.ensure_valid()?;
        Ok(t)
    }

    pub fn with_corners(mut self, corners: Corners) -> Result<Self> {
        self.corners = Some(corners);
        self.ensure_valid()?;
        Ok(self)
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn lambda(&self) -> &FinSet {
        &self.lambda
    }

    pub fn sigma(&self) -> &FinSet {
        &self.sigma
    }

    pub fn sigma_neg(&self) -> &FinSet {
        &self.sigma_neg
    }

    pub fn pairing(&self) -> &FinMap {
        &self.pairing
    }

    pub fn corners(&self) -> Option<&Corners> {
        self.corners.as_ref()
    }

    pub fn lambda_object(&self) -> CobObject {
        self.body.boundary.restrict(&self.lambda).expect("subset of the boundary")
    }

    pub fn sigma_object(&self) -> CobObject {
        self.body.boundary.restrict(&self.sigma).expect("subset of the boundary")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("gluing triple", &TRIPLE_LAWS);
        let comps = self.body.boundary.components();
        let parts = [&self.lambda, &self.sigma, &self.sigma_neg];
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let covered = comps.iter().all(|c| parts.iter().any(|p| p.contains(c)));
        report.push(Record::check("partition", "∂X = Λ ⊔ Σ ⊔ -Σ", covered && total == comps.len() && parts.iter().all(|p| p.is_subset(comps)), || {
            "the three parts do not partition the boundary".into()
        }));
        report.push(Record::check("pairing", "Σ → -Σ bijective", self.pairing.dom() == &self.sigma && self.pairing.cod() == &self.sigma_neg && self.pairing.is_bijective(), || {
            "the pairing is not a bijection Σ → -Σ".into()
        }));
        let flips = self.pairing.pairs().all(|(a, b)| {
            let (i, j) = (comps.index_of(a), comps.index_of(b));
            matches!((i, j), (Some(i), Some(j)) if self.body.boundary.is_positive(i) != self.body.boundary.is_positive(j))
        });
        report.push(Record::check("orientation", "pairing reverses orientation", flips, || {
            "a paired component keeps its orientation".into()
        }));
        match &self.corners {
            None => report.push(Record::pass("corners", "uncornered")),
            Some(c) => {
                let disjoint = c.sigma.iter().all(|p| !c.sigma_neg.contains(p));
                let on_edges = c.lambda.iter().all(|p| c.sigma.contains(p) || c.sigma_neg.contains(p));
                report.push(Record::check("corners", "∂Σ ∩ ∂(-Σ) = ∅", disjoint, || "Σ and -Σ share a corner".into()));
                report.push(Record::check("corners", "∂Λ = (∂Σ ⊔ ∂(-Σ)) ∩ ∂Λ", on_edges, || {
                    "a corner of Λ lies on neither Σ nor -Σ".into()
                }));
            }
        }
        report
    }

    fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        let failure = report.failures().next().map(|f| format!("{} ({})", f.law, f.detail.clone().unwrap_or_default()));
        match failure {
            None => Ok(()),
            Some(detail) => Err(Error::Invalid { kind: "gluing triple", detail }),
        }
    }

    /// Splits into gluing `first ⊆ Σ`, then the rest of `Σ` on the result.
    pub fn partial(&self, first: &FinSet) -> Result<(GluingTriple, GluingTriple)> {
        if !first.is_subset(&self.sigma) {
            return Err(Error::Shape("the first part must be a subset of Σ".into()));
        }
        let rest = self.sigma.filter(|c| !first.contains(c));
        let t1 = GluingTriple::new(self.body.clone(), self.pairing.restrict(first)?.corestrict(&self.pairing.restrict(first)?.image())?)?;
        let glued = glue_triple(&t1)?;
        let second = self.pairing.restrict(&rest)?;
        let second = second.corestrict(&second.image())?;
        let t2 = GluingTriple::new(glued.body, second)?;
        Ok((t1, t2))
    }
}

/// Identifies each component of `Σ` with its partner in `-Σ`. The regions of
/// `X_gl` are classes named by their least region; its boundary is `Λ`.
pub fn glue_triple(t: &GluingTriple) -> Result<GluedBody> {
    t.ensure_valid()?;
    let x = &t.body;
    let comps = x.boundary.components();
    let pairs = t
        .pairing
        .pairs()
        .map(|(a, b)| {
            let ra = x.incidence.index(comps.index_of(a).expect("boundary component"));
            let rb = x.incidence.index(comps.index_of(b).expect("boundary component"));
            (ra, rb)
        })
        .collect::<Vec<_>>();
    let quotient = quotient_by_pairs(&x.regions, pairs)?;
    let boundary = t.lambda_object();
    let incidence = x.incidence.restrict(&t.lambda)?.then(&quotient)?;
    Ok(GluedBody { body: Body { regions: quotient.cod().clone(), boundary, incidence }, quotient })
}

/// The triple on `M ⊔ N` whose gluing is `glue(M, N)`: `Σ` is the target of
/// `M` and `-Σ` the source of `N`.
pub fn composition_triple(m: &Cobordism, n: &Cobordism) -> Result<GluingTriple> {
    if m.target != n.source {
        return Err(Error::NotComposable("the target of the first cobordism differs from the source of the second".into()));
    }
    let body = m.to_body().disjoint_union(&n.to_body());
    let sigma = FinSet::collect_unique(m.target.components.iter().map(|c| Token::tag(0, &Token::tag(1, c))));
    let sigma_neg = FinSet::collect_unique(n.source.components.iter().map(|c| Token::tag(1, &Token::tag(0, c))));
    let pairing = FinMap::from_fn(sigma, sigma_neg, |t| {
        let (_, inner) = untag(t);
        Token::tag(1, &Token::tag(0, untag(inner).1))
    })?;
    GluingTriple::new(body, pairing)
}

/// The relabeling `X_gl → glue(M,N)` for the composition triple of `(M, N)`.
pub fn composition_relabel(m: &Cobordism, n: &Cobordism) -> Result<BodyDiffeo> {
    composition_relabel_of(&composition_triple(m, n)?, m, n)
}

/// [`composition_relabel`] for an already built composition triple.
pub fn composition_relabel_of(t: &GluingTriple, m: &Cobordism, n: &Cobordism) -> Result<BodyDiffeo> {
    let glued = glue_triple(t)?.body;
    let target = glue(m, n)?.to_body();
    let regions = FinMap::from_fn(glued.regions.clone(), target.regions.clone(), |r| r.clone())?;
    let boundary = FinMap::from_fn(glued.boundary.components().clone(), target.boundary.components().clone(), |t| {
        let (side, inner) = untag(t);
        Token::tag(side, untag(inner).1)
    })?;
    BodyDiffeo::checked(glued, target, regions, boundary)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("successor exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

fn perm_map(set: &FinSet, perm: &[usize]) -> FinMap {
    FinMap::from_indices(set.clone(), set.clone(), perm.to_vec()).expect("permutation")
}

/// Orientation-preserving permutations of the components.
pub fn object_automorphisms(sigma: &CobObject) -> Vec<ObjectDiffeo> {
    let o = sigma.orientation.table();
    permutations(sigma.len())
        .into_iter()
        .filter(|p| p.iter().enumerate().all(|(i, &j)| o[i] == o[j]))
        .map(|p| ObjectDiffeo { dom: sigma.clone(), cod: sigma.clone(), map: perm_map(&sigma.components, &p) })
        .collect()
}

/// All diffeomorphisms `M → M`.
pub fn cobordism_automorphisms(m: &Cobordism) -> Vec<CobDiffeo> {
    let sources = object_automorphisms(&m.source);
    let targets = object_automorphisms(&m.target);
    let mut out = Vec::new();
    for perm in permutations(m.regions.len()) {
        let regions = perm_map(&m.regions, &perm);
        let src_ok = |s: &ObjectDiffeo| s.map.then(&m.in_src).ok() == m.in_src.then(&regions).ok();
        let tgt_ok = |t: &ObjectDiffeo| t.map.then(&m.in_tgt).ok() == m.in_tgt.then(&regions).ok();
        for s in sources.iter().filter(|s| src_ok(s)) {
            for t in targets.iter().filter(|t| tgt_ok(t)) {
                out.push(CobDiffeo { dom: m.clone(), cod: m.clone(), regions: regions.clone(), source: s.clone(), target: t.clone() });
            }
        }
    }
    out
}

/// All diffeomorphisms `X → X`.
pub fn body_automorphisms(x: &Body) -> Vec<BodyDiffeo> {
    let boundaries = object_automorphisms(&x.boundary);
    let mut out = Vec::new();
    for perm in permutations(x.regions.len()) {
        let regions = perm_map(&x.regions, &perm);
        let moved = x.incidence.then(&regions).expect("endomap");
        for b in &boundaries {
            if b.map.then(&x.incidence).expect("endomap") == moved {
                out.push(BodyDiffeo { dom: x.clone(), cod: x.clone(), regions: regions.clone(), boundary: b.map.clone() });
            }
        }
    }
    out
}

/// A short printed description, e.g. `{p0+,n0-} -> {p0+} [r0]`.
pub fn describe_object(sigma: &CobObject) -> String {
    let items: Vec<String> = sigma
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{c}{}", if sigma.is_positive(i) { "+" } else { "-" }))
        .collect();
    format!("{{{}}}", items.join(","))
}

pub fn describe_cobordism(m: &Cobordism) -> String {
    let inc = |f: &FinMap| f.pairs().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>().join(",");
    format!(
        "{} -> {} regions {:?} in ({}) out ({})",
        describe_object(&m.source),
        describe_object(&m.target),
        m.regions,
        inc(&m.in_src),
        inc(&m.in_tgt)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(names: &[&str]) -> FinSet {
        FinSet::from_atoms(names).unwrap()
    }

    fn a(s: &str) -> Token {
        Token::atom(s).unwrap()
    }

    fn map(dom: &FinSet, cod: &FinSet, pairs: &[(&str, &str)]) -> FinMap {
        FinMap::new(dom.clone(), cod.clone(), pairs.iter().map(|(x, y)| (a(x), a(y)))).unwrap()
    }

    fn cob(src: &CobObject, tgt: &CobObject, regions: &[&str], ins: &[(&str, &str)], outs: &[(&str, &str)]) -> Cobordism {
        let r = set(regions);
        Cobordism::new(src.clone(), tgt.clone(), r.clone(), map(src.components(), &r, ins), map(tgt.components(), &r, outs)).unwrap()
    }

    #[test]
    fn objects() {
        let s = CobObject::from_signs(&[("a", true), ("b", false)]).unwrap();
        assert_eq!(s.reverse().reverse(), s);
        assert_ne!(s.reverse(), s);
        let t = CobObject::positive(&["c"]).unwrap();
        assert_eq!(s.disjoint_union(&t).len(), 3);
        assert!(CobObject::empty().is_empty());
        assert_eq!(describe_object(&s), "{a+,b-}");
    }

    #[test]
    fn cylinders() {
        let one = CobObject::positive(&["a"]).unwrap();
        assert_eq!(Cobordism::cylinder(&one).regions().len(), 1);
        let three = CobObject::positive(&["a", "b", "c"]).unwrap();
        let c = Cobordism::cylinder(&three);
        assert_eq!(c.regions().len(), 3);
        assert_eq!(c.in_src(), &FinMap::identity(three.components()));

        let cc = glue(&c, &c).unwrap();
        assert_eq!(cc.regions().len(), 3);
        assert!(right_collapse(&c).unwrap().validate().passed());
    }

    #[test]
    fn glue_merges_regions() {
        let s = CobObject::positive(&["a"]).unwrap();
        let l = CobObject::positive(&["b"]).unwrap();
        let e = CobObject::empty();
        // regions r1, r2 of M; the single component of Λ meets r1
        let m = cob(&s, &l, &["r1", "r2"], &[("a", "r2")], &[("b", "r1")]);
        let n = cob(&l, &e, &["x"], &[("b", "x")], &[]);
        let g = glue(&m, &n).unwrap();
        assert_eq!(g.regions().len(), 2);
        assert_eq!(g.regions().elements(), &[Token::tag(0, &a("r1")), Token::tag(0, &a("r2"))]);
    }

    #[test]
    fn glue_is_associative_up_to_relabeling() {
        let s = CobObject::positive(&["a", "b"]).unwrap();
        let t = CobObject::positive(&["c"]).unwrap();
        let m = cob(&s, &t, &["r"], &[("a", "r"), ("b", "r")], &[("c", "r")]);
        let n = cob(&t, &s, &["x", "y"], &[("c", "x")], &[("a", "x"), ("b", "y")]);
        let p = Cobordism::cylinder(&s);
        let assoc = glue_associator(&m, &n, &p).unwrap();
        assert!(assoc.validate().passed());
        let left = glue(&glue(&m, &n).unwrap(), &p).unwrap();
        let right = glue(&m, &glue(&n, &p).unwrap()).unwrap();
        let relabeled: Vec<Token> = left.regions().iter().map(reassociate).collect();
        assert_eq!(relabeled, right.regions().elements());
        assert_eq!(left.in_src().then(assoc.regions()).unwrap(), *right.in_src());
    }

    #[test]
    fn collapses_validate() {
        let s = CobObject::from_signs(&[("a", true), ("b", false)]).unwrap();
        let e = CobObject::empty();
        let m = cob(&s, &e, &["r", "z"], &[("a", "r"), ("b", "r")], &[]);
        let l = left_collapse(&m).unwrap();
        assert!(l.validate().passed());
        assert_eq!(l.dom().regions().len(), 2);
        assert!(right_collapse(&m).unwrap().validate().passed());
    }

    #[test]
    fn triples() {
        let s = CobObject::positive(&["a"]).unwrap();
        let c = Cobordism::cylinder(&s);
        let t = composition_triple(&c, &c).unwrap();
        assert!(t.validate().passed());
        let g = glue_triple(&t).unwrap();
        assert_eq!(g.body.regions().len(), 1);
        assert_eq!(g.body.boundary().len(), 2);
        let relabel = composition_relabel(&c, &c).unwrap();
        assert!(relabel.validate().passed());
        assert_eq!(relabel.cod(), &glue(&c, &c).unwrap().to_body());

        // self-gluing one region's two boundary components
        let x = c.to_body();
        let comps = x.boundary().components().clone();
        let pairing = FinMap::from_indices(FinSet::singleton(comps.get(0).clone()), FinSet::singleton(comps.get(1).clone()), vec![0]).unwrap();
        let t = GluingTriple::new(x, pairing).unwrap();
        let g = glue_triple(&t).unwrap();
        assert_eq!(g.body.regions().len(), 1);
        assert!(g.body.boundary().is_empty());
    }

    #[test]
    fn pairing_must_reverse_orientation() {
        let both = CobObject::positive(&["a", "b"]).unwrap();
        let x = Body::new(set(&["r"]), both.clone(), map(both.components(), &set(&["r"]), &[("a", "r"), ("b", "r")])).unwrap();
        let pairing = map(&set(&["a"]), &set(&["b"]), &[("a", "b")]);
        assert!(matches!(GluingTriple::new(x, pairing), Err(Error::Invalid { .. })));
    }

    #[test]
    fn corners_are_checked() {
        let s = CobObject::positive(&["a"]).unwrap();
        let t = composition_triple(&Cobordism::cylinder(&s), &Cobordism::cylinder(&s)).unwrap();
        let ok = Corners { lambda: set(&["k"]), sigma: set(&["k"]), sigma_neg: set(&["j"]) };
        assert!(t.clone().with_corners(ok).is_ok());
        let bad = Corners { lambda: set(&["k"]), sigma: set(&["j"]), sigma_neg: set(&["i"]) };
        assert!(t.with_corners(bad).is_err());
    }

    #[test]
    fn gluing_order_does_not_matter() {
        let s = CobObject::positive(&["a", "b"]).unwrap();
        let c = Cobordism::cylinder(&s);
        let t = composition_triple(&c, &c).unwrap();
        let sigma = t.sigma().clone();
        let whole = glue_triple(&t).unwrap().body;
        for k in 0..sigma.len() {
            let first = FinSet::singleton(sigma.get(k).clone());
            let (t1, t2) = t.partial(&first).unwrap();
            assert!(t1.validate().passed());
            assert_eq!(glue_triple(&t2).unwrap().body, whole);
        }
    }

    #[test]
    fn symmetry_and_automorphisms() {
        let s = CobObject::positive(&["a", "b"]).unwrap();
        let c = Cobordism::cylinder(&s);
        let p = cob(&s, &CobObject::empty(), &["r"], &[("a", "r"), ("b", "r")], &[]);
        assert!(symmetry_diffeo(&c, &p).unwrap().validate().passed());
        let autos = cobordism_automorphisms(&c);
        assert_eq!(autos.len(), 2);
        assert!(autos.iter().all(|d| d.validate().passed()));
        assert_eq!(cobordism_automorphisms(&p).len(), 2);
        assert_eq!(object_automorphisms(&CobObject::from_signs(&[("a", true), ("b", false)]).unwrap()).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        let x = c.to_body();
        assert_eq!(body_automorphisms(&x).len(), 2);
    }

    #[test]
    fn glued_diffeos() {
        let s = CobObject::positive(&["a", "b"]).unwrap();
        let c = Cobordism::cylinder(&s);
        let swap = object_automorphisms(&s).into_iter().find(|d| d.map() != &FinMap::identity(s.components())).unwrap();
        let cs = CobDiffeo::cylinder(&swap);
        assert!(cs.validate().passed());
        let g = glue_diffeo(&cs, &cs).unwrap();
        assert!(g.validate().passed());
        assert!(glue_diffeo(&cs, &CobDiffeo::identity(&c)).is_err());
    }

    #[test]
    fn summand_embeddings() {
        let s = CobObject::positive(&["a"]).unwrap();
        let x = Cobordism::cylinder(&s).to_body();
        let (l, r) = BodyEmbedding::summands(&x, &x);
        let rebuilt = BodyEmbedding::new(l.piece().clone(), l.ambient().clone(), l.regions().clone(), l.boundary().clone());
        assert!(rebuilt.is_ok());
        assert_eq!(r.regions().image().len(), 1);
    }
}
