//! The cylinder construction: fibered semi-groups of solutions on cylinders,
//! bimodules of solutions on cobordisms, and the associator of gluing.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::bimod::{
    hcompose, hcompose_mor, identity_bimodule, identity_bimodule_morphism, EquivariantMorphism,
    FiberedBimodule,
};
use crate::ccob::{
    cobordism_automorphisms, composition_relabel_of, composition_triple, reassociation, describe_cobordism,
    describe_object, glue, glue_associator, glue_diffeo, left_collapse,
    object_automorphisms, right_collapse, BodyDiffeo, BodyEmbedding, CobDiffeo, CobObject,
    Cobordism, ObjectDiffeo,
};
use crate::error::{Error, Result};
use crate::finset::{fiber_product, fiber_product_with, product, FinMap};
use crate::fsgrp::{FiberedSemiGroup, FsgMorphism};
use crate::report::{FunctorLawReport, Record};
use crate::theory::{gluing_equalizer_mask, LocalTheory, TheoryUniverse};
use crate::token::Token;

fn violation(guard: &'static str, detail: String) -> Error {
    Error::TheoryViolation { guard, detail }
}

#[derive(Clone, Copy)]
enum Side {
    Source,
    Target,
}

/// The data of gluing `M` to `N` along their common end: splitting
/// `L_{M⊔N}` into pairs, the gluing map and the relabeling onto `glue(M,N)`.
struct Gluing {
    width: usize,
    join: Vec<usize>,
    split: Vec<(usize, usize)>,
    glue: FinMap,
    unglue: Vec<Option<usize>>,
    relabel: FinMap,
}

impl Gluing {
    fn new(theory: &dyn LocalTheory, m: &Cobordism, n: &Cobordism) -> Result<Self> {
        let (x, y) = (m.to_body(), n.to_body());
        let (ex, ey) = BodyEmbedding::summands(&x, &y);
        let (px, py) = (theory.solution_pullback(&ex)?, theory.solution_pullback(&ey)?);
        let width = py.cod().len();
        let mut join = alloc::vec![usize::MAX; px.cod().len() * width];
        let mut split = Vec::with_capacity(px.dom().len());
        for k in 0..px.dom().len() {
            let slot = px.index(k) * width + py.index(k);
            if join[slot] != usize::MAX {
                return Err(violation("region_decomposition", format!("two solutions on {} restrict alike", describe_body_pair(m, n))));
            }
            join[slot] = k;
            split.push((px.index(k), py.index(k)));
        }
        if join.contains(&usize::MAX) {
            return Err(violation("region_decomposition", format!("a pair of solutions on {} does not come from one solution", describe_body_pair(m, n))));
        }
        let triple = composition_triple(m, n)?;
        let glue = theory.gluing(&triple)?;
        if !glue.is_injective() {
            return Err(violation("gluing", format!("gluing is not injective on {}", describe_body_pair(m, n))));
        }
        let equalizer = gluing_equalizer_mask(theory, &triple)?;
        let mut unglue = alloc::vec![None; glue.cod().len()];
        for (g, &k) in glue.table().iter().enumerate() {
            unglue[k] = Some(g);
        }
        if unglue.iter().zip(&equalizer).any(|(u, &e)| u.is_some() != e) {
            return Err(violation(
                "gluing",
                format!(
                    "gluing image has {} elements, equalizer {} on {}",
                    glue.dom().len(),
                    equalizer.iter().filter(|&&e| e).count(),
                    describe_body_pair(m, n)
                ),
            ));
        }
        let relabel = theory.on_body_diffeo(&composition_relabel_of(&triple, m, n)?)?;
        Ok(Gluing { width, join, split, glue, unglue, relabel })
    }

    /// The glued solution of `(a, b)`, followed by `after`.
    fn act(&self, a: usize, b: usize, after: &FinMap) -> Result<usize> {
        let k = self.join[a * self.width + b];
        let g = self.unglue[k].ok_or_else(|| {
            violation("diagonal", format!("the pair {:?} agrees on the glued germs but does not glue", self.glue.cod().get(k)))
        })?;
        Ok(after.index(self.relabel.index(g)))
    }
}

fn describe_body_pair(m: &Cobordism, n: &Cobordism) -> String {
    format!("{} ; {}", describe_cobordism(m), describe_cobordism(n))
}

/// `E^L`, `Ω^L` and the associator for one theory, with constructions cached
/// by object and cobordism.
pub struct CylinderFunctor<'a> {
    theory: &'a dyn LocalTheory,
    semigroups: RefCell<BTreeMap<CobObject, FiberedSemiGroup>>,
    bimodules: RefCell<BTreeMap<Cobordism, FiberedBimodule>>,
}

impl<'a> CylinderFunctor<'a> {
    pub fn new(theory: &'a dyn LocalTheory) -> Self {
        CylinderFunctor { theory, semigroups: RefCell::default(), bimodules: RefCell::default() }
    }

    pub fn theory(&self) -> &dyn LocalTheory {
        self.theory
    }

    /// `L_M → L_Σ` or `L_M → L_Λ` through the restriction.
    fn end_germs(&self, m: &Cobordism, side: Side) -> Result<FinMap> {
        let y = m.to_body();
        let b = y.boundary();
        let (piece, tag) = match side {
            Side::Source => (m.source().reverse(), 0),
            Side::Target => (m.target().clone(), 1),
        };
        let inc = FinMap::from_fn(piece.components().clone(), b.components().clone(), |c| Token::tag(tag, c))?;
        self.theory.restriction(&y)?.then(&self.theory.germ_pullback(b, &piece, &inc)?)
    }

    /// `E^L_Σ`: solutions on the cylinder over germs on `Σ`, multiplied by
    /// gluing two cylinders and collapsing.
    pub fn semigroup(&self, sigma: &CobObject) -> Result<FiberedSemiGroup> {
        if let Some(e) = self.semigroups.borrow().get(sigma) {
            return Ok(e.clone());
        }
        let c = Cobordism::cylinder(sigma);
        let x = c.to_body();
        let total = self.theory.solution_space(&x);
        let base = self.theory.germ_space(sigma);
        let proj = self.end_germs(&c, Side::Target)?;
        let g = Gluing::new(self.theory, &c, &c)?;
        let after = self.theory.on_region_diffeo(&left_collapse(&c)?)?;
        let pairs = fiber_product(&proj, &proj)?;
        let table = (0..pairs.carrier.len())
            .map(|k| {
                let (i, j) = pairs.components(k);
                g.act(i, j, &after)
            })
            .collect::<Result<Vec<_>>>()?;
        let mul = FinMap::from_indices(pairs.carrier.clone(), total.clone(), table)?;
        let e = FiberedSemiGroup::new(total, base, proj, mul)?;
        self.semigroups.borrow_mut().insert(sigma.clone(), e.clone());
        Ok(e)
    }

    /// `E^L_φ = (L_{φ×id}, L_φ)`.
    pub fn fsg_morphism(&self, phi: &ObjectDiffeo) -> Result<FsgMorphism> {
        FsgMorphism::new(
            self.semigroup(phi.dom())?,
            self.semigroup(phi.cod())?,
            self.theory.on_region_diffeo(&CobDiffeo::cylinder(phi))?,
            self.theory.on_object_diffeo(phi)?,
        )
    }

    /// `Ω^L_M`, with the left action from gluing a cylinder on the source and
    /// the right action from gluing one on the target.
    pub fn bimodule(&self, m: &Cobordism) -> Result<FiberedBimodule> {
        if let Some(b) = self.bimodules.borrow().get(m) {
            return Ok(b.clone());
        }
        let left = self.semigroup(m.source())?;
        let right = self.semigroup(m.target())?;
        let src = self.end_germs(m, Side::Source)?;
        let tgt = self.end_germs(m, Side::Target)?;
        if src.cod() != left.base() {
            return Err(violation("orientation_sensitivity", format!("germs on -Σ and Σ differ for {}", describe_object(m.source()))));
        }
        let gl = Gluing::new(self.theory, &Cobordism::cylinder(m.source()), m)?;
        let after_l = self.theory.on_region_diffeo(&left_collapse(m)?)?;
        let gr = Gluing::new(self.theory, m, &Cobordism::cylinder(m.target()))?;
        let after_r = self.theory.on_region_diffeo(&right_collapse(m)?)?;
        let carrier = self.theory.solution_space(&m.to_body());
        let b = FiberedBimodule::from_index_fns(
            left,
            right,
            carrier,
            src,
            tgt,
            |e, w| gl.act(e, w, &after_l),
            |w, e| gr.act(w, e, &after_r),
        )?;
        self.bimodules.borrow_mut().insert(m.clone(), b.clone());
        Ok(b)
    }

    /// `Ω^L_Φ = (E^L_φ, L_Φ, E^L_ψ)`.
    pub fn bimodule_morphism(&self, phi: &CobDiffeo) -> Result<EquivariantMorphism> {
        EquivariantMorphism::new(
            self.bimodule(phi.dom())?,
            self.bimodule(phi.cod())?,
            self.fsg_morphism(phi.source())?,
            self.theory.on_region_diffeo(phi)?,
            self.fsg_morphism(phi.target())?,
        )
    }

    /// `L_{glue(M,N)} → L_M × L_N` as pairs of positions.
    pub fn cut(&self, m: &Cobordism, n: &Cobordism) -> Result<Vec<(usize, usize)>> {
        let g = Gluing::new(self.theory, m, n)?;
        let back = g.relabel.inverse()?;
        Ok((0..back.dom().len()).map(|z| g.split[g.glue.index(back.index(z))]).collect())
    }

    /// `A_{M,N} : Ω^L_{glue(M,N)} → Ω^L_M ⊛ Ω^L_N`, cutting a glued solution
    /// back into its two pieces.
    pub fn associator(&self, m: &Cobordism, n: &Cobordism) -> Result<EquivariantMorphism> {
        let dom = self.bimodule(&glue(m, n)?)?;
        let cod = hcompose(&self.bimodule(m)?, &self.bimodule(n)?)?;
        self.associator_between(m, n, dom, cod)
    }

    fn associator_between(&self, m: &Cobordism, n: &Cobordism, dom: FiberedBimodule, cod: FiberedBimodule) -> Result<EquivariantMorphism> {
        let (a, b) = (self.bimodule(m)?, self.bimodule(n)?);
        let table = self
            .cut(m, n)?
            .into_iter()
            .map(|(i, j)| {
                let t = Token::chain(a.carrier().get(i), b.carrier().get(j));
                cod.carrier().index_of(&t).ok_or_else(|| Error::NotAnElement { token: t, role: "composite carrier" })
            })
            .collect::<Result<Vec<_>>>()?;
        let mid = FinMap::from_indices(dom.carrier().clone(), cod.carrier().clone(), table)?;
        let left = FsgMorphism::identity(a.left_sgrp());
        let right = FsgMorphism::identity(b.right_sgrp());
        EquivariantMorphism::new(dom, cod, left, mid, right)
    }
}

pub fn cylinder_semigroup(theory: &dyn LocalTheory, sigma: &CobObject) -> Result<FiberedSemiGroup> {
    CylinderFunctor::new(theory).semigroup(sigma)
}

pub fn cylinder_fsg_morphism(theory: &dyn LocalTheory, phi: &ObjectDiffeo) -> Result<FsgMorphism> {
    CylinderFunctor::new(theory).fsg_morphism(phi)
}

pub fn cylinder_bimodule(theory: &dyn LocalTheory, m: &Cobordism) -> Result<FiberedBimodule> {
    CylinderFunctor::new(theory).bimodule(m)
}

pub fn cylinder_bimodule_morphism(theory: &dyn LocalTheory, phi: &CobDiffeo) -> Result<EquivariantMorphism> {
    CylinderFunctor::new(theory).bimodule_morphism(phi)
}

pub fn associator(theory: &dyn LocalTheory, m: &Cobordism, n: &Cobordism) -> Result<EquivariantMorphism> {
    CylinderFunctor::new(theory).associator(m, n)
}

pub const FUNCTOR_LAWS: [&str; 12] = [
    "source_target",
    "identity",
    "identity_morphisms",
    "associator",
    "associator_naturality",
    "hexagon",
    "monoidality",
    "involution",
    "rigidity",
    "functoriality",
    "carrier_count",
    "well_definedness",
];

fn run(law: &str, instance: &str, check: impl FnOnce() -> Result<Option<String>>) -> Record {
    match check() {
        Ok(None) => Record::pass(law, instance),
        Ok(Some(detail)) => Record::fail(law, instance, detail),
        Err(e) => Record::fail(law, instance, format!("construction failed: {e}")),
    }
}

fn expect(ok: bool, detail: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(detail)
}

fn valid_report(kind: &str, report: &crate::report::Report) -> Option<String> {
    report.failures().next().map(|f| format!("{kind} violates {}: {}", f.law, f.detail.clone().unwrap_or_default()))
}

/// `M ⊔ N` and `N` composable pairs `(i, j)` of the cobordism list.
pub fn composable_pairs(cobordisms: &[Cobordism]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, m) in cobordisms.iter().enumerate() {
        for (j, n) in cobordisms.iter().enumerate() {
            if m.target() == n.source() {
                out.push((i, j));
            }
        }
    }
    out
}

/// Checks the double-functor laws over the universe. Construction errors
/// are reported against the law whose instance needed the construction.
pub fn verify_double_functor(theory: &dyn LocalTheory, u: &TheoryUniverse) -> FunctorLawReport {
    let f = CylinderFunctor::new(theory);
    let mut report = FunctorLawReport::new(&format!("cylinder double functor of {}", theory.descriptor()), &FUNCTOR_LAWS);

    for sigma in &u.objects {
        verify_object(&f, sigma, &mut report);
    }
    for &(i, j) in &u.object_pairs {
        let (s, t) = (&u.objects[i], &u.objects[j]);
        let inst = format!("{} ⊔ {}", describe_object(s), describe_object(t));
        report.push(run("monoidality", &inst, || monoidality(&f, s, t)));
    }
    for m in &u.cobordisms {
        verify_cobordism(&f, m, &mut report);
    }
    let pairs = composable_pairs(&u.cobordisms);
    for &(i, j) in &pairs {
        verify_pair(&f, &u.cobordisms[i], &u.cobordisms[j], &mut report);
    }
    let triples = verify_hexagons(&f, &u.cobordisms, &pairs, &mut report);
    report.notes.push(format!("hexagon checked on {triples} composable triples, one record per first two cobordisms"));
    report.sort();
    report
}

fn verify_object(f: &CylinderFunctor, sigma: &CobObject, report: &mut FunctorLawReport) {
    let name = describe_object(sigma);
    report.push(run("rigidity", &format!("E over {name}"), || {
        let e = f.semigroup(sigma)?;
        Ok(valid_report("E", &e.validate()).or_else(|| expect(e.is_rigid(), || "E is not rigid".into())))
    }));
    report.push(run("identity", &format!("cylinder over {name}"), || {
        let e = f.semigroup(sigma)?;
        let omega = f.bimodule(&Cobordism::cylinder(sigma))?;
        Ok(expect(omega == identity_bimodule(&e), || "Ω of the cylinder differs from the identity bimodule".into()))
    }));
    report.push(run("involution", &format!("E over -{name}"), || {
        let e = f.semigroup(sigma)?;
        let r = f.semigroup(&sigma.reverse())?;
        Ok(expect(r == e.opposite(), || "E over -Σ differs from the opposite of E over Σ".into()))
    }));
    report.push(run("well_definedness", &format!("μ over {name}"), || {
        let c = Cobordism::cylinder(sigma);
        let e = f.semigroup(sigma)?;
        let g = Gluing::new(f.theory, &c, &c)?;
        let after = f.theory.on_region_diffeo(&right_collapse(&c)?)?;
        for k in 0..e.pairs().carrier.len() {
            let (i, j) = e.pairs().components(k);
            if g.act(i, j, &after)? != e.mul().index(k) {
                return Ok(Some(format!("collapsing on either side disagrees at {:?}", e.pairs().carrier.get(k))));
            }
        }
        Ok(None)
    }));
    let autos = object_automorphisms(sigma);
    for (a, phi) in autos.iter().enumerate() {
        let inst = format!("φ{a} on {name}");
        report.push(run("rigidity", &format!("E of {inst}"), || {
            let m = f.fsg_morphism(phi)?;
            Ok(valid_report("E_φ", &m.validate()).or_else(|| expect(m.is_isomorphism(), || "E_φ is not invertible".into())))
        }));
        report.push(run("identity_morphisms", &inst, || {
            let lhs = f.bimodule_morphism(&CobDiffeo::cylinder(phi))?;
            let rhs = identity_bimodule_morphism(&f.fsg_morphism(phi)?);
            Ok(expect(lhs == rhs, || "Ω of φ×id differs from i of E_φ".into()))
        }));
        for (b, psi) in autos.iter().enumerate() {
            report.push(run("functoriality", &format!("E of φ{a} then φ{b} on {name}"), || {
                let lhs = f.fsg_morphism(&phi.then(psi)?)?;
                let rhs = f.fsg_morphism(phi)?.then(&f.fsg_morphism(psi)?)?;
                Ok(expect(lhs == rhs, || "E of a composite differs from the composite".into()))
            }));
        }
    }
}

/// The canonical bijections `L_{cyl(Σ⊔Σ')} ≅ L_{cyl Σ} × L_{cyl Σ'}` and
/// `L_{Σ⊔Σ'} ≅ L_Σ × L_Σ'`, transported structure compared with the product.
fn monoidality(f: &CylinderFunctor, s: &CobObject, t: &CobObject) -> Result<Option<String>> {
    let theory = f.theory;
    let st = s.disjoint_union(t);
    let joint = f.semigroup(&st)?;
    let (a, b) = (f.semigroup(s)?, f.semigroup(t)?);
    let (x, y) = (Cobordism::cylinder(s).to_body(), Cobordism::cylinder(t).to_body());
    let (ex, ey) = BodyEmbedding::summands(&x, &y);
    let whole = Cobordism::cylinder(&st).to_body();
    let nesting = |c: &Token| {
        let (side, inner) = c.as_tag().expect("tagged");
        let (piece, c) = inner.as_tag().expect("tagged");
        Token::tag(piece, &Token::tag(side, c))
    };
    let relabel = BodyDiffeo::checked(
        whole.clone(),
        ex.ambient().clone(),
        FinMap::identity(whole.regions()),
        FinMap::from_fn(whole.boundary().components().clone(), ex.ambient().boundary().components().clone(), nesting)?,
    )?;
    let to_sum = theory.on_body_diffeo(&relabel)?;
    let (px, py) = (to_sum.then(&theory.solution_pullback(&ex)?)?, to_sum.then(&theory.solution_pullback(&ey)?)?);
    let totals = product(a.total(), b.total());
    let total_bij = totals.map_from(joint.total(), |k| Ok((px.index(k), py.index(k))))?;
    let inc = |piece: &CobObject, tag| FinMap::from_fn(piece.components().clone(), st.components().clone(), |c| Token::tag(tag, c));
    let gs = theory.germ_pullback(&st, s, &inc(s, 0)?)?;
    let gt = theory.germ_pullback(&st, t, &inc(t, 1)?)?;
    let bases = product(a.base(), b.base());
    let base_bij = bases.map_from(joint.base(), |k| Ok((gs.index(k), gt.index(k))))?;
    if !total_bij.is_bijective() || !base_bij.is_bijective() {
        return Ok(Some("the canonical decompositions are not bijective".into()));
    }
    Ok(expect(joint.transport(&total_bij, &base_bij)? == a.product(&b), || {
        "E over Σ⊔Σ' differs from the product after the canonical identification".into()
    }))
}

fn verify_cobordism(f: &CylinderFunctor, m: &Cobordism, report: &mut FunctorLawReport) {
    let name = describe_cobordism(m);
    report.push(run("rigidity", &format!("Ω of {name}"), || {
        let b = f.bimodule(m)?;
        Ok(valid_report("Ω", &b.validate()).or_else(|| expect(b.is_rigid(), || "Ω is not rigid".into())))
    }));
    report.push(run("source_target", &format!("Ω of {name}"), || {
        let b = f.bimodule(m)?;
        let (left, right) = (f.semigroup(m.source())?, f.semigroup(m.target())?);
        Ok(expect(b.left_sgrp() == &left, || "left semi-group is not E of the source".into())
            .or_else(|| expect(b.right_sgrp() == &right, || "right semi-group is not E of the target".into())))
    }));
    let autos = cobordism_automorphisms(m);
    for (a, phi) in autos.iter().enumerate() {
        report.push(run("rigidity", &format!("Ω of Φ{a} on {name}"), || {
            let w = f.bimodule_morphism(phi)?;
            Ok(valid_report("Ω_Φ", &w.validate()).or_else(|| expect(w.is_isomorphism(), || "Ω_Φ is not invertible".into())))
        }));
        for (b, psi) in autos.iter().enumerate() {
            report.push(run("functoriality", &format!("Ω of Φ{a} then Φ{b} on {name}"), || {
                let lhs = f.bimodule_morphism(&phi.then(psi)?)?;
                let rhs = f.bimodule_morphism(phi)?.then(&f.bimodule_morphism(psi)?)?;
                Ok(expect(lhs == rhs, || "Ω of a composite differs from the composite".into()))
            }));
        }
    }
}

/// `Σ_v |t_A⁻¹(v)|·|s_B⁻¹(v)|` by a double loop over the two carriers.
pub fn composite_count(a: &FiberedBimodule, b: &FiberedBimodule) -> usize {
    let mut count = 0;
    for x in a.carrier() {
        for y in b.carrier() {
            if a.tgt().apply(x).ok() == b.src().apply(y).ok() {
                count += 1;
            }
        }
    }
    count
}

fn verify_pair(f: &CylinderFunctor, m: &Cobordism, n: &Cobordism, report: &mut FunctorLawReport) {
    let inst = describe_body_pair(m, n);
    let built = (|| -> Result<_> {
        let (a, b) = (f.bimodule(m)?, f.bimodule(n)?);
        let glued = f.bimodule(&glue(m, n)?)?;
        let composite = hcompose(&a, &b)?;
        let assoc = f.associator_between(m, n, glued.clone(), composite.clone())?;
        Ok((a, b, glued, composite, assoc))
    })();
    let (a, b, glued, composite, assoc) = match built {
        Ok(x) => x,
        Err(e) => {
            report.push(Record::fail("associator", &inst, format!("construction failed: {e}")));
            return;
        }
    };
    let oracle = composite_count(&a, &b);
    report.push(Record::check("carrier_count", &inst, glued.carrier().len() == oracle, || {
        format!("{} glued solutions, {oracle} matching pairs", glued.carrier().len())
    }));
    report.push(Record::check(
        "source_target",
        &format!("glue of {inst}"),
        glued.left_sgrp() == composite.left_sgrp() && glued.right_sgrp() == composite.right_sgrp(),
        || "glued and composite bimodules have different ends".into(),
    ));
    report.push(Record::check("associator", &inst, true, String::new));
    if let Some(d) = valid_report("A", &assoc.validate()).or_else(|| expect(assoc.is_isomorphism(), || "A is not invertible".into())) {
        report.records.pop();
        report.push(Record::fail("associator", &inst, d));
    }
    let (am, an) = (cobordism_automorphisms(m), cobordism_automorphisms(n));
    let pieces = match fiber_product_with(a.tgt(), b.src(), Token::chain) {
        Ok(p) => p,
        Err(e) => {
            report.push(Record::fail("associator_naturality", &inst, format!("construction failed: {e}")));
            return;
        }
    };
    for (x, phi) in am.iter().enumerate() {
        for (y, psi) in an.iter().enumerate().filter(|(_, psi)| psi.source() == phi.target()) {
            // Ω_Φ ⊛ Ω_Ψ acts slotwise on chains
            report.push(Record::diagram("associator_naturality", &format!("Φ{x}, Ψ{y} on {inst}"), || {
                let whole = f.theory.on_region_diffeo(&glue_diffeo(phi, psi)?)?;
                let (l, r) = (f.theory.on_region_diffeo(phi)?, f.theory.on_region_diffeo(psi)?);
                let slotwise = pieces.map_from(&pieces.carrier, |k| {
                    let (i, j) = pieces.components(k);
                    Ok((l.index(i), r.index(j)))
                })?;
                Ok((whole.then(assoc.mid())?, assoc.mid().then(&slotwise)?))
            }));
        }
    }
}

/// `glue(X,Y)` with its cut.
type Cut = Rc<(Cobordism, Vec<(usize, usize)>)>;

#[derive(Default)]
struct Interner {
    ids: BTreeMap<Cobordism, usize>,
    items: Vec<Cobordism>,
}

impl Interner {
    fn id(&mut self, c: Cobordism) -> usize {
        if let Some(&i) = self.ids.get(&c) {
            return i;
        }
        self.items.push(c.clone());
        self.ids.insert(c, self.items.len() - 1);
        self.items.len() - 1
    }
}

fn cached_cut(
    f: &CylinderFunctor,
    names: &Interner,
    cache: &mut BTreeMap<(usize, usize), Result<Cut>>,
    x: usize,
    y: usize,
) -> Result<Cut> {
    cache
        .entry((x, y))
        .or_insert_with(|| {
            let (a, b) = (&names.items[x], &names.items[y]);
            Ok(Rc::new((glue(a, b)?, f.cut(a, b)?)))
        })
        .clone()
}

/// The hexagon `(A_{M,N} ⊛ 1)∘A_{MN,P} = (1 ⊛ A_{N,P})∘A_{M,NP}∘Ω_α` on the
/// mid maps, evaluated as maps `L_{(MN)P} → L_M × L_N × L_P`. Cuts are shared
/// between triples with the same glued cobordism.
fn verify_hexagons(f: &CylinderFunctor, cobs: &[Cobordism], pairs: &[(usize, usize)], report: &mut FunctorLawReport) -> usize {
    let mut names = Interner::default();
    for m in cobs {
        names.id(m.clone());
    }
    let mut outs = alloc::vec![Vec::new(); cobs.len()];
    let mut glued = BTreeMap::new();
    for &(i, j) in pairs {
        outs[i].push(j);
        if let Ok(g) = glue(&cobs[i], &cobs[j]) {
            glued.insert((i, j), names.id(g));
        }
    }
    let mut shared = BTreeMap::new();
    let mut total = 0;
    for i in 0..cobs.len() {
        let mut right = BTreeMap::new();
        for &j in &outs[i] {
            if outs[j].is_empty() {
                continue;
            }
            let inst = format!("#{i} ; #{j} ; any of {} cobordisms", outs[j].len());
            let mut failure = None;
            for &k in &outs[j] {
                total += 1;
                if failure.is_some() {
                    continue;
                }
                let (mn, np) = (glued[&(i, j)], glued[&(j, k)]);
                let outcome = (|| -> Result<Option<String>> {
                    let lc = cached_cut(f, &names, &mut shared, mn, k)?;
                    let cut_mn = cached_cut(f, &names, &mut shared, i, j)?;
                    let cut_np = cached_cut(f, &names, &mut shared, j, k)?;
                    let rc = cached_cut(f, &names, &mut right, i, np)?;
                    let alpha = f.theory.on_region_diffeo(&reassociation(&lc.0, &rc.0)?)?;
                    let (lc, rc, cut_mn, cut_np) = (&lc.1, &rc.1, &cut_mn.1, &cut_np.1);
                    if alpha.dom().len() != lc.len() || alpha.cod().len() != rc.len() {
                        return Ok(Some("the associator diffeomorphism does not match the glued solution spaces".into()));
                    }
                    for (z, &(w, c)) in lc.iter().enumerate() {
                        let (a, b) = cut_mn[w];
                        let (a2, v) = rc[alpha.index(z)];
                        let (b2, c2) = cut_np[v];
                        if (a, b, c) != (a2, b2, c2) {
                            return Ok(Some(format!("the two composites differ at {:?}", alpha.dom().get(z))));
                        }
                    }
                    Ok(None)
                })();
                failure = match outcome {
                    Ok(None) => None,
                    Ok(Some(d)) => Some(format!("P = #{k}: {d}")),
                    Err(e) => Some(format!("P = #{k}: construction failed: {e}")),
                };
            }
            report.push(match failure {
                None => Record::pass("hexagon", &inst),
                Some(d) => Record::fail("hexagon", &inst, d),
            });
        }
    }
    total
}

/// Both composites of the hexagon built from full equivariant morphisms.
pub fn hexagon_maps(f: &CylinderFunctor, m: &Cobordism, n: &Cobordism, p: &Cobordism) -> Result<(FinMap, FinMap)> {
    let mn = glue(m, n)?;
    let np = glue(n, p)?;
    let one = |c: &Cobordism| -> Result<EquivariantMorphism> { Ok(EquivariantMorphism::identity(&f.bimodule(c)?)) };
    let left = f
        .associator(&mn, p)?
        .mid()
        .then(hcompose_mor(&f.associator(m, n)?, &one(p)?)?.mid())?;
    let right = f
        .bimodule_morphism(&glue_associator(m, n, p)?)?
        .mid()
        .then(f.associator(m, &np)?.mid())?
        .then(hcompose_mor(&one(m)?, &f.associator(n, p)?)?.mid())?;
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{ConstantSheaf, FreeBoundary};
    use crate::finset::FinSet;
    use alloc::vec;

    fn set(names: &[&str]) -> FinSet {
        FinSet::from_atoms(names).unwrap()
    }

    fn bits() -> ConstantSheaf {
        ConstantSheaf::new(set(&["0", "1"])).unwrap()
    }

    fn a(s: &str) -> Token {
        Token::atom(s).unwrap()
    }

    #[test]
    fn one_component_cylinder_semigroup() {
        let t = bits();
        let e = cylinder_semigroup(&t, &CobObject::positive(&["c"]).unwrap()).unwrap();
        assert_eq!((e.total().len(), e.base().len()), (2, 2));
        assert!(e.proj().is_bijective());
        for (p, r) in e.mul().pairs() {
            let ab = p.as_tuple().unwrap();
            assert_eq!((&ab[0], &ab[1]), (r, r));
        }
        assert!(e.is_valid() && e.is_rigid());
        let empty = cylinder_semigroup(&t, &CobObject::empty()).unwrap();
        assert_eq!((empty.total().len(), empty.base().len()), (1, 1));
        let two = cylinder_semigroup(&t, &CobObject::positive(&["c", "d"]).unwrap()).unwrap();
        assert_eq!((two.total().len(), two.base().len()), (4, 4));
        assert!(two.is_rigid());
    }

    #[test]
    fn free_boundary_is_refused_at_the_gluing_guard() {
        let t = FreeBoundary::new(set(&["0", "1"]), &a("0")).unwrap();
        let err = cylinder_semigroup(&t, &CobObject::positive(&["c"]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::TheoryViolation { guard: "gluing", .. }), "{err}");
    }

    #[test]
    fn swap_morphism() {
        let t = bits();
        let sigma = CobObject::positive(&["c", "d"]).unwrap();
        let autos = object_automorphisms(&sigma);
        let swap = &autos[1];
        let m = cylinder_fsg_morphism(&t, swap).unwrap();
        assert!(m.validate().passed() && m.is_isomorphism());
        let moved: Vec<String> = m.base_map().pairs().map(|(x, y)| format!("{x}>{y}")).collect();
        assert_eq!(moved, vec!["(0,0)>(0,0)", "(0,1)>(1,0)", "(1,0)>(0,1)", "(1,1)>(1,1)"]);
        assert_eq!(m.total_map().table(), m.base_map().table());
        assert_eq!(cylinder_fsg_morphism(&t, &autos[0]).unwrap(), FsgMorphism::identity(m.dom()));
    }

    #[test]
    fn pair_of_pants() {
        let t = bits();
        let two = CobObject::positive(&["a", "b"]).unwrap();
        let one = CobObject::positive(&["c"]).unwrap();
        let r = FinSet::singleton(a("r"));
        let m = Cobordism::new(
            two.clone(),
            one.clone(),
            r.clone(),
            FinMap::constant(two.components(), &r, &a("r")).unwrap(),
            FinMap::constant(one.components(), &r, &a("r")).unwrap(),
        )
        .unwrap();
        let b = cylinder_bimodule(&t, &m).unwrap();
        assert_eq!(b.carrier().len(), 2);
        let src: Vec<String> = b.src().pairs().map(|(x, y)| format!("{x}>{y}")).collect();
        assert_eq!(src, vec!["(0)>(0,0)", "(1)>(1,1)"]);
        assert_eq!(b.lact().dom().len(), 2);
        for (p, w) in b.lact().pairs() {
            assert_eq!(&p.as_tuple().unwrap()[1], w);
        }
        assert!(b.validate().passed() && b.is_rigid());
    }

    #[test]
    fn closed_region_doubles_the_carrier() {
        let t = bits();
        let one = CobObject::positive(&["c"]).unwrap();
        let regions = set(&["r", "z"]);
        let m = Cobordism::new(
            one.clone(),
            one.clone(),
            regions.clone(),
            FinMap::constant(one.components(), &regions, &a("r")).unwrap(),
            FinMap::constant(one.components(), &regions, &a("r")).unwrap(),
        )
        .unwrap();
        let b = cylinder_bimodule(&t, &m).unwrap();
        assert_eq!(b.carrier().len(), 4);
        assert!(b.validate().passed() && b.is_rigid());
        // the closed factor is untouched by both actions
        for (p, w) in b.lact().pairs() {
            let ew = p.as_tuple().unwrap();
            assert_eq!(ew[1].as_tuple().unwrap()[1], w.as_tuple().unwrap()[1]);
        }
    }

    #[test]
    fn cylinder_bimodule_is_the_identity() {
        let t = bits();
        for sigma in [CobObject::empty(), CobObject::positive(&["c"]).unwrap(), CobObject::from_signs(&[("p", true), ("n", false)]).unwrap()] {
            let e = cylinder_semigroup(&t, &sigma).unwrap();
            assert_eq!(cylinder_bimodule(&t, &Cobordism::cylinder(&sigma)).unwrap(), identity_bimodule(&e));
        }
    }

    #[test]
    fn cylinder_associator_is_the_diagonal() {
        let t = bits();
        let c = Cobordism::cylinder(&CobObject::positive(&["c"]).unwrap());
        let assoc = associator(&t, &c, &c).unwrap();
        assert!(assoc.is_isomorphism());
        let pairs: Vec<String> = assoc.mid().pairs().map(|(x, y)| format!("{x}>{y}")).collect();
        assert_eq!(pairs, vec!["(0)>[(0),(0)]", "(1)>[(1),(1)]"]);
        let f = CylinderFunctor::new(&t);
        let (l, r) = hexagon_maps(&f, &c, &c, &c).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn region_swap_morphism() {
        let t = bits();
        let one = CobObject::positive(&["c"]).unwrap();
        let regions = set(&["r", "s"]);
        let m = Cobordism::new(
            one.clone(),
            one.clone(),
            regions.clone(),
            FinMap::constant(one.components(), &regions, &a("r")).unwrap(),
            FinMap::constant(one.components(), &regions, &a("r")).unwrap(),
        )
        .unwrap();
        let two = m.disjoint_union(&m);
        let autos = cobordism_automorphisms(&two);
        // the two halves swap, and independently so do the two closed regions
        assert_eq!(autos.len(), 4);
        for phi in &autos {
            let w = cylinder_bimodule_morphism(&t, phi).unwrap();
            assert!(w.validate().passed() && w.is_isomorphism());
        }
        let id = cylinder_bimodule_morphism(&t, &autos[0]).unwrap();
        assert_eq!(id, EquivariantMorphism::identity(id.dom()));
    }

    fn small_universe() -> TheoryUniverse {
        let one = CobObject::positive(&["p0"]).unwrap();
        let neg = one.reverse();
        let objects = vec![CobObject::empty(), one.clone(), neg.clone()];
        let r = FinSet::singleton(a("r0"));
        let cap = Cobordism::new(
            one.clone(),
            CobObject::empty(),
            r.clone(),
            FinMap::constant(one.components(), &r, &a("r0")).unwrap(),
            FinMap::from_indices(FinSet::empty(), r, vec![]).unwrap(),
        )
        .unwrap();
        let cobordisms = vec![Cobordism::cylinder(&one), Cobordism::cylinder(&neg), cap];
        TheoryUniverse { objects, cobordisms, object_pairs: vec![(1, 1), (1, 2), (0, 1)], ..Default::default() }
    }

    #[test]
    fn functor_laws_on_a_small_universe() {
        let report = verify_double_functor(&bits(), &small_universe());
        assert!(report.passed(), "{:?}", report.failures().next());
        let summary = report.summary();
        let empty: Vec<&str> = summary.iter().filter(|s| s.checked == 0).map(|s| s.law.as_str()).collect();
        assert!(empty.is_empty(), "{empty:?}");
        assert!(verify_double_functor(&bits(), &TheoryUniverse::default()).passed());
    }

    #[test]
    fn fast_hexagon_agrees_with_full_construction() {
        let u = small_universe();
        let t = bits();
        let f = CylinderFunctor::new(&t);
        let pairs = composable_pairs(&u.cobordisms);
        let mut n = 0;
        for &(i, j) in &pairs {
            for &(_, k) in pairs.iter().filter(|p| p.0 == j) {
                let (l, r) = hexagon_maps(&f, &u.cobordisms[i], &u.cobordisms[j], &u.cobordisms[k]).unwrap();
                assert_eq!(l, r);
                n += 1;
            }
        }
        let mut report = FunctorLawReport::new("hexagon", &FUNCTOR_LAWS);
        assert_eq!(verify_hexagons(&f, &u.cobordisms, &pairs, &mut report), n);
        assert!(n > 0 && report.passed());
    }

    #[test]
    fn functor_refuses_free_boundary() {
        let t = FreeBoundary::new(set(&["0", "1"]), &a("0")).unwrap();
        let report = verify_double_functor(&t, &small_universe());
        let first = report.failures().next().unwrap();
        assert!(first.detail.as_ref().unwrap().contains("gluing"), "{first:?}");
    }
}
