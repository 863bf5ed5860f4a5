//! Local field theories on the component model, and the axiom auditor.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::ccob::{
    body_automorphisms, describe_cobordism, describe_object, glue_triple, Body, BodyDiffeo,
    BodyEmbedding, CobDiffeo, CobObject, Cobordism, GluingTriple, ObjectDiffeo,
};
use crate::error::{Error, Result};
use crate::finset::{compare_maps, product, FinMap, FinSet, Witness};
use crate::report::{AxiomReport, Record};
use crate::token::Token;

/// Finite germ and solution spaces with restriction, gluing and the actions
/// of diffeomorphisms.
pub trait LocalTheory {
    /// A short name, e.g. `constant S={0,1}`.
    fn descriptor(&self) -> String;

    /// `L_Σ`.
    fn germ_space(&self, sigma: &CobObject) -> FinSet;

    /// `L_Σ → L_Σ'` along an inclusion `Σ' → Σ` of components.
    fn germ_pullback(&self, ambient: &CobObject, piece: &CobObject, inclusion: &FinMap) -> Result<FinMap>;

    /// `L_X`.
    fn solution_space(&self, body: &Body) -> FinSet;

    /// `L_X → L_Y` along an embedding `Y → X`.
    fn solution_pullback(&self, embedding: &BodyEmbedding) -> Result<FinMap>;

    /// `r_X : L_X → L_∂X`.
    fn restriction(&self, body: &Body) -> Result<FinMap>;

    /// `•_Σ : L_{X_gl} → L_X`.
    fn gluing(&self, triple: &GluingTriple) -> Result<FinMap>;

    /// `L_φ : L_Σ → L_Σ'`.
    fn on_object_diffeo(&self, phi: &ObjectDiffeo) -> Result<FinMap>;

    /// `L_Φ : L_X → L_Y`.
    fn on_body_diffeo(&self, phi: &BodyDiffeo) -> Result<FinMap>;

    /// `L_Φ : L_M → L_N` for a diffeomorphism of cobordisms.
    fn on_region_diffeo(&self, phi: &CobDiffeo) -> Result<FinMap> {
        self.on_body_diffeo(&phi.to_body_diffeo())
    }
}

/// All functions `{0..n} → S`, as tuples in lexicographic order, with
/// precomposition computed on positions.
#[derive(Debug)]
struct FunctionSpaces {
    values: FinSet,
    cache: RefCell<Vec<Option<FinSet>>>,
}

impl FunctionSpaces {
    fn new(values: FinSet) -> Self {
        FunctionSpaces { values, cache: RefCell::new(Vec::new()) }
    }

    fn space(&self, arity: usize) -> FinSet {
        if let Some(Some(s)) = self.cache.borrow().get(arity) {
            return s.clone();
        }
        let s = self.values.len();
        let count = s.checked_pow(arity as u32).expect("function space too large");
        let mut digits = alloc::vec![0usize; arity];
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(Token::tuple(digits.iter().map(|&d| self.values.get(d).clone())));
            for slot in digits.iter_mut().rev() {
                *slot += 1;
                if *slot < s {
                    break;
                }
                *slot = 0;
            }
        }
        let set = FinSet::new(out).expect("distinct tuples");
        let mut cache = self.cache.borrow_mut();
        if cache.len() <= arity {
            cache.resize(arity + 1, None);
        }
        cache[arity] = Some(set.clone());
        set
    }

    fn digits(&self, mut k: usize, arity: usize) -> Vec<usize> {
        let s = self.values.len();
        let mut d = alloc::vec![0; arity];
        for slot in d.iter_mut().rev() {
            *slot = k % s;
            k /= s;
        }
        d
    }

    fn index(&self, digits: impl Iterator<Item = usize>) -> usize {
        digits.fold(0, |acc, d| acc * self.values.len() + d)
    }

    /// `g ↦ g∘f` for `f : D' → D`, from functions on `D` to functions on `D'`.
    fn precompose(&self, f: &FinMap) -> FinMap {
        let (from, to) = (f.cod().len(), f.dom().len());
        let s = self.values.len();
        // the image index is linear in the digits of the argument
        let mut weight = alloc::vec![0usize; from];
        let mut place = 1;
        for &j in f.table().iter().rev() {
            weight[j] += place;
            place *= s;
        }
        let dom = self.space(from);
        let mut digits = alloc::vec![0usize; from];
        let mut at = 0;
        let mut table = Vec::with_capacity(dom.len());
        for _ in 0..dom.len() {
            table.push(at);
            for (slot, w) in digits.iter_mut().zip(&weight).rev() {
                *slot += 1;
                at += w;
                if *slot < s {
                    break;
                }
                at -= s * w;
                *slot = 0;
            }
        }
        FinMap::from_indices(dom, self.space(to), table).expect("positions in range")
    }

    fn build<F>(&self, from: usize, to: usize, op: F) -> FinMap
    where
        F: Fn(&[usize]) -> Vec<usize>,
    {
        let dom = self.space(from);
        let cod = self.space(to);
        let table = (0..dom.len()).map(|k| self.index(op(&self.digits(k, from)).into_iter())).collect();
        FinMap::from_indices(dom, cod, table).expect("positions in range")
    }
}

/// Locally constant `S`-valued functions: a germ is a value on each
/// component, a solution a value on each region.
#[derive(Debug)]
pub struct ConstantSheaf {
    spaces: FunctionSpaces,
}

impl ConstantSheaf {
    pub fn new(values: FinSet) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid { kind: "theory", detail: "the value set must be nonempty".into() });
        }
        Ok(ConstantSheaf { spaces: FunctionSpaces::new(values) })
    }

    pub fn values(&self) -> &FinSet {
        &self.spaces.values
    }
}

pub fn constant_sheaf_theory(values: FinSet) -> Result<ConstantSheaf> {
    ConstantSheaf::new(values)
}

fn check_pullback(ambient: &FinSet, piece: &FinSet, inclusion: &FinMap) -> Result<()> {
    if inclusion.dom() != piece || inclusion.cod() != ambient {
        return Err(Error::Shape("inclusion does not match the hypersurfaces".into()));
    }
    Ok(())
}

impl LocalTheory for ConstantSheaf {
    fn descriptor(&self) -> String {
        format!("constant S={:?}", self.spaces.values)
    }

    fn germ_space(&self, sigma: &CobObject) -> FinSet {
        self.spaces.space(sigma.len())
    }

    fn germ_pullback(&self, ambient: &CobObject, piece: &CobObject, inclusion: &FinMap) -> Result<FinMap> {
        check_pullback(ambient.components(), piece.components(), inclusion)?;
        Ok(self.spaces.precompose(inclusion))
    }

    fn solution_space(&self, body: &Body) -> FinSet {
        self.spaces.space(body.regions().len())
    }

    fn solution_pullback(&self, embedding: &BodyEmbedding) -> Result<FinMap> {
        Ok(self.spaces.precompose(embedding.regions()))
    }

    fn restriction(&self, body: &Body) -> Result<FinMap> {
        Ok(self.spaces.precompose(body.incidence()))
    }

    fn gluing(&self, triple: &GluingTriple) -> Result<FinMap> {
        Ok(self.spaces.precompose(&glue_triple(triple)?.quotient))
    }

    fn on_object_diffeo(&self, phi: &ObjectDiffeo) -> Result<FinMap> {
        Ok(self.spaces.precompose(&phi.map().inverse()?))
    }

    fn on_body_diffeo(&self, phi: &BodyDiffeo) -> Result<FinMap> {
        Ok(self.spaces.precompose(&phi.regions().inverse()?))
    }
}

/// Arbitrary `S`-valued functions on boundary components, ignoring regions.
/// Gluing extends a solution by `fill` on the glued components, so for
/// `|S| > 1` the diagonal and gluing axioms fail.
#[derive(Debug)]
pub struct FreeBoundary {
    spaces: FunctionSpaces,
    fill: usize,
}

impl FreeBoundary {
    pub fn new(values: FinSet, fill: &Token) -> Result<Self> {
        let fill = values.index_of(fill).ok_or_else(|| Error::NotAnElement { token: fill.clone(), role: "value set" })?;
        Ok(FreeBoundary { spaces: FunctionSpaces::new(values), fill })
    }
}

pub fn free_boundary_theory(values: FinSet, fill: &Token) -> Result<FreeBoundary> {
    FreeBoundary::new(values, fill)
}

impl LocalTheory for FreeBoundary {
    fn descriptor(&self) -> String {
        format!("free_boundary S={:?} fill={}", self.spaces.values, self.spaces.values.get(self.fill))
    }

    fn germ_space(&self, sigma: &CobObject) -> FinSet {
        self.spaces.space(sigma.len())
    }

    fn germ_pullback(&self, ambient: &CobObject, piece: &CobObject, inclusion: &FinMap) -> Result<FinMap> {
        check_pullback(ambient.components(), piece.components(), inclusion)?;
        Ok(self.spaces.precompose(inclusion))
    }

    fn solution_space(&self, body: &Body) -> FinSet {
        self.spaces.space(body.boundary().len())
    }

    fn solution_pullback(&self, embedding: &BodyEmbedding) -> Result<FinMap> {
        Ok(self.spaces.precompose(embedding.boundary()))
    }

    fn restriction(&self, body: &Body) -> Result<FinMap> {
        Ok(FinMap::identity(&self.solution_space(body)))
    }

    fn gluing(&self, triple: &GluingTriple) -> Result<FinMap> {
        let comps = triple.body().boundary().components();
        let slots: Vec<Option<usize>> = comps.iter().map(|c| triple.lambda().index_of(c)).collect();
        Ok(self.spaces.build(triple.lambda().len(), comps.len(), |d| {
            slots.iter().map(|s| s.map_or(self.fill, |i| d[i])).collect()
        }))
    }

    fn on_object_diffeo(&self, phi: &ObjectDiffeo) -> Result<FinMap> {
        Ok(self.spaces.precompose(&phi.map().inverse()?))
    }

    fn on_body_diffeo(&self, phi: &BodyDiffeo) -> Result<FinMap> {
        Ok(self.spaces.precompose(&phi.boundary().inverse()?))
    }
}

pub const AXIOMS: [&str; 9] = [
    "orientation_sensitivity",
    "hypersurface_decomposition",
    "diagonal",
    "region_decomposition",
    "gluing",
    "naturality",
    "extended_symmetry",
    "reparametrization_invariance",
    "gluing_associativity",
];

pub const EXTENDED_SYMMETRY_READING: &str =
    "extended_symmetry is read as: germ spaces of boundary hypersurfaces are unchanged by gluing of bodies";

/// Objects, cobordisms and gluing triples to audit. The pair lists name
/// disjoint unions to check against products.
#[derive(Clone, Debug, Default)]
pub struct TheoryUniverse {
    pub objects: Vec<CobObject>,
    pub cobordisms: Vec<Cobordism>,
    pub triples: Vec<GluingTriple>,
    pub object_pairs: Vec<(usize, usize)>,
    pub cobordism_pairs: Vec<(usize, usize)>,
}

/// The inclusion of `piece` into `ambient` sending each component to `f(c)`.
fn inclusion(piece: &FinSet, ambient: &FinSet, f: impl Fn(&Token) -> Token) -> Result<FinMap> {
    FinMap::from_fn(piece.clone(), ambient.clone(), f)
}

fn first_failure(checks: Vec<(&str, Result<Option<(Option<Witness>, String)>>)>, law: &str, instance: &str) -> Record {
    for (name, c) in checks {
        match c {
            Ok(None) => {}
            Ok(Some((witness, detail))) => {
                let mut r = Record::fail(law, instance, format!("{name}: {detail}"));
                r.witness = witness;
                return r;
            }
            Err(e) => return Record::fail(law, instance, format!("{name}: ill-defined: {e}")),
        }
    }
    Record::pass(law, instance)
}

fn maps_agree(l: Result<FinMap>, r: Result<FinMap>) -> Result<Option<(Option<Witness>, String)>> {
    let c = compare_maps(&l?, &r?)?;
    Ok(if c.passed { None } else { Some((c.witness, "maps differ".into())) })
}

/// The germs of `r_X(x)` on `Σ` and on `-Σ`, read through the pairing.
fn sigma_germs(theory: &dyn LocalTheory, t: &GluingTriple) -> Result<(FinMap, FinMap)> {
    let boundary = t.body().boundary();
    let sigma = t.sigma_object();
    let r = theory.restriction(t.body())?;
    let on_sigma = inclusion(sigma.components(), boundary.components(), |c| c.clone())?;
    let on_partner = t.pairing().then(&FinMap::inclusion(t.sigma_neg(), boundary.components())?)?;
    let g = r.then(&theory.germ_pullback(boundary, &sigma, &on_sigma)?)?;
    let h = r.then(&theory.germ_pullback(boundary, &sigma.reverse(), &on_partner)?)?;
    Ok((g, h))
}

/// The equalizer of the two germ maps on `Σ`, by direct filtering.
pub fn gluing_equalizer(theory: &dyn LocalTheory, t: &GluingTriple) -> Result<FinSet> {
    let (g, h) = sigma_germs(theory, t)?;
    Ok(g.dom().filter(|x| g.apply(x).ok() == h.apply(x).ok()))
}

/// Membership in the equalizer, by position in `L_X`.
pub(crate) fn gluing_equalizer_mask(theory: &dyn LocalTheory, t: &GluingTriple) -> Result<Vec<bool>> {
    let (g, h) = sigma_germs(theory, t)?;
    if g.cod() == h.cod() {
        return Ok(g.table().iter().zip(h.table()).map(|(a, b)| a == b).collect());
    }
    Ok(g.dom().iter().map(|x| g.apply(x).ok() == h.apply(x).ok()).collect())
}

/// `φ` restricted to `X_gl`, for a diffeomorphism of `X` preserving the triple.
pub fn glued_body_diffeo(t: &GluingTriple, phi: &BodyDiffeo) -> Result<BodyDiffeo> {
    let glued = glue_triple(t)?;
    let q = &glued.quotient;
    let regions = FinMap::try_from_fn(glued.body.regions().clone(), glued.body.regions().clone(), |r| {
        let image = phi.regions().apply(r)?;
        Ok(q.apply(image)?.clone())
    })?;
    let boundary = phi.boundary().restrict(t.lambda())?.corestrict(t.lambda())?;
    BodyDiffeo::checked(glued.body.clone(), glued.body, regions, boundary)
}

fn preserves_triple(t: &GluingTriple, phi: &BodyDiffeo) -> bool {
    let b = phi.boundary();
    let keeps = |part: &FinSet| part.iter().all(|c| b.apply(c).map(|d| part.contains(d)).unwrap_or(false));
    keeps(t.sigma())
        && keeps(t.sigma_neg())
        && t.pairing().pairs().all(|(s, n)| {
            let (fs, fn_) = (b.apply(s).expect("in boundary"), b.apply(n).expect("in boundary"));
            t.pairing().apply(fs).ok() == Some(fn_)
        })
}

/// Audits all nine axioms over the universe. One record per axiom and
/// instance, carrying the first failing sub-check.
pub fn check_axioms(theory: &dyn LocalTheory, u: &TheoryUniverse) -> AxiomReport {
    let mut report = AxiomReport::new(&format!("axioms of {}", theory.descriptor()), &AXIOMS);
    report.notes.push(EXTENDED_SYMMETRY_READING.into());

    for sigma in &u.objects {
        let name = describe_object(sigma);
        let (l, r) = (theory.germ_space(sigma), theory.germ_space(&sigma.reverse()));
        report.push(Record::check("orientation_sensitivity", &format!("L(-Σ) = L(Σ), Σ={name}"), l == r, || {
            format!("{} germs on Σ, {} on -Σ", l.len(), r.len())
        }));
        if sigma.is_empty() {
            report.push(Record::check("hypersurface_decomposition", "L(∅) is a point", l.len() == 1, || {
                format!("{} germs on the empty hypersurface", l.len())
            }));
        }
        report.push(diagonal(theory, sigma, &name));
    }

    for &(i, j) in &u.object_pairs {
        let (a, b) = (&u.objects[i], &u.objects[j]);
        let inst = format!("Σ={} ⊔ {}", describe_object(a), describe_object(b));
        let check = || -> Result<Option<(Option<Witness>, String)>> {
            let ab = a.disjoint_union(b);
            let pa = theory.germ_pullback(&ab, a, &inclusion(a.components(), ab.components(), |c| Token::tag(0, c))?)?;
            let pb = theory.germ_pullback(&ab, b, &inclusion(b.components(), ab.components(), |c| Token::tag(1, c))?)?;
            Ok(split_is_bijective(&pa, &pb))
        };
        report.push(first_failure(alloc::vec![("L(Σ⊔Σ') → L(Σ)×L(Σ')", check())], "hypersurface_decomposition", &inst));
    }

    for &(i, j) in &u.cobordism_pairs {
        let (m, n) = (&u.cobordisms[i], &u.cobordisms[j]);
        let inst = format!("X={} ⊔ {}", describe_cobordism(m), describe_cobordism(n));
        let (x, y) = (m.to_body(), n.to_body());
        let (ex, ey) = BodyEmbedding::summands(&x, &y);
        let split = || -> Result<Option<(Option<Witness>, String)>> {
            Ok(split_is_bijective(&theory.solution_pullback(&ex)?, &theory.solution_pullback(&ey)?))
        };
        report.push(first_failure(alloc::vec![("L(X⊔Y) → L(X)×L(Y)", split())], "region_decomposition", &inst));
        let monoidal = |e: &BodyEmbedding| {
            let amb = e.ambient();
            let lhs = theory.restriction(amb).and_then(|r| {
                r.then(&theory.germ_pullback(amb.boundary(), e.piece().boundary(), e.boundary())?)
            });
            let rhs = theory.solution_pullback(e).and_then(|p| p.then(&theory.restriction(e.piece())?));
            maps_agree(lhs, rhs)
        };
        report.push(first_failure(
            alloc::vec![("r on the first summand", monoidal(&ex)), ("r on the second summand", monoidal(&ey))],
            "naturality",
            &format!("r monoidal on {inst}"),
        ));
    }

    for m in &u.cobordisms {
        let x = m.to_body();
        let inst = describe_cobordism(m);
        let autos = body_automorphisms(&x);
        let mut checks = Vec::new();
        for phi in &autos {
            let lhs = theory.on_body_diffeo(phi).and_then(|l| l.then(&theory.restriction(&x)?));
            let rhs = theory
                .restriction(&x)
                .and_then(|r| r.then(&theory.on_object_diffeo(&phi.boundary_diffeo()?)?));
            checks.push(("r∘L(Φ) = L(∂Φ)∘r", maps_agree(lhs, rhs)));
        }
        report.push(first_failure(checks, "naturality", &format!("r natural on {inst}")));
        report.push(reparametrization(theory, &x, &autos, &inst));
    }

    for (k, t) in u.triples.iter().enumerate() {
        let inst = format!("triple {k}: Σ={:?} on {:?}", t.sigma(), t.body().regions());
        report.push(gluing_axiom(theory, t, &inst));
        report.push(gluing_naturality(theory, t, &inst));
        report.push(extended_symmetry(theory, t, &inst));
        report.push(gluing_associativity(theory, t, &inst));
    }

    report.sort();
    report
}

/// Whether `x ↦ (f(x), g(x))` is a bijection onto `cod f × cod g`.
fn split_is_bijective(f: &FinMap, g: &FinMap) -> Option<(Option<Witness>, String)> {
    let prod = product(f.cod(), g.cod());
    let mut seen = alloc::vec![None; prod.carrier.len()];
    for k in 0..f.dom().len() {
        let p = prod.position(f.index(k), g.index(k)).expect("product pair");
        if let Some(prev) = seen[p] {
            let prev: usize = prev;
            return Some((
                Some(Witness { element: prod.carrier.get(p).clone(), left: f.dom().get(prev).clone(), right: f.dom().get(k).clone() }),
                "two elements have the same components".into(),
            ));
        }
        seen[p] = Some(k);
    }
    seen.iter().position(|s| s.is_none()).map(|p| {
        (None, format!("{:?} has no preimage ({} elements for {} pairs)", prod.carrier.get(p), f.dom().len(), prod.carrier.len()))
    })
}

fn diagonal(theory: &dyn LocalTheory, sigma: &CobObject, name: &str) -> Record {
    let inst = format!("cylinder over {name}");
    let check = || -> Result<Option<(Option<Witness>, String)>> {
        let x = Cobordism::cylinder(sigma).to_body();
        let b = x.boundary();
        let r = theory.restriction(&x)?;
        let back = r.then(&theory.germ_pullback(b, &sigma.reverse(), &inclusion(sigma.components(), b.components(), |c| Token::tag(0, c))?)?)?;
        let front = r.then(&theory.germ_pullback(b, sigma, &inclusion(sigma.components(), b.components(), |c| Token::tag(1, c))?)?)?;
        let mut hit = BTreeSet::new();
        for k in 0..r.dom().len() {
            let (g, h) = (back.cod().get(back.index(k)), front.cod().get(front.index(k)));
            if g != h {
                let w = Witness { element: r.dom().get(k).clone(), left: g.clone(), right: h.clone() };
                return Ok(Some((Some(w), "a solution restricts off the diagonal".into())));
            }
            hit.insert(g.clone());
        }
        let germs = theory.germ_space(sigma);
        Ok(germs.iter().find(|g| !hit.contains(*g)).map(|g| (None, format!("({g},{g}) is not a restriction"))))
    };
    first_failure(alloc::vec![("image of r = diagonal", check())], "diagonal", &inst)
}

fn gluing_axiom(theory: &dyn LocalTheory, t: &GluingTriple, inst: &str) -> Record {
    let glue = theory.gluing(t);
    let injective = glue.as_ref().map_err(Clone::clone).map(|g| {
        (!g.is_injective()).then(|| (None, format!("{} solutions glue to {} distinct ones", g.dom().len(), g.image().len())))
    });
    let image = glue.as_ref().map_err(Clone::clone).and_then(|g| {
        let eq = gluing_equalizer(theory, t)?;
        let im = g.image();
        if im == eq {
            return Ok(None);
        }
        let (germ, partner) = sigma_germs(theory, t)?;
        let odd = eq.iter().chain(im.iter()).find(|x| eq.contains(x) != im.contains(x)).expect("sets differ");
        let w = Witness { element: odd.clone(), left: germ.apply(odd)?.clone(), right: partner.apply(odd)?.clone() };
        Ok(Some((Some(w), format!("image has {} elements, equalizer {}", im.len(), eq.len()))))
    });
    let square = (|| {
        let glued = glue_triple(t)?.body;
        let b = t.body().boundary();
        let on_lambda = FinMap::inclusion(t.lambda(), b.components())?;
        let lhs = theory.restriction(&glued)?;
        let rhs = glue
            .clone()?
            .then(&theory.restriction(t.body())?)?
            .then(&theory.germ_pullback(b, &t.lambda_object(), &on_lambda)?)?;
        maps_agree(Ok(lhs), Ok(rhs))
    })();
    first_failure(
        alloc::vec![("• injective", injective), ("image of • = equalizer", image), ("r(X_gl) = π_Λ∘r(X)∘•", square)],
        "gluing",
        inst,
    )
}

fn gluing_naturality(theory: &dyn LocalTheory, t: &GluingTriple, inst: &str) -> Record {
    let mut checks = Vec::new();
    for phi in body_automorphisms(t.body()).iter().filter(|p| preserves_triple(t, p)) {
        let lhs = glued_body_diffeo(t, phi)
            .and_then(|g| theory.on_body_diffeo(&g))
            .and_then(|l| l.then(&theory.gluing(t)?));
        let rhs = theory.gluing(t).and_then(|g| g.then(&theory.on_body_diffeo(phi)?));
        checks.push(("•∘L(Φ_gl) = L(Φ)∘•", maps_agree(lhs, rhs)));
    }
    first_failure(checks, "naturality", &format!("• natural on {inst}"))
}

fn extended_symmetry(theory: &dyn LocalTheory, t: &GluingTriple, inst: &str) -> Record {
    let check = glue_triple(t).map(|g| {
        let glued = theory.germ_space(g.body.boundary());
        let before = theory.germ_space(&t.lambda_object());
        (glued != before).then(|| (None, format!("{} germs on ∂X_gl, {} on Λ", glued.len(), before.len())))
    });
    first_failure(alloc::vec![("L(∂X_gl) = L(Λ)", check)], "extended_symmetry", inst)
}

fn reparametrization(theory: &dyn LocalTheory, x: &Body, autos: &[BodyDiffeo], inst: &str) -> Record {
    let mut checks = Vec::new();
    let id = BodyDiffeo::identity(x);
    checks.push(("L(id) = id", maps_agree(theory.on_body_diffeo(&id), Ok(FinMap::identity(&theory.solution_space(x))))));
    for phi in autos {
        let copy = BodyDiffeo::new(
            x.clone(),
            x.clone(),
            FinMap::from_indices(x.regions().clone(), x.regions().clone(), phi.regions().table().to_vec()).expect("copy"),
            FinMap::from_indices(x.boundary().components().clone(), x.boundary().components().clone(), phi.boundary().table().to_vec()).expect("copy"),
        );
        checks.push(("L(Φ) depends only on Φ", maps_agree(theory.on_body_diffeo(phi), copy.and_then(|c| theory.on_body_diffeo(&c)))));
        for psi in autos {
            let lhs = phi.then(psi).and_then(|c| theory.on_body_diffeo(&c));
            let rhs = theory.on_body_diffeo(phi).and_then(|l| l.then(&theory.on_body_diffeo(psi)?));
            checks.push(("L(Ψ∘Φ) = L(Ψ)∘L(Φ)", maps_agree(lhs, rhs)));
        }
    }
    first_failure(checks, "reparametrization_invariance", inst)
}

fn gluing_associativity(theory: &dyn LocalTheory, t: &GluingTriple, inst: &str) -> Record {
    let mut checks = Vec::new();
    if t.sigma().len() >= 2 {
        let whole = glue_triple(t).map(|g| g.body);
        for c in t.sigma() {
            let first = FinSet::singleton(c.clone());
            let split = t.partial(&first);
            let same_body = split.clone().and_then(|(_, t2)| {
                let two = glue_triple(&t2)?.body;
                let one = whole.clone()?;
                Ok((one != two).then(|| (None, "iterated gluing gives a different body".into())))
            });
            checks.push(("X_gl independent of order", same_body));
            let lhs = theory.gluing(t);
            let rhs = split.and_then(|(t1, t2)| theory.gluing(&t2)?.then(&theory.gluing(&t1)?));
            checks.push(("• = •_first∘•_rest", maps_agree(lhs, rhs)));
        }
    }
    first_failure(checks, "gluing_associativity", inst)
}
