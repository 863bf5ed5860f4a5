//! Exhaustive finite universes: semigroup tables, fibered semi-groups over
//! canonical bases, hand-built bimodules, and cobordisms up to isomorphism.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bimod::{DoubleUniverse, EquivariantMorphism, FiberedBimodule};
use crate::ccob::{permutations, Body, CobObject, Cobordism, GluingTriple};
use crate::error::Result;
use crate::finset::{FinMap, FinSet};
use crate::fsgrp::{FiberedSemiGroup, FsgMorphism};
use crate::theory::TheoryUniverse;
use crate::token::Token;

/// All associative tables on `{0..n}`, row-major, in lexicographic order.
pub fn semigroup_tables(n: usize) -> Vec<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    fn consistent(t: &[usize], n: usize) -> bool {
        for x in 0..n {
            for y in 0..n {
                let xy = t[x * n + y];
                if xy == UNSET {
                    continue;
                }
                for z in 0..n {
                    let (l, yz) = (t[xy * n + z], t[y * n + z]);
                    if l == UNSET || yz == UNSET {
                        continue;
                    }
                    let r = t[x * n + yz];
                    if r != UNSET && r != l {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn fill(t: &mut Vec<usize>, cell: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if cell == t.len() {
            out.push(t.clone());
            return;
        }
        for v in 0..n {
            t[cell] = v;
            if consistent(t, n) {
                fill(t, cell + 1, n, out);
            }
        }
        t[cell] = UNSET;
    }
    let mut out = Vec::new();
    fill(&mut vec![UNSET; n * n], 0, n, &mut out);
    out
}

/// Set partitions of `{0..n}` into blocks ordered by least element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for i in 0..n {
        let mut next = Vec::new();
        for p in out {
            for b in 0..p.len() {
                let mut q: Vec<Vec<usize>> = p.clone();
                q[b].push(i);
                next.push(q);
            }
            let mut q = p;
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out
}

fn atoms(prefix: &str, n: usize) -> FinSet {
    FinSet::new((0..n).map(|i| Token::atom(&format!("{prefix}{i}")).expect("atom"))).expect("distinct atoms")
}

fn element_set(n: usize) -> FinSet {
    FinSet::new((0..n).map(|i| Token::atom(&i.to_string()).expect("atom"))).expect("distinct atoms")
}

/// Block `b` of the partition carries table `tables[b]`; the base has one
/// point per block followed by `extra` empty fibers.
fn assemble(n: usize, blocks: &[Vec<usize>], tables: &[&Vec<usize>], extra: usize) -> FiberedSemiGroup {
    let total = element_set(n);
    let base = atoms("x", blocks.len() + extra);
    let mut fiber = vec![0; n];
    let mut local = vec![0; n];
    for (b, block) in blocks.iter().enumerate() {
        for (i, &e) in block.iter().enumerate() {
            fiber[e] = b;
            local[e] = i;
        }
    }
    // element i is the atom "i"; sorting puts "10" before "2", so go through positions
    let pos: Vec<usize> = (0..n).map(|i| total.index_of(&Token::atom(&i.to_string()).expect("atom")).expect("element")).collect();
    let mut label = vec![0; n];
    for (i, &p) in pos.iter().enumerate() {
        label[p] = i;
    }
    let proj = FinMap::from_indices(total.clone(), base.clone(), (0..n).map(|p| fiber[label[p]]).collect()).expect("projection");
    FiberedSemiGroup::from_index_fn(total, base, proj, |x, y| {
        let (a, b) = (label[x], label[y]);
        let block = &blocks[fiber[a]];
        let m = block.len();
        pos[block[tables[fiber[a]][local[a] * m + local[b]]]]
    })
    .expect("fibers are semigroups")
}

fn for_each_choice<F: FnMut(&[usize])>(sizes: &[usize], mut f: F) {
    let mut idx = vec![0; sizes.len()];
    if sizes.iter().any(|&s| s == 0) {
        return;
    }
    loop {
        f(&idx);
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Every fibered semi-group with `|E| ≤ max_total` and `|X| ≤ max_base`
/// whose fibers have at most `max_block` elements, on elements `0..n` over
/// base points `x0..`, one per block in order of least element, then empty
/// fibers. Fibers carry every associative table.
pub fn fsgrps(max_total: usize, max_base: usize, max_block: usize) -> Vec<(String, FiberedSemiGroup)> {
    let catalog: Vec<Vec<Vec<usize>>> = (0..=max_block.min(max_total)).map(semigroup_tables).collect();
    let mut out = Vec::new();
    for n in 0..=max_total {
        for blocks in set_partitions(n) {
            if blocks.len() > max_base || blocks.iter().any(|b| b.len() > max_block) {
                continue;
            }
            let sizes: Vec<usize> = blocks.iter().map(|b| catalog[b.len()].len()).collect();
            let shape: Vec<String> = blocks.iter().map(|b| b.iter().map(|e| e.to_string()).collect()).collect();
            for extra in 0..=max_base - blocks.len() {
                for_each_choice(&sizes, |choice| {
                    let tables: Vec<&Vec<usize>> = choice.iter().zip(&blocks).map(|(&c, b)| &catalog[b.len()][c]).collect();
                    let ids: Vec<String> = choice.iter().map(|c| c.to_string()).collect();
                    let name = format!("E{n}[{}]#{}+{extra}", shape.join("|"), ids.join("."));
                    out.push((name, assemble(n, &blocks, &tables, extra)));
                });
            }
        }
    }
    out
}

/// The fibered semi-groups used for the double-category laws:
/// `|E| ≤ 4`, `|X| ≤ 3`.
pub fn law_semigroups() -> Vec<(String, FiberedSemiGroup)> {
    fsgrps(4, 3, 4)
}

/// The semi-groups for the rigidity characterization: the law universe plus
/// `|E| ∈ {5, 6}` with fibers of at most two elements and no empty fibers.
pub fn rigidity_semigroups() -> Vec<(String, FiberedSemiGroup)> {
    let mut out = law_semigroups();
    out.extend(fsgrps(6, 6, 2).into_iter().filter(|(_, e)| {
        e.total().len() >= 5 && e.proj().is_surjective()
    }));
    out
}

/// All pairs of bijections of the total set and base preserving `π` and `μ`.
pub fn automorphisms(e: &FiberedSemiGroup) -> Vec<FsgMorphism> {
    let mut out = Vec::new();
    let base_perms = permutations(e.base().len());
    for tp in permutations(e.total().len()) {
        let total_map = FinMap::from_indices(e.total().clone(), e.total().clone(), tp.clone()).expect("permutation");
        for bp in &base_perms {
            let base_map = FinMap::from_indices(e.base().clone(), e.base().clone(), bp.clone()).expect("permutation");
            let m = FsgMorphism::new(e.clone(), e.clone(), total_map.clone(), base_map).expect("endomorphism shape");
            if m.validate().passed() {
                out.push(m);
            }
        }
    }
    out
}

fn point() -> FiberedSemiGroup {
    FiberedSemiGroup::trivial(&FinSet::singleton(Token::atom("*").expect("atom")))
}

/// Vertical morphisms: every automorphism and the map to the point, for
/// semi-groups with at most `max_total` elements.
pub fn law_morphisms(semigroups: &[(String, FiberedSemiGroup)], max_total: usize) -> Vec<(String, FsgMorphism)> {
    let pt = point();
    let star = Token::atom("*").expect("atom");
    let mut out = Vec::new();
    for (name, e) in semigroups.iter().filter(|(_, e)| e.total().len() <= max_total) {
        for (k, m) in automorphisms(e).into_iter().enumerate() {
            out.push((format!("aut{k} of {name}"), m));
        }
        let total_map = FinMap::constant(e.total(), pt.total(), &star).expect("constant");
        let base_map = FinMap::constant(e.base(), pt.base(), &star).expect("constant");
        out.push((format!("{name} → pt"), FsgMorphism::new(e.clone(), pt.clone(), total_map, base_map).expect("shape")));
    }
    out
}

fn a(s: &str) -> Token {
    Token::atom(s).expect("atom")
}

fn set(names: &[&str]) -> FinSet {
    FinSet::from_atoms(names).expect("distinct atoms")
}

fn over_point(elems: &[&str], op: impl Fn(&Token, &Token) -> Token) -> FiberedSemiGroup {
    FiberedSemiGroup::over_point(&set(elems), &a("*"), op).expect("semigroup")
}

fn z2() -> FiberedSemiGroup {
    over_point(&["0", "1"], |x, y| if x == y { a("0") } else { a("1") })
}

fn left_zero() -> FiberedSemiGroup {
    over_point(&["a", "b"], |x, _| x.clone())
}

/// A span `X ← Ω → Y` over the trivial semi-groups on `X` and `Y`.
fn span(omega: &[&str], xs: &[&str], ys: &[&str], s: &[usize], t: &[usize]) -> FiberedBimodule {
    let (o, x, y) = (set(omega), set(xs), set(ys));
    FiberedBimodule::from_fns(
        FiberedSemiGroup::trivial(&x),
        FiberedSemiGroup::trivial(&y),
        o.clone(),
        FinMap::from_indices(o.clone(), x, s.to_vec()).expect("source"),
        FinMap::from_indices(o, y, t.to_vec()).expect("target"),
        |_, w| w.clone(),
        |w, _| w.clone(),
    )
    .expect("span")
}

/// Hand-built bimodules, rigid and not.
pub fn hand_bimodules() -> Vec<(String, FiberedBimodule)> {
    let trivial = |w: &Token, _: &Token| w.clone();
    let keep = |_: &Token, w: &Token| w.clone();
    let eo = set(&["e", "o"]);
    let pt = point();
    let parity = {
        let omega = set(&["0", "1", "2"]);
        let src = FinMap::constant(&omega, pt.base(), &a("*")).expect("constant");
        let tgt = FinMap::from_fn(omega.clone(), eo.clone(), |t| if t == &a("1") { a("o") } else { a("e") }).expect("parity");
        FiberedBimodule::from_fns(pt.clone(), FiberedSemiGroup::trivial(&eo), omega, src, tgt, keep, trivial).expect("parity")
    };
    let over_parity = FiberedBimodule::from_fns(
        FiberedSemiGroup::trivial(&eo),
        pt.clone(),
        eo.clone(),
        FinMap::identity(&eo),
        FinMap::constant(&eo, pt.base(), &a("*")).expect("constant"),
        keep,
        trivial,
    )
    .expect("over parity");
    let z = z2();
    let bits = set(&["0", "1"]);
    let to_star = FinMap::constant(&bits, z.base(), &a("*")).expect("constant");
    let regular = FiberedBimodule::from_fns(z.clone(), pt.clone(), bits.clone(), to_star.clone(), to_star.clone(), |g, w| z2_add(g, w), trivial)
        .expect("regular");
    let both = FiberedBimodule::from_fns(z.clone(), z.clone(), bits.clone(), to_star.clone(), to_star.clone(), z2_add, z2_add).expect("two-sided");
    let lz = left_zero();
    let one = set(&["p"]);
    let lz_point = FiberedBimodule::from_fns(
        lz.clone(),
        pt.clone(),
        one.clone(),
        FinMap::constant(&one, lz.base(), &a("*")).expect("constant"),
        FinMap::constant(&one, pt.base(), &a("*")).expect("constant"),
        keep,
        trivial,
    )
    .expect("left zero");
    vec![
        ("parity".into(), parity),
        ("over parity".into(), over_parity),
        ("Z2 regular".into(), regular),
        ("Z2 two-sided".into(), both),
        ("left zero on a point".into(), lz_point),
        ("span eo←eo→eo".into(), span(&["e", "o"], &["e", "o"], &["e", "o"], &[0, 1], &[0, 1])),
        ("span eo←eo→oe".into(), span(&["e", "o"], &["e", "o"], &["e", "o"], &[0, 1], &[1, 0])),
        ("span eo←abc→eo".into(), span(&["a", "b", "c"], &["e", "o"], &["e", "o"], &[0, 0, 1], &[0, 1, 1])),
        ("span eo←ab→*".into(), span(&["a", "b"], &["e", "o"], &["*"], &[0, 1], &[0, 0])),
        ("span *←ab→eo".into(), span(&["a", "b"], &["*"], &["e", "o"], &[0, 0], &[0, 1])),
        ("span eo←∅→eo".into(), span(&[], &["e", "o"], &["e", "o"], &[], &[])),
        ("span *←*→*".into(), span(&["*"], &["*"], &["*"], &[0], &[0])),
    ]
}

fn z2_add(x: &Token, y: &Token) -> Token {
    if x == y { a("0") } else { a("1") }
}

/// The universe for the double-category laws.
pub fn double_universe() -> DoubleUniverse {
    let semigroups = law_semigroups();
    let morphisms = law_morphisms(&semigroups, 3);
    let bimodules = hand_bimodules();
    let bimodule_morphisms = bimodules
        .iter()
        .map(|(n, b)| (format!("id of {n}"), EquivariantMorphism::identity(b)))
        .collect();
    DoubleUniverse { semigroups, bimodules, morphisms, bimodule_morphisms, monoidal_bound: 2 }
}

/// Objects with `p` positive components `p0..` and `q` negative `n0..`,
/// `p + q ≤ max_components`.
pub fn objects(max_components: usize) -> Vec<CobObject> {
    let mut out = Vec::new();
    for n in 0..=max_components {
        for p in (0..=n).rev() {
            let names: Vec<String> = (0..p).map(|i| format!("p{i}")).chain((0..n - p).map(|i| format!("n{i}"))).collect();
            let signs: Vec<(&str, bool)> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i < p)).collect();
            out.push(CobObject::from_signs(&signs).expect("distinct names"));
        }
    }
    out
}

/// Positions of the components of each sign, so that a permutation within
/// each sign class can act on positions.
fn sign_classes(sigma: &CobObject) -> Vec<Vec<usize>> {
    let pos: Vec<usize> = (0..sigma.len()).filter(|&i| sigma.is_positive(i)).collect();
    let neg: Vec<usize> = (0..sigma.len()).filter(|&i| !sigma.is_positive(i)).collect();
    vec![pos, neg]
}

/// All orientation-preserving permutations, as position maps.
fn class_permutations(sigma: &CobObject) -> Vec<Vec<usize>> {
    let mut out = vec![(0..sigma.len()).collect::<Vec<_>>()];
    for class in sign_classes(sigma) {
        let mut next = Vec::new();
        for base in &out {
            for p in permutations(class.len()) {
                let mut q = base.clone();
                for (i, &j) in p.iter().enumerate() {
                    q[class[i]] = class[j];
                }
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Cobordisms between objects with at most `max_components` components and
/// with at most `max_regions` regions `r0..`, one per isomorphism class:
/// the incidence tables are least under relabeling regions and permuting
/// components of each sign.
pub fn cobordisms(max_components: usize, max_regions: usize) -> Vec<Cobordism> {
    let objs = objects(max_components);
    let mut out = Vec::new();
    for src in &objs {
        let sp = class_permutations(src);
        for tgt in &objs {
            let tp = class_permutations(tgt);
            let ends = src.len() + tgt.len();
            for k in 0..=max_regions {
                if k == 0 && ends > 0 {
                    continue;
                }
                let rp = permutations(k);
                let sizes = vec![k; ends];
                let mut seen = BTreeSet::new();
                for_each_choice_or_empty(&sizes, |inc| {
                    let canon = canonical(inc, src.len(), &sp, &tp, &rp);
                    if canon.as_slice() == inc && seen.insert(canon) {
                        out.push(build_cobordism(src, tgt, k, inc));
                    }
                });
            }
        }
    }
    out
}

fn for_each_choice_or_empty<F: FnMut(&[usize])>(sizes: &[usize], mut f: F) {
    if sizes.is_empty() {
        f(&[]);
    } else {
        for_each_choice(sizes, f);
    }
}

fn canonical(inc: &[usize], ns: usize, sp: &[Vec<usize>], tp: &[Vec<usize>], rp: &[Vec<usize>]) -> Vec<usize> {
    let mut best = inc.to_vec();
    let mut cand = vec![0; inc.len()];
    for r in rp {
        for s in sp {
            for t in tp {
                for (i, &p) in s.iter().enumerate() {
                    cand[p] = r[inc[i]];
                }
                for (i, &p) in t.iter().enumerate() {
                    cand[ns + p] = r[inc[ns + i]];
                }
                if cand < best {
                    best.clone_from(&cand);
                }
            }
        }
    }
    best
}

fn build_cobordism(src: &CobObject, tgt: &CobObject, k: usize, inc: &[usize]) -> Cobordism {
    let regions = atoms("r", k);
    let ns = src.len();
    Cobordism::new(
        src.clone(),
        tgt.clone(),
        regions.clone(),
        FinMap::from_indices(src.components().clone(), regions.clone(), inc[..ns].to_vec()).expect("source incidence"),
        FinMap::from_indices(tgt.components().clone(), regions, inc[ns..].to_vec()).expect("target incidence"),
    )
    .expect("cobordism")
}

/// Every gluing triple on `x` pairing some boundary components with
/// partners of opposite orientation; of each matched pair the positively
/// oriented component is put in `Σ`.
pub fn gluing_triples(x: &Body) -> Vec<GluingTriple> {
    let b = x.boundary();
    let pos: Vec<usize> = (0..b.len()).filter(|&i| b.is_positive(i)).collect();
    let neg: Vec<usize> = (0..b.len()).filter(|&i| !b.is_positive(i)).collect();
    let mut out = Vec::new();
    // partner[i] = Some(j): pos[i] is glued to neg[j]
    let mut partner = vec![None; pos.len()];
    fn walk(i: usize, pos: &[usize], neg: &[usize], used: &mut Vec<bool>, partner: &mut Vec<Option<usize>>, x: &Body, out: &mut Vec<GluingTriple>) {
        if i == pos.len() {
            if partner.iter().any(Option::is_some) {
                out.push(triple_from(x, pos, neg, partner));
            }
            return;
        }
        walk(i + 1, pos, neg, used, partner, x, out);
        for j in 0..neg.len() {
            if !used[j] {
                used[j] = true;
                partner[i] = Some(j);
                walk(i + 1, pos, neg, used, partner, x, out);
                partner[i] = None;
                used[j] = false;
            }
        }
    }
    walk(0, &pos, &neg, &mut vec![false; neg.len()], &mut partner, x, &mut out);
    out
}

fn triple_from(x: &Body, pos: &[usize], neg: &[usize], partner: &[Option<usize>]) -> GluingTriple {
    let comps = x.boundary().components();
    let matched: Vec<(Token, Token)> = partner
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.map(|j| (comps.get(pos[i]).clone(), comps.get(neg[j]).clone())))
        .collect();
    let sigma = FinSet::new(matched.iter().map(|(s, _)| s.clone())).expect("distinct");
    let sigma_neg = FinSet::new(matched.iter().map(|(_, n)| n.clone())).expect("distinct");
    let pairing = FinMap::new(sigma, sigma_neg, matched).expect("pairing");
    GluingTriple::new(x.clone(), pairing).expect("valid matching")
}

/// All objects, cobordisms and gluing triples within the bounds. Pairs name
/// disjoint unions that stay within the bounds.
pub fn theory_universe(max_components: usize, max_regions: usize) -> TheoryUniverse {
    let objects = objects(max_components);
    let cobordisms = cobordisms(max_components, max_regions);
    let triples = cobordisms.iter().flat_map(|m| gluing_triples(&m.to_body())).collect();
    let mut object_pairs = Vec::new();
    for (i, s) in objects.iter().enumerate() {
        for (j, t) in objects.iter().enumerate() {
            if s.len() + t.len() <= max_components {
                object_pairs.push((i, j));
            }
        }
    }
    let mut cobordism_pairs = Vec::new();
    for (i, m) in cobordisms.iter().enumerate() {
        for (j, n) in cobordisms.iter().enumerate() {
            if m.source().len() + n.source().len() <= max_components
                && m.target().len() + n.target().len() <= max_components
                && m.regions().len() + n.regions().len() <= max_regions
            {
                cobordism_pairs.push((i, j));
            }
        }
    }
    TheoryUniverse { objects, cobordisms, triples, object_pairs, cobordism_pairs }
}

/// Checks that a generated universe is what it claims: every member
/// validates.
pub fn validate_theory_universe(u: &TheoryUniverse) -> Result<()> {
    for t in &u.triples {
        if let Some(f) = t.validate().failures().next() {
            return Err(crate::error::Error::Invalid { kind: "gluing triple", detail: format!("{f:?}") });
        }
    }
    Ok(())
}
