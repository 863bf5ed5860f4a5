use std::sync::OnceLock;

use fsgrp_core::bimod::{hcompose, identity_bimodule, left_unitor, right_unitor};
use fsgrp_core::ccob::{glue, Cobordism};
use fsgrp_core::cyl::{composable_pairs, CylinderFunctor};
use fsgrp_core::theory::{ConstantSheaf, LocalTheory};
use fsgrp_core::universe::cobordisms;
use fsgrp_core::{FiberedSemiGroup, FinMap, FinSet, Token};
use proptest::prelude::*;

fn numbered(n: usize, prefix: &str) -> FinSet {
    FinSet::new((0..n).map(|i| Token::atom(&format!("{prefix}{i}")).unwrap())).unwrap()
}

fn values(n: usize) -> FinSet {
    numbered(n, "s")
}

/// A fibered semi-group given by a projection table and a raw operation
/// table. Products that leave the fiber are folded back into it.
fn arb_fsgrp() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, usize)> {
    (1usize..5, 1usize..4).prop_flat_map(|(n, b)| {
        (prop::collection::vec(0..b, n), prop::collection::vec(0..n, n * n), Just(b))
    })
}

fn build((proj, op, b): &(Vec<usize>, Vec<usize>, usize)) -> FiberedSemiGroup {
    let n = proj.len();
    let total = numbered(n, "e");
    let base = numbered(*b, "x");
    let p = FinMap::from_indices(total.clone(), base.clone(), proj.clone()).unwrap();
    let fiber: Vec<Vec<usize>> = (0..*b).map(|x| (0..n).filter(|&i| proj[i] == x).collect()).collect();
    FiberedSemiGroup::from_index_fn(total, base, p, |i, j| {
        let f = &fiber[proj[i]];
        f[op[i * n + j] % f.len()]
    })
    .unwrap()
}

fn brute_associative(e: &FiberedSemiGroup) -> bool {
    let n = e.total().len();
    (0..n).all(|a| {
        (0..n).all(|b| {
            (0..n).all(|c| match (e.multiply(a, b), e.multiply(b, c)) {
                (Some(ab), Some(bc)) => e.multiply(ab, c) == e.multiply(a, bc),
                _ => true,
            })
        })
    })
}

fn small_cobordisms() -> &'static (Vec<Cobordism>, Vec<(usize, usize)>) {
    static CELL: OnceLock<(Vec<Cobordism>, Vec<(usize, usize)>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let cobs = cobordisms(2, 2);
        let pairs = composable_pairs(&cobs);
        (cobs, pairs)
    })
}

/// Connected components of the glued region graph, by union-find over the
/// regions of both pieces joined along the shared object.
fn glued_region_count(m: &Cobordism, n: &Cobordism) -> usize {
    let (a, b) = (m.regions().len(), n.regions().len());
    let mut parent: Vec<usize> = (0..a + b).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (k, c) in m.target().components().iter().enumerate() {
        let r = m.in_tgt().index(k);
        let s = n.in_src().index(n.source().components().index_of(c).unwrap());
        let (x, y) = (find(&mut parent, r), find(&mut parent, a + s));
        parent[x] = y;
    }
    (0..a + b).filter(|&x| find(&mut parent, x) == x).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn validation_agrees_with_brute_associativity(spec in arb_fsgrp()) {
        let e = build(&spec);
        prop_assert_eq!(e.is_valid(), brute_associative(&e));
    }

    #[test]
    fn rigidity_is_the_count_criterion(spec in arb_fsgrp()) {
        let e = build(&spec);
        let singletons = e.proj().fiber_sizes().iter().all(|&k| k <= 1);
        prop_assert_eq!(e.is_rigid(), singletons && e.mul().is_bijective());
    }

    #[test]
    fn opposite_is_an_involution_preserving_validity(spec in arb_fsgrp()) {
        let e = build(&spec);
        let op = e.opposite();
        prop_assert_eq!(op.is_valid(), e.is_valid());
        prop_assert_eq!(op.opposite(), e);
    }

    #[test]
    fn products_of_valid_fsgrps_are_valid(a in arb_fsgrp(), b in arb_fsgrp()) {
        let (e, f) = (build(&a), build(&b));
        prop_assume!(e.is_valid() && f.is_valid());
        let p = e.product(&f);
        prop_assert!(p.is_valid());
        prop_assert_eq!(p.total().len(), e.total().len() * f.total().len());
    }

    #[test]
    fn unitors_are_valid_and_invertible_exactly_when_rigid(spec in arb_fsgrp()) {
        let e = build(&spec);
        prop_assume!(e.is_valid());
        let id = identity_bimodule(&e);
        prop_assert!(id.is_valid());
        prop_assert!(hcompose(&id, &id).unwrap().is_valid());
        let (l, r) = (left_unitor(&id).unwrap(), right_unitor(&id).unwrap());
        prop_assert!(l.validate().passed() && r.validate().passed());
        prop_assert_eq!(l.is_isomorphism(), e.is_rigid());
        prop_assert_eq!(r.is_isomorphism(), e.is_rigid());
    }

    #[test]
    fn glue_regions_match_union_find(k in any::<prop::sample::Index>()) {
        let (cobs, pairs) = small_cobordisms();
        let (i, j) = pairs[k.index(pairs.len())];
        let g = glue(&cobs[i], &cobs[j]).unwrap();
        prop_assert_eq!(g.regions().len(), glued_region_count(&cobs[i], &cobs[j]));
        prop_assert_eq!(g.source(), cobs[i].source());
        prop_assert_eq!(g.target(), cobs[j].target());
    }

    #[test]
    fn gluing_with_a_cylinder_keeps_the_region_count(k in any::<prop::sample::Index>()) {
        let (cobs, _) = small_cobordisms();
        let m = &cobs[k.index(cobs.len())];
        let left = glue(&Cobordism::cylinder(m.source()), m).unwrap();
        let right = glue(m, &Cobordism::cylinder(m.target())).unwrap();
        prop_assert_eq!(left.regions().len(), m.regions().len());
        prop_assert_eq!(right.regions().len(), m.regions().len());
    }

    #[test]
    fn cylinder_carrier_is_the_fiber_count(k in any::<prop::sample::Index>(), s in 1usize..4) {
        let (cobs, pairs) = small_cobordisms();
        let (i, j) = pairs[k.index(pairs.len())];
        let (m, n) = (&cobs[i], &cobs[j]);
        let theory = ConstantSheaf::new(values(s)).unwrap();
        let f = CylinderFunctor::new(&theory);
        let (a, b) = (f.bimodule(m).unwrap(), f.bimodule(n).unwrap());
        let glued = f.bimodule(&glue(m, n).unwrap()).unwrap();
        let mut expected = 0;
        for v in &theory.germ_space(m.target()) {
            let x = a.carrier().iter().filter(|w| a.tgt().apply(w).unwrap() == v).count();
            let y = b.carrier().iter().filter(|w| b.src().apply(w).unwrap() == v).count();
            expected += x * y;
        }
        prop_assert_eq!(glued.carrier().len(), expected);
        prop_assert!(glued.is_valid());
    }

    #[test]
    fn constant_solutions_are_region_colorings(k in any::<prop::sample::Index>(), s in 1usize..4) {
        let (cobs, _) = small_cobordisms();
        let m = &cobs[k.index(cobs.len())];
        let theory = ConstantSheaf::new(values(s)).unwrap();
        let body = m.to_body();
        prop_assert_eq!(theory.solution_space(&body).len(), s.pow(m.regions().len() as u32));
        let r = theory.restriction(&body).unwrap();
        prop_assert_eq!(r.dom().len(), s.pow(m.regions().len() as u32));
    }
}
