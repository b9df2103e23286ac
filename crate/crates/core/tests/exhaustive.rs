//! Small universes enumerated completely and compared against brute-force
//! definitions written here.

use std::collections::BTreeSet;
use std::sync::Arc;

use fsig_core::measure::{FiniteCarrier, FiniteMeasureSpace, SigmaAlgebra, Subset};
use fsig_core::partial::{compose, dagger, restriction, PartialInjection};
use fsig_core::quotient::{check_hom_laws, quotient_measure_algebra, BooleanAlgebra, BooleanHom};
use fsig_core::rational::{int, ExtRational};
use fsig_core::signal::IndexMap;

fn carrier(n: usize) -> FiniteCarrier {
    FiniteCarrier::range(0, n as i64).unwrap()
}

/// Every family of subsets of an `n`-point set that contains the empty set
/// and is closed under complement and pairwise union.
fn all_sigma_algebras(n: usize) -> Vec<BTreeSet<u64>> {
    let full = (1u64 << n) - 1;
    let sets = 1u64 << n;
    let mut out = Vec::new();
    for family in 0u64..(1 << sets) {
        let members: BTreeSet<u64> = (0..sets).filter(|s| family >> s & 1 == 1).collect();
        let closed = members.contains(&0)
            && members.iter().all(|&a| members.contains(&(full & !a)))
            && members.iter().all(|&a| members.iter().all(|&b| members.contains(&(a | b))));
        if closed {
            out.push(members);
        }
    }
    out
}

#[test]
fn sigma_algebras_on_four_points_are_the_partitions() {
    let families = all_sigma_algebras(4);
    // Bell number B4.
    assert_eq!(families.len(), 15);
    for family in &families {
        let members: Vec<Subset> = family.iter().map(|&m| Subset(m)).collect();
        let sigma = SigmaAlgebra::from_members(carrier(4), &members).expect("accepted");
        let got: BTreeSet<u64> = sigma.members().iter().map(|s| s.0).collect();
        assert_eq!(&got, family);
        for s in 0..16 {
            assert_eq!(sigma.contains(Subset(s)), family.contains(&s));
        }
    }
}

#[test]
fn non_closed_families_are_rejected() {
    let closed = all_sigma_algebras(3);
    let mut rejected = 0;
    for family in 0u64..(1 << 8) {
        let members: Vec<Subset> = (0..8).filter(|s| family >> s & 1 == 1).map(Subset).collect();
        let set: BTreeSet<u64> = members.iter().map(|s| s.0).collect();
        let accepted = SigmaAlgebra::from_members(carrier(3), &members).is_ok();
        assert_eq!(accepted, closed.contains(&set), "{set:?}");
        rejected += usize::from(!accepted);
    }
    assert_eq!(rejected, 256 - 5);
}

#[test]
fn quotient_atoms_on_every_weighting_of_three_points() {
    let weights = [ExtRational::zero(), ExtRational::from(int(2)), ExtRational::Infinite];
    for sigma in all_sigma_algebras(3) {
        let members: Vec<Subset> = sigma.iter().map(|&m| Subset(m)).collect();
        for code in 0..27 {
            let w: Vec<ExtRational> = (0..3).map(|p| weights[code / 3usize.pow(p) % 3].clone()).collect();
            let s = SigmaAlgebra::from_members(carrier(3), &members).unwrap();
            let space = Arc::new(FiniteMeasureSpace::new(s, w.clone()).unwrap());
            let measure = |m: u64| (0..3).filter(|p| m >> p & 1 == 1).fold(ExtRational::zero(), |acc, p| acc + w[p].clone());
            // Atoms by definition: minimal non-null measurable sets, up to null sets.
            let minimal: Vec<u64> = sigma
                .iter()
                .copied()
                .filter(|&a| !measure(a).is_zero())
                .filter(|&a| sigma.iter().all(|&b| b & !a != 0 || measure(b).is_zero() || measure(a & !b).is_zero()))
                .collect();
            let mut classes: Vec<u64> = Vec::new();
            for a in minimal {
                if classes.iter().all(|&c| !measure(a ^ c).is_zero()) {
                    classes.push(a);
                }
            }
            let minimal = classes.len();
            let Ok((alg, proj)) = quotient_measure_algebra(&space) else {
                assert_eq!(minimal, 0);
                continue;
            };
            assert_eq!(alg.algebra().atom_count(), minimal, "{sigma:?} {w:?}");
            for &e in &sigma {
                assert_eq!(proj.project(Subset(e)).unwrap().is_empty(), measure(e).is_zero());
            }
            assert!(check_hom_laws(&proj.as_hom()).passes());
        }
    }
}

#[test]
fn every_map_between_small_algebras_is_classified() {
    let (src, tgt) = (BooleanAlgebra::new(2), BooleanAlgebra::new(2));
    let mut homs = 0;
    // All 4^4 functions from a 4-element algebra to another.
    for code in 0u32..256 {
        let image = |e: Subset| Subset(u64::from(code >> (2 * e.0) & 3));
        let pi = BooleanHom::from_fn(src, tgt, image);
        let brute = src.elements().all(|a| {
            src.elements().all(|b| {
                image(src.add(a, b)) == tgt.add(image(a), image(b)) && image(src.mul(a, b)) == tgt.mul(image(a), image(b))
            })
        }) && image(src.one()) == tgt.one();
        let report = check_hom_laws(&pi);
        assert!(report.exhaustive);
        assert_eq!(report.passes(), brute, "code {code}");
        homs += usize::from(brute);
    }
    // Homomorphisms 2^2 -> 2^2 correspond to maps of atoms 2 -> 2.
    assert_eq!(homs, 4);
}

/// Every partial injection between two carriers.
fn all_partial_injections(x: &FiniteCarrier, y: &FiniteCarrier) -> Vec<PartialInjection> {
    fn go(xs: &[i64], y: &[i64], used: &mut Vec<i64>, pairs: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
        let Some((&first, rest)) = xs.split_first() else {
            out.push(pairs.clone());
            return;
        };
        go(rest, y, used, pairs, out);
        for &t in y {
            if !used.contains(&t) {
                used.push(t);
                pairs.push((first, t));
                go(rest, y, used, pairs, out);
                pairs.pop();
                used.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(x.labels(), y.labels(), &mut Vec::new(), &mut Vec::new(), &mut out);
    out.into_iter().map(|p| PartialInjection::new(x.clone(), y.clone(), p).unwrap()).collect()
}

#[test]
fn restriction_and_dagger_laws_hold_on_all_small_partial_injections() {
    let a = FiniteCarrier::range(0, 3).unwrap();
    let b = FiniteCarrier::range(10, 12).unwrap();
    let c = FiniteCarrier::range(20, 23).unwrap();
    let ab = all_partial_injections(&a, &b);
    let bc = all_partial_injections(&b, &c);
    let ac = all_partial_injections(&a, &c);
    // Partial injections 3 -> 2: sum over k of C(3,k) C(2,k) k!.
    assert_eq!(ab.len(), 1 + 6 + 6);
    assert_eq!(ac.len(), 34);
    for f in &ab {
        assert_eq!(&compose(f, &restriction(f)).unwrap(), f);
        assert_eq!(&dagger(&dagger(f)), f);
        assert_eq!(restriction(f), compose(&dagger(f), f).unwrap());
        assert_eq!(&compose(f, &compose(&dagger(f), f).unwrap()).unwrap(), f);
        for h in &ac {
            let (rf, rh) = (restriction(f), restriction(h));
            assert_eq!(compose(&rf, &rh).unwrap(), compose(&rh, &rf).unwrap());
            assert_eq!(restriction(&compose(h, &rf).unwrap()), compose(&rh, &rf).unwrap());
        }
        for g in &bc {
            let gf = compose(g, f).unwrap();
            assert_eq!(dagger(&gf), compose(&dagger(f), &dagger(g)).unwrap());
            assert_eq!(compose(&restriction(g), f).unwrap(), compose(f, &restriction(&gf)).unwrap());
            // Composition is relational: x -> z iff some y links them.
            for &x in a.labels() {
                assert_eq!(gf.apply(x), f.apply(x).and_then(|y| g.apply(y)));
            }
        }
    }
}

#[test]
fn index_map_blocks_tile_the_image_for_every_small_map() {
    for stride in [-3i64, -2, -1, 1, 2, 3] {
        for offset in -6..=6 {
            let map = IndexMap::new(stride, offset).unwrap();
            for start in -4..=4 {
                for len in 1..=4 {
                    let src = fsig_core::signal::Interval::new(start, start + len).unwrap();
                    let image = map.image(src);
                    assert_eq!(image.len() as i64, stride.abs() * len);
                    let mut covered: Vec<i64> = src.indices().flat_map(|i| map.block(i).indices()).collect();
                    covered.sort_unstable();
                    assert_eq!(covered, image.indices().collect::<Vec<_>>());
                    for j in image.indices() {
                        let owners: Vec<i64> = src.indices().filter(|&i| map.block(i).contains(j)).collect();
                        assert_eq!(owners, vec![map.preimage(j)]);
                    }
                    // Negative strides reverse order: larger sources land lower.
                    let firsts: Vec<i64> = src.indices().map(|i| map.block(i).start).collect();
                    assert!(firsts.windows(2).all(|w| (w[1] > w[0]) == (stride > 0)));
                }
            }
        }
    }
}
