use num::{Signed, Zero};
use rand::Rng;

use crate::duality::{covariant_op, covariant_op_l2, duality_bridge, from_dual};
use crate::function_space::{pullback, FnClass, SpaceTag};
use crate::measure::MeasurableMap;
use crate::quotient::{induced_hom, BooleanAlgebra, BooleanHom};
use crate::rational::{int, ExtRational};

use super::gen;
use super::{suite_seed, SuiteReport, Tally};

pub fn pullback_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "pullback"));
    let mut t = Tally::new("pullback", instances);
    for _ in 0..instances {
        let x = gen::space(&mut rng, 5, true);
        let imp = rng.gen_bool(0.3);
        let phi = gen::nonsingular_map(&mut rng, &x, 5, imp);
        let y = phi.target().clone();
        let [g1, g2, g3] = [0; 3].map(|_| gen::function(&mut rng, &y, SpaceTag::L0));
        let (a, b) = (gen::small_rational(&mut rng), gen::small_rational(&mut rng));
        let tp = |g: &FnClass| pullback(&phi, g).expect("non-singular");
        let d = || format!("{phi:?} {g1:?} {g2:?}");
        let combo = g1.scale(&a).add(&g2.scale(&b)).unwrap();
        t.check("linearity", tp(&combo) == tp(&g1).scale(&a).add(&tp(&g2).scale(&b)).unwrap(), d);
        t.check("multiplicativity", tp(&g1.mul(&g2).unwrap()) == tp(&g1).mul(&tp(&g2)).unwrap(), d);
        t.check("preserves the unit", tp(&FnClass::one(&y)) == FnClass::one(&x), d);
        t.check("preserves sup", tp(&g1.sup(&g2).unwrap()) == tp(&g1).sup(&tp(&g2)).unwrap(), d);
        t.check("preserves inf", tp(&g1.inf(&g3).unwrap()) == tp(&g1).inf(&tp(&g3)).unwrap(), d);
        t.check("preserves modulus", tp(&g3.abs()) == tp(&g3).abs(), d);
        let lo = g1.inf(&g2).unwrap();
        t.check("preserves order", tp(&lo).le(&tp(&g2)).unwrap(), d);
        let imp = rng.gen_bool(0.5);
        let psi = gen::nonsingular_map(&mut rng, &y, 4, imp);
        let h = gen::function(&mut rng, psi.target(), SpaceTag::L0);
        let psi_phi = MeasurableMap::compose(&psi, &phi).unwrap();
        let lhs = pullback(&psi_phi, &h).unwrap();
        let rhs = tp(&pullback(&psi, &h).unwrap());
        t.check("contravariant functoriality", lhs == rhs, d);
        t.check("identity acts trivially", pullback(&MeasurableMap::identity(y.clone()), &g1).as_ref() == Ok(&g1), d);
    }
    t.finish()
}

pub fn l2_norm_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "l2-norm"));
    let mut t = Tally::new("l2-norm", instances);
    for _ in 0..instances {
        let x = gen::space(&mut rng, 5, true);
        let phi = gen::nonsingular_map(&mut rng, &x, 5, true);
        let y = phi.target().clone();
        let g = gen::function(&mut rng, &y, SpaceTag::L2);
        let h = gen::function(&mut rng, &y, SpaceTag::L2);
        let (tg, th) = (pullback(&phi, &g), pullback(&phi, &h));
        let d = || format!("{phi:?} {g:?}");
        t.check("imp maps act on L2", tg.is_ok() && th.is_ok(), d);
        let (Ok(tg), Ok(th)) = (tg, th) else { continue };
        t.check("norm preservation", tg.norm2_squared() == g.norm2_squared(), d);
        t.check("inner product preservation", tg.inner(&th) == g.inner(&h), d);
        t.check("norm is finite on L2", g.norm2_squared().is_finite(), d);
    }
    t.finish()
}

pub fn duality_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "duality"));
    let mut t = Tally::new("duality", instances);
    for _ in 0..instances {
        let x = gen::space(&mut rng, 5, true);
        let imp = rng.gen_bool(0.5);
        let phi = gen::nonsingular_map(&mut rng, &x, 5, imp);
        let g = gen::function(&mut rng, phi.target(), SpaceTag::L0);
        let pi = induced_hom(&phi).expect("non-singular");
        let left = duality_bridge(&pullback(&phi, &g).unwrap());
        let right = duality_bridge(&g).and_then(|u| covariant_op(&pi, &u));
        t.check("bridge is natural for pullbacks", left.is_ok() && left == right, || format!("{phi:?} {g:?}"));
        let u = duality_bridge(&g).unwrap();
        t.check("bridge round trip", from_dual(phi.target(), &u, SpaceTag::L0).as_ref() == Ok(&g), || format!("{g:?}"));
        let tu = covariant_op(&pi, &u).unwrap();
        let thresholds = u.levels().iter().chain([int(-10), int(10)].iter()).all(|a| tu.threshold(a) == pi.apply(u.threshold(a)));
        t.check("thresholds are pushed forward", thresholds, || format!("{u:?}"));
        if phi.flags().is_imp {
            let (alg, _) = crate::quotient::quotient_measure_algebra(phi.target()).unwrap();
            let finite = alg.finite_part();
            let vals = u
                .atom_values()
                .iter()
                .enumerate()
                .map(|(k, v)| if finite.contains(k) { v.clone() } else { int(0) })
                .collect();
            let w = crate::duality::DualElement::new(u.algebra(), vals).unwrap();
            let tw = covariant_op_l2(&pi, &w);
            let ok = tw.as_ref().is_ok_and(|tw| {
                tw.norm2_squared(pi.target_measures().unwrap()) == w.norm2_squared(pi.source_measures().unwrap())
            });
            t.check("L2 form preserves norms", ok, || format!("{w:?}"));
        }

        let sizes: [usize; 3] = [0; 3].map(|_| rng.gen_range(1..=5));
        let [a, b, c] = sizes.map(BooleanAlgebra::new);
        let p = gen::boolean_hom(&mut rng, a, b);
        let q = gen::boolean_hom(&mut rng, b, c);
        let u = gen::dual_element(&mut rng, a);
        let qp = BooleanHom::compose(&q, &p).unwrap();
        let lhs = covariant_op(&qp, &u);
        let rhs = covariant_op(&p, &u).and_then(|pu| covariant_op(&q, &pu));
        t.check("covariant functoriality", lhs.is_ok() && lhs == rhs, || format!("{p:?} {q:?} {u:?}"));
        t.check("identity acts trivially", covariant_op(&BooleanHom::identity(a), &u).as_ref() == Ok(&u), String::new);
    }
    t.finish()
}

pub fn riesz_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "riesz"));
    let mut t = Tally::new("riesz", instances);
    for _ in 0..instances {
        let space = gen::space(&mut rng, 5, true);
        let [f, g, h] = [0; 3].map(|_| gen::function(&mut rng, &space, SpaceTag::L0));
        let (a, b) = (gen::small_rational(&mut rng), gen::small_rational(&mut rng));
        let zero = FnClass::zero(&space, SpaceTag::L0);
        let one = FnClass::one(&space);
        let d = || format!("{f:?} {g:?} {h:?}");
        let add = |x: &FnClass, y: &FnClass| x.add(y).unwrap();
        let mul = |x: &FnClass, y: &FnClass| x.mul(y).unwrap();
        let sup = |x: &FnClass, y: &FnClass| x.sup(y).unwrap();
        let inf = |x: &FnClass, y: &FnClass| x.inf(y).unwrap();
        let le = |x: &FnClass, y: &FnClass| x.le(y).unwrap();

        t.check("add: commutative", add(&f, &g) == add(&g, &f), d);
        t.check("add: associative", add(&add(&f, &g), &h) == add(&f, &add(&g, &h)), d);
        t.check("add: zero is neutral", add(&f, &zero) == f, d);
        t.check("add: inverse", add(&f, &f.neg()).is_zero(), d);
        t.check("scale: distributes over add", add(&f, &g).scale(&a) == add(&f.scale(&a), &g.scale(&a)), d);
        t.check("scale: distributes over scalars", f.scale(&(&a + &b)) == add(&f.scale(&a), &f.scale(&b)), d);
        t.check("scale: compatible", f.scale(&b).scale(&a) == f.scale(&(&a * &b)), d);
        t.check("scale: unit", f.scale(&int(1)) == f, d);

        t.check("lattice: sup commutative", sup(&f, &g) == sup(&g, &f), d);
        t.check("lattice: inf commutative", inf(&f, &g) == inf(&g, &f), d);
        t.check("lattice: sup associative", sup(&sup(&f, &g), &h) == sup(&f, &sup(&g, &h)), d);
        t.check("lattice: inf associative", inf(&inf(&f, &g), &h) == inf(&f, &inf(&g, &h)), d);
        t.check("lattice: absorption", sup(&f, &inf(&f, &g)) == f && inf(&f, &sup(&f, &g)) == f, d);
        t.check("lattice: distributive", inf(&f, &sup(&g, &h)) == sup(&inf(&f, &g), &inf(&f, &h)), d);
        t.check("riesz: f + g = (f sup g) + (f inf g)", add(&f, &g) == add(&sup(&f, &g), &inf(&f, &g)), d);
        t.check("riesz: translation invariance", add(&sup(&f, &g), &h) == sup(&add(&f, &h), &add(&g, &h)), d);
        let pos = a.abs();
        t.check("riesz: positive homogeneity", sup(&f, &g).scale(&pos) == sup(&f.scale(&pos), &g.scale(&pos)), d);
        t.check("riesz: modulus is f sup -f", f.abs() == sup(&f, &f.neg()), d);
        let (fp, fm) = (sup(&f, &zero), sup(&f.neg(), &zero));
        t.check("riesz: f = f+ - f-", fp.sub(&fm).unwrap() == f && add(&fp, &fm) == f.abs(), d);
        t.check("riesz: triangle inequality", le(&add(&f, &g).abs(), &add(&f.abs(), &g.abs())), d);

        t.check("order: reflexive", le(&f, &f), d);
        t.check("order: f <= g iff f sup g = g", le(&f, &g) == (sup(&f, &g) == g), d);
        t.check("order: f <= g iff f inf g = f", le(&f, &g) == (inf(&f, &g) == f), d);
        t.check("order: antisymmetric", !(le(&f, &g) && le(&g, &f)) || f == g, d);
        t.check("order: compatible with add", !le(&f, &g) || le(&add(&f, &h), &add(&g, &h)), d);
        t.check("order: bounds", le(&inf(&f, &g), &f) && le(&f, &sup(&f, &g)), d);

        t.check("mul: commutative", mul(&f, &g) == mul(&g, &f), d);
        t.check("mul: associative", mul(&mul(&f, &g), &h) == mul(&f, &mul(&g, &h)), d);
        t.check("mul: distributes over add", mul(&f, &add(&g, &h)) == add(&mul(&f, &g), &mul(&f, &h)), d);
        t.check("mul: unit", mul(&one, &f) == f, d);
        t.check("mul: positives multiply to positives", le(&zero, &mul(&f.abs(), &g.abs())), d);
        t.check("mul: modulus is multiplicative", mul(&f, &g).abs() == mul(&f.abs(), &g.abs()), d);
        t.check("mul: compatible with scale", mul(&f.scale(&a), &g) == mul(&f, &g).scale(&a), d);

        let [p, q] = [0; 2].map(|_| gen::function(&mut rng, &space, SpaceTag::L2));
        let r = gen::function(&mut rng, &space, SpaceTag::L2);
        let ip = |x: &FnClass, y: &FnClass| x.inner(y).unwrap();
        let d2 = || format!("{p:?} {q:?}");
        t.check("inner: symmetric", ip(&p, &q) == ip(&q, &p), d2);
        t.check("inner: bilinear", ip(&add(&p.scale(&a), &r), &q) == &a * ip(&p, &q) + ip(&r, &q), d2);
        t.check("inner: norm is inner with itself", p.norm2_squared() == ExtRational::from(ip(&p, &p)), d2);
        t.check("inner: positive", !ip(&p, &p).is_negative() && (ip(&p, &p).is_zero() == p.is_zero()), d2);
        let cs = {
            let pq = ip(&p, &q);
            &pq * &pq <= ip(&p, &p) * ip(&q, &q)
        };
        t.check("inner: Cauchy-Schwarz", cs, d2);
    }
    t.finish()
}
