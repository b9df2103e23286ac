use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;

use crate::measure::{FiniteMeasureSpace, MeasurableMap, SigmaAlgebra, Subset};
use crate::quotient::{check_hom_laws, induced_hom, quotient_measure_algebra, BooleanHom};
use crate::rational::ExtRational;

use super::gen::{self, Gen};
use super::{suite_seed, SuiteReport, Tally};

/// The σ-algebra generated by `generators`, by closing under complement and
/// pairwise union until nothing changes.
fn closure_by_fixed_point(n: usize, generators: &[Subset]) -> BTreeSet<Subset> {
    let full = Subset::full(n);
    let mut family: BTreeSet<Subset> = [Subset::EMPTY, full].into_iter().collect();
    family.extend(generators.iter().map(|g| g.intersection(full)));
    loop {
        let current: Vec<Subset> = family.iter().copied().collect();
        let before = family.len();
        for &a in &current {
            family.insert(a.complement(n));
            for &b in &current {
                family.insert(a.union(b));
            }
        }
        if family.len() == before {
            return family;
        }
    }
}

fn random_map(rng: &mut Gen, source: &Arc<FiniteMeasureSpace>, target: &Arc<FiniteMeasureSpace>) -> MeasurableMap {
    let labels: Vec<i64> =
        (0..source.len()).map(|_| target.carrier().label(rng.gen_range(0..target.len()))).collect();
    MeasurableMap::new(source.clone(), target.clone(), &labels).expect("total map")
}

pub fn measure_core_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "measure-core"));
    let mut t = Tally::new("measure-core", instances);
    for _ in 0..instances {
        let n = rng.gen_range(1..=6);
        let carrier = gen::carrier(&mut rng, n);
        let generators: Vec<Subset> = (0..rng.gen_range(0..=3)).map(|_| Subset(rng.gen::<u64>() & carrier.full().0)).collect();
        let sigma = SigmaAlgebra::generate(carrier.clone(), &generators);
        let oracle = closure_by_fixed_point(n, &generators);
        let members: BTreeSet<Subset> = sigma.members().into_iter().collect();
        t.check("sigma: generated = fixed-point closure", members == oracle, || format!("{generators:?}"));
        let listed: Vec<Subset> = oracle.iter().copied().collect();
        let rebuilt = SigmaAlgebra::from_members(carrier.clone(), &listed);
        t.check("sigma: explicit family accepted", rebuilt.as_ref() == Ok(&sigma), || format!("{listed:?}"));
        t.check("sigma: membership matches family", Subset::full(n).subsets().all(|s| sigma.contains(s) == oracle.contains(&s)), String::new);

        let weights: Vec<ExtRational> = (0..n).map(|_| gen::weight(&mut rng, true)).collect();
        let space = Arc::new(FiniteMeasureSpace::new(sigma.clone(), weights).expect("valid weights"));
        let mu = |s: Subset| space.measure(s).expect("measurable");
        t.check("measure: empty set is null", mu(Subset::EMPTY).is_zero(), String::new);
        let mut additive = true;
        for &a in &oracle {
            for &b in &oracle {
                if a.is_disjoint(b) && mu(a.union(b)) != mu(a) + mu(b) {
                    additive = false;
                }
            }
        }
        t.check("measure: finite additivity", additive, || format!("{space:?}"));

        let null_oracle: BTreeSet<Subset> = Subset::full(n)
            .subsets()
            .filter(|a| oracle.iter().any(|&m| a.is_subset_of(m) && mu(m).is_zero()))
            .collect();
        let nulls: BTreeSet<Subset> = space.null_ideal().members().into_iter().collect();
        t.check("null ideal: subsets of null measurable sets", nulls == null_oracle, || format!("{space:?}"));

        let atom_oracle: BTreeSet<Subset> = oracle
            .iter()
            .copied()
            .filter(|&a| {
                !mu(a).is_zero()
                    && oracle.iter().filter(|e| e.is_subset_of(a)).all(|&e| mu(e).is_zero() || mu(a.difference(e)).is_zero())
            })
            .collect();
        let atoms: BTreeSet<Subset> = space.atoms().into_iter().collect();
        t.check("atoms: match the definition", atoms == atom_oracle, || format!("{space:?}"));

        let values: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let level_sets_measurable =
            (0..3).all(|c| oracle.contains(&Subset::from_positions((0..n).filter(|&p| values[p] == c))));
        t.check("functions: measurable iff level sets are", space.is_measurable_fn(&values) == level_sets_measurable, || {
            format!("{values:?}")
        });

        let target = gen::space(&mut rng, 4, true);
        let phi = random_map(&mut rng, &space, &target);
        let target_members = target.sigma().members();
        let measurable = target_members.iter().all(|&f| oracle.contains(&phi.preimage(f)));
        let nonsingular = measurable
            && target_members
                .iter()
                .all(|&f| !target.measure(f).unwrap().is_zero() || mu(phi.preimage(f)).is_zero());
        let imp = nonsingular && target_members.iter().all(|&f| target.measure(f).unwrap() == mu(phi.preimage(f)));
        let flags = phi.flags();
        t.check("maps: flags match member-wise definitions", (flags.is_measurable, flags.is_nonsingular, flags.is_imp) == (measurable, nonsingular, imp), || {
            format!("{phi:?}")
        });

        let src = gen::space(&mut rng, 5, true);
        let imp1 = rng.gen_bool(0.5);
        let f = gen::nonsingular_map(&mut rng, &src, 4, imp1);
        let imp2 = rng.gen_bool(0.5);
        let g = gen::nonsingular_map(&mut rng, f.target(), 4, imp2);
        let gf = MeasurableMap::compose(&g, &f).expect("composable");
        t.check("maps: generated maps are non-singular", f.flags().is_nonsingular && g.flags().is_nonsingular, String::new);
        t.check("maps: non-singular maps compose", gf.flags().is_nonsingular, String::new);
        if f.flags().is_imp && g.flags().is_imp {
            t.check("maps: imp maps compose", gf.flags().is_imp, String::new);
        }
        let id = MeasurableMap::identity(src.clone());
        t.check("maps: identity is a unit", MeasurableMap::compose(&f, &id).as_ref() == Ok(&f), String::new);

        let a = gen::space(&mut rng, 4, true);
        let b = gen::space(&mut rng, 4, true);
        let (sum, inj) = FiniteMeasureSpace::direct_sum(&[a.clone(), b.clone()]).expect("small sum");
        let (na, nb) = (a.len(), b.len());
        let mut sum_ok = inj.iter().all(|m| m.flags().is_nonsingular);
        for s in Subset::full(na + nb).subsets() {
            let left = Subset(s.0 & Subset::full(na).0);
            let right = Subset(s.0 >> na);
            let oracle_measurable = a.sigma().contains(left) && b.sigma().contains(right);
            sum_ok &= sum.sigma().contains(s) == oracle_measurable;
            if oracle_measurable {
                sum_ok &= sum.measure(s).unwrap() == a.measure(left).unwrap() + b.measure(right).unwrap();
            }
        }
        t.check("direct sum: measurable and measured slice-wise", sum_ok, || format!("{a:?} + {b:?}"));
    }
    t.finish()
}

pub fn measure_algebra_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "measure-algebra"));
    let mut t = Tally::new("measure-algebra", instances);
    for _ in 0..instances {
        let space = gen::space(&mut rng, 6, true);
        let (alg, proj) = quotient_measure_algebra(&space).expect("nondegenerate");
        let b = alg.algebra();
        let members = space.sigma().members();
        let info: BTreeMap<Subset, (Subset, ExtRational)> = members
            .iter()
            .map(|&e| (e, (proj.project(e).expect("measurable"), space.measure(e).expect("measurable"))))
            .collect();
        let (mut sym, mut meet, mut kernel, mut passes, mut order) = (true, true, true, true, true);
        for (&e, (pe, me)) in &info {
            kernel &= pe.is_empty() == me.is_zero();
            passes &= alg.mu_bar(*pe) == *me;
            for (&f, (pf, _)) in &info {
                sym &= info[&e.symmetric_difference(f)].0 == b.add(*pe, *pf);
                meet &= info[&e.intersection(f)].0 == b.mul(*pe, *pf);
                order &= b.le(*pe, *pf) == info[&e.difference(f)].1.is_zero();
            }
        }
        let d = || format!("{space:?}");
        t.check("projection preserves symmetric difference", sym, d);
        t.check("projection preserves intersection", meet, d);
        t.check("projection preserves unit", proj.project(space.carrier().full()) == Ok(b.one()), d);
        t.check("kernel is the null ideal", kernel, d);
        t.check("measure passes to the quotient", passes, d);
        t.check("order: E <= F iff mu(E minus F) = 0", order, d);
        t.check("projection is surjective", b.elements().all(|a| proj.project(proj.representative(a)) == Ok(a)), d);
        let mut positive = true;
        let mut additive = true;
        for x in b.elements() {
            positive &= alg.mu_bar(x).is_zero() == (x == b.zero());
            for y in b.elements() {
                if b.meet(x, y) == b.zero() {
                    additive &= alg.mu_bar(b.join(x, y)) == alg.mu_bar(x) + alg.mu_bar(y);
                }
            }
        }
        t.check("quotient measure is strictly positive", positive, d);
        t.check("quotient measure is additive", additive, d);
        t.check("finite part is an ideal", b.elements().all(|x| !alg.in_finite_part(x) || alg.mu_bar(x).is_finite()), d);
        let report = check_hom_laws(&proj.as_hom());
        t.check("projection is a SOC Boolean homomorphism", report.passes() && report.surjective, || {
            format!("{:?}", report.failures)
        });
    }
    t.finish()
}

pub fn induced_hom_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "induced-hom"));
    let mut t = Tally::new("induced-hom", instances);
    for _ in 0..instances {
        let x = gen::space(&mut rng, 5, true);
        let imp_phi = rng.gen_bool(0.5);
        let phi = gen::nonsingular_map(&mut rng, &x, 5, imp_phi);
        let imp_psi = rng.gen_bool(0.5);
        let psi = gen::nonsingular_map(&mut rng, phi.target(), 5, imp_psi);
        let psi_phi = MeasurableMap::compose(&psi, &phi).expect("composable");
        let (Ok(pi_phi), Ok(pi_psi), Ok(pi_comp)) = (induced_hom(&phi), induced_hom(&psi), induced_hom(&psi_phi)) else {
            t.check("induced homs exist for non-singular maps", false, || format!("{phi:?} {psi:?}"));
            continue;
        };
        let chained = BooleanHom::compose(&pi_phi, &pi_psi).expect("composable homs");
        let d = || format!("{phi:?} then {psi:?}");
        t.check("induced hom of a composite is the reversed composite", pi_comp.same_action(&chained), d);
        let id = induced_hom(&MeasurableMap::identity(x.clone())).expect("identity is non-singular");
        t.check("identity induces the identity", id.same_action(&BooleanHom::identity(id.source())), d);
        for (map, hom) in [(&phi, &pi_phi), (&psi, &pi_psi), (&psi_phi, &pi_comp)] {
            t.check("induced hom is a SOC Boolean homomorphism", hom.flags().is_hom && hom.flags().is_soc, d);
            t.check("measure-preserving iff the map is imp", hom.flags().is_measure_preserving == Some(map.flags().is_imp), || {
                format!("{map:?}")
            });
        }
        t.check("composite flags agree with chained homs", chained.flags().is_measure_preserving == pi_comp.flags().is_measure_preserving, d);
        if phi.flags().is_imp && psi.flags().is_imp {
            t.check("imp maps compose to a measure-preserving hom", pi_comp.flags().is_measure_preserving == Some(true), d);
        }
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_one_set_has_four_members() {
        let c = closure_by_fixed_point(3, &[Subset::from_positions([0])]);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn suites_pass_on_a_few_instances() {
        for suite in [measure_core_suite, measure_algebra_suite, induced_hom_suite] {
            let r = suite(7, 20);
            assert!(r.passed(), "{r}");
        }
    }
}
