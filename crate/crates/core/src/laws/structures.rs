use std::sync::Arc;

use rand::Rng;

use crate::codec::{decode, encode, read_container, write_container, EncodeOptions, Policy, RawSignal};
use crate::function_space::SpaceTag;
use crate::measure::FiniteMeasureSpace;
use crate::partial::{compose, dagger, l2_partial, restriction};
use crate::rational::{int, Rational};
use crate::signal::{
    compose as compose_arrows, detect_affine, detect_amp_affine, detect_translation, fixed_breakpoints, rejoin,
    segment_signal, transfer, IndexMap, Segment, SegmentArrow, DEFAULT_STRIDES,
};

use super::gen::{self, Gen};
use super::{suite_seed, SuiteReport, Tally};

pub fn partial_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "partial"));
    let mut t = Tally::new("partial", instances);
    for _ in 0..instances {
        let [x, y, z, w] = [0; 4].map(|_| {
            let n = rng.gen_range(1..=5);
            gen::carrier(&mut rng, n)
        });
        let f = gen::partial_injection(&mut rng, &x, &y);
        let f2 = gen::partial_injection(&mut rng, &x, &z);
        let g = gen::partial_injection(&mut rng, &y, &z);
        let h = gen::partial_injection(&mut rng, &z, &w);
        let c = |b: &_, a: &_| compose(b, a).expect("composable");
        let d = || format!("{f:?} {g:?}");
        let gf = c(&g, &f);
        t.check("restriction: f . bar f = f", c(&f, &restriction(&f)) == f, d);
        t.check("restriction: bar f and bar g commute", c(&restriction(&f), &restriction(&f2)) == c(&restriction(&f2), &restriction(&f)), d);
        t.check("restriction: bar(g . bar f) = bar g . bar f", restriction(&c(&f2, &restriction(&f))) == c(&restriction(&f2), &restriction(&f)), d);
        t.check("restriction: bar g . f = f . bar(g . f)", c(&restriction(&g), &f) == c(&f, &restriction(&gf)), d);
        t.check("dagger: involution", dagger(&dagger(&f)) == f, d);
        t.check("dagger: reverses composition", dagger(&gf) == c(&dagger(&f), &dagger(&g)), d);
        t.check("dagger: f . f+ . f = f", c(&f, &c(&dagger(&f), &f)) == f, d);
        t.check("dagger: bar f = f+ . f", restriction(&f) == c(&dagger(&f), &f), d);
        t.check("composition: associative", c(&h, &gf) == c(&c(&h, &g), &f), d);

        let zspace = Arc::new(FiniteMeasureSpace::counting(z.clone()));
        let k = gen::function(&mut rng, &zspace, SpaceTag::L2);
        let pulled = l2_partial(&gf, &k).expect("counting measures");
        let chained = l2_partial(&g, &k).and_then(|gk| l2_partial(&f, &gk));
        t.check("l2: contravariant functoriality", chained.as_ref() == Ok(&pulled), d);
        t.check("l2: contraction", pulled.norm2_squared() <= k.norm2_squared(), d);
    }
    t.finish()
}

fn plus(a: &Segment, residual: &[Rational]) -> Vec<Rational> {
    a.samples().iter().zip(residual).map(|(x, d)| x + d).collect()
}

fn random_arrow(rng: &mut Gen, f: &Segment, strides: &[i64]) -> SegmentArrow {
    let map = gen::index_map(rng, strides);
    SegmentArrow::exact(f.interval(), map, gen::nonzero_rational(rng)).expect("nonzero scale")
}

fn observed(rng: &mut Gen, a: &SegmentArrow) -> Segment {
    let values: Vec<i64> = (0..a.target().len()).map(|_| rng.gen_range(-9..=9)).collect();
    Segment::from_ints(a.target().start, &values).unwrap()
}

pub fn signal_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "signal"));
    let mut t = Tally::new("signal", instances);
    for _ in 0..instances {
        let f = gen::segment(&mut rng, 6);
        let a = random_arrow(&mut rng, &f, &DEFAULT_STRIDES);
        let g = observed(&mut rng, &a);
        let fitted = SegmentArrow::fit(&f, &g, a.map(), a.scale().clone()).unwrap();
        let pred = transfer(&fitted, &f).unwrap();
        let d = || format!("{f:?} {a:?}");
        t.check("reconstruction: observed = transfer + residual", plus(&pred, fitted.residual()) == g.samples(), d);

        let exact_image = transfer(&a, &f).unwrap();
        let square = f.interval().indices().all(|i| {
            a.map().block(i).indices().all(|j| a.scale() * f.at(i) == *exact_image.at(j))
        });
        t.check("square commutes when the residual vanishes", square, d);

        let b = random_arrow(&mut rng, &exact_image, &DEFAULT_STRIDES);
        let ba = compose_arrows(&b, &a).unwrap();
        t.check("transfer is functorial", transfer(&ba, &f) == transfer(&b, &exact_image), d);
        let h = observed(&mut rng, &b);
        let fb = SegmentArrow::fit(&g, &h, b.map(), b.scale().clone()).unwrap();
        let chain = compose_arrows(&fb, &fitted).unwrap();
        t.check("composite residual reconstructs", plus(&transfer(&chain, &f).unwrap(), chain.residual()) == h.samples(), d);
        let c = random_arrow(&mut rng, &transfer(&b, &exact_image).unwrap(), &DEFAULT_STRIDES);
        let left = compose_arrows(&c, &compose_arrows(&b, &a).unwrap());
        let right = compose_arrows(&compose_arrows(&c, &b).unwrap(), &a);
        t.check("composition is associative", left == right, d);
        t.check("identity is a unit", compose_arrows(&a, &SegmentArrow::identity(f.interval())).as_ref() == Ok(&a), d);

        let shift = SegmentArrow::exact(f.interval(), IndexMap::translation(rng.gen_range(-30..=30)), int(1)).unwrap();
        let moved = transfer(&shift, &f).unwrap();
        let norm = |s: &Segment| s.samples().iter().map(|v| v * v).sum::<Rational>();
        t.check("translation preserves the norm", norm(&moved) == norm(&f), d);
        t.check("translation detection is exact-complete", detect_translation(&f, &moved, 0.0).is_some_and(|x| x.is_exact()), d);

        let planted = if rng.gen_bool(0.5) { exact_image.clone() } else { transfer(&SegmentArrow::exact(f.interval(), a.map(), int(1)).unwrap(), &f).unwrap() };
        let found = if a.scale() == &int(1) || planted != exact_image {
            detect_affine(&f, &planted, &DEFAULT_STRIDES, 0.0)
        } else {
            detect_amp_affine(&f, &planted, &DEFAULT_STRIDES, 0.0)
        };
        t.check("planted arrows are detected exactly", found.is_some_and(|x| x.is_exact()) || f.samples().iter().all(|v| v == &int(0)), d);

        let k = gen::nonzero_rational(&mut rng);
        let scale = |s: &Segment| Segment::new(s.start(), s.samples().iter().map(|v| v * &k).collect()).unwrap();
        let before = detect_affine(&f, &g, &DEFAULT_STRIDES, f64::INFINITY).map(|x| x.map());
        let after = detect_affine(&scale(&f), &scale(&g), &DEFAULT_STRIDES, f64::INFINITY).map(|x| x.map());
        t.check("affine selection is scale invariant", before == after, d);

        let signal = gen::segment(&mut rng, 12);
        let cuts = fixed_breakpoints(signal.interval(), rng.gen_range(1..=4));
        let parts = segment_signal(&signal, &cuts).unwrap();
        t.check("segmentation rejoins to the signal", rejoin(&parts).as_ref() == Ok(&signal), d);
    }
    t.finish()
}

fn random_line(rng: &mut Gen, max_len: usize) -> RawSignal {
    let n = rng.gen_range(1..=max_len);
    let spread = *[2i64, 10, 1000, 1 << 40].get(rng.gen_range(0..4)).unwrap();
    let mut v = Vec::with_capacity(n);
    let mut x = rng.gen_range(-spread..=spread);
    for _ in 0..n {
        if rng.gen_bool(0.5) {
            x = rng.gen_range(-spread..=spread);
        }
        v.push(x);
    }
    RawSignal::line(rng.gen_range(-100..=100), v).unwrap()
}

fn per_segment_norms(enc: &crate::codec::EncodedSignal) -> Vec<u128> {
    enc.records.iter().map(|r| r.delta.iter().map(|&d| (i128::from(d) * i128::from(d)) as u128).sum()).collect()
}

pub fn codec_suite(seed: u64, instances: usize) -> SuiteReport {
    let mut rng = gen::rng(suite_seed(seed, "codec"));
    let mut t = Tally::new("codec", instances);
    for _ in 0..instances {
        let x = random_line(&mut rng, 64);
        let segment_len = rng.gen_range(1..=5);
        let d = || format!("{x:?}");
        for policy in [Policy::Predecessor, Policy::Detected] {
            let opts = EncodeOptions { policy, segment_len, ..EncodeOptions::default() };
            let enc = encode(&x, &opts).unwrap();
            t.check("round trip", decode(&enc).as_ref() == Ok(&x), d);
            let bytes = write_container(&enc);
            let back = read_container(&bytes);
            t.check("container reads back", back.as_ref() == Ok(&enc), d);
            t.check("container rewrites identically", back.map(|e| write_container(&e)).as_ref() == Ok(&bytes), d);
        }
        let pred = encode(&x, &EncodeOptions { segment_len, ..EncodeOptions::default() }).unwrap();
        let det = encode(&x, &EncodeOptions { segment_len, ..EncodeOptions::detected() }).unwrap();
        let dominated = per_segment_norms(&det).iter().zip(per_segment_norms(&pred)).all(|(a, b)| *a <= b);
        t.check("detected residuals never exceed predecessor ones", dominated, d);

        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let pixels: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(0..4)).collect();
        let img = RawSignal::grid(rows, cols, pixels).unwrap();
        for opts in [EncodeOptions::default(), EncodeOptions::detected()] {
            let enc = encode(&img, &opts).unwrap();
            t.check("image round trip", decode(&enc).as_ref() == Ok(&img), || format!("{img:?}"));
            t.check("record count is segments minus one", enc.records.len() + 1 == if opts.policy == Policy::Predecessor { rows * cols } else { rows }, String::new);
        }
    }
    t.finish()
}
