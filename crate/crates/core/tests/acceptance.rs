//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints its own line; exits non-zero if any fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fsig_core::codec::{
    decode, encode, metrics, read_container, read_pgm, write_container, write_pgm, EncodeOptions, RawSignal,
};
use fsig_core::laws::{self, SuiteReport};
use fsig_core::rational::{int, rat, Rational};
use fsig_core::signal::{
    detect_affine, detect_amp_affine, detect_translation, prototype_demo, Segment, DEFAULT_STRIDES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_611;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn suites(reports: &[(SuiteReport, usize)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, want) in reports {
        ok &= r.passed() && r.instances >= *want;
        parts.push(format!("{} instances={} checked={} failed={}", r.suite, r.instances, r.checked(), r.failed()));
        if !r.passed() {
            eprint!("{r}");
        }
    }
    outcome(ok, parts.join("; "))
}

fn law_checked(r: &SuiteReport, law: &str) -> usize {
    r.law(law).map_or(0, |l| l.checked)
}

fn prototype() -> Outcome {
    let started = Instant::now();
    let demo = prototype_demo(&[1, 2, 3, 4, 5], 0).expect("demo");
    let enc = encode(&RawSignal::line(0, vec![1, 2, 3, 4, 5]).unwrap(), &EncodeOptions::default()).unwrap();
    let stream: Vec<i64> = enc.delta_stream().collect();
    let ok = demo.seed == int(1)
        && demo.deltas == vec![int(1); 4]
        && demo.second_deltas.len() == 3
        && demo.second_deltas_vanish()
        && enc.seed == vec![1]
        && stream == vec![1, 1, 1, 1]
        && demo.laws.groupoid_ok()
        && started.elapsed() < Duration::from_secs(1);
    let second: Vec<String> = demo.second_deltas.iter().map(ToString::to_string).collect();
    outcome(ok, format!("seed={} deltas={stream:?} second-level=[{}]", demo.seed, second.join(", ")))
}

fn measure_algebra() -> Outcome {
    let started = Instant::now();
    let r = laws::measure_algebra_suite(SEED, 200);
    let mut o = suites(&[(r, 200)]);
    o.ok &= started.elapsed() < Duration::from_secs(10);
    o
}

fn induced_hom() -> Outcome {
    let r = laws::induced_hom_suite(SEED, 100);
    let pairs = law_checked(&r, "induced hom of a composite is the reversed composite");
    let mut o = suites(&[(r, 100)]);
    o.ok &= pairs == 100;
    o
}

fn pullback() -> Outcome {
    let p = laws::pullback_suite(SEED, 500);
    let n = laws::l2_norm_suite(SEED, 200);
    let norms = law_checked(&n, "norm preservation");
    let mut o = suites(&[(p, 500), (n, 200)]);
    o.ok &= norms == 200;
    o
}

fn duality() -> Outcome {
    let r = laws::duality_suite(SEED, 100);
    let covariant = law_checked(&r, "covariant functoriality");
    let bridge = law_checked(&r, "bridge is natural for pullbacks");
    let mut o = suites(&[(r, 100)]);
    o.ok &= covariant == 100 && bridge == 100;
    o
}

fn riesz() -> Outcome {
    suites(&[(laws::riesz_suite(SEED, 500), 500)])
}

fn restriction() -> Outcome {
    suites(&[(laws::partial_suite(SEED, 200), 200)])
}

fn round_trip(x: &RawSignal, opts: &EncodeOptions) -> bool {
    let Ok(enc) = encode(x, opts) else { return false };
    let bytes = write_container(&enc);
    let Ok(back) = read_container(&bytes) else { return false };
    write_container(&back) == bytes && decode(&back).as_ref() == Ok(x)
}

fn random_line(rng: &mut ChaCha8Rng) -> RawSignal {
    let n = rng.gen_range(1..=4096);
    let v: Vec<i64> = match rng.gen_range(0..4) {
        0 => (0..n).map(|_| rng.gen_range(-1000..=1000)).collect(),
        1 => (0..n).map(|_| rng.gen_range(i64::MIN / 4..i64::MAX / 4)).collect(),
        2 => {
            let mut x = 0i64;
            (0..n)
                .map(|_| {
                    if rng.gen_bool(0.05) {
                        x = rng.gen_range(-50..=50);
                    }
                    x
                })
                .collect()
        }
        _ => {
            let period = rng.gen_range(1..=40);
            let motif: Vec<i64> = (0..period).map(|_| rng.gen_range(0..256)).collect();
            (0..n).map(|i| motif[i % period] * if (i / period) % 3 == 0 { 1 } else { 2 }).collect()
        }
    };
    RawSignal::line(rng.gen_range(-500..=500), v).unwrap()
}

fn random_image(rng: &mut ChaCha8Rng, rows: usize, cols: usize, maxval: i64) -> Vec<i64> {
    if rng.gen_bool(0.5) {
        return (0..rows * cols).map(|_| rng.gen_range(0..=maxval)).collect();
    }
    let mut px = vec![rng.gen_range(0..=maxval); rows * cols];
    for _ in 0..rng.gen_range(0..6) {
        let (r0, c0) = (rng.gen_range(0..rows), rng.gen_range(0..cols));
        let (r1, c1) = (rng.gen_range(r0..rows) + 1, rng.gen_range(c0..cols) + 1);
        let v = rng.gen_range(0..=maxval);
        for r in r0..r1 {
            px[r * cols + c0..r * cols + c1].fill(v);
        }
    }
    px
}

fn codec() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut failures = 0;
    let mut detected = 0;
    for k in 0..1000 {
        let x = random_line(&mut rng);
        let segment_len = rng.gen_range(1..=16);
        failures += usize::from(!round_trip(&x, &EncodeOptions { segment_len, ..EncodeOptions::default() }));
        if k % 4 == 0 {
            detected += 1;
            failures += usize::from(!round_trip(&x, &EncodeOptions { segment_len, lookback: 8, ..EncodeOptions::detected() }));
        }
    }
    let mut images = 0;
    for k in 0..50 {
        let (rows, cols) = if k < 2 { (256, 256) } else { (rng.gen_range(1..=256), rng.gen_range(1..=256)) };
        let maxval = if rng.gen_bool(0.8) { 255 } else { 65535 };
        let pixels = random_image(&mut rng, rows, cols, maxval);
        let bytes = write_pgm(rows, cols, &pixels, k % 3 != 0).expect("pgm");
        let img = read_pgm(&bytes).expect("pgm reads back").into_signal().unwrap();
        let opts = if k % 2 == 0 { EncodeOptions::default() } else { EncodeOptions { lookback: 4, ..EncodeOptions::detected() } };
        let ok = img.samples() == pixels.as_slice() && round_trip(&img, &opts);
        failures += usize::from(!ok);
        images += 1;
    }
    let elapsed = started.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(60),
        format!("signals=1000 (+{detected} detected) images={images} failures={failures} time={:.2}s", elapsed.as_secs_f64()),
    )
}

fn oracle_entropy(values: &[i64]) -> f64 {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    let n = values.len() as f64;
    let mut ps: Vec<f64> = counts.values().map(|&c| c as f64 / n).collect();
    ps.sort_by(f64::total_cmp);
    -ps.iter().map(|p| p * p.log2()).sum::<f64>()
}

const SIDE: usize = 128;

/// Background plus up to nine disjoint rectangles with distinct values.
fn iconic(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut px = vec![0i64; SIDE * SIDE];
    let mut placed: Vec<(usize, usize, usize, usize)> = Vec::new();
    let wanted = rng.gen_range(1..=9);
    for _ in 0..200 {
        if placed.len() == wanted {
            break;
        }
        let (h, w) = (rng.gen_range(8..=64), rng.gen_range(8..=64));
        let (r, c) = (rng.gen_range(0..=SIDE - h), rng.gen_range(0..=SIDE - w));
        if placed.iter().all(|&(r2, c2, h2, w2)| r + h <= r2 || r2 + h2 <= r || c + w <= c2 || c2 + w2 <= c) {
            placed.push((r, c, h, w));
        }
    }
    for (k, &(r, c, h, w)) in placed.iter().enumerate() {
        for row in r..r + h {
            px[row * SIDE + c..row * SIDE + c + w].fill(10 * (k as i64 + 1));
        }
    }
    px
}

fn boundary_pixels(px: &[i64]) -> usize {
    let at = |r: usize, c: usize| px[r * SIDE + c];
    let mut n = 0;
    for r in 0..SIDE {
        for c in 0..SIDE {
            let v = at(r, c);
            let differs = (r > 0 && at(r - 1, c) != v)
                || (r + 1 < SIDE && at(r + 1, c) != v)
                || (c > 0 && at(r, c - 1) != v)
                || (c + 1 < SIDE && at(r, c + 1) != v);
            n += usize::from(differs);
        }
    }
    n
}

fn sparsity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut failures = 0;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..20 {
        let px = iconic(&mut rng);
        let raw = RawSignal::grid(SIDE, SIDE, px.clone()).unwrap();
        let enc = encode(&raw, &EncodeOptions::default()).unwrap();
        let m = metrics(&raw, &enc).unwrap();
        let deltas: Vec<i64> = enc.delta_stream().collect();
        let nonzero = deltas.iter().filter(|&&d| d != 0).count();
        let bound = boundary_pixels(&px) as f64 / (SIDE * SIDE) as f64;
        let fraction = nonzero as f64 / deltas.len() as f64;
        let (h_raw, h_delta) = (oracle_entropy(&px), oracle_entropy(&deltas));
        worst_margin = worst_margin.min(bound - fraction);
        let agrees = m.nonzero_deltas == nonzero && (m.raw_entropy - h_raw).abs() < 1e-9 && (m.delta_entropy - h_delta).abs() < 1e-9;
        failures += usize::from(!(fraction <= bound && h_delta < h_raw && agrees));
    }
    let mut noise_gap = f64::INFINITY;
    for _ in 0..5 {
        let px: Vec<i64> = (0..SIDE * SIDE).map(|_| rng.gen_range(0..256)).collect();
        let raw = RawSignal::grid(SIDE, SIDE, px.clone()).unwrap();
        let deltas: Vec<i64> = encode(&raw, &EncodeOptions::default()).unwrap().delta_stream().collect();
        let gap = oracle_entropy(&deltas) - oracle_entropy(&px);
        noise_gap = noise_gap.min(gap);
        failures += usize::from(gap < -1.0);
    }
    outcome(
        failures == 0,
        format!("iconic=20 noise=5 failures={failures} min(bound-fraction)={worst_margin:.4} min(noise H_delta-H_raw)={noise_gap:.3}"),
    )
}

/// Independent transfer: each source sample fills its block, scaled.
fn oracle_transfer(f: &[Rational], start: i64, stride: i64, offset: i64, c: &Rational) -> (i64, Vec<Rational>) {
    let n = f.len() as i64;
    let k = stride.abs();
    let (lo, hi) = if stride > 0 { (stride * start + offset, stride * (start + n) + offset) } else { (stride * (start + n - 1) + offset + stride + 1, stride * start + offset + 1) };
    let mut out = vec![int(0); (hi - lo) as usize];
    for (i, v) in f.iter().enumerate() {
        let i = start + i as i64;
        let first = if stride > 0 { stride * i + offset } else { stride * i + offset + stride + 1 };
        for j in first..first + k {
            out[(j - lo) as usize] = c * v;
        }
    }
    (lo, out)
}

/// Exact arrows of the detector's family from `f` onto `g`, minimized by
/// (|S|, |T|, S). Every exact fit has zero residual, so that is the whole key.
fn oracle_best(f: &Segment, g: &Segment, strides: &[i64], with_scale: bool) -> Option<(i64, i64, Rational)> {
    let mut best: Option<(i64, i64, Rational)> = None;
    for &s in strides {
        let k = s.abs();
        if g.len() as i64 != k * f.len() as i64 {
            continue;
        }
        let n = f.len() as i64;
        // Offset that makes the image start at g's start.
        let t = if s > 0 { g.start() - s * f.start() } else { g.start() - (s * (f.start() + n - 1) + s + 1) };
        let (lo, image) = oracle_transfer(f.samples(), f.start(), s, t, &int(1));
        assert_eq!(lo, g.start());
        let c = if with_scale {
            let pp: Rational = image.iter().map(|v| v * v).sum();
            if pp == int(0) {
                continue;
            }
            image.iter().zip(g.samples()).map(|(p, q)| p * q).sum::<Rational>() / pp
        } else {
            int(1)
        };
        if c == int(0) || image.iter().zip(g.samples()).any(|(p, q)| &(&c * p) != q) {
            continue;
        }
        let key = (k, t.abs(), s);
        if best.as_ref().is_none_or(|(bs, bt, _)| key < (bs.abs(), bt.abs(), *bs)) {
            best = Some((s, t, c));
        }
    }
    best
}

fn detection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let (mut misses, mut planted_hits, mut ties) = (0, 0, 0);
    for k in 0..200 {
        let len = rng.gen_range(1..=8);
        let values: Vec<i64> = loop {
            let v: Vec<i64> = (0..len).map(|_| rng.gen_range(-9..=9)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let f = Segment::from_ints(rng.gen_range(-50..=50), &values).unwrap();
        let (stride, c) = match k % 3 {
            0 => (1, int(1)),
            1 => (DEFAULT_STRIDES[rng.gen_range(0..4)], int(1)),
            _ => {
                let c = loop {
                    let c = rat(rng.gen_range(-12..=12), rng.gen_range(1..=5));
                    if c != int(0) && c != int(1) {
                        break c;
                    }
                };
                (DEFAULT_STRIDES[rng.gen_range(0..4)], c)
            }
        };
        let offset = rng.gen_range(-200..=200);
        let (lo, image) = oracle_transfer(f.samples(), f.start(), stride, offset, &c);
        let g = Segment::new(lo, image).unwrap();
        let found = match (stride, c == int(1)) {
            (1, true) if k % 3 == 0 => detect_translation(&f, &g, 0.0),
            (_, true) => detect_affine(&f, &g, &DEFAULT_STRIDES, 0.0),
            _ => detect_amp_affine(&f, &g, &DEFAULT_STRIDES, 0.0),
        };
        let strides: &[i64] = if k % 3 == 0 { &[1] } else { &DEFAULT_STRIDES };
        let expected = oracle_best(&f, &g, strides, k % 3 == 2).expect("the planted arrow is exact");
        let planted = (stride, offset, c.clone());
        let got = found.as_ref().map(|a| (a.map().stride, a.map().offset, a.scale().clone()));
        if got.as_ref() == Some(&expected) && found.is_some_and(|a| a.is_exact()) {
            if expected == planted {
                planted_hits += 1;
            } else {
                ties += 1;
            }
        } else {
            misses += 1;
            eprintln!("miss: f={f:?} planted={planted:?} expected={expected:?} got={got:?}");
        }
    }
    outcome(misses == 0, format!("cases=200 planted={planted_hits} tie-broken={ties} misses={misses}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("prototype reproduction", prototype),
        ("measure-algebra construction", measure_algebra),
        ("induced-hom functoriality", induced_hom),
        ("pullback laws and L2 norms", pullback),
        ("duality bridge", duality),
        ("riesz, lattice and multiplicative identities", riesz),
        ("restriction and dagger", restriction),
        ("lossless codec", codec),
        ("sparsity on iconic images", sparsity),
        ("detection completeness", detection),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let o = run();
        all &= o.ok;
        println!(
            "acceptance {:>2} {:<46} {} ({:.3}s) {}",
            k + 1,
            name,
            if o.ok { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
