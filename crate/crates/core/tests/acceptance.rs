//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use serde_json::Value as Json;

use sper_atlas::atlas::{charts_for, partition_check, theorem_check};
use sper_atlas::chart::{monomial_substitution, transform, verify_prop31, ChartSpec, Status};
use sper_atlas::lex::{ogm_equiv, scalewise_independent};
use sper_atlas::point::Value;
use sper_atlas::scalar::rat_int;
use sper_atlas::{example, HahnFraction, HahnPoly, LexVector, Point, Polynomial};

const SAMPLE_SIZE: usize = 504;
const SAMPLE_SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    let mut detail = detail;
    if !failures.is_empty() {
        detail.push_str(&format!("; {} failures, first: {}", failures.len(), failures[0]));
    }
    Outcome {
        ok: failures.is_empty(),
        detail,
    }
}

fn lv(xs: &[i64]) -> LexVector {
    LexVector::from_ints(xs)
}

fn monomial(xs: &[i64]) -> HahnFraction {
    HahnFraction::monomial(rat_int(1), lv(xs))
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    let d = example::delta();
    let c = d.classify();
    expect(c.p_count() == 3, "p = 3");
    let set = |xs: &[usize]| xs.iter().copied().collect::<std::collections::BTreeSet<_>>();
    expect(c.i == set(&[1]) && c.f == set(&[2]) && c.g == set(&[3]), "I={1}, F={2}, G={3}");
    expect(c.delta_kernel.cut_level == 3, "quotient keeps the first two axes");
    let coarse = d.coarse_coordinate_values();
    for v in &coarse[..3] {
        expect(v.is_zero(), "coarse value of x1..x3 is zero");
    }
    let quotient = |v: &Value| v.finite().map(|v| v.coords()[..2].to_vec());
    for v in &coarse[3..] {
        expect(
            *v == Value::Finite(lv(&[1, 0, 0, 0])) && quotient(v) == Some(lv(&[1, 0]).coords().to_vec()),
            "coarse value of x4, x5 is (1,0)",
        );
    }

    let star = transform(&d, &ChartSpec::new([3])).expect("chart");
    let one_plus = HahnFraction::from_poly(HahnPoly::one(4).add(&HahnPoly::monomial(rat_int(1), lv(&[0, 1, 0, 0]))));
    let published = [
        monomial(&[0, 0, 0, 1]),
        one_plus,
        monomial(&[0, 0, 1, 0]),
        monomial(&[1, 0, 0, 0]),
    ];
    for (j, img) in published.iter().enumerate() {
        expect(star.image(j + 1) == img, "y1..y4 match the published monomials");
    }
    expect(star.image(5) == &monomial(&[1, 0, -1, 0]), "y5 = t^(1,0,-1,0)");
    expect(example::published_y5_exponent() != lv(&[1, 0, -1, 0]), "erratum recorded");

    let star_tail: Vec<LexVector> = star.coordinate_values()[3..].iter().map(|v| v.finite().unwrap().clone()).collect();
    let coarse_tail: Vec<LexVector> = coarse[3..].iter().map(|v| v.finite().unwrap().clone()).collect();
    expect(!ogm_equiv(&star_tail, &coarse_tail).unwrap(), "tail equivalence fails");

    let prime = monomial_substitution(&d, &example::blowup()).expect("blowup");
    expect(prime.image(5) == &monomial(&[0, 0, -1, 0]), "image(x5') = z");

    // the same facts through the command-line entry point
    let out = Command::new(env!("CARGO_BIN_EXE_sper-atlas")).arg("example-paper").output().expect("run cli");
    expect(out.status.success(), "example-paper exits 0");
    let report: Json = serde_json::from_slice(&out.stdout).unwrap_or(Json::Null);
    expect(report["classification"]["I"] == serde_json::json!([1]), "cli I");
    expect(report["classification"]["F"] == serde_json::json!([2]), "cli F");
    expect(report["classification"]["G"] == serde_json::json!([3]), "cli G");
    expect(report["classification"]["p"] == 3, "cli p");
    expect(report["equiv_tail"]["equivalent"] == false, "cli equivalence false");
    expect(report["y5_erratum"]["derived"] == serde_json::json!(["1", "0", "-1", "0"]), "cli y5");
    expect(report["y5_erratum"]["note"].as_str().is_some_and(|s| !s.is_empty()), "cli erratum note");
    outcome(&failures, "worked example, chart {3}, blowup x5 -> x4'x5'".into())
}

fn tail_hypothesis(point: &Point) -> bool {
    let class = point.classify();
    let coarse = point.coarse_coordinate_values();
    let tail: Option<Vec<LexVector>> = class.p.iter().map(|&t| coarse[t - 1].finite().cloned()).collect();
    match tail {
        None => false,
        Some(t) => {
            let m = point.m();
            common::rank_q(&common::split_columns(&t, 0, m)) == t.len()
        }
    }
}

fn criterion_2(sample: &[Point]) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (mut runs, mut seven_checked, mut seven_skipped) = (0usize, 0usize, 0usize);
    for (k, p) in sample.iter().enumerate() {
        let hypothesis = tail_hypothesis(p);
        for chart in charts_for(p) {
            runs += 1;
            let report = match verify_prop31(p, &chart) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("point {k} chart {:?}: {e}", chart.t));
                    continue;
                }
            };
            for c in ["1", "2", "3", "4", "5", "6"] {
                if report.status(c) != Some(Status::Pass) {
                    failures.push(format!("point {k} chart {:?} clause {c}", chart.t));
                }
            }
            let seven = report.status("7");
            let expected = if hypothesis { Status::Pass } else { Status::Skipped };
            if seven != Some(expected) {
                failures.push(format!("point {k} chart {:?} clause 7 {:?}", chart.t, seven));
            }
            if hypothesis {
                seven_checked += 1;
            } else {
                seven_skipped += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let count = |f: &dyn Fn(&Point) -> bool| sample.iter().filter(|p| f(p)).count();
    let coverage = format!(
        "nonempty I {}, G {}, P {}, support {}",
        count(&|p| !p.classify().i.is_empty()),
        count(&|p| !p.classify().g.is_empty()),
        count(&|p| !p.classify().p.is_empty()),
        count(&|p| !p.support_coordinates().is_empty()),
    );
    if secs > 30.0 {
        failures.push(format!("runtime {secs:.1}s exceeds 30s"));
    }
    outcome(
        &failures,
        format!(
            "{} points ({coverage}), {runs} (point, chart) runs, clause 7 checked {seven_checked} / skipped {seven_skipped}, {secs:.1}s",
            sample.len()
        ),
    )
}

/// Anchors tried per point: its own coarse tuple, its own fine tail, and a random one.
fn anchors_for(point: &Point, k: usize) -> Vec<Vec<LexVector>> {
    let m = point.m();
    let class = point.classify();
    let units = class.unit_coordinates();
    let mut rng = common::rng(k as u64);
    let mut fill = |v: &Value| match v {
        Value::Finite(x) => x.clone(),
        Value::Infinity => common::random_vector(&mut rng, m, false, 0.3),
    };
    let coarse: Vec<LexVector> = point.coarse_coordinate_values().iter().map(&mut fill).collect();
    let fine: Vec<LexVector> = point
        .coordinate_values()
        .iter()
        .enumerate()
        .map(|(j, v)| if units.contains(&(j + 1)) { LexVector::zero(m) } else { fill(v) })
        .collect();
    let mut rng = common::rng(k as u64 ^ 0x5eed);
    let random: Vec<LexVector> = (1..=point.n())
        .map(|j| {
            if units.contains(&j) {
                LexVector::zero(m)
            } else {
                common::random_vector(&mut rng, m, false, 0.3)
            }
        })
        .collect();
    vec![coarse, fine, random]
}

fn criterion_3(sample: &[Point]) -> Outcome {
    let mut failures = Vec::new();
    let (mut runs, mut anchored_pass, mut anchored_skipped, mut scalewise_anchors) = (0usize, 0usize, 0usize, 0usize);
    for (k, p) in sample.iter().enumerate() {
        let anchors = anchors_for(p, k);
        let class = p.classify();
        for a in &anchors {
            let tail: Vec<LexVector> = class.p.iter().map(|&t| a[t - 1].clone()).collect();
            if scalewise_independent(&tail) {
                scalewise_anchors += 1;
            }
        }
        for chart in charts_for(p) {
            runs += 1;
            let star = transform(p, &chart).expect("valid chart");
            if !transform(&star, &chart).expect("inverse").point_equal(p) {
                failures.push(format!("point {k} chart {:?}: round trip", chart.t));
            }
            for a in anchors.iter().map(Some).chain([None]) {
                match theorem_check(p, &chart, a.map(Vec::as_slice)) {
                    Err(e) => failures.push(format!("point {k} chart {:?}: {e}", chart.t)),
                    Ok(r) => {
                        for c in &r.checks {
                            match c.status {
                                Status::Fail => failures.push(format!("point {k} chart {:?}: {} {}", chart.t, c.name, c.witness)),
                                Status::Pass if c.name == "anchored_transfer" => anchored_pass += 1,
                                Status::Skipped => anchored_skipped += 1,
                                Status::Pass => {}
                            }
                        }
                    }
                }
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{runs} (point, chart) runs, anchored transfer passed {anchored_pass} / gated {anchored_skipped}, {scalewise_anchors} scalewise anchor tails"
        ),
    )
}

fn criterion_4(sample: &[Point]) -> Outcome {
    let report = partition_check(sample);
    let mut failures = Vec::new();
    for p in &report.points {
        for c in &p.checks {
            if c.status != Status::Pass {
                failures.push(format!("point {} {}: {}", p.point_id, c.name, c.witness));
            }
        }
    }
    outcome(&failures, format!("{} points, partition and covering", report.points.len()))
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = common::rng(5);
    let (mut equivalent, mut scalewise) = (0, 0);
    for k in 0..200 {
        let (a, b) = common::random_tuple_pair(&mut rng);
        let fast = ogm_equiv(&a, &b).unwrap();
        if fast != common::brute_force_equiv(&a, &b) {
            failures.push(format!("equiv pair {k}: {a:?} {b:?}"));
        }
        equivalent += usize::from(fast);
    }
    for k in 0..200 {
        use rand::Rng;
        let len = rng.gen_range(1..=4);
        let rank = rng.gen_range(1..=4);
        let surds = rng.gen_bool(0.3);
        let t = common::random_tuple(&mut rng, len, rank, surds);
        let fast = scalewise_independent(&t);
        if fast != common::scalewise_oracle(&t) {
            failures.push(format!("scalewise tuple {k}: {t:?}"));
        }
        scalewise += usize::from(fast);
    }
    outcome(
        &failures,
        format!("200 pairs ({equivalent} equivalent), 200 tuples ({scalewise} scalewise independent)"),
    )
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = common::rng(6);
    let multipliers = [rat_int(1), rat_int(10), rat_int(1_000_000)];
    let mut strict = 0;
    for k in 0..1000 {
        let (f, g, signs) = common::random_series_pair(&mut rng);
        let (vf, vg) = (f.valuation().unwrap(), g.valuation().unwrap());
        let fg = f.mul(&g);
        if fg.valuation().unwrap() != &vf + &vg {
            failures.push(format!("pair {k}: valuation of product"));
        }
        let sum = f.add(&g);
        if !sum.is_zero() && sum.valuation().unwrap() < vf.clone().min(vg.clone()) {
            failures.push(format!("pair {k}: ultrametric"));
        }
        let s = |p: &HahnPoly| signs.series_sign(p).unwrap();
        if s(&fg) != s(&f) * s(&g) {
            failures.push(format!("pair {k}: sign of product"));
        }
        let (y, z) = (common::abs_series(&f, &signs), common::abs_series(&g, &signs));
        let (small, large) = match vf.cmp(&vg) {
            std::cmp::Ordering::Less => (z, y),
            std::cmp::Ordering::Greater => (y, z),
            std::cmp::Ordering::Equal => continue,
        };
        strict += 1;
        for n in &multipliers {
            if s(&large.sub(&small.scale(n))) != 1 {
                failures.push(format!("pair {k}: y > {n}z"));
            }
        }
    }

    // the converse fails: |x5| > N|x4| for every N although the coarse values agree
    let d = example::delta();
    let x4 = Polynomial::var(5, 4);
    let x5 = Polynomial::var(5, 5);
    for n in &multipliers {
        if d.poly_sign(&x5.sub(&x4.scale(n))).unwrap() != 1 {
            failures.push(format!("converse witness: x5 > {n}*x4"));
        }
    }
    if d.nu_delta(&x4).unwrap() != d.nu_delta(&x5).unwrap() {
        failures.push("converse witness: coarse values of x4 and x5 differ".into());
    }
    outcome(&failures, format!("1000 series pairs ({strict} with distinct values), converse witness x4, x5"))
}

type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let sample = common::sample(SAMPLE_SIZE, SAMPLE_SEED);
    let criteria: [Criterion; 6] = [
        ("1 example reproduction", Box::new(criterion_1)),
        ("2 chart valuation properties", Box::new(|| criterion_2(&sample))),
        ("3 membership transfer", Box::new(|| criterion_3(&sample))),
        ("4 partition and covering", Box::new(|| criterion_4(&sample))),
        ("5 oracle equivalence", Box::new(criterion_5)),
        ("6 field and valuation axioms", Box::new(criterion_6)),
    ];
    let mut all = true;
    for (name, run) in criteria.iter() {
        let start = Instant::now();
        let o = run();
        all &= o.ok;
        println!(
            "criterion {name}: {} ({}; {:.1}s)",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
