//! One line per acceptance criterion; the test fails if any line says FAIL.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use hypgrowth::constructions::*;
use hypgrowth::experiments::{growth_tight_experiment, surjection_sweep, theta_scan, xi_scan, ScanBounds};
use hypgrowth::{ball, cone_automaton, enumerate_balls, ActionConstants, Element, GeneratingSet, Group, Space};
use hypgrowth_cli::record::strip_runtime;

const TOL: f64 = 1e-9;
const MODELS: [&str; 2] = ["f2", "fp:2,3"];

fn model(name: &str) -> (Space, GeneratingSet) {
    let g = Group::new(name.parse().unwrap()).unwrap();
    let s = GeneratingSet::standard(&g);
    (Space::new(&g).unwrap(), s)
}

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn c1_free_group_balls() -> Verdict {
    let t0 = Instant::now();
    let (x, s) = model("f2");
    let t = enumerate_balls(x.group(), &s, 10, 1 << 20, 1);
    let elapsed = t0.elapsed();
    let exact = (0..=10u32).all(|n| t.balls[n as usize] == 2 * 3u64.pow(n) - 1);
    verdict(
        exact && elapsed < Duration::from_secs(5),
        format!("beta_10 = {}, {} ms", t.balls[10], elapsed.as_millis()),
    )
}

fn c2_cone_automata() -> Verdict {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, radius, expected) in [("f2", 4, 3.0), ("fp:2,3", 6, 2f64.sqrt())] {
        let (x, s) = model(name);
        let a = cone_automaton(x.group(), &s, radius, 1 << 16).unwrap();
        let rho = a.spectral_radius();
        let bfs = enumerate_balls(x.group(), &s, 12, 1 << 22, 1);
        let counts = a.path_counts(12) == bfs.spheres;
        ok &= (rho - expected).abs() < TOL && counts;
        detail.push(format!("{name}: rho = {rho:.12}, counts match = {counts}"));
    }
    verdict(ok, detail.join("; "))
}

/// Inverse-pair representatives of the non-trivial elements of length at most 3, shortlex.
fn pool_f2() -> (Space, Vec<Element>) {
    let (x, s) = model("f2");
    let g = x.group().clone();
    let mut pool: Vec<Element> = ball(&g, &s, 3, 1 << 12)
        .unwrap()
        .into_iter()
        .filter(|e| !e.is_identity() && g.shortlex_cmp(e, &g.inv(e)) != Ordering::Greater)
        .collect();
    pool.sort_by(|a, b| g.shortlex_cmp(a, b));
    (x, pool)
}

fn c3_large_displacement() -> Verdict {
    let (x, pool) = pool_f2();
    let g = x.group();
    let mut sets: Vec<Vec<Element>> = Vec::new();
    let n = pool.len();
    for i in 0..n {
        sets.push(vec![pool[i].clone()]);
        for j in i + 1..n {
            sets.push(vec![pool[i].clone(), pool[j].clone()]);
            for k in j + 1..n {
                sets.push(vec![pool[i].clone(), pool[j].clone(), pool[k].clone()]);
            }
        }
    }
    let stride = sets.len() / 200;
    let chosen: Vec<&Vec<Element>> = sets.iter().step_by(stride).take(200).collect();
    let check = |x: &Space, s: &GeneratingSet| -> bool {
        match large_displacement_element(x, s) {
            Ok(w) => {
                w.joint <= w.displacement
                    && w.displacement <= w.translation
                    && x.displacement(&w.element.element, &w.point) == w.displacement
                    && x.translation_length(&w.element.element) == w.translation
            }
            Err(_) => false,
        }
    };
    let failures = chosen
        .iter()
        .filter(|set| !check(&x, &GeneratingSet::new(g, set.iter().cloned()).unwrap()))
        .count();
    let (fx, fs) = model("fp:2,3");
    let fp_ok = check(&fx, &fs);
    verdict(
        failures == 0 && fp_ok && chosen.len() == 200,
        format!("{} F2 sets, {failures} failures; FP(2,3) std ok = {fp_ok}", chosen.len()),
    )
}

fn c4_free_pair_and_u() -> Verdict {
    let t0 = Instant::now();
    let c = ActionConstants::new(0, 1, 2).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for name in MODELS {
        let (x, s) = model(name);
        let ld = large_displacement_element(&x, &s).unwrap();
        let pair = build_free_pair(&x, &s, &ld.element, &ld.point, &c, 8).unwrap();
        let u = build_primitive_u(&x, &s, &pair, &c, &PrimitiveOptions::default()).unwrap();
        let power = ld.element.len() as u64;
        let length_ok = (u.report.spelled_length as u64) <= 844 * c.d * power;
        ok &= pair.report.passed && pair.report.depth == 8 && u.report.passed && u.report.translation >= 20 && length_ok;
        detail.push(format!(
            "{name}: {} words, lambda(u) = {}, |u|_S = {} <= {}",
            pair.report.words_checked,
            u.report.translation,
            u.report.spelled_length,
            844 * c.d * power
        ));
    }
    let elapsed = t0.elapsed();
    detail.push(format!("{} ms", elapsed.as_millis()));
    verdict(ok && elapsed < Duration::from_secs(60), detail.join("; "))
}

fn c5_separators() -> Verdict {
    let c = ActionConstants::trees();
    let mut ok = true;
    let mut detail = Vec::new();
    for name in MODELS {
        let (x, s) = model(name);
        let set = build_separators(&x, &s, &c, &SeparatorOptions::default()).unwrap();
        let r = set.report.as_ref().unwrap();
        let lambda_ok = r.translations.iter().all(|&l| l >= 100 * r.delta_n);
        let props = r.property_i.iter().chain(&r.property_ii).all(|c| c.passed);
        let iii = r.worst_excess <= 0 && r.property_iii_witness.is_none();
        ok &= set.passed() && props && iii && r.ball_radius == 3 && lambda_ok;
        detail.push(format!(
            "{name}: Delta = {}, lambda = {:?}, ball {} ({} pairs)",
            r.delta_n, r.translations, r.ball_size, r.pairs_checked
        ));
    }
    verdict(ok, detail.join("; "))
}

fn c6_phi() -> Verdict {
    let c = ActionConstants::trees();
    let mut ok = true;
    let mut detail = Vec::new();
    for name in MODELS {
        let (x, s) = model(name);
        let set = build_separators(&x, &s, &c, &SeparatorOptions::default()).unwrap();
        for (m, q) in [(2, 1), (2, 2), (3, 1)] {
            let r = phi_injectivity_check(&x, &s, &set, c.delta, c.d, m, q, 1 << 16).unwrap();
            ok &= r.passed && r.distinct_images == r.tuples && r.adequate.ratio_bound && r.adequate.adequate_bound;
            detail.push(format!("{name} ({m},{q}): {}/{}", r.distinct_images, r.tuples));
        }
    }
    verdict(ok, detail.join("; "))
}

fn c7_brackets() -> Verdict {
    let c = ActionConstants::trees();
    let a = 1.0 / (16880 * c.m_power * c.d.pow(3) + 2) as f64;
    let mut ok = (c.a() - a).abs() == 0.0;
    let mut rows = 0;
    let mut violations = Vec::new();
    let scans = [
        ("f2", "xi", ScanBounds { max_cardinality: 3, depth: 6, ..ScanBounds::default() }),
        ("fp:2,3", "xi", ScanBounds::default()),
        ("f2", "theta", ScanBounds { depth: 6, ..ScanBounds::default() }),
    ];
    for (name, kind, bounds) in scans {
        let (x, _) = model(name);
        let t = if kind == "xi" {
            xi_scan(&x, &bounds, &c, 4).unwrap()
        } else {
            theta_scan(&x, &bounds, false, &c, 4).unwrap()
        };
        for r in &t.rows {
            rows += 1;
            let s = GeneratingSet::parse(x.group(), &r.set.join(",")).unwrap().len() as f64;
            let fine = match &r.lower {
                Some(l) => {
                    let weak = a * s.powf(a);
                    weak <= l.bound
                        && l.bound <= r.estimate.point_estimate
                        && r.estimate.point_estimate <= r.estimate.certified_upper
                }
                None => false,
            };
            if !fine {
                violations.push(format!("{name} {kind} {:?}", r.set));
            }
        }
        ok &= t.dedup_sound && !t.partial;
    }
    ok &= violations.is_empty() && rows > 0;
    verdict(ok, format!("{rows} rows, {} violations {:?}", violations.len(), violations))
}

fn c8_surjections() -> Verdict {
    let r = surjection_sweep(50, 8, 0, 1 << 22, 4).unwrap();
    verdict(
        r.violations == 0 && r.cases.len() == 50 && r.cases.iter().all(|c| c.comparison.source.len() == 9),
        format!("{} pairs, {} violations", r.cases.len(), r.violations),
    )
}

fn c9_growth_tight() -> Verdict {
    let r = growth_tight_experiment(8, 1 << 23, 4).unwrap();
    let strict = r.first_strict.filter(|&(k, _)| k <= 8);
    let deficits: Vec<u64> = r.rows.iter().map(|x| x.source - x.image.min(x.source)).collect();
    verdict(
        strict.is_some() && r.doubling_bound_holds && !r.truncated,
        format!("first strict k = {:?}, deficits {:?}", strict.map(|s| s.0), deficits),
    )
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["hypgrowth"];
    full.extend_from_slice(args);
    let code = hypgrowth_cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn c10_determinism() -> Verdict {
    let runs: Vec<Vec<&str>> = vec![
        vec!["growth", "--model", "f2", "--gens", "a,b", "--depth", "10", "--automaton", "4"],
        vec!["growth", "--model", "fp:2,3", "--depth", "12", "--automaton", "6"],
        vec!["find-hyperbolic", "--model", "fp:2,3"],
        vec!["primitive-u", "--model", "f2"],
        vec!["primitive-u", "--model", "fp:2,3"],
        vec!["phi-check", "--model", "f2"],
        vec!["phi-check", "--model", "fp:2,3"],
        vec!["lower-bound", "--model", "fp:2,3"],
        vec!["xi-scan", "--model", "fp:2,3"],
        vec!["theta-scan", "--model", "f2", "--depth", "6"],
        vec!["sweep", "--cases", "50", "--depth", "8"],
        vec!["growth-tight", "--depth", "8"],
        vec!["audit", "--model", "f2"],
    ];
    let mut differing = Vec::new();
    let mut failed = Vec::new();
    for args in &runs {
        let mut lines = Vec::new();
        for shards in ["1", "8"] {
            let mut a = args.clone();
            a.extend_from_slice(&["--shards", shards]);
            let (code, out) = cli(&a);
            if code != 0 {
                failed.push(format!("{} (exit {code})", args.join(" ")));
            }
            lines.push(strip_runtime(out.trim()));
        }
        if lines[0].is_none() || lines[0] != lines[1] {
            differing.push(args.join(" "));
        }
    }
    verdict(
        differing.is_empty() && failed.is_empty(),
        format!("{} commands, differing {:?}, failing {:?}", runs.len(), differing, failed),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("exact growth oracle", c1_free_group_balls),
        ("cone automaton", c2_cone_automata),
        ("large displacement", c3_large_displacement),
        ("free pair and u", c4_free_pair_and_u),
        ("separators", c5_separators),
        ("phi injectivity", c6_phi),
        ("growth brackets", c7_brackets),
        ("surjection monotonicity", c8_surjections),
        ("growth tightness", c9_growth_tight),
        ("shard determinism", c10_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let v = f();
        let mark = if v.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark} {name}: {} [{} ms]", i + 1, v.detail, t0.elapsed().as_millis());
        if !v.ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
