use hypgrowth::experiments::*;
use hypgrowth::{ActionConstants, GeneratingSet, Group, Space};

fn space(model: &str) -> Space {
    Space::new(&Group::new(model.parse().unwrap()).unwrap()).unwrap()
}

#[test]
fn growth_tight_on_bs_free_product() {
    let r = growth_tight_experiment(8, 1 << 23, 4).unwrap();
    println!("{:?}", r.rows);
    assert!(!r.truncated);
    assert!(r.doubling_bound_holds, "{:?}", r.unresolved);
    let (k, deficit) = r.first_strict.unwrap();
    assert!(k <= 8 && deficit > 0);
    assert!(r.rows.iter().all(|row| row.image <= row.source));
}

#[test]
fn pipeline_passes_on_standard_models() {
    for model in ["f2", "fp:2,3"] {
        let x = space(model);
        let s = GeneratingSet::standard(x.group());
        let r = full_pipeline_audit(&x, &s, &ActionConstants::trees(), &PipelineOptions::default());
        assert!(r.passed, "{model}: {:?}", r.stages);
        assert_eq!(r.phi.len(), 3);
    }
}

#[test]
fn xi_scan_brackets_are_consistent() {
    for model in ["f2", "fp:2,3"] {
        let x = space(model);
        let t = xi_scan(&x, &ScanBounds::default(), &ActionConstants::trees(), 4).unwrap();
        println!("{model}: {} candidates, {} rows", t.candidates, t.rows.len());
        for r in &t.rows {
            println!("  {:?} {:?} {:?}", r.set, r.estimate.point_estimate, r.lower.as_ref().map(|l| l.bound));
        }
        assert!(t.dedup_sound && !t.partial);
        assert!(t.rows.iter().all(|r| r.consistent == Some(true)), "{model}");
    }
}
