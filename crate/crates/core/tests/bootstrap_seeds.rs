mod common;

use gen_core::acquisition::acquire_patterns;
use gen_core::annotation::default_wh_words;
use gen_core::similarity::EquivConfig;

#[test]
fn bootstrap_seed_set_loads_and_acquires() {
    let res = common::resources();
    let seeds = common::seeds("bootstrap/seeds.json", &[]);
    assert_eq!(seeds.len(), 8);
    let acq = acquire_patterns(&seeds, &EquivConfig::acquisition(), &res, &default_wh_words(), 0);
    let mut per_seed = std::collections::BTreeMap::new();
    for p in &acq.patterns {
        *per_seed.entry(p.seed_id.as_str()).or_insert(0) += 1;
        assert!(p.check_invariants(&res));
    }
    let expected = [("cooking", 1), ("john", 1), ("leonardo", 1), ("oswald", 1), ("paris", 1), ("science", 2)];
    assert_eq!(per_seed.into_iter().collect::<Vec<_>>(), expected);
    assert_eq!(acq.report.incomplete_alignments, vec!["porto".to_string()]);
    assert_eq!(acq.patterns.len(), 7);
}
