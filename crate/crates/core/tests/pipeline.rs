use cwf_core::cw::{build_term, verify_term};
use cwf_core::decompose::{build_partition, Configuration};
use cwf_core::generators::{gen_instance, Preset};
use cwf_core::is_in_class;

#[derive(Default, Debug)]
struct Coverage {
    triangle: usize,
    sparse: usize,
    split: usize,
    x2: usize,
    x6: usize,
    max_n: usize,
}

#[test]
fn presets_round_trip_through_the_pipeline() {
    let mut cov = Coverage::default();
    for seed in 1..=90u64 {
        let preset = Preset::ALL[seed as usize % Preset::ALL.len()];
        let params = preset.params(seed);
        let inst = gen_instance(&params).unwrap_or_else(|e| panic!("{preset} {seed}: {e}"));
        assert!(is_in_class(&inst.graph).is_in_class());
        let r = build_partition(&inst.graph).unwrap();
        let fails: Vec<String> = r.failures().map(|v| v.to_string()).collect();
        assert!(fails.is_empty(), "{preset} seed {seed}: {fails:?}");
        assert_eq!(
            r.partition.to_doc(),
            inst.intended.to_doc(),
            "{preset} seed {seed}"
        );
        let t = build_term(&inst.graph, &r.partition).unwrap();
        assert!(verify_term(&t, &inst.graph).unwrap().is_ok());
        assert!(t.width() <= 27);

        for c in &r.configurations {
            match c {
                Configuration::Triangle { .. } => cov.triangle += 1,
                Configuration::Sparse { .. } => cov.sparse += 1,
                Configuration::Invalid(e) => panic!("{preset} seed {seed}: {e:?}"),
            }
        }
        cov.split += r
            .x4_split
            .iter()
            .filter(|s| !s.zero.is_empty() && !s.one.is_empty())
            .count();
        cov.x2 += usize::from(!r.classes.x2.is_empty());
        cov.x6 += usize::from(!r.classes.x6.is_empty());
        cov.max_n = cov.max_n.max(inst.graph.n());
    }
    eprintln!("{cov:?}");
    assert!(cov.triangle >= 10 && cov.sparse >= 10 && cov.split >= 10);
    assert!(cov.x2 >= 10 && cov.x6 >= 10);
}
